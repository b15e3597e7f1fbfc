use std::collections::BTreeMap;

use frobenius_core::geometry::Chart;
use frobenius_core::rational::{int, Rational};
use frobenius_core::sampling::{random_function, seeded, SampleShape};
use frobenius_core::series::{invert_coordinates, koszul};
use frobenius_core::{GradedSeries, Parity, Var};
use num_traits::Zero;
use proptest::prelude::*;

/// Plain commutative polynomials, coded without any sign machinery.
type Poly = BTreeMap<Vec<u32>, Rational>;

fn to_poly(s: &GradedSeries) -> Poly {
    s.terms()
        .map(|(m, c)| (m.exps().to_vec(), c.clone()))
        .collect()
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(e.clone()).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_diff(a: &Poly, i: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in a {
        if e[i] > 0 {
            let mut f = e.clone();
            f[i] -= 1;
            *out.entry(f).or_insert_with(Rational::zero) += c * int(e[i] as i64);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn super_chart() -> std::sync::Arc<Chart> {
    Chart::new(vec![
        Parity::Even,
        Parity::Even,
        Parity::Odd,
        Parity::Odd,
        Parity::Odd,
    ])
}

fn random_parity(seed: u64) -> Parity {
    Parity::from_bit((seed >> 7) as u32 & 1)
}

const SHAPE: SampleShape = SampleShape {
    max_degree: 3,
    max_terms: 4,
    coeff_bound: 4,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_supercommutative(seed in any::<u64>()) {
        let chart = super_chart();
        let mut rng = seeded(seed);
        let (pa, pb) = (random_parity(seed), random_parity(seed >> 1));
        let a = random_function(&chart, pa, SHAPE, &mut rng);
        let b = random_function(&chart, pb, SHAPE, &mut rng);
        prop_assert_eq!(&a * &b, (&b * &a).signed(koszul(pa, pb)));
    }

    #[test]
    fn product_is_associative(seed in any::<u64>()) {
        let chart = super_chart();
        let mut rng = seeded(seed);
        let f: Vec<GradedSeries> = (0..3)
            .map(|k| random_function(&chart, random_parity(seed >> k), SHAPE, &mut rng))
            .collect();
        prop_assert_eq!(&(&f[0] * &f[1]) * &f[2], &f[0] * &(&f[1] * &f[2]));
    }

    #[test]
    fn derivatives_obey_graded_leibniz(seed in any::<u64>(), var in 0usize..5) {
        let chart = super_chart();
        let mut rng = seeded(seed);
        let pa = random_parity(seed);
        let a = random_function(&chart, pa, SHAPE, &mut rng);
        let b = random_function(&chart, random_parity(seed >> 1), SHAPE, &mut rng);
        let v = chart.var(var);
        let lhs = (&a * &b).partial(v).unwrap();
        let rhs = &a.partial(v).unwrap() * &b
            + (&a * &b.partial(v).unwrap()).signed(koszul(chart.parity(var), pa));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pure_even_arithmetic_matches_ungraded_oracle(seed in any::<u64>(), var in 0usize..3) {
        let chart = Chart::even(3);
        let mut rng = seeded(seed);
        let a = random_function(&chart, Parity::Even, SHAPE, &mut rng);
        let b = random_function(&chart, Parity::Even, SHAPE, &mut rng);
        prop_assert_eq!(to_poly(&(&a * &b)), poly_mul(&to_poly(&a), &to_poly(&b)));
        prop_assert_eq!(to_poly(&(&a + &b)), poly_add(&to_poly(&a), &to_poly(&b)));
        prop_assert_eq!(to_poly(&a.partial(Var::Even(var)).unwrap()), poly_diff(&to_poly(&a), var));
    }

    #[test]
    fn inversion_then_substitution_is_identity(seed in any::<u64>(), cap in 2i32..5) {
        let chart = Chart::even(2);
        let mut rng = seeded(seed);
        let (x, y) = (chart.coordinate(0), chart.coordinate(1));
        // unipotent linear part keeps the map invertible
        let shear = int((seed % 5) as i64 - 2);
        let higher = SampleShape { max_degree: 3, max_terms: 3, coeff_bound: 3 };
        let mut bump = |s: GradedSeries| {
            let q = random_function(&chart, Parity::Even, higher, &mut rng);
            let q_high = GradedSeries::from_terms(2, 0, q.terms().filter(|(m, _)| m.degree() >= 2).map(|(m, c)| (m.clone(), c.clone())), None);
            (s + q_high).truncated(Some(cap))
        };
        let map = vec![bump(&x + &y.scale(&shear)), bump(y.clone())];
        let inv = invert_coordinates(&map).unwrap();
        for (k, f) in map.iter().enumerate() {
            let back = f.substitute(&inv).unwrap();
            prop_assert!(back.agrees_up_to(&chart.coordinate(k), Some(cap)));
            prop_assert_eq!(back.validity(), Some(cap));
        }
    }
}
