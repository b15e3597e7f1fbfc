//! Acceptance harness: one `[PASS]`/`[FAIL]` line per criterion, exit status
//! nonzero when any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use frobenius_cli::manifest::{serialize_manifold, Manifold};
use frobenius_core::catalog::{builtin, sheared_split, EntryKind, NAMES};
use frobenius_core::geometry::{
    bracket_identity_residual, circ_power, euler_residual, f_identity_residual,
    leibniz_form_residual, poisson_kernel_basis, power_bracket_residuals, virasoro_residual,
    wdvv_residual, Chart, FrobeniusData, MultiplicationTensor, VectorField,
};
use frobenius_core::rational::{int, ratio, Rational};
use frobenius_core::sampling::{
    random_box_point, random_field, random_function, random_parity, random_potential_eta,
    random_tensor, seeded, SampleShape,
};
use frobenius_core::semisimple::{
    covariant_derivative_field, flatness_gamma_criterion, frame_commutativity_residual,
    idempotent_frame, metric_transfer_residual, sqrt_fields, DiagonalFrame, Expr, FrameOptions,
    SharedFn,
};
use frobenius_core::series::koszul;
use frobenius_core::transforms::{
    euler_commutator_check, euler_spectrum_shift, legendre_transform, quantum_euler_fields,
    EulerFieldData, HodgeGradingData, LegendreOptions,
};
use frobenius_core::{GradedSeries, Parity};
use rand::Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quadruple(chart: &Arc<Chart>, rng: &mut impl Rng) -> Vec<VectorField> {
    (0..4)
        .map(|_| {
            let p = random_parity(chart, rng);
            random_field(chart, p, SampleShape::default(), rng)
        })
        .collect()
}

fn frobenius_entries() -> Vec<(String, FrobeniusData)> {
    NAMES
        .iter()
        .map(|n| builtin(n).unwrap())
        .filter(|e| e.kind == EntryKind::Frobenius)
        .map(|e| (e.name, e.data))
        .collect()
}

const TENSOR: SampleShape = SampleShape {
    max_degree: 1,
    max_terms: 2,
    coeff_bound: 2,
};

fn super_chart() -> Arc<Chart> {
    Chart::new(vec![Parity::Even, Parity::Odd, Parity::Even, Parity::Odd])
}

// Criterion 1: exact vanishing on every Frobenius entry; pure-even exact
// entries are also expanded by the ungraded oracle.
fn f_identity_on_catalog() -> Outcome {
    let entries = frobenius_entries();
    let super_entry = entries
        .iter()
        .find(|(_, d)| d.chart().odd_arity() == 2 && d.chart().even_arity() == 2);
    ensure(super_entry.is_some(), || {
        "no 2-even + 2-odd entry in the catalog".into()
    })?;
    let mut total = 0;
    let mut oracle_checked = 0;
    let mut odd_slots = 0;
    for (k, (name, data)) in entries.iter().enumerate() {
        let c = data.multiplication();
        let chart = data.chart();
        let mut rng = seeded(1000 + k as u64);
        let samples: Vec<Vec<VectorField>> = (0..100).map(|_| quadruple(chart, &mut rng)).collect();
        odd_slots += samples
            .iter()
            .flatten()
            .filter(|x| x.parity() == Parity::Odd)
            .count();
        let exact_even = chart.is_pure_even() && c.validity().is_none();
        let oc: Vec<oracles::Poly> = c.entries().iter().map(oracles::poly).collect();
        let bad: Vec<usize> = samples
            .par_iter()
            .enumerate()
            .filter_map(|(i, q)| {
                let r = f_identity_residual(&q[0], &q[1], &q[2], &q[3], c);
                let oracle_ok = !exact_even || {
                    let f: Vec<oracles::Field> = q.iter().map(oracles::field).collect();
                    oracles::field(&r) == oracles::nine_terms(&f[0], &f[1], &f[2], &f[3], &oc)
                };
                (!r.vanishes() || !oracle_ok).then_some(i)
            })
            .collect();
        ensure(bad.is_empty(), || {
            format!("{name}: sample {} nonzero or oracle mismatch", bad[0])
        })?;
        total += samples.len();
        if exact_even {
            oracle_checked += samples.len();
        }
    }
    ensure(odd_slots > 0, || "no odd fields sampled".into())?;
    Ok(format!(
        "{total} quadruples over {} entries vanish; {oracle_checked} matched the ungraded oracle; {odd_slots} odd slots",
        entries.len()
    ))
}

// Criterion 2: the bracket identity holds for non-associative tensors.
fn bracket_identity() -> Outcome {
    let chart = super_chart();
    let mut rng = seeded(2000);
    let mut instances = Vec::new();
    let mut draws = 0;
    while instances.len() < 100 {
        draws += 1;
        ensure(draws < 1000, || "too few non-associative tensors".into())?;
        let c = random_tensor(&chart, TENSOR, &mut rng);
        if wdvv_residual(&c).is_empty() {
            continue;
        }
        let q = quadruple(&chart, &mut rng);
        instances.push((c, q));
    }
    let bad = instances.par_iter().position_first(|(c, q)| {
        !bracket_identity_residual(&q[0], &q[1], &q[2], &q[3], c).is_zero()
    });
    ensure(bad.is_none(), || {
        format!("instance {} nonzero", bad.unwrap())
    })?;
    Ok(format!(
        "100 non-associative tensors ({draws} draws), residual identically zero"
    ))
}

// Criterion 3: both forms agree, including where they do not vanish.
fn nine_terms_equal_leibniz() -> Outcome {
    let mut inputs: Vec<(MultiplicationTensor, Vec<VectorField>)> = Vec::new();
    for (k, (_, data)) in frobenius_entries().iter().enumerate() {
        let mut rng = seeded(1000 + k as u64);
        for _ in 0..100 {
            inputs.push((
                data.multiplication().clone(),
                quadruple(data.chart(), &mut rng),
            ));
        }
    }
    let mut rng = seeded(3000);
    let chart = super_chart();
    for _ in 0..100 {
        let c = random_tensor(&chart, TENSOR, &mut rng);
        let q = quadruple(&chart, &mut rng);
        inputs.push((c, q));
    }
    let control = frobenius_core::catalog::wdvv_fail().data;
    let mut rng = seeded(3001);
    for _ in 0..50 {
        inputs.push((
            control.multiplication().clone(),
            quadruple(control.chart(), &mut rng),
        ));
    }
    let results: Vec<(bool, bool)> = inputs
        .par_iter()
        .map(|(c, q)| {
            let nine = f_identity_residual(&q[0], &q[1], &q[2], &q[3], c);
            let leib = leibniz_form_residual(&q[0], &q[1], &q[2], &q[3], c);
            ((nine.clone() - leib).is_zero(), !nine.is_zero())
        })
        .collect();
    let bad = results.iter().position(|(eq, _)| !eq);
    ensure(bad.is_none(), || format!("input {} differs", bad.unwrap()))?;
    let nonzero = results.iter().filter(|(_, nz)| *nz).count();
    ensure(nonzero > 0, || "no input with a nonzero residual".into())?;
    Ok(format!(
        "{} inputs agree exactly, {nonzero} of them with nonzero residual",
        results.len()
    ))
}

fn graded_slots(c: &MultiplicationTensor, seed: u64) -> Result<(), String> {
    let chart = c.chart().clone();
    let mut rng = seeded(seed);
    let q = quadruple(&chart, &mut rng);
    let pf = random_parity(&chart, &mut rng);
    let f = random_function(&chart, pf, SampleShape::default(), &mut rng);
    let base = f_identity_residual(&q[0], &q[1], &q[2], &q[3], c);
    let mut passed = Parity::Even;
    for slot in 0..4 {
        let mut args = q.clone();
        args[slot] = args[slot].mul_function(&f).map_err(|e| e.to_string())?;
        let lhs = f_identity_residual(&args[0], &args[1], &args[2], &args[3], c);
        let rhs = base
            .mul_function(&f)
            .map_err(|e| e.to_string())?
            .signed(koszul(pf, passed));
        ensure(lhs == rhs, || format!("seed {seed}, slot {slot}"))?;
        passed = passed + q[slot].parity();
    }
    Ok(())
}

// Criterion 4: module-linearity in each slot, with the Koszul sign of the
// function passing the earlier slots. Linearity in the first slot uses
// associativity, so a non-associative tensor must break it somewhere.
fn tensoriality() -> Outcome {
    let super_entry = builtin("super_2x2").unwrap();
    let even_entry = builtin("a2_quartic").unwrap();
    let cases: Vec<(&MultiplicationTensor, u64)> = (0..30)
        .map(|s| (super_entry.data.multiplication(), 4100 + s))
        .chain((0..30).map(|s| (even_entry.data.multiplication(), 4200 + s)))
        .collect();
    let errs: Vec<String> = cases
        .par_iter()
        .filter_map(|(c, s)| graded_slots(c, *s).err())
        .collect();
    ensure(errs.is_empty(), || errs[0].clone())?;
    let mut rng = seeded(4000);
    let random = random_tensor(&super_chart(), TENSOR, &mut rng);
    ensure(!wdvv_residual(&random).is_empty(), || {
        "control tensor is associative".into()
    })?;
    let broken = (0..30)
        .filter(|s| graded_slots(&random, 4300 + s).is_err())
        .count();
    ensure(broken > 0, || {
        "non-associative control never breaks linearity".into()
    })?;
    Ok(format!(
        "{} draws x 4 slots on super_2x2 and a2_quartic; non-associative control breaks {broken} of 30",
        cases.len()
    ))
}

// Criterion 5: Witt relations for Euler powers and the power-bracket family.
fn witt_relations() -> Outcome {
    let cubic = builtin("dim1_cubic").unwrap().data;
    let c = cubic.multiplication();
    let e = cubic.identity().map_err(|x| x.to_string())?;
    let eu = cubic.euler().ok_or("dim1_cubic lacks an Euler field")?;
    let chart = cubic.chart().clone();
    // Oracle: E = x∂ and ∂∘∂ = ∂, so E^{∘n} = xⁿ∂ and the bracket is closed form.
    let x = chart.coordinate(0);
    let monomial = |k: u32| -> GradedSeries { (0..k).fold(chart.one(), |acc, _| &acc * &x) };
    for n in 0..=6u32 {
        for m in 0..=6u32 {
            let pn = circ_power(&eu.field, n, c, Some(&e)).map_err(|x| x.to_string())?;
            ensure(pn.component(0) == &monomial(n), || {
                format!("E^{n} is not x^{n}")
            })?;
            let pm = circ_power(&eu.field, m, c, Some(&e)).map_err(|x| x.to_string())?;
            let lhs = pn.bracket(&pm);
            let rhs = if n + m == 0 {
                chart.zero()
            } else {
                monomial(n + m - 1).scale(&int(m as i64 - n as i64))
            };
            ensure(lhs.component(0) == &rhs, || {
                format!("closed form fails at ({n}, {m})")
            })?;
            let r = virasoro_residual(&eu.field, &eu.d0, n, m, c, &e).map_err(|x| x.to_string())?;
            ensure(r.is_zero(), || {
                format!("dim1_cubic residual nonzero at ({n}, {m})")
            })?;
        }
    }
    let a2 = builtin("a2_poly").unwrap().data;
    let c2 = a2.multiplication();
    let e2 = a2.identity().map_err(|x| x.to_string())?;
    let eu2 = a2.euler().ok_or("a2_poly lacks an Euler field")?;
    let pairs: Vec<(u32, u32)> = (0..=4).flat_map(|n| (0..=4).map(move |m| (n, m))).collect();
    let bad = pairs.par_iter().find_first(|&&(n, m)| {
        let witt = virasoro_residual(&eu2.field, &eu2.d0, n, m, c2, &e2).map(|r| r.is_zero());
        let power = power_bracket_residuals(&eu2.field, n, m, c2, &e2)
            .map(|p| p.single.is_zero() && p.pair.is_zero());
        !(witt == Ok(true) && power == Ok(true))
    });
    ensure(bad.is_none(), || {
        format!("a2_poly fails at {:?}", bad.unwrap())
    })?;
    let mut rng = seeded(5000);
    let fields: Vec<VectorField> = (0..20)
        .map(|_| random_field(a2.chart(), Parity::Even, SampleShape::default(), &mut rng))
        .collect();
    let bad = fields.par_iter().enumerate().find_first(|(k, x)| {
        let n = 1 + (*k as u32) % 4;
        !power_bracket_residuals(x, n, 1, c2, &e2).is_ok_and(|p| p.unit.is_zero())
    });
    ensure(bad.is_none(), || {
        format!("unit relation fails on random field {}", bad.unwrap().0)
    })?;
    Ok(
        "dim1_cubic 49 pairs match the closed form; a2_poly 25 pairs exact; 20 random fields exact"
            .into(),
    )
}

// Criterion 6: kernel dimensions.
fn kernel_dimensions() -> Outcome {
    let mut found = Vec::new();
    for (name, want) in [("split_2", 2), ("split_3", 3), ("dim1_cubic", 1)] {
        let data = builtin(name).unwrap().data;
        let k = poisson_kernel_basis(data.multiplication(), 3).map_err(|e| e.to_string())?;
        ensure(k.dimension() == want, || {
            format!("{name}: dimension {} != {want}", k.dimension())
        })?;
        ensure(k.closed_under_product && k.closed_under_bracket, || {
            format!("{name}: not closed")
        })?;
        found.push(format!("{name}={}", k.dimension()));
    }
    Ok(found.join(", "))
}

fn parse(texts: &[String]) -> Vec<SharedFn> {
    texts
        .iter()
        .map(|t| Arc::new(Expr::parse(t).unwrap()) as SharedFn)
        .collect()
}

fn values(fs: &[SharedFn]) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
    move |u| fs.iter().map(|f| f.value(u)).collect()
}

// Criterion 7: square-root fields, verdict agreement, covariant derivative.
fn diagonal_metrics() -> Outcome {
    let fields = sqrt_fields(&[1.0, 1.0], &[4.0, 9.0]).map_err(|e| e.to_string())?;
    ensure(fields.len() == 4, || format!("{} fields", fields.len()))?;
    let mut ds: Vec<Vec<f64>> = fields.iter().map(|f| f.d.clone()).collect();
    ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let want = vec![
        vec![-2.0, -3.0],
        vec![-2.0, 3.0],
        vec![2.0, -3.0],
        vec![2.0, 3.0],
    ];
    ensure(ds == want, || format!("fields {ds:?}"))?;
    let transfer = fields
        .iter()
        .map(|f| metric_transfer_residual(&[1.0, 1.0], &[4.0, 9.0], &f.d))
        .fold(0.0, f64::max);
    ensure(transfer < 1e-12, || {
        format!("transfer residual {transfer:e}")
    })?;

    let mut rng = seeded(7000);
    let mut seen = [0usize; 2];
    for k in 0..20 {
        let n = 2 + k % 2;
        let eta_t = random_potential_eta(n, true, &mut rng);
        let tilde_t: Vec<String> = if k % 3 == 0 {
            let lambda: f64 = rng.random_range(0.5..3.0);
            eta_t
                .iter()
                .map(|t| format!("{}*({t})", lambda * lambda))
                .collect()
        } else {
            random_potential_eta(n, true, &mut rng)
        };
        let frame = DiagonalFrame::new(parse(&eta_t))
            .with_tilde(parse(&tilde_t))
            .map_err(|e| e.to_string())?;
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let points: Vec<Vec<f64>> = (0..4).map(|_| random_box_point(n, &mut rng)).collect();
        let v = flatness_gamma_criterion(&frame, &vec![sign; n], &points, 1e-9)
            .map_err(|e| e.to_string())?;
        ensure(v.agree(), || format!("instance {k}: {v:?}"))?;
        seen[usize::from(v.flat)] += 1;
    }
    ensure(seen[0] > 0 && seen[1] > 0, || {
        format!("verdicts not mixed: {seen:?}")
    })?;

    let mut worst: f64 = 0.0;
    for draw in 0..20 {
        let n = 2 + draw % 2;
        let eta = parse(&random_potential_eta(n, false, &mut rng));
        let d_texts: Vec<String> = (0..n)
            .map(|_| {
                let c: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
                format!("{} + {}*u1 + {}*u{}^2", c[0], c[1], c[2], n)
            })
            .collect();
        let d = parse(&d_texts);
        let frame = DiagonalFrame::new(eta.clone());
        let u = random_box_point(n, &mut rng);
        for i in 0..n {
            let got = covariant_derivative_field(&d, &frame, i, &u).map_err(|e| e.to_string())?;
            let want = oracles::christoffel_covariant(&values(&eta), &values(&d), i, &u, 1e-5);
            worst = worst.max(oracles::max_abs_diff(&got, &want));
        }
    }
    ensure(worst < 1e-6, || format!("Christoffel oracle gap {worst:e}"))?;
    Ok(format!(
        "4 fields (+-2, +-3); verdicts agree on 20 instances ({} flat, {} not); oracle gap {worst:.1e}",
        seen[1], seen[0]
    ))
}

fn tame_points(c: &MultiplicationTensor, seed: u64, count: usize) -> Result<Vec<Vec<f64>>, String> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        ensure(tries < 1000, || "too few tame points".into())?;
        let p: Vec<f64> = (0..c.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let Ok(frame) = idempotent_frame(c, &p, FrameOptions::default()) else {
            continue;
        };
        let gap = frame
            .eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if gap > 1e-2 {
            out.push(p);
        }
    }
    Ok(out)
}

// Criterion 8: commuting idempotents, and the sheared negative control.
fn commuting_idempotents() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in ["a2_poly", "a2_quartic", "a3_poly"] {
        let data = builtin(name).unwrap().data;
        let c = data.multiplication();
        for p in tame_points(c, 8000, 10)? {
            let r = frame_commutativity_residual(c, &p, 1e-5, FrameOptions::default())
                .map_err(|e| e.to_string())?;
            ensure(r < 1e-6, || format!("{name} at {p:?}: {r:e}"))?;
            worst = worst.max(r);
        }
    }
    let control = sheared_split(int(1));
    let mut least = f64::INFINITY;
    for p in tame_points(&control, 8001, 10)? {
        let r = frame_commutativity_residual(&control, &p, 1e-5, FrameOptions::default())
            .map_err(|e| e.to_string())?;
        least = least.min(r);
    }
    ensure(least > 1e-3, || {
        format!("negative control only reaches {least:e}")
    })?;
    Ok(format!(
        "30 tame points, worst {worst:.1e}; negative control at least {least:.2e}"
    ))
}

fn without_affine(s: &GradedSeries) -> GradedSeries {
    let terms = s
        .terms()
        .filter(|(m, _)| m.degree() > 1)
        .map(|(m, c)| (m.clone(), c.clone()));
    GradedSeries::from_terms(s.even_arity(), s.odd_arity(), terms, s.validity())
}

// Criterion 9: the Legendre transform on a2_legendre, with a
// finite-difference Hessian oracle.
fn legendre_checks() -> Outcome {
    let entry = builtin("a2_legendre").unwrap();
    let data = &entry.data;
    let chart = data.chart().clone();
    let d2 = VectorField::coordinate(chart.clone(), 1);
    let cap = 8;
    let t = legendre_transform(data, &d2, LegendreOptions { cap: Some(cap) })
        .map_err(|e| e.to_string())?;
    ensure(t.certified_degree == Some(cap - 2), || {
        format!("certified {:?}", t.certified_degree)
    })?;
    ensure(t.checks.hessian, || "Hessian identity fails".into())?;
    ensure(t.checks.integrability, || {
        "integrability symmetry fails".into()
    })?;
    ensure(t.checks.pushforward, || "pushforward mismatch".into())?;
    ensure(t.checks.identity_flat, || "new identity not flat".into())?;

    let fine = legendre_transform(data, &d2, LegendreOptions { cap: Some(10) })
        .map_err(|e| e.to_string())?;
    let phi = data.potential().unwrap();
    let phi_new = fine.data.potential().unwrap();
    let mut gap: f64 = 0.0;
    for x in [[0.02, -0.03], [0.05, 0.04], [-0.04, 0.01]] {
        let y: Vec<f64> = fine
            .coordinates
            .map
            .iter()
            .map(|s| s.evaluate_f64(&x).unwrap().value)
            .collect();
        let h = 1e-3;
        for a in 0..2 {
            for b in 0..2 {
                let at = |sa: f64, sb: f64| {
                    let mut q = y.clone();
                    q[a] += sa;
                    q[b] += sb;
                    phi_new.evaluate_f64(&q).unwrap().value
                };
                let fd = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
                let exact = chart
                    .partial(a, &chart.partial(b, phi))
                    .evaluate_f64(&x)
                    .unwrap()
                    .value;
                gap = gap.max((fd - exact).abs());
            }
        }
    }
    ensure(gap < 1e-5, || {
        format!("finite-difference Hessian gap {gap:e}")
    })?;

    for name in ["a2_legendre", "a2_poly", "a3_poly"] {
        let d = builtin(name).unwrap().data;
        let e = d.identity().map_err(|x| x.to_string())?;
        let t =
            legendre_transform(&d, &e, LegendreOptions::default()).map_err(|x| x.to_string())?;
        ensure(t.certified_degree.is_none(), || {
            format!("{name}: identity transform not exact")
        })?;
        for (a, s) in t.coordinates.map.iter().enumerate() {
            ensure(s == &d.chart().coordinate(a), || {
                format!("{name}: coordinate {a} moved")
            })?;
        }
        let diff =
            without_affine(d.potential().unwrap()) - without_affine(t.data.potential().unwrap());
        ensure(diff.is_zero(), || format!("{name}: potential changed"))?;
    }
    Ok(format!("cap {cap} certifies degree {}; FD Hessian gap {gap:.1e}; e gives the identity on 3 entries", cap - 2))
}

// Criterion 10: Euler commutators and the conformal shift.
fn euler_checks() -> Outcome {
    let mut pairs = 0;
    let mut check =
        |name: &str, data: &FrobeniusData, fields: &[VectorField]| -> Result<(), String> {
            let c = data.multiplication();
            let e = data.identity().ok();
            for (i, x) in fields.iter().enumerate() {
                for y in &fields[i..] {
                    let r =
                        euler_commutator_check(x, y, c, e.as_ref()).map_err(|x| x.to_string())?;
                    ensure(r.vanishes(), || {
                        format!("{name}: commutator pair {i} not Euler of weight 0")
                    })?;
                    pairs += 1;
                }
            }
            Ok(())
        };
    for name in NAMES {
        let entry = builtin(name).unwrap();
        if entry.kind == EntryKind::NegativeControl {
            continue;
        }
        let data = &entry.data;
        let mut fields = Vec::new();
        if let Ok(e) = data.identity() {
            fields.push(e);
        }
        if let Some(eu) = data.euler() {
            fields.push(eu.field.clone());
        }
        check(name, data, &fields)?;
    }
    // P2 quantum Euler fields, kept only when they verify as Euler.
    let p2 = builtin("p2_quantum_trunc").unwrap().data;
    let h = HodgeGradingData::new(vec![(0, 0), (1, 1), (2, 2)], vec![int(0), int(3), int(0)])
        .map_err(|e| e.to_string())?;
    let (q1, q2) = quantum_euler_fields(&h);
    let e = p2.identity().map_err(|x| x.to_string())?;
    let verified: Vec<VectorField> = [q1, q2]
        .into_iter()
        .filter(|q| {
            euler_residual(q, &int(1), p2.multiplication(), Some(&e)).is_ok_and(|r| r.vanishes())
        })
        .chain([e.clone()])
        .collect();
    ensure(verified.len() == 3, || {
        "P2 quantum Euler fields do not verify".into()
    })?;
    check("p2_quantum_trunc", &p2, &verified)?;

    let entry = builtin("a2_legendre").unwrap();
    let data = &entry.data;
    let eu = data.euler().ok_or("a2_legendre lacks an Euler field")?;
    let ev =
        EulerFieldData::verify(data, eu.field.clone(), eu.d0.clone()).map_err(|e| e.to_string())?;
    let d2 = VectorField::coordinate(data.chart().clone(), 1);
    let s = euler_spectrum_shift(data, &ev, &d2, None, LegendreOptions { cap: Some(8) })
        .map_err(|e| e.to_string())?;
    let d_big = ev.conformal.clone().ok_or("no conformal weight")?;
    let expected: Rational = &d_big + &(int(2) * &eu.d0) - int(2) * &s.d;
    ensure(s.d == ratio(2, 3), || format!("d = {}", s.d))?;
    ensure(s.claimed.conformal.as_ref() == Some(&expected), || {
        "claimed weight is not D + 2d0 - 2d".into()
    })?;
    ensure(s.measured_conformal.as_ref() == Some(&expected), || {
        format!("measured {:?}", s.measured_conformal)
    })?;
    ensure(s.verified(), || "spectrum shift not verified".into())?;
    Ok(format!(
        "{pairs} Euler pairs commute to weight 0; shifted weight {expected} claimed and measured"
    ))
}

fn fixture(dir: &str, name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", dir, name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn frobcheck(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_frobcheck"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code(), String::from_utf8(out.stdout).unwrap())
}

// Criterion 11: golden bytes, exit codes, metric-less behaviour.
fn cli_contract() -> Outcome {
    let dim1 = fixture("data", "dim1_cubic.json");
    let ctrl = fixture("data", "wdvv_fail.json");
    let a2 = fixture("data", "a2_poly.json");
    let goldens: [(Vec<&str>, &str, i32); 3] = [
        (
            vec!["check", &dim1, "--suite", "virasoro", "--nmax", "6"],
            "dim1_cubic_virasoro.jsonl",
            0,
        ),
        (
            vec![
                "check",
                &ctrl,
                "--suite",
                "fidentity",
                "--samples",
                "10",
                "--seed",
                "7",
            ],
            "wdvv_fail_fidentity.jsonl",
            1,
        ),
        (vec!["check", &a2], "a2_poly_all.jsonl", 0),
    ];
    for (args, golden, code) in &goldens {
        let want = std::fs::read_to_string(fixture("golden", golden)).map_err(|e| e.to_string())?;
        for run in 0..2 {
            let (got, out) = frobcheck(args);
            ensure(got == Some(*code), || {
                format!("{golden}: exit {got:?} on run {run}")
            })?;
            ensure(out == want, || {
                format!("{golden}: bytes differ on run {run}")
            })?;
        }
    }
    let (code, _) = frobcheck(&["check", &fixture("data", "bad_coeff.json")]);
    ensure(code == Some(2), || format!("input error exits {code:?}"))?;
    let (code, _) = frobcheck(&[
        "canonical",
        &fixture("data", "a3_poly.json"),
        "--point",
        "0,0,0",
    ]);
    ensure(code == Some(2), || format!("non-tame point exits {code:?}"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("split_3_f.json");
    let m = Manifold::new(
        Some("split_3_f".into()),
        builtin("split_3").unwrap().data.without_metric(),
    );
    std::fs::write(&path, serialize_manifold(&m)).map_err(|e| e.to_string())?;
    let (code, out) = frobcheck(&["check", &path.to_string_lossy()]);
    ensure(code == Some(0), || {
        format!("metric-less file exits {code:?}")
    })?;
    let headers: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v.get("check").is_none())
        .collect();
    for h in &headers {
        let metric_suite = h["suite"] == "wdvv" || h["suite"] == "legendre";
        let skipped = h["status"] == "skip";
        let ran = h["suite"] == "canonical" || metric_suite == skipped;
        ensure(ran, || {
            format!(
                "metric-less file: suite {} has status {}",
                h["suite"], h["status"]
            )
        })?;
    }
    Ok("3 golden reports byte-identical over 2 runs; exits 0/1/2 observed; metric suites skipped without a metric".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            id: 1,
            name: "F-manifold identity on catalog entries",
            limit: secs(30),
            run: f_identity_on_catalog,
        },
        Criterion {
            id: 2,
            name: "bracket identity on non-associative tensors",
            limit: secs(30),
            run: bracket_identity,
        },
        Criterion {
            id: 3,
            name: "nine-term form equals derivation form",
            limit: None,
            run: nine_terms_equal_leibniz,
        },
        Criterion {
            id: 4,
            name: "tensoriality with Koszul signs",
            limit: None,
            run: tensoriality,
        },
        Criterion {
            id: 5,
            name: "Witt and power-bracket relations",
            limit: secs(60),
            run: witt_relations,
        },
        Criterion {
            id: 6,
            name: "Poisson kernel dimensions",
            limit: None,
            run: kernel_dimensions,
        },
        Criterion {
            id: 7,
            name: "diagonal metrics and square-root fields",
            limit: None,
            run: diagonal_metrics,
        },
        Criterion {
            id: 8,
            name: "commuting idempotent frames",
            limit: None,
            run: commuting_idempotents,
        },
        Criterion {
            id: 9,
            name: "Legendre-type transform",
            limit: None,
            run: legendre_checks,
        },
        Criterion {
            id: 10,
            name: "Euler commutators and conformal shift",
            limit: None,
            run: euler_checks,
        },
        Criterion {
            id: 11,
            name: "CLI contract",
            limit: None,
            run: cli_contract,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.1?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        let budget = c
            .limit
            .map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
        match outcome {
            Ok(detail) => println!(
                "[PASS] {:>2} {} ({elapsed:.2?}{budget}): {detail}",
                c.id, c.name
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "[FAIL] {:>2} {} ({elapsed:.2?}{budget}): {detail}",
                    c.id, c.name
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
