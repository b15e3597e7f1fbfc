use std::sync::Arc;

use crate::series::{GradedSeries, Parity, Var};

/// Flat coordinates `x^1..x^n` of a (super)manifold chart.
///
/// Even coordinates become the even variables of the series ring and odd
/// coordinates its odd generators, each in order of appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    parities: Vec<Parity>,
    vars: Vec<Var>,
    even_arity: usize,
    odd_arity: usize,
}

impl Chart {
    pub fn new(parities: Vec<Parity>) -> Arc<Self> {
        let mut vars = Vec::with_capacity(parities.len());
        let (mut e, mut o) = (0, 0);
        for p in &parities {
            match p {
                Parity::Even => {
                    vars.push(Var::Even(e));
                    e += 1;
                }
                Parity::Odd => {
                    vars.push(Var::Odd(o));
                    o += 1;
                }
            }
        }
        Arc::new(Self {
            parities,
            vars,
            even_arity: e,
            odd_arity: o,
        })
    }

    pub fn even(n: usize) -> Arc<Self> {
        Self::new(vec![Parity::Even; n])
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parity(&self, a: usize) -> Parity {
        self.parities[a]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn var(&self, a: usize) -> Var {
        self.vars[a]
    }

    pub fn even_arity(&self) -> usize {
        self.even_arity
    }

    pub fn odd_arity(&self) -> usize {
        self.odd_arity
    }

    pub fn is_pure_even(&self) -> bool {
        self.odd_arity == 0
    }

    pub fn zero(&self) -> GradedSeries {
        GradedSeries::zero(self.even_arity, self.odd_arity)
    }

    pub fn one(&self) -> GradedSeries {
        GradedSeries::one(self.even_arity, self.odd_arity)
    }

    pub fn constant(&self, c: crate::Rational) -> GradedSeries {
        GradedSeries::constant(self.even_arity, self.odd_arity, c)
    }

    /// The coordinate function `x^a`.
    pub fn coordinate(&self, a: usize) -> GradedSeries {
        GradedSeries::var(self.even_arity, self.odd_arity, self.vars[a])
            .expect("coordinate in range")
    }

    /// `∂_a f` (left derivative for odd coordinates).
    pub fn partial(&self, a: usize, f: &GradedSeries) -> GradedSeries {
        f.partial(self.vars[a]).expect("coordinate in range")
    }
}
