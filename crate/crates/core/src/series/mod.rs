//! Truncated multivariate power series over exact rationals with optional
//! anticommuting generators.
//!
//! A [`GradedSeries`] lives in `Q[[x_1..x_m]] ⊗ Λ(θ_1..θ_k)`. Terms are keyed
//! by a [`Monomial`]: an exponent vector for the even variables plus the
//! sorted subset of odd generators (a bitmask). Products reorder odd
//! generators into ascending order and pick up the Koszul sign of the
//! permutation.
//!
//! Invariants:
//! - no stored coefficient is zero
//! - every term has total even degree `<= validity` (when bounded)
//! - `validity == None` means the series is an exact polynomial
//!
//! Derivatives with respect to odd generators are *left* derivatives: the
//! generator is moved to the front of the product (collecting a sign per
//! transposition) and then removed. All sign-bearing code in the crate uses
//! this convention.

mod arith;
mod calculus;
mod compose;
mod display;
mod eval;
mod solve;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;

pub use compose::invert_coordinates;
pub use eval::Evaluation;
pub use solve::{solve_left, SeriesSolveError};

/// Highest even degree up to which coefficients are trusted; `None` for
/// exact polynomials. Negative values mean nothing is trusted.
pub type Validity = Option<i32>;

pub fn min_validity(a: Validity, b: Validity) -> Validity {
    match (a, b) {
        (None, v) | (v, None) => v,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

pub(crate) fn shift_validity(v: Validity, by: i32) -> Validity {
    v.map(|d| d + by)
}

/// Grading of a homogeneous object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u32) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

/// `(-1)^{|a||b|}` as a boolean "negate?".
pub fn koszul(a: Parity, b: Parity) -> bool {
    a.is_odd() && b.is_odd()
}

/// A variable of the series ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Even(usize),
    Odd(usize),
}

impl Var {
    pub fn parity(self) -> Parity {
        match self {
            Var::Even(_) => Parity::Even,
            Var::Odd(_) => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("arity mismatch: ({0}, {1}) vs ({2}, {3})")]
    ArityMismatch(usize, usize, usize, usize),
    #[error("series has mixed parity")]
    MixedParity,
    #[error("variable {0:?} out of range")]
    VarOutOfRange(Var),
    #[error("expected {expected} images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("image of {var:?} has the wrong parity")]
    ImageParity { var: Var },
    #[error("image of {0:?} has a nonzero degree-0 part")]
    NonzeroConstantTerm(Var),
    #[error("linear part of the coordinate map is singular")]
    SingularLinearPart,
    #[error("inverse of a non-linear polynomial map needs a finite validity degree")]
    NeedsTruncation,
    #[error("operation supports pure-even series only")]
    OddGeneratorsUnsupported,
    #[error("evaluation point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("more than 32 odd generators are not supported")]
    TooManyOddGenerators,
}

/// Exponent vector of the even variables plus the set of odd generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
    odd: u32,
}

impl Monomial {
    pub fn one(even_arity: usize) -> Self {
        Self {
            exps: vec![0; even_arity],
            odd: 0,
        }
    }

    pub fn new(exps: Vec<u32>, odd: u32) -> Self {
        Self { exps, odd }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Bitmask of odd generators (bit `j` set means `θ_j` occurs).
    pub fn odd_mask(&self) -> u32 {
        self.odd
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..32).filter(|j| self.odd >> j & 1 == 1).collect()
    }

    pub fn degree(&self) -> i32 {
        self.exps.iter().sum::<u32>() as i32
    }

    pub fn odd_count(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.count_ones())
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.exps.iter().all(|&e| e == 0)
    }
}

/// Sign (true = negative) of `θ_A θ_B` once reordered into `θ_{A∪B}`;
/// `None` when the sets overlap and the product vanishes.
pub(crate) fn odd_product_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    even_arity: usize,
    odd_arity: usize,
    terms: BTreeMap<Monomial, Rational>,
    validity: Validity,
}

impl GradedSeries {
    pub fn zero(even_arity: usize, odd_arity: usize) -> Self {
        assert!(odd_arity <= 32, "at most 32 odd generators");
        Self {
            even_arity,
            odd_arity,
            terms: BTreeMap::new(),
            validity: None,
        }
    }

    pub fn constant(even_arity: usize, odd_arity: usize, c: Rational) -> Self {
        let mut s = Self::zero(even_arity, odd_arity);
        s.add_term(Monomial::one(even_arity), c);
        s
    }

    pub fn one(even_arity: usize, odd_arity: usize) -> Self {
        Self::constant(even_arity, odd_arity, Rational::one())
    }

    /// The coordinate function of `var`.
    pub fn var(even_arity: usize, odd_arity: usize, var: Var) -> Result<Self, SeriesError> {
        let mut m = Monomial::one(even_arity);
        match var {
            Var::Even(i) if i < even_arity => m.exps[i] = 1,
            Var::Odd(j) if j < odd_arity => m.odd = 1 << j,
            _ => return Err(SeriesError::VarOutOfRange(var)),
        }
        let mut s = Self::zero(even_arity, odd_arity);
        s.add_term(m, Rational::one());
        Ok(s)
    }

    /// `coeff · x^exps · θ_{odd[0]} θ_{odd[1]} ...` with the odd factors taken
    /// in the listed order; repeated generators give zero.
    pub fn monomial(
        even_arity: usize,
        odd_arity: usize,
        exps: &[u32],
        odd: &[usize],
        coeff: Rational,
    ) -> Result<Self, SeriesError> {
        if exps.len() != even_arity {
            return Err(SeriesError::ArityMismatch(
                exps.len(),
                0,
                even_arity,
                odd_arity,
            ));
        }
        let mut mask = 0u32;
        let mut negative = false;
        for &j in odd {
            if j >= odd_arity {
                return Err(SeriesError::VarOutOfRange(Var::Odd(j)));
            }
            match odd_product_sign(mask, 1 << j) {
                Some(s) => {
                    negative ^= s;
                    mask |= 1 << j;
                }
                None => return Ok(Self::zero(even_arity, odd_arity)),
            }
        }
        let mut s = Self::zero(even_arity, odd_arity);
        s.add_term(
            Monomial::new(exps.to_vec(), mask),
            if negative { -coeff } else { coeff },
        );
        Ok(s)
    }

    pub fn from_terms(
        even_arity: usize,
        odd_arity: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
        validity: Validity,
    ) -> Self {
        let mut s = Self::zero(even_arity, odd_arity);
        s.validity = validity;
        for (m, c) in terms {
            assert_eq!(m.exps.len(), even_arity, "monomial arity");
            assert!(m.odd >> odd_arity == 0, "odd generator out of range");
            s.add_term(m, c);
        }
        s
    }

    pub fn even_arity(&self) -> usize {
        self.even_arity
    }

    pub fn odd_arity(&self) -> usize {
        self.odd_arity
    }

    pub fn validity(&self) -> Validity {
        self.validity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.even_arity))
    }

    pub fn same_arity(&self, other: &Self) -> bool {
        self.even_arity == other.even_arity && self.odd_arity == other.odd_arity
    }

    pub(crate) fn check_arity(&self, other: &Self) -> Result<(), SeriesError> {
        if self.same_arity(other) {
            Ok(())
        } else {
            Err(SeriesError::ArityMismatch(
                self.even_arity,
                self.odd_arity,
                other.even_arity,
                other.odd_arity,
            ))
        }
    }

    /// Parity of a homogeneous series; `None` for the zero series.
    pub fn parity(&self) -> Result<Option<Parity>, SeriesError> {
        let mut seen = None;
        for m in self.terms.keys() {
            let p = m.parity();
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return Err(SeriesError::MixedParity),
                _ => {}
            }
        }
        Ok(seen)
    }

    /// True when the series is zero or homogeneous of parity `p`.
    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| m.parity() == p)
    }

    /// Highest total even degree among stored terms (`-1` for zero).
    pub fn degree(&self) -> i32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(-1)
    }

    /// Lowest even degree plus odd count over stored terms; the filtration
    /// used by the iterative solvers. `None` for zero.
    pub fn order(&self) -> Option<i32> {
        self.terms
            .keys()
            .map(|m| m.degree() + m.odd_count() as i32)
            .min()
    }

    /// Lowers the validity degree to `v` (never raises it) and drops terms
    /// above it.
    pub fn truncated(mut self, v: Validity) -> Self {
        self.validity = min_validity(self.validity, v);
        if let Some(d) = self.validity {
            self.terms.retain(|m, _| m.degree() <= d);
        }
        self
    }

    /// Replaces the validity degree; terms above a finite bound are dropped.
    /// Use only when the caller knows the coefficients are exact to `v`.
    pub fn with_validity(mut self, v: Validity) -> Self {
        self.validity = v;
        if let Some(d) = v {
            self.terms.retain(|m, _| m.degree() <= d);
        }
        self
    }

    /// Equality of coefficients up to even degree `v` (all degrees if `None`).
    pub fn agrees_up_to(&self, other: &Self, v: Validity) -> bool {
        if !self.same_arity(other) {
            return false;
        }
        let keep = |m: &Monomial| v.is_none_or(|d| m.degree() <= d);
        let a = self.terms.iter().filter(|(m, _)| keep(m));
        let b = other.terms.iter().filter(|(m, _)| keep(m));
        a.eq(b)
    }

    /// Zero up to even degree `v`.
    pub fn vanishes_up_to(&self, v: Validity) -> bool {
        self.terms.keys().all(|m| v.is_some_and(|d| m.degree() > d))
    }

    /// Terms with nonzero odd part removed (the "body" in the even variables).
    pub fn even_part(&self) -> Self {
        Self::from_terms(
            self.even_arity,
            self.odd_arity,
            self.terms
                .iter()
                .filter(|(m, _)| m.odd == 0)
                .map(|(m, c)| (m.clone(), c.clone())),
            self.validity,
        )
    }

    /// Largest absolute coefficient, as a float; used for residual norms.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| crate::rational::to_f64(c).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if self.validity.is_some_and(|d| m.degree() > d) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}
