use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::{min_validity, odd_product_sign, GradedSeries, Monomial, SeriesError};
use crate::rational::Rational;

impl GradedSeries {
    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.validity = min_validity(self.validity, other.validity);
        if let Some(d) = out.validity {
            out.terms.retain(|m, _| m.degree() <= d);
        }
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&-other)
    }

    /// Supercommutative product, truncated to the smaller validity degree.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_arity(other)?;
        let validity = min_validity(self.validity, other.validity);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if validity.is_some_and(|d| da + mb.degree() > d) {
                    continue;
                }
                let Some(negative) = odd_product_sign(ma.odd, mb.odd) else {
                    continue;
                };
                let exps = ma.exps.iter().zip(&mb.exps).map(|(a, b)| a + b).collect();
                let key = Monomial::new(exps, ma.odd | mb.odd);
                let prod = ca * cb;
                let slot = acc.entry(key).or_insert_with(Rational::zero);
                if negative {
                    *slot -= prod;
                } else {
                    *slot += prod;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self {
            even_arity: self.even_arity,
            odd_arity: self.odd_arity,
            terms: acc,
            validity,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            let mut z = Self::zero(self.even_arity, self.odd_arity);
            z.validity = self.validity;
            return z;
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.even_arity, self.odd_arity).truncated(self.validity);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Neg for &GradedSeries {
    type Output = GradedSeries;

    fn neg(self) -> GradedSeries {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

impl Neg for GradedSeries {
    type Output = GradedSeries;

    fn neg(self) -> GradedSeries {
        -&self
    }
}

// Operator forms panic on arity mismatch, like shape mismatches in array
// libraries; the `checked_*` methods return the error instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&GradedSeries> for &GradedSeries {
            type Output = GradedSeries;

            fn $method(self, rhs: &GradedSeries) -> GradedSeries {
                self.$checked(rhs).expect("series arity mismatch")
            }
        }

        impl $trait<GradedSeries> for GradedSeries {
            type Output = GradedSeries;

            fn $method(self, rhs: GradedSeries) -> GradedSeries {
                (&self).$checked(&rhs).expect("series arity mismatch")
            }
        }

        impl $trait<&GradedSeries> for GradedSeries {
            type Output = GradedSeries;

            fn $method(self, rhs: &GradedSeries) -> GradedSeries {
                (&self).$checked(rhs).expect("series arity mismatch")
            }
        }

        impl $trait<GradedSeries> for &GradedSeries {
            type Output = GradedSeries;

            fn $method(self, rhs: GradedSeries) -> GradedSeries {
                self.$checked(&rhs).expect("series arity mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&GradedSeries> for GradedSeries {
    fn add_assign(&mut self, rhs: &GradedSeries) {
        self.check_arity(rhs).expect("series arity mismatch");
        self.validity = min_validity(self.validity, rhs.validity);
        if let Some(d) = self.validity {
            self.terms.retain(|m, _| m.degree() <= d);
        }
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&GradedSeries> for GradedSeries {
    fn sub_assign(&mut self, rhs: &GradedSeries) {
        *self += &-rhs;
    }
}

impl Mul<&Rational> for &GradedSeries {
    type Output = GradedSeries;

    fn mul(self, rhs: &Rational) -> GradedSeries {
        self.scale(rhs)
    }
}

impl GradedSeries {
    /// `self` multiplied by `(-1)` when `negate` holds.
    pub fn signed(self, negate: bool) -> Self {
        if negate {
            -self
        } else {
            self
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }
}
