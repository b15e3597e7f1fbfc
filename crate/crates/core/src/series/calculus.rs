use num_bigint::BigInt;

use super::{shift_validity, GradedSeries, Monomial, SeriesError, Var};
use crate::rational::Rational;

impl GradedSeries {
    /// Partial derivative. Even variables lower the validity degree by one;
    /// odd generators use the left derivative.
    pub fn partial(&self, var: Var) -> Result<Self, SeriesError> {
        match var {
            Var::Even(i) if i < self.even_arity => {
                let mut out = Self::zero(self.even_arity, self.odd_arity);
                out.validity = shift_validity(self.validity, -1);
                for (m, c) in &self.terms {
                    let e = m.exps[i];
                    if e == 0 {
                        continue;
                    }
                    let mut exps = m.exps.clone();
                    exps[i] -= 1;
                    let factor = Rational::from_integer(BigInt::from(e));
                    out.add_term(Monomial::new(exps, m.odd), c * factor);
                }
                Ok(out)
            }
            Var::Odd(j) if j < self.odd_arity => {
                let bit = 1u32 << j;
                let mut out = Self::zero(self.even_arity, self.odd_arity);
                out.validity = self.validity;
                for (m, c) in &self.terms {
                    if m.odd & bit == 0 {
                        continue;
                    }
                    let before = (m.odd & (bit - 1)).count_ones();
                    let coeff = if before % 2 == 1 {
                        -c.clone()
                    } else {
                        c.clone()
                    };
                    out.add_term(Monomial::new(m.exps.clone(), m.odd & !bit), coeff);
                }
                Ok(out)
            }
            _ => Err(SeriesError::VarOutOfRange(var)),
        }
    }

    /// Iterated partial derivative, applying the *last* variable first:
    /// `partials(&[a, b, c])` is `∂_a ∂_b ∂_c`.
    pub fn partials(&self, vars: &[Var]) -> Result<Self, SeriesError> {
        let mut out = self.clone();
        for &v in vars.iter().rev() {
            out = out.partial(v)?;
        }
        Ok(out)
    }

    /// Formal antiderivative in an even variable with zero integration
    /// constant; raises the validity degree by one.
    pub fn integrate(&self, i: usize) -> Result<Self, SeriesError> {
        if i >= self.even_arity {
            return Err(SeriesError::VarOutOfRange(Var::Even(i)));
        }
        let mut out = Self::zero(self.even_arity, self.odd_arity);
        out.validity = shift_validity(self.validity, 1);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps[i] += 1;
            let factor = Rational::new(BigInt::from(1), BigInt::from(exps[i]));
            out.add_term(Monomial::new(exps, m.odd), c * factor);
        }
        Ok(out)
    }
}
