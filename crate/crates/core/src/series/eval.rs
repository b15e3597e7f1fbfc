use num_traits::Zero;

use super::{GradedSeries, SeriesError};
use crate::rational::{to_f64, Rational};

/// Value of a series at a point. `truncated` is set when the series has a
/// finite validity degree and the point is not the origin: the unknown tail
/// may then contribute, so the value is only as good as the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    pub value: T,
    pub truncated: bool,
}

impl GradedSeries {
    fn check_point(&self, len: usize) -> Result<(), SeriesError> {
        if len != self.even_arity {
            return Err(SeriesError::PointLength {
                expected: self.even_arity,
                found: len,
            });
        }
        Ok(())
    }

    /// Exact evaluation with all odd generators set to zero.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Evaluation<Rational>, SeriesError> {
        self.check_point(point.len())?;
        let mut value = Rational::zero();
        for (m, c) in self.terms.iter().filter(|(m, _)| m.odd == 0) {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            value += t;
        }
        let at_origin = point.iter().all(Zero::is_zero);
        Ok(Evaluation {
            value,
            truncated: self.validity.is_some() && !at_origin,
        })
    }

    /// Floating-point evaluation with all odd generators set to zero.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<Evaluation<f64>, SeriesError> {
        self.check_point(point.len())?;
        let mut value = 0.0;
        for (m, c) in self.terms.iter().filter(|(m, _)| m.odd == 0) {
            let mut t = to_f64(c);
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t *= x.powi(e as i32);
                }
            }
            value += t;
        }
        let at_origin = point.iter().all(|&x| x == 0.0);
        Ok(Evaluation {
            value,
            truncated: self.validity.is_some() && !at_origin,
        })
    }
}
