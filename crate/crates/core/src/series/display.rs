use std::fmt;

use num_traits::{One, Signed};

use super::{GradedSeries, Monomial};
use crate::rational::{format_rational, Rational};

fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => out.push(format!("x{}", i + 1)),
            _ => out.push(format!("x{}^{}", i + 1, e)),
        }
    }
    for j in m.odd_indices() {
        out.push(format!("t{}", j + 1));
    }
    out
}

impl fmt::Display for GradedSeries {
    /// Even variables print as `x1, x2, ...`, odd generators as `t1, t2, ...`
    /// (in canonical ascending order).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms().collect();
        terms.sort_by(|a, b| {
            (a.0.degree(), a.0.odd_count(), b.0).cmp(&(b.0.degree(), b.0.odd_count(), a.0))
        });
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (m, c)) in terms.iter().enumerate() {
            let factors = monomial_factors(m);
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if factors.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), factors.join("*"))?;
            }
        }
        if let Some(d) = self.validity() {
            write!(f, " + O({})", d + 1)?;
        }
        Ok(())
    }
}
