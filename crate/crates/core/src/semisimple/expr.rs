use std::fmt;
use std::sync::Arc;

use exmex::prelude::*;
use exmex::Differentiate;

use super::SemisimpleError;

/// A real function of canonical coordinates `u¹..uⁿ` together with its
/// gradient.
pub trait ScalarFn: Send + Sync + fmt::Debug {
    fn value(&self, u: &[f64]) -> f64;
    /// `∂/∂u^i` for every `i`.
    fn gradient(&self, u: &[f64]) -> Vec<f64>;
}

pub type SharedFn = Arc<dyn ScalarFn>;

/// A parsed expression in the variables `u1, u2, ...` with symbolic first
/// derivatives.
#[derive(Clone)]
pub struct Expr {
    text: String,
    ex: FlatEx<f64>,
    /// Coordinate index of each expression variable, in expression order.
    vars: Vec<usize>,
    partials: Vec<(usize, Box<Expr>)>,
}

fn coordinate_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('u')?;
    if digits.starts_with('0') {
        return None;
    }
    digits
        .parse::<usize>()
        .ok()
        .filter(|&k| k >= 1)
        .map(|k| k - 1)
}

impl Expr {
    pub fn parse(text: &str) -> Result<Self, SemisimpleError> {
        let ex = FlatEx::<f64>::parse(text)
            .map_err(|e| SemisimpleError::Expression(format!("{text}: {e}")))?;
        Self::from_flat(text.to_string(), ex, 1)
    }

    fn from_flat(text: String, ex: FlatEx<f64>, depth: u32) -> Result<Self, SemisimpleError> {
        let vars = ex
            .var_names()
            .iter()
            .map(|v| {
                coordinate_index(v)
                    .ok_or_else(|| SemisimpleError::Expression(format!("unknown variable `{v}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut partials = Vec::new();
        if depth > 0 {
            for (k, &i) in vars.iter().enumerate() {
                let d = ex
                    .clone()
                    .partial(k)
                    .map_err(|e| SemisimpleError::Expression(format!("d/du{}: {e}", i + 1)))?;
                let text = d.to_string();
                partials.push((i, Box::new(Self::from_flat(text, d, depth - 1)?)));
            }
        }
        Ok(Self {
            text,
            ex,
            vars,
            partials,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Highest coordinate index used, plus one.
    pub fn arity(&self) -> usize {
        self.vars.iter().map(|i| i + 1).max().unwrap_or(0)
    }

    /// `∂/∂u^i` as an expression (first derivatives only are kept symbolic).
    pub fn derivative(&self, i: usize) -> Option<&Expr> {
        self.partials
            .iter()
            .find(|(j, _)| *j == i)
            .map(|(_, d)| d.as_ref())
    }

    fn eval(&self, u: &[f64]) -> f64 {
        let args: Vec<f64> = self
            .vars
            .iter()
            .map(|&i| u.get(i).copied().unwrap_or(f64::NAN))
            .collect();
        self.ex.eval(&args).unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", self.text)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl ScalarFn for Expr {
    fn value(&self, u: &[f64]) -> f64 {
        self.eval(u)
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; u.len()];
        for (i, d) in &self.partials {
            if *i < g.len() {
                g[*i] = d.eval(u);
            }
        }
        g
    }
}

/// `sign · √(η̃/η)` with its exact gradient `½ D (∇η̃/η̃ − ∇η/η)`.
#[derive(Debug, Clone)]
pub struct SqrtRatio {
    pub eta: SharedFn,
    pub eta_tilde: SharedFn,
    pub sign: f64,
}

impl ScalarFn for SqrtRatio {
    fn value(&self, u: &[f64]) -> f64 {
        self.sign * (self.eta_tilde.value(u) / self.eta.value(u)).sqrt()
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let d = self.value(u);
        let (a, b) = (self.eta.value(u), self.eta_tilde.value(u));
        let (ga, gb) = (self.eta.gradient(u), self.eta_tilde.gradient(u));
        ga.iter()
            .zip(&gb)
            .map(|(da, db)| 0.5 * d * (db / b - da / a))
            .collect()
    }
}

/// A constant function.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl ScalarFn for Constant {
    fn value(&self, _: &[f64]) -> f64 {
        self.0
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        vec![0.0; u.len()]
    }
}
