use std::sync::Arc;

use super::expr::{SharedFn, SqrtRatio};
use super::SemisimpleError;

/// Diagonal metrics `g = Σ ηᵢ (duⁱ)²` (and optionally `g̃ = Σ η̃ᵢ (duⁱ)²`) in
/// canonical coordinates; `eᵢ = ∂/∂uⁱ`.
#[derive(Debug, Clone)]
pub struct DiagonalFrame {
    eta: Vec<SharedFn>,
    eta_tilde: Option<Vec<SharedFn>>,
}

impl DiagonalFrame {
    pub fn new(eta: Vec<SharedFn>) -> Self {
        Self {
            eta,
            eta_tilde: None,
        }
    }

    pub fn with_tilde(mut self, eta_tilde: Vec<SharedFn>) -> Result<Self, SemisimpleError> {
        if eta_tilde.len() != self.eta.len() {
            return Err(SemisimpleError::Dimension {
                expected: self.eta.len(),
                found: eta_tilde.len(),
            });
        }
        self.eta_tilde = Some(eta_tilde);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.eta.len()
    }

    pub fn eta(&self) -> &[SharedFn] {
        &self.eta
    }

    pub fn eta_tilde(&self) -> Option<&[SharedFn]> {
        self.eta_tilde.as_deref()
    }

    /// The frame of the second metric, if present.
    pub fn tilde(&self) -> Option<DiagonalFrame> {
        self.eta_tilde
            .as_ref()
            .map(|t| DiagonalFrame::new(t.clone()))
    }

    fn check_point(&self, u: &[f64]) -> Result<(), SemisimpleError> {
        if u.len() != self.dim() {
            return Err(SemisimpleError::Dimension {
                expected: self.dim(),
                found: u.len(),
            });
        }
        Ok(())
    }

    fn tilde_or_err(&self) -> Result<&[SharedFn], SemisimpleError> {
        self.eta_tilde
            .as_deref()
            .ok_or(SemisimpleError::MissingSecondMetric)
    }
}

/// Pointwise rotation data; `eta_d[i][j] = ∂ηⱼ/∂uⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationData {
    pub eta: Vec<f64>,
    pub eta_d: Vec<Vec<f64>>,
    /// `γ_ij = ½ η_ij / √(ηᵢηⱼ)`, zero on the diagonal.
    pub gamma: Vec<Vec<f64>>,
    /// `v_ij = ½ (uʲ − uⁱ) η_ij / ηⱼ`, zero on the diagonal.
    pub v: Vec<Vec<f64>>,
    /// Largest `|γ_ij − (uʲ−uⁱ)⁻¹ √(ηⱼ/ηᵢ) v_ij|` over pairs with `uⁱ ≠ uʲ`.
    pub linking_residual: f64,
}

pub fn rotation_data(frame: &DiagonalFrame, u: &[f64]) -> Result<RotationData, SemisimpleError> {
    frame.check_point(u)?;
    let n = frame.dim();
    let eta: Vec<f64> = frame.eta.iter().map(|f| f.value(u)).collect();
    if let Some(i) = eta.iter().position(|&x| x.is_nan() || x <= 0.0) {
        return Err(SemisimpleError::NonPositiveEta {
            index: i,
            value: eta[i],
        });
    }
    let grads: Vec<Vec<f64>> = frame.eta.iter().map(|f| f.gradient(u)).collect();
    let eta_d: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| grads[j][i]).collect())
        .collect();
    let mut gamma = vec![vec![0.0; n]; n];
    let mut v = vec![vec![0.0; n]; n];
    let mut linking_residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            gamma[i][j] = 0.5 * eta_d[i][j] / (eta[i] * eta[j]).sqrt();
            v[i][j] = 0.5 * (u[j] - u[i]) * eta_d[i][j] / eta[j];
            if u[i] != u[j] {
                let linked = (eta[j] / eta[i]).sqrt() * v[i][j] / (u[j] - u[i]);
                linking_residual = linking_residual.max((gamma[i][j] - linked).abs());
            }
        }
    }
    Ok(RotationData {
        eta,
        eta_d,
        gamma,
        v,
        linking_residual,
    })
}

/// One solution `Dᵢ = ±√(η̃ᵢ/ηᵢ)` of `g̃(X,Y) = g(∂∘X, ∂∘Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtField {
    /// `signs[i] = ±1`.
    pub signs: Vec<f64>,
    pub d: Vec<f64>,
}

/// All `2ⁿ` real solutions at a point, in the order of the sign bitmask
/// (bit `i` set means `Dᵢ < 0`).
pub fn sqrt_fields(eta: &[f64], eta_tilde: &[f64]) -> Result<Vec<SqrtField>, SemisimpleError> {
    if eta.len() != eta_tilde.len() {
        return Err(SemisimpleError::Dimension {
            expected: eta.len(),
            found: eta_tilde.len(),
        });
    }
    let n = eta.len();
    if n >= usize::BITS as usize - 1 {
        return Err(SemisimpleError::Dimension {
            expected: usize::BITS as usize - 2,
            found: n,
        });
    }
    let ratios: Vec<f64> = eta.iter().zip(eta_tilde).map(|(a, b)| b / a).collect();
    if let Some(i) = ratios.iter().position(|r| r.is_nan() || *r <= 0.0) {
        return Err(SemisimpleError::NonPositiveRatio {
            index: i,
            value: ratios[i],
        });
    }
    let roots: Vec<f64> = ratios.iter().map(|r| r.sqrt()).collect();
    Ok((0..1usize << n)
        .map(|mask| {
            let signs: Vec<f64> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            let d = signs.iter().zip(&roots).map(|(s, r)| s * r).collect();
            SqrtField { signs, d }
        })
        .collect())
}

/// `max |g(∂∘eᵢ, ∂∘eⱼ) − g̃(eᵢ, eⱼ)|` for `∂ = Σ Dᵢeᵢ` in the idempotent
/// frame, where `eᵢ∘eⱼ = δᵢⱼeᵢ`.
pub fn metric_transfer_residual(eta: &[f64], eta_tilde: &[f64], d: &[f64]) -> f64 {
    let n = eta.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            // ∂∘eᵢ = Dᵢeᵢ
            let lhs = if i == j { d[i] * d[j] * eta[i] } else { 0.0 };
            let rhs = if i == j { eta_tilde[i] } else { 0.0 };
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

/// `∇ᵢ(Σⱼ Dⱼeⱼ)` for the Levi-Civita connection of `g`, coefficients in the
/// frame `eⱼ`, assembled term by term from the diagonal-metric formula.
pub fn covariant_derivative_field(
    d: &[SharedFn],
    frame: &DiagonalFrame,
    i: usize,
    u: &[f64],
) -> Result<Vec<f64>, SemisimpleError> {
    frame.check_point(u)?;
    let n = frame.dim();
    if d.len() != n || i >= n {
        return Err(SemisimpleError::Dimension {
            expected: n,
            found: d.len().max(i + 1),
        });
    }
    let eta: Vec<f64> = frame.eta.iter().map(|f| f.value(u)).collect();
    if let Some(j) = eta.iter().position(|&x| x == 0.0 || x.is_nan()) {
        return Err(SemisimpleError::ZeroEta { index: j });
    }
    // η_ij = eᵢ(ηⱼ)
    let eta_i: Vec<f64> = frame.eta.iter().map(|f| f.gradient(u)[i]).collect();
    let dv: Vec<f64> = d.iter().map(|f| f.value(u)).collect();
    let ei_d: Vec<f64> = d.iter().map(|f| f.gradient(u)[i]).collect();
    let mut out = vec![0.0; n];
    for j in 0..n {
        if j != i {
            out[j] = ei_d[j] + 0.5 * dv[j] * eta_i[j] / eta[j] - 0.5 * dv[i] * eta_i[j] / eta[j];
        }
    }
    out[i] = ei_d[i] + 0.5 * (0..n).map(|j| dv[j] * eta_i[j] / eta[i]).sum::<f64>();
    Ok(out)
}

/// The all-plus branch `Dⱼ = √(η̃ⱼ/ηⱼ)` as functions.
pub fn sqrt_ratio_fields(
    frame: &DiagonalFrame,
    signs: &[f64],
) -> Result<Vec<SharedFn>, SemisimpleError> {
    let tilde = frame.tilde_or_err()?;
    if signs.len() != frame.dim() {
        return Err(SemisimpleError::Dimension {
            expected: frame.dim(),
            found: signs.len(),
        });
    }
    Ok(frame
        .eta
        .iter()
        .zip(tilde)
        .zip(signs)
        .map(|((a, b), s)| {
            Arc::new(SqrtRatio {
                eta: a.clone(),
                eta_tilde: b.clone(),
                sign: *s,
            }) as SharedFn
        })
        .collect())
}

/// `∇ᵢ(Σ Dⱼeⱼ)` for `Dⱼ = +√(η̃ⱼ/ηⱼ)` rewritten through rotation
/// coefficients: `Σ_{j≠i} √(η̃ᵢ/ηⱼ)(γ̃ᵢⱼ−γᵢⱼ) eⱼ − Σ_{j≠i} √(η̃ⱼ/ηᵢ)(γ̃ᵢⱼ−γᵢⱼ) eᵢ`.
/// Agrees with [`covariant_derivative_field`] when `g̃` is admissible.
pub fn two_sum_form(
    frame: &DiagonalFrame,
    i: usize,
    u: &[f64],
) -> Result<Vec<f64>, SemisimpleError> {
    let tilde = frame.tilde().ok_or(SemisimpleError::MissingSecondMetric)?;
    let r = rotation_data(frame, u)?;
    let rt = rotation_data(&tilde, u)?;
    let n = frame.dim();
    let mut out = vec![0.0; n];
    for j in 0..n {
        if j == i {
            continue;
        }
        let diff = rt.gamma[i][j] - r.gamma[i][j];
        out[j] += (rt.eta[i] / r.eta[j]).sqrt() * diff;
        out[i] -= (rt.eta[j] / r.eta[i]).sqrt() * diff;
    }
    Ok(out)
}

/// `max_i |Σⱼ eⱼ(ηᵢ)|`: vanishes for metrics whose identity `e = Σ eⱼ` is
/// flat (diagonal potential metrics).
pub fn admissibility_residual(eta: &[SharedFn], u: &[f64]) -> f64 {
    eta.iter()
        .map(|f| f.gradient(u).iter().sum::<f64>().abs())
        .fold(0.0, f64::max)
}

/// `max_{i≠j} |∂ᵢηⱼ − ∂ⱼηᵢ|`: the diagonal-metric formulas assume symmetry.
pub fn potentiality_residual(eta: &[SharedFn], u: &[f64]) -> f64 {
    let grads: Vec<Vec<f64>> = eta.iter().map(|f| f.gradient(u)).collect();
    let n = eta.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((grads[j][i] - grads[i][j]).abs());
        }
    }
    worst
}

/// The two independent verdicts about a square-root field.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessVerdict {
    /// `∇ᵢ(Σ Dⱼeⱼ) ≈ 0` at every sample point.
    pub flat: bool,
    /// `γ̃ᵢⱼ ≈ γᵢⱼ` at every sample point.
    pub same_rotation: bool,
    pub max_covariant: f64,
    pub max_gamma_gap: f64,
}

impl FlatnessVerdict {
    pub fn agree(&self) -> bool {
        self.flat == self.same_rotation
    }
}

/// Checks both metrics for admissibility, then evaluates flatness of
/// `∂ = Σ sᵢ√(η̃ᵢ/ηᵢ) eᵢ` and equality of rotation coefficients
/// independently over the sample points.
pub fn flatness_gamma_criterion(
    frame: &DiagonalFrame,
    signs: &[f64],
    points: &[Vec<f64>],
    tol: f64,
) -> Result<FlatnessVerdict, SemisimpleError> {
    let tilde = frame.tilde().ok_or(SemisimpleError::MissingSecondMetric)?;
    let d = sqrt_ratio_fields(frame, signs)?;
    let n = frame.dim();
    let mut max_covariant: f64 = 0.0;
    let mut max_gamma_gap: f64 = 0.0;
    for u in points {
        for (name, f) in [("g", frame), ("g~", &tilde)] {
            let a = admissibility_residual(f.eta(), u);
            let p = potentiality_residual(f.eta(), u);
            if a > tol || p > tol {
                return Err(SemisimpleError::Inadmissible {
                    metric: name,
                    residual: a.max(p),
                });
            }
        }
        for i in 0..n {
            let v = covariant_derivative_field(&d, frame, i, u)?;
            max_covariant = v.iter().fold(max_covariant, |m, x| m.max(x.abs()));
        }
        let (r, rt) = (rotation_data(frame, u)?, rotation_data(&tilde, u)?);
        for i in 0..n {
            for j in 0..n {
                max_gamma_gap = max_gamma_gap.max((r.gamma[i][j] - rt.gamma[i][j]).abs());
            }
        }
    }
    Ok(FlatnessVerdict {
        flat: max_covariant <= tol,
        same_rotation: max_gamma_gap <= tol,
        max_covariant,
        max_gamma_gap,
    })
}
