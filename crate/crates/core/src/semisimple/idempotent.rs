use nalgebra::DMatrix;
use rand::Rng;

use super::SemisimpleError;
use crate::geometry::MultiplicationTensor;
use crate::sampling::seeded;

/// Settings for the eigen-splitting of the tangent algebra at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameOptions {
    /// Seed of the random probe vector `v` whose multiplication operator is
    /// diagonalized.
    pub seed: u64,
    /// Minimum spacing between eigenvalues for a point to count as tame.
    pub gap_tol: f64,
}

impl Default for FrameOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            gap_tol: 1e-6,
        }
    }
}

/// Idempotents `eᵢ` at a point, in the flat basis; `frame[i][a]` is the
/// `∂_a`-coefficient of `eᵢ`. Sorted by the eigenvalue of `v∘`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdempotentFrame {
    pub basepoint: Vec<f64>,
    pub frame: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub probe: Vec<f64>,
    pub seed: u64,
    /// `max ‖eᵢ∘eⱼ − δᵢⱼeᵢ‖∞`.
    pub idempotency_residual: f64,
    /// `eᵢ` summed; equals the identity field at the point.
    pub unit: Vec<f64>,
}

fn entries_at(c: &MultiplicationTensor, point: &[f64]) -> Result<Vec<f64>, SemisimpleError> {
    if point.len() != c.dim() {
        return Err(SemisimpleError::Dimension {
            expected: c.dim(),
            found: point.len(),
        });
    }
    Ok(c.evaluate_f64(point)?)
}

fn product(entries: &[f64], n: usize, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for a in 0..n {
        for b in 0..n {
            let w = x[a] * y[b];
            if w != 0.0 {
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * entries[(a * n + b) * n + k];
                }
            }
        }
    }
    out
}

fn probe(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = seeded(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Splits the algebra `(T_x M, ∘)` into idempotents by diagonalizing
/// multiplication by a seeded random vector.
pub fn idempotent_frame(
    c: &MultiplicationTensor,
    point: &[f64],
    opts: FrameOptions,
) -> Result<IdempotentFrame, SemisimpleError> {
    let n = c.dim();
    let entries = entries_at(c, point)?;
    let v = probe(n, opts.seed);
    // column b holds v∘∂_b
    let op = DMatrix::from_fn(n, n, |k, b| {
        (0..n)
            .map(|a| v[a] * entries[(a * n + b) * n + k])
            .sum::<f64>()
    });
    let spectrum = op.complex_eigenvalues();
    let scale = op.amax().max(1.0);
    if let Some(z) = spectrum.iter().find(|z| z.im.abs() > opts.gap_tol * scale) {
        return Err(SemisimpleError::ComplexSpectrum { imaginary: z.im });
    }
    let mut eigenvalues: Vec<f64> = spectrum.iter().map(|z| z.re).collect();
    eigenvalues.sort_by(|a, b| a.total_cmp(b));
    let gap = eigenvalues
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap <= opts.gap_tol * scale {
        return Err(SemisimpleError::NotTame { gap });
    }

    let mut frame = Vec::with_capacity(n);
    for &lambda in &eigenvalues {
        let shifted = &op - DMatrix::identity(n, n) * lambda;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.ok_or(SemisimpleError::Eigenvector)?;
        let k = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| k)
            .ok_or(SemisimpleError::Eigenvector)?;
        let w: Vec<f64> = vt.row(k).iter().copied().collect();
        // w∘w = κ w for an eigenline of a semisimple algebra
        let ww = product(&entries, n, &w, &w);
        let norm2: f64 = w.iter().map(|x| x * x).sum();
        let kappa = ww.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / norm2;
        if kappa.abs() < opts.gap_tol {
            return Err(SemisimpleError::Nilpotent);
        }
        frame.push(w.iter().map(|x| x / kappa).collect::<Vec<f64>>());
    }

    let mut idempotency_residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = product(&entries, n, &frame[i], &frame[j]);
            for k in 0..n {
                let target = if i == j { frame[i][k] } else { 0.0 };
                idempotency_residual = idempotency_residual.max((p[k] - target).abs());
            }
        }
    }
    let unit = (0..n).map(|a| frame.iter().map(|e| e[a]).sum()).collect();
    Ok(IdempotentFrame {
        basepoint: point.to_vec(),
        frame,
        eigenvalues,
        probe: v,
        seed: opts.seed,
        idempotency_residual,
        unit,
    })
}

/// `max_{i≠j} ‖[eᵢ, eⱼ]‖₂` with the derivatives of the idempotent frame taken
/// by central differences of step `step`.
pub fn frame_commutativity_residual(
    c: &MultiplicationTensor,
    point: &[f64],
    step: f64,
    opts: FrameOptions,
) -> Result<f64, SemisimpleError> {
    let n = c.dim();
    let base = idempotent_frame(c, point, opts)?;
    // jac[a][i][b] = ∂_a (eᵢ)^b
    let mut jac = vec![vec![vec![0.0; n]; n]; n];
    for (a, slot) in jac.iter_mut().enumerate() {
        let (mut plus, mut minus) = (point.to_vec(), point.to_vec());
        plus[a] += step;
        minus[a] -= step;
        let fp = idempotent_frame(c, &plus, opts)?;
        let fm = idempotent_frame(c, &minus, opts)?;
        for i in 0..n {
            for b in 0..n {
                slot[i][b] = (fp.frame[i][b] - fm.frame[i][b]) / (2.0 * step);
            }
        }
    }
    let e = &base.frame;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let norm = (0..n)
                .map(|b| {
                    (0..n)
                        .map(|a| e[i][a] * jac[a][j][b] - e[j][a] * jac[a][i][b])
                        .sum::<f64>()
                })
                .map(|x| x * x)
                .sum::<f64>()
                .sqrt();
            worst = worst.max(norm);
        }
    }
    Ok(worst)
}
