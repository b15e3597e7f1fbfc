//! Residual operators for the bracket/product identities.
//!
//! Every function returns the full residual field; a vanishing residual (up
//! to the validity degree) certifies the identity on the given inputs.
//! Products written `A∘B∘C` are nested to the right, `A∘(B∘C)`.

use super::{MultiplicationTensor, VectorField};
use crate::series::koszul;

/// Poisson deviation
/// `P_X(Z, W) = [X, Z∘W] − [X, Z]∘W − (−1)^{XZ} Z∘[X, W]`.
pub fn poisson_deviation(
    x: &VectorField,
    z: &VectorField,
    w: &VectorField,
    c: &MultiplicationTensor,
) -> VectorField {
    let zw = c.circ(z, w);
    let t1 = x.bracket(&zw);
    let t2 = c.circ(&x.bracket(z), w);
    let t3 = c
        .circ(z, &x.bracket(w))
        .signed(koszul(x.parity(), z.parity()));
    t1 - t2 - t3
}

/// The nine-term left side of the F-manifold identity, written out
/// term by term (independently of [`poisson_deviation`]).
pub fn f_identity_residual(
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
    w: &VectorField,
    c: &MultiplicationTensor,
) -> VectorField {
    let (px, py, pz) = (x.parity(), y.parity(), z.parity());
    let xy = c.circ(x, y);
    let zw = c.circ(z, w);

    let a1 = xy.bracket(&zw);
    let a2 = c.circ(&xy.bracket(z), w);
    let a3 = c.circ(z, &xy.bracket(w)).signed(koszul(px + py, pz));

    let b1 = c.circ(x, &y.bracket(&zw));
    let b2 = c.circ(x, &c.circ(&y.bracket(z), w));
    let b3 = c.circ(x, &c.circ(z, &y.bracket(w))).signed(koszul(py, pz));

    let s = koszul(px, py);
    let c1 = c.circ(y, &x.bracket(&zw)).signed(s);
    let c2 = c.circ(y, &c.circ(&x.bracket(z), w)).signed(s);
    let c3 = c
        .circ(y, &c.circ(z, &x.bracket(w)))
        .signed(koszul(px, py + pz));

    a1 - a2 - a3 - b1 + b2 + b3 - c1 + c2 + c3
}

/// `P_{X∘Y}(Z,W) − X∘P_Y(Z,W) − (−1)^{XY} Y∘P_X(Z,W)`: the derivation
/// form of the F-manifold identity.
pub fn leibniz_form_residual(
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
    w: &VectorField,
    c: &MultiplicationTensor,
) -> VectorField {
    let xy = c.circ(x, y);
    let lhs = poisson_deviation(&xy, z, w, c);
    let t1 = c.circ(x, &poisson_deviation(y, z, w, c));
    let t2 = c
        .circ(y, &poisson_deviation(x, z, w, c))
        .signed(koszul(x.parity(), y.parity()));
    lhs - t1 - t2
}

/// `P_{[X,Y]}(Z,W)` minus its six-term expansion through `P_X`, `P_Y` and
/// brackets. Vanishes for every supercommutative product; associativity is
/// not needed.
pub fn bracket_identity_residual(
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
    w: &VectorField,
    c: &MultiplicationTensor,
) -> VectorField {
    let (px, py, pz) = (x.parity(), y.parity(), z.parity());
    let lhs = poisson_deviation(&x.bracket(y), z, w, c);

    let r1 = x.bracket(&poisson_deviation(y, z, w, c));
    let r2 = poisson_deviation(y, &x.bracket(z), w, c).signed(koszul(px, py));
    let r3 = poisson_deviation(y, z, &x.bracket(w), c).signed(koszul(px, py + pz));
    let r4 = y
        .bracket(&poisson_deviation(x, z, w, c))
        .signed(koszul(px, py));
    let r5 = poisson_deviation(x, &y.bracket(z), w, c);
    let r6 = poisson_deviation(x, z, &y.bracket(w), c).signed(koszul(py, pz));

    lhs - (r1 - r2 - r3 - r4 + r5 + r6)
}

/// A nonzero associator `(∂_a∘∂_b)∘∂_c − ∂_a∘(∂_b∘∂_c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Associator {
    pub indices: (usize, usize, usize),
    pub residual: VectorField,
}

/// All nonvanishing associators over index triples; empty iff `∘` is
/// associative (up to validity degree).
pub fn wdvv_residual(c: &MultiplicationTensor) -> Vec<Associator> {
    let n = c.dim();
    let chart = c.chart();
    let flat: Vec<VectorField> = (0..n)
        .map(|a| VectorField::coordinate(chart.clone(), a))
        .collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let ab = c.circ(&flat[a], &flat[b]);
            for cc in 0..n {
                let left = c.circ(&ab, &flat[cc]);
                let right = c.circ(&flat[a], &c.circ(&flat[b], &flat[cc]));
                let residual = left - right;
                if !residual.vanishes() {
                    out.push(Associator {
                        indices: (a, b, cc),
                        residual,
                    });
                }
            }
        }
    }
    out
}
