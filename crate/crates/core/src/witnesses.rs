//! Explicit tuples used throughout the examples and the verification harness.

use crate::linalg::{self, c, CMat, C64};
use crate::mattuple::MatrixTuple;

/// `(diag(1, -1), [[0, i], [1, 0]])`, an irreducible point of the `q = -1` relation.
pub fn x0_y0() -> MatrixTuple {
    MatrixTuple::new(vec![
        linalg::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]),
        linalg::from_rows(&[&[c(0.0, 0.0), c(0.0, 1.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]),
    ])
    .expect("2x2 pair")
}

/// The matrix of `Psi` for [`x0_y0`] in the basis `E11, E12, E21, E22`.
pub fn x0_y0_cp_matrix() -> CMat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    linalg::from_rows(&[
        &[o, z, z, o],
        &[z, -o, i, z],
        &[z, -i, -o, z],
        &[o, z, z, o],
    ])
}

/// `(q E11 + E22, E12) / (2 sqrt(q^2 + 1))`: on the `q`-commutation variety and off the others.
pub fn separating_point(q: C64) -> MatrixTuple {
    let s = c(1.0, 0.0) / ((q * q + 1.0).sqrt() * 2.0);
    MatrixTuple::new(vec![
        linalg::diag(&[q * s, s]),
        linalg::unit(2, 0, 1) * s,
    ])
    .expect("2x2 pair")
}

/// `(E12, E21)`, a row coisometry.
pub fn matrix_unit_pair() -> MatrixTuple {
    MatrixTuple::new(vec![linalg::unit(2, 0, 1), linalg::unit(2, 1, 0)]).expect("2x2 pair")
}

/// `(eps e^{-i theta} E12, delta (E12 + E21))` with `eps^2 + delta^2 = 1`.
pub fn square_zero_boundary_point(delta: f64, theta: f64) -> MatrixTuple {
    let eps = (1.0 - delta * delta).sqrt();
    MatrixTuple::new(vec![
        linalg::unit(2, 0, 1) * C64::from_polar(eps, -theta),
        (linalg::unit(2, 0, 1) + linalg::unit(2, 1, 0)) * c(delta, 0.0),
    ])
    .expect("2x2 pair")
}

/// The coordinate map `(X, Y) -> (aX, cX + Y)`.
pub fn lower_triangular_map(a: C64, cc: C64) -> CMat {
    linalg::from_rows(&[&[a, c(0.0, 0.0)], &[cc, c(1.0, 0.0)]])
}

/// `(diag(lambda, mu), a E12)` with `a = sqrt(1 - lambda^2) / 2`.
pub fn diagonal_shift_point(lambda: f64, mu: f64) -> MatrixTuple {
    let a = 0.5 * (1.0 - lambda * lambda).sqrt();
    MatrixTuple::new(vec![
        linalg::diag(&[c(lambda, 0.0), c(mu, 0.0)]),
        linalg::unit(2, 0, 1) * c(a, 0.0),
    ])
    .expect("2x2 pair")
}
