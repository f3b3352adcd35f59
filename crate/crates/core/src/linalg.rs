//! Dense complex helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Matrix unit `E_{ij}` (zero-based).
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

pub fn from_rows(rows: &[&[C64]]) -> CMat {
    let n = rows.len();
    let m = if n == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(n, m, |i, j| rows[i][j])
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = if n == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn fro_norm(m: &CMat) -> f64 {
    m.norm()
}

/// Largest eigenvalue of a Hermitian matrix (input is symmetrized first).
pub fn hermitian_max_eig(h: &CMat) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    hermitian_eigen(h).0.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Eigen-decomposition `(values, vectors)` of the Hermitian part of `h`.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let sym = (h + h.adjoint()).scale(0.5);
    let e = sym.symmetric_eigen();
    (e.eigenvalues.iter().cloned().collect(), e.eigenvectors)
}

/// All eigenvalues of a square matrix via the complex Schur form.
///
/// The shifted QR iteration can stall on matrices with exact structure (Kronecker
/// products of ampliations, for instance), so the iteration count is bounded and
/// a stalled attempt is retried after a random unitary similarity.
///
/// # Panics
/// If every randomized attempt stalls.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.is_empty() {
        return Vec::new();
    }
    let n = m.nrows();
    let mut rng = crate::rng::seeded(0x5c4u64 ^ n as u64);
    for attempt in 0..SCHUR_ATTEMPTS {
        let a = if attempt == 0 {
            m.clone()
        } else {
            let q = crate::rng::gaussian_matrix(&mut rng, n, n).qr().q();
            q.adjoint() * m * q
        };
        if let Some(ev) = a.try_schur(f64::EPSILON, SCHUR_ITERS_PER_DIM * n).and_then(|s| s.eigenvalues()) {
            return ev.iter().cloned().collect();
        }
    }
    panic!("Schur iteration failed to converge on a {n}x{n} matrix after {SCHUR_ATTEMPTS} randomized attempts");
}

const SCHUR_ATTEMPTS: usize = 8;
const SCHUR_ITERS_PER_DIM: usize = 60;

pub fn spectral_radius(m: &CMat) -> f64 {
    eigenvalues(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values in nalgebra's (descending) order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().cloned().collect()
}

/// 2-norm condition number; infinite for singular input.
pub fn cond(m: &CMat) -> f64 {
    let sv = singular_values(m);
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}

/// Hermitian square root of a positive semidefinite matrix and its inverse.
pub fn psd_sqrt_and_inv(a: &CMat) -> Option<(CMat, CMat)> {
    let (vals, vecs) = hermitian_eigen(a);
    if vals.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let n = vals.len();
    let d = CMat::from_diagonal(&CVec::from_fn(n, |i, _| c(vals[i].sqrt(), 0.0)));
    let di = CMat::from_diagonal(&CVec::from_fn(n, |i, _| c(1.0 / vals[i].sqrt(), 0.0)));
    let vh = vecs.adjoint();
    Some((&vecs * d * &vh, &vecs * di * vh))
}

/// Row-major vectorization, matching the basis `E11, E12, ..., Enn`.
pub fn vec_rows(m: &CMat) -> CVec {
    let (r, k) = m.shape();
    CVec::from_fn(r * k, |idx, _| m[(idx / k, idx % k)])
}

pub fn unvec_rows(v: &CVec, n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| v[i * n + j])
}

/// Orthonormal basis of the column span, rank decided by `rel_tol * sigma_max`.
pub fn column_span(m: &CMat, rel_tol: f64) -> CMat {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMat::zeros(rows, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return CMat::zeros(rows, 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rel_tol * smax)
        .collect();
    CMat::from_fn(rows, keep.len(), |i, j| u[(i, keep[j])])
}

/// Right null space of `m`, threshold `rel_tol * sigma_max` (absolute when `m` is zero).
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    null_space_below(m, |smax| rel_tol * smax)
}

/// Right null space of `m`: right singular vectors with singular value `<= threshold`.
pub fn null_space_abs(m: &CMat, threshold: f64) -> CMat {
    null_space_below(m, |_| threshold)
}

fn null_space_below(m: &CMat, threshold: impl Fn(f64) -> f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    // pad so the SVD returns a full V
    let padded = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let cut = threshold(smax);
    let keep: Vec<usize> = (0..sv.len()).filter(|&i| smax == 0.0 || sv[i] <= cut).collect();
    CMat::from_fn(cols, keep.len(), |i, j| vt[(keep[j], i)].conj())
}

/// Unitary whose first `q.ncols()` columns span the same space as the orthonormal `q`.
pub fn unitary_completion(q: &CMat) -> CMat {
    let n = q.nrows();
    let m = q.ncols();
    let mut aug = CMat::zeros(n, m + n);
    aug.view_mut((0, 0), (n, m)).copy_from(q);
    aug.view_mut((0, m), (n, n)).copy_from(&identity(n));
    aug.qr().q()
}

/// Block-diagonal direct sum.
pub fn block_diag(blocks: &[&CMat]) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let (mut r, mut k) = (0, 0);
    for b in blocks {
        out.view_mut((r, k), b.shape()).copy_from(*b);
        r += b.nrows();
        k += b.ncols();
    }
    out
}

pub fn diag(values: &[C64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(values))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
