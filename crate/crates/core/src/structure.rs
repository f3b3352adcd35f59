//! Irreducibility, joint invariant subspaces and Jordan-Hoelder decompositions.
//!
//! Irreducibility is decided through Burnside's theorem: a tuple in `M_n` is
//! irreducible exactly when the unital algebra it generates is all of `M_n`.
//! The algebra is built by Arnoldi-style closure of `span{I}` under left
//! multiplication by the generators.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::freepoly::Word;
use crate::linalg::{self, c, CMat, CVec, C64};
use crate::mattuple::MatrixTuple;
use crate::rng;

const SEARCH_TRIALS: usize = 12;
const SIMILARITY_ATTEMPTS: usize = 32;

/// Frobenius-orthonormal basis of the unital algebra generated by `x`.
pub fn generated_algebra(x: &MatrixTuple, tol: f64) -> Vec<CMat> {
    let n = x.n();
    let full = n * n;
    let coord_norms: Vec<f64> = x.matrices().iter().map(linalg::op_norm).collect();
    let mut basis: Vec<CVec> = vec![linalg::vec_rows(&CMat::identity(n, n)).unscale((n as f64).sqrt())];
    let mut mats: Vec<CMat> = vec![CMat::identity(n, n).unscale((n as f64).sqrt())];
    let mut next = 0;
    while next < mats.len() && mats.len() < full {
        let b = mats[next].clone();
        for (j, xj) in x.matrices().iter().enumerate() {
            if coord_norms[j] == 0.0 {
                continue;
            }
            let cand = xj * &b;
            let mut v = linalg::vec_rows(&cand);
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for q in &basis {
                    let proj = q.dotc(&v);
                    v.axpy(-proj, q, c(1.0, 0.0));
                }
            }
            let r = v.norm();
            if r > tol * coord_norms[j] {
                let v = v.unscale(r);
                mats.push(linalg::unvec_rows(&v, n));
                basis.push(v);
                if mats.len() == full {
                    break;
                }
            }
        }
        next += 1;
    }
    mats
}

/// Burnside test: the generated algebra has dimension `n^2`.
pub fn is_irreducible(x: &MatrixTuple, tol: f64) -> bool {
    let n = x.n();
    n == 1 || generated_algebra(x, tol).len() == n * n
}

/// `max_j ||(I - QQ^*) X_j Q||` for an orthonormal `Q`.
pub fn invariance_residual(x: &MatrixTuple, q: &CMat) -> f64 {
    let proj = CMat::identity(x.n(), x.n()) - q * q.adjoint();
    x.matrices()
        .iter()
        .map(|m| linalg::op_norm(&(&proj * m * q)))
        .fold(0.0, f64::max)
}

/// An orthonormal basis `Q` (`n x m`, `0 < m < n`) of a joint invariant subspace,
/// or `None` when `x` is irreducible.
///
/// Fails with [`Error::DecompositionFailure`] when the algebra is a proper
/// subalgebra but the randomized search could not certify a subspace.
pub fn find_invariant_subspace(x: &MatrixTuple, cfg: &Config) -> Result<Option<CMat>> {
    let n = x.n();
    if n == 1 {
        return Ok(None);
    }
    let alg = generated_algebra(x, cfg.rank_tol);
    if alg.len() == n * n {
        return Ok(None);
    }
    let scale = x.max_coord_norm().max(f64::MIN_POSITIVE);
    let accept = |q: &CMat| invariance_residual(x, q) <= cfg.invariance_tol * scale;
    let thresholds = [cfg.rank_tol, 1e-8, 1e-6];

    let mut rng = rng::seeded(cfg.seed);
    let mut best: Option<CMat> = None;
    for trial in 0..SEARCH_TRIALS {
        // early trials use combinations of the generators themselves
        let element = if trial < 4 {
            x.matrices()
                .iter()
                .fold(CMat::zeros(n, n), |acc, m| acc + m * rng::complex_gaussian(&mut rng))
        } else {
            alg.iter()
                .fold(CMat::zeros(n, n), |acc, m| acc + m * rng::complex_gaussian(&mut rng))
        };
        for lambda in distinct_eigenvalues(&element) {
            let shifted = &element - CMat::identity(n, n) * lambda;
            let svd = shifted.svd(true, true);
            let (u, vt) = (svd.u.expect("U"), svd.v_t.expect("V^T"));
            let imin = argmin(svd.singular_values.as_slice());
            let right: CVec = vt.row(imin).adjoint();
            let left: CVec = u.column(imin).into_owned();

            let orbit = CMat::from_columns(&alg.iter().map(|b| b * &right).collect::<Vec<_>>());
            let co_orbit = CMat::from_columns(&alg.iter().map(|b| b.adjoint() * &left).collect::<Vec<_>>());
            for &thr in &thresholds {
                let q = linalg::column_span(&orbit, thr);
                if q.ncols() > 0 && q.ncols() < n && accept(&q) {
                    keep_smaller(&mut best, q);
                    break;
                }
            }
            for &thr in &thresholds {
                let w = linalg::column_span(&co_orbit, thr);
                let r = w.ncols();
                if r > 0 && r < n {
                    let full = linalg::unitary_completion(&w);
                    let q = full.columns(r, n - r).into_owned();
                    if accept(&q) {
                        keep_smaller(&mut best, q);
                        break;
                    }
                }
            }
        }
        if best.as_ref().is_some_and(|q| q.ncols() == 1) {
            break;
        }
    }
    match best {
        Some(q) => Ok(Some(q)),
        None => Err(Error::DecompositionFailure(format!(
            "algebra has dimension {} < {} but no invariant subspace was certified",
            alg.len(),
            n * n
        ))),
    }
}

fn keep_smaller(best: &mut Option<CMat>, q: CMat) {
    if best.as_ref().is_none_or(|b| q.ncols() < b.ncols()) {
        *best = Some(q);
    }
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn distinct_eigenvalues(m: &CMat) -> Vec<C64> {
    let scale = linalg::op_norm(m).max(f64::MIN_POSITIVE);
    let mut out: Vec<C64> = Vec::new();
    for z in linalg::eigenvalues(m) {
        if out.iter().all(|w| (w - z).norm() > 1e-6 * scale) {
            out.push(z);
        }
    }
    out
}

/// Block-upper-triangular form `S^{-1} X S` with irreducible diagonal blocks.
#[derive(Debug, Clone)]
pub struct JHDecomposition {
    /// Unitary change of basis.
    pub s: CMat,
    pub blocks: Vec<MatrixTuple>,
    pub block_sizes: Vec<usize>,
    /// Largest Frobenius norm below the block diagonal of `S^{-1} X_j S`.
    pub residual: f64,
}

impl JHDecomposition {
    /// `S^{-1} X S` for the tuple this decomposition was computed from.
    pub fn triangular_form(&self, x: &MatrixTuple) -> MatrixTuple {
        x.conjugate_unitary(&self.s)
    }
}

/// Norm of everything strictly below the diagonal blocks.
pub fn below_block_diagonal(t: &MatrixTuple, sizes: &[usize]) -> f64 {
    let mut starts = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in sizes {
        starts.push(acc);
        acc += s;
    }
    t.matrices()
        .iter()
        .map(|m| {
            let mut sq = 0.0;
            for (b, &start) in starts.iter().enumerate() {
                let end = start + sizes[b];
                for i in end..t.n() {
                    for j in start..end {
                        sq += m[(i, j)].norm_sqr();
                    }
                }
            }
            sq.sqrt()
        })
        .fold(0.0, f64::max)
}

pub fn jordan_holder(x: &MatrixTuple, cfg: &Config) -> Result<JHDecomposition> {
    let (s, sizes) = split_recursive(x, cfg)?;
    let t = x.conjugate_unitary(&s);
    let residual = below_block_diagonal(&t, &sizes);
    let scale = x.max_coord_norm();
    if residual > cfg.invariance_tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DecompositionFailure(format!(
            "triangularization residual {residual:e} exceeds tolerance"
        )));
    }
    let mut blocks = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &len in &sizes {
        blocks.push(t.block(start, len));
        start += len;
    }
    Ok(JHDecomposition { s, blocks, block_sizes: sizes, residual })
}

fn split_recursive(x: &MatrixTuple, cfg: &Config) -> Result<(CMat, Vec<usize>)> {
    let n = x.n();
    let Some(q) = find_invariant_subspace(x, cfg)? else {
        return Ok((CMat::identity(n, n), vec![n]));
    };
    let m = q.ncols();
    let u = linalg::unitary_completion(&q);
    let y = x.conjugate_unitary(&u);
    let (ua, mut sa) = split_recursive(&y.block(0, m), cfg)?;
    let (uc, sc) = split_recursive(&y.block(m, n - m), cfg)?;
    sa.extend(sc);
    Ok((u * linalg::block_diag(&[&ua, &uc]), sa))
}

/// The Jordan-Hoelder components, in discovery order.
pub fn sigma_jh(x: &MatrixTuple, cfg: &Config) -> Result<Vec<MatrixTuple>> {
    Ok(jordan_holder(x, cfg)?.blocks)
}

/// Outcome of [`are_similar`].
#[derive(Debug, Clone)]
pub enum Similarity {
    /// `S^{-1} X_j S = Y_j` for all `j`.
    Similar { s: CMat, residual: f64 },
    /// No nonzero intertwiner, or (for irreducible input) only singular ones.
    NotSimilar,
    /// Intertwiners exist but none found invertible; possible only for reducible input.
    NoWitness,
}

impl Similarity {
    pub fn witness(&self) -> Option<&CMat> {
        match self {
            Similarity::Similar { s, .. } => Some(s),
            _ => None,
        }
    }
}

/// Solves `X_j S = S Y_j` for all `j` and looks for an invertible solution.
pub fn are_similar(x: &MatrixTuple, y: &MatrixTuple, cfg: &Config) -> Result<Similarity> {
    if x.d() != y.d() || x.n() != y.n() {
        return Err(Error::DimensionMismatch(format!(
            "({}-tuple, level {}) vs ({}-tuple, level {})",
            x.d(),
            x.n(),
            y.d(),
            y.n()
        )));
    }
    let n = x.n();
    let n2 = n * n;
    let eye = CMat::identity(n, n);
    let mut stacked = CMat::zeros(x.d() * n2, n2);
    for j in 0..x.d() {
        // row-major vec(A S B) = (A (x) B^T) vec(S)
        let block = x.get(j).kronecker(&eye) - eye.kronecker(&y.get(j).transpose());
        stacked.view_mut((j * n2, 0), (n2, n2)).copy_from(&block);
    }
    // measured against the tuples, not the operator: for similar tuples the
    // operator itself may be pure roundoff
    let scale = x.max_coord_norm().max(y.max_coord_norm()).max(f64::MIN_POSITIVE);
    let kernel = linalg::null_space_abs(&stacked, cfg.rank_tol * scale);
    if kernel.ncols() == 0 {
        return Ok(Similarity::NotSimilar);
    }
    let mut candidates: Vec<CVec> = kernel.column_iter().map(|c| c.into_owned()).collect();
    if kernel.ncols() > 1 {
        let mut rng = rng::seeded(cfg.seed);
        for _ in 0..SIMILARITY_ATTEMPTS {
            let coeffs = CVec::from_fn(kernel.ncols(), |_, _| rng::complex_gaussian(&mut rng));
            candidates.push(&kernel * coeffs);
        }
    }
    for v in candidates {
        let s = linalg::unvec_rows(&v, n);
        if linalg::cond(&s) > cfg.cond_cap {
            continue;
        }
        let s = normalize_intertwiner(s);
        let residual = intertwining_residual(x, y, &s);
        if residual <= cfg.invariance_tol * scale {
            return Ok(Similarity::Similar { s, residual });
        }
    }
    if kernel.ncols() == 1 && (is_irreducible(x, cfg.rank_tol) || is_irreducible(y, cfg.rank_tol)) {
        return Ok(Similarity::NotSimilar);
    }
    Ok(Similarity::NoWitness)
}

/// `max_j ||S^{-1} X_j S - Y_j||`.
pub fn intertwining_residual(x: &MatrixTuple, y: &MatrixTuple, s: &CMat) -> f64 {
    match x.conjugate(s) {
        Ok(t) => t
            .matrices()
            .iter()
            .zip(y.matrices())
            .map(|(a, b)| linalg::op_norm(&(a - b)))
            .fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    }
}

/// Scale to `||S||_F = sqrt(n)` with real positive trace when the trace is not tiny.
fn normalize_intertwiner(s: CMat) -> CMat {
    let n = s.nrows() as f64;
    let f = s.norm();
    let mut s = s.unscale(f) * c(n.sqrt(), 0.0);
    let tr = s.trace();
    if tr.norm() > 1e-8 {
        s *= tr.conj() / tr.norm();
    }
    s
}

/// `tr(X^w)` for every word of length at most `max_len`, in canonical order.
pub fn word_traces(x: &MatrixTuple, max_len: usize) -> Vec<C64> {
    Word::all_up_to(x.d(), max_len)
        .iter()
        .map(|w| x.word_product(w.letters()).trace())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unit, ONE};

    fn cfg() -> Config {
        Config::default()
    }

    fn e12_e21() -> MatrixTuple {
        MatrixTuple::new(vec![unit(2, 0, 1), unit(2, 1, 0)]).unwrap()
    }

    #[test]
    fn matrix_units_generate_everything() {
        assert_eq!(generated_algebra(&e12_e21(), 1e-10).len(), 4);
        assert!(is_irreducible(&e12_e21(), 1e-10));
        assert!(find_invariant_subspace(&e12_e21(), &cfg()).unwrap().is_none());
    }

    #[test]
    fn single_matrix_is_reducible() {
        let mut r = rng::seeded(1);
        for n in 2..5 {
            let x = MatrixTuple::random(&mut r, 1, n);
            assert!(!is_irreducible(&x, 1e-10));
            assert!(generated_algebra(&x, 1e-10).len() <= n);
        }
    }

    #[test]
    fn jordan_block_invariant_line() {
        let j = MatrixTuple::new(vec![unit(2, 0, 1)]).unwrap();
        let q = find_invariant_subspace(&j, &cfg()).unwrap().unwrap();
        assert_eq!(q.ncols(), 1);
        assert!((q[(0, 0)].norm() - 1.0).abs() < 1e-10);
        assert!(q[(1, 0)].norm() < 1e-10);
    }

    #[test]
    fn zero_tuple_splits_into_scalars() {
        let z = MatrixTuple::zeros(2, 3);
        let jh = jordan_holder(&z, &cfg()).unwrap();
        assert_eq!(jh.block_sizes, vec![1, 1, 1]);
    }

    #[test]
    fn direct_sum_subspace_is_invariant() {
        let mut r = rng::seeded(2);
        let a = MatrixTuple::random(&mut r, 2, 2);
        let b = MatrixTuple::random(&mut r, 2, 3);
        let x = a.direct_sum(&b).unwrap();
        let q = find_invariant_subspace(&x, &cfg()).unwrap().unwrap();
        assert!(q.ncols() == 2 || q.ncols() == 3);
        assert!(invariance_residual(&x, &q) < 1e-8 * x.max_coord_norm());
    }

    #[test]
    fn irreducible_input_is_one_block() {
        let jh = jordan_holder(&e12_e21(), &cfg()).unwrap();
        assert_eq!(jh.block_sizes, vec![2]);
        assert!((jh.s.clone() - CMat::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn similar_to_own_conjugate() {
        let mut r = rng::seeded(3);
        let x = MatrixTuple::random(&mut r, 2, 3);
        let s0 = rng::well_conditioned(&mut r, 3, 0.5);
        let y = x.conjugate(&s0).unwrap();
        let Similarity::Similar { s, .. } = are_similar(&x, &y, &cfg()).unwrap() else {
            panic!("expected similarity")
        };
        assert!(intertwining_residual(&x, &y, &s) < 1e-8);
    }

    #[test]
    fn sign_flip_is_not_similar() {
        let x = e12_e21();
        let y = MatrixTuple::new(vec![unit(2, 0, 1), unit(2, 1, 0) * c(-1.0, 0.0)]).unwrap();
        assert!(matches!(are_similar(&x, &y, &cfg()).unwrap(), Similarity::NotSimilar));
        // the word z2 z1 separates them
        let tx = x.word_product(&[1, 0]).trace();
        let ty = y.word_product(&[1, 0]).trace();
        assert_eq!((tx, ty), (ONE, -ONE));
    }

    #[test]
    fn scalar_diagonal_components() {
        let vals = [c(0.1, 0.0), c(0.2, 0.5), c(-0.3, 0.0)];
        let x = MatrixTuple::new(vec![linalg::diag(&vals), linalg::diag(&[vals[2], vals[0], vals[1]])]).unwrap();
        let blocks = sigma_jh(&x, &cfg()).unwrap();
        assert_eq!(blocks.len(), 3);
        assert!(blocks.iter().all(|b| b.n() == 1));
        let mut got: Vec<f64> = blocks.iter().map(|b| b.get(0)[(0, 0)].re).collect();
        got.sort_by(f64::total_cmp);
        assert!((got[0] + 0.3).abs() < 1e-12 && (got[2] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn scalars_equal_up_to_roundoff_are_similar() {
        let x = MatrixTuple::scalar(&[c(0.3, 0.1), c(-0.7, 0.0)]).unwrap();
        let y = MatrixTuple::scalar(&[c(0.3 + 1e-16, 0.1), c(-0.7, 1e-16)]).unwrap();
        assert!(matches!(are_similar(&x, &y, &Config::default()).unwrap(), Similarity::Similar { .. }));
    }
}
