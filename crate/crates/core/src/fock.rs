//! Truncated full Fock space over `C^d` and multiplier norms of free polynomials.
//!
//! Basis vectors are indexed by words of length at most `N` in canonical
//! order. The left creation operator `L_i` sends `e_w` to `e_{g_i w}` and
//! kills words of length `N`. For a polynomial `p`, `||p(L)||` on the
//! truncation is a lower approximation of its multiplier norm that is
//! nondecreasing in `N`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::freepoly::{FreePolynomial, Word};
use crate::linalg::{self, c, CMat, CVec, C64};
use crate::mattuple::MatrixTuple;
use crate::rng;
use crate::spectral;

const LANCZOS_MAX_STEPS: usize = 80;
/// Stop once successive Ritz values agree to this relative precision.
const LANCZOS_RTOL: f64 = 1e-12;
const ASCENT_ITERS: usize = 500;
const ASCENT_RANDOM_STARTS: usize = 4;

#[derive(Debug, Clone)]
pub struct FockTruncation {
    d: usize,
    cutoff: usize,
    /// `offsets[l]` is the index of the first word of length `l`; one extra entry holds `dim`.
    offsets: Vec<usize>,
    powers: Vec<usize>,
}

impl FockTruncation {
    pub fn build(d: usize, cutoff: usize, cap: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("need at least one generator".into()));
        }
        let mut offsets = Vec::with_capacity(cutoff + 2);
        let mut powers = Vec::with_capacity(cutoff + 1);
        let mut total: usize = 0;
        let mut pw: usize = 1;
        for l in 0..=cutoff {
            offsets.push(total);
            powers.push(pw);
            total = total.checked_add(pw).filter(|&t| t <= cap).ok_or(Error::SizeCap {
                requested: total.saturating_add(pw),
                cap,
            })?;
            if l < cutoff {
                pw = pw.checked_mul(d).ok_or(Error::SizeCap { requested: usize::MAX, cap })?;
            }
        }
        offsets.push(total);
        Ok(FockTruncation { d, cutoff, offsets, powers })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.cutoff + 1]
    }

    pub fn basis(&self) -> Vec<Word> {
        Word::all_up_to(self.d, self.cutoff)
    }

    pub fn index(&self, w: &Word) -> Option<usize> {
        (w.len() <= self.cutoff).then(|| self.offsets[w.len()] + w.lex_rank(self.d))
    }

    /// Index of `g_i w`, or `None` when `|w| = N`.
    pub fn shift_target(&self, i: usize, idx: usize) -> Option<usize> {
        let len = self.level_of(idx);
        if len >= self.cutoff {
            return None;
        }
        let rank = idx - self.offsets[len];
        Some(self.offsets[len + 1] + i * self.powers[len] + rank)
    }

    fn level_of(&self, idx: usize) -> usize {
        match self.offsets[..=self.cutoff].binary_search(&idx) {
            Ok(l) => l,
            Err(l) => l - 1,
        }
    }

    /// Dense matrix of the compressed creation operator `L_i`.
    pub fn shift_matrix(&self, i: usize) -> CMat {
        let dim = self.dim();
        let mut m = CMat::zeros(dim, dim);
        for col in 0..dim {
            if let Some(row) = self.shift_target(i, col) {
                m[(row, col)] = c(1.0, 0.0);
            }
        }
        m
    }

    /// The creation operators as a matrix tuple.
    pub fn shifts(&self) -> MatrixTuple {
        MatrixTuple::new((0..self.d).map(|i| self.shift_matrix(i)).collect()).expect("square")
    }

    /// `p(L)` on the truncation, stored column by column.
    pub fn operator(&self, p: &FreePolynomial) -> Result<SparseOperator> {
        if p.d() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables on a {}-generator Fock space",
                p.d(),
                self.d
            )));
        }
        let terms: Vec<(usize, usize, C64)> =
            p.terms().map(|(w, a)| (w.len(), w.lex_rank(self.d), *a)).collect();
        let dim = self.dim();
        let mut cols = Vec::with_capacity(dim);
        for idx in 0..dim {
            let len = self.level_of(idx);
            let rank = idx - self.offsets[len];
            let col: Vec<(usize, C64)> = terms
                .iter()
                .filter(|(klen, _, _)| klen + len <= self.cutoff)
                .map(|&(klen, krank, a)| (self.offsets[klen + len] + krank * self.powers[len] + rank, a))
                .collect();
            cols.push(col);
        }
        Ok(SparseOperator { dim, cols })
    }
}

/// Column-compressed square operator.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (j, col) in self.cols.iter().enumerate() {
            let vj = v[j];
            if vj == c(0.0, 0.0) {
                continue;
            }
            for &(i, a) in col {
                out[i] += a * vj;
            }
        }
        out
    }

    pub fn apply_adjoint(&self, v: &CVec) -> CVec {
        CVec::from_iterator(
            self.dim,
            self.cols.iter().map(|col| col.iter().map(|&(i, a)| a.conj() * v[i]).sum::<C64>()),
        )
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                m[(i, j)] += a;
            }
        }
        m
    }

    /// Largest singular value: dense SVD up to `dense_limit`, Lanczos on `A^* A` beyond.
    pub fn norm(&self, dense_limit: usize) -> f64 {
        if self.dim <= dense_limit {
            return linalg::op_norm(&self.to_dense());
        }
        self.lanczos_norm()
    }

    fn lanczos_norm(&self) -> f64 {
        let mut r = rng::seeded(0x01a2_c205);
        let mut q = CVec::from_fn(self.dim, |_, _| rng::complex_gaussian(&mut r));
        q.unscale_mut(q.norm());
        let mut basis: Vec<CVec> = Vec::new();
        let (mut alphas, mut betas): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
        let mut prev_theta = f64::NAN;
        let mut theta = 0.0;
        for step in 0..LANCZOS_MAX_STEPS.min(self.dim) {
            let mut w = self.apply_adjoint(&self.apply(&q));
            let alpha = q.dotc(&w).re;
            w.axpy(c(-alpha, 0.0), &q, c(1.0, 0.0));
            if let (Some(b), Some(prev)) = (betas.last(), basis.last()) {
                w.axpy(c(-*b, 0.0), prev, c(1.0, 0.0));
            }
            basis.push(q.clone());
            // full reorthogonalization, one modified Gram-Schmidt sweep
            for v in &basis {
                let p = v.dotc(&w);
                w.axpy(-p, v, c(1.0, 0.0));
            }
            alphas.push(alpha);
            theta = tridiagonal_max_eig(&alphas, &betas);
            let beta = w.norm();
            let converged = step > 2 && (theta - prev_theta).abs() <= LANCZOS_RTOL * theta.max(f64::MIN_POSITIVE);
            if beta <= 1e-13 * theta.max(1.0) || converged {
                break;
            }
            prev_theta = theta;
            betas.push(beta);
            q = w.unscale(beta);
        }
        theta.max(0.0).sqrt()
    }
}

fn tridiagonal_max_eig(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    let mut t = nalgebra::DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    t.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// `||p(L)||` on the Fock space truncated at word length `cutoff`.
pub fn multiplier_norm(p: &FreePolynomial, cutoff: usize, cfg: &Config) -> Result<f64> {
    let Some(degree) = p.degree() else {
        return Ok(0.0);
    };
    if cutoff < degree {
        return Err(Error::CutoffBelowDegree { cutoff, degree });
    }
    let fock = FockTruncation::build(p.d(), cutoff, cfg.fock_dim_cap)?;
    Ok(fock.operator(p)?.norm(cfg.dense_svd_limit))
}

/// A lower bound for the free pseudo-hyperbolic distance together with the polynomial achieving it.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaBound {
    pub value: f64,
    #[serde(serialize_with = "poly_as_text")]
    pub witness: FreePolynomial,
    /// Normalizing multiplier norm of the witness.
    pub witness_norm: f64,
    pub candidates: usize,
}

fn poly_as_text<S: serde::Serializer>(p: &FreePolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Lower bound for `delta_b(X, Y) = sup ||p(X) - p(Y)||` over polynomials of multiplier norm 1.
///
/// Candidates are the dictionary `{z_j}` (and `{z_j z_k}` for degree >= 2), the best
/// unit linear form found by alternating ascent, and `trials` Gaussian polynomials
/// per degree `1..=degree`, each normalized by its truncated multiplier norm at
/// cutoff `deg + 2`. Tuples of different levels are compared through
/// `X^{(+)m}` and `Y^{(+)n}`.
pub fn delta_lower_bound(
    x: &MatrixTuple,
    y: &MatrixTuple,
    degree: usize,
    trials: usize,
    seed: u64,
    cfg: &Config,
) -> Result<DeltaBound> {
    if x.d() != y.d() {
        return Err(Error::DimensionMismatch(format!("{}-tuple and {}-tuple", x.d(), y.d())));
    }
    for t in [x, y] {
        let rho = spectral::jsr(t);
        if rho >= 1.0 - cfg.boundary_tol {
            return Err(Error::NotPure { rho });
        }
    }
    if degree == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let (xa, ya) = if x.n() == y.n() {
        (x.clone(), y.clone())
    } else {
        (x.ampliate(y.n()), y.ampliate(x.n()))
    };
    let d = x.d();
    let gap = |p: &FreePolynomial| -> Result<f64> {
        Ok(linalg::op_norm(&(p.evaluate(&xa)? - p.evaluate(&ya)?)))
    };

    let mut best = DeltaBound {
        value: 0.0,
        witness: FreePolynomial::var(d, 0)?,
        witness_norm: 1.0,
        candidates: 0,
    };
    let consider = |p: FreePolynomial, norm: f64, value: f64, best: &mut DeltaBound| {
        best.candidates += 1;
        if value > best.value {
            best.value = value;
            best.witness = p;
            best.witness_norm = norm;
        }
    };

    for j in 0..d {
        let p = FreePolynomial::var(d, j)?;
        let v = gap(&p)?;
        consider(p, 1.0, v, &mut best);
    }
    if degree >= 2 {
        for j in 0..d {
            for k in 0..d {
                let p = FreePolynomial::monomial(d, Word::new(vec![j, k]), c(1.0, 0.0))?;
                let v = gap(&p)?;
                consider(p, 1.0, v, &mut best);
            }
        }
    }

    let diffs: Vec<CMat> = xa.matrices().iter().zip(ya.matrices()).map(|(a, b)| a - b).collect();
    let (coeffs, v) = best_linear_form(&diffs, seed);
    let p = FreePolynomial::from_terms(d, coeffs.iter().enumerate().map(|(j, a)| (Word::letter(j), *a)))?;
    consider(p, 1.0, v, &mut best);

    let jobs: Vec<(usize, usize)> = (0..trials).flat_map(|t| (1..=degree).map(move |e| (t, e))).collect();
    let sampled: Vec<Result<(FreePolynomial, f64, f64)>> = jobs
        .par_iter()
        .map(|&(t, e)| {
            let stream = ((t as u64) << 16) | e as u64;
            let mut r = rng::seeded(rng::derive_seed(seed, stream));
            let p = random_polynomial(&mut r, d, e)?;
            let norm = multiplier_norm(&p, e + 2, cfg)?;
            let v = if norm > 0.0 { gap(&p)? / norm } else { 0.0 };
            Ok((p, norm, v))
        })
        .collect();
    for s in sampled {
        let (p, norm, v) = s?;
        consider(p, norm, v, &mut best);
    }
    Ok(best)
}

/// Gaussian coefficients on every word of length `1..=degree`.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, d: usize, degree: usize) -> Result<FreePolynomial> {
    let words: Vec<Word> = (1..=degree).flat_map(|l| Word::all_of_length(d, l)).collect();
    FreePolynomial::from_terms(d, words.into_iter().map(|w| (w, rng::complex_gaussian(rng))))
}

/// Maximizes `||sum_j c_j D_j||` over unit `c` by alternating singular-vector updates.
fn best_linear_form(diffs: &[CMat], seed: u64) -> (Vec<C64>, f64) {
    let d = diffs.len();
    let mut starts: Vec<Vec<C64>> = (0..d)
        .map(|j| (0..d).map(|k| if k == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect();
    let mut r = rng::seeded(rng::derive_seed(seed, u64::MAX));
    for _ in 0..ASCENT_RANDOM_STARTS {
        let v: Vec<C64> = (0..d).map(|_| rng::complex_gaussian(&mut r)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        starts.push(v.into_iter().map(|z| z / n).collect());
    }
    let mut best = (starts[0].clone(), 0.0);
    for mut coeffs in starts {
        let mut value = 0.0;
        for _ in 0..ASCENT_ITERS {
            let m = diffs.iter().zip(&coeffs).fold(CMat::zeros(diffs[0].nrows(), diffs[0].ncols()), |acc, (dj, a)| acc + dj * *a);
            let svd = m.svd(true, true);
            let i = (0..svd.singular_values.len())
                .max_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
                .unwrap_or(0);
            let sigma = svd.singular_values[i];
            value = f64::max(value, sigma);
            let u = svd.u.expect("U").column(i).into_owned();
            let v = svd.v_t.expect("V^T").row(i).adjoint();
            let g: Vec<C64> = diffs.iter().map(|dj| u.dotc(&(dj * &v))).collect();
            let gn = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if gn == 0.0 {
                break;
            }
            let next: Vec<C64> = g.iter().map(|z| z.conj() / gn).collect();
            let improved = gn > value * (1.0 + 1e-15);
            value = value.max(gn);
            coeffs = next;
            if !improved {
                break;
            }
        }
        if value > best.1 {
            best = (coeffs, value);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freepoly::parse;

    #[test]
    fn one_letter_one_level() {
        let f = FockTruncation::build(1, 1, 100).unwrap();
        assert_eq!(f.dim(), 2);
        let l = f.shift_matrix(0);
        assert_eq!(l, linalg::unit(2, 1, 0));
    }

    #[test]
    fn two_letters_two_levels() {
        let f = FockTruncation::build(2, 2, 100).unwrap();
        assert_eq!(f.dim(), 7);
        let basis = f.basis();
        for (i, w) in basis.iter().enumerate() {
            assert_eq!(f.index(w), Some(i));
        }
        // L_1 e_{z2} = e_{z1 z2}
        let src = f.index(&Word::new(vec![1])).unwrap();
        let dst = f.index(&Word::new(vec![0, 1])).unwrap();
        assert_eq!(f.shift_target(0, src), Some(dst));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(FockTruncation::build(3, 12, 200_000), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn shifts_have_orthogonal_ranges() {
        let f = FockTruncation::build(3, 2, 100).unwrap();
        let ls: Vec<CMat> = (0..3).map(|i| f.shift_matrix(i)).collect();
        let mut proj = CMat::identity(f.dim(), f.dim());
        for k in f.offsets[2]..f.dim() {
            proj[(k, k)] = c(0.0, 0.0);
        }
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { proj.clone() } else { CMat::zeros(f.dim(), f.dim()) };
                assert_eq!(ls[i].adjoint() * &ls[j], expect);
            }
        }
    }

    #[test]
    fn operator_matches_dense_evaluation() {
        let f = FockTruncation::build(2, 3, 100).unwrap();
        let p = parse("1 - (0.5+1i)*z1*z2 + z2 + 3*z1*z1*z2", 2).unwrap();
        let dense = p.evaluate(&f.shifts()).unwrap();
        assert!(linalg::max_abs_diff(&dense, &f.operator(&p).unwrap().to_dense()) < 1e-14);
    }

    #[test]
    fn unit_and_commutator_norms() {
        let cfg = Config::default();
        assert!((multiplier_norm(&FreePolynomial::one(2), 0, &cfg).unwrap() - 1.0).abs() < 1e-15);
        let comm = parse("z1*z2 - z2*z1", 2).unwrap();
        for n in 2..=4 {
            let v = multiplier_norm(&comm, n, &cfg).unwrap();
            assert!((v - 2f64.sqrt()).abs() < 1e-12, "N = {n}: {v}");
        }
        assert!(matches!(multiplier_norm(&comm, 1, &cfg), Err(Error::CutoffBelowDegree { cutoff: 1, degree: 2 })));
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let mut r = rng::seeded(8);
        let p = random_polynomial(&mut r, 2, 3).unwrap();
        let op = FockTruncation::build(2, 6, 1000).unwrap().operator(&p).unwrap();
        let dense = op.norm(usize::MAX);
        let lanczos = op.norm(0);
        assert!((dense - lanczos).abs() < 1e-9 * dense, "{dense} vs {lanczos}");
    }

    #[test]
    fn delta_of_equal_points_is_zero() {
        let mut r = rng::seeded(9);
        let x = MatrixTuple::random(&mut r, 2, 2);
        let x = x.scale(c(0.5 / x.row_norm(), 0.0));
        let b = delta_lower_bound(&x, &x, 2, 3, 1, &Config::default()).unwrap();
        assert_eq!(b.value, 0.0);
    }

    #[test]
    fn delta_rejects_non_pure() {
        let x = MatrixTuple::scalar(&[c(1.0, 0.0)]).unwrap();
        let y = MatrixTuple::scalar(&[c(0.0, 0.0)]).unwrap();
        assert!(matches!(
            delta_lower_bound(&x, &y, 1, 1, 0, &Config::default()),
            Err(Error::NotPure { .. })
        ));
    }

    #[test]
    fn delta_ampliates_unequal_levels() {
        let x = MatrixTuple::scalar(&[c(0.3, 0.0), c(0.0, 0.1)]).unwrap();
        let mut r = rng::seeded(10);
        let y = MatrixTuple::random(&mut r, 2, 2);
        let y = y.scale(c(0.4 / y.row_norm(), 0.0));
        let b = delta_lower_bound(&x, &y, 1, 2, 3, &Config::default()).unwrap();
        assert!(b.value > 0.0 && b.value <= 2.0);
    }
}
