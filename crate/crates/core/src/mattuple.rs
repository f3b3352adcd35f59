//! Tuples of square complex matrices and the completely positive map they induce.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freepoly::Word;
use crate::linalg::{self, c, CMat, C64};

/// A `d`-tuple of `n x n` complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    n: usize,
    mats: Vec<CMat>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<CMat>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::InvalidInput("a tuple needs at least one matrix".into()));
        };
        let n = first.nrows();
        for (j, m) in mats.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "coordinate {j} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(MatrixTuple { n, mats })
    }

    pub fn zeros(d: usize, n: usize) -> Self {
        MatrixTuple { n, mats: vec![CMat::zeros(n, n); d.max(1)] }
    }

    /// The 1x1 tuple `(x_1, ..., x_d)`.
    pub fn scalar(values: &[C64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| CMat::from_element(1, 1, v)).collect())
    }

    /// Entries iid standard complex Gaussian.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Self {
        MatrixTuple { n, mats: (0..d).map(|_| crate::rng::gaussian_matrix(rng, n, n)).collect() }
    }

    pub fn d(&self) -> usize {
        self.mats.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize) -> &CMat {
        &self.mats[j]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.mats
    }

    pub fn into_matrices(self) -> Vec<CMat> {
        self.mats
    }

    /// Coordinatewise map.
    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        MatrixTuple { n: self.n, mats: self.mats.iter().map(f).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|m| m * s)
    }

    /// `X^w = X_{w_1} X_{w_2} ... X_{w_m}`; identity for the empty word.
    pub fn word_product(&self, letters: &[usize]) -> CMat {
        let mut acc = CMat::identity(self.n, self.n);
        for &i in letters {
            acc *= &self.mats[i];
        }
        acc
    }

    /// `sum_j X_j X_j^*`.
    pub fn gram(&self) -> CMat {
        let mut g = CMat::zeros(self.n, self.n);
        for m in &self.mats {
            g += m * m.adjoint();
        }
        g
    }

    /// Row operator norm `||sum_j X_j X_j^*||^{1/2}`.
    pub fn row_norm(&self) -> f64 {
        linalg::hermitian_max_eig(&self.gram()).max(0.0).sqrt()
    }

    /// Largest coordinate spectral norm; used as a magnitude scale.
    pub fn max_coord_norm(&self) -> f64 {
        self.mats.iter().map(linalg::op_norm).fold(0.0, f64::max)
    }

    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<Self> {
        self.check_same_d(other)?;
        Ok(MatrixTuple {
            n: self.n + other.n,
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| linalg::block_diag(&[a, b]))
                .collect(),
        })
    }

    /// `X^{(+)m}`: `m` copies on the diagonal.
    pub fn ampliate(&self, m: usize) -> Self {
        MatrixTuple {
            n: self.n * m,
            mats: self
                .mats
                .iter()
                .map(|a| {
                    let copies: Vec<&CMat> = std::iter::repeat_n(a, m).collect();
                    linalg::block_diag(&copies)
                })
                .collect(),
        }
    }

    /// `S^{-1} X S`, rejected only when `S` cannot be inverted at all.
    pub fn conjugate(&self, s: &CMat) -> Result<Self> {
        Ok(self.conjugate_reported(s, f64::INFINITY)?.tuple)
    }

    /// Conjugation with the condition number of `S` reported and flagged against `cond_cap`.
    pub fn conjugate_reported(&self, s: &CMat, cond_cap: f64) -> Result<Conjugation> {
        if s.nrows() != self.n || s.ncols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "conjugator is {}x{}, tuple level is {}",
                s.nrows(),
                s.ncols(),
                self.n
            )));
        }
        let cond = linalg::cond(s);
        if !cond.is_finite() || cond > 1e16 {
            return Err(Error::SingularConjugator { cond });
        }
        let inv = linalg::inverse(s).ok_or(Error::SingularConjugator { cond })?;
        let tuple = self.map(|m| &inv * m * s);
        Ok(Conjugation { tuple, cond, flagged: cond > cond_cap })
    }

    /// Conjugation by a unitary, using `U^*` as the inverse.
    pub fn conjugate_unitary(&self, u: &CMat) -> Self {
        let uh = u.adjoint();
        self.map(|m| &uh * m * u)
    }

    /// The row `X^(k)` of all `d^k` products of length `k`, in canonical word order.
    pub fn amplification(&self, k: usize, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("amplification order must be at least 1".into()));
        }
        let count = (self.d() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if count > cap as u128 {
            return Err(Error::SizeCap { requested: count.min(usize::MAX as u128) as usize, cap });
        }
        let mats = Word::all_of_length(self.d(), k)
            .iter()
            .map(|w| self.word_product(w.letters()))
            .collect();
        Ok(MatrixTuple { n: self.n, mats })
    }

    /// `Psi_X(T) = sum_j X_j T X_j^*`.
    pub fn apply_cp(&self, t: &CMat) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for m in &self.mats {
            out += m * t * m.adjoint();
        }
        out
    }

    pub fn cp_matrix(&self) -> CPMatrix {
        let n2 = self.n * self.n;
        let mut mat = CMat::zeros(n2, n2);
        for m in &self.mats {
            mat += m.kronecker(&m.map(|z| z.conj()));
        }
        CPMatrix { n: self.n, mat }
    }

    /// `||sum_j X_j X_j^* - I|| <= tol`.
    pub fn is_coisometry(&self, tol: f64) -> bool {
        self.coisometry_defect() <= tol
    }

    pub fn coisometry_defect(&self) -> f64 {
        linalg::op_norm(&(self.gram() - CMat::identity(self.n, self.n)))
    }

    /// Coordinate mixing `Y_i = sum_j A_{ij} X_j` for an `e x d` matrix `A`.
    pub fn linear_map(&self, a: &CMat) -> Result<Self> {
        if a.ncols() != self.d() || a.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} coordinate map applied to a {}-tuple",
                a.nrows(),
                a.ncols(),
                self.d()
            )));
        }
        let mats = (0..a.nrows())
            .map(|i| {
                let mut acc = CMat::zeros(self.n, self.n);
                for (j, m) in self.mats.iter().enumerate() {
                    acc += m * a[(i, j)];
                }
                acc
            })
            .collect();
        Ok(MatrixTuple { n: self.n, mats })
    }

    /// Principal sub-tuple on rows/columns `start..start+len`.
    pub fn block(&self, start: usize, len: usize) -> Self {
        MatrixTuple {
            n: len,
            mats: self.mats.iter().map(|m| m.view((start, start), (len, len)).into_owned()).collect(),
        }
    }

    fn check_same_d(&self, other: &MatrixTuple) -> Result<()> {
        if self.d() != other.d() {
            return Err(Error::DimensionMismatch(format!(
                "{}-tuple and {}-tuple",
                self.d(),
                other.d()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> TupleJson {
        TupleJson {
            d: self.d(),
            n: self.n,
            matrices: self
                .mats
                .iter()
                .map(|m| {
                    (0..self.n)
                        .map(|i| (0..self.n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TupleJson) -> Result<Self> {
        if j.matrices.len() != j.d {
            return Err(Error::InvalidInput(format!(
                "declared d = {} but {} matrices given",
                j.d,
                j.matrices.len()
            )));
        }
        let mut mats = Vec::with_capacity(j.d);
        for (k, rows) in j.matrices.iter().enumerate() {
            if rows.len() != j.n || rows.iter().any(|r| r.len() != j.n) {
                return Err(Error::InvalidInput(format!("matrix {k} is not {0}x{0}", j.n)));
            }
            if rows.iter().flatten().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("matrix {k} has non-finite entries")));
            }
            mats.push(CMat::from_fn(j.n, j.n, |a, b| c(rows[a][b][0], rows[a][b][1])));
        }
        if j.n == 0 {
            return Err(Error::InvalidInput("level n must be positive".into()));
        }
        MatrixTuple::new(mats)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("finite entries serialize")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

/// Serialized tuple: `{"d": .., "n": .., "matrices": [[[[re, im], ..], ..], ..]}`, rows first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleJson {
    pub d: usize,
    pub n: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone)]
pub struct Conjugation {
    pub tuple: MatrixTuple,
    pub cond: f64,
    /// Condition number exceeded the configured cap.
    pub flagged: bool,
}

/// `sum_j X_j (x) conj(X_j)`, the matrix of `Psi_X` in the basis `E11, E12, ..., Enn`
/// (row-major vectorization).
#[derive(Debug, Clone, PartialEq)]
pub struct CPMatrix {
    pub n: usize,
    pub mat: CMat,
}

impl CPMatrix {
    pub fn apply(&self, t: &CMat) -> CMat {
        linalg::unvec_rows(&(&self.mat * linalg::vec_rows(t)), self.n)
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        linalg::eigenvalues(&self.mat)
    }

    pub fn spectral_radius(&self) -> f64 {
        linalg::spectral_radius(&self.mat)
    }
}
