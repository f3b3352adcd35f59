//! Joint spectral radius and similarities to row contractions.
//!
//! `rho(X)` is the square root of the spectral radius of the completely
//! positive map `Psi_X(T) = sum_j X_j T X_j^*`. A tuple lies in the
//! similarity envelope of the open row ball exactly when `rho(X) < 1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, C64};
use crate::mattuple::MatrixTuple;
use crate::structure;

/// Inverse-iteration sweeps for the Perron eigenvector.
const PERRON_SWEEPS: usize = 6;
/// Halvings allowed in the off-diagonal scaling search (`t` down to about 1e-12).
const MAX_HALVINGS: usize = 40;

pub fn jsr(x: &MatrixTuple) -> f64 {
    x.cp_matrix().spectral_radius().sqrt()
}

/// `||Psi_X^k(I)||^{1/2k}` for `k = 1..=k_max`, by repeated application of `Psi_X`.
pub fn jsr_iterative(x: &MatrixTuple, k_max: usize) -> Vec<f64> {
    let n = x.n();
    let mut t = CMat::identity(n, n);
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(k_max);
    let mut dead = false;
    for k in 1..=k_max {
        if dead {
            out.push(0.0);
            continue;
        }
        t = x.apply_cp(&t);
        let norm = linalg::hermitian_max_eig(&t);
        if norm <= 0.0 {
            dead = true;
            out.push(0.0);
            continue;
        }
        log_scale += norm.ln();
        t.unscale_mut(norm);
        out.push((log_scale / (2.0 * k as f64)).exp());
    }
    out
}

/// Position of a radius relative to the unit sphere, given a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusClass {
    Inside,
    Boundary,
    Outside,
}

pub fn classify_radius(rho: f64, tol: f64) -> RadiusClass {
    if rho < 1.0 - tol {
        RadiusClass::Inside
    } else if rho <= 1.0 + tol {
        RadiusClass::Boundary
    } else {
        RadiusClass::Outside
    }
}

/// `Psi_X^k(I) -> 0`, decided through `rho(X) < 1 - boundary_tol`.
pub fn is_pure(x: &MatrixTuple, cfg: &Config) -> bool {
    jsr(x) < 1.0 - cfg.boundary_tol
}

/// Membership in the similarity envelope of the open row ball.
pub fn in_ball_envelope(x: &MatrixTuple, cfg: &Config) -> bool {
    is_pure(x, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    StrictContraction,
    Coisometry,
    MinimalNorm,
}

/// `target = S^{-1} X S`, with `residual = max_j ||X_j S - S target_j||`.
#[derive(Debug, Clone)]
pub struct SimilarityCertificate {
    pub s: CMat,
    pub target: MatrixTuple,
    pub kind: CertificateKind,
    pub residual: f64,
}

impl SimilarityCertificate {
    fn build(x: &MatrixTuple, s: CMat, kind: CertificateKind) -> Result<Self> {
        let target = x.conjugate(&s)?;
        let residual = x
            .matrices()
            .iter()
            .zip(target.matrices())
            .map(|(a, t)| linalg::op_norm(&(a * &s - &s * t)))
            .fold(0.0, f64::max);
        Ok(SimilarityCertificate { s, target, kind, residual })
    }
}

/// Strictly positive `A` with `Psi_X(A) = rho(X)^2 A`, normalized to trace `n`.
pub fn perron_eigenmatrix(x: &MatrixTuple) -> Result<(f64, CMat)> {
    let n = x.n();
    let cp = x.cp_matrix();
    let r = cp.spectral_radius();
    if n == 1 {
        return Ok((r, CMat::identity(1, 1)));
    }
    if r == 0.0 {
        return Err(Error::PerronFailure("completely positive map is nilpotent".into()));
    }
    let eig = cp.eigenvalues();
    let near = eig.iter().filter(|z| (*z - c(r, 0.0)).norm() <= 1e-8 * r).count();
    if near > 1 {
        return Err(Error::PerronFailure(format!(
            "eigenvalue {r} has numerical multiplicity {near}"
        )));
    }
    let n2 = n * n;
    let shift = r * (1.0 + 1e-10);
    let lu = (&cp.mat - CMat::identity(n2, n2) * c(shift, 0.0)).lu();
    let mut v = linalg::vec_rows(&CMat::identity(n, n));
    for _ in 0..PERRON_SWEEPS {
        v = lu
            .solve(&v)
            .ok_or_else(|| Error::PerronFailure("shifted operator is singular".into()))?;
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::PerronFailure("inverse iteration broke down".into()));
        }
        v.unscale_mut(norm);
    }
    let mut m = linalg::unvec_rows(&v, n);
    let tr = m.trace();
    if tr.norm() == 0.0 {
        return Err(Error::PerronFailure("eigenmatrix has zero trace".into()));
    }
    m *= tr.conj() / tr.norm();
    let mut a = (&m + m.adjoint()).scale(0.5);
    let tr = a.trace().re;
    a *= c(n as f64 / tr, 0.0);
    let (vals, _) = linalg::hermitian_eigen(&a);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = vals.iter().cloned().fold(0.0, f64::max);
    if min <= 1e-12 * max {
        return Err(Error::PerronFailure(format!(
            "eigenmatrix is not strictly positive (min eigenvalue {min:e})"
        )));
    }
    let defect = linalg::op_norm(&(x.apply_cp(&a) - &a * c(r, 0.0)));
    if defect > 1e-8 * r * max {
        return Err(Error::PerronFailure(format!("eigen-equation residual {defect:e}")));
    }
    Ok((r, a))
}

/// For irreducible `x`, `S = A^{1/2}` gives `||S^{-1} X S|| = rho(X)`.
pub fn minimal_norm_similarity(x: &MatrixTuple) -> Result<SimilarityCertificate> {
    let (_, a) = perron_eigenmatrix(x)?;
    let (s, _) = linalg::psd_sqrt_and_inv(&a)
        .ok_or_else(|| Error::PerronFailure("eigenmatrix square root failed".into()))?;
    SimilarityCertificate::build(x, s, CertificateKind::MinimalNorm)
}

/// A similarity `S` with `||S^{-1} X S|| < 1`, for `rho(X) < 1`.
///
/// Irreducible tuples use the Perron eigenmatrix directly. Reducible ones are
/// block-triangularized, each diagonal block is normalized the same way, and
/// the off-diagonal coupling is damped by `diag(I, tI, t^2 I, ...)`.
pub fn similarize_to_strict_contraction(x: &MatrixTuple, cfg: &Config) -> Result<SimilarityCertificate> {
    let rho = jsr(x);
    if rho >= 1.0 - cfg.boundary_tol {
        return Err(Error::NotPure { rho });
    }
    if structure::is_irreducible(x, cfg.rank_tol) {
        let mut cert = minimal_norm_similarity(x)?;
        cert.kind = CertificateKind::StrictContraction;
        if cert.target.row_norm() < 1.0 {
            return Ok(cert);
        }
        return Err(Error::PerronFailure(format!(
            "normalized tuple has row norm {} >= 1",
            cert.target.row_norm()
        )));
    }

    let jh = structure::jordan_holder(x, cfg)?;
    let mut block_s = Vec::with_capacity(jh.blocks.len());
    for b in &jh.blocks {
        let (_, a) = perron_eigenmatrix(b)?;
        let (s, _) = linalg::psd_sqrt_and_inv(&a)
            .ok_or_else(|| Error::PerronFailure("eigenmatrix square root failed".into()))?;
        block_s.push(s);
    }
    let refs: Vec<&CMat> = block_s.iter().collect();
    let base = &jh.s * linalg::block_diag(&refs);

    let mut t: f64 = 1.0;
    for _ in 0..=MAX_HALVINGS {
        let mut damp = Vec::with_capacity(x.n());
        for (i, &len) in jh.block_sizes.iter().enumerate() {
            damp.extend(std::iter::repeat_n(c(t.powi(i as i32), 0.0), len));
        }
        let s = &base * linalg::diag(&damp);
        let cert = SimilarityCertificate::build(x, s, CertificateKind::StrictContraction)?;
        if cert.target.row_norm() < 1.0 {
            return Ok(cert);
        }
        t *= 0.5;
    }
    Err(Error::DecompositionFailure(
        "off-diagonal scaling did not reach a strict contraction".into(),
    ))
}

/// A similarity onto a row coisometry, for irreducible `x` with `rho(X) = 1`.
pub fn similarize_to_coisometry(x: &MatrixTuple, cfg: &Config) -> Result<SimilarityCertificate> {
    if !structure::is_irreducible(x, cfg.rank_tol) {
        return Err(Error::NotIrreducible);
    }
    let rho = jsr(x);
    if (rho - 1.0).abs() > cfg.boundary_tol {
        return Err(Error::NotUnitRadius { rho });
    }
    let mut cert = minimal_norm_similarity(x)?;
    cert.kind = CertificateKind::Coisometry;
    Ok(cert)
}

/// Values of a polynomial curve `z -> sum_m z^m B_m` in matrix tuples.
#[derive(Debug, Clone)]
pub struct DiscCurve {
    coeffs: Vec<MatrixTuple>,
}

impl DiscCurve {
    pub fn new(coeffs: Vec<MatrixTuple>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidInput("curve needs at least one coefficient".into()));
        };
        if coeffs.iter().any(|b| b.d() != first.d() || b.n() != first.n()) {
            return Err(Error::DimensionMismatch("curve coefficients differ in shape".into()));
        }
        Ok(DiscCurve { coeffs })
    }

    pub fn at(&self, z: C64) -> MatrixTuple {
        let mut acc = self.coeffs.last().expect("non-empty").clone();
        for b in self.coeffs.iter().rev().skip(1) {
            let mats = acc
                .matrices()
                .iter()
                .zip(b.matrices())
                .map(|(a, m)| a * z + m)
                .collect();
            acc = MatrixTuple::new(mats).expect("same shape");
        }
        acc
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.coeffs[0].matrices().iter().all(|m| m.iter().all(|v| *v == c(0.0, 0.0)))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub radius: f64,
    pub samples: usize,
    pub rho_center: f64,
    /// Max of `rho(f(z))` over `|z| = radius`.
    pub rho_boundary_max: f64,
    /// Max of `rho(f(z))` over `|z| = 1`.
    pub rho_unit_circle_max: f64,
    /// Max of `rho(f(z)) / |z|` over `|z| = radius`, when `f(0) = 0`.
    pub schwarz_ratio: Option<f64>,
    pub max_principle_violation: bool,
    pub schwarz_violation: bool,
}

impl ProbeReport {
    pub fn violation(&self) -> bool {
        self.max_principle_violation || self.schwarz_violation
    }
}

/// Samples `rho` along a curve to check the maximum principle and the Schwarz bound.
///
/// The Schwarz bound is only asserted when the sampled unit-circle values
/// stay in the closed envelope.
pub fn max_principle_probe(curve: &DiscCurve, radius: f64, samples: usize, prop_tol: f64) -> ProbeReport {
    let samples = samples.max(1);
    let circle = |r: f64| -> Vec<f64> {
        (0..samples)
            .into_par_iter()
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / samples as f64;
                jsr(&curve.at(C64::from_polar(r, theta)))
            })
            .collect()
    };
    let on_r = circle(radius);
    let on_unit = circle(1.0);
    let rho_center = jsr(&curve.at(c(0.0, 0.0)));
    let rho_boundary_max = on_r.iter().cloned().fold(0.0, f64::max);
    let rho_unit_circle_max = on_unit.iter().cloned().fold(0.0, f64::max);
    let schwarz_ratio = (curve.vanishes_at_origin() && radius > 0.0).then(|| rho_boundary_max / radius);
    let envelope_ok = rho_unit_circle_max <= 1.0 + prop_tol;
    ProbeReport {
        radius,
        samples,
        rho_center,
        rho_boundary_max,
        rho_unit_circle_max,
        schwarz_ratio,
        max_principle_violation: rho_center > rho_boundary_max + prop_tol,
        schwarz_violation: envelope_ok && schwarz_ratio.is_some_and(|s| s > 1.0 + prop_tol),
    }
}
