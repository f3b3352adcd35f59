//! Noncommutative varieties cut out by explicit lists of free polynomials.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::freepoly::{parse, FreePolynomial, Word};
use crate::linalg::{self, c, CMat, C64};
use crate::mattuple::MatrixTuple;
use crate::rng;
use crate::spectral;
use crate::structure;

/// Largest order searched when recognizing roots of unity.
const MAX_ROOT_ORDER: usize = 64;
const ROOT_TOL: f64 = 1e-10;

/// Generators of a two-sided ideal; the variety is their common zero set.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSpec {
    d: usize,
    generators: Vec<FreePolynomial>,
    homogeneous: bool,
}

impl IdealSpec {
    pub fn new(d: usize, generators: Vec<FreePolynomial>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.d() != d) {
            return Err(Error::DimensionMismatch(format!(
                "generator in {} variables for an ideal in {d}",
                g.d()
            )));
        }
        let homogeneous = generators.iter().all(FreePolynomial::is_homogeneous);
        Ok(IdealSpec { d, generators, homogeneous })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[FreePolynomial] {
        &self.generators
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn from_json(j: &VarietyJson) -> Result<Self> {
        let gens = j
            .generators
            .iter()
            .map(|t| parse(t, j.d))
            .collect::<Result<Vec<_>>>()?;
        let spec = IdealSpec::new(j.d, gens)?;
        if let Some(claimed) = j.homogeneous {
            if claimed != spec.homogeneous {
                return Err(Error::InvalidInput(format!(
                    "homogeneous flag {claimed} contradicts the generators"
                )));
            }
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> VarietyJson {
        VarietyJson {
            d: self.d,
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
            homogeneous: Some(self.homogeneous),
        }
    }

    /// Largest relative relation residual `||g(X)|| / scale(g, X)`.
    pub fn relation_residual(&self, x: &MatrixTuple) -> Result<f64> {
        if x.d() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "{}-tuple tested against an ideal in {} variables",
                x.d(),
                self.d
            )));
        }
        let norm = x.max_coord_norm();
        let mut worst: f64 = 0.0;
        for g in &self.generators {
            let value = linalg::op_norm(&g.evaluate(x)?);
            if value == 0.0 {
                continue;
            }
            let scale: f64 = g.terms().map(|(w, a)| a.norm() * norm.powi(w.len() as i32)).sum();
            worst = worst.max(if scale > 0.0 { value / scale } else { f64::INFINITY });
        }
        Ok(worst)
    }
}

/// `{"d": .., "generators": ["z1*z2 - z2*z1", ..], "homogeneous": optional}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarietyJson {
    pub d: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homogeneous: Option<bool>,
}

/// Every generator vanishes at `x`, relative to `sum_k |a_k| ||X||^{|k|}`.
pub fn vanishes_on(spec: &IdealSpec, x: &MatrixTuple, tol: f64) -> Result<bool> {
    Ok(spec.relation_residual(x)? <= tol)
}

/// Membership in the similarity envelope of a homogeneous variety:
/// the relations hold and the joint spectral radius is below 1.
pub fn in_envelope(spec: &IdealSpec, x: &MatrixTuple, cfg: &Config) -> Result<bool> {
    if !spec.homogeneous {
        return Err(Error::NonHomogeneousSpec);
    }
    Ok(vanishes_on(spec, x, cfg.relation_tol)? && spectral::in_ball_envelope(x, cfg))
}

/// `z1 z2 - q z2 z1`.
pub fn qcomm_spec(q: C64) -> IdealSpec {
    let g = FreePolynomial::from_terms(
        2,
        [(Word::new(vec![0, 1]), c(1.0, 0.0)), (Word::new(vec![1, 0]), -q)],
    )
    .expect("two variables");
    IdealSpec::new(2, vec![g]).expect("two variables")
}

/// `(z1 - z2) z2 - q z2 (z1 - z2)`.
pub fn wcomm_spec(q: C64) -> IdealSpec {
    let z1 = FreePolynomial::var(2, 0).expect("index 0");
    let z2 = FreePolynomial::var(2, 1).expect("index 1");
    let diff = z1.sub(&z2).expect("same d");
    let g = diff
        .mul(&z2)
        .and_then(|l| z2.mul(&diff).map(|r| (l, r)))
        .and_then(|(l, r)| l.sub(&r.scale(q)))
        .expect("same d");
    IdealSpec::new(2, vec![g]).expect("two variables")
}

/// The variety of `z1^2`.
pub fn square_zero_spec() -> IdealSpec {
    let g = FreePolynomial::monomial(2, Word::new(vec![0, 0]), c(1.0, 0.0)).expect("two variables");
    IdealSpec::new(2, vec![g]).expect("two variables")
}

/// Smallest `k` with `q^k = 1`, if `q` is a root of unity of order at most 64.
pub fn root_of_unity_order(q: C64) -> Option<usize> {
    if (q.norm() - 1.0).abs() > ROOT_TOL {
        return None;
    }
    let mut p = c(1.0, 0.0);
    for k in 1..=MAX_ROOT_ORDER {
        p *= q;
        if (p - c(1.0, 0.0)).norm() <= ROOT_TOL {
            return Some(k);
        }
    }
    None
}

/// The `k x k` irreducible point `(lambda diag(1, q, .., q^{k-1}), cyclic shift with corner mu)`
/// for `q` primitive of order `k`.
pub fn qcomm_canonical_irreducible(q: C64, lambda: C64, mu: C64) -> Result<MatrixTuple> {
    let k = root_of_unity_order(q).ok_or_else(|| Error::NotRootOfUnity(q.to_string()))?;
    if lambda == c(0.0, 0.0) || mu == c(0.0, 0.0) {
        return Err(Error::InvalidInput("lambda and mu must be nonzero".into()));
    }
    let powers: Vec<C64> = (0..k).map(|i| lambda * q.powu(i as u32)).collect();
    let x = linalg::diag(&powers);
    let mut y = CMat::zeros(k, k);
    for i in 1..k {
        y[(i, i - 1)] = c(1.0, 0.0);
    }
    y[(0, k - 1)] += mu;
    MatrixTuple::new(vec![x, y])
}

/// The coordinate map `(X1, X2) -> (X1 + X2/sqrt 2, X2/sqrt 2)`.
pub fn angle_change_map(x: &MatrixTuple) -> Result<MatrixTuple> {
    if x.d() != 2 {
        return Err(Error::DimensionMismatch(format!("angle change needs a pair, got a {}-tuple", x.d())));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    x.linear_map(&linalg::from_real_rows(&[&[1.0, s], &[0.0, s]]))
}

#[derive(Debug, Clone, Serialize)]
pub struct ReducibilityReport {
    pub q: [f64; 2],
    pub level: usize,
    pub trials: usize,
    pub root_order: Option<usize>,
    pub irreducible_found: usize,
    pub max_relation_residual: f64,
    /// Whether irreducible points are expected at this level (level 1, or level = order of `q`).
    pub expected_irreducible: bool,
    pub consistent: bool,
}

/// Samples points of the `q`-commutation variety at level `n` and counts irreducible ones.
///
/// Half of the samples are conjugated direct sums of eigenvalue chains
/// `lambda, lambda q, lambda q^2, ..` with weighted shifts (closed into a cycle
/// when the chain length equals the order of `q`); the other half keep the same
/// diagonal and fill every entry of `Y` permitted by `x_i = q x_j` at random.
pub fn qcomm_reducibility_probe(q: C64, n: usize, trials: usize, seed: u64, cfg: &Config) -> Result<ReducibilityReport> {
    if n < 2 {
        return Err(Error::InvalidInput("probe level must be at least 2".into()));
    }
    let order = root_of_unity_order(q);
    let spec = qcomm_spec(q);
    let mut found = 0;
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let mut r = rng::seeded(rng::derive_seed(seed, t as u64));
        let point = sample_qcomm_point(&mut r, q, n, order, t % 2 == 1);
        let s = rng::well_conditioned(&mut r, n, 0.3);
        let point = point.conjugate(&s)?;
        worst = worst.max(spec.relation_residual(&point)?);
        if structure::is_irreducible(&point, cfg.rank_tol) {
            found += 1;
        }
    }
    let expected = order == Some(n);
    Ok(ReducibilityReport {
        q: [q.re, q.im],
        level: n,
        trials,
        root_order: order,
        irreducible_found: found,
        max_relation_residual: worst,
        expected_irreducible: expected,
        consistent: expected || found == 0,
    })
}

fn sample_qcomm_point<R: Rng + ?Sized>(r: &mut R, q: C64, n: usize, order: Option<usize>, fill: bool) -> MatrixTuple {
    // random composition of n into chains, each at most the order of q
    let max_len = order.unwrap_or(n).min(n);
    let mut chains = Vec::new();
    let mut left = n;
    while left > 0 {
        let len = r.random_range(1..=left.min(max_len));
        chains.push(len);
        left -= len;
    }
    let mut diag = Vec::with_capacity(n);
    let mut y = CMat::zeros(n, n);
    let mut start = 0;
    for &len in &chains {
        let lambda = rng::annulus(r, 0.2, 1.0);
        for i in 0..len {
            diag.push(lambda * q.powu(i as u32));
            if i > 0 {
                y[(start + i, start + i - 1)] = rng::annulus(r, 0.2, 1.0);
            }
        }
        if Some(len) == order && len > 1 {
            y[(start, start + len - 1)] = rng::annulus(r, 0.2, 1.0);
        }
        start += len;
    }
    if fill {
        let scale = diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..n {
            for j in 0..n {
                if (diag[i] - q * diag[j]).norm() <= 1e-12 * scale {
                    y[(i, j)] = rng::complex_gaussian(r);
                }
            }
        }
    }
    MatrixTuple::new(vec![linalg::diag(&diag), y]).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_rows, unit};

    #[test]
    fn special_q_values() {
        assert_eq!(qcomm_spec(c(1.0, 0.0)).generators()[0], parse("z1*z2 - z2*z1", 2).unwrap());
        assert_eq!(qcomm_spec(c(0.0, 0.0)).generators()[0], parse("z1*z2", 2).unwrap());
        let q = c(0.3, -0.7);
        let expanded = parse("z1*z2 - z2*z2", 2)
            .unwrap()
            .sub(&parse("z2*z1 - z2*z2", 2).unwrap().scale(q))
            .unwrap();
        assert_eq!(wcomm_spec(q).generators()[0], expanded);
        assert!(wcomm_spec(q).is_homogeneous());
    }

    #[test]
    fn square_zero_variety() {
        let x = MatrixTuple::new(vec![unit(2, 0, 1), from_rows(&[&[c(0.1, 0.0), c(3.0, 0.0)], &[c(-1.0, 2.0), c(0.0, 0.0)]])]).unwrap();
        assert!(vanishes_on(&square_zero_spec(), &x, 1e-12).unwrap());
        assert!(vanishes_on(&square_zero_spec(), &MatrixTuple::zeros(2, 3), 1e-12).unwrap());
    }

    #[test]
    fn non_homogeneous_envelope_rejected() {
        let spec = IdealSpec::new(2, vec![parse("z1 - 1", 2).unwrap()]).unwrap();
        assert!(!spec.is_homogeneous());
        let x = MatrixTuple::zeros(2, 1);
        assert!(matches!(in_envelope(&spec, &x, &Config::default()), Err(Error::NonHomogeneousSpec)));
    }

    #[test]
    fn json_homogeneity_is_verified() {
        let ok = VarietyJson { d: 2, generators: vec!["x*y - y*x".into()], homogeneous: Some(true) };
        assert!(IdealSpec::from_json(&ok).unwrap().is_homogeneous());
        let bad = VarietyJson { d: 2, generators: vec!["x*y - 1".into()], homogeneous: Some(true) };
        assert!(IdealSpec::from_json(&bad).is_err());
    }

    #[test]
    fn root_orders() {
        assert_eq!(root_of_unity_order(c(-1.0, 0.0)), Some(2));
        assert_eq!(root_of_unity_order(c(0.0, 1.0)), Some(4));
        assert_eq!(root_of_unity_order(C64::from_polar(1.0, std::f64::consts::TAU / 3.0)), Some(3));
        assert_eq!(root_of_unity_order(C64::from_polar(1.0, 1.0)), None);
        assert_eq!(root_of_unity_order(c(0.5, 0.0)), None);
        assert!(matches!(
            qcomm_canonical_irreducible(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)),
            Err(Error::NotRootOfUnity(_))
        ));
    }

    #[test]
    fn angle_change_basics() {
        let z = angle_change_map(&MatrixTuple::zeros(2, 2)).unwrap();
        assert_eq!(z, MatrixTuple::zeros(2, 2));
        assert!(angle_change_map(&MatrixTuple::zeros(3, 2)).is_err());
    }
}
