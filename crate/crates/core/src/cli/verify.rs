//! The reproduction harness behind `ncball verify-paper`.
//!
//! Every check compares one computed number against an expected value under a
//! stated relation and tolerance. Checks run in parallel; the report keeps a
//! fixed order.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::fock;
use crate::freepoly::parse;
use crate::linalg::{self, c, C64};
use crate::mattuple::MatrixTuple;
use crate::rng::{self, derive_seed};
use crate::spectral;
use crate::structure;
use crate::variety;
use crate::witnesses;
use crate::Result;

/// How `computed` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `|computed - expected| <= tolerance`
    Equal,
    /// `computed <= expected + tolerance`
    AtMost,
    /// `computed >= expected - tolerance`
    AtLeast,
}

impl Relation {
    fn holds(self, computed: f64, expected: f64, tol: f64) -> bool {
        match self {
            Relation::Equal => (computed - expected).abs() <= tol,
            Relation::AtMost => computed <= expected + tol,
            Relation::AtLeast => computed >= expected - tol,
        }
    }

    /// A perturbation that breaks the relation, used by the harness self-test.
    fn spoil(self, computed: f64) -> f64 {
        match self {
            Relation::Equal | Relation::AtMost => computed + 1.0,
            Relation::AtLeast => computed - 1.0 - computed.abs(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub description: String,
    pub expected: f64,
    pub computed: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }
}

struct Spec {
    id: &'static str,
    anchor: &'static str,
    description: &'static str,
    expected: f64,
    relation: Relation,
    tolerance: f64,
    compute: fn(&Config) -> Result<f64>,
}

/// Ids of all checks, in report order.
pub fn check_ids() -> Vec<&'static str> {
    specs().iter().map(|s| s.id).collect()
}

/// Runs every check whose id contains `filter`.
///
/// `inject` names checks whose computed value is deliberately spoiled, so that
/// a caller can confirm the harness reports failures.
pub fn run(cfg: &Config, filter: Option<&str>, inject: &[String]) -> VerifyReport {
    let selected: Vec<Spec> = specs()
        .into_iter()
        .filter(|s| filter.is_none_or(|f| s.id.contains(f)))
        .collect();
    let checks: Vec<Check> = selected
        .par_iter()
        .map(|s| {
            let (mut computed, failed_with) = match (s.compute)(cfg) {
                Ok(v) => (v, None),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            if inject.iter().any(|i| i == s.id) {
                computed = s.relation.spoil(computed);
            }
            let pass = failed_with.is_none() && s.relation.holds(computed, s.expected, s.tolerance);
            let description = match failed_with {
                Some(e) => format!("{} (error: {e})", s.description),
                None => s.description.to_string(),
            };
            Check {
                id: s.id.to_string(),
                anchor: s.anchor.to_string(),
                description,
                expected: s.expected,
                computed,
                relation: s.relation,
                tolerance: s.tolerance,
                pass,
            }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    VerifyReport { checks, passed, failed, ok: failed == 0 }
}

const Q_COMM: &str = "q-commutation example at q = -1 and its separating points";
const Q_COMM_PROP: &str = "q-commutation: irreducible points exist exactly at the order of q";
const X2: &str = "square-zero variety {x^2 = 0}: boundary points and their linear images";
const HOLO: &str = "(1 - z1)^2 is invertible on the ball but its inverse is not similarity-bounded";
const FOCK: &str = "multiplier norm of a homogeneous polynomial is its coefficient l2 norm";
const DELTA: &str = "pseudo-hyperbolic distance to the origin is the row norm";

fn specs() -> Vec<Spec> {
    vec![
        Spec {
            id: "q-comm.psi-matrix",
            anchor: Q_COMM,
            description: "Psi for (X0, Y0) in the basis E11, E12, E21, E22 equals the printed matrix",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 1e-15,
            compute: |_| {
                let psi = witnesses::x0_y0().cp_matrix();
                Ok(linalg::max_abs_diff(&psi.mat, &witnesses::x0_y0_cp_matrix()))
            },
        },
        Spec {
            id: "q-comm.psi-radius",
            anchor: Q_COMM,
            description: "largest eigenvalue modulus of Psi for (X0, Y0) is 2",
            expected: 2.0,
            relation: Relation::Equal,
            tolerance: 1e-9,
            compute: |_| Ok(witnesses::x0_y0().cp_matrix().spectral_radius()),
        },
        Spec {
            id: "q-comm.angle-radius",
            anchor: Q_COMM,
            description: "largest eigenvalue modulus of Psi for the angle-changed pair is sqrt(3)",
            expected: 3f64.sqrt(),
            relation: Relation::Equal,
            tolerance: 1e-9,
            compute: |_| Ok(variety::angle_change_map(&witnesses::x0_y0())?.cp_matrix().spectral_radius()),
        },
        Spec {
            id: "q-comm.jsr",
            anchor: Q_COMM,
            description: "joint spectral radius of (X0, Y0) is sqrt(2), so it lies outside the ball",
            expected: 2f64.sqrt(),
            relation: Relation::Equal,
            tolerance: 1e-9,
            compute: |_| Ok(spectral::jsr(&witnesses::x0_y0())),
        },
        Spec {
            id: "q-comm.separating-point",
            anchor: Q_COMM,
            description: "number of (p, q) grid pairs where the separating point misclassifies membership in V_p",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 0.0,
            compute: |cfg| {
                let grid = [-2.0, -0.5, 0.3, 0.5, 2.0, 3.0, 5.0, -3.0, 0.7, 1.5];
                let mut wrong = 0;
                for &q in &grid {
                    let x = witnesses::separating_point(c(q, 0.0));
                    for &p in &grid {
                        let member = variety::vanishes_on(&variety::qcomm_spec(c(p, 0.0)), &x, cfg.relation_tol)?;
                        let expected = if p == q {
                            Some(true)
                        } else if (p * q - 1.0).abs() < 1e-12 {
                            None
                        } else {
                            Some(false)
                        };
                        if expected.is_some_and(|e| e != member) {
                            wrong += 1;
                        }
                    }
                }
                Ok(wrong as f64)
            },
        },
        Spec {
            id: "q-comm.canonical-k2",
            anchor: Q_COMM_PROP,
            description: "canonical points at q = -1 failing the relation (1e-12) or irreducibility, out of 20",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 0.0,
            compute: |cfg| canonical_failures(2, cfg),
        },
        Spec {
            id: "q-comm.canonical-k3",
            anchor: Q_COMM_PROP,
            description: "canonical points at a primitive cube root failing the relation or irreducibility, out of 20",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 0.0,
            compute: |cfg| canonical_failures(3, cfg),
        },
        Spec {
            id: "q-comm.canonical-k4",
            anchor: Q_COMM_PROP,
            description: "canonical points at q = i failing the relation or irreducibility, out of 20",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 0.0,
            compute: |cfg| canonical_failures(4, cfg),
        },
        Spec {
            id: "q-comm.non-root-reducible",
            anchor: Q_COMM_PROP,
            description: "irreducible samples found for q = e at levels 2, 3, 4 (50 trials each)",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 0.0,
            compute: |cfg| {
                let q = c(1f64.exp(), 0.0);
                let mut found = 0;
                for n in 2..=4 {
                    let r = variety::qcomm_reducibility_probe(q, n, 50, derive_seed(cfg.seed, n as u64), cfg)?;
                    found += r.irreducible_found;
                }
                Ok(found as f64)
            },
        },
        Spec {
            id: "x2.coisometry",
            anchor: X2,
            description: "row norm of (E12, E21)",
            expected: 1.0,
            relation: Relation::Equal,
            tolerance: 1e-12,
            compute: |_| Ok(witnesses::matrix_unit_pair().row_norm()),
        },
        Spec {
            id: "x2.coisometry-radius",
            anchor: X2,
            description: "joint spectral radius of (E12, E21)",
            expected: 1.0,
            relation: Relation::Equal,
            tolerance: 1e-9,
            compute: |_| Ok(spectral::jsr(&witnesses::matrix_unit_pair())),
        },
        Spec {
            id: "x2.radius-family",
            anchor: X2,
            description: "max over delta in {0.1..0.9} of |jsr - sqrt(delta)| for the boundary family",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 1e-9,
            compute: |cfg| {
                let mut worst: f64 = 0.0;
                for (delta, x) in square_zero_family(0.7) {
                    worst = worst.max((spectral::jsr(&x) - delta.sqrt()).abs());
                    if !variety::vanishes_on(&variety::square_zero_spec(), &x, cfg.relation_tol)? {
                        return Ok(f64::INFINITY);
                    }
                }
                Ok(worst)
            },
        },
        Spec {
            id: "x2.image-radius",
            anchor: X2,
            description: "max |jsr - sqrt(delta) (delta^2 + |a|^2 eps^2)^(1/4)| for images under (aX, Y)",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 1e-9,
            compute: |_| image_radius_error(0.0),
        },
        Spec {
            id: "x2.image-radius-general",
            anchor: X2,
            description: "max |jsr - sqrt(delta) ((delta + r eps)^2 + |a|^2 eps^2)^(1/4)| for images under (aX, c X + Y), |c| = 0.4",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 1e-9,
            compute: |_| image_radius_error(0.4),
        },
        Spec {
            id: "holo.closed-form",
            anchor: HOLO,
            description: "max deviation of (1 - z1)^2 on (diag(lambda, mu), a E12) from diag((1 - lambda)^2, (1 - mu)^2)",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 1e-12,
            compute: |_| {
                let f = parse("(1-z1)^2", 2)?;
                let mut worst: f64 = 0.0;
                for lambda in HOLO_LAMBDAS {
                    let fx = f.evaluate(&witnesses::diagonal_shift_point(lambda, HOLO_MU))?;
                    let closed = linalg::diag(&[c((1.0 - lambda).powi(2), 0.0), c((1.0 - HOLO_MU).powi(2), 0.0)]);
                    worst = worst.max(linalg::max_abs_diff(&fx, &closed));
                }
                Ok(worst)
            },
        },
        Spec {
            id: "holo.unbounded",
            anchor: HOLO,
            description: "min over lambda in {0.9, 0.99, 0.999} of ||f(X)^-1 X2 f(X)|| / ((1 - mu)^2 / (2 (1 - lambda)))",
            expected: 1.0,
            relation: Relation::AtLeast,
            tolerance: 0.0,
            compute: |_| {
                let norms = holo_norms()?;
                Ok(HOLO_LAMBDAS
                    .iter()
                    .zip(&norms)
                    .map(|(l, n)| n / (0.5 * (1.0 - HOLO_MU).powi(2) / (1.0 - l)))
                    .fold(f64::INFINITY, f64::min))
            },
        },
        Spec {
            id: "holo.growth",
            anchor: HOLO,
            description: "min ratio of ||f(X)^-1 X2 f(X)|| between consecutive lambda steps",
            expected: 8.0,
            relation: Relation::AtLeast,
            tolerance: 0.0,
            compute: |_| {
                let norms = holo_norms()?;
                Ok(norms.windows(2).map(|w| w[1] / w[0]).fold(f64::INFINITY, f64::min))
            },
        },
        Spec {
            id: "holo.norm-formula",
            anchor: HOLO,
            description: "max relative deviation of ||f(X)^-1 X2 f(X)|| from a ((1 - mu)/(1 - lambda))^2",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 1e-9,
            compute: |_| {
                let norms = holo_norms()?;
                let mut worst: f64 = 0.0;
                for (l, n) in HOLO_LAMBDAS.iter().zip(&norms) {
                    let a = 0.5 * (1.0 - l * l).sqrt();
                    let formula = a * ((1.0 - HOLO_MU) / (1.0 - l)).powi(2);
                    worst = worst.max((n - formula).abs() / formula);
                }
                Ok(worst)
            },
        },
        Spec {
            id: "fock.homogeneous-norm",
            anchor: FOCK,
            description: "max |multiplier_norm(p, deg + 1) - ||coeffs||_2| over 30 random homogeneous polynomials",
            expected: 0.0,
            relation: Relation::Equal,
            tolerance: 1e-12,
            compute: |cfg| {
                let mut r = rng::seeded(derive_seed(cfg.seed, 0xf0c));
                let mut worst: f64 = 0.0;
                for _ in 0..30 {
                    let d = r.random_range(1..=3);
                    let deg = r.random_range(1..=3);
                    let p = fock::random_polynomial(&mut r, d, deg)?.homogeneous_component(deg);
                    let norm = fock::multiplier_norm(&p, deg + 1, cfg)?;
                    worst = worst.max((norm - p.coeff_norm()).abs());
                }
                Ok(worst)
            },
        },
        Spec {
            id: "delta.linear-anchor",
            anchor: DELTA,
            description: "max of ||X|| - delta_lower_bound(0, X, 1) over tuples whose best linear form attains ||X||",
            expected: 0.0,
            relation: Relation::AtMost,
            tolerance: 5e-2,
            compute: |cfg| {
                let mut worst: f64 = f64::NEG_INFINITY;
                for x in delta_anchor_battery(cfg.seed) {
                    let zero = MatrixTuple::zeros(x.d(), x.n());
                    let b = fock::delta_lower_bound(&zero, &x, 1, 8, cfg.seed, cfg)?;
                    worst = worst.max(x.row_norm() - b.value);
                }
                Ok(worst)
            },
        },
        Spec {
            id: "delta.upper-bracket",
            anchor: DELTA,
            description: "max of delta_lower_bound(0, X, 1) - ||X|| over the same battery (never above the row norm)",
            expected: 0.0,
            relation: Relation::AtMost,
            tolerance: 1e-9,
            compute: |cfg| {
                let mut worst: f64 = f64::NEG_INFINITY;
                for x in delta_anchor_battery(cfg.seed) {
                    let zero = MatrixTuple::zeros(x.d(), x.n());
                    let b = fock::delta_lower_bound(&zero, &x, 1, 8, cfg.seed, cfg)?;
                    worst = worst.max(b.value - x.row_norm());
                }
                Ok(worst)
            },
        },
    ]
}

fn canonical_failures(k: usize, cfg: &Config) -> Result<f64> {
    let q = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / k as f64);
    let spec = variety::qcomm_spec(q);
    let mut r = rng::seeded(derive_seed(cfg.seed, k as u64));
    let mut failures = 0;
    for _ in 0..20 {
        let lambda = rng::annulus(&mut r, 0.1, 0.9);
        let mu = rng::annulus(&mut r, 0.1, 0.9);
        let x = variety::qcomm_canonical_irreducible(q, lambda, mu)?;
        if spec.relation_residual(&x)? > 1e-12 || !structure::is_irreducible(&x, cfg.rank_tol) {
            failures += 1;
        }
    }
    Ok(failures as f64)
}

fn square_zero_family(theta: f64) -> Vec<(f64, MatrixTuple)> {
    (1..=9)
        .map(|i| {
            let delta = i as f64 / 10.0;
            (delta, witnesses::square_zero_boundary_point(delta, theta))
        })
        .collect()
}

/// Worst deviation from the image-radius formula for `(aX, cX + Y)` with `c = r e^{i theta}`.
fn image_radius_error(r: f64) -> Result<f64> {
    let theta = 0.7;
    let mut worst: f64 = 0.0;
    for a in [c(0.5, 0.0), C64::from_polar(0.8, 0.3), c(0.0, 1.2)] {
        let map = witnesses::lower_triangular_map(a, C64::from_polar(r, theta));
        for (delta, x) in square_zero_family(theta) {
            let eps = (1.0 - delta * delta).sqrt();
            let image = x.linear_map(&map)?;
            let formula = delta.sqrt() * ((delta + r * eps).powi(2) + a.norm_sqr() * eps * eps).powf(0.25);
            worst = worst.max((spectral::jsr(&image) - formula).abs());
        }
    }
    Ok(worst)
}

const HOLO_MU: f64 = 0.1;
const HOLO_LAMBDAS: [f64; 3] = [0.9, 0.99, 0.999];

fn holo_norms() -> Result<Vec<f64>> {
    let f = parse("(1-z1)^2", 2)?;
    HOLO_LAMBDAS
        .iter()
        .map(|&lambda| {
            let x = witnesses::diagonal_shift_point(lambda, HOLO_MU);
            let fx = f.evaluate(&x)?;
            let conj = x.conjugate(&fx)?;
            Ok(linalg::op_norm(conj.get(1)))
        })
        .collect()
}

/// Strict contractions for which `sup_{|c| = 1} ||sum c_j X_j||` equals the row norm:
/// single matrices and scaled matrix-unit pairs.
fn delta_anchor_battery(seed: u64) -> Vec<MatrixTuple> {
    let mut r = rng::seeded(derive_seed(seed, 0xde17a));
    let mut out = Vec::new();
    for n in 1..=4 {
        let g = rng::gaussian_matrix(&mut r, n, n);
        let s = r.random_range(0.2..0.9) / linalg::op_norm(&g);
        out.push(MatrixTuple::new(vec![g * c(s, 0.0)]).expect("one matrix"));
    }
    for s in [0.3, 0.6, 0.9] {
        out.push(witnesses::matrix_unit_pair().scale(c(s, 0.0)));
    }
    out
}
