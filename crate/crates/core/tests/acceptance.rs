//! Acceptance suite: one line per criterion, with wall-clock limits.
//!
//! Runs as a plain binary (`harness = false`) so the report is printed on every
//! run, and exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use ncball::fock::{self, multiplier_norm};
use ncball::linalg::{self, c, CMat, C64};
use ncball::rng::{self, derive_seed, SeededRng};
use ncball::spectral;
use ncball::structure::{self, Similarity};
use ncball::variety;
use ncball::witnesses;
use ncball::{parse, Config, FreePolynomial, MatrixTuple};
use rand::Rng;
use rayon::prelude::*;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("joint spectral radii of the q = -1 witness and its angle change", Duration::from_millis(10), spectral_radii),
        ("separating points of the q-commutation varieties", Duration::from_secs(1), separating_points),
        ("irreducible q-commutation points exist only at the order of q", Duration::from_secs(30), qcomm_irreducible),
        ("square-zero variety: coisometry, radius family, image radius", Duration::from_secs(1), square_zero),
        ("holomorphic inverse not similarity-bounded", Duration::from_millis(10), holo_unbounded),
        ("Perron equality row_norm(S^-1 X S) = jsr(X)", Duration::from_secs(30), perron_equality),
        ("property suites", Duration::from_secs(120), property_suites),
        ("Fock identities", Duration::from_secs(60), fock_identities),
        ("pseudo-hyperbolic distance anchors", Duration::from_secs(30), delta_anchors),
    ];
    let mut failures = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {} [{}] {name} ({:.1} ms, limit {} ms): {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64() * 1e3,
            limit.as_millis(),
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}

fn cfg() -> Config {
    Config::default()
}

fn spectral_radii() -> Check {
    let x = witnesses::x0_y0();
    let rho = spectral::jsr(&x);
    ensure((rho - 2f64.sqrt()).abs() <= 1e-9, || format!("jsr(X0, Y0) = {rho}"))?;
    let image = variety::angle_change_map(&x).map_err(|e| e.to_string())?;
    let rho_image = spectral::jsr(&image);
    ensure((rho_image - 3f64.powf(0.25)).abs() <= 1e-9, || format!("jsr(image) = {rho_image}"))?;
    Ok(format!("jsr = {rho:.12}, image jsr = {rho_image:.12}"))
}

/// `|X1 X2 - q X2 X1|`, computed directly.
fn commutation_defect(x: &MatrixTuple, q: C64) -> f64 {
    let (a, b) = (x.get(0), x.get(1));
    linalg::op_norm(&(a * b - b * a * q))
}

fn separating_points() -> Check {
    let grid = [-3.0, -1.5, -0.4, 0.2, 0.5, 0.8, 1.7, 2.5, 4.0, 6.0];
    let cfg = cfg();
    let mut tested = 0;
    for &q in &grid {
        let x = witnesses::separating_point(c(q, 0.0));
        for &p in &grid {
            let member = variety::vanishes_on(&variety::qcomm_spec(c(p, 0.0)), &x, cfg.relation_tol).map_err(|e| e.to_string())?;
            let direct = commutation_defect(&x, c(p, 0.0));
            if p == q {
                ensure(member && direct < 1e-14, || format!("point for q = {q} fails its own relation"))?;
            } else if (p * q - 1.0).abs() > 1e-12 {
                ensure(!member && direct > 1e-6, || format!("point for q = {q} lies on V_{p}"))?;
            }
            tested += 1;
        }
    }
    Ok(format!("{tested} (p, q) pairs classified"))
}

/// Dimension of the commutant `{T : X_j T = T X_j}`; irreducible iff it is 1.
fn commutant_dim(x: &MatrixTuple) -> usize {
    let n = x.n();
    let id = linalg::identity(n);
    let mut stacked = CMat::zeros(x.d() * n * n, n * n);
    for (j, m) in x.matrices().iter().enumerate() {
        // row-major vec: vec(XT - TX) = (X (x) I - I (x) X^T) vec(T)
        let op = m.kronecker(&id) - id.kronecker(&m.transpose());
        stacked.view_mut((j * n * n, 0), (n * n, n * n)).copy_from(&op);
    }
    linalg::null_space(&stacked, 1e-10).ncols()
}

fn qcomm_irreducible() -> Check {
    let cfg = cfg();
    let mut r = rng::seeded(derive_seed(cfg.seed, 3));
    let mut worst: f64 = 0.0;
    for k in 2..=5 {
        let q = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / k as f64);
        for _ in 0..20 {
            let lambda = rng::annulus(&mut r, 0.1, 1.5);
            let mu = rng::annulus(&mut r, 0.1, 1.5);
            let x = variety::qcomm_canonical_irreducible(q, lambda, mu).map_err(|e| e.to_string())?;
            let defect = commutation_defect(&x, q) / (linalg::op_norm(x.get(0)) * linalg::op_norm(x.get(1)));
            worst = worst.max(defect);
            ensure(defect <= 1e-12, || format!("k = {k}: relation defect {defect:e}"))?;
            ensure(structure::is_irreducible(&x, cfg.rank_tol), || format!("k = {k}: reported reducible"))?;
            ensure(commutant_dim(&x) == 1, || format!("k = {k}: commutant is not scalar"))?;
        }
    }
    let q = c(1f64.exp(), 0.0);
    for n in 2..=4 {
        let report = variety::qcomm_reducibility_probe(q, n, 200, derive_seed(cfg.seed, 100 + n as u64), &cfg)
            .map_err(|e| e.to_string())?;
        ensure(report.irreducible_found == 0, || format!("q = e, n = {n}: {} irreducible samples", report.irreducible_found))?;
        ensure(report.max_relation_residual <= 1e-10, || format!("q = e, n = {n}: samples off the variety"))?;
    }
    Ok(format!("80 canonical points irreducible (max defect {worst:.1e}); 600 samples at q = e all reducible"))
}

fn square_zero() -> Check {
    let pair = witnesses::matrix_unit_pair();
    ensure((pair.row_norm() - 1.0).abs() <= 1e-12, || format!("row norm {}", pair.row_norm()))?;
    ensure((spectral::jsr(&pair) - 1.0).abs() <= 1e-9, || format!("jsr {}", spectral::jsr(&pair)))?;
    let spec = variety::square_zero_spec();
    let a = C64::from_polar(0.7, 0.4);
    let theta = 1.1;
    let map = witnesses::lower_triangular_map(a, c(0.0, 0.0));
    let mut worst: f64 = 0.0;
    for i in 1..=9 {
        let delta = i as f64 / 10.0;
        let eps = (1.0 - delta * delta).sqrt();
        let x = witnesses::square_zero_boundary_point(delta, theta);
        ensure(spec.relation_residual(&x).map_err(|e| e.to_string())? <= 1e-12, || "point off x^2 = 0".into())?;
        let rho = spectral::jsr(&x);
        ensure((rho - delta.sqrt()).abs() <= 1e-9, || format!("delta = {delta}: jsr {rho}"))?;
        let image = x.linear_map(&map).map_err(|e| e.to_string())?;
        let expected = delta.sqrt() * (delta * delta + a.norm_sqr() * eps * eps).powf(0.25);
        let got = spectral::jsr(&image);
        worst = worst.max((got - expected).abs());
        ensure((got - expected).abs() <= 1e-9, || format!("delta = {delta}: image jsr {got} vs {expected}"))?;
    }
    Ok(format!("coisometry radius 1; 9 family radii and images match (max error {worst:.1e})"))
}

fn holo_unbounded() -> Check {
    let mu = 0.1;
    let f = parse("(1-z1)^2", 2).map_err(|e| e.to_string())?;
    let mut prev: Option<f64> = None;
    let mut norms = Vec::new();
    for lambda in [0.9, 0.99, 0.999] {
        let x = witnesses::diagonal_shift_point(lambda, mu);
        ensure(x.row_norm() < 1.0, || "point not in the ball".into())?;
        let fx = f.evaluate(&x).map_err(|e| e.to_string())?;
        let conj = x.conjugate(&fx).map_err(|e| e.to_string())?;
        let norm = linalg::op_norm(conj.get(1));
        let bound = 0.5 * (1.0 - mu) * (1.0 - mu) / (1.0 - lambda);
        ensure(norm > bound, || format!("lambda = {lambda}: {norm} <= {bound}"))?;
        if let Some(p) = prev {
            ensure(norm >= 8.0 * p, || format!("lambda = {lambda}: growth {}", norm / p))?;
        }
        prev = Some(norm);
        norms.push(norm);
    }
    Ok(format!("norms {:.3e}, {:.3e}, {:.3e}", norms[0], norms[1], norms[2]))
}

/// A random tuple rescaled to joint spectral radius `rho`.
fn random_with_radius(r: &mut SeededRng, d: usize, n: usize, rho: f64) -> MatrixTuple {
    let x = MatrixTuple::random(r, d, n);
    let current = spectral::jsr(&x);
    x.scale(c(rho / current, 0.0))
}

fn perron_equality() -> Check {
    let cfg = cfg();
    let mut r = rng::seeded(derive_seed(cfg.seed, 6));
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 100 {
        let d = r.random_range(2..=3);
        let n = r.random_range(1..=6);
        let rho = r.random_range(0.05..0.98);
        let x = random_with_radius(&mut r, d, n, rho);
        if !structure::is_irreducible(&x, cfg.rank_tol) {
            continue;
        }
        let cert = spectral::similarize_to_strict_contraction(&x, &cfg).map_err(|e| e.to_string())?;
        let err = (cert.target.row_norm() - spectral::jsr(&x)).abs();
        worst = worst.max(err);
        ensure(err <= 1e-7, || format!("n = {n}, d = {d}: |row_norm - jsr| = {err:e}"))?;
        count += 1;
    }
    Ok(format!("100 tuples, max |row_norm - jsr| = {worst:.1e}"))
}

fn property_suites() -> Check {
    let cfg = cfg();
    let mut r = rng::seeded(derive_seed(cfg.seed, 7));

    // similarity invariance
    for _ in 0..200 {
        let (d, n) = (r.random_range(1..=3), r.random_range(1..=5));
        let x = MatrixTuple::random(&mut r, d, n);
        let s = rng::well_conditioned(&mut r, n, 0.8);
        let y = x.conjugate(&s).map_err(|e| e.to_string())?;
        let gap = (spectral::jsr(&x) - spectral::jsr(&y)).abs();
        ensure(gap <= 1e-8 * linalg::cond(&s) * spectral::jsr(&x).max(1.0), || format!("similarity moved jsr by {gap:e}"))?;
    }

    // block-triangular max rule
    for _ in 0..100 {
        let d = r.random_range(1..=3);
        let (n1, n2) = (r.random_range(1..=3), r.random_range(1..=3));
        let (ra, rb) = (r.random_range(0.1..2.0), r.random_range(0.1..2.0));
        let a = random_with_radius(&mut r, d, n1, ra);
        let b = random_with_radius(&mut r, d, n2, rb);
        let mats = (0..d)
            .map(|j| {
                let mut m = CMat::zeros(n1 + n2, n1 + n2);
                m.view_mut((0, 0), (n1, n1)).copy_from(a.get(j));
                m.view_mut((n1, n1), (n2, n2)).copy_from(b.get(j));
                m.view_mut((0, n1), (n1, n2)).copy_from(&rng::gaussian_matrix(&mut r, n1, n2));
                m
            })
            .collect();
        let t = MatrixTuple::new(mats).map_err(|e| e.to_string())?;
        let expected = spectral::jsr(&a).max(spectral::jsr(&b));
        let got = spectral::jsr(&t);
        ensure((got - expected).abs() <= 1e-8 * expected, || format!("triangular jsr {got} vs max {expected}"))?;
    }

    // power iteration
    let mut worst_iter: f64 = 0.0;
    for _ in 0..50 {
        let (d, n) = (r.random_range(1..=3), r.random_range(1..=4));
        let rho = r.random_range(0.3..1.5);
        let x = random_with_radius(&mut r, d, n, rho);
        let seq = spectral::jsr_iterative(&x, 200);
        let gap = (seq[199] - spectral::jsr(&x)).abs();
        worst_iter = worst_iter.max(gap);
        ensure(gap <= 0.05, || format!("power iteration off by {gap}"))?;
    }

    // purity against the decay of Psi^k(I)
    for _ in 0..200 {
        let (d, n) = (r.random_range(1..=3), r.random_range(1..=4));
        let rho = if r.random_bool(0.5) { r.random_range(0.05..0.9) } else { r.random_range(1.1..2.0) };
        let x = random_with_radius(&mut r, d, n, rho);
        let mut t = linalg::identity(n);
        let mut log_norm = 0.0;
        for _ in 0..600 {
            t = x.apply_cp(&t);
            let s = linalg::op_norm(&t);
            log_norm += s.ln();
            t /= c(s, 0.0);
        }
        let decays = log_norm < -10.0;
        ensure(decays == spectral::is_pure(&x, &cfg), || format!("purity disagrees at jsr {rho}"))?;
    }

    // Jordan-Hoelder multisets under conjugation
    for _ in 0..50 {
        let d = r.random_range(2..=3);
        let sizes: Vec<usize> = (0..r.random_range(2..=3)).map(|_| r.random_range(1..=3)).collect();
        let blocks: Vec<MatrixTuple> = sizes.iter().map(|&m| MatrixTuple::random(&mut r, d, m)).collect();
        let n: usize = sizes.iter().sum();
        let mats = (0..d)
            .map(|j| {
                let mut m = rng::gaussian_matrix(&mut r, n, n);
                let mut off = 0;
                for (b, &sz) in blocks.iter().zip(&sizes) {
                    m.view_mut((off, 0), (sz, off)).fill(c(0.0, 0.0));
                    m.view_mut((off, off), (sz, sz)).copy_from(b.get(j));
                    off += sz;
                }
                m
            })
            .collect();
        let x = MatrixTuple::new(mats).map_err(|e| e.to_string())?;
        let y = x.conjugate(&rng::well_conditioned(&mut r, n, 0.5)).map_err(|e| e.to_string())?;
        let sx = structure::sigma_jh(&x, &cfg).map_err(|e| e.to_string())?;
        let sy = structure::sigma_jh(&y, &cfg).map_err(|e| e.to_string())?;
        ensure(same_multiset(&sx, &blocks, &cfg)?, || format!("sigma_JH(X) differs from the assembled blocks {sizes:?}"))?;
        ensure(same_multiset(&sx, &sy, &cfg)?, || "sigma_JH not conjugation invariant".into())?;
    }

    // evaluation axioms
    for _ in 0..200 {
        let (d, n) = (r.random_range(1..=3), r.random_range(1..=4));
        let (dp, dq) = (r.random_range(0..=3), r.random_range(0..=3));
        let p = fock::random_polynomial(&mut r, d, dp).map_err(|e| e.to_string())?;
        let q = fock::random_polynomial(&mut r, d, dq).map_err(|e| e.to_string())?;
        let x = MatrixTuple::random(&mut r, d, n).scale(c(0.5, 0.0));
        let y = MatrixTuple::random(&mut r, d, 2).scale(c(0.5, 0.0));
        let s = rng::well_conditioned(&mut r, n, 0.5);
        let ev = |f: &FreePolynomial, t: &MatrixTuple| f.evaluate(t).map_err(|e| e.to_string());
        let (px, qx) = (ev(&p, &x)?, ev(&q, &x)?);
        let scale = 1.0 + linalg::op_norm(&px) * (1.0 + linalg::op_norm(&qx));
        let close = |a: &CMat, b: &CMat| linalg::max_abs_diff(a, b) <= 1e-10 * scale;
        ensure(close(&ev(&p.add(&q).unwrap(), &x)?, &(&px + &qx)), || "sum rule".into())?;
        ensure(close(&ev(&p.mul(&q).unwrap(), &x)?, &(&px * &qx)), || "product rule".into())?;
        ensure(close(&ev(&FreePolynomial::one(d), &x)?, &linalg::identity(n)), || "unit".into())?;
        let sum = ev(&p, &x.direct_sum(&y).unwrap())?;
        ensure(close(&sum, &linalg::block_diag(&[&px, &ev(&p, &y)?])), || "direct sum rule".into())?;
        let sinv = linalg::inverse(&s).expect("well conditioned");
        let conj = ev(&p, &x.conjugate(&s).unwrap())?;
        ensure(close(&conj, &(&sinv * &px * &s)), || "similarity rule".into())?;
    }
    Ok(format!("all six suites hold (power iteration max gap {worst_iter:.3})"))
}

/// Multisets of irreducible blocks agree up to similarity.
fn same_multiset(a: &[MatrixTuple], b: &[MatrixTuple], cfg: &Config) -> std::result::Result<bool, String> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        for (k, y) in b.iter().enumerate() {
            if used[k] || x.n() != y.n() {
                continue;
            }
            if matches!(structure::are_similar(x, y, cfg).map_err(|e| e.to_string())?, Similarity::Similar { .. }) {
                used[k] = true;
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

fn fock_identities() -> Check {
    let cfg = cfg();
    let mut r = rng::seeded(derive_seed(cfg.seed, 8));
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = r.random_range(1..=3);
        let deg = r.random_range(1..=4);
        let p = fock::random_polynomial(&mut r, d, deg).map_err(|e| e.to_string())?.homogeneous_component(deg);
        let l2 = p.terms().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
        let norm = multiplier_norm(&p, deg + 1, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((norm - l2).abs());
        ensure((norm - l2).abs() <= 1e-12, || format!("d = {d}, deg = {deg}: {norm} vs {l2}"))?;
    }
    let cases: Vec<(FreePolynomial, MatrixTuple)> = (0..100)
        .map(|_| {
            let d = r.random_range(1..=3);
            let deg = r.random_range(1..=4);
            let n = r.random_range(1..=4);
            let p = fock::random_polynomial(&mut r, d, deg).expect("valid degree");
            let x = MatrixTuple::random(&mut r, d, n);
            let x = x.scale(c(r.random_range(0.1..0.99) / x.row_norm(), 0.0));
            (p, x)
        })
        .collect();
    let slacks = cases
        .par_iter()
        .map(|(p, x)| {
            let deg = p.degree().unwrap_or(0);
            let px = linalg::op_norm(&p.evaluate(x).map_err(|e| e.to_string())?);
            let norm = multiplier_norm(p, deg + 6, &cfg).map_err(|e| e.to_string())?;
            ensure(px <= 1.05 * norm, || format!("d = {}, deg = {deg}: ||p(X)|| = {px} > 1.05 * {norm}", p.d()))?;
            Ok(1.05 * norm - px)
        })
        .collect::<std::result::Result<Vec<f64>, String>>()?;
    let min_slack = slacks.into_iter().fold(f64::INFINITY, f64::min);
    Ok(format!("homogeneous max error {worst:.1e}; dominance min slack {min_slack:.3}"))
}

/// `sup_{|c| = 1} ||sum c_j X_j||` by random starts and shrinking random perturbations.
fn best_linear_form(x: &MatrixTuple, r: &mut SeededRng) -> f64 {
    let d = x.d();
    let value = |v: &[C64]| {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut m = CMat::zeros(x.n(), x.n());
        for (cj, xj) in v.iter().zip(x.matrices()) {
            m += xj * (*cj / norm);
        }
        linalg::op_norm(&m)
    };
    let mut starts: Vec<(f64, Vec<C64>)> = (0..400)
        .map(|_| {
            let v: Vec<C64> = (0..d).map(|_| rng::complex_gaussian(r)).collect();
            (value(&v), v)
        })
        .collect();
    starts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best: f64 = 0.0;
    for (mut f, mut v) in starts.into_iter().take(5) {
        let mut step = 0.5;
        while step > 1e-13 {
            let mut improved = false;
            for _ in 0..20 {
                let w: Vec<C64> = v.iter().map(|z| z + rng::complex_gaussian(r) * step).collect();
                let fw = value(&w);
                if fw > f {
                    (f, v) = (fw, w);
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(f);
    }
    best
}

fn delta_anchors() -> Check {
    let cfg = cfg();
    let mut r = rng::seeded(derive_seed(cfg.seed, 9));
    let mut worst_gap: f64 = 0.0;
    for t in 0..100 {
        let d = r.random_range(1..=3);
        let n = r.random_range(1..=4);
        let x = MatrixTuple::random(&mut r, d, n);
        let x = x.scale(c(r.random_range(0.1..0.99) / x.row_norm(), 0.0));
        let zero = MatrixTuple::zeros(d, n);
        let bound = fock::delta_lower_bound(&zero, &x, 1, 8, derive_seed(cfg.seed, t), &cfg)
            .map_err(|e| e.to_string())?
            .value;
        let lower = best_linear_form(&x, &mut r);
        let upper = x.row_norm();
        worst_gap = worst_gap.max(lower - bound);
        ensure(bound >= lower - 1e-9, || format!("bound {bound} below best linear form {lower}"))?;
        ensure(bound <= upper + 1e-9 && bound <= 2.0 + 1e-9, || format!("bound {bound} above ||X|| = {upper}"))?;
    }
    for _ in 0..50 {
        let (a, b) = (rng::annulus(&mut r, 0.0, 0.95), rng::annulus(&mut r, 0.0, 0.95));
        let x = MatrixTuple::scalar(&[a]).map_err(|e| e.to_string())?;
        let y = MatrixTuple::scalar(&[b]).map_err(|e| e.to_string())?;
        let bound = fock::delta_lower_bound(&x, &y, 1, 8, cfg.seed, &cfg).map_err(|e| e.to_string())?.value;
        ensure((bound - (a - b).norm()).abs() <= 1e-12, || format!("scalars {a}, {b}: {bound} vs {}", (a - b).norm()))?;
    }
    Ok(format!("100 contractions bracketed (best-linear-form shortfall {worst_gap:.1e}); 50 scalar pairs exact"))
}
