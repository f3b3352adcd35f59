//! End-to-end use of the library: decompositions, certificates and varieties.

use ncball::error::ErrorClass;
use ncball::fock;
use ncball::linalg::{self, c, C64};
use ncball::rng::{self, seeded};
use ncball::spectral::{self, CertificateKind};
use ncball::structure::{self, Similarity};
use ncball::variety::{self, IdealSpec, VarietyJson};
use ncball::{witnesses, Config, Error, MatrixTuple};

fn cfg() -> Config {
    Config::default()
}

fn with_radius(seed: u64, d: usize, n: usize, rho: f64) -> MatrixTuple {
    let x = MatrixTuple::random(&mut seeded(seed), d, n);
    let r = spectral::jsr(&x);
    x.scale(c(rho / r, 0.0))
}

#[test]
fn decomposition_of_a_hidden_direct_sum() {
    let a = with_radius(1, 2, 2, 0.5);
    let b = with_radius(2, 2, 3, 0.8);
    let s = rng::well_conditioned(&mut seeded(3), 5, 0.5);
    let x = a.direct_sum(&b).unwrap().conjugate(&s).unwrap();
    let jh = structure::jordan_holder(&x, &cfg()).unwrap();
    let mut sizes = jh.block_sizes.clone();
    sizes.sort();
    assert_eq!(sizes, vec![2, 3]);
    assert!(structure::below_block_diagonal(&jh.triangular_form(&x), &jh.block_sizes) < 1e-8);
    for blk in &jh.blocks {
        let other = if blk.n() == 2 { &a } else { &b };
        assert!(matches!(structure::are_similar(blk, other, &cfg()).unwrap(), Similarity::Similar { .. }));
    }
}

#[test]
fn reducible_pure_tuple_is_similar_to_a_strict_contraction() {
    let a = with_radius(4, 2, 2, 0.95);
    let b = with_radius(5, 2, 2, 0.3);
    let mats = (0..2)
        .map(|j| {
            let mut m = linalg::block_diag(&[a.get(j), b.get(j)]);
            m.view_mut((0, 2), (2, 2)).copy_from(&(rng::gaussian_matrix(&mut seeded(6 + j as u64), 2, 2) * c(5.0, 0.0)));
            m
        })
        .collect();
    let x = MatrixTuple::new(mats).unwrap();
    assert!(!structure::is_irreducible(&x, 1e-10));
    assert!(x.row_norm() > 1.0);
    let cert = spectral::similarize_to_strict_contraction(&x, &cfg()).unwrap();
    assert_eq!(cert.kind, CertificateKind::StrictContraction);
    assert!(cert.target.row_norm() < 1.0);
    assert!(structure::intertwining_residual(&x, &cert.target, &cert.s) < 1e-8);
}

#[test]
fn irreducible_unit_radius_tuple_becomes_a_coisometry() {
    let x = with_radius(7, 2, 3, 1.0);
    let cert = spectral::similarize_to_coisometry(&x, &cfg()).unwrap();
    assert!(cert.target.coisometry_defect() < 1e-9);
    let pure = with_radius(7, 2, 3, 0.5);
    let err = spectral::similarize_to_coisometry(&pure, &cfg()).unwrap_err();
    assert!(matches!(err, Error::NotUnitRadius { .. }));
    assert_eq!(err.class(), ErrorClass::Precondition);
}

#[test]
fn outside_the_ball_no_contraction_exists() {
    let err = spectral::similarize_to_strict_contraction(&witnesses::x0_y0(), &cfg()).unwrap_err();
    assert!(matches!(err, Error::NotPure { .. }));
}

#[test]
fn variety_membership_and_envelope() {
    let x = witnesses::x0_y0();
    let spec = variety::qcomm_spec(c(-1.0, 0.0));
    assert!(variety::vanishes_on(&spec, &x, 1e-12).unwrap());
    assert!(!variety::in_envelope(&spec, &x, &cfg()).unwrap());
    let inside = x.scale(c(0.5, 0.0));
    assert!(variety::in_envelope(&spec, &inside, &cfg()).unwrap());

    let j: VarietyJson = serde_json::from_str(r#"{"d":2,"generators":["z1*z2 + z2*z1"]}"#).unwrap();
    let from_file = IdealSpec::from_json(&j).unwrap();
    assert!(from_file.is_homogeneous());
    assert!(variety::vanishes_on(&from_file, &x, 1e-12).unwrap());

    let non_homogeneous: VarietyJson = serde_json::from_str(r#"{"d":2,"generators":["z1*z2 - 1"]}"#).unwrap();
    let spec = IdealSpec::from_json(&non_homogeneous).unwrap();
    assert!(matches!(variety::in_envelope(&spec, &inside, &cfg()), Err(Error::NonHomogeneousSpec)));
    let lying: VarietyJson = serde_json::from_str(r#"{"d":2,"generators":["z1*z2 - 1"],"homogeneous":true}"#).unwrap();
    assert!(IdealSpec::from_json(&lying).is_err());
}

#[test]
fn weyl_type_relation_holds_at_its_witness() {
    let q = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let x = variety::qcomm_canonical_irreducible(q, c(0.4, 0.1), c(0.7, 0.0)).unwrap();
    assert!(variety::vanishes_on(&variety::qcomm_spec(q), &x, 1e-12).unwrap());
    assert!(!variety::vanishes_on(&variety::qcomm_spec(q.conj()), &x, 1e-6).unwrap());
}

#[test]
fn delta_bound_grows_with_degree_and_respects_scalars() {
    let x = with_radius(8, 2, 2, 0.5);
    let y = with_radius(9, 2, 2, 0.6);
    let b1 = fock::delta_lower_bound(&x, &y, 1, 8, 1, &cfg()).unwrap();
    let b2 = fock::delta_lower_bound(&x, &y, 2, 8, 1, &cfg()).unwrap();
    assert!(b2.value >= b1.value);
    assert!(b2.value < 2.0);
    let same = fock::delta_lower_bound(&x, &x, 2, 8, 1, &cfg()).unwrap();
    assert!(same.value < 1e-12);
    // levels may differ
    let z = with_radius(10, 2, 3, 0.4);
    assert!(fock::delta_lower_bound(&x, &z, 1, 4, 1, &cfg()).unwrap().value > 0.0);
}

#[test]
fn multiplier_norm_is_monotone_in_cutoff() {
    let p = ncball::parse("1 - 0.5*z1*z2 + (0+0.3i)*z2", 2).unwrap();
    let cfg = cfg();
    let norms: Vec<f64> = (2..=7).map(|n| fock::multiplier_norm(&p, n, &cfg).unwrap()).collect();
    assert!(norms.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{norms:?}");
    assert!(matches!(fock::multiplier_norm(&p, 1, &cfg), Err(Error::CutoffBelowDegree { .. })));
}

#[test]
fn power_iteration_tracks_the_closed_form() {
    let x = witnesses::square_zero_boundary_point(0.4, 0.2);
    let seq = spectral::jsr_iterative(&x, 200);
    assert!((seq[199] - 0.4f64.sqrt()).abs() < 0.05);
}
