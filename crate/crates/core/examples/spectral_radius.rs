//! Joint spectral radius: exact value from the Kronecker matrix of Psi, power iteration, purity.

use ncball::rng::seeded;
use ncball::spectral::{self, classify_radius};
use ncball::{witnesses, Config, MatrixTuple};

fn main() {
    let cfg = Config::default();
    let x = witnesses::x0_y0();
    println!("Psi for (X0, Y0):\n{}", x.cp_matrix().mat);
    println!("eigenvalues of Psi: {:?}", x.cp_matrix().eigenvalues());
    let rho = spectral::jsr(&x);
    println!("jsr = {rho} ({:?}), row norm = {}", classify_radius(rho, cfg.boundary_tol), x.row_norm());

    let y = MatrixTuple::random(&mut seeded(1), 3, 4);
    let y = y.scale(ncball::linalg::c(0.8 / spectral::jsr(&y), 0.0));
    let seq = spectral::jsr_iterative(&y, 200);
    for k in [1, 10, 50, 200] {
        println!("k = {k:>3}: ||Psi^k(I)||^(1/2k) = {:.6}", seq[k - 1]);
    }
    println!("exact jsr = {:.6}, pure: {}", spectral::jsr(&y), spectral::is_pure(&y, &cfg));
}
