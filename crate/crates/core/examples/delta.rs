//! Lower bounds for the pseudo-hyperbolic distance between pure tuples.

use ncball::fock::delta_lower_bound;
use ncball::linalg::c;
use ncball::rng::seeded;
use ncball::{spectral, Config, MatrixTuple};

fn main() -> ncball::Result<()> {
    let cfg = Config::default();
    let x = MatrixTuple::random(&mut seeded(5), 2, 2);
    let x = x.scale(c(0.6 / spectral::jsr(&x), 0.0));
    let zero = MatrixTuple::zeros(2, 2);
    for degree in 1..=3 {
        let b = delta_lower_bound(&zero, &x, degree, 16, cfg.seed, &cfg)?;
        println!("degree {degree}: delta(0, X) >= {:.6} via {} ({} candidates)", b.value, b.witness, b.candidates);
    }
    println!("row norm of X: {:.6}", x.row_norm());

    let (a, b) = (c(0.3, 0.2), c(-0.5, 0.1));
    let bound = delta_lower_bound(&MatrixTuple::scalar(&[a])?, &MatrixTuple::scalar(&[b])?, 1, 8, cfg.seed, &cfg)?;
    println!("scalars {a} and {b}: bound {:.12}, |a - b| = {:.12}", bound.value, (a - b).norm());
    Ok(())
}
