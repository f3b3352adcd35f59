//! Similarity certificates: pure tuples to strict row contractions,
//! irreducible unit-radius tuples to row coisometries.

use ncball::linalg::{self, c};
use ncball::rng::seeded;
use ncball::spectral;
use ncball::{Config, MatrixTuple};

fn main() -> ncball::Result<()> {
    let cfg = Config::default();
    let x = MatrixTuple::random(&mut seeded(3), 2, 4);
    let x = x.scale(c(0.9 / spectral::jsr(&x), 0.0));
    println!("row norm {:.4}, jsr {:.4}", x.row_norm(), spectral::jsr(&x));

    let cert = spectral::similarize_to_strict_contraction(&x, &cfg)?;
    println!(
        "S^-1 X S has row norm {:.12} (cond S = {:.2}, residual {:.1e})",
        cert.target.row_norm(),
        linalg::cond(&cert.s),
        cert.residual
    );

    let unit = x.scale(c(1.0 / 0.9, 0.0));
    let cert = spectral::similarize_to_coisometry(&unit, &cfg)?;
    println!("coisometry defect ||sum T_j T_j^* - I|| = {:.1e}", cert.target.coisometry_defect());
    Ok(())
}
