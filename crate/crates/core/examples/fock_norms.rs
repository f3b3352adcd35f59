//! Multiplier norms on the truncated Fock space and the von Neumann-type inequality.

use ncball::fock::{multiplier_norm, FockTruncation};
use ncball::linalg::{self, c};
use ncball::rng::seeded;
use ncball::{parse, Config, MatrixTuple};

fn main() -> ncball::Result<()> {
    let cfg = Config::default();
    let fock = FockTruncation::build(2, 3, cfg.fock_dim_cap)?;
    println!("Fock space over 2 letters, words up to length 3: dimension {}", fock.dim());

    let homogeneous = parse("z1*z2 - 2*z2*z1 + (0+1i)*z1*z1", 2)?;
    println!(
        "homogeneous: multiplier norm {:.12}, coefficient norm {:.12}",
        multiplier_norm(&homogeneous, 3, &cfg)?,
        homogeneous.coeff_norm()
    );

    let p = parse("1 - z1 + 0.5*z1*z2", 2)?;
    for n in 2..=8 {
        println!("cutoff {n}: ||p(L)|| >= {:.8}", multiplier_norm(&p, n, &cfg)?);
    }
    let x = MatrixTuple::random(&mut seeded(2), 2, 3);
    let x = x.scale(c(0.95 / x.row_norm(), 0.0));
    println!("||p(X)|| for a row contraction: {:.8}", linalg::op_norm(&p.evaluate(&x)?));
    Ok(())
}
