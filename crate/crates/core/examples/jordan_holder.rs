//! Irreducibility, invariant subspaces and the Jordan-Hoelder decomposition of a hidden
//! block-triangular tuple.

use ncball::linalg;
use ncball::rng::{self, seeded};
use ncball::structure::{self, Similarity};
use ncball::{Config, MatrixTuple};

fn main() -> ncball::Result<()> {
    let cfg = Config::default();
    let mut r = seeded(11);
    let a = MatrixTuple::random(&mut r, 2, 2);
    let b = MatrixTuple::random(&mut r, 2, 1);
    let mats = (0..2)
        .map(|j| {
            let mut m = linalg::block_diag(&[a.get(j), b.get(j)]);
            m.view_mut((0, 2), (2, 1)).copy_from(&rng::gaussian_matrix(&mut r, 2, 1));
            m
        })
        .collect();
    let s = rng::well_conditioned(&mut r, 3, 0.5);
    let x = MatrixTuple::new(mats)?.conjugate(&s)?;
    println!("irreducible: {}", structure::is_irreducible(&x, cfg.rank_tol));
    println!("algebra dimension: {} of 9", structure::generated_algebra(&x, cfg.rank_tol).len());

    let jh = structure::jordan_holder(&x, &cfg)?;
    println!("block sizes {:?}, residual {:.1e}", jh.block_sizes, jh.residual);
    println!("triangular form, first coordinate:\n{}", jh.triangular_form(&x).get(0));
    for blk in &jh.blocks {
        let original = if blk.n() == 2 { &a } else { &b };
        let verdict = match structure::are_similar(blk, original, &cfg)? {
            Similarity::Similar { residual, .. } => format!("similar (residual {residual:.1e})"),
            other => format!("{other:?}"),
        };
        println!("block of size {} vs planted block: {verdict}", blk.n());
    }
    Ok(())
}
