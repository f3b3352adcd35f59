//! The q-commutation varieties z1 z2 = q z2 z1: membership, the angle-change map and
//! where irreducible points live.

use ncball::linalg::c;
use ncball::variety;
use ncball::{spectral, witnesses, Config};

fn main() -> ncball::Result<()> {
    let cfg = Config::default();
    let x = witnesses::x0_y0();
    let v = variety::qcomm_spec(c(-1.0, 0.0));
    println!("(X0, Y0) on V_-1: {}", variety::vanishes_on(&v, &x, cfg.relation_tol)?);
    println!("jsr(X0, Y0) = {:.12}", spectral::jsr(&x));
    let image = variety::angle_change_map(&x)?;
    println!("jsr of the angle-changed pair = {:.12} (3^(1/4) = {:.12})", spectral::jsr(&image), 3f64.powf(0.25));

    for q in [c(-1.0, 0.0), c(0.0, 1.0), c(1f64.exp(), 0.0)] {
        for n in 2..=4 {
            let r = variety::qcomm_reducibility_probe(q, n, 60, cfg.seed, &cfg)?;
            println!(
                "q = {q}, level {n}: order {:?}, irreducible samples {}/{}",
                r.root_order, r.irreducible_found, r.trials
            );
        }
    }
    Ok(())
}
