//! Parse free polynomials, evaluate them on matrix tuples and round-trip them through JSON.

use ncball::linalg::c;
use ncball::{parse, witnesses, MatrixTuple};

fn main() -> ncball::Result<()> {
    let p = parse("(1-z1)^2 + (0+0.5i)*z1*z2 - z2*z1", 2)?;
    println!("p = {p}");
    println!("degree {:?}, {} terms, homogeneous: {}", p.degree(), p.num_terms(), p.is_homogeneous());

    let x = witnesses::diagonal_shift_point(0.9, 0.1);
    println!("p(X) =\n{}", p.evaluate(&x)?);

    // x and y stand for z1 and z2 when there are two variables
    let commutator = parse("x*y - y*x", 2)?;
    let diagonal = MatrixTuple::scalar(&[c(0.3, 0.0), c(-0.2, 0.1)])?.ampliate(3);
    println!("[X1, X2] on a commuting tuple has norm {:e}", ncball::linalg::op_norm(&commutator.evaluate(&diagonal)?));

    let json = serde_json::to_string(&p.to_json())?;
    println!("JSON: {json}");
    match parse("z1 z2", 2) {
        Err(e) => println!("juxtaposition is rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
