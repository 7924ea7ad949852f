//! det(g) = (-1)^N Pf(gJ)^2 for a generic element of so(2N).

use pflab::det::laplace_det;
use pflab::poly::DegreeBounds;
use pflab::somatrix::{antisymmetrize, generic_g};

fn main() -> pflab::Result<()> {
    for n in 1..=3 {
        let g = generic_g(n);
        let det = laplace_det(g.matrix(), &DegreeBounds::none());
        let (a, _) = antisymmetrize(&g)?;
        let pf = a.pfaffian()?;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let ok = det == (&pf * &pf).scale(&pflab::poly::q(sign));
        println!("N = {n}: Pf has {} terms, det has {} terms, identity {ok}", pf.len(), det.len());
    }
    println!("Pf for N = 2: {}", antisymmetrize(&generic_g(2))?.0.pfaffian()?);
    Ok(())
}
