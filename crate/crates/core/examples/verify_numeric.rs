//! `[4,4,3,1]` at both conjecture indices, 20 random points each.

use std::time::Instant;

use pflab::pencil::Mode;
use pflab::witness::verify;
use pflab::Partition;

fn main() -> pflab::Result<()> {
    let p: Partition = "4,4,3,1".parse()?;
    for j in p.conjecture_indices()? {
        let start = Instant::now();
        let r = verify(&p, j, &Mode::numeric(20, 0))?;
        println!(
            "j = {j}: k_j = {}, b_j = {}, size {}, {:?}, sign {:?}, {:?}",
            r.k_j,
            r.b_j,
            r.size,
            r.status,
            r.sign,
            start.elapsed()
        );
    }
    Ok(())
}
