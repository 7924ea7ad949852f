//! Witness polynomials and their residual minors.

use pflab::pencil::Mode;
use pflab::witness::{verify, witness};
use pflab::Partition;

fn main() -> pflab::Result<()> {
    for (s, j) in [("2,2", 2), ("2,2,1,1", 2), ("5,3", 2), ("3,3,1,1", 2), ("5,1,1,1", 4)] {
        let p: Partition = s.parse()?;
        println!("{p}, j = {j}: {}", witness(&p, j)?);
        let r = verify(&p, j, &Mode::Exact)?;
        if let (Some(d), Some(c)) = (&r.det_z, &r.observed_c) {
            println!("  rows {:?} cols {:?}", r.rows, r.cols);
            println!("  det z = {d}");
            println!("  c     = {c}");
        }
    }
    Ok(())
}
