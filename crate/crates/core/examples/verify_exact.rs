//! Exact verification of every special partition of 6 and 8.

use pflab::partition::enumerate_special;
use pflab::pencil::Mode;
use pflab::witness::verify_all;

fn main() -> pflab::Result<()> {
    for two_n in [6, 8] {
        for p in enumerate_special(two_n)? {
            for r in verify_all(&p, &Mode::Exact)? {
                let terms = r.witness.as_ref().map_or(0, |w| w.len());
                println!(
                    "{} j={} b_j={} {:?} sign={:?}, witness has {terms} terms",
                    r.partition, r.j, r.b_j, r.status, r.sign
                );
            }
        }
    }
    Ok(())
}
