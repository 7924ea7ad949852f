//! Coefficients of small partitions survive appending pairs of 1's.

use pflab::pencil::embed_and_restrict;
use pflab::Partition;

fn main() -> pflab::Result<()> {
    for s in ["3,1", "2,2", "2,2,1,1"] {
        let p: Partition = s.parse()?;
        for extra in 1..=2 {
            if p.total() + 2 * extra > 8 {
                continue;
            }
            let c = embed_and_restrict(&p, extra, 8)?;
            println!(
                "{} -> {}: factorises {}, embedded {:?}, restricted {:?}",
                c.partition, c.augmented, c.factorizes, c.embedded_agree, c.restricted_agree
            );
        }
    }
    Ok(())
}
