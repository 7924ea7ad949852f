//! Lego sets, block by block, with the Type II counts at each conjecture
//! index.

use pflab::Partition;

fn main() -> pflab::Result<()> {
    for s in ["7,5,2,2", "4,4,3,1", "5,3,3,1", "2,2,1,1"] {
        let p: Partition = s.parse()?;
        let lego = p.lego_set()?;
        println!("{p}: {lego}  ->  {}", lego.augmented);
        for j in p.conjecture_indices()? {
            println!(
                "  j = {j}: k_j = {}, b_j = {}, cut realised: {}",
                p.partial_sums()[j],
                lego.type_ii_count(j),
                lego.cut_is_realized(j)
            );
        }
    }
    Ok(())
}
