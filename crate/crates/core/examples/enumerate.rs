//! Counts special D-partitions by size.

use pflab::partition::enumerate_special;

fn main() -> pflab::Result<()> {
    for two_n in (2..=14).step_by(2) {
        let list = enumerate_special(two_n)?;
        let indices: usize = list
            .iter()
            .map(|p| p.conjecture_indices().map(|v| v.len()))
            .sum::<pflab::Result<usize>>()?;
        println!("2N = {two_n:>2}: {:>3} partitions, {indices:>3} (P, j) pairs", list.len());
    }
    for p in enumerate_special(8)? {
        println!("  {p}");
    }
    Ok(())
}
