//! JSON batch report over 2N = 4 and 6.

use pflab::batch::{run_batch, RunConfig};

fn main() -> pflab::Result<()> {
    let report = run_batch(&RunConfig::default(), &[4, 6])?;
    println!("{}", report.to_json());
    Ok(())
}
