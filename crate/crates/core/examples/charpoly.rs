//! Coefficients c_{2k} of the pencil determinant, symbolic for `[2,2,1,1]`
//! and sampled over F_p for `[4,4,3,1]`.

use pflab::pencil::{build_pencil, check_valuation, Mode};
use pflab::Partition;

fn main() -> pflab::Result<()> {
    let p: Partition = "2,2,1,1".parse()?;
    let pencil = build_pencil(&p, &Mode::Exact)?;
    for e in pencil.coefficient_table()?.entries {
        println!("c_{} (chi = {}): {}", 2 * e.k, e.chi, e.c);
    }

    let p: Partition = "4,4,3,1".parse()?;
    let pencil = build_pencil(&p, &Mode::numeric(1, 7))?;
    for e in pencil.coefficient_table()?.entries {
        println!("c_{} (chi = {}) at a random point: {}", 2 * e.k, e.chi, e.c);
    }
    let report = check_valuation(&p, &Mode::numeric(5, 7))?;
    for e in &report.entries {
        println!("2k = {:>2}: chi = {}, valuation = {:?}", e.two_k, e.chi, e.valuation);
    }
    Ok(())
}
