//! Builds the nilpotent representative for `[4,4,3,1]` and checks its
//! Jordan type.

use pflab::somatrix::{build_nilpotent, is_so_form, jordan_type};
use pflab::Partition;

fn main() -> pflab::Result<()> {
    let p: Partition = "4,4,3,1".parse()?;
    let x = build_nilpotent(&p)?;
    for i in 0..x.matrix.rows() {
        let row: Vec<String> = x.matrix.row(i).iter().map(|v| format!("{v:>2}")).collect();
        println!("{}", row.join(" "));
    }
    println!("so-form: {}", is_so_form(&x.matrix));
    println!("Jordan type: {:?}", jordan_type(&x.matrix));
    Ok(())
}
