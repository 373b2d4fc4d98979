//! The shuffle families I(p,q) and J(p,q), including the colliding-letter
//! case where multiplicities exceed one.
//!
//! cargo run -p mzv --example index_families

use mzv::index::{index_family_i, index_family_j};
use mzv::AbcParams;

fn main() -> mzv::Result<()> {
    let classic = AbcParams::classic();
    for (p, q) in [(0, 0), (1, 1), (1, 2)] {
        let fam = index_family_i(p, q, &classic);
        let list: Vec<String> = fam.iter().map(|(k, _)| k.to_string()).collect();
        println!("I({p},{q}) for {classic}: {}", list.join(" "));
    }
    let fam = index_family_j(1, 1, &classic);
    let list: Vec<String> = fam.iter().map(|(k, _)| k.to_string()).collect();
    println!("J(1,1) for {classic}: {}", list.join(" "));

    let flat = AbcParams::new(2, 2, 2)?;
    for (p, q) in [(1, 1), (2, 1)] {
        let fam = index_family_i(p, q, &flat);
        for (k, mult) in fam.iter() {
            println!("I({p},{q}) for {flat}: {k} with multiplicity {mult}");
        }
    }
    Ok(())
}
