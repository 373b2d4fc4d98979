//! The relation between s★_m(p,q) and the unstarred sums, checked by direct
//! summation for a few parameter triples.
//!
//! cargo run -p mzv --example finite_identity

use mzv::zeta::{verify_identity_grid, verify_identity_s, SumKind};
use mzv::{rational_string, AbcParams};

fn main() -> mzv::Result<()> {
    let classic = AbcParams::classic();
    let rep = verify_identity_s(1, 1, 4, &classic);
    println!("s★_4(1,1) = {}", rational_string(&rep.lhs));
    println!("right side = {}", rational_string(&rep.rhs));
    println!("equal: {}", rep.equal);

    for text in ["3,1,2", "4,2,3", "5,1,3", "2,2,2"] {
        let params: AbcParams = text.parse()?;
        for kind in [SumKind::S, SumKind::T] {
            let reps = verify_identity_grid(kind, &params, 0..=2, 0..=2, 0..=12, 0);
            let ok = reps.iter().filter(|r| r.equal).count();
            println!("{params} {kind:?}-identity: {ok}/{} cases exact", reps.len());
        }
    }
    Ok(())
}
