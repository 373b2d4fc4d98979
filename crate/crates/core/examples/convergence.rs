//! Watch s★_m(p,q)/π^{4p+2q} approach its closed form. Pass a path to reuse
//! computed values between runs.
//!
//! cargo run --release -p mzv --example convergence -- [cache-file]

use std::path::PathBuf;

use mzv::closed_form::converge_report;
use mzv::store::ZetaStore;
use mzv::AbcParams;

fn main() -> mzv::Result<()> {
    let cache = std::env::args().nth(1).map(PathBuf::from);
    let mut store = cache.as_deref().map(ZetaStore::open).transpose()?;
    let schedule = [50, 100, 200, 400];
    for (p, q) in [(0, 1), (0, 2), (1, 0), (1, 1)] {
        let rep = converge_report(p, q, &AbcParams::classic(), &schedule, store.as_mut())?;
        println!("(p,q) = ({p},{q}), limit {}", rep.closed);
        for row in &rep.rows {
            println!(
                "  m = {:>4}  {:.12}  error {:.3e}",
                row.m, row.truncated_over_pi_power, row.abs_error
            );
        }
    }
    if let (Some(st), Some(path)) = (store, cache) {
        st.save(&path)?;
        println!("saved {} values to {}", st.len(), path.display());
    }
    Ok(())
}
