//! Exact truncated MZVs and MZSVs, and how they approach the infinite sums.
//!
//! cargo run -p mzv --example truncated_values

use mzv::zeta::{zeta_sequence, zeta_star_trunc, zeta_trunc};
use mzv::{rational_string, Index};
use num_traits::ToPrimitive;

fn main() -> mzv::Result<()> {
    for (text, m) in [("2,1", 2), ("3,1", 6), ("2,2", 2), ("1", 10)] {
        let k: Index = text.parse()?;
        println!(
            "ζ_{m}{k} = {:<24} ζ★_{m}{k} = {}",
            rational_string(&zeta_trunc(&k, m)),
            rational_string(&zeta_star_trunc(&k, m)),
        );
    }

    // ζ★_m(2) climbs towards π²/6 with error about 1/m
    let two: Index = "2".parse()?;
    let limit = std::f64::consts::PI.powi(2) / 6.0;
    let seq = zeta_sequence(&two, true, 1000);
    for m in [1usize, 10, 100, 1000] {
        let v = seq[m].to_f64().unwrap();
        println!("m = {m:>4}: ζ★_m(2) ≈ {v:.12}, π²/6 - ζ★_m(2) ≈ {:.3e}", limit - v);
    }
    Ok(())
}
