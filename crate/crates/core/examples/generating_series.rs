//! Matrix recursions for F_m, G_m, F★_m, G★_m, the product formula linking
//! them, and reading the sums back off as coefficients.
//!
//! cargo run -p mzv --example generating_series

use mzv::series::{check_gen_identity, check_symmetric_form, h_poly, h_star_poly, GeneratingSeries};
use mzv::zeta::{sum_direct, SumKind};
use mzv::{rational_string, AbcParams};

fn main() -> mzv::Result<()> {
    let params = AbcParams::classic();
    let series = GeneratingSeries::compute(2, &params, (3, 2));
    println!("F_2  = {}", series.f);
    println!("G_2  = {}", series.g);
    println!("F★_2 = {}", series.f_star);
    println!("H_2(z)  = {}", h_poly(2, params.c(), 3));
    println!("H★_2(z) = {}", h_star_poly(2, params.c(), 3));

    let m = 5;
    let series = GeneratingSeries::compute(m, &params, (5, 2));
    for (kind, p, q) in [(SumKind::S, 1, 1), (SumKind::SStar, 2, 0), (SumKind::TStar, 1, 2)] {
        let coeff = series.sum(kind, p, q)?;
        let direct = sum_direct(kind, p, q, m, &params);
        println!(
            "{kind:?}_{m}({p},{q}) = {} (coefficient) vs {} (direct)",
            rational_string(&coeff),
            rational_string(&direct)
        );
    }

    for text in ["3,1,2", "5,3,4", "2,2,2"] {
        let p: AbcParams = text.parse()?;
        let gen = (0..=12).all(|m| check_gen_identity(m, &p, (6, 6)).equal);
        let sym = (0..=12).all(|m| check_symmetric_form(m, &p, (6, 6)).equal);
        println!("{p}: product formula {gen}, symmetric form {sym} (m ≤ 12, bounds 6,6)");
    }
    Ok(())
}
