//! Words, the harmonic product, the map S, and the symbolic form of the
//! s- and t-identities.
//!
//! cargo run -p mzv --example harmonic_algebra

use mzv::harmonic::{
    build_frs, harmonic_mul, s_map, verify_frs_symbolic, verify_frt_symbolic, z_m_eval,
    z_star_m_eval, HPoly, Word,
};
use mzv::{rational_string, AbcParams};

fn main() {
    let z2 = HPoly::letter(2);
    let z3 = HPoly::letter(3);
    println!("z2 * z3 = {}", harmonic_mul(&z2, &z3));
    println!("S(z2 z2 z2) = {}", s_map(&HPoly::word(Word::new(vec![2, 2, 2]))));

    let m = 6;
    let lhs = z_m_eval(&harmonic_mul(&z2, &z3), m);
    let rhs = z_m_eval(&z2, m) * z_m_eval(&z3, m);
    println!("Z_{m}(z2*z3) = {} = Z_{m}(z2)·Z_{m}(z3): {}", rational_string(&lhs), lhs == rhs);

    let params = AbcParams::classic();
    let frs = build_frs(1, 1, &params);
    println!("frs(1,1) = {frs}");
    println!("Z★_{m}(frs(1,1)) = {}", rational_string(&z_star_m_eval(&frs, m)));

    for (p, q) in [(0, 1), (1, 0), (1, 1), (2, 1)] {
        let s = verify_frs_symbolic(p, q, &params);
        let t = verify_frt_symbolic(p, q, &params);
        println!(
            "(p,q)=({p},{q}): S(frs) identity {} ({} words), S(frt) identity {}",
            s.equal,
            s.lhs.len(),
            t.equal
        );
    }
}
