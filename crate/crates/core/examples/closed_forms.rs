//! Bernoulli numbers, β_r and the π-power evaluations of s(p,q) and s★(p,q).
//!
//! cargo run -p mzv --example closed_forms

use mzv::closed_form::{bernoulli, beta, s_closed, s_star_closed};
use mzv::rational_string;

fn main() {
    for n in [0, 1, 2, 4, 6, 12] {
        println!("B_{n} = {}", rational_string(&bernoulli(n)));
    }
    for r in 0..5 {
        println!("β_{r} = {}", rational_string(&beta(r)));
    }
    for (p, q) in [(0, 1), (1, 0), (1, 1), (2, 0), (2, 1)] {
        println!("s({p},{q})  = {}", s_closed(p, q));
        println!("s★({p},{q}) = {}  ≈ {:.12}", s_star_closed(p, q), s_star_closed(p, q).to_f64());
    }
}
