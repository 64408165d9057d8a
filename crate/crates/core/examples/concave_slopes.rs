//! Which slopes of min{a_i + i z} actually appear when the coefficients at
//! least halve at every step.

use tropdeg::degree::{concave_slopes, ConcaveSlopes};
use tropdeg::scalar::q;
use tropdeg::ExtRat;

fn main() -> tropdeg::Result<()> {
    let a = vec![ExtRat::Finite(q(8)), ExtRat::Finite(q(4)), ExtRat::Finite(q(2)), ExtRat::Finite(q(1)), ExtRat::Inf];
    match concave_slopes(&a)? {
        ConcaveSlopes::Attained { t, attained, breakpoints, z0 } => {
            let bs: Vec<String> = breakpoints.iter().map(ToString::to_string).collect();
            println!("t = {t}, slopes {attained:?}, breakpoints {}, z0 = {z0}", bs.join(" "));
        }
        ConcaveSlopes::Violated { index } => println!("coefficient {index} is not positive"),
    }
    Ok(())
}
