//! Refining a certificate by a factor r: the Newton lift, its edges, and the
//! scaled certificate.

use tropdeg::degree::{build_newton_lift, refine_certificate};
use tropdeg::independence::verify_certificate;
use tropdeg::model::parse_model;

const MODEL: &str = include_str!("../models/refine_skew_star.json");

fn main() -> tropdeg::Result<()> {
    let model = parse_model(MODEL)?;
    let v = model.prevariety()?;
    let cert = model.certificate.expect("bundled certificate");
    let lift = build_newton_lift(&cert, &v)?;
    println!("{} members, {} branches, {} edges, {} components", cert.len(), lift.branch_count(), lift.edges.len(), lift.components);
    for e in &lift.edges {
        println!("  edge {}-{} on branch {} at {} (lower hull: {})", e.a, e.b, e.branch, e.vertex, lift.is_lower_hull_edge(e));
    }
    for r in 2..=4 {
        let out = refine_certificate(&cert, &v, r)?;
        println!(
            "r = {r}: {} members (guaranteed {}), epsilon {}, {}",
            out.certificate.len(),
            out.guaranteed,
            out.epsilon,
            verify_certificate(&out.certificate, &v)
        );
    }
    Ok(())
}
