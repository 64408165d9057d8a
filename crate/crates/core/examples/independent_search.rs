//! Largest independent subsets of a monomial grid on a curve, by search.

use tropdeg::hilbert::MonomialGrid;
use tropdeg::independence::{search_max_independent, SearchOptions};
use tropdeg::prevariety::{star_to_prevariety, Star};
use tropdeg::Point;

fn main() -> tropdeg::Result<()> {
    let star = Star::new(Point::origin(2), vec![vec![1, 0], vec![0, 1], vec![-1, -1]])?;
    let v = star_to_prevariety(&star);
    for k in 1..=3 {
        let grid = MonomialGrid::boxed(2, k);
        let monomials = grid.enumerate();
        let out = search_max_independent(&monomials, &v, &SearchOptions::default())?;
        let chosen: Vec<String> = out.members.iter().map(|&i| monomials[i].to_string()).collect();
        println!(
            "k = {k}: {} of {} (class bound {}, complete {}) {}",
            out.size,
            grid.size(),
            out.upper_bound,
            out.complete,
            chosen.join(" ")
        );
    }
    Ok(())
}
