//! Hilbert function bounds over a k range, class counts, and the closed form
//! for a single line.

use tropdeg::hilbert::{count_classes, eventual_poly_fit, hilbert_sweep, line_formula_check, MonomialGrid, Shape, GRID_BUDGET};
use tropdeg::independence::SearchOptions;
use tropdeg::prevariety::{ParamBound, Segment};
use tropdeg::{Point, Prevariety};

fn main() -> tropdeg::Result<()> {
    let line = |d: Vec<i64>| Segment::new(Point::from_ints(&[0, 0]), d, ParamBound::NegInf, ParamBound::PosInf);
    let v = Prevariety::from_segments(2, vec![line(vec![1, 1])?, line(vec![1, -1])?])?;
    for r in hilbert_sweep(&v, Shape::Simplex, 1..=4, &SearchOptions::default())? {
        println!("k = {}: {} <= TH <= {} (exact {})", r.k, r.lower, r.upper, r.exact);
    }

    let dir = vec![v.segments()[1].direction_q()];
    let counts: Vec<(u32, usize)> = (1..=8)
        .map(|k| Ok((k, count_classes(&dir, &MonomialGrid::simplex(2, k), GRID_BUDGET)?.count())))
        .collect::<tropdeg::Result<_>>()?;
    println!("anti-diagonal classes {:?}", counts);
    let fit = eventual_poly_fit(&counts, 1)?;
    let coeffs: Vec<String> = fit.coefficients.iter().map(ToString::to_string).collect();
    println!("fit from k = {:?}: {} (stabilized {})", fit.onset, coeffs.join(", "), fit.stabilized);

    for (p, q, k) in [(2, 3, 2), (1, 1, 2)] {
        let c = line_formula_check(p, q, k)?;
        println!("line ({p},{q}) k = {k}: closed form {} enumerated {}", c.closed_form, c.enumerated);
    }
    Ok(())
}
