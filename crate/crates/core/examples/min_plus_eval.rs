//! Evaluating a min-plus polynomial, and its restriction to a line.

use tropdeg::prevariety::{ParamBound, Segment};
use tropdeg::scalar::q;
use tropdeg::{eval_poly, poly_degree, restrict_to_segment, Point, TropPoly};

fn main() -> tropdeg::Result<()> {
    // min{1, x, y, x + y - 1}
    let f = TropPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 0), (&[0, 1], 0), (&[1, 1], -1)])?;
    println!("degree {}", poly_degree(&f));
    for p in [[0, 0], [2, 3], [-1, 5]] {
        let x = Point::from_ints(&p);
        let (value, minimizers) = eval_poly(&f, &x)?;
        println!("f{x} = {value}, attained by terms {minimizers:?}");
    }

    let diag = Segment::new(Point::from_ints(&[0, 0]), vec![1, 1], ParamBound::NegInf, ParamBound::PosInf)?;
    let g = restrict_to_segment(&f, &diag)?;
    for p in &g.pieces {
        println!("term {}: {} t + {}", p.term, p.slope, p.offset);
    }
    println!("f(t, t) at t = 3: {}", g.eval(&q(3)));
    Ok(())
}
