//! Building prevarieties: from equations, from a star, and their branches.

use tropdeg::prevariety::{decompose_equations, star_to_prevariety, Branch, Star};
use tropdeg::{Point, TropPoly};

fn describe(name: &str, v: &tropdeg::Prevariety) -> tropdeg::Result<()> {
    println!("{name}: dimension {:?}", v.dimension());
    for b in v.branches()? {
        match b {
            Branch::Point(p) => println!("  point {p}"),
            Branch::Segment(s) => println!("  {} + t {:?}, t in [{}, {}]", s.base(), s.direction(), s.lo(), s.hi()),
        }
    }
    Ok(())
}

fn main() -> tropdeg::Result<()> {
    // x = min{y, 0}: the tropical line in disguise
    let lhs = TropPoly::from_ints(&[(&[1, 0], 0)])?;
    let rhs = TropPoly::from_ints(&[(&[0, 1], 0), (&[0, 0], 0)])?;
    let v = decompose_equations(&[(lhs, rhs)])?;
    describe("x = min{y, 0}", &v)?;
    println!("contains (-3, 5): {}", v.contains(&Point::from_ints(&[-3, 5]))?);

    let star = Star::new(Point::origin(2), vec![vec![1, 0], vec![0, 1], vec![-1, -1]])?;
    describe("tropical line", &star_to_prevariety(&star))?;
    Ok(())
}
