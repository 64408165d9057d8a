//! The integer-point recursion for a planar star: explicit certificates of
//! size about kB and the resulting degree bounds.

use tropdeg::degree::{star_b, star_degree_bounds, star_lower_construct, star_sweep};
use tropdeg::independence::verify_certificate;
use tropdeg::prevariety::{star_to_prevariety, Star};
use tropdeg::Point;

fn main() -> tropdeg::Result<()> {
    let star = Star::new(Point::origin(2), vec![vec![1, 0], vec![0, 1], vec![-1, -1]])?;
    println!("B = {}", star_b(&star));

    let (con, cert) = star_lower_construct(&star, 5)?;
    let pts: Vec<String> = con.points.iter().map(|&(x, y)| format!("({x},{y})")).collect();
    println!("k = 5: |W| = {} with C = {}, D = {}: {}", con.size(), con.c, con.d, pts.join(" "));
    println!("{}", verify_certificate(&cert, &star_to_prevariety(&star)));

    for row in star_sweep(&star, 3..=10, None)? {
        println!("k = {:>2}: W = {:?}  kB - D = {}  kB + 1 = {}", row.k, row.w, row.lower_target, row.upper);
    }
    let d = star_degree_bounds(&star, 10)?;
    println!("degree in [{}, {}]", d.lower, d.upper);
    Ok(())
}
