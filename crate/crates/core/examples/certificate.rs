//! Certificates of independence: build one from witness points, check it,
//! and watch a tampered copy fail.

use tropdeg::independence::{certify_from_points, verify_certificate, Certificate, Member};
use tropdeg::prevariety::{ParamBound, Segment};
use tropdeg::{Monomial, PerturbedScalar, Point, Prevariety, TropPoly};

fn main() -> tropdeg::Result<()> {
    let seg = Segment::new(Point::from_ints(&[0, 0]), vec![1, -1], ParamBound::NegInf, ParamBound::PosInf)?;
    let v = Prevariety::from_segments(2, vec![seg])?;
    let fs: Vec<TropPoly> = [[0, 0], [1, 0], [0, 1]]
        .iter()
        .map(|e| TropPoly::monomial(Monomial::new(e.to_vec())))
        .collect();
    let pts: Vec<Point> = [[0, 0], [-2, 2], [2, -2]].iter().map(|p| Point::from_ints(p)).collect();
    let cert = certify_from_points(&fs, &pts, &v)?.expect("nonsingular");
    for (m, w) in cert.members().iter().zip(cert.witnesses()) {
        println!("b = {:>5}  witness {}", m.b.to_string(), w.point);
    }
    println!("{}", verify_certificate(&cert, &v));

    let mut members = cert.members().to_vec();
    members[0] = Member {
        b: &members[0].b + &PerturbedScalar::int(10),
        ..members[0].clone()
    };
    let bad = Certificate::new(members, cert.witnesses().to_vec())?;
    println!("{}", verify_certificate(&bad, &v));
    Ok(())
}
