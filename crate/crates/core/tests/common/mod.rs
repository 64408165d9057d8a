//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropdeg::independence::EvalMatrix;
use tropdeg::prevariety::Star;
use tropdeg::{PerturbedScalar, Point, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[-bound, bound]` with denominator at most `den`.
pub fn rational(rng: &mut ChaCha8Rng, bound: i64, den: i64) -> Q {
    let d = rng.gen_range(1..=den);
    Q::new(rng.gen_range(-bound * d..=bound * d).into(), d.into())
}

pub fn square_matrix(rng: &mut ChaCha8Rng, s: usize, bound: i64, den: i64) -> EvalMatrix {
    let rows = (0..s)
        .map(|_| (0..s).map(|_| PerturbedScalar::finite(rational(rng, bound, den))).collect())
        .collect();
    EvalMatrix::new(rows).expect("square")
}

/// A primitive nonzero integer vector with entries in `[-bound, bound]`.
pub fn primitive(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        let g = v.iter().fold(0i64, |a, &x| a.gcd(&x));
        if g != 0 {
            return v.into_iter().map(|x| x / g).collect();
        }
    }
}

/// A planar star at the origin with `1..=max_rays` distinct primitive rays.
pub fn star(rng: &mut ChaCha8Rng, max_rays: usize, bound: i64) -> Star {
    let m = rng.gen_range(1..=max_rays);
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    while dirs.len() < m {
        let d = primitive(rng, 2, bound);
        if !dirs.contains(&d) {
            dirs.push(d);
        }
    }
    dirs.shuffle(rng);
    Star::new(Point::origin(2), dirs).expect("valid star")
}

pub fn point(rng: &mut ChaCha8Rng, n: usize, bound: i64, den: i64) -> Point {
    Point::new((0..n).map(|_| rational(rng, bound, den)).collect())
}
