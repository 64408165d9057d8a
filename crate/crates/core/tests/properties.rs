use proptest::prelude::*;

use tropdeg::envelope::{lower_envelope, Line};
use tropdeg::hilbert::{count_classes, MonomialGrid, Shape, GRID_BUDGET};
use tropdeg::independence::{brute_force, hungarian_matching, search_max_independent, verify_certificate, EvalMatrix, SearchOptions};
use tropdeg::model::{model_to_json, parse_model};
use tropdeg::prevariety::{ParamBound, Segment};
use tropdeg::scalar::q;
use tropdeg::{Point, Prevariety, Q};

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5).prop_flat_map(|s| prop::collection::vec(prop::collection::vec(-4i64..=4, s), s))
}

fn direction() -> impl Strategy<Value = (i64, i64)> {
    (-4i64..=4, -4i64..=4)
        .prop_filter("nonzero", |&(a, b)| (a, b) != (0, 0))
        .prop_map(|(a, b)| {
            let g = num_integer::gcd(a, b);
            (a / g, b / g)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hungarian_matches_enumeration(rows in matrix()) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let a = EvalMatrix::from_ints(&refs);
        let h = hungarian_matching(&a).unwrap();
        let b = brute_force(&a).unwrap();
        prop_assert_eq!(h.value, b.value);
        prop_assert_eq!(h.unique, b.unique);
        prop_assert_eq!(h.gap, b.gap);
    }

    #[test]
    fn envelope_is_the_pointwise_minimum(lines in prop::collection::vec((-3i64..=3, -6i64..=6), 1..6), t in -20i64..=20) {
        let ls: Vec<Line<Q>> = lines.iter().map(|&(s, o)| Line::new(q(s), q(o))).collect();
        let env = lower_envelope(ls.clone(), &ParamBound::NegInf, &ParamBound::PosInf);
        let t = Q::new(t.into(), 3.into());
        let min = ls.iter().map(|l| l.at(&t)).min().unwrap();
        prop_assert_eq!(env.value_at(&t).unwrap(), min);
        // slopes strictly decrease along the pieces
        let slopes: Vec<Q> = env.pieces.iter().map(|p| ls[p.lines[0]].slope.clone()).collect();
        prop_assert!(slopes.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn class_counts_grow_with_k((p, r) in direction(), k in 1u32..8, boxed in any::<bool>()) {
        let shape = if boxed { Shape::Box } else { Shape::Simplex };
        let dir = vec![vec![q(p), q(r)]];
        let a = count_classes(&dir, &MonomialGrid::new(2, k, shape), GRID_BUDGET).unwrap().count();
        let b = count_classes(&dir, &MonomialGrid::new(2, k + 1, shape), GRID_BUDGET).unwrap().count();
        prop_assert!(a < b);
        prop_assert!(b as u64 <= MonomialGrid::new(2, k + 1, shape).size());
    }

    #[test]
    fn searched_certificates_verify((p, r) in direction(), x in -3i64..=3, y in -3i64..=3, k in 1u32..=2) {
        let seg = Segment::new(Point::from_ints(&[x, y]), vec![p, r], ParamBound::NegInf, ParamBound::PosInf).unwrap();
        let v = Prevariety::from_segments(2, vec![seg]).unwrap();
        let grid = MonomialGrid::simplex(2, k).enumerate();
        let out = search_max_independent(&grid, &v, &SearchOptions::default()).unwrap();
        prop_assert!(out.size <= out.upper_bound);
        if let Some(c) = &out.certificate {
            prop_assert!(verify_certificate(c, &v).verified);
            prop_assert_eq!(c.len(), out.size);
        }
    }

    #[test]
    fn segment_models_round_trip((p, r) in direction(), x in -5i64..=5, lo in -4i64..=0, len in 1i64..=4, closed in any::<(bool, bool)>()) {
        let text = format!(
            r#"{{"segments":[{{"base":["{x}/2","1"],"dir":[{p},{r}],"t":["{lo}","{}"],"closed":[{},{}]}}]}}"#,
            lo + len, closed.0, closed.1
        );
        let m = parse_model(&text).unwrap();
        let again = parse_model(&model_to_json(&m)).unwrap();
        prop_assert_eq!(again, m);
    }
}
