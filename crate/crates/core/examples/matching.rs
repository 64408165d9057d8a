//! Minimum matchings with a uniqueness flag, tropical rank, and dual
//! potentials for a uniquely minimal diagonal.

use tropdeg::independence::{dual_potentials, hungarian_matching, min_matching, tropical_rank, EvalMatrix, RANK_BUDGET};

fn main() -> tropdeg::Result<()> {
    let a = EvalMatrix::from_ints(&[&[0, 3, 4], &[2, 0, 5], &[4, 1, 0]]);
    let m = min_matching(&a)?;
    println!("value {} permutation {:?} unique {} gap {}", m.value, m.permutation, m.unique, m.gap);
    assert_eq!(hungarian_matching(&a)?.value, m.value);

    let w = dual_potentials(&a)?;
    let shown: Vec<String> = w.iter().map(ToString::to_string).collect();
    println!("potentials {}", shown.join(" "));

    // two optimal matchings: singular
    let tie = EvalMatrix::from_ints(&[&[0, 0], &[0, 0]]);
    println!("tie unique: {}", min_matching(&tie)?.unique);
    println!("rank of the tie: {}", tropical_rank(&tie, RANK_BUDGET)?);
    Ok(())
}
