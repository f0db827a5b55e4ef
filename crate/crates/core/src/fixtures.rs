//! Reference systems used by tests, the acceptance suite and the CLI docs.

use crate::exact::{AffineMap, Rational};
use crate::ifs::Ifs;

fn equal_ratio(lambda: &Rational, offsets: &[Rational]) -> Ifs {
    let maps = offsets
        .iter()
        .map(|b| AffineMap::new(lambda.clone(), b.clone()).expect("ratio in (0, 1)"))
        .collect();
    Ifs::new(maps).expect("ordered fixture")
}

/// Four maps `λx`, `λx + λ - λ²`, `λx + 1 - 2λ + λ²`, `λx + 1 - λ` with
/// `0 < λ < 1/4`: both end pairs overlap, the middle pair is disjoint.
pub fn four_map_family(lambda: &Rational) -> Ifs {
    let one = Rational::one();
    let l2 = lambda * lambda;
    let offsets = [
        Rational::zero(),
        lambda - &l2,
        &one - lambda * Rational::integer(2) + &l2,
        &one - lambda,
    ];
    equal_ratio(lambda, &offsets)
}

/// [`four_map_family`] at `λ = 1/5`: offsets 0, 4/25, 16/25, 4/5.
pub fn four_map_example() -> Ifs {
    four_map_family(&Rational::frac(1, 5))
}

/// Maps `x/5`, `x/5 + 3/10`, `x/5 + 23/50`, `x/5 + 4/5`: a single overlap in
/// the middle pair and disjoint end pairs.
pub fn no_end_overlap_example() -> Ifs {
    let offsets = ["0", "3/10", "23/50", "4/5"].map(|s| s.parse::<Rational>().expect("literal"));
    equal_ratio(&Rational::frac(1, 5), &offsets)
}

/// One step between consecutive left endpoints in [`equal_ratio_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Overlapping pair with `u = v =` the given depth.
    Overlap(u32),
    /// Disjoint pair; the weight decides its share of the free space.
    Gap(u32),
}

/// Builds an equal-ratio system on `[0, 1]` whose adjacent pairs follow
/// `steps`. An overlap step of depth `u` places `f_{i+1}(0) = f_i(0) + λ(1 - λ^u)`
/// so that `f_{i m^u} = f_{(i+1) 1^u}`; gap steps share the remaining room.
///
/// Returns `None` when the overlaps leave no room for the gaps or a weight
/// is zero. Whether the result is a class member is left to the validator.
pub fn equal_ratio_chain(lambda: &Rational, steps: &[Step]) -> Option<Ifs> {
    let one = Rational::one();
    let mut overlap_total = Rational::zero();
    let mut gap_count = 0i64;
    let mut weight_total = 0i64;
    for s in steps {
        match *s {
            Step::Overlap(u) if u >= 1 => overlap_total = overlap_total + lambda * (&one - lambda.pow(u)),
            Step::Overlap(_) => return None,
            Step::Gap(0) => return None,
            Step::Gap(w) => {
                gap_count += 1;
                weight_total += i64::from(w);
            }
        }
    }
    let room = &one - lambda - overlap_total - lambda * Rational::integer(gap_count);
    if gap_count > 0 && !room.is_positive() {
        return None;
    }
    if gap_count == 0 && !room.is_zero() {
        return None;
    }
    let mut offsets = vec![Rational::zero()];
    for s in steps {
        let last = offsets.last().expect("nonempty").clone();
        let next = match *s {
            Step::Overlap(u) => last + lambda * (&one - lambda.pow(u)),
            Step::Gap(w) => last + lambda + &room * Rational::frac(i64::from(w), weight_total),
        };
        offsets.push(next);
    }
    Some(equal_ratio(lambda, &offsets))
}
