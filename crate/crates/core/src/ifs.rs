//! Ordered systems of similitudes and the class-membership checks.
//!
//! Maps are indexed `1..=m` in the public API, matching the order of their
//! fundamental intervals from left to right.

use std::fmt;

use thiserror::Error;

use crate::exact::{AffineMap, Interval, Rational};

/// Upper bound on the `u`/`v` searches. The searched quantity is strictly
/// monotone and crosses its target, so this only trips on inputs whose
/// ratios are extremely close to 1.
pub const OVERLAP_SEARCH_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("an IFS needs at least {needed} maps, got {got}")]
    TooFewMaps { needed: usize, got: usize },
    #[error("degenerate hull: fixed point of the first map ({first}) is not left of the last ({last})")]
    DegenerateHull { first: Box<Rational>, last: Box<Rational> },
    #[error("map index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("condition D fails at pair ({index}, {next}): {reason}", next = index + 1)]
    ConditionD { index: usize, reason: String },
    #[error("overlap search at pair ({index}, {next}) exceeded {cap} iterations", next = index + 1, cap = OVERLAP_SEARCH_CAP)]
    SearchCapExceeded { index: usize },
    #[error("operation requires a class member, but condition {0} is violated")]
    NotAMember(Condition),
}

/// An ordered iterated function system with its convex hull `[a, b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ifs {
    maps: Vec<AffineMap>,
    hull: Interval,
}

impl Ifs {
    /// Maps must already be ordered by left endpoint of their fundamental
    /// intervals; see [`order_by_left_endpoint`].
    pub fn new(maps: Vec<AffineMap>) -> Result<Self, ModelError> {
        if maps.len() < 2 {
            return Err(ModelError::TooFewMaps { needed: 2, got: maps.len() });
        }
        let hull = convex_hull(&maps)?;
        Ok(Ifs { maps, hull })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    /// The map with 1-based index `i`.
    pub fn map(&self, i: usize) -> &AffineMap {
        &self.maps[i - 1]
    }

    pub fn hull(&self) -> &Interval {
        &self.hull
    }

    pub fn a(&self) -> &Rational {
        self.hull.lo()
    }

    pub fn b(&self) -> &Rational {
        self.hull.hi()
    }

    /// `f_i(I)`.
    pub fn fundamental(&self, i: usize) -> Interval {
        self.map(i).apply_interval(&self.hull)
    }

    /// `f_{w_1} ∘ … ∘ f_{w_k}`; `None` for the empty word.
    pub fn word_map(&self, word: &[usize]) -> Option<AffineMap> {
        let (&last, rest) = word.split_last()?;
        let mut acc = self.map(last).clone();
        for &d in rest.iter().rev() {
            acc = self.map(d).compose(&acc);
        }
        Some(acc)
    }

    /// `f_w(x)`, the identity for the empty word.
    pub fn apply_word(&self, word: &[usize], x: &Rational) -> Rational {
        word.iter().rev().fold(x.clone(), |acc, &d| self.map(d).apply(&acc))
    }
}

impl fmt::Display for Ifs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.maps.iter().enumerate() {
            writeln!(f, "f_{}(x) = {}*x + {}", i + 1, m.ratio(), m.offset())?;
        }
        Ok(())
    }
}

/// `[fixed point of the first map, fixed point of the last map]`.
pub fn convex_hull(maps: &[AffineMap]) -> Result<Interval, ModelError> {
    let (first, last) = match (maps.first(), maps.last()) {
        (Some(f), Some(l)) => (f.fixed_point(), l.fixed_point()),
        _ => return Err(ModelError::TooFewMaps { needed: 1, got: 0 }),
    };
    if first >= last {
        return Err(ModelError::DegenerateHull { first: Box::new(first), last: Box::new(last) });
    }
    Ok(Interval::new(first, last).expect("ordered endpoints"))
}

/// Sorts maps by the left endpoint of their image of the attractor's hull
/// (ties broken by right endpoint) and returns the permutation: entry `k`
/// of the permutation is the input position of the `k`-th sorted map.
///
/// For orientation-preserving maps the hull of the attractor is
/// `[min fixed point, max fixed point]`, which is what is used here.
pub fn order_by_left_endpoint(maps: &[AffineMap]) -> (Vec<AffineMap>, Vec<usize>) {
    if maps.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let fixed: Vec<Rational> = maps.iter().map(AffineMap::fixed_point).collect();
    let a = fixed.iter().min().expect("nonempty").clone();
    let b = fixed.iter().max().expect("nonempty").clone();
    let mut perm: Vec<usize> = (0..maps.len()).collect();
    perm.sort_by(|&x, &y| {
        let kx = (maps[x].apply(&a), maps[x].apply(&b));
        let ky = (maps[y].apply(&a), maps[y].apply(&b));
        kx.cmp(&ky).then(x.cmp(&y))
    });
    (perm.iter().map(|&k| maps[k].clone()).collect(), perm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Condition::A => "A",
            Condition::B => "B",
            Condition::C => "C",
            Condition::D => "D",
        };
        f.write_str(c)
    }
}

/// Structure of a nondegenerate overlap `f_i(I) ∩ f_{i+1}(I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapSpec {
    /// Left index `i` of the pair `(i, i+1)`.
    pub index: usize,
    pub u: usize,
    pub v: usize,
    pub overlap: Interval,
    /// `f_{i m^u} = f_{(i+1) 1^v}`.
    pub composed: AffineMap,
}

impl OverlapSpec {
    /// The word `i m^u`.
    pub fn left_word(&self, m: usize) -> Vec<usize> {
        let mut w = vec![self.index];
        w.extend(std::iter::repeat_n(m, self.u));
        w
    }

    /// The word `(i+1) 1^v`.
    pub fn right_word(&self) -> Vec<usize> {
        let mut w = vec![self.index + 1];
        w.extend(std::iter::repeat_n(1, self.v));
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Member,
    Violation(Violation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEReport {
    pub map_count: usize,
    pub verdict: Verdict,
    /// Populated for members only.
    pub overlaps: Vec<OverlapSpec>,
    /// Indices `i` with `f_i(I) ∩ f_{i+1}(I) = ∅`. Populated for members only.
    pub disjoint_pairs: Vec<usize>,
    /// Maxima of `u(i)` and `v(i)` over the overlaps; zero for non-members.
    pub u_max: usize,
    pub v_max: usize,
}

impl ClassEReport {
    pub fn is_member(&self) -> bool {
        matches!(self.verdict, Verdict::Member)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match &self.verdict {
            Verdict::Member => None,
            Verdict::Violation(v) => Some(v),
        }
    }

    pub fn overlap(&self, i: usize) -> Option<&OverlapSpec> {
        self.overlaps.iter().find(|o| o.index == i)
    }

    fn violated(map_count: usize, condition: Condition, witness: String) -> Self {
        ClassEReport {
            map_count,
            verdict: Verdict::Violation(Violation { condition, witness }),
            overlaps: Vec::new(),
            disjoint_pairs: Vec::new(),
            u_max: 0,
            v_max: 0,
        }
    }
}

/// Report for a map list that could not even form an [`Ifs`]: too few maps
/// is a failure of condition C, an inverted or degenerate hull one of A.
pub fn report_for_invalid_maps(maps: &[AffineMap], err: &ModelError) -> ClassEReport {
    let condition = match err {
        ModelError::TooFewMaps { .. } => Condition::C,
        _ => Condition::A,
    };
    ClassEReport::violated(maps.len(), condition, err.to_string())
}

/// Checks conditions A through D in order and reports the first failure.
pub fn validate_class_e(ifs: &Ifs) -> ClassEReport {
    let m = ifs.len();
    let (a, b) = (ifs.a(), ifs.b());
    let fund: Vec<Interval> = (1..=m).map(|i| ifs.fundamental(i)).collect();
    let fail = |c, w| ClassEReport::violated(m, c, w);

    // (A)
    if &ifs.map(1).apply(a) != a {
        return fail(Condition::A, format!("f_1(a) = {} differs from a = {a}", ifs.map(1).apply(a)));
    }
    if &ifs.map(m).apply(b) != b {
        return fail(Condition::A, format!("f_{m}(b) = {} differs from b = {b}", ifs.map(m).apply(b)));
    }
    for i in 1..m {
        if fund[i - 1].lo() >= fund[i].lo() {
            return fail(
                Condition::A,
                format!("left endpoints not strictly increasing: f_{i}(a) = {} >= f_{}(a) = {}", fund[i - 1].lo(), i + 1, fund[i].lo()),
            );
        }
    }
    for (i, iv) in fund.iter().enumerate() {
        if !ifs.hull().contains_interval(iv) {
            return fail(Condition::A, format!("f_{}(I) = {iv} is not inside I = {}", i + 1, ifs.hull()));
        }
    }

    // (B)
    for i in 1..=m.saturating_sub(2) {
        if fund[i - 1].hi() >= fund[i + 1].lo() {
            return fail(
                Condition::B,
                format!("f_{i}(I) = {} meets f_{}(I) = {}", fund[i - 1], i + 2, fund[i + 1]),
            );
        }
    }

    // (C)
    if m < 3 {
        return fail(Condition::C, format!("m = {m}: need an overlapping and a disjoint adjacent pair, impossible for m < 3"));
    }
    let disjoint_pairs: Vec<usize> = (1..m).filter(|&i| fund[i - 1].hi() < fund[i].lo()).collect();
    let overlapping: Vec<usize> = (1..m).filter(|&i| fund[i - 1].hi() >= fund[i].lo()).collect();
    if disjoint_pairs.is_empty() {
        return fail(Condition::C, "no adjacent pair of fundamental intervals is disjoint".into());
    }
    if !overlapping.iter().any(|&i| fund[i - 1].hi() > fund[i].lo()) {
        return fail(Condition::C, "no adjacent pair of fundamental intervals has a nondegenerate overlap".into());
    }

    // (D)
    let mut overlaps = Vec::new();
    for &i in &overlapping {
        match overlap_parameters(ifs, i) {
            Ok(Some(spec)) => overlaps.push(spec),
            Ok(None) => unreachable!("pair {i} was classified as overlapping"),
            Err(e) => return fail(Condition::D, e.to_string()),
        }
    }
    for i in 1..=m {
        for j in 1..=m {
            if i != j && fund[j - 1].contains_interval(&fund[i - 1]) {
                return fail(Condition::D, format!("f_{i}(I) = {} is contained in f_{j}(I) = {}", fund[i - 1], fund[j - 1]));
            }
        }
    }

    let u_max = overlaps.iter().map(|o| o.u).max().unwrap_or(0);
    let v_max = overlaps.iter().map(|o| o.v).max().unwrap_or(0);
    ClassEReport {
        map_count: m,
        verdict: Verdict::Member,
        overlaps,
        disjoint_pairs,
        u_max,
        v_max,
    }
}

/// Finds `(u, v)` with `f_i(I) ∩ f_{i+1}(I) = f_{i m^u}(I) = f_{(i+1) 1^v}(I)`.
///
/// Returns `Ok(None)` when the pair is disjoint.
pub fn overlap_parameters(ifs: &Ifs, i: usize) -> Result<Option<OverlapSpec>, ModelError> {
    let m = ifs.len();
    if i == 0 || i >= m {
        return Err(ModelError::IndexOutOfRange { index: i, max: m.saturating_sub(1) });
    }
    let (a, b) = (ifs.a(), ifs.b());
    let (fi, fnext) = (ifs.map(i), ifs.map(i + 1));
    let overlap = match ifs.fundamental(i).intersect(&ifs.fundamental(i + 1)) {
        None => return Ok(None),
        Some(o) => o,
    };
    if overlap.is_degenerate() {
        return Err(ModelError::ConditionD {
            index: i,
            reason: format!("overlap is the single point {}", overlap.lo()),
        });
    }

    // f_i(f_m^u(a)) increases strictly towards f_i(b) > f_{i+1}(a).
    let target_left = fnext.apply(a);
    let mut probe = a.clone();
    let mut u = 0;
    loop {
        u += 1;
        if u > OVERLAP_SEARCH_CAP {
            return Err(ModelError::SearchCapExceeded { index: i });
        }
        probe = ifs.map(m).apply(&probe);
        let value = fi.apply(&probe);
        if value == target_left {
            break;
        }
        if value > target_left {
            return Err(ModelError::ConditionD {
                index: i,
                reason: format!("f_{i}(f_{m}^{u}(a)) = {value} jumps past f_{}(a) = {target_left}", i + 1),
            });
        }
    }

    // f_{i+1}(f_1^v(b)) decreases strictly towards f_{i+1}(a) < f_i(b).
    let target_right = fi.apply(b);
    let mut probe = b.clone();
    let mut v = 0;
    loop {
        v += 1;
        if v > OVERLAP_SEARCH_CAP {
            return Err(ModelError::SearchCapExceeded { index: i });
        }
        probe = ifs.map(1).apply(&probe);
        let value = fnext.apply(&probe);
        if value == target_right {
            break;
        }
        if value < target_right {
            return Err(ModelError::ConditionD {
                index: i,
                reason: format!("f_{}(f_1^{v}(b)) = {value} drops below f_{i}(b) = {target_right}", i + 1),
            });
        }
    }

    let spec = OverlapSpec { index: i, u, v, overlap, composed: fi.clone() };
    let left = ifs.word_map(&spec.left_word(m)).expect("nonempty word");
    let right = ifs.word_map(&spec.right_word()).expect("nonempty word");
    // Equal images of I under two increasing similitudes force equal maps.
    if left != right {
        return Err(ModelError::ConditionD {
            index: i,
            reason: format!("composed maps differ: {left} vs {right}"),
        });
    }
    debug_assert_eq!(left.apply_interval(ifs.hull()), spec.overlap);
    Ok(Some(OverlapSpec { composed: left, ..spec }))
}

/// Which of the two theorem regimes a member falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    EndOverlap,
    NoEndOverlap,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::EndOverlap => "end-overlap",
            CaseTag::NoEndOverlap => "no-end-overlap",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TheoremCase {
    pub tag: CaseTag,
    /// `f_1(I) ∩ f_2(I) ≠ ∅`
    pub left_overlaps: bool,
    /// `f_{m-1}(I) ∩ f_m(I) ≠ ∅`
    pub right_overlaps: bool,
}

pub fn theorem_case(report: &ClassEReport) -> Result<TheoremCase, ModelError> {
    if let Some(v) = report.violation() {
        return Err(ModelError::NotAMember(v.condition));
    }
    let m = report.map_count;
    let left_overlaps = report.overlap(1).is_some();
    let right_overlaps = report.overlap(m - 1).is_some();
    let tag = if left_overlaps || right_overlaps {
        CaseTag::EndOverlap
    } else {
        CaseTag::NoEndOverlap
    };
    Ok(TheoremCase { tag, left_overlaps, right_overlaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn hull_examples() {
        assert_eq!(convex_hull(fixtures::four_map_example().maps()).unwrap(), Interval::new(q("0"), q("1")).unwrap());
        assert_eq!(convex_hull(fixtures::no_end_overlap_example().maps()).unwrap(), Interval::new(q("0"), q("1")).unwrap());
        let halves = [AffineMap::new(q("1/2"), q("0")).unwrap(), AffineMap::new(q("1/2"), q("1/2")).unwrap()];
        assert_eq!(convex_hull(&halves).unwrap(), Interval::new(q("0"), q("1")).unwrap());
        let reversed = [halves[1].clone(), halves[0].clone()];
        assert!(matches!(convex_hull(&reversed), Err(ModelError::DegenerateHull { .. })));
    }

    #[test]
    fn four_map_example_is_member() {
        let ifs = fixtures::four_map_example();
        let report = validate_class_e(&ifs);
        assert!(report.is_member(), "{report:?}");
        assert_eq!(report.overlaps.iter().map(|o| (o.index, o.u, o.v)).collect::<Vec<_>>(), vec![(1, 1, 1), (3, 1, 1)]);
        assert_eq!(report.disjoint_pairs, vec![2]);
        assert_eq!((report.u_max, report.v_max), (1, 1));
    }

    #[test]
    fn no_end_overlap_fixture_is_member() {
        // Hand check: f_2(f_4(0)) = 4/25 + 3/10 = 23/50 = f_3(0),
        // f_3(f_1(1)) = 1/25 + 23/50 = 1/2 = f_2(1).
        let ifs = fixtures::no_end_overlap_example();
        assert_eq!(ifs.apply_word(&[2, 4], &q("0")), q("23/50"));
        assert_eq!(ifs.apply_word(&[3, 1], &q("1")), q("1/2"));
        let report = validate_class_e(&ifs);
        assert!(report.is_member(), "{report:?}");
        assert_eq!(report.overlaps.len(), 1);
        assert_eq!((report.overlaps[0].index, report.overlaps[0].u, report.overlaps[0].v), (2, 1, 1));
        assert_eq!(report.disjoint_pairs, vec![1, 3]);
    }

    #[test]
    fn two_maps_violate_c() {
        let ifs = Ifs::new(vec![AffineMap::new(q("1/5"), q("0")).unwrap(), AffineMap::new(q("1/5"), q("4/5")).unwrap()]).unwrap();
        let report = validate_class_e(&ifs);
        assert_eq!(report.violation().unwrap().condition, Condition::C);
    }

    #[test]
    fn overlap_parameter_examples() {
        let ifs = fixtures::four_map_example();
        let o = overlap_parameters(&ifs, 1).unwrap().unwrap();
        assert_eq!((o.u, o.v), (1, 1));
        assert_eq!(o.overlap, Interval::new(q("4/25"), q("1/5")).unwrap());
        assert_eq!(o.composed, AffineMap::new(q("1/25"), q("4/25")).unwrap());
        assert_eq!(overlap_parameters(&ifs, 2).unwrap(), None);

        let fixture = fixtures::no_end_overlap_example();
        let o = overlap_parameters(&fixture, 2).unwrap().unwrap();
        assert_eq!((o.u, o.v), (1, 1));
        assert_eq!(o.overlap, Interval::new(q("23/50"), q("1/2")).unwrap());
        assert_eq!(o.composed, AffineMap::new(q("1/25"), q("23/50")).unwrap());
        assert!(overlap_parameters(&fixture, 4).is_err());
    }

    #[test]
    fn singleton_overlap_violates_d() {
        // f_1(I) = [0, 1/4] touches f_2(I) = [1/4, 1/2] at one point.
        let maps = ["0", "1/4", "3/4"].iter().map(|b| AffineMap::new(q("1/4"), q(b)).unwrap()).collect();
        let ifs = Ifs::new(maps).unwrap();
        assert!(matches!(overlap_parameters(&ifs, 1), Err(ModelError::ConditionD { .. })));
    }

    #[test]
    fn overlap_without_matching_words_violates_d() {
        // f_2(a) = 1/6 is not of the form f_1(f_3^u(0)) = (1 - 3^-u)/3.
        let maps = ["0", "1/6", "2/3"].iter().map(|b| AffineMap::new(q("1/3"), q(b)).unwrap()).collect();
        let ifs = Ifs::new(maps).unwrap();
        let report = validate_class_e(&ifs);
        let v = report.violation().expect("violation");
        assert_eq!(v.condition, Condition::D, "{v:?}");
    }

    #[test]
    fn condition_d_search_passes_target() {
        // ratio 1/5, offsets 0, 1/10, 1/2, 4/5: pair (1,2) overlaps on [1/10, 1/5]
        // but f_1(f_4(0)) = 4/25 overshoots 1/10.
        let maps = ["0", "1/10", "1/2", "4/5"].iter().map(|b| AffineMap::new(q("1/5"), q(b)).unwrap()).collect();
        let ifs = Ifs::new(maps).unwrap();
        let v = validate_class_e(&ifs).violation().cloned().expect("violation");
        assert_eq!(v.condition, Condition::D);
        assert!(v.witness.contains("jumps past"), "{}", v.witness);
    }

    #[test]
    fn theorem_case_examples() {
        let case = theorem_case(&validate_class_e(&fixtures::four_map_example())).unwrap();
        assert_eq!(case, TheoremCase { tag: CaseTag::EndOverlap, left_overlaps: true, right_overlaps: true });
        let case = theorem_case(&validate_class_e(&fixtures::no_end_overlap_example())).unwrap();
        assert_eq!(case.tag, CaseTag::NoEndOverlap);
        let left_only = fixtures::equal_ratio_chain(
            &Rational::frac(1, 5),
            &[fixtures::Step::Overlap(1), fixtures::Step::Gap(1), fixtures::Step::Gap(1)],
        )
        .unwrap();
        let case = theorem_case(&validate_class_e(&left_only)).unwrap();
        assert_eq!(case, TheoremCase { tag: CaseTag::EndOverlap, left_overlaps: true, right_overlaps: false });
    }

    #[test]
    fn ordering_records_permutation() {
        let ifs = fixtures::four_map_example();
        let shuffled: Vec<AffineMap> = [2, 0, 3, 1].iter().map(|&k| ifs.maps()[k].clone()).collect();
        let (sorted, perm) = order_by_left_endpoint(&shuffled);
        assert_eq!(sorted, ifs.maps());
        assert_eq!(perm, vec![1, 3, 0, 2]);
    }

    #[test]
    fn revalidation_is_identical() {
        let ifs = fixtures::four_map_example();
        assert_eq!(validate_class_e(&ifs), validate_class_e(&ifs));
    }
}
