//! End-to-end harnesses for the three coding-count theorems on a concrete
//! class member.
//!
//! Each harness builds witnesses, classifies them and sweeps small
//! eventually periodic points. Statements about Hausdorff measure or about
//! `dim U_k` for every `k` are not measurable here; they are carried as
//! `statements` next to the checks that support them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::coding::{classify_value, make_witness, CodingCardinality, CodingError, Limits, SymbolicPoint, WitnessRequest};
use crate::dimension::{analyse, DimensionError, DimensionReport, DEFAULT_TOLERANCE};
use crate::exact::Rational;
use crate::ifs::{theorem_case, CaseTag, ClassEReport, Ifs, ModelError, TheoremCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Some end pair overlaps: every `k >= 1` and `ℵ₀` occur.
    EndOverlap,
    /// No end pair overlaps: only `k = 2^s` occur, and no `ℵ₀`.
    PowersOfTwo,
    /// Continuum codings carry the full dimension.
    Continuum,
}

impl Theorem {
    pub fn number(&self) -> u8 {
        match self {
            Theorem::EndOverlap => 1,
            Theorem::PowersOfTwo => 2,
            Theorem::Continuum => 3,
        }
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" => Ok(Theorem::EndOverlap),
            "2" => Ok(Theorem::PowersOfTwo),
            "3" => Ok(Theorem::Continuum),
            other => Err(format!("unknown theorem `{other}`: expected 1, 2 or 3")),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theorem {}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{theorem} applies to {needed} systems, this one is {found}")]
    CaseMismatch { theorem: Theorem, needed: CaseTag, found: CaseTag },
    #[error(transparent)]
    Dimension(#[from] DimensionError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnessConfig {
    /// Largest finite coding count requested in the end-overlap harness.
    pub k_max: u64,
    /// Largest exponent `s` for `2^s` witnesses.
    pub s_max: u32,
    pub sweep_preperiod: usize,
    pub sweep_period: usize,
    pub sweep_cap: usize,
    pub limits: Limits,
    pub tol: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            k_max: 6,
            s_max: 4,
            sweep_preperiod: 4,
            sweep_period: 3,
            sweep_cap: 5000,
            limits: Limits::default(),
            tol: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Tally of a sampled-point sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub classified: usize,
    pub finite: Vec<(BigUint, usize)>,
    pub countable: usize,
    pub continuum: usize,
    pub unknown: usize,
    /// Points whose verdict broke the expected dichotomy.
    pub offenders: Vec<(String, CodingCardinality)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub case: TheoremCase,
    pub checks: Vec<Check>,
    pub sweep: Option<SweepSummary>,
    pub dimensions: Option<DimensionReport>,
    pub statements: Vec<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn verify(
    ifs: &Ifs,
    report: &ClassEReport,
    theorem: Theorem,
    config: &HarnessConfig,
) -> Result<TheoremReport, HarnessError> {
    let case = theorem_case(report)?;
    let needed = match theorem {
        Theorem::EndOverlap => Some(CaseTag::EndOverlap),
        Theorem::PowersOfTwo => Some(CaseTag::NoEndOverlap),
        Theorem::Continuum => None,
    };
    if let Some(needed) = needed.filter(|&n| n != case.tag) {
        return Err(HarnessError::CaseMismatch { theorem, needed, found: case.tag });
    }
    let mut out = TheoremReport { theorem, case, checks: Vec::new(), sweep: None, dimensions: None, statements: Vec::new() };
    match theorem {
        Theorem::EndOverlap => end_overlap(ifs, report, config, &mut out),
        Theorem::PowersOfTwo => powers_of_two(ifs, report, config, &mut out),
        Theorem::Continuum => continuum(ifs, report, config, &mut out)?,
    }
    Ok(out)
}

fn witness_check(ifs: &Ifs, report: &ClassEReport, req: WitnessRequest, limits: Limits) -> Check {
    let name = format!("witness {req}");
    match make_witness(ifs, report, req, limits) {
        Ok(p) => Check::new(name, true, format!("{p} = {}", p.value())),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn unreachable_check(ifs: &Ifs, report: &ClassEReport, req: WitnessRequest, limits: Limits) -> Check {
    let name = format!("no witness {req}");
    match make_witness(ifs, report, req, limits) {
        Err(CodingError::UnreachableTarget { reason, .. }) => Check::new(name, true, reason),
        Ok(p) => Check::new(name, false, format!("constructed {p}")),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn classify_check(ifs: &Ifs, name: String, x: &Rational, want: &CodingCardinality, limits: Limits) -> Check {
    match classify_value(ifs, x, limits) {
        Ok(got) => Check::new(name, &got == want, format!("{x}: {got}")),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn end_overlap(ifs: &Ifs, report: &ClassEReport, config: &HarnessConfig, out: &mut TheoremReport) {
    for k in 1..=config.k_max {
        out.checks.push(witness_check(ifs, report, WitnessRequest::Finite(k), config.limits));
    }
    out.checks.push(witness_check(ifs, report, WitnessRequest::CountablyInfinite, config.limits));
    let m = ifs.len();
    let (digit, start, end) = if out.case.left_overlaps { (1, ifs.b(), 'b') } else { (m, ifs.a(), 'a') };
    for n in 1..=4 {
        let x = ifs.apply_word(&vec![digit; n], start);
        let name = format!("f_{digit}^{n}({end}) is countable");
        out.checks.push(classify_check(ifs, name, &x, &CodingCardinality::CountablyInfinite, config.limits));
    }
    out.statements.push("dim U_k(E) = dim U_1(E) for every k >= 1 and for k = aleph0".to_string());
}

fn powers_of_two(ifs: &Ifs, report: &ClassEReport, config: &HarnessConfig, out: &mut TheoremReport) {
    for s in 0..=config.s_max {
        out.checks.push(witness_check(ifs, report, WitnessRequest::Finite(1 << s), config.limits));
    }
    for k in [3, 5, 6] {
        out.checks.push(unreachable_check(ifs, report, WitnessRequest::Finite(k), config.limits));
    }
    out.checks.push(unreachable_check(ifs, report, WitnessRequest::CountablyInfinite, config.limits));

    let sweep = sweep(ifs, config);
    let detail = format!(
        "{} points: finite {:?}, aleph0 {}, continuum {}, unknown {}",
        sweep.classified,
        sweep.finite.iter().map(|(k, n)| format!("{k}x{n}")).collect::<Vec<_>>(),
        sweep.countable,
        sweep.continuum,
        sweep.unknown
    );
    let clean = sweep.offenders.is_empty();
    let detail = if clean {
        detail
    } else {
        let (p, got) = &sweep.offenders[0];
        format!("{detail}; first offender {p}: {got}")
    };
    out.checks.push(Check::new("sampled points have 2^s codings or a continuum", clean, detail));
    out.sweep = Some(sweep);
    out.statements.push("U_k(E) is nonempty iff k = 2^s, and dim U_{2^s}(E) = dim U_1(E)".to_string());
    out.statements.push("U_aleph0(E) is empty".to_string());
}

fn continuum(ifs: &Ifs, report: &ClassEReport, config: &HarnessConfig, out: &mut TheoremReport) -> Result<(), HarnessError> {
    out.checks.push(witness_check(ifs, report, WitnessRequest::Continuum, config.limits));
    let dims = analyse(ifs, report, config.tol)?;
    let (e, u) = (&dims.dim_attractor, &dims.dim_univoque);
    out.checks.push(Check::new(
        "graph on admissible pairs is strongly connected",
        dims.full_connected,
        format!("{} vertices", dims.full.len()),
    ));
    out.checks.push(Check::new(
        "dim U_1 < dim E",
        u.hi < e.lo,
        format!("dim E in [{:.12}, {:.12}], dim U_1 in [{:.12}, {:.12}]", e.lo.to_f64(), e.hi.to_f64(), u.lo.to_f64(), u.hi.to_f64()),
    ));
    out.statements.push(format!("dim U_continuum(E) = dim E = {:.9}", e.value));
    out.statements.push("0 < H^s(U_continuum(E)) < infinity for s = dim E".to_string());
    out.dimensions = Some(dims);
    Ok(())
}

/// Words over `1..=m` of the given length, in lexicographic order.
fn words(m: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.pow(len as u32);
    (0..total).map(move |mut n| {
        let mut w = vec![1; len];
        for d in w.iter_mut().rev() {
            *d = n % m + 1;
            n /= m;
        }
        w
    })
}

/// Classifies the distinct values of `w (p)^∞` with `|w| <= sweep_preperiod`
/// and `1 <= |p| <= sweep_period`, shortest words first, up to `sweep_cap`
/// points. Finite counts that are not powers of two and countable verdicts
/// are offenders.
pub fn sweep(ifs: &Ifs, config: &HarnessConfig) -> SweepSummary {
    let m = ifs.len();
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    'outer: for pre_len in 0..=config.sweep_preperiod {
        for per_len in 1..=config.sweep_period {
            for pre in words(m, pre_len) {
                for per in words(m, per_len) {
                    let p = SymbolicPoint::new(ifs, pre.clone(), per).expect("digits in range");
                    if seen.insert(p.value().clone()) {
                        points.push(p);
                        if points.len() == config.sweep_cap {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }

    let verdicts = classify_all(ifs, &points, config.limits);
    let mut summary = SweepSummary { classified: points.len(), ..SweepSummary::default() };
    let mut finite = std::collections::BTreeMap::new();
    for (p, v) in points.iter().zip(verdicts) {
        let offends = match &v {
            CodingCardinality::Finite(k) => {
                *finite.entry(k.clone()).or_insert(0) += 1;
                k.count_ones() != 1
            }
            CodingCardinality::CountablyInfinite => {
                summary.countable += 1;
                true
            }
            CodingCardinality::Continuum => {
                summary.continuum += 1;
                false
            }
            CodingCardinality::Unknown(_) => {
                summary.unknown += 1;
                false
            }
        };
        if offends {
            summary.offenders.push((p.to_string(), v));
        }
    }
    summary.finite = finite.into_iter().collect();
    summary
}

fn classify_all(ifs: &Ifs, points: &[SymbolicPoint], limits: Limits) -> Vec<CodingCardinality> {
    let classify = |p: &SymbolicPoint| match classify_value(ifs, p.value(), limits) {
        Ok(v) => v,
        Err(CodingError::Undecided(hit)) => CodingCardinality::Unknown(hit),
        Err(e) => panic!("{p} is a coding of itself, yet classification failed: {e}"),
    };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = points.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(classify).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("classifier thread")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ifs::validate_class_e;

    fn run(ifs: &Ifs, t: Theorem, config: &HarnessConfig) -> Result<TheoremReport, HarnessError> {
        verify(ifs, &validate_class_e(ifs), t, config)
    }

    #[test]
    fn end_overlap_harness() {
        let ifs = fixtures::four_map_example();
        let r = run(&ifs, Theorem::EndOverlap, &HarnessConfig::default()).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        assert_eq!(r.checks.len(), 6 + 1 + 4);
        use fixtures::Step;
        let right = fixtures::equal_ratio_chain(&Rational::frac(1, 5), &[Step::Gap(2), Step::Gap(1), Step::Overlap(1)]).unwrap();
        let r = run(&right, Theorem::EndOverlap, &HarnessConfig::default()).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        assert!(r.checks.iter().any(|c| c.name == "f_4^2(a) is countable"));
    }

    #[test]
    fn powers_of_two_harness() {
        let ifs = fixtures::no_end_overlap_example();
        let config = HarnessConfig { sweep_cap: 300, ..HarnessConfig::default() };
        let r = run(&ifs, Theorem::PowersOfTwo, &config).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        let sweep = r.sweep.unwrap();
        assert_eq!(sweep.classified, 300);
        assert_eq!(sweep.countable, 0);
    }

    #[test]
    fn continuum_harness() {
        for ifs in [fixtures::four_map_example(), fixtures::no_end_overlap_example()] {
            let r = run(&ifs, Theorem::Continuum, &HarnessConfig::default()).unwrap();
            assert!(r.passed(), "{:#?}", r.checks);
            assert!(r.dimensions.is_some());
        }
    }

    #[test]
    fn case_mismatch() {
        let four = fixtures::four_map_example();
        assert!(matches!(
            run(&four, Theorem::PowersOfTwo, &HarnessConfig::default()),
            Err(HarnessError::CaseMismatch { needed: CaseTag::NoEndOverlap, .. })
        ));
        let middle = fixtures::no_end_overlap_example();
        assert!(matches!(run(&middle, Theorem::EndOverlap, &HarnessConfig::default()), Err(HarnessError::CaseMismatch { .. })));
    }

    #[test]
    fn sweep_flags_countable_points_on_end_overlap_systems() {
        let ifs = fixtures::four_map_example();
        let config = HarnessConfig { sweep_preperiod: 1, sweep_period: 1, ..HarnessConfig::default() };
        let s = sweep(&ifs, &config);
        // 1/5 = π(2^∞) = π(1 4^∞) has countably many codings
        assert!(s.countable > 0);
        assert!(s.offenders.iter().any(|(p, v)| p == "w=;p=2" && v == &CodingCardinality::CountablyInfinite));
    }

    #[test]
    fn word_order() {
        let w: Vec<Vec<usize>> = words(3, 2).collect();
        assert_eq!(w.len(), 9);
        assert_eq!(w[0], vec![1, 1]);
        assert_eq!(w[1], vec![1, 2]);
        assert_eq!(w[8], vec![3, 3]);
        assert_eq!(words(4, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }
}
