use std::fmt;
use std::str::FromStr;

use super::residual::{classify_value, CodingCardinality, Limits};
use super::{CodingError, SymbolicPoint};
use crate::ifs::{theorem_case, CaseTag, ClassEReport, Ifs};

/// Coding count a witness point should have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessRequest {
    Finite(u64),
    CountablyInfinite,
    Continuum,
}

impl WitnessRequest {
    pub fn expected(&self) -> CodingCardinality {
        match *self {
            WitnessRequest::Finite(k) => CodingCardinality::finite(k),
            WitnessRequest::CountablyInfinite => CodingCardinality::CountablyInfinite,
            WitnessRequest::Continuum => CodingCardinality::Continuum,
        }
    }
}

impl fmt::Display for WitnessRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessRequest::Finite(k) => write!(f, "finite:{k}"),
            WitnessRequest::CountablyInfinite => f.write_str("aleph0"),
            WitnessRequest::Continuum => f.write_str("continuum"),
        }
    }
}

impl FromStr for WitnessRequest {
    type Err = String;

    /// `finite:<k>`, `aleph0` or `continuum`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "aleph0" => Ok(WitnessRequest::CountablyInfinite),
            "continuum" => Ok(WitnessRequest::Continuum),
            _ => match s.strip_prefix("finite:").map(str::parse::<u64>) {
                Some(Ok(k)) if k >= 1 => Ok(WitnessRequest::Finite(k)),
                _ => Err(format!("bad target `{s}`: expected finite:<k> with k >= 1, aleph0 or continuum")),
            },
        }
    }
}

fn repeat(digit: usize, n: usize) -> impl Iterator<Item = usize> {
    std::iter::repeat_n(digit, n)
}

/// Builds a point with the requested number of codings and checks it with
/// the classifier before returning it.
///
/// Finite targets with an overlapping end pair use `1 m^{us} c` (or the
/// mirror `m 1^{vs} c`) over a unique-coding tail `c`; without end overlaps
/// only powers of two are reachable, via `(i m^u)^s 1 m^∞` at the first
/// overlapping pair. Countable targets use `1 m^∞` or `m 1^∞`, and the
/// continuum target is the fixed point of an overlap's common composed map.
pub fn make_witness(
    ifs: &Ifs,
    report: &ClassEReport,
    req: WitnessRequest,
    limits: Limits,
) -> Result<SymbolicPoint, CodingError> {
    let case = theorem_case(report)?;
    let m = ifs.len();
    let unreachable = |reason: &str| CodingError::UnreachableTarget { target: req, reason: reason.to_string() };
    let first_overlap = report.overlaps.first().expect("members have an overlap");

    let (preperiod, period): (Vec<usize>, Vec<usize>) = match (req, case.tag) {
        (WitnessRequest::Finite(0), _) => return Err(unreachable("coding counts start at 1")),
        (WitnessRequest::Finite(k), CaseTag::EndOverlap) => {
            let s = (k - 1) as usize;
            if case.left_overlaps {
                let u = report.overlap(1).expect("left overlap").u;
                let anchor = if case.right_overlaps {
                    *report
                        .disjoint_pairs
                        .iter()
                        .find(|&&i| (2..=m.saturating_sub(2)).contains(&i))
                        .expect("condition C leaves a disjoint middle pair")
                } else {
                    m - 1
                };
                let tail = unique_tail(ifs, vec![anchor], vec![m], limits)?;
                let pre = std::iter::once(1).chain(repeat(m, u * s)).chain(tail.preperiod().iter().copied());
                (pre.collect(), tail.period().to_vec())
            } else {
                let v = report.overlap(m - 1).expect("right overlap").v;
                let tail = unique_tail(ifs, vec![2], vec![1], limits)?;
                let pre = std::iter::once(m).chain(repeat(1, v * s)).chain(tail.preperiod().iter().copied());
                (pre.collect(), tail.period().to_vec())
            }
        }
        (WitnessRequest::Finite(k), CaseTag::NoEndOverlap) => {
            if !k.is_power_of_two() {
                return Err(unreachable("without end overlaps only powers of two occur as finite coding counts"));
            }
            let s = k.trailing_zeros() as usize;
            let block = first_overlap.left_word(m);
            let tail = unique_tail(ifs, vec![1], vec![m], limits)?;
            let pre = std::iter::repeat_n(block, s).flatten().chain(tail.preperiod().iter().copied());
            (pre.collect(), tail.period().to_vec())
        }
        (WitnessRequest::CountablyInfinite, CaseTag::NoEndOverlap) => {
            return Err(unreachable("without end overlaps no point has countably many codings"));
        }
        (WitnessRequest::CountablyInfinite, CaseTag::EndOverlap) => {
            if case.left_overlaps {
                (vec![1], vec![m])
            } else {
                (vec![m], vec![1])
            }
        }
        (WitnessRequest::Continuum, _) => (Vec::new(), first_overlap.left_word(m)),
    };

    let point = SymbolicPoint::new(ifs, preperiod, period)?;
    let got = classify_value(ifs, point.value(), limits)?;
    if got != req.expected() {
        return Err(CodingError::VerificationMismatch { target: req, point: point.to_string(), got });
    }
    Ok(point)
}

fn unique_tail(ifs: &Ifs, preperiod: Vec<usize>, period: Vec<usize>, limits: Limits) -> Result<SymbolicPoint, CodingError> {
    let tail = SymbolicPoint::new(ifs, preperiod, period)?;
    let got = classify_value(ifs, tail.value(), limits)?;
    if got != CodingCardinality::finite(1) {
        return Err(CodingError::VerificationMismatch {
            target: WitnessRequest::Finite(1),
            point: tail.to_string(),
            got,
        });
    }
    Ok(tail)
}
