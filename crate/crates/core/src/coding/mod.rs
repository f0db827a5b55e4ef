//! Codings of points: the projection of eventually periodic digit
//! sequences, residual graphs, coding-cardinality classification and the
//! witness constructions.

mod residual;
mod witness;

use std::fmt;

use thiserror::Error;

use crate::exact::Rational;
use crate::ifs::{Ifs, ModelError};

pub use residual::{
    build_residual_graph, classify_cardinality, classify_value, count_coding_prefixes, enters_end_cycle,
    enumerate_codings, CodingCardinality, Edge, LimitHit, Limits, ResidualGraph, MAX_ENUMERATED_PREFIXES,
};
pub use witness::{make_witness, WitnessRequest};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("digit {digit} out of range 1..={max}")]
    DigitOutOfRange { digit: usize, max: usize },
    #[error("period word must be nonempty")]
    EmptyPeriod,
    #[error("malformed point `{0}`: expected w=<digits>;p=<digits> with comma-separated digits")]
    MalformedPoint(String),
    #[error("point {0} lies outside the hull")]
    OutsideHull(Rational),
    #[error("no infinite coding survives from {0}: the point is not in the attractor")]
    RootNotInAttractor(Rational),
    #[error("residual exploration hit its {0} limit before closing")]
    Undecided(LimitHit),
    #[error("more than {limit} coding prefixes at depth {depth}")]
    TooManyPrefixes { depth: usize, limit: usize },
    #[error("target {target} is unreachable: {reason}")]
    UnreachableTarget { target: WitnessRequest, reason: String },
    #[error("witness {point} for {target} classified as {got}")]
    VerificationMismatch { target: WitnessRequest, point: String, got: CodingCardinality },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An exact point of the attractor given by an eventually periodic coding
/// `preperiod (period)^∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicPoint {
    preperiod: Vec<usize>,
    period: Vec<usize>,
    value: Rational,
}

impl SymbolicPoint {
    pub fn new(ifs: &Ifs, preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self, CodingError> {
        if period.is_empty() {
            return Err(CodingError::EmptyPeriod);
        }
        for &d in preperiod.iter().chain(&period) {
            if d == 0 || d > ifs.len() {
                return Err(CodingError::DigitOutOfRange { digit: d, max: ifs.len() });
            }
        }
        let value = evaluate(ifs, &preperiod, &period);
        Ok(SymbolicPoint { preperiod, period, value })
    }

    /// Parses `w=<digits>;p=<digits>`, digits comma-separated, e.g.
    /// `w=1;p=4` or `w=;p=1,4`.
    pub fn parse(ifs: &Ifs, text: &str) -> Result<Self, CodingError> {
        let malformed = || CodingError::MalformedPoint(text.to_string());
        let (w, p) = text.trim().split_once(';').ok_or_else(malformed)?;
        let w = w.trim().strip_prefix("w=").ok_or_else(malformed)?;
        let p = p.trim().strip_prefix("p=").ok_or_else(malformed)?;
        let digits = |s: &str| -> Result<Vec<usize>, CodingError> {
            if s.trim().is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|d| {
                    let d = d.trim();
                    if d.is_empty() || !d.bytes().all(|c| c.is_ascii_digit()) {
                        return Err(malformed());
                    }
                    d.parse::<usize>().map_err(|_| malformed())
                })
                .collect()
        };
        SymbolicPoint::new(ifs, digits(w)?, digits(p)?)
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.preperiod
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }
}

impl fmt::Display for SymbolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[usize]| w.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "w={};p={}", join(&self.preperiod), join(&self.period))
    }
}

/// `π(preperiod (period)^∞) = f_preperiod(fixed point of f_period)`.
pub fn evaluate(ifs: &Ifs, preperiod: &[usize], period: &[usize]) -> Rational {
    let cycle = ifs.word_map(period).expect("nonempty period");
    ifs.apply_word(preperiod, &cycle.fixed_point())
}

/// All `i` with `x ∈ f_i(I)`, increasing.
pub fn admissible_digits(ifs: &Ifs, x: &Rational) -> Vec<usize> {
    let digits: Vec<usize> = (1..=ifs.len()).filter(|&i| ifs.fundamental(i).contains(x)).collect();
    debug_assert!(digits.len() <= 2, "three fundamental intervals share {x}: condition B fails");
    digits
}

/// Renders a word as plain digits when every digit is a single character,
/// comma-separated otherwise.
pub fn word_to_string(word: &[usize]) -> String {
    if word.iter().all(|&d| d < 10) {
        word.iter().map(usize::to_string).collect()
    } else {
        word.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}
