//! Report document shared by the text and JSON renderings.
//!
//! Numbers carry an exact rational string where one exists and always a
//! decimal rounded half-even to nine places, so reports diff cleanly.

use std::fmt::Write as _;

use ifs_codings::coding::{word_to_string, CodingCardinality, ResidualGraph};
use ifs_codings::dimension::{DimensionResult, GraphDirectedSystem, Partition};
use ifs_codings::exact::{AffineMap, Interval, Rational};
use ifs_codings::ifs::{ClassEReport, TheoremCase};
use ifs_codings::theorems::{SweepSummary, TheoremReport};
use ifs_codings::Ifs;
use serde::{Deserialize, Serialize};

pub const PLACES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Number {
    pub exact: Option<String>,
    pub decimal: String,
}

impl Number {
    pub fn exact(q: &Rational) -> Self {
        Number { exact: Some(q.to_string()), decimal: q.to_decimal(PLACES) }
    }

    /// A floating-point value, rounded through its exact binary expansion.
    pub fn approx(x: f64) -> Self {
        let decimal = match Rational::from_f64(x) {
            Some(q) => q.to_decimal(PLACES),
            None => x.to_string(),
        };
        Number { exact: None, decimal }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub lo: Number,
    pub hi: Number,
}

impl Span {
    fn of(i: &Interval) -> Self {
        Span { lo: Number::exact(i.lo()), hi: Number::exact(i.hi()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub index: usize,
    pub source_line: Option<usize>,
    pub ratio: Number,
    pub offset: Number,
    pub image: Option<Span>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSection {
    pub name: Option<String>,
    pub maps: Vec<MapEntry>,
    pub hull: Option<Span>,
}

impl SystemSection {
    pub fn new(name: Option<String>, maps: &[AffineMap], lines: &[usize], ifs: Option<&Ifs>) -> Self {
        let maps = maps
            .iter()
            .enumerate()
            .map(|(k, f)| MapEntry {
                index: k + 1,
                source_line: lines.get(k).copied(),
                ratio: Number::exact(f.ratio()),
                offset: Number::exact(f.offset()),
                image: ifs.map(|s| Span::of(&s.fundamental(k + 1))),
            })
            .collect();
        SystemSection { name, maps, hull: ifs.map(|s| Span::of(s.hull())) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapEntry {
    pub pair: [usize; 2],
    pub u: usize,
    pub v: usize,
    pub interval: Span,
    pub ratio: Number,
    pub offset: Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub member: bool,
    pub condition: Option<String>,
    pub witness: Option<String>,
    pub overlaps: Vec<OverlapEntry>,
    pub disjoint_pairs: Vec<[usize; 2]>,
    pub u_max: usize,
    pub v_max: usize,
}

impl ValidationSection {
    pub fn new(r: &ClassEReport) -> Self {
        let v = r.violation();
        ValidationSection {
            member: r.is_member(),
            condition: v.map(|v| format!("{:?}", v.condition)),
            witness: v.map(|v| v.witness.clone()),
            overlaps: r
                .overlaps
                .iter()
                .map(|o| OverlapEntry {
                    pair: [o.index, o.index + 1],
                    u: o.u,
                    v: o.v,
                    interval: Span::of(&o.overlap),
                    ratio: Number::exact(o.composed.ratio()),
                    offset: Number::exact(o.composed.offset()),
                })
                .collect(),
            disjoint_pairs: r.disjoint_pairs.iter().map(|&i| [i, i + 1]).collect(),
            u_max: r.u_max,
            v_max: r.v_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSection {
    pub tag: String,
    pub left_overlaps: bool,
    pub right_overlaps: bool,
}

impl CaseSection {
    pub fn new(c: &TheoremCase) -> Self {
        CaseSection { tag: c.tag.to_string(), left_overlaps: c.left_overlaps, right_overlaps: c.right_overlaps }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEntry {
    /// 0-based index of the left partition point.
    pub left: usize,
    pub interval: Span,
    pub alpha: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSection {
    pub gamma: usize,
    pub u: usize,
    pub v: usize,
    pub points: Vec<Number>,
    pub admissible: Vec<PairEntry>,
}

impl PartitionSection {
    pub fn new(p: &Partition) -> Self {
        PartitionSection {
            gamma: p.gamma(),
            u: p.u(),
            v: p.v(),
            points: p.points().iter().map(Number::exact).collect(),
            admissible: p
                .admissible()
                .iter()
                .zip(p.alpha())
                .map(|(&i, &alpha)| PairEntry { left: i, interval: Span::of(&p.pair(i)), alpha })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixEntry {
    /// Left partition index of each row.
    pub vertices: Vec<usize>,
    pub counts: Vec<Vec<u32>>,
    pub strongly_connected: bool,
}

impl MatrixEntry {
    pub fn new(g: &GraphDirectedSystem, strongly_connected: bool) -> Self {
        MatrixEntry {
            vertices: g.vertices().iter().map(|v| v.index).collect(),
            counts: g.counts().to_vec(),
            strongly_connected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatricesSection {
    pub full: MatrixEntry,
    pub reduced: MatrixEntry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionEntry {
    pub set: String,
    pub value: Number,
    pub bracket: Span,
    pub method: String,
    pub iterations: usize,
}

impl DimensionEntry {
    pub fn new(set: &str, d: &DimensionResult) -> Self {
        DimensionEntry {
            set: set.to_string(),
            value: Number::approx(d.value),
            bracket: Span { lo: Number::exact(&d.lo), hi: Number::exact(&d.hi) },
            method: d.method.to_string(),
            iterations: d.iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prefixes {
    pub depth: usize,
    pub words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    pub point: String,
    pub value: Number,
    /// `finite`, `aleph0`, `continuum`, `unknown` or `none`.
    pub verdict: String,
    pub codings: Option<String>,
    pub limit: Option<String>,
    pub residual_nodes: usize,
    pub residual_edges: usize,
    pub prefixes: Option<Prefixes>,
}

impl ClassificationEntry {
    pub fn new(point: String, x: &Rational, c: Option<&CodingCardinality>, g: Option<&ResidualGraph>) -> Self {
        let (verdict, codings, limit) = match c {
            Some(CodingCardinality::Finite(k)) => ("finite", Some(k.to_string()), None),
            Some(CodingCardinality::CountablyInfinite) => ("aleph0", None, None),
            Some(CodingCardinality::Continuum) => ("continuum", None, None),
            Some(CodingCardinality::Unknown(hit)) => ("unknown", None, Some(hit.to_string())),
            None => ("none", Some("0".into()), None),
        };
        ClassificationEntry {
            point,
            value: Number::exact(x),
            verdict: verdict.into(),
            codings,
            limit,
            residual_nodes: g.map_or(0, |g| g.nodes().len()),
            residual_edges: g.map_or(0, |g| g.edges().len()),
            prefixes: None,
        }
    }

    pub fn with_prefixes(mut self, depth: usize, words: &[Vec<usize>]) -> Self {
        self.prefixes = Some(Prefixes { depth, words: words.iter().map(|w| word_to_string(w)).collect() });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub target: String,
    /// `found`, `unreachable` or `undecided`.
    pub status: String,
    pub point: Option<String>,
    pub value: Option<Number>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteBucket {
    pub codings: String,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offender {
    pub point: String,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSection {
    pub classified: usize,
    pub finite: Vec<FiniteBucket>,
    pub countable: usize,
    pub continuum: usize,
    pub unknown: usize,
    pub offenders: Vec<Offender>,
}

impl SweepSection {
    pub fn new(s: &SweepSummary) -> Self {
        SweepSection {
            classified: s.classified,
            finite: s.finite.iter().map(|(k, n)| FiniteBucket { codings: k.to_string(), points: *n }).collect(),
            countable: s.countable,
            continuum: s.continuum,
            unknown: s.unknown,
            offenders: s.offenders.iter().map(|(p, c)| Offender { point: p.clone(), verdict: c.to_string() }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremSection {
    pub theorem: u8,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
    pub sweep: Option<SweepSection>,
    pub statements: Vec<String>,
}

impl TheoremSection {
    pub fn new(t: &TheoremReport) -> Self {
        TheoremSection {
            theorem: t.theorem.number(),
            passed: t.passed(),
            checks: t
                .checks
                .iter()
                .map(|c| CheckEntry { name: c.name.clone(), passed: c.passed, detail: c.detail.clone() })
                .collect(),
            sweep: t.sweep.as_ref().map(SweepSection::new),
            statements: t.statements.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub system: SystemSection,
    pub validation: ValidationSection,
    pub case: Option<CaseSection>,
    pub partition: Option<PartitionSection>,
    pub matrices: Option<MatricesSection>,
    pub dimensions: Vec<DimensionEntry>,
    pub classifications: Vec<ClassificationEntry>,
    pub witnesses: Vec<WitnessEntry>,
    pub theorem: Option<TheoremSection>,
    pub error: Option<String>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, system: SystemSection, validation: ValidationSection) -> Self {
        Report {
            command: command.to_string(),
            system,
            validation,
            case: None,
            partition: None,
            matrices: None,
            dimensions: Vec::new(),
            classifications: Vec::new(),
            witnesses: Vec::new(),
            theorem: None,
            error: None,
            exit_code: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = self.write_text(&mut out);
        out
    }

    fn write_text(&self, out: &mut String) -> std::fmt::Result {
        let sys = &self.system;
        writeln!(out, "system: {} ({} maps)", sys.name.as_deref().unwrap_or("unnamed"), sys.maps.len())?;
        for m in &sys.maps {
            write!(out, "  f_{}(x) = {} x + {}", m.index, show_exact(&m.ratio), show_exact(&m.offset))?;
            if let Some(img) = &m.image {
                write!(out, "  image {}", show_span(img))?;
            }
            writeln!(out)?;
        }
        if let Some(h) = &sys.hull {
            writeln!(out, "  hull {}", show_span(h))?;
        }

        let v = &self.validation;
        if v.member {
            writeln!(out, "class: member")?;
        } else {
            writeln!(
                out,
                "class: violates condition {}: {}",
                v.condition.as_deref().unwrap_or("?"),
                v.witness.as_deref().unwrap_or("")
            )?;
        }
        for o in &v.overlaps {
            writeln!(
                out,
                "  overlap ({}, {}): u = {}, v = {}, {}, map {} x + {}",
                o.pair[0],
                o.pair[1],
                o.u,
                o.v,
                show_span(&o.interval),
                show_exact(&o.ratio),
                show_exact(&o.offset)
            )?;
        }
        for d in &v.disjoint_pairs {
            writeln!(out, "  disjoint ({}, {})", d[0], d[1])?;
        }
        if let Some(c) = &self.case {
            writeln!(
                out,
                "case: {} (left pair overlaps: {}, right pair overlaps: {})",
                c.tag, c.left_overlaps, c.right_overlaps
            )?;
        }

        if let Some(p) = &self.partition {
            writeln!(out, "partition: {} points, u = {}, v = {}", p.gamma, p.u, p.v)?;
            let pts: Vec<&str> = p.points.iter().map(show_exact).collect();
            writeln!(out, "  points {}", pts.join(" "))?;
            for e in &p.admissible {
                writeln!(out, "  pair {} {} alpha {}", e.left, show_span(&e.interval), e.alpha)?;
            }
        }
        if let Some(m) = &self.matrices {
            for (label, e) in [("full", &m.full), ("reduced", &m.reduced)] {
                writeln!(
                    out,
                    "matrix {label}: {} vertices {:?}, strongly connected: {}",
                    e.vertices.len(),
                    e.vertices,
                    e.strongly_connected
                )?;
                for row in &e.counts {
                    let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                    writeln!(out, "  [{}]", cells.join(" "))?;
                }
            }
        }
        for d in &self.dimensions {
            writeln!(
                out,
                "dim {} = {} in [{}, {}] ({}, {} iterations)",
                d.set, d.value.decimal, d.bracket.lo.decimal, d.bracket.hi.decimal, d.method, d.iterations
            )?;
        }
        for c in &self.classifications {
            write!(out, "point {} = {}: {}", c.point, show_exact(&c.value), c.verdict)?;
            if let Some(k) = &c.codings {
                write!(out, ", codings: {k}")?;
            }
            if let Some(l) = &c.limit {
                write!(out, ", {l} limit reached")?;
            }
            writeln!(out, ", residual graph {} nodes {} edges", c.residual_nodes, c.residual_edges)?;
            if let Some(p) = &c.prefixes {
                writeln!(out, "  prefixes of length {}: {}", p.depth, p.words.join(" "))?;
            }
        }
        for w in &self.witnesses {
            write!(out, "witness {}: {}", w.target, w.status)?;
            if let (Some(p), Some(x)) = (&w.point, &w.value) {
                write!(out, " {} = {}", p, show_exact(x))?;
            }
            if let Some(r) = &w.reason {
                write!(out, " ({r})")?;
            }
            writeln!(out)?;
        }
        if let Some(t) = &self.theorem {
            writeln!(out, "theorem {}: {}", t.theorem, if t.passed { "PASS" } else { "FAIL" })?;
            for c in &t.checks {
                writeln!(out, "  [{}] {}: {}", if c.passed { "ok" } else { "FAILED" }, c.name, c.detail)?;
            }
            if let Some(s) = &t.sweep {
                let buckets: Vec<String> = s.finite.iter().map(|b| format!("{}x{}", b.points, b.codings)).collect();
                writeln!(
                    out,
                    "  sweep: {} points, finite [{}], aleph0 {}, continuum {}, unknown {}",
                    s.classified,
                    buckets.join(" "),
                    s.countable,
                    s.continuum,
                    s.unknown
                )?;
                for o in &s.offenders {
                    writeln!(out, "    offender {}: {}", o.point, o.verdict)?;
                }
            }
            for s in &t.statements {
                writeln!(out, "  note: {s}")?;
            }
        }
        if let Some(e) = &self.error {
            writeln!(out, "error: {e}")?;
        }
        Ok(())
    }
}

fn show_exact(n: &Number) -> &str {
    n.exact.as_deref().unwrap_or(&n.decimal)
}

fn show_span(s: &Span) -> String {
    format!("[{}, {}]", show_exact(&s.lo), show_exact(&s.hi))
}
