//! The endpoint partition of a class member, its graph-directed structure
//! and the Hausdorff dimension of the attractor and of its univoque part.
//!
//! Vertices are admissible pairs `[s_i, s_{i+1}]` of consecutive partition
//! points lying in one fundamental interval; pair `p` maps onto every pair
//! inside `f_{α(p)}^{-1}([s_p, s_{p+1}])`. Dimensions solve `ρ(M(s)) = 1` for
//! the ratio-weighted edge matrix and come with a rational bracket.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::digraph::is_strongly_connected;
use crate::exact::{Interval, Rational};
use crate::ifs::{ClassEReport, Ifs, ModelError};
use crate::spectral::{spectral_radius_bounds, RadiusBounds, SpectralError};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DimensionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("partition invariant violated: {0}")]
    PartitionInvariantViolation(String),
    #[error("cover violation: {0}")]
    CoverViolation(String),
    #[error("removing the switch regions leaves no vertex")]
    EmptyReducedSystem,
    #[error("the graph has no cycle, so the attractor is finite")]
    NoCycle,
    #[error("tolerance must be positive and finite")]
    BadTolerance,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// The sorted partition points with the admissible pairs and their map
/// indices. Indices into `points` are 0-based; map indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    points: Vec<Rational>,
    admissible: Vec<usize>,
    alpha: Vec<usize>,
    u: usize,
    v: usize,
}

impl Partition {
    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn gamma(&self) -> usize {
        self.points.len()
    }

    /// Left indices `i` of the admissible pairs `[s_i, s_{i+1}]`, increasing.
    pub fn admissible(&self) -> &[usize] {
        &self.admissible
    }

    /// `α` of each admissible pair, in the order of [`Partition::admissible`].
    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn pair(&self, i: usize) -> Interval {
        Interval::new(self.points[i].clone(), self.points[i + 1].clone()).expect("sorted points")
    }

    fn index_of(&self, x: &Rational) -> Option<usize> {
        self.points.binary_search(x).ok()
    }
}

fn require_member(report: &ClassEReport) -> Result<(), ModelError> {
    match report.violation() {
        Some(v) => Err(ModelError::NotAMember(v.condition)),
        None => Ok(()),
    }
}

/// Endpoints of the fundamental intervals together with `f_{1^ℓ}(b)` for
/// `ℓ <= v` and `f_{m^ℓ}(a)` for `ℓ <= u`, with `u`, `v` the largest overlap
/// depths. Checks the point count `2m + u + v - 2` and that both
/// `α`-preimages of every admissible pair are partition points.
pub fn build_partition(ifs: &Ifs, report: &ClassEReport) -> Result<Partition, DimensionError> {
    require_member(report)?;
    let m = ifs.len();
    let (u, v) = (report.u_max, report.v_max);
    let mut set = BTreeSet::new();
    for i in 1..=m {
        let iv = ifs.fundamental(i);
        set.insert(iv.lo().clone());
        set.insert(iv.hi().clone());
    }
    let mut left = ifs.b().clone();
    for _ in 0..v {
        left = ifs.map(1).apply(&left);
        set.insert(left.clone());
    }
    let mut right = ifs.a().clone();
    for _ in 0..u {
        right = ifs.map(m).apply(&right);
        set.insert(right.clone());
    }
    let points: Vec<Rational> = set.into_iter().collect();
    let expected = 2 * m + u + v - 2;
    if points.len() != expected {
        return Err(DimensionError::PartitionInvariantViolation(format!(
            "{} distinct points, expected 2m + u + v - 2 = {expected}",
            points.len()
        )));
    }

    let mut admissible = Vec::new();
    let mut alpha = Vec::new();
    for i in 0..points.len() - 1 {
        let owner = (1..=m).find(|&j| {
            let f = ifs.fundamental(j);
            f.contains(&points[i]) && f.contains(&points[i + 1])
        });
        if let Some(j) = owner {
            admissible.push(i);
            alpha.push(j);
        }
    }
    let part = Partition { points, admissible, alpha, u, v };
    for (&i, &j) in part.admissible.iter().zip(&part.alpha) {
        for x in [&part.points[i], &part.points[i + 1]] {
            let pre = ifs.map(j).invert_apply(x);
            if part.index_of(&pre).is_none() {
                return Err(DimensionError::PartitionInvariantViolation(format!(
                    "f_{j}^-1({x}) = {pre} is not a partition point"
                )));
            }
        }
    }
    Ok(part)
}

/// One vertex of the graph-directed system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    /// Left index of the pair in the partition.
    pub index: usize,
    pub interval: Interval,
    pub alpha: usize,
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdsEdge {
    pub from: usize,
    pub to: usize,
    pub alpha: usize,
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDirectedSystem {
    vertices: Vec<Vertex>,
    edges: Vec<GdsEdge>,
    counts: Vec<Vec<u32>>,
}

impl GraphDirectedSystem {
    /// Builds a system from vertices and edges given as vertex positions.
    /// Each edge takes the map of its source vertex.
    pub fn from_parts(vertices: Vec<Vertex>, links: &[(usize, usize)]) -> Self {
        let n = vertices.len();
        let mut counts = vec![vec![0u32; n]; n];
        let mut edges = Vec::with_capacity(links.len());
        for &(from, to) in links {
            counts[from][to] += 1;
            let src = &vertices[from];
            edges.push(GdsEdge { from, to, alpha: src.alpha, ratio: src.ratio.clone() });
        }
        GraphDirectedSystem { vertices, edges, counts }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GdsEdge] {
        &self.edges
    }

    pub fn counts(&self) -> &[Vec<u32>] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        adj
    }

    /// `M(s)[p][q] = counts[p][q] · r_p^s` in floating point.
    pub fn weighted_matrix(&self, s: f64) -> Vec<Vec<f64>> {
        let scale: Vec<f64> = self.vertices.iter().map(|v| v.ratio.to_f64().powf(s)).collect();
        self.counts
            .iter()
            .zip(&scale)
            .map(|(row, &w)| row.iter().map(|&c| f64::from(c) * w).collect())
            .collect()
    }

    /// Common contraction ratio, if all vertices share one.
    pub fn common_ratio(&self) -> Option<&Rational> {
        let first = &self.vertices.first()?.ratio;
        self.vertices.iter().all(|v| &v.ratio == first).then_some(first)
    }

    /// DOT rendering: vertices labelled `lo..hi`, edges labelled with the
    /// index of the map they use.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{k} [label=\"{}..{}\"];", v.interval.lo(), v.interval.hi());
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, e.alpha);
        }
        out.push_str("}\n");
        out
    }
}

/// The graph on admissible pairs. Also checks the interval-level cover:
/// admissible pairs and fundamental intervals have the same union, no gap
/// meets the interior of a fundamental interval, and every pair is tiled by
/// the images of the partition pieces inside its preimage.
pub fn build_graph(ifs: &Ifs, part: &Partition) -> Result<GraphDirectedSystem, DimensionError> {
    check_cover(ifs, part)?;
    let pos_of = |i: usize| part.admissible.binary_search(&i).ok();
    let vertices: Vec<Vertex> = part
        .admissible
        .iter()
        .zip(&part.alpha)
        .map(|(&i, &j)| Vertex { index: i, interval: part.pair(i), alpha: j, ratio: ifs.map(j).ratio().clone() })
        .collect();
    let mut links = Vec::new();
    for (p, v) in vertices.iter().enumerate() {
        let f = ifs.map(v.alpha);
        let lo = part.index_of(&f.invert_apply(v.interval.lo())).expect("closed partition");
        let hi = part.index_of(&f.invert_apply(v.interval.hi())).expect("closed partition");
        check_tiling(ifs, part, v, lo, hi)?;
        links.extend((lo..hi).filter_map(pos_of).map(|q| (p, q)));
    }
    Ok(GraphDirectedSystem::from_parts(vertices, &links))
}

fn check_cover(ifs: &Ifs, part: &Partition) -> Result<(), DimensionError> {
    let fundamentals: Vec<Interval> = (1..=ifs.len()).map(|i| ifs.fundamental(i)).collect();
    let pairs: Vec<Interval> = part.admissible.iter().map(|&i| part.pair(i)).collect();
    if merge(&fundamentals) != merge(&pairs) {
        return Err(DimensionError::CoverViolation(
            "admissible pairs and fundamental intervals have different unions".to_string(),
        ));
    }
    for i in 0..part.gamma() - 1 {
        if part.admissible.binary_search(&i).is_ok() {
            continue;
        }
        let gap = part.pair(i);
        if let Some(f) = fundamentals.iter().find(|f| f.lo().clone().max(gap.lo().clone()) < f.hi().clone().min(gap.hi().clone())) {
            return Err(DimensionError::CoverViolation(format!("gap {gap} meets the interior of {f}")));
        }
    }
    Ok(())
}

fn check_tiling(ifs: &Ifs, part: &Partition, v: &Vertex, lo: usize, hi: usize) -> Result<(), DimensionError> {
    let f = ifs.map(v.alpha);
    let mut at = v.interval.lo().clone();
    for i in lo..hi {
        let img = f.apply_interval(&part.pair(i));
        if img.lo() != &at || !v.interval.contains_interval(&img) {
            return Err(DimensionError::CoverViolation(format!("images under f_{} do not tile {}", v.alpha, v.interval)));
        }
        at = img.hi().clone();
    }
    if &at != v.interval.hi() {
        return Err(DimensionError::CoverViolation(format!("images under f_{} do not reach {}", v.alpha, v.interval.hi())));
    }
    Ok(())
}

fn merge(intervals: &[Interval]) -> Vec<(Rational, Rational)> {
    let mut sorted: Vec<(Rational, Rational)> = intervals.iter().map(|iv| (iv.lo().clone(), iv.hi().clone())).collect();
    sorted.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (lo, hi) in sorted {
        match out.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Every vertex reaches every vertex. An empty or one-vertex graph counts
/// as strongly connected, loop or not.
pub fn strongly_connected(gds: &GraphDirectedSystem) -> bool {
    is_strongly_connected(&gds.adjacency())
}

/// Drops the switch regions `[f_{ℓ+1}(a), f_ℓ(b)]` of the overlapping pairs
/// and every edge touching them.
pub fn reduced_system(
    ifs: &Ifs,
    report: &ClassEReport,
    part: &Partition,
    gds: &GraphDirectedSystem,
) -> Result<GraphDirectedSystem, DimensionError> {
    require_member(report)?;
    let mut drop = vec![false; gds.len()];
    for ov in &report.overlaps {
        let (lo, hi) = (ifs.fundamental(ov.index + 1).lo().clone(), ifs.fundamental(ov.index).hi().clone());
        let found = part
            .index_of(&lo)
            .and_then(|i| gds.vertices.iter().position(|v| v.index == i && v.interval.hi() == &hi));
        match found {
            Some(p) => drop[p] = true,
            None => {
                return Err(DimensionError::PartitionInvariantViolation(format!(
                    "switch region [{lo}, {hi}] is not an admissible pair"
                )))
            }
        }
    }
    let keep: Vec<usize> = (0..gds.len()).filter(|&p| !drop[p]).collect();
    if keep.is_empty() {
        return Err(DimensionError::EmptyReducedSystem);
    }
    let mut new_pos = vec![usize::MAX; gds.len()];
    for (k, &p) in keep.iter().enumerate() {
        new_pos[p] = k;
    }
    let vertices = keep.iter().map(|&p| gds.vertices[p].clone()).collect();
    let links: Vec<(usize, usize)> = gds
        .edges
        .iter()
        .filter(|e| !drop[e.from] && !drop[e.to])
        .map(|e| (new_pos[e.from], new_pos[e.to]))
        .collect();
    Ok(GraphDirectedSystem::from_parts(vertices, &links))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    EqualRatioClosedForm,
    Bisection,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::EqualRatioClosedForm => "equal-ratio-closed-form",
            Method::Bisection => "bisection",
        })
    }
}

/// A dimension value with a bracket `lo < s* < hi` certified by
/// Collatz–Wielandt bounds: `ρ(M(lo)) > 1 > ρ(M(hi))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionResult {
    pub value: f64,
    pub lo: Rational,
    pub hi: Rational,
    pub iterations: usize,
    pub method: Method,
}

impl DimensionResult {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

enum Side {
    Below,
    Above,
    Unsure,
}

struct Prober<'a> {
    gds: &'a GraphDirectedSystem,
    spectral_tol: f64,
    iterations: usize,
}

impl Prober<'_> {
    fn bounds(&mut self, s: f64) -> Result<RadiusBounds, DimensionError> {
        let b = spectral_radius_bounds(&self.gds.weighted_matrix(s), self.spectral_tol)?;
        self.iterations += b.iterations;
        Ok(b)
    }

    /// Whether `s` is certainly below (`ρ > 1`) or above (`ρ < 1`) the root.
    fn side(&mut self, s: f64) -> Result<Side, DimensionError> {
        let b = self.bounds(s)?;
        Ok(if b.lower > 1.0 {
            Side::Below
        } else if b.upper < 1.0 {
            Side::Above
        } else {
            Side::Unsure
        })
    }

    fn certify(&mut self, lo: f64, hi: f64) -> Result<bool, DimensionError> {
        Ok(matches!(self.side(lo)?, Side::Below) && matches!(self.side(hi)?, Side::Above))
    }
}

fn check_tol(tol: f64) -> Result<(), DimensionError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(DimensionError::BadTolerance)
    }
}

fn result(value: f64, lo: f64, hi: f64, iterations: usize, method: Method) -> DimensionResult {
    let q = |x: f64| Rational::from_f64(x).expect("finite bracket");
    DimensionResult { value, lo: q(lo), hi: q(hi), iterations, method }
}

fn spectral_tol(tol: f64) -> f64 {
    (tol * 1e-3).max(1e-15)
}

/// The `s` with `ρ(M(s)) = 1`. Equal-ratio systems use
/// `log ρ(counts) / -log λ` and certify a bracket around it; otherwise the
/// root is found by bisection.
pub fn mauldin_williams_dimension(gds: &GraphDirectedSystem, tol: f64) -> Result<DimensionResult, DimensionError> {
    check_tol(tol)?;
    if gds.is_empty() {
        return Err(DimensionError::NoCycle);
    }
    let Some(lambda) = gds.common_ratio() else {
        return bisection_dimension(gds, tol);
    };
    let neg_log = -lambda.to_f64().ln();
    let mut prober = Prober { gds, spectral_tol: spectral_tol(tol), iterations: 0 };
    let rho = prober.bounds(0.0)?;
    if rho.upper <= 0.0 {
        return Err(DimensionError::NoCycle);
    }
    let value = rho.estimate().ln() / neg_log;
    let (lo, hi) = (value - tol / 4.0, value + tol / 4.0);
    if prober.certify(lo, hi)? {
        return Ok(result(value, lo, hi, prober.iterations, Method::EqualRatioClosedForm));
    }
    bisection_dimension(gds, tol)
}

/// [`mauldin_williams_dimension`] without the equal-ratio shortcut.
pub fn bisection_dimension(gds: &GraphDirectedSystem, tol: f64) -> Result<DimensionResult, DimensionError> {
    check_tol(tol)?;
    let mut prober = Prober { gds, spectral_tol: spectral_tol(tol), iterations: 0 };
    let at_zero = prober.bounds(0.0)?;
    // integer matrices have ρ = 0 or ρ >= 1
    if at_zero.upper < 1.0 {
        return Err(DimensionError::NoCycle);
    }
    let mut lo = 0.0f64;
    if at_zero.lower <= 1.0 {
        // ρ(counts) = 1: the root sits at 0
        lo = -tol / 2.0;
        if !matches!(prober.side(lo)?, Side::Below) {
            return Err(SpectralError::NonConvergence { iterations: prober.iterations }.into());
        }
    }
    let mut hi = 1.0f64;
    while !matches!(prober.side(hi)?, Side::Above) {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(SpectralError::NonConvergence { iterations: prober.iterations }.into());
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match prober.side(mid)? {
            Side::Below => lo = mid,
            Side::Above => hi = mid,
            Side::Unsure => {
                let (a, b) = (mid - tol / 4.0, mid + tol / 4.0);
                if matches!(prober.side(a)?, Side::Below) && matches!(prober.side(b)?, Side::Above) {
                    lo = a.max(lo);
                    hi = b.min(hi);
                } else {
                    return Err(SpectralError::NonConvergence { iterations: prober.iterations }.into());
                }
            }
        }
    }
    Ok(result(0.5 * (lo + hi), lo, hi, prober.iterations, Method::Bisection))
}

/// Partition, graph and both dimensions of a class member.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionReport {
    pub partition: Partition,
    pub full: GraphDirectedSystem,
    pub reduced: GraphDirectedSystem,
    pub full_connected: bool,
    pub reduced_connected: bool,
    pub dim_attractor: DimensionResult,
    pub dim_univoque: DimensionResult,
}

pub fn analyse(ifs: &Ifs, report: &ClassEReport, tol: f64) -> Result<DimensionReport, DimensionError> {
    let partition = build_partition(ifs, report)?;
    let full = build_graph(ifs, &partition)?;
    let reduced = reduced_system(ifs, report, &partition, &full)?;
    let dim_attractor = mauldin_williams_dimension(&full, tol)?;
    let dim_univoque = mauldin_williams_dimension(&reduced, tol)?;
    Ok(DimensionReport {
        full_connected: strongly_connected(&full),
        reduced_connected: strongly_connected(&reduced),
        partition,
        full,
        reduced,
        dim_attractor,
        dim_univoque,
    })
}
