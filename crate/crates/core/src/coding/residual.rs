use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{admissible_digits, CodingError};
use crate::digraph::{reachable_from, tarjan_scc};
use crate::exact::Rational;
use crate::ifs::Ifs;

/// Upper bound on the number of words [`enumerate_codings`] will list.
pub const MAX_ENUMERATED_PREFIXES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_nodes: 4096, max_depth: 512 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitHit {
    MaxNodes,
    MaxDepth,
}

impl fmt::Display for LimitHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitHit::MaxNodes => "max_nodes",
            LimitHit::MaxDepth => "max_depth",
        })
    }
}

/// `from --digit--> to` with `to = f_digit^{-1}(from)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub digit: usize,
    pub to: usize,
}

/// Closure of `y ↦ { f_i^{-1}(y) : y ∈ f_i(I) }` from a root value. Its
/// infinite paths from the root are exactly the codings of the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualGraph {
    nodes: Vec<Rational>,
    edges: Vec<Edge>,
    /// Outgoing edge indices per node, in increasing digit order.
    out: Vec<Vec<usize>>,
    truncated: Option<LimitHit>,
}

impl ResidualGraph {
    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.out[node].iter().map(|&e| &self.edges[e])
    }

    pub fn node_of(&self, value: &Rational) -> Option<usize> {
        self.nodes.iter().position(|v| v == value)
    }

    /// True when the closure completed within the limits.
    pub fn exhausted(&self) -> bool {
        self.truncated.is_none()
    }

    pub fn limit_hit(&self) -> Option<LimitHit> {
        self.truncated
    }
}

/// Breadth-first residual closure from `x`, deduplicating exact values.
/// Hitting a limit marks the graph as not exhausted rather than failing.
pub fn build_residual_graph(ifs: &Ifs, x: &Rational, limits: Limits) -> Result<ResidualGraph, CodingError> {
    if !ifs.hull().contains(x) {
        return Err(CodingError::OutsideHull(x.clone()));
    }
    let mut index: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut nodes = vec![x.clone()];
    let mut depth = vec![0usize];
    let mut edges = Vec::new();
    let mut out = vec![Vec::new()];
    let mut truncated = None;
    index.insert(x.clone(), 0);
    let mut queue = VecDeque::from([0usize]);

    'bfs: while let Some(y) = queue.pop_front() {
        for digit in admissible_digits(ifs, &nodes[y]) {
            let z = ifs.map(digit).invert_apply(&nodes[y]);
            let to = match index.get(&z) {
                Some(&t) => t,
                None => {
                    if depth[y] + 1 > limits.max_depth {
                        truncated = Some(LimitHit::MaxDepth);
                        break 'bfs;
                    }
                    if nodes.len() >= limits.max_nodes {
                        truncated = Some(LimitHit::MaxNodes);
                        break 'bfs;
                    }
                    let t = nodes.len();
                    index.insert(z.clone(), t);
                    nodes.push(z);
                    depth.push(depth[y] + 1);
                    out.push(Vec::new());
                    queue.push_back(t);
                    t
                }
            };
            out[y].push(edges.len());
            edges.push(Edge { from: y, digit, to });
        }
    }
    Ok(ResidualGraph { nodes, edges, out, truncated })
}

/// Number of codings of a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CodingCardinality {
    Finite(BigUint),
    CountablyInfinite,
    Continuum,
    Unknown(LimitHit),
}

impl CodingCardinality {
    pub fn finite(k: u64) -> Self {
        CodingCardinality::Finite(BigUint::from(k))
    }

    pub fn finite_count(&self) -> Option<&BigUint> {
        match self {
            CodingCardinality::Finite(k) => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for CodingCardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodingCardinality::Finite(k) => write!(f, "finite:{k}"),
            CodingCardinality::CountablyInfinite => f.write_str("aleph0"),
            CodingCardinality::Continuum => f.write_str("continuum"),
            CodingCardinality::Unknown(hit) => write!(f, "unknown({hit})"),
        }
    }
}

/// Dead-branch pruning plus SCC structure of the part reachable from the root.
struct Analysis {
    alive: Vec<bool>,
    reachable: Vec<bool>,
    comp: Vec<usize>,
    comp_count: usize,
    cyclic: Vec<bool>,
    /// Alive successors per node with multiplicity (one entry per edge).
    succ: Vec<Vec<usize>>,
}

impl Analysis {
    fn new(g: &ResidualGraph) -> Result<Self, CodingError> {
        let n = g.nodes.len();
        let mut alive = vec![true; n];
        let mut outdeg: Vec<usize> = g.out.iter().map(Vec::len).collect();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &g.edges {
            preds[e.to].push(e.from);
        }
        let mut dead: Vec<usize> = (0..n).filter(|&v| outdeg[v] == 0).collect();
        for &v in &dead {
            alive[v] = false;
        }
        while let Some(v) = dead.pop() {
            for &p in &preds[v] {
                outdeg[p] -= 1;
                if outdeg[p] == 0 && alive[p] {
                    alive[p] = false;
                    dead.push(p);
                }
            }
        }
        if !alive[g.root()] {
            return Err(CodingError::RootNotInAttractor(g.nodes[g.root()].clone()));
        }

        let succ: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if !alive[v] {
                    return Vec::new();
                }
                g.out_edges(v).filter(|e| alive[e.to]).map(|e| e.to).collect()
            })
            .collect();
        let reachable = reachable_from(&succ, g.root());
        let (comp, comp_count) = tarjan_scc(&succ);
        let mut comp_size = vec![0usize; comp_count];
        for v in 0..n {
            comp_size[comp[v]] += 1;
        }
        let cyclic = (0..n)
            .map(|v| alive[v] && (comp_size[comp[v]] > 1 || succ[v].contains(&v)))
            .collect();
        Ok(Analysis { alive, reachable, comp, comp_count, cyclic, succ })
    }

    fn live(&self, v: usize) -> bool {
        self.alive[v] && self.reachable[v]
    }

    fn classify(&self) -> CodingCardinality {
        let n = self.alive.len();
        for v in (0..n).filter(|&v| self.live(v) && self.cyclic[v]) {
            let inside = self.succ[v].iter().filter(|&&w| self.comp[w] == self.comp[v]).count();
            if inside >= 2 {
                return CodingCardinality::Continuum;
            }
        }
        // Every alive node reaches a cycle, so any exit from a cycle leads to
        // another one.
        for v in (0..n).filter(|&v| self.live(v) && self.cyclic[v]) {
            if self.succ[v].iter().any(|&w| self.comp[w] != self.comp[v]) {
                return CodingCardinality::CountablyInfinite;
            }
        }
        CodingCardinality::Finite(self.count_terminal_entries())
    }

    /// Walks from the root that end by entering a terminal cycle. Component
    /// ids are in reverse topological order, so successors are settled first.
    fn count_terminal_entries(&self) -> BigUint {
        let n = self.alive.len();
        let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); self.comp_count];
        for v in (0..n).filter(|&v| self.live(v)) {
            by_comp[self.comp[v]].push(v);
        }
        let mut ways: Vec<BigUint> = vec![BigUint::zero(); n];
        for members in &by_comp {
            for &v in members {
                ways[v] = if self.cyclic[v] {
                    BigUint::one()
                } else {
                    self.succ[v].iter().map(|&w| &ways[w]).sum()
                };
            }
        }
        ways[0].clone()
    }
}

/// Finite(k) / CountablyInfinite / Continuum from the structure of the
/// pruned residual graph; Unknown when the graph was truncated.
pub fn classify_cardinality(g: &ResidualGraph) -> Result<CodingCardinality, CodingError> {
    if let Some(hit) = g.truncated {
        return Ok(CodingCardinality::Unknown(hit));
    }
    Ok(Analysis::new(g)?.classify())
}

/// Builds the residual graph of `x` and classifies it.
pub fn classify_value(ifs: &Ifs, x: &Rational, limits: Limits) -> Result<CodingCardinality, CodingError> {
    classify_cardinality(&build_residual_graph(ifs, x, limits)?)
}

fn closed_analysis(g: &ResidualGraph) -> Result<Analysis, CodingError> {
    if let Some(hit) = g.truncated {
        return Err(CodingError::Undecided(hit));
    }
    Analysis::new(g)
}

/// All length-`depth` prefixes of codings of `x`, lexicographically sorted.
pub fn enumerate_codings(ifs: &Ifs, x: &Rational, depth: usize, limits: Limits) -> Result<Vec<Vec<usize>>, CodingError> {
    let g = build_residual_graph(ifs, x, limits)?;
    let an = closed_analysis(&g)?;
    let mut words = Vec::new();
    let mut word = Vec::with_capacity(depth);
    // Edges are stored in increasing digit order, so a depth-first walk
    // emits words already sorted.
    fn walk(
        g: &ResidualGraph,
        an: &Analysis,
        v: usize,
        depth: usize,
        word: &mut Vec<usize>,
        words: &mut Vec<Vec<usize>>,
    ) -> Result<(), CodingError> {
        if word.len() == depth {
            if words.len() >= MAX_ENUMERATED_PREFIXES {
                return Err(CodingError::TooManyPrefixes { depth, limit: MAX_ENUMERATED_PREFIXES });
            }
            words.push(word.clone());
            return Ok(());
        }
        for e in g.out_edges(v).filter(|e| an.alive[e.to]) {
            word.push(e.digit);
            walk(g, an, e.to, depth, word, words)?;
            word.pop();
        }
        Ok(())
    }
    walk(&g, &an, g.root(), depth, &mut word, &mut words)?;
    Ok(words)
}

/// Number of distinct length-`depth` coding prefixes, by dynamic
/// programming over the pruned graph.
pub fn count_coding_prefixes(g: &ResidualGraph, depth: usize) -> Result<BigUint, CodingError> {
    let an = closed_analysis(g)?;
    let n = g.nodes.len();
    let mut level = vec![BigUint::zero(); n];
    level[g.root()] = BigUint::one();
    for _ in 0..depth {
        let mut next = vec![BigUint::zero(); n];
        for v in (0..n).filter(|&v| !level[v].is_zero()) {
            for &w in &an.succ[v] {
                next[w] += &level[v];
            }
        }
        level = next;
    }
    Ok(level.into_iter().sum())
}

/// Whether some coding of the root ends in `1 m^∞` or `m 1^∞`, i.e. a live
/// edge with digit 1 enters `b` or one with digit `m` enters `a`.
pub fn enters_end_cycle(ifs: &Ifs, g: &ResidualGraph) -> Result<bool, CodingError> {
    let an = closed_analysis(g)?;
    let m = ifs.len();
    Ok(g.edges.iter().any(|e| {
        an.live(e.from)
            && an.alive[e.to]
            && ((e.digit == 1 && &g.nodes[e.to] == ifs.b()) || (e.digit == m && &g.nodes[e.to] == ifs.a()))
    }))
}
