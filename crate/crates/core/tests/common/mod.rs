//! Oracles shared by the integration tests. Nothing here calls the
//! residual-graph or spectral code of the library: point oracles count
//! prefixes level by level over exact residuals, and the matrix oracle
//! expands characteristic polynomials over the rationals.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use ifs_codings::exact::Rational;
use ifs_codings::fixtures::{self, Step};
use ifs_codings::Ifs;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

/// `i` with `f_i(a) <= y <= f_i(b)`, straight from the map coefficients.
fn digits_at(ifs: &Ifs, y: &Rational) -> Vec<usize> {
    (1..=ifs.len())
        .filter(|&i| {
            let f = ifs.map(i);
            let lo = f.apply(ifs.a());
            let hi = f.apply(ifs.b());
            &lo <= y && y <= &hi
        })
        .collect()
}

fn step(ifs: &Ifs, y: &Rational, i: usize) -> Rational {
    let f = ifs.map(i);
    (y - f.offset()) / f.ratio()
}

/// Prefix counts of a point's codings at several depths.
#[derive(Debug, Clone)]
pub struct PrefixCounts {
    /// Number of distinct residuals reachable from the point.
    pub nodes: usize,
    pub counts: BTreeMap<usize, BigUint>,
}

/// Counts the words `w` of each requested length with `x ∈ f_w(I)` whose
/// residual can still be followed for `nodes` more steps, which in a graph
/// with `nodes` vertices is the same as lying on an infinite path. Returns
/// `None` when more than `cap` residuals are reachable.
pub fn prefix_counts(ifs: &Ifs, x: &Rational, depths: &[usize], cap: usize) -> Option<PrefixCounts> {
    let mut seen = BTreeSet::from([x.clone()]);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(y) = queue.pop_front() {
        for i in digits_at(ifs, &y) {
            let z = step(ifs, &y, i);
            if seen.insert(z.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(z);
            }
        }
    }
    let nodes = seen.len();
    let all: Vec<Rational> = seen.into_iter().collect();
    let mut alive: BTreeMap<Rational, bool> = all.iter().map(|y| (y.clone(), true)).collect();
    for _ in 0..nodes {
        let next = all
            .iter()
            .map(|y| (y.clone(), digits_at(ifs, y).iter().any(|&i| alive[&step(ifs, y, i)])))
            .collect();
        alive = next;
    }

    let max_depth = depths.iter().copied().max().unwrap_or(0);
    let mut level: BTreeMap<Rational, BigUint> = BTreeMap::from([(x.clone(), BigUint::one())]);
    let mut counts = BTreeMap::new();
    for d in 0..=max_depth {
        if depths.contains(&d) {
            let c = level.iter().filter(|(y, _)| alive[*y]).map(|(_, c)| c.clone()).sum::<BigUint>();
            counts.insert(d, c);
        }
        let mut next: BTreeMap<Rational, BigUint> = BTreeMap::new();
        for (y, c) in &level {
            for i in digits_at(ifs, y) {
                *next.entry(step(ifs, y, i)).or_insert_with(BigUint::zero) += c;
            }
        }
        level = next;
    }
    Some(PrefixCounts { nodes, counts })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Growth {
    Bounded(BigUint),
    Polynomial,
    Exponential,
}

/// A depth past which `2^(⌊D/N⌋ - 1)` beats `(D + 1)^N m^N`, so exponential
/// and polynomial prefix growth cannot be confused.
pub fn separating_depth(nodes: usize, m: usize) -> usize {
    let n = nodes.max(1) as f64;
    let mut d = 60usize.max(3 * nodes);
    while ((d / nodes.max(1)) as f64 - 1.0) <= n * (((d + 1) as f64).log2() + (m as f64).log2()) {
        d += nodes.max(1);
    }
    d
}

/// Bounded, polynomial or exponential prefix growth, decided by counting at
/// `3N` and at [`separating_depth`].
pub fn growth(ifs: &Ifs, x: &Rational, cap: usize) -> Option<(usize, Growth)> {
    let nodes = prefix_counts(ifs, x, &[], cap)?.nodes;
    let short = 3 * nodes;
    let long = separating_depth(nodes, ifs.len());
    let pc = prefix_counts(ifs, x, &[short, long], cap)?;
    let (a, b) = (&pc.counts[&short], &pc.counts[&long]);
    let g = if a == b {
        Growth::Bounded(a.clone())
    } else if *b >= BigUint::one() << (long / nodes - 1) {
        Growth::Exponential
    } else {
        Growth::Polynomial
    };
    Some((nodes, g))
}

/// Coefficients of `det(tI - A)`, constant term first (Faddeev–LeVerrier).
pub fn characteristic_polynomial(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for l in 0..n {
                    s = s + &a[i][l] * &mk[l][j];
                }
                if i == j {
                    s = s + &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut trace = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                trace = trace + &a[i][l] * &mk[l][i];
            }
        }
        coeffs[n - k] = -(trace / Rational::integer(k as i64));
    }
    coeffs
}

pub fn poly_mul(p: &[Rational], r: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len() + r.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in r.iter().enumerate() {
            out[i + j] = &out[i + j] + a * b;
        }
    }
    out
}

pub fn int_poly(c: &[i64]) -> Vec<Rational> {
    c.iter().map(|&x| Rational::integer(x)).collect()
}

pub fn to_rational_matrix(counts: &[Vec<u32>]) -> Vec<Vec<Rational>> {
    counts.iter().map(|r| r.iter().map(|&c| Rational::integer(i64::from(c))).collect()).collect()
}

/// A random equal-ratio class member built by [`fixtures::equal_ratio_chain`]:
/// 3 to 7 maps, at least one overlapping and one disjoint neighbour pair.
pub fn random_chain(rng: &mut StdRng) -> Ifs {
    loop {
        let den = rng.random_range(5..=13i64);
        let num = rng.random_range(1..=(den - 1) / 4).max(1);
        let lambda = Rational::frac(num, den);
        let m = rng.random_range(3..=7usize);
        let steps: Vec<Step> = (0..m - 1)
            .map(|_| {
                if rng.random_bool(0.5) {
                    Step::Overlap(rng.random_range(1..=3))
                } else {
                    Step::Gap(rng.random_range(1..=4))
                }
            })
            .collect();
        let has_overlap = steps.iter().any(|s| matches!(s, Step::Overlap(_)));
        let has_gap = steps.iter().any(|s| matches!(s, Step::Gap(_)));
        if !(has_overlap && has_gap) {
            continue;
        }
        if let Some(ifs) = fixtures::equal_ratio_chain(&lambda, &steps) {
            if ifs_codings::ifs::validate_class_e(&ifs).is_member() {
                return ifs;
            }
        }
    }
}

/// A few small eventually periodic words over `1..=m`.
pub fn random_word(rng: &mut StdRng, m: usize, max_len: usize, min_len: usize) -> Vec<usize> {
    let len = rng.random_range(min_len..=max_len);
    (0..len).map(|_| rng.random_range(1..=m)).collect()
}
