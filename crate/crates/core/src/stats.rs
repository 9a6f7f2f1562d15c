//! Degree statistics of a relation: domain size, `|R|`, max degree, star
//! norms, bi-star moments and the caterpillar moments V, N, W.
//!
//! Every moment is a weighted count of homomorphisms from a caterpillar
//! (a path with leaves hanging off each spine vertex) into the relation.
//! Summing the leaf weights into per-vertex messages along the spine gives
//! `O(|V| + |R|)` work per statistic.
//!
//! Values are first accumulated as plain `f64`. If that overflows, the same
//! passes are rerun on logarithms with log-sum-exp accumulation, so
//! [`StatRecord::log_value`] stays finite for large parameters.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StatKind {
    DomainSize,
    EdgeCount,
    MaxDegree,
    Star(f64),
    BiStar(f64, f64),
    CatV([f64; 3]),
    CatN([f64; 4]),
    CatW([f64; 5]),
}

/// Which column of `R(A, B)` plays `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Forward,
    Transposed,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Transposed,
            Orientation::Transposed => Orientation::Forward,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Forward => "forward",
            Orientation::Transposed => "transposed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatKey {
    pub kind: StatKind,
    pub orientation: Orientation,
}

impl StatKey {
    pub fn new(kind: StatKind) -> Self {
        Self {
            kind,
            orientation: Orientation::Forward,
        }
    }

    pub fn transposed(kind: StatKind) -> Self {
        Self {
            kind,
            orientation: Orientation::Transposed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()
    }
}

impl StatKind {
    pub fn name(&self) -> &'static str {
        match self {
            StatKind::DomainSize => "domain_size",
            StatKind::EdgeCount => "edge_count",
            StatKind::MaxDegree => "max_degree",
            StatKind::Star(_) => "star",
            StatKind::BiStar(..) => "bistar",
            StatKind::CatV(_) => "catv",
            StatKind::CatN(_) => "catn",
            StatKind::CatW(_) => "catw",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            StatKind::DomainSize | StatKind::EdgeCount | StatKind::MaxDegree => Vec::new(),
            StatKind::Star(p) => vec![p],
            StatKind::BiStar(p, q) => vec![p, q],
            StatKind::CatV(ps) => ps.to_vec(),
            StatKind::CatN(ps) => ps.to_vec(),
            StatKind::CatW(ps) => ps.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let params = self.params();
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain(format!("{self}: parameters must be finite")));
        }
        let min = match self {
            StatKind::BiStar(..) => 1.0,
            _ => 0.0,
        };
        if params.iter().any(|&p| p < min) {
            return Err(Error::domain(format!(
                "{self}: parameters must be at least {min}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let params = self.params();
        if !params.is_empty() {
            let joined: Vec<String> = params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", joined.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for StatKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind, self.orientation)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatRecord {
    pub key: StatKey,
    /// Natural log of the statistic; authoritative when `raw_value` overflows.
    pub log_value: f64,
    pub raw_value: f64,
}

impl StatRecord {
    pub fn overflowed(&self) -> bool {
        !self.raw_value.is_finite()
    }
}

/// Arithmetic used by the message passes: either plain values or their logs.
trait Weight: Copy {
    fn deg_pow(d: usize, p: f64) -> Self;
    fn mul(self, other: Self) -> Self;
    fn sum<I: Iterator<Item = Self> + Clone>(values: I) -> Self;
}

#[derive(Clone, Copy, Debug)]
struct Linear(f64);

#[derive(Clone, Copy, Debug)]
struct LogDomain(f64);

fn pow_degree(d: usize, p: f64) -> f64 {
    if p == 0.0 {
        // 0^0 := 1.
        return 1.0;
    }
    let d = d as f64;
    if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
        d.powi(p as i32)
    } else {
        d.powf(p)
    }
}

impl Weight for Linear {
    fn deg_pow(d: usize, p: f64) -> Self {
        Linear(pow_degree(d, p))
    }

    fn mul(self, other: Self) -> Self {
        Linear(self.0 * other.0)
    }

    fn sum<I: Iterator<Item = Self> + Clone>(values: I) -> Self {
        Linear(values.fold(0.0, |acc, x| acc + x.0))
    }
}

/// Exact integer arithmetic; `None` marks overflow and absorbs further work.
#[derive(Clone, Copy, Debug)]
struct Exact(Option<u128>);

impl Weight for Exact {
    fn deg_pow(d: usize, p: f64) -> Self {
        Exact(
            u32::try_from(p as u64)
                .ok()
                .and_then(|e| (d as u128).checked_pow(e)),
        )
    }

    fn mul(self, other: Self) -> Self {
        Exact(self.0.zip(other.0).and_then(|(a, b)| a.checked_mul(b)))
    }

    fn sum<I: Iterator<Item = Self> + Clone>(mut values: I) -> Self {
        Exact(values.try_fold(0u128, |acc, x| x.0.and_then(|b| acc.checked_add(b))))
    }
}

impl Weight for LogDomain {
    fn deg_pow(d: usize, p: f64) -> Self {
        if p == 0.0 {
            LogDomain(0.0)
        } else if d == 0 {
            LogDomain(f64::NEG_INFINITY)
        } else {
            LogDomain(p * (d as f64).ln())
        }
    }

    fn mul(self, other: Self) -> Self {
        LogDomain(self.0 + other.0)
    }

    fn sum<I: Iterator<Item = Self> + Clone>(values: I) -> Self {
        let max = values.clone().fold(f64::NEG_INFINITY, |m, x| m.max(x.0));
        if max == f64::NEG_INFINITY {
            return LogDomain(max);
        }
        let scaled: f64 = values.map(|x| (x.0 - max).exp()).sum();
        LogDomain(max + scaled.ln())
    }
}

fn degree_powers<W: Weight>(g: &Graph, p: f64) -> Vec<W> {
    g.degrees().map(|d| W::deg_pow(d, p)).collect()
}

/// `out[v] = Σ_{u ∈ N(v)} weights[u]`.
fn neighbor_sums<W: Weight>(g: &Graph, weights: &[W]) -> Vec<W> {
    (0..g.vertex_count() as u32)
        .map(|v| W::sum(g.neighbors(v).iter().map(|&u| weights[u as usize])))
        .collect()
}

/// Two [`neighbor_sums`] in one sweep over the adjacency.
fn neighbor_sums_pair<W: Weight>(g: &Graph, a: &[W], b: &[W]) -> (Vec<W>, Vec<W>) {
    let paired: Vec<(W, W)> = a.iter().copied().zip(b.iter().copied()).collect();
    (0..g.vertex_count() as u32)
        .map(|v| {
            let nbrs = g.neighbors(v).iter().map(|&u| paired[u as usize]);
            (W::sum(nbrs.clone().map(|x| x.0)), W::sum(nbrs.map(|x| x.1)))
        })
        .unzip()
}

fn pointwise<W: Weight>(a: &[W], b: &[W]) -> Vec<W> {
    a.iter().zip(b).map(|(&x, &y)| x.mul(y)).collect()
}

fn total<W: Weight>(values: &[W]) -> W {
    W::sum(values.iter().copied())
}

/// Weight `d(x)^p` on an endpoint, pushed one hop: `Σ_{x ∈ N(v)} d(x)^p`.
fn leaf_arm<W: Weight>(g: &Graph, p: f64) -> Vec<W> {
    neighbor_sums(g, &degree_powers::<W>(g, p))
}

fn star_pass<W: Weight>(g: &Graph, p: f64) -> W {
    total(&degree_powers::<W>(g, p))
}

fn bistar_pass<W: Weight>(g: &Graph, p: f64, q: f64) -> W {
    // Σ_a d(a)^{p-1} Σ_{b ∈ N(a)} d(b)^{q-1}
    let arm = leaf_arm::<W>(g, q - 1.0);
    total(&pointwise(&degree_powers::<W>(g, p - 1.0), &arm))
}

fn cat_v_pass<W: Weight>(g: &Graph, [p, q, r]: [f64; 3]) -> W {
    // Middle vertex b collects both arms.
    let (left, right) = neighbor_sums_pair(g, &degree_powers::<W>(g, p), &degree_powers::<W>(g, r));
    let mid = degree_powers::<W>(g, q);
    total(&pointwise(&pointwise(&mid, &left), &right))
}

fn cat_n_pass<W: Weight>(g: &Graph, [p, q, r, s]: [f64; 4]) -> W {
    // Spine a-b-c-d: fold d into c, then c into b.
    let tail = pointwise(&degree_powers::<W>(g, r), &leaf_arm::<W>(g, s));
    let into_b = neighbor_sums(g, &tail);
    let left = leaf_arm::<W>(g, p);
    let mid = degree_powers::<W>(g, q);
    total(&pointwise(&pointwise(&mid, &left), &into_b))
}

fn cat_w_pass<W: Weight>(g: &Graph, [p, q, r, s, t]: [f64; 5]) -> W {
    // Spine a-b-c-d-e centered at c.
    let (arm_p, arm_t) =
        neighbor_sums_pair(g, &degree_powers::<W>(g, p), &degree_powers::<W>(g, t));
    let left_inner = pointwise(&degree_powers::<W>(g, q), &arm_p);
    let right_inner = pointwise(&degree_powers::<W>(g, s), &arm_t);
    let (left, right) = neighbor_sums_pair(g, &left_inner, &right_inner);
    let center = degree_powers::<W>(g, r);
    total(&pointwise(&pointwise(&center, &left), &right))
}

fn pass<W: Weight>(g: &Graph, kind: &StatKind) -> W {
    match *kind {
        StatKind::DomainSize => star_pass(g, 0.0),
        StatKind::EdgeCount => star_pass(g, 1.0),
        StatKind::MaxDegree => W::deg_pow(g.max_degree(), 1.0),
        StatKind::Star(p) => star_pass(g, p),
        StatKind::BiStar(p, q) => bistar_pass(g, p, q),
        StatKind::CatV(ps) => cat_v_pass(g, ps),
        StatKind::CatN(ps) => cat_n_pass(g, ps),
        StatKind::CatW(ps) => cat_w_pass(g, ps),
    }
}

/// Returns `(raw, ln raw)`, falling back to the log-domain pass on overflow.
fn evaluate(g: &Graph, kind: &StatKind) -> Result<(f64, f64)> {
    kind.validate()?;
    let Linear(raw) = pass::<Linear>(g, kind);
    if raw.is_finite() {
        return Ok((raw, raw.ln()));
    }
    let LogDomain(log_value) = pass::<LogDomain>(g, kind);
    Ok((f64::INFINITY, log_value))
}

fn value(g: &Graph, kind: StatKind) -> Result<f64> {
    evaluate(g, &kind).map(|(raw, _)| raw)
}

/// `Σ_v deg(v)^p`, with `0^0 = 1` so that `p = 0` gives `|A|`.
pub fn star_norm(g: &Graph, p: f64) -> Result<f64> {
    value(g, StatKind::Star(p))
}

/// `Σ_{(a,b) ∈ R} deg(a)^{p-1} deg(b)^{q-1}` for `p, q ≥ 1`.
pub fn bistar_moment(g: &Graph, p: f64, q: f64) -> Result<f64> {
    value(g, StatKind::BiStar(p, q))
}

/// `V_{pqr} = Σ_{R(a,b) ∧ R(c,b)} d(a)^p d(b)^q d(c)^r`.
pub fn cat_v(g: &Graph, p: f64, q: f64, r: f64) -> Result<f64> {
    value(g, StatKind::CatV([p, q, r]))
}

/// `N_{pqrs}`: four-vertex spine `a-b-c-d`.
pub fn cat_n(g: &Graph, p: f64, q: f64, r: f64, s: f64) -> Result<f64> {
    value(g, StatKind::CatN([p, q, r, s]))
}

/// `W_{pqrst}`: five-vertex spine `a-b-c-d-e`.
pub fn cat_w(g: &Graph, p: f64, q: f64, r: f64, s: f64, t: f64) -> Result<f64> {
    value(g, StatKind::CatW([p, q, r, s, t]))
}

pub fn max_degree(g: &Graph) -> usize {
    g.max_degree()
}

/// Exact value of a statistic whose parameters are all integers, or `None`
/// when a parameter is fractional or the value exceeds `u128`.
pub fn compute_exact(g: &Graph, kind: &StatKind) -> Result<Option<u128>> {
    kind.validate()?;
    if kind
        .params()
        .iter()
        .any(|p| p.fract() != 0.0 || *p > u32::MAX as f64)
    {
        return Ok(None);
    }
    let Exact(value) = pass::<Exact>(g, kind);
    Ok(value)
}

/// Evaluates one statistic.
///
/// Graphs are symmetric relations, so the transposed orientation has the
/// same value; the orientation only matters when the record is turned into
/// a constraint.
pub fn compute_stat(g: &Graph, key: &StatKey) -> Result<StatRecord> {
    let (raw_value, log_value) = evaluate(g, &key.kind)?;
    Ok(StatRecord {
        key: *key,
        log_value,
        raw_value,
    })
}
