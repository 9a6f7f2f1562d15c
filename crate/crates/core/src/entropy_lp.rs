//! The entropy linear program over the subset lattice of query variables.
//!
//! Coordinates are `h(S)` for every nonempty subset `S` of the `n` query
//! variables (`h(∅) = 0` is structural). The program maximizes `h(all)`
//! subject to elemental Shannon inequalities and one inequality per
//! (atom, statistic, orientation). Any feasible dual solution is a
//! certificate that `ln |join| ≤ Σ y_i · rhs_i`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::homcount::Pattern;
use crate::simplex::{DenseLp, LpStatus};
use crate::stats::{compute_stat, Orientation, StatKey, StatKind, StatRecord};

/// Bitmask over query variables.
pub type Subset = u32;

pub const MAX_VARIABLES: usize = 12;

pub const DEFAULT_RELATION: &str = "default";

/// Tolerance for checking statistic constraints against true entropies.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    n: usize,
}

impl Lattice {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VARIABLES {
            return Err(Error::domain(format!(
                "variable count must be in 1..={MAX_VARIABLES}, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    /// Number of LP coordinates, `2^n - 1`.
    pub fn coordinates(&self) -> usize {
        (1usize << self.n) - 1
    }

    pub fn full(&self) -> Subset {
        ((1u64 << self.n) - 1) as Subset
    }

    /// LP column of a nonempty subset.
    pub fn index(&self, s: Subset) -> usize {
        debug_assert!(s != 0 && s <= self.full());
        s as usize - 1
    }

    pub fn subset(&self, index: usize) -> Subset {
        (index + 1) as Subset
    }

    pub fn contains(&self, s: Subset) -> bool {
        s <= self.full()
    }
}

pub fn subset_index(n: usize) -> Result<Lattice> {
    Lattice::new(n)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// `h(S ∪ {y}) ≥ h(S)`.
    Monotonicity {
        added: usize,
        base: Subset,
    },
    /// `h(S ∪ {y}) + h(S ∪ {z}) ≥ h(S ∪ {y, z}) + h(S)`.
    Submodularity {
        pair: (usize, usize),
        base: Subset,
    },
    Statistic {
        key: StatKey,
        atom: usize,
    },
    /// Rows added by callers (auxiliary programs, tests).
    Other(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Monotonicity { added, base } => {
                write!(f, "monotonicity(+{added} over {base:#b})")
            }
            Provenance::Submodularity { pair, base } => {
                write!(f, "submodularity({},{} over {base:#b})", pair.0, pair.1)
            }
            Provenance::Statistic { key, atom } => write!(f, "atom{atom}:{key}"),
            Provenance::Other(s) => f.write_str(s),
        }
    }
}

/// `Σ coefficients[S] · h(S) ≤ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub coefficients: BTreeMap<Subset, f64>,
    pub rhs: f64,
    pub provenance: Provenance,
}

impl LinearConstraint {
    pub fn new(rhs: f64, provenance: Provenance) -> Self {
        Self {
            coefficients: BTreeMap::new(),
            rhs,
            provenance,
        }
    }

    /// Adds `coef · h(s)`; terms on the empty set vanish.
    pub fn add(&mut self, s: Subset, coef: f64) -> &mut Self {
        if s == 0 || coef == 0.0 {
            return self;
        }
        let entry = self.coefficients.entry(s).or_insert(0.0);
        *entry += coef;
        if *entry == 0.0 {
            self.coefficients.remove(&s);
        }
        self
    }

    pub fn with(mut self, s: Subset, coef: f64) -> Self {
        self.add(s, coef);
        self
    }

    pub fn coefficient(&self, s: Subset) -> f64 {
        self.coefficients.get(&s).copied().unwrap_or(0.0)
    }

    pub fn lhs(&self, h: impl Fn(Subset) -> f64) -> f64 {
        self.coefficients.iter().map(|(&s, &c)| c * h(s)).sum()
    }

    /// Left-hand side minus right-hand side; `≤ 0` when satisfied.
    pub fn slack_violation(&self, h: impl Fn(Subset) -> f64) -> f64 {
        self.lhs(h) - self.rhs
    }

    fn dedup_key(&self) -> (Vec<(Subset, u64)>, u64) {
        (
            self.coefficients
                .iter()
                .map(|(&s, &c)| (s, c.to_bits()))
                .collect(),
            self.rhs.to_bits(),
        )
    }
}

/// Elemental Shannon inequalities in `≤` form: `n·2^{n-1}` monotonicity rows
/// followed by `C(n,2)·2^{n-2}` submodularity rows.
pub fn shannon_generators(n: usize) -> Result<Vec<LinearConstraint>> {
    let lattice = Lattice::new(n)?;
    let full = lattice.full();
    let mut rows = Vec::new();
    for y in 0..n {
        let bit = 1 << y;
        let rest = full & !bit;
        for base in subsets_of(rest) {
            rows.push(
                LinearConstraint::new(0.0, Provenance::Monotonicity { added: y, base })
                    .with(base, 1.0)
                    .with(base | bit, -1.0),
            );
        }
    }
    for y in 0..n {
        for z in y + 1..n {
            let (by, bz) = (1 << y, 1 << z);
            let rest = full & !(by | bz);
            for base in subsets_of(rest) {
                rows.push(
                    LinearConstraint::new(0.0, Provenance::Submodularity { pair: (y, z), base })
                        .with(base | by | bz, 1.0)
                        .with(base, 1.0)
                        .with(base | by, -1.0)
                        .with(base | bz, -1.0),
                );
            }
        }
    }
    Ok(rows)
}

/// All subsets of `mask`, in increasing numeric order.
fn subsets_of(mask: Subset) -> impl Iterator<Item = Subset> {
    (0..=mask).filter(move |s| s & !mask == 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub relation: usize,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub variables: Vec<String>,
    pub relations: Vec<String>,
    pub atoms: Vec<Atom>,
}

impl Query {
    pub fn new(variables: Vec<String>, relations: Vec<String>, atoms: Vec<Atom>) -> Result<Self> {
        let query = Self {
            variables,
            relations,
            atoms,
        };
        query.validate()?;
        Ok(query)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.variables.len();
        Lattice::new(n)?;
        let mut used = vec![false; n];
        for (i, atom) in self.atoms.iter().enumerate() {
            if atom.x >= n || atom.y >= n {
                return Err(Error::domain(format!("atom {i}: variable out of range")));
            }
            if atom.x == atom.y {
                return Err(Error::domain(format!("atom {i}: variables must differ")));
            }
            if atom.relation >= self.relations.len() {
                return Err(Error::domain(format!("atom {i}: unknown relation")));
            }
            used[atom.x] = true;
            used[atom.y] = true;
        }
        if let Some(v) = used.iter().position(|&u| !u) {
            return Err(Error::domain(format!(
                "variable {} occurs in no atom",
                self.variables[v]
            )));
        }
        Ok(())
    }

    /// One atom per pattern edge, all over the default relation.
    pub fn from_pattern(pattern: &Pattern) -> Result<Self> {
        Self::new(
            (0..pattern.vertex_count())
                .map(|v| format!("X{v}"))
                .collect(),
            vec![DEFAULT_RELATION.to_owned()],
            pattern
                .edges()
                .iter()
                .map(|&(x, y)| Atom { relation: 0, x, y })
                .collect(),
        )
    }

    /// Parses a query description: one atom per line as `X Y [relation]`.
    /// Atoms without a relation name use [`DEFAULT_RELATION`].
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut variables: Vec<String> = Vec::new();
        let mut relations: Vec<String> = vec![DEFAULT_RELATION.to_owned()];
        let mut atoms = Vec::new();
        fn intern(names: &mut Vec<String>, token: &str) -> usize {
            names.iter().position(|n| n == token).unwrap_or_else(|| {
                names.push(token.to_owned());
                names.len() - 1
            })
        }
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let relation = match tokens.len() {
                2 => 0,
                3 => intern(&mut relations, tokens[2]),
                k => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("expected `X Y [relation]`, found {k} tokens"),
                    })
                }
            };
            let x = intern(&mut variables, tokens[0]);
            let y = intern(&mut variables, tokens[1]);
            atoms.push(Atom { relation, x, y });
        }
        Self::new(variables, relations, atoms)
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.variables.len()).expect("validated query")
    }
}

/// Turns a statistic of the atom's relation into a lattice inequality.
///
/// With `h(Y|X) = h(XY) - h(X)`, `I(X;Y) = h(X) + h(Y) - h(XY)` and
/// `h(X|Y) = h(XY) - h(Y)`, each bound `a·h(Y|X) + I + b·h(X|Y) ≤ ln stat`
/// becomes `(a+b-1)·h(XY) + (1-a)·h(X) + (1-b)·h(Y) ≤ ln stat`. The
/// transposed orientation swaps the roles of `X` and `Y`.
pub fn emit_stat_constraint(
    atom: &Atom,
    atom_index: usize,
    record: &StatRecord,
) -> Result<LinearConstraint> {
    record.key.validate()?;
    if atom.x == atom.y || atom.x >= MAX_VARIABLES || atom.y >= MAX_VARIABLES {
        return Err(Error::domain(format!(
            "atom {atom_index}: invalid variable pair ({}, {})",
            atom.x, atom.y
        )));
    }
    if !record.log_value.is_finite() {
        return Err(Error::domain(format!(
            "atom {atom_index}: statistic {} has non-finite log value",
            record.key
        )));
    }
    let (x, y) = match record.key.orientation {
        Orientation::Forward => (atom.x, atom.y),
        Orientation::Transposed => (atom.y, atom.x),
    };
    let (sx, sy) = ((1 as Subset) << x, (1 as Subset) << y);
    let sxy = sx | sy;

    // (coef on h(XY), coef on h(X), coef on h(Y))
    let (cxy, cx, cy) = match record.key.kind {
        StatKind::DomainSize => (0.0, 1.0, 0.0),
        StatKind::EdgeCount => (1.0, 0.0, 0.0),
        StatKind::MaxDegree => (1.0, -1.0, 0.0),
        StatKind::Star(p) => (p, 1.0 - p, 0.0),
        StatKind::BiStar(p, q) => (p + q - 1.0, 1.0 - p, 1.0 - q),
        StatKind::CatV([p, q, r]) => conditional_form(p + r + 1.0, q + 2.0),
        StatKind::CatN([p, q, r, s]) => conditional_form(p + r + 2.0, q + s + 2.0),
        StatKind::CatW([p, q, r, s, t]) => conditional_form(p + r + t + 2.0, q + s + 3.0),
    };
    let mut row = LinearConstraint::new(
        record.log_value,
        Provenance::Statistic {
            key: record.key,
            atom: atom_index,
        },
    );
    row.add(sxy, cxy).add(sx, cx).add(sy, cy);
    Ok(row)
}

/// Lattice coefficients of `a·h(Y|X) + I(X;Y) + b·h(X|Y)`.
fn conditional_form(a: f64, b: f64) -> (f64, f64, f64) {
    (a + b - 1.0, 1.0 - a, 1.0 - b)
}

#[derive(Clone, Debug)]
pub struct EntropyLp {
    pub lattice: Lattice,
    pub constraints: Vec<LinearConstraint>,
    pub generator_count: usize,
    pub warnings: Vec<String>,
}

impl EntropyLp {
    pub fn objective(&self) -> Subset {
        self.lattice.full()
    }

    pub fn stat_constraints(&self) -> &[LinearConstraint] {
        &self.constraints[self.generator_count..]
    }

    /// Appends a row unless an identical one (same coefficients and rhs) is
    /// already present.
    pub fn push(&mut self, row: LinearConstraint) -> bool {
        let key = row.dedup_key();
        if self.constraints.iter().any(|c| c.dedup_key() == key) {
            return false;
        }
        self.constraints.push(row);
        true
    }

    pub fn to_dense(&self) -> DenseLp {
        let cols = self.lattice.coordinates();
        let mut objective = vec![0.0; cols];
        objective[self.lattice.index(self.objective())] = 1.0;
        let mut lp = DenseLp::new(objective);
        for c in &self.constraints {
            let mut row = vec![0.0; cols];
            for (&s, &coef) in &c.coefficients {
                row[self.lattice.index(s)] = coef;
            }
            lp.push_row(row, c.rhs);
        }
        lp
    }
}

/// Assembles the program for `query`; `stats[i]` holds the records of atom
/// `i`. Identical rows are emitted once.
pub fn build_lp(query: &Query, stats: &[Vec<StatRecord>]) -> Result<EntropyLp> {
    query.validate()?;
    if stats.len() != query.atoms.len() {
        return Err(Error::domain(format!(
            "{} statistic sets for {} atoms",
            stats.len(),
            query.atoms.len()
        )));
    }
    let lattice = query.lattice();
    let generators = shannon_generators(lattice.variables())?;
    let mut lp = EntropyLp {
        lattice,
        generator_count: generators.len(),
        constraints: generators,
        warnings: Vec::new(),
    };
    let mut seen: HashSet<(Vec<(Subset, u64)>, u64)> = HashSet::new();
    for (i, (atom, records)) in query.atoms.iter().zip(stats).enumerate() {
        if records.is_empty() {
            lp.warnings.push(format!(
                "atom {i} ({} {}) has no statistics; the bound may be unbounded",
                query.variables[atom.x], query.variables[atom.y]
            ));
        }
        for record in records {
            let row = emit_stat_constraint(atom, i, record)?;
            if seen.insert(row.dedup_key()) {
                lp.constraints.push(row);
            }
        }
    }
    Ok(lp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub status: BoundStatus,
    /// Optimum of the program: the largest attainable `h(all variables)`.
    pub log_bound: f64,
    pub bound: f64,
    /// One multiplier per constraint of the program, in order.
    pub dual_weights: Vec<f64>,
    /// Optimal entropy vector, indexed by lattice coordinate.
    pub entropy: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertificateCheck {
    /// `Σ y_i · rhs_i`.
    pub recombined: f64,
    /// Largest amount by which `Σ y_i · A_i` falls short of the objective
    /// on any coordinate (`≤ 0` for a valid certificate).
    pub max_shortfall: f64,
    pub min_weight: f64,
}

impl BoundReport {
    pub fn check_certificate(&self, lp: &EntropyLp) -> CertificateCheck {
        let cols = lp.lattice.coordinates();
        let mut combined = vec![0.0; cols];
        let mut recombined = 0.0;
        for (c, &y) in lp.constraints.iter().zip(&self.dual_weights) {
            recombined += y * c.rhs;
            for (&s, &coef) in &c.coefficients {
                combined[lp.lattice.index(s)] += y * coef;
            }
        }
        let target = lp.lattice.index(lp.objective());
        let max_shortfall = combined
            .iter()
            .enumerate()
            .map(|(j, &v)| if j == target { 1.0 - v } else { -v })
            .fold(f64::NEG_INFINITY, f64::max);
        let min_weight = self
            .dual_weights
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        CertificateCheck {
            recombined,
            max_shortfall,
            min_weight,
        }
    }
}

pub fn solve_bound(lp: &EntropyLp) -> Result<BoundReport> {
    let solution = lp.to_dense().solve()?;
    let status = match solution.status {
        LpStatus::Optimal => BoundStatus::Optimal,
        LpStatus::Unbounded => BoundStatus::Unbounded,
        LpStatus::Infeasible => {
            return Err(Error::Internal(
                "entropy program reported infeasible".to_owned(),
            ));
        }
    };
    Ok(BoundReport {
        status,
        log_bound: solution.optimum,
        bound: solution.optimum.exp(),
        dual_weights: solution.dual,
        entropy: solution.primal,
    })
}

/// Minimum of `Σ form[S]·h(S)` over Shannon-generator-feasible `h` with
/// `0 ≤ h(S) ≤ 1`. A Shannon-type inequality `form ≥ 0` has minimum 0.
pub fn shannon_box_minimum(n: usize, form: &BTreeMap<Subset, f64>) -> Result<f64> {
    let lattice = Lattice::new(n)?;
    let mut lp = EntropyLp {
        lattice,
        constraints: shannon_generators(n)?,
        generator_count: 0,
        warnings: Vec::new(),
    };
    lp.generator_count = lp.constraints.len();
    for idx in 0..lattice.coordinates() {
        lp.constraints.push(
            LinearConstraint::new(1.0, Provenance::Other("box".to_owned()))
                .with(lattice.subset(idx), 1.0),
        );
    }
    let mut dense = lp.to_dense();
    dense.objective.iter_mut().for_each(|c| *c = 0.0);
    for (&s, &coef) in form {
        if s == 0 {
            continue;
        }
        if !lattice.contains(s) {
            return Err(Error::domain(format!("subset {s:#b} outside the lattice")));
        }
        dense.objective[lattice.index(s)] = -coef;
    }
    let solution = dense.solve()?;
    match solution.status {
        LpStatus::Optimal => Ok(-solution.optimum),
        other => Err(Error::Internal(format!("box program ended {other:?}"))),
    }
}

/// `(H(X), H(Y), H(X,Y))` in nats of a pmf on directed edges of `g`.
pub fn entropy_triple(g: &Graph, pmf: &[(VertexId, VertexId, f64)]) -> Result<(f64, f64, f64)> {
    let mut total = 0.0;
    let mut joint: BTreeMap<(VertexId, VertexId), f64> = BTreeMap::new();
    for &(a, b, p) in pmf {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::domain(format!("invalid probability {p}")));
        }
        if (a as usize) >= g.vertex_count() || !g.has_edge(a, b) {
            return Err(Error::domain(format!(
                "pmf puts mass on ({a}, {b}), which is not in the relation"
            )));
        }
        *joint.entry((a, b)).or_insert(0.0) += p;
        total += p;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!("pmf sums to {total}, not 1")));
    }
    let mut px: BTreeMap<VertexId, f64> = BTreeMap::new();
    let mut py: BTreeMap<VertexId, f64> = BTreeMap::new();
    for (&(a, b), &p) in &joint {
        *px.entry(a).or_insert(0.0) += p;
        *py.entry(b).or_insert(0.0) += p;
    }
    let entropy = |values: &mut dyn Iterator<Item = f64>| -> f64 {
        values.filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
    };
    Ok((
        entropy(&mut px.values().copied()),
        entropy(&mut py.values().copied()),
        entropy(&mut joint.values().copied()),
    ))
}

/// Checks every statistic constraint for `keys` (computed on `g`) against
/// the true entropies of `pmf`, with the atom `(X, Y)` over `g`.
pub fn verify_entropy_feasibility(
    g: &Graph,
    pmf: &[(VertexId, VertexId, f64)],
    keys: &[StatKey],
) -> Result<bool> {
    let (hx, hy, hxy) = entropy_triple(g, pmf)?;
    let atom = Atom {
        relation: 0,
        x: 0,
        y: 1,
    };
    let h = |s: Subset| match s {
        0b01 => hx,
        0b10 => hy,
        0b11 => hxy,
        _ => 0.0,
    };
    for key in keys {
        let record = compute_stat(g, key)?;
        let row = emit_stat_constraint(&atom, 0, &record)?;
        if row.slack_violation(h) > FEASIBILITY_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
