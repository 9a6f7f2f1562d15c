//! Exact homomorphism counting for small patterns and the catalog of all
//! connected simple graphs on 3 to 5 vertices.
//!
//! The counter picks a smallest connected "core" of the pattern whose
//! complement is an independent set. Core vertices are mapped by
//! backtracking in BFS order, each one extended only over the adjacency
//! list of an already placed neighbor. Every remaining vertex has all its
//! neighbors in the core, so its number of images is the size of a common
//! neighborhood and is multiplied in without enumeration.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Largest pattern the counter and the entropy LP accept.
pub const MAX_PATTERN_VERTICES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    name: String,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Pattern {
    /// Validates and normalizes a pattern: edges are stored as `(u, v)` with
    /// `u < v`, sorted.
    pub fn new(
        name: impl Into<String>,
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let name = name.into();
        if vertex_count == 0 || vertex_count > MAX_PATTERN_VERTICES {
            return Err(Error::domain(format!(
                "pattern {name}: vertex count must be in 1..={MAX_PATTERN_VERTICES}"
            )));
        }
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::domain(format!(
                    "pattern {name}: edge ({u}, {v}) out of range"
                )));
            }
            if u == v {
                return Err(Error::domain(format!("pattern {name}: self-loop on {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        let before = normalized.len();
        normalized.dedup();
        if normalized.len() != before {
            return Err(Error::domain(format!("pattern {name}: duplicate edge")));
        }
        let pattern = Self {
            name,
            vertex_count,
            edges: normalized,
        };
        if !pattern.is_connected() {
            return Err(Error::domain(format!(
                "pattern {}: not connected",
                pattern.name
            )));
        }
        Ok(pattern)
    }

    /// Reads a pattern edge list (same text format as host graphs).
    pub fn from_edge_list<R: BufRead>(name: impl Into<String>, reader: R) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let id =
            |token: &str, labels: &mut Vec<String>| match labels.iter().position(|l| l == token) {
                Some(i) => i,
                None => {
                    labels.push(token.to_owned());
                    labels.len() - 1
                }
            };
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected two vertex tokens, found {}", tokens.len()),
                });
            }
            let u = id(tokens[0], &mut labels);
            let v = id(tokens[1], &mut labels);
            edges.push((u, v));
        }
        Self::new(name, labels.len(), edges)
    }

    pub fn load_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "pattern".to_owned());
        Self::from_edge_list(name, BufReader::new(File::open(path)?))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.vertex_count,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
        )
    }

    /// Lexicographically smallest sorted edge list over all relabelings.
    /// Two patterns are isomorphic iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Vec<(usize, usize)> {
        let mut perm: Vec<usize> = (0..self.vertex_count).collect();
        let mut best: Option<Vec<(usize, usize)>> = None;
        permute(&mut perm, 0, &mut |p| {
            let mut edges: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                .collect();
            edges.sort_unstable();
            if best.as_ref().is_none_or(|b| edges < *b) {
                best = Some(edges);
            }
        });
        best.unwrap_or_default()
    }
}

fn permute(perm: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// Name, vertex count and edge list.
type CatalogEntry = (&'static str, usize, &'static [(usize, usize)]);

const CATALOG: &[CatalogEntry] = &[
    ("path3", 3, &[(0, 1), (1, 2)]),
    ("K3", 3, &[(0, 1), (1, 2), (0, 2)]),
    ("claw", 4, &[(0, 1), (0, 2), (0, 3)]),
    ("path4", 4, &[(0, 1), (1, 2), (2, 3)]),
    ("pan3", 4, &[(1, 2), (2, 3), (1, 3), (0, 3)]),
    ("cycle4", 4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
    ("fan2", 4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]),
    ("K4", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    ("K14", 5, &[(0, 1), (0, 2), (0, 3), (0, 4)]),
    ("chair", 5, &[(1, 2), (2, 3), (3, 4), (0, 2)]),
    ("path5", 5, &[(3, 4), (0, 4), (0, 1), (1, 2)]),
    ("cricket", 5, &[(2, 3), (0, 3), (0, 2), (0, 1), (0, 4)]),
    ("pan4", 5, &[(3, 4), (0, 4), (0, 1), (1, 2), (1, 3)]),
    ("bull", 5, &[(3, 4), (0, 4), (0, 1), (1, 2), (1, 4)]),
    ("pan4c", 5, &[(3, 4), (0, 4), (0, 1), (1, 2), (0, 3)]),
    ("cycle5", 5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
    ("dart", 5, &[(3, 4), (0, 4), (0, 1), (1, 2), (1, 4), (2, 4)]),
    ("K23", 5, &[(3, 4), (0, 4), (0, 1), (1, 2), (1, 3), (2, 4)]),
    (
        "butterfly",
        5,
        &[(3, 4), (0, 4), (0, 1), (1, 2), (0, 2), (0, 3)],
    ),
    (
        "house",
        5,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 4)],
    ),
    ("kite", 5, &[(3, 4), (0, 4), (0, 1), (1, 2), (0, 2), (2, 4)]),
    // Complement of K3 + 2K1: the two former isolated vertices {0, 1} are
    // joined to each other and to the independent triple {2, 3, 4}.
    (
        "K3u2K1c",
        5,
        &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],
    ),
    (
        "fan3",
        5,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2), (0, 3)],
    ),
    (
        "clawuK1c",
        5,
        &[(3, 4), (0, 4), (0, 1), (1, 2), (0, 3), (1, 3), (1, 4)],
    ),
    (
        "P2uP3c",
        5,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3), (2, 4)],
    ),
    (
        "P3u2K1c",
        5,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (0, 4),
            (2, 4),
            (1, 4),
            (1, 3),
        ],
    ),
    // Hub 0 joined to the 4-cycle 1-2-3-4.
    (
        "wheel4",
        5,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 2),
            (2, 3),
            (3, 4),
            (1, 4),
        ],
    ),
    (
        "K5_e",
        5,
        &[
            (1, 2),
            (2, 3),
            (3, 4),
            (0, 4),
            (0, 1),
            (1, 3),
            (0, 3),
            (0, 2),
            (2, 4),
        ],
    ),
    (
        "K5",
        5,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
            (3, 4),
        ],
    ),
];

/// All connected simple graphs on 3, 4 and 5 vertices, up to isomorphism.
pub fn catalog() -> Vec<Pattern> {
    CATALOG
        .iter()
        .map(|&(name, n, edges)| {
            Pattern::new(name, n, edges.iter().copied()).expect("catalog patterns are valid")
        })
        .collect()
}

pub fn catalog_pattern(name: &str) -> Option<Pattern> {
    catalog().into_iter().find(|p| p.name() == name)
}

/// Path pattern on `k ≥ 1` vertices.
pub fn path_pattern(k: usize) -> Result<Pattern> {
    Pattern::new(format!("path{k}"), k, (1..k).map(|i| (i - 1, i)))
}

struct Plan {
    /// Core vertices in mapping order.
    order: Vec<usize>,
    /// For each position in `order`, positions of earlier core neighbors.
    back: Vec<Vec<usize>>,
    /// For each non-core vertex, positions of its (core) neighbors.
    leaves: Vec<Vec<usize>>,
}

fn plan(h: &Pattern) -> Plan {
    let n = h.vertex_count();
    let adj = h.adjacency();
    let mut adj_mask = vec![0u32; n];
    for &(u, v) in h.edges() {
        adj_mask[u] |= 1 << v;
        adj_mask[v] |= 1 << u;
    }
    let full: u32 = (1u32 << n) - 1;

    let connected = |mask: u32| -> bool {
        let start = mask.trailing_zeros();
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj_mask[v] & mask & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == mask
    };
    let independent_rest = |mask: u32| -> bool {
        let rest = full & !mask;
        (0..n).all(|v| rest & (1 << v) == 0 || adj_mask[v] & rest == 0)
    };

    let core = (1..=full)
        .filter(|&m| connected(m) && independent_rest(m))
        .min_by_key(|&m| (m.count_ones(), m))
        .expect("the full vertex set is always a valid core");

    let core_degree = |v: usize| (adj_mask[v] & core).count_ones();
    let root = (0..n)
        .filter(|&v| core & (1 << v) != 0)
        .max_by_key(|&v| (adj[v].len(), core_degree(v), std::cmp::Reverse(v)))
        .expect("core is nonempty");

    let mut order = Vec::new();
    let mut seen = 1u32 << root;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &u in &adj[v] {
            if core & (1 << u) != 0 && seen & (1 << u) == 0 {
                seen |= 1 << u;
                queue.push_back(u);
            }
        }
    }

    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            adj[v]
                .iter()
                .map(|&u| position[u])
                .filter(|&p| p < i)
                .collect()
        })
        .collect();
    let leaves = (0..n)
        .filter(|&v| core & (1 << v) == 0)
        .map(|v| adj[v].iter().map(|&u| position[u]).collect())
        .collect();
    Plan {
        order,
        back,
        leaves,
    }
}

struct Counter<'a> {
    g: &'a Graph,
    plan: &'a Plan,
    image: Vec<VertexId>,
    steps: u64,
    budget: u64,
}

impl Counter<'_> {
    fn charge(&mut self, work: u64) -> Result<()> {
        self.steps += work;
        if self.steps > self.budget {
            Err(Error::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// Image of the anchor with the shortest adjacency list.
    fn pivot(&self, anchors: &[usize]) -> VertexId {
        anchors
            .iter()
            .map(|&p| self.image[p])
            .min_by_key(|&v| (self.g.degree(v), v))
            .expect("anchors nonempty")
    }

    fn adjacent_to_all(&self, anchors: &[usize], pivot: VertexId, c: VertexId) -> bool {
        anchors.iter().all(|&p| {
            let a = self.image[p];
            a == pivot || self.g.has_edge(a, c)
        })
    }

    /// Number of host vertices adjacent to the images of all `anchors`.
    fn common_neighbors(&mut self, anchors: &[usize]) -> Result<u128> {
        let g = self.g;
        if let [only] = anchors {
            return Ok(g.degree(self.image[*only]) as u128);
        }
        let pivot = self.pivot(anchors);
        let candidates = g.neighbors(pivot);
        self.charge(candidates.len() as u64)?;
        let count = candidates
            .iter()
            .filter(|&&c| self.adjacent_to_all(anchors, pivot, c))
            .count();
        Ok(count as u128)
    }

    fn extend(&mut self, level: usize) -> Result<u128> {
        let (g, plan) = (self.g, self.plan);
        if level == plan.order.len() {
            let mut product: u128 = 1;
            for anchors in &plan.leaves {
                product *= self.common_neighbors(anchors)?;
                if product == 0 {
                    break;
                }
            }
            return Ok(product);
        }

        let back = &plan.back[level];
        let mut total: u128 = 0;
        if back.is_empty() {
            self.charge(g.vertex_count() as u64)?;
            for v in 0..g.vertex_count() as VertexId {
                self.image[level] = v;
                total += self.extend(level + 1)?;
            }
            return Ok(total);
        }

        let pivot = self.pivot(back);
        let candidates = g.neighbors(pivot);
        self.charge(candidates.len() as u64)?;
        for &c in candidates {
            if self.adjacent_to_all(back, pivot, c) {
                self.image[level] = c;
                total += self.extend(level + 1)?;
            }
        }
        Ok(total)
    }
}

/// Counts homomorphisms (not necessarily injective adjacency-preserving
/// maps) from `h` into `g`, failing once more than `budget` candidate
/// vertices have been examined.
pub fn count_homs_with_budget(h: &Pattern, g: &Graph, budget: u64) -> Result<u128> {
    if g.vertex_count() == 0 {
        return Ok(0);
    }
    let plan = plan(h);
    let mut counter = Counter {
        g,
        plan: &plan,
        image: vec![0; plan.order.len()],
        steps: 0,
        budget,
    };
    counter.extend(0)
}

pub fn count_homs(h: &Pattern, g: &Graph) -> Result<u128> {
    count_homs_with_budget(h, g, DEFAULT_BUDGET)
}
