//! Dense tableau simplex for `maximize c·x  s.t.  A x ≤ b, x ≥ 0`.
//!
//! The tableau is kept in compact form (one column per nonbasic variable),
//! so a pivot costs `O(rows × cols)` regardless of how many slacks exist.
//! A single artificial column handles rows with negative right-hand side
//! (phase one). Pivoting uses the largest reduced cost and switches to
//! Bland's lowest-index rule after a run of degenerate pivots, which rules
//! out cycling. All ties are broken by the lowest variable label, so the
//! result is a deterministic function of the input.

use crate::error::{Error, Result};

/// Pivot threshold and feasibility tolerance.
pub const PIVOT_EPS: f64 = 1e-9;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseLp {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// `+∞` when unbounded, `-∞` when infeasible.
    pub optimum: f64,
    pub primal: Vec<f64>,
    /// One nonnegative multiplier per row; empty unless optimal.
    pub dual: Vec<f64>,
    pub pivots: usize,
}

impl DenseLp {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>, rhs: f64) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.rows.len() != self.rhs.len() {
            return Err(Error::domain("row count and rhs length differ"));
        }
        if let Some(i) = self.rows.iter().position(|r| r.len() != n) {
            return Err(Error::domain(format!("row {i} has the wrong width")));
        }
        let finite = self.objective.iter().all(|x| x.is_finite())
            && self.rhs.iter().all(|x| x.is_finite())
            && self.rows.iter().flatten().all(|x| x.is_finite());
        if !finite {
            return Err(Error::domain("LP entries must be finite"));
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution> {
        self.validate()?;
        Tableau::new(self).run()
    }
}

/// Variable labels: structural `0..n`, slack of row `i` is `n + i`, and the
/// artificial variable is `ARTIFICIAL` (sorted before everything else).
const ARTIFICIAL: isize = -1;

struct Tableau {
    m: usize,
    n: usize,
    width: usize,
    // (m + 2) x (n + 2): rows 0..m constraints, m objective, m+1 phase one;
    // column n is the artificial variable, column n+1 the rhs.
    d: Vec<f64>,
    basic: Vec<isize>,
    nonbasic: Vec<isize>,
    pivots: usize,
    max_pivots: usize,
}

#[derive(PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

impl Tableau {
    fn new(lp: &DenseLp) -> Self {
        let m = lp.num_rows();
        let n = lp.num_vars();
        let width = n + 2;
        let mut d = vec![0.0; (m + 2) * width];
        for (i, row) in lp.rows.iter().enumerate() {
            d[i * width..i * width + n].copy_from_slice(row);
            d[i * width + n] = -1.0;
            d[i * width + n + 1] = lp.rhs[i];
        }
        for (j, &c) in lp.objective.iter().enumerate() {
            d[m * width + j] = -c;
        }
        d[(m + 1) * width + n] = 1.0;
        let mut nonbasic: Vec<isize> = (0..n as isize).collect();
        nonbasic.push(ARTIFICIAL);
        Self {
            m,
            n,
            width,
            d,
            basic: (n..n + m).map(|x| x as isize).collect(),
            nonbasic,
            pivots: 0,
            max_pivots: 100_000 + 50 * (m + n),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.width + j]
    }

    fn pivot(&mut self, r: usize, s: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(Error::IterationLimit(self.max_pivots));
        }
        let w = self.width;
        let inv = 1.0 / self.at(r, s);
        let pivot_row: Vec<f64> = self.d[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m + 2 {
            if i == r {
                continue;
            }
            let factor = self.d[i * w + s] * inv;
            if factor == 0.0 {
                continue;
            }
            let row = &mut self.d[i * w..(i + 1) * w];
            for (j, x) in row.iter_mut().enumerate() {
                if j != s {
                    *x -= pivot_row[j] * factor;
                }
            }
            row[s] = -factor;
        }
        for j in 0..w {
            if j != s {
                self.d[r * w + j] *= inv;
            }
        }
        self.d[r * w + s] = inv;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
        Ok(())
    }

    fn entering(&self, phase: &Phase, bland: bool) -> Option<usize> {
        let x = if *phase == Phase::One {
            self.m + 1
        } else {
            self.m
        };
        let mut best: Option<usize> = None;
        for j in 0..=self.n {
            if *phase == Phase::Two && self.nonbasic[j] == ARTIFICIAL {
                continue;
            }
            let v = self.at(x, j);
            if v >= -PIVOT_EPS {
                continue;
            }
            best = match best {
                None => Some(j),
                Some(b) => {
                    let better = if bland {
                        self.nonbasic[j] < self.nonbasic[b]
                    } else {
                        let vb = self.at(x, b);
                        v < vb || (v == vb && self.nonbasic[j] < self.nonbasic[b])
                    };
                    if better {
                        Some(j)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    fn leaving(&self, s: usize) -> Option<usize> {
        let rhs = self.n + 1;
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, s);
            if a <= PIVOT_EPS {
                continue;
            }
            let ratio = self.at(i, rhs) / a;
            best = match best {
                None => Some((i, ratio)),
                Some((b, rb)) => {
                    if ratio < rb || (ratio == rb && self.basic[i] < self.basic[b]) {
                        Some((i, ratio))
                    } else {
                        Some((b, rb))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    /// Returns `false` if the phase objective is unbounded.
    fn optimize(&mut self, phase: Phase) -> Result<bool> {
        let mut degenerate = 0usize;
        loop {
            let bland = degenerate >= DEGENERATE_RUN;
            let Some(s) = self.entering(&phase, bland) else {
                return Ok(true);
            };
            let Some(r) = self.leaving(s) else {
                return Ok(false);
            };
            if self.at(r, self.n + 1).abs() <= PIVOT_EPS {
                degenerate += 1;
            } else if !bland {
                degenerate = 0;
            }
            self.pivot(r, s)?;
        }
    }

    fn run(mut self) -> Result<LpSolution> {
        let (m, n) = (self.m, self.n);
        let rhs = n + 1;

        if m > 0 {
            let mut r = 0;
            for i in 1..m {
                if self.at(i, rhs) < self.at(r, rhs) {
                    r = i;
                }
            }
            if self.at(r, rhs) < -PIVOT_EPS {
                self.pivot(r, n)?;
                let bounded = self.optimize(Phase::One)?;
                if !bounded || self.at(m + 1, rhs) < -PIVOT_EPS {
                    return Ok(self.finish(LpStatus::Infeasible));
                }
                // Drive the artificial variable out of the basis if it is
                // still there at level zero.
                if let Some(i) = self.basic.iter().position(|&b| b == ARTIFICIAL) {
                    let mut s: Option<usize> = None;
                    for j in 0..=n {
                        let better = match s {
                            None => true,
                            Some(b) => {
                                let (v, vb) = (self.at(i, j), self.at(i, b));
                                v < vb || (v == vb && self.nonbasic[j] < self.nonbasic[b])
                            }
                        };
                        if better {
                            s = Some(j);
                        }
                    }
                    let s = s.expect("tableau has at least one column");
                    if self.at(i, s).abs() > PIVOT_EPS {
                        self.pivot(i, s)?;
                    }
                }
            }
        }

        if !self.optimize(Phase::Two)? {
            return Ok(self.finish(LpStatus::Unbounded));
        }
        Ok(self.finish(LpStatus::Optimal))
    }

    fn finish(self, status: LpStatus) -> LpSolution {
        let (m, n) = (self.m, self.n);
        let rhs = n + 1;
        let mut primal = vec![0.0; n];
        let mut dual = Vec::new();
        let optimum = match status {
            LpStatus::Optimal => {
                for i in 0..m {
                    if let Ok(b) = usize::try_from(self.basic[i]) {
                        if b < n {
                            primal[b] = self.at(i, rhs);
                        }
                    }
                }
                dual = vec![0.0; m];
                for j in 0..=n {
                    if let Ok(label) = usize::try_from(self.nonbasic[j]) {
                        if label >= n {
                            dual[label - n] = self.at(m, j).max(0.0);
                        }
                    }
                }
                self.at(m, rhs)
            }
            LpStatus::Unbounded => f64::INFINITY,
            LpStatus::Infeasible => f64::NEG_INFINITY,
        };
        LpSolution {
            status,
            optimum,
            primal,
            dual,
            pivots: self.pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(objective: &[f64], rows: &[(&[f64], f64)]) -> DenseLp {
        let mut lp = DenseLp::new(objective.to_vec());
        for (row, b) in rows {
            lp.push_row(row.to_vec(), *b);
        }
        lp
    }

    #[test]
    fn single_bound() {
        let sol = lp(&[1.0], &[(&[1.0], 4f64.ln())]).solve().unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.optimum - 4f64.ln()).abs() < 1e-12);
        assert!((sol.dual[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_direction() {
        let sol = lp(&[1.0, 1.0], &[(&[1.0, -1.0], 1.0)]).solve().unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        assert_eq!(sol.optimum, f64::INFINITY);
    }

    #[test]
    fn no_rows_zero_objective() {
        let sol = lp(&[-1.0, 0.0], &[]).solve().unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.optimum, 0.0);
    }

    #[test]
    fn textbook_optimum_and_duals() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36; duals (0, 1.5, 1).
        let sol = lp(
            &[3.0, 5.0],
            &[(&[1.0, 0.0], 4.0), (&[0.0, 2.0], 12.0), (&[3.0, 2.0], 18.0)],
        )
        .solve()
        .unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.optimum - 36.0).abs() < 1e-9);
        assert!((sol.primal[0] - 2.0).abs() < 1e-9);
        assert!((sol.primal[1] - 6.0).abs() < 1e-9);
        let expected = [0.0, 1.5, 1.0];
        for (y, e) in sol.dual.iter().zip(expected) {
            assert!((y - e).abs() < 1e-9);
        }
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // max -x - y, x + y ≥ 2 (as -x - y ≤ -2), x ≤ 3.
        let sol = lp(&[-1.0, -1.0], &[(&[-1.0, -1.0], -2.0), (&[1.0, 0.0], 3.0)])
            .solve()
            .unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.optimum + 2.0).abs() < 1e-9);
        assert!((sol.dual[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        // x ≤ -1 with x ≥ 0.
        let sol = lp(&[1.0], &[(&[1.0], -1.0)]).solve().unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the plain largest-coefficient rule.
        let sol = lp(
            &[0.75, -150.0, 0.02, -6.0],
            &[
                (&[0.25, -60.0, -0.04, 9.0], 0.0),
                (&[0.5, -90.0, -0.02, 3.0], 0.0),
                (&[0.0, 0.0, 1.0, 0.0], 1.0),
            ],
        )
        .solve()
        .unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.optimum - 0.05).abs() < 1e-9);
    }

    #[test]
    fn rejects_malformed_input() {
        let mut bad = DenseLp::new(vec![1.0, 2.0]);
        bad.push_row(vec![1.0], 1.0);
        assert!(bad.solve().is_err());
        let nan = lp(&[f64::NAN], &[(&[1.0], 1.0)]);
        assert!(nan.solve().is_err());
    }

    #[test]
    fn deterministic() {
        let problem = lp(
            &[1.0, 1.0, 1.0],
            &[
                (&[1.0, 1.0, 0.0], 1.0),
                (&[0.0, 1.0, 1.0], 1.0),
                (&[1.0, 0.0, 1.0], 1.0),
            ],
        );
        let a = problem.solve().unwrap();
        let b = problem.solve().unwrap();
        assert_eq!(a, b);
        assert!((a.optimum - 1.5).abs() < 1e-12);
    }
}
