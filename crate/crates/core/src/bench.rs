//! Benchmark harness: exact counts against the five nested bound methods
//! over the pattern catalog, per-dataset and geometric-mean CSVs, and the
//! log-log regression of caterpillar relative error on star relative error.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::entropy_lp::{build_lp, solve_bound, BoundReport, BoundStatus, Query};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homcount::{count_homs_with_budget, Pattern, DEFAULT_BUDGET};
use crate::stats::{compute_stat, StatKey, StatKind, StatRecord};

/// Relative slack used when checking soundness and nesting of LP optima.
pub const INVARIANT_RTOL: f64 = 1e-9;

pub const CSV_HEADER: [&str; 9] = [
    "shape", "true", "star", "bistar", "vvv", "nnn", "www", "s/t", "w/t",
];

pub const AVERAGE_FILE: &str = "_average.csv";

#[derive(Clone, Debug, PartialEq)]
pub struct StatGrid {
    pub star: Vec<f64>,
    /// `BiStar(p, q)` for every `p, q` in this list.
    pub bistar: Vec<f64>,
    /// `V(p,0,p)`, `N(p,0,0,p)`, `W(p,0,0,0,p)` for every `p` in this list.
    pub caterpillar: Vec<f64>,
}

impl Default for StatGrid {
    fn default() -> Self {
        Self {
            star: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            bistar: vec![2.0, 3.0, 4.0, 5.0],
            caterpillar: vec![1.0, 2.0, 3.0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Only `|R|` per atom: the AGM bound.
    EdgesOnly,
    Star,
    BiStar,
    Vvv,
    Nnn,
    Www,
}

impl Method {
    /// The five cumulative methods, weakest first.
    pub const NESTED: [Method; 5] = [
        Method::Star,
        Method::BiStar,
        Method::Vvv,
        Method::Nnn,
        Method::Www,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::EdgesOnly => "edges-only",
            Method::Star => "star",
            Method::BiStar => "bistar",
            Method::Vvv => "vvv",
            Method::Nnn => "nnn",
            Method::Www => "www",
        }
    }

    /// Statistic kinds of this method. Each nested method's list extends the
    /// previous one, so it is also a prefix of [`Method::Www`]'s list.
    pub fn kinds(self, grid: &StatGrid) -> Vec<StatKind> {
        if self == Method::EdgesOnly {
            return vec![StatKind::EdgeCount];
        }
        let mut kinds = vec![
            StatKind::DomainSize,
            StatKind::EdgeCount,
            StatKind::MaxDegree,
        ];
        kinds.extend(grid.star.iter().map(|&p| StatKind::Star(p)));
        if self == Method::Star {
            return kinds;
        }
        for &p in &grid.bistar {
            for &q in &grid.bistar {
                kinds.push(StatKind::BiStar(p, q));
            }
        }
        let levels = [Method::Vvv, Method::Nnn, Method::Www];
        for (depth, level) in levels.iter().enumerate() {
            if Method::NESTED.iter().position(|m| m == level)
                > Method::NESTED.iter().position(|m| *m == self)
            {
                break;
            }
            kinds.extend(grid.caterpillar.iter().map(|&p| match depth {
                0 => StatKind::CatV([p, 0.0, p]),
                1 => StatKind::CatN([p, 0.0, 0.0, p]),
                _ => StatKind::CatW([p, 0.0, 0.0, 0.0, p]),
            }));
        }
        kinds
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges-only" | "agm" => Ok(Method::EdgesOnly),
            "star" => Ok(Method::Star),
            "bistar" => Ok(Method::BiStar),
            "vvv" => Ok(Method::Vvv),
            "nnn" => Ok(Method::Nnn),
            "www" => Ok(Method::Www),
            other => Err(Error::domain(format!("unknown method {other}"))),
        }
    }
}

/// Records for both orientations of every kind, in kind order.
pub fn records_for(g: &Graph, kinds: &[StatKind]) -> Result<Vec<StatRecord>> {
    let mut out = Vec::with_capacity(kinds.len() * 2);
    for &kind in kinds {
        let forward = compute_stat(g, &StatKey::new(kind))?;
        let mut transposed = forward;
        transposed.key = StatKey::transposed(kind);
        out.push(forward);
        out.push(transposed);
    }
    Ok(out)
}

/// Bound for `pattern` over the single relation `g`, given its records.
pub fn bound_with_records(pattern: &Pattern, records: &[StatRecord]) -> Result<BoundReport> {
    let query = Query::from_pattern(pattern)?;
    let stats = vec![records.to_vec(); query.atoms.len()];
    solve_bound(&build_lp(&query, &stats)?)
}

pub fn bound_for_method(
    g: &Graph,
    pattern: &Pattern,
    method: Method,
    grid: &StatGrid,
) -> Result<BoundReport> {
    bound_with_records(pattern, &records_for(g, &method.kinds(grid))?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub grid: StatGrid,
    pub budget: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            grid: StatGrid::default(),
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub shape: String,
    /// Exact homomorphism count; `None` when the oracle ran out of budget.
    pub true_count: Option<f64>,
    pub star: f64,
    pub bistar: f64,
    pub vvv: f64,
    pub nnn: f64,
    pub www: f64,
}

impl BenchRow {
    pub fn bounds(&self) -> [f64; 5] {
        [self.star, self.bistar, self.vvv, self.nnn, self.www]
    }

    /// True count when it is usable for ratios (`≥ 1`).
    pub fn usable_true(&self) -> Option<f64> {
        self.true_count.filter(|&t| t >= 1.0)
    }

    pub fn s_over_t(&self) -> Option<f64> {
        self.usable_true().map(|t| self.star / t)
    }

    pub fn w_over_t(&self) -> Option<f64> {
        self.usable_true().map(|t| self.www / t)
    }

    /// Nesting and soundness violations, each described in one line.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let bounds = self.bounds();
        let names = ["star", "bistar", "vvv", "nnn", "www"];
        for i in 1..bounds.len() {
            if bounds[i] > bounds[i - 1] * (1.0 + INVARIANT_RTOL) {
                out.push(format!(
                    "{}: {} = {} exceeds {} = {}",
                    self.shape,
                    names[i],
                    bounds[i],
                    names[i - 1],
                    bounds[i - 1]
                ));
            }
        }
        if let Some(t) = self.true_count {
            for (name, b) in names.iter().zip(bounds) {
                if b < t * (1.0 - INVARIANT_RTOL) {
                    out.push(format!("{}: {name} = {b} below true count {t}", self.shape));
                }
            }
        }
        out
    }
}

fn bound_value(report: &BoundReport) -> f64 {
    match report.status {
        BoundStatus::Optimal => report.bound,
        _ => f64::INFINITY,
    }
}

/// One row per pattern: exact count plus the five nested bounds.
pub fn run_methods(g: &Graph, patterns: &[Pattern], config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let all = records_for(g, &Method::Www.kinds(&config.grid))?;
    let prefix: Vec<usize> = Method::NESTED
        .iter()
        .map(|m| 2 * m.kinds(&config.grid).len())
        .collect();
    patterns
        .par_iter()
        .map(|pattern| {
            let true_count = match count_homs_with_budget(pattern, g, config.budget) {
                Ok(c) => Some(c as f64),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            let mut bounds = [0.0; 5];
            for (slot, &len) in bounds.iter_mut().zip(&prefix) {
                *slot = bound_value(&bound_with_records(pattern, &all[..len])?);
            }
            Ok(BenchRow {
                shape: pattern.name().to_owned(),
                true_count,
                star: bounds[0],
                bistar: bounds[1],
                vvv: bounds[2],
                nnn: bounds[3],
                www: bounds[4],
            })
        })
        .collect()
}

fn geo_mean(values: impl Iterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.collect();
    if let [single] = values[..] {
        return single;
    }
    let sum: f64 = values.iter().map(|v| v.ln()).sum();
    (sum / values.len() as f64).exp()
}

/// Per-pattern geometric mean over the datasets whose true count is `≥ 1`.
///
/// A shape that occurs in no dataset keeps a true count of 0 and bounds
/// averaged over every dataset.
pub fn geometric_mean(datasets: &[Vec<BenchRow>]) -> Result<Vec<BenchRow>> {
    let Some(first) = datasets.first() else {
        return Err(Error::domain("no datasets to average"));
    };
    for rows in datasets {
        if rows.len() != first.len() || rows.iter().zip(first).any(|(a, b)| a.shape != b.shape) {
            return Err(Error::domain("datasets do not share the same pattern list"));
        }
    }
    let mut out = Vec::with_capacity(first.len());
    for i in 0..first.len() {
        let column: Vec<&BenchRow> = datasets.iter().map(|rows| &rows[i]).collect();
        let contributing: Vec<&BenchRow> = column
            .iter()
            .copied()
            .filter(|r| r.usable_true().is_some())
            .collect();
        let (pool, true_count) = if contributing.is_empty() {
            let known: Vec<&BenchRow> = column
                .iter()
                .copied()
                .filter(|r| r.true_count.is_some())
                .collect();
            let t = if known.is_empty() { None } else { Some(0.0) };
            (
                if known.is_empty() {
                    column.clone()
                } else {
                    known
                },
                t,
            )
        } else {
            let t = geo_mean(contributing.iter().map(|r| r.true_count.unwrap_or(1.0)));
            (contributing, Some(t))
        };
        let mean = |f: fn(&BenchRow) -> f64| geo_mean(pool.iter().map(|r| f(r)));
        out.push(BenchRow {
            shape: first[i].shape.clone(),
            true_count,
            star: mean(|r| r.star),
            bistar: mean(|r| r.bistar),
            vvv: mean(|r| r.vvv),
            nnn: mean(|r| r.nnn),
            www: mean(|r| r.www),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegressionResult {
    pub slope: f64,
    /// Zero for the through-origin model.
    pub intercept: f64,
    /// For the through-origin model this is the uncentered `1 - SSE / Σ y²`.
    pub r_squared: f64,
    pub point_count: usize,
}

/// Least squares on `(ln x, ln y)`.
pub fn loglog_regress(points: &[(f64, f64)], through_origin: bool) -> Result<RegressionResult> {
    if points.len() < 2 {
        return Err(Error::domain("regression needs at least two points"));
    }
    if points
        .iter()
        .any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(Error::domain(
            "log-log regression needs finite positive data",
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let (slope, intercept, total) = if through_origin {
        let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
        if sxx == 0.0 {
            return Err(Error::domain("all x values equal 1; slope undefined"));
        }
        let syy: f64 = logs.iter().map(|(_, y)| y * y).sum();
        (sxy / sxx, 0.0, syy)
    } else {
        let mx = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
        let my = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
        let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        if sxx == 0.0 {
            return Err(Error::domain("all x values equal; slope undefined"));
        }
        let syy: f64 = logs.iter().map(|(_, y)| (y - my).powi(2)).sum();
        let slope = sxy / sxx;
        (slope, my - slope * mx, syy)
    };
    let sse: f64 = logs
        .iter()
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if total == 0.0 {
        if sse == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - sse / total).clamp(0.0, 1.0)
    };
    Ok(RegressionResult {
        slope,
        intercept,
        r_squared,
        point_count: logs.len(),
    })
}

/// `(s/t, w/t)` pairs of rows with a usable true count and finite bounds.
pub fn error_points(rows: &[BenchRow]) -> Vec<(f64, f64)> {
    rows.iter()
        .filter_map(|r| Some((r.s_over_t()?, r.w_over_t()?)))
        .filter(|&(x, y)| x.is_finite() && y.is_finite() && x > 0.0 && y > 0.0)
        .collect()
}

/// `%.6g`-style formatting: six significant digits, trailing zeros dropped,
/// exponent form outside `[1e-4, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("valid exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_cell(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_owned(), format_sig6)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in rows {
        writer.write_record([
            r.shape.clone(),
            opt_cell(r.true_count),
            format_sig6(r.star),
            format_sig6(r.bistar),
            format_sig6(r.vvv),
            format_sig6(r.nnn),
            format_sig6(r.www),
            opt_cell(r.s_over_t()),
            opt_cell(r.w_over_t()),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn parse_cell(cell: &str, line: usize) -> Result<Option<f64>> {
    if cell == "NA" {
        return Ok(None);
    }
    cell.parse::<f64>().map(Some).map_err(|_| Error::Parse {
        line,
        message: format!("bad number {cell:?}"),
    })
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let num = |j: usize| -> Result<f64> {
            parse_cell(&record[j], line)?.ok_or_else(|| Error::Parse {
                line,
                message: format!("missing value in column {}", CSV_HEADER[j]),
            })
        };
        rows.push(BenchRow {
            shape: record[0].to_owned(),
            true_count: parse_cell(&record[1], line)?,
            star: num(2)?,
            bistar: num(3)?,
            vvv: num(4)?,
            nnn: num(5)?,
            www: num(6)?,
        });
    }
    Ok(rows)
}

/// One dataset path per line; blank lines and `#` comments are skipped.
/// Relative paths resolve against the manifest's directory.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut out = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let entry = Path::new(line);
        out.push(if entry.is_absolute() {
            entry.to_path_buf()
        } else {
            base.join(entry)
        });
    }
    if out.is_empty() {
        return Err(Error::domain(format!(
            "manifest {} lists no datasets",
            path.display()
        )));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DatasetResult {
    pub name: String,
    pub rows: Vec<BenchRow>,
}

#[derive(Clone, Debug)]
pub struct BenchSummary {
    pub datasets: Vec<DatasetResult>,
    pub average: Vec<BenchRow>,
    /// Through-origin fit of `ln(w/t)` on `ln(s/t)` over the averaged rows.
    pub regression: Option<RegressionResult>,
}

impl BenchSummary {
    pub fn violations(&self) -> Vec<String> {
        self.datasets
            .iter()
            .flat_map(|d| {
                d.rows.iter().flat_map(move |r| {
                    r.violations()
                        .into_iter()
                        .map(move |v| format!("{}: {v}", d.name))
                })
            })
            .collect()
    }
}

fn dataset_name(path: &Path, taken: &[DatasetResult]) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_owned());
    let mut name = stem.clone();
    let mut k = 2;
    while name == "_average" || taken.iter().any(|d| d.name == name) {
        name = format!("{stem}_{k}");
        k += 1;
    }
    name
}

/// Runs every dataset, writing `<out>/<dataset>.csv` and `<out>/_average.csv`.
pub fn run_bench(
    datasets: &[PathBuf],
    patterns: &[Pattern],
    out_dir: impl AsRef<Path>,
    config: &BenchConfig,
) -> Result<BenchSummary> {
    if datasets.is_empty() {
        return Err(Error::domain("no datasets given"));
    }
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir)?;
    let mut results: Vec<DatasetResult> = Vec::new();
    for path in datasets {
        let g = Graph::load_path(path)?;
        let rows = run_methods(&g, patterns, config)?;
        let name = dataset_name(path, &results);
        write_csv(&rows, File::create(out_dir.join(format!("{name}.csv")))?)?;
        results.push(DatasetResult { name, rows });
    }
    let per_dataset: Vec<Vec<BenchRow>> = results.iter().map(|d| d.rows.clone()).collect();
    let average = geometric_mean(&per_dataset)?;
    write_csv(&average, File::create(out_dir.join(AVERAGE_FILE))?)?;
    let regression = loglog_regress(&error_points(&average), true).ok();
    Ok(BenchSummary {
        datasets: results,
        average,
        regression,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homcount::{catalog, catalog_pattern};

    fn row(shape: &str, t: f64, bounds: [f64; 5]) -> BenchRow {
        BenchRow {
            shape: shape.to_owned(),
            true_count: Some(t),
            star: bounds[0],
            bistar: bounds[1],
            vvv: bounds[2],
            nnn: bounds[3],
            www: bounds[4],
        }
    }

    #[test]
    fn method_kinds_are_nested_prefixes() {
        let grid = StatGrid::default();
        let all = Method::Www.kinds(&grid);
        let mut prev = 0;
        for m in Method::NESTED {
            let k = m.kinds(&grid);
            assert!(k.len() > prev);
            assert_eq!(&all[..k.len()], &k[..]);
            prev = k.len();
        }
        assert_eq!(Method::Star.kinds(&grid).len(), 9);
        assert_eq!(Method::BiStar.kinds(&grid).len(), 25);
        assert_eq!(Method::Www.kinds(&grid).len(), 34);
        assert!(Method::Vvv
            .kinds(&grid)
            .contains(&StatKind::CatV([2.0, 0.0, 2.0])));
        assert!(!Method::Vvv
            .kinds(&grid)
            .contains(&StatKind::CatN([2.0, 0.0, 0.0, 2.0])));
    }

    #[test]
    fn method_parsing() {
        for m in Method::NESTED {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("edges-only".parse::<Method>().unwrap(), Method::EdgesOnly);
        assert!("nope".parse::<Method>().is_err());
    }

    #[test]
    fn triangle_host_triangle_pattern() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let rows = run_methods(
            &g,
            &[catalog_pattern("K3").unwrap()],
            &BenchConfig::default(),
        )
        .unwrap();
        assert_eq!(rows[0].true_count, Some(6.0));
        assert!(rows[0].violations().is_empty(), "{:?}", rows[0]);
    }

    #[test]
    fn path_host_path_pattern() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p = catalog_pattern("path3").unwrap();
        let edges_only = bound_for_method(&g, &p, Method::EdgesOnly, &StatGrid::default()).unwrap();
        assert!(edges_only.bound >= 6.0);
        let rows = run_methods(&g, &[p], &BenchConfig::default()).unwrap();
        assert_eq!(rows[0].true_count, Some(6.0));
        assert!(rows[0].star <= edges_only.bound * (1.0 + 1e-12));
        assert!(rows[0].violations().is_empty());
    }

    #[test]
    fn absent_pattern_is_excluded_from_ratios() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let rows = run_methods(
            &g,
            &[catalog_pattern("K5").unwrap()],
            &BenchConfig::default(),
        )
        .unwrap();
        assert_eq!(rows[0].true_count, Some(0.0));
        assert_eq!(rows[0].s_over_t(), None);
        assert!(error_points(&rows).is_empty());
    }

    #[test]
    fn budget_exhaustion_marks_true_unavailable() {
        let g = Graph::from_edges(30, (1..30).map(|v| (0, v))).unwrap();
        let config = BenchConfig {
            budget: 5,
            ..BenchConfig::default()
        };
        let rows = run_methods(&g, &[catalog_pattern("path5").unwrap()], &config).unwrap();
        assert_eq!(rows[0].true_count, None);
        assert!(rows[0].www.is_finite());
    }

    #[test]
    fn geometric_mean_examples() {
        let a = vec![row("x", 1.0, [10.0, 9.0, 8.0, 7.0, 6.0])];
        let b = vec![row("x", 1.0, [1000.0, 900.0, 800.0, 700.0, 600.0])];
        let avg = geometric_mean(&[a.clone(), b]).unwrap();
        assert!((avg[0].star - 100.0).abs() < 1e-9);
        assert!(avg[0].violations().is_empty());
        assert_eq!(
            geometric_mean(std::slice::from_ref(&a)).unwrap()[0].star,
            a[0].star
        );
    }

    #[test]
    fn geometric_mean_skips_absent_shapes() {
        let a = vec![row("x", 0.0, [10.0; 5])];
        let b = vec![row("x", 4.0, [40.0; 5])];
        let avg = geometric_mean(&[a.clone(), b]).unwrap();
        assert_eq!(avg[0].true_count, Some(4.0));
        assert_eq!(avg[0].star, 40.0);
        let none = geometric_mean(&[a.clone(), a]).unwrap();
        assert_eq!(none[0].true_count, Some(0.0));
        assert!(geometric_mean(&[]).is_err());
    }

    #[test]
    fn geometric_mean_requires_same_shapes() {
        let a = vec![row("x", 1.0, [1.0; 5])];
        let b = vec![row("y", 1.0, [1.0; 5])];
        assert!(geometric_mean(&[a, b]).is_err());
    }

    #[test]
    fn regression_exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..=10)
            .map(|i| (i as f64 * 3.0, (i as f64 * 3.0).sqrt()))
            .collect();
        let fit = loglog_regress(&pts, true).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.point_count, 10);
        let free = loglog_regress(&pts, false).unwrap();
        assert!((free.slope - 0.5).abs() < 1e-12);
        assert!(free.intercept.abs() < 1e-12);
    }

    #[test]
    fn regression_identical_points() {
        let fit = loglog_regress(&[(10.0, 100.0), (10.0, 100.0)], true).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn regression_errors() {
        assert!(loglog_regress(&[(2.0, 2.0)], true).is_err());
        assert!(loglog_regress(&[(2.0, 2.0), (0.0, 1.0)], true).is_err());
        assert!(loglog_regress(&[(1.0, 2.0), (1.0, 3.0)], true).is_err());
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(6.0), "6");
        assert_eq!(format_sig6(8.000000001), "8");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
        assert_eq!(format_sig6(0.5), "0.5");
        assert_eq!(format_sig6(0.000012345678), "1.23457e-05");
        assert_eq!(format_sig6(-2.5), "-2.5");
        assert_eq!(format_sig6(999999.7), "1e+06");
        assert_eq!(format_sig6(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_shapes() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "shape,true,star,bistar,vvv,nnn,www,s/t,w/t\n"
        );

        let mut buf = Vec::new();
        let r = row("K3", 6.0, [14.6969, 12.0, 11.0, 10.0, 9.0]);
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "K3,6,14.6969,12,11,10,9,2.44948,1.5"
        );
    }

    #[test]
    fn csv_round_trip_to_six_digits() {
        let rows = vec![
            row(
                "a",
                123456789.0,
                [1.0e12 / 7.0, 3.0e11, 2.5e10, 1.0e10, 9.9e9],
            ),
            BenchRow {
                true_count: None,
                ..row("b", 0.0, [std::f64::consts::PI; 5])
            },
        ];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        for (orig, read) in rows.iter().zip(&back) {
            assert_eq!(orig.shape, read.shape);
            for (x, y) in orig.bounds().iter().zip(read.bounds()) {
                assert!(((x - y) / x).abs() < 5e-6, "{x} vs {y}");
            }
        }
        assert_eq!(back[1].true_count, None);
    }

    #[test]
    fn manifest_rules() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("empty.txt");
        fs::write(&empty, "# nothing\n\n").unwrap();
        assert!(load_manifest(&empty).is_err());
        let listed = dir.path().join("m.txt");
        fs::write(&listed, "a.txt\n/abs/b.txt\n").unwrap();
        let paths = load_manifest(&listed).unwrap();
        assert_eq!(paths[0], dir.path().join("a.txt"));
        assert_eq!(paths[1], PathBuf::from("/abs/b.txt"));
    }

    #[test]
    fn single_dataset_average_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let data = dir.path().join("tiny.txt");
        fs::write(&data, "1 2\n2 3\n3 1\n3 4\n4 5\n").unwrap();
        let patterns: Vec<Pattern> = catalog().into_iter().take(8).collect();
        let out = dir.path().join("out");
        let summary = run_bench(&[data], &patterns, &out, &BenchConfig::default()).unwrap();
        let own = fs::read_to_string(out.join("tiny.csv")).unwrap();
        let avg = fs::read_to_string(out.join(AVERAGE_FILE)).unwrap();
        assert_eq!(own, avg);
        assert!(summary.violations().is_empty());
    }
}
