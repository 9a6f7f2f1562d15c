//! Subcommand bodies behind the `catbound` binary. Each writes its report to
//! the given sink so it can be driven from tests without a subprocess.

use std::collections::BTreeMap;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use crate::bench::{self, format_sig6, BenchConfig, Method, StatGrid};
use crate::entropy_lp::{build_lp, solve_bound, BoundReport, BoundStatus, EntropyLp, Query};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homcount::{catalog, catalog_pattern, count_homs_with_budget, Pattern};
use crate::stats::{compute_stat, StatKey, StatKind};

/// Environment variable overriding the oracle budget of `count` and `bench`.
pub const BUDGET_ENV: &str = "CATBOUND_ORACLE_BUDGET";

/// Parses a comma-separated list of finite numbers.
pub fn parse_params(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Domain(format!("bad parameter {t:?} in {text:?}")))
        })
        .collect()
}

fn fixed<const N: usize>(text: &str) -> Result<[f64; N]> {
    let params = parse_params(text)?;
    params.as_slice().try_into().map_err(|_| {
        Error::Domain(format!(
            "expected {N} comma-separated parameters, found {} in {text:?}",
            params.len()
        ))
    })
}

/// Builds a statistic kind from its command-line name and parameter text.
pub fn parse_stat_kind(name: &str, params: &str) -> Result<StatKind> {
    let kind = match name {
        "domain-size" => StatKind::DomainSize,
        "edge-count" => StatKind::EdgeCount,
        "max-degree" => StatKind::MaxDegree,
        "star" => StatKind::Star(fixed::<1>(params)?[0]),
        "bistar" => {
            let [p, q] = fixed::<2>(params)?;
            StatKind::BiStar(p, q)
        }
        "catv" => StatKind::CatV(fixed(params)?),
        "catn" => StatKind::CatN(fixed(params)?),
        "catw" => StatKind::CatW(fixed(params)?),
        other => return Err(Error::Domain(format!("unknown statistic {other}"))),
    };
    kind.validate()?;
    Ok(kind)
}

/// One tab-separated line per key: kind, parameters, value (or `overflow`)
/// and natural log of the value.
pub fn cmd_stats<W: Write>(g: &Graph, keys: &[StatKey], mut out: W) -> Result<()> {
    writeln!(out, "kind\torientation\tparams\tvalue\tlog_value")?;
    for key in keys {
        let record = compute_stat(g, key)?;
        let params: Vec<String> = key.kind.params().iter().map(|p| format_sig6(*p)).collect();
        let value = if record.overflowed() {
            "overflow".to_owned()
        } else {
            format_sig6(record.raw_value)
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            key.kind.name(),
            key.orientation,
            if params.is_empty() {
                "-".to_owned()
            } else {
                params.join(",")
            },
            value,
            format_sig6(record.log_value)
        )?;
    }
    Ok(())
}

/// A catalog name, or a file holding either a pattern edge list or a query
/// (`X Y [relation]` per line).
pub fn resolve_query(target: &str) -> Result<(String, Query)> {
    if let Some(p) = catalog_pattern(target) {
        return Ok((p.name().to_owned(), Query::from_pattern(&p)?));
    }
    let path = Path::new(target);
    if !path.is_file() {
        return Err(Error::Domain(format!(
            "{target} is neither a catalog pattern nor a readable file"
        )));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| target.to_owned());
    let query = Query::parse(BufReader::new(std::fs::File::open(path)?))?;
    Ok((name, query))
}

/// A catalog name or a pattern edge-list file.
pub fn resolve_pattern(target: &str) -> Result<Pattern> {
    match catalog_pattern(target) {
        Some(p) => Ok(p),
        None if Path::new(target).is_file() => Pattern::load_path(target),
        None => Err(Error::Domain(format!(
            "{target} is neither a catalog pattern nor a readable file"
        ))),
    }
}

/// Program and optimum for `query`, with every relation name mapped to a
/// host graph.
pub fn bound_query(
    query: &Query,
    relations: &BTreeMap<String, Graph>,
    method: Method,
    grid: &StatGrid,
) -> Result<(EntropyLp, BoundReport)> {
    let kinds = method.kinds(grid);
    let mut per_relation = Vec::with_capacity(query.relations.len());
    for name in &query.relations {
        per_relation.push(match relations.get(name) {
            Some(g) => Some(bench::records_for(g, &kinds)?),
            None => None,
        });
    }
    let mut stats = Vec::with_capacity(query.atoms.len());
    for atom in &query.atoms {
        match &per_relation[atom.relation] {
            Some(records) => stats.push(records.clone()),
            None => {
                return Err(Error::Domain(format!(
                    "no graph given for relation {}",
                    query.relations[atom.relation]
                )))
            }
        }
    }
    let lp = build_lp(query, &stats)?;
    let report = solve_bound(&lp)?;
    Ok((lp, report))
}

pub struct BoundArgs<'a> {
    pub target: &'a str,
    pub method: Method,
    pub grid: &'a StatGrid,
    pub certificate: bool,
}

pub fn cmd_bound<W: Write>(
    relations: &BTreeMap<String, Graph>,
    args: &BoundArgs<'_>,
    mut out: W,
) -> Result<()> {
    let (name, query) = resolve_query(args.target)?;
    let (lp, report) = bound_query(&query, relations, args.method, args.grid)?;
    writeln!(out, "pattern\t{name}")?;
    writeln!(out, "method\t{}", args.method)?;
    for warning in &lp.warnings {
        writeln!(out, "warning\t{warning}")?;
    }
    match report.status {
        BoundStatus::Optimal => {
            writeln!(out, "bound\t{}", format_sig6(report.bound))?;
            writeln!(out, "log_bound\t{}", format_sig6(report.log_bound))?;
        }
        BoundStatus::Unbounded => {
            writeln!(out, "bound\tunbounded")?;
            return Ok(());
        }
        BoundStatus::Infeasible => {
            return Err(Error::Internal("entropy program infeasible".to_owned()));
        }
    }
    if args.certificate {
        let check = report.check_certificate(&lp);
        writeln!(out, "certificate\tweight\trhs")?;
        for (row, &y) in lp.constraints.iter().zip(&report.dual_weights) {
            if y.abs() > 1e-12 {
                writeln!(
                    out,
                    "{}\t{}\t{}",
                    row.provenance,
                    format_sig6(y),
                    format_sig6(row.rhs)
                )?;
            }
        }
        writeln!(
            out,
            "recombined_log_bound\t{}",
            format_sig6(check.recombined)
        )?;
        writeln!(
            out,
            "max_shortfall\t{}",
            format_sig6(check.max_shortfall.max(0.0))
        )?;
    }
    Ok(())
}

/// Prints the exact homomorphism count.
pub fn cmd_count<W: Write>(g: &Graph, pattern: &Pattern, budget: u64, mut out: W) -> Result<()> {
    let count = count_homs_with_budget(pattern, g, budget)?;
    writeln!(out, "{count}")?;
    Ok(())
}

pub fn cmd_bench<W: Write>(
    manifest: &Path,
    out_dir: &Path,
    config: &BenchConfig,
    mut out: W,
) -> Result<()> {
    let datasets: Vec<PathBuf> = bench::load_manifest(manifest)?;
    let summary = bench::run_bench(&datasets, &catalog(), out_dir, config)?;
    for d in &summary.datasets {
        writeln!(
            out,
            "dataset\t{}\t{}",
            d.name,
            out_dir.join(format!("{}.csv", d.name)).display()
        )?;
    }
    writeln!(
        out,
        "average\t{}",
        out_dir.join(bench::AVERAGE_FILE).display()
    )?;
    match summary.regression {
        Some(fit) => writeln!(
            out,
            "regression\tslope={}\tr2={}\tpoints={}",
            format_sig6(fit.slope),
            format_sig6(fit.r_squared),
            fit.point_count
        )?,
        None => writeln!(out, "regression\tunavailable")?,
    }
    let violations = summary.violations();
    writeln!(out, "violations\t{}", violations.len())?;
    for v in &violations {
        writeln!(out, "violation\t{v}")?;
    }
    if !violations.is_empty() {
        return Err(Error::Internal(format!(
            "{} soundness or nesting violations",
            violations.len()
        )));
    }
    Ok(())
}

pub fn cmd_catalog<W: Write>(mut out: W) -> Result<()> {
    for p in catalog() {
        let edges: Vec<String> = p.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
        writeln!(
            out,
            "{}\t{}\t{}",
            p.name(),
            p.vertex_count(),
            edges.join(" ")
        )?;
    }
    Ok(())
}
