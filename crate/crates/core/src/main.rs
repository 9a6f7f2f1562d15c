use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use catbound::bench::{BenchConfig, Method, StatGrid};
use catbound::cli::{self, BoundArgs, BUDGET_ENV};
use catbound::entropy_lp::DEFAULT_RELATION;
use catbound::homcount::DEFAULT_BUDGET;
use catbound::{Error, Graph, Result, StatKey, StatKind};

#[derive(Parser)]
#[command(
    name = "catbound",
    version,
    about = "Degree-moment statistics and join-size upper bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print degree statistics of an edge list.
    Stats(StatsArgs),
    /// Upper-bound the homomorphism count of a pattern or query.
    Bound(BoundCmd),
    /// Exact homomorphism count of a pattern into a graph.
    Count(CountArgs),
    /// Run every catalog pattern over the datasets of a manifest.
    Bench(BenchArgs),
    /// List the built-in pattern catalog.
    Catalog,
}

#[derive(Args)]
struct StatsArgs {
    graph: PathBuf,
    #[arg(long)]
    domain_size: bool,
    #[arg(long)]
    edge_count: bool,
    #[arg(long)]
    max_degree: bool,
    /// `p`; repeatable.
    #[arg(long, value_name = "P")]
    star: Vec<String>,
    /// `p,q`; repeatable.
    #[arg(long, value_name = "P,Q")]
    bistar: Vec<String>,
    /// `p,q,r`; repeatable.
    #[arg(long, value_name = "P,Q,R")]
    catv: Vec<String>,
    /// `p,q,r,s`; repeatable.
    #[arg(long, value_name = "P,Q,R,S")]
    catn: Vec<String>,
    /// `p,q,r,s,t`; repeatable.
    #[arg(long, value_name = "P,Q,R,S,T")]
    catw: Vec<String>,
    /// Compute each statistic on the transposed relation instead.
    #[arg(long)]
    transposed: bool,
}

#[derive(Args)]
struct GridArgs {
    /// Star exponents, comma-separated.
    #[arg(long, value_name = "LIST")]
    star_grid: Option<String>,
    /// Bi-star exponents (all pairs are used), comma-separated.
    #[arg(long, value_name = "LIST")]
    bistar_grid: Option<String>,
    /// Caterpillar end exponents, comma-separated.
    #[arg(long, value_name = "LIST")]
    cat_grid: Option<String>,
}

impl GridArgs {
    fn grid(&self) -> Result<StatGrid> {
        let mut grid = StatGrid::default();
        if let Some(s) = &self.star_grid {
            grid.star = cli::parse_params(s)?;
        }
        if let Some(s) = &self.bistar_grid {
            grid.bistar = cli::parse_params(s)?;
        }
        if let Some(s) = &self.cat_grid {
            grid.caterpillar = cli::parse_params(s)?;
        }
        Ok(grid)
    }
}

#[derive(Args)]
struct BoundCmd {
    /// Host graph used for the default relation.
    graph: PathBuf,
    /// Catalog pattern name, pattern edge list, or query file.
    pattern: String,
    /// edges-only, star, bistar, vvv, nnn or www.
    #[arg(long, default_value = "www")]
    method: String,
    /// Print the dual certificate.
    #[arg(long)]
    certificate: bool,
    /// Graph for a named relation of a query file; repeatable.
    #[arg(long, value_name = "NAME=PATH")]
    relation: Vec<String>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct CountArgs {
    graph: PathBuf,
    /// Catalog pattern name or pattern edge list.
    pattern: String,
    /// Maximum number of candidate extensions examined.
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct BenchArgs {
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(flatten)]
    grid: GridArgs,
}

fn stat_keys(args: &StatsArgs) -> Result<Vec<StatKey>> {
    let mut kinds = Vec::new();
    if args.domain_size {
        kinds.push(StatKind::DomainSize);
    }
    if args.edge_count {
        kinds.push(StatKind::EdgeCount);
    }
    if args.max_degree {
        kinds.push(StatKind::MaxDegree);
    }
    let lists = [
        ("star", &args.star),
        ("bistar", &args.bistar),
        ("catv", &args.catv),
        ("catn", &args.catn),
        ("catw", &args.catw),
    ];
    for (name, values) in lists {
        for v in values {
            kinds.push(cli::parse_stat_kind(name, v)?);
        }
    }
    if kinds.is_empty() {
        return Err(Error::Domain("no statistic requested".to_owned()));
    }
    Ok(kinds
        .into_iter()
        .map(|k| {
            if args.transposed {
                StatKey::transposed(k)
            } else {
                StatKey::new(k)
            }
        })
        .collect())
}

fn run(command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Stats(args) => {
            let keys = stat_keys(&args)?;
            cli::cmd_stats(&Graph::load_path(&args.graph)?, &keys, out)
        }
        Command::Bound(args) => {
            let method: Method = args.method.parse()?;
            let grid = args.grid.grid()?;
            let mut relations = BTreeMap::new();
            relations.insert(DEFAULT_RELATION.to_owned(), Graph::load_path(&args.graph)?);
            for spec in &args.relation {
                let (name, path) = spec.split_once('=').ok_or_else(|| {
                    Error::Domain(format!("--relation expects NAME=PATH, found {spec:?}"))
                })?;
                relations.insert(name.to_owned(), Graph::load_path(path)?);
            }
            let bound_args = BoundArgs {
                target: &args.pattern,
                method,
                grid: &grid,
                certificate: args.certificate,
            };
            cli::cmd_bound(&relations, &bound_args, out)
        }
        Command::Count(args) => {
            let pattern = cli::resolve_pattern(&args.pattern)?;
            cli::cmd_count(&Graph::load_path(&args.graph)?, &pattern, args.budget, out)
        }
        Command::Bench(args) => {
            let config = BenchConfig {
                grid: args.grid.grid()?,
                budget: args.budget,
            };
            cli::cmd_bench(&args.manifest, &args.out, &config, out)
        }
        Command::Catalog => cli::cmd_catalog(out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli.command, &mut out).and_then(|()| out.flush().map_err(Error::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("catbound: {e}");
            ExitCode::FAILURE
        }
    }
}
