use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rankvol::covers::CoverCache;
use rankvol::pipeline::{
    analyze, parse_config, run_theorem_report, validate_report, verify_lemmas, CatalogName, ChainSpec, Config, Report,
    RunSpec,
};
use rankvol::simplicial::io::{parse_triangulation, write_triangulation};
use rankvol::simplicial::OrientedTriangulation;
use rankvol::volume::pachner_simplify;

#[derive(Parser)]
#[command(name = "rankvol", version, about = "Rank gradients and integral simplicial volume bounds along chains of covers")]
struct Cli {
    /// TOML config with budgets and a list of runs.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured annealing budget (proposed moves per level).
    #[arg(long, global = true)]
    move_budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants, rank bounds and volume bounds of one manifold.
    Analyze { manifold: String },
    /// Stable sequence along a chain of covers.
    Gradient {
        manifold: String,
        /// mod2, mod2-cyclic, mod:p, mod-cyclic:p, sublattice:f, low-index:s, constant
        #[arg(long)]
        chain: String,
        #[arg(long)]
        depth: usize,
    },
    /// Certificates for the glued complex and the generator extraction.
    VerifyLemmas { manifold: String },
    /// Simplifies a triangulation file by bistellar moves.
    Simplify {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Runs every configured run (or the default set) and prints the rows.
    Report,
    /// Re-checks a machine report offline.
    Validate { report: PathBuf },
}

/// A catalog name or a triangulation file.
fn load_manifold(name: &str) -> Result<(OrientedTriangulation, Option<CatalogName>)> {
    match name.parse::<CatalogName>() {
        Ok(n) => Ok((n.triangulation(), Some(n))),
        Err(_) if Path::new(name).exists() => {
            let text = std::fs::read_to_string(name).with_context(|| format!("reading {name}"))?;
            Ok((parse_triangulation(&text).with_context(|| format!("parsing {name}"))?, None))
        }
        Err(e) => Err(e.into()),
    }
}

fn default_runs() -> Vec<RunSpec> {
    let run = |manifold: &str, chain: &str, depth| RunSpec {
        manifold: manifold.into(),
        chain: chain.into(),
        depth,
    };
    vec![
        run("torus(2)", "sublattice:2", 2),
        run("surface(2)", "mod2-cyclic", 6),
        run("sphere(3)", "constant", 1),
    ]
}

fn print_table(r: &Report) {
    println!("# {} chain {} depth {}", r.manifold, r.chain.strategy, r.chain.depth);
    if let Some(why) = &r.chain_truncated {
        println!("# chain truncated: {why}");
    }
    print!("{}", r.to_csv());
    println!(
        "# best (rank_lower-1)/index {:.6}  best volume_upper/index {:.6}  inequality {}",
        r.summary.best_rank_lower_ratio,
        r.summary.best_volume_upper_ratio,
        if r.summary.inequality_holds { "holds" } else { "VIOLATED" }
    );
    for v in &r.summary.violations {
        println!("# VIOLATION {v}");
    }
}

fn run_reports(cfg: &Config, runs: &[RunSpec], format: Format) -> Result<bool> {
    let cache = CoverCache::from_env();
    let mut reports = Vec::new();
    for run in runs {
        let (t, catalog) = load_manifold(&run.manifold)?;
        let spec: ChainSpec = run.chain_spec()?;
        let r = run_theorem_report(&run.manifold, &t, catalog.map(|c| c.entry()), &spec, &cfg.budgets, cache.as_ref())?;
        if format == Format::Table {
            print_table(&r);
        }
        reports.push(r);
    }
    if format == Format::Machine {
        if reports.len() == 1 {
            println!("{}", reports[0].to_json());
        } else {
            println!("{}", serde_json::to_string_pretty(&reports)?);
        }
    }
    Ok(reports.iter().all(|r| !r.has_violations() && r.summary.inequality_holds))
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => parse_config(&std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)?,
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.budgets.seed = s;
    }
    if let Some(b) = cli.move_budget {
        cfg.budgets.move_budget = b;
    }
    match cli.command {
        Command::Analyze { manifold } => {
            let (t, catalog) = load_manifold(&manifold)?;
            let a = analyze(&t, &cfg.budgets);
            match cli.format {
                Format::Machine => println!("{}", serde_json::to_string_pretty(&(catalog.map(|c| c.entry()), &a))?),
                Format::Table => {
                    println!("manifold        {manifold}");
                    println!("dimension       {}", a.dimension);
                    println!("f-vector        {:?}", a.f_vector);
                    println!("euler           {}", a.euler_characteristic);
                    for (k, h) in a.homology.iter().enumerate() {
                        println!("H_{k}             {h}");
                    }
                    println!("presentation    {} generators, {} relators", a.presentation_generators, a.presentation_relators);
                    println!("simplified      {}", a.simplified_presentation);
                    println!("rank            [{}, {}]", a.rank.lower, a.rank.upper);
                    println!("volume          [{}, {}]", a.volume_lower, a.volume_upper);
                    if let Some(c) = catalog {
                        for k in c.entry().known {
                            println!("known {:<17} {} ({})", k.quantity, k.value, k.basis);
                        }
                    }
                }
            }
            Ok(a.rank.lower <= a.volume_upper)
        }
        Command::Gradient { manifold, chain, depth } => {
            let run = RunSpec { manifold, chain, depth };
            run_reports(&cfg, &[run], cli.format)
        }
        Command::VerifyLemmas { manifold } => {
            let (t, _) = load_manifold(&manifold)?;
            let l = verify_lemmas(&t);
            match cli.format {
                Format::Machine => println!("{}", serde_json::to_string_pretty(&l)?),
                Format::Table => {
                    println!("cycle terms     {}", l.cycle_terms);
                    match &l.glued {
                        Ok(c) => println!(
                            "glued complex   rank {} (guided {}) target {}  image index {}  {}",
                            c.achieved_rank,
                            c.guided_rank,
                            c.rank_target,
                            c.image_index,
                            if c.passed() { "PASS" } else { "FAIL" }
                        ),
                        Err(e) => println!("glued complex   FAIL {e}"),
                    }
                    match &l.extraction {
                        Ok(c) => println!(
                            "extraction      {} generators  index {}  multiplicity {:?}  {}",
                            l.extraction_generators,
                            c.index,
                            c.multiplicity,
                            if c.passed() { "PASS" } else { "FAIL" }
                        ),
                        Err(e) => println!("extraction      FAIL {e}"),
                    }
                }
            }
            Ok(l.passed())
        }
        Command::Simplify { file, budget, output } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let t = parse_triangulation(&text)?;
            let budget = budget.unwrap_or(cfg.budgets.move_budget);
            let o = pachner_simplify(&t, cfg.budgets.seed, budget, &cfg.budgets.anneal);
            let out = write_triangulation(&o.triangulation);
            match output {
                Some(path) => std::fs::write(&path, out)?,
                None => print!("{out}"),
            }
            eprintln!(
                "{} -> {} facets ({} proposals, {} accepted){}",
                o.initial_facets,
                o.final_facets,
                o.proposals,
                o.accepted,
                if o.unsupported_dimension { ", dimension not simplified" } else { "" }
            );
            Ok(true)
        }
        Command::Report => {
            let runs = if cfg.runs.is_empty() { default_runs() } else { cfg.runs.clone() };
            run_reports(&cfg, &runs, cli.format)
        }
        Command::Validate { report } => {
            let text = std::fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let reports: Vec<Report> = match serde_json::from_str::<Report>(&text) {
                Ok(r) => vec![r],
                Err(_) => serde_json::from_str(&text).context("not a report or list of reports")?,
            };
            let mut ok = true;
            for r in &reports {
                let Ok((t, _)) = load_manifold(&r.manifold) else {
                    bail!("cannot rebuild base manifold {}", r.manifold);
                };
                let problems = validate_report(r, &t);
                println!("{}: {}", r.manifold, if problems.is_empty() { "valid" } else { "INVALID" });
                for p in &problems {
                    println!("  {p}");
                }
                ok &= problems.is_empty();
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
