use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hypercox::dataset;
use hypercox::gram::SolverConfig;
use hypercox::pasting::{enumerate_seilper, Mode, PasteOptions};
use hypercox::pipeline::{self, RunConfig, TypeResults};
use hypercox::{CatalogSet, Result};

/// Compact hyperbolic Coxeter 4-polytopes with eight facets.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Catalog cache file.
    #[arg(long, global = true, env = "HYPERCOX_CACHE")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the diagram catalogs and print their sizes.
    Catalogs,
    /// Print the facet sets derived for one combinatorial type.
    Combinatorics { k: u32 },
    /// Print the SEILper vectors of one type.
    Enumerate {
        k: u32,
        #[command(flatten)]
        paste: PasteArgs,
    },
    /// Solve one type and print its Grams.
    Solve {
        k: u32,
        #[command(flatten)]
        paste: PasteArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate and solve several types, writing reports and checkpoints.
    Run {
        /// Types to run; all 24 when omitted.
        #[arg(long = "type", value_delimiter = ',')]
        types: Vec<u32>,
        #[command(flatten)]
        paste: PasteArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "hypercox-out")]
        out: PathBuf,
    },
    /// Compare basis mode plus prism gluing with direct mode.
    Crosscheck {
        #[arg(long = "type", value_delimiter = ',', default_values_t = [1, 4, 6, 7, 8])]
        types: Vec<u32>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "hypercox-out")]
        out: PathBuf,
    },
    /// Print DOT diagrams from the results of an earlier run.
    Export {
        #[arg(long = "type", value_delimiter = ',')]
        types: Vec<u32>,
        #[arg(long, default_value = "direct")]
        mode: Mode,
        #[arg(long, default_value = "hypercox-out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct PasteArgs {
    #[arg(long, default_value = "direct")]
    mode: Mode,
    /// Rows held in memory before batches are spilled or recursed.
    #[arg(long)]
    row_budget: Option<usize>,
    #[arg(long, env = "HYPERCOX_SPILL")]
    spill_dir: Option<PathBuf>,
    /// Apply every condition only after the full join.
    #[arg(long)]
    unpruned_replay: bool,
}

impl PasteArgs {
    fn options(&self) -> PasteOptions {
        let mut o = PasteOptions::new(self.mode);
        if let Some(b) = self.row_budget {
            o.row_budget = b;
        }
        o.spill_dir = self.spill_dir.clone();
        o.unpruned = self.unpruned_replay;
        o
    }
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long)]
    tol_residual: Option<f64>,
    #[arg(long)]
    tol_angle: Option<f64>,
    #[arg(long)]
    max_n: Option<u32>,
    /// List every unresolved vector.
    #[arg(long)]
    report_unresolved: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let mut c = SolverConfig::default();
        if let Some(t) = self.tol_residual {
            c.tol_residual = t;
        }
        if let Some(t) = self.tol_angle {
            c.tol_angle = t;
        }
        if let Some(n) = self.max_n {
            c.max_n = n;
        }
        c
    }
}

fn catalogs(cache: Option<&Path>) -> Result<CatalogSet> {
    match cache {
        Some(p) => CatalogSet::load_or_generate(p),
        None => Ok(CatalogSet::generate()),
    }
}

fn report_unresolved(results: &[TypeResults]) {
    for t in results {
        for r in t.records.iter().filter(|r| r.unresolved.is_some()) {
            println!("unresolved P{} [{}]: {}", t.polytope, r.vector, r.unresolved.as_ref().unwrap());
        }
    }
}

fn exit_for(unresolved: usize) -> ExitCode {
    if unresolved == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{unresolved} unresolved candidates");
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    let cache = cli.cache.as_deref();
    match cli.command {
        Command::Catalogs => {
            let cats = catalogs(cache)?;
            for c in cats.all() {
                println!("{:>3}  rank {}  {:>6}", c.name(), c.rank(), c.len());
            }
            println!("checksum {}", pipeline::catalog_checksum(&cats));
        }
        Command::Combinatorics { k } => {
            let p = dataset::polytope(k)?;
            println!("{}", p.listing());
            println!("|g_{k}| = {}", p.symmetry_group.len());
            println!("{}", serde_json::to_string_pretty(&p.derived)?);
        }
        Command::Enumerate { k, paste } => {
            let p = dataset::polytope(k)?;
            let e = enumerate_seilper(&p, &catalogs(cache)?, &paste.options())?;
            for v in &e.vectors {
                println!("{v}");
            }
            let side = serde_json::json!({
                "polytope": k,
                "mode": paste.mode,
                "count": e.vectors.len(),
                "wall_time": e.stats.seconds,
                "layer_rows": e.stats.layer_rows,
            });
            eprintln!("{side}");
        }
        Command::Solve { k, paste, solver, out } => {
            let cfg = RunConfig {
                types: vec![k],
                mode: paste.mode,
                paste: paste.options(),
                solver: solver.config(),
                out_dir: out,
                verbose: true,
            };
            let p = dataset::polytope(k)?;
            let (summary, results) = pipeline::run_type(&p, &catalogs(cache)?, &cfg)?;
            for s in results.solutions() {
                println!("{} {}", s.id, serde_json::to_string(&s.gram)?);
            }
            if solver.report_unresolved {
                report_unresolved(&[results]);
            }
            return Ok(exit_for(summary.unresolved));
        }
        Command::Run { types, paste, solver, out } => {
            let cfg = RunConfig {
                types: if types.is_empty() { dataset::labels() } else { types },
                mode: paste.mode,
                paste: paste.options(),
                solver: solver.config(),
                out_dir: Some(out),
                verbose: true,
            };
            let output = pipeline::run(&cfg, &catalogs(cache)?)?;
            print!("{}", pipeline::summary_csv(&output.manifest.summaries));
            println!("total grams {}", output.manifest.total_grams);
            if solver.report_unresolved {
                report_unresolved(&output.results);
            }
            return Ok(exit_for(output.manifest.total_unresolved));
        }
        Command::Crosscheck { types, solver, out } => {
            let cfg = RunConfig {
                types: types.clone(),
                solver: solver.config(),
                out_dir: Some(out),
                verbose: true,
                ..RunConfig::default()
            };
            let reports = pipeline::crosscheck(&types, &catalogs(cache)?, &cfg)?;
            let mut ok = true;
            for r in &reports {
                println!(
                    "P{}: basis {} SEILper, {} Grams, {} after gluing; direct {} SEILper, {} Grams; {}",
                    r.polytope,
                    r.basis_seilper,
                    r.basis_grams,
                    r.glued_grams,
                    r.direct_seilper,
                    r.direct_grams,
                    if r.matches() { "equal" } else { "MISMATCH" }
                );
                if !r.matches() {
                    ok = false;
                    println!("  missing {:?}, extra {}, unresolved {}", r.missing, r.extra, r.unresolved);
                }
            }
            let unresolved: usize = reports.iter().map(|r| r.unresolved).sum();
            if !ok && unresolved == 0 {
                return Ok(ExitCode::FAILURE);
            }
            return Ok(exit_for(unresolved));
        }
        Command::Export { types, mode, out } => {
            let types = if types.is_empty() { dataset::labels() } else { types };
            for k in types {
                let path = pipeline::results_path(&out, k, mode);
                if !path.exists() {
                    eprintln!("no results for P{k} at {}", path.display());
                    continue;
                }
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| hypercox::Error::Parse(format!("{}: {e}", path.display())))?;
                let results: TypeResults = serde_json::from_str(&text)?;
                for (_, dot) in pipeline::diagrams(&results)? {
                    print!("{dot}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
