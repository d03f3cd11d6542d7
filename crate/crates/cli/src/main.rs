use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rainbow_core::baselines::{kruskal_mst, wastlund_constant, zeta3};
use rainbow_core::harness::{self, ExperimentConfig, ExperimentKind};
use rainbow_core::instance::{
    color_edges, edge_count, gen_euclidean, gen_uniform_costs, load, save, Instance, SeedSpec, RNG_VERSION,
};
use rainbow_core::rainbow_exact::{brute_rainbow_spanning_tree, min_rainbow_spanning_tree, RainbowMst};
use rainbow_core::tour_greedy::{rainbow_tour, HamiltonBudget, TourParams};
use rainbow_core::tree_construct::{construct_tree, DEFAULT_B, DEFAULT_K};
use rainbow_core::Error;

#[derive(Parser)]
#[command(name = "rainbow-opt", version, about = "Rainbow spanning trees and Hamilton cycles on randomly colored graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Euclid,
    Uniform,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random colored instance file.
    Gen {
        #[arg(long, value_enum, default_value = "euclid")]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Palette size; defaults to n - 1.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Square side for Euclidean points; `sqrt` uses sqrt(n).
        #[arg(long, default_value = "1")]
        scale: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the limiting constants.
    Constants,
    /// Minimum spanning tree cost, ignoring colors.
    Mst {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exact minimum-cost rainbow spanning tree.
    RainbowMst {
        #[arg(long)]
        input: PathBuf,
        /// Also solve by enumerating all trees (n <= 8) and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Rainbow spanning tree by the level-set matching construction.
    TreeConstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "K", default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long = "B", default_value_t = DEFAULT_B)]
        b: f64,
        #[arg(long)]
        diag: Option<PathBuf>,
    },
    /// Rainbow Hamilton cycle by greedy paths and reserve completion.
    TourGreedy {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = rainbow_core::tour_greedy::DEFAULT_EPS)]
        eps: f64,
        #[arg(long = "C", default_value_t = rainbow_core::tour_greedy::DEFAULT_C)]
        c: f64,
        /// Completion restarts.
        #[arg(long)]
        budget: Option<usize>,
        /// Skip the rainbow 2-opt polish.
        #[arg(long)]
        no_polish: bool,
        #[arg(long)]
        diag: Option<PathBuf>,
    },
    /// Run a seeded experiment grid and write CSV.
    Experiment {
        /// JSON configuration; flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<usize>>,
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        base_seed: Option<u64>,
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long = "B")]
        b: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "C")]
        c: Option<f64>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute one CSV row from its seed and parameters.
    Rerun {
        #[arg(long)]
        csv: PathBuf,
        /// Zero-based data row.
        #[arg(long)]
        row: usize,
    },
}

/// Exit status 2: the primary result is infeasible or was not found.
struct Failed(String);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed(msg))) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            let failed = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::MatchingFailed { .. } | Error::GreedyStalled { .. } | Error::CompletionFailed { .. })
            );
            eprintln!("error: {e:#}");
            ExitCode::from(if failed { 2 } else { 1 })
        }
    }
}

fn write_json(path: &PathBuf, value: serde_json::Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(&value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn run(cmd: Cmd) -> anyhow::Result<Result<(), Failed>> {
    match cmd {
        Cmd::Gen {
            kind,
            n,
            q,
            seed,
            scale,
            out,
        } => {
            let s = SeedSpec::new(seed);
            let q = q.unwrap_or(n.saturating_sub(1).max(1));
            let inst: Instance = match kind {
                Kind::Euclid => {
                    let side = match scale.as_str() {
                        "sqrt" => (n as f64).sqrt(),
                        v => v.parse::<f64>().context("--scale must be a number or `sqrt`")?,
                    };
                    if !(side > 0.0 && side.is_finite()) {
                        bail!("--scale must be positive");
                    }
                    gen_euclidean(n, side, s).into()
                }
                Kind::Uniform => gen_uniform_costs(n, s).into(),
            };
            let col = color_edges(edge_count(n), q, s)?;
            save(&out, &inst, &col)?;
        }
        Cmd::Constants => {
            let w = wastlund_constant()?;
            println!("zeta3 {}", zeta3());
            println!("wastlund_tau {}", w.value);
            println!("wastlund_step_halving_delta {:e}", w.step_halving_delta);
            println!("wastlund_fixed_point {}", w.fixed_point);
            println!("rng {RNG_VERSION}");
        }
        Cmd::Mst { input } => {
            let (inst, _) = load(&input)?;
            println!("{}", kruskal_mst(&inst)?.total_cost);
        }
        Cmd::RainbowMst { input, oracle } => {
            let (inst, col) = load(&input)?;
            let res = min_rainbow_spanning_tree(&inst, &col)?;
            if oracle {
                let brute = brute_rainbow_spanning_tree(&inst, &col)?;
                let agree = match (&res, &brute) {
                    (RainbowMst::Tree(t), Some(b)) => (t.total_cost - b.total_cost).abs() <= 1e-9 * b.total_cost.max(1.0),
                    (RainbowMst::Infeasible { .. }, None) => true,
                    _ => false,
                };
                println!("oracle {}", brute.map_or("infeasible".to_string(), |b| b.total_cost.to_string()));
                if !agree {
                    return Ok(Err(Failed("solver and oracle disagree".into())));
                }
            }
            match res {
                RainbowMst::Tree(t) => println!("{}", t.total_cost),
                RainbowMst::Infeasible { max_rank } => {
                    return Ok(Err(Failed(format!("no rainbow spanning tree (largest rainbow forest has {max_rank} edges)"))))
                }
            }
        }
        Cmd::TreeConstruct { input, k, b, diag } => {
            let (inst, col) = load(&input)?;
            let c = construct_tree(&inst, &col, k, b)?;
            if let Some(path) = &diag {
                write_json(path, serde_json::to_value(&c.diagnostics)?)?;
            }
            match c.tree {
                Some(t) => println!("{}", t.total_cost),
                None => {
                    return Ok(Err(Failed(format!(
                        "perfect matching failed: matched {} of {}",
                        c.diagnostics.matching_size, c.diagnostics.needed
                    ))))
                }
            }
        }
        Cmd::TourGreedy {
            input,
            eps,
            c,
            budget,
            no_polish,
            diag,
        } => {
            let (inst, col) = load(&input)?;
            let params = TourParams {
                eps,
                c_param: c,
                budget: budget.map(|restarts| HamiltonBudget {
                    restarts,
                    ..HamiltonBudget::for_n(inst.n())
                }),
                polish: if no_polish { None } else { TourParams::default().polish },
                ..TourParams::default()
            };
            let (tour, d) = rainbow_tour(&inst, &col, &params)?;
            if let Some(path) = &diag {
                write_json(path, serde_json::to_value(&d)?)?;
            }
            println!("{}", tour.total_cost);
        }
        Cmd::Experiment {
            config,
            kind,
            n_grid,
            seeds,
            base_seed,
            k,
            b,
            eps,
            c,
            budget,
            out,
        } => {
            let mut cfg = match &config {
                Some(p) => {
                    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    ExperimentConfig::from_json(&text)?
                }
                None => ExperimentConfig::default(),
            };
            match kind {
                Some(k) => cfg.kind = k.parse::<ExperimentKind>()?,
                None if config.is_none() => bail!("--kind or --config is required"),
                None => {}
            }
            if let Some(v) = n_grid {
                cfg.n_grid = v;
            }
            if let Some(v) = seeds {
                cfg.seeds = v;
            }
            if let Some(v) = base_seed {
                cfg.base_seed = v;
            }
            if let Some(v) = k {
                cfg.k = v;
            }
            if let Some(v) = b {
                cfg.b = v;
            }
            if let Some(v) = eps {
                cfg.eps = v;
            }
            if let Some(v) = c {
                cfg.c_param = v;
            }
            if budget.is_some() {
                cfg.budget = budget;
            }
            let result = harness::run_experiment(&cfg)?;
            result.write_csv(&out)?;
            print!("{}", result.footer());
        }
        Cmd::Rerun { csv, row } => {
            let text = std::fs::read_to_string(&csv).with_context(|| format!("reading {}", csv.display()))?;
            let rows = harness::read_csv(&text)?;
            let Some(r) = rows.get(row) else {
                bail!("row {row} out of range ({} data rows)", rows.len());
            };
            let again = harness::rerun_row(r)?;
            println!("recorded {} {}", r.success, r.cost);
            println!("rerun    {} {}", again.success, again.cost);
            if again.success != r.success || again.cost.to_bits() != r.cost.to_bits() {
                return Ok(Err(Failed("rerun does not reproduce the row".into())));
            }
        }
    }
    Ok(Ok(()))
}
