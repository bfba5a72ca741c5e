use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use repsoc::error::Error;
use repsoc::privilege::analyze_issue;
use repsoc::runner::{exit_code, run, validate, RunOptions};
use repsoc::space::{CandidateSpace, DEFAULT_CAP};

#[derive(Parser)]
#[command(name = "repsoc", version, about = "Representative social choice experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Exit with status 4 when an acceptance threshold fails.
        #[arg(long)]
        check: bool,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory; overrides the config's `out`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed; overrides the config's `seed`.
        #[arg(long, env = "REPSOC_SEED", hide = true)]
        seed: Option<u64>,
    },
    /// Check a config and the files it references without running it.
    Validate { config: PathBuf },
    /// Print the privilege graph of one issue of a candidate-space file.
    Privilege {
        space: PathBuf,
        #[arg(long)]
        issue: String,
        /// Print Graphviz DOT instead of the edge list.
        #[arg(long)]
        dot: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(&err) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            check,
            jobs,
            out,
            seed,
        } => {
            if let Some(k) = jobs {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
                    eprintln!("error: --jobs: {e}");
                    return ExitCode::from(2);
                }
            }
            let report = match run(&config, &RunOptions { check, out, seed }) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            for line in &report.lines {
                println!("{line}");
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for c in &report.checks {
                println!("check {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            println!("wrote {} files to {}", report.files.len(), report.out_dir.display());
            if check && !report.checks_pass() {
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match validate(&config) {
            Ok(cfg) => {
                println!("ok: {} experiment", cfg.experiment.name());
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Privilege {
            space,
            issue,
            dot,
            cap,
        } => {
            let analysis = CandidateSpace::load(&space).and_then(|s| {
                let i = s
                    .issues()
                    .index_of(&issue)
                    .map_err(|e| Error::Config { key: "--issue".into(), message: e.to_string() })?;
                analyze_issue(&s, i, cap)
            });
            let a = match analysis {
                Ok(a) => a,
                Err(e) => return fail(e),
            };
            if dot {
                print!("{}", a.graph.to_dot());
                return ExitCode::SUCCESS;
            }
            print!("{}", a.graph.to_edge_list());
            println!("components: {:?}", a.condensation.scc_members);
            println!("topological order: {:?}", a.condensation.topo_order);
            println!("transitive: {}", a.transitive);
            if !a.inferred_edges.is_empty() {
                println!("implied by chains only: {:?}", a.inferred_edges);
            }
            println!("cyclically privileged: {}", a.cyclic);
            ExitCode::SUCCESS
        }
    }
}
