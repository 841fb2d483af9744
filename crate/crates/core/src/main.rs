use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use llc_explorer::controller::{AgentMode, Grounding};
use llc_explorer::harness::{
    evaluate_accuracy, load_domain, load_test_states, read_models, run_experiment, ExperimentConfig, PerfectModel,
};
use llc_explorer::llc::{dump_llcs, generate_llcs, llc_upper_bound};
use llc_explorer::scenario::PERFECT_MODEL_RULES;

#[derive(Parser)]
#[command(
    name = "llc-explorer",
    version,
    about = "Action-model learning by an exploring agent in a grid world"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Random,
    Explore,
    Planning,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroundingArg {
    Uniform,
    Adjacent,
}

#[derive(Subcommand)]
enum Command {
    /// Run agents and write per-run artifacts, progress.csv and summary.txt.
    Run {
        /// Problem file (defaults to the shipped Scenario 1).
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Domain file (defaults to the shipped domain).
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        mode: ModeArg,
        #[arg(long, default_value_t = 4000)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        runs: usize,
        #[arg(long, default_value_t = 2)]
        llc_size: usize,
        /// Base seed; run r uses seed + r.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "uniform")]
        grounding: GroundingArg,
        /// Concurrent runs (defaults to the number of cores).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a models file against the perfect model on a test-state directory.
    Evaluate {
        #[arg(long)]
        models: PathBuf,
        #[arg(long)]
        tests: PathBuf,
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Print comma-separated values instead of the aligned table.
        #[arg(long)]
        csv: bool,
    },
    /// Print the lifted literal contexts of a domain.
    Llcs {
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        size: usize,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            domain,
            mode,
            steps,
            runs,
            llc_size,
            seed,
            grounding,
            workers,
            out,
        } => {
            let mut c = ExperimentConfig::new(out);
            c.domain = domain;
            c.scenario = scenario;
            c.modes = match mode {
                ModeArg::Random => vec![AgentMode::Random],
                ModeArg::Explore => vec![AgentMode::Explore],
                ModeArg::Planning => vec![AgentMode::Planning],
                ModeArg::All => AgentMode::ALL.to_vec(),
            };
            c.steps = steps;
            c.runs = runs;
            c.llc_size = llc_size;
            c.seed = seed;
            c.grounding = match grounding {
                GroundingArg::Uniform => Grounding::Uniform,
                GroundingArg::Adjacent => Grounding::Adjacent,
            };
            c.workers = workers;
            let summary = run_experiment(&c)?;
            print!("{}", summary.to_text(&c.modes));
            println!("artifacts in {}", c.out.display());
        }
        Command::Evaluate {
            models,
            tests,
            domain,
            csv,
        } => {
            let dom = load_domain(domain.as_deref())?;
            let perfect =
                PerfectModel::parse(PERFECT_MODEL_RULES, &dom).context("perfect model does not fit the domain")?;
            let text = std::fs::read_to_string(&models).with_context(|| format!("reading {}", models.display()))?;
            let learned = read_models(&text, &dom, &models.display().to_string())?;
            let tests = load_test_states(&tests, &dom)?;
            let report = evaluate_accuracy(&dom, &learned, &perfect, &tests)?;
            print!("{}", if csv { report.to_csv() } else { report.to_table() });
        }
        Command::Llcs { domain, size } => {
            if size == 0 {
                anyhow::bail!("--size must be at least 1");
            }
            let dom = load_domain(domain.as_deref())?;
            let llcs = generate_llcs(&dom, size);
            print!("{}", dump_llcs(&llcs, &dom));
            eprintln!("{} contexts (bound {})", llcs.len(), llc_upper_bound(&dom, size));
        }
    }
    Ok(())
}
