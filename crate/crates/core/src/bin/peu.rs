use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use peu_core::commands::{self, Section4Args, SweepKind};
use peu_core::ellsberg::{PayoffSchedule, UrnComposition};
use peu_core::report::Format;
use peu_core::scenario::ScenarioFile;
use peu_core::sequential::AgentPolicy;
use peu_core::{Error, Pessimism, PeuParams};

#[derive(Parser)]
#[command(name = "peu", version, about = "Egalitarian social evaluation under ambiguity")]
struct Cli {
    /// Worker threads for sweeps and Monte Carlo (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format: md, json or csv.
    #[arg(long, global = true, default_value = "md")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct SocialArgs {
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 0.25)]
    gamma: f64,
    /// Shortfall of option (4) for comparisons G and H.
    #[arg(long, default_value_t = 1.0)]
    cost_c: f64,
    /// Overrides --cost-c for comparison H.
    #[arg(long)]
    cost_c_h: Option<f64>,
}

impl SocialArgs {
    fn params(&self) -> Result<PeuParams, Error> {
        PeuParams::new(self.alpha, self.beta, self.gamma)
    }

    fn costs(&self) -> (f64, f64) {
        (self.cost_c_h.unwrap_or(self.cost_c), self.cost_c)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    PeuParams,
    HeuReversal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Agent {
    Naive,
    Sophisticated,
    Global,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the worked comparisons (section 3) or the Ellsberg plans (section 4).
    Reproduce {
        #[arg(long)]
        section: u8,
        #[command(flatten)]
        social: SocialArgs,
        #[arg(long, default_value_t = 10.0)]
        w_fail: f64,
        /// Red share of the ambiguous urn used for the simulated draws.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, env = "PEU_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Sweep a parameter grid.
    Sweep {
        #[arg(long, value_enum)]
        kind: Kind,
        /// `name=lo:hi:step` or `name=value` entries separated by commas, or a bare step.
        #[arg(long, default_value = "")]
        grid: String,
        #[arg(long, default_value_t = 1.0)]
        cost_c: f64,
        #[arg(long)]
        cost_c_h: Option<f64>,
    },
    /// Evaluate every option of a scenario file and compare them pairwise.
    Evaluate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Exact and simulated win probabilities of the four plans.
    Ellsberg {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, env = "PEU_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Run one agent through the two-stage tree.
    Sequential {
        #[arg(long, value_enum)]
        agent: Agent,
        #[arg(long, default_value_t = 0.8)]
        alpha: f64,
        #[arg(long, default_value_t = 10.0)]
        w_fail: f64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, env = "PEU_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Print the built-in eight-option scenario as JSON.
    ExportScenario {
        /// Shortfall of option (4).
        #[arg(long, default_value_t = 0.0)]
        cost_c: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(String, bool), Error> {
    let format = cli.format;
    match cli.command {
        Command::Reproduce { section, social, w_fail, p, seed } => {
            let params = social.params()?;
            let (small, for_g) = social.costs();
            let s4 = Section4Args {
                alpha: params.alpha,
                schedule: PayoffSchedule::with_fail(w_fail)?,
                composition: UrnComposition::new(p)?,
                seed,
            };
            let out = commands::reproduce(section, &params, small, for_g, &s4)?;
            Ok((out.report.render(format), out.mismatch))
        }
        Command::Sweep { kind, grid, cost_c, cost_c_h } => {
            let kind = match kind {
                Kind::PeuParams => SweepKind::PeuParams,
                Kind::HeuReversal => SweepKind::HeuReversal,
            };
            let r = commands::sweep(kind, &grid, cost_c_h.unwrap_or(cost_c), cost_c)?;
            Ok((r.render(format), false))
        }
        Command::Evaluate { scenario } => {
            let s = ScenarioFile::load(&scenario)?.validate()?;
            let r = commands::evaluate(&s, &scenario.display().to_string())?;
            Ok((r.render(format), false))
        }
        Command::Ellsberg { p, samples, seed } => {
            let r = commands::ellsberg(UrnComposition::new(p)?, samples, seed)?;
            Ok((r.render(format), false))
        }
        Command::Sequential { agent, alpha, w_fail, p, seed } => {
            let a = Pessimism::new(alpha)?;
            let policy = match agent {
                Agent::Naive => AgentPolicy::Naive(a),
                Agent::Sophisticated => AgentPolicy::Sophisticated(a),
                Agent::Global => AgentPolicy::GlobalPlanner(a),
            };
            let r = commands::sequential(policy, PayoffSchedule::with_fail(w_fail)?, UrnComposition::new(p)?, seed)?;
            Ok((r.render(format), false))
        }
        Command::ExportScenario { cost_c, output } => {
            let mut json = ScenarioFile::builtin(cost_c, &PeuParams::default())?.to_json();
            json.push('\n');
            match output {
                Some(path) => {
                    std::fs::write(&path, &json).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
                    Ok((String::new(), false))
                }
                None => Ok((json, false)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok((text, mismatch)) => {
            print!("{text}");
            if mismatch {
                eprintln!("mismatch: at least one result differs from the expected direction");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
