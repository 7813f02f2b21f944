//! `listcap`: capacities, strong-converse exponents and list codes from the command line.
//!
//! Exit codes: 0 success, 1 input error, 2 non-convergence, 3 bound violation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use listcap_core::capacity::{arimoto_blahut, CapacityResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
use listcap_core::code::{error_probability, lift_code, verify_converse_bound, ListCode};
use listcap_core::experiment::{format_g, run_sweep, sweep_csv, ListRule, SweepConfig, SweepRow};
use listcap_core::io::{code_to_file, read_channel, read_code, read_state};
use listcap_core::renyi::{sc_exponent, ExponentQuery, DEFAULT_GRID_POINTS, DEFAULT_S_LO};
use listcap_core::{Channel, Error, State};

#[derive(Parser)]
#[command(name = "listcap", version, about)]
struct Cli {
    /// Units for entropies and rates in the output.
    #[arg(long, value_enum, default_value_t = Units::Nats, global = true)]
    units: Units,
    /// Seed for randomized commands.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Duality-gap tolerance for capacity computations, in nats.
    #[arg(long, default_value_t = DEFAULT_TOL, global = true)]
    tol: f64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Bits,
    Nats,
}

impl Units {
    fn name(self) -> &'static str {
        match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        }
    }

    fn show(self, nats: f64) -> f64 {
        match self {
            Units::Bits => nats / std::f64::consts::LN_2,
            Units::Nats => nats,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Channel capacity with certifying upper and lower bounds.
    Capacity {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Strong-converse exponent at a rate; the trace goes to the output as CSV.
    Exponent {
        #[arg(long)]
        channel: PathBuf,
        /// `capacity` for the capacity-achieving output state, or a state file.
        #[arg(long, default_value = "capacity")]
        sigma: String,
        /// Rate in nats per channel use.
        #[arg(long, allow_negative_numbers = true)]
        rate: f64,
        #[arg(long, default_value_t = DEFAULT_S_LO, allow_negative_numbers = true)]
        s_lo: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        /// Write the summary JSON here instead of stderr.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Checks the converse bound on a code at each s.
    Verify {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value = "capacity")]
        sigma: String,
        /// Comma-separated values of s, each <= 0.
        #[arg(long = "s", value_delimiter = ',', allow_negative_numbers = true, num_args = 0..)]
        s_list: Vec<f64>,
    },
    /// Random-coding sweep over rates and block lengths; CSV output.
    Sweep {
        #[arg(long)]
        channel: PathBuf,
        /// Comma-separated rates in nats per channel use.
        #[arg(long, value_delimiter = ',', required = true)]
        rates: Vec<f64>,
        /// Comma-separated block lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        /// Fixed list size.
        #[arg(long, conflicts_with = "rho")]
        list_size: Option<usize>,
        /// Exponential list sizes `ceil(exp(rho n))`.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Independent random codebooks per point, averaged.
        #[arg(long, default_value_t = 1)]
        codebooks: usize,
    },
    /// Turns a conventional code into a list code with the same error.
    Lift {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        list_size: usize,
        /// Evaluate the lifted code over this channel.
        #[arg(long)]
        channel: Option<PathBuf>,
    },
    /// Exact error probability of a code.
    CodeEval {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        channel: PathBuf,
    },
}

enum Failure {
    Input(String),
    NotConverged(String),
    Violated,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged(_) => Failure::NotConverged(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    // Usage errors are input errors; clap's own exit code 2 is taken.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::NotConverged(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violated) => {
            eprintln!("error: converse bound violated");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if !(cli.tol > 0.0) {
        return Err(Failure::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Capacity { channel, max_iter } => {
            let w = read_channel(channel)?;
            match arimoto_blahut(&w, cli.tol, *max_iter) {
                Ok(c) => emit_json(cli, &capacity_json(cli.units, &c, true)),
                Err(Error::NotConverged(best)) => {
                    emit_json(cli, &capacity_json(cli.units, &best, false))?;
                    Err(Failure::NotConverged(format!("gap {:e} above tolerance after {} iterations", best.gap, best.iterations)))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Exponent { channel, sigma, rate, s_lo, grid_points, summary } => {
            let w = read_channel(channel)?;
            let sigma = resolve_sigma(cli, &w, sigma)?;
            let query = ExponentQuery { rate: *rate, s_lo: *s_lo, grid_points: *grid_points };
            let result = sc_exponent(&query, &w, &sigma)?;
            let mut csv = String::from("s,phi,log_phi,objective\n");
            for row in &result.trace {
                let fields = [row.s, row.phi, row.log_phi, cli.units.show(row.objective)].map(format_g);
                csv.push_str(&fields.join(","));
                csv.push('\n');
            }
            emit(cli.out.as_deref(), &csv)?;
            let summary_json = json!({
                "rate": cli.units.show(result.rate),
                "exponent": cli.units.show(result.exponent),
                "s_star": result.s_star,
                "grid_points": query.grid_points,
                "s_lo": query.s_lo,
                "units": cli.units.name(),
            });
            let text = pretty(&summary_json);
            match summary {
                Some(path) => write_file(path, &text),
                None => {
                    eprint!("{text}");
                    Ok(())
                }
            }
        }
        Command::Verify { code, channel, sigma, s_list } => {
            let w = read_channel(channel)?;
            let code = read_code(code)?;
            let sigma = resolve_sigma(cli, &w, sigma)?;
            let report = verify_converse_bound(&code, &w, &sigma, s_list)?;
            let mut value = serde_json::to_value(&report).expect("serializable report");
            value["units"] = json!(cli.units.name());
            emit_json(cli, &value)?;
            if report.violated {
                Err(Failure::Violated)
            } else {
                Ok(())
            }
        }
        Command::Sweep { channel, rates, lengths, list_size, rho, trials, codebooks } => {
            let w = read_channel(channel)?;
            let mut config = SweepConfig::new(rates.clone(), lengths.clone());
            config.list_rule = match (list_size, rho) {
                (_, Some(rho)) => ListRule::Exponential(*rho),
                (Some(l), None) => ListRule::Fixed(*l),
                (None, None) => ListRule::Fixed(1),
            };
            config.trials = *trials;
            config.codebooks = *codebooks;
            config.seed = cli.seed;
            let sweep = run_sweep(&w, &config)?;
            let rows: Vec<SweepRow> = sweep
                .rows
                .iter()
                .map(|r| SweepRow { target_rate: cli.units.show(r.target_rate), rate: cli.units.show(r.rate), ..*r })
                .collect();
            emit(cli.out.as_deref(), &sweep_csv(&rows))
        }
        Command::Lift { code, list_size, channel } => {
            let base = read_code(code)?;
            let lifted = lift_code(&base, *list_size)?;
            let mut value = json!({
                "units": cli.units.name(),
                "code": serde_json::to_value(code_to_file(&lifted)).expect("serializable code"),
            });
            if let Some(channel) = channel {
                let w = read_channel(channel)?;
                value["base"] = metrics_json(&base, &w)?;
                value["metrics"] = metrics_json(&lifted, &w)?;
            }
            emit_json(cli, &value)
        }
        Command::CodeEval { code, channel } => {
            let w = read_channel(channel)?;
            let code = read_code(code)?;
            let mut value = metrics_json(&code, &w)?;
            value["units"] = json!(cli.units.name());
            value["N"] = json!(code.message_count());
            value["L"] = json!(code.list_size());
            emit_json(cli, &value)
        }
    }
}

fn capacity_json(units: Units, c: &CapacityResult, converged: bool) -> Value {
    json!({
        "value": units.show(c.value),
        "lower": units.show(c.lower),
        "upper": units.show(c.upper),
        "gap": units.show(c.gap),
        "p_star": c.p_star.probs(),
        "iterations": c.iterations,
        "converged": converged,
        "units": units.name(),
    })
}

fn metrics_json(code: &ListCode, w: &Channel) -> Result<Value, Failure> {
    let m = error_probability(code, w)?;
    Ok(json!({ "p_e": m.p_e, "success": m.success }))
}

fn resolve_sigma(cli: &Cli, w: &Channel, source: &str) -> Result<State, Failure> {
    if source == "capacity" {
        Ok(arimoto_blahut(w, cli.tol, DEFAULT_MAX_ITER)?.sigma_star)
    } else {
        let sigma = read_state(Path::new(source))?;
        w.check_state(&sigma)?;
        Ok(sigma)
    }
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

fn emit_json(cli: &Cli, value: &Value) -> Outcome {
    emit(cli.out.as_deref(), &pretty(value))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => write_file(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(format!("cannot write output: {e}"))),
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}
