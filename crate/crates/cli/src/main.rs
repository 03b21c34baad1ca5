use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lojbound::bounds::{bracket, upper_bound, BoundConfig, BoundReport};
use lojbound::dualfan::{fan_vertices, jacobian_diagram_capped};
use lojbound::nondeg::{Verdict, VerdictStatus};
use lojbound::report;
use lojbound::{parse, Error, MixedFunction};
use serde_json::Value;

const EXIT_DEGENERATE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "lojbound", version, about = "Bounds for the Lojasiewicz gradient exponent of polynomial germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: support, convenience, fan, invariants, verdicts and bound.
    Analyze(Opts),
    /// Certified upper bound only.
    Bound(Opts),
    /// Upper bound bracketed by a sampled lower bound (needs --seed).
    Verify(Opts),
    /// Fan vertices and their classification.
    Fan(Opts),
    /// Non-degeneracy verdicts only (needs --seed).
    Check(Opts),
}

#[derive(Args)]
struct Opts {
    /// Polynomial in z1, z2, ... with ~zk for the conjugate of zk.
    expr: Option<String>,
    /// Read the expression from a file; `#` starts a comment.
    #[arg(long, conflicts_with = "expr")]
    file: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sampled curves.
    #[arg(long, default_value_t = 2000)]
    budget: usize,
    #[arg(long, default_value_t = 50)]
    max_weight: u32,
    #[arg(long, default_value_t = 64)]
    nd_starts: usize,
    #[arg(long, default_value_t = 200)]
    nd_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    nd_tol: f64,
    /// Skip the non-degeneracy checks and bound anyway.
    #[arg(long)]
    assume_nondegenerate: bool,
    /// Show the Jacobian refinement instead of the plain fan.
    #[arg(long)]
    jacobian: bool,
}

impl Opts {
    fn config(&self) -> BoundConfig {
        let mut cfg = BoundConfig::with_seed(self.seed.unwrap_or(0));
        cfg.nondeg.starts = self.nd_starts;
        cfg.nondeg.iters = self.nd_iters;
        cfg.nondeg.tol = self.nd_tol;
        cfg.sampler.curves = self.budget;
        cfg.sampler.max_weight = self.max_weight;
        cfg.assume_nondegenerate = self.assume_nondegenerate;
        cfg
    }

    fn function(&self) -> Result<MixedFunction, String> {
        let text = match (&self.expr, &self.file) {
            (Some(e), None) => e.clone(),
            (None, Some(path)) => {
                let raw = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                raw.lines()
                    .map(|l| l.split('#').next().unwrap_or(""))
                    .collect::<Vec<_>>()
                    .join(" ")
            }
            _ => return Err("give an expression or --file".into()),
        };
        parse(&text, None).map_err(|e| format!("invalid expression: {e}"))
    }
}

struct Output {
    json: bool,
}

impl Output {
    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
        let out = if self.json { serde_json::to_string_pretty(&value()).expect("serializable") } else { text() };
        write_stdout(&out);
    }

    fn fail(&self, err: &Error) -> ExitCode {
        eprintln!("error: {err}");
        if self.json {
            write_stdout(&serde_json::to_string_pretty(&report::error_json(err)).expect("serializable"));
        }
        ExitCode::from(exit_code(err))
    }
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn write_stdout(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Degenerate(_) => EXIT_DEGENERATE,
        _ => EXIT_UNSUPPORTED,
    }
}

fn bound_exit(out: &Output, r: Result<BoundReport, Error>) -> ExitCode {
    match r {
        Ok(r) => {
            out.emit(|| report::bound_text(&r), || report::bound_json(&r));
            ExitCode::SUCCESS
        }
        Err(e) => out.fail(&e),
    }
}

fn verdict_exit(verdicts: &[Result<Verdict, Error>]) -> ExitCode {
    let statuses: Vec<Option<VerdictStatus>> = verdicts.iter().map(|v| v.as_ref().ok().map(|v| v.status)).collect();
    if statuses.contains(&Some(VerdictStatus::DegenerateWitness)) {
        ExitCode::from(EXIT_DEGENERATE)
    } else if statuses.iter().all(|s| *s == Some(VerdictStatus::PresumedOk)) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNSUPPORTED)
    }
}

fn run(cli: Cli) -> ExitCode {
    let (Command::Analyze(opts) | Command::Bound(opts) | Command::Verify(opts) | Command::Fan(opts) | Command::Check(opts)) = &cli.command;
    let out = Output { json: opts.json };
    if matches!(cli.command, Command::Verify(_) | Command::Check(_)) && opts.seed.is_none() {
        eprintln!("error: --seed is required for this command");
        return ExitCode::from(EXIT_UNSUPPORTED);
    }
    let f = match opts.function() {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_UNSUPPORTED);
        }
    };
    let cfg = opts.config();
    match &cli.command {
        Command::Bound(_) => bound_exit(&out, upper_bound(&f, &cfg)),
        Command::Verify(_) => bound_exit(&out, bracket(&f, &cfg)),
        Command::Analyze(_) => {
            let a = report::analyze(&f, &cfg, false);
            out.emit(|| report::analysis_text(&a), || report::analysis_json(&a));
            match &a.bound {
                Ok(_) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code(e))
                }
            }
        }
        Command::Fan(_) if opts.jacobian => match jacobian_diagram_capped(&f, cfg.minkowski_cap) {
            Ok(d) => {
                out.emit(|| report::jacobian_text(&f, &d), || report::jacobian_json(&f, &d));
                ExitCode::SUCCESS
            }
            Err(e) => out.fail(&e),
        },
        Command::Fan(_) => match fan_vertices(&f) {
            Ok(v) => {
                out.emit(|| report::fan_text(&f, &v), || report::fan_json(&f, &v));
                ExitCode::SUCCESS
            }
            Err(e) => out.fail(&e),
        },
        Command::Check(_) => {
            let verdicts = report::check_verdicts(&f, &cfg);
            out.emit(|| report::verdicts_text(&verdicts), || report::verdicts_json(&verdicts));
            verdict_exit(&verdicts)
        }
    }
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_UNSUPPORTED } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
