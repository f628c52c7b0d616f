//! Command-line interface. Exit status: 0 success, 1 negative answer
//! (invalid structure, not bisimilar, invalid trace, failed audit), 2 bad
//! input or usage.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::dot::export_dot;
use super::format::{
    parse_configuration, parse_raw, parse_rpes, parse_trace, serialize_rpes, RpesDocument,
};
use super::gen::{gen_rpes, GenMode, GenParams};
use crate::equiv::{audit_semantics, check_bisimulation, check_isomorphism, AuditOptions};
use crate::kernel::{is_causal, is_cause_respecting, sustained_causation, validate_rpes, Rpes};
use crate::residual::{build_te, remove_trace, RemovalError};
use crate::stepsem::{
    build_tc, enumerate_steps, forwards_reachable_configs, label_unchecked, reachable_configs,
    validate_trace, Lts,
};

#[derive(Parser, Debug)]
#[command(
    name = "rpes",
    version,
    about = "Reversible prime event structures: semantics and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum System {
    Tc,
    Te,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every axiom and list the violations.
    Validate { file: PathBuf },
    /// Report whether the structure is cause-respecting and causal.
    Classify { file: PathBuf },
    /// List the reachable configurations.
    Configs {
        file: PathBuf,
        #[arg(long)]
        forward_only: bool,
    },
    /// List the nonempty steps enabled at a configuration.
    Steps {
        file: PathBuf,
        /// Configuration such as `{a,b}`.
        #[arg(long)]
        at: String,
    },
    /// Print the configuration transition system.
    Tc {
        file: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the residual transition system.
    Te {
        file: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the residual after a trace such as `a,b|` or `b;d;|b`.
    Residual { file: PathBuf, trace: String },
    /// Print the configurations visited by a trace.
    Trace { file: PathBuf, trace: String },
    /// Compare the two transition systems of one file, or one system of two.
    Bisim {
        file: PathBuf,
        other: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "tc")]
        system: System,
    },
    /// Look for an isomorphism, same argument conventions as `bisim`.
    Iso {
        file: PathBuf,
        other: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "tc")]
        system: System,
    },
    /// Run the bounded semantic checks.
    Audit {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_step: Option<usize>,
        /// Keep every trace instead of one per (configuration, residual).
        #[arg(long)]
        exhaustive: bool,
        /// Counterexamples printed per property.
        #[arg(long, default_value_t = 5)]
        show: usize,
    },
    /// Print a random structure.
    Gen {
        #[arg(long)]
        events: usize,
        #[arg(long, default_value = "any")]
        mode: GenMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        causality: f64,
        #[arg(long, default_value_t = 0.2)]
        conflict: f64,
        #[arg(long, default_value_t = 0.5)]
        reversible: f64,
        #[arg(long, default_value_t = 0.3)]
        prevention: f64,
        #[arg(long, default_value_t = 0.1)]
        revcause: f64,
        #[arg(long, default_value_t = 0.0)]
        init: f64,
        #[arg(long)]
        name: Option<String>,
    },
}

/// Input problem; reported on stderr with exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<i32, InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<RpesDocument, InputError> {
    parse_rpes(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write_dot(path: &Path, lts: &Lts, name: &str) -> Result<(), InputError> {
    std::fs::write(path, export_dot(lts, name))
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn system_of(r: &Rpes, system: System) -> Lts {
    match system {
        System::Tc => build_tc(r),
        System::Te => build_te(r),
    }
}

/// The two systems compared by `bisim` and `iso`.
fn pair(file: &Path, other: Option<&Path>, system: System) -> Result<(Lts, Lts), InputError> {
    let first = load(file)?.rpes;
    Ok(match other {
        None => (build_tc(&first), build_te(&first)),
        Some(path) => (
            system_of(&first, system),
            system_of(&load(path)?.rpes, system),
        ),
    })
}

/// Runs the command line `args` (program name first), writing to `out` and
/// `err`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Validate { file } => {
            let (_, raw) = parse_raw(&read(&file)?)
                .map_err(|e| InputError(format!("{}: {e}", file.display())))?;
            let report =
                validate_rpes(&raw).map_err(|e| InputError(format!("{}: {e}", file.display())))?;
            write!(out, "{report}")?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::Classify { file } => {
            let r = load(&file)?.rpes;
            let u = r.universe();
            let sustained: Vec<String> = sustained_causation(&r)
                .into_iter()
                .map(|(a, b)| format!("({},{})", u.id(a), u.id(b)))
                .collect();
            writeln!(out, "cause-respecting: {}", is_cause_respecting(&r))?;
            writeln!(out, "causal: {}", is_causal(&r))?;
            writeln!(out, "sustained-causation: {{{}}}", sustained.join(","))?;
            Ok(0)
        }
        Command::Configs { file, forward_only } => {
            let r = load(&file)?.rpes;
            let configs = if forward_only {
                forwards_reachable_configs(&r)
            } else {
                reachable_configs(&r)
            };
            for c in configs {
                writeln!(out, "{}", c.display(r.universe()))?;
            }
            Ok(0)
        }
        Command::Steps { file, at } => {
            let r = load(&file)?.rpes;
            let c = parse_configuration(r.universe(), &at)?;
            r.check_events(c.events())?;
            if !r.is_conflict_free(c.events()) {
                return Err(InputError(format!(
                    "{} is not conflict-free",
                    c.display(r.universe())
                )));
            }
            for s in enumerate_steps(&r, c, None) {
                writeln!(
                    out,
                    "{} {}",
                    s.display(r.universe()),
                    label_unchecked(&r, s)
                )?;
            }
            Ok(0)
        }
        Command::Tc { file, dot } => {
            let doc = load(&file)?;
            let lts = build_tc(&doc.rpes);
            if let Some(path) = dot {
                write_dot(&path, &lts, &format!("tc_{}", doc.name))?;
            }
            write!(out, "{lts}")?;
            Ok(0)
        }
        Command::Te { file, dot } => {
            let doc = load(&file)?;
            let lts = build_te(&doc.rpes);
            if let Some(path) = dot {
                write_dot(&path, &lts, &format!("te_{}", doc.name))?;
            }
            write!(out, "{lts}")?;
            Ok(0)
        }
        Command::Residual { file, trace } => {
            let doc = load(&file)?;
            let t = parse_trace(doc.rpes.universe(), &trace)?;
            match remove_trace(&doc.rpes, &t) {
                Ok(res) => {
                    write!(out, "{}", serialize_rpes(&doc.name, &res))?;
                    Ok(0)
                }
                Err(RemovalError::InvalidTrace(e)) => {
                    writeln!(out, "not a trace: {e}")?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Trace { file, trace } => {
            let r = load(&file)?.rpes;
            let t = parse_trace(r.universe(), &trace)?;
            match validate_trace(&r, &t) {
                Ok(configs) => {
                    for c in configs {
                        writeln!(out, "{}", c.display(r.universe()))?;
                    }
                    Ok(0)
                }
                Err(e) => {
                    writeln!(out, "not a trace: {e}")?;
                    Ok(1)
                }
            }
        }
        Command::Bisim {
            file,
            other,
            system,
        } => {
            let (l1, l2) = pair(&file, other.as_deref(), system)?;
            let res = check_bisimulation(&l1, &l2);
            writeln!(out, "bisimilar: {}", res.bisimilar)?;
            if let Some(w) = &res.witness {
                writeln!(out, "relation: {} pairs", w.len())?;
                for (a, b) in w {
                    writeln!(out, "  {a} ~ {b}")?;
                }
            }
            if let Some(d) = &res.counterexample {
                let labels: Vec<String> = d.labels.iter().map(ToString::to_string).collect();
                writeln!(out, "distinguishing: {}", labels.join(" "))?;
                let side = if d.first_moves { "first" } else { "second" };
                writeln!(
                    out,
                    "diverging pair: {} / {} (only the {side} can move)",
                    d.pair.0, d.pair.1
                )?;
            }
            Ok(if res.bisimilar { 0 } else { 1 })
        }
        Command::Iso {
            file,
            other,
            system,
        } => {
            let (l1, l2) = pair(&file, other.as_deref(), system)?;
            let iso = check_isomorphism(&l1, &l2);
            writeln!(out, "isomorphic: {}", iso.is_some())?;
            if iso.is_none() {
                writeln!(out, "states: {} / {}", l1.num_states(), l2.num_states())?;
                writeln!(
                    out,
                    "transitions: {} / {}",
                    l1.num_transitions(),
                    l2.num_transitions()
                )?;
            }
            for (a, b) in iso.iter().flatten() {
                writeln!(out, "  {a} -> {b}")?;
            }
            Ok(if iso.is_some() { 0 } else { 1 })
        }
        Command::Audit {
            file,
            max_len,
            max_step,
            exhaustive,
            show,
        } => {
            let r = load(&file)?.rpes;
            let report = audit_semantics(
                &r,
                AuditOptions {
                    max_trace_len: max_len,
                    max_step_size: max_step,
                    exhaustive,
                },
            );
            write!(out, "{}", report.render(show))?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Gen {
            events,
            mode,
            seed,
            causality,
            conflict,
            reversible,
            prevention,
            revcause,
            init,
            name,
        } => {
            let params = GenParams {
                num_events: events,
                causality_density: causality,
                conflict_density: conflict,
                reversible_prob: reversible,
                prevention_density: prevention,
                extra_revcause_density: revcause,
                init_density: init,
                mode,
                seed,
            };
            let r = gen_rpes(&params)?;
            let name = name.unwrap_or_else(|| format!("gen_{seed}"));
            crate::kernel::EventId::new(name.clone())?;
            write!(out, "{}", serialize_rpes(&name, &r))?;
            Ok(0)
        }
    }
}
