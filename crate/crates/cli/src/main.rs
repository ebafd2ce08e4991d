//! `haem`: check, normalize, trace and extract witnesses from `.haem` files.
//!
//! Exit codes: 0 success, 1 check failure, 2 parse or I/O failure,
//! 3 blocked (fuel exhausted or an extraction hypothesis violated),
//! 4 internal kernel defect.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use haem::branch::{open_normal_form, principal_branches};
use haem::derivation::check;
use haem::dsl::{parse, print_derivation, ProofEntry, ProofFile};
use haem::extract::{extract, ExtractError, ExtractionResult};
use haem::reduce::{normalize, Config, Normalization, Status, TraceStep, DEFAULT_FUEL};
use haem::Derivation;

const OK: u8 = 0;
const CHECK_FAILED: u8 = 1;
const PARSE_FAILED: u8 = 2;
const BLOCKED: u8 = 3;
const DEFECT: u8 = 4;

#[derive(Parser)]
#[command(name = "haem", version, about = "Normalize HA + EM1 derivations and extract witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Clone)]
struct Opts {
    /// Step budget for normalization (term-normalization steps included).
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Enable the optional permutation and simplification reductions.
    #[arg(long, global = true)]
    extensions: bool,
    /// Also write the reduction trace to this file.
    #[arg(long, global = true, value_name = "PATH")]
    trace_out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check every derivation in a file.
    Check { file: PathBuf },
    /// Normalize one derivation (or all) and print the normal form.
    Normalize { file: PathBuf, name: Option<String> },
    /// Normalize and read off the witness.
    Extract { file: PathBuf, name: Option<String> },
    /// Print every reduction step, then the branch report of the result.
    Trace { file: PathBuf, name: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = cli.opts;
    let code = match cli.command {
        Command::Check { file } => with_file(&file, |pf| cmd_check(pf, &opts)),
        Command::Normalize { file, name } => with_file(&file, |pf| each(pf, name, &opts, cmd_normalize)),
        Command::Extract { file, name } => with_file(&file, |pf| each(pf, name, &opts, cmd_extract)),
        Command::Trace { file, name } => with_file(&file, |pf| each(pf, name, &opts, cmd_trace)),
    };
    ExitCode::from(code)
}

fn with_file(path: &Path, run: impl FnOnce(&ProofFile) -> u8) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return PARSE_FAILED;
        }
    };
    match parse(&text) {
        Ok(pf) => run(&pf),
        Err(e) => {
            eprintln!("{}:{e}", path.display());
            PARSE_FAILED
        }
    }
}

fn emit(opts: &Opts, text: String, value: Value) {
    match opts.format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{value}"),
    }
}

/// Checks an entry, reporting the violation with its source position.
fn checked(entry: &ProofEntry, pf: &ProofFile, opts: &Opts) -> bool {
    match check(&entry.derivation, &pf.theory) {
        Ok(()) => true,
        Err(e) => {
            let span = entry.span_of(e.address()).map(|s| s.to_string()).unwrap_or_else(|| "?".into());
            emit(
                opts,
                format!("{}: error at {span}: {e}", entry.name),
                json!({"name": entry.name, "ok": false, "span": span, "address": e.address().to_string(), "error": e.to_string()}),
            );
            false
        }
    }
}

fn cmd_check(pf: &ProofFile, opts: &Opts) -> u8 {
    let mut code = OK;
    for entry in &pf.proofs {
        if checked(entry, pf, opts) {
            emit(opts, format!("{}: ok", entry.name), json!({"name": entry.name, "ok": true}));
        } else {
            code = CHECK_FAILED;
        }
    }
    code
}

type Cmd = fn(&ProofEntry, &ProofFile, &Opts) -> u8;

/// Runs `cmd` on the named proof, or on every proof in file order; the
/// exit code is the largest one seen.
fn each(pf: &ProofFile, name: Option<String>, opts: &Opts, cmd: Cmd) -> u8 {
    let entries: Vec<&ProofEntry> = match &name {
        Some(n) => match pf.proof(n) {
            Some(e) => vec![e],
            None => {
                eprintln!("no proof named `{n}`");
                return PARSE_FAILED;
            }
        },
        None => pf.proofs.iter().collect(),
    };
    if opts.trace_out.is_some() {
        // Each command appends; start from an empty file.
        if let Err(code) = write_trace(opts, "", &[], false) {
            return code;
        }
    }
    let mut code = OK;
    for entry in entries {
        let c = if checked(entry, pf, opts) { cmd(entry, pf, opts) } else { CHECK_FAILED };
        code = code.max(c);
    }
    code
}

fn config(opts: &Opts) -> Config {
    Config { fuel: opts.fuel, extensions: opts.extensions }
}

fn trace_lines(trace: &[TraceStep]) -> Vec<String> {
    trace.iter().enumerate().map(|(i, s)| format!("{} {s}", i + 1)).collect()
}

fn write_trace(opts: &Opts, name: &str, trace: &[TraceStep], append: bool) -> Result<(), u8> {
    use std::io::Write;
    let Some(path) = &opts.trace_out else { return Ok(()) };
    let file = std::fs::OpenOptions::new().create(true).write(true).append(append).truncate(!append).open(path);
    let result = file.and_then(|mut f| {
        if !name.is_empty() {
            writeln!(f, "# {name}")?;
        }
        for line in trace_lines(trace) {
            writeln!(f, "{line}")?;
        }
        Ok(())
    });
    result.map_err(|e| {
        eprintln!("{}: {e}", path.display());
        PARSE_FAILED
    })
}

fn run_normalize(entry: &ProofEntry, pf: &ProofFile, opts: &Opts) -> Result<Normalization, u8> {
    let n = normalize(&entry.derivation, &pf.theory, config(opts)).map_err(|e| {
        eprintln!("{}: {e}", entry.name);
        DEFECT
    })?;
    write_trace(opts, &entry.name, &n.trace, true)?;
    Ok(n)
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Normal => OK,
        Status::FuelExhausted => BLOCKED,
    }
}

fn cmd_normalize(entry: &ProofEntry, pf: &ProofFile, opts: &Opts) -> u8 {
    let n = match run_normalize(entry, pf, opts) {
        Ok(n) => n,
        Err(c) => return c,
    };
    let printed = print_derivation(&n.derivation);
    emit(
        opts,
        format!("{}: {} after {} steps\n{printed}", entry.name, n.status, n.trace.len()),
        json!({"name": entry.name, "status": n.status.to_string(), "steps": n.trace.len(), "derivation": printed}),
    );
    status_code(n.status)
}

fn branch_report(d: &Derivation) -> Vec<(String, Option<String>)> {
    principal_branches(d)
        .iter()
        .map(|b| (b.to_string(), open_normal_form(d, b).map(|o| o.to_string())))
        .collect()
}

fn cmd_trace(entry: &ProofEntry, pf: &ProofFile, opts: &Opts) -> u8 {
    let n = match run_normalize(entry, pf, opts) {
        Ok(n) => n,
        Err(c) => return c,
    };
    let report = branch_report(&n.derivation);
    let mut text = vec![format!("# {}", entry.name)];
    text.extend(trace_lines(&n.trace));
    text.push(n.status.to_string());
    for (i, (b, onf)) in report.iter().enumerate() {
        text.push(format!("branch {i}: {b} {}", onf.as_deref().unwrap_or("not-onf")));
    }
    let steps: Vec<Value> = n
        .trace
        .iter()
        .map(|s| json!({"kind": s.kind.to_string(), "address": s.address.to_string(), "note": s.note}))
        .collect();
    let branches: Vec<Value> = report.iter().map(|(b, onf)| json!({"branch": b, "onf": onf})).collect();
    emit(
        opts,
        text.join("\n"),
        json!({"name": entry.name, "steps": steps, "status": n.status.to_string(), "branches": branches}),
    );
    status_code(n.status)
}

fn cmd_extract(entry: &ProofEntry, pf: &ProofFile, opts: &Opts) -> u8 {
    let e = match extract(&entry.derivation, &pf.theory, config(opts)) {
        Ok(e) => e,
        Err(ExtractError::Check(e)) => {
            eprintln!("{}: {e}", entry.name);
            return CHECK_FAILED;
        }
        Err(e) => {
            eprintln!("{}: {e}", entry.name);
            return DEFECT;
        }
    };
    if let Err(c) = write_trace(opts, &entry.name, &e.trace, true) {
        return c;
    }
    let steps = e.trace.len();
    let (value, code) = match &e.result {
        ExtractionResult::Witness { value, instance } => (
            json!({"name": entry.name, "result": "witness", "value": value, "instance": instance.to_string(), "steps": steps}),
            OK,
        ),
        ExtractionResult::AtomicProof(_) => (json!({"name": entry.name, "result": "atomic", "steps": steps}), OK),
        ExtractionResult::Blocked(r) => (
            json!({"name": entry.name, "result": "blocked", "reason": r.to_string(), "steps": steps}),
            BLOCKED,
        ),
    };
    emit(opts, format!("{}: {}", entry.name, e.result), value);
    code
}
