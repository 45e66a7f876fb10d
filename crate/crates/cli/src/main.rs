use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nashforge::{
    emit_report, exit_code, hint, parse_variety_file, run_task, Format, Report, TaskKind, TaskOptions, EXIT_FAILURE,
    EXIT_INPUT, EXIT_OK,
};
use nashforge_core::Error;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TaskArg {
    NashCheck,
    #[value(name = "diffpower")]
    DiffPower,
    #[value(name = "pparts")]
    PParts,
    CoreChain,
    #[value(name = "fpure")]
    FPure,
    Kunz,
    Smooth,
    Quotient,
    Oracle,
    /// Run every `--input` file with the task named in its [task] section.
    Batch,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Exact invariants deciding whether a higher Nash blowup can be an isomorphism.
#[derive(Parser, Debug)]
#[command(name = "nashforge", version)]
struct Cli {
    task: TaskArg,

    /// Input file; repeat for `batch`.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,

    /// Order n (chain length for core-chain). Overrides the [task] section.
    #[arg(long)]
    order: Option<u32>,

    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,

    /// Rerun the jets oracle and other cross-checks; exit 1 on disagreement.
    #[arg(long)]
    verify: bool,

    /// Gröbner step budget.
    #[arg(long, env = "NASHFORGE_BUDGET")]
    budget: Option<u64>,

    /// Record elapsed milliseconds in `ms` (otherwise 0).
    #[arg(long)]
    timing: bool,
}

fn task_kind(t: TaskArg) -> Option<TaskKind> {
    Some(match t {
        TaskArg::NashCheck => TaskKind::NashCheck,
        TaskArg::DiffPower => TaskKind::DiffPower,
        TaskArg::PParts => TaskKind::PParts,
        TaskArg::CoreChain => TaskKind::CoreChain,
        TaskArg::FPure => TaskKind::FPure,
        TaskArg::Kunz => TaskKind::Kunz,
        TaskArg::Smooth => TaskKind::Smooth,
        TaskArg::Quotient => TaskKind::Quotient,
        TaskArg::Oracle => TaskKind::Oracle,
        TaskArg::Batch => return None,
    })
}

fn run_file(path: &Path, kind: Option<TaskKind>, opts: &TaskOptions) -> Result<Report, Error> {
    let input = parse_variety_file(path)?;
    let kind = match kind {
        Some(k) => k,
        None => input
            .task
            .kind
            .as_deref()
            .ok_or_else(|| Error::InvalidInput(format!("{} has no [task] kind", path.display())))?
            .parse()?,
    };
    run_task(&input, kind, opts)
}

fn report_error(e: &Error) {
    eprintln!("error: {e}");
    if let Some(h) = hint(e) {
        eprintln!("hint: {h}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let opts = TaskOptions {
        order: cli.order,
        verify: cli.verify,
        budget: cli.budget,
        timing: cli.timing,
    };
    let mut stdout = std::io::stdout().lock();

    let Some(kind) = task_kind(cli.task) else {
        return batch(&cli.input, format, &opts, &mut stdout);
    };
    if cli.input.len() != 1 {
        eprintln!("error: exactly one --input is expected for {kind}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    match run_file(&cli.input[0], Some(kind), &opts) {
        Ok(report) => {
            let _ = stdout.write_all(&emit_report(&report, format));
            if report.verification_failed() {
                eprintln!("error: --verify found a disagreement between independent computations");
                return ExitCode::from(EXIT_FAILURE as u8);
            }
            ExitCode::from(EXIT_OK as u8)
        }
        Err(e) => {
            report_error(&e);
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

/// Files run concurrently; output keeps the command-line order and the exit
/// code is the largest one seen.
fn batch(files: &[PathBuf], format: Format, opts: &TaskOptions, out: &mut impl Write) -> ExitCode {
    let results: Vec<Result<Report, Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(move || run_file(f, None, opts))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut code = EXIT_OK;
    let mut docs = Vec::new();
    for (file, r) in files.iter().zip(&results) {
        let name = file.display().to_string();
        match r {
            Ok(report) => {
                if report.verification_failed() {
                    code = code.max(EXIT_FAILURE);
                }
                match format {
                    Format::Json => docs.push(json!({"file": name, "report": report})),
                    Format::Text => {
                        let _ = writeln!(out, "== {name}");
                        let _ = out.write_all(&emit_report(report, format));
                    }
                }
            }
            Err(e) => {
                code = code.max(exit_code(e));
                match format {
                    Format::Json => {
                        docs.push(json!({"file": name, "error": e.to_string(), "exit": exit_code(e)}));
                    }
                    Format::Text => {
                        let _ = writeln!(out, "== {name}\nerror: {e}");
                    }
                }
            }
        }
    }
    if format == Format::Json {
        let mut bytes = serde_json::to_vec_pretty(&Value::Array(docs)).expect("reports serialize");
        bytes.push(b'\n');
        let _ = out.write_all(&bytes);
    }
    ExitCode::from(code as u8)
}
