use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use envelope::analysis::CouplingMode;
use envelope_cli::run::EXIT_USAGE;
use envelope_cli::{parse_config, run, Command, RunError, SweepSpec};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Verb {
    Solve,
    Bounds,
    Critical,
    Perturb,
    Baryon,
    Bosonstar,
    Minlength,
    Sweep,
    Oracle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Onebody,
    Twobody,
}

/// Envelope-theory estimates for systems of identical particles.
#[derive(Debug, Parser)]
#[command(name = "envelope", version)]
struct Cli {
    #[arg(value_enum)]
    verb: Verb,
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Swept parameter: `section.key`, or n, d, q.
    #[arg(long)]
    param: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

fn command(cli: &Cli) -> Result<Command, RunError> {
    Ok(match cli.verb {
        Verb::Solve => Command::Solve,
        Verb::Bounds => Command::Bounds,
        Verb::Critical => Command::Critical(match cli.mode {
            Some(Mode::Onebody) => CouplingMode::OneBody,
            Some(Mode::Twobody) => CouplingMode::TwoBody,
            None => return Err(RunError::usage("critical needs --mode onebody|twobody")),
        }),
        Verb::Perturb => Command::Perturb,
        Verb::Baryon => Command::Baryon,
        Verb::Bosonstar => Command::BosonStar,
        Verb::Minlength => Command::MinLength,
        Verb::Oracle => Command::Oracle,
        Verb::Sweep => match (&cli.param, cli.from, cli.to) {
            (Some(param), Some(from), Some(to)) => Command::Sweep(SweepSpec {
                param: param.clone(),
                from,
                to,
                steps: cli.steps,
            }),
            _ => return Err(RunError::usage("sweep needs --param, --from and --to")),
        },
    })
}

fn execute(cli: &Cli) -> Result<(), RunError> {
    let cmd = command(cli)?;
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| RunError::usage(format!("cannot read {}: {e}", cli.config.display())))?;
    let cfg = parse_config(&text)?;
    let csv = run(&cfg, &cmd)?.to_csv();
    match &cli.out {
        Some(path) => fs::write(path, csv)
            .map_err(|e| RunError::usage(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|e| RunError::usage(format!("cannot write output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("envelope: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
