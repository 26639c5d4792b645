use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use netdicke::config::Config;
use netdicke::error::{Error, Result};
use netdicke::figures;
use netdicke::output::{Dataset, Format};
use netdicke::sweep::{run_sweep, Subcommand, SweepSpec};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Solve,
    Boundary,
    Quantum,
    Stats,
    Netgen,
    Oracle,
    Figure,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

/// Mean-field sweeps, phase boundaries and exact small-system checks for the
/// Dicke-Ising model on annealed networks.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Configuration file (flat TOML with dotted keys).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set model.t=0.8`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output file; standard output when omitted or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Figure preset (fig2, fig3, fig4a, fig4b, fig5, fig6) for `figure`.
    #[arg(long)]
    id: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    for s in &cli.set {
        config.set(s)?;
    }
    if let Some(w) = cli.workers {
        config.set_number("run.workers", w as f64);
    }
    if let Some(s) = cli.seed {
        config.set_number("run.seed", s as f64);
    }
    let format = match cli.format {
        Some(OutFormat::Csv) => Format::Csv,
        Some(OutFormat::Json) => Format::Json,
        None => config.text("output.format")?.map_or(Ok(Format::Csv), str::parse)?,
    };

    let data = match cli.command {
        Command::Figure => {
            let id = match (&cli.id, config.text("figure.id")?) {
                (Some(id), _) => id.clone(),
                (None, Some(id)) => id.to_owned(),
                (None, None) => return Err(Error::field("figure.id", "missing (pass --id)")),
            };
            // Overrides apply to every series of the preset.
            let overrides: Vec<String> = cli
                .set
                .iter()
                .filter(|s| !s.trim_start().starts_with("figure."))
                .cloned()
                .collect();
            let figure = figures::load(&id, &overrides)?;
            figures::run(&figure, cli.workers)?
        }
        other => {
            let sub = match other {
                Command::Solve => Subcommand::Solve,
                Command::Boundary => Subcommand::Boundary,
                Command::Quantum => Subcommand::Quantum,
                Command::Stats => Subcommand::Stats,
                Command::Netgen => Subcommand::Netgen,
                Command::Oracle => Subcommand::Oracle,
                Command::Figure => unreachable!(),
            };
            run_sweep(&SweepSpec::from_config(sub, config)?)?
        }
    };
    report(&data);
    emit(&data, cli.out.as_deref(), format)
}

fn report(data: &Dataset) {
    for (k, v) in &data.metadata {
        if k == "warning" || k.ends_with(".warning") {
            eprintln!("warning: {v}");
        }
    }
    let failed = data.failed_rows();
    if failed > 0 {
        eprintln!("warning: {failed} of {} rows failed (see the error column)", data.rows.len());
    }
}

fn emit(data: &Dataset, out: Option<&std::path::Path>, format: Format) -> Result<()> {
    match out {
        Some(path) if path != std::path::Path::new("-") => data.write(path, format),
        _ => {
            let text = match format {
                Format::Csv => data.to_csv(),
                Format::Json => data.to_json(),
            };
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}
