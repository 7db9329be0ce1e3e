use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nu_spectra::cli::{
    cmd_figure_overlay, cmd_list, cmd_molecules, cmd_spectrum, cmd_tables, cmd_verify,
    cmd_wavefunction, parse_params, CmdError, OutputFormat,
};

/// Closed-form bound-state spectra and normalized wavefunctions for the
/// classic exactly solvable potentials, cross-checked by finite-difference
/// and quadrature oracles.
#[derive(Parser)]
#[command(name = "nu-spectra", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form energy levels of a potential.
    Spectrum {
        #[arg(long)]
        potential: String,
        /// Repeatable key=value parameter assignments.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Level range `a..b` (inclusive) or a single index.
        #[arg(long, default_value = "0..4")]
        levels: String,
        #[arg(long, default_value = "json")]
        format: String,
        /// Output file (stdout when omitted).
        #[arg(long)]
        output: Option<String>,
    },
    /// Sampled normalized wavefunctions on a uniform grid.
    Wavefunction {
        #[arg(long)]
        potential: String,
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long, default_value = "0")]
        levels: String,
        /// Sampling window `lo..hi` in the physical coordinate.
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value_t = 601)]
        points: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<String>,
        /// Emit the potential-curve overlay (screened well vs its matched
        /// exponential well) instead of wavefunction samples.
        #[arg(long, default_value_t = false)]
        potential_overlay: bool,
    },
    /// Run a verification scope and report each check.
    Verify {
        #[arg(long, default_value = "all")]
        scope: String,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Reduction rows recomputed at each entry's reference instances.
    Tables {
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Spectroscopic molecule rows with recomputed matching parameters.
    Molecules {
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        output: Option<String>,
    },
    /// List every catalog entry and its parameter schema.
    List,
}

fn write_out(output: Option<&str>, content: &str) -> Result<(), CmdError> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CmdError { exit_code: 2, message: format!("cannot write {path}: {e}") }),
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| CmdError { exit_code: 2, message: e.to_string() })
        }
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, CmdError> {
    OutputFormat::parse(s)
        .ok_or_else(|| CmdError::invalid(format!("unknown format `{s}` (json or csv)")))
}

fn tolerance_scale() -> f64 {
    std::env::var("NU_SPECTRA_TOL")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|v| v.is_finite() && *v > 0.0)
        .unwrap_or(1.0)
}

fn run() -> Result<i32, CmdError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Spectrum { potential, params, levels, format, output } => {
            let params = parse_params(&params)?;
            let text = cmd_spectrum(&potential, &params, &levels, parse_format(&format)?)?;
            write_out(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Wavefunction {
            potential,
            params,
            levels,
            grid,
            points,
            format,
            output,
            potential_overlay,
        } => {
            let params = parse_params(&params)?;
            let text = if potential_overlay {
                if potential != "modified_hulthen" {
                    return Err(CmdError::invalid(
                        "--potential-overlay is defined for the modified_hulthen entry".into(),
                    ));
                }
                cmd_figure_overlay(&params, &grid, points)?
            } else {
                cmd_wavefunction(&potential, &params, &levels, &grid, points, parse_format(&format)?)?
            };
            write_out(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Verify { scope, format, output } => {
            let format = format.map(|f| parse_format(&f)).transpose()?;
            let (text, exit) = cmd_verify(&scope, format, tolerance_scale());
            write_out(output.as_deref(), &text)?;
            Ok(exit)
        }
        Command::Tables { potential, output } => {
            let text = cmd_tables(potential.as_deref())?;
            write_out(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Molecules { format, output } => {
            let format = format.map(|f| parse_format(&f)).transpose()?;
            let text = cmd_molecules(format);
            write_out(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::List => {
            write_out(None, &cmd_list())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code as u8)
        }
    }
}
