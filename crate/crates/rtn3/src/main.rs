//! Command-line front end: sweep three-qubit entanglement and discord
//! measures over a (γt, r) grid and emit CSV.
//!
//! All options share one flat `key = value` namespace with the optional
//! config file; command-line flags are applied after the file, so they
//! override it. Exit codes: 0 success, 2 usage error, 3 I/O error,
//! 4 internal numerical error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;

use rtn3::sweep::{parse_config_file, resolve_config, run_sweep, write_csv};
use rtn3::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "rtn3",
    about = "Tripartite entanglement and discord of three qubits under random telegraph noise",
    disable_help_subcommand = true
)]
struct Cli {
    /// Initial state family: ghz | w
    #[arg(long)]
    family: Option<String>,

    /// Noise wiring: local (independent fluctuators) | common (one shared)
    #[arg(long)]
    coupling: Option<String>,

    /// Switching rate over coupling, γ/ν (ν is fixed to 1)
    #[arg(long, value_name = "RATIO", allow_negative_numbers = true)]
    gamma_ratio: Option<String>,

    /// Single purity value in [0, 1]; conflicts with the r-min/r-max/r-steps range
    #[arg(long, allow_negative_numbers = true)]
    r: Option<String>,

    /// Purity range start
    #[arg(long, allow_negative_numbers = true)]
    r_min: Option<String>,

    /// Purity range end
    #[arg(long, allow_negative_numbers = true)]
    r_max: Option<String>,

    /// Number of purity grid points
    #[arg(long)]
    r_steps: Option<String>,

    /// Largest dimensionless time γt (grid starts at 0)
    #[arg(long, allow_negative_numbers = true)]
    tmax: Option<String>,

    /// Number of time grid points
    #[arg(long)]
    steps: Option<String>,

    /// Comma-separated subset of negativity,witness,discord,totals
    #[arg(long)]
    measures: Option<String>,

    /// Evolution engine: analytic | mc | both
    #[arg(long)]
    engine: Option<String>,

    /// Monte Carlo ensemble size
    #[arg(long)]
    trajectories: Option<String>,

    /// Base RNG seed for the trajectory ensemble
    #[arg(long)]
    seed: Option<String>,

    /// Measurement-frame search grid points per angle
    #[arg(long)]
    grid_per_angle: Option<String>,

    /// Evaluate discord only every Nth grid index along both axes
    #[arg(long, value_name = "N")]
    discord_grid_stride: Option<String>,

    /// CSV output path (default: stdout)
    #[arg(long)]
    output: Option<String>,

    /// Config file of `key = value` lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    /// Flatten set flags into `(key, value)` entries, in the same namespace
    /// the config file uses.
    fn entries(&self) -> Vec<(String, String)> {
        let pairs: [(&str, &Option<String>); 16] = [
            ("family", &self.family),
            ("coupling", &self.coupling),
            ("gamma-ratio", &self.gamma_ratio),
            ("r", &self.r),
            ("r-min", &self.r_min),
            ("r-max", &self.r_max),
            ("r-steps", &self.r_steps),
            ("tmax", &self.tmax),
            ("steps", &self.steps),
            ("measures", &self.measures),
            ("engine", &self.engine),
            ("trajectories", &self.trajectories),
            ("seed", &self.seed),
            ("grid-per-angle", &self.grid_per_angle),
            ("discord-grid-stride", &self.discord_grid_stride),
            ("output", &self.output),
        ];
        pairs
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let mut entries = Vec::new();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("config file {}: {e}", path.display()),
            ))
        })?;
        entries.extend(parse_config_file(&text)?);
    }
    entries.extend(cli.entries());

    let cfg = resolve_config(&entries)?;
    let records = run_sweep(&cfg)?;

    match &cfg.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                Error::Io(std::io::Error::new(
                    e.kind(),
                    format!("output file {}: {e}", path.display()),
                ))
            })?;
            let mut out = BufWriter::new(file);
            write_csv(&records, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write_csv(&records, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
