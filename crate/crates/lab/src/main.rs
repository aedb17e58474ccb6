use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use revival_lab::{exit, run, Command, LabError, ScenarioConfig};

#[derive(Parser, Debug)]
#[command(version, about = "Wave-packet revival experiments driven by a scenario file")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Scenario file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// |r|, |a1|, |a2| and the envelope on a time grid.
    Simulate,
    /// All period families and a commensurability diagnosis.
    Periods,
    /// Remainder sup-errors over the h sweep and fitted slopes.
    Convergence,
    /// Continued fraction of T_cl1/T_cl2, approach times, near-revival set.
    Cf,
    /// Resonance, coefficient table and reconstruction residual.
    Revival,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Simulate => Command::Simulate,
            Cmd::Periods => Command::Periods,
            Cmd::Convergence => Command::Convergence,
            Cmd::Cf => Command::Cf,
            Cmd::Revival => Command::Revival,
        }
    }
}

fn real_main(cli: Cli) -> Result<(), LabError> {
    let path = cli
        .config
        .ok_or_else(|| LabError::Usage("--config <path> is required".into()))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| LabError::Usage(e.to_string()))?;
    let cfg = ScenarioConfig::from_path(&path)?;
    let summary = run(cli.cmd.into(), &cfg, &cli.out)?;
    print!("{}", summary.report);
    for f in &summary.files {
        println!("wrote {}", cli.out.join(f).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::USAGE as u8
            } else {
                exit::OK as u8
            });
        }
    };
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("revival-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
