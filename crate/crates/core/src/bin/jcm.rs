//! `jcm`: negativity series, parameter sweeps, figure presets and the
//! closed-form vs oracle verification report.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jcm_core::sweep::{run, RawConfig, SweepSpec};

/// Directory for output files when `--output` is not given.
const OUTPUT_DIR_ENV: &str = "JCM_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "jcm",
    version,
    about = "Atom-field negativity of a moving multi-photon Jaynes-Cummings model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Negativity against scaled time for one parameter set.
    Series(Flags),
    /// Negativity over time for each value of one swept parameter.
    Sweep2d(Flags),
    /// Closed form against the brute-force oracle on the verification grid.
    Verify(Flags),
    /// Figure presets: fig1..fig5, or single panels such as fig2b.
    Preset {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Runs whatever mode the configuration file asks for.
    Run(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// `key = value` configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (defaults to all cores); output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    cg: Option<String>,
    #[arg(long)]
    motion: Option<String>,
    #[arg(long = "gt_max_over_pi")]
    gt_max_over_pi: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long = "tail_eps")]
    tail_eps: Option<String>,
    #[arg(long = "sweep_param")]
    sweep_param: Option<String>,
    #[arg(long = "sweep_values")]
    sweep_values: Option<String>,
    #[arg(long)]
    output: Option<String>,
}

impl Flags {
    fn overrides(&self) -> [(&'static str, &Option<String>); 12] {
        [
            ("delta", &self.delta),
            ("m", &self.m),
            ("l", &self.l),
            ("p", &self.p),
            ("cg", &self.cg),
            ("motion", &self.motion),
            ("gt_max_over_pi", &self.gt_max_over_pi),
            ("points", &self.points),
            ("tail_eps", &self.tail_eps),
            ("sweep_param", &self.sweep_param),
            ("sweep_values", &self.sweep_values),
            ("output", &self.output),
        ]
    }
}

fn build_spec(
    flags: &Flags,
    mode: Option<&str>,
    preset: Option<&str>,
) -> jcm_core::Result<SweepSpec> {
    let mut raw = match &flags.config {
        Some(path) => RawConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RawConfig::default(),
    };
    if let Some(mode) = mode {
        raw.set("mode", mode)?;
    }
    if let Some(preset) = preset {
        raw.set("preset", preset)?;
    }
    for (key, value) in flags.overrides() {
        if let Some(v) = value {
            raw.set(key, v.as_str())?;
        }
    }
    let mut spec = SweepSpec::from_raw(&raw)?;
    if spec.output.is_none() {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            let ext = if spec.mode.name() == "verify" {
                "txt"
            } else {
                "csv"
            };
            spec.output = Some(PathBuf::from(dir).join(format!("{}.{ext}", spec.label())));
        }
    }
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (flags, mode, preset) = match &cli.command {
        Command::Series(f) => (f, Some("series"), None),
        Command::Sweep2d(f) => (f, Some("sweep2d"), None),
        Command::Verify(f) => (f, Some("verify"), None),
        Command::Preset { name, flags } => (flags, Some("preset"), Some(name.as_str())),
        Command::Run(f) => (f, None, None),
    };

    let spec = match build_spec(flags, mode, preset) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("jcm: {e}");
            return ExitCode::from(1);
        }
    };
    match run(&spec, flags.threads) {
        Ok(outcome) => {
            match &outcome.path {
                Some(path) => eprintln!("jcm: wrote {}", path.display()),
                None => print!("{}", outcome.text),
            }
            if outcome.exit_code() == 2 {
                eprintln!("jcm: verification failed");
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("jcm: {e}");
            ExitCode::from(1)
        }
    }
}
