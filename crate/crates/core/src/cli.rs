//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::engine::output::{write_run, write_sweep};
use crate::engine::{run_batch, run_sweep, RunOptions, SweepSpec, TraceOptions};
use crate::error::{Result, SimError};
use crate::kpi::{read_event_log, replay_events, KpiReport};
use crate::scenario::{load_config_with_overrides, ScenarioConfig, UeModel};

#[derive(Debug, Parser)]
#[command(
    name = "mpue-sim",
    version,
    about = "Mobility simulator for multi-panel UEs in a multi-beam FR2 network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one configuration and write its KPI report and event log.
    Run(RunArgs),
    /// Simulate a grid of handover offsets, TTTs, k_b values and schemes.
    Sweep(SweepArgs),
    /// Recompute the KPI counters from an event log.
    Replay(ReplayArgs),
    /// Parse and validate a configuration file.
    ValidateConfig(ValidateArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// TOML configuration file; omitted keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, e.g. `--set o_a3_db=3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Use the reduced preset (100 UEs, 30 s).
    #[arg(long)]
    desk_scale: bool,
    #[arg(long)]
    no_fast_fading: bool,
    #[arg(long)]
    no_shadow_fading: bool,
    /// Worker threads.
    #[arg(long = "parallel", value_name = "N", default_value_t = 1)]
    parallel: usize,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Random seed; defaults to `rng_seed` of the configuration.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trace_motion: bool,
    #[arg(long)]
    trace_links: bool,
    #[arg(long)]
    trace_meas: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Handover offsets in dB.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])]
    o_a3: Vec<f64>,
    /// Time-to-trigger values in ms.
    #[arg(long, value_delimiter = ',', default_values_t = [80.0, 160.0, 240.0, 320.0])]
    t_ttt: Vec<f64>,
    /// Scheduled beams per cell.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4])]
    k_b: Vec<usize>,
    /// UE schemes: isotropic, mpue_a3, mpue_a1.
    #[arg(long, value_delimiter = ',', default_values_t = UeModel::ALL.map(|m| m.to_string()))]
    schemes: Vec<String>,
    /// Seeds; defaults to `rng_seed` of the configuration.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// Event log written by `run`.
    log: PathBuf,
    /// Report to compare against; a mismatch exits nonzero.
    #[arg(long)]
    compare: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    config: PathBuf,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn read_source(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => Ok(String::new()),
    }
}

impl ConfigArgs {
    fn load(&self) -> Result<ScenarioConfig> {
        let source = read_source(self.config.as_deref())?;
        let mut cfg = load_config_with_overrides(&source, &self.overrides)?;
        if self.desk_scale {
            cfg = cfg.desk_scale();
        }
        if self.no_fast_fading {
            cfg.fast_fading = false;
        }
        if self.no_shadow_fading {
            cfg.shadow_fading = false;
        }
        if self.parallel == 0 {
            return Err(SimError::invalid("parallel", "must be at least 1"));
        }
        Ok(cfg)
    }
}

fn cmd_run(a: &RunArgs) -> Result<()> {
    let mut cfg = a.cfg.load()?;
    if let Some(s) = a.seed {
        cfg.rng_seed = s;
    }
    let traces = TraceOptions {
        motion: a.trace_motion,
        links: a.trace_links,
        meas: a.trace_meas,
    };
    let opts = RunOptions {
        parallelism: a.cfg.parallel,
        keep_events: true,
        traces,
    };
    let out = run_batch(std::slice::from_ref(&cfg), cfg.rng_seed, &opts)?;
    let run = &out.runs[0];
    let files = write_run(&a.cfg.out_dir, run, &out.traces, traces)?;
    print!("{}", run.report.to_csv());
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let cfg = a.cfg.load()?;
    let schemes = a
        .schemes
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<UeModel>>>()?;
    let spec = SweepSpec {
        o_a3_db: a.o_a3.clone(),
        t_ttt_ms: a.t_ttt.clone(),
        k_b: a.k_b.clone(),
        schemes,
        seeds: if a.seeds.is_empty() {
            vec![cfg.rng_seed]
        } else {
            a.seeds.clone()
        },
    };
    let result = run_sweep(&cfg, &spec, a.cfg.parallel)?;
    let files = write_sweep(&a.cfg.out_dir, &result)?;
    print!("{}", result.to_csv());
    for r in result.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "point {} failed: {}",
            r.kpi.to_csv(),
            r.error.as_deref().unwrap_or_default()
        );
    }
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn cmd_replay(a: &ReplayArgs) -> Result<bool> {
    let log = read_event_log(BufReader::new(fs::File::open(&a.log)?))?;
    let report = replay_events(&log);
    println!("{}", report.to_json());
    match &a.compare {
        None => Ok(true),
        Some(p) => {
            let original: KpiReport = serde_json::from_str(&fs::read_to_string(p)?)?;
            let same = original == report;
            eprintln!(
                "replay {} {}",
                if same { "matches" } else { "differs from" },
                p.display()
            );
            Ok(same)
        }
    }
}

fn cmd_validate(a: &ValidateArgs) -> Result<()> {
    let source = fs::read_to_string(&a.config)?;
    let cfg = load_config_with_overrides(&source, &a.overrides)?;
    println!("ok {}", cfg.hash());
    Ok(())
}

fn schema_help() -> String {
    format!(
        "configuration keys and defaults:\n{}",
        ScenarioConfig::default().to_toml()
    )
}

/// Entry point of the `mpue-sim` binary. Returns the process exit code:
/// 0 on success, 1 on a run or validation error, 2 on a usage error.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code != 0 {
                eprintln!("\n{}", schema_help());
                return 2;
            }
            return 0;
        }
    };
    let res = match &cli.command {
        Command::Run(a) => cmd_run(a).map(|_| true),
        Command::Sweep(a) => cmd_sweep(a).map(|_| true),
        Command::Replay(a) => cmd_replay(a),
        Command::ValidateConfig(a) => cmd_validate(a).map(|_| true),
    };
    match res {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
