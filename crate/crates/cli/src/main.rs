use std::path::PathBuf;

use clap::{Parser, Subcommand};

use cavnet_cli::config::{
    BayesArgs, BsmArgs, BsmInput, ConfigFile, FiguresArgs, G2Args, HomArgs, ParamsArgs,
    PresetName, ProtocolArgs, ProtocolName, PurcellArgs, RabiArgs, RatesMhz, RepeaterArgs,
    ScanArgs, ScenarioConfig, SpectrumArgs, SpectrumModel, Sweep, TomoArgs,
};
use cavnet_cli::output::Format;

/// Desk-scale cavity-QED network simulator.
#[derive(Parser)]
#[command(name = "cavnet", version, about)]
struct Cli {
    /// JSON scenario config; overrides the subcommand when given.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed override for sampling commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Output format for tabular data (csv always written; json adds a
    /// JSON copy).
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Worker threads for parallel sections (results are identical for any
    /// count).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Derive coupling/decay rates from physical cavity inputs (JSON file).
    Params {
        /// JSON file with {"cavity": {...}, "gamma_mhz": ...}.
        input: PathBuf,
    },
    /// Eigenvalue spectra vs a swept parameter.
    Spectrum {
        #[arg(long, value_parser = ["jc", "lambda"])]
        model: String,
        #[arg(long, default_value_t = -15.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 15.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 121)]
        points: usize,
    },
    /// Reflection/transmission scan of the driven cavity.
    Scan {
        #[arg(long, default_value_t = -15.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 15.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 601)]
        points: usize,
        #[arg(long, default_value_t = 1.0)]
        mode_matching: f64,
        /// Also write the empty-cavity reference scan.
        #[arg(long)]
        include_empty: bool,
    },
    /// Vacuum-Rabi emission trace starting from the excited atom.
    Rabi {
        #[arg(long, default_value_t = 400.0)]
        duration_ns: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta_ac: f64,
    },
    /// Purcell decay-rate sweep over atom-cavity detuning.
    Purcell {
        #[arg(long, default_value_t = -125.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 125.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
    },
    /// Second-order correlation of the driven cavity output.
    G2 {
        /// Drive detuning in 2π × MHz.
        #[arg(long, default_value_t = -7.0, allow_negative_numbers = true)]
        drive_detuning: f64,
        #[arg(long, default_value_t = 0.1)]
        drive_amplitude: f64,
        #[arg(long, default_value_t = 300.0)]
        tau_max_ns: f64,
        #[arg(long, default_value_t = 151)]
        points: usize,
    },
    /// Two-photon interference Monte Carlo.
    Hom {
        #[arg(long, default_value_t = 60.0)]
        envelope_tau_ns: f64,
        #[arg(long, default_value_t = 300.0)]
        envelope_duration_ns: f64,
        #[arg(long, default_value_t = 1.0)]
        envelope_step_ns: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        detuning_mhz: f64,
        #[arg(long, default_value_t = 0.0)]
        jitter_mhz: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Optical Bell-state measurement on a named two-photon input.
    Bsm {
        #[arg(long, value_parser = ["psi-minus", "psi-plus", "phi-minus", "phi-plus", "hv"])]
        input: String,
        #[arg(long, default_value_t = 1.0)]
        indistinguishability: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Node-level protocol runs with error-model presets.
    Protocol {
        #[arg(value_parser = ["memory", "transfer", "entangle", "teleport", "ghz", "eraser", "ndpd"])]
        name: String,
        #[arg(long, default_value = "ideal")]
        preset: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Repeater-chain rate Monte Carlo.
    Repeater {
        #[arg(long, default_value_t = 2)]
        segments: usize,
        #[arg(long, default_value_t = 0.1)]
        p_link: f64,
        #[arg(long, default_value_t = 1.0)]
        swap: f64,
        /// Memory cutoff in slots (omit for unlimited).
        #[arg(long)]
        cutoff: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// State tomography from a counts CSV.
    Tomo {
        /// CSV with rows setting,outcome,count (e.g. "XY,+-,123").
        input: PathBuf,
    },
    /// Bayesian two-atom filter over a click-stream CSV.
    Bayes {
        input: PathBuf,
        #[arg(long, default_value_t = 20.0)]
        bright_mean: f64,
        #[arg(long, default_value_t = 1e-3)]
        transition_prob: f64,
    },
    /// Reproduce the figure datasets.
    Figures {
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
}

fn scenario_from_command(cmd: Command, seed: u64) -> anyhow::Result<ScenarioConfig> {
    Ok(match cmd {
        Command::Params { input } => {
            let text = std::fs::read_to_string(&input)?;
            let args: ParamsArgs = serde_json::from_str(&text)?;
            ScenarioConfig::Params(args)
        }
        Command::Spectrum { model, from, to, points } => ScenarioConfig::Spectrum(SpectrumArgs {
            model: if model == "jc" { SpectrumModel::Jc } else { SpectrumModel::Lambda },
            rates: RatesMhz::default(),
            sweep: Sweep { from, to, points },
        }),
        Command::Scan { from, to, points, mode_matching, include_empty } => {
            ScenarioConfig::Scan(ScanArgs {
                rates: RatesMhz::default(),
                sweep: Sweep { from, to, points },
                mode_matching,
                include_empty,
            })
        }
        Command::Rabi { duration_ns, points, delta_ac } => ScenarioConfig::Rabi(RabiArgs {
            rates: RatesMhz { delta_ac, ..RatesMhz::default() },
            duration_ns,
            points,
        }),
        Command::Purcell { from, to, points } => ScenarioConfig::Purcell(PurcellArgs {
            // Fast-cavity reference system κ = 25 g.
            rates: RatesMhz {
                g: 1.0,
                kappa_l: 12.5,
                kappa_r: 12.5,
                kappa_loss: 0.0,
                gamma: 0.1,
                ..RatesMhz::default()
            },
            sweep: Sweep { from, to, points },
        }),
        Command::G2 { drive_detuning, drive_amplitude, tau_max_ns, points } => {
            ScenarioConfig::G2(G2Args {
                // Blockade reference system g = 10κ = 10γ.
                rates: RatesMhz {
                    g: 10.0,
                    kappa_l: 1.0,
                    kappa_r: 0.0,
                    kappa_loss: 0.0,
                    gamma: 1.0,
                    ..RatesMhz::default()
                },
                drive_detuning,
                drive_amplitude,
                tau_max_ns,
                points,
                n_max: 5,
            })
        }
        Command::Hom {
            envelope_tau_ns,
            envelope_duration_ns,
            envelope_step_ns,
            detuning_mhz,
            jitter_mhz,
            trials,
        } => ScenarioConfig::Hom(HomArgs {
            envelope_tau_ns,
            envelope_duration_ns,
            envelope_step_ns,
            detuning_mhz,
            jitter_mhz,
            trials,
            seed,
        }),
        Command::Bsm { input, indistinguishability, trials } => ScenarioConfig::Bsm(BsmArgs {
            input: match input.as_str() {
                "psi-minus" => BsmInput::PsiMinus,
                "psi-plus" => BsmInput::PsiPlus,
                "phi-minus" => BsmInput::PhiMinus,
                "phi-plus" => BsmInput::PhiPlus,
                _ => BsmInput::HorizontalVertical,
            },
            indistinguishability,
            trials,
            seed,
        }),
        Command::Protocol { name, preset, trials } => {
            let name = match name.as_str() {
                "memory" => ProtocolName::Memory,
                "transfer" => ProtocolName::Transfer,
                "entangle" => ProtocolName::Entangle,
                "teleport" => ProtocolName::Teleport,
                "ghz" => ProtocolName::Ghz,
                "eraser" => ProtocolName::Eraser,
                _ => ProtocolName::Ndpd,
            };
            ScenarioConfig::Protocol(ProtocolArgs {
                name,
                preset: PresetName::parse(&preset).map_err(anyhow::Error::from)?,
                trials,
                seed,
            })
        }
        Command::Repeater { segments, p_link, swap, cutoff, trials } => {
            ScenarioConfig::Repeater(RepeaterArgs {
                segments,
                p_link,
                swap,
                cutoff,
                trials,
                seed,
                slot_duration_us: 100.0,
            })
        }
        Command::Tomo { input } => {
            ScenarioConfig::Tomo(TomoArgs { counts_csv: input.display().to_string() })
        }
        Command::Bayes { input, bright_mean, transition_prob } => {
            ScenarioConfig::Bayes(BayesArgs {
                clicks_csv: input.display().to_string(),
                bright_mean,
                levels: [1.0, 0.7, 0.4],
                transition_prob,
            })
        }
        Command::Figures { trials } => ScenarioConfig::Figures(FiguresArgs { seed, trials }),
    })
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let format = match cli.format.as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => anyhow::bail!("unknown format {other:?}; use csv or json"),
    };

    let default_seed = cli.seed.unwrap_or(1);
    let mut scenario = match (&cli.config, cli.command) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            ConfigFile::parse(&text)?.scenario
        }
        (None, Some(cmd)) => scenario_from_command(cmd, default_seed)?,
        (None, None) => anyhow::bail!("no subcommand and no --config given; see --help"),
    };
    if let Some(seed) = cli.seed {
        scenario = scenario.with_seed(seed);
    }

    let execute = || cavnet_cli::execute(&scenario, &cli.out, format).map(|_| ());
    match cli.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            pool.install(execute)
        }
        None => execute(),
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(cavnet_cli::classify_exit_code(&err));
    }
}
