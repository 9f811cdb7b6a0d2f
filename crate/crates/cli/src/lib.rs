//! Batch scenario runner binding the simulator modules: config parsing,
//! seeded execution, CSV/JSON emission, and figure-data reproduction.

pub mod commands;
pub mod config;
pub mod figures;
pub mod output;

use std::path::Path;

use config::{ConfigFile, ScenarioConfig};
use output::{Format, OutputSink, RunManifest};

/// Runs one scenario, writing data files, the re-runnable config, and the
/// run manifest under `out_dir`. Returns the manifest.
pub fn execute(
    scenario: &ScenarioConfig,
    out_dir: &Path,
    format: Format,
) -> anyhow::Result<RunManifest> {
    let start = std::time::Instant::now();
    let mut sink = OutputSink::new(out_dir, format)?;
    commands::dispatch(scenario, &mut sink)?;

    let config_file = ConfigFile::new(scenario.clone());
    sink.write_raw("config.json", config_file.emit().as_bytes())?;

    let manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        command: scenario.command_name().to_string(),
        seed: scenario.seed(),
        rng_algorithm: cavnet_core::rng::RNG_ALGORITHM.to_string(),
        duration_seconds: start.elapsed().as_secs_f64(),
        outputs: sink.written().to_vec(),
        config: serde_json::to_value(&config_file.scenario)
            .map(|mut v| {
                if let Some(obj) = v.as_object_mut() {
                    obj.insert("schema".into(), serde_json::json!(config_file.schema));
                }
                v
            })
            .expect("config serializes"),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(out_dir.join("manifest.json"), text)?;
    Ok(manifest)
}

/// Exit classes for the binary: validation failures (bad config, bad
/// ranges), runtime failures (integration, degenerate systems), and I/O.
pub fn classify_exit_code(err: &anyhow::Error) -> i32 {
    use cavnet_core::Error as CoreError;
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 4;
    }
    if let Some(core) = err.downcast_ref::<CoreError>() {
        return match core {
            CoreError::IntegrationFailure { .. }
            | CoreError::DegenerateSteadyState { .. }
            | CoreError::FitFailure { .. } => 3,
            _ => 2,
        };
    }
    // Config/CLI-level failures parse as validation errors.
    2
}
