//! Implementations of the CLI subcommands.

use anyhow::Context;
use rand::Rng;

use cavnet_core::dynamics::{
    driven_hamiltonian, g2, purcell_decay_rate, spectrum_scan, steady_state, vacuum_rabi_trace,
    DriveSpec, DriveTarget, InputSide,
};
use cavnet_core::estimate::{
    bayesian_two_atom_filter, tomography, BayesConfig, MeasurementRecord, Pauli,
};
use cavnet_core::hilbert::{fidelity_pure, matrices, Operator};
use cavnet_core::models::{
    dressed_spectrum, eit_spectrum, JCParams, LambdaParams, CAVITY_LABEL,
};
use cavnet_core::network::{chain_rate, SlotConfig};
use cavnet_core::params::derive;
use cavnet_core::photonics::{
    bell_measurement, hom_monte_carlo, phi_minus_hv, phi_plus_hv, psi_minus_hv, psi_plus_hv,
    BsmResult, Envelope, PolarizationQubit, SourceSpec, TwoPhotonAmps,
};
use cavnet_core::protocols::{presets, AtomQubit, ErrorModel, ProtocolOutcome};

use crate::config::{
    self, mhz_to_rad, rad_to_mhz, BsmInput, PresetName, ProtocolName, ScenarioConfig,
    SpectrumModel,
};
use crate::output::{aligned_block, Cell, OutputSink, Table};

pub fn dispatch(scenario: &ScenarioConfig, sink: &mut OutputSink) -> anyhow::Result<()> {
    match scenario {
        ScenarioConfig::Params(a) => run_params(a, sink),
        ScenarioConfig::Spectrum(a) => run_spectrum(a, sink),
        ScenarioConfig::Scan(a) => run_scan(a, sink),
        ScenarioConfig::Rabi(a) => run_rabi(a, sink),
        ScenarioConfig::Purcell(a) => run_purcell(a, sink),
        ScenarioConfig::G2(a) => run_g2(a, sink),
        ScenarioConfig::Hom(a) => run_hom(a, sink),
        ScenarioConfig::Bsm(a) => run_bsm(a, sink),
        ScenarioConfig::Protocol(a) => run_protocol(a, sink),
        ScenarioConfig::Repeater(a) => run_repeater(a, sink),
        ScenarioConfig::Tomo(a) => run_tomo(a, sink),
        ScenarioConfig::Bayes(a) => run_bayes(a, sink),
        ScenarioConfig::Figures(a) => crate::figures::figure_pack(a, sink),
    }
}

fn run_params(args: &config::ParamsArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    let gamma = mhz_to_rad(args.gamma_mhz);
    let (rates, derived) = derive(&args.cavity, gamma)?;
    #[derive(serde::Serialize)]
    struct Report {
        rates_mhz: config::RatesMhz,
        finesse: f64,
        cooperativity: f64,
        critical_photon_number: f64,
        free_space_margin: f64,
        purcell_rate_mhz: f64,
        emission_fraction: f64,
    }
    let report = Report {
        rates_mhz: config::RatesMhz {
            g: rad_to_mhz(rates.g),
            kappa_l: rad_to_mhz(rates.kappa_l),
            kappa_r: rad_to_mhz(rates.kappa_r),
            kappa_loss: rad_to_mhz(rates.kappa_loss),
            gamma: rad_to_mhz(rates.gamma),
            delta_ac: 0.0,
            delta_u: 0.0,
            omega_l: 0.0,
        },
        finesse: derived.finesse,
        cooperativity: derived.cooperativity,
        critical_photon_number: derived.critical_photon_number,
        free_space_margin: derived.free_space_margin,
        purcell_rate_mhz: rad_to_mhz(derived.purcell_rate_resonant),
        emission_fraction: derived.emission_fraction,
    };
    sink.write_json("params", &report)?;
    println!(
        "{}",
        aligned_block(&[
            ("finesse", format!("{:.4e}", report.finesse)),
            ("g (2π MHz)", format!("{:.4}", report.rates_mhz.g)),
            ("kappa (2π MHz)", format!("{:.4}", rad_to_mhz(rates.kappa()))),
            ("gamma (2π MHz)", format!("{:.4}", report.rates_mhz.gamma)),
            ("cooperativity C", format!("{:.4}", report.cooperativity)),
            ("critical photon number", format!("{:.4e}", report.critical_photon_number)),
            ("free-space margin", format!("{:.4}", report.free_space_margin)),
            ("emission fraction", format!("{:.4}", report.emission_fraction)),
        ])
    );
    Ok(())
}

fn run_spectrum(args: &config::SpectrumArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    args.sweep.validate()?;
    let mut table = Table::new(["sweep_value", "E0", "Eplus", "Eminus"]);
    match args.model {
        SpectrumModel::Jc => {
            for v in args.sweep.values() {
                let rates = args.rates.to_rate_set()?.with_delta_ac(mhz_to_rad(v));
                let p = JCParams::new(rates, 2)?;
                let (ep, em) = dressed_spectrum(&p, 1)?;
                table.push(vec![
                    Cell::Float(v),
                    Cell::Float(0.0),
                    Cell::Float(rad_to_mhz(ep)),
                    Cell::Float(rad_to_mhz(em)),
                ]);
            }
        }
        SpectrumModel::Lambda => {
            for v in args.sweep.values() {
                let rates = args.rates.to_rate_set()?.with_omega_l(mhz_to_rad(v));
                let p = LambdaParams::new(rates, 1)?;
                let (e0, ep, em) = eit_spectrum(&p)?;
                table.push(vec![
                    Cell::Float(v),
                    Cell::Float(rad_to_mhz(e0)),
                    Cell::Float(rad_to_mhz(ep)),
                    Cell::Float(rad_to_mhz(em)),
                ]);
            }
        }
    }
    sink.write_table("spectrum", &table)?;
    println!("spectrum: {} points -> {}", args.sweep.points, sink.dir().display());
    Ok(())
}

fn run_scan(args: &config::ScanArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    args.sweep.validate()?;
    let rates = args.rates.to_rate_set()?;
    let grid: Vec<f64> = args.sweep.values().iter().map(|&v| mhz_to_rad(v)).collect();
    let points = spectrum_scan(&rates, &grid, args.mode_matching)?;
    let mut table = Table::new(["delta_over_2pi_MHz", "R", "T", "phase_r_rad", "phase_t_rad"]);
    for p in &points {
        table.push(vec![
            Cell::Float(rad_to_mhz(p.delta_c)),
            Cell::Float(p.reflection),
            Cell::Float(p.transmission),
            Cell::Float(p.phase_r),
            Cell::Float(p.phase_t),
        ]);
    }
    sink.write_table("scan", &table)?;
    if args.include_empty {
        let mut empty_rates = rates;
        empty_rates.g = 0.0;
        let points = spectrum_scan(&empty_rates, &grid, args.mode_matching)?;
        let mut table =
            Table::new(["delta_over_2pi_MHz", "R", "T", "phase_r_rad", "phase_t_rad"]);
        for p in &points {
            table.push(vec![
                Cell::Float(rad_to_mhz(p.delta_c)),
                Cell::Float(p.reflection),
                Cell::Float(p.transmission),
                Cell::Float(p.phase_r),
                Cell::Float(p.phase_t),
            ]);
        }
        sink.write_table("scan_empty", &table)?;
    }
    println!("scan: {} points -> {}", points.len(), sink.dir().display());
    Ok(())
}

fn run_rabi(args: &config::RabiArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    if args.points < 2 || args.duration_ns <= 0.0 {
        anyhow::bail!("rabi needs a positive duration and at least 2 points");
    }
    let rates = args.rates.to_rate_set()?;
    let p = JCParams::new(rates, 2)?;
    let t_grid: Vec<f64> = (0..args.points)
        .map(|i| i as f64 * args.duration_ns * 1e-9 / (args.points - 1) as f64)
        .collect();
    let (times, emission) = vacuum_rabi_trace(&p, &t_grid)?;
    let mut table = Table::new(["t_ns", "emission_rate_per_s"]);
    for (t, r) in times.iter().zip(&emission) {
        table.push(vec![Cell::Float(t * 1e9), Cell::Float(*r)]);
    }
    sink.write_table("rabi", &table)?;
    println!("rabi: {} samples -> {}", times.len(), sink.dir().display());
    Ok(())
}

fn run_purcell(args: &config::PurcellArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    args.sweep.validate()?;
    let mut table =
        Table::new(["delta_over_2pi_MHz", "fitted_rate_per_s", "predicted_rate_per_s"]);
    for v in args.sweep.values() {
        let rates = args.rates.to_rate_set()?.with_delta_ac(mhz_to_rad(v));
        let p = JCParams::new(rates, 1)?;
        let fitted = purcell_decay_rate(&p)?;
        let gamma_c =
            cavnet_core::params::purcell_rate(rates.g, rates.kappa(), rates.delta_ac)?;
        let predicted = 2.0 * (rates.gamma + gamma_c);
        table.push(vec![Cell::Float(v), Cell::Float(fitted), Cell::Float(predicted)]);
    }
    sink.write_table("purcell", &table)?;
    println!("purcell: {} detunings -> {}", args.sweep.points, sink.dir().display());
    Ok(())
}

fn run_g2(args: &config::G2Args, sink: &mut OutputSink) -> anyhow::Result<()> {
    if args.points < 2 || args.tau_max_ns <= 0.0 {
        anyhow::bail!("g2 needs a positive tau range and at least 2 points");
    }
    let rates = args.rates.to_rate_set()?;
    let p = JCParams::new(rates, args.n_max)?;
    let drive = DriveSpec {
        target: DriveTarget::Cavity,
        amplitude: mhz_to_rad(args.drive_amplitude),
        detuning: mhz_to_rad(args.drive_detuning),
        input_side: InputSide::Left,
    };
    let h = driven_hamiltonian(&p, &drive)?;
    let ls = cavnet_core::models::collapse_operators_jc(&p)?;
    let rho = steady_state(&h, &ls)?;
    let tail = cavnet_core::dynamics::fock_tail_population(&rho, CAVITY_LABEL)?;
    if tail > 1e-6 {
        eprintln!(
            "warning: top Fock level holds population {tail:.2e}; raise n_max to trust this run"
        );
    }
    let a = Operator::embed(&p.space(), CAVITY_LABEL, &matrices::annihilation(args.n_max + 1))?;
    let tau_grid: Vec<f64> = (0..args.points)
        .map(|i| i as f64 * args.tau_max_ns * 1e-9 / (args.points - 1) as f64)
        .collect();
    let values = g2(&rho, &a, &h, &ls, &tau_grid)?;
    let mut table = Table::new(["tau_ns", "g2"]);
    for (t, v) in tau_grid.iter().zip(&values) {
        table.push(vec![Cell::Float(t * 1e9), Cell::Float(*v)]);
    }
    sink.write_table("g2", &table)?;
    println!("g2(0) = {:.4} -> {}", values[0], sink.dir().display());
    Ok(())
}

fn run_hom(args: &config::HomArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    let n = (args.envelope_duration_ns / args.envelope_step_ns).round() as usize;
    if n < 2 {
        anyhow::bail!("envelope needs at least 2 samples");
    }
    let envelope =
        Envelope::exponential(args.envelope_step_ns * 1e-9, n, args.envelope_tau_ns * 1e-9)?;
    let a = SourceSpec { envelope: envelope.clone(), detuning: 0.0, jitter_sigma: 0.0 };
    let b = SourceSpec {
        envelope,
        detuning: mhz_to_rad(args.detuning_mhz),
        jitter_sigma: mhz_to_rad(args.jitter_mhz),
    };
    let hist = hom_monte_carlo(&a, &b, args.trials, args.seed)?;
    let mut table = Table::new(["tau_ns", "parallel_counts", "orthogonal_counts", "ratio"]);
    for (i, &tau) in hist.tau.iter().enumerate() {
        table.push(vec![
            Cell::Float(tau * 1e9),
            Cell::UInt(hist.parallel_counts[i]),
            Cell::UInt(hist.orthogonal_counts[i]),
            Cell::Float(hist.ratio[i]),
        ]);
    }
    sink.write_table("hom", &table)?;
    #[derive(serde::Serialize)]
    struct Summary {
        integrated_contrast: f64,
        trials: u64,
    }
    sink.write_json(
        "hom_summary",
        &Summary { integrated_contrast: hist.integrated_contrast, trials: args.trials },
    )?;
    println!(
        "hom: integrated contrast {:.4} -> {}",
        hist.integrated_contrast,
        sink.dir().display()
    );
    Ok(())
}

fn bsm_input_state(input: &BsmInput) -> TwoPhotonAmps {
    match input {
        BsmInput::PsiMinus => psi_minus_hv(),
        BsmInput::PsiPlus => psi_plus_hv(),
        BsmInput::PhiMinus => phi_minus_hv(),
        BsmInput::PhiPlus => phi_plus_hv(),
        BsmInput::HorizontalVertical => {
            let h = PolarizationQubit::horizontal();
            let v = PolarizationQubit::vertical();
            [h.l * v.l, h.l * v.r, h.r * v.l, h.r * v.r]
        }
    }
}

fn run_bsm(args: &config::BsmArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    let state = bsm_input_state(&args.input);
    let dist = bell_measurement(&state, args.indistinguishability)?;
    let mut rng = cavnet_core::rng::stream_rng(args.seed, 0);
    let mut counts = [0u64; 3];
    for _ in 0..args.trials {
        match dist.sample(&mut rng) {
            BsmResult::PsiMinus => counts[0] += 1,
            BsmResult::PsiPlus => counts[1] += 1,
            BsmResult::Fail => counts[2] += 1,
        }
    }
    #[derive(serde::Serialize)]
    struct Report {
        distribution: cavnet_core::photonics::BsmDistribution,
        counts_psi_minus: u64,
        counts_psi_plus: u64,
        counts_fail: u64,
        trials: u64,
    }
    sink.write_json(
        "bsm",
        &Report {
            distribution: dist,
            counts_psi_minus: counts[0],
            counts_psi_plus: counts[1],
            counts_fail: counts[2],
            trials: args.trials,
        },
    )?;
    println!(
        "bsm: P(psi-) = {:.4}, P(psi+) = {:.4}, P(fail) = {:.4}",
        dist.p_psi_minus, dist.p_psi_plus, dist.p_fail
    );
    Ok(())
}

/// Summary row of one protocol branch, averaged over the six unbiased
/// inputs where applicable.
struct BranchRecord {
    label: String,
    weight: f64,
    fidelity: Option<f64>,
    sampled: u64,
}

fn sample_branch_counts(weights: &[f64], trials: u64, seed: u64) -> Vec<u64> {
    let total: f64 = weights.iter().sum();
    let mut rng = cavnet_core::rng::stream_rng(seed, 0);
    let mut counts = vec![0u64; weights.len()];
    for _ in 0..trials {
        let mut u = rng.gen::<f64>() * total;
        let mut k = weights.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                k = i;
                break;
            }
            u -= w;
        }
        counts[k] += 1;
    }
    counts
}

fn protocol_preset_error(name: ProtocolName, preset: PresetName) -> anyhow::Result<()> {
    use PresetName::*;
    use ProtocolName::*;
    let ok = matches!(
        (name, preset),
        (_, Ideal)
            | (Memory, Paper2011)
            | (Transfer, Paper2012)
            | (Entangle, Paper2012)
            | (Teleport, Paper2013)
            | (Ndpd, Paper2013)
            | (Ghz, Paper2014)
            | (Eraser, Paper2014)
    );
    if !ok {
        anyhow::bail!(
            "preset {:?} does not apply to protocol {:?}; see the README for the mapping",
            preset,
            name
        );
    }
    Ok(())
}

fn run_protocol(args: &config::ProtocolArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    protocol_preset_error(args.name, args.preset)?;
    let ideal = args.preset == PresetName::Ideal;

    let (efficiency, mean_fidelity, branches): (f64, f64, Vec<BranchRecord>) = match args.name {
        ProtocolName::Memory => {
            let err = if ideal { ErrorModel::IDEAL } else { presets::memory_2011() };
            let mut acc = 0.0;
            let mut weight = 0.0;
            for q in AtomQubit::six_states() {
                let photon = cavnet_core::protocols::emit_map(&q);
                let outs = cavnet_core::protocols::store_photon(
                    Some(&photon.flip_propagation()),
                    &err,
                )?;
                weight = ProtocolOutcome::success_weight(&outs);
                acc += ProtocolOutcome::mean_success_fidelity(
                    &outs,
                    &q.to_state(cavnet_core::protocols::PROTOCOL_ATOM_LABEL),
                )?;
            }
            let fid = acc / 6.0;
            (
                weight,
                fid,
                vec![BranchRecord {
                    label: "stored".into(),
                    weight,
                    fidelity: Some(fid),
                    sampled: 0,
                }],
            )
        }
        ProtocolName::Transfer | ProtocolName::Entangle => {
            let preset = if ideal {
                presets::NetworkPreset::ideal()
            } else if args.name == ProtocolName::Transfer {
                presets::state_transfer_2012()
            } else {
                presets::entangle_2012()
            };
            let (outs, fid) = if args.name == ProtocolName::Transfer {
                let mut acc = 0.0;
                let mut outs_last = Vec::new();
                for q in AtomQubit::six_states() {
                    let outs = cavnet_core::protocols::remote_state_transfer(
                        &q,
                        preset.channel_survival,
                        &preset.err_a,
                        &preset.err_b,
                    )?;
                    acc += ProtocolOutcome::mean_success_fidelity(
                        &outs,
                        &q.to_state(cavnet_core::protocols::ATOM_B_LABEL),
                    )?;
                    outs_last = outs;
                }
                (outs_last, acc / 6.0)
            } else {
                let outs = cavnet_core::protocols::remote_entangle(
                    preset.channel_survival,
                    &preset.err_a,
                    &preset.err_b,
                )?;
                let fid = ProtocolOutcome::mean_success_fidelity(
                    &outs,
                    &cavnet_core::protocols::two_atom_singlet(),
                )?;
                (outs, fid)
            };
            let weights: Vec<f64> = outs.iter().map(|o| o.efficiency_weight).collect();
            let counts = sample_branch_counts(&weights, args.trials, args.seed);
            let records = outs
                .iter()
                .zip(&counts)
                .map(|(o, &n)| BranchRecord {
                    label: o.label.clone(),
                    weight: o.efficiency_weight,
                    fidelity: None,
                    sampled: n,
                })
                .collect();
            (ProtocolOutcome::success_weight(&outs), fid, records)
        }
        ProtocolName::Teleport => {
            let p = presets::teleport_2013();
            let (contrast, quality) =
                if ideal { (1.0, 1.0) } else { (p.contrast_short_window, p.resource_quality) };
            let outcomes = cavnet_core::protocols::teleport(
                &AtomQubit::plus_x(),
                contrast,
                quality,
                &ErrorModel::IDEAL,
            )?;
            let weights: Vec<f64> = outcomes.iter().map(|o| o.probability).collect();
            let counts = sample_branch_counts(&weights, args.trials, args.seed);
            let records: Vec<BranchRecord> = outcomes
                .iter()
                .zip(&counts)
                .map(|(o, &n)| BranchRecord {
                    label: format!("{:?}#{}", o.result, o.bell_index),
                    weight: o.probability,
                    fidelity: Some(o.fidelity),
                    sampled: n,
                })
                .collect();
            let (eff, fid) = if ideal {
                let fid = cavnet_core::protocols::teleport_average_fidelity(
                    1.0,
                    1.0,
                    &ErrorModel::IDEAL,
                )?;
                (0.5, fid)
            } else {
                (p.efficiency_short_window(), p.average_fidelity_short_window()?)
            };
            (eff, fid, records)
        }
        ProtocolName::Ghz | ProtocolName::Eraser => {
            let p = presets::gate_2014();
            let (phase, err) =
                if ideal { (0.0, ErrorModel::IDEAL) } else { (p.ghz_phase, p.err) };
            let rho = cavnet_core::protocols::ghz_generate(phase, &err)?;
            if args.name == ProtocolName::Ghz {
                let fid = fidelity_pure(&cavnet_core::protocols::ghz_state(0.0), &rho)?;
                (
                    1.0,
                    fid,
                    vec![BranchRecord {
                        label: "ghz".into(),
                        weight: 1.0,
                        fidelity: Some(fid),
                        sampled: 0,
                    }],
                )
            } else {
                let branches = cavnet_core::protocols::eraser_photon_photon(&rho)?;
                let weights: Vec<f64> = branches.iter().map(|b| b.probability).collect();
                let counts = sample_branch_counts(&weights, args.trials, args.seed);
                let mut records = Vec::new();
                let mut acc = 0.0;
                for (b, &n) in branches.iter().zip(&counts) {
                    let f = fidelity_pure(
                        &cavnet_core::protocols::eraser_target(b.atom_up),
                        &b.state,
                    )?;
                    acc += b.probability * f;
                    records.push(BranchRecord {
                        label: if b.atom_up { "atom_up".into() } else { "atom_down".into() },
                        weight: b.probability,
                        fidelity: Some(f),
                        sampled: n,
                    });
                }
                (1.0, acc, records)
            }
        }
        ProtocolName::Ndpd => {
            let device = if ideal {
                cavnet_core::protocols::DetectionDevice {
                    p_detect: 1.0,
                    p_survive_given_miss: 0.0,
                    p_reflect: 1.0,
                }
            } else {
                presets::detection_device_2013()
            };
            let single = device.concatenated_efficiency(1)?;
            let double = device.concatenated_efficiency(2)?;
            let triple = device.concatenated_efficiency(3)?;
            let records = vec![
                BranchRecord {
                    label: "one_device".into(),
                    weight: single,
                    fidelity: None,
                    sampled: 0,
                },
                BranchRecord {
                    label: "two_devices".into(),
                    weight: double,
                    fidelity: None,
                    sampled: 0,
                },
                BranchRecord {
                    label: "three_devices".into(),
                    weight: triple,
                    fidelity: None,
                    sampled: 0,
                },
            ];
            (single, single, records)
        }
    };

    let mut table = Table::new(["branch", "weight", "fidelity", "sampled"]);
    for b in &branches {
        table.push(vec![
            Cell::Text(b.label.clone()),
            Cell::Float(b.weight),
            match b.fidelity {
                Some(f) => Cell::Float(f),
                None => Cell::Text(String::new()),
            },
            Cell::UInt(b.sampled),
        ]);
    }
    sink.write_table("branches", &table)?;
    #[derive(serde::Serialize)]
    struct Report {
        protocol: String,
        preset: String,
        efficiency: f64,
        mean_fidelity: f64,
        trials: u64,
        seed: u64,
    }
    sink.write_json(
        "protocol",
        &Report {
            protocol: format!("{:?}", args.name).to_lowercase(),
            preset: format!("{:?}", args.preset).to_lowercase(),
            efficiency,
            mean_fidelity,
            trials: args.trials,
            seed: args.seed,
        },
    )?;
    println!(
        "protocol {:?}: efficiency {:.4e}, mean fidelity {:.4}",
        args.name, efficiency, mean_fidelity
    );
    Ok(())
}

fn run_repeater(args: &config::RepeaterArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    let config = SlotConfig {
        slot_duration: args.slot_duration_us * 1e-6,
        ..SlotConfig::default()
    };
    let est = chain_rate(
        args.segments,
        args.p_link,
        args.swap,
        args.cutoff,
        args.trials,
        args.seed,
        &config,
    )?;
    let mut table = Table::new(["attempts", "count"]);
    for &(slots, count) in &est.histogram {
        table.push(vec![Cell::UInt(slots), Cell::UInt(count)]);
    }
    sink.write_table("attempts_histogram", &table)?;
    #[derive(serde::Serialize)]
    struct Report {
        mean_attempts: f64,
        mean_time_s: f64,
        success_probability_per_attempt: f64,
        quantiles: [u64; 3],
        censored_failures: u64,
        trials: u64,
    }
    sink.write_json(
        "rate_estimate",
        &Report {
            mean_attempts: est.mean_attempts,
            mean_time_s: est.mean_time,
            success_probability_per_attempt: est.success_probability_per_attempt,
            quantiles: est.quantiles,
            censored_failures: est.censored_failures,
            trials: est.trials,
        },
    )?;
    println!(
        "repeater: mean attempts {:.3} (p50/p90/p99 = {}/{}/{})",
        est.mean_attempts, est.quantiles[0], est.quantiles[1], est.quantiles[2]
    );
    Ok(())
}

fn run_tomo(args: &config::TomoArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.counts_csv)
        .with_context(|| format!("reading {}", args.counts_csv))?;
    let mut records: std::collections::BTreeMap<String, Vec<(usize, u64)>> =
        Default::default();
    let mut n_qubits = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("setting")) {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            anyhow::bail!("line {}: expected setting,outcome,count", lineno + 1);
        }
        let setting = parts[0].trim().to_ascii_uppercase();
        let outcome = parts[1].trim();
        let count: u64 = parts[2].trim().parse().context("count column")?;
        if n_qubits == 0 {
            n_qubits = setting.len();
        }
        if setting.len() != n_qubits || outcome.len() != n_qubits {
            anyhow::bail!("line {}: setting/outcome width mismatch", lineno + 1);
        }
        let mut idx = 0usize;
        for ch in outcome.chars() {
            idx = idx * 2
                + match ch {
                    '+' => 0,
                    '-' => 1,
                    other => anyhow::bail!("line {}: bad outcome char {other:?}", lineno + 1),
                };
        }
        records.entry(setting).or_default().push((idx, count));
    }
    let mut measurement_records = Vec::new();
    for (setting_str, entries) in records {
        let setting: Vec<Pauli> = setting_str
            .chars()
            .map(|ch| Pauli::parse(&ch.to_string()))
            .collect::<Result<_, _>>()?;
        let mut counts = vec![0u64; 1 << setting.len()];
        for (idx, count) in entries {
            counts[idx] += count;
        }
        measurement_records.push(MeasurementRecord::new(setting, counts)?);
    }
    let rho = tomography(&measurement_records)?;
    sink.write_json("density_matrix", &rho.to_json())?;
    println!(
        "tomo: reconstructed {}-dim state, min eigenvalue {:.3e}",
        rho.space().dim(),
        rho.eigenvalues()[0]
    );
    Ok(())
}

fn run_bayes(args: &config::BayesArgs, sink: &mut OutputSink) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.clicks_csv)
        .with_context(|| format!("reading {}", args.clicks_csv))?;
    let mut clicks = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.chars().any(|c| c.is_alphabetic())) {
            continue;
        }
        clicks.push(line.parse::<u64>().with_context(|| format!("line {}", lineno + 1))?);
    }
    let config = BayesConfig {
        bright_mean: args.bright_mean,
        levels: args.levels,
        transition_prob: args.transition_prob,
    };
    let result = bayesian_two_atom_filter(&clicks, &config)?;
    let mut table = Table::new(["bin", "clicks", "p0", "p1", "p2", "map"]);
    for (i, post) in result.posterior.iter().enumerate() {
        table.push(vec![
            Cell::UInt(i as u64),
            Cell::UInt(clicks[i]),
            Cell::Float(post[0]),
            Cell::Float(post[1]),
            Cell::Float(post[2]),
            Cell::UInt(result.map_trajectory[i] as u64),
        ]);
    }
    sink.write_table("posterior", &table)?;
    println!("bayes: {} bins -> {}", clicks.len(), sink.dir().display());
    Ok(())
}
