//! Named error-model presets.
//!
//! The headline fidelities and efficiencies of the reference experiments
//! are hardware measurements, not first-principles predictions. Each preset
//! ships the parameter values fitted so the simulated protocol reproduces
//! the measured numbers; quoted targets live in the doc comments and the
//! acceptance suite.

use crate::protocols::{DetectionDevice, ErrorModel};

/// Single-atom memory: average store-and-retrieve fidelity 93% over the six
/// unbiased inputs, limited by atomic state preparation.
pub fn memory_2011() -> ErrorModel {
    ErrorModel {
        // Fitted: (1 + s)/2 = 0.93.
        prep_fidelity: 0.86,
        ..ErrorModel::IDEAL
    }
}

/// Parameters of one elementary-network link (sender, fiber, receiver).
#[derive(Debug, Clone, Copy)]
pub struct NetworkPreset {
    pub err_a: ErrorModel,
    pub err_b: ErrorModel,
    pub channel_survival: f64,
}

impl NetworkPreset {
    pub fn ideal() -> Self {
        Self { err_a: ErrorModel::IDEAL, err_b: ErrorModel::IDEAL, channel_survival: 1.0 }
    }
}

/// Remote state transfer over the fiber link: overall efficiency
/// 3% × 34% × 20% = 0.2%, average fidelity 84%.
pub fn state_transfer_2012() -> NetworkPreset {
    NetworkPreset {
        err_a: ErrorModel {
            emit_efficiency: 0.03,
            // Fitted jointly with the receiver so the clean-branch path
            // contraction is 0.9138² ≈ 0.835 and the delayed scattering
            // branch weight reproduces the 84% full-ensemble average.
            prep_fidelity: 0.9138,
            scattering_prob: 0.186,
            ..ErrorModel::IDEAL
        },
        err_b: ErrorModel {
            store_efficiency: 0.20,
            prep_fidelity: 0.9138,
            ..ErrorModel::IDEAL
        },
        channel_survival: 0.34,
    }
}

/// Remote atom-atom entanglement: efficiency 40% × 34% × 14% ≈ 2%, singlet
/// fidelity 85% over all events and ≈ 98.7% in the early-click
/// subensemble.
pub fn entangle_2012() -> NetworkPreset {
    NetworkPreset {
        err_a: ErrorModel {
            emit_efficiency: 0.40,
            // Fitted: clean-pair contraction 0.9827 puts the prompt
            // subensemble at 98.7%.
            prep_fidelity: 0.9827,
            scattering_prob: 0.186,
            ..ErrorModel::IDEAL
        },
        err_b: ErrorModel { store_efficiency: 0.14, ..ErrorModel::IDEAL },
        channel_survival: 0.34,
    }
}

/// Atom-photon entangled source read out through a second photon:
/// reconstructed two-qubit fidelity 86%.
pub fn entangled_source_2007() -> ErrorModel {
    ErrorModel {
        // Fitted Werner weight: w + (1−w)/4 = 0.86.
        prep_fidelity: 0.8133,
        ..ErrorModel::IDEAL
    }
}

/// Teleportation via the optical Bell-state measurement.
#[derive(Debug, Clone, Copy)]
pub struct TeleportPreset {
    /// Two-photon interference contrast over the full coincidence window.
    pub contrast_full_window: f64,
    /// Contrast with the narrowed (80 ns) window.
    pub contrast_short_window: f64,
    /// Fitted contraction of the entangled resource.
    pub resource_quality: f64,
    /// Weight of delayed (scattered) events admitted only by the full
    /// window; they teleport a depolarized qubit.
    pub full_window_scatter: f64,
    /// Photon production efficiencies at the two nodes.
    pub production: [f64; 2],
    /// Photon detection efficiencies of the two BSM arms.
    pub detection: [f64; 2],
    /// Only one Bell state was heralded in the experiment.
    pub bsm_factor: f64,
    /// Narrowing the window costs this efficiency factor.
    pub window_efficiency_factor: f64,
}

/// Measured 2013 teleportation parameters: success probability
/// 0.39 × 0.25 × 0.31 × 0.12 × 0.25 ≈ 0.1%, average fidelity 78.9% over
/// the full window rising to 88.0% over the short one (efficiency ÷ 4).
pub fn teleport_2013() -> TeleportPreset {
    TeleportPreset {
        contrast_full_window: 0.66,
        contrast_short_window: 0.928,
        // Fitted against the short-window fidelity (see the preset
        // calibration test).
        resource_quality: 0.7983,
        // Fitted against the full-window fidelity.
        full_window_scatter: 0.0638,
        production: [0.39, 0.25],
        detection: [0.31, 0.12],
        bsm_factor: 0.25,
        window_efficiency_factor: 4.0,
    }
}

impl TeleportPreset {
    pub fn efficiency_full_window(&self) -> f64 {
        self.production[0]
            * self.production[1]
            * self.detection[0]
            * self.detection[1]
            * self.bsm_factor
    }

    pub fn efficiency_short_window(&self) -> f64 {
        self.efficiency_full_window() / self.window_efficiency_factor
    }

    /// Simulated average fidelity for the full coincidence window: the
    /// short-window physics at reduced contrast, plus the delayed
    /// scattering branch that teleports a depolarized qubit.
    pub fn average_fidelity_full_window(&self) -> crate::Result<f64> {
        let clean = crate::protocols::teleport_average_fidelity(
            self.contrast_full_window,
            self.resource_quality,
            &ErrorModel::IDEAL,
        )?;
        Ok((1.0 - self.full_window_scatter) * clean + self.full_window_scatter * 0.5)
    }

    pub fn average_fidelity_short_window(&self) -> crate::Result<f64> {
        crate::protocols::teleport_average_fidelity(
            self.contrast_short_window,
            self.resource_quality,
            &ErrorModel::IDEAL,
        )
    }
}

/// Two-ion heralded entanglement: Werner weight of the analyzed state,
/// fitted so the parity-based fidelity lower bound reaches 91.9%.
pub fn two_ion_werner_2013() -> f64 {
    0.8920
}

/// Nondestructive photon detection device: single-pass efficiency 74%,
/// reflection probability 66%; the fitted survive-given-miss share puts two
/// concatenated devices at 87% and three at ≈ 89%.
pub fn detection_device_2013() -> DetectionDevice {
    DetectionDevice { p_detect: 0.74, p_survive_given_miss: 0.6757, p_reflect: 0.66 }
}

/// Atom-photon gate chain (GHZ and eraser): measured GHZ phase φ = 0.21π
/// and a fitted atomic contraction putting the GHZ fidelity at 67% and the
/// erased photon-photon fidelity near 76%.
#[derive(Debug, Clone, Copy)]
pub struct GatePreset {
    pub ghz_phase: f64,
    pub err: ErrorModel,
}

pub fn gate_2014() -> GatePreset {
    GatePreset {
        ghz_phase: 0.21 * std::f64::consts::PI,
        err: ErrorModel { prep_fidelity: 0.6511, ..ErrorModel::IDEAL },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::fidelity_pure;
    use crate::protocols::maps::{self, two_atom_singlet};
    use crate::protocols::{AtomQubit, ProtocolOutcome};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn memory_preset_average_fidelity() {
        // Store + retrieve with the memory preset averages 93% over the six
        // unbiased inputs, above the classical benchmark of 2/3.
        let err = memory_2011();
        let mut acc = 0.0;
        for q in AtomQubit::six_states() {
            let photon = maps::emit_map(&q); // ideal retrieval
            let stored = maps::store_photon(Some(&photon.flip_propagation()), &err).unwrap();
            let state = stored[0].state.as_ref().unwrap();
            acc += fidelity_pure(&q.to_state(maps::ATOM_LABEL), state).unwrap();
        }
        let avg = acc / 6.0;
        assert_abs_diff_eq!(avg, 0.93, epsilon = 0.001);
        assert!(avg > 2.0 / 3.0);
    }

    #[test]
    fn transfer_preset_targets() {
        let p = state_transfer_2012();
        let mut acc = 0.0;
        let mut eff = 0.0;
        for q in AtomQubit::six_states() {
            let outs =
                maps::remote_state_transfer(&q, p.channel_survival, &p.err_a, &p.err_b).unwrap();
            eff = ProtocolOutcome::success_weight(&outs);
            acc += ProtocolOutcome::mean_success_fidelity(
                &outs,
                &q.to_state(maps::ATOM_B_LABEL),
            )
            .unwrap();
        }
        let avg = acc / 6.0;
        assert_relative_eq!(eff, 0.03 * 0.34 * 0.20, max_relative = 1e-12);
        assert_abs_diff_eq!(avg, 0.84, epsilon = 0.015);
        assert!(avg > 2.0 / 3.0);
    }

    #[test]
    fn entangle_preset_targets() {
        let p = entangle_2012();
        let outs = maps::remote_entangle(p.channel_survival, &p.err_a, &p.err_b).unwrap();
        assert_relative_eq!(
            ProtocolOutcome::success_weight(&outs),
            0.40 * 0.34 * 0.14,
            max_relative = 1e-12
        );
        let target = two_atom_singlet();
        let full = ProtocolOutcome::mean_success_fidelity(&outs, &target).unwrap();
        assert_abs_diff_eq!(full, 0.85, epsilon = 0.015);
        let early: Vec<_> = outs.into_iter().filter(|o| o.success && !o.delayed).collect();
        let early_f = ProtocolOutcome::mean_success_fidelity(&early, &target).unwrap();
        assert_abs_diff_eq!(early_f, 0.987, epsilon = 0.005);
    }

    #[test]
    fn entangled_source_preset() {
        let outs = maps::emit_entangled_photon(&entangled_source_2007()).unwrap();
        let state = outs[0].state.as_ref().unwrap();
        let target = maps::entangled_pair_state(maps::ATOM_LABEL, maps::PHOTON_LABEL);
        let f = fidelity_pure(&target, state).unwrap();
        assert_abs_diff_eq!(f, 0.86, epsilon = 0.005);
    }

    #[test]
    fn teleport_preset_targets() {
        let p = teleport_2013();
        assert_relative_eq!(
            p.efficiency_full_window(),
            0.39 * 0.25 * 0.31 * 0.12 * 0.25,
            max_relative = 1e-12
        );
        assert!((p.efficiency_full_window() - 0.001).abs() < 2e-4);
        assert_relative_eq!(
            p.efficiency_short_window(),
            p.efficiency_full_window() / 4.0,
            max_relative = 1e-12
        );
        let f_short = p.average_fidelity_short_window().unwrap();
        assert_abs_diff_eq!(f_short, 0.880, epsilon = 0.015);
        let f_full = p.average_fidelity_full_window().unwrap();
        assert_abs_diff_eq!(f_full, 0.789, epsilon = 0.011);
    }

    #[test]
    fn gate_preset_targets() {
        let p = gate_2014();
        let rho = crate::protocols::ghz_generate(p.ghz_phase, &p.err).unwrap();
        let f = fidelity_pure(&crate::protocols::ghz_state(0.0), &rho).unwrap();
        assert_abs_diff_eq!(f, 0.67, epsilon = 0.015);
        assert!(f > 0.5, "above the genuine tripartite entanglement witness threshold");
        // Eraser branches, averaged.
        let branches = crate::protocols::eraser_photon_photon(&rho).unwrap();
        let mut acc = 0.0;
        let mut weight = 0.0;
        for b in &branches {
            let target = crate::protocols::gates::eraser_target(b.atom_up);
            acc += b.probability * fidelity_pure(&target, &b.state).unwrap();
            weight += b.probability;
        }
        let f_eraser = acc / weight;
        assert_abs_diff_eq!(f_eraser, 0.76, epsilon = 0.015);
    }

    #[test]
    fn two_ion_parity_bound() {
        // Werner state w·Ψ⁺-type + (1−w)/4·I: populations + parity
        // amplitude bound the fidelity at (3w + 1)/4 ≥ 0.919.
        let w = two_ion_werner_2013();
        let bound = (3.0 * w + 1.0) / 4.0;
        assert_abs_diff_eq!(bound, 0.919, epsilon = 0.002);
    }
}
