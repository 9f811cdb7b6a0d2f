//! Node-level quantum-network primitives: state transfer, entanglement
//! generation, memory, rotations, teleportation, gates, and nondestructive
//! detection — each as an ideal map plus an error-model-degraded map.
//!
//! Conventions, fixed once for the whole module:
//! - Atom qubit basis order (↓ ≡ m_F=−1, ↑ ≡ m_F=+1); photon basis (L, R)
//!   circular, with the gate-basis identification ↓ᵖ ≡ L and ↑ᵖ ≡ R.
//! - Emitted photons propagate in −z, impinging photons in +z; a photon
//!   traveling from one node to another therefore swaps its circular labels
//!   on arrival ([`PolarizationQubit::flip_propagation`]).
//! - A preparation or readout stage of quality f mixes the ideal qubit with
//!   the maximally mixed state at weight 1−f (equivalently, it contracts
//!   the Bloch vector by f), so measured fringe visibilities multiply.

mod detect;
mod gates;
mod maps;
pub mod presets;
mod teleport;

pub use detect::{nondestructive_detect, DetectionDevice, DetectionOutcome, PhotonInput};
pub use gates::{
    atom_photon_cphase, down_x, eraser_photon_photon, eraser_target, ghz_generate, ghz_state,
    up_x, EraserBranch, GATE_ATOM, GATE_PHOTON_1, GATE_PHOTON_2,
};
pub use maps::{
    emit_entangled_photon, emit_map, emit_state_transfer, entangled_pair_state, hold_in_memory,
    remote_entangle, remote_state_transfer, store_map, store_photon, swap_by_reflection,
    two_atom_singlet, ATOM_A_LABEL, ATOM_B_LABEL, ATOM_LABEL as PROTOCOL_ATOM_LABEL,
    PHOTON_LABEL,
};
pub use teleport::{teleport, teleport_average_fidelity, TeleportOutcome};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, HilbertSpace, Operator, StateVector};
use crate::photonics::PolarizationQubit;
use crate::CMatrix;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A stationary qubit in the Zeeman pair, amplitudes ordered (↓, ↑).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomQubit {
    pub down: C64,
    pub up: C64,
}

impl AtomQubit {
    pub fn new(down: C64, up: C64) -> Result<Self> {
        let q = Self { down, up };
        let n = q.norm();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::BadNorm { deviation: (n - 1.0).abs() });
        }
        Ok(q)
    }

    pub fn down_state() -> Self {
        Self { down: c(1.0, 0.0), up: c(0.0, 0.0) }
    }

    pub fn up_state() -> Self {
        Self { down: c(0.0, 0.0), up: c(1.0, 0.0) }
    }

    /// (|↓⟩ + |↑⟩)/√2 and friends; eigenstates of the rotated bases.
    pub fn plus_x() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { down: c(s, 0.0), up: c(s, 0.0) }
    }

    pub fn minus_x() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { down: c(s, 0.0), up: c(-s, 0.0) }
    }

    pub fn plus_y() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { down: c(s, 0.0), up: c(0.0, s) }
    }

    pub fn minus_y() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { down: c(s, 0.0), up: c(0.0, -s) }
    }

    /// The six unbiased states used for process-fidelity averages.
    pub fn six_states() -> [Self; 6] {
        [
            Self::down_state(),
            Self::up_state(),
            Self::plus_x(),
            Self::minus_x(),
            Self::plus_y(),
            Self::minus_y(),
        ]
    }

    pub fn norm(&self) -> f64 {
        (self.down.norm_sqr() + self.up.norm_sqr()).sqrt()
    }

    pub fn to_state(&self, label: &str) -> StateVector {
        let space = HilbertSpace::single(label, 2);
        let v = crate::CVector::from_column_slice(&[self.down, self.up]);
        StateVector::new_unnormalized(space, v).expect("finite amplitudes")
    }

    pub fn to_density(&self, label: &str) -> DensityMatrix {
        self.to_state(label).projector()
    }
}

/// Fixed protocol error parameters. Fidelity-type entries are Bloch
/// contractions in \\[0,1\\]; efficiencies are plain probabilities.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrorModel {
    /// State-preparation quality (1 = perfect).
    pub prep_fidelity: f64,
    /// Spatial mode matching ξ between impinging light and the cavity
    /// mode; unmatched light reflects without interacting.
    pub mode_matching: f64,
    /// Probability of an incoherent Raman scattering event before the
    /// cavity emission; scattered photons are depolarized and delayed.
    pub scattering_prob: f64,
    /// Single-photon detector efficiency.
    pub detector_efficiency: f64,
    /// Ground-state dephasing rate of the stored qubit, 1/s.
    pub memory_dephasing_rate: f64,
    /// State-readout quality (1 = perfect).
    pub readout_fidelity: f64,
    /// Measured end-to-end photon generation efficiency of the node.
    pub emit_efficiency: f64,
    /// Measured end-to-end photon storage efficiency of the node.
    pub store_efficiency: f64,
}

impl Default for ErrorModel {
    fn default() -> Self {
        Self {
            prep_fidelity: 1.0,
            mode_matching: 1.0,
            scattering_prob: 0.0,
            detector_efficiency: 1.0,
            memory_dephasing_rate: 0.0,
            readout_fidelity: 1.0,
            emit_efficiency: 1.0,
            store_efficiency: 1.0,
        }
    }
}

impl ErrorModel {
    pub const IDEAL: ErrorModel = ErrorModel {
        prep_fidelity: 1.0,
        mode_matching: 1.0,
        scattering_prob: 0.0,
        detector_efficiency: 1.0,
        memory_dephasing_rate: 0.0,
        readout_fidelity: 1.0,
        emit_efficiency: 1.0,
        store_efficiency: 1.0,
    };

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("prep_fidelity", self.prep_fidelity),
            ("mode_matching", self.mode_matching),
            ("scattering_prob", self.scattering_prob),
            ("detector_efficiency", self.detector_efficiency),
            ("readout_fidelity", self.readout_fidelity),
            ("emit_efficiency", self.emit_efficiency),
            ("store_efficiency", self.store_efficiency),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} not in [0,1]")));
            }
        }
        if self.memory_dephasing_rate < 0.0 {
            return Err(Error::InvalidParameter("dephasing rate must be nonnegative".into()));
        }
        Ok(())
    }
}

/// One branch of a protocol run: herald flag, the state of the surviving
/// parties (None when everything was lost), and the branch probability.
#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    pub success: bool,
    pub state: Option<DensityMatrix>,
    pub efficiency_weight: f64,
    /// Short branch tag for reporting ("ok", "scattered", "lost", …).
    pub label: String,
    /// Scattering delays the emission; early-click post-selection drops
    /// these branches.
    pub delayed: bool,
}

impl ProtocolOutcome {
    pub fn total_weight(outcomes: &[ProtocolOutcome]) -> f64 {
        outcomes.iter().map(|o| o.efficiency_weight).sum()
    }

    /// Herald probability (sum of successful branch weights).
    pub fn success_weight(outcomes: &[ProtocolOutcome]) -> f64 {
        outcomes.iter().filter(|o| o.success).map(|o| o.efficiency_weight).sum()
    }

    /// Weight-averaged fidelity of the successful branches against a pure
    /// target.
    pub fn mean_success_fidelity(
        outcomes: &[ProtocolOutcome],
        target: &StateVector,
    ) -> Result<f64> {
        let mut acc = 0.0;
        let mut weight = 0.0;
        for o in outcomes.iter().filter(|o| o.success) {
            let state = o
                .state
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("successful branch without state".into()))?;
            acc += o.efficiency_weight * crate::hilbert::fidelity_pure(target, state)?;
            weight += o.efficiency_weight;
        }
        if weight == 0.0 {
            return Err(Error::InvalidParameter("no successful branches".into()));
        }
        Ok(acc / weight)
    }
}

/// Pauli matrices in the (↓, ↑) basis order with |↑⟩ the +z pole:
/// σ_z = diag(−1, +1), σ_x swaps, σ_y = [[0, i], [−i, 0]].
pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
}

/// Rotation R_n(θ) = exp(iθ n·σ/2) with axis
/// n ∝ cos(φ) x + sin(φ) y + tilt · z (tilt = Δ_r/Ω_r), normalized
/// internally.
pub fn rotation_matrix(theta: f64, phi: f64, tilt: f64) -> CMatrix {
    let norm = (1.0 + tilt * tilt).sqrt();
    let (nx, ny, nz) = (phi.cos() / norm, phi.sin() / norm, tilt / norm);
    let n_dot_sigma = sigma_x() * c(nx, 0.0) + sigma_y() * c(ny, 0.0) + sigma_z() * c(nz, 0.0);
    let half = theta / 2.0;
    CMatrix::identity(2, 2) * c(half.cos(), 0.0) + n_dot_sigma * c(0.0, half.sin())
}

/// Applies R_n(θ) to a pure atomic qubit.
pub fn bloch_rotation(q: &AtomQubit, theta: f64, phi: f64, tilt: f64) -> Result<AtomQubit> {
    for v in [theta, phi, tilt] {
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    let u = rotation_matrix(theta, phi, tilt);
    let down = u[(0, 0)] * q.down + u[(0, 1)] * q.up;
    let up = u[(1, 0)] * q.down + u[(1, 1)] * q.up;
    AtomQubit::new(down, up)
}

/// Applies R_n(θ) to one labeled qubit of a density matrix.
pub fn bloch_rotation_density(
    rho: &DensityMatrix,
    label: &str,
    theta: f64,
    phi: f64,
    tilt: f64,
) -> Result<DensityMatrix> {
    let u = Operator::embed(rho.space(), label, &rotation_matrix(theta, phi, tilt))?;
    let mat = u.matrix() * rho.matrix() * u.matrix().adjoint();
    Ok(DensityMatrix::from_matrix_unchecked(rho.space().clone(), mat))
}

/// Replaces one labeled qubit by the maximally mixed state with weight
/// 1−strength (the depolarizing/Bloch-contraction channel), via the Pauli
/// twirl identity Σ_P PρP/4 = I/2 ⊗ tr ρ.
pub fn depolarize_label(rho: &DensityMatrix, label: &str, strength: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&strength) {
        return Err(Error::InvalidParameter(format!("strength {strength} not in [0,1]")));
    }
    if rho.space().factor_dim(label)? != 2 {
        return Err(Error::DimensionMismatch("depolarization targets a qubit factor".into()));
    }
    let mut twirl = rho.matrix().clone();
    for pauli in [sigma_x(), sigma_y(), sigma_z()] {
        let p = Operator::embed(rho.space(), label, &pauli)?;
        twirl += p.matrix() * rho.matrix() * p.matrix();
    }
    // twirl/4 = I/2 ⊗ tr_label ρ.
    let mat = rho.matrix() * c(strength, 0.0) + twirl * c((1.0 - strength) / 4.0, 0.0);
    Ok(DensityMatrix::from_matrix_unchecked(rho.space().clone(), mat))
}

/// Pure dephasing of one labeled qubit in the z basis: off-diagonal
/// coherences shrink by e^{−rate·t}.
pub fn dephase_label(rho: &DensityMatrix, label: &str, rate: f64, time: f64) -> Result<DensityMatrix> {
    if rate < 0.0 || time < 0.0 {
        return Err(Error::InvalidParameter("rate and time must be nonnegative".into()));
    }
    let keep = 1.0 - (-rate * time).exp();
    let z = Operator::embed(rho.space(), label, &sigma_z())?;
    let zz = z.matrix() * rho.matrix() * z.matrix();
    let mat = rho.matrix() * c(1.0 - keep / 2.0, 0.0) + zz * c(keep / 2.0, 0.0);
    Ok(DensityMatrix::from_matrix_unchecked(rho.space().clone(), mat))
}

/// Maps a polarization qubit onto the corresponding photon-qubit pure state
/// on a labeled 2-dim factor (L, R order).
pub fn polarization_to_state(p: &PolarizationQubit, label: &str) -> StateVector {
    let space = HilbertSpace::single(label, 2);
    let v = crate::CVector::from_column_slice(&[p.l, p.r]);
    StateVector::new_unnormalized(space, v).expect("finite amplitudes")
}
