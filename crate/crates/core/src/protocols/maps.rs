//! Atom↔photon state maps and their remote compositions.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, HilbertSpace, StateVector};
use crate::photonics::PolarizationQubit;
use crate::protocols::{depolarize_label, AtomQubit, ErrorModel, ProtocolOutcome};
use crate::CVector;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const PHOTON_LABEL: &str = "photon";
pub const ATOM_LABEL: &str = "atom";
pub const ATOM_A_LABEL: &str = "atom_a";
pub const ATOM_B_LABEL: &str = "atom_b";

/// Ideal emission map: α|↑⟩ + β|↓⟩ → α|↺⟩ + β|↻⟩, the atom ending in
/// m_F = 0. In amplitude terms (photon L, R) = (atom ↑, atom ↓).
pub fn emit_map(atom: &AtomQubit) -> PolarizationQubit {
    PolarizationQubit { l: atom.up, r: atom.down }
}

/// Ideal storage map for an impinging photon: α|↺⟩ + β|↻⟩ → α|↓⟩ + β|↑⟩.
pub fn store_map(photon: &PolarizationQubit) -> AtomQubit {
    AtomQubit { down: photon.l, up: photon.r }
}

/// Atom-to-photon state transfer with branch bookkeeping.
///
/// Branches: a clean photon carrying the (preparation-degraded) qubit; a
/// scattered photon (depolarized, delayed); no photon at all.
pub fn emit_state_transfer(atom: &AtomQubit, err: &ErrorModel) -> Result<Vec<ProtocolOutcome>> {
    err.validate()?;
    let photon = emit_map(atom);
    let ideal = crate::protocols::polarization_to_state(&photon, PHOTON_LABEL).projector();
    let clean = depolarize_label(&ideal, PHOTON_LABEL, err.prep_fidelity)?;
    let mixed = DensityMatrix::maximally_mixed(HilbertSpace::single(PHOTON_LABEL, 2));
    let p_emit = err.emit_efficiency;
    Ok(vec![
        ProtocolOutcome {
            success: true,
            state: Some(clean),
            efficiency_weight: p_emit * (1.0 - err.scattering_prob),
            label: "ok".into(),
            delayed: false,
        },
        ProtocolOutcome {
            success: true,
            state: Some(mixed),
            efficiency_weight: p_emit * err.scattering_prob,
            label: "scattered".into(),
            delayed: true,
        },
        ProtocolOutcome {
            success: false,
            state: None,
            efficiency_weight: 1.0 - p_emit,
            label: "no_photon".into(),
            delayed: false,
        },
    ])
}

/// Pure atom-photon entangled state (|↓,↺⟩ − |↑,↻⟩)/√2 on
/// (atom ⊗ photon); the minus sign is the experimentally realized branch
/// of the Clebsch-Gordan pair and is fixed here once.
pub fn entangled_pair_state(atom_label: &str, photon_label: &str) -> StateVector {
    let space = HilbertSpace::new([(atom_label, 2), (photon_label, 2)]).expect("distinct labels");
    let mut v = CVector::zeros(4);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    v[space.flat_index(&[0, 0])] = c(s, 0.0); // |↓, L⟩
    v[space.flat_index(&[1, 1])] = c(-s, 0.0); // −|↑, R⟩
    StateVector::new(space, v).expect("normalized")
}

/// Entangled-photon emission from m_F = 0 with branch bookkeeping.
/// Preparation errors contract the atomic half of the pair.
pub fn emit_entangled_photon(err: &ErrorModel) -> Result<Vec<ProtocolOutcome>> {
    err.validate()?;
    let ideal = entangled_pair_state(ATOM_LABEL, PHOTON_LABEL).projector();
    let clean = depolarize_label(&ideal, ATOM_LABEL, err.prep_fidelity)?;
    // Scattered photon: polarization fully mixed, atomic correlations gone.
    let scattered = depolarize_label(&ideal, PHOTON_LABEL, 0.0)?;
    let p_emit = err.emit_efficiency;
    Ok(vec![
        ProtocolOutcome {
            success: true,
            state: Some(clean),
            efficiency_weight: p_emit * (1.0 - err.scattering_prob),
            label: "ok".into(),
            delayed: false,
        },
        ProtocolOutcome {
            success: true,
            state: Some(scattered),
            efficiency_weight: p_emit * err.scattering_prob,
            label: "scattered".into(),
            delayed: true,
        },
        ProtocolOutcome {
            success: false,
            state: None,
            efficiency_weight: 1.0 - p_emit,
            label: "no_photon".into(),
            delayed: false,
        },
    ])
}

/// Photon storage: herald false when the photon is absent; otherwise the
/// polarization lands on the Zeeman pair, degraded by the storage node's
/// preparation quality.
pub fn store_photon(
    photon: Option<&PolarizationQubit>,
    err: &ErrorModel,
) -> Result<Vec<ProtocolOutcome>> {
    err.validate()?;
    let Some(photon) = photon else {
        return Ok(vec![ProtocolOutcome {
            success: false,
            state: None,
            efficiency_weight: 1.0,
            label: "no_photon".into(),
            delayed: false,
        }]);
    };
    let atom = store_map(photon);
    let ideal = atom.to_density(ATOM_LABEL);
    let stored = depolarize_label(&ideal, ATOM_LABEL, err.prep_fidelity)?;
    Ok(vec![
        ProtocolOutcome {
            success: true,
            state: Some(stored),
            efficiency_weight: err.store_efficiency,
            label: "stored".into(),
            delayed: false,
        },
        ProtocolOutcome {
            success: false,
            state: None,
            efficiency_weight: 1.0 - err.store_efficiency,
            label: "not_stored".into(),
            delayed: false,
        },
    ])
}

/// Reflection from the cavity in the fast-cavity regime exchanges the
/// photonic and atomic qubits: (α_p, β_p) ⊗ (α_a, β_a) →
/// (α_a, β_a) ⊗ (α_p, β_p) in the fixed (↺,↻)/(↓,↑) bases. The caller
/// asserts C ≫ 1.
pub fn swap_by_reflection(
    atom: &AtomQubit,
    photon: &PolarizationQubit,
) -> (AtomQubit, PolarizationQubit) {
    (
        AtomQubit { down: photon.l, up: photon.r },
        PolarizationQubit { l: atom.down, r: atom.up },
    )
}

/// Remote state transfer A → B: emit at A, traverse the lossy channel
/// (flipping the circular labels on arrival), store at B.
///
/// The conditioned states of the successful branches are independent of the
/// channel survival η by construction; η only scales weights.
pub fn remote_state_transfer(
    sender: &AtomQubit,
    channel_survival: f64,
    err_a: &ErrorModel,
    err_b: &ErrorModel,
) -> Result<Vec<ProtocolOutcome>> {
    if !(0.0..=1.0).contains(&channel_survival) {
        return Err(Error::InvalidParameter("channel survival must lie in [0,1]".into()));
    }
    err_a.validate()?;
    err_b.validate()?;
    let emission = emit_state_transfer(sender, err_a)?;
    let mut outcomes = Vec::new();
    let mut success_total = 0.0;
    for branch in emission.into_iter().filter(|o| o.success) {
        let photon_rho = branch.state.expect("successful emission carries a photon");
        // Propagation flip: swap the circular components (X conjugation on
        // the photon factor).
        let flip = crate::hilbert::Operator::embed(
            photon_rho.space(),
            PHOTON_LABEL,
            &crate::protocols::sigma_x(),
        )?;
        let flipped = flip.matrix() * photon_rho.matrix() * flip.matrix();
        // Relabel (L,R) → (↓,↑): the storage map is the identity on
        // amplitudes in these bases.
        let atom_space = HilbertSpace::single(ATOM_B_LABEL, 2);
        let stored_ideal = DensityMatrix::from_matrix_unchecked(atom_space, flipped);
        let stored = depolarize_label(&stored_ideal, ATOM_B_LABEL, err_b.prep_fidelity)?;
        let weight = branch.efficiency_weight * channel_survival * err_b.store_efficiency;
        success_total += weight;
        outcomes.push(ProtocolOutcome {
            success: true,
            state: Some(stored),
            efficiency_weight: weight,
            label: branch.label,
            delayed: branch.delayed,
        });
    }
    outcomes.push(ProtocolOutcome {
        success: false,
        state: None,
        efficiency_weight: 1.0 - success_total,
        label: "lost".into(),
        delayed: false,
    });
    Ok(outcomes)
}

/// Remote entanglement A–B: entangled emission at A, lossy channel, storage
/// at B; the ideal surviving state is the two-atom singlet
/// (|↓⟩_A|↑⟩_B − |↑⟩_A|↓⟩_B)/√2.
pub fn remote_entangle(
    channel_survival: f64,
    err_a: &ErrorModel,
    err_b: &ErrorModel,
) -> Result<Vec<ProtocolOutcome>> {
    if !(0.0..=1.0).contains(&channel_survival) {
        return Err(Error::InvalidParameter("channel survival must lie in [0,1]".into()));
    }
    err_a.validate()?;
    err_b.validate()?;
    // Work on (atom_a ⊗ photon) and relabel the photon factor to atom_b at
    // the end.
    let ideal = entangled_pair_state(ATOM_A_LABEL, PHOTON_LABEL).projector();
    let clean_pair = depolarize_label(&ideal, ATOM_A_LABEL, err_a.prep_fidelity)?;
    let scattered_pair = depolarize_label(&ideal, PHOTON_LABEL, 0.0)?;

    let two_atoms = HilbertSpace::new([(ATOM_A_LABEL, 2), (ATOM_B_LABEL, 2)])?;
    let store = |pair: &DensityMatrix| -> Result<DensityMatrix> {
        let flip =
            crate::hilbert::Operator::embed(pair.space(), PHOTON_LABEL, &crate::protocols::sigma_x())?;
        let flipped = flip.matrix() * pair.matrix() * flip.matrix();
        let relabeled = DensityMatrix::from_matrix_unchecked(two_atoms.clone(), flipped);
        depolarize_label(&relabeled, ATOM_B_LABEL, err_b.prep_fidelity)
    };

    let p_clean = err_a.emit_efficiency
        * (1.0 - err_a.scattering_prob)
        * channel_survival
        * err_b.store_efficiency;
    let p_scattered = err_a.emit_efficiency
        * err_a.scattering_prob
        * channel_survival
        * err_b.store_efficiency;
    Ok(vec![
        ProtocolOutcome {
            success: true,
            state: Some(store(&clean_pair)?),
            efficiency_weight: p_clean,
            label: "ok".into(),
            delayed: false,
        },
        ProtocolOutcome {
            success: true,
            state: Some(store(&scattered_pair)?),
            efficiency_weight: p_scattered,
            label: "scattered".into(),
            delayed: true,
        },
        ProtocolOutcome {
            success: false,
            state: None,
            efficiency_weight: 1.0 - p_clean - p_scattered,
            label: "lost".into(),
            delayed: false,
        },
    ])
}

/// The two-atom singlet (|↓⟩_A|↑⟩_B − |↑⟩_A|↓⟩_B)/√2 targeted by
/// [`remote_entangle`].
pub fn two_atom_singlet() -> StateVector {
    let space = HilbertSpace::new([(ATOM_A_LABEL, 2), (ATOM_B_LABEL, 2)]).expect("distinct");
    let mut v = CVector::zeros(4);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    v[space.flat_index(&[0, 1])] = c(s, 0.0);
    v[space.flat_index(&[1, 0])] = c(-s, 0.0);
    StateVector::new(space, v).expect("normalized")
}


/// Holds a stored qubit in memory for `duration` seconds: ground-state
/// coherences decay at the error model's dephasing rate while populations
/// stay put.
pub fn hold_in_memory(
    state: &DensityMatrix,
    label: &str,
    err: &ErrorModel,
    duration: f64,
) -> Result<DensityMatrix> {
    err.validate()?;
    crate::protocols::dephase_label(state, label, err.memory_dephasing_rate, duration)
}
