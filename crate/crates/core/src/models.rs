//! Hamiltonians, collapse operators, and closed-form eigenstructure for the
//! two-level Jaynes-Cummings system and the three-level Λ system.
//!
//! Numerics default to the frame rotating at the cavity frequency: bare
//! optical frequencies (~1e15 rad/s) are numerically hostile, and every
//! observable of interest is a frequency gap. The lab frame is retained for
//! documentation parity; eigenvalue tests compare frame-independent gaps.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{matrices, HilbertSpace, Operator, StateVector};
use crate::params::RateSet;
use crate::CMatrix;

/// Two-level atom basis indices: coupled ground state, excited state.
pub const ATOM2_C: usize = 0;
pub const ATOM2_E: usize = 1;

/// Three-level atom basis indices, ordering fixed as (u, c, e).
pub const ATOM3_U: usize = 0;
pub const ATOM3_C: usize = 1;
pub const ATOM3_E: usize = 2;

/// Subsystem labels used by the model builders.
pub const ATOM_LABEL: &str = "atom";
pub const CAVITY_LABEL: &str = "cavity";

/// Reference frame for Hamiltonian construction.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Frame {
    /// Rotating at the cavity frequency; only detunings appear.
    #[default]
    RotatingAtCavity,
    /// Lab frame with the given absolute cavity frequency (rad/s).
    Lab { omega_c: f64 },
}

/// Parameters of the two-level Jaynes-Cummings model.
#[derive(Debug, Clone)]
pub struct JCParams {
    pub rates: RateSet,
    /// Fock truncation: the cavity keeps photon numbers 0..=n_max.
    pub n_max: usize,
    pub frame: Frame,
}

impl JCParams {
    pub fn new(rates: RateSet, n_max: usize) -> Result<Self> {
        rates.validate()?;
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        Ok(Self { rates, n_max, frame: Frame::RotatingAtCavity })
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    /// (atom 2-level) ⊗ (Fock 0..=n_max) composite space.
    pub fn space(&self) -> HilbertSpace {
        HilbertSpace::new([(ATOM_LABEL, 2), (CAVITY_LABEL, self.n_max + 1)])
            .expect("fixed labels are distinct")
    }
}

/// Parameters of the three-level Λ system.
///
/// The Hamiltonian is built in the frame rotating at the cavity frequency
/// for the photon and at the control-laser frequency for |u⟩. At two-photon
/// (Raman) resonance the |u⟩ diagonal term vanishes; `raman_detuning`
/// expresses a deviation from that condition. The bare splitting Δ_u of the
/// rate set enters only through the validity flag: the direct coupling of
/// |u⟩ to the resonator mode is neglected, which requires |Δ_u| ≫ g.
#[derive(Debug, Clone)]
pub struct LambdaParams {
    pub rates: RateSet,
    pub n_max: usize,
    /// Two-photon detuning in the effective frame; 0 at Raman resonance.
    pub raman_detuning: f64,
}

impl LambdaParams {
    pub fn new(rates: RateSet, n_max: usize) -> Result<Self> {
        rates.validate()?;
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        Ok(Self { rates, n_max, raman_detuning: 0.0 })
    }

    /// True when |Δ_u| > 10 g, the regime where neglecting the direct
    /// u↔cavity coupling is justified.
    pub fn large_detuning(&self) -> bool {
        self.rates.delta_u.abs() > 10.0 * self.rates.g
    }

    pub fn space(&self) -> HilbertSpace {
        HilbertSpace::new([(ATOM_LABEL, 3), (CAVITY_LABEL, self.n_max + 1)])
            .expect("fixed labels are distinct")
    }
}

/// Which dressed branch a level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
    Ground,
}

/// One rung of the dressed-state ladder.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DressedLevel {
    pub excitation: usize,
    pub branch: Branch,
    /// Energy in frequency units (rad/s), in the frame of the params.
    pub energy: f64,
}

fn real(m: f64) -> C64 {
    C64::new(m, 0.0)
}

/// Jaynes-Cummings Hamiltonian on (2-level atom) ⊗ (Fock n_max+1).
///
/// Rotating frame: H = Δ_ac σ_ee + g (σ_ec a + σ_ce a†).
/// Lab frame adds ω_c (a†a + σ_ee) with ω_a = ω_c + Δ_ac.
pub fn jc_hamiltonian(p: &JCParams) -> Result<Operator> {
    let space = p.space();
    let sigma_ce = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(2, ATOM2_C, ATOM2_E))?;
    let sigma_ee = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(2, ATOM2_E, ATOM2_E))?;
    let a = Operator::embed(&space, CAVITY_LABEL, &matrices::annihilation(p.n_max + 1))?;

    let coupling = sigma_ce.adjoint().mul(&a)?.add_scaled(real(1.0), &sigma_ce.mul(&a.adjoint())?)?;
    let mut h = sigma_ee.scale(real(p.rates.delta_ac)).add_scaled(real(p.rates.g), &coupling)?;
    if let Frame::Lab { omega_c } = p.frame {
        let number = a.adjoint().mul(&a)?;
        h = h
            .add_scaled(real(omega_c), &number)?
            .add_scaled(real(omega_c), &sigma_ee)?;
    }
    h.hermitian_checked()
}

/// Closed-form dressed-level energies (E_{N,+}, E_{N,−}) for N ≥ 1 quanta,
/// in the frame of the params:
/// lab: N ω_c + Δ_ac/2 ± √(Ω_N² + Δ_ac²)/2 with Ω_N = 2g√N;
/// rotating: the same minus N ω_c.
pub fn dressed_spectrum(p: &JCParams, n: usize) -> Result<(f64, f64)> {
    if n == 0 || n > p.n_max {
        return Err(Error::InvalidParameter(format!(
            "excitation number {n} outside 1..=n_max={}",
            p.n_max
        )));
    }
    let omega_n = 2.0 * p.rates.g * (n as f64).sqrt();
    let delta = p.rates.delta_ac;
    let split = (omega_n * omega_n + delta * delta).sqrt();
    let base = match p.frame {
        Frame::RotatingAtCavity => 0.0,
        Frame::Lab { omega_c } => n as f64 * omega_c,
    };
    Ok((base + delta / 2.0 + split / 2.0, base + delta / 2.0 - split / 2.0))
}

/// Dressed states |N,±⟩ as vectors on the composite space.
///
/// On resonance these are (|e,N−1⟩ ± |c,N⟩)/√2; in general the eigenvectors
/// of the N-excitation 2×2 block. The phase is fixed so the |e,N−1⟩
/// amplitude is real and nonnegative.
pub fn dressed_states(p: &JCParams, n: usize) -> Result<(StateVector, StateVector)> {
    if n == 0 || n > p.n_max {
        return Err(Error::InvalidParameter(format!(
            "excitation number {n} outside 1..=n_max={}",
            p.n_max
        )));
    }
    let space = p.space();
    let delta = p.rates.delta_ac;
    let big_g = p.rates.g * (n as f64).sqrt();
    // 2x2 block in basis {|e,N-1>, |c,N>} (rotating frame):
    // [[Δ_ac, G], [G, 0]] with eigenvector (E, G) for eigenvalue E.
    let (e_plus, e_minus) = dressed_spectrum(
        &JCParams { rates: p.rates, n_max: p.n_max, frame: Frame::RotatingAtCavity },
        n,
    )?;
    let make = |energy: f64| -> Result<StateVector> {
        let (ae, ac) = if delta == 0.0 {
            // Resonant closed form keeps the printed ± convention exact.
            let s = std::f64::consts::FRAC_1_SQRT_2;
            (s, if energy >= 0.0 { s } else { -s })
        } else {
            let norm = (energy * energy + big_g * big_g).sqrt();
            let mut ae = energy / norm;
            let mut ac = big_g / norm;
            if ae < 0.0 {
                ae = -ae;
                ac = -ac;
            }
            (ae, ac)
        };
        let mut v = crate::CVector::zeros(space.dim());
        v[space.flat_index(&[ATOM2_E, n - 1])] = real(ae);
        v[space.flat_index(&[ATOM2_C, n])] = real(ac);
        StateVector::new(space.clone(), v)
    };
    Ok((make(e_plus)?, make(e_minus)?))
}

/// Jump operators of the damped system: √(2γ) σ_ce and √(2κ) a.
pub fn collapse_operators_jc(p: &JCParams) -> Result<Vec<Operator>> {
    let space = p.space();
    let sigma_ce = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(2, ATOM2_C, ATOM2_E))?;
    let a = Operator::embed(&space, CAVITY_LABEL, &matrices::annihilation(p.n_max + 1))?;
    Ok(vec![
        sigma_ce.scale(real((2.0 * p.rates.gamma).sqrt())),
        a.scale(real((2.0 * p.rates.kappa()).sqrt())),
    ])
}

/// Jump operators of the damped Λ system (decay e→c into the cavity-coupled
/// line plus cavity decay).
pub fn collapse_operators_lambda(p: &LambdaParams) -> Result<Vec<Operator>> {
    let space = p.space();
    let sigma_ce = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(3, ATOM3_C, ATOM3_E))?;
    let a = Operator::embed(&space, CAVITY_LABEL, &matrices::annihilation(p.n_max + 1))?;
    Ok(vec![
        sigma_ce.scale(real((2.0 * p.rates.gamma).sqrt())),
        a.scale(real((2.0 * p.rates.kappa()).sqrt())),
    ])
}

/// Optional ground-state dephasing jump operator between |u⟩ and |c⟩ at the
/// given rate, for error-model studies.
pub fn ground_dephasing_operator(p: &LambdaParams, rate: f64) -> Result<Operator> {
    if rate < 0.0 {
        return Err(Error::InvalidParameter("dephasing rate must be nonnegative".into()));
    }
    let space = p.space();
    let proj_u = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(3, ATOM3_U, ATOM3_U))?;
    let proj_c = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(3, ATOM3_C, ATOM3_C))?;
    Ok(proj_c.add_scaled(real(-1.0), &proj_u)?.scale(real((rate / 2.0).sqrt())))
}

/// Λ-system Hamiltonian on (3-level atom) ⊗ Fock, in the two-photon-resonant
/// rotating frame:
/// H = Δ_ac σ_ee + δ₂ σ_uu + g (a†σ_ce + σ_ec a) + (Ω_L/2)(σ_ue + σ_eu),
/// with δ₂ the Raman detuning (zero at two-photon resonance).
pub fn lambda_hamiltonian(p: &LambdaParams) -> Result<Operator> {
    let space = p.space();
    let sigma_ee = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(3, ATOM3_E, ATOM3_E))?;
    let sigma_uu = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(3, ATOM3_U, ATOM3_U))?;
    let sigma_ce = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(3, ATOM3_C, ATOM3_E))?;
    let sigma_ue = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(3, ATOM3_U, ATOM3_E))?;
    let a = Operator::embed(&space, CAVITY_LABEL, &matrices::annihilation(p.n_max + 1))?;

    let jc = a.adjoint().mul(&sigma_ce)?.add_scaled(real(1.0), &sigma_ce.adjoint().mul(&a)?)?;
    let laser = sigma_ue.add_scaled(real(1.0), &sigma_ue.adjoint())?;
    sigma_ee
        .scale(real(p.rates.delta_ac))
        .add_scaled(real(p.raman_detuning), &sigma_uu)?
        .add_scaled(real(p.rates.g), &jc)?
        .add_scaled(real(p.rates.omega_l / 2.0), &laser)?
        .hermitian_checked()
}

/// Single-excitation eigenvalues (E₀, E₊, E₋) of the Λ system relative to
/// the empty-cavity resonance:
/// E₀ = 0, E± = (Δ_ac ± √(4g² + Δ_ac² + Ω_L²))/2.
///
/// The absolute offset convention (the lab-frame values sit at ω_c plus
/// these) is irrelevant to gaps and fixed here at the empty-cavity
/// frequency.
pub fn eit_spectrum(p: &LambdaParams) -> Result<(f64, f64, f64)> {
    let delta = p.rates.delta_ac;
    let root = (4.0 * p.rates.g * p.rates.g + delta * delta + p.rates.omega_l * p.rates.omega_l)
        .sqrt();
    Ok((0.0, (delta + root) / 2.0, (delta - root) / 2.0))
}

/// The coherent dark state cosθ|u,0⟩ − sinθ|c,1⟩ with tanθ = Ω_L/(2g),
/// on the (3-level) ⊗ (Fock 0..=1) space.
pub fn dark_state(g: f64, omega_l: f64) -> Result<StateVector> {
    if g == 0.0 && omega_l == 0.0 {
        return Err(Error::InvalidParameter(
            "dark-state mixing angle undefined for g = Ω_L = 0".into(),
        ));
    }
    let space = HilbertSpace::new([(ATOM_LABEL, 3), (CAVITY_LABEL, 2)])?;
    let theta = (omega_l / (2.0 * g)).atan();
    let mut v = crate::CVector::zeros(space.dim());
    v[space.flat_index(&[ATOM3_U, 0])] = real(theta.cos());
    v[space.flat_index(&[ATOM3_C, 1])] = real(-theta.sin());
    StateVector::new(space, v)
}

/// The bright combination sinθ|u,0⟩ + cosθ|c,1⟩ orthogonal to the dark
/// state.
pub fn bright_state(g: f64, omega_l: f64) -> Result<StateVector> {
    if g == 0.0 && omega_l == 0.0 {
        return Err(Error::InvalidParameter(
            "mixing angle undefined for g = Ω_L = 0".into(),
        ));
    }
    let space = HilbertSpace::new([(ATOM_LABEL, 3), (CAVITY_LABEL, 2)])?;
    let theta = (omega_l / (2.0 * g)).atan();
    let mut v = crate::CVector::zeros(space.dim());
    v[space.flat_index(&[ATOM3_U, 0])] = real(theta.sin());
    v[space.flat_index(&[ATOM3_C, 1])] = real(theta.cos());
    StateVector::new(space, v)
}

/// Total excitation-number operator σ_ee + a†a on the JC space.
pub fn excitation_number(p: &JCParams) -> Result<Operator> {
    let space = p.space();
    let sigma_ee = Operator::embed(&space, ATOM_LABEL, &matrices::ketbra(2, ATOM2_E, ATOM2_E))?;
    let a = Operator::embed(&space, CAVITY_LABEL, &matrices::annihilation(p.n_max + 1))?;
    sigma_ee.add_scaled(real(1.0), &a.adjoint().mul(&a)?)
}

/// Commutator [A, B].
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.mul(b)?.add_scaled(real(-1.0), &b.mul(a)?)
}

/// Projects a matrix onto the excitation-number-≤ k subspace of the JC
/// space; used to test conservation away from the truncation boundary.
pub fn truncate_to_excitation(p: &JCParams, m: &CMatrix, k: usize) -> CMatrix {
    let space = p.space();
    let d = space.dim();
    let mut out = m.clone();
    for i in 0..d {
        let mi = space.multi_index(i);
        let exc_i = mi[0] + mi[1];
        for j in 0..d {
            let mj = space.multi_index(j);
            let exc_j = mj[0] + mj[1];
            if exc_i > k || exc_j > k {
                out[(i, j)] = real(0.0);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{expectation, hermitian_eigenvalues};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const TWO_PI: f64 = std::f64::consts::TAU;

    fn fig4_rates() -> RateSet {
        RateSet::new(TWO_PI * 7e6, TWO_PI * 2.3e6, TWO_PI * 0.1e6, TWO_PI * 0.1e6, TWO_PI * 3e6)
            .unwrap()
    }

    #[test]
    fn uncoupled_hamiltonian_is_diagonal() {
        let mut rates = fig4_rates();
        rates.g = 0.0;
        rates.delta_ac = TWO_PI * 1e6;
        let p = JCParams::new(rates, 3).unwrap();
        let h = jc_hamiltonian(&p).unwrap();
        // Off-diagonal entries vanish; eigenvalues are the bare energies.
        let space = p.space();
        for i in 0..space.dim() {
            for j in 0..space.dim() {
                if i != j {
                    assert!(h.matrix()[(i, j)].norm() < 1e-18);
                }
            }
        }
        let e_c0 = h.matrix()[(space.flat_index(&[ATOM2_C, 0]), space.flat_index(&[ATOM2_C, 0]))];
        let e_e0 = h.matrix()[(space.flat_index(&[ATOM2_E, 0]), space.flat_index(&[ATOM2_E, 0]))];
        assert_abs_diff_eq!(e_c0.re, 0.0);
        assert_abs_diff_eq!(e_e0.re, rates.delta_ac, epsilon = 1e-6);
    }

    #[test]
    fn resonant_splitting_two_g_sqrt_n() {
        let p = JCParams::new(fig4_rates(), 5).unwrap();
        for n in [1usize, 4] {
            let (ep, em) = dressed_spectrum(&p, n).unwrap();
            assert_relative_eq!(ep - em, 2.0 * p.rates.g * (n as f64).sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn dressed_spectrum_matches_dense_diagonalization() {
        // Oracle: eigenvalues of the full matrix, all N ≤ n_max-1 and a
        // detuning sweep.
        let n_max = 5;
        for k in -10..=10 {
            let delta = k as f64 * fig4_rates().g;
            let rates = fig4_rates().with_delta_ac(delta);
            let p = JCParams::new(rates, n_max).unwrap();
            let h = jc_hamiltonian(&p).unwrap();
            let eigs = hermitian_eigenvalues(h.matrix());
            let scale = p.rates.g * 10.0;
            for n in 1..n_max {
                let (ep, em) = dressed_spectrum(&p, n).unwrap();
                for want in [ep, em] {
                    let best = eigs
                        .iter()
                        .map(|e| (e - want).abs())
                        .fold(f64::INFINITY, f64::min);
                    assert!(best / scale < 1e-10, "N={n} delta={delta:e}: residual {best:e}");
                }
            }
        }
    }

    #[test]
    fn dispersive_shift_asymptote() {
        // For Δ_ac = 100 g the |e,n>-like level shifts by (n+1) g²/Δ_ac
        // within 1%.
        let g = fig4_rates().g;
        let delta = 100.0 * g;
        let p = JCParams::new(fig4_rates().with_delta_ac(delta), 5).unwrap();
        for n in 0..3usize {
            let nn = n + 1; // excitation number of the |e,n> manifold
            let (ep, _) = dressed_spectrum(&p, nn).unwrap();
            // Rotating frame: bare |e,n> sits at Δ_ac; the + branch tends to
            // it for large positive detuning. Shift relative to bare:
            let shift = ep - delta;
            let expected = (n as f64 + 1.0) * g * g / delta;
            assert_relative_eq!(shift, expected, max_relative = 0.01);
        }
    }

    #[test]
    fn dressed_states_amplitudes() {
        let p = JCParams::new(fig4_rates(), 4).unwrap();
        let (plus, minus) = dressed_states(&p, 2).unwrap();
        let space = p.space();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(
            plus.amplitudes()[space.flat_index(&[ATOM2_E, 1])].re,
            s,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            plus.amplitudes()[space.flat_index(&[ATOM2_C, 2])].re,
            s,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            minus.amplitudes()[space.flat_index(&[ATOM2_C, 2])].re,
            -s,
            epsilon = 1e-12
        );
        // Orthonormal pair.
        assert!(plus.inner(&minus).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn dressed_states_decoupling_limit() {
        let p = JCParams::new(fig4_rates().with_delta_ac(1e4 * fig4_rates().g), 3).unwrap();
        let (plus, _) = dressed_states(&p, 1).unwrap();
        let space = p.space();
        let overlap = plus.amplitudes()[space.flat_index(&[ATOM2_E, 0])].norm();
        assert!(overlap > 0.999999, "overlap = {overlap}");
    }

    #[test]
    fn dressed_states_match_dense_eigenvectors() {
        let p = JCParams::new(fig4_rates().with_delta_ac(2.5 * fig4_rates().g), 4).unwrap();
        let h = jc_hamiltonian(&p).unwrap();
        for n in 1..=3usize {
            let (plus, minus) = dressed_states(&p, n).unwrap();
            let (ep, em) = dressed_spectrum(&p, n).unwrap();
            for (state, energy) in [(&plus, ep), (&minus, em)] {
                let hv = h.apply(state).unwrap();
                let residual: f64 = (hv.amplitudes()
                    - state.amplitudes() * C64::new(energy, 0.0))
                .norm();
                assert!(residual / energy.abs().max(p.rates.g) < 1e-10);
            }
        }
    }

    #[test]
    fn collapse_operator_rates() {
        let p = JCParams::new(fig4_rates(), 3).unwrap();
        let ls = collapse_operators_jc(&p).unwrap();
        let space = p.space();
        // <L2†L2> on |c,1> = 2κ.
        let c1 = StateVector::basis(space.clone(), &[ATOM2_C, 1]).projector();
        let l2d_l2 = ls[1].adjoint().mul(&ls[1]).unwrap();
        assert_relative_eq!(
            expectation(&l2d_l2, &c1).unwrap().re,
            2.0 * p.rates.kappa(),
            max_relative = 1e-12
        );
        // <L1†L1> on |e,0> = 2γ.
        let e0 = StateVector::basis(space.clone(), &[ATOM2_E, 0]).projector();
        let l1d_l1 = ls[0].adjoint().mul(&ls[0]).unwrap();
        assert_relative_eq!(
            expectation(&l1d_l1, &e0).unwrap().re,
            2.0 * p.rates.gamma,
            max_relative = 1e-12
        );
        // Vacuum annihilated by both.
        let vac = StateVector::basis(space, &[ATOM2_C, 0]);
        for l in &ls {
            assert!(l.apply(&vac).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn lambda_reduces_to_jc_when_laser_off() {
        let rates = fig4_rates().with_delta_ac(1.3 * fig4_rates().g);
        let lp = LambdaParams::new(rates, 2).unwrap();
        let h3 = lambda_hamiltonian(&lp).unwrap();
        let jp = JCParams::new(rates, 2).unwrap();
        let h2 = jc_hamiltonian(&jp).unwrap();
        // The {c,e} ⊗ Fock sector of H_Λ equals H_JC entrywise.
        let space3 = lp.space();
        let space2 = jp.space();
        let map2to3 = [ATOM3_C, ATOM3_E];
        for ai in 0..2 {
            for aj in 0..2 {
                for ni in 0..=2 {
                    for nj in 0..=2 {
                        let lhs = h3.matrix()[(
                            space3.flat_index(&[map2to3[ai], ni]),
                            space3.flat_index(&[map2to3[aj], nj]),
                        )];
                        let rhs = h2.matrix()[(
                            space2.flat_index(&[ai, ni]),
                            space2.flat_index(&[aj, nj]),
                        )];
                        assert!((lhs - rhs).norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_matrix_element_laser() {
        let rates = fig4_rates().with_omega_l(TWO_PI * 4e6);
        let lp = LambdaParams::new(rates, 1).unwrap();
        let h = lambda_hamiltonian(&lp).unwrap();
        let space = lp.space();
        let elem = h.matrix()[(space.flat_index(&[ATOM3_U, 0]), space.flat_index(&[ATOM3_E, 0]))];
        assert_relative_eq!(elem.re, rates.omega_l / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn eit_spectrum_matches_block_diagonalization() {
        for (omega_l, delta) in [
            (0.0, 0.0),
            (TWO_PI * 3e6, 0.0),
            (TWO_PI * 10e6, TWO_PI * 2e6),
            (TWO_PI * 1e6, -TWO_PI * 5e6),
        ] {
            let rates = fig4_rates().with_delta_ac(delta).with_omega_l(omega_l);
            let lp = LambdaParams::new(rates, 1).unwrap();
            let h = lambda_hamiltonian(&lp).unwrap();
            let space = lp.space();
            // One-excitation block spanned by {|u,0>, |c,1>, |e,0>}.
            let idx = [
                space.flat_index(&[ATOM3_U, 0]),
                space.flat_index(&[ATOM3_C, 1]),
                space.flat_index(&[ATOM3_E, 0]),
            ];
            let mut block = CMatrix::zeros(3, 3);
            for (bi, &i) in idx.iter().enumerate() {
                for (bj, &j) in idx.iter().enumerate() {
                    block[(bi, bj)] = h.matrix()[(i, j)];
                }
            }
            let eigs = hermitian_eigenvalues(&block);
            let (e0, ep, em) = eit_spectrum(&lp).unwrap();
            let mut want = [e0, ep, em];
            want.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let scale = rates.g.max(omega_l).max(delta.abs());
            for (have, want) in eigs.iter().zip(want) {
                assert!((have - want).abs() <= 1e-10 * scale, "have {have:e} want {want:e}");
            }
        }
    }

    #[test]
    fn eit_reduces_to_vacuum_rabi_pair() {
        let lp = LambdaParams::new(fig4_rates(), 1).unwrap();
        let (e0, ep, em) = eit_spectrum(&lp).unwrap();
        assert_abs_diff_eq!(e0, 0.0);
        assert_relative_eq!(ep, fig4_rates().g, max_relative = 1e-12);
        assert_relative_eq!(em, -fig4_rates().g, max_relative = 1e-12);
    }

    #[test]
    fn eit_peaks_move_outward_with_laser_power() {
        let mut prev = fig4_rates().g;
        for omega_l in [TWO_PI * 1e6, TWO_PI * 5e6, TWO_PI * 20e6] {
            let lp = LambdaParams::new(fig4_rates().with_omega_l(omega_l), 1).unwrap();
            let (e0, ep, _) = eit_spectrum(&lp).unwrap();
            assert_abs_diff_eq!(e0, 0.0); // central peak pinned
            assert!(ep > prev);
            prev = ep;
        }
    }

    #[test]
    fn dark_state_cases() {
        let g = TWO_PI * 5e6;
        // Ω_L = 0 gives |u,0>.
        let d0 = dark_state(g, 0.0).unwrap();
        let space = d0.space().clone();
        assert_abs_diff_eq!(
            d0.amplitudes()[space.flat_index(&[ATOM3_U, 0])].re,
            1.0,
            epsilon = 1e-12
        );
        // Ω_L = 2g gives (|u,0> - |c,1>)/√2.
        let d1 = dark_state(g, 2.0 * g).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(d1.amplitudes()[space.flat_index(&[ATOM3_U, 0])].re, s, epsilon = 1e-12);
        assert_abs_diff_eq!(
            d1.amplitudes()[space.flat_index(&[ATOM3_C, 1])].re,
            -s,
            epsilon = 1e-12
        );
        assert!(dark_state(0.0, 0.0).is_err());
    }

    #[test]
    fn dark_state_has_no_excited_component_under_hamiltonian() {
        // H_Λ |Λ₀⟩ has zero amplitude on |e,0⟩ for random (g, Ω_L, Δ_ac) at
        // two-photon resonance.
        for (g, omega_l, delta) in [
            (TWO_PI * 5e6, TWO_PI * 2e6, TWO_PI * 3e6),
            (TWO_PI * 1e6, TWO_PI * 9e6, -TWO_PI * 7e6),
            (TWO_PI * 4e6, TWO_PI * 4e6, TWO_PI * 0.3e6),
        ] {
            let rates = RateSet::new(g, TWO_PI * 1e6, 0.0, 0.0, TWO_PI * 3e6)
                .unwrap()
                .with_delta_ac(delta)
                .with_omega_l(omega_l);
            let lp = LambdaParams::new(rates, 1).unwrap();
            let h = lambda_hamiltonian(&lp).unwrap();
            let dark = dark_state(g, omega_l).unwrap();
            let hv = h.apply(&dark).unwrap();
            let space = lp.space();
            let e_amp = hv.amplitudes()[space.flat_index(&[ATOM3_E, 0])].norm();
            assert!(e_amp < 1e-9 * g, "e amplitude {e_amp:e}");
            // Dark state orthogonal to the bright combination.
            let bright = bright_state(g, omega_l).unwrap();
            assert!(dark.inner(&bright).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn excitation_number_conserved() {
        // [H, σ†σ + a†a] = 0 below the truncation boundary.
        let p = JCParams::new(fig4_rates().with_delta_ac(TWO_PI * 2e6), 5).unwrap();
        let h = jc_hamiltonian(&p).unwrap();
        let n_op = excitation_number(&p).unwrap();
        let comm = commutator(&h, &n_op).unwrap();
        let trunc = truncate_to_excitation(&p, comm.matrix(), p.n_max - 1);
        let scale = h.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let max = trunc.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max <= 1e-12 * scale);
    }

    #[test]
    fn blockade_anharmonicity() {
        // Rotating frame, Δ_ac = 0: E_{N,±} = ±g√N, so
        // E_{2,±} − 2 E_{1,±} = ∓(2−√2) g and the ladder spacing
        // E_{2,±} − E_{1,±} = ±(√2−1) g.
        let p = JCParams::new(fig4_rates(), 4).unwrap();
        let g = p.rates.g;
        let (e1p, e1m) = dressed_spectrum(&p, 1).unwrap();
        let (e2p, e2m) = dressed_spectrum(&p, 2).unwrap();
        let sqrt2 = 2f64.sqrt();
        assert_relative_eq!(e2p - 2.0 * e1p, -(2.0 - sqrt2) * g, max_relative = 1e-10);
        assert_relative_eq!(e2m - 2.0 * e1m, (2.0 - sqrt2) * g, max_relative = 1e-10);
        assert_relative_eq!(e2p - e1p, (sqrt2 - 1.0) * g, max_relative = 1e-10);
        assert_relative_eq!(e2m - e1m, -(sqrt2 - 1.0) * g, max_relative = 1e-10);
    }

    #[test]
    fn lab_frame_gaps_match_rotating_frame() {
        let rates = fig4_rates().with_delta_ac(TWO_PI * 1.7e6);
        let rot = JCParams::new(rates, 3).unwrap();
        let lab = JCParams::new(rates, 3).unwrap().with_frame(Frame::Lab { omega_c: TWO_PI * 1e9 });
        let (rp, rm) = dressed_spectrum(&rot, 1).unwrap();
        let (lp_, lm) = dressed_spectrum(&lab, 1).unwrap();
        assert_relative_eq!(rp - rm, lp_ - lm, max_relative = 1e-12);
    }

    #[test]
    fn ground_dephasing_operator_rate() {
        // Evolving (|u⟩+|c⟩)/√2 ⊗ |0⟩ under the dephasing jump alone
        // decays the u–c coherence as e^{−rate·t} and leaves populations
        // untouched.
        let rate = 2e6;
        let lp = LambdaParams::new(fig4_rates(), 1).unwrap();
        let l = ground_dephasing_operator(&lp, rate).unwrap();
        let space = lp.space();
        let mut v = crate::CVector::zeros(space.dim());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        v[space.flat_index(&[ATOM3_U, 0])] = C64::new(s, 0.0);
        v[space.flat_index(&[ATOM3_C, 0])] = C64::new(s, 0.0);
        let rho0 = StateVector::new(space.clone(), v).unwrap().projector();
        let h = crate::hilbert::Operator::zeros(space.clone());
        let t_grid = [0.0, 2e-7, 6e-7, 1e-6];
        let res = crate::dynamics::evolve(&rho0, &h, &[l], &t_grid).unwrap();
        let iu = space.flat_index(&[ATOM3_U, 0]);
        let ic = space.flat_index(&[ATOM3_C, 0]);
        for (t, state) in res.times.iter().zip(&res.states) {
            let coherence = state.matrix()[(iu, ic)].norm();
            assert_relative_eq!(
                coherence,
                0.5 * (-rate * t).exp(),
                max_relative = 1e-6,
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(state.matrix()[(iu, iu)].re, 0.5, epsilon = 1e-8);
        }
    }

    #[test]
    fn large_detuning_flag() {
        let rates = fig4_rates().with_delta_u(TWO_PI * 100e6);
        assert!(LambdaParams::new(rates, 1).unwrap().large_detuning());
        let rates = fig4_rates().with_delta_u(TWO_PI * 10e6);
        assert!(!LambdaParams::new(rates, 1).unwrap().large_detuning());
    }
}
