//! Closed-form scalar relations between physical cavity/atom parameters and
//! the coupling/decay rates consumed by all models.
//!
//! Every rate is an angular frequency in rad/s. The CLI converts to and from
//! "2π × MHz" at the boundary; keeping SI internally avoids factor-of-2π
//! bugs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Physical description of a Fabry-Perot style cavity and the coupled atomic
/// transition.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhysicalCavity {
    /// Optical wavelength, m.
    pub wavelength: f64,
    /// Resonator length, m.
    pub length: f64,
    /// Intensity reflectivities of the two mirrors, each in (0,1).
    pub mirror_reflectivity_1: f64,
    pub mirror_reflectivity_2: f64,
    /// Mode waist, m.
    pub waist: f64,
    /// Mode volume, m³.
    pub mode_volume: f64,
    /// Electric dipole matrix element of the coupled transition, C·m.
    pub dipole_moment: f64,
    /// Mode-function value at the atom position, in \\[0,1\\].
    pub mode_function_value: f64,
}

impl PhysicalCavity {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("wavelength", self.wavelength),
            ("length", self.length),
            ("waist", self.waist),
            ("mode_volume", self.mode_volume),
            ("dipole_moment", self.dipole_moment),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, r) in [
            ("mirror_reflectivity_1", self.mirror_reflectivity_1),
            ("mirror_reflectivity_2", self.mirror_reflectivity_2),
        ] {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must lie in (0,1), got {r}")));
            }
        }
        if !(0.0..=1.0).contains(&self.mode_function_value) {
            return Err(Error::InvalidParameter(format!(
                "mode_function_value must lie in [0,1], got {}",
                self.mode_function_value
            )));
        }
        Ok(())
    }
}

/// The rate record every model and spectrum consumes. All entries rad/s.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RateSet {
    /// Atom-cavity coupling strength g.
    pub g: f64,
    /// Cavity field decay through the left mirror.
    pub kappa_l: f64,
    /// Cavity field decay through the right mirror.
    pub kappa_r: f64,
    /// Scattering/absorption losses of the mirrors.
    pub kappa_loss: f64,
    /// Atomic polarization decay rate.
    pub gamma: f64,
    /// Atom-cavity detuning ω_a − ω_c.
    pub delta_ac: f64,
    /// Detuning of the uncoupled third level.
    pub delta_u: f64,
    /// Probe-cavity detuning ω − ω_c.
    pub delta_c: f64,
    /// Probe-atom detuning ω − ω_a.
    pub delta_a: f64,
    /// Control-laser Rabi frequency (Λ system).
    pub omega_l: f64,
}

impl RateSet {
    /// A rate set with every entry zero except the given (g, κ_l, κ_r,
    /// κ_loss, γ). Detunings and drive default to zero.
    pub fn new(g: f64, kappa_l: f64, kappa_r: f64, kappa_loss: f64, gamma: f64) -> Result<Self> {
        let rs = Self {
            g,
            kappa_l,
            kappa_r,
            kappa_loss,
            gamma,
            delta_ac: 0.0,
            delta_u: 0.0,
            delta_c: 0.0,
            delta_a: 0.0,
            omega_l: 0.0,
        };
        rs.validate()?;
        Ok(rs)
    }

    /// Total cavity field decay rate κ = κ_l + κ_r + κ_loss.
    pub fn kappa(&self) -> f64 {
        self.kappa_l + self.kappa_r + self.kappa_loss
    }

    /// Cavity decay into propagating modes, κ_out = κ_l + κ_r.
    pub fn kappa_out(&self) -> f64 {
        self.kappa_l + self.kappa_r
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g", self.g),
            ("kappa_l", self.kappa_l),
            ("kappa_r", self.kappa_r),
            ("kappa_loss", self.kappa_loss),
            ("gamma", self.gamma),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be nonnegative and finite, got {v}"
                )));
            }
        }
        if self.kappa() <= 0.0 {
            return Err(Error::InvalidParameter("total kappa must be positive".into()));
        }
        for (name, v) in [
            ("delta_ac", self.delta_ac),
            ("delta_u", self.delta_u),
            ("delta_c", self.delta_c),
            ("delta_a", self.delta_a),
            ("omega_l", self.omega_l),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    pub fn with_delta_ac(mut self, delta_ac: f64) -> Self {
        self.delta_ac = delta_ac;
        self
    }

    pub fn with_omega_l(mut self, omega_l: f64) -> Self {
        self.omega_l = omega_l;
        self
    }

    pub fn with_delta_u(mut self, delta_u: f64) -> Self {
        self.delta_u = delta_u;
        self
    }
}

/// Cavity finesse from the two mirror reflectivities:
/// F = π (R₁R₂)^{1/4} / (1 − √(R₁R₂)).
pub fn finesse(r1: f64, r2: f64) -> Result<f64> {
    for (name, r) in [("R1", r1), ("R2", r2)] {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!("{name} must lie in (0,1), got {r}")));
        }
    }
    let root = (r1 * r2).sqrt();
    Ok(std::f64::consts::PI * root.sqrt() / (1.0 - root))
}

/// Cavity field decay rate from geometry: κ = πc / (2 L F).
pub fn kappa_from_geometry(length: f64, finesse: f64) -> Result<f64> {
    if !(length > 0.0) || !(finesse > 0.0) {
        return Err(Error::InvalidParameter("length and finesse must be positive".into()));
    }
    Ok(std::f64::consts::PI * SPEED_OF_LIGHT / (2.0 * length * finesse))
}

/// Atom-cavity coupling constant g = u √(μ² ω / (2 ε₀ ħ V)).
pub fn coupling_strength(cav: &PhysicalCavity, omega: f64) -> Result<f64> {
    cav.validate()?;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be positive".into()));
    }
    let mu2 = cav.dipole_moment * cav.dipole_moment;
    Ok(cav.mode_function_value * (mu2 * omega / (2.0 * EPSILON_0 * HBAR * cav.mode_volume)).sqrt())
}

/// Free-space polarization decay rate from the dipole moment:
/// γ = μ² ω³ / (6 π ε₀ ħ c³). Exposed for cross-checks; experiments usually
/// quote γ directly.
pub fn gamma_from_dipole(dipole_moment: f64, omega: f64) -> Result<f64> {
    if !(dipole_moment > 0.0) || !(omega > 0.0) {
        return Err(Error::InvalidParameter("dipole moment and omega must be positive".into()));
    }
    Ok(dipole_moment * dipole_moment * omega.powi(3)
        / (6.0 * std::f64::consts::PI * EPSILON_0 * HBAR * SPEED_OF_LIGHT.powi(3)))
}

/// Solid-angle-corrected polarization decay: γ = (Γ/2)(1 − ζ/4π), where Γ is
/// the free-space spontaneous-emission rate and ζ the solid angle covered by
/// the cavity mode (0 recovers γ = Γ/2).
pub fn gamma_solid_angle(big_gamma: f64, zeta: f64) -> Result<f64> {
    if big_gamma < 0.0 {
        return Err(Error::InvalidParameter("Gamma must be nonnegative".into()));
    }
    if !(0.0..=4.0 * std::f64::consts::PI).contains(&zeta) {
        return Err(Error::InvalidParameter("zeta must lie in [0, 4π]".into()));
    }
    Ok(big_gamma / 2.0 * (1.0 - zeta / (4.0 * std::f64::consts::PI)))
}

/// Single-atom cooperativity C = g² / (2κγ).
pub fn cooperativity(g: f64, kappa: f64, gamma: f64) -> Result<f64> {
    if !(kappa > 0.0) || !(gamma > 0.0) {
        return Err(Error::InvalidParameter("kappa and gamma must be positive".into()));
    }
    Ok(g * g / (2.0 * kappa * gamma))
}

/// N-atom cooperativity C_N = N · C.
pub fn cooperativity_n(g: f64, kappa: f64, gamma: f64, n_atoms: usize) -> Result<f64> {
    Ok(n_atoms as f64 * cooperativity(g, kappa, gamma)?)
}

/// Critical photon number n_c = γ² / (2g²).
pub fn critical_photon_number(g: f64, gamma: f64) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::InvalidParameter("critical photon number undefined for g = 0".into()));
    }
    Ok(gamma * gamma / (2.0 * g * g))
}

/// Ratio of effective absorption cross section (boosted by cavity bounces)
/// to the beam area: (3λ²/2π)(F/π) / (πw₀²/4). Values ≫ 1 mean a photon in
/// the mode interacts with the atom deterministically.
pub fn free_space_margin(wavelength: f64, finesse: f64, waist: f64) -> Result<f64> {
    for (name, v) in [("wavelength", wavelength), ("finesse", finesse), ("waist", waist)] {
        if !(v > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} must be positive")));
        }
    }
    let sigma_abs = 3.0 * wavelength * wavelength / (2.0 * std::f64::consts::PI);
    let bounces = finesse / std::f64::consts::PI;
    let beam_area = std::f64::consts::PI * waist * waist / 4.0;
    Ok(sigma_abs * bounces / beam_area)
}

/// Atomic dipole decay rate into the cavity, γ_c = g²κ / (κ² + Δ_ac²).
/// On resonance this equals 2Cγ.
pub fn purcell_rate(g: f64, kappa: f64, delta_ac: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter("kappa must be positive".into()));
    }
    Ok(g * g * kappa / (kappa * kappa + delta_ac * delta_ac))
}

/// Fraction of photons emitted into the outcoupled propagating mode:
/// (κ_out/κ) · 2C/(1+2C). Derived for the fast-cavity regime κ ≫ g.
pub fn emission_fraction(kappa_out: f64, kappa: f64, cooperativity: f64) -> Result<f64> {
    if !(kappa > 0.0) || kappa_out < 0.0 || kappa_out > kappa {
        return Err(Error::InvalidParameter("need 0 ≤ kappa_out ≤ kappa, kappa > 0".into()));
    }
    if cooperativity < 0.0 {
        return Err(Error::InvalidParameter("cooperativity must be nonnegative".into()));
    }
    Ok(kappa_out / kappa * (2.0 * cooperativity) / (1.0 + 2.0 * cooperativity))
}

/// Convenience record of derived quantities for reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivedParams {
    pub finesse: f64,
    pub kappa: f64,
    pub g: f64,
    pub cooperativity: f64,
    pub critical_photon_number: f64,
    pub free_space_margin: f64,
    pub purcell_rate_resonant: f64,
    pub emission_fraction: f64,
}

/// Derives the full rate picture from physical inputs. `gamma` is taken as
/// an independent input since experiments quote it directly.
pub fn derive(cav: &PhysicalCavity, gamma: f64) -> Result<(RateSet, DerivedParams)> {
    cav.validate()?;
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter("gamma must be positive".into()));
    }
    let omega = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / cav.wavelength;
    let f = finesse(cav.mirror_reflectivity_1, cav.mirror_reflectivity_2)?;
    let kappa = kappa_from_geometry(cav.length, f)?;
    let g = coupling_strength(cav, omega)?;
    // Transmission share of each mirror sets the left/right split; the
    // remainder of 1 - R is treated as loss-free here (loss modeling is an
    // ErrorModel concern).
    let t1 = 1.0 - cav.mirror_reflectivity_1;
    let t2 = 1.0 - cav.mirror_reflectivity_2;
    let kappa_l = kappa * t1 / (t1 + t2);
    let kappa_r = kappa * t2 / (t1 + t2);
    let rates = RateSet::new(g, kappa_l, kappa_r, 0.0, gamma)?;
    let c = cooperativity(g, kappa, gamma)?;
    let derived = DerivedParams {
        finesse: f,
        kappa,
        g,
        cooperativity: c,
        critical_photon_number: critical_photon_number(g, gamma)?,
        free_space_margin: free_space_margin(cav.wavelength, f, cav.waist)?,
        purcell_rate_resonant: purcell_rate(g, kappa, 0.0)?,
        emission_fraction: emission_fraction(kappa, kappa, c)?,
    };
    Ok((rates, derived))
}
