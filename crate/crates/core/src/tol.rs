//! Numerical tolerance constants, centralized so every invariant check pulls
//! from one place.

/// Tolerances applied by validating constructors and invariant checks.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Generic absolute tolerance.
    pub atol: f64,
    /// Allowed deviation of a state-vector norm from 1.
    pub norm: f64,
    /// Allowed relative Hermiticity deviation, max|A - A^H| / max|A|.
    pub hermitian: f64,
    /// Allowed deviation of a density-matrix trace from 1.
    pub trace: f64,
    /// Most negative admissible density-matrix eigenvalue.
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            norm: 1e-10,
            hermitian: 1e-10,
            trace: 1e-8,
            psd: -1e-8,
        }
    }
}

/// Default tolerance set.
pub const DEFAULT: Tolerances = Tolerances {
    atol: 1e-10,
    norm: 1e-10,
    hermitian: 1e-10,
    trace: 1e-8,
    psd: -1e-8,
};
