//! State tomography, fidelity and parity analysis, and Bayesian two-atom
//! state estimation.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{hermitian_eigen, DensityMatrix, HilbertSpace, Operator};
use crate::CMatrix;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Measurement bases for tomography.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Standard 2×2 matrix (|0⟩ the +1 eigenstate of Z).
    pub fn matrix(&self) -> CMatrix {
        match self {
            Pauli::X => crate::hilbert::matrices::pauli_x(),
            Pauli::Y => crate::hilbert::matrices::pauli_y(),
            Pauli::Z => crate::hilbert::matrices::pauli_z(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            other => Err(Error::InvalidParameter(format!("unknown Pauli {other:?}"))),
        }
    }
}

/// Counts for one measurement setting. `counts[k]` holds the occurrences of
/// the outcome whose bit i is 1 when qubit i gave the −1 eigenvalue
/// (qubit 0 is the most significant bit).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub setting: Vec<Pauli>,
    pub counts: Vec<u64>,
}

impl MeasurementRecord {
    pub fn new(setting: Vec<Pauli>, counts: Vec<u64>) -> Result<Self> {
        if setting.is_empty() || setting.len() > 2 {
            return Err(Error::InvalidParameter("tomography supports 1 or 2 qubits".into()));
        }
        if counts.len() != 1 << setting.len() {
            return Err(Error::DimensionMismatch(format!(
                "setting on {} qubits needs {} outcome counts",
                setting.len(),
                1 << setting.len()
            )));
        }
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::EmptyInput("setting has zero total counts".into()));
        }
        Ok(Self { setting, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Empirical expectation of the full Pauli string of this setting.
    pub fn expectation(&self) -> f64 {
        let total = self.total() as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let sign = if (k.count_ones() % 2) == 0 { 1.0 } else { -1.0 };
                sign * n as f64
            })
            .sum::<f64>()
            / total
    }

    /// Empirical expectation of the Pauli on one qubit, marginalizing the
    /// other outcomes.
    pub fn marginal_expectation(&self, qubit: usize) -> f64 {
        let n_qubits = self.setting.len();
        let total = self.total() as f64;
        let bit = n_qubits - 1 - qubit;
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let sign = if (k >> bit) & 1 == 0 { 1.0 } else { -1.0 };
                sign * n as f64
            })
            .sum::<f64>()
            / total
    }
}

/// Linear-inversion tomography of a 1- or 2-qubit state from an
/// informationally complete set of Pauli settings (all 3ⁿ), followed by a
/// projection onto the physical set: negative eigenvalues are clipped to
/// zero and the spectrum renormalized.
pub fn tomography(records: &[MeasurementRecord]) -> Result<DensityMatrix> {
    if records.is_empty() {
        return Err(Error::IncompleteSettings("no measurement records".into()));
    }
    let n = records[0].setting.len();
    if records.iter().any(|r| r.setting.len() != n) {
        return Err(Error::DimensionMismatch("mixed setting sizes".into()));
    }
    let required: usize = 3usize.pow(n as u32);
    let mut found = std::collections::HashSet::new();
    for r in records {
        found.insert(r.setting.clone());
    }
    if found.len() != required {
        return Err(Error::IncompleteSettings(format!(
            "need all {required} Pauli settings, got {}",
            found.len()
        )));
    }

    let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let space = HilbertSpace::new(labels.iter().map(|l| (l.clone(), 2usize)))?;
    let dim = space.dim();
    let mut rho = CMatrix::identity(dim, dim) / c(dim as f64, 0.0);

    // Averaged expectation of every non-identity Pauli string.
    if n == 1 {
        for p in Pauli::ALL {
            let matching: Vec<&MeasurementRecord> =
                records.iter().filter(|r| r.setting[0] == p).collect();
            let mean = matching.iter().map(|r| r.expectation()).sum::<f64>()
                / matching.len() as f64;
            rho += p.matrix() * c(mean / 2.0, 0.0);
        }
    } else {
        // Two-qubit Pauli strings.
        for p in Pauli::ALL {
            for q in Pauli::ALL {
                let matching: Vec<&MeasurementRecord> = records
                    .iter()
                    .filter(|r| r.setting[0] == p && r.setting[1] == q)
                    .collect();
                let mean = matching.iter().map(|r| r.expectation()).sum::<f64>()
                    / matching.len() as f64;
                rho += p.matrix().kronecker(&q.matrix()) * c(mean / 4.0, 0.0);
            }
        }
        // Single-qubit terms P⊗I and I⊗P from marginals averaged over
        // every setting containing them.
        for p in Pauli::ALL {
            for qubit in [0usize, 1] {
                let matching: Vec<&MeasurementRecord> =
                    records.iter().filter(|r| r.setting[qubit] == p).collect();
                let mean = matching.iter().map(|r| r.marginal_expectation(qubit)).sum::<f64>()
                    / matching.len() as f64;
                let id = CMatrix::identity(2, 2);
                let string = if qubit == 0 {
                    p.matrix().kronecker(&id)
                } else {
                    id.kronecker(&p.matrix())
                };
                rho += string * c(mean / 4.0, 0.0);
            }
        }
    }

    // PSD projection by eigenvalue clipping.
    let herm = (&rho + rho.adjoint()) * c(0.5, 0.0);
    let (vals, vecs) = hermitian_eigen(&herm);
    let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::NotPositive { min_eig: vals[0] });
    }
    let mut out = CMatrix::zeros(dim, dim);
    for (k, &v) in clipped.iter().enumerate() {
        if v > 0.0 {
            let col = vecs.column(k);
            out += (col * col.adjoint()) * c(v / total, 0.0);
        }
    }
    DensityMatrix::new_with(
        space,
        out,
        &crate::tol::Tolerances { trace: 1e-9, psd: -1e-10, ..Default::default() },
    )
}

/// Samples projective measurement counts of a state in one Pauli setting.
pub fn sample_counts<R: Rng>(
    rho: &DensityMatrix,
    setting: &[Pauli],
    shots: u64,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    let n = setting.len();
    if rho.space().dim() != 1 << n {
        return Err(Error::DimensionMismatch("state/setting qubit count mismatch".into()));
    }
    // Outcome probabilities from projectors onto the Pauli eigenbases.
    let mut probs = Vec::with_capacity(1 << n);
    for outcome in 0..(1usize << n) {
        let mut proj = CMatrix::identity(1, 1);
        for (i, p) in setting.iter().enumerate() {
            let bit = (outcome >> (n - 1 - i)) & 1;
            let sign = if bit == 0 { 1.0 } else { -1.0 };
            // (I + sign·P)/2.
            let local = (CMatrix::identity(2, 2) + p.matrix() * c(sign, 0.0)) * c(0.5, 0.0);
            proj = proj.kronecker(&local);
        }
        probs.push(((&proj * rho.matrix()).trace().re).max(0.0));
    }
    let total: f64 = probs.iter().sum();
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let mut u = rng.gen::<f64>() * total;
        let mut k = 0;
        for (i, p) in probs.iter().enumerate() {
            if u < *p {
                k = i;
                break;
            }
            u -= p;
            k = i;
        }
        counts[k] += 1;
    }
    MeasurementRecord::new(setting.to_vec(), counts)
}

/// Trace distance ½‖ρ−σ‖₁ between two states.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.space().dim() != b.space().dim() {
        return Err(Error::DimensionMismatch("state dimensions differ".into()));
    }
    let diff = a.matrix() - b.matrix();
    let herm = (&diff + diff.adjoint()) * c(0.5, 0.0);
    let vals = crate::hilbert::hermitian_eigenvalues(&herm);
    Ok(vals.iter().map(|v| v.abs()).sum::<f64>() / 2.0)
}

/// Mean output-vs-input fidelity of a qubit channel over the six Pauli
/// eigenstates (±x, ±y, ±z).
pub fn process_average_fidelity<F>(channel: F) -> Result<f64>
where
    F: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    let mut acc = 0.0;
    for q in crate::protocols::AtomQubit::six_states() {
        let rho_in = q.to_density("q0");
        let rho_out = channel(&rho_in)?;
        acc += crate::hilbert::fidelity_pure(&q.to_state("q0"), &rho_out)?;
    }
    Ok(acc / 6.0)
}

/// Which rotation sequence precedes the parity readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityMode {
    /// Two common π/2 pulses; the scanned phase is the relative phase of
    /// the second pulse.
    TwoPulseRelativePhase,
    /// A single common π/2 pulse with absolute phase φ.
    OnePulseAbsolutePhase,
}

/// Parity p₀ + p₂ − p₁ versus analysis phase.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParityScan {
    pub phases: Vec<f64>,
    pub parity: Vec<f64>,
}

impl ParityScan {
    /// Peak-to-peak amplitude / 2.
    pub fn amplitude(&self) -> f64 {
        let max = self.parity.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.parity.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min) / 2.0
    }
}

/// Applies the common analysis rotation(s) to a two-qubit state and
/// evaluates the parity p₀ + p₂ − p₁ = ⟨σ_z ⊗ σ_z⟩ at each phase.
pub fn parity_scan(
    rho: &DensityMatrix,
    mode: ParityMode,
    phases: &[f64],
) -> Result<ParityScan> {
    if rho.space().dim() != 4 || rho.space().factors().len() != 2 {
        return Err(Error::DimensionMismatch("parity scan needs a two-qubit state".into()));
    }
    let labels: Vec<String> = rho.space().labels().iter().map(|s| s.to_string()).collect();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut parity = Vec::with_capacity(phases.len());
    for &phi in phases {
        let mut state = rho.clone();
        match mode {
            ParityMode::TwoPulseRelativePhase => {
                for l in &labels {
                    state = crate::protocols::bloch_rotation_density(&state, l, half_pi, 0.0, 0.0)?;
                }
                for l in &labels {
                    state = crate::protocols::bloch_rotation_density(&state, l, half_pi, phi, 0.0)?;
                }
            }
            ParityMode::OnePulseAbsolutePhase => {
                for l in &labels {
                    state = crate::protocols::bloch_rotation_density(&state, l, half_pi, phi, 0.0)?;
                }
            }
        }
        // p0 + p2 − p1 in the number-of-up-atoms decomposition equals
        // ⟨σ_z ⊗ σ_z⟩.
        let z0 = Operator::embed(state.space(), &labels[0], &crate::protocols::sigma_z())?;
        let z1 = Operator::embed(state.space(), &labels[1], &crate::protocols::sigma_z())?;
        let zz = z0.mul(&z1)?;
        parity.push((zz.matrix() * state.matrix()).trace().re);
    }
    Ok(ParityScan { phases: phases.to_vec(), parity })
}

/// Configuration of the Bayesian two-atom transmission filter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BayesConfig {
    /// Mean detected photons per bin with no coupled atom.
    pub bright_mean: f64,
    /// Relative transmission levels for 0, 1, 2 coupled atoms.
    pub levels: [f64; 3],
    /// Per-bin probability of one atom changing its hyperfine state
    /// (symmetric nearest-level transitions).
    pub transition_prob: f64,
}

impl Default for BayesConfig {
    fn default() -> Self {
        // Transmission reduced by {0, 30%, 60%} for α = {0, 1, 2} coupled
        // atoms; 10 µs bins.
        Self { bright_mean: 20.0, levels: [1.0, 0.7, 0.4], transition_prob: 1e-3 }
    }
}

impl BayesConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.bright_mean.is_finite() || self.bright_mean <= 0.0 {
            return Err(Error::InvalidParameter("bright mean must be positive".into()));
        }
        for l in self.levels {
            if !l.is_finite() || l < 0.0 {
                return Err(Error::InvalidParameter("levels must be finite and ≥ 0".into()));
            }
        }
        if !(0.0..=1.0).contains(&self.transition_prob) {
            return Err(Error::InvalidParameter("transition probability not in [0,1]".into()));
        }
        Ok(())
    }
}

/// Posterior trajectory of the two-atom filter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BayesResult {
    /// Posterior over α ∈ {0,1,2} after each bin.
    pub posterior: Vec<[f64; 3]>,
    /// Per-bin maximum-a-posteriori state.
    pub map_trajectory: Vec<usize>,
}

fn ln_poisson(k: u64, lambda: f64) -> f64 {
    // Unnormalized log-likelihood; the k! term cancels across hypotheses.
    if lambda <= 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    k as f64 * lambda.ln() - lambda
}

/// Recursive Bayes filter over the number of coupled atoms α ∈ {0,1,2},
/// with Poissonian count likelihoods per bin and a symmetric
/// nearest-neighbor transition prior.
pub fn bayesian_two_atom_filter(clicks: &[u64], config: &BayesConfig) -> Result<BayesResult> {
    config.validate()?;
    if clicks.is_empty() {
        return Err(Error::EmptyInput("click stream is empty".into()));
    }
    let eps = config.transition_prob;
    // Symmetric nearest-neighbor transition prior (doubly stochastic, so a
    // flat posterior is stationary under zero-information likelihoods).
    let t = [
        [1.0 - eps, eps, 0.0],
        [eps, 1.0 - 2.0 * eps, eps],
        [0.0, eps, 1.0 - eps],
    ];
    let mut prior = [1.0 / 3.0; 3];
    let mut posterior = Vec::with_capacity(clicks.len());
    let mut map_trajectory = Vec::with_capacity(clicks.len());
    for &k in clicks {
        // Predict.
        let mut predicted = [0.0; 3];
        for (alpha, row) in t.iter().enumerate() {
            for (beta, p) in row.iter().enumerate() {
                predicted[beta] += prior[alpha] * p;
            }
        }
        // Update with the Poisson likelihood (log domain, shifted).
        let lls: Vec<f64> = (0..3)
            .map(|alpha| ln_poisson(k, config.bright_mean * config.levels[alpha]))
            .collect();
        let max_ll = lls.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut post = [0.0; 3];
        let mut norm = 0.0;
        for alpha in 0..3 {
            post[alpha] = predicted[alpha] * (lls[alpha] - max_ll).exp();
            norm += post[alpha];
        }
        if !(norm > 0.0) {
            return Err(Error::InvalidParameter("filter update has zero likelihood".into()));
        }
        for p in post.iter_mut() {
            *p /= norm;
        }
        let map = (0..3).max_by(|&a, &b| post[a].partial_cmp(&post[b]).unwrap()).unwrap();
        posterior.push(post);
        map_trajectory.push(map);
        prior = post;
    }
    Ok(BayesResult { posterior, map_trajectory })
}

/// Synthetic telegraph click stream for filter tests and the CLI demo:
/// the hidden state random-walks among {0,1,2} with the given per-bin flip
/// probability; counts are Poissonian at the matching level.
pub fn synthesize_telegraph_stream<R: Rng>(
    bins: usize,
    config: &BayesConfig,
    flip_prob: f64,
    rng: &mut R,
) -> Result<(Vec<u64>, Vec<usize>)> {
    config.validate()?;
    if !(0.0..=1.0).contains(&flip_prob) {
        return Err(Error::InvalidParameter("flip probability not in [0,1]".into()));
    }
    let mut alpha = 2usize;
    let mut clicks = Vec::with_capacity(bins);
    let mut truth = Vec::with_capacity(bins);
    for _ in 0..bins {
        if rng.gen::<f64>() < flip_prob {
            alpha = match alpha {
                0 => 1,
                2 => 1,
                _ => {
                    if rng.gen::<bool>() {
                        0
                    } else {
                        2
                    }
                }
            };
        }
        let lambda = config.bright_mean * config.levels[alpha];
        let k = if lambda > 0.0 {
            Poisson::new(lambda).unwrap().sample(rng) as u64
        } else {
            0
        };
        clicks.push(k);
        truth.push(alpha);
    }
    Ok((clicks, truth))
}
