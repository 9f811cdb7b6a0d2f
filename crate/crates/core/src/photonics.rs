//! Flying-qubit algebra: polarization states, beam splitters, time-resolved
//! two-photon interference, optical Bell-state measurement, loss channels.
//!
//! Beam-splitter convention: the outputs are a_C = (a_B + a_A)/√2 and
//! a_D = (a_B − a_A)/√2 (symmetric ± form). Hong-Ou-Mandel results are
//! convention-independent but intermediate states are not, so the sign
//! choice is fixed here once.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{shards, stream_rng};
use crate::CMatrix;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A polarization qubit with amplitudes on the circular basis {L, R}.
///
/// The derived linear view uses |H⟩ = (|L⟩+|R⟩)/√2 and |V⟩ = i(|L⟩−|R⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationQubit {
    pub l: C64,
    pub r: C64,
}

impl PolarizationQubit {
    pub fn new(l: C64, r: C64) -> Result<Self> {
        let q = Self { l, r };
        let n = q.norm();
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::BadNorm { deviation: (n - 1.0).abs() });
        }
        Ok(q)
    }

    pub fn left() -> Self {
        Self { l: c(1.0, 0.0), r: c(0.0, 0.0) }
    }

    pub fn right() -> Self {
        Self { l: c(0.0, 0.0), r: c(1.0, 0.0) }
    }

    pub fn horizontal() -> Self {
        Self { l: c(SQRT_HALF, 0.0), r: c(SQRT_HALF, 0.0) }
    }

    pub fn vertical() -> Self {
        // i(|L⟩−|R⟩)/√2 written out.
        Self { l: c(0.0, SQRT_HALF), r: c(0.0, -SQRT_HALF) }
    }

    pub fn norm(&self) -> f64 {
        (self.l.norm_sqr() + self.r.norm_sqr()).sqrt()
    }

    /// Amplitudes in the {H, V} view.
    pub fn hv(&self) -> (C64, C64) {
        let h = (self.l + self.r) * SQRT_HALF;
        let v = (self.l - self.r) * c(0.0, -SQRT_HALF);
        (h, v)
    }

    /// Relabels the circular components for a reversal of the propagation
    /// direction (handedness is defined relative to the wavevector).
    pub fn flip_propagation(&self) -> Self {
        Self { l: self.r, r: self.l }
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.l.conj() * other.l + self.r.conj() * other.r
    }
}

/// Temporal amplitude envelope on a uniform grid, normalized to unit L²
/// norm (Σ|e_i|² dt = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub dt: f64,
    pub samples: Vec<C64>,
}

impl Envelope {
    pub fn new(dt: f64, samples: Vec<C64>) -> Result<Self> {
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::InvalidParameter("envelope step must be positive".into()));
        }
        if samples.is_empty() {
            return Err(Error::EmptyInput("envelope needs at least one sample".into()));
        }
        let norm2: f64 = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * dt;
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidParameter("envelope must have positive norm".into()));
        }
        let scale = c(1.0 / norm2.sqrt(), 0.0);
        Ok(Self { dt, samples: samples.into_iter().map(|z| z * scale).collect() })
    }

    /// One-sided exponential decay envelope with amplitude time constant
    /// 2·tau (intensity constant tau) over `n` samples spaced `dt`; the
    /// standard cavity-emission shape.
    pub fn exponential(dt: f64, n: usize, tau: f64) -> Result<Self> {
        if tau <= 0.0 {
            return Err(Error::InvalidParameter("decay constant must be positive".into()));
        }
        let samples = (0..n)
            .map(|i| c((-(i as f64) * dt / (2.0 * tau)).exp(), 0.0))
            .collect();
        Self::new(dt, samples)
    }

    /// Overlap ⟨self|other⟩ (grids must match).
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.dt != other.dt || self.samples.len() != other.samples.len() {
            return Err(Error::DimensionMismatch("envelope grids differ".into()));
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.dt)
    }

    /// Samples an emission time from |e(t)|², returning the bin center.
    pub fn sample_time<R: Rng>(&self, rng: &mut R) -> f64 {
        let total: f64 = self.samples.iter().map(|z| z.norm_sqr()).sum();
        let mut u = rng.gen::<f64>() * total;
        for (i, z) in self.samples.iter().enumerate() {
            let w = z.norm_sqr();
            if u < w {
                return i as f64 * self.dt;
            }
            u -= w;
        }
        (self.samples.len() - 1) as f64 * self.dt
    }
}

/// A flying photon: polarization plus temporal/spectral mode metadata.
#[derive(Debug, Clone)]
pub struct PhotonRecord {
    pub polarization: PolarizationQubit,
    /// Carrier detuning from the reference frequency, rad/s.
    pub frequency_detuning: f64,
    pub envelope: Envelope,
    /// Present or already lost; vacuum admixture is tracked separately as a
    /// branch probability by protocol bookkeeping.
    pub present: bool,
}

impl PhotonRecord {
    pub fn new(polarization: PolarizationQubit, frequency_detuning: f64, envelope: Envelope) -> Self {
        Self { polarization, frequency_detuning, envelope, present: true }
    }
}

/// Photon loss: with probability 1−η the photon is destroyed; a surviving
/// photon is untouched (loss destroys the qubit, never rotates it).
pub fn loss_channel<R: Rng>(
    photon: &PhotonRecord,
    survival: f64,
    rng: &mut R,
) -> Result<PhotonRecord> {
    if !(0.0..=1.0).contains(&survival) {
        return Err(Error::InvalidParameter(format!("survival {survival} not in [0,1]")));
    }
    let mut out = photon.clone();
    if out.present && rng.gen::<f64>() >= survival {
        out.present = false;
    }
    Ok(out)
}

/// Deterministic view of the same channel: the presence probability just
/// multiplies by η.
pub fn loss_channel_weight(presence_probability: f64, survival: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&survival) || !(0.0..=1.0).contains(&presence_probability) {
        return Err(Error::InvalidParameter("probabilities must lie in [0,1]".into()));
    }
    Ok(presence_probability * survival)
}

// ---------------------------------------------------------------------------
// Beam splitter on the truncated two-mode Fock space.
// ---------------------------------------------------------------------------

/// Basis index of a polarization sector: two modes, each holding 0..=2
/// photons, |n₁ n₂⟩ flattened as 3·n₁ + n₂ (inputs A,B / outputs C,D).
pub fn two_mode_index(n1: usize, n2: usize) -> usize {
    3 * n1 + n2
}

/// Exact 9×9 beam-splitter unitary on one polarization sector. The photon
/// number blocks 0, 1, 2 implement a_C = (a_B+a_A)/√2, a_D = (a_B−a_A)/√2;
/// higher blocks are left as identity and rejected at input validation.
pub fn beamsplitter_matrix() -> CMatrix {
    let mut u = CMatrix::identity(9, 9);
    let s = SQRT_HALF;
    // n = 1: |10⟩ → (|10⟩−|01⟩)/√2, |01⟩ → (|10⟩+|01⟩)/√2.
    u[(two_mode_index(1, 0), two_mode_index(1, 0))] = c(s, 0.0);
    u[(two_mode_index(0, 1), two_mode_index(1, 0))] = c(-s, 0.0);
    u[(two_mode_index(1, 0), two_mode_index(0, 1))] = c(s, 0.0);
    u[(two_mode_index(0, 1), two_mode_index(0, 1))] = c(s, 0.0);
    // n = 2 block from the creation-operator substitution.
    for idx in [two_mode_index(2, 0), two_mode_index(1, 1), two_mode_index(0, 2)] {
        u[(idx, idx)] = c(0.0, 0.0);
    }
    // |20⟩ → |20⟩/2 − |11⟩/√2 + |02⟩/2.
    u[(two_mode_index(2, 0), two_mode_index(2, 0))] = c(0.5, 0.0);
    u[(two_mode_index(1, 1), two_mode_index(2, 0))] = c(-s, 0.0);
    u[(two_mode_index(0, 2), two_mode_index(2, 0))] = c(0.5, 0.0);
    // |11⟩ → (|20⟩−|02⟩)/√2.
    u[(two_mode_index(2, 0), two_mode_index(1, 1))] = c(s, 0.0);
    u[(two_mode_index(0, 2), two_mode_index(1, 1))] = c(-s, 0.0);
    // |02⟩ → |20⟩/2 + |11⟩/√2 + |02⟩/2.
    u[(two_mode_index(2, 0), two_mode_index(0, 2))] = c(0.5, 0.0);
    u[(two_mode_index(1, 1), two_mode_index(0, 2))] = c(s, 0.0);
    u[(two_mode_index(0, 2), two_mode_index(0, 2))] = c(0.5, 0.0);
    u
}

/// State of the four-mode (two ports × two polarizations) photonic system,
/// basis ordered (H sector) ⊗ (V sector), each sector 9-dim.
#[derive(Debug, Clone, PartialEq)]
pub struct PortState {
    pub amps: Vec<C64>, // length 81
}

impl PortState {
    pub fn vacuum() -> Self {
        let mut amps = vec![c(0.0, 0.0); 81];
        amps[0] = c(1.0, 0.0);
        Self { amps }
    }

    /// Flat index of |n_{1,H} n_{2,H} n_{1,V} n_{2,V}⟩ where 1, 2 are the
    /// two ports (A,B before the splitter, C,D after).
    pub fn index(n1h: usize, n2h: usize, n1v: usize, n2v: usize) -> usize {
        9 * two_mode_index(n1h, n2h) + two_mode_index(n1v, n2v)
    }

    /// Total photon number of a basis index.
    pub fn total_photons(idx: usize) -> usize {
        let h = idx / 9;
        let v = idx % 9;
        h / 3 + h % 3 + v / 3 + v % 3
    }

    /// Two photons with the given polarizations, one per input port.
    pub fn two_photons(pol_a: &PolarizationQubit, pol_b: &PolarizationQubit) -> Self {
        let (ha, va) = pol_a.hv();
        let (hb, vb) = pol_b.hv();
        let mut amps = vec![c(0.0, 0.0); 81];
        amps[Self::index(1, 1, 0, 0)] = ha * hb;
        amps[Self::index(1, 0, 0, 1)] = ha * vb;
        amps[Self::index(0, 1, 1, 0)] = va * hb;
        amps[Self::index(0, 0, 1, 1)] = va * vb;
        Self { amps }
    }

    /// General two-photon polarization state with amplitudes on
    /// (photon in A) ⊗ (photon in B) in the circular basis order
    /// LL, LR, RL, RR.
    pub fn from_two_photon_amplitudes(amps_lr: &TwoPhotonAmps) -> Self {
        let mut out = vec![c(0.0, 0.0); 81];
        let basis = [PolarizationQubit::left(), PolarizationQubit::right()];
        for (k, amp) in amps_lr.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let term = Self::two_photons(&basis[k / 2], &basis[k % 2]);
            for (o, t) in out.iter_mut().zip(&term.amps) {
                *o += amp * t;
            }
        }
        Self { amps: out }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Applies the 50/50 beam splitter (per polarization) to a two-port state.
/// Rejects states with support above two total photons.
pub fn beamsplitter(state: &PortState) -> Result<PortState> {
    for (idx, amp) in state.amps.iter().enumerate() {
        if amp.norm_sqr() > 0.0 && PortState::total_photons(idx) > 2 {
            return Err(Error::InvalidParameter(
                "beam splitter supports at most two photons total".into(),
            ));
        }
    }
    let u9 = beamsplitter_matrix();
    let u = u9.kronecker(&u9);
    let vec = crate::CVector::from_column_slice(&state.amps);
    let out = u * vec;
    Ok(PortState { amps: out.iter().copied().collect() })
}

// ---------------------------------------------------------------------------
// Hong-Ou-Mandel interference.
// ---------------------------------------------------------------------------

/// Probability to detect the second photon in the same port as the first,
/// C(τ) = ½(1 + cos(Δ_p τ)).
pub fn hom_contrast(delta_p: f64, tau: f64) -> f64 {
    0.5 * (1.0 + (delta_p * tau).cos())
}

/// Normalized single-photon state over the two output ports after the first
/// detection at time difference τ: (|1_C,0_D⟩ ± e^{iΔ_pτ}|0_C,1_D⟩)/√2.
/// `first_in_c` selects which detector clicked first, fixing the sign.
pub fn conditioned_state_after_first_click(delta_p: f64, tau: f64, first_in_c: bool) -> [C64; 2] {
    let phase = C64::from_polar(1.0, delta_p * tau);
    let sign = if first_in_c { 1.0 } else { -1.0 };
    [c(SQRT_HALF, 0.0), phase * c(sign * SQRT_HALF, 0.0)]
}

/// Specification of a single-photon source feeding the interference setup.
#[derive(Debug, Clone)]
pub struct SourceSpec {
    pub envelope: Envelope,
    /// Carrier detuning relative to the common reference, rad/s.
    pub detuning: f64,
    /// Gaussian shot-to-shot carrier jitter, rad/s (1σ).
    pub jitter_sigma: f64,
}

/// Coincidence histogram of the two-photon interference experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomHistogram {
    /// Bin centers in seconds (signed τ = t_B − t_A).
    pub tau: Vec<f64>,
    pub parallel_counts: Vec<u64>,
    pub orthogonal_counts: Vec<u64>,
    /// Per-bin normalized ratio parallel/(2·orthogonal): estimates
    /// 1 − C(τ) = ½(1 − cos Δ_p τ), the probability that the second photon
    /// exits through the other port.
    pub ratio: Vec<f64>,
    /// 1 − Σ parallel / (2 Σ orthogonal), the envelope-weighted mean
    /// contrast.
    pub integrated_contrast: f64,
}

/// Monte Carlo two-photon interference: samples click-time pairs from the
/// source envelopes plus carrier jitter, histograms parallel- and
/// orthogonal-polarization different-port coincidences over τ.
pub fn hom_monte_carlo(
    source_a: &SourceSpec,
    source_b: &SourceSpec,
    trials: u64,
    seed: u64,
) -> Result<HomHistogram> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    if source_a.envelope.dt != source_b.envelope.dt
        || source_a.envelope.samples.len() != source_b.envelope.samples.len()
    {
        return Err(Error::DimensionMismatch("source envelopes must share a grid".into()));
    }
    let n = source_a.envelope.samples.len();
    let dt = source_a.envelope.dt;
    let n_bins = 2 * n - 1;
    let delta_p0 = source_b.detuning - source_a.detuning;
    let jitter = (source_a.jitter_sigma.powi(2) + source_b.jitter_sigma.powi(2)).sqrt();

    use rayon::prelude::*;
    let shard_list = shards(trials);
    let partials: Vec<(Vec<u64>, Vec<u64>)> = shard_list
        .par_iter()
        .map(|&(stream, count)| {
            let mut rng = stream_rng(seed, stream);
            let normal = Normal::new(0.0, 1.0).unwrap();
            let mut par = vec![0u64; n_bins];
            let mut orth = vec![0u64; n_bins];
            for _ in 0..count {
                let ta = source_a.envelope.sample_time(&mut rng);
                let tb = source_b.envelope.sample_time(&mut rng);
                let tau = tb - ta;
                let bin = ((tau / dt).round() as i64 + (n as i64 - 1)) as usize;
                let dp = delta_p0 + jitter * normal.sample(&mut rng);
                // Parallel polarization: different-port coincidence with
                // probability 1 − C(τ).
                if rng.gen::<f64>() < 0.5 * (1.0 - (dp * tau).cos()) {
                    par[bin] += 1;
                }
                // Orthogonal polarization: no interference, probability ½.
                if rng.gen::<f64>() < 0.5 {
                    orth[bin] += 1;
                }
            }
            (par, orth)
        })
        .collect();

    let mut parallel_counts = vec![0u64; n_bins];
    let mut orthogonal_counts = vec![0u64; n_bins];
    for (par, orth) in partials {
        for i in 0..n_bins {
            parallel_counts[i] += par[i];
            orthogonal_counts[i] += orth[i];
        }
    }
    let tau: Vec<f64> = (0..n_bins).map(|i| (i as f64 - (n as f64 - 1.0)) * dt).collect();
    let ratio: Vec<f64> = parallel_counts
        .iter()
        .zip(&orthogonal_counts)
        .map(|(&p, &o)| if o == 0 { 0.0 } else { p as f64 / (2.0 * o as f64) })
        .collect();
    let total_par: u64 = parallel_counts.iter().sum();
    let total_orth: u64 = orthogonal_counts.iter().sum();
    let integrated_contrast = if total_orth == 0 {
        0.0
    } else {
        1.0 - total_par as f64 / (2.0 * total_orth as f64)
    };
    Ok(HomHistogram { tau, parallel_counts, orthogonal_counts, ratio, integrated_contrast })
}

/// Analytic jitter-averaged integrated contrast for Gaussian carrier
/// jitter: Σ_τ p(τ) ½(1 + cos(Δ_p τ) e^{−σ²τ²/2}), with p(τ) the envelope
/// coincidence distribution. The oracle against which jitter is calibrated.
pub fn integrated_contrast_analytic(source_a: &SourceSpec, source_b: &SourceSpec) -> Result<f64> {
    if source_a.envelope.dt != source_b.envelope.dt
        || source_a.envelope.samples.len() != source_b.envelope.samples.len()
    {
        return Err(Error::DimensionMismatch("source envelopes must share a grid".into()));
    }
    let dt = source_a.envelope.dt;
    let wa: Vec<f64> = source_a.envelope.samples.iter().map(|z| z.norm_sqr() * dt).collect();
    let wb: Vec<f64> = source_b.envelope.samples.iter().map(|z| z.norm_sqr() * dt).collect();
    let delta_p0 = source_b.detuning - source_a.detuning;
    let sig2 = source_a.jitter_sigma.powi(2) + source_b.jitter_sigma.powi(2);
    let mut acc = 0.0;
    let mut weight = 0.0;
    for (i, wi) in wa.iter().enumerate() {
        for (j, wj) in wb.iter().enumerate() {
            let tau = (j as f64 - i as f64) * dt;
            let p = wi * wj;
            let mean_cos = (delta_p0 * tau).cos() * (-0.5 * sig2 * tau * tau).exp();
            acc += p * 0.5 * (1.0 + mean_cos);
            weight += p;
        }
    }
    Ok(acc / weight)
}

// ---------------------------------------------------------------------------
// Optical Bell-state measurement.
// ---------------------------------------------------------------------------

/// Result classes of the linear-optics Bell-state measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BsmResult {
    /// Coincidence of orthogonal polarizations in different output ports.
    PsiMinus,
    /// Coincidence of orthogonal polarizations in the same output port.
    PsiPlus,
    /// Any other click pattern; Φ± states land here and cannot be told
    /// apart by this setup.
    Fail,
}

/// One measurement outcome, optionally with detector click times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsmOutcome {
    pub result: BsmResult,
    pub click_times: Option<(f64, f64)>,
}

/// Outcome distribution of the optical Bell-state measurement.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BsmDistribution {
    pub p_psi_minus: f64,
    pub p_psi_plus: f64,
    pub p_fail: f64,
}

impl BsmDistribution {
    pub fn total(&self) -> f64 {
        self.p_psi_minus + self.p_psi_plus + self.p_fail
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> BsmResult {
        let u: f64 = rng.gen::<f64>() * self.total();
        if u < self.p_psi_minus {
            BsmResult::PsiMinus
        } else if u < self.p_psi_minus + self.p_psi_plus {
            BsmResult::PsiPlus
        } else {
            BsmResult::Fail
        }
    }
}

/// Two-photon polarization amplitudes in the circular basis, order
/// LL, LR, RL, RR (photon in port A ⊗ photon in port B).
pub type TwoPhotonAmps = [C64; 4];

/// The singlet (|HV⟩ − |VH⟩)/√2 = −i(|LR⟩ − |RL⟩)/√2.
pub fn psi_minus_hv() -> TwoPhotonAmps {
    [c(0.0, 0.0), c(0.0, -SQRT_HALF), c(0.0, SQRT_HALF), c(0.0, 0.0)]
}

/// (|HV⟩ + |VH⟩)/√2 = i(|LL⟩ − |RR⟩)/√2.
pub fn psi_plus_hv() -> TwoPhotonAmps {
    [c(0.0, SQRT_HALF), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -SQRT_HALF)]
}

/// (|HH⟩ − |VV⟩)/√2 = (|LL⟩ + |RR⟩)/√2.
pub fn phi_minus_hv() -> TwoPhotonAmps {
    [c(SQRT_HALF, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(SQRT_HALF, 0.0)]
}

/// (|HH⟩ + |VV⟩)/√2 = (|LR⟩ + |RL⟩)/√2.
pub fn phi_plus_hv() -> TwoPhotonAmps {
    [c(0.0, 0.0), c(SQRT_HALF, 0.0), c(SQRT_HALF, 0.0), c(0.0, 0.0)]
}

fn amps_inner(a: &TwoPhotonAmps, b: &TwoPhotonAmps) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Outcome distribution of the optical BSM on a pure two-photon
/// polarization state.
///
/// `indistinguishability` is the squared wavepacket overlap of the two
/// photons: with that probability they interfere (projecting onto the HV
/// Bell classification); otherwise they route independently like
/// distinguishable particles and orthogonal-polarization pairs split 50/50
/// between the same-port and different-port patterns.
pub fn bell_measurement(
    state: &TwoPhotonAmps,
    indistinguishability: f64,
) -> Result<BsmDistribution> {
    if !(0.0..=1.0).contains(&indistinguishability) {
        return Err(Error::InvalidParameter("indistinguishability must lie in [0,1]".into()));
    }
    let norm2: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > 1e-9 {
        return Err(Error::BadNorm { deviation: (norm2.sqrt() - 1.0).abs() });
    }
    // Coherent (interfering) part.
    let p_minus_coh = amps_inner(&psi_minus_hv(), state).norm_sqr();
    let p_plus_coh = amps_inner(&psi_plus_hv(), state).norm_sqr();
    // Distinguishable part: weight of orthogonal HV pairs.
    let hv_weight = {
        let hv = amps_inner(
            &{
                // |HV⟩ in circular amplitudes.
                let h = PolarizationQubit::horizontal();
                let v = PolarizationQubit::vertical();
                [h.l * v.l, h.l * v.r, h.r * v.l, h.r * v.r]
            },
            state,
        )
        .norm_sqr();
        let vh = amps_inner(
            &{
                let h = PolarizationQubit::horizontal();
                let v = PolarizationQubit::vertical();
                [v.l * h.l, v.l * h.r, v.r * h.l, v.r * h.r]
            },
            state,
        )
        .norm_sqr();
        hv + vh
    };
    let p_minus_dist = 0.5 * hv_weight;
    let p_plus_dist = 0.5 * hv_weight;

    let ind = indistinguishability;
    let p_psi_minus = ind * p_minus_coh + (1.0 - ind) * p_minus_dist;
    let p_psi_plus = ind * p_plus_coh + (1.0 - ind) * p_plus_dist;
    let p_fail = (1.0 - p_psi_minus - p_psi_plus).max(0.0);
    Ok(BsmDistribution { p_psi_minus, p_psi_plus, p_fail })
}


/// Folds finite detector efficiency into a BSM outcome distribution: a
/// herald needs both photons detected, so the Ψ± probabilities shrink by
/// η² and the missed coincidences land in the Fail class.
pub fn detected_distribution(dist: &BsmDistribution, efficiency: f64) -> Result<BsmDistribution> {
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(Error::InvalidParameter("detector efficiency must lie in [0,1]".into()));
    }
    let eta2 = efficiency * efficiency;
    let p_psi_minus = dist.p_psi_minus * eta2;
    let p_psi_plus = dist.p_psi_plus * eta2;
    Ok(BsmDistribution {
        p_psi_minus,
        p_psi_plus,
        p_fail: (dist.total() - p_psi_minus - p_psi_plus).max(0.0),
    })
}
