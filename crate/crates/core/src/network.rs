//! Channel loss, success-rate composition, and repeater-chain rate
//! estimation.
//!
//! Time is discretized in attempt slots of duration 1/R_rep plus an
//! optional classical-heralding latency; rates quote slots, and the
//! conversion to seconds happens at reporting time. Memory decoherence is a
//! hard cutoff (the stored link is discarded), not gradual fidelity decay;
//! state-level decay lives with the protocol error models.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{shards, stream_rng};
use rand::Rng;

/// A lossy fiber segment. The canonical description is the 1/e loss length;
/// dB/km attenuation converts via L_loss = 10 / (ln 10 · dB_per_km).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Channel {
    /// Length in km.
    pub length_km: f64,
    /// 1/e loss length in km (today's telecom fiber: ≈ 20 km).
    pub loss_length_km: f64,
}

impl Channel {
    pub const DEFAULT_LOSS_LENGTH_KM: f64 = 20.0;

    pub fn new(length_km: f64, loss_length_km: f64) -> Result<Self> {
        if length_km < 0.0 || loss_length_km <= 0.0 {
            return Err(Error::InvalidParameter(
                "need length ≥ 0 and loss length > 0".into(),
            ));
        }
        Ok(Self { length_km, loss_length_km })
    }

    /// Builds the channel from an attenuation in dB/km.
    pub fn from_attenuation(length_km: f64, db_per_km: f64) -> Result<Self> {
        if db_per_km <= 0.0 {
            return Err(Error::InvalidParameter("attenuation must be positive".into()));
        }
        Self::new(length_km, db_loss_length_km(db_per_km))
    }
}

/// 1/e loss length equivalent to a dB/km attenuation.
pub fn db_loss_length_km(db_per_km: f64) -> f64 {
    10.0 / (std::f64::consts::LN_10 * db_per_km)
}

/// Photon transmission probability p_trans(L) = e^{−L/L_loss}.
pub fn channel_transmission(ch: &Channel) -> f64 {
    (-ch.length_km / ch.loss_length_km).exp()
}

/// Average heralded success rate R = R_rep · p_int · p_trans, in Hz.
pub fn success_rate(repetition_hz: f64, p_intrinsic: f64, p_trans: f64) -> Result<f64> {
    for (name, p) in [("p_intrinsic", p_intrinsic), ("p_trans", p_trans)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("{name} = {p} not in [0,1]")));
        }
    }
    if repetition_hz < 0.0 {
        return Err(Error::InvalidParameter("repetition rate must be nonnegative".into()));
    }
    Ok(repetition_hz * p_intrinsic * p_trans)
}

/// A network node: identifier, number of memory qubits, and the error-model
/// preset it runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub qubits: usize,
    pub preset: String,
}

/// Nodes plus lossy channels between them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Topology {
    pub nodes: Vec<Node>,
    /// (node index, node index, channel) triples.
    pub channels: Vec<(usize, usize, Channel)>,
}

impl Topology {
    /// Chain protocols require a connected graph.
    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b, _) in &self.channels {
            if a >= n || b >= n {
                return false;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Monte Carlo estimate of attempts-to-success for a heralded link or
/// chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateEstimate {
    /// Mean attempt slots to end-to-end success (successful trials only).
    pub mean_attempts: f64,
    /// Mean wall-clock time per success given the slot duration, seconds.
    pub mean_time: f64,
    /// Effective per-slot success probability, 1 / mean_attempts.
    pub success_probability_per_attempt: f64,
    /// 50/90/99-percentile attempt counts.
    pub quantiles: [u64; 3],
    /// Trials that hit the slot bound without succeeding.
    pub censored_failures: u64,
    pub trials: u64,
    /// Attempts histogram (slot count → occurrences), sorted by slot count.
    pub histogram: Vec<(u64, u64)>,
}

/// Slot bookkeeping shared by the repeater Monte Carlo entry points.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SlotConfig {
    /// Duration of one attempt slot in seconds (1/R_rep plus heralding
    /// latency).
    pub slot_duration: f64,
    /// Hard bound on slots per trial; trials exceeding it count as
    /// censored failures.
    pub max_slots: u64,
}

impl Default for SlotConfig {
    fn default() -> Self {
        Self { slot_duration: 1e-4, max_slots: 10_000_000 }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} = {p} not in [0,1]")));
    }
    Ok(())
}

/// One trial of the nested-swap chain; returns the slot count at which the
/// end-to-end link appears, or None once `max_slots` is exceeded.
///
/// Per slot: every bare leaf segment attempts (success probability
/// `p_link`); whenever two sibling links are simultaneously alive they are
/// consumed by an entanglement swap succeeding with probability
/// `swap_success` (swaps cascade within a slot). A stored link expires
/// after `cutoff` slots of existence (None = never).
fn chain_trial<R: Rng>(
    n_segments: usize,
    p_link: f64,
    swap_success: f64,
    cutoff: Option<u64>,
    max_slots: u64,
    rng: &mut R,
) -> Option<u64> {
    // Binary tree in a flat array: node 1 is the root, leaves occupy
    // n_segments..2*n_segments. expiry[i] = last slot the link at node i
    // stays usable; 0 = no link.
    let mut expiry = vec![0u64; 2 * n_segments];
    let mut slot: u64 = 0;
    loop {
        slot += 1;
        if slot > max_slots {
            return None;
        }
        for e in expiry.iter_mut() {
            if *e != 0 && *e < slot {
                *e = 0;
            }
        }
        let lifetime = |s: u64| cutoff.map_or(u64::MAX, |c| s.saturating_add(c - 1));
        for leaf in n_segments..2 * n_segments {
            if expiry[leaf] == 0 && rng.gen::<f64>() < p_link {
                expiry[leaf] = lifetime(slot);
            }
        }
        for node in (1..n_segments).rev() {
            let (l, r) = (2 * node, 2 * node + 1);
            if expiry[node] == 0 && expiry[l] != 0 && expiry[r] != 0 {
                expiry[l] = 0;
                expiry[r] = 0;
                if rng.gen::<f64>() < swap_success {
                    expiry[node] = lifetime(slot);
                }
            }
        }
        if expiry[1] != 0 {
            return Some(slot);
        }
    }
}

fn estimate_from_trials(
    n_segments: usize,
    p_link: f64,
    swap_success: f64,
    cutoff: Option<u64>,
    trials: u64,
    seed: u64,
    config: &SlotConfig,
) -> Result<RateEstimate> {
    check_probability("p_link", p_link)?;
    check_probability("swap_success", swap_success)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    if let Some(0) = cutoff {
        return Err(Error::InvalidParameter("cutoff must be ≥ 1 slot".into()));
    }
    if !n_segments.is_power_of_two() {
        return Err(Error::InvalidParameter(
            "segment count must be a power of two for the nested-swap schedule".into(),
        ));
    }
    let shard_list = shards(trials);
    let partials: Vec<(Vec<u64>, u64)> = shard_list
        .par_iter()
        .map(|&(stream, count)| {
            let mut rng = stream_rng(seed, stream);
            let mut slots = Vec::with_capacity(count as usize);
            let mut failures = 0u64;
            for _ in 0..count {
                match chain_trial(
                    n_segments,
                    p_link,
                    swap_success,
                    cutoff,
                    config.max_slots,
                    &mut rng,
                ) {
                    Some(s) => slots.push(s),
                    None => failures += 1,
                }
            }
            (slots, failures)
        })
        .collect();

    let mut all_slots: Vec<u64> = Vec::with_capacity(trials as usize);
    let mut censored_failures = 0u64;
    for (slots, failures) in partials {
        all_slots.extend(slots);
        censored_failures += failures;
    }
    if all_slots.is_empty() {
        return Err(Error::InvalidParameter(
            "no trial succeeded within the slot bound; raise max_slots or probabilities".into(),
        ));
    }
    all_slots.sort_unstable();
    let n = all_slots.len();
    let mean_attempts = all_slots.iter().map(|&s| s as f64).sum::<f64>() / n as f64;
    let quantile = |q: f64| all_slots[(((n as f64) * q) as usize).min(n - 1)];
    let mut histogram: Vec<(u64, u64)> = Vec::new();
    for &s in &all_slots {
        match histogram.last_mut() {
            Some((slot, count)) if *slot == s => *count += 1,
            _ => histogram.push((s, 1)),
        }
    }
    Ok(RateEstimate {
        mean_attempts,
        mean_time: mean_attempts * config.slot_duration,
        success_probability_per_attempt: 1.0 / mean_attempts,
        quantiles: [quantile(0.5), quantile(0.9), quantile(0.99)],
        censored_failures,
        trials,
        histogram,
    })
}

/// Two segments with a memory cutoff and an entanglement swap; Monte Carlo
/// distribution of attempt slots to end-to-end entanglement.
pub fn two_segment_repeater(
    p_link: f64,
    swap_success: f64,
    memory_cutoff: Option<u64>,
    trials: u64,
    seed: u64,
    config: &SlotConfig,
) -> Result<RateEstimate> {
    estimate_from_trials(2, p_link, swap_success, memory_cutoff, trials, seed, config)
}

/// Nested-swap chain over `n_segments` (a power of two); recursive doubling
/// by Monte Carlo.
pub fn chain_rate(
    n_segments: usize,
    p_link: f64,
    swap_success: f64,
    memory_cutoff: Option<u64>,
    trials: u64,
    seed: u64,
    config: &SlotConfig,
) -> Result<RateEstimate> {
    estimate_from_trials(n_segments, p_link, swap_success, memory_cutoff, trials, seed, config)
}

/// E[max(G₁,…,G_k)] for iid geometric(p) variables supported on {1,2,…},
/// by inclusion-exclusion. Closed-form oracle for the infinite-cutoff,
/// perfect-swap chain.
pub fn mean_max_of_geometrics(k: usize, p: f64) -> f64 {
    let q = 1.0 - p;
    let mut acc = 0.0;
    let mut sign = 1.0;
    for j in 1..=k {
        let binom = (0..j).fold(1.0, |b, i| b * (k - i) as f64 / (i + 1) as f64);
        acc += sign * binom / (1.0 - q.powi(j as i32));
        sign = -sign;
    }
    acc
}

/// Two-sample Kolmogorov-Smirnov statistic between attempt histograms.
pub fn ks_statistic(a: &RateEstimate, b: &RateEstimate) -> f64 {
    let total_a: u64 = a.histogram.iter().map(|&(_, c)| c).sum();
    let total_b: u64 = b.histogram.iter().map(|&(_, c)| c).sum();
    let max_slot = a
        .histogram
        .last()
        .map(|&(s, _)| s)
        .max(b.histogram.last().map(|&(s, _)| s))
        .unwrap_or(0);
    let mut ia = 0;
    let mut ib = 0;
    let mut ca = 0u64;
    let mut cb = 0u64;
    let mut d: f64 = 0.0;
    for s in 1..=max_slot {
        while ia < a.histogram.len() && a.histogram[ia].0 <= s {
            ca += a.histogram[ia].1;
            ia += 1;
        }
        while ib < b.histogram.len() && b.histogram[ib].0 <= s {
            cb += b.histogram[ib].1;
            ib += 1;
        }
        let fa = ca as f64 / total_a as f64;
        let fb = cb as f64 / total_b as f64;
        d = d.max((fa - fb).abs());
    }
    d
}
