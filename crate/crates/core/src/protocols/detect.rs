//! Nondestructive photon detection via the conditional phase flip of an
//! atomic superposition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::ErrorModel;

/// What impinges on the device during the gate interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonInput {
    /// Exactly one photon.
    Single,
    /// Weak coherent pulse with the given mean photon number; the phase
    /// flip fires on odd photon numbers.
    Coherent { nbar: f64 },
    Absent,
}

/// Probability that a coherent pulse of mean photon number n̄ carries an
/// odd photon number: (1 − e^{−2n̄})/2, the Poisson parity sum.
pub fn odd_photon_probability(nbar: f64) -> Result<f64> {
    if nbar < 0.0 {
        return Err(Error::InvalidParameter("mean photon number must be nonnegative".into()));
    }
    Ok((1.0 - (-2.0 * nbar).exp()) / 2.0)
}

/// Outcome distribution of one detection attempt.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DetectionOutcome {
    /// Probability that the readout flags a photon (atom found in |c⟩
    /// after the π/2 analysis rotation).
    pub p_flag: f64,
    /// Probability that the photon survives the reflection and continues
    /// (single-photon input only; vacuously 1 for `Absent`).
    pub p_photon_survives: f64,
}

/// Device parameters for efficiency accounting. `p_detect` is the
/// end-to-end probability that an impinging photon is flagged;
/// `p_survive_given_miss` is the chance the photon is still available for a
/// downstream device when this one missed it. Defaults are the fitted
/// values of the reference apparatus (reflection probability 0.66).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DetectionDevice {
    pub p_detect: f64,
    pub p_survive_given_miss: f64,
    /// Probability the photon is reflected rather than absorbed or
    /// scattered.
    pub p_reflect: f64,
}

impl DetectionDevice {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_detect", self.p_detect),
            ("p_survive_given_miss", self.p_survive_given_miss),
            ("p_reflect", self.p_reflect),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} = {p} not in [0,1]")));
            }
        }
        Ok(())
    }

    /// Combined efficiency of `k` concatenated devices: a missed photon
    /// reaches the next device only if it survived, so
    /// miss_k = (1 − p_surv|miss·…)… computed by the recursion
    /// miss_{k} = p(miss & destroyed) + p(miss & survives) · miss_{k−1}.
    pub fn concatenated_efficiency(&self, k: usize) -> Result<f64> {
        self.validate()?;
        if k == 0 {
            return Err(Error::InvalidParameter("need at least one device".into()));
        }
        let miss_1 = 1.0 - self.p_detect;
        let q = miss_1 * self.p_survive_given_miss; // miss & photon continues
        let z = miss_1 * (1.0 - self.p_survive_given_miss); // miss & photon gone
        let mut miss = miss_1;
        for _ in 1..k {
            miss = z + q * miss;
        }
        Ok(1.0 - miss)
    }
}

/// One nondestructive detection attempt: the atom is prepared in
/// (|c⟩+|u⟩)/√2, the reflection flips the superposition phase iff a photon
/// (an odd photon number) is present, a π/2 rotation maps the flipped state
/// to |c⟩, and fluorescence readout reports the atomic state.
///
/// Preparation and rotation errors contract the Ramsey fringe by
/// `err.prep_fidelity`; the readout misclassifies with probability
/// (1 − readout_fidelity)/2 on either state.
pub fn nondestructive_detect(
    input: PhotonInput,
    err: &ErrorModel,
    device: &DetectionDevice,
) -> Result<DetectionOutcome> {
    err.validate()?;
    device.validate()?;
    let p_flip = match input {
        PhotonInput::Single => 1.0,
        PhotonInput::Coherent { nbar } => odd_photon_probability(nbar)?,
        PhotonInput::Absent => 0.0,
    };
    // Ideal Ramsey chain: P(atom read c | flip) = 1, P(atom read c | no
    // flip) = 0. Fringe contraction s maps these to (1+s)/2 and (1−s)/2;
    // readout misclassification pulls further toward ½.
    let s = err.prep_fidelity * err.readout_fidelity;
    let p_c_given_flip = (1.0 + s) / 2.0;
    let p_c_given_noflip = (1.0 - s) / 2.0;
    let p_flag = p_flip * p_c_given_flip + (1.0 - p_flip) * p_c_given_noflip;
    let p_photon_survives = match input {
        PhotonInput::Absent => 1.0,
        _ => device.p_reflect,
    };
    Ok(DetectionOutcome { p_flag, p_photon_survives })
}
