//! Per-user SINR under decorrelating group detection and matched-filter
//! reception.
//!
//! All users share one cross-correlation value `ρ` between distinct signature
//! waveforms, so a coalition's decorrelator statistics depend only on the
//! coalition size and on the total received power outside it. Users whose
//! signatures the station does not know enter exclusively through their summed
//! received power. SINRs are kept in linear scale throughout; dB conversion
//! belongs to the reporting layer.

use alloc::vec::Vec;

use crate::partition::{Coalition, CoalitionStructure, PlayerId};
use crate::{Error, Result};

/// Global radio constants: cross-correlation `ρ ∈ [0,1)`, noise variance
/// `σ² > 0`, and the common transmit power `P > 0` (all linear scale).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    rho: f64,
    noise_var: f64,
    tx_power: f64,
}

impl SystemParams {
    pub fn new(rho: f64, noise_var: f64, tx_power: f64) -> Result<Self> {
        if !rho.is_finite() || !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter {
                name: "rho",
                constraint: "in [0,1)",
            });
        }
        if !noise_var.is_finite() || noise_var <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "noise_var",
                constraint: "positive and finite",
            });
        }
        if !tx_power.is_finite() || tx_power <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "tx_power",
                constraint: "positive and finite",
            });
        }
        Ok(SystemParams {
            rho,
            noise_var,
            tx_power,
        })
    }

    /// Same constants with the transmit power set from an SNR in dB,
    /// `P = σ²·10^(snr/10)`.
    pub fn with_snr_db(rho: f64, noise_var: f64, snr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::InvalidParameter {
                name: "snr_db",
                constraint: "finite",
            });
        }
        SystemParams::new(rho, noise_var, noise_var * crate::channel::linear_from_db(snr_db))
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }
}

/// Received powers at one base station: one entry per known user (indexed by
/// [`PlayerId`]) plus the aggregate received power of all unknown users.
#[derive(Clone, Debug, PartialEq)]
pub struct ReceivedPowers {
    known: Vec<f64>,
    unknown_total: f64,
}

impl ReceivedPowers {
    pub fn new(known: Vec<f64>, unknown_total: f64) -> Result<Self> {
        if known.is_empty() {
            return Err(Error::EmptyPlayerSet);
        }
        if known.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(Error::InvalidParameter {
                name: "known_power",
                constraint: "positive and finite",
            });
        }
        if !unknown_total.is_finite() || unknown_total < 0.0 {
            return Err(Error::InvalidParameter {
                name: "unknown_total",
                constraint: "non-negative and finite",
            });
        }
        Ok(ReceivedPowers {
            known,
            unknown_total,
        })
    }

    pub fn player_count(&self) -> usize {
        self.known.len()
    }

    pub fn known(&self) -> &[f64] {
        &self.known
    }

    pub fn unknown_total(&self) -> f64 {
        self.unknown_total
    }

    pub fn power_of(&self, user: PlayerId) -> Result<f64> {
        self.known
            .get(user.index())
            .copied()
            .ok_or(Error::UnknownPlayer(user))
    }

    /// Total received power outside `coalition`: known users not in the
    /// coalition plus every unknown user.
    fn outside_power(&self, coalition: &Coalition) -> f64 {
        let known_outside: f64 = self
            .known
            .iter()
            .enumerate()
            .filter(|(i, _)| !coalition.contains(PlayerId::new(*i)))
            .map(|(_, p)| p)
            .sum();
        known_outside + self.unknown_total
    }
}

/// Linear SINR per known user, indexed by [`PlayerId`].
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffVector {
    sinr: Vec<f64>,
}

impl PayoffVector {
    pub fn new(sinr: Vec<f64>) -> Result<Self> {
        if sinr.is_empty() {
            return Err(Error::EmptyPlayerSet);
        }
        if sinr.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::InvalidParameter {
                name: "sinr",
                constraint: "positive and finite",
            });
        }
        Ok(PayoffVector { sinr })
    }

    pub fn len(&self) -> usize {
        self.sinr.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn get(&self, user: PlayerId) -> Result<f64> {
        self.sinr
            .get(user.index())
            .copied()
            .ok_or(Error::UnknownPlayer(user))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.sinr
    }

    /// Sum of all entries (the group payoff of the full player set).
    pub fn total(&self) -> f64 {
        self.sinr.iter().sum()
    }

    /// Sum over one coalition's members.
    pub fn coalition_total(&self, subset: &Coalition) -> Result<f64> {
        let mut sum = 0.0;
        for member in subset.members() {
            sum += self.get(*member)?;
        }
        Ok(sum)
    }
}

/// SINR of `user` when the station decorrelates coalition `coalition`
/// jointly:
///
/// `P_u / [ σ²/(1-ρ) · (1+ρ(s-2))/(1+ρ(s-1))  +  (ρ/(1+ρ(s-1)))² · Σ_{j∉Ω} P_j ]`
///
/// with `s = |Ω|` and the out-of-coalition sum running over known users
/// outside the coalition plus the unknown-user aggregate. For `s = 1` the
/// noise factor collapses to `σ²` and the expression is exactly the matched
/// filter of [`sinr_matched_filter`].
pub fn sinr_decorrelator(
    params: &SystemParams,
    powers: &ReceivedPowers,
    coalition: &Coalition,
    user: PlayerId,
) -> Result<f64> {
    if !coalition.contains(user) {
        return Err(Error::UserNotInCoalition(user));
    }
    let last = coalition.members()[coalition.len() - 1];
    if last.index() >= powers.player_count() {
        return Err(Error::UnknownPlayer(last));
    }
    let p_user = powers.power_of(user)?;
    let rho = params.rho;
    let size = coalition.len() as f64;
    let scale = 1.0 + rho * (size - 1.0);
    let noise_term = params.noise_var / (1.0 - rho) * (1.0 + rho * (size - 2.0)) / scale;
    let leak = rho / scale;
    let denom = noise_term + leak * leak * powers.outside_power(coalition);
    Ok(p_user / denom)
}

/// SINR of `user` under single-user matched-filter reception: every other
/// signal, known or not, is interference attenuated only by `ρ²`.
pub fn sinr_matched_filter(
    params: &SystemParams,
    powers: &ReceivedPowers,
    user: PlayerId,
) -> Result<f64> {
    let p_user = powers.power_of(user)?;
    let rho_sq = params.rho * params.rho;
    let known_other: f64 = powers
        .known
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != user.index())
        .map(|(_, p)| p)
        .sum();
    let denom = rho_sq * known_other + rho_sq * powers.unknown_total + params.noise_var;
    Ok(p_user / denom)
}

/// Payoff vector of a full coalition structure: each user is scored by the
/// decorrelator of its own block, so singleton blocks receive matched-filter
/// values.
pub fn payoffs_for_structure(
    params: &SystemParams,
    powers: &ReceivedPowers,
    structure: &CoalitionStructure,
) -> Result<PayoffVector> {
    if structure.player_count() != powers.player_count() {
        return Err(Error::MismatchedPlayers);
    }
    let mut sinr = alloc::vec![0.0; powers.player_count()];
    for block in structure.blocks() {
        for member in block.members() {
            sinr[member.index()] = sinr_decorrelator(params, powers, block, *member)?;
        }
    }
    PayoffVector::new(sinr)
}
