//! Network geometry and the log-distance/shadowing channel model.
//!
//! A link's power gain in dB is `K - 10·μ·log10(d) - ψ`, where `K` is the
//! path-loss constant, `μ` the path-loss exponent, `d` the Euclidean
//! transmitter–receiver distance and `ψ` a zero-mean Gaussian shadowing draw.
//! The config value `sigma_s_db` is interpreted as the shadowing *standard
//! deviation* in dB (the conventional log-normal parameterization).
//!
//! All randomness flows through an explicit [`SimRng`] stream; identical
//! seeds reproduce identical gain realizations bit for bit.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Error, Result};

/// Planar position in an arbitrary but consistent distance unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance_to(self, other: Position) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Path-loss constant `K` (dB), exponent `μ`, and shadowing standard
/// deviation (dB).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FadingParams {
    k_db: f64,
    mu: f64,
    sigma_s_db: f64,
}

impl FadingParams {
    pub fn new(k_db: f64, mu: f64, sigma_s_db: f64) -> Result<Self> {
        if !k_db.is_finite() {
            return Err(Error::InvalidParameter {
                name: "k_db",
                constraint: "finite",
            });
        }
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::InvalidParameter {
                name: "mu",
                constraint: "finite and non-negative",
            });
        }
        if !sigma_s_db.is_finite() || sigma_s_db < 0.0 {
            return Err(Error::InvalidParameter {
                name: "sigma_s_db",
                constraint: "finite and non-negative",
            });
        }
        Ok(FadingParams {
            k_db,
            mu,
            sigma_s_db,
        })
    }

    pub fn k_db(&self) -> f64 {
        self.k_db
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma_s_db(&self) -> f64 {
        self.sigma_s_db
    }
}

/// Squared channel amplitude `|h|²` as a linear power ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelGain {
    gain_sq: f64,
}

impl ChannelGain {
    pub fn new(gain_sq: f64) -> Result<Self> {
        if !gain_sq.is_finite() || gain_sq <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "gain_sq",
                constraint: "positive and finite",
            });
        }
        Ok(ChannelGain { gain_sq })
    }

    pub fn gain_sq(self) -> f64 {
        self.gain_sq
    }
}

/// dB → linear power ratio.
pub fn linear_from_db(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Linear power ratio → dB.
pub fn db_from_linear(linear: f64) -> f64 {
    10.0 * libm::log10(linear)
}

/// Link gain in dB: `K - 10·μ·log10(distance) - shadowing_db`.
pub fn path_loss_db(fading: &FadingParams, distance: f64, shadowing_db: f64) -> Result<f64> {
    if !distance.is_finite() || distance <= 0.0 {
        return Err(Error::NonPositiveDistance);
    }
    Ok(fading.k_db - 10.0 * fading.mu * libm::log10(distance) - shadowing_db)
}

/// Converts a dB gain into its linear form `10^(db/10)`.
pub fn gain_linear(db_value: f64) -> ChannelGain {
    ChannelGain {
        gain_sq: linear_from_db(db_value),
    }
}

/// One zero-mean Gaussian shadowing draw with standard deviation
/// `sigma_s_db`. The stream advances by the same amount regardless of sigma,
/// so a `sigma_s_db` of zero returns exactly 0 without perturbing downstream
/// draws.
pub fn draw_shadowing<R: RngCore>(rng: &mut R, sigma_s_db: f64) -> f64 {
    standard_normal(rng) * sigma_s_db
}

/// Channel gain of one link: Euclidean distance, a fresh shadowing draw, and
/// the dB→linear conversion.
pub fn link_gain<R: RngCore>(
    ms: Position,
    bs: Position,
    fading: &FadingParams,
    rng: &mut R,
) -> Result<ChannelGain> {
    let distance = ms.distance_to(bs);
    if !distance.is_finite() || distance <= 0.0 {
        return Err(Error::NonPositiveDistance);
    }
    let shadowing = draw_shadowing(rng, fading.sigma_s_db);
    let db = path_loss_db(fading, distance, shadowing)?;
    // Guards pathological configs whose losses underflow or overflow f64.
    ChannelGain::new(linear_from_db(db))
}

/// The simulation RNG. One stream per Monte Carlo run, derived from the
/// master seed and the run index; the seed→draw mapping is stable within a
/// release and recorded in output metadata.
pub type SimRng = ChaCha8Rng;

/// Stream for run `stream` of the simulation seeded with `master_seed`.
pub fn run_rng(master_seed: u64, stream: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Box–Muller transform over two 53-bit uniforms.
fn standard_normal<R: RngCore>(rng: &mut R) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    // u1 in (0, 1] keeps the log finite; u2 in [0, 1).
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * SCALE;
    let u2 = (rng.next_u64() >> 11) as f64 * SCALE;
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}
