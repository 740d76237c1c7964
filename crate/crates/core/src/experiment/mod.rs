//! Scenario assembly, Monte Carlo realization, and parameter sweeps.
//!
//! Two canned layouts cover the cases the analysis targets: a single base
//! station with three users (two near and comparable, one far) and a
//! two-station network with four users each (two near, two far per cell,
//! mirror-symmetric). Every station plays its own game over its known users;
//! the other cell's users contribute only their summed received power.
//!
//! Randomness is confined to shadowing. Each Monte Carlo run owns stream
//! `run_index` of the master seed, and a sweep reuses the same streams at
//! every sweep value, so a sweep varies parameters against common channel
//! draws and a fixed `(scenario, sweep, seed)` triple reproduces its output
//! byte for byte.

mod csv;
mod sweep;

pub use csv::{render_csv, CsvOptions};
pub use sweep::{
    run_sweep, RunOutcome, StationPoint, StructureSeries, SweepPoint, SweepResult, SweepSpec,
    SweepVariable,
};

use alloc::vec::Vec;
use core::fmt;

use crate::channel::{link_gain, run_rng, FadingParams, Position, SimRng};
use crate::game::{core, StabilityReport};
use crate::partition::{PlayerId, MAX_PLAYERS};
use crate::payoff::{ReceivedPowers, SystemParams};
use crate::{Error, Result};

/// Default single-station user distances: two near and comparable, one far.
pub const DEFAULT_SINGLE_BS_DISTANCES: [f64; 3] = [50.0, 60.0, 160.0];
/// Default per-station user distances in the two-station layout: two near,
/// two far.
pub const DEFAULT_TWO_BS_DISTANCES: [f64; 4] = [15.0, 18.0, 40.0, 48.0];
/// Default distance between the two stations.
pub const DEFAULT_TWO_BS_SEPARATION: f64 = 300.0;
/// Default path-loss constant (dB). Chosen together with the default
/// distances so received powers still dominate the unit noise floor at the
/// low end of the SNR sweeps.
pub const DEFAULT_K_DB: f64 = 110.0;
/// Default path-loss exponent (urban-like).
pub const DEFAULT_MU: f64 = 3.0;
/// Default shadowing standard deviation (dB).
pub const DEFAULT_SIGMA_S_DB: f64 = 0.0;
/// Default signature cross-correlation.
pub const DEFAULT_RHO: f64 = 0.4;
/// Default noise variance; SNR sweeps vary the transmit power against it.
pub const DEFAULT_NOISE_VAR: f64 = 1.0;
/// Default operating SNR (dB) when no sweep overrides it.
pub const DEFAULT_SNR_DB: f64 = 27.0;
/// Default master seed.
pub const DEFAULT_SEED: u64 = 42;
/// Relative group-payoff gain over non-cooperation above which cooperation
/// counts as notably dominant in summaries.
pub const NOTABLE_GAIN_THRESHOLD: f64 = 0.10;

/// Identifier of a base station; dense indices, printed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StationId(usize);

impl StationId {
    pub fn new(index: usize) -> Self {
        StationId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// One mobile user: its player slot at the home station and its position.
#[derive(Clone, Debug, PartialEq)]
pub struct UserSpec {
    pub player: PlayerId,
    pub position: Position,
    pub home: StationId,
}

/// A full simulation setup: geometry, radio constants, and run controls.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub stations: Vec<(StationId, Position)>,
    pub users: Vec<UserSpec>,
    pub fading: FadingParams,
    pub system: SystemParams,
    pub mc_runs: u32,
    pub seed: u64,
}

impl Scenario {
    /// Number of known users at `station`.
    pub fn player_count_of(&self, station: StationId) -> usize {
        self.users.iter().filter(|u| u.home == station).count()
    }

    pub fn validate(&self) -> Result<()> {
        if self.stations.is_empty() {
            return Err(Error::InvalidScenario("no stations"));
        }
        for (i, (id, pos)) in self.stations.iter().enumerate() {
            if id.index() != i {
                return Err(Error::InvalidScenario("station ids must be dense 0..S"));
            }
            if !pos.is_finite() {
                return Err(Error::InvalidScenario("station position must be finite"));
            }
        }
        if self.mc_runs == 0 {
            return Err(Error::InvalidParameter {
                name: "mc_runs",
                constraint: "at least 1",
            });
        }
        for (sid, _) in &self.stations {
            let m = self.player_count_of(*sid);
            if m == 0 {
                return Err(Error::InvalidScenario("every station needs at least one user"));
            }
            if m > MAX_PLAYERS {
                return Err(Error::InvalidPlayerCount { given: m });
            }
            // Player slots at each station must be exactly 0..m.
            let mut seen = alloc::vec![false; m];
            for user in self.users.iter().filter(|u| u.home == *sid) {
                let idx = user.player.index();
                if idx >= m || seen[idx] {
                    return Err(Error::InvalidScenario(
                        "station players must be dense 0..m without repeats",
                    ));
                }
                seen[idx] = true;
            }
        }
        for user in &self.users {
            if !user.position.is_finite() {
                return Err(Error::InvalidScenario("user position must be finite"));
            }
            if user.home.index() >= self.stations.len() {
                return Err(Error::InvalidScenario("user home station does not exist"));
            }
            // Every user-station link is realized, so no user may sit on any
            // station.
            for (_, bs_pos) in &self.stations {
                if user.position.distance_to(*bs_pos) <= 0.0 {
                    return Err(Error::NonPositiveDistance);
                }
            }
        }
        Ok(())
    }
}

/// Overrides for the single-station layout.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleBsConfig {
    /// One distance per user from the station.
    pub distances: Vec<f64>,
    pub k_db: f64,
    pub mu: f64,
    pub sigma_s_db: f64,
    pub rho: f64,
    pub noise_var: f64,
    pub snr_db: f64,
    pub mc_runs: u32,
    pub seed: u64,
}

impl Default for SingleBsConfig {
    fn default() -> Self {
        SingleBsConfig {
            distances: DEFAULT_SINGLE_BS_DISTANCES.to_vec(),
            k_db: DEFAULT_K_DB,
            mu: DEFAULT_MU,
            sigma_s_db: DEFAULT_SIGMA_S_DB,
            rho: DEFAULT_RHO,
            noise_var: DEFAULT_NOISE_VAR,
            snr_db: DEFAULT_SNR_DB,
            mc_runs: 1,
            seed: DEFAULT_SEED,
        }
    }
}

/// Overrides for the two-station layout.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoBsConfig {
    /// Per-station user distances (both stations share them; the second
    /// station's users are mirrored).
    pub distances: Vec<f64>,
    pub separation: f64,
    pub k_db: f64,
    pub mu: f64,
    pub sigma_s_db: f64,
    pub rho: f64,
    pub noise_var: f64,
    pub snr_db: f64,
    pub mc_runs: u32,
    pub seed: u64,
}

impl Default for TwoBsConfig {
    fn default() -> Self {
        TwoBsConfig {
            distances: DEFAULT_TWO_BS_DISTANCES.to_vec(),
            separation: DEFAULT_TWO_BS_SEPARATION,
            k_db: DEFAULT_K_DB,
            mu: DEFAULT_MU,
            sigma_s_db: DEFAULT_SIGMA_S_DB,
            rho: DEFAULT_RHO,
            noise_var: DEFAULT_NOISE_VAR,
            snr_db: DEFAULT_SNR_DB,
            mc_runs: 1,
            seed: DEFAULT_SEED,
        }
    }
}

fn ring_position(center: Position, distance: f64, index: usize, count: usize) -> Position {
    let angle = 2.0 * core::f64::consts::PI * index as f64 / count as f64;
    Position::new(
        center.x + distance * libm::cos(angle),
        center.y + distance * libm::sin(angle),
    )
}

/// One station at the origin with users placed on a ring at the configured
/// distances. No unknown users.
pub fn build_single_bs_scenario(cfg: &SingleBsConfig) -> Result<Scenario> {
    if cfg.distances.is_empty() || cfg.distances.len() > MAX_PLAYERS {
        return Err(Error::InvalidPlayerCount {
            given: cfg.distances.len(),
        });
    }
    if cfg.distances.iter().any(|d| !d.is_finite() || *d <= 0.0) {
        return Err(Error::NonPositiveDistance);
    }
    let origin = Position::new(0.0, 0.0);
    let count = cfg.distances.len();
    let users = cfg
        .distances
        .iter()
        .enumerate()
        .map(|(i, &d)| UserSpec {
            player: PlayerId::new(i),
            position: ring_position(origin, d, i, count),
            home: StationId(0),
        })
        .collect();
    let scenario = Scenario {
        stations: alloc::vec![(StationId(0), origin)],
        users,
        fading: FadingParams::new(cfg.k_db, cfg.mu, cfg.sigma_s_db)?,
        system: SystemParams::with_snr_db(cfg.rho, cfg.noise_var, cfg.snr_db)?,
        mc_runs: cfg.mc_runs,
        seed: cfg.seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Two stations `separation` apart; each serves users at the configured
/// distances, the second station's layout mirrored about the midline. Each
/// station sees the other cell's users as unknown interferers through the
/// same fading model.
pub fn build_two_bs_scenario(cfg: &TwoBsConfig) -> Result<Scenario> {
    if cfg.distances.is_empty() || cfg.distances.len() > MAX_PLAYERS {
        return Err(Error::InvalidPlayerCount {
            given: cfg.distances.len(),
        });
    }
    if cfg.distances.iter().any(|d| !d.is_finite() || *d <= 0.0)
        || !cfg.separation.is_finite()
        || cfg.separation <= 0.0
    {
        return Err(Error::NonPositiveDistance);
    }
    let bs1 = Position::new(0.0, 0.0);
    let bs2 = Position::new(cfg.separation, 0.0);
    let count = cfg.distances.len();
    let mut users = Vec::with_capacity(2 * count);
    for (i, &d) in cfg.distances.iter().enumerate() {
        users.push(UserSpec {
            player: PlayerId::new(i),
            position: ring_position(bs1, d, i, count),
            home: StationId(0),
        });
    }
    for (i, &d) in cfg.distances.iter().enumerate() {
        let p = ring_position(bs1, d, i, count);
        users.push(UserSpec {
            player: PlayerId::new(i),
            position: Position::new(cfg.separation - p.x, p.y),
            home: StationId(1),
        });
    }
    let scenario = Scenario {
        stations: alloc::vec![(StationId(0), bs1), (StationId(1), bs2)],
        users,
        fading: FadingParams::new(cfg.k_db, cfg.mu, cfg.sigma_s_db)?,
        system: SystemParams::with_snr_db(cfg.rho, cfg.noise_var, cfg.snr_db)?,
        mc_runs: cfg.mc_runs,
        seed: cfg.seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Draws one shadowing realization for every user-station link and returns
/// the received powers per station, in station order.
///
/// Draw order is stations-outer, users-inner, so a fixed stream reproduces
/// the same realization regardless of which station is inspected.
pub fn realize_powers(scenario: &Scenario, rng: &mut SimRng) -> Result<Vec<ReceivedPowers>> {
    let mut out = Vec::with_capacity(scenario.stations.len());
    for (sid, bs_pos) in &scenario.stations {
        let mut known = alloc::vec![0.0; scenario.player_count_of(*sid)];
        let mut unknown_total = 0.0;
        for user in &scenario.users {
            let gain = link_gain(user.position, *bs_pos, &scenario.fading, rng)?;
            let power = gain.gain_sq() * scenario.system.tx_power();
            if user.home == *sid {
                known[user.player.index()] = power;
            } else {
                unknown_total += power;
            }
        }
        out.push(ReceivedPowers::new(known, unknown_total)?);
    }
    Ok(out)
}

/// Stability of one station's game across Monte Carlo runs.
#[derive(Clone, Debug, PartialEq)]
pub struct StationStability {
    pub station: StationId,
    pub runs: u32,
    /// Fraction of runs in which each structure (enumeration order) was a
    /// core member.
    pub core_frequency: Vec<f64>,
    /// Core and evaluations of the game built from the mean received powers.
    pub mean_power_report: StabilityReport,
}

/// Runs the configured number of realizations and reports, per station, both
/// per-realization core frequencies and the core of the mean-power game.
/// With one run and no shadowing the two views coincide.
pub fn stability_analysis(scenario: &Scenario) -> Result<Vec<StationStability>> {
    scenario.validate()?;
    let station_count = scenario.stations.len();
    let runs = scenario.mc_runs;

    let mut counts: Vec<Vec<u32>> = Vec::with_capacity(station_count);
    let mut power_sums: Vec<(Vec<f64>, f64)> = Vec::with_capacity(station_count);
    for (sid, _) in &scenario.stations {
        let m = scenario.player_count_of(*sid);
        let structure_count = crate::partition::enumerate_structures(m)?.len();
        counts.push(alloc::vec![0; structure_count]);
        power_sums.push((alloc::vec![0.0; m], 0.0));
    }

    for run in 0..runs {
        let mut rng = run_rng(scenario.seed, u64::from(run));
        let realized = realize_powers(scenario, &mut rng)?;
        for (si, powers) in realized.iter().enumerate() {
            let report = core(&scenario.system, powers)?;
            for (idx, eval) in report.evaluations.iter().enumerate() {
                if report.is_core_member(&eval.structure) {
                    counts[si][idx] += 1;
                }
            }
            let (known_sum, unknown_sum) = &mut power_sums[si];
            for (acc, p) in known_sum.iter_mut().zip(powers.known()) {
                *acc += p;
            }
            *unknown_sum += powers.unknown_total();
        }
    }

    let mut out = Vec::with_capacity(station_count);
    for (si, (sid, _)) in scenario.stations.iter().enumerate() {
        let (known_sum, unknown_sum) = &power_sums[si];
        let mean_known: Vec<f64> = known_sum.iter().map(|s| s / f64::from(runs)).collect();
        let mean_powers = ReceivedPowers::new(mean_known, unknown_sum / f64::from(runs))?;
        out.push(StationStability {
            station: *sid,
            runs,
            core_frequency: counts[si]
                .iter()
                .map(|c| f64::from(*c) / f64::from(runs))
                .collect(),
            mean_power_report: core(&scenario.system, &mean_powers)?,
        });
    }
    Ok(out)
}
