//! Parameter sweeps over SNR, shadowing, and path-loss exponent.

use alloc::vec::Vec;
use core::str::FromStr;

use crate::channel::{run_rng, FadingParams};
use crate::game::in_core;
use crate::partition::{enumerate_structures, CoalitionStructure};
use crate::payoff::{payoffs_for_structure, PayoffVector, SystemParams};
use crate::{Error, Result};

use super::{realize_powers, Scenario, StationId};

/// Which scenario knob a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    /// Transmit SNR in dB; sets `P = σ²·10^(value/10)`.
    SnrDb,
    /// Shadowing standard deviation in dB.
    SigmaSDb,
    /// Path-loss exponent.
    Mu,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::SnrDb => "snr_db",
            SweepVariable::SigmaSDb => "sigma_s_db",
            SweepVariable::Mu => "mu",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr_db" => Ok(SweepVariable::SnrDb),
            "sigma_s_db" => Ok(SweepVariable::SigmaSDb),
            "mu" => Ok(SweepVariable::Mu),
            _ => Err(Error::InvalidSweep(
                "unknown variable (expected snr_db, sigma_s_db, or mu)",
            )),
        }
    }
}

/// An ordered grid of values for one sweep variable.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    variable: SweepVariable,
    values: Vec<f64>,
}

impl SweepSpec {
    /// Values must be non-empty, finite, and strictly monotonic.
    pub fn new(variable: SweepVariable, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSweep("no sweep values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSweep("sweep values must be finite"));
        }
        if values.len() > 1 {
            let increasing = values.windows(2).all(|w| w[0] < w[1]);
            let decreasing = values.windows(2).all(|w| w[0] > w[1]);
            if !increasing && !decreasing {
                return Err(Error::InvalidSweep("values must be strictly monotonic"));
            }
        }
        Ok(SweepSpec { variable, values })
    }

    pub fn variable(&self) -> SweepVariable {
        self.variable
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// One structure's outcome in one Monte Carlo run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub payoffs: PayoffVector,
    pub group_total: f64,
    pub in_core: bool,
}

/// One structure's runs and run-averaged statistics at one sweep point.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureSeries {
    pub structure: CoalitionStructure,
    pub runs: Vec<RunOutcome>,
    pub mean_payoffs: Vec<f64>,
    pub mean_group_total: f64,
    /// Fraction of runs in which the structure was a core member.
    pub core_frequency: f64,
}

/// One station's structures at one sweep point. The all-singleton baseline is
/// always computed so gains over non-cooperation are well defined even when a
/// structure filter excludes it from `structures`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationPoint {
    pub station: StationId,
    pub noncoop: StructureSeries,
    pub structures: Vec<StructureSeries>,
}

/// All stations at one sweep value.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub stations: Vec<StationPoint>,
}

/// A complete sweep: every point, every station, every structure, with both
/// per-run and run-averaged values.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub seed: u64,
    pub mc_runs: u32,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// The structure with the largest mean group total, per station, at one
    /// sweep point.
    pub fn max_group_structure_at(
        &self,
        point: usize,
    ) -> Vec<(StationId, &CoalitionStructure, f64)> {
        self.points[point]
            .stations
            .iter()
            .map(|st| {
                let best = st
                    .structures
                    .iter()
                    .reduce(|a, b| {
                        if b.mean_group_total > a.mean_group_total {
                            b
                        } else {
                            a
                        }
                    })
                    .expect("stations carry at least one structure");
                (st.station, &best.structure, best.mean_group_total)
            })
            .collect()
    }
}

fn apply_sweep_value(
    scenario: &Scenario,
    variable: SweepVariable,
    value: f64,
) -> Result<Scenario> {
    let mut scn = scenario.clone();
    match variable {
        SweepVariable::SnrDb => {
            scn.system = SystemParams::with_snr_db(
                scenario.system.rho(),
                scenario.system.noise_var(),
                value,
            )?;
        }
        SweepVariable::SigmaSDb => {
            scn.fading = FadingParams::new(
                scenario.fading.k_db(),
                scenario.fading.mu(),
                value,
            )?;
        }
        SweepVariable::Mu => {
            scn.fading = FadingParams::new(
                scenario.fading.k_db(),
                value,
                scenario.fading.sigma_s_db(),
            )?;
        }
    }
    Ok(scn)
}

/// Runs the sweep: for each value and Monte Carlo run, redraw shadowing,
/// compute received powers, and evaluate every (or each filtered) structure
/// per station, including core membership. Deterministic under a fixed seed;
/// run `r` uses stream `r` at every sweep value, so values are compared
/// against common channel draws.
pub fn run_sweep(
    scenario: &Scenario,
    spec: &SweepSpec,
    filter: Option<&[CoalitionStructure]>,
) -> Result<SweepResult> {
    scenario.validate()?;

    // Structure lists are per station (player counts may differ).
    let mut station_structures: Vec<Vec<CoalitionStructure>> = Vec::new();
    for (sid, _) in &scenario.stations {
        let m = scenario.player_count_of(*sid);
        let list = match filter {
            Some(wanted) => {
                for s in wanted {
                    if s.player_count() != m {
                        return Err(Error::MismatchedPlayers);
                    }
                }
                wanted.to_vec()
            }
            None => enumerate_structures(m)?,
        };
        station_structures.push(list);
    }

    let runs = scenario.mc_runs;
    let mut points = Vec::with_capacity(spec.values.len());
    for &value in &spec.values {
        let scn = apply_sweep_value(scenario, spec.variable, value)?;

        // Realize every run once, all stations at a time.
        let mut realized = Vec::with_capacity(runs as usize);
        for run in 0..runs {
            let mut rng = run_rng(scn.seed, u64::from(run));
            realized.push(realize_powers(&scn, &mut rng)?);
        }

        let mut stations = Vec::with_capacity(scn.stations.len());
        for (si, (sid, _)) in scn.stations.iter().enumerate() {
            let m = scn.player_count_of(*sid);
            let noncoop_structure = CoalitionStructure::singletons(m)?;
            let noncoop = evaluate_series(&scn, &realized, si, &noncoop_structure)?;
            let structures = station_structures[si]
                .iter()
                .map(|s| evaluate_series(&scn, &realized, si, s))
                .collect::<Result<Vec<_>>>()?;
            stations.push(StationPoint {
                station: *sid,
                noncoop,
                structures,
            });
        }
        points.push(SweepPoint { value, stations });
    }

    Ok(SweepResult {
        variable: spec.variable,
        seed: scenario.seed,
        mc_runs: runs,
        points,
    })
}

fn evaluate_series(
    scenario: &Scenario,
    realized: &[Vec<crate::payoff::ReceivedPowers>],
    station_index: usize,
    structure: &CoalitionStructure,
) -> Result<StructureSeries> {
    let mut runs = Vec::with_capacity(realized.len());
    let mut mean_payoffs = alloc::vec![0.0; structure.player_count()];
    let mut total_sum = 0.0;
    let mut core_hits = 0u32;
    for powers_by_station in realized {
        let powers = &powers_by_station[station_index];
        let payoffs = payoffs_for_structure(&scenario.system, powers, structure)?;
        let group_total = payoffs.total();
        let member = in_core(&payoffs, &scenario.system, powers)?;
        for (acc, p) in mean_payoffs.iter_mut().zip(payoffs.as_slice()) {
            *acc += p;
        }
        total_sum += group_total;
        core_hits += u32::from(member);
        runs.push(RunOutcome {
            payoffs,
            group_total,
            in_core: member,
        });
    }
    let n = realized.len() as f64;
    for acc in mean_payoffs.iter_mut() {
        *acc /= n;
    }
    Ok(StructureSeries {
        structure: structure.clone(),
        runs,
        mean_payoffs,
        mean_group_total: total_sum / n,
        core_frequency: f64::from(core_hits) / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{build_single_bs_scenario, SingleBsConfig};
    use crate::game::evaluate_all;

    #[test]
    fn sweep_spec_rejects_bad_grids() {
        assert!(SweepSpec::new(SweepVariable::SnrDb, alloc::vec![]).is_err());
        assert!(SweepSpec::new(SweepVariable::SnrDb, alloc::vec![1.0, 1.0]).is_err());
        assert!(SweepSpec::new(SweepVariable::SnrDb, alloc::vec![1.0, 3.0, 2.0]).is_err());
        assert!(SweepSpec::new(SweepVariable::SnrDb, alloc::vec![f64::NAN]).is_err());
        assert!(SweepSpec::new(SweepVariable::SnrDb, alloc::vec![3.0, 2.0, 1.0]).is_ok());
    }

    #[test]
    fn sweep_variable_parses_and_rejects() {
        assert_eq!("snr_db".parse::<SweepVariable>(), Ok(SweepVariable::SnrDb));
        assert_eq!("mu".parse::<SweepVariable>(), Ok(SweepVariable::Mu));
        assert!("bandwidth".parse::<SweepVariable>().is_err());
    }

    #[test]
    fn degenerate_one_point_sweep_matches_direct_evaluation() {
        let scenario = build_single_bs_scenario(&SingleBsConfig::default()).unwrap();
        let spec = SweepSpec::new(
            SweepVariable::SnrDb,
            alloc::vec![crate::experiment::DEFAULT_SNR_DB],
        )
        .unwrap();
        let result = run_sweep(&scenario, &spec, None).unwrap();
        assert_eq!(result.points.len(), 1);

        let mut rng = run_rng(scenario.seed, 0);
        let powers = realize_powers(&scenario, &mut rng).unwrap();
        let direct = evaluate_all(&scenario.system, &powers[0]).unwrap();
        let station = &result.points[0].stations[0];
        assert_eq!(station.structures.len(), direct.len());
        for (series, eval) in station.structures.iter().zip(&direct) {
            assert_eq!(series.structure, eval.structure);
            assert_eq!(series.runs[0].payoffs, eval.payoffs);
        }
    }

    #[test]
    fn group_totals_are_nondecreasing_in_snr_without_shadowing() {
        let scenario = build_single_bs_scenario(&SingleBsConfig::default()).unwrap();
        let spec = SweepSpec::new(
            SweepVariable::SnrDb,
            (-8..=8).map(|v| f64::from(v) * 5.0).collect(),
        )
        .unwrap();
        let result = run_sweep(&scenario, &spec, None).unwrap();
        let structure_count = result.points[0].stations[0].structures.len();
        for k in 0..structure_count {
            let mut prev = 0.0;
            for point in &result.points {
                let total = point.stations[0].structures[k].mean_group_total;
                assert!(total >= prev);
                prev = total;
            }
        }
    }

    #[test]
    fn filtered_sweep_keeps_only_requested_structures() {
        let scenario = build_single_bs_scenario(&SingleBsConfig::default()).unwrap();
        let spec = SweepSpec::new(SweepVariable::SnrDb, alloc::vec![0.0, 10.0]).unwrap();
        let filter = alloc::vec![
            CoalitionStructure::parse_label("123", 3).unwrap(),
            CoalitionStructure::parse_label("1|2|3", 3).unwrap(),
        ];
        let result = run_sweep(&scenario, &spec, Some(&filter)).unwrap();
        let station = &result.points[0].stations[0];
        assert_eq!(station.structures.len(), 2);
        assert_eq!(station.structures[0].structure.label(), "123");
        // The baseline is present even when filtering, and equals the
        // filtered copy of the all-singleton structure.
        assert_eq!(station.noncoop.structure.label(), "1|2|3");
        assert_eq!(
            station.noncoop.runs[0].payoffs,
            station.structures[1].runs[0].payoffs
        );
    }

    #[test]
    fn filter_with_wrong_player_count_is_rejected() {
        let scenario = build_single_bs_scenario(&SingleBsConfig::default()).unwrap();
        let spec = SweepSpec::new(SweepVariable::SnrDb, alloc::vec![0.0]).unwrap();
        let filter = alloc::vec![CoalitionStructure::grand(4).unwrap()];
        assert_eq!(
            run_sweep(&scenario, &spec, Some(&filter)),
            Err(Error::MismatchedPlayers)
        );
    }

    #[test]
    fn mean_values_average_the_runs() {
        let cfg = SingleBsConfig {
            sigma_s_db: 6.0,
            mc_runs: 5,
            ..SingleBsConfig::default()
        };
        let scenario = build_single_bs_scenario(&cfg).unwrap();
        let spec = SweepSpec::new(SweepVariable::SnrDb, alloc::vec![20.0]).unwrap();
        let result = run_sweep(&scenario, &spec, None).unwrap();
        let series = &result.points[0].stations[0].structures[0];
        assert_eq!(series.runs.len(), 5);
        let manual: f64 =
            series.runs.iter().map(|r| r.group_total).sum::<f64>() / 5.0;
        assert!((series.mean_group_total - manual).abs() <= 1e-12 * manual.abs());
        let manual_first: f64 = series
            .runs
            .iter()
            .map(|r| r.payoffs.as_slice()[0])
            .sum::<f64>()
            / 5.0;
        assert!((series.mean_payoffs[0] - manual_first).abs() <= 1e-12 * manual_first.abs());
    }

    #[test]
    fn rerunning_a_sweep_reproduces_it_exactly() {
        let cfg = SingleBsConfig {
            sigma_s_db: 8.0,
            mc_runs: 3,
            ..SingleBsConfig::default()
        };
        let scenario = build_single_bs_scenario(&cfg).unwrap();
        let spec =
            SweepSpec::new(SweepVariable::SigmaSDb, alloc::vec![0.0, 4.0, 8.0]).unwrap();
        let a = run_sweep(&scenario, &spec, None).unwrap();
        let b = run_sweep(&scenario, &spec, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mu_sweep_rejects_negative_exponents() {
        let scenario = build_single_bs_scenario(&SingleBsConfig::default()).unwrap();
        let spec = SweepSpec::new(SweepVariable::Mu, alloc::vec![-1.0, 2.0]).unwrap();
        assert!(run_sweep(&scenario, &spec, None).is_err());
    }
}
