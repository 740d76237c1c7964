//! Stability analysis: rationality, dominance, and core membership.
//!
//! The core is decided by exhaustive deviation search. A coalition blocks a
//! candidate structure when joint detection of exactly that coalition gives
//! every member a strictly higher SINR than it has under the candidate.
//! Because the decorrelator SINR depends on the outside world only through
//! total outside power, a deviator's payoff does not depend on how the
//! remaining users arrange themselves; the companion test
//! `deviation_payoff_ignores_complement_arrangement` asserts this instead of
//! leaving it implicit.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::partition::{subsets, Coalition, CoalitionStructure, PlayerId};
use crate::payoff::{payoffs_for_structure, sinr_decorrelator, PayoffVector, ReceivedPowers, SystemParams};
use crate::{Error, Result};

/// Relative margin a deviation must clear to count as a strict improvement.
/// Payoff ties (a coalition "deviating" to its own block) must not create
/// blocks out of floating-point noise.
pub const STRICT_IMPROVEMENT_TOL: f64 = 1e-9;

/// One structure's payoffs and rationality flags.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureEvaluation {
    pub structure: CoalitionStructure,
    pub payoffs: PayoffVector,
    /// Sum of all users' SINRs.
    pub group_total: f64,
    /// Every user does at least as well as under the all-singleton structure.
    pub individually_rational: bool,
}

/// A deviating coalition together with the payoff each member would earn.
/// `payoff_after` is aligned with `deviating_set.members()`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationWitness {
    pub deviating_set: Coalition,
    pub payoff_after: Vec<f64>,
}

/// Full stability picture over every coalition structure of the player set.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    /// One entry per structure, in enumeration order.
    pub evaluations: Vec<StructureEvaluation>,
    /// Structures no coalition can block.
    pub core_members: Vec<CoalitionStructure>,
    /// For each non-core structure (keyed by its index in `evaluations`),
    /// the first blocking coalition in subset-enumeration order.
    pub blocking: BTreeMap<usize, DeviationWitness>,
}

impl StabilityReport {
    pub fn is_core_member(&self, structure: &CoalitionStructure) -> bool {
        self.core_members.iter().any(|s| s == structure)
    }
}

/// Evaluates every coalition structure of the known-user set: payoffs, group
/// totals, and individual rationality against the all-singleton baseline.
pub fn evaluate_all(
    params: &SystemParams,
    powers: &ReceivedPowers,
) -> Result<Vec<StructureEvaluation>> {
    let m = powers.player_count();
    let structures = crate::partition::enumerate_structures(m)?;
    let baseline = payoffs_for_structure(params, powers, &CoalitionStructure::singletons(m)?)?;
    structures
        .into_iter()
        .map(|structure| {
            let payoffs = payoffs_for_structure(params, powers, &structure)?;
            let individually_rational = payoffs
                .as_slice()
                .iter()
                .zip(baseline.as_slice())
                .all(|(now, solo)| now >= solo);
            Ok(StructureEvaluation {
                group_total: payoffs.total(),
                structure,
                payoffs,
                individually_rational,
            })
        })
        .collect()
}

/// Payoff profile a coalition would obtain by deviating and being detected
/// jointly, aligned with `deviating_set.members()`. Independent of the
/// candidate structure: the rest of the world enters only as total power.
pub fn deviation_payoffs(
    params: &SystemParams,
    powers: &ReceivedPowers,
    deviating_set: &Coalition,
) -> Result<Vec<f64>> {
    deviating_set
        .members()
        .iter()
        .map(|&user| sinr_decorrelator(params, powers, deviating_set, user))
        .collect()
}

/// Whether `deviating_set` blocks a structure whose payoffs are
/// `candidate_payoffs`: every member must strictly improve (relative margin
/// [`STRICT_IMPROVEMENT_TOL`]). Returns the witness if so.
pub fn blocks(
    candidate_payoffs: &PayoffVector,
    deviating_set: &Coalition,
    params: &SystemParams,
    powers: &ReceivedPowers,
) -> Result<Option<DeviationWitness>> {
    let after = deviation_payoffs(params, powers, deviating_set)?;
    witness_if_improving(candidate_payoffs, deviating_set, &after)
}

fn witness_if_improving(
    candidate_payoffs: &PayoffVector,
    deviating_set: &Coalition,
    after: &[f64],
) -> Result<Option<DeviationWitness>> {
    for (member, &gain) in deviating_set.members().iter().zip(after) {
        let before = candidate_payoffs.get(*member)?;
        if gain <= before * (1.0 + STRICT_IMPROVEMENT_TOL) {
            return Ok(None);
        }
    }
    Ok(Some(DeviationWitness {
        deviating_set: deviating_set.clone(),
        payoff_after: after.to_vec(),
    }))
}

/// Exhaustive core computation: a structure is a core member iff no
/// non-empty subset of players blocks it. For non-core structures the first
/// witness in subset-enumeration order is recorded.
pub fn core(params: &SystemParams, powers: &ReceivedPowers) -> Result<StabilityReport> {
    let evaluations = evaluate_all(params, powers)?;
    let players: Vec<PlayerId> = (0..powers.player_count()).map(PlayerId::new).collect();
    let all_subsets = subsets(&players)?;
    // Deviation profiles do not depend on the candidate structure.
    let profiles: Vec<Vec<f64>> = all_subsets
        .iter()
        .map(|s| deviation_payoffs(params, powers, s))
        .collect::<Result<_>>()?;

    let mut core_members = Vec::new();
    let mut blocking = BTreeMap::new();
    for (idx, eval) in evaluations.iter().enumerate() {
        let mut witness = None;
        for (subset, after) in all_subsets.iter().zip(&profiles) {
            if let Some(w) = witness_if_improving(&eval.payoffs, subset, after)? {
                witness = Some(w);
                break;
            }
        }
        match witness {
            Some(w) => {
                blocking.insert(idx, w);
            }
            None => core_members.push(eval.structure.clone()),
        }
    }
    Ok(StabilityReport {
        evaluations,
        core_members,
        blocking,
    })
}

/// Membership test for a single structure, given its payoffs.
pub fn in_core(
    candidate_payoffs: &PayoffVector,
    params: &SystemParams,
    powers: &ReceivedPowers,
) -> Result<bool> {
    let players: Vec<PlayerId> = (0..powers.player_count()).map(PlayerId::new).collect();
    for subset in subsets(&players)? {
        if blocks(candidate_payoffs, &subset, params, powers)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pairwise dominance flags between two structures' evaluations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Dominance {
    /// Every user is at least as well off and at least one strictly better.
    pub per_user: bool,
    /// Strictly larger group total.
    pub group: bool,
}

/// Ordered dominance relation over a list of evaluations: entry `(a, b)`
/// says whether structure `a` dominates structure `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DominanceMatrix {
    n: usize,
    flags: Vec<Dominance>,
}

impl DominanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, a: usize, b: usize) -> Dominance {
        self.flags[a * self.n + b]
    }
}

/// Computes all ordered-pair dominance flags. Strictness uses
/// [`STRICT_IMPROVEMENT_TOL`] as the relative margin; "at least as well off"
/// tolerates the same margin downward.
pub fn dominance_matrix(evaluations: &[StructureEvaluation]) -> Result<DominanceMatrix> {
    if evaluations.is_empty() {
        return Err(Error::EmptyPlayerSet);
    }
    let m = evaluations[0].payoffs.len();
    if evaluations.iter().any(|e| e.payoffs.len() != m) {
        return Err(Error::MismatchedPlayers);
    }
    let n = evaluations.len();
    let mut flags = alloc::vec![Dominance::default(); n * n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let pa = evaluations[a].payoffs.as_slice();
            let pb = evaluations[b].payoffs.as_slice();
            let mut all_at_least = true;
            let mut one_strict = false;
            for (x, y) in pa.iter().zip(pb) {
                if *x < y * (1.0 - STRICT_IMPROVEMENT_TOL) {
                    all_at_least = false;
                    break;
                }
                if *x > y * (1.0 + STRICT_IMPROVEMENT_TOL) {
                    one_strict = true;
                }
            }
            flags[a * n + b] = Dominance {
                per_user: all_at_least && one_strict,
                group: evaluations[a].group_total
                    > evaluations[b].group_total * (1.0 + STRICT_IMPROVEMENT_TOL),
            };
        }
    }
    Ok(DominanceMatrix { n, flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_structures;

    fn symmetric_powers(m: usize, p: f64) -> ReceivedPowers {
        ReceivedPowers::new(alloc::vec![p; m], 0.0).unwrap()
    }

    #[test]
    fn evaluate_all_covers_every_structure_once() {
        let params = SystemParams::new(0.4, 1.0, 1.0).unwrap();
        let powers = symmetric_powers(3, 500.0);
        let evals = evaluate_all(&params, &powers).unwrap();
        assert_eq!(evals.len(), 5);
        let labels: Vec<_> = evals.iter().map(|e| e.structure.label()).collect();
        let expected: Vec<_> = enumerate_structures(3)
            .unwrap()
            .iter()
            .map(|s| s.label())
            .collect();
        assert_eq!(labels, expected);
        for e in &evals {
            assert!((e.group_total - e.payoffs.total()).abs() <= 1e-12 * e.group_total);
        }
    }

    #[test]
    fn single_player_game_is_trivially_rational_and_stable() {
        let params = SystemParams::new(0.4, 1.0, 1.0).unwrap();
        let powers = symmetric_powers(1, 2.0);
        let evals = evaluate_all(&params, &powers).unwrap();
        assert_eq!(evals.len(), 1);
        assert!(evals[0].individually_rational);
        let report = core(&params, &powers).unwrap();
        assert_eq!(report.core_members.len(), 1);
        assert!(report.blocking.is_empty());
    }

    #[test]
    fn grand_coalition_maximizes_group_total_at_high_snr() {
        // Exhaustive comparison over all five structures, symmetric powers.
        let params = SystemParams::new(0.4, 1.0, 1.0).unwrap();
        let powers = symmetric_powers(3, 500.0);
        let evals = evaluate_all(&params, &powers).unwrap();
        let grand = &evals[0];
        assert_eq!(grand.structure.label(), "123");
        for other in &evals[1..] {
            assert!(grand.group_total > other.group_total);
        }
    }

    #[test]
    fn self_deviation_is_never_a_block() {
        let params = SystemParams::new(0.4, 1.0, 1.0).unwrap();
        let powers = symmetric_powers(3, 500.0);
        for structure in enumerate_structures(3).unwrap() {
            let payoffs = payoffs_for_structure(&params, &powers, &structure).unwrap();
            for block in structure.blocks() {
                assert_eq!(blocks(&payoffs, block, &params, &powers).unwrap(), None);
            }
        }
    }

    #[test]
    fn grand_set_blocks_the_noncooperative_structure_at_high_snr() {
        // P/sigma^2 = 500, rho = 0.4: joint detection beats the matched
        // filter for every user, so the full player set is a witness.
        let params = SystemParams::new(0.4, 1.0, 1.0).unwrap();
        let powers = symmetric_powers(3, 500.0);
        let noncoop = CoalitionStructure::singletons(3).unwrap();
        let payoffs = payoffs_for_structure(&params, &powers, &noncoop).unwrap();
        let grand_set = Coalition::new((0..3).map(PlayerId::new).collect()).unwrap();
        let witness = blocks(&payoffs, &grand_set, &params, &powers)
            .unwrap()
            .expect("cooperation should strictly improve everyone");
        for (member, after) in witness
            .deviating_set
            .members()
            .iter()
            .zip(&witness.payoff_after)
        {
            let before = payoffs.get(*member).unwrap();
            assert!(*after > before * (1.0 + STRICT_IMPROVEMENT_TOL));
        }
    }

    #[test]
    fn no_subset_blocks_the_grand_coalition_at_high_snr() {
        // Brute force over all seven subsets.
        let params = SystemParams::new(0.4, 1.0, 1.0).unwrap();
        let powers = symmetric_powers(3, 500.0);
        let grand = CoalitionStructure::grand(3).unwrap();
        let payoffs = payoffs_for_structure(&params, &powers, &grand).unwrap();
        let players: Vec<PlayerId> = (0..3).map(PlayerId::new).collect();
        for subset in subsets(&players).unwrap() {
            assert_eq!(blocks(&payoffs, &subset, &params, &powers).unwrap(), None);
        }
        assert!(in_core(&payoffs, &params, &powers).unwrap());
    }

    #[test]
    fn symmetric_three_player_core_is_the_grand_coalition() {
        let params = SystemParams::new(0.4, 1.0, 1.0).unwrap();
        let powers = symmetric_powers(3, 500.0);
        let report = core(&params, &powers).unwrap();
        let labels: Vec<_> = report.core_members.iter().map(|s| s.label()).collect();
        assert_eq!(labels, ["123"]);
    }

    #[test]
    fn two_player_core_at_27_db() {
        // Both structures and both deviations evaluated directly: the pair
        // blocks the singletons, nothing blocks the pair.
        let params = SystemParams::with_snr_db(0.4, 1.0, 27.0).unwrap();
        let powers = symmetric_powers(2, params.tx_power());
        let report = core(&params, &powers).unwrap();
        assert_eq!(report.core_members.len(), 1);
        assert_eq!(report.core_members[0].label(), "12");
        assert!(report.is_core_member(&CoalitionStructure::grand(2).unwrap()));
        // The non-cooperative structure is index 1 in enumeration order.
        let witness = report.blocking.get(&1).expect("1|2 must be blocked");
        assert_eq!(witness.deviating_set.len(), 2);
    }

    #[test]
    fn deviation_payoff_ignores_complement_arrangement() {
        // The same deviating pair is embedded in two different partitions of
        // the complement; its members' payoffs must agree bit for bit.
        let params = SystemParams::new(0.35, 0.8, 1.0).unwrap();
        let powers = ReceivedPowers::new(alloc::vec![3.0, 1.5, 0.4, 2.2], 0.9).unwrap();
        let pair = Coalition::new(alloc::vec![PlayerId::new(0), PlayerId::new(2)]).unwrap();
        let split = CoalitionStructure::parse_label("13|2|4", 4).unwrap();
        let merged = CoalitionStructure::parse_label("13|24", 4).unwrap();
        let v_split = payoffs_for_structure(&params, &powers, &split).unwrap();
        let v_merged = payoffs_for_structure(&params, &powers, &merged).unwrap();
        let direct = deviation_payoffs(&params, &powers, &pair).unwrap();
        for (i, member) in pair.members().iter().enumerate() {
            assert_eq!(v_split.get(*member).unwrap(), direct[i]);
            assert_eq!(v_merged.get(*member).unwrap(), direct[i]);
        }
    }

    #[test]
    fn every_non_core_structure_carries_a_valid_witness() {
        let params = SystemParams::with_snr_db(0.4, 1.0, 27.0).unwrap();
        let powers = ReceivedPowers::new(alloc::vec![400.0, 290.0, 18.0], 0.0).unwrap();
        let report = core(&params, &powers).unwrap();
        assert_eq!(
            report.core_members.len() + report.blocking.len(),
            report.evaluations.len()
        );
        for (idx, witness) in &report.blocking {
            let before = &report.evaluations[*idx].payoffs;
            for (member, after) in witness
                .deviating_set
                .members()
                .iter()
                .zip(&witness.payoff_after)
            {
                assert!(*after > before.get(*member).unwrap() * (1.0 + STRICT_IMPROVEMENT_TOL));
            }
        }
    }

    #[test]
    fn core_members_are_individually_rational() {
        // Singleton deviations are part of the search, so a core member can
        // never pay anyone less than going alone.
        let params = SystemParams::with_snr_db(0.4, 1.0, 15.0).unwrap();
        let powers = ReceivedPowers::new(alloc::vec![30.0, 7.0, 2.0, 11.0], 1.0).unwrap();
        let report = core(&params, &powers).unwrap();
        for member in &report.core_members {
            let eval = report
                .evaluations
                .iter()
                .find(|e| &e.structure == member)
                .unwrap();
            assert!(eval.individually_rational);
        }
    }

    #[test]
    fn dominance_matrix_flags() {
        let mk = |payoffs: Vec<f64>, label: &str| StructureEvaluation {
            structure: CoalitionStructure::parse_label(label, 3).unwrap(),
            payoffs: PayoffVector::new(payoffs).unwrap(),
            group_total: 0.0,
            individually_rational: true,
        };
        let mut a = mk(alloc::vec![2.0, 2.0, 2.0], "123");
        let mut b = mk(alloc::vec![1.0, 1.0, 1.0], "1|2|3");
        a.group_total = a.payoffs.total();
        b.group_total = b.payoffs.total();
        let evals = alloc::vec![a, b.clone()];
        let m = dominance_matrix(&evals).unwrap();
        assert!(m.get(0, 1).per_user);
        assert!(m.get(0, 1).group);
        assert!(!m.get(1, 0).per_user);
        assert!(!m.get(1, 0).group);

        // Identical vectors dominate in neither direction.
        let evals = alloc::vec![b.clone(), b];
        let m = dominance_matrix(&evals).unwrap();
        assert!(!m.get(0, 1).per_user);
        assert!(!m.get(1, 0).per_user);
        assert!(!m.get(0, 1).group);
    }

    #[test]
    fn dominance_matrix_rejects_mismatched_player_sets() {
        let a = StructureEvaluation {
            structure: CoalitionStructure::grand(2).unwrap(),
            payoffs: PayoffVector::new(alloc::vec![1.0, 1.0]).unwrap(),
            group_total: 2.0,
            individually_rational: true,
        };
        let b = StructureEvaluation {
            structure: CoalitionStructure::grand(3).unwrap(),
            payoffs: PayoffVector::new(alloc::vec![1.0, 1.0, 1.0]).unwrap(),
            group_total: 3.0,
            individually_rational: true,
        };
        assert_eq!(
            dominance_matrix(&[a, b]),
            Err(Error::MismatchedPlayers)
        );
    }

    #[test]
    fn noncooperation_dominates_nothing_in_the_three_user_scenario() {
        // Near/near/far powers at SNR = 27 dB.
        let params = SystemParams::with_snr_db(0.4, 1.0, 27.0).unwrap();
        let p = params.tx_power();
        let powers =
            ReceivedPowers::new(alloc::vec![8.0e5 * p, 4.6e5 * p, 2.4e4 * p], 0.0).unwrap();
        let evals = evaluate_all(&params, &powers).unwrap();
        let m = dominance_matrix(&evals).unwrap();
        let noncoop_idx = evals
            .iter()
            .position(|e| e.structure.is_noncooperative())
            .unwrap();
        for b in 0..evals.len() {
            if b == noncoop_idx {
                continue;
            }
            assert!(!m.get(noncoop_idx, b).per_user);
            assert!(!m.get(noncoop_idx, b).group);
        }
    }
}
