//! Human-readable stability reports.

use std::fmt::Write as _;

use gmud_core::channel::db_from_linear;
use gmud_core::experiment::{Scenario, StationStability};

/// Renders per-structure payoffs (linear and dB), rationality flags, core
/// membership, and blocking witnesses; with several Monte Carlo runs it also
/// lists per-realization core frequencies next to the mean-power game.
pub fn render_stability(scenario: &Scenario, stations: &[StationStability]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "stability report: {} station(s), {} user(s), seed {}, {} run(s)",
        scenario.stations.len(),
        scenario.users.len(),
        scenario.seed,
        scenario.mc_runs,
    );
    let _ = writeln!(
        out,
        "radio: rho = {}, noise_var = {}, tx_power = {}",
        scenario.system.rho(),
        scenario.system.noise_var(),
        scenario.system.tx_power(),
    );

    for st in stations {
        let report = &st.mean_power_report;
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "station {} ({} structures)",
            st.station,
            report.evaluations.len()
        );
        for (idx, eval) in report.evaluations.iter().enumerate() {
            let _ = writeln!(out, "  {}", eval.structure.label());
            let linear: Vec<String> = eval
                .payoffs
                .as_slice()
                .iter()
                .map(|s| format!("{s:.6e}"))
                .collect();
            let db: Vec<String> = eval
                .payoffs
                .as_slice()
                .iter()
                .map(|s| format!("{:.2}", db_from_linear(*s)))
                .collect();
            let _ = writeln!(out, "    payoffs (linear): {}", linear.join(", "));
            let _ = writeln!(out, "    payoffs (dB):     {}", db.join(", "));
            let _ = writeln!(
                out,
                "    group total:      {:.6e} ({:.2} dB)",
                eval.group_total,
                db_from_linear(eval.group_total)
            );
            let _ = writeln!(
                out,
                "    individually rational: {}",
                if eval.individually_rational { "yes" } else { "no" }
            );
            match report.blocking.get(&idx) {
                None => {
                    let _ = writeln!(out, "    core member: yes");
                }
                Some(witness) => {
                    let improved: Vec<String> = witness
                        .payoff_after
                        .iter()
                        .map(|s| format!("{s:.6e}"))
                        .collect();
                    let _ = writeln!(
                        out,
                        "    core member: no (blocked by {{{}}} earning {})",
                        witness.deviating_set,
                        improved.join(", ")
                    );
                }
            }
            if st.runs > 1 {
                let _ = writeln!(
                    out,
                    "    core frequency over {} runs: {:.3}",
                    st.runs, st.core_frequency[idx]
                );
            }
        }
        let members: Vec<String> = report
            .core_members
            .iter()
            .map(|s| s.label())
            .collect();
        let _ = writeln!(
            out,
            "  core members{}: {}",
            if st.runs > 1 { " (mean-power game)" } else { "" },
            if members.is_empty() {
                "none".to_string()
            } else {
                members.join(", ")
            }
        );
    }
    out
}
