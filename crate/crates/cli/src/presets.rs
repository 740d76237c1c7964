//! Built-in configurations, one per headline experiment.
//!
//! Each preset is an ordinary config file embedded as text, so `preset` runs
//! and hand-written configs go through the same parser and validation. The
//! default geometry puts two users near the station and one (or two) far,
//! with the path-loss constant scaled so received powers stay
//! interference-dominated across the swept SNR ranges.

/// Single-cell stability snapshot at the 27 dB operating point.
const FIG1: &str = "\
scenario = single_bs
seed = 42
mc_runs = 1
system.rho = 0.4
system.noise_var = 1
system.snr_db = 27
fading.k_db = 110
fading.mu = 3
fading.sigma_s_db = 0
single_bs.distances = 50,60,160
sweep.variable = snr_db
sweep.values = 27
";

/// Single-cell group payoffs across the full SNR range.
const FIG2: &str = "\
scenario = single_bs
seed = 42
mc_runs = 1
system.rho = 0.4
system.noise_var = 1
system.snr_db = 27
fading.k_db = 110
fading.mu = 3
fading.sigma_s_db = 0
single_bs.distances = 50,60,160
sweep.variable = snr_db
sweep.values = -40:40:2
";

/// Single-cell payoffs against shadowing severity, averaged over runs.
const FIG3: &str = "\
scenario = single_bs
seed = 42
mc_runs = 10
system.rho = 0.4
system.noise_var = 1
system.snr_db = 27
fading.k_db = 110
fading.mu = 3
fading.sigma_s_db = 0
single_bs.distances = 50,60,160
sweep.variable = sigma_s_db
sweep.values = 0:12:1
";

/// Single-cell payoffs against the path-loss exponent. The operating SNR is
/// set so the sweep crosses from interference-dominated to noise-dominated:
/// cooperation pays handsomely at small exponents and stops mattering past
/// six.
const FIG4: &str = "\
scenario = single_bs
seed = 42
mc_runs = 1
system.rho = 0.4
system.noise_var = 1
system.snr_db = -5
fading.k_db = 110
fading.mu = 3
fading.sigma_s_db = 0
single_bs.distances = 50,60,160
sweep.variable = mu
sweep.values = 0.5:8:0.25
";

/// Two cells, four users each (two near, two far per cell), with the other
/// cell's users acting as unknown interference. Only the four representative
/// structures are tracked, and the presentation dB-offset column is enabled.
const FIG5: &str = "\
scenario = two_bs
seed = 42
mc_runs = 1
system.rho = 0.4
system.noise_var = 1
system.snr_db = 20
fading.k_db = 110
fading.mu = 3
fading.sigma_s_db = 0
two_bs.distances = 15,18,40,48
two_bs.separation = 300
sweep.variable = snr_db
sweep.values = -60:20:2
sweep.structures = 1234,12|3|4,12|34,1|2|3|4
output.db_offset_column = true
";

/// Every preset name, in order.
pub const NAMES: [&str; 5] = ["fig1", "fig2", "fig3", "fig4", "fig5"];

/// Config text of a named preset.
pub fn text(name: &str) -> Option<&'static str> {
    match name {
        "fig1" => Some(FIG1),
        "fig2" => Some(FIG2),
        "fig3" => Some(FIG3),
        "fig4" => Some(FIG4),
        "fig5" => Some(FIG5),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn every_preset_parses_and_carries_a_sweep() {
        for name in NAMES {
            let cfg = Config::from_str(text(name).unwrap(), name)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(cfg.sweep.is_some(), "{name} has no sweep");
        }
    }

    #[test]
    fn fig5_filters_the_four_representative_structures() {
        let cfg = Config::from_str(text("fig5").unwrap(), "fig5").unwrap();
        let labels: Vec<String> = cfg
            .filter
            .unwrap()
            .iter()
            .map(|s| s.label())
            .collect();
        assert_eq!(labels, ["1234", "12|3|4", "12|34", "1|2|3|4"]);
        assert!(cfg.db_offset_column);
    }

    #[test]
    fn unknown_preset_names_return_nothing() {
        assert!(text("fig9").is_none());
    }
}
