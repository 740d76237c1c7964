//! CSV rendering of sweep results.
//!
//! The file opens with a `#`-prefixed metadata block (software version, seed,
//! run count, sweep variable, a hash of the config echo, and the echo itself)
//! followed by one header row and the data rows. Floats are rendered with
//! Rust's shortest round-trip formatting, so parsing a value back yields the
//! in-memory number exactly and identical inputs produce byte-identical
//! files.
//!
//! Columns: `station_id, sweep_variable, sweep_value, run_index,
//! structure_label, user_id, sinr_linear, sinr_db, gain_over_noncoop_linear,
//! in_core` plus an optional `sinr_db_offset` presentation column. `run_index`
//! is a run number or `mean`; `user_id` is a 1-based user or `total`.
//! `in_core` is 0/1 on run rows and the core frequency on mean rows. Gains on
//! user rows are per-user SINR differences against the all-singleton
//! structure in the same run; `total` rows carry group-total differences.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::channel::db_from_linear;

use super::{StructureSeries, SweepResult};

/// Rendering options.
#[derive(Clone, Copy, Debug, Default)]
pub struct CsvOptions<'a> {
    /// Config echo lines to embed (and hash) in the metadata block.
    pub echo: &'a [String],
    /// Emit the presentation-only `sinr_db_offset` column: every dB value
    /// shifted up by the absolute minimum per-user dB SINR in the file.
    pub db_offset_column: bool,
}

enum RunLabel {
    Run(u32),
    Mean,
}

enum UserLabel {
    User(usize),
    Total,
}

struct Row {
    station: usize,
    value: f64,
    run: RunLabel,
    label: String,
    user: UserLabel,
    sinr: f64,
    gain: f64,
    in_core: f64,
}

/// Renders a sweep result as CSV text.
pub fn render_csv(result: &SweepResult, opts: &CsvOptions<'_>) -> String {
    let rows = collect_rows(result);

    let mut out = String::new();
    let _ = writeln!(out, "# gmud sweep result");
    let _ = writeln!(out, "# version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# seed = {}", result.seed);
    let _ = writeln!(out, "# mc_runs = {}", result.mc_runs);
    let _ = writeln!(out, "# sweep_variable = {}", result.variable.as_str());
    let _ = writeln!(out, "# config_hash = {:016x}", fnv1a64(opts.echo));
    for line in opts.echo {
        let _ = writeln!(out, "# config: {line}");
    }

    let offset = if opts.db_offset_column {
        let min_user_db = rows
            .iter()
            .filter(|r| matches!(r.user, UserLabel::User(_)))
            .map(|r| db_from_linear(r.sinr))
            .fold(f64::INFINITY, f64::min);
        let offset = min_user_db.abs();
        let _ = writeln!(out, "# sinr_db_offset = {offset} (presentation only)");
        Some(offset)
    } else {
        None
    };

    out.push_str(
        "station_id,sweep_variable,sweep_value,run_index,structure_label,user_id,\
         sinr_linear,sinr_db,gain_over_noncoop_linear,in_core",
    );
    if offset.is_some() {
        out.push_str(",sinr_db_offset");
    }
    out.push('\n');

    let variable = result.variable.as_str();
    for row in &rows {
        let _ = write!(out, "{},{variable},{},", row.station, row.value);
        match row.run {
            RunLabel::Run(r) => {
                let _ = write!(out, "{r},");
            }
            RunLabel::Mean => out.push_str("mean,"),
        }
        let _ = write!(out, "{},", row.label);
        match row.user {
            UserLabel::User(u) => {
                let _ = write!(out, "{u},");
            }
            UserLabel::Total => out.push_str("total,"),
        }
        let db = db_from_linear(row.sinr);
        let _ = write!(out, "{},{},{},", row.sinr, db, row.gain);
        match row.run {
            RunLabel::Run(_) => {
                let _ = write!(out, "{}", if row.in_core != 0.0 { 1 } else { 0 });
            }
            RunLabel::Mean => {
                let _ = write!(out, "{}", row.in_core);
            }
        }
        if let Some(shift) = offset {
            let _ = write!(out, ",{}", db + shift);
        }
        out.push('\n');
    }
    out
}

fn collect_rows(result: &SweepResult) -> Vec<Row> {
    let mut rows = Vec::new();
    for point in &result.points {
        for station in &point.stations {
            for series in &station.structures {
                push_series_rows(
                    &mut rows,
                    station.station.index() + 1,
                    point.value,
                    series,
                    &station.noncoop,
                );
            }
        }
    }
    rows
}

fn push_series_rows(
    rows: &mut Vec<Row>,
    station: usize,
    value: f64,
    series: &StructureSeries,
    noncoop: &StructureSeries,
) {
    let label = series.structure.label();
    for (r, (outcome, baseline)) in series.runs.iter().zip(&noncoop.runs).enumerate() {
        let flag = f64::from(u8::from(outcome.in_core));
        for (i, (sinr, solo)) in outcome
            .payoffs
            .as_slice()
            .iter()
            .zip(baseline.payoffs.as_slice())
            .enumerate()
        {
            rows.push(Row {
                station,
                value,
                run: RunLabel::Run(r as u32),
                label: label.clone(),
                user: UserLabel::User(i + 1),
                sinr: *sinr,
                gain: sinr - solo,
                in_core: flag,
            });
        }
        rows.push(Row {
            station,
            value,
            run: RunLabel::Run(r as u32),
            label: label.clone(),
            user: UserLabel::Total,
            sinr: outcome.group_total,
            gain: outcome.group_total - baseline.group_total,
            in_core: flag,
        });
    }
    for (i, (sinr, solo)) in series
        .mean_payoffs
        .iter()
        .zip(&noncoop.mean_payoffs)
        .enumerate()
    {
        rows.push(Row {
            station,
            value,
            run: RunLabel::Mean,
            label: label.clone(),
            user: UserLabel::User(i + 1),
            sinr: *sinr,
            gain: sinr - solo,
            in_core: series.core_frequency,
        });
    }
    rows.push(Row {
        station,
        value,
        run: RunLabel::Mean,
        label,
        user: UserLabel::Total,
        sinr: series.mean_group_total,
        gain: series.mean_group_total - noncoop.mean_group_total,
        in_core: series.core_frequency,
    });
}

/// FNV-1a over the echo lines, newline-separated.
fn fnv1a64(lines: &[String]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for line in lines {
        for byte in line.as_bytes() {
            hash ^= u64::from(*byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        hash ^= u64::from(b'\n');
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
