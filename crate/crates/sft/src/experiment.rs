//! Experiment orchestration: the wind-neglected vs wind-included pipeline,
//! case suites, and table emission.
//!
//! Each case is run twice: once pretending there is no wind (the baseline a
//! planner unaware of wind would deploy) and once with the true wind. Both
//! resulting locations are then scored under the true wind; the gap between
//! those scores is the cost of ignoring wind.

use crate::error::{Error, Result};
use crate::oracle::{grid_min, GridSpec};
use crate::scenario::{CaseSet, Scenario};
use crate::solver::multistart_solve;
use crate::vec2::Vec2;
use rayon::prelude::*;
use std::io::Write;
use std::path::Path;

/// Outcome of one case.
#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case_id: String,
    /// Optimizer output when wind is neglected.
    pub x_neglected: Vec2,
    /// True-wind objective at `x_neglected` (seconds).
    pub z_neglected: f64,
    /// Optimizer output with wind included.
    pub x_included: Vec2,
    /// True-wind objective at `x_included` (seconds).
    pub z_included: f64,
    /// `z_neglected − z_included`.
    pub abs_improvement: f64,
    /// `abs_improvement / z_neglected × 100`, or 0 for a zero baseline.
    pub rel_improvement: f64,
    /// Independent grid-search minimum of the wind-included objective.
    pub oracle_value: f64,
    pub warnings: Vec<String>,
}

/// Cross-check grid resolution used inside [`run_case`]. Coarser than the
/// oracle module's default so whole suites stay fast; three zoom rounds still
/// reach location resolution far below the reporting precision.
const CASE_ORACLE_N: usize = 128;

/// Iteration cap for suite runs (scenario files can override it).
const SUITE_MAX_ITERS: usize = 15_000;
/// Suite early stop: an order of magnitude looser than the solver default,
/// still two orders tighter than the reporting tolerance.
const SUITE_MIN_REL_IMPROVE: f64 = 1e-6;

/// Runs the neglected/included pipeline for one scenario.
pub fn run_case(scenario: &Scenario, wind_override: Option<Vec2>) -> Result<CaseReport> {
    run_case_as(scenario, wind_override, scenario.variant, &scenario.name)
}

/// Same, with an explicit variant and case id (used by case suites).
pub fn run_case_as(
    scenario: &Scenario,
    wind_override: Option<Vec2>,
    variant: crate::scenario::Variant,
    case_id: &str,
) -> Result<CaseReport> {
    let wind = wind_override.unwrap_or(scenario.wind);
    let neglected = scenario.problem_with(Vec2::ZERO, variant)?;
    let included = scenario.problem_with(wind, variant)?;
    let mut cfg = scenario.solver_config(&included);
    if scenario.solver.max_iters.is_none() {
        // suites trade the tail of the 1/k schedule for wall time; past ~10k
        // iterations the steps refine far below reporting precision
        cfg.max_iters = SUITE_MAX_ITERS;
        if let Some(w) = &mut cfg.improvement_window {
            w.min_rel_improve = SUITE_MIN_REL_IMPROVE;
        }
    }
    // centroid plus two spread-out target centers; the objectives are convex,
    // extra starts only hedge against a mis-scaled step schedule
    let all = scenario.default_starts();
    let starts: Vec<crate::vec2::Vec2> = if all.len() > 3 {
        vec![all[0], all[1], all[all.len() - 1]]
    } else {
        all
    };

    let run_neglected = multistart_solve(&neglected, &cfg, &starts)?;
    let run_included = multistart_solve(&included, &cfg, &starts)?;

    let z_neglected = included.evaluate(run_neglected.best_x).objective;
    let z_included = run_included.best_value;
    let abs_improvement = z_neglected - z_included;
    let rel_improvement = if z_neglected > 0.0 {
        abs_improvement / z_neglected * 100.0
    } else {
        0.0
    };
    let (oracle_value, _) = grid_min(
        &included,
        &GridSpec::for_problem(&included).with_resolution(CASE_ORACLE_N, 3),
    )?;

    let mut warnings = run_neglected.warnings;
    warnings.extend(run_included.warnings);

    Ok(CaseReport {
        case_id: case_id.to_string(),
        x_neglected: run_neglected.best_x,
        z_neglected,
        x_included: run_included.best_x,
        z_included,
        abs_improvement,
        rel_improvement,
        oracle_value,
        warnings,
    })
}

/// Runs every case of a suite. Cases are independent solves and run in
/// parallel; the report order matches the suite order.
pub fn run_set(set: &CaseSet) -> Result<Vec<CaseReport>> {
    set.cases
        .par_iter()
        .map(|c| run_case_as(&c.scenario, Some(c.wind), c.variant, &c.id))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

/// Renders reports in the table layout: one row per case with both optima,
/// both true-wind scores, and the improvement columns. Seconds and
/// coordinates are rounded to integers at emission only.
pub fn render_table(reports: &[CaseReport], format: TableFormat) -> String {
    let mut out = String::new();
    let header = [
        "case_id",
        "xN1",
        "xN2",
        "Z_N",
        "xI1",
        "xI2",
        "Z_I",
        "abs_imp",
        "rel_imp",
        "oracle_value",
    ];
    match format {
        TableFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in reports {
                out.push_str(&row_fields(r).join(","));
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            out.push_str("| ");
            out.push_str(&header.join(" | "));
            out.push_str(" |\n|");
            out.push_str(&" --- |".repeat(header.len()));
            out.push('\n');
            for r in reports {
                out.push_str("| ");
                out.push_str(&row_fields(r).join(" | "));
                out.push_str(" |\n");
            }
        }
    }
    out
}

fn row_fields(r: &CaseReport) -> Vec<String> {
    vec![
        r.case_id.clone(),
        format!("{:.0}", r.x_neglected.x),
        format!("{:.0}", r.x_neglected.y),
        format!("{:.0}", r.z_neglected),
        format!("{:.0}", r.x_included.x),
        format!("{:.0}", r.x_included.y),
        format!("{:.0}", r.z_included),
        format!("{:.0}", r.abs_improvement),
        format!("{:.2}", r.rel_improvement),
        format!("{:.2}", r.oracle_value),
    ]
}

/// Writes the rendered table to `out` atomically.
pub fn emit_table(reports: &[CaseReport], format: TableFormat, out: &Path) -> Result<()> {
    if reports.is_empty() {
        return Err(Error::invalid("refusing to emit an empty table"));
    }
    atomic_write(out, render_table(reports, format).as_bytes())
}

/// Write-temp-then-rename so readers never observe a partial file.
pub(crate) fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        )),
        None => Path::new(&format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        ))
        .to_path_buf(),
    };
    let mut f = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
