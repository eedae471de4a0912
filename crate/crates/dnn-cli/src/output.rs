//! Serialization: results/trace/profile CSV files and JSON reports.
//!
//! CSV conventions: UTF-8, comma separator, one header row, `.` decimal
//! point, floats at 17 significant digits, empty field for "not
//! available".  Column orders are fixed and documented in the README.

use anyhow::{bail, Context};
use dnn_core::bench::ProfileCurve;
use dnn_core::bounds::BoundResult;
use dnn_core::solver::{Method, SolveReport, Status, TraceRow};

use crate::suite::SuiteRow;

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt_float(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

pub const RESULTS_HEADER: &str =
    "instance,solver,dual_ofv,eb,nb,nb_failure,iterations,elapsed_s,status";

/// Results CSV with the published table structure (estimate and bounds in
/// the alpha convention) plus bookkeeping columns.
pub fn results_csv(rows: &[SuiteRow]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.instance,
            r.solver.name(),
            fmt_opt_float(r.dual_ofv),
            fmt_opt_float(r.eb),
            fmt_opt_float(r.nb),
            r.nb_failure.unwrap_or(""),
            r.iterations.map(|i| i.to_string()).unwrap_or_default(),
            fmt_opt_float(r.elapsed_s),
            r.status.map(Status::as_str).unwrap_or(""),
        ));
    }
    out
}

pub const TRACE_HEADER: &str = "iter,dual_ofv,r_P,r_D,r_PP,r_CS,r_PD,r_CZ,sigma";

/// Per-iteration trace; residuals a method does not track stay blank.
pub fn trace_csv(trace: &[TraceRow]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for row in trace {
        let r = &row.residuals;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.iter,
            fmt_float(row.dual_ofv),
            fmt_float(r.r_p),
            fmt_float(r.r_d),
            fmt_float(r.r_pp),
            fmt_float(r.r_cs),
            fmt_opt_float(r.r_pd),
            fmt_opt_float(r.r_cz),
            fmt_float(row.sigma),
        ));
    }
    out
}

pub const PROFILE_HEADER: &str = "solver,tau,rho";

/// Plot-ready step curves, one row per (solver, breakpoint).
pub fn profile_csv(curves: &[ProfileCurve], solver_names: &[String]) -> String {
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for c in curves {
        for &(tau, rho) in &c.points {
            out.push_str(&format!(
                "{},{},{}\n",
                solver_names[c.solver],
                fmt_float(tau),
                fmt_float(rho)
            ));
        }
    }
    out
}

/// Measurement matrix recovered from a results CSV: problems by solvers,
/// `None` where the run exceeded its budget.  Solver column order follows
/// first appearance in the file.
pub struct Measurements {
    pub solver_names: Vec<String>,
    pub instance_names: Vec<String>,
    pub matrix: Vec<Vec<Option<f64>>>,
}

/// Which column of the results CSV to profile on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Time,
    Iters,
}

pub fn parse_results_csv(text: &str, measure: Measure) -> anyhow::Result<Measurements> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().context("empty results file")?;
    let cols: Vec<&str> = header.split(',').collect();
    let col = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .with_context(|| format!("results file lacks a `{name}` column"))
    };
    let (ci, cs, cit, cel, cst) = (
        col("instance")?,
        col("solver")?,
        col("iterations")?,
        col("elapsed_s")?,
        col("status")?,
    );

    let mut solver_names: Vec<String> = Vec::new();
    let mut instance_names: Vec<String> = Vec::new();
    let mut cells: Vec<(usize, usize, Option<f64>)> = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            bail!("line {}: expected {} fields, got {}", lineno + 1, cols.len(), fields.len());
        }
        let inst = fields[ci].to_string();
        let solver = fields[cs].to_string();
        let p = instance_names
            .iter()
            .position(|x| *x == inst)
            .unwrap_or_else(|| {
                instance_names.push(inst);
                instance_names.len() - 1
            });
        let s = solver_names
            .iter()
            .position(|x| *x == solver)
            .unwrap_or_else(|| {
                solver_names.push(solver);
                solver_names.len() - 1
            });
        let raw = match measure {
            Measure::Time => fields[cel].to_string(),
            Measure::Iters => fields[cit].to_string(),
        };
        // Budget-exceeded (or errored) runs become markers.
        let value = if fields[cst] != "converged" || raw.is_empty() {
            None
        } else {
            let v: f64 = raw
                .parse()
                .with_context(|| format!("line {}: bad measurement `{raw}`", lineno + 1))?;
            // Sub-resolution timings and zero-iteration runs are clamped to
            // a tiny positive value so ratios stay defined.
            Some(v.max(1e-9))
        };
        cells.push((p, s, value));
    }
    if cells.is_empty() {
        bail!("results file has no data rows");
    }

    let mut matrix = vec![vec![None; solver_names.len()]; instance_names.len()];
    for (p, s, v) in cells {
        matrix[p][s] = v;
    }
    Ok(Measurements {
        solver_names,
        instance_names,
        matrix,
    })
}

fn json_residuals(r: &dnn_core::Residuals) -> serde_json::Value {
    serde_json::json!({
        "r_P": r.r_p,
        "r_D": r.r_d,
        "r_PP": r.r_pp,
        "r_CS": r.r_cs,
        "r_PD": r.r_pd,
        "r_CZ": r.r_cz,
        "delta": r.delta,
    })
}

pub fn json_bound(b: &BoundResult) -> serde_json::Value {
    serde_json::json!({
        "kind": match b.kind {
            dnn_core::bounds::BoundKind::ErrorBound => "error-bound",
            dnn_core::bounds::BoundKind::Nightjet => "nightjet",
        },
        "value": b.value,
        "reported_bound": b.value.map(|v| -v),
        "failure": b.failure.map(dnn_core::bounds::BoundFailure::message),
        "has_feasible_triple": b.feasible_triple.is_some(),
    })
}

/// One JSON object per run: the full report plus any bound results.
pub fn json_report(
    instance: &str,
    method: Method,
    rep: &SolveReport,
    eb: Option<&BoundResult>,
    nb: Option<&BoundResult>,
) -> serde_json::Value {
    let mut obj = serde_json::json!({
        "instance": instance,
        "solver": method.name(),
        "status": rep.status.as_str(),
        "iterations": rep.iterations,
        "elapsed_s": rep.elapsed_s,
        "dual_ofv": rep.dual_ofv,
        "theta_estimate": -rep.dual_ofv,
        "sigma": rep.state.sigma,
        "residuals": json_residuals(&rep.residuals),
    });
    let map = obj.as_object_mut().unwrap();
    if let Some(eb) = eb {
        map.insert("error_bound".into(), json_bound(eb));
    }
    if let Some(nb) = nb {
        map.insert("nightjet".into(), json_bound(nb));
    }
    if let Some(trace) = &rep.trace {
        let rows: Vec<serde_json::Value> = trace
            .iter()
            .map(|t| {
                serde_json::json!({
                    "iter": t.iter,
                    "dual_ofv": t.dual_ofv,
                    "sigma": t.sigma,
                    "residuals": json_residuals(&t.residuals),
                })
            })
            .collect();
        map.insert("trace".into(), serde_json::Value::Array(rows));
    }
    obj
}

#[cfg(test)]
mod tests {
    use super::*;
    use dnn_core::bench;

    fn sample_rows() -> Vec<SuiteRow> {
        vec![
            SuiteRow {
                instance: "a".into(),
                solver: Method::AdalPlus,
                dual_ofv: Some(4.0),
                eb: Some(4.0003),
                nb: Some(4.0001),
                nb_failure: None,
                iterations: Some(44),
                elapsed_s: Some(1.25),
                status: Some(Status::Converged),
                error: None,
            },
            SuiteRow {
                instance: "a".into(),
                solver: Method::DadalPlus,
                dual_ofv: Some(4.0),
                eb: Some(4.0002),
                nb: None,
                nb_failure: Some("No dual feasible solution and no bound found"),
                iterations: Some(25),
                elapsed_s: Some(0.5),
                status: Some(Status::Converged),
                error: None,
            },
            SuiteRow {
                instance: "b".into(),
                solver: Method::AdalPlus,
                dual_ofv: Some(9.1),
                eb: Some(9.2),
                nb: Some(9.15),
                nb_failure: None,
                iterations: Some(1000),
                elapsed_s: Some(3600.1),
                status: Some(Status::TimeLimit),
                error: None,
            },
            SuiteRow {
                instance: "b".into(),
                solver: Method::DadalPlus,
                dual_ofv: Some(9.1),
                eb: Some(9.2),
                nb: Some(9.12),
                nb_failure: None,
                iterations: Some(500),
                elapsed_s: Some(2.0),
                status: Some(Status::Converged),
                error: None,
            },
        ]
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -4.000123456789, 17.475] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert!(!s.contains(','));
        }
    }

    #[test]
    fn results_round_trip_through_profile_input() {
        let csv = results_csv(&sample_rows());
        let m = parse_results_csv(&csv, Measure::Time).unwrap();
        assert_eq!(m.solver_names, ["adal+", "dadal+"]);
        assert_eq!(m.instance_names, ["a", "b"]);
        assert_eq!(m.matrix.len(), 2);
        // The timed-out run is a marker.
        assert!(m.matrix[1][0].is_none());
        assert_eq!(m.matrix[0][1], Some(0.5));

        let m = parse_results_csv(&csv, Measure::Iters).unwrap();
        assert_eq!(m.matrix[0][0], Some(44.0));
    }

    #[test]
    fn profiles_from_results_csv() {
        let csv = results_csv(&sample_rows());
        let m = parse_results_csv(&csv, Measure::Time).unwrap();
        let curves = bench::performance_profiles(&m.matrix, false).unwrap();
        // One retained row (instance `a`): dadal+ wins it.
        assert_eq!(curves[1].points[0], (1.0, 1.0));
        let out = profile_csv(&curves, &m.solver_names);
        assert!(out.starts_with(PROFILE_HEADER));
        assert!(out.lines().count() > 1);
    }

    #[test]
    fn trace_csv_has_blanks_for_untracked_residuals() {
        use dnn_core::Residuals;
        let rows = vec![TraceRow {
            iter: 1,
            dual_ofv: -4.0,
            residuals: Residuals {
                r_p: 0.1,
                r_d: 0.2,
                r_pp: 0.3,
                r_cs: 0.4,
                r_pd: None,
                r_cz: None,
                delta: 0.4,
            },
            sigma: 1.0,
        }];
        let csv = trace_csv(&rows);
        let line = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[6], "");
        assert_eq!(fields[7], "");
    }

    #[test]
    fn malformed_results_are_rejected() {
        assert!(parse_results_csv("", Measure::Time).is_err());
        assert!(parse_results_csv("instance,solver\n", Measure::Time).is_err());
        let missing_field = format!("{RESULTS_HEADER}\nx,adal+,1.0\n");
        assert!(parse_results_csv(&missing_field, Measure::Time).is_err());
    }
}
