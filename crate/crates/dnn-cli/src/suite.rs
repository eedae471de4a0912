//! Batch runner: (instance, solver) pairs solved independently, bounds
//! computed from the final iterate regardless of convergence.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use dnn_core::bounds::{self, BoundFailure};
use dnn_core::problem::DnnProblem;
use dnn_core::solver::{self, Method, SolverConfig, Status};

/// One table row.  For theta-plus instances all three value columns are
/// reported in the alpha convention (negated internal objectives), so a
/// row reads like the published tables: estimate, then two upper bounds
/// on the stability number.
#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub instance: String,
    pub solver: Method,
    pub dual_ofv: Option<f64>,
    pub eb: Option<f64>,
    pub nb: Option<f64>,
    pub nb_failure: Option<&'static str>,
    pub iterations: Option<u64>,
    pub elapsed_s: Option<f64>,
    pub status: Option<Status>,
    /// A row-level error (solver or bound computation) never aborts the
    /// suite; it is recorded here and the value columns stay empty.
    pub error: Option<String>,
}

fn run_one(name: &str, p: &DnnProblem, method: Method, cfg: &SolverConfig) -> SuiteRow {
    let mut row = SuiteRow {
        instance: name.to_string(),
        solver: method,
        dual_ofv: None,
        eb: None,
        nb: None,
        nb_failure: None,
        iterations: None,
        elapsed_s: None,
        status: None,
        error: None,
    };
    let rep = match solver::solve(p, method, cfg) {
        Ok(rep) => rep,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.dual_ofv = Some(-rep.dual_ofv);
    row.iterations = Some(rep.iterations);
    row.elapsed_s = Some(rep.elapsed_s);
    row.status = Some(rep.status);

    // Bounds are the point of the exercise even (especially) for crude
    // iterates, so they are computed for every finished row.
    match bounds::error_bound(p, &rep.state.y, &rep.state.s, 1.0) {
        Ok(r) => row.eb = r.value.map(|v| -v),
        Err(e) => row.error = Some(e.to_string()),
    }
    match bounds::nightjet_theta_plus(p, &rep.state.z) {
        Ok(r) => {
            row.nb = r.value.map(|v| -v);
            row.nb_failure = r.failure.map(BoundFailure::message);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every (instance, solver) pair with up to `jobs` worker threads.
/// The result order is stable: instances in input order, solvers in the
/// given order within each instance.
pub fn run_suite(
    instances: &[(String, DnnProblem)],
    methods: &[Method],
    cfg: &SolverConfig,
    jobs: usize,
) -> Vec<SuiteRow> {
    let tasks: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..methods.len()).map(move |m| (i, m)))
        .collect();
    let slots: Mutex<Vec<Option<SuiteRow>>> = Mutex::new(vec![None; tasks.len()]);
    let next = AtomicUsize::new(0);
    let workers = jobs.max(1).min(tasks.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let t = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, m)) = tasks.get(t) else { break };
                let (name, p) = &instances[i];
                let row = run_one(name, p, methods[m], cfg);
                slots.lock().unwrap()[t] = Some(row);
            });
        }
    });

    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every task ran"))
        .collect()
}
