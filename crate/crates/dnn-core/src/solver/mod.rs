//! The four ADMM loops and their shared machinery.
//!
//! All methods maximize the augmented Lagrangian of the dual DNN block by
//! block and then take a first-order multiplier step on `X`.  Two of them
//! (`DadalPlus`, `Dadmm3c`) replace the PSD-constrained `Z` block by an
//! unconstrained ascent on a factor `V` with `Z = V V^T`.

mod inner;

pub use inner::{grad_v, inner_yv_update, lagrangian_value, line_search_alpha};

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, Factor, SymMatrix};
use crate::math;
use crate::problem::DnnProblem;
use crate::{Error, Result};

/// Inner-loop stationarity threshold: with the pass budget fixed at two,
/// this only skips passes that start at an (essentially exact) stationary
/// point.
pub(crate) const EPS_INNER: f64 = 1e-12;

/// Solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// 3-block ADMM with joint spectral update of `Z` and `X`.
    AdalPlus,
    /// Convergent 3-block ADMM with a second `y` update per iteration.
    ConicAdmm3c,
    /// `AdalPlus` with the factorized `(y, V)` ascent prepended.
    DadalPlus,
    /// `ConicAdmm3c` variant where the factorization replaces every
    /// spectral decomposition.
    Dadmm3c,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::AdalPlus,
        Method::DadalPlus,
        Method::ConicAdmm3c,
        Method::Dadmm3c,
    ];

    /// Whether the method maintains the factor `V` of the dual matrix.
    pub fn uses_factor(self) -> bool {
        matches!(self, Method::DadalPlus | Method::Dadmm3c)
    }

    /// Whether the stopping criterion uses the 6-term error set (adds the
    /// primal PSD error and the `Z` complementarity error).
    pub fn six_term(self) -> bool {
        matches!(self, Method::ConicAdmm3c | Method::Dadmm3c)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::AdalPlus => "adal+",
            Method::ConicAdmm3c => "conic3c",
            Method::DadalPlus => "dadal+",
            Method::Dadmm3c => "dadmm3c",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        match name {
            "adal+" => Some(Method::AdalPlus),
            "conic3c" => Some(Method::ConicAdmm3c),
            "dadal+" => Some(Method::DadalPlus),
            "dadmm3c" => Some(Method::Dadmm3c),
            _ => None,
        }
    }
}

/// Ascent direction for the factorized inner update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Gradient,
    /// Gradient scaled entrywise by the inverse magnitude of the diagonal
    /// of the Hessian, falling back to the plain gradient entry where that
    /// diagonal is below 1e-12 in magnitude.
    ScaledGradient,
}

/// Stepsize selection for the factorized inner update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LineSearch {
    /// Evaluate the merit quartic on the grid 0.01..10.00 and take the best.
    #[default]
    Grid1000,
    /// Interpolate the quartic from five points and maximize analytically;
    /// falls back to the grid when no interior maximizer exists.
    QuarticRoots,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub time_limit_s: f64,
    pub max_iter: Option<u64>,
    pub inner_iters: usize,
    pub direction: Direction,
    pub line_search: LineSearch,
    pub sigma_floor: f64,
    pub sigma_cap: f64,
    /// Relative eigenvalue threshold for the rank of `Z` when refreshing `V`.
    pub rank_tol: f64,
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-5,
            time_limit_s: 3600.0,
            max_iter: None,
            inner_iters: 2,
            direction: Direction::Gradient,
            line_search: LineSearch::Grid1000,
            sigma_floor: 1e-6,
            sigma_cap: 1e6,
            rank_tol: 1e-8,
            trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::input("epsilon must be positive"));
        }
        if self.inner_iters < 1 {
            return Err(Error::input("at least one inner iteration is required"));
        }
        if !(self.sigma_floor < self.sigma_cap) {
            return Err(Error::input("sigma floor must be below the cap"));
        }
        Ok(())
    }
}

/// Current iterate of a solve.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub s: SymMatrix,
    pub z: SymMatrix,
    pub v: Option<Factor>,
    pub sigma: f64,
    pub iter: u64,
    pub elapsed_s: f64,
}

impl SolverState {
    /// Deterministic starting point: `X = I/n`, `Z = I` (`V = I`, rank `n`,
    /// for the factorized methods), `S = 0`, `y = 0`, `sigma = 1`.
    pub fn initial(p: &DnnProblem, method: Method) -> Self {
        let n = p.dim();
        SolverState {
            x: SymMatrix::identity(n).map(|v| v / n as f64),
            y: vec![0.0; p.num_constraints()],
            s: SymMatrix::zeros(n),
            z: SymMatrix::identity(n),
            v: method.uses_factor().then(|| Factor::identity(n)),
            sigma: 1.0,
            iter: 0,
            elapsed_s: 0.0,
        }
    }
}

/// Scaled optimality errors; `r_pd` and `r_cz` are tracked only by the
/// methods with the 6-term stopping criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Residuals {
    pub r_p: f64,
    pub r_d: f64,
    pub r_pp: f64,
    pub r_cs: f64,
    pub r_pd: Option<f64>,
    pub r_cz: Option<f64>,
    /// Max over the method-relevant subset.
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    TimeLimit,
    IterLimit,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::TimeLimit => "time_limit",
            Status::IterLimit => "iter_limit",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceRow {
    pub iter: u64,
    pub dual_ofv: f64,
    pub residuals: Residuals,
    /// The penalty value used during this iteration (recorded before the
    /// end-of-iteration update).
    pub sigma: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub state: SolverState,
    pub dual_ofv: f64,
    pub residuals: Residuals,
    pub iterations: u64,
    pub elapsed_s: f64,
    pub status: Status,
    pub trace: Option<Vec<TraceRow>>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// Computes the scaled optimality errors of the current iterate.
///
/// The 4-term set (`AdalPlus`, `DadalPlus`) takes the max of
/// `r_p, r_d, r_pp, r_cs`; the 6-term set adds `r_pd` and `r_cz`.
/// All components are pure functions of the state.
pub fn residuals(p: &DnnProblem, st: &SolverState, method: Method) -> Result<Residuals> {
    let b = p.rhs();
    let b_norm = math::sqrt(b.iter().map(|v| v * v).sum());
    let ax = p.apply_a(&st.x)?;
    let r_p = math::sqrt(ax.iter().zip(b).map(|(a, b)| (a - b) * (a - b)).sum()) / (1.0 + b_norm);

    let dual_eq = p.apply_at(&st.y)? + &st.z + &st.s - p.cost();
    let r_d = dual_eq.norm() / (1.0 + p.cost().norm());

    let x_norm = st.x.norm();
    let neg_part = st.x.map(|v| v.min(0.0));
    let r_pp = neg_part.norm() / (1.0 + x_norm);

    let r_cs = math::abs(st.s.inner(&st.x)) / (1.0 + x_norm + st.s.norm());

    let (r_pd, r_cz) = if method.six_term() {
        let lam = linalg::eigenvalues_sym(&st.x)?;
        let neg_sq: f64 = lam.iter().map(|l| l.min(0.0) * l.min(0.0)).sum();
        let r_pd = math::sqrt(neg_sq) / (1.0 + x_norm);
        let r_cz = math::abs(st.z.inner(&st.x)) / (1.0 + x_norm + st.z.norm());
        (Some(r_pd), Some(r_cz))
    } else {
        (None, None)
    };

    let mut delta = r_p.max(r_d).max(r_pp).max(r_cs);
    if let (Some(pd), Some(cz)) = (r_pd, r_cz) {
        delta = delta.max(pd).max(cz);
    }

    Ok(Residuals {
        r_p,
        r_d,
        r_pp,
        r_cs,
        r_pd,
        r_cz,
        delta,
    })
}

/// Penalty update `sigma = ||X|| / ||Z||`, clamped to the configured range;
/// a vanishing `||Z||` maps to the cap.
pub fn update_sigma(st: &SolverState, cfg: &SolverConfig) -> f64 {
    let zn = st.z.norm();
    if zn == 0.0 {
        return cfg.sigma_cap;
    }
    (st.x.norm() / zn).clamp(cfg.sigma_floor, cfg.sigma_cap)
}

/// Closed-form maximizer of the augmented Lagrangian in `y`:
/// `y = (A A^T)^{-1} (b/sigma - A(X/sigma + Z + S - C))`.
pub fn y_closed_form(
    p: &DnnProblem,
    x: &SymMatrix,
    s: &SymMatrix,
    z: &SymMatrix,
    sigma: f64,
) -> Result<Vec<f64>> {
    debug_assert!(sigma > 0.0);
    let mut t = x.clone();
    t.scale(1.0 / sigma);
    t.axpy(1.0, z);
    t.axpy(1.0, s);
    t.axpy(-1.0, p.cost());
    let at = p.apply_a(&t)?;
    let rhs: Vec<f64> = p
        .rhs()
        .iter()
        .zip(&at)
        .map(|(b, a)| b / sigma - a)
        .collect();
    p.solve_gram(&rhs)
}

/// Gradient of the augmented Lagrangian in `y` at the given point,
/// `b - A(X + sigma (A^T y + Z + S - C))`; used by tests and assertions.
pub fn grad_y(
    p: &DnnProblem,
    y: &[f64],
    s: &SymMatrix,
    z: &SymMatrix,
    x: &SymMatrix,
    sigma: f64,
) -> Result<Vec<f64>> {
    let mut t = p.apply_at(y)?;
    t.axpy(1.0, z);
    t.axpy(1.0, s);
    t.axpy(-1.0, p.cost());
    t.scale(sigma);
    t.axpy(1.0, x);
    let at = p.apply_a(&t)?;
    Ok(p.rhs().iter().zip(&at).map(|(b, a)| b - a).collect())
}

/// Observer invoked once per outer iteration, after the residuals of the
/// new iterate are available and before the penalty update.
pub type IterObserver<'a> = &'a mut dyn FnMut(&SolverState, &Residuals);

/// Runs a solve with an injected elapsed-time source (seconds since the
/// start of the solve) and an optional per-iteration observer.  This is the
/// `no_std` entry point; pass `|| 0.0` to disable the time limit.
pub fn solve_observed(
    p: &DnnProblem,
    method: Method,
    cfg: &SolverConfig,
    elapsed: &mut dyn FnMut() -> f64,
    mut observer: Option<IterObserver<'_>>,
) -> Result<SolveReport> {
    cfg.validate()?;
    let mut st = SolverState::initial(p, method);
    let mut trace = cfg.trace.then(Vec::new);
    let mut res = residuals(p, &st, method)?;

    let status = loop {
        if res.delta <= cfg.epsilon {
            break Status::Converged;
        }
        st.elapsed_s = elapsed();
        if st.elapsed_s > cfg.time_limit_s {
            break Status::TimeLimit;
        }
        if cfg.max_iter.is_some_and(|cap| st.iter >= cap) {
            break Status::IterLimit;
        }

        match method {
            Method::AdalPlus => adal_step(p, &mut st)?,
            Method::ConicAdmm3c => conic3c_step(p, &mut st)?,
            Method::DadalPlus => dadal_step(p, &mut st, cfg)?,
            Method::Dadmm3c => dadmm3c_step(p, &mut st, cfg)?,
        }
        st.iter += 1;
        res = residuals(p, &st, method)?;
        st.elapsed_s = elapsed();
        if let Some(rows) = trace.as_mut() {
            rows.push(TraceRow {
                iter: st.iter,
                dual_ofv: p.dual_objective(&st.y),
                residuals: res.clone(),
                sigma: st.sigma,
            });
        }
        if let Some(obs) = observer.as_mut() {
            obs(&st, &res);
        }
        st.sigma = update_sigma(&st, cfg);
    };

    let dual_ofv = p.dual_objective(&st.y);
    let elapsed_s = st.elapsed_s;
    Ok(SolveReport {
        dual_ofv,
        residuals: res,
        iterations: st.iter,
        elapsed_s,
        status,
        state: st,
        trace,
    })
}

/// Runs a solve with the wall clock driving the time limit.
#[cfg(feature = "std")]
pub fn solve(p: &DnnProblem, method: Method, cfg: &SolverConfig) -> Result<SolveReport> {
    let start = std::time::Instant::now();
    solve_observed(p, method, cfg, &mut || start.elapsed().as_secs_f64(), None)
}

#[cfg(feature = "std")]
pub fn solve_adal_plus(p: &DnnProblem, cfg: &SolverConfig) -> Result<SolveReport> {
    solve(p, Method::AdalPlus, cfg)
}

#[cfg(feature = "std")]
pub fn solve_conic3c(p: &DnnProblem, cfg: &SolverConfig) -> Result<SolveReport> {
    solve(p, Method::ConicAdmm3c, cfg)
}

#[cfg(feature = "std")]
pub fn solve_dadal_plus(p: &DnnProblem, cfg: &SolverConfig) -> Result<SolveReport> {
    solve(p, Method::DadalPlus, cfg)
}

#[cfg(feature = "std")]
pub fn solve_dadmm3c(p: &DnnProblem, cfg: &SolverConfig) -> Result<SolveReport> {
    solve(p, Method::Dadmm3c, cfg)
}

/// `U = C - A^T y - Z - X/sigma`, the argument of the `S` projection.
fn s_update(p: &DnnProblem, st: &SolverState) -> Result<SymMatrix> {
    let mut u = p.cost().clone();
    u.axpy(-1.0, &p.apply_at(&st.y)?);
    u.axpy(-1.0, &st.z);
    u.axpy(-1.0 / st.sigma, &st.x);
    linalg::project_nonneg(&u)
}

/// `W = X/sigma - C + A^T y + S`, shared by the spectral `Z`/`X` updates.
fn w_matrix(p: &DnnProblem, st: &SolverState) -> Result<SymMatrix> {
    let mut w = st.x.clone();
    w.scale(1.0 / st.sigma);
    w.axpy(-1.0, p.cost());
    w.axpy(1.0, &p.apply_at(&st.y)?);
    w.axpy(1.0, &st.s);
    Ok(w)
}

fn adal_step(p: &DnnProblem, st: &mut SolverState) -> Result<()> {
    st.y = y_closed_form(p, &st.x, &st.s, &st.z, st.sigma)?;
    st.s = s_update(p, st)?;
    let w = w_matrix(p, st)?;
    // One decomposition serves both cone projections, so Z X = 0 holds up
    // to roundoff.
    let (w_plus, mut w_minus) = linalg::project_psd_split(&w)?;
    w_minus.scale(-1.0);
    st.z = w_minus;
    let mut x = w_plus;
    x.scale(st.sigma);
    st.x = x;
    Ok(())
}

fn conic3c_step(p: &DnnProblem, st: &mut SolverState) -> Result<()> {
    let w = w_matrix(p, st)?;
    let (_, mut w_minus) = linalg::project_psd_split(&w)?;
    w_minus.scale(-1.0);
    st.z = w_minus;
    st.y = y_closed_form(p, &st.x, &st.s, &st.z, st.sigma)?;
    st.s = s_update(p, st)?;
    st.y = y_closed_form(p, &st.x, &st.s, &st.z, st.sigma)?;
    let mut step = p.apply_at(&st.y)?;
    step.axpy(1.0, &st.z);
    step.axpy(1.0, &st.s);
    step.axpy(-1.0, p.cost());
    st.x.axpy(st.sigma, &step);
    Ok(())
}

fn dadal_step(p: &DnnProblem, st: &mut SolverState, cfg: &SolverConfig) -> Result<()> {
    inner::inner_yv_update(p, st, cfg)?;
    st.z = st.v.as_ref().expect("factorized method keeps V").to_sym();
    st.s = s_update(p, st)?;
    st.y = y_closed_form(p, &st.x, &st.s, &st.z, st.sigma)?;
    let w = w_matrix(p, st)?;
    let (w_plus, mut w_minus) = linalg::project_psd_split(&w)?;
    w_minus.scale(-1.0);
    st.z = w_minus;
    let mut x = w_plus;
    x.scale(st.sigma);
    st.x = x;
    // The rank of Z is re-determined here; V is refreshed to match.
    st.v = Some(linalg::low_rank_factor(&st.z, cfg.rank_tol)?);
    Ok(())
}

fn dadmm3c_step(p: &DnnProblem, st: &mut SolverState, cfg: &SolverConfig) -> Result<()> {
    inner::inner_yv_update(p, st, cfg)?;
    st.z = st.v.as_ref().expect("factorized method keeps V").to_sym();
    st.s = s_update(p, st)?;
    st.y = y_closed_form(p, &st.x, &st.s, &st.z, st.sigma)?;
    let mut step = st.z.clone();
    step.axpy(1.0, &st.s);
    step.axpy(1.0, &p.apply_at(&st.y)?);
    step.axpy(-1.0, p.cost());
    st.x.axpy(st.sigma, &step);
    Ok(())
}
