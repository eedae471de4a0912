//! Factorized inner ascent: maximize the augmented Lagrangian jointly in
//! `(y, V)` with `Z = V V^T`, `X` and `S` held fixed.
//!
//! Along a ray `V + alpha D` the merit `phi(alpha) = L(y(V + alpha D), S,
//! V + alpha D; X)` is an exact quartic in `alpha`, because `Z(alpha)` is
//! quadratic, `y(alpha)` is affine in `Z(alpha)`, and `L` is quadratic in
//! the residual.  The line searches below exploit this: one polynomial
//! build, then either a 1000-point grid scan or the stationary points of
//! the quartic in closed form.

use alloc::vec::Vec;

use crate::linalg::{Factor, Mat, SymMatrix};
use crate::problem::DnnProblem;
use crate::solver::{y_closed_form, Direction, LineSearch, SolverConfig, SolverState, EPS_INNER};
use crate::{math, Error, Result};

/// `L(y, S, Z; X) = b^T y - <A^T y + Z + S - C, X> - sigma/2 ||A^T y + Z + S - C||^2`.
pub(crate) fn lagrangian_with_z(
    p: &DnnProblem,
    y: &[f64],
    s: &SymMatrix,
    z: &SymMatrix,
    x: &SymMatrix,
    sigma: f64,
) -> Result<f64> {
    let mut r = p.apply_at(y)?;
    r.axpy(1.0, z);
    r.axpy(1.0, s);
    r.axpy(-1.0, p.cost());
    let by: f64 = p.rhs().iter().zip(y).map(|(b, y)| b * y).sum();
    Ok(by - r.inner(x) - 0.5 * sigma * r.norm_sq())
}

/// Augmented Lagrangian at `Z = V V^T`.
pub fn lagrangian_value(
    p: &DnnProblem,
    y: &[f64],
    s: &SymMatrix,
    v: &Factor,
    x: &SymMatrix,
    sigma: f64,
) -> Result<f64> {
    lagrangian_with_z(p, y, s, &v.to_sym(), x, sigma)
}

/// `M = X + sigma (A^T y + V V^T + S - C)`, the matrix through which both
/// the gradient in `V` and the diagonal Hessian scaling are expressed.
fn merit_matrix(
    p: &DnnProblem,
    y: &[f64],
    s: &SymMatrix,
    v: &Factor,
    x: &SymMatrix,
    sigma: f64,
) -> Result<SymMatrix> {
    let mut m = p.apply_at(y)?;
    m.axpy(1.0, &v.to_sym());
    m.axpy(1.0, s);
    m.axpy(-1.0, p.cost());
    m.scale(sigma);
    m.axpy(1.0, x);
    Ok(m)
}

/// Gradient of the augmented Lagrangian in the factor, `-2 M V`.
pub fn grad_v(
    p: &DnnProblem,
    y: &[f64],
    s: &SymMatrix,
    v: &Factor,
    x: &SymMatrix,
    sigma: f64,
) -> Result<Mat> {
    let m = merit_matrix(p, y, s, v, x, sigma)?;
    let mut g = m.mul_mat(v.mat());
    g.scale(-2.0);
    Ok(g)
}

/// Entrywise diagonal of the Hessian in `V`:
/// `H_ij = -2 (M_ii + sigma ((V^T V)_jj + V_ij^2))`.
fn hessian_diag(m: &SymMatrix, v: &Mat, sigma: f64) -> Mat {
    let (n, r) = (v.rows(), v.cols());
    let mut col_sq = Vec::with_capacity(r);
    for j in 0..r {
        col_sq.push((0..n).map(|i| v.get(i, j) * v.get(i, j)).sum::<f64>());
    }
    Mat::from_fn(n, r, |i, j| {
        let vij = v.get(i, j);
        -2.0 * (m.get(i, i) + sigma * (col_sq[j] + vij * vij))
    })
}

/// The merit quartic `phi(alpha)` for a ray `V + alpha D`, with monomial
/// coefficients `c[0] + c[1] alpha + ... + c[4] alpha^4`.
pub(crate) struct MeritQuartic {
    c: [f64; 5],
}

impl MeritQuartic {
    pub(crate) fn build(
        p: &DnnProblem,
        s: &SymMatrix,
        v: &Factor,
        d: &Mat,
        x: &SymMatrix,
        sigma: f64,
    ) -> Result<Self> {
        // Z(alpha) = Z0 + alpha Z1 + alpha^2 Z2.
        let z0 = v.to_sym();
        let z1 = SymMatrix::from_outer_sym_pair(v.mat(), d);
        let z2 = SymMatrix::from_outer(d);

        // y(alpha) inherits the expansion through the normal equations.
        let y0 = y_closed_form(p, x, s, &z0, sigma)?;
        let neg_az1: Vec<f64> = p.apply_a(&z1)?.iter().map(|t| -t).collect();
        let y1 = p.solve_gram(&neg_az1)?;
        let neg_az2: Vec<f64> = p.apply_a(&z2)?.iter().map(|t| -t).collect();
        let y2 = p.solve_gram(&neg_az2)?;

        // R(alpha) = A^T y(alpha) + Z(alpha) + S - C, also quadratic.
        let mut r0 = p.apply_at(&y0)?;
        r0.axpy(1.0, &z0);
        r0.axpy(1.0, s);
        r0.axpy(-1.0, p.cost());
        let r1 = p.apply_at(&y1)? + &z1;
        let r2 = p.apply_at(&y2)? + &z2;

        let b = p.rhs();
        let dot = |y: &[f64]| b.iter().zip(y).map(|(b, y)| b * y).sum::<f64>();
        let (by0, by1, by2) = (dot(&y0), dot(&y1), dot(&y2));

        let c0 = by0 - r0.inner(x) - 0.5 * sigma * r0.inner(&r0);
        let c1 = by1 - r1.inner(x) - sigma * r0.inner(&r1);
        let c2 = by2 - r2.inner(x) - sigma * (r0.inner(&r2) + 0.5 * r1.inner(&r1));
        let c3 = -sigma * r1.inner(&r2);
        let c4 = -0.5 * sigma * r2.inner(&r2);
        Ok(MeritQuartic {
            c: [c0, c1, c2, c3, c4],
        })
    }

    pub(crate) fn eval(&self, alpha: f64) -> f64 {
        let c = &self.c;
        (((c[4] * alpha + c[3]) * alpha + c[2]) * alpha + c[1]) * alpha + c[0]
    }

    /// Best stepsize on the grid `0.01, 0.02, ..., 10.00`; `0.0` when no
    /// grid point improves on staying put.
    fn grid_max(&self) -> f64 {
        let mut best_alpha = 0.0;
        let mut best_val = self.eval(0.0);
        for j in 1..=1000 {
            let alpha = 0.01 * j as f64;
            let val = self.eval(alpha);
            if val > best_val {
                best_val = val;
                best_alpha = alpha;
            }
        }
        best_alpha
    }

    /// Stationary point of the quartic in `(0, 10]` with the largest merit,
    /// recovered from the polynomial refit at five nodes; grid fallback
    /// when no interior stationary point improves on `alpha = 0`.
    fn root_max(&self) -> f64 {
        let nodes = [0.0, 1.0, 2.0, 3.0, 4.0];
        let values: Vec<f64> = nodes.iter().map(|&a| self.eval(a)).collect();
        let c = fit_quartic(&nodes, &values);
        // phi'(alpha) = c1 + 2 c2 alpha + 3 c3 alpha^2 + 4 c4 alpha^3.
        let roots = real_roots_cubic(4.0 * c[4], 3.0 * c[3], 2.0 * c[2], c[1]);
        let phi0 = self.eval(0.0);
        let mut best: Option<(f64, f64)> = None;
        for r in roots {
            if r > 0.0 && r <= 10.0 {
                let val = self.eval(r);
                if val > phi0 && best.is_none_or(|(_, bv)| val > bv) {
                    best = Some((r, val));
                }
            }
        }
        match best {
            Some((alpha, _)) => alpha,
            None => self.grid_max(),
        }
    }
}

/// Monomial coefficients of the degree-4 interpolant through the five
/// `(node, value)` pairs, via Gaussian elimination on the Vandermonde
/// system (5x5, partial pivoting).
fn fit_quartic(nodes: &[f64; 5], values: &[f64]) -> [f64; 5] {
    let mut a = [[0.0f64; 6]; 5];
    for (i, &t) in nodes.iter().enumerate() {
        let mut pw = 1.0;
        for j in 0..5 {
            a[i][j] = pw;
            pw *= t;
        }
        a[i][5] = values[i];
    }
    for col in 0..5 {
        let piv = (col..5)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for row in col + 1..5 {
            let f = a[row][col] / a[col][col];
            for k in col..6 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut c = [0.0f64; 5];
    for row in (0..5).rev() {
        let mut acc = a[row][5];
        for k in row + 1..5 {
            acc -= a[row][k] * c[k];
        }
        c[row] = acc / a[row][row];
    }
    c
}

/// Real roots of `a3 t^3 + a2 t^2 + a1 t + a0 = 0`, degenerating gracefully
/// to the quadratic and linear cases.
fn real_roots_cubic(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let scale = a3.abs().max(a2.abs()).max(a1.abs()).max(a0.abs());
    let mut roots = Vec::new();
    if scale == 0.0 {
        return roots;
    }
    if a3.abs() <= 1e-14 * scale {
        // Quadratic a2 t^2 + a1 t + a0.
        if a2.abs() <= 1e-14 * scale {
            if a1.abs() > 1e-14 * scale {
                roots.push(-a0 / a1);
            }
            return roots;
        }
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if disc >= 0.0 {
            let sq = math::sqrt(disc);
            // Citardauq form for the smaller-magnitude root.
            let q = -0.5 * (a1 + a1.signum() * sq);
            roots.push(q / a2);
            if q != 0.0 {
                roots.push(a0 / q);
            } else {
                roots.push(0.0);
            }
        }
        return roots;
    }
    // Depressed cubic t = u - b/3 with monic coefficients.
    let b = a2 / a3;
    let c = a1 / a3;
    let d = a0 / a3;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if disc > 0.0 {
        let sq = math::sqrt(disc);
        let u = math::cbrt(-q / 2.0 + sq);
        let v = math::cbrt(-q / 2.0 - sq);
        roots.push(u + v + shift);
    } else if p == 0.0 && q == 0.0 {
        roots.push(shift);
    } else {
        // Three real roots (Viete's trigonometric form).
        let m = 2.0 * math::sqrt(-p / 3.0);
        let cos_arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = math::acos(cos_arg) / 3.0;
        for k in 0..3 {
            let angle = theta - 2.0 * core::f64::consts::PI * k as f64 / 3.0;
            roots.push(m * math::cos(angle) + shift);
        }
    }
    roots
}

/// Stepsize for the ray `V + alpha D`, maximizing the merit quartic by the
/// configured strategy.  Returns `0.0` when no positive step improves on
/// the current point.
pub fn line_search_alpha(
    p: &DnnProblem,
    s: &SymMatrix,
    v: &Factor,
    d: &Mat,
    x: &SymMatrix,
    sigma: f64,
    mode: LineSearch,
) -> Result<f64> {
    if d.rows() != v.dim() || d.cols() != v.rank() {
        return Err(Error::input("direction shape does not match the factor"));
    }
    if d.norm() == 0.0 {
        return Ok(0.0);
    }
    let quartic = MeritQuartic::build(p, s, v, d, x, sigma)?;
    Ok(match mode {
        LineSearch::Grid1000 => quartic.grid_max(),
        LineSearch::QuarticRoots => quartic.root_max(),
    })
}

/// Runs the configured number of `(y, V)` ascent passes in place.  Each
/// pass takes a line-searched step in `V` and then restores the exact
/// maximizer in `y` at the new factor, so the Lagrangian never decreases
/// and the `y`-gradient vanishes at exit.  A pass that starts at a
/// stationary point of the factor leaves the state untouched.
pub fn inner_yv_update(p: &DnnProblem, st: &mut SolverState, cfg: &SolverConfig) -> Result<()> {
    for _ in 0..cfg.inner_iters {
        let v = st
            .v
            .as_ref()
            .ok_or_else(|| Error::input("inner update requires a factorized iterate"))?;
        let g = grad_v(p, &st.y, &st.s, v, &st.x, st.sigma)?;
        if g.norm() < EPS_INNER {
            break;
        }
        let d = match cfg.direction {
            Direction::Gradient => g,
            Direction::ScaledGradient => {
                let m = merit_matrix(p, &st.y, &st.s, v, &st.x, st.sigma)?;
                let h = hessian_diag(&m, v.mat(), st.sigma);
                Mat::from_fn(g.rows(), g.cols(), |i, j| {
                    let hij = h.get(i, j).abs();
                    if hij > 1e-12 {
                        g.get(i, j) / hij
                    } else {
                        g.get(i, j)
                    }
                })
            }
        };
        let alpha = line_search_alpha(p, &st.s, v, &d, &st.x, st.sigma, cfg.line_search)?;
        if alpha > 0.0 {
            st.v
                .as_mut()
                .expect("checked above")
                .mat_mut()
                .axpy(alpha, &d);
        }
        let z = st.v.as_ref().expect("checked above").to_sym();
        st.y = y_closed_form(p, &st.x, &st.s, &z, st.sigma)?;
    }
    Ok(())
}
