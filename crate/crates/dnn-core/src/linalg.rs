//! Dense symmetric-matrix primitives.
//!
//! This is the only module performing spectral computations: the symmetric
//! eigendecomposition (Householder tridiagonalization followed by implicit
//! QL), the positive/negative semidefinite cone projections, the entrywise
//! nonnegative projection and the low-rank factorization of an (almost)
//! PSD matrix.
//!
//! Symmetric matrices are stored packed (upper triangle only), so the
//! symmetry `entry(i, j) == entry(j, i)` holds structurally and cannot be
//! broken by rounding.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Eigenvalues below this relative threshold count as zero when splitting
/// the spectrum in the cone projections.
const SPLIT_ZERO: f64 = 0.0;

// ---------------------------------------------------------------------------
// decomposition counter
// ---------------------------------------------------------------------------

#[cfg(feature = "std")]
mod counter {
    use core::cell::Cell;

    std::thread_local! {
        static EIG_CALLS: Cell<u64> = const { Cell::new(0) };
    }

    pub fn bump() {
        EIG_CALLS.with(|c| c.set(c.get() + 1));
    }

    /// Number of eigendecompositions performed on this thread.
    pub fn eig_call_count() -> u64 {
        EIG_CALLS.with(|c| c.get())
    }
}

#[cfg(not(feature = "std"))]
mod counter {
    use core::sync::atomic::{AtomicU64, Ordering};

    static EIG_CALLS: AtomicU64 = AtomicU64::new(0);

    pub fn bump() {
        EIG_CALLS.fetch_add(1, Ordering::Relaxed);
    }

    /// Number of eigendecompositions performed.
    pub fn eig_call_count() -> u64 {
        EIG_CALLS.load(Ordering::Relaxed)
    }
}

pub use counter::eig_call_count;

// ---------------------------------------------------------------------------
// dense rectangular matrix
// ---------------------------------------------------------------------------

/// Dense row-major matrix, used for eigenvector blocks and factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self + alpha * other`, entrywise.
    pub fn axpy(&mut self, alpha: f64, other: &Mat) {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for v in &mut self.data {
            *v *= alpha;
        }
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

// ---------------------------------------------------------------------------
// packed symmetric matrix
// ---------------------------------------------------------------------------

/// An `n`-by-`n` symmetric matrix with packed upper-triangular storage.
///
/// Reads and writes at `(i, j)` and `(j, i)` address the same slot, so
/// symmetry is exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    /// Upper triangle, row by row: (0,0)..(0,n-1), (1,1)..(1,n-1), ...
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "symmetric matrix dimension must be at least 1");
        SymMatrix {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle (`i <= j`).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from a full row-major slice; lower-triangle entries are ignored.
    pub fn from_dense_upper(n: usize, full: &[f64]) -> Self {
        SymMatrix::from_fn(n, |i, j| full[i * n + j])
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        debug_assert!(j < self.n);
        i * self.n - i * (i + 1) / 2 + j
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    pub fn norm_sq(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            let d = self.get(i, i);
            s += d * d;
            for j in i + 1..self.n {
                let v = self.get(i, j);
                s += 2.0 * v * v;
            }
        }
        s
    }

    /// Standard inner product `<A, B> = trace(AB)`.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.n, other.n);
        let mut s = 0.0;
        for i in 0..self.n {
            s += self.get(i, i) * other.get(i, i);
            for j in i + 1..self.n {
                s += 2.0 * self.get(i, j) * other.get(i, j);
            }
        }
        s
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Max-norm over all entries.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(math::abs(*v)))
    }

    pub fn scale(&mut self, alpha: f64) {
        for v in &mut self.data {
            *v *= alpha;
        }
    }

    /// `self + alpha * other`, entrywise.
    pub fn axpy(&mut self, alpha: f64, other: &SymMatrix) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }

    /// Full row-major copy, for routines that want unpacked storage.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut full = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.get(i, j);
                full[i * n + j] = v;
                full[j * n + i] = v;
            }
        }
        full
    }

    /// `V * V^T` as a packed symmetric matrix.
    pub fn from_outer(v: &Mat) -> SymMatrix {
        let n = v.rows();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            let ri = v.row(i);
            for j in i..n {
                let rj = v.row(j);
                let dot = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                m.set(i, j, dot);
            }
        }
        m
    }

    /// `V * W^T + W * V^T` for same-shape `V`, `W`.
    pub fn from_outer_sym_pair(v: &Mat, w: &Mat) -> SymMatrix {
        debug_assert_eq!(v.rows(), w.rows());
        debug_assert_eq!(v.cols(), w.cols());
        let n = v.rows();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut dot = 0.0;
                for (a, b) in v.row(i).iter().zip(w.row(j)) {
                    dot += a * b;
                }
                for (a, b) in w.row(i).iter().zip(v.row(j)) {
                    dot += a * b;
                }
                m.set(i, j, dot);
            }
        }
        m
    }

    /// Matrix-matrix product `self * other` as a dense (not generally
    /// symmetric) matrix.
    pub fn mul_sym(&self, other: &SymMatrix) -> Mat {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        Mat::from_fn(n, n, |i, j| (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum())
    }

    /// `self * v` for a dense factor `v`.
    pub fn mul_mat(&self, v: &Mat) -> Mat {
        debug_assert_eq!(self.n, v.rows());
        let n = self.n;
        let r = v.cols();
        let mut out = Mat::zeros(n, r);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let rk = v.row(k);
                for j in 0..r {
                    let val = out.get(i, j) + a * rk[j];
                    out.set(i, j, val);
                }
            }
        }
        out
    }
}

impl core::ops::Add<&SymMatrix> for SymMatrix {
    type Output = SymMatrix;
    fn add(mut self, rhs: &SymMatrix) -> SymMatrix {
        self.axpy(1.0, rhs);
        self
    }
}

impl core::ops::Sub<&SymMatrix> for SymMatrix {
    type Output = SymMatrix;
    fn sub(mut self, rhs: &SymMatrix) -> SymMatrix {
        self.axpy(-1.0, rhs);
        self
    }
}

// ---------------------------------------------------------------------------
// eigendecomposition
// ---------------------------------------------------------------------------

/// Eigendecomposition of a symmetric matrix: eigenvalues sorted ascending
/// and a column-orthonormal matrix of eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Mat,
}

/// Low-rank factor `V` with `V V^T` PSD by construction.
#[derive(Debug, Clone)]
pub struct Factor {
    v: Mat,
}

impl Factor {
    /// Wraps an explicit factor; `V V^T` is PSD for any real `V`.
    pub fn from_mat(v: Mat) -> Self {
        assert!(v.cols() >= 1 && v.cols() <= v.rows());
        Factor { v }
    }

    pub fn identity(n: usize) -> Self {
        Factor { v: Mat::identity(n) }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.v.rows()
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.v.cols()
    }

    #[inline]
    pub fn mat(&self) -> &Mat {
        &self.v
    }

    #[inline]
    pub fn mat_mut(&mut self) -> &mut Mat {
        &mut self.v
    }

    /// The product `V V^T`.
    pub fn to_sym(&self) -> SymMatrix {
        SymMatrix::from_outer(&self.v)
    }
}

/// Full eigendecomposition of a symmetric matrix; eigenvalues ascending.
pub fn eig_sym(m: &SymMatrix) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(Error::input("matrix has non-finite entries"));
    }
    counter::bump();
    let n = m.dim();
    let mut a = m.to_dense();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut a, &mut d, &mut e);
    tqli(n, &mut d, &mut e, Some(&mut a))?;
    sort_ascending(n, &mut d, Some(&mut a));
    Ok(EigenDecomposition {
        eigenvalues: d,
        eigenvectors: Mat {
            rows: n,
            cols: n,
            data: a,
        },
    })
}

/// Eigenvalues only (ascending), without accumulating eigenvectors.
///
/// Cheaper than [`eig_sym`] and not counted as a decomposition; used by the
/// residual bookkeeping of the solvers that must avoid decompositions.
pub fn eigenvalues_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::input("matrix has non-finite entries"));
    }
    let n = m.dim();
    let mut a = m.to_dense();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut a, &mut d, &mut e);
    tqli(n, &mut d, &mut e, None)?;
    sort_ascending(n, &mut d, None);
    Ok(d)
}

/// Splits `M` into its PSD and NSD parts from a single decomposition:
/// `plus` PSD, `minus` NSD, `plus + minus = M` and `<plus, minus> = 0`.
pub fn project_psd_split(m: &SymMatrix) -> Result<(SymMatrix, SymMatrix)> {
    let eig = eig_sym(m)?;
    let n = m.dim();
    let mut plus = SymMatrix::zeros(n);
    let mut minus = SymMatrix::zeros(n);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam == SPLIT_ZERO {
            continue;
        }
        let target = if lam > SPLIT_ZERO { &mut plus } else { &mut minus };
        rank_one_update(target, lam, &eig.eigenvectors, k);
    }
    Ok((plus, minus))
}

/// Projection of `M` onto the PSD cone.
pub fn project_psd(m: &SymMatrix) -> Result<SymMatrix> {
    Ok(project_psd_split(m)?.0)
}

/// Entrywise projection onto the nonnegative orthant.
pub fn project_nonneg(m: &SymMatrix) -> Result<SymMatrix> {
    if !m.is_finite() {
        return Err(Error::input("matrix has non-finite entries"));
    }
    Ok(m.map(|v| v.max(0.0)))
}

/// Factors an approximately PSD matrix as `V V^T` with `V = Q_+ diag(sqrt(lambda_+))`,
/// keeping the eigenvalues above `rank_tol * max(lambda_max, 1)`.
///
/// A matrix with `lambda_min < -1e-8 * (1 + lambda_max)` is rejected. When no
/// eigenvalue clears the rank threshold the factor degenerates to a single
/// scaled top-eigenvector column so the rank stays at least 1.
pub fn low_rank_factor(m: &SymMatrix, rank_tol: f64) -> Result<Factor> {
    assert!(rank_tol > 0.0, "rank tolerance must be positive");
    let eig = eig_sym(m)?;
    let n = m.dim();
    let lam_max = *eig.eigenvalues.last().expect("n >= 1");
    let lam_min = eig.eigenvalues[0];
    if lam_min < -1e-8 * (1.0 + lam_max.max(0.0)) {
        return Err(Error::cone("matrix is significantly indefinite"));
    }
    let threshold = rank_tol * lam_max.max(1.0);
    let kept: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > threshold).collect();
    let v = if kept.is_empty() {
        // Degenerate (near-zero) matrix: keep a single scaled top-eigenvector
        // column so downstream rank bookkeeping never sees rank 0.
        let scale = math::sqrt(lam_max.max(0.0));
        Mat::from_fn(n, 1, |i, _| scale * eig.eigenvectors.get(i, n - 1))
    } else {
        let mut v = Mat::zeros(n, kept.len());
        // Columns ordered by decreasing eigenvalue.
        for (c, &k) in kept.iter().rev().enumerate() {
            let s = math::sqrt(eig.eigenvalues[k]);
            for i in 0..n {
                v.set(i, c, s * eig.eigenvectors.get(i, k));
            }
        }
        v
    };
    Ok(Factor { v })
}

fn rank_one_update(target: &mut SymMatrix, lam: f64, q: &Mat, col: usize) {
    let n = target.dim();
    for i in 0..n {
        let qi = lam * q.get(i, col);
        for j in i..n {
            target.add_at(i, j, qi * q.get(j, col));
        }
    }
}

fn sort_ascending(n: usize, d: &mut [f64], mut z: Option<&mut Vec<f64>>) {
    // Selection sort; n is moderate and this keeps the column swaps simple.
    for i in 0..n {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            if let Some(z) = z.as_deref_mut() {
                for row in 0..n {
                    z.swap(row * n + i, row * n + k);
                }
            }
        }
    }
}

/// Householder reduction of a full symmetric matrix (row-major in `a`) to
/// tridiagonal form; on exit `a` holds the accumulated orthogonal transform,
/// `d` the diagonal and `e` the subdiagonal (in `e[1..]`).
fn tred2(n: usize, a: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| math::abs(a[i * n + k])).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -math::sqrt(h) } else { math::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[j * n + i] = a[i * n + j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let gj = e[j] - hh * f;
                    e[j] = gj;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + gj * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..i {
                    a[k * n + j] -= g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..i {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// `z`, when present, accumulates eigenvectors (initialized to the transform
/// produced by [`tred2`]).
fn tqli(n: usize, d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = math::abs(d[m]) + math::abs(d[m + 1]);
                if math::abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::input("eigensolver failed to converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { math::abs(r) } else { -math::abs(r) });
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
