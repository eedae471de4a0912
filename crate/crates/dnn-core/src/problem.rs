//! The DNN problem model.
//!
//! A problem is `min <C, X>` subject to `A(X) = b`, `X` PSD and entrywise
//! nonnegative, with `A` given as a list of sparse symmetric coefficient
//! matrices.  The module also provides the DIMACS clique-format graph
//! reader, graph complementation and the builder for the theta-plus
//! stable-set relaxation (in internal minimization form, cost `-J`).

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::SymMatrix;
use crate::math;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// graphs
// ---------------------------------------------------------------------------

/// Simple undirected graph; vertices are `0..n` internally (DIMACS files use
/// 1-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted, deduplicated list of edges `(i, j)` with `i < j`.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an edge list; reversed duplicates collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::input(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::input(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        es.dedup();
        Ok(Graph { n, edges: es })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph { n, edges }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    /// Edge-complement on the same vertex set; an involution.
    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Graph { n: self.n, edges }
    }
}

/// Parses a DIMACS clique-format graph (`c` comments, one `p edge <n> <m>`
/// line, `e <i> <j>` edge lines with 1-based vertices).  Duplicate and
/// reversed-duplicate edges collapse; self-loops are rejected.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("c") => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "duplicate problem line".to_string(),
                    });
                }
                let kind = tokens.next().unwrap_or("");
                if kind != "edge" && kind != "col" {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unsupported problem type '{kind}'"),
                    });
                }
                let nv = parse_usize(tokens.next(), lineno)?;
                let _ne = parse_usize(tokens.next(), lineno)?;
                if nv == 0 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "graph must have at least one vertex".to_string(),
                    });
                }
                n = Some(nv);
            }
            Some("e") => {
                let nv = n.ok_or(Error::Parse {
                    line: lineno,
                    msg: "edge before problem line".to_string(),
                })?;
                let a = parse_usize(tokens.next(), lineno)?;
                let b = parse_usize(tokens.next(), lineno)?;
                if a == 0 || b == 0 || a > nv || b > nv {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("vertex out of range in edge ({a}, {b})"),
                    });
                }
                if a == b {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("self-loop at vertex {a}"),
                    });
                }
                let (a, b) = (a - 1, b - 1);
                edges.push((a.min(b), a.max(b)));
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown line type '{other}'"),
                })
            }
            None => continue,
        }
    }
    let n = n.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing problem line".to_string(),
    })?;
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph { n, edges })
}

fn parse_usize(tok: Option<&str>, lineno: usize) -> Result<usize> {
    let tok = tok.ok_or(Error::Parse {
        line: lineno,
        msg: "missing token".to_string(),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("non-integer token '{tok}'"),
    })
}

// ---------------------------------------------------------------------------
// constraint operator
// ---------------------------------------------------------------------------

/// Sparse symmetric coefficient matrix `A_i`, stored as upper-triangular
/// triplets; an off-diagonal value applies symmetrically at `(i, j)` and
/// `(j, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintMatrix {
    entries: Vec<(usize, usize, f64)>,
}

impl ConstraintMatrix {
    pub fn new(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut es: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, v) in entries {
            let (i, j) = (i.min(j), i.max(j));
            if j >= n {
                return Err(Error::input(format!("constraint index ({i}, {j}) out of range")));
            }
            es.push((i, j, v));
        }
        es.sort_unstable_by_key(|&(i, j, _)| (i, j));
        if es.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::input("duplicate entry in constraint matrix"));
        }
        Ok(ConstraintMatrix { entries: es })
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// `<A_i, X>` over all ordered index pairs.
    pub fn inner(&self, x: &SymMatrix) -> f64 {
        let mut s = 0.0;
        for &(i, j, v) in &self.entries {
            s += if i == j { v * x.get(i, i) } else { 2.0 * v * x.get(i, j) };
        }
        s
    }

    /// Gram entry `<A_i, A_j>` for two sparse constraints.
    fn gram(&self, other: &ConstraintMatrix) -> f64 {
        // Both entry lists are sorted; merge.
        let mut s = 0.0;
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i1, j1, v1) = self.entries[a];
            let (i2, j2, v2) = other.entries[b];
            match (i1, j1).cmp(&(i2, j2)) {
                core::cmp::Ordering::Less => a += 1,
                core::cmp::Ordering::Greater => b += 1,
                core::cmp::Ordering::Equal => {
                    s += if i1 == j1 { v1 * v2 } else { 2.0 * v1 * v2 };
                    a += 1;
                    b += 1;
                }
            }
        }
        s
    }

    fn add_scaled_to(&self, scale: f64, out: &mut SymMatrix) {
        for &(i, j, v) in &self.entries {
            out.add_at(i, j, scale * v);
        }
    }
}

// ---------------------------------------------------------------------------
// problem
// ---------------------------------------------------------------------------

/// Structure tag for a problem; theta-plus problems carry the stable-set
/// graph and use the diagonal Gram solve.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemKind {
    Generic,
    ThetaPlus { graph: Graph },
}

#[derive(Debug, Clone)]
enum GramSolver {
    Diagonal(Vec<f64>),
    /// Lower-triangular Cholesky factor of the dense Gram matrix, row-major.
    Cholesky { n: usize, l: Vec<f64> },
}

/// A doubly nonnegative program `min <C, X> : A(X) = b, X PSD, X >= 0`,
/// with the Gram solve `(A A^T) u = v` cached at construction.
#[derive(Debug, Clone)]
pub struct DnnProblem {
    n: usize,
    c: SymMatrix,
    constraints: Vec<ConstraintMatrix>,
    b: Vec<f64>,
    gram: GramSolver,
    kind: ProblemKind,
}

impl DnnProblem {
    /// Generic constructor; fails if the constraints are linearly dependent
    /// (the Gram matrix must be positive definite).
    pub fn new(c: SymMatrix, constraints: Vec<ConstraintMatrix>, b: Vec<f64>) -> Result<Self> {
        let n = c.dim();
        let m = constraints.len();
        if b.len() != m {
            return Err(Error::input("right-hand side length must match constraint count"));
        }
        if m == 0 {
            return Err(Error::input("at least one constraint is required"));
        }
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let g = constraints[i].gram(&constraints[j]);
                gram[i * m + j] = g;
                gram[j * m + i] = g;
            }
        }
        let l = cholesky(m, &gram).ok_or(Error::SingularConstraints)?;
        Ok(DnnProblem {
            n,
            c,
            constraints,
            b,
            gram: GramSolver::Cholesky { n: m, l },
            kind: ProblemKind::Generic,
        })
    }

    /// Builds the theta-plus relaxation of the stable set problem on `g`,
    /// in minimization form: cost `-J`, `trace(X) = 1`, and `X_ij = 0` per
    /// edge with coefficient 1/2 so that the dual edge equation reads
    /// `y_e/2 + Z_ij + S_ij = -1`.  The Gram matrix is the explicit diagonal
    /// `diag(n, 1/2, ..., 1/2)`.
    pub fn theta_plus(g: &Graph) -> Self {
        let n = g.num_vertices();
        let c = SymMatrix::from_fn(n, |_, _| -1.0);
        let mut constraints = Vec::with_capacity(1 + g.num_edges());
        let trace = ConstraintMatrix::new(n, (0..n).map(|i| (i, i, 1.0))).expect("in range");
        constraints.push(trace);
        for &(i, j) in g.edges() {
            constraints.push(ConstraintMatrix::new(n, [(i, j, 0.5)]).expect("in range"));
        }
        let mut b = vec![0.0; constraints.len()];
        b[0] = 1.0;
        let mut diag = vec![0.5; constraints.len()];
        diag[0] = n as f64;
        DnnProblem {
            n,
            c,
            constraints,
            b,
            gram: GramSolver::Diagonal(diag),
            kind: ProblemKind::ThetaPlus { graph: g.clone() },
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    #[inline]
    pub fn cost(&self) -> &SymMatrix {
        &self.c
    }

    #[inline]
    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    #[inline]
    pub fn constraints(&self) -> &[ConstraintMatrix] {
        &self.constraints
    }

    #[inline]
    pub fn kind(&self) -> &ProblemKind {
        &self.kind
    }

    pub fn is_theta_plus(&self) -> bool {
        matches!(self.kind, ProblemKind::ThetaPlus { .. })
    }

    /// The stable-set graph for theta-plus problems.
    pub fn graph(&self) -> Option<&Graph> {
        match &self.kind {
            ProblemKind::ThetaPlus { graph } => Some(graph),
            ProblemKind::Generic => None,
        }
    }

    /// `b^T y`.
    pub fn dual_objective(&self, y: &[f64]) -> f64 {
        self.b.iter().zip(y).map(|(b, y)| b * y).sum()
    }

    /// Applies the constraint operator: component `i` is `<A_i, X>`.
    pub fn apply_a(&self, x: &SymMatrix) -> Result<Vec<f64>> {
        if x.dim() != self.n {
            return Err(Error::input("matrix dimension does not match problem"));
        }
        Ok(self.constraints.iter().map(|a| a.inner(x)).collect())
    }

    /// Applies the adjoint: `sum_i y_i A_i` as a dense symmetric matrix.
    pub fn apply_at(&self, y: &[f64]) -> Result<SymMatrix> {
        if y.len() != self.constraints.len() {
            return Err(Error::input("multiplier length does not match constraint count"));
        }
        let mut out = SymMatrix::zeros(self.n);
        for (a, &yi) in self.constraints.iter().zip(y) {
            if yi != 0.0 {
                a.add_scaled_to(yi, &mut out);
            }
        }
        Ok(out)
    }

    /// Solves `(A A^T) u = v` with the factorization cached at construction.
    pub fn solve_gram(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.constraints.len() {
            return Err(Error::input("vector length does not match constraint count"));
        }
        match &self.gram {
            GramSolver::Diagonal(d) => Ok(v.iter().zip(d).map(|(v, d)| v / d).collect()),
            GramSolver::Cholesky { n, l } => Ok(cholesky_solve(*n, l, v)),
        }
    }
}

/// Dense Cholesky `G = L L^T`; returns `None` if `G` is not positive definite.
fn cholesky(n: usize, g: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 1e-12 * (1.0 + math::abs(g[i * n + i])) {
                    return None;
                }
                l[i * n + i] = math::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn cholesky_solve(n: usize, l: &[f64], v: &[f64]) -> Vec<f64> {
    let mut x = v.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] -= l[i * n + k] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            x[i] -= l[k * n + i] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> Graph {
        Graph::complete(3)
    }

    #[test]
    fn parse_basic() {
        let g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn parse_comments_and_crlf() {
        let g = parse_dimacs("c a comment\r\nc another\r\np edge 3 2\r\ne 1 2\r\ne 2 3\r\n").unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn parse_collapses_reversed_duplicates() {
        let g = parse_dimacs("p edge 2 2\ne 1 2\ne 2 1\n").unwrap();
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_dimacs("e 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p edge 2 1\np edge 2 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p edge 2 1\ne 1 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p edge 2 1\ne 1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p edge 2 1\ne 1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_dimacs("c only comments\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn complement_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let n = rng.gen_range(1..=12);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            assert_eq!(g.complement().complement(), g);
        }
        assert_eq!(Graph::empty(4).complement(), Graph::complete(4));
        assert_eq!(Graph::complete(4).complement(), Graph::empty(4));
    }

    #[test]
    fn theta_plus_shape() {
        let p = DnnProblem::theta_plus(&triangle());
        assert_eq!(p.dim(), 3);
        assert_eq!(p.num_constraints(), 4);
        assert_eq!(p.rhs(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.cost().get(0, 2), -1.0);
    }

    #[test]
    fn apply_a_theta_plus_identity_third() {
        let p = DnnProblem::theta_plus(&triangle());
        let x = SymMatrix::identity(3).map(|v| v / 3.0);
        let ax = p.apply_a(&x).unwrap();
        assert!((ax[0] - 1.0).abs() < 1e-15);
        for v in &ax[1..] {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn apply_a_trace_constraint() {
        let c = SymMatrix::zeros(2);
        let a1 = ConstraintMatrix::new(2, [(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
        let p = DnnProblem::new(c, vec![a1], vec![3.0]).unwrap();
        let x = SymMatrix::from_fn(2, |i, j| if i == j { [1.0, 2.0][i] } else { 0.0 });
        assert!((p.apply_a(&x).unwrap()[0] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn apply_a_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 5;
        let a = ConstraintMatrix::new(
            n,
            (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, rng.gen_range(-1.0..1.0)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let x = SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        // Naive double loop over the full matrices.
        let mut want = 0.0;
        for i in 0..n {
            for j in 0..n {
                let av = a
                    .entries()
                    .iter()
                    .find(|&&(p, q, _)| (p, q) == (i.min(j), i.max(j)))
                    .map(|&(_, _, v)| v)
                    .unwrap_or(0.0);
                want += av * x.get(i, j);
            }
        }
        assert!((a.inner(&x) - want).abs() < 1e-12);
    }

    #[test]
    fn apply_at_basics() {
        let p = DnnProblem::theta_plus(&triangle());
        let mut y = vec![0.0; 4];
        y[0] = 1.0;
        let at = p.apply_at(&y).unwrap();
        assert!((at.clone() - &SymMatrix::identity(3)).norm() < 1e-15);
        let zero = p.apply_at(&[0.0; 4]).unwrap();
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn adjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 4), (0, 3)]).unwrap();
        let p = DnnProblem::theta_plus(&g);
        for _ in 0..20 {
            let x = SymMatrix::from_fn(5, |_, _| rng.gen_range(-1.0..1.0));
            let y: Vec<f64> = (0..p.num_constraints()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lhs: f64 = p.apply_a(&x).unwrap().iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs = p.apply_at(&y).unwrap().inner(&x);
            let scale = 1.0 + x.norm() + y.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn gram_solve_theta_plus_diagonal() {
        let g = Graph::new(4, [(0, 1), (2, 3), (1, 2)]).unwrap();
        let p = DnnProblem::theta_plus(&g);
        let v = [4.0, 0.5, 0.5, 0.5];
        let u = p.solve_gram(&v).unwrap();
        for x in &u {
            assert!((x - 1.0).abs() < 1e-15);
        }
        assert_eq!(p.solve_gram(&[0.0; 4]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn gram_solve_generic_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 4;
        let mut constraints = Vec::new();
        // Random independent constraints: diagonal plus noise.
        for k in 0..3 {
            let mut entries = vec![(k, k, 1.0 + rng.gen_range(0.0..1.0))];
            entries.push((0, n - 1, rng.gen_range(-0.5..0.5)));
            constraints.push(ConstraintMatrix::new(n, entries).unwrap());
        }
        let p = DnnProblem::new(SymMatrix::zeros(n), constraints.clone(), vec![1.0, 2.0, 3.0]).unwrap();
        let v = vec![0.3, -1.2, 0.7];
        let u = p.solve_gram(&v).unwrap();
        // Multiply back through the Gram matrix.
        for i in 0..3 {
            let mut got = 0.0;
            for j in 0..3 {
                got += constraints[i].gram(&constraints[j]) * u[j];
            }
            let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((got - v[i]).abs() <= 1e-10 * (1.0 + vnorm));
        }
    }

    #[test]
    fn dependent_constraints_rejected() {
        let a1 = ConstraintMatrix::new(2, [(0, 0, 1.0)]).unwrap();
        let a2 = ConstraintMatrix::new(2, [(0, 0, 2.0)]).unwrap();
        let err = DnnProblem::new(SymMatrix::zeros(2), vec![a1, a2], vec![1.0, 2.0]);
        assert!(matches!(err, Err(Error::SingularConstraints)));
    }

    #[test]
    fn theta_plus_edge_components_pick_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Graph::new(6, [(0, 2), (1, 5), (3, 4)]).unwrap();
        let p = DnnProblem::theta_plus(&g);
        let x = SymMatrix::from_fn(6, |_, _| rng.gen_range(-1.0..1.0));
        let ax = p.apply_a(&x).unwrap();
        assert!((ax[0] - x.trace()).abs() < 1e-12);
        for (k, &(i, j)) in g.edges().iter().enumerate() {
            assert!((ax[1 + k] - x.get(i, j)).abs() < 1e-12);
        }
    }
}
