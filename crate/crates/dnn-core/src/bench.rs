//! Verification machinery: an exact stability-number oracle for small
//! graphs and Dolan-More performance profiles.

use alloc::vec::Vec;

use crate::problem::Graph;
use crate::{Error, Result};

/// Exact stability number by branch and bound over bitmask candidate
/// sets.  Exponential; guarded at `n <= 30`.
pub fn alpha_bruteforce(g: &Graph) -> Result<usize> {
    let n = g.num_vertices();
    if n > 30 {
        return Err(Error::input(
            "brute-force stability number is limited to 30 vertices",
        ));
    }
    let mut adj = alloc::vec![0u32; n];
    for &(i, j) in g.edges() {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = 0;
    extend_stable(all, &adj, 0, &mut best);
    Ok(best)
}

fn extend_stable(cand: u32, adj: &[u32], size: usize, best: &mut usize) {
    if size + cand.count_ones() as usize <= *best {
        return; // even taking every candidate cannot beat the incumbent
    }
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    let v = cand.trailing_zeros();
    let rest = cand & !(1 << v);
    extend_stable(rest & !adj[v as usize], adj, size + 1, best);
    extend_stable(rest, adj, size, best);
}

/// Step curve of one solver: `(tau, rho(tau))` with `rho` the fraction of
/// problems on which the solver's performance ratio is at most `tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub solver: usize,
    pub points: Vec<(f64, f64)>,
}

/// Performance profiles from a problems-by-solvers matrix of measurements
/// (`None` marks a budget-exceeded run).
///
/// Following the usual convention, rows containing any marker are dropped
/// entirely; with `include_timeouts` the row is kept instead and the
/// marked entries get an infinite ratio (they never enter any curve but do
/// enter the denominator).  Rows where every entry is a marker carry no
/// reference value and are always dropped.
pub fn performance_profiles(
    times: &[Vec<Option<f64>>],
    include_timeouts: bool,
) -> Result<Vec<ProfileCurve>> {
    let num_solvers = match times.first() {
        Some(row) if !row.is_empty() => row.len(),
        _ => return Err(Error::input("need at least one problem and one solver")),
    };
    if times.iter().any(|row| row.len() != num_solvers) {
        return Err(Error::input("ragged measurement matrix"));
    }
    for row in times {
        for t in row.iter().flatten() {
            if !(*t > 0.0 && t.is_finite()) {
                return Err(Error::input("measurements must be positive and finite"));
            }
        }
    }

    // Ratios per retained row.
    let mut ratios: Vec<Vec<f64>> = Vec::new();
    for row in times {
        let has_marker = row.iter().any(|t| t.is_none());
        if has_marker && !include_timeouts {
            continue;
        }
        let Some(best) = row.iter().flatten().copied().reduce(f64::min) else {
            continue; // all entries exceeded the budget
        };
        ratios.push(
            row.iter()
                .map(|t| t.map_or(f64::INFINITY, |t| t / best))
                .collect(),
        );
    }
    if ratios.is_empty() {
        return Err(Error::EmptyProfile);
    }

    let mut breakpoints: Vec<f64> = ratios
        .iter()
        .flatten()
        .copied()
        .filter(|r| r.is_finite())
        .collect();
    breakpoints.push(1.0);
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup();

    let denom = ratios.len() as f64;
    let curves = (0..num_solvers)
        .map(|s| {
            let points = breakpoints
                .iter()
                .map(|&tau| {
                    let hit = ratios.iter().filter(|r| r[s] <= tau).count();
                    (tau, hit as f64 / denom)
                })
                .collect();
            ProfileCurve { solver: s, points }
        })
        .collect();
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn alpha_trivial_graphs() {
        assert_eq!(alpha_bruteforce(&Graph::empty(5)).unwrap(), 5);
        assert_eq!(alpha_bruteforce(&Graph::complete(5)).unwrap(), 1);
        let c5 = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(alpha_bruteforce(&c5).unwrap(), 2);
    }

    #[test]
    fn alpha_guard() {
        assert!(alpha_bruteforce(&Graph::empty(31)).is_err());
        assert_eq!(alpha_bruteforce(&Graph::empty(30)).unwrap(), 30);
    }

    /// Independent oracle: plain enumeration of all 2^n subsets.
    fn alpha_exhaustive(g: &Graph) -> usize {
        let n = g.num_vertices();
        let mut best = 0;
        'subset: for mask in 0u32..(1 << n) {
            for &(i, j) in g.edges() {
                if mask & (1 << i) != 0 && mask & (1 << j) != 0 {
                    continue 'subset;
                }
            }
            best = best.max(mask.count_ones() as usize);
        }
        best
    }

    #[test]
    fn alpha_matches_full_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..60 {
            let n = 1 + rng.gen_range(0..12);
            let density = rng.gen::<f64>();
            let mut edges = vec![];
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen::<f64>() < density {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            assert_eq!(
                alpha_bruteforce(&g).unwrap(),
                alpha_exhaustive(&g),
                "trial {trial}, n = {n}"
            );
        }
    }

    #[test]
    fn single_solver_profile_is_constant_one() {
        let times = vec![vec![Some(3.0)], vec![Some(0.1)]];
        let curves = performance_profiles(&times, false).unwrap();
        assert_eq!(curves.len(), 1);
        assert!(curves[0].points.iter().all(|&(_, rho)| rho == 1.0));
    }

    #[test]
    fn crossed_pair_matches_hand_computation() {
        let times = vec![
            vec![Some(1.0), Some(2.0)],
            vec![Some(2.0), Some(1.0)],
        ];
        let curves = performance_profiles(&times, false).unwrap();
        for c in &curves {
            let rho_at = |tau: f64| {
                c.points
                    .iter()
                    .rev()
                    .find(|&&(t, _)| t <= tau)
                    .map(|&(_, r)| r)
                    .unwrap()
            };
            assert_eq!(rho_at(1.0), 0.5);
            assert_eq!(rho_at(2.0), 1.0);
        }
    }

    #[test]
    fn timeout_rows_are_excluded() {
        let times = vec![
            vec![Some(1.0), Some(2.0)],
            vec![None, Some(1.0)],
            vec![Some(4.0), Some(2.0)],
        ];
        let curves = performance_profiles(&times, false).unwrap();
        // Two rows survive; solver 1 wins one of them.
        let last = *curves[1].points.last().unwrap();
        assert_eq!(last.1, 1.0);
        let first = curves[1].points[0];
        assert_eq!(first, (1.0, 0.5));
    }

    #[test]
    fn include_timeouts_keeps_rows_at_infinite_ratio() {
        let times = vec![vec![Some(1.0), None], vec![Some(2.0), Some(1.0)]];
        let curves = performance_profiles(&times, true).unwrap();
        // Solver 1 never reaches the timed-out problem: rho tops out at 1/2.
        assert_eq!(curves[1].points.last().unwrap().1, 0.5);
        assert_eq!(curves[0].points.last().unwrap().1, 1.0);
    }

    #[test]
    fn all_rows_dropped_is_an_error() {
        let times = vec![vec![None, Some(1.0)]];
        assert!(matches!(
            performance_profiles(&times, false),
            Err(Error::EmptyProfile)
        ));
        // Even with the flag a fully-marked row cannot be kept.
        let times = vec![vec![None, None]];
        assert!(matches!(
            performance_profiles(&times, true),
            Err(Error::EmptyProfile)
        ));
    }

    #[test]
    fn profile_invariants_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let problems = 1 + rng.gen_range(0..8);
            let solvers = 1 + rng.gen_range(0..4);
            let times: Vec<Vec<Option<f64>>> = (0..problems)
                .map(|_| {
                    (0..solvers)
                        .map(|_| {
                            (rng.gen::<f64>() < 0.85).then(|| 0.01 + rng.gen::<f64>())
                        })
                        .collect()
                })
                .collect();
            let Ok(curves) = performance_profiles(&times, rng.gen()) else {
                continue;
            };
            // At tau = 1 some solver attains ratio 1 on every retained row.
            let rho1_max = curves
                .iter()
                .map(|c| c.points[0].1)
                .fold(0.0f64, f64::max);
            assert!(rho1_max > 0.0);
            for c in &curves {
                let mut prev = 0.0;
                for &(tau, rho) in &c.points {
                    assert!(tau >= 1.0);
                    assert!((0.0..=1.0).contains(&rho));
                    assert!(rho >= prev);
                    prev = rho;
                }
            }
        }
    }

    #[test]
    fn rejects_bad_measurements() {
        assert!(performance_profiles(&[], false).is_err());
        assert!(performance_profiles(&[vec![]], false).is_err());
        assert!(performance_profiles(&[vec![Some(1.0)], vec![Some(1.0), Some(2.0)]], false).is_err());
        assert!(performance_profiles(&[vec![Some(0.0)]], false).is_err());
        assert!(performance_profiles(&[vec![Some(-1.0)]], false).is_err());
    }
}
