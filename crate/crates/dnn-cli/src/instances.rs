//! Generators for a handful of classic DIMACS clique instances.
//!
//! The graphs below reproduce the benchmark files exactly (clique
//! convention: the stable-set instance is the complement).  Having them as
//! generators keeps the test suite self-contained without shipping the
//! original files.

use dnn_core::problem::Graph;

/// Johnson graph on the k-subsets of an n-set: vertices are subsets,
/// adjacent when the symmetric difference has at least `d` elements.
pub fn johnson(n: usize, k: usize, d: usize) -> Graph {
    let mut subsets: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect();
    subsets.sort_unstable();
    let mut edges = Vec::new();
    for a in 0..subsets.len() {
        for b in a + 1..subsets.len() {
            if (subsets[a] ^ subsets[b]).count_ones() as usize >= d {
                edges.push((a, b));
            }
        }
    }
    Graph::new(subsets.len(), edges).expect("generator produces simple edges")
}

/// Hamming graph on binary words of the given length: adjacent when the
/// Hamming distance is at least `d`.
pub fn hamming(bits: usize, d: usize) -> Graph {
    let n = 1usize << bits;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if (a ^ b).count_ones() as usize >= d {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).expect("generator produces simple edges")
}

/// MANN_a9: the clique instance derived from the Steiner triple system on
/// nine points (the affine plane of order three, unique up to
/// isomorphism).  Vertices are the 36 (triple, point) incidences plus the
/// nine points; the *complement* has a triangle per triple and an edge
/// between each point and its incidences, 72 edges in total.
pub fn mann_a9() -> Graph {
    // Lines of AG(2, 3): twelve triples over points (x, y) in Z3 x Z3,
    // indexed p = 3x + y.
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for dir in 0..4usize {
        for off in 0..3usize {
            let mut t = [0usize; 3];
            for (s, slot) in t.iter_mut().enumerate() {
                let (x, y) = match dir {
                    0 => (s, off),                 // vertical lines
                    1 => (off, s),                 // horizontal lines
                    2 => (s, (off + s) % 3),       // slope 1
                    _ => (s, (off + 2 * s) % 3),   // slope 2
                };
                *slot = 3 * x + y;
            }
            triples.push(t);
        }
    }
    debug_assert_eq!(triples.len(), 12);

    // Vertex layout: 3 incidences per triple first, then the 9 points.
    let n = 36 + 9;
    let incidence = |t: usize, s: usize| 3 * t + s;
    let point = |p: usize| 36 + p;

    let mut co_edges = Vec::new();
    for (t, triple) in triples.iter().enumerate() {
        for s in 0..3 {
            for u in s + 1..3 {
                co_edges.push((incidence(t, s), incidence(t, u)));
            }
        }
        for (s, &p) in triple.iter().enumerate() {
            co_edges.push((incidence(t, s), point(p)));
        }
    }
    let co = Graph::new(n, co_edges).expect("incidence edges are simple");
    co.complement()
}

/// One named golden instance with its known stable-set data.
pub struct GoldenInstance {
    pub name: &'static str,
    pub graph: Graph,
    /// Stability number of the complement (the stable-set instance).
    pub alpha: usize,
    /// Known theta-plus value of the complement, rounded as reported.
    pub theta_plus: f64,
}

/// The six desk-scale benchmark instances.
pub fn golden_set() -> Vec<GoldenInstance> {
    vec![
        GoldenInstance {
            name: "johnson8_2_4",
            graph: johnson(8, 2, 4),
            alpha: 4,
            theta_plus: 4.000,
        },
        GoldenInstance {
            name: "MANN_a9",
            graph: mann_a9(),
            alpha: 16,
            theta_plus: 17.475,
        },
        GoldenInstance {
            name: "hamming6_2",
            graph: hamming(6, 2),
            alpha: 32,
            theta_plus: 32.000,
        },
        GoldenInstance {
            name: "hamming6_4",
            graph: hamming(6, 4),
            alpha: 4,
            theta_plus: 4.000,
        },
        GoldenInstance {
            name: "johnson8_4_4",
            graph: johnson(8, 4, 4),
            alpha: 14,
            theta_plus: 14.000,
        },
        GoldenInstance {
            name: "johnson16_2_4",
            graph: johnson(16, 2, 4),
            alpha: 8,
            theta_plus: 8.000,
        },
    ]
}

/// Serializes a graph in DIMACS `.clq` format (1-based vertices).
pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p edge {} {}\n", g.num_vertices(), g.num_edges()));
    for &(i, j) in g.edges() {
        out.push_str(&format!("e {} {}\n", i + 1, j + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use dnn_core::problem::parse_dimacs;

    #[test]
    fn golden_sizes_match_the_benchmark_data() {
        // (n, edges of the complement) as published for the stable-set
        // instances.
        let expected = [
            ("johnson8_2_4", 28, 168),
            ("MANN_a9", 45, 72),
            ("hamming6_2", 64, 192),
            ("hamming6_4", 64, 1312),
            ("johnson8_4_4", 70, 560),
            ("johnson16_2_4", 120, 1680),
        ];
        let set = golden_set();
        assert_eq!(set.len(), expected.len());
        for (inst, (name, n, m)) in set.iter().zip(expected) {
            assert_eq!(inst.name, name);
            assert_eq!(inst.graph.num_vertices(), n, "{name}");
            assert_eq!(inst.graph.complement().num_edges(), m, "{name}");
        }
    }

    #[test]
    fn small_alphas_match_brute_force() {
        for inst in golden_set() {
            if inst.graph.num_vertices() <= 30 {
                let alpha = dnn_core::bench::alpha_bruteforce(&inst.graph.complement()).unwrap();
                assert_eq!(alpha, inst.alpha, "{}", inst.name);
            }
        }
    }

    #[test]
    fn mann_a9_complement_structure() {
        let co = mann_a9().complement();
        assert_eq!(co.num_vertices(), 45);
        assert_eq!(co.num_edges(), 72);
        // Every point vertex meets exactly four triples.
        for p in 36..45 {
            let deg = (0..45).filter(|&q| q != p && co.has_edge(p, q)).count();
            assert_eq!(deg, 4, "point {p}");
        }
        // Every incidence vertex: two triangle partners plus its point.
        for v in 0..36 {
            let deg = (0..45).filter(|&q| q != v && co.has_edge(v, q)).count();
            assert_eq!(deg, 3, "incidence {v}");
        }
    }

    #[test]
    fn dimacs_round_trip() {
        let g = johnson(8, 2, 4);
        let text = write_dimacs(&g);
        let back = parse_dimacs(&text).unwrap();
        assert_eq!(back.num_vertices(), g.num_vertices());
        assert_eq!(back.edges(), g.edges());
    }
}
