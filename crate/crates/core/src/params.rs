//! Structural parameters of pattern graphs and the tractability exponents
//! they govern, plus the edge-transitivity test.

use std::fmt;

use crate::canon::canonical_form;
use crate::dtd::TauSolver;
use crate::graph::Graph;

/// Exact induced matching number by branching over compatible edges. A set of
/// edges is an induced matching when the union of their endpoints induces
/// exactly those edges.
pub fn induced_matching_number(h: &Graph) -> usize {
    fn grow(h: &Graph, candidates: &[(usize, usize)], depth: usize, best: &mut usize) {
        *best = (*best).max(depth);
        for (i, &(a, b)) in candidates.iter().enumerate() {
            // Edges usable together with (a, b): disjoint from it and from
            // its neighbourhoods.
            let next: Vec<(usize, usize)> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&(c, d)| {
                    c != a
                        && c != b
                        && d != a
                        && d != b
                        && !h.has_edge(a, c)
                        && !h.has_edge(a, d)
                        && !h.has_edge(b, c)
                        && !h.has_edge(b, d)
                })
                .collect();
            if depth + 1 + next.len() > *best {
                grow(h, &next, depth + 1, best);
            }
        }
    }
    let mut best = 0;
    grow(h, h.edges(), 0, &mut best);
    best
}

/// Exact independence number by branching on a maximum-degree vertex.
pub fn independence_number(h: &Graph) -> usize {
    fn go(h: &Graph, alive: &mut Vec<bool>, taken: usize, best: &mut usize) {
        let pick = (0..h.vertex_count())
            .filter(|&v| alive[v])
            .max_by_key(|&v| h.neighbors(v).iter().filter(|&&w| alive[w]).count());
        let v = match pick {
            None => {
                *best = (*best).max(taken);
                return;
            }
            Some(v) => v,
        };
        let deg = h.neighbors(v).iter().filter(|&&w| alive[w]).count();
        if deg == 0 {
            // Take all isolated-in-the-residual vertices at once.
            let free = alive.iter().filter(|&&a| a).count();
            *best = (*best).max(taken + free);
            return;
        }
        let alive_count = alive.iter().filter(|&&a| a).count();
        if taken + alive_count <= *best {
            return;
        }
        // Branch: take v (drop N[v]) or drop v.
        let mut removed = vec![v];
        alive[v] = false;
        for &w in h.neighbors(v) {
            if alive[w] {
                alive[w] = false;
                removed.push(w);
            }
        }
        go(h, alive, taken + 1, best);
        for &w in &removed {
            alive[w] = true;
        }
        alive[v] = false;
        go(h, alive, taken, best);
        alive[v] = true;
    }
    let mut alive = vec![true; h.vertex_count()];
    let mut best = 0;
    go(h, &mut alive, 0, &mut best);
    best
}

pub fn vertex_cover_number(h: &Graph) -> usize {
    h.vertex_count() - independence_number(h)
}

/// Edge-transitivity via the deletion criterion: H is edge-transitive iff
/// H minus e and H minus e' are isomorphic for every pair of edges.
pub fn is_edge_transitive(h: &Graph) -> bool {
    let mut first = None;
    for &(u, v) in h.edges() {
        let label = canonical_form(&h.without_edge(u, v)).expect("pattern-sized graph");
        match first {
            None => first = Some(label),
            Some(l) if l != label => return false,
            _ => {}
        }
    }
    true
}

/// Whether a parameter of a pattern family is declared bounded. Verdicts at
/// the class level need such a declaration; a single graph never witnesses
/// unboundedness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundedness {
    Bounded,
    Unbounded,
}

/// Declared parameter bounds for a pattern family.
#[derive(Clone, Copy, Debug)]
pub struct FamilyBounds {
    pub induced_matching_number: Boundedness,
    pub independence_number: Boundedness,
    pub dag_treewidth: Boundedness,
    pub induced_grid_minors: Boundedness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Fpt,
    HardW1,
    /// The theory gives no matching upper or lower bound for this side.
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Fpt => write!(f, "FPT"),
            Verdict::HardW1 => write!(f, "#W[1]-hard"),
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

/// Parameter report for a single pattern: the raw invariants and the
/// exponents governing exact and approximate counting in degenerate hosts.
#[derive(Clone, Debug)]
pub struct ParamReport {
    pub vertices: usize,
    pub edges: usize,
    pub induced_matching_number: usize,
    pub independence_number: usize,
    pub vertex_cover_number: usize,
    /// None when the pattern exceeds the exhaustive-search bound.
    pub tau1: Option<usize>,
    pub tau2: Option<usize>,
    pub tau3: Option<usize>,
    pub edge_transitive: bool,
    /// Exponent of |V(G)| for exact subgraph counting.
    pub sub_exponent: usize,
    /// Exponent for exact induced-subgraph counting.
    pub indsub_exponent: usize,
    /// Exponent for approximate subgraph counting (when tau1 is known).
    pub approx_sub_exponent: Option<usize>,
    /// Exponent for approximate induced-subgraph counting.
    pub approx_indsub_exponent: usize,
}

impl ParamReport {
    /// Structured key: value lines for CLI consumption.
    pub fn render(&self) -> String {
        let opt = |o: Option<usize>| o.map_or("exceeds bound".to_string(), |v| v.to_string());
        let mut s = String::new();
        s.push_str(&format!("vertices: {}\n", self.vertices));
        s.push_str(&format!("edges: {}\n", self.edges));
        s.push_str(&format!("imn: {}\n", self.induced_matching_number));
        s.push_str(&format!("alpha: {}\n", self.independence_number));
        s.push_str(&format!("vc: {}\n", self.vertex_cover_number));
        s.push_str(&format!("tau1: {}\n", opt(self.tau1)));
        s.push_str(&format!("tau2: {}\n", opt(self.tau2)));
        s.push_str(&format!("tau3: {}\n", opt(self.tau3)));
        s.push_str(&format!("edge_transitive: {}\n", self.edge_transitive));
        s.push_str(&format!("exact_sub_exponent: {}\n", self.sub_exponent));
        s.push_str(&format!("exact_indsub_exponent: {}\n", self.indsub_exponent));
        s.push_str(&format!(
            "approx_sub_exponent: {}\n",
            self.approx_sub_exponent.map_or("exceeds bound".to_string(), |v| v.to_string())
        ));
        s.push_str(&format!("approx_indsub_exponent: {}\n", self.approx_indsub_exponent));
        s
    }
}

/// Computes the per-pattern report. Tau parameters are attempted up to the
/// exhaustive-search bound and reported as "exceeds bound" past it; tau3 is
/// additionally skipped when the supergraph enumeration would be too large.
pub fn classify(h: &Graph) -> ParamReport {
    let imn = induced_matching_number(h);
    let alpha = independence_number(h);
    let mut solver = TauSolver::new();
    let tau1 = solver.tau1(h).ok();
    let tau2 = if h.vertex_count() <= 7 { solver.tau2(h).ok() } else { None };
    let tau3 = if h.vertex_count() <= 5 && h.non_edges().len() <= 10 {
        solver.tau3(h).ok()
    } else {
        None
    };
    ParamReport {
        vertices: h.vertex_count(),
        edges: h.edge_count(),
        induced_matching_number: imn,
        independence_number: alpha,
        vertex_cover_number: vertex_cover_number(h),
        tau1,
        tau2,
        tau3,
        edge_transitive: is_edge_transitive(h),
        sub_exponent: imn.max(1),
        indsub_exponent: alpha,
        approx_sub_exponent: tau1,
        approx_indsub_exponent: imn + 1,
    }
}

/// Class-level verdicts per declared family bounds.
#[derive(Clone, Debug)]
pub struct FamilyVerdicts {
    pub exact_sub: Verdict,
    pub exact_indsub: Verdict,
    pub exact_hom: Verdict,
    pub approx_sub: Verdict,
    pub approx_indsub: Verdict,
}

pub fn classify_family(bounds: &FamilyBounds) -> FamilyVerdicts {
    use Boundedness::*;
    FamilyVerdicts {
        exact_sub: match bounds.induced_matching_number {
            Bounded => Verdict::Fpt,
            Unbounded => Verdict::HardW1,
        },
        exact_indsub: match bounds.independence_number {
            Bounded => Verdict::Fpt,
            Unbounded => Verdict::HardW1,
        },
        // Homomorphisms: tractable under bounded dag treewidth; hard under
        // unbounded induced grid minors; no full dichotomy is known.
        exact_hom: match (bounds.dag_treewidth, bounds.induced_grid_minors) {
            (Bounded, _) => Verdict::Fpt,
            (_, Unbounded) => Verdict::HardW1,
            _ => Verdict::Unknown,
        },
        approx_sub: match bounds.dag_treewidth {
            Bounded => Verdict::Fpt,
            Unbounded => Verdict::Unknown,
        },
        approx_indsub: match bounds.induced_matching_number {
            Bounded => Verdict::Fpt,
            Unbounded => Verdict::Unknown,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{biclique, clique, cycle, independent_set, matching, path, subdivide};

    #[test]
    fn imn_examples() {
        assert_eq!(induced_matching_number(&clique(5).unwrap()), 1);
        assert_eq!(induced_matching_number(&biclique(3, 3).unwrap()), 1);
        assert_eq!(induced_matching_number(&matching(4).unwrap()), 4);
        assert_eq!(induced_matching_number(&cycle(6).unwrap()), 2);
        assert_eq!(induced_matching_number(&independent_set(3).unwrap()), 0);
        assert_eq!(induced_matching_number(&path(4).unwrap()), 1);
        assert_eq!(induced_matching_number(&cycle(7).unwrap()), 2);
    }

    #[test]
    fn imn_matches_brute_force_on_small_graphs() {
        for g in crate::canon::all_graph_classes_up_to(5) {
            let m = g.edge_count();
            let mut best = 0;
            for mask in 0u32..(1 << m) {
                let chosen: Vec<(usize, usize)> =
                    (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| g.edges()[i]).collect();
                let mut verts: Vec<usize> = chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
                verts.sort_unstable();
                verts.dedup();
                if verts.len() != 2 * chosen.len() {
                    continue;
                }
                if g.induced(&verts).edge_count() == chosen.len() {
                    best = best.max(chosen.len());
                }
            }
            assert_eq!(induced_matching_number(&g), best, "{g:?}");
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(independence_number(&clique(6).unwrap()), 1);
        assert_eq!(independence_number(&independent_set(6).unwrap()), 6);
        assert_eq!(independence_number(&cycle(5).unwrap()), 2);
        assert_eq!(independence_number(&biclique(2, 5).unwrap()), 5);
    }

    #[test]
    fn gallai_identity_on_small_classes() {
        for g in crate::canon::all_graph_classes_up_to(6) {
            assert_eq!(
                independence_number(&g) + vertex_cover_number(&g),
                g.vertex_count(),
                "{g:?}"
            );
        }
    }

    #[test]
    fn quotients_cannot_increase_imn() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..100 {
            let n = rng.gen_range(2..=6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let parts = crate::dtd::all_partitions(n);
            let rho = &parts[rng.gen_range(0..parts.len())];
            if let Ok(q) = crate::graph::quotient(&g, rho) {
                assert!(induced_matching_number(&q) <= induced_matching_number(&g));
            }
        }
    }

    #[test]
    fn edge_transitivity() {
        assert!(is_edge_transitive(&subdivide(&biclique(2, 2).unwrap(), 1)));
        assert!(is_edge_transitive(&subdivide(&biclique(3, 3).unwrap(), 1)));
        assert!(!is_edge_transitive(&path(4).unwrap()));
        assert!(is_edge_transitive(&clique(2).unwrap()));
        assert!(is_edge_transitive(&path(3).unwrap()));
        assert!(is_edge_transitive(&clique(4).unwrap()));
    }

    #[test]
    fn classify_clique_and_matching() {
        let r = classify(&clique(4).unwrap());
        assert_eq!(r.sub_exponent, 1);
        assert_eq!(r.indsub_exponent, 1);
        assert_eq!(r.tau1, Some(1));
        let r = classify(&matching(3).unwrap());
        assert_eq!(r.sub_exponent, 3);
        let r = classify(&biclique(3, 3).unwrap());
        assert_eq!(r.sub_exponent, 1);
        assert_eq!(r.indsub_exponent, 3);
        assert_eq!(r.approx_indsub_exponent, 2);
    }

    #[test]
    fn family_verdicts() {
        use Boundedness::*;
        let bicliques = FamilyBounds {
            induced_matching_number: Bounded,
            independence_number: Unbounded,
            dag_treewidth: Bounded,
            induced_grid_minors: Bounded,
        };
        let v = classify_family(&bicliques);
        assert_eq!(v.exact_indsub, Verdict::HardW1);
        assert_eq!(v.approx_indsub, Verdict::Fpt);
        let matchings = FamilyBounds {
            induced_matching_number: Unbounded,
            independence_number: Unbounded,
            dag_treewidth: Unbounded,
            induced_grid_minors: Unbounded,
        };
        let v = classify_family(&matchings);
        assert_eq!(v.exact_sub, Verdict::HardW1);
        assert_eq!(v.approx_sub, Verdict::Unknown);
    }
}
