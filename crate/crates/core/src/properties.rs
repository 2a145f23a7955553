//! Fixed registry of graph properties for property counting. Library callers
//! can pass arbitrary predicates; the registry is what the CLI exposes.

use crate::approx::IsBehaviour;
use crate::graph::Graph;

#[derive(Clone, Copy)]
pub struct Property {
    pub name: &'static str,
    pub test: fn(&Graph) -> bool,
    /// Behaviour on independent sets, when one is known; properties without
    /// one cannot be sampled by the Monte Carlo counter.
    pub is_behaviour: Option<IsBehaviour>,
}

fn is_connected(g: &Graph) -> bool {
    g.is_connected()
}

fn is_independent_set(g: &Graph) -> bool {
    g.edge_count() == 0
}

fn is_acyclic(g: &Graph) -> bool {
    // A forest has n - c edges.
    g.edge_count() + g.components().len() == g.vertex_count()
}

fn is_claw_free(g: &Graph) -> bool {
    let n = g.vertex_count();
    for centre in 0..n {
        let nbrs = g.neighbors(centre);
        let m = nbrs.len();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let (x, y, z) = (nbrs[a], nbrs[b], nbrs[c]);
                    if !g.has_edge(x, y) && !g.has_edge(x, z) && !g.has_edge(y, z) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Minor test by exhaustive block assignment; fine at property-pattern scale.
pub fn has_minor(g: &Graph, minor: &Graph) -> bool {
    let n = g.vertex_count();
    let m = minor.vertex_count();
    if m > n || minor.edge_count() > g.edge_count() {
        return false;
    }
    // Assignment: each G-vertex to one of the m blocks or unused (value m).
    let mut assignment = vec![0usize; n];
    fn check(g: &Graph, minor: &Graph, assignment: &[usize]) -> bool {
        let m = minor.vertex_count();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (v, &b) in assignment.iter().enumerate() {
            if b < m {
                blocks[b].push(v);
            }
        }
        if blocks.iter().any(|b| b.is_empty()) {
            return false;
        }
        if blocks.iter().any(|b| !g.is_connected_set(b)) {
            return false;
        }
        minor.edges().iter().all(|&(u, v)| {
            blocks[u].iter().any(|&a| blocks[v].iter().any(|&b| g.has_edge(a, b)))
        })
    }
    fn go(g: &Graph, minor: &Graph, i: usize, assignment: &mut Vec<usize>) -> bool {
        if i == assignment.len() {
            return check(g, minor, assignment);
        }
        for b in 0..=minor.vertex_count() {
            assignment[i] = b;
            if go(g, minor, i + 1, assignment) {
                return true;
            }
        }
        false
    }
    go(g, minor, 0, &mut assignment)
}

fn is_planar_small(g: &Graph) -> bool {
    // Forbidden-minor planarity at property-pattern scale (the exhaustive
    // minor search is exponential, so this is only for small k).
    if g.vertex_count() <= 4 {
        return true;
    }
    if g.vertex_count() >= 3 && g.edge_count() > 3 * g.vertex_count() - 6 {
        return false;
    }
    let k5 = crate::graph::clique(5).expect("k5");
    let k33 = crate::graph::biclique(3, 3).expect("k33");
    !has_minor(g, &k5) && !has_minor(g, &k33)
}

fn always(_: &Graph) -> bool {
    true
}

fn never(_: &Graph) -> bool {
    false
}

pub const PROPERTIES: &[Property] = &[
    Property { name: "connected", test: is_connected, is_behaviour: None },
    Property {
        name: "independent-set",
        test: is_independent_set,
        is_behaviour: Some(IsBehaviour::TrueFrom(1)),
    },
    Property { name: "acyclic", test: is_acyclic, is_behaviour: Some(IsBehaviour::TrueFrom(1)) },
    Property { name: "claw-free", test: is_claw_free, is_behaviour: Some(IsBehaviour::TrueFrom(1)) },
    Property { name: "planar", test: is_planar_small, is_behaviour: Some(IsBehaviour::TrueFrom(1)) },
    Property { name: "true", test: always, is_behaviour: Some(IsBehaviour::TrueFrom(1)) },
    Property {
        name: "false",
        test: never,
        is_behaviour: Some(IsBehaviour::FalseFromMinorClosed(1)),
    },
];

pub fn property_by_name(name: &str) -> Option<&'static Property> {
    PROPERTIES.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{biclique, clique, cycle, independent_set, path, subdivide};

    #[test]
    fn claw_free_examples() {
        assert!(is_claw_free(&clique(5).unwrap()));
        assert!(is_claw_free(&cycle(6).unwrap()));
        assert!(!is_claw_free(&biclique(1, 3).unwrap()));
        assert!(is_claw_free(&independent_set(4).unwrap()));
    }

    #[test]
    fn acyclic_examples() {
        assert!(is_acyclic(&path(5).unwrap()));
        assert!(is_acyclic(&independent_set(3).unwrap()));
        assert!(!is_acyclic(&cycle(4).unwrap()));
    }

    #[test]
    fn planarity_examples() {
        assert!(is_planar_small(&clique(4).unwrap()));
        assert!(!is_planar_small(&clique(5).unwrap()));
        assert!(!is_planar_small(&biclique(3, 3).unwrap()));
        assert!(is_planar_small(&cycle(6).unwrap()));
        assert!(is_planar_small(&crate::graph::wreath(&[1, 1, 2, 1]).unwrap()));
    }

    #[test]
    fn minor_examples() {
        assert!(has_minor(&clique(5).unwrap(), &clique(4).unwrap()));
        assert!(has_minor(&cycle(6).unwrap(), &cycle(3).unwrap()));
        assert!(!has_minor(&path(6).unwrap(), &cycle(3).unwrap()));
        // A subdivision contracts back onto the original.
        assert!(has_minor(&subdivide(&cycle(3).unwrap(), 1), &cycle(3).unwrap()));
    }

    #[test]
    fn registry_lookup() {
        assert!(property_by_name("connected").is_some());
        assert!(property_by_name("nope").is_none());
    }
}
