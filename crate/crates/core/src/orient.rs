//! Acyclic orientations of pattern graphs: sources, joints, reachability
//! closures, and the bipartite source-joint skeleton.

use thiserror::Error;

use crate::graph::{DegeneracyOrder, Graph};

/// An acyclic orientation of a simple graph. Arcs run `tail -> head`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedGraph {
    base: Graph,
    out: Vec<Vec<usize>>,
    in_deg: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientError {
    #[error("orientation contains a directed cycle")]
    Cyclic,
    #[error("arc list does not match the edge set of the base graph")]
    ArcMismatch,
}

impl OrientedGraph {
    /// Orientation from explicit arcs; must cover each base edge exactly once
    /// and be acyclic.
    pub fn new(base: Graph, arcs: &[(usize, usize)]) -> Result<Self, OrientError> {
        if arcs.len() != base.edge_count() {
            return Err(OrientError::ArcMismatch);
        }
        let mut seen: Vec<(usize, usize)> = arcs.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen != base.edges() {
            return Err(OrientError::ArcMismatch);
        }
        let n = base.vertex_count();
        let mut out = vec![Vec::new(); n];
        let mut in_deg = vec![0usize; n];
        for &(u, v) in arcs {
            out[u].push(v);
            in_deg[v] += 1;
        }
        for o in &mut out {
            o.sort_unstable();
        }
        let og = OrientedGraph { base, out, in_deg };
        if og.topological_order().is_none() {
            return Err(OrientError::Cyclic);
        }
        Ok(og)
    }

    /// Orients every edge from the earlier to the later vertex of `order`.
    /// Always acyclic.
    pub fn from_order(base: &Graph, order: &DegeneracyOrder) -> Self {
        let arcs: Vec<(usize, usize)> = base
            .edges()
            .iter()
            .map(|&(u, v)| {
                if order.position[u] < order.position[v] {
                    (u, v)
                } else {
                    (v, u)
                }
            })
            .collect();
        OrientedGraph::new(base.clone(), &arcs).expect("order orientation is acyclic")
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.base.edge_count());
        for u in 0..self.out.len() {
            for &v in &self.out[u] {
                arcs.push((u, v));
            }
        }
        arcs
    }

    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Vertices of in-degree zero.
    pub fn sources(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.in_deg[v] == 0).collect()
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.in_deg[v] == 0
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut indeg = self.in_deg.clone();
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop() {
            order.push(v);
            for &w in &self.out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Bitmask of vertices reachable from `from` (including the set itself).
    pub fn reachable_mask(&self, from: &[usize]) -> u64 {
        debug_assert!(self.vertex_count() <= 64);
        let mut mask = 0u64;
        let mut stack: Vec<usize> = Vec::new();
        for &v in from {
            if mask >> v & 1 == 0 {
                mask |= 1 << v;
                stack.push(v);
            }
        }
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if mask >> w & 1 == 0 {
                    mask |= 1 << w;
                    stack.push(w);
                }
            }
        }
        mask
    }

    /// Vertices of the reachability closure of `from`, sorted.
    pub fn closure(&self, from: &[usize]) -> Vec<usize> {
        let mask = self.reachable_mask(from);
        (0..self.vertex_count()).filter(|&v| mask >> v & 1 == 1).collect()
    }

    /// Joints: vertices reachable from at least two distinct sources.
    pub fn joints(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut hits = vec![0u32; n];
        for s in self.sources() {
            let mask = self.reachable_mask(&[s]);
            for v in 0..n {
                if mask >> v & 1 == 1 {
                    hits[v] += 1;
                }
            }
        }
        (0..n).filter(|&v| hits[v] >= 2).collect()
    }

    /// The induced sub-dag on `keep` (vertices renumbered by position in
    /// `keep`).
    pub fn induced(&self, keep: &[usize]) -> OrientedGraph {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let base = self.base.induced(keep);
        let arcs: Vec<(usize, usize)> = self
            .arcs()
            .into_iter()
            .filter(|&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|(u, v)| (pos[u], pos[v]))
            .collect();
        OrientedGraph::new(base, &arcs).expect("induced sub-dag is acyclic")
    }

    /// Local sources of the induced sub-dag on `set`: vertices of `set` with
    /// no in-arc from inside `set`.
    pub fn local_sources(&self, set: &[usize]) -> Vec<usize> {
        let mut inset = vec![false; self.vertex_count()];
        for &v in set {
            inset[v] = true;
        }
        set.iter()
            .copied()
            .filter(|&v| !set.iter().any(|&u| inset[u] && self.has_arc(u, v)))
            .collect()
    }
}

/// All acyclic orientations of H, each yielded exactly once (orientations are
/// identified by their arc set). Enumerates the 2^|E| direction vectors and
/// filters out the cyclic ones, which is fine at pattern scale.
pub fn orientations(h: &Graph) -> Vec<OrientedGraph> {
    let m = h.edge_count();
    assert!(m <= 30, "orientation enumeration is capped at 30 edges");
    let edges = h.edges().to_vec();
    let mut result = Vec::new();
    for bits in 0u64..(1 << m) {
        let arcs: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| if bits >> i & 1 == 0 { (u, v) } else { (v, u) })
            .collect();
        if let Ok(og) = OrientedGraph::new(h.clone(), &arcs) {
            result.push(og);
        }
    }
    result
}

/// The skeleton of a dag: a bipartite dag from sources to joints with an arc
/// (s, j) iff j is reachable from s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    /// Source vertex ids of the underlying dag, sorted.
    pub sources: Vec<usize>,
    /// Joint vertex ids, sorted.
    pub joints: Vec<usize>,
    /// Arcs (source id, joint id), both in underlying-dag vertex ids.
    pub arcs: Vec<(usize, usize)>,
}

impl Skeleton {
    /// All vertices of the skeleton, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.sources.iter().chain(self.joints.iter()).copied().collect();
        v.sort_unstable();
        v
    }

    /// The skeleton as a dag on its own vertices (renumbered by sorted
    /// position); returns the dag plus the sorted original ids.
    pub fn as_dag(&self) -> (OrientedGraph, Vec<usize>) {
        let verts = self.vertices();
        let pos = |v: usize| verts.binary_search(&v).unwrap();
        let n = verts.len();
        let edges: Vec<(usize, usize)> = self.arcs.iter().map(|&(s, j)| (pos(s), pos(j))).collect();
        let base = Graph::from_edges(n, &edges);
        let arcs: Vec<(usize, usize)> = self.arcs.iter().map(|&(s, j)| (pos(s), pos(j))).collect();
        (OrientedGraph::new(base, &arcs).expect("skeleton is acyclic"), verts)
    }

    /// The undirected version of the skeleton on renumbered vertices.
    pub fn undirected(&self) -> (Graph, Vec<usize>) {
        let (dag, verts) = self.as_dag();
        (dag.base().clone(), verts)
    }
}

/// Computes the skeleton of `og`.
pub fn skeleton(og: &OrientedGraph) -> Skeleton {
    let sources = og.sources();
    let n = og.vertex_count();
    let mut hits = vec![0u32; n];
    let mut reach = Vec::with_capacity(sources.len());
    for &s in &sources {
        let mask = og.reachable_mask(&[s]);
        for v in 0..n {
            if mask >> v & 1 == 1 {
                hits[v] += 1;
            }
        }
        reach.push(mask);
    }
    let joints: Vec<usize> = (0..n).filter(|&v| hits[v] >= 2).collect();
    let mut arcs = Vec::new();
    for (i, &s) in sources.iter().enumerate() {
        for &j in &joints {
            if reach[i] >> j & 1 == 1 {
                arcs.push((s, j));
            }
        }
    }
    Skeleton { sources, joints, arcs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, independent_set, matching, Graph};

    #[test]
    fn orientation_counts() {
        assert_eq!(orientations(&clique(2).unwrap()).len(), 2);
        assert_eq!(orientations(&clique(3).unwrap()).len(), 6);
        assert_eq!(orientations(&independent_set(4).unwrap()).len(), 1);
        // Acyclic orientations of C4: 2^4 - 2 = 14.
        assert_eq!(orientations(&crate::graph::cycle(4).unwrap()).len(), 14);
    }

    #[test]
    fn sources_and_joints() {
        // Two sources both pointing into one sink.
        let g = Graph::new(3, &[(0, 2), (1, 2)]).unwrap();
        let og = OrientedGraph::new(g, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(og.sources(), vec![0, 1]);
        assert_eq!(og.joints(), vec![2]);
        let sk = skeleton(&og);
        assert_eq!(sk.sources, vec![0, 1]);
        assert_eq!(sk.joints, vec![2]);
        assert_eq!(sk.arcs, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn matching_skeleton_has_no_joints() {
        let g = matching(3).unwrap();
        let arcs: Vec<(usize, usize)> = g.edges().to_vec();
        let og = OrientedGraph::new(g.clone(), &arcs).unwrap();
        let sk = skeleton(&og);
        assert!(sk.joints.is_empty());
        assert!(sk.arcs.is_empty());
    }

    #[test]
    fn figure_style_skeleton() {
        // Dag: sources 0-3 on top, row 4..8 below, plus an arc inside the
        // bottom row; joints are the bottom vertices reachable twice.
        let edges = [
            (0, 4),
            (0, 5),
            (1, 5),
            (1, 6),
            (1, 7),
            (2, 6),
            (2, 7),
            (2, 8),
            (3, 8),
            (7, 6),
        ];
        let g = Graph::new(9, &edges).unwrap();
        let og = OrientedGraph::new(g, &edges).unwrap();
        assert_eq!(og.sources(), vec![0, 1, 2, 3]);
        let sk = skeleton(&og);
        assert_eq!(sk.joints, vec![5, 6, 7, 8]);
        let expect = vec![(0, 5), (1, 5), (1, 6), (1, 7), (2, 6), (2, 7), (2, 8), (3, 8)];
        assert_eq!(sk.arcs, expect);
    }

    #[test]
    fn cyclic_orientation_rejected() {
        let g = clique(3).unwrap();
        assert!(matches!(
            OrientedGraph::new(g, &[(0, 1), (1, 2), (2, 0)]),
            Err(OrientError::Cyclic)
        ));
    }

    #[test]
    fn local_sources_of_closure_lie_in_the_root_set() {
        let g = clique(4).unwrap();
        for og in orientations(&g) {
            for v in 0..4 {
                let cl = og.closure(&[v]);
                let ls = og.local_sources(&cl);
                assert_eq!(ls, vec![v]);
            }
        }
    }
}
