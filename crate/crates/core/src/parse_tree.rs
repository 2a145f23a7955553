//! Clique-width parse trees (k-expressions): evaluation and the construction
//! of a dag tree decomposition of a skeleton from a parse tree of its
//! undirected version, via active spans, designated sources and label
//! representants. The resulting width is bounded by the number of labels.

use thiserror::Error;

use crate::dtd::{validate_dtd, DagTreeDecomposition, DtdViolation};
use crate::graph::Graph;
use crate::orient::Skeleton;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseOp {
    Create(usize),
    Union,
    Clique(usize, usize),
    Relab(usize, usize),
}

/// A rooted parse tree. Vertices of the evaluated graph are numbered by the
/// order of their CREATE leaves (ascending node id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueParseTree {
    pub parent: Vec<Option<usize>>,
    pub ops: Vec<ParseOp>,
    children: Vec<Vec<usize>>,
    root: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseTreeError {
    #[error("node {0}: operation {1:?} expects {2} children, has {3}")]
    Arity(usize, ParseOp, usize, usize),
    #[error("tree must have exactly one root, found {0}")]
    RootCount(usize),
    #[error("parent links contain a cycle at node {0}")]
    Cycle(usize),
    #[error("node {0}: CLIQUE with equal labels")]
    CliqueSameLabel(usize),
    #[error("parse tree creates no vertices")]
    Empty,
}

impl CliqueParseTree {
    pub fn new(parent: Vec<Option<usize>>, ops: Vec<ParseOp>) -> Result<Self, ParseTreeError> {
        assert_eq!(parent.len(), ops.len());
        let n = ops.len();
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
        if roots.len() != 1 {
            return Err(ParseTreeError::RootCount(roots.len()));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); n];
        for i in 0..n {
            if let Some(p) = parent[i] {
                children[p].push(i);
            }
        }
        // Cycle check: every node must reach the root.
        for mut v in 0..n {
            let mut steps = 0;
            while let Some(p) = parent[v] {
                v = p;
                steps += 1;
                if steps > n {
                    return Err(ParseTreeError::Cycle(v));
                }
            }
        }
        for (i, &op) in ops.iter().enumerate() {
            let want = match op {
                ParseOp::Create(_) => 0,
                ParseOp::Union => 2,
                ParseOp::Clique(a, b) => {
                    if a == b {
                        return Err(ParseTreeError::CliqueSameLabel(i));
                    }
                    1
                }
                ParseOp::Relab(_, _) => 1,
            };
            if children[i].len() != want {
                return Err(ParseTreeError::Arity(i, op, want, children[i].len()));
            }
        }
        if !ops.iter().any(|o| matches!(o, ParseOp::Create(_))) {
            return Err(ParseTreeError::Empty);
        }
        Ok(CliqueParseTree { parent, ops, children, root })
    }

    pub fn node_count(&self) -> usize {
        self.ops.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Number of distinct labels mentioned anywhere in the tree.
    pub fn label_count(&self) -> usize {
        let mut labels: Vec<usize> = self
            .ops
            .iter()
            .flat_map(|op| match *op {
                ParseOp::Create(i) => vec![i],
                ParseOp::Union => vec![],
                ParseOp::Clique(i, j) | ParseOp::Relab(i, j) => vec![i, j],
            })
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels.len()
    }

    fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![(self.root, false)];
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                order.push(x);
            } else {
                stack.push((x, true));
                for &c in &self.children[x] {
                    stack.push((c, false));
                }
            }
        }
        order
    }
}

/// Per-node evaluation state.
#[derive(Clone, Debug)]
pub struct NodeEval {
    /// Vertices of H_x (global vertex ids).
    pub present: Vec<usize>,
    /// labels[v] = label of v at this node (only meaningful for present v).
    pub labels: Vec<usize>,
    /// Edges created by this node's operation (every L(i) x L(j) pair, even
    /// if the edge existed already).
    pub created_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct EvaluatedParseTree {
    pub graph: Graph,
    /// Leaf node that created each vertex.
    pub leaf_of_vertex: Vec<usize>,
    pub nodes: Vec<NodeEval>,
}

/// Evaluates the tree bottom-up per the four operations; per-node graphs are
/// kept for inspection.
pub fn evaluate_parse_tree(t: &CliqueParseTree) -> EvaluatedParseTree {
    let n = t.node_count();
    // Vertex ids by CREATE leaf order.
    let leaves: Vec<usize> =
        (0..n).filter(|&i| matches!(t.ops[i], ParseOp::Create(_))).collect();
    let vertex_count = leaves.len();
    let mut vertex_of_leaf = vec![usize::MAX; n];
    for (v, &leaf) in leaves.iter().enumerate() {
        vertex_of_leaf[leaf] = v;
    }
    let mut nodes: Vec<NodeEval> = (0..n)
        .map(|_| NodeEval { present: Vec::new(), labels: vec![usize::MAX; vertex_count], created_edges: Vec::new() })
        .collect();
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for x in t.postorder() {
        match t.ops[x] {
            ParseOp::Create(i) => {
                let v = vertex_of_leaf[x];
                nodes[x].present = vec![v];
                nodes[x].labels[v] = i;
            }
            ParseOp::Union => {
                let (a, b) = (t.children[x][0], t.children[x][1]);
                let mut present = nodes[a].present.clone();
                present.extend_from_slice(&nodes[b].present);
                present.sort_unstable();
                let mut labels = nodes[a].labels.clone();
                for &v in &nodes[b].present {
                    labels[v] = nodes[b].labels[v];
                }
                nodes[x].present = present;
                nodes[x].labels = labels;
                let mut e = edges[a].clone();
                e.extend_from_slice(&edges[b]);
                edges[x] = e;
            }
            ParseOp::Clique(i, j) => {
                let c = t.children[x][0];
                nodes[x].present = nodes[c].present.clone();
                nodes[x].labels = nodes[c].labels.clone();
                let li: Vec<usize> =
                    nodes[x].present.iter().copied().filter(|&v| nodes[x].labels[v] == i).collect();
                let lj: Vec<usize> =
                    nodes[x].present.iter().copied().filter(|&v| nodes[x].labels[v] == j).collect();
                let mut created = Vec::new();
                for &a in &li {
                    for &b in &lj {
                        created.push((a.min(b), a.max(b)));
                    }
                }
                let mut e = edges[c].clone();
                e.extend_from_slice(&created);
                e.sort_unstable();
                e.dedup();
                edges[x] = e;
                nodes[x].created_edges = created;
            }
            ParseOp::Relab(i, j) => {
                let c = t.children[x][0];
                nodes[x].present = nodes[c].present.clone();
                nodes[x].labels = nodes[c].labels.clone();
                for &v in &nodes[x].present.clone() {
                    if nodes[x].labels[v] == i {
                        nodes[x].labels[v] = j;
                    }
                }
                edges[x] = edges[c].clone();
            }
        }
    }
    let graph = Graph::new(vertex_count, &edges[t.root]).expect("evaluation yields a simple graph");
    EvaluatedParseTree { graph, leaf_of_vertex: leaves, nodes }
}

/// The intermediate notions of the construction, exposed for inspection.
#[derive(Clone, Debug)]
pub struct ParseAnalysis {
    /// Skeleton vertex ids in evaluated-vertex order.
    pub vertex_ids: Vec<usize>,
    /// Leaf where each vertex is created (evaluated-vertex index).
    pub x_on: Vec<usize>,
    /// Node closest to the root creating an edge on the vertex; the creating
    /// leaf itself for isolated vertices.
    pub x_off: Vec<usize>,
    /// active[x] = vertices (evaluated ids) whose span contains node x.
    pub active: Vec<Vec<usize>>,
    /// Designated source per vertex, in skeleton vertex ids.
    pub designated_source: Vec<usize>,
    /// Representants per node (evaluated ids).
    pub representants: Vec<Vec<usize>>,
    /// Bags per node, in skeleton vertex ids.
    pub bags: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseDtdError {
    #[error("parse tree evaluates to a graph on {0} vertices, skeleton has {1}")]
    SizeMismatch(usize, usize),
    #[error("parse tree does not evaluate to the undirected skeleton (edge sets differ)")]
    EdgeMismatch,
    #[error("constructed decomposition failed validation: {0}")]
    ConstructionFailed(DtdViolation),
}

/// Runs the whole construction: active spans, designated sources,
/// representants and bags. The parse tree must evaluate to the undirected
/// skeleton under the correspondence "i-th created vertex = i-th skeleton
/// vertex in ascending id order".
pub fn analyze_clique_parse(sk: &Skeleton, t: &CliqueParseTree) -> Result<ParseAnalysis, ParseDtdError> {
    let eval = evaluate_parse_tree(t);
    let verts = sk.vertices();
    let k = verts.len();
    if eval.graph.vertex_count() != k {
        return Err(ParseDtdError::SizeMismatch(eval.graph.vertex_count(), k));
    }
    let (und, _) = sk.undirected();
    if eval.graph.edges() != und.edges() {
        return Err(ParseDtdError::EdgeMismatch);
    }
    let is_source = |v: usize| sk.sources.binary_search(&verts[v]).is_ok();

    let n = t.node_count();
    let depth = {
        let mut d = vec![0usize; n];
        // Parents precede children in a preorder walk.
        let mut stack = vec![t.root()];
        while let Some(x) = stack.pop() {
            for &c in (0..n).filter(|&i| t.parent[i] == Some(x)).collect::<Vec<_>>().iter() {
                d[c] = d[x] + 1;
                stack.push(c);
            }
        }
        d
    };

    let x_on = eval.leaf_of_vertex.clone();
    let mut x_off = x_on.clone();
    for v in 0..k {
        let mut best: Option<usize> = None;
        for x in 0..n {
            if eval.nodes[x].created_edges.iter().any(|&(a, b)| a == v || b == v) {
                best = match best {
                    None => Some(x),
                    Some(old) if depth[x] < depth[old] => Some(x),
                    keep => keep,
                };
            }
        }
        if let Some(x) = best {
            x_off[v] = x;
        }
    }

    // Active spans: walk from x_on(v) up to x_off(v).
    let mut active: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..k {
        let mut x = x_on[v];
        loop {
            active[x].push(v);
            if x == x_off[v] {
                break;
            }
            x = t.parent[x].expect("x_off is an ancestor of x_on");
        }
    }

    // Designated sources.
    let mut designated = vec![usize::MAX; k];
    for v in 0..k {
        if is_source(v) {
            designated[v] = verts[v];
        } else {
            let partners: Vec<usize> = eval.nodes[x_off[v]]
                .created_edges
                .iter()
                .filter_map(|&(a, b)| {
                    if a == v {
                        Some(b)
                    } else if b == v {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect();
            let s = partners
                .into_iter()
                .filter(|&u| is_source(u))
                .map(|u| verts[u])
                .min()
                .expect("a joint's off-edges attach to sources");
            designated[v] = s;
        }
    }

    // Representants: min active vertex per label class, per node.
    let mut representants: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let mut by_label: std::collections::BTreeMap<usize, usize> = Default::default();
        for &v in &active[x] {
            let lbl = eval.nodes[x].labels[v];
            by_label
                .entry(lbl)
                .and_modify(|cur| {
                    if v < *cur {
                        *cur = v;
                    }
                })
                .or_insert(v);
        }
        representants[x] = by_label.values().copied().collect();
        let mut bag: Vec<usize> = representants[x].iter().map(|&v| designated[v]).collect();
        bag.sort_unstable();
        bag.dedup();
        bags[x] = bag;
    }

    Ok(ParseAnalysis {
        vertex_ids: verts,
        x_on,
        x_off,
        active,
        designated_source: designated,
        representants,
        bags,
    })
}

/// Builds the decomposition and validates it against the skeleton dag. Bags
/// are in skeleton vertex ids; width is at most the parse tree's label count.
pub fn dtd_from_clique_parse(
    sk: &Skeleton,
    t: &CliqueParseTree,
) -> Result<DagTreeDecomposition, ParseDtdError> {
    let analysis = analyze_clique_parse(sk, t)?;
    // Re-root the parse tree shape at node 0 of the decomposition.
    let n = t.node_count();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut stack = vec![t.root()];
    let children: Vec<Vec<usize>> = {
        let mut ch = vec![Vec::new(); n];
        for i in 0..n {
            if let Some(p) = t.parent[i] {
                ch[p].push(i);
            }
        }
        ch
    };
    while let Some(x) = stack.pop() {
        order.push(x);
        for &c in &children[x] {
            stack.push(c);
        }
    }
    let mut position = vec![0usize; n];
    for (i, &x) in order.iter().enumerate() {
        position[x] = i;
    }
    let parent: Vec<usize> =
        order.iter().map(|&x| t.parent[x].map_or(0, |p| position[p])).collect();
    let bags: Vec<Vec<usize>> = order.iter().map(|&x| analysis.bags[x].clone()).collect();
    let dtd = DagTreeDecomposition::new(parent, bags);

    // Validate on the skeleton as a dag (renumbered ids).
    let (dag, verts) = sk.as_dag();
    let renumbered = DagTreeDecomposition::new(
        dtd.parent.clone(),
        dtd.bags
            .iter()
            .map(|b| b.iter().map(|&v| verts.binary_search(&v).expect("bag vertex in skeleton")).collect())
            .collect(),
    );
    validate_dtd(&dag, &renumbered).map_err(ParseDtdError::ConstructionFailed)?;
    Ok(dtd)
}

/// The n-label parse tree of an arbitrary graph: create every vertex with its
/// own label, chain unions, then one CLIQUE per edge.
pub fn trivial_parse_tree(g: &Graph) -> CliqueParseTree {
    let n = g.vertex_count();
    assert!(n >= 1);
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut ops: Vec<ParseOp> = Vec::new();
    // Leaves first so that vertex ids equal graph ids.
    for v in 0..n {
        parent.push(None);
        ops.push(ParseOp::Create(v));
    }
    let mut top = 0usize;
    for v in 1..n {
        let u = ops.len();
        parent.push(None);
        ops.push(ParseOp::Union);
        parent[top] = Some(u);
        parent[v] = Some(u);
        top = u;
    }
    for &(a, b) in g.edges() {
        let c = ops.len();
        parent.push(None);
        ops.push(ParseOp::Clique(a, b));
        parent[top] = Some(c);
        top = c;
    }
    CliqueParseTree::new(parent, ops).expect("trivial tree is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtd::dag_treewidth;
    use crate::graph::{path, Graph};
    use crate::orient::{skeleton, OrientedGraph};

    #[test]
    fn single_create() {
        let t = CliqueParseTree::new(vec![None], vec![ParseOp::Create(0)]).unwrap();
        let e = evaluate_parse_tree(&t);
        assert_eq!(e.graph.vertex_count(), 1);
        assert_eq!(e.graph.edge_count(), 0);
    }

    #[test]
    fn create_union_clique_gives_k2() {
        let t = CliqueParseTree::new(
            vec![Some(2), Some(2), Some(3), None],
            vec![ParseOp::Create(0), ParseOp::Create(1), ParseOp::Union, ParseOp::Clique(0, 1)],
        )
        .unwrap();
        let e = evaluate_parse_tree(&t);
        assert_eq!(e.graph.vertex_count(), 2);
        assert_eq!(e.graph.edges(), &[(0, 1)]);
    }

    #[test]
    fn standard_path_expression_for_p4() {
        // Paths on four or more vertices are the minimal graphs of
        // clique-width 3; the standard expression grows the path one vertex
        // at a time with labels fresh / frontier / settled.
        let t = path_parse_tree(4);
        let e = evaluate_parse_tree(&t);
        assert!(crate::canon::are_isomorphic(&e.graph, &path(4).unwrap()).unwrap());
        assert_eq!(t.label_count(), 3);
    }

    /// The classical 3-label expression for P_n: create the next vertex with
    /// the fresh label, union, connect it to the frontier, settle the old
    /// frontier, promote the fresh vertex.
    fn path_parse_tree(n: usize) -> CliqueParseTree {
        let mut parent: Vec<Option<usize>> = vec![None];
        let mut ops = vec![ParseOp::Create(1)];
        let mut top = 0usize;
        for _ in 1..n {
            let c = ops.len();
            parent.push(None);
            ops.push(ParseOp::Create(0));
            let u = ops.len();
            parent.push(None);
            ops.push(ParseOp::Union);
            parent[top] = Some(u);
            parent[c] = Some(u);
            let e = ops.len();
            parent.push(None);
            ops.push(ParseOp::Clique(1, 0));
            parent[u] = Some(e);
            let r1 = ops.len();
            parent.push(None);
            ops.push(ParseOp::Relab(1, 2));
            parent[e] = Some(r1);
            let r2 = ops.len();
            parent.push(None);
            ops.push(ParseOp::Relab(0, 1));
            parent[r1] = Some(r2);
            top = r2;
        }
        CliqueParseTree::new(parent, ops).unwrap()
    }

    #[test]
    fn path_tree_uses_three_labels() {
        let t = path_parse_tree(5);
        let e = evaluate_parse_tree(&t);
        assert!(crate::canon::are_isomorphic(&e.graph, &path(5).unwrap()).unwrap());
        assert_eq!(t.label_count(), 3);
    }

    #[test]
    fn trivial_tree_reproduces_graph() {
        let g = crate::graph::cycle(5).unwrap();
        let t = trivial_parse_tree(&g);
        let e = evaluate_parse_tree(&t);
        assert_eq!(e.graph.edges(), g.edges());
    }

    #[test]
    fn matching_skeleton_any_tree_width_bounded() {
        // Skeleton with no joints: bags stay within label count and the
        // decomposition validates (vacuous path condition).
        let g = crate::graph::matching(3).unwrap();
        let arcs: Vec<(usize, usize)> = g.edges().to_vec();
        let og = OrientedGraph::new(g, &arcs).unwrap();
        let sk = skeleton(&og);
        let (und, _) = sk.undirected();
        let t = trivial_parse_tree(&und);
        let dtd = dtd_from_clique_parse(&sk, &t).unwrap();
        assert!(dtd.width() <= t.label_count());
    }

    #[test]
    fn c4_skeleton_two_label_tree() {
        // Alternating C4: sources {0, 2}, joints {1, 3}; skeleton is the
        // complete bipartite K22 on {0,2} x {1,3}, undirected C4.
        let g = crate::graph::cycle(4).unwrap();
        let og = OrientedGraph::new(g, &[(0, 1), (2, 1), (2, 3), (0, 3)]).unwrap();
        let sk = skeleton(&og);
        assert_eq!(sk.sources, vec![0, 2]);
        assert_eq!(sk.joints, vec![1, 3]);
        // Evaluated vertex ids 0..4 map to skeleton vertices 0,1,2,3.
        // Build K_{2,2} with 2 labels: sources get label 0, joints label 1,
        // then a single CLIQUE(0, 1).
        let t = CliqueParseTree::new(
            vec![Some(4), Some(4), Some(5), Some(6), Some(5), Some(6), Some(7), None],
            vec![
                ParseOp::Create(0), // vertex 0 (source 0)
                ParseOp::Create(1), // vertex 1 (joint 1)
                ParseOp::Create(0), // vertex 2 (source 2)
                ParseOp::Create(1), // vertex 3 (joint 3)
                ParseOp::Union,
                ParseOp::Union,
                ParseOp::Union,
                ParseOp::Clique(0, 1),
            ],
        )
        .unwrap();
        let dtd = dtd_from_clique_parse(&sk, &t).unwrap();
        assert!(dtd.width() <= 2);
    }

    #[test]
    fn width_bounded_by_labels_on_random_skeletons() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(4242);
        for _ in 0..60 {
            let a = rng.gen_range(2..=4usize);
            let b = rng.gen_range(1..=4usize);
            let mut arcs = Vec::new();
            for j in 0..b {
                let mut srcs: Vec<usize> = (0..a).collect();
                for i in (1..a).rev() {
                    let k = rng.gen_range(0..=i);
                    srcs.swap(i, k);
                }
                let deg = rng.gen_range(2..=a);
                for &s in &srcs[..deg] {
                    arcs.push((s, a + j));
                }
            }
            let sk = Skeleton {
                sources: (0..a).collect(),
                joints: (a..a + b).collect(),
                arcs: {
                    let mut x = arcs.clone();
                    x.sort_unstable();
                    x
                },
            };
            let (und, _) = sk.undirected();
            let t = trivial_parse_tree(&und);
            let dtd = dtd_from_clique_parse(&sk, &t).unwrap();
            assert!(dtd.width() <= t.label_count());
            let (dag, verts) = sk.as_dag();
            let renumbered = DagTreeDecomposition::new(
                dtd.parent.clone(),
                dtd.bags
                    .iter()
                    .map(|bag| bag.iter().map(|&v| verts.binary_search(&v).unwrap()).collect())
                    .collect(),
            );
            let (opt, _) = dag_treewidth(&dag).unwrap();
            assert!(renumbered.width() >= opt);
        }
    }

    #[test]
    fn mismatched_tree_rejected() {
        let g = crate::graph::path(3).unwrap();
        let arcs: Vec<(usize, usize)> = g.edges().to_vec();
        let og = OrientedGraph::new(g, &arcs).unwrap();
        let sk = skeleton(&og);
        let t = trivial_parse_tree(&crate::graph::clique(3).unwrap());
        assert!(dtd_from_clique_parse(&sk, &t).is_err());
    }
}
