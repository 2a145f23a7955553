//! Simple undirected graphs with dense integer vertex ids, the standard
//! generators, and the transformations (quotients, tensor products,
//! subdivisions, supergraphs) the counting machinery is built on.

use std::fmt;

use thiserror::Error;

/// A simple undirected graph on vertices `0..n`. No self-loops, no parallel
/// edges. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    /// Sorted neighbour lists.
    adj: Vec<Vec<usize>>,
    /// Edges as pairs (u, v) with u < v, sorted.
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("quotient block {{{0}, ...}} contains an edge (self-loop in quotient)")]
    QuotientSelfLoop(usize),
    #[error("blocks do not partition the vertex set: vertex {0} covered {1} times")]
    NotAPartition(usize, usize),
    #[error("generator parameter out of range: {0}")]
    BadParameter(String),
}

impl Graph {
    /// Builds a graph from an edge list; duplicate edges are collapsed.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u == v {
                return Err(GraphError::SelfLoop(u, v));
            }
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange(u, v, n));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph { n, adj, edges })
    }

    /// Builds a graph, panicking on malformed input. For internal
    /// constructions that are correct by construction.
    pub(crate) fn from_edges(n: usize, edge_list: &[(usize, usize)]) -> Self {
        Graph::new(n, edge_list).expect("internal graph construction")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as (u, v) with u < v, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Index of edge {u, v} in `edges()`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    /// Induced subgraph on `keep` (in the given order); vertex i of the
    /// result is keep[i].
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if pos[u] != usize::MAX && pos[v] != usize::MAX {
                edges.push((pos[u], pos[v]));
            }
        }
        Graph::from_edges(keep.len(), &edges)
    }

    /// The graph with vertex v relabelled to perm[v].
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n, &edges)
    }

    /// Complement edge pairs (u, v) with u < v and {u, v} not an edge.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        Graph::from_edges(self.n + other.n, &edges)
    }

    /// Adds the edges in `add` (ignoring ones already present).
    pub fn with_edges(&self, add: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(add);
        Graph::new(self.n, &edges)
    }

    /// Edge-deleted graph H \ e.
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let key = (u.min(v), u.max(v));
        let edges: Vec<_> = self.edges.iter().copied().filter(|&e| e != key).collect();
        Graph::from_edges(self.n, &edges)
    }

    /// Vertex sets of the connected components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Whether `set` is connected in the induced subgraph sense.
    pub fn is_connected_set(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return false;
        }
        self.induced(set).is_connected()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, {:?})", self.n, self.edges.len(), self.edges)
    }
}

/// A partition of the vertex set into disjoint nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
    n: usize,
}

impl VertexPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut count = vec![0usize; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(GraphError::NotAPartition(0, 0));
            }
            for &v in block {
                if v >= n {
                    return Err(GraphError::EndpointOutOfRange(v, v, n));
                }
                count[v] += 1;
            }
        }
        for (v, &c) in count.iter().enumerate() {
            if c != 1 {
                return Err(GraphError::NotAPartition(v, c));
            }
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        Ok(VertexPartition { blocks, n })
    }

    /// The finest partition (every vertex its own block).
    pub fn discrete(n: usize) -> Self {
        VertexPartition {
            blocks: (0..n).map(|v| vec![v]).collect(),
            n,
        }
    }

    /// Builds the partition from a block id per vertex.
    pub fn from_block_ids(ids: &[usize]) -> Self {
        let k = ids.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); k];
        for (v, &b) in ids.iter().enumerate() {
            blocks[b].push(v);
        }
        blocks.retain(|b| !b.is_empty());
        VertexPartition { blocks, n: ids.len() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    /// Block id per vertex.
    pub fn block_ids(&self) -> Vec<usize> {
        let mut ids = vec![0usize; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in block {
                ids[v] = b;
            }
        }
        ids
    }
}

/// Quotient graph G/rho: one vertex per block, an edge between two blocks iff
/// some cross edge existed, parallel edges collapsed. An edge inside a block
/// is rejected (it would be a self-loop).
pub fn quotient(g: &Graph, rho: &VertexPartition) -> Result<Graph, GraphError> {
    assert_eq!(rho.ground_size(), g.vertex_count(), "partition of the wrong ground set");
    let ids = rho.block_ids();
    let mut edges = Vec::with_capacity(g.edge_count());
    for &(u, v) in g.edges() {
        if ids[u] == ids[v] {
            return Err(GraphError::QuotientSelfLoop(u));
        }
        edges.push((ids[u], ids[v]));
    }
    Ok(Graph::from_edges(rho.block_count(), &edges))
}

/// Tensor (Kronecker, categorical) product. Vertex (u1, u2) is encoded as
/// u1 * |V(G2)| + u2; hom counts multiply over the factors.
pub fn tensor_product(g1: &Graph, g2: &Graph) -> Graph {
    let n2 = g2.vertex_count();
    let mut edges = Vec::with_capacity(2 * g1.edge_count() * g2.edge_count());
    for &(u1, v1) in g1.edges() {
        for &(u2, v2) in g2.edges() {
            edges.push((u1 * n2 + u2, v1 * n2 + v2));
            edges.push((u1 * n2 + v2, v1 * n2 + u2));
        }
    }
    Graph::from_edges(g1.vertex_count() * n2, &edges)
}

/// Replaces each edge by a path with `times` internal vertices. The original
/// vertices keep their ids; internal vertices of the i-th edge are
/// n + i*times .. n + (i+1)*times, ordered from the smaller endpoint.
pub fn subdivide(g: &Graph, times: usize) -> Graph {
    assert!(times >= 1, "subdivide requires times >= 1");
    let n = g.vertex_count();
    let mut edges = Vec::new();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let base = n + i * times;
        let mut prev = u;
        for j in 0..times {
            edges.push((prev, base + j));
            prev = base + j;
        }
        edges.push((prev, v));
    }
    Graph::from_edges(n + g.edge_count() * times, &edges)
}

/// The k-by-k grid: vertex (i, j) = i*k + j, edges between (i,j) and (i',j')
/// iff |i-i'| + |j-j'| = 1.
pub fn grid(k: usize) -> Result<Graph, GraphError> {
    if k < 1 {
        return Err(GraphError::BadParameter(format!("grid({k})")));
    }
    let idx = |i: usize, j: usize| i * k + j;
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i + 1 < k {
                edges.push((idx(i, j), idx(i + 1, j)));
            }
            if j + 1 < k {
                edges.push((idx(i, j), idx(i, j + 1)));
            }
        }
    }
    Ok(Graph::from_edges(k * k, &edges))
}

pub fn clique(k: usize) -> Result<Graph, GraphError> {
    if k < 1 {
        return Err(GraphError::BadParameter(format!("clique({k})")));
    }
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            edges.push((u, v));
        }
    }
    Ok(Graph::from_edges(k, &edges))
}

pub fn biclique(a: usize, b: usize) -> Result<Graph, GraphError> {
    if a < 1 || b < 1 {
        return Err(GraphError::BadParameter(format!("biclique({a},{b})")));
    }
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Ok(Graph::from_edges(a + b, &edges))
}

pub fn cycle(k: usize) -> Result<Graph, GraphError> {
    if k < 3 {
        return Err(GraphError::BadParameter(format!("cycle({k})")));
    }
    let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    Ok(Graph::from_edges(k, &edges))
}

/// Path on k vertices (k-1 edges).
pub fn path(k: usize) -> Result<Graph, GraphError> {
    if k < 1 {
        return Err(GraphError::BadParameter(format!("path({k})")));
    }
    let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
    Ok(Graph::from_edges(k, &edges))
}

/// k disjoint edges on 2k vertices; edge i is {2i, 2i+1}.
pub fn matching(k: usize) -> Result<Graph, GraphError> {
    if k < 1 {
        return Err(GraphError::BadParameter(format!("matching({k})")));
    }
    let edges: Vec<_> = (0..k).map(|i| (2 * i, 2 * i + 1)).collect();
    Ok(Graph::from_edges(2 * k, &edges))
}

pub fn independent_set(k: usize) -> Result<Graph, GraphError> {
    if k < 1 {
        return Err(GraphError::BadParameter(format!("is({k})")));
    }
    Ok(Graph::from_edges(k, &[]))
}

/// Wreath graph: classes V_0, ..., V_{k-1} of the given sizes, with all edges
/// between V_i and V_{i+1 mod k}. Class size 1 everywhere reproduces the
/// k-cycle.
pub fn wreath(class_sizes: &[usize]) -> Result<Graph, GraphError> {
    let k = class_sizes.len();
    if k < 3 || class_sizes.iter().any(|&s| s < 1) {
        return Err(GraphError::BadParameter(format!("wreath({class_sizes:?})")));
    }
    let mut start = Vec::with_capacity(k + 1);
    let mut acc = 0;
    for &s in class_sizes {
        start.push(acc);
        acc += s;
    }
    start.push(acc);
    let mut edges = Vec::new();
    for i in 0..k {
        let j = (i + 1) % k;
        for u in start[i]..start[i] + class_sizes[i] {
            for v in start[j]..start[j] + class_sizes[j] {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(acc, &edges))
}

/// An acyclic orientation witness for the degeneracy of a graph: every vertex
/// has at most `d` neighbours later in `order`.
#[derive(Clone, Debug)]
pub struct DegeneracyOrder {
    pub order: Vec<usize>,
    /// Position of each vertex in `order`.
    pub position: Vec<usize>,
    pub d: usize,
}

/// Smallest-last (Matula–Beck) degeneracy ordering in O(n + m) with bucketed
/// degrees. The returned `d` equals the degeneracy of the graph.
pub fn degeneracy_order(g: &Graph) -> DegeneracyOrder {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    let mut cur = 0usize;
    for _ in 0..n {
        // The minimum degree can drop by at most one per removal.
        cur = cur.saturating_sub(1);
        let v = loop {
            while cur <= max_deg && buckets[cur].is_empty() {
                cur += 1;
            }
            let v = buckets[cur].pop().expect("non-empty bucket");
            if !removed[v] && deg[v] == cur {
                break v;
            }
        };
        removed[v] = true;
        d = d.max(cur);
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
            }
        }
    }
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    DegeneracyOrder { order, position, d }
}

/// A graph together with a total colouring, either into `[k]` abstract
/// colours or into the vertices of a pattern H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredGraph {
    pub graph: Graph,
    /// colouring[v] = colour of v.
    pub colouring: Vec<usize>,
}

impl ColouredGraph {
    pub fn new(graph: Graph, colouring: Vec<usize>) -> Self {
        assert_eq!(graph.vertex_count(), colouring.len(), "colouring must be total");
        ColouredGraph { graph, colouring }
    }

    /// Whether the colouring is a homomorphism into `pattern` (every edge of
    /// the graph maps to an edge of the pattern).
    pub fn is_homomorphism_to(&self, pattern: &Graph) -> bool {
        self.colouring.iter().all(|&c| c < pattern.vertex_count())
            && self
                .graph
                .edges()
                .iter()
                .all(|&(u, v)| pattern.has_edge(self.colouring[u], self.colouring[v]))
    }

    /// Whether every colour in 0..k appears.
    pub fn is_surjective(&self, k: usize) -> bool {
        let mut seen = vec![false; k];
        for &c in &self.colouring {
            if c >= k {
                return false;
            }
            seen[c] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn colour_class(&self, c: usize) -> Vec<usize> {
        (0..self.graph.vertex_count()).filter(|&v| self.colouring[v] == c).collect()
    }

    /// Deletes all vertices whose colour lies in `drop`, restricting the
    /// colouring to the survivors. Degeneracy cannot increase.
    pub fn remove_colour_classes(&self, drop: &[usize]) -> ColouredGraph {
        let dropset: std::collections::HashSet<usize> = drop.iter().copied().collect();
        let keep: Vec<usize> = (0..self.graph.vertex_count())
            .filter(|&v| !dropset.contains(&self.colouring[v]))
            .collect();
        let graph = self.graph.induced(&keep);
        let colouring = keep.iter().map(|&v| self.colouring[v]).collect();
        ColouredGraph { graph, colouring }
    }
}
