//! Canonical labelling and automorphism counting for small graphs
//! (at most [`CANON_MAX_VERTICES`] vertices), via equitable refinement and
//! branch-and-bound over individualizations. Equal labels iff isomorphic.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::Graph;

/// Hard cap on canonicalizable graph size; pattern graphs in this crate stay
/// well below it.
pub const CANON_MAX_VERTICES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("graph has {0} vertices, canonicalization is capped at {1}")]
pub struct TooLargeError(pub usize, pub usize);

/// A canonical label: two graphs receive the same label iff they are
/// isomorphic. The bits are the upper triangle of the adjacency matrix under
/// the canonical vertex order, row by row, lexicographically minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLabel {
    pub n: u8,
    pub bits: u128,
}

impl CanonicalLabel {
    /// Reconstructs the canonically labelled graph from the label.
    pub fn to_graph(self) -> Graph {
        let n = self.n as usize;
        let mut edges = Vec::new();
        let mut idx = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                if self.bits >> idx & 1 == 1 {
                    edges.push((i, j));
                }
                idx += 1;
            }
        }
        Graph::new(n, &edges).expect("label encodes a simple graph")
    }
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    let mut masks = vec![0u32; g.vertex_count()];
    for &(u, v) in g.edges() {
        masks[u] |= 1 << v;
        masks[v] |= 1 << u;
    }
    masks
}

/// Ordered partition refinement: repeatedly split every cell by the vector of
/// neighbour counts into all current cells, ordering sub-cells by signature.
/// The resulting ordered partition is an isomorphism invariant.
fn refine(masks: &[u32], cells: &mut Vec<Vec<usize>>) {
    loop {
        let cell_masks: Vec<u32> = cells
            .iter()
            .map(|c| c.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut groups: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
            for &v in cell {
                let sig: Vec<u32> = cell_masks.iter().map(|&cm| (masks[v] & cm).count_ones()).collect();
                match groups.iter_mut().find(|(s, _)| *s == sig) {
                    Some((_, members)) => members.push(v),
                    None => groups.push((sig, vec![v])),
                }
            }
            if groups.len() > 1 {
                changed = true;
                groups.sort_by(|a, b| a.0.cmp(&b.0));
            }
            for (_, members) in groups {
                next.push(members);
            }
        }
        *cells = next;
        if !changed {
            return;
        }
    }
}

/// Upper-triangle bits of the adjacency matrix under ordering `pi`.
fn encode(masks: &[u32], pi: &[usize]) -> u128 {
    let n = pi.len();
    let mut bits = 0u128;
    let mut idx = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            if masks[pi[i]] >> pi[j] & 1 == 1 {
                bits |= 1u128 << idx;
            }
            idx += 1;
        }
    }
    bits
}

/// Bits of the upper triangle restricted to the first `q` positions of a
/// partially fixed ordering.
fn encode_prefix(masks: &[u32], prefix: &[usize]) -> u128 {
    encode(masks, prefix)
}

/// Extracts the `q`-prefix block from a full encoding of an n-vertex graph.
fn prefix_of_bits(bits: u128, n: usize, q: usize) -> u128 {
    let mut out = 0u128;
    let mut out_idx = 0u32;
    let mut idx = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            if i < q && j < q {
                if bits >> idx & 1 == 1 {
                    out |= 1 << out_idx;
                }
                out_idx += 1;
            }
            idx += 1;
        }
    }
    out
}

struct CanonSearch<'a> {
    masks: &'a [u32],
    n: usize,
    best: Option<(u128, Vec<usize>)>,
}

impl<'a> CanonSearch<'a> {
    fn run(&mut self, cells: Vec<Vec<usize>>) {
        // Fixed prefix: cells before the first non-singleton one.
        let split = cells.iter().position(|c| c.len() > 1);
        let q = match split {
            None => {
                let pi: Vec<usize> = cells.iter().map(|c| c[0]).collect();
                let bits = encode(self.masks, &pi);
                match &self.best {
                    Some((b, _)) if *b <= bits => {}
                    _ => self.best = Some((bits, pi)),
                }
                return;
            }
            Some(i) => i,
        };
        if let Some((best_bits, _)) = &self.best {
            let prefix: Vec<usize> = cells[..q].iter().map(|c| c[0]).collect();
            let here = encode_prefix(self.masks, &prefix);
            let there = prefix_of_bits(*best_bits, self.n, q);
            if here > there {
                return;
            }
        }
        let cell = cells[q].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            // Twin pruning: swapping v with an explored twin is an
            // automorphism fixing everything else, so the subtrees coincide.
            let vm = self.masks[v] & !(1 << v);
            if explored.iter().any(|&u| {
                let clear = !(1u32 << u | 1u32 << v);
                (self.masks[u] & clear) == (vm & clear) && (self.masks[u] >> v & 1) == (self.masks[v] >> u & 1)
            }) {
                continue;
            }
            explored.push(v);
            let mut child: Vec<Vec<usize>> = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..q]);
            child.push(vec![v]);
            let rest: Vec<usize> = cell.iter().copied().filter(|&u| u != v).collect();
            child.push(rest);
            child.extend_from_slice(&cells[q + 1..]);
            refine(self.masks, &mut child);
            self.run(child);
        }
    }
}

/// Canonical label of a small graph. Deterministic; equal labels iff
/// isomorphic.
pub fn canonical_form(g: &Graph) -> Result<CanonicalLabel, TooLargeError> {
    let n = g.vertex_count();
    if n > CANON_MAX_VERTICES {
        return Err(TooLargeError(n, CANON_MAX_VERTICES));
    }
    if n == 0 {
        return Ok(CanonicalLabel { n: 0, bits: 0 });
    }
    let masks = adjacency_masks(g);
    let mut cells = vec![(0..n).collect::<Vec<_>>()];
    refine(&masks, &mut cells);
    let mut search = CanonSearch { masks: &masks, n, best: None };
    search.run(cells);
    let (bits, _) = search.best.expect("at least one leaf");
    Ok(CanonicalLabel { n: n as u8, bits })
}

/// The canonically relabelled copy of `g`.
pub fn canonical_graph(g: &Graph) -> Result<Graph, TooLargeError> {
    Ok(canonical_form(g)?.to_graph())
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool, TooLargeError> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// |Aut(H)| by backtracking over images, restricted to equitable-refinement
/// cells. Pattern-sized graphs only.
pub fn automorphism_count(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= CANON_MAX_VERTICES, "automorphism_count is capped at {CANON_MAX_VERTICES}");
    if n == 0 {
        return 1;
    }
    let masks = adjacency_masks(g);
    let mut cells = vec![(0..n).collect::<Vec<_>>()];
    refine(&masks, &mut cells);
    let mut cell_of = vec![0usize; n];
    for (i, c) in cells.iter().enumerate() {
        for &v in c {
            cell_of[v] = i;
        }
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut count = 0u64;
    fn go(
        v: usize,
        n: usize,
        masks: &[u32],
        cells: &[Vec<usize>],
        cell_of: &[usize],
        image: &mut [usize],
        used: &mut [bool],
        count: &mut u64,
    ) {
        if v == n {
            *count += 1;
            return;
        }
        for &w in &cells[cell_of[v]] {
            if used[w] {
                continue;
            }
            let ok = (0..v).all(|u| (masks[v] >> u & 1) == (masks[w] >> image[u] & 1));
            if ok {
                image[v] = w;
                used[w] = true;
                go(v + 1, n, masks, cells, cell_of, image, used, count);
                used[w] = false;
                image[v] = usize::MAX;
            }
        }
    }
    go(0, n, &masks, &cells, &cell_of, &mut image, &mut used, &mut count);
    count
}

/// All isomorphism classes of graphs on exactly `k` vertices, built by
/// extending the classes on k-1 vertices with one new vertex.
pub fn all_graph_classes(k: usize) -> Vec<Graph> {
    assert!(k >= 1 && k <= 10, "class enumeration supported for 1..=10 vertices");
    let mut classes: Vec<Graph> = vec![Graph::new(1, &[]).unwrap()];
    for n in 2..=k {
        let mut seen: HashMap<CanonicalLabel, Graph> = HashMap::new();
        for g in &classes {
            let base: Vec<(usize, usize)> = g.edges().to_vec();
            for mask in 0u32..(1 << (n - 1)) {
                let mut edges = base.clone();
                for v in 0..n - 1 {
                    if mask >> v & 1 == 1 {
                        edges.push((v, n - 1));
                    }
                }
                let h = Graph::new(n, &edges).unwrap();
                let label = canonical_form(&h).unwrap();
                seen.entry(label).or_insert(h);
            }
        }
        let mut next: Vec<(CanonicalLabel, Graph)> = seen.into_iter().collect();
        next.sort_by_key(|(l, _)| *l);
        classes = next.into_iter().map(|(_, g)| g).collect();
    }
    classes
}

/// All isomorphism classes with at most `k` vertices.
pub fn all_graph_classes_up_to(k: usize) -> Vec<Graph> {
    (1..=k).flat_map(all_graph_classes).collect()
}
