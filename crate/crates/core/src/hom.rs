//! Exact homomorphism counting: a brute-force oracle, the degeneracy-oriented
//! dynamic program over dag tree decompositions, and the colour-prescribed,
//! colourful, and colour-respecting variants.
//!
//! All exact counts are arbitrary-precision.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::dtd::{dtd_from_kernel, find_kernel, validate_dtd, DagTreeDecomposition};
use crate::graph::{degeneracy_order, ColouredGraph, Graph};
use crate::orient::{orientations, OrientedGraph};

pub type HomCount = BigUint;

/// Dictionary flavour for the join keys: ordered gives the deterministic
/// logarithmic-access contract, hashed gives expected constant time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DictKind {
    Ordered,
    Hashed,
}

#[derive(Clone, Debug)]
pub struct CountConfig {
    pub dict: DictKind,
    /// Cap on |V(G)|^|V(H)| for the brute-force oracle.
    pub brute_budget: f64,
    /// Parallelize the per-orientation loop.
    pub parallel: bool,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { dict: DictKind::Ordered, brute_budget: 1e9, parallel: true }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("brute-force budget exceeded: {0}^{1} maps")]
    BudgetExceeded(usize, usize),
    #[error("colouring is not a homomorphism into the pattern")]
    ColouringNotHomomorphism,
    #[error("inclusion-exclusion total {0} is not divisible by |Aut| = {1}")]
    NotDivisible(BigInt, u64),
}

/// Exact |Hom(H, G)| by exhaustive enumeration with incremental adjacency
/// checks. Independent of the decomposition engine; used as the oracle.
pub fn count_homs_brute(h: &Graph, g: &Graph, config: &CountConfig) -> Result<HomCount, HomError> {
    let k = h.vertex_count();
    let n = g.vertex_count();
    if (n.max(1) as f64).powi(k as i32) > config.brute_budget {
        return Err(HomError::BudgetExceeded(n, k));
    }
    if k == 0 {
        return Ok(BigUint::one());
    }
    if n == 0 {
        return Ok(BigUint::zero());
    }
    let mut image = vec![0usize; k];
    let mut count = BigUint::zero();
    fn go(v: usize, h: &Graph, g: &Graph, image: &mut [usize], count: &mut BigUint) {
        if v == image.len() {
            *count += 1u32;
            return;
        }
        'cand: for x in g.vertices() {
            for &u in h.neighbors(v) {
                if u < v && !g.has_edge(image[u], x) {
                    continue 'cand;
                }
            }
            image[v] = x;
            go(v + 1, h, g, image, count);
        }
    }
    go(0, h, g, &mut image, &mut count);
    Ok(count)
}

/// The host graph oriented by a degeneracy order: out-degree <= d(G).
#[derive(Clone, Debug)]
pub struct OrientedHost {
    out: Vec<Vec<u32>>,
}

impl OrientedHost {
    pub fn new(g: &Graph) -> Self {
        let ord = degeneracy_order(g);
        let mut out = vec![Vec::new(); g.vertex_count()];
        for &(u, v) in g.edges() {
            if ord.position[u] < ord.position[v] {
                out[u].push(v as u32);
            } else {
                out[v].push(u as u32);
            }
        }
        for o in &mut out {
            o.sort_unstable();
        }
        OrientedHost { out }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn out(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn has_arc(&self, u: u32, v: u32) -> bool {
        self.out[u as usize].binary_search(&v).is_ok()
    }
}

/// Commutative semiring of counting values with per-assignment weights.
pub trait CountSemiring: Sync {
    type Value: Clone + Send;
    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn add_assign(&self, acc: &mut Self::Value, v: &Self::Value);
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn is_zero(&self, v: &Self::Value) -> bool;
    /// Weight of mapping pattern vertex `hv` onto host vertex `gv`; `None`
    /// is the multiplicative identity (skipped).
    fn weight(&self, hv: usize, gv: u32) -> Option<Self::Value>;
}

/// Plain counting: every assignment weighs 1.
pub struct UnitCounting;

impl CountSemiring for UnitCounting {
    type Value = BigUint;
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn add_assign(&self, acc: &mut BigUint, v: &BigUint) {
        *acc += v;
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn is_zero(&self, v: &BigUint) -> bool {
        v.is_zero()
    }
    fn weight(&self, _: usize, _: u32) -> Option<BigUint> {
        None
    }
}

enum Dict<V> {
    Ordered(std::collections::BTreeMap<Vec<u32>, V>),
    Hashed(std::collections::HashMap<Vec<u32>, V>),
}

impl<V> Dict<V> {
    fn new(kind: DictKind) -> Self {
        match kind {
            DictKind::Ordered => Dict::Ordered(Default::default()),
            DictKind::Hashed => Dict::Hashed(Default::default()),
        }
    }
    fn get(&self, key: &[u32]) -> Option<&V> {
        match self {
            Dict::Ordered(m) => m.get(key),
            Dict::Hashed(m) => m.get(key),
        }
    }
    fn upsert(&mut self, key: Vec<u32>, v: V, add: impl FnOnce(&mut V, &V)) {
        match self {
            Dict::Ordered(m) => match m.entry(key) {
                std::collections::btree_map::Entry::Occupied(mut e) => add(e.get_mut(), &v),
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
            },
            Dict::Hashed(m) => match m.entry(key) {
                std::collections::hash_map::Entry::Occupied(mut e) => add(e.get_mut(), &v),
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
            },
        }
    }
}

/// Counts orientation-respecting homomorphisms of an oriented pattern into an
/// oriented host, weighted by the semiring, restricted by `filter`, by
/// dynamic programming over a dag tree decomposition.
///
/// Per tree node the pattern vertices of the bag's reachability closure are
/// enumerated in topological order: a vertex with an assigned in-neighbour
/// only ranges over that image's out-neighbourhood (branching <= d), bag-level
/// sources range over all host vertices. Child tables are joined on the
/// images of the shared closure vertices.
pub fn count_oriented_homs<S: CountSemiring>(
    pattern: &OrientedGraph,
    dtd: &DagTreeDecomposition,
    host: &OrientedHost,
    filter: &(dyn Fn(usize, u32) -> bool + Sync),
    semiring: &S,
    dict_kind: DictKind,
) -> S::Value {
    debug_assert_eq!(validate_dtd(pattern, dtd), Ok(()));
    let closures: Vec<Vec<usize>> = dtd.bags.iter().map(|b| pattern.closure(b)).collect();
    let children = dtd.children();
    // Postorder over tree nodes.
    let mut order = Vec::with_capacity(dtd.node_count());
    let mut stack = vec![(0usize, false)];
    while let Some((t, expanded)) = stack.pop() {
        if expanded {
            order.push(t);
        } else {
            stack.push((t, true));
            for &c in &children[t] {
                stack.push((c, false));
            }
        }
    }

    let mut tables: Vec<Option<Dict<S::Value>>> = (0..dtd.node_count()).map(|_| None).collect();
    let mut result = semiring.zero();
    for &t in &order {
        let verts = topo_restricted(pattern, &closures[t]);
        let pos_of = |v: usize| verts.iter().position(|&x| x == v).expect("closure vertex");
        // Positions of already-assigned in-neighbours, per position.
        let in_positions: Vec<Vec<usize>> = (0..verts.len())
            .map(|i| (0..i).filter(|&j| pattern.has_arc(verts[j], verts[i])).collect())
            .collect();
        // Children join as soon as the positions of their separator are all
        // assigned; an empty separator joins up front as a global factor.
        let mut init = semiring.one();
        let mut joins: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        let mut dead = false;
        for &c in &children[t] {
            let csep = intersect_sorted(&closures[c], &closures[t]);
            let table = tables[c].as_ref().expect("child table built");
            if csep.is_empty() {
                match table.get(&[]) {
                    Some(v) => init = semiring.mul(&init, v),
                    None => dead = true,
                }
            } else {
                let positions: Vec<usize> = csep.iter().map(|&v| pos_of(v)).collect();
                let ready = positions.iter().copied().max().unwrap();
                joins.push((c, positions, ready));
            }
        }
        let sep_positions: Vec<usize> = if t == 0 {
            Vec::new()
        } else {
            intersect_sorted(&closures[t], &closures[dtd.parent[t]])
                .iter()
                .map(|&v| pos_of(v))
                .collect()
        };

        let mut dict: Dict<S::Value> = Dict::new(dict_kind);
        if !dead {
            let mut image: Vec<u32> = vec![0; verts.len()];
            enumerate(
                0,
                host,
                filter,
                semiring,
                &verts,
                &in_positions,
                &mut image,
                &joins,
                &tables,
                &init,
                &mut |image: &[u32], value: S::Value| {
                    if t == 0 {
                        semiring.add_assign(&mut result, &value);
                    } else {
                        let key: Vec<u32> = sep_positions.iter().map(|&p| image[p]).collect();
                        dict.upsert(key, value, |acc, v| semiring.add_assign(acc, v));
                    }
                },
            );
        }
        if t != 0 {
            tables[t] = Some(dict);
        }
    }
    result
}

#[allow(clippy::too_many_arguments)]
fn enumerate<S: CountSemiring>(
    i: usize,
    host: &OrientedHost,
    filter: &(dyn Fn(usize, u32) -> bool + Sync),
    semiring: &S,
    verts: &[usize],
    in_positions: &[Vec<usize>],
    image: &mut Vec<u32>,
    joins: &[(usize, Vec<usize>, usize)],
    tables: &[Option<Dict<S::Value>>],
    acc: &S::Value,
    sink: &mut dyn FnMut(&[u32], S::Value),
) {
    if i == verts.len() {
        sink(image, acc.clone());
        return;
    }
    let hv = verts[i];
    let anchors = &in_positions[i];
    let candidates: Vec<u32> = match anchors.split_first() {
        None => (0..host.vertex_count() as u32).collect(),
        Some((&first, rest)) => host
            .out(image[first])
            .iter()
            .copied()
            .filter(|&x| rest.iter().all(|&a| host.has_arc(image[a], x)))
            .collect(),
    };
    'cand: for x in candidates {
        if !filter(hv, x) {
            continue;
        }
        image[i] = x;
        let mut value = acc.clone();
        if let Some(w) = semiring.weight(hv, x) {
            value = semiring.mul(&value, &w);
        }
        // Join children whose separator completed at this position.
        for (c, positions, ready) in joins {
            if *ready != i {
                continue;
            }
            let key: Vec<u32> = positions.iter().map(|&p| image[p]).collect();
            match tables[*c].as_ref().expect("child table built").get(&key) {
                None => continue 'cand,
                Some(v) => value = semiring.mul(&value, v),
            }
        }
        if semiring.is_zero(&value) {
            continue;
        }
        enumerate(i + 1, host, filter, semiring, verts, in_positions, image, joins, tables, &value, sink);
    }
}

/// Topological order of the closure vertices, restricted to the closure.
fn topo_restricted(pattern: &OrientedGraph, closure: &[usize]) -> Vec<usize> {
    let inset: std::collections::HashSet<usize> = closure.iter().copied().collect();
    let full = pattern.topological_order().expect("pattern is acyclic");
    full.into_iter().filter(|v| inset.contains(v)).collect()
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|v| b.binary_search(v).is_ok()).collect()
}

/// Counts homomorphisms of one connected pattern component via the
/// orientation sum: each undirected homomorphism respects exactly one acyclic
/// orientation of the pattern under the host's degeneracy orientation.
fn count_component(
    h: &Graph,
    host: &OrientedHost,
    filter: &(dyn Fn(usize, u32) -> bool + Sync),
    config: &CountConfig,
) -> BigUint {
    let per_orientation = |og: &OrientedGraph| -> BigUint {
        let kernel = find_kernel(og);
        let dtd = dtd_from_kernel(og, &kernel).expect("find_kernel returns a kernel");
        count_oriented_homs(og, &dtd, host, filter, &UnitCounting, config.dict)
    };
    let all = orientations(h);
    if config.parallel && host.vertex_count() >= 1024 && all.len() > 1 {
        all.par_iter().map(per_orientation).reduce(BigUint::zero, |a, b| a + b)
    } else {
        all.iter().map(per_orientation).fold(BigUint::zero(), |a, b| a + b)
    }
}

/// Exact |Hom(H, G)| via degeneracy orientation and dag tree decompositions.
/// Disconnected patterns factor into a product over components.
pub fn count_homs_dtd(h: &Graph, g: &Graph, config: &CountConfig) -> HomCount {
    count_homs_filtered(h, g, &|_, _| true, config)
}

/// |Hom| with an arbitrary per-vertex candidate restriction.
pub(crate) fn count_homs_filtered(
    h: &Graph,
    g: &Graph,
    filter: &(dyn Fn(usize, u32) -> bool + Sync),
    config: &CountConfig,
) -> HomCount {
    let host = OrientedHost::new(g);
    let mut total = BigUint::one();
    for comp in h.components() {
        let sub = h.induced(&comp);
        // Remap the filter to component-local pattern ids.
        let comp_filter = |hv: usize, gv: u32| filter(comp[hv], gv);
        total *= count_component(&sub, &host, &comp_filter, config);
        if total.is_zero() {
            break;
        }
    }
    total
}

/// |Hom| against an externally supplied decomposition for a specific
/// orientation of a connected pattern.
pub fn count_oriented_homs_with_dtd(
    pattern: &OrientedGraph,
    dtd: &DagTreeDecomposition,
    g: &Graph,
    config: &CountConfig,
) -> HomCount {
    let host = OrientedHost::new(g);
    count_oriented_homs(pattern, dtd, &host, &|_, _| true, &UnitCounting, config.dict)
}

/// Exact number of homomorphisms respecting a k-vertex colouring: phi with
/// c_G(phi(v)) = c_H(v) for every pattern vertex.
pub fn count_colour_respecting_homs(
    h: &Graph,
    c_h: &[usize],
    g: &ColouredGraph,
    config: &CountConfig,
) -> HomCount {
    assert_eq!(c_h.len(), h.vertex_count());
    let colours = g.colouring.clone();
    count_homs_filtered(h, &g.graph, &move |hv, gv| colours[gv as usize] == c_h[hv], config)
}

/// Exact |cpHom(H, G)| for an H-coloured G, by the decomposition engine with
/// the identity prescription.
pub fn count_cp_homs(h: &Graph, g: &ColouredGraph, config: &CountConfig) -> Result<HomCount, HomError> {
    if !g.is_homomorphism_to(h) {
        return Err(HomError::ColouringNotHomomorphism);
    }
    let identity: Vec<usize> = h.vertices().collect();
    Ok(count_colour_respecting_homs(h, &identity, g, config))
}

/// Exact colourful homomorphism count by inclusion-exclusion over deleted
/// colour classes.
pub fn count_cf_homs(h: &Graph, g: &ColouredGraph, config: &CountConfig) -> Result<HomCount, HomError> {
    if !g.is_homomorphism_to(h) {
        return Err(HomError::ColouringNotHomomorphism);
    }
    let k = h.vertex_count();
    let mut total = BigInt::zero();
    for mask in 0u64..(1 << k) {
        let drop: Vec<usize> = (0..k).filter(|&v| mask >> v & 1 == 1).collect();
        let reduced = g.remove_colour_classes(&drop);
        let homs = count_homs_dtd(h, &reduced.graph, config);
        let term = BigInt::from_biguint(Sign::Plus, homs);
        if drop.len() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    debug_assert!(total >= BigInt::zero());
    Ok(total.to_biguint().unwrap_or_default())
}

/// |cpHom| via |Aut(H)|^{-1} * |cfHom|; must agree with [`count_cp_homs`].
pub fn count_cp_homs_via_inclusion_exclusion(
    h: &Graph,
    g: &ColouredGraph,
    config: &CountConfig,
) -> Result<HomCount, HomError> {
    let cf = count_cf_homs(h, g, config)?;
    let aut = crate::canon::automorphism_count(h);
    let (q, r) = num_integer::Integer::div_rem(&cf, &BigUint::from(aut));
    if !r.is_zero() {
        return Err(HomError::NotDivisible(BigInt::from_biguint(Sign::Plus, cf), aut));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{biclique, clique, cycle, independent_set, path, tensor_product};

    fn cfg() -> CountConfig {
        CountConfig { parallel: false, ..CountConfig::default() }
    }

    fn count_u64(c: &HomCount) -> u64 {
        use num_traits::ToPrimitive;
        c.to_u64().unwrap()
    }

    #[test]
    fn brute_small_values() {
        let cfg = cfg();
        assert_eq!(count_u64(&count_homs_brute(&clique(2).unwrap(), &clique(3).unwrap(), &cfg).unwrap()), 6);
        assert_eq!(count_u64(&count_homs_brute(&path(3).unwrap(), &clique(3).unwrap(), &cfg).unwrap()), 12);
        let bip = biclique(2, 3).unwrap();
        assert_eq!(count_u64(&count_homs_brute(&clique(3).unwrap(), &bip, &cfg).unwrap()), 0);
    }

    #[test]
    fn dtd_matches_brute_on_small_corpus() {
        let cfg = cfg();
        let patterns = crate::canon::all_graph_classes_up_to(4);
        let hosts: Vec<Graph> =
            vec![clique(4).unwrap(), cycle(5).unwrap(), path(5).unwrap(), biclique(2, 3).unwrap()];
        for h in &patterns {
            for g in &hosts {
                let brute = count_homs_brute(h, g, &cfg).unwrap();
                let fast = count_homs_dtd(h, g, &cfg);
                assert_eq!(brute, fast, "H={h:?} G={g:?}");
            }
        }
    }

    #[test]
    fn hom_into_empty_graph_is_zero() {
        let cfg = cfg();
        let g = Graph::new(0, &[]).unwrap();
        assert!(count_homs_dtd(&clique(2).unwrap(), &g, &cfg).is_zero());
        assert!(count_homs_dtd(&independent_set(1).unwrap(), &g, &cfg).is_zero());
    }

    #[test]
    fn tensor_multiplicativity() {
        let cfg = cfg();
        let h = path(3).unwrap();
        let g1 = cycle(4).unwrap();
        let g2 = clique(3).unwrap();
        let t = tensor_product(&g1, &g2);
        let lhs = count_homs_dtd(&h, &t, &cfg);
        let rhs = count_homs_dtd(&h, &g1, &cfg) * count_homs_dtd(&h, &g2, &cfg);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn orientation_sum_recovers_hom_count() {
        // Sum over pattern orientations of orientation-respecting counts
        // equals the undirected hom count (each hom respects exactly one).
        let cfg = cfg();
        let h = cycle(4).unwrap();
        let g = clique(4).unwrap();
        let host = OrientedHost::new(&g);
        let mut sum = BigUint::zero();
        for og in orientations(&h) {
            let kernel = find_kernel(&og);
            let dtd = dtd_from_kernel(&og, &kernel).unwrap();
            sum += count_oriented_homs(&og, &dtd, &host, &|_, _| true, &UnitCounting, cfg.dict);
        }
        assert_eq!(sum, count_homs_brute(&h, &g, &cfg).unwrap());
    }

    #[test]
    fn cp_homs_on_identity_coloured_pattern() {
        let cfg = cfg();
        let h = cycle(4).unwrap();
        let g = ColouredGraph::new(h.clone(), h.vertices().collect());
        let cp = count_cp_homs(&h, &g, &cfg).unwrap();
        assert_eq!(count_u64(&cp), 1);
    }

    #[test]
    fn cp_homs_two_disjoint_copies_of_k2() {
        let cfg = cfg();
        let h = clique(2).unwrap();
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let col = ColouredGraph::new(g, vec![0, 1, 0, 1]);
        assert_eq!(count_u64(&count_cp_homs(&h, &col, &cfg).unwrap()), 2);
        // Crossing colours give two more prescribed maps per copy pair; with
        // the matching-aligned colouring above there are exactly 2.
    }

    #[test]
    fn cp_homs_missing_colour_is_zero() {
        let cfg = cfg();
        let h = clique(2).unwrap();
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        // Both endpoints coloured 0: not a homomorphism into K2.
        let bad = ColouredGraph::new(g.clone(), vec![0, 0]);
        assert!(count_cp_homs(&h, &bad, &cfg).is_err());
        // A valid colouring that misses colour 1 entirely needs an edgeless
        // host.
        let lonely = ColouredGraph::new(independent_set(2).unwrap(), vec![0, 0]);
        assert_eq!(count_u64(&count_cp_homs(&h, &lonely, &cfg).unwrap()), 0);
    }

    #[test]
    fn cf_equals_aut_times_cp() {
        let cfg = cfg();
        let h = path(3).unwrap();
        let g = Graph::new(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (1, 3)]).unwrap();
        let col = ColouredGraph::new(g, vec![0, 1, 2, 0, 1, 2]);
        let cp = count_cp_homs(&h, &col, &cfg).unwrap();
        let cf = count_cf_homs(&h, &col, &cfg).unwrap();
        assert_eq!(cf, cp.clone() * BigUint::from(crate::canon::automorphism_count(&h)));
        assert_eq!(count_cp_homs_via_inclusion_exclusion(&h, &col, &cfg).unwrap(), cp);
    }

    #[test]
    fn cf_homs_single_identity_edge() {
        let cfg = cfg();
        let h = clique(2).unwrap();
        let g = ColouredGraph::new(h.clone(), vec![0, 1]);
        assert_eq!(count_u64(&count_cf_homs(&h, &g, &cfg).unwrap()), 2);
    }

    #[test]
    fn colour_respecting_basics() {
        let cfg = cfg();
        // Monochromatic host, bichromatic pattern: zero.
        let h = clique(2).unwrap();
        let g = ColouredGraph::new(clique(3).unwrap(), vec![0, 0, 0]);
        assert!(count_colour_respecting_homs(&h, &[0, 1], &g, &cfg).is_zero());
        // Single pattern vertex of colour 1 counts the colour class.
        let one = independent_set(1).unwrap();
        let g2 = ColouredGraph::new(independent_set(5).unwrap(), vec![1, 0, 1, 1, 0]);
        assert_eq!(count_u64(&count_colour_respecting_homs(&one, &[1], &g2, &cfg)), 3);
    }

    #[test]
    fn hashed_dict_agrees_with_ordered() {
        let mut cfg = cfg();
        let h = cycle(4).unwrap();
        let g = crate::graph::grid(3).unwrap();
        let ordered = count_homs_dtd(&h, &g, &cfg);
        cfg.dict = DictKind::Hashed;
        let hashed = count_homs_dtd(&h, &g, &cfg);
        assert_eq!(ordered, hashed);
    }

    #[test]
    fn disconnected_pattern_factors() {
        let cfg = cfg();
        let h = crate::graph::matching(2).unwrap();
        let g = cycle(5).unwrap();
        let one_edge = clique(2).unwrap();
        let per_edge = count_homs_dtd(&one_edge, &g, &cfg);
        assert_eq!(count_homs_dtd(&h, &g, &cfg), per_edge.clone() * per_edge);
    }
}
