//! Colourful decision algorithms on vertex-coloured degenerate hosts:
//! multicoloured independent set, multicoloured subgraph, and multicoloured
//! induced subgraph detection.

use thiserror::Error;

use crate::dtd::find_kernel;
use crate::graph::{degeneracy_order, ColouredGraph, Graph};
use crate::hom::{count_colour_respecting_homs, CountConfig, OrientedHost};
use crate::orient::orientations;
use crate::params::induced_matching_number;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColourfulError {
    #[error("colouring is not surjective onto 0..{0}")]
    NotSurjective(usize),
    #[error("pattern has {0} vertices but the colouring uses {1} colours")]
    PatternSizeMismatch(usize, usize),
}

/// Detects a multicoloured k-independent set. On YES the witness (one vertex
/// per colour, pairwise non-adjacent) is returned and machine-checked.
///
/// When every colour class is larger than d(k-1) the greedy degeneracy-order
/// argument applies directly: repeatedly take the earliest remaining vertex
/// and delete its colour class and neighbourhood. Otherwise the small classes
/// are enumerated exhaustively and the algorithm recurses on the residual
/// graph.
pub fn detect_multicol_is(g: &ColouredGraph, k: usize) -> Result<Option<Vec<usize>>, ColourfulError> {
    if !g.is_surjective(k) {
        return Err(ColourfulError::NotSurjective(k));
    }
    let alive: Vec<usize> = g.graph.vertices().collect();
    let colours: Vec<usize> = (0..k).collect();
    let witness = search_is(&g.graph, &g.colouring, alive, colours);
    if let Some(w) = &witness {
        debug_assert!(check_colourful_is(g, k, w));
    }
    Ok(witness)
}

/// Verification helper: `w` is independent and hits every colour once.
pub fn check_colourful_is(g: &ColouredGraph, k: usize, w: &[usize]) -> bool {
    if w.len() != k {
        return false;
    }
    let mut seen = vec![false; k];
    for &v in w {
        if seen[g.colouring[v]] {
            return false;
        }
        seen[g.colouring[v]] = true;
    }
    w.iter().enumerate().all(|(i, &a)| w[i + 1..].iter().all(|&b| !g.graph.has_edge(a, b)))
}

fn search_is(
    g: &Graph,
    colouring: &[usize],
    alive: Vec<usize>,
    colours: Vec<usize>,
) -> Option<Vec<usize>> {
    if colours.is_empty() {
        return Some(Vec::new());
    }
    let mut classes: Vec<(usize, Vec<usize>)> = colours
        .iter()
        .map(|&c| (c, alive.iter().copied().filter(|&v| colouring[v] == c).collect()))
        .collect();
    if classes.iter().any(|(_, vs)| vs.is_empty()) {
        return None;
    }
    let sub = g.induced(&alive);
    let ord = degeneracy_order(&sub);
    let d = ord.d;
    let k_rem = colours.len();
    let threshold = d * (k_rem - 1);
    if classes.iter().all(|(_, vs)| vs.len() > threshold) {
        // Greedy along the degeneracy order of the residual graph.
        let mut removed = vec![false; alive.len()];
        let mut colour_gone = vec![false; classes.len()];
        let mut witness = Vec::with_capacity(k_rem);
        let class_index: std::collections::HashMap<usize, usize> =
            classes.iter().enumerate().map(|(i, (c, _))| (*c, i)).collect();
        for _ in 0..k_rem {
            let local = ord
                .order
                .iter()
                .copied()
                .find(|&l| !removed[l] && !colour_gone[class_index[&colouring[alive[l]]]])
                .expect("classes stay nonempty by the counting argument");
            let v = alive[local];
            witness.push(v);
            colour_gone[class_index[&colouring[v]]] = true;
            removed[local] = true;
            for &w in sub.neighbors(local) {
                removed[w] = true;
            }
        }
        witness.sort_unstable();
        return Some(witness);
    }
    // Enumerate the small classes exhaustively, ascending by size.
    classes.sort_by_key(|(_, vs)| vs.len());
    let small: Vec<(usize, Vec<usize>)> =
        classes.iter().filter(|(_, vs)| vs.len() <= threshold).cloned().collect();
    let big_colours: Vec<usize> = classes
        .iter()
        .filter(|(_, vs)| vs.len() > threshold)
        .map(|(c, _)| *c)
        .collect();
    let mut tuple = Vec::with_capacity(small.len());
    enumerate_tuples(g, colouring, &alive, &small, &big_colours, &mut tuple)
}

fn enumerate_tuples(
    g: &Graph,
    colouring: &[usize],
    alive: &[usize],
    small: &[(usize, Vec<usize>)],
    big_colours: &[usize],
    tuple: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if tuple.len() == small.len() {
        // Delete the picked classes and closed neighbourhoods, recurse on the
        // large colours.
        let small_colours: Vec<usize> = small.iter().map(|(c, _)| *c).collect();
        let banned: std::collections::HashSet<usize> = tuple
            .iter()
            .flat_map(|&v| std::iter::once(v).chain(g.neighbors(v).iter().copied()))
            .collect();
        let residual: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&v| !banned.contains(&v) && !small_colours.contains(&colouring[v]))
            .collect();
        let rest = search_is(g, colouring, residual, big_colours.to_vec())?;
        let mut out = tuple.clone();
        out.extend(rest);
        out.sort_unstable();
        return Some(out);
    }
    let (_, candidates) = &small[tuple.len()];
    for &v in candidates {
        if tuple.iter().any(|&u| g.has_edge(u, v)) {
            continue;
        }
        tuple.push(v);
        if let Some(w) = enumerate_tuples(g, colouring, alive, small, big_colours, tuple) {
            return Some(w);
        }
        tuple.pop();
    }
    None
}

/// Detects a multicoloured subgraph copy of H (each colour met exactly once)
/// by iterating the k! bijective pattern colourings and testing whether a
/// colour-respecting homomorphism exists.
pub fn detect_multicol_sub(
    h: &Graph,
    g: &ColouredGraph,
    k: usize,
    config: &CountConfig,
) -> Result<bool, ColourfulError> {
    if h.vertex_count() != k {
        return Err(ColourfulError::PatternSizeMismatch(h.vertex_count(), k));
    }
    if !g.is_surjective(k) {
        return Err(ColourfulError::NotSurjective(k));
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let found = permute_until(&mut perm, 0, &mut |c_h| {
        use num_traits::Zero;
        !count_colour_respecting_homs(h, c_h, g, config).is_zero()
    });
    Ok(found)
}

fn permute_until(vals: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if i == vals.len() {
        return f(vals);
    }
    for j in i..vals.len() {
        vals.swap(i, j);
        if permute_until(vals, i + 1, f) {
            vals.swap(i, j);
            return true;
        }
        vals.swap(i, j);
    }
    false
}

/// Detects a multicoloured *induced* copy of H: for every acyclic
/// orientation, the kernel part is matched by exhaustive out-degree-bounded
/// expansion and the leftover sources (an independent set) are completed via
/// multicoloured independent set detection on a filtered host.
pub fn detect_multicol_indsub(
    h: &Graph,
    g: &ColouredGraph,
    k: usize,
    config: &CountConfig,
) -> Result<bool, ColourfulError> {
    if h.vertex_count() != k {
        return Err(ColourfulError::PatternSizeMismatch(h.vertex_count(), k));
    }
    if !g.is_surjective(k) {
        return Err(ColourfulError::NotSurjective(k));
    }
    if induced_matching_number(h) == 0 {
        // Edgeless pattern: any colourful independent set is an induced copy.
        return Ok(detect_multicol_is(g, k)?.is_some());
    }
    let host = OrientedHost::new(&g.graph);
    for og in orientations(h) {
        let kernel = find_kernel(&og);
        let sources = og.sources();
        let leftover: Vec<usize> = sources.iter().copied().filter(|s| !kernel.contains(s)).collect();
        let core: Vec<usize> = h.vertices().filter(|v| !leftover.contains(v)).collect();
        if detect_with_core(h, &og, g, &host, k, &core, &leftover, config) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[allow(clippy::too_many_arguments)]
fn detect_with_core(
    h: &Graph,
    og: &crate::orient::OrientedGraph,
    g: &ColouredGraph,
    host: &OrientedHost,
    k: usize,
    core: &[usize],
    leftover: &[usize],
    config: &CountConfig,
) -> bool {
    // Topological order of the core; all in-arcs of core vertices come from
    // the core (leftover vertices are sources).
    let order: Vec<usize> = og
        .topological_order()
        .expect("pattern orientation is acyclic")
        .into_iter()
        .filter(|v| core.contains(v))
        .collect();
    let mut image: Vec<u32> = vec![0; order.len()];
    let mut found = false;
    enumerate_core(h, og, g, host, k, core, leftover, &order, 0, &mut image, &mut found, config);
    found
}

#[allow(clippy::too_many_arguments)]
fn enumerate_core(
    h: &Graph,
    og: &crate::orient::OrientedGraph,
    g: &ColouredGraph,
    host: &OrientedHost,
    k: usize,
    core: &[usize],
    leftover: &[usize],
    order: &[usize],
    i: usize,
    image: &mut Vec<u32>,
    found: &mut bool,
    config: &CountConfig,
) {
    if *found {
        return;
    }
    if i == order.len() {
        *found = try_complete(h, og, g, host, k, core, leftover, order, image, config);
        return;
    }
    let hv = order[i];
    let anchors: Vec<u32> = (0..i).filter(|&j| og.has_arc(order[j], hv)).map(|j| image[j]).collect();
    let candidates: Vec<u32> = match anchors.split_first() {
        None => (0..host.vertex_count() as u32).collect(),
        Some((&first, rest)) => host
            .out(first)
            .iter()
            .copied()
            .filter(|&x| rest.iter().all(|&a| host.has_arc(a, x)))
            .collect(),
    };
    'cand: for x in candidates {
        // Validity is checked incrementally: distinct colours, injectivity,
        // and strong-embedding adjacency against all assigned core vertices.
        for j in 0..i {
            if image[j] == x || g.colouring[image[j] as usize] == g.colouring[x as usize] {
                continue 'cand;
            }
            let h_adj = h.has_edge(order[j], hv);
            let g_adj = g.graph.has_edge(image[j] as usize, x as usize);
            if h_adj != g_adj {
                continue 'cand;
            }
            // Arc direction must match exactly for adjacent pairs.
            if h_adj {
                let h_forward = og.has_arc(order[j], hv);
                let g_forward = host.has_arc(image[j], x);
                if h_forward != g_forward {
                    continue 'cand;
                }
            }
        }
        image[i] = x;
        enumerate_core(h, og, g, host, k, core, leftover, order, i + 1, image, found, config);
        if *found {
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn try_complete(
    _h: &Graph,
    og: &crate::orient::OrientedGraph,
    g: &ColouredGraph,
    host: &OrientedHost,
    k: usize,
    _core: &[usize],
    leftover: &[usize],
    order: &[usize],
    image: &[u32],
    config: &CountConfig,
) -> bool {
    let _ = config;
    let covered: std::collections::HashSet<usize> =
        image.iter().map(|&x| g.colouring[x as usize]).collect();
    let missing: Vec<usize> = (0..k).filter(|c| !covered.contains(c)).collect();
    debug_assert_eq!(missing.len(), leftover.len());
    if leftover.is_empty() {
        return true;
    }
    let im: std::collections::HashSet<u32> = image.iter().copied().collect();
    let mut perm: Vec<usize> = (0..missing.len()).collect();
    permute_until(&mut perm, 0, &mut |p| {
        // leftover[i] must take colour missing[p[i]].
        let mut class_sets: Vec<Vec<usize>> = Vec::with_capacity(leftover.len());
        for (i, &s) in leftover.iter().enumerate() {
            let colour = missing[p[i]];
            // Images of the out-neighbours of the leftover source.
            let want: std::collections::HashSet<u32> = og
                .out_neighbors(s)
                .iter()
                .map(|&u| {
                    let pos = order.iter().position(|&o| o == u).expect("out-neighbour in core");
                    image[pos]
                })
                .collect();
            let set: Vec<usize> = g
                .graph
                .vertices()
                .filter(|&v| {
                    if g.colouring[v] != colour || im.contains(&(v as u32)) {
                        return false;
                    }
                    let v32 = v as u32;
                    // Out-neighbours of v inside the image must be exactly
                    // the prescribed set, and no in-neighbours of v may lie
                    // in the image.
                    let outs: std::collections::HashSet<u32> =
                        host.out(v32).iter().copied().filter(|x| im.contains(x)).collect();
                    if outs != want {
                        return false;
                    }
                    !image.iter().any(|&x| host.has_arc(x, v32))
                })
                .collect();
            if set.is_empty() {
                return false;
            }
            class_sets.push(set);
        }
        // Multicoloured independent set on the filtered host with one colour
        // class per leftover source.
        let verts: Vec<usize> = class_sets.iter().flatten().copied().collect();
        let mut colouring = Vec::with_capacity(verts.len());
        for (ci, set) in class_sets.iter().enumerate() {
            colouring.extend(std::iter::repeat(ci).take(set.len()));
        }
        let sub = g.graph.induced(&verts);
        let coloured = ColouredGraph::new(sub, colouring);
        matches!(detect_multicol_is(&coloured, leftover.len()), Ok(Some(_)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, independent_set, path};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cfg() -> CountConfig {
        CountConfig { parallel: false, ..CountConfig::default() }
    }

    #[test]
    fn isolated_rainbow_is_yes() {
        let g = ColouredGraph::new(independent_set(4).unwrap(), vec![0, 1, 2, 3]);
        let w = detect_multicol_is(&g, 4).unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn single_edge_two_colours_is_no() {
        let g = ColouredGraph::new(clique(2).unwrap(), vec![0, 1]);
        assert!(detect_multicol_is(&g, 2).unwrap().is_none());
    }

    #[test]
    fn non_surjective_colouring_rejected() {
        let g = ColouredGraph::new(independent_set(3).unwrap(), vec![0, 0, 0]);
        assert!(detect_multicol_is(&g, 2).is_err());
    }

    fn brute_multicol_is(g: &ColouredGraph, k: usize) -> bool {
        let n = g.graph.vertex_count();
        let mut pick = Vec::new();
        fn go(g: &ColouredGraph, k: usize, start: usize, pick: &mut Vec<usize>) -> bool {
            if pick.len() == k {
                return check_colourful_is(g, k, pick);
            }
            for v in start..g.graph.vertex_count() {
                pick.push(v);
                if go(g, k, v + 1, pick) {
                    return true;
                }
                pick.pop();
            }
            false
        }
        let _ = n;
        go(g, k, 0, &mut pick)
    }

    #[test]
    fn is_detector_matches_brute_force() {
        let mut rng = StdRng::seed_from_u64(2024);
        for round in 0..1000 {
            let n = rng.gen_range(1..=12);
            let k = rng.gen_range(1..=4.min(n));
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let graph = Graph::new(n, &edges).unwrap();
            let mut colouring: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
            for c in 0..k {
                // Force surjectivity.
                colouring[c % n] = c;
            }
            let g = ColouredGraph::new(graph, colouring);
            if !g.is_surjective(k) {
                continue;
            }
            let fast = detect_multicol_is(&g, k).unwrap().is_some();
            let brute = brute_multicol_is(&g, k);
            assert_eq!(fast, brute, "round {round}");
        }
    }

    fn brute_multicol_sub(h: &Graph, g: &ColouredGraph, k: usize, induced: bool) -> bool {
        // All injective maps H -> G, colourful image, edge conditions.
        let n = g.graph.vertex_count();
        let mut image = vec![usize::MAX; k];
        let mut used = vec![false; n];
        fn go(
            h: &Graph,
            g: &ColouredGraph,
            induced: bool,
            v: usize,
            image: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let k = h.vertex_count();
            if v == k {
                let mut cols = vec![false; k];
                for &x in image.iter() {
                    if cols[g.colouring[x]] {
                        return false;
                    }
                    cols[g.colouring[x]] = true;
                }
                for a in 0..k {
                    for b in a + 1..k {
                        let ha = h.has_edge(a, b);
                        let ga = g.graph.has_edge(image[a], image[b]);
                        if ha && !ga {
                            return false;
                        }
                        if induced && ha != ga {
                            return false;
                        }
                    }
                }
                return true;
            }
            for x in 0..g.graph.vertex_count() {
                if used[x] {
                    continue;
                }
                image[v] = x;
                used[x] = true;
                if go(h, g, induced, v + 1, image, used) {
                    used[x] = false;
                    return true;
                }
                used[x] = false;
            }
            false
        }
        go(h, g, induced, 0, &mut image, &mut used)
    }

    #[test]
    fn sub_detector_examples() {
        let cfg = cfg();
        let k3 = clique(3).unwrap();
        let rainbow = ColouredGraph::new(k3.clone(), vec![0, 1, 2]);
        assert!(detect_multicol_sub(&k3, &rainbow, 3, &cfg).unwrap());
        let repeat = ColouredGraph::new(k3.clone(), vec![0, 0, 1]);
        // k = 3 requires surjectivity, which fails here.
        assert!(detect_multicol_sub(&k3, &repeat, 3, &cfg).is_err());
        let host = ColouredGraph::new(Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(), vec![0, 1, 2, 0]);
        assert!(!detect_multicol_sub(&k3, &host, 3, &cfg).unwrap());
    }

    #[test]
    fn indsub_detector_examples() {
        let cfg = cfg();
        let p3 = path(3).unwrap();
        let rainbow_p3 = ColouredGraph::new(p3.clone(), vec![0, 1, 2]);
        assert!(detect_multicol_indsub(&p3, &rainbow_p3, 3, &cfg).unwrap());
        let rainbow_k3 = ColouredGraph::new(clique(3).unwrap(), vec![0, 1, 2]);
        assert!(!detect_multicol_indsub(&p3, &rainbow_k3, 3, &cfg).unwrap());
        // Edgeless pattern delegates to the independent-set detector.
        let is3 = independent_set(3).unwrap();
        assert_eq!(
            detect_multicol_indsub(&is3, &rainbow_k3, 3, &cfg).unwrap(),
            detect_multicol_is(&rainbow_k3, 3).unwrap().is_some()
        );
    }

    #[test]
    fn detectors_match_brute_force_randomized() {
        let cfg = cfg();
        let mut rng = StdRng::seed_from_u64(77);
        let patterns: Vec<Graph> = crate::canon::all_graph_classes_up_to(4);
        for round in 0..500 {
            let n = rng.gen_range(1..=10);
            let k = rng.gen_range(1..=4.min(n));
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.35) {
                        edges.push((u, v));
                    }
                }
            }
            let graph = Graph::new(n, &edges).unwrap();
            let mut colouring: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
            for c in 0..k {
                colouring[c % n] = c;
            }
            let g = ColouredGraph::new(graph, colouring);
            if !g.is_surjective(k) {
                continue;
            }
            let ks: Vec<&Graph> = patterns.iter().filter(|p| p.vertex_count() == k).collect();
            let h = ks[rng.gen_range(0..ks.len())];
            let want_sub = brute_multicol_sub(h, &g, k, false);
            let got_sub = detect_multicol_sub(h, &g, k, &cfg).unwrap();
            assert_eq!(got_sub, want_sub, "sub round {round} H={h:?} G={g:?}");
            let want_ind = brute_multicol_sub(h, &g, k, true);
            let got_ind = detect_multicol_indsub(h, &g, k, &cfg).unwrap();
            assert_eq!(got_ind, want_ind, "indsub round {round} H={h:?} G={g:?}");
        }
    }
}
