//! Linear-combination bases expressing subgraph and induced-subgraph counts
//! as rational combinations of homomorphism counts, their exact evaluation,
//! and the tensor-product system recovering hom counts from a subgraph-count
//! oracle.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::canon::{all_graph_classes, automorphism_count, canonical_form, canonical_graph, CanonicalLabel};
use crate::dtd::all_partitions;
use crate::graph::{clique, quotient, tensor_product, Graph};
use crate::hom::{count_homs_dtd, CountConfig, HomCount};

/// A finite linear combination of homomorphism counts, keyed by canonical
/// graphs. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBasis {
    /// Terms sorted by canonical label; each graph is canonically labelled.
    terms: Vec<(CanonicalLabel, Graph, BigRational)>,
}

impl HomBasis {
    fn collect(raw: Vec<(Graph, BigRational)>) -> HomBasis {
        let mut map: std::collections::BTreeMap<CanonicalLabel, (Graph, BigRational)> =
            Default::default();
        for (g, coef) in raw {
            let label = canonical_form(&g).expect("pattern-sized term");
            match map.entry(label) {
                std::collections::btree_map::Entry::Occupied(mut e) => e.get_mut().1 += coef,
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert((canonical_graph(&g).expect("pattern-sized term"), coef));
                }
            }
        }
        let terms = map
            .into_iter()
            .filter(|(_, (_, c))| !c.is_zero())
            .map(|(l, (g, c))| (l, g, c))
            .collect();
        HomBasis { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Graph, &BigRational)> {
        self.terms.iter().map(|(_, g, c)| (g, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &Graph) -> Option<&BigRational> {
        let label = canonical_form(g).ok()?;
        self.terms
            .binary_search_by_key(&label, |(l, _, _)| *l)
            .ok()
            .map(|i| &self.terms[i].2)
    }

    /// Evaluates the combination against a hom-count provider.
    pub fn evaluate(&self, mut hom: impl FnMut(&Graph) -> HomCount) -> BigRational {
        let mut total = BigRational::zero();
        for (_, g, coef) in &self.terms {
            let h = BigInt::from_biguint(Sign::Plus, hom(g));
            total += coef * BigRational::from_integer(h);
        }
        total
    }

    /// One line per term: "coefficient<TAB>n:bits" with the canonical label.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (label, _, coef) in &self.terms {
            s.push_str(&format!("{coef}\t{}:{:x}\n", label.n, label.bits));
        }
        s
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("evaluation produced the non-integer total {0}, which signals a basis bug")]
    NonIntegerTotal(BigRational),
    #[error("evaluation produced the negative total {0}, which signals a basis bug")]
    NegativeTotal(BigInt),
    #[error("pattern too large for basis construction: {0} vertices")]
    PatternTooLarge(usize),
    #[error("tensor system stayed singular after {0} candidate query graphs")]
    SingularSystem(usize),
}

const BASIS_MAX_VERTICES: usize = 10;
const INDSUB_MAX_NON_EDGES: usize = 16;

fn mobius(n: usize, rho: &crate::graph::VertexPartition) -> BigInt {
    let mut value = BigInt::one();
    for block in rho.blocks() {
        value *= factorial(block.len() - 1);
    }
    if (n - rho.block_count()) % 2 == 1 {
        value = -value;
    }
    value
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Basis with |Sub(H, G)| = sum of coef * |Hom(H', G)|: Moebius inversion
/// over the partition lattice, self-loop quotients dropped, isomorphic terms
/// collected, |Aut(H)| folded into the coefficients.
pub fn sub_basis(h: &Graph) -> Result<HomBasis, BasisError> {
    let n = h.vertex_count();
    if n > BASIS_MAX_VERTICES {
        return Err(BasisError::PatternTooLarge(n));
    }
    let aut = BigInt::from(automorphism_count(h));
    let mut raw = Vec::new();
    for rho in all_partitions(n) {
        if let Ok(q) = quotient(h, &rho) {
            let coef = BigRational::new(mobius(n, &rho), aut.clone());
            raw.push((q, coef));
        }
    }
    Ok(HomBasis::collect(raw))
}

/// Basis with |IndSub(H, G)| = sum of coef * |Hom(H', G)|: the alternating
/// edge-supergraph expansion composed with the subgraph basis of each
/// supergraph.
pub fn indsub_basis(h: &Graph) -> Result<HomBasis, BasisError> {
    let n = h.vertex_count();
    if n > BASIS_MAX_VERTICES {
        return Err(BasisError::PatternTooLarge(n));
    }
    let non_edges = h.non_edges();
    if non_edges.len() > INDSUB_MAX_NON_EDGES {
        return Err(BasisError::PatternTooLarge(n));
    }
    let aut = BigInt::from(automorphism_count(h));
    let partitions = all_partitions(n);
    let mut raw = Vec::new();
    for mask in 0u32..(1 << non_edges.len()) {
        let extra: Vec<(usize, usize)> = (0..non_edges.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| non_edges[i])
            .collect();
        let sup = h.with_edges(&extra).expect("supergraph of a simple graph");
        let sign = if extra.len() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for rho in &partitions {
            if let Ok(q) = quotient(&sup, rho) {
                let coef = BigRational::new(sign.clone() * mobius(n, rho), aut.clone());
                raw.push((q, coef));
            }
        }
    }
    Ok(HomBasis::collect(raw))
}

fn rational_to_count(total: BigRational) -> Result<BigUint, BasisError> {
    if !total.denom().is_one() {
        return Err(BasisError::NonIntegerTotal(total));
    }
    let int = total.to_integer();
    if int.is_negative() {
        return Err(BasisError::NegativeTotal(int));
    }
    Ok(int.to_biguint().expect("non-negative"))
}

/// Exact |Sub(H, G)| by evaluating the subgraph basis with the decomposition
/// engine.
pub fn count_subs_exact(h: &Graph, g: &Graph, config: &CountConfig) -> Result<BigUint, BasisError> {
    let basis = sub_basis(h)?;
    rational_to_count(basis.evaluate(|term| count_homs_dtd(term, g, config)))
}

/// Exact |IndSub(H, G)|.
pub fn count_indsubs_exact(h: &Graph, g: &Graph, config: &CountConfig) -> Result<BigUint, BasisError> {
    let basis = indsub_basis(h)?;
    rational_to_count(basis.evaluate(|term| count_homs_dtd(term, g, config)))
}

pub const PROPERTY_MAX_K: usize = 6;

/// Number of induced k-vertex subgraphs of G satisfying the property:
/// evaluates the induced count for every isomorphism class on k vertices
/// where the property holds and sums.
pub fn count_property_exact(
    phi: &dyn Fn(&Graph) -> bool,
    k: usize,
    g: &Graph,
    config: &CountConfig,
) -> Result<BigUint, BasisError> {
    if k > PROPERTY_MAX_K {
        return Err(BasisError::PatternTooLarge(k));
    }
    let mut total = BigUint::zero();
    for h in all_graph_classes(k) {
        if phi(&h) {
            total += count_indsubs_exact(&h, g, config)?;
        }
    }
    Ok(total)
}

/// Result of the tensor-system recovery: hom counts of every basis term.
#[derive(Clone, Debug)]
pub struct RecoveredHoms {
    pub terms: Vec<(Graph, BigUint)>,
    /// The query graphs actually used.
    pub queries: Vec<Graph>,
}

/// Recovers |Hom(H', G)| for every term H' of the subgraph basis of H, using
/// only an oracle for |Sub(H, .)|: queries the oracle on tensor products
/// G (x) H_i, assembles the linear system via hom-count multiplicativity,
/// verifies invertibility exactly, and solves.
///
/// Query graphs default to cliques K_1, K_2, ...; whenever the system stays
/// singular, deterministically seeded random graphs of increasing size are
/// appended until it becomes invertible.
pub fn recover_hom_counts_via_tensor(
    h: &Graph,
    g: &Graph,
    sub_oracle: &mut dyn FnMut(&Graph) -> BigUint,
    config: &CountConfig,
) -> Result<RecoveredHoms, BasisError> {
    let basis = sub_basis(h)?;
    let m = basis.len();
    let terms: Vec<&Graph> = basis.terms().map(|(g, _)| g).collect();
    let coefs: Vec<&BigRational> = basis.terms().map(|(_, c)| c).collect();

    // Select query graphs by incremental rank over exact rationals.
    let mut selected: Vec<(Graph, Vec<BigRational>)> = Vec::new();
    let mut echelon: Vec<Vec<BigRational>> = Vec::new();
    let mut attempts = 0usize;
    let max_attempts = 24 + 4 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_7e45);
    while selected.len() < m && attempts < max_attempts {
        attempts += 1;
        let candidate = if attempts <= m + 2 {
            clique(attempts).expect("clique size >= 1")
        } else {
            random_graph(&mut rng, 2 + attempts % 5)
        };
        let row: Vec<BigRational> = terms
            .iter()
            .zip(&coefs)
            .map(|(t, c)| {
                let hom = BigInt::from_biguint(Sign::Plus, count_homs_dtd(t, &candidate, config));
                *c * BigRational::from_integer(hom)
            })
            .collect();
        if adds_rank(&mut echelon, row.clone()) {
            selected.push((candidate, row));
        }
    }
    if selected.len() < m {
        return Err(BasisError::SingularSystem(attempts));
    }

    // Solve M x = b exactly, b from the oracle on the tensor products.
    let mut matrix: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    let mut queries = Vec::with_capacity(m);
    for (q, row) in &selected {
        let product = tensor_product(g, q);
        let b = sub_oracle(&product);
        matrix.push(row.clone());
        rhs.push(BigRational::from_integer(BigInt::from_biguint(Sign::Plus, b)));
        queries.push(q.clone());
    }
    let solution = solve_exact(matrix, rhs);
    let mut out = Vec::with_capacity(m);
    for (t, x) in terms.iter().zip(solution) {
        let count = rational_to_count(x)?;
        out.push(((*t).clone(), count));
    }
    Ok(RecoveredHoms { terms: out, queries })
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("random simple graph")
}

/// Gaussian elimination helper: reduces `row` against the echelon rows; if a
/// nonzero pivot remains the row is appended and the rank grew.
fn adds_rank(echelon: &mut Vec<Vec<BigRational>>, mut row: Vec<BigRational>) -> bool {
    for e in echelon.iter() {
        let pivot = e.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero");
        if !row[pivot].is_zero() {
            let factor = &row[pivot] / &e[pivot];
            for (r, v) in row.iter_mut().zip(e.iter()) {
                *r -= &factor * v;
            }
        }
    }
    if row.iter().any(|x| !x.is_zero()) {
        echelon.push(row);
        true
    } else {
        false
    }
}

/// Exact solve of a square invertible rational system.
fn solve_exact(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).expect("matrix is invertible");
        m.swap(col, pivot);
        b.swap(col, pivot);
        let scale = m[col][col].clone();
        for x in &mut m[col] {
            *x /= &scale;
        }
        b[col] /= &scale;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c2 in 0..n {
                    let v = &m[col][c2] * &factor;
                    m[r][c2] -= v;
                }
                let v = &b[col] * &factor;
                b[r] -= v;
            }
        }
    }
    b
}
