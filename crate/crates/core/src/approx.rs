//! Randomized approximate counting of subgraphs, induced subgraphs, and
//! induced subgraphs with a property, with a 2/3 success guarantee and
//! seeded, schedule-independent reproducibility.
//!
//! The subgraph and induced-subgraph estimators sample uniform random
//! k-colourings of the host and compute the exact number of colourful copies
//! per sample through the decomposition engine (inclusion-exclusion over
//! avoided colour classes, carried as one vector of counts per colour
//! subset); a colourful copy survives a random colouring with probability
//! k!/k^k, so scaling by k^k/k! gives an unbiased estimate, aggregated by
//! median of means.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{automorphism_count, canonical_form, CanonicalLabel};
use crate::dtd::{dtd_from_kernel, find_kernel};
use crate::graph::{degeneracy_order, Graph};
use crate::hom::{count_oriented_homs, CountConfig, CountSemiring, OrientedHost};
use crate::orient::orientations;

/// Outcome of a randomized counting run. Reproducible given the seed; the
/// construction guarantees success probability at least 2/3.
#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub estimate: BigRational,
    pub epsilon: f64,
    /// Success probability guaranteed by construction.
    pub confidence: BigRational,
    pub trials: u64,
    pub seed: u64,
    /// Whether the run short-circuited into an exact computation.
    pub exact: bool,
}

impl ApproxResult {
    pub fn estimate_f64(&self) -> f64 {
        self.estimate.to_f64().unwrap_or(f64::NAN)
    }
}

/// Trial budget. `samples_per_group = None` uses ceil(3 e^k / eps^2), the
/// declared default; the constant is an engineering knob validated
/// empirically, not a paper-derived bound.
#[derive(Clone, Copy, Debug)]
pub struct TrialConfig {
    pub groups: usize,
    pub samples_per_group: Option<usize>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig { groups: 9, samples_per_group: None }
    }
}

impl TrialConfig {
    fn group_size(&self, k: usize, eps: f64) -> usize {
        self.samples_per_group
            .unwrap_or_else(|| ((3.0 * (k as f64).exp() / (eps * eps)).ceil() as usize).max(1))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("pattern has {0} vertices; the colourful sampler is capped at {1}")]
    PatternTooLarge(usize, usize),
    #[error("counts may overflow the fixed-width sampler: {0} vertices, k = {1}")]
    HostTooLarge(usize, usize),
    #[error(transparent)]
    Basis(#[from] crate::basis::BasisError),
}

const APPROX_MAX_K: usize = 12;

fn check_sizes(k: usize, n: usize) -> Result<(), ApproxError> {
    if k > APPROX_MAX_K {
        return Err(ApproxError::PatternTooLarge(k, APPROX_MAX_K));
    }
    // Counts are carried in u128; n^k times a safety margin must fit.
    if k as f64 * (n.max(2) as f64).log2() > 110.0 {
        return Err(ApproxError::HostTooLarge(n, k));
    }
    Ok(())
}

/// Vector-valued counting: entry T holds the number of homomorphisms whose
/// image avoids every colour in T. The alternating sum over T is then the
/// colourful hom count.
struct SubsetVectors<'a> {
    k: usize,
    colouring: &'a [usize],
}

impl CountSemiring for SubsetVectors<'_> {
    type Value = Vec<u128>;
    fn zero(&self) -> Vec<u128> {
        vec![0; 1 << self.k]
    }
    fn one(&self) -> Vec<u128> {
        vec![1; 1 << self.k]
    }
    fn add_assign(&self, acc: &mut Vec<u128>, v: &Vec<u128>) {
        for (a, b) in acc.iter_mut().zip(v) {
            *a = a.checked_add(*b).expect("colourful count overflow");
        }
    }
    fn mul(&self, a: &Vec<u128>, b: &Vec<u128>) -> Vec<u128> {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.checked_mul(*y).expect("colourful count overflow"))
            .collect()
    }
    fn is_zero(&self, v: &Vec<u128>) -> bool {
        v.iter().all(|&x| x == 0)
    }
    fn weight(&self, _hv: usize, gv: u32) -> Option<Vec<u128>> {
        let c = self.colouring[gv as usize];
        Some((0..1u32 << self.k).map(|t| u128::from(t >> c & 1 == 0)).collect())
    }
}

/// Exact number of colourful homomorphisms of H into the coloured host,
/// summed over acyclic orientations and multiplied across components
/// (componentwise vectors, inclusion-exclusion at the end).
fn colourful_homs(h: &Graph, host: &OrientedHost, colouring: &[usize], k: usize, config: &CountConfig) -> u128 {
    let semiring = SubsetVectors { k, colouring };
    let mut total = semiring.one();
    for comp in h.components() {
        let sub = h.induced(&comp);
        let mut comp_vec = semiring.zero();
        for og in orientations(&sub) {
            let kernel = find_kernel(&og);
            let dtd = dtd_from_kernel(&og, &kernel).expect("kernel decomposition");
            let v = count_oriented_homs(&og, &dtd, host, &|_, _| true, &semiring, config.dict);
            semiring.add_assign(&mut comp_vec, &v);
        }
        total = semiring.mul(&total, &comp_vec);
    }
    let mut signed: i128 = 0;
    for (t, &v) in total.iter().enumerate() {
        let v = i128::try_from(v).expect("colourful count overflow");
        if (t as u32).count_ones() % 2 == 0 {
            signed += v;
        } else {
            signed -= v;
        }
    }
    debug_assert!(signed >= 0, "inclusion-exclusion must be non-negative");
    signed.max(0) as u128
}

/// Exact number of colourful copies (subgraphs with a rainbow vertex set)
/// under the given colouring.
pub(crate) fn colourful_copies(
    h: &Graph,
    host: &OrientedHost,
    colouring: &[usize],
    k: usize,
    config: &CountConfig,
) -> u128 {
    let homs = colourful_homs(h, host, colouring, k, config);
    let aut = automorphism_count(h) as u128;
    debug_assert_eq!(homs % aut, 0, "colourful homs split into copies times |Aut|");
    homs / aut
}

/// Exact number of colourful *induced* copies: alternating edge-supergraph
/// sum of colourful embedding counts, collected per supergraph isomorphism
/// class, divided by |Aut(H)|.
pub(crate) fn colourful_induced_copies(
    supergraph_classes: &[(Graph, i64)],
    aut_h: u128,
    host: &OrientedHost,
    colouring: &[usize],
    k: usize,
    config: &CountConfig,
) -> u128 {
    let mut signed: i128 = 0;
    for (rep, coef) in supergraph_classes {
        let cf = colourful_homs(rep, host, colouring, k, config);
        signed += *coef as i128 * i128::try_from(cf).expect("colourful count overflow");
    }
    debug_assert!(signed >= 0);
    let total = signed.max(0) as u128;
    debug_assert_eq!(total % aut_h, 0);
    total / aut_h
}

/// Groups the edge-supergraphs of H (same vertex set) by isomorphism class
/// with signed multiplicities (-1)^{|added|}.
pub(crate) fn supergraph_classes(h: &Graph) -> Vec<(Graph, i64)> {
    let non_edges = h.non_edges();
    assert!(non_edges.len() <= 20, "supergraph enumeration cap");
    let mut map: std::collections::BTreeMap<CanonicalLabel, (Graph, i64)> = Default::default();
    for mask in 0u32..(1 << non_edges.len()) {
        let extra: Vec<(usize, usize)> =
            (0..non_edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| non_edges[i]).collect();
        let sup = h.with_edges(&extra).expect("supergraph");
        let label = canonical_form(&sup).expect("pattern-sized");
        let sign = if extra.len() % 2 == 0 { 1 } else { -1 };
        map.entry(label).and_modify(|(_, c)| *c += sign).or_insert((sup, sign));
    }
    map.into_values().filter(|(_, c)| *c != 0).collect()
}

fn random_colouring(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..k)).collect()
}

/// Median of means over per-trial values: trials are grouped in order, group
/// sums are compared, the lower median group mean is scaled by `scale`.
fn aggregate(values: &[u128], groups: usize, scale: BigRational) -> BigRational {
    let m = values.len() / groups;
    let mut sums: Vec<u128> = values.chunks(m).take(groups).map(|c| c.iter().sum()).collect();
    sums.sort_unstable();
    let median = sums[(groups - 1) / 2];
    let mean = BigRational::new(BigInt::from(median), BigInt::from(m));
    mean * scale
}

fn run_trials(
    total: usize,
    seed: u64,
    n: usize,
    k: usize,
    parallel: bool,
    per_sample: impl Fn(&[usize]) -> u128 + Sync,
) -> Vec<u128> {
    let trial = |t: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64 + 1);
        let colouring = random_colouring(&mut rng, n, k);
        per_sample(&colouring)
    };
    if parallel {
        (0..total).into_par_iter().map(trial).collect()
    } else {
        (0..total).map(trial).collect()
    }
}

fn scale_factor(k: usize) -> BigRational {
    // k^k / k!
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=k {
        num *= BigInt::from(k);
        den *= BigInt::from(i);
    }
    BigRational::new(num, den)
}

/// Multiplicative eps-approximation of |Sub(H, G)| with probability >= 2/3.
pub fn approx_count_subs(
    h: &Graph,
    g: &Graph,
    eps: f64,
    seed: u64,
    trials: &TrialConfig,
    config: &CountConfig,
) -> Result<ApproxResult, ApproxError> {
    if !(0.0..1.0).contains(&eps) || eps <= 0.0 {
        return Err(ApproxError::BadEpsilon(eps));
    }
    let k = h.vertex_count();
    let n = g.vertex_count();
    check_sizes(k, n)?;
    if k == 0 || n < k {
        return Ok(exact_result(BigRational::from_integer(BigInt::from(u8::from(k == 0))), eps, seed));
    }
    let host = OrientedHost::new(g);
    let m = trials.group_size(k, eps);
    let total = m * trials.groups;
    let values = run_trials(total, seed, n, k, config.parallel, |colouring| {
        colourful_copies(h, &host, colouring, k, config)
    });
    let estimate = aggregate(&values, trials.groups, scale_factor(k));
    Ok(ApproxResult {
        estimate,
        epsilon: eps,
        confidence: BigRational::new(BigInt::from(2), BigInt::from(3)),
        trials: total as u64,
        seed,
        exact: false,
    })
}

/// Multiplicative eps-approximation of |IndSub(H, G)| with probability >= 2/3.
pub fn approx_count_indsubs(
    h: &Graph,
    g: &Graph,
    eps: f64,
    seed: u64,
    trials: &TrialConfig,
    config: &CountConfig,
) -> Result<ApproxResult, ApproxError> {
    if !(0.0..1.0).contains(&eps) || eps <= 0.0 {
        return Err(ApproxError::BadEpsilon(eps));
    }
    let k = h.vertex_count();
    let n = g.vertex_count();
    check_sizes(k, n)?;
    if k == 0 || n < k {
        return Ok(exact_result(BigRational::from_integer(BigInt::from(u8::from(k == 0))), eps, seed));
    }
    let host = OrientedHost::new(g);
    let classes = supergraph_classes(h);
    let aut = automorphism_count(h) as u128;
    let m = trials.group_size(k, eps);
    let total = m * trials.groups;
    let values = run_trials(total, seed, n, k, config.parallel, |colouring| {
        colourful_induced_copies(&classes, aut, &host, colouring, k, config)
    });
    let estimate = aggregate(&values, trials.groups, scale_factor(k));
    Ok(ApproxResult {
        estimate,
        epsilon: eps,
        confidence: BigRational::new(BigInt::from(2), BigInt::from(3)),
        trials: total as u64,
        seed,
        exact: false,
    })
}

fn exact_result(value: BigRational, eps: f64, seed: u64) -> ApproxResult {
    ApproxResult {
        estimate: value,
        epsilon: eps,
        confidence: BigRational::one(),
        trials: 0,
        seed,
        exact: true,
    }
}

/// How a property behaves on independent sets; fixes the branch of the
/// Monte Carlo property counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsBehaviour {
    /// The property holds on every independent set with at least c vertices.
    TrueFrom(usize),
    /// The property fails on the independent set with c vertices and the
    /// property is minor-closed (hence fails on every graph with >= c
    /// vertices).
    FalseFromMinorClosed(usize),
}

/// Determines the behaviour of a minor-closed property on independent sets by
/// testing IS_1, IS_2, ... up to `cap`.
pub fn threshold_for_minor_closed(phi: &dyn Fn(&Graph) -> bool, cap: usize) -> IsBehaviour {
    for c in 1..=cap {
        let is_c = crate::graph::independent_set(c).expect("c >= 1");
        if !phi(&is_c) {
            return IsBehaviour::FalseFromMinorClosed(c);
        }
    }
    IsBehaviour::TrueFrom(1)
}

/// Monte Carlo counting of k-vertex induced subgraphs satisfying a property:
/// exact enumeration when k < c or n < k(d+1), otherwise uniform k-subset
/// sampling with ceil(3 (dk+k)^k / eps^2) samples scaled by C(n, k). The
/// minor-closed false branch returns 0 immediately for k > c.
pub fn approx_count_property(
    phi: &(dyn Fn(&Graph) -> bool + Sync),
    k: usize,
    g: &Graph,
    eps: f64,
    seed: u64,
    behaviour: IsBehaviour,
    config: &CountConfig,
) -> Result<ApproxResult, ApproxError> {
    if !(0.0..1.0).contains(&eps) || eps <= 0.0 {
        return Err(ApproxError::BadEpsilon(eps));
    }
    let n = g.vertex_count();
    match behaviour {
        IsBehaviour::FalseFromMinorClosed(c) => {
            if k > c {
                return Ok(exact_result(BigRational::zero(), eps, seed));
            }
            Ok(exact_result(exact_property_count(phi, k, g), eps, seed))
        }
        IsBehaviour::TrueFrom(c) => {
            let d = degeneracy_order(g).d;
            if k < c || n < k * (d + 1) {
                return Ok(exact_result(exact_property_count(phi, k, g), eps, seed));
            }
            // Sampling branch: hit probability >= (k(d+1))^{-k}.
            let base = (d * k + k) as f64;
            let samples_f = (3.0 * base.powi(k as i32) / (eps * eps)).ceil();
            let samples = samples_f.min(1e9) as usize;
            let hits: u64 = {
                let trial = |t: usize| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(t as u64 + 1);
                    let subset = random_subset(&mut rng, n, k);
                    u64::from(phi(&g.induced(&subset)))
                };
                if config.parallel {
                    (0..samples).into_par_iter().map(trial).sum()
                } else {
                    (0..samples).map(trial).sum()
                }
            };
            let estimate = BigRational::new(
                BigInt::from(hits) * BigInt::from_biguint(num_bigint::Sign::Plus, binomial(n, k)),
                BigInt::from(samples),
            );
            Ok(ApproxResult {
                estimate,
                epsilon: eps,
                confidence: BigRational::new(BigInt::from(2), BigInt::from(3)),
                trials: samples as u64,
                seed,
                exact: false,
            })
        }
    }
}

fn exact_property_count(phi: &(dyn Fn(&Graph) -> bool + Sync), k: usize, g: &Graph) -> BigRational {
    let mut count = BigUint::zero();
    let mut subset: Vec<usize> = Vec::with_capacity(k);
    fn go(
        phi: &(dyn Fn(&Graph) -> bool + Sync),
        g: &Graph,
        k: usize,
        start: usize,
        subset: &mut Vec<usize>,
        count: &mut BigUint,
    ) {
        if subset.len() == k {
            if phi(&g.induced(subset)) {
                *count += 1u32;
            }
            return;
        }
        let left = k - subset.len();
        for v in start..=g.vertex_count().saturating_sub(left) {
            subset.push(v);
            go(phi, g, k, v + 1, subset, count);
            subset.pop();
        }
    }
    if k <= g.vertex_count() {
        go(phi, g, k, 0, &mut subset, &mut count);
    }
    BigRational::from_integer(BigInt::from_biguint(num_bigint::Sign::Plus, count))
}

/// Floyd's algorithm: uniform k-subset of {0..n-1}, sorted.
fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for j in n - k..n {
        let t = rng.gen_range(0..=j);
        if chosen.contains(&t) {
            chosen.push(j);
        } else {
            chosen.push(t);
        }
    }
    chosen.sort_unstable();
    chosen
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
    }
    let mut den = BigUint::one();
    for i in 1..=k {
        den *= BigUint::from(i);
    }
    num / den
}
