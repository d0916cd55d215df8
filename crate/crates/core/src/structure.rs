//! Normal closures, the derived subgroup, coset actions on quotients,
//! composition factors, and the invariant `a(R) = Σ_p a_p(R) log₂ p`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{build_chain, StabilizerChain, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::perm::{GroupSpec, Permutation};

fn closure_chain(g: &GroupSpec, seeds: &[Permutation]) -> StabilizerChain {
    let mut chain = StabilizerChain::trivial(g.degree());
    let mut queue: VecDeque<Permutation> = VecDeque::new();
    for s in seeds {
        if chain.insert(s) {
            queue.push_back(s.clone());
        }
    }
    while let Some(h) = queue.pop_front() {
        for gen in g.nontrivial_generators() {
            let c = h.conjugate_by(gen);
            if chain.insert(&c) {
                queue.push_back(c);
            }
        }
    }
    chain
}

/// Smallest normal subgroup of `g` containing `seeds`.
pub fn normal_closure(g: &GroupSpec, seeds: &[Permutation]) -> Result<GroupSpec> {
    let chain = build_chain(g);
    for s in seeds {
        if !chain.contains(s)? {
            return Err(Error::NotInGroup);
        }
    }
    Ok(closure_chain(g, seeds).to_group())
}

fn derived_chain(g: &GroupSpec) -> StabilizerChain {
    let gens: Vec<&Permutation> = g.nontrivial_generators().collect();
    let mut seeds = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = Permutation::commutator(a, b);
            if !c.is_identity() {
                seeds.push(c);
            }
        }
    }
    closure_chain(g, &seeds)
}

/// The commutator subgroup `G′`: the normal closure of the commutators of
/// all generator pairs.
pub fn derived_subgroup(g: &GroupSpec) -> GroupSpec {
    derived_chain(g).to_group()
}

/// `|G / G′|`.
pub fn abelianization_order(g: &GroupSpec) -> BigUint {
    build_chain(g).order() / derived_chain(g).order()
}

/// The chain's lexicographically least element of the right coset `N x`,
/// compared on the images of `n`'s base.
fn coset_rep(n: &StabilizerChain, mut x: Permutation) -> Permutation {
    for level in 0..n.depth() {
        let best = n
            .orbit(level)
            .iter()
            .copied()
            .min_by_key(|&b| x.apply(b))
            .expect("nonempty orbit");
        x = n.transversal(level, best).unwrap().then(&x);
    }
    x
}

/// Action of `g` on the right cosets of the normal subgroup `n`, on
/// `|G : N|` points with the coset `N` as point 0. The kernel is `N`.
pub fn quotient_action(g: &GroupSpec, n: &GroupSpec) -> Result<GroupSpec> {
    quotient_action_capped(g, n, DEFAULT_ELEMENT_CAP)
}

pub fn quotient_action_capped(g: &GroupSpec, n: &GroupSpec, cap: u64) -> Result<GroupSpec> {
    if g.degree() != n.degree() {
        return Err(Error::DegreeMismatch {
            left: g.degree(),
            right: n.degree(),
        });
    }
    let g_chain = build_chain(g);
    let n_chain = build_chain(n);
    for h in n.generators() {
        if !g_chain.contains_unchecked(h) {
            return Err(Error::NotInGroup);
        }
        for x in g.generators() {
            if !n_chain.contains_unchecked(&h.conjugate_by(x)) {
                return Err(Error::NotNormal);
            }
        }
    }
    let index = g_chain.order() / n_chain.order();
    if index > BigUint::from(cap) {
        return Err(Error::OrderCap { order: index, cap });
    }
    let index = index.to_usize().expect("below cap");
    let mut reps = vec![coset_rep(&n_chain, Permutation::identity(g.degree()))];
    let mut lookup: HashMap<Permutation, usize> = HashMap::new();
    lookup.insert(reps[0].clone(), 0);
    let gens = g.generators();
    let mut images: Vec<Vec<u32>> = vec![Vec::with_capacity(index); gens.len()];
    let mut k = 0;
    while k < reps.len() {
        for (gi, gen) in gens.iter().enumerate() {
            let c = coset_rep(&n_chain, reps[k].then(gen));
            let next = reps.len();
            let j = *lookup.entry(c.clone()).or_insert_with(|| {
                reps.push(c);
                next
            });
            images[gi].push(j as u32);
        }
        k += 1;
    }
    debug_assert_eq!(reps.len(), index);
    let perms = images
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()?;
    GroupSpec::new(index, perms)
}

/// One composition factor: its order and whether it is abelian (which
/// happens exactly when the order is prime).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CompositionFactor {
    pub order: u64,
    pub abelian: bool,
}

/// How a composition series is found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesStrategy {
    /// Peel off `G/G′` (whose factors are the primes of `|G:G′|`) and
    /// recurse into `G′`; for a perfect group, grow a maximal normal
    /// subgroup `M` by normal closures so that `G/M` is simple. Everything
    /// stays on the original points.
    DerivedSeries,
    /// Split along the first proper normal closure of a single element,
    /// scanning elements in chain order (or shuffled with `seed`), and
    /// recurse into `N` and the coset action on `G/N`.
    ElementClosures { seed: Option<u64> },
}

#[derive(Clone, Copy, Debug)]
pub struct FactorOptions {
    /// Largest group order accepted.
    pub cap: u64,
    pub strategy: SeriesStrategy,
}

impl Default for FactorOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ELEMENT_CAP,
            strategy: SeriesStrategy::DerivedSeries,
        }
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        while m.is_multiple_of(p) {
            out.push(p);
            m /= p;
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn is_prime(m: u64) -> bool {
    m >= 2 && prime_factors(m).len() == 1
}

fn order_u64(chain: &StabilizerChain, cap: u64) -> Result<u64> {
    let order = chain.order();
    if order > BigUint::from(cap) {
        return Err(Error::OrderCap { order, cap });
    }
    Ok(order.to_u64().expect("below cap"))
}

/// Marks the conjugacy class of `x` in the group generated by `gens`.
fn mark_class(x: &Permutation, gens: &[Permutation], marked: &mut HashSet<Permutation>) {
    if !marked.insert(x.clone()) {
        return;
    }
    let mut queue = vec![x.clone()];
    while let Some(y) = queue.pop() {
        for g in gens {
            let z = y.conjugate_by(g);
            if marked.insert(z.clone()) {
                queue.push(z);
            }
        }
    }
}

/// Normal closure of `base ∪ {x}` in the group generated by `gens`.
fn closure_with(gens: &GroupSpec, base: &StabilizerChain, x: &Permutation) -> StabilizerChain {
    let mut seeds: Vec<Permutation> = base.strong_generators().to_vec();
    seeds.push(x.clone());
    closure_chain(gens, &seeds)
}

/// A maximal normal subgroup of the (perfect) group `g`.
fn maximal_normal(g: &GroupSpec, chain: &StabilizerChain, cap: u64) -> Result<StabilizerChain> {
    let order = chain.order();
    let gens: Vec<Permutation> = g.nontrivial_generators().cloned().collect();
    let mut m = StabilizerChain::trivial(g.degree());
    // x is marked once <M, x>^G = G; that stays true as M grows.
    let mut marked: HashSet<Permutation> = HashSet::new();
    for x in chain.elements_capped(cap)? {
        if marked.contains(&x) || m.contains_unchecked(&x) {
            continue;
        }
        let c = closure_with(g, &m, &x);
        if c.order() < order {
            m = c;
        } else {
            mark_class(&x, &gens, &mut marked);
        }
    }
    Ok(m)
}

fn factors_derived(g: &GroupSpec, cap: u64, out: &mut Vec<CompositionFactor>) -> Result<()> {
    let chain = build_chain(g);
    let order = order_u64(&chain, cap)?;
    if order == 1 {
        return Ok(());
    }
    let derived = derived_chain(g);
    let index = order / derived.order().to_u64().expect("divides order");
    if index > 1 {
        out.extend(prime_factors(index).into_iter().map(|p| CompositionFactor {
            order: p,
            abelian: true,
        }));
        return factors_derived(&derived.to_group(), cap, out);
    }
    let m = maximal_normal(g, &chain, cap)?;
    let quotient = order / m.order().to_u64().expect("divides order");
    out.push(CompositionFactor {
        order: quotient,
        abelian: is_prime(quotient),
    });
    factors_derived(&m.to_group(), cap, out)
}

fn factors_closures(
    g: &GroupSpec,
    cap: u64,
    rng: &mut Option<ChaCha8Rng>,
    out: &mut Vec<CompositionFactor>,
) -> Result<()> {
    let chain = build_chain(g);
    let order = order_u64(&chain, cap)?;
    if order == 1 {
        return Ok(());
    }
    if is_prime(order) {
        out.push(CompositionFactor {
            order,
            abelian: true,
        });
        return Ok(());
    }
    let mut elements: Vec<Permutation> = chain.elements_capped(cap)?.collect();
    if let Some(rng) = rng.as_mut() {
        elements.shuffle(rng);
    }
    let gens: Vec<Permutation> = g.nontrivial_generators().cloned().collect();
    let mut marked: HashSet<Permutation> = HashSet::new();
    for x in elements {
        if x.is_identity() || marked.contains(&x) {
            continue;
        }
        let n = closure_chain(g, std::slice::from_ref(&x));
        if n.order() < chain.order() {
            let n_group = n.to_group();
            let q = quotient_action_capped(g, &n_group, cap)?;
            factors_closures(&n_group, cap, rng, out)?;
            return factors_closures(&q, cap, rng, out);
        }
        mark_class(&x, &gens, &mut marked);
    }
    out.push(CompositionFactor {
        order,
        abelian: false,
    });
    Ok(())
}

/// Composition factors with the default options, sorted.
pub fn composition_factors(g: &GroupSpec) -> Result<Vec<CompositionFactor>> {
    composition_factors_with(g, &FactorOptions::default())
}

pub fn composition_factors_with(
    g: &GroupSpec,
    opts: &FactorOptions,
) -> Result<Vec<CompositionFactor>> {
    let mut out = Vec::new();
    match opts.strategy {
        SeriesStrategy::DerivedSeries => factors_derived(g, opts.cap, &mut out)?,
        SeriesStrategy::ElementClosures { seed } => {
            let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
            factors_closures(g, opts.cap, &mut rng, &mut out)?
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Counts of abelian composition factors by prime.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ARInvariant {
    pub counts: BTreeMap<u64, u32>,
}

impl ARInvariant {
    pub fn from_factors(factors: &[CompositionFactor]) -> Self {
        let mut counts = BTreeMap::new();
        for f in factors.iter().filter(|f| f.abelian) {
            *counts.entry(f.order).or_insert(0) += 1;
        }
        Self { counts }
    }

    /// `a_p(R)`.
    pub fn count(&self, p: u64) -> u32 {
        self.counts.get(&p).copied().unwrap_or(0)
    }

    /// `∏ p^{a_p}`, the product of the abelian factor orders; equals
    /// `2^{a(R)}`.
    pub fn product(&self) -> BigUint {
        self.counts.iter().fold(BigUint::one(), |acc, (&p, &e)| {
            acc * BigUint::from(p).pow(e)
        })
    }

    /// Enclosure of `a(R) = Σ a_p log₂ p`.
    pub fn a_value(&self, prec: u32) -> Interval {
        self.counts
            .iter()
            .fold(Interval::from_int(0, prec), |acc, (&p, &e)| {
                let lp = Interval::from_int(p, prec).log2().expect("p ≥ 2");
                &acc + &lp.mul_int(e)
            })
    }
}

/// `a_p` counts of `g`.
pub fn a_invariant(g: &GroupSpec) -> Result<ARInvariant> {
    Ok(ARInvariant::from_factors(&composition_factors(g)?))
}

pub fn a_invariant_with(g: &GroupSpec, opts: &FactorOptions) -> Result<ARInvariant> {
    Ok(ARInvariant::from_factors(&composition_factors_with(
        g, opts,
    )?))
}
