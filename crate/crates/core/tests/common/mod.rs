//! Brute-force oracles shared by the integration tests. Groups are plain
//! sets of image vectors, built by closing generators under composition;
//! nothing here touches stabilizer chains.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use abelquot::blocks::{block_action, block_restriction, minimal_block_system};
use abelquot::{GroupSpec, Permutation};

pub type Elem = Vec<u32>;

pub fn compose(a: &[u32], b: &[u32]) -> Elem {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn invert(a: &[u32]) -> Elem {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

pub fn identity(n: usize) -> Elem {
    (0..n as u32).collect()
}

/// Closure of `start` (which must contain the identity) under right
/// multiplication by `gens`.
pub fn close_from(start: HashSet<Elem>, gens: &[Elem]) -> HashSet<Elem> {
    let mut set = start;
    let mut queue: Vec<Elem> = set.iter().cloned().collect();
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = compose(&x, g);
            if set.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    set
}

pub fn closure(n: usize, gens: &[Elem]) -> HashSet<Elem> {
    close_from(HashSet::from([identity(n)]), gens)
}

pub fn elems_of(g: &GroupSpec) -> HashSet<Elem> {
    let gens: Vec<Elem> = g.generators().iter().map(|p| p.images().to_vec()).collect();
    closure(g.degree(), &gens)
}

/// Subgroup generated by `seeds`, adding them one at a time.
pub fn generated(n: usize, seeds: impl IntoIterator<Item = Elem>) -> HashSet<Elem> {
    let mut gens = Vec::new();
    let mut set = HashSet::from([identity(n)]);
    for s in seeds {
        if !set.contains(&s) {
            gens.push(s);
            set = closure(n, &gens);
        }
    }
    set
}

/// `G′ = ⟨[x, s] : x ∈ G, s a generator⟩`; that subgroup is normal and the
/// generators are central modulo it.
pub fn derived(g: &GroupSpec) -> HashSet<Elem> {
    let elems = elems_of(g);
    let mut comms: BTreeSet<Elem> = BTreeSet::new();
    for x in &elems {
        let xi = invert(x);
        for s in g.generators() {
            let s = s.images();
            let si = invert(s);
            comms.insert(compose(&compose(&compose(&xi, &si), x), s));
        }
    }
    generated(g.degree(), comms)
}

pub fn to_perm(e: &[u32]) -> Permutation {
    Permutation::from_images(e.iter().map(|&x| x as usize)).unwrap()
}

pub fn is_transitive_set(n: usize, elems: &HashSet<Elem>) -> bool {
    (0..n as u32).all(|p| elems.iter().any(|e| e[0] == p))
}

/// Smallest sorted element list among all `Sym(n)`-conjugates.
pub fn canonical_form(n: usize, elems: &HashSet<Elem>) -> Vec<Elem> {
    let sym = closure(n, &sym_gens(n));
    sym.iter()
        .map(|c| {
            let ci = invert(c);
            let mut v: Vec<Elem> = elems.iter().map(|x| compose(&compose(&ci, x), c)).collect();
            v.sort();
            v
        })
        .min()
        .unwrap()
}

pub fn sym_gens(n: usize) -> Vec<Elem> {
    let mut cycle: Elem = (1..n as u32).collect();
    cycle.push(0);
    let mut t = identity(n);
    if n > 1 {
        t.swap(0, 1);
    }
    vec![cycle, t]
}

/// Every subgroup of `Sym(n)`: start from the trivial group and keep adjoining
/// single elements until nothing new appears.
pub fn all_subgroups(n: usize) -> Vec<HashSet<Elem>> {
    let sym: Vec<Elem> = closure(n, &sym_gens(n)).into_iter().collect();
    let key = |s: &HashSet<Elem>| {
        let mut v: Vec<Elem> = s.iter().cloned().collect();
        v.sort();
        v
    };
    let trivial = HashSet::from([identity(n)]);
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([key(&trivial)]);
    let mut all: Vec<(HashSet<Elem>, Vec<Elem>)> = vec![(trivial, Vec::new())];
    let mut k = 0;
    while k < all.len() {
        let (h, gens) = all[k].clone();
        for x in &sym {
            if h.contains(x) {
                continue;
            }
            let mut more = gens.clone();
            more.push(x.clone());
            let bigger = close_from(h.clone(), &more);
            if seen.insert(key(&bigger)) {
                all.push((bigger, more));
            }
        }
        k += 1;
    }
    all.into_iter().map(|(h, _)| h).collect()
}

/// Canonical forms of the transitive subgroups of `Sym(n)` up to conjugacy.
pub fn naive_transitive_classes(n: usize) -> BTreeSet<Vec<Elem>> {
    all_subgroups(n)
        .iter()
        .filter(|h| is_transitive_set(n, h))
        .map(|h| canonical_form(n, h))
        .collect()
}

/// One imprimitive step of the decomposition the certifier follows.
pub struct StepGroups {
    pub degree: usize,
    pub r: usize,
    pub d: usize,
    pub restriction: GroupSpec,
}

/// Walks minimal block systems down to a primitive group, returning the
/// block restrictions met on the way.
pub fn decomposition(g: &GroupSpec) -> Vec<StepGroups> {
    let mut out = Vec::new();
    let mut current = g.clone();
    while let Some(bs) = minimal_block_system(&current).unwrap() {
        out.push(StepGroups {
            degree: current.degree(),
            r: bs.block_size(),
            d: bs.block_count(),
            restriction: block_restriction(&current, &bs, 0).unwrap(),
        });
        current = block_action(&current, &bs).unwrap();
    }
    out
}

/// Fifty groups of order at most 5000: every enumerated transitive group of
/// degree 2 to 7 within that bound, topped up with seeded random groups of
/// degree 4 to 8 (most of them intransitive).
pub fn kernel_corpus() -> Vec<GroupSpec> {
    use abelquot::enumeration::transitive_groups;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    let mut out: Vec<GroupSpec> = (2..=7)
        .flat_map(|n| transitive_groups(n).unwrap().groups)
        .filter(|g| elems_of(g).len() <= 5000)
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    while out.len() < 50 {
        let n = rng.gen_range(4..=8);
        let gens: Vec<Permutation> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let mut v: Vec<usize> = (0..n).collect();
                // Fix a few points so the groups stay small.
                let moved = rng.gen_range(2..=n.min(5));
                v[..moved].shuffle(&mut rng);
                Permutation::from_images(v).unwrap()
            })
            .collect();
        let g = GroupSpec::new(n, gens).unwrap();
        if elems_of(&g).len() <= 5000 {
            out.push(g);
        }
    }
    out
}

/// Compares order, membership, derived subgroup and abelianization order of
/// the library against the brute-force sets.
pub fn check_kernel(g: &GroupSpec, seed: u64) -> Result<(), String> {
    use abelquot::build_chain;
    use abelquot::structure::{abelianization_order, derived_subgroup};
    use num_bigint::BigUint;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let n = g.degree();
    let elems = elems_of(g);
    let chain = build_chain(g);
    if chain.order() != BigUint::from(elems.len()) {
        return Err(format!(
            "order {} vs brute force {}",
            chain.order(),
            elems.len()
        ));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut probes: Vec<Elem> = elems.iter().take(10).cloned().collect();
    for _ in 0..30 {
        let mut v: Elem = identity(n);
        v.shuffle(&mut rng);
        probes.push(v);
    }
    for p in &probes {
        if chain.contains(&to_perm(p)).unwrap() != elems.contains(p) {
            return Err(format!("membership of {:?} disagrees", to_perm(p)));
        }
    }
    let d_lib = elems_of(&derived_subgroup(g));
    let d_brute = derived(g);
    if d_lib != d_brute {
        return Err(format!(
            "derived subgroup {} vs brute force {}",
            d_lib.len(),
            d_brute.len()
        ));
    }
    let ab = abelianization_order(g);
    if ab != BigUint::from(elems.len() / d_brute.len()) {
        return Err(format!(
            "|G_ab| {ab} vs brute force {}",
            elems.len() / d_brute.len()
        ));
    }
    Ok(())
}
