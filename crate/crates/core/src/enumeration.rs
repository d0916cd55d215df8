//! Transitive groups of small degree up to conjugacy in `Sym(n)`, and
//! curated fixture families for larger degrees.
//!
//! Every subgroup is generated by its elements of prime-power order, so the
//! subgroup classes of `Sym(n)` are reached from the trivial group by
//! repeatedly adjoining one such element `z ∉ H` to a class representative
//! `H`. Only one `z` per `N(H)`-conjugacy orbit is needed. Each new class
//! records the hashes of all its conjugates together with their conjugating
//! elements, so a subgroup is recognised by one hash lookup confirmed by an
//! exact membership check. A miss falls back to an invariant key (order,
//! orbit lengths, cycle-type histogram) and a search of `Sym(n)` for a
//! conjugating element.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fs;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::blocks::{is_transitive, minimal_block_system, orbits};
use crate::certify::WreathSpec;
use crate::chain::{build_chain, StabilizerChain};
use crate::error::{Error, Result};
use crate::perm::{format_group, parse_group, GroupSpec, Permutation};
use crate::structure::abelianization_order;

/// Largest degree enumerated by default.
pub const EXHAUSTIVE_MAX: usize = 7;
/// Largest degree enumerated when degree 8 is explicitly allowed.
pub const OPT_IN_MAX: usize = 8;
/// Fixture degrees.
pub const FIXTURE_RANGE: std::ops::RangeInclusive<usize> = 2..=81;
/// Environment variable naming a directory for cached catalogs.
pub const CACHE_ENV: &str = "ABELQUOT_CACHE";

/// How a catalog was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogMethod {
    Exhaustive,
    Fixture,
}

#[derive(Clone, Debug)]
pub struct TransitiveCatalog {
    pub degree: usize,
    pub groups: Vec<GroupSpec>,
    pub method: CatalogMethod,
}

impl TransitiveCatalog {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// `Sym(n)` for `n ≤ 8` with elements numbered by lexicographic rank.
struct Sym {
    n: usize,
    fact: [u32; 9],
    perms: Vec<[u8; 8]>,
    inv: Vec<u32>,
    ctype: Vec<u16>,
    n_types: usize,
    zuppos: Vec<u32>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / num_integer::gcd(a, b) * b
}

fn is_prime_power(mut m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let p = (2..=m).find(|p| m.is_multiple_of(*p)).unwrap();
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

impl Sym {
    fn new(n: usize) -> Self {
        assert!((1..=OPT_IN_MAX).contains(&n));
        let mut fact = [1u32; 9];
        for i in 1..9 {
            fact[i] = fact[i - 1] * i as u32;
        }
        let total = fact[n] as usize;
        let mut perms = Vec::with_capacity(total);
        for mut k in 0..total as u32 {
            let mut avail: Vec<u8> = (0..n as u8).collect();
            let mut p = [0u8; 8];
            for (i, slot) in p.iter_mut().enumerate().take(n) {
                let f = fact[n - 1 - i];
                *slot = avail.remove((k / f) as usize);
                k %= f;
            }
            perms.push(p);
        }
        let mut sym = Self {
            n,
            fact,
            perms,
            inv: Vec::new(),
            ctype: Vec::new(),
            n_types: 0,
            zuppos: Vec::new(),
        };
        let mut types: HashMap<Vec<u8>, u16> = HashMap::new();
        for k in 0..total {
            let p = sym.perms[k];
            let mut q = [0u8; 8];
            for i in 0..n {
                q[p[i] as usize] = i as u8;
            }
            sym.inv.push(sym.rank(&q));
            let mut seen = [false; 8];
            let mut lens = Vec::new();
            for i in 0..n {
                let mut len = 0;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = p[j] as usize;
                    len += 1;
                }
                if len > 0 {
                    lens.push(len as u8);
                }
            }
            lens.sort_unstable();
            let order = lens.iter().fold(1, |acc, &l| lcm(acc, l as u64));
            if is_prime_power(order) {
                sym.zuppos.push(k as u32);
            }
            let next = types.len() as u16;
            sym.ctype.push(*types.entry(lens).or_insert(next));
        }
        sym.n_types = types.len();
        sym
    }

    fn order(&self) -> usize {
        self.perms.len()
    }

    fn rank(&self, p: &[u8; 8]) -> u32 {
        let mut used = 0u32;
        let mut r = 0;
        for (i, &x) in p[..self.n].iter().enumerate() {
            let below = (1u32 << x) - 1;
            r += (x as u32 - (used & below).count_ones()) * self.fact[self.n - 1 - i];
            used |= 1 << x;
        }
        r
    }

    /// `a` then `b`.
    fn mul(&self, a: u32, b: u32) -> u32 {
        let (pa, pb) = (&self.perms[a as usize], &self.perms[b as usize]);
        let mut c = [0u8; 8];
        for i in 0..self.n {
            c[i] = pb[pa[i] as usize];
        }
        self.rank(&c)
    }

    /// `c⁻¹ x c`.
    fn conj(&self, x: u32, c: u32) -> u32 {
        self.mul(self.mul(self.inv[c as usize], x), c)
    }

    fn index_of(&self, p: &Permutation) -> u32 {
        let mut a = [0u8; 8];
        for (i, &x) in p.images().iter().enumerate() {
            a[i] = x as u8;
        }
        self.rank(&a)
    }

    fn permutation(&self, k: u32) -> Permutation {
        Permutation::from_images(self.perms[k as usize][..self.n].iter().map(|&x| x as usize))
            .expect("valid")
    }
}

#[derive(Clone)]
struct Sub {
    bits: Vec<u64>,
    elems: Vec<u32>,
    gens: Vec<u32>,
}

impl Sub {
    fn trivial(sym: &Sym) -> Self {
        let mut bits = vec![0u64; sym.order().div_ceil(64)];
        bits[0] |= 1;
        Self {
            bits,
            elems: vec![0],
            gens: Vec::new(),
        }
    }

    fn contains(&self, x: u32) -> bool {
        self.bits[x as usize / 64] >> (x % 64) & 1 == 1
    }

    /// `⟨H, z⟩`, built as a union of right cosets of `H`.
    fn adjoin(&self, sym: &Sym, z: u32) -> Self {
        let mut out = self.clone();
        out.gens.push(z);
        let mut reps = vec![0u32];
        let mut k = 0;
        while k < reps.len() {
            let t = reps[k];
            for gi in 0..out.gens.len() {
                let y = sym.mul(t, out.gens[gi]);
                if out.contains(y) {
                    continue;
                }
                for &h in &self.elems {
                    let x = sym.mul(h, y);
                    out.bits[x as usize / 64] |= 1 << (x % 64);
                    out.elems.push(x);
                }
                reps.push(y);
            }
            k += 1;
        }
        out
    }

    fn from_group(sym: &Sym, g: &GroupSpec) -> Self {
        g.nontrivial_generators().fold(Self::trivial(sym), |h, p| {
            let z = sym.index_of(p);
            if h.contains(z) {
                h
            } else {
                h.adjoin(sym, z)
            }
        })
    }

    fn key(&self, sym: &Sym) -> Key {
        let mut parent: Vec<usize> = (0..sym.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &g in &self.gens {
            for i in 0..sym.n {
                let (a, b) = (
                    find(&mut parent, i),
                    find(&mut parent, sym.perms[g as usize][i] as usize),
                );
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut sizes = vec![0u8; sym.n];
        for i in 0..sym.n {
            sizes[find(&mut parent, i)] += 1;
        }
        let mut orbit_lengths: Vec<u8> = sizes.into_iter().filter(|&s| s > 0).collect();
        orbit_lengths.sort_unstable();
        let mut types = vec![0u32; sym.n_types];
        for &x in &self.elems {
            types[sym.ctype[x as usize] as usize] += 1;
        }
        Key {
            order: self.elems.len(),
            orbit_lengths,
            types,
        }
    }

    fn is_transitive(&self, sym: &Sym) -> bool {
        self.key(sym).orbit_lengths == [sym.n as u8]
    }

    /// Whether `H^c = other` for some `c ∈ Sym(n)`; orders must agree.
    fn conjugate_to(&self, sym: &Sym, other: &Sub) -> bool {
        (0..sym.order() as u32).any(|c| self.gens.iter().all(|&g| other.contains(sym.conj(g, c))))
    }

    fn normalizer(&self, sym: &Sym) -> Vec<u32> {
        (0..sym.order() as u32)
            .filter(|&c| self.gens.iter().all(|&g| self.contains(sym.conj(g, c))))
            .collect()
    }

    /// `⟨H, z⟩` for one `z` from each `N(H)`-orbit of prime-power-order
    /// elements outside `H`.
    fn extensions(&self, sym: &Sym) -> Vec<Sub> {
        let normalizer = self.normalizer(sym);
        let mut seen = vec![false; sym.order()];
        let mut out: Vec<Sub> = Vec::new();
        let mut made: HashMap<Vec<u64>, ()> = HashMap::new();
        for &z in &sym.zuppos {
            if seen[z as usize] || self.contains(z) {
                continue;
            }
            for &c in &normalizer {
                seen[sym.conj(z, c) as usize] = true;
            }
            let k = self.adjoin(sym, z);
            if made.insert(k.bits.clone(), ()).is_none() {
                out.push(k);
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Key {
    order: usize,
    orbit_lengths: Vec<u8>,
    types: Vec<u32>,
}

fn bits_hash(bits: &[u64]) -> u64 {
    let mut h = DefaultHasher::new();
    bits.hash(&mut h);
    h.finish()
}

/// Every conjugate `H^c` of the known classes, by hash of its element set,
/// with the class and the conjugating element `c`.
#[derive(Default)]
struct ConjugateTable {
    entries: HashMap<u64, Vec<(usize, u32)>>,
}

impl ConjugateTable {
    fn add_class(&mut self, sym: &Sym, index: usize, h: &Sub) {
        let normalizer = h.normalizer(sym);
        let mut covered = vec![false; sym.order()];
        for c in 0..sym.order() as u32 {
            if covered[c as usize] {
                continue;
            }
            for &m in &normalizer {
                covered[sym.mul(m, c) as usize] = true;
            }
            let mut bits = vec![0u64; h.bits.len()];
            for &x in &h.elems {
                let y = sym.conj(x, c);
                bits[y as usize / 64] |= 1 << (y % 64);
            }
            self.entries
                .entry(bits_hash(&bits))
                .or_default()
                .push((index, c));
        }
    }

    /// The class `k` belongs to, verified exactly against the recorded
    /// conjugating element; `None` when no recorded conjugate matches.
    fn lookup(&self, sym: &Sym, k: &Sub, classes: &[(Key, Sub)]) -> Option<usize> {
        let hits = self.entries.get(&bits_hash(&k.bits))?;
        hits.iter().find_map(|&(j, c)| {
            let h = &classes[j].1;
            let c_inv = sym.inv[c as usize];
            let equal = h.elems.len() == k.elems.len()
                && k.gens.iter().all(|&g| h.contains(sym.conj(g, c_inv)));
            equal.then_some(j)
        })
    }
}

/// Representatives of all conjugacy classes of subgroups of `Sym(n)`.
fn subgroup_class_subs(sym: &Sym) -> Vec<(Key, Sub)> {
    let trivial = Sub::trivial(sym);
    let mut classes: Vec<(Key, Sub)> = vec![(trivial.key(sym), trivial)];
    let mut table = ConjugateTable::default();
    table.add_class(sym, 0, &classes[0].1);
    let mut by_key: HashMap<Key, Vec<usize>> = HashMap::new();
    by_key.insert(classes[0].0.clone(), vec![0]);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let candidates: Vec<Vec<(Key, Sub)>> = frontier
            .par_iter()
            .map(|&i| {
                classes[i]
                    .1
                    .extensions(sym)
                    .into_iter()
                    .map(|k| (k.key(sym), k))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (key, k) in candidates.into_iter().flatten() {
            if table.lookup(sym, &k, &classes).is_some() {
                continue;
            }
            // Every conjugate of every known class is in the table, so a
            // miss is a new class unless the search below finds otherwise.
            let bucket = by_key.entry(key.clone()).or_default();
            if bucket
                .par_iter()
                .any(|&j| k.conjugate_to(sym, &classes[j].1))
            {
                continue;
            }
            let index = classes.len();
            bucket.push(index);
            next.push(index);
            table.add_class(sym, index, &k);
            classes.push((key, k));
        }
        frontier = next;
    }
    classes
}

fn to_group(sym: &Sym, sub: &Sub) -> GroupSpec {
    let mut chain = StabilizerChain::trivial(sym.n);
    let mut gens = Vec::new();
    for &g in &sub.gens {
        let p = sym.permutation(g);
        if chain.insert(&p) {
            gens.push(p);
        }
    }
    if gens.is_empty() {
        GroupSpec::trivial(sym.n)
    } else {
        GroupSpec::new(sym.n, gens).expect("same degree")
    }
}

fn check_small(n: usize, max: usize) -> Result<()> {
    if (1..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree(n))
    }
}

/// Representatives of the conjugacy classes of subgroups of `Sym(n)`,
/// ordered by order, then invariant key, then discovery.
pub fn subgroup_classes(n: usize) -> Result<Vec<GroupSpec>> {
    check_small(n, OPT_IN_MAX)?;
    let sym = Sym::new(n);
    let mut classes = subgroup_class_subs(&sym);
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(classes.iter().map(|(_, s)| to_group(&sym, s)).collect())
}

/// The transitive groups of degree `n` up to conjugacy, for
/// `2 ≤ n ≤ 7`.
pub fn transitive_groups(n: usize) -> Result<TransitiveCatalog> {
    transitive_groups_with(n, false)
}

/// As [`transitive_groups`], also accepting `n = 8` when `allow_degree_8`.
pub fn transitive_groups_with(n: usize, allow_degree_8: bool) -> Result<TransitiveCatalog> {
    let max = if allow_degree_8 {
        OPT_IN_MAX
    } else {
        EXHAUSTIVE_MAX
    };
    if n < 2 {
        return Err(Error::UnsupportedDegree(n));
    }
    check_small(n, max)?;
    let sym = Sym::new(n);
    let mut classes: Vec<(Key, Sub)> = subgroup_class_subs(&sym)
        .into_iter()
        .filter(|(_, s)| s.is_transitive(&sym))
        .collect();
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    let groups = classes
        .iter()
        .enumerate()
        .map(|(i, (_, s))| to_group(&sym, s).with_label(format!("T{n}.{}", i + 1)))
        .collect();
    Ok(TransitiveCatalog {
        degree: n,
        groups,
        method: CatalogMethod::Exhaustive,
    })
}

/// Whether two groups of equal degree at most 8 are conjugate in `Sym(n)`.
pub fn conjugate_in_symmetric(a: &GroupSpec, b: &GroupSpec) -> Result<bool> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: b.degree(),
        });
    }
    check_small(a.degree(), OPT_IN_MAX)?;
    let sym = Sym::new(a.degree());
    let (x, y) = (Sub::from_group(&sym, a), Sub::from_group(&sym, b));
    Ok(x.key(&sym) == y.key(&sym) && x.conjugate_to(&sym, &y))
}

fn cycle(n: usize) -> Permutation {
    let points: Vec<usize> = (0..n).collect();
    Permutation::from_cycles(n, &[&points]).expect("valid cycle")
}

fn labelled(n: usize, gens: Vec<Permutation>, label: String) -> GroupSpec {
    GroupSpec::new(n, gens)
        .expect("same degree")
        .with_label(label)
}

pub fn cyclic(n: usize) -> GroupSpec {
    labelled(n, vec![cycle(n)], format!("C{n}"))
}

/// The dihedral group of order `2n` acting on the `n`-gon, `n ≥ 3`.
pub fn dihedral(n: usize) -> GroupSpec {
    let flip = Permutation::from_images((0..n).map(|i| (n - i) % n)).expect("valid");
    labelled(n, vec![cycle(n), flip], format!("D{n}"))
}

pub fn symmetric(n: usize) -> GroupSpec {
    if n < 2 {
        return GroupSpec::trivial(n.max(1)).with_label(format!("S{n}"));
    }
    let t = Permutation::from_cycles(n, &[&[0, 1]]).expect("valid");
    labelled(n, vec![cycle(n), t], format!("S{n}"))
}

/// The alternating group, `n ≥ 3`.
pub fn alternating(n: usize) -> GroupSpec {
    let long = if n % 2 == 1 {
        cycle(n)
    } else {
        let points: Vec<usize> = (1..n).collect();
        Permutation::from_cycles(n, &[&points]).expect("valid")
    };
    let t = Permutation::from_cycles(n, &[&[0, 1, 2]]).expect("valid");
    labelled(n, vec![long, t], format!("A{n}"))
}

/// `AGL(1, p)`: `x ↦ ax + b` on `ℤ/p`, generated by `x ↦ x + 1` and
/// `x ↦ ωx` for a primitive root `ω`.
pub fn affine_prime(p: usize) -> GroupSpec {
    let omega = (2..p)
        .find(|&w| (1..p - 1).all(|k| (0..k).fold(1, |acc, _| acc * w % p) != 1))
        .unwrap_or(1);
    let mult = Permutation::from_images((0..p).map(|x| x * omega % p)).expect("valid");
    labelled(p, vec![cycle(p), mult], format!("AGL(1,{p})"))
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn wreath(bottom: GroupSpec, top: GroupSpec) -> GroupSpec {
    WreathSpec::new(bottom, top)
        .build()
        .expect("degree within cap")
}

/// `B wr B wr … wr B` with `k` factors, on `b^k` points.
pub fn iterated_wreath(base: &GroupSpec, k: u32) -> GroupSpec {
    let mut g = base.clone();
    for _ in 1..k {
        g = wreath(base.clone(), g);
    }
    g
}

/// Curated transitive groups of degree `n ∈ [2, 81]`: cyclic, dihedral,
/// affine groups of prime degree, alternating and symmetric groups up to
/// degree 12, wreath products over every factorization `n = r·d`, and
/// iterated wreath products of `C₂` and `C₃`. For `n ≤ 8` conjugate
/// duplicates are removed.
pub fn fixtures(n: usize) -> Result<TransitiveCatalog> {
    if !FIXTURE_RANGE.contains(&n) {
        return Err(Error::UnsupportedDegree(n));
    }
    let mut groups = vec![cyclic(n)];
    if n >= 4 {
        groups.push(dihedral(n));
    }
    if n == 3 || (4..=12).contains(&n) {
        groups.push(symmetric(n));
    }
    if (4..=12).contains(&n) {
        groups.push(alternating(n));
    }
    if n >= 5 && is_prime(n) {
        groups.push(affine_prime(n));
    }
    for r in 2..n {
        if !n.is_multiple_of(r) || n / r < 2 {
            continue;
        }
        let d = n / r;
        groups.push(wreath(cyclic(r), cyclic(d)));
        if (3..=6).contains(&r) {
            groups.push(wreath(symmetric(r), cyclic(d)));
        }
        if (3..=6).contains(&d) && r <= 4 {
            let bottom = if r == 2 { cyclic(2) } else { symmetric(r) };
            groups.push(wreath(bottom, symmetric(d)));
        }
    }
    for (base, k) in [(2usize, 3u32), (2, 4), (2, 5), (2, 6), (3, 3), (3, 4)] {
        if base.pow(k) == n {
            groups.push(iterated_wreath(&cyclic(base), k));
        }
    }
    if n <= OPT_IN_MAX {
        let sym = Sym::new(n);
        let mut kept: Vec<(Key, Sub, GroupSpec)> = Vec::new();
        for g in groups {
            let s = Sub::from_group(&sym, &g);
            let key = s.key(&sym);
            if !kept
                .iter()
                .any(|(k, t, _)| *k == key && s.conjugate_to(&sym, t))
            {
                kept.push((key, s, g));
            }
        }
        groups = kept.into_iter().map(|(_, _, g)| g).collect();
    }
    for g in &groups {
        if !is_transitive(g) {
            return Err(Error::NotTransitive);
        }
    }
    Ok(TransitiveCatalog {
        degree: n,
        groups,
        method: CatalogMethod::Fixture,
    })
}

fn cache_path(n: usize) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|dir| Path::new(&dir).join(format!("transitive-{n}.json")))
}

/// [`transitive_groups_with`], reading and writing a cache file under
/// `$ABELQUOT_CACHE` when that variable is set. Cached groups are
/// re-validated on load; an unreadable cache is rebuilt.
pub fn transitive_groups_cached(n: usize, allow_degree_8: bool) -> Result<TransitiveCatalog> {
    let Some(path) = cache_path(n) else {
        return transitive_groups_with(n, allow_degree_8);
    };
    let cached = fs::read_to_string(&path).ok().and_then(|text| {
        let texts: Vec<String> = serde_json::from_str(&text).ok()?;
        texts
            .iter()
            .map(|t| parse_group(t))
            .collect::<Result<Vec<_>>>()
            .ok()
    });
    if let Some(groups) = cached {
        if !groups.is_empty() && groups.iter().all(|g| g.degree() == n && is_transitive(g)) {
            return Ok(TransitiveCatalog {
                degree: n,
                groups,
                method: CatalogMethod::Exhaustive,
            });
        }
    }
    let catalog = transitive_groups_with(n, allow_degree_8)?;
    let texts: Vec<String> = catalog.groups.iter().map(format_group).collect();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(&path, serde_json::to_string(&texts)?)?;
    Ok(catalog)
}

/// One row of a catalog index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRow {
    pub degree: usize,
    pub label: String,
    pub order: BigUint,
    pub abelianization: BigUint,
    pub primitive: bool,
    /// Block size and block count of the minimal block system.
    pub blocks: Option<(usize, usize)>,
}

pub fn index_row(g: &GroupSpec) -> Result<IndexRow> {
    let bs = minimal_block_system(g)?;
    Ok(IndexRow {
        degree: g.degree(),
        label: g.label().unwrap_or("").to_string(),
        order: build_chain(g).order(),
        abelianization: abelianization_order(g),
        primitive: bs.is_none(),
        blocks: bs.map(|b| (b.block_size(), b.block_count())),
    })
}

fn file_stem(label: &str, fallback: usize) -> String {
    let stem: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if stem.is_empty() {
        format!("group{fallback}")
    } else {
        stem
    }
}

/// Writes one group file per group and `index.csv` into `dir`, returning
/// the index rows.
pub fn export_catalog(groups: &[GroupSpec], dir: &Path) -> Result<Vec<IndexRow>> {
    fs::create_dir_all(dir)?;
    let mut index = fs::File::create(dir.join("index.csv"))?;
    writeln!(
        index,
        "degree,label,file,order,abelianization,primitive,r,d"
    )?;
    let mut rows = Vec::new();
    let mut used: HashMap<String, usize> = HashMap::new();
    for (i, g) in groups.iter().enumerate() {
        let row = index_row(g)?;
        let mut stem = file_stem(&row.label, i);
        let count = used.entry(stem.clone()).or_insert(0);
        *count += 1;
        if *count > 1 {
            stem = format!("{stem}_{count}");
        }
        let file = format!("{stem}.grp");
        fs::write(dir.join(&file), format_group(g))?;
        let (r, d) = row.blocks.map_or((String::new(), String::new()), |(r, d)| {
            (r.to_string(), d.to_string())
        });
        writeln!(
            index,
            "{},{},{},{},{},{},{},{}",
            row.degree, row.label, file, row.order, row.abelianization, row.primitive, r, d
        )?;
        rows.push(row);
    }
    Ok(rows)
}

/// Orbit lengths of `g`, sorted.
pub fn orbit_lengths(g: &GroupSpec) -> Vec<usize> {
    let mut v: Vec<usize> = orbits(g).iter().map(Vec::len).collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn order(g: &GroupSpec) -> u64 {
        build_chain(g).order().to_u64().unwrap()
    }

    #[test]
    fn sym_ranks_round_trip() {
        let sym = Sym::new(5);
        for k in 0..sym.order() as u32 {
            assert_eq!(sym.rank(&sym.perms[k as usize]), k);
            assert_eq!(sym.mul(k, sym.inv[k as usize]), 0);
        }
        assert_eq!(sym.n_types, 7);
    }

    #[test]
    fn small_catalog_sizes() {
        let sizes: Vec<usize> = (2..=5)
            .map(|n| transitive_groups(n).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![1, 2, 5, 5]);
    }

    #[test]
    fn unsupported_degrees() {
        assert!(matches!(
            transitive_groups(1),
            Err(Error::UnsupportedDegree(1))
        ));
        assert!(matches!(
            transitive_groups(8),
            Err(Error::UnsupportedDegree(8))
        ));
        assert!(matches!(fixtures(82), Err(Error::UnsupportedDegree(82))));
    }

    #[test]
    fn family_orders() {
        assert_eq!(order(&dihedral(5)), 10);
        assert_eq!(order(&alternating(6)), 360);
        assert_eq!(order(&alternating(7)), 2520);
        assert_eq!(order(&affine_prime(7)), 42);
        assert_eq!(order(&iterated_wreath(&cyclic(2), 3)), 128);
    }

    #[test]
    fn fixture_examples() {
        let nine = fixtures(9).unwrap();
        assert!(nine.groups.iter().any(|g| g.label() == Some("C3 wr C3")));
        let eight = fixtures(8).unwrap();
        assert!(eight
            .groups
            .iter()
            .any(|g| g.label() == Some("C2 wr C2 wr C2") && order(g) == 128));
        let four = fixtures(4).unwrap();
        assert_eq!(four.len(), 4);
    }

    #[test]
    fn conjugacy_test() {
        let a = cyclic(4);
        let b = GroupSpec::new(
            4,
            vec![Permutation::from_cycles(4, &[&[0, 2, 1, 3]]).unwrap()],
        )
        .unwrap();
        assert!(conjugate_in_symmetric(&a, &b).unwrap());
        let v = GroupSpec::new(
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!conjugate_in_symmetric(&a, &v).unwrap());
    }

    #[test]
    fn export_writes_index() {
        let dir = tempfile::tempdir().unwrap();
        let rows = export_catalog(&transitive_groups(4).unwrap().groups, dir.path()).unwrap();
        assert_eq!(rows.len(), 5);
        let index = fs::read_to_string(dir.path().join("index.csv")).unwrap();
        assert_eq!(index.lines().count(), 6);
        let text = fs::read_to_string(dir.path().join("T4.1.grp")).unwrap();
        assert_eq!(parse_group(&text).unwrap().degree(), 4);
    }
}
