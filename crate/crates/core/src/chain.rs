//! Deterministic Schreier–Sims.
//!
//! A [`StabilizerChain`] stores a base `b_0, b_1, …` and, for every level `k`,
//! the basic orbit of `b_k` under the pointwise stabilizer of `b_0..b_{k-1}`
//! with one explicit coset representative per orbit point. New base points
//! are always the smallest point moved by the element that forces them, so
//! the chain (and therefore element enumeration order) depends only on the
//! generator list.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{GroupSpec, Permutation};

/// Default limit on the number of elements [`StabilizerChain::elements`]
/// will enumerate.
pub const DEFAULT_ELEMENT_CAP: u64 = 1_000_000;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// Indices into the chain's strong generators that fix `b_0..b_{k-1}`.
    gens: Vec<usize>,
    /// `transversal[x]` maps the level's base point to `x`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
    checked: HashSet<(usize, usize)>,
}

impl Level {
    fn new(degree: usize, point: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[point] = Some(Permutation::identity(degree));
        Self {
            point,
            gens: Vec::new(),
            transversal,
            orbit: vec![point],
            checked: HashSet::new(),
        }
    }

    fn extend_orbit(&mut self, strong: &[Permutation]) {
        let mut k = 0;
        // Re-scan the whole orbit: old points may reach new ones through a
        // freshly added generator.
        while k < self.orbit.len() {
            let b = self.orbit[k];
            for &s in &self.gens {
                let c = strong[s].apply(b);
                if self.transversal[c].is_none() {
                    let u = self.transversal[b].as_ref().unwrap().then(&strong[s]);
                    self.transversal[c] = Some(u);
                    self.orbit.push(c);
                }
            }
            k += 1;
        }
    }
}

/// Base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    /// The chain of the trivial group.
    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            strong: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn from_generators<'a>(
        degree: usize,
        gens: impl IntoIterator<Item = &'a Permutation>,
    ) -> Self {
        let mut chain = Self::trivial(degree);
        for g in gens {
            chain.insert(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Basic orbit at `level`, in discovery order.
    pub fn orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    /// Coset representative at `level` sending the base point to `point`.
    pub fn transversal(&self, level: usize, point: usize) -> Option<&Permutation> {
        self.levels[level].transversal[point].as_ref()
    }

    /// Strong generators fixing the first `level` base points.
    pub fn level_generators(&self, level: usize) -> impl Iterator<Item = &Permutation> {
        self.levels[level].gens.iter().map(|&i| &self.strong[i])
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    /// Sifts `g` starting at `from`; returns the residue and the level where
    /// sifting stopped (`depth()` if it went all the way through).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (k, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.apply(level.point);
            match &level.transversal[beta] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, k),
            }
        }
        (g, self.levels.len())
    }

    /// Membership test by sifting.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.contains_unchecked(p))
    }

    pub(crate) fn contains_unchecked(&self, p: &Permutation) -> bool {
        let (residue, _) = self.strip(p.clone(), 0);
        residue.is_identity()
    }

    /// Adds `g` to the group. Returns `false` when `g` was already a member.
    pub fn insert(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "degree mismatch");
        if self.contains_unchecked(g) {
            return false;
        }
        let top = self.add_strong(g.clone(), 0);
        self.complete(top);
        true
    }

    /// Registers `y` (which fixes `b_0..b_{from-1}`) as a strong generator on
    /// every level from `from` down to the first base point it moves, adding
    /// a level when it fixes the whole base. Returns that deepest level.
    fn add_strong(&mut self, y: Permutation, from: usize) -> usize {
        let idx = self.strong.len();
        let last = (from..self.levels.len())
            .find(|&k| y.apply(self.levels[k].point) != self.levels[k].point);
        let last = match last {
            Some(k) => k,
            None => {
                let point = y.smallest_moved_point().expect("identity residue");
                self.levels.push(Level::new(self.degree, point));
                self.levels.len() - 1
            }
        };
        self.strong.push(y);
        for k in from..=last {
            self.levels[k].gens.push(idx);
            let (levels, strong) = (&mut self.levels, &self.strong);
            levels[k].extend_orbit(strong);
        }
        last
    }

    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        'outer: while i >= 0 {
            let k = i as usize;
            let mut pos = 0;
            while pos < self.levels[k].orbit.len() {
                let b = self.levels[k].orbit[pos];
                let mut gi = 0;
                while gi < self.levels[k].gens.len() {
                    let s = self.levels[k].gens[gi];
                    gi += 1;
                    if !self.levels[k].checked.insert((b, s)) {
                        continue;
                    }
                    let level = &self.levels[k];
                    let u_b = level.transversal[b].as_ref().unwrap();
                    let c = self.strong[s].apply(b);
                    let u_c = level.transversal[c].as_ref().unwrap();
                    let h = u_b.then(&self.strong[s]).then(&u_c.inverse());
                    if h.is_identity() {
                        continue;
                    }
                    let (y, _) = self.strip(h, k + 1);
                    if !y.is_identity() {
                        let j = self.add_strong(y, k + 1);
                        i = j as isize;
                        continue 'outer;
                    }
                }
                pos += 1;
            }
            i -= 1;
        }
    }

    /// The group generated by the strong generators.
    pub fn to_group(&self) -> GroupSpec {
        if self.strong.is_empty() {
            GroupSpec::trivial(self.degree)
        } else {
            GroupSpec::new(self.degree, self.strong.clone()).expect("valid generators")
        }
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let b = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.then(level.transversal[b].as_ref().unwrap());
        }
        g
    }

    /// Enumerates every element once, lexicographically by the transversal
    /// points chosen at each level (level 0 most significant).
    pub fn elements(&self) -> Result<Elements<'_>> {
        self.elements_capped(DEFAULT_ELEMENT_CAP)
    }

    pub fn elements_capped(&self, cap: u64) -> Result<Elements<'_>> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::OrderCap { order, cap });
        }
        let points: Vec<Vec<usize>> = self
            .levels
            .iter()
            .map(|l| {
                let mut o = l.orbit.clone();
                o.sort_unstable();
                o
            })
            .collect();
        Ok(Elements {
            chain: self,
            index: vec![0; points.len()],
            prefix: Vec::new(),
            points,
            done: false,
        })
    }
}

/// Iterator returned by [`StabilizerChain::elements`].
pub struct Elements<'a> {
    chain: &'a StabilizerChain,
    points: Vec<Vec<usize>>,
    index: Vec<usize>,
    /// `prefix[k]` = v_k · v_{k-1} · … · v_0 for the current indices.
    prefix: Vec<Permutation>,
    done: bool,
}

impl Elements<'_> {
    fn rebuild_from(&mut self, from: usize) {
        self.prefix.truncate(from);
        for k in from..self.points.len() {
            let u = self.chain.levels[k].transversal[self.points[k][self.index[k]]]
                .as_ref()
                .unwrap();
            let next = match self.prefix.last() {
                Some(p) => u.then(p),
                None => u.clone(),
            };
            self.prefix.push(next);
        }
    }
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if self.points.is_empty() {
            self.done = true;
            return Some(Permutation::identity(self.chain.degree));
        }
        if self.prefix.is_empty() {
            self.rebuild_from(0);
        }
        let out = self.prefix.last().unwrap().clone();
        // Advance the odometer, deepest level fastest.
        let mut k = self.points.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.index[k] += 1;
            if self.index[k] < self.points[k].len() {
                self.rebuild_from(k);
                break;
            }
            self.index[k] = 0;
        }
        Some(out)
    }
}

/// Builds the stabilizer chain of `g`.
pub fn build_chain(g: &GroupSpec) -> StabilizerChain {
    StabilizerChain::from_generators(g.degree(), g.generators())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_group;

    fn chain(text: &str) -> StabilizerChain {
        build_chain(&parse_group(text).unwrap())
    }

    #[test]
    fn cyclic_three() {
        let c = chain("degree 3\ngen (1,2,3)\n");
        assert_eq!(c.order(), BigUint::from(3u32));
        assert_eq!(c.base(), vec![0]);
    }

    #[test]
    fn trivial_group_has_empty_base() {
        let c = chain("degree 4\ngen ()\n");
        assert!(c.base().is_empty());
        assert_eq!(c.order(), BigUint::from(1u32));
        assert_eq!(c.elements().unwrap().count(), 1);
    }

    #[test]
    fn strong_generators_fix_earlier_base_points() {
        let c = chain("degree 6\ngen (1,2,3,4,5,6)\ngen (1,2)\n");
        assert_eq!(c.order(), BigUint::from(720u32));
        let base = c.base();
        for k in 0..c.depth() {
            for g in c.level_generators(k) {
                for &b in &base[..k] {
                    assert_eq!(g.apply(b), b);
                }
            }
        }
    }

    #[test]
    fn alternating_membership() {
        let c = chain("degree 4\ngen (1,2,3)\ngen (2,3,4)\n");
        assert_eq!(c.order(), BigUint::from(12u32));
        let t = Permutation::from_cycles(4, &[&[0, 1]]).unwrap();
        assert!(!c.contains(&t).unwrap());
        assert!(c.contains(&Permutation::identity(4)).unwrap());
        assert!(c.contains(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn elements_are_distinct_and_canonical() {
        let c = chain("degree 5\ngen (1,2,3,4,5)\ngen (1,2)\n");
        let all: Vec<_> = c.elements().unwrap().collect();
        assert_eq!(all.len(), 120);
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 120);
        let again: Vec<_> = c.elements().unwrap().collect();
        assert_eq!(all, again);
    }

    #[test]
    fn element_cap_refusal() {
        let c = chain("degree 7\ngen (1,2,3,4,5,6,7)\ngen (1,2)\n");
        match c.elements_capped(100) {
            Err(Error::OrderCap { order, cap }) => {
                assert_eq!(order, BigUint::from(5040u32));
                assert_eq!(cap, 100);
            }
            _ => panic!("expected refusal"),
        }
    }

    #[test]
    fn insert_reports_membership() {
        let mut c = StabilizerChain::trivial(4);
        let r = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        assert!(c.insert(&r));
        assert!(!c.insert(&r.pow(2)));
        assert_eq!(c.order(), BigUint::from(4u32));
    }
}
