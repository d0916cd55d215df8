//! Orbits, blocks of imprimitivity, and the two groups a block system
//! induces: the action on blocks and the action of a block stabilizer on its
//! block.

use std::collections::VecDeque;

use crate::chain::StabilizerChain;
use crate::error::{Error, Result};
use crate::perm::{GroupSpec, Permutation};

/// Orbit partition; each orbit sorted, orbits ordered by smallest point.
pub fn orbits(g: &GroupSpec) -> Vec<Vec<usize>> {
    let n = g.degree();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for gen in g.generators() {
                let y = gen.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

pub fn is_transitive(g: &GroupSpec) -> bool {
    orbits(g).len() == 1
}

fn require_transitive(g: &GroupSpec) -> Result<()> {
    if is_transitive(g) {
        Ok(())
    } else {
        Err(Error::NotTransitive)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`, keeping the smaller root.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }
}

/// Smallest block containing `alpha` and `beta` (Atkinson's algorithm).
/// Returns the sorted block.
pub fn minimal_block(g: &GroupSpec, alpha: usize, beta: usize) -> Result<Vec<usize>> {
    let n = g.degree();
    if alpha >= n || beta >= n || alpha == beta {
        return Err(Error::Precondition(format!(
            "seed ({alpha}, {beta}) must be two distinct points below {n}"
        )));
    }
    require_transitive(g)?;
    Ok(minimal_block_unchecked(g, alpha, beta))
}

fn minimal_block_unchecked(g: &GroupSpec, alpha: usize, beta: usize) -> Vec<usize> {
    let n = g.degree();
    let mut uf = UnionFind::new(n);
    uf.union(alpha, beta);
    let mut queue = VecDeque::from([(alpha, beta)]);
    while let Some((a, b)) = queue.pop_front() {
        for gen in g.nontrivial_generators() {
            let (x, y) = (uf.find(gen.apply(a)), uf.find(gen.apply(b)));
            if uf.union(x, y) {
                queue.push_back((x, y));
            }
        }
    }
    let root = uf.find(alpha);
    (0..n).filter(|&x| uf.find(x) == root).collect()
}

/// A partition of the domain into blocks of equal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    degree: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl BlockSystem {
    /// Validates that `blocks` partitions `{0..degree}` into equal parts.
    /// Blocks are sorted internally and ordered by smallest point.
    pub fn from_partition(degree: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; degree];
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let size = blocks.first().map_or(0, Vec::len);
        if size == 0 || blocks.iter().any(|b| b.len() != size) {
            return Err(Error::Precondition(
                "blocks must be nonempty and of equal size".into(),
            ));
        }
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= degree || block_of[x] != usize::MAX {
                    return Err(Error::Precondition(format!(
                        "point {x} is out of range or in two blocks"
                    )));
                }
                block_of[x] = i;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::Precondition("blocks do not cover the domain".into()));
        }
        Ok(Self {
            degree,
            blocks,
            block_of,
        })
    }

    /// The system of translates of `block` under a transitive `g`.
    pub fn from_block(g: &GroupSpec, block: &[usize]) -> Result<Self> {
        require_transitive(g)?;
        let mut first: Vec<usize> = block.to_vec();
        first.sort_unstable();
        let mut blocks = vec![first];
        let mut covered = vec![false; g.degree()];
        for &x in &blocks[0] {
            covered[x] = true;
        }
        let mut k = 0;
        while k < blocks.len() {
            for gen in g.generators() {
                let mut image: Vec<usize> = blocks[k].iter().map(|&x| gen.apply(x)).collect();
                image.sort_unstable();
                if covered[image[0]] {
                    continue;
                }
                for &x in &image {
                    if covered[x] {
                        return Err(Error::Precondition(format!("{block:?} is not a block")));
                    }
                    covered[x] = true;
                }
                blocks.push(image);
            }
            k += 1;
        }
        let bs = Self::from_partition(g.degree(), blocks)?;
        bs.check_invariant(g)?;
        Ok(bs)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, index: usize) -> &[usize] {
        &self.blocks[index]
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.block_of[point]
    }

    /// `r`, the common block size.
    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    /// `d = n / r`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_nontrivial(&self) -> bool {
        let r = self.block_size();
        1 < r && r < self.degree
    }

    /// Image of each block under `perm`, failing if some block is split.
    pub fn permute_blocks(&self, perm: &Permutation) -> Option<Permutation> {
        let mut images = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let target = self.block_of[perm.apply(b[0])];
            if b.iter().any(|&x| self.block_of[perm.apply(x)] != target) {
                return None;
            }
            images.push(target as u32);
        }
        Some(Permutation::from_images_unchecked(images))
    }

    pub fn check_invariant(&self, g: &GroupSpec) -> Result<()> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: g.degree(),
            });
        }
        for (gi, gen) in g.generators().iter().enumerate() {
            for (bi, b) in self.blocks.iter().enumerate() {
                let target = self.block_of[gen.apply(b[0])];
                if b.iter().any(|&x| self.block_of[gen.apply(x)] != target) {
                    return Err(Error::NotInvariant {
                        generator: gi,
                        block: bi,
                    });
                }
            }
        }
        Ok(())
    }
}

/// The block system generated by an inclusion-minimal nontrivial block
/// through point 0, or `None` when `g` is primitive.
///
/// Candidates are `minimal_block(0, β)` for every `β ≠ 0`; the smallest
/// proper one wins, ties going to the smallest `β`. Degree 2 is primitive.
pub fn minimal_block_system(g: &GroupSpec) -> Result<Option<BlockSystem>> {
    let n = g.degree();
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    require_transitive(g)?;
    let mut best: Option<Vec<usize>> = None;
    for beta in 1..n {
        let block = minimal_block_unchecked(g, 0, beta);
        if block.len() == n {
            continue;
        }
        if best.as_ref().is_none_or(|b| block.len() < b.len()) {
            let done = block.len() == 2;
            best = Some(block);
            if done {
                break;
            }
        }
    }
    best.map(|b| BlockSystem::from_block(g, &b)).transpose()
}

pub fn is_primitive(g: &GroupSpec) -> Result<bool> {
    Ok(minimal_block_system(g)?.is_none())
}

/// The permutation action of `g` on the blocks of `bs` (the top-group
/// projection), on `d` points.
pub fn block_action(g: &GroupSpec, bs: &BlockSystem) -> Result<GroupSpec> {
    bs.check_invariant(g)?;
    let gens = g
        .generators()
        .iter()
        .map(|gen| bs.permute_blocks(gen).expect("invariance checked"))
        .collect();
    let out = GroupSpec::new(bs.block_count(), gens)?;
    Ok(match g.label() {
        Some(l) => out.with_label(format!("{l} on blocks")),
        None => out,
    })
}

/// Generators of the setwise stabilizer of block `index`, as elements of
/// `g`: Schreier generators of the stabilizer of `index` in the block
/// action, pulled back to `g`.
pub fn block_stabilizer_generators(
    g: &GroupSpec,
    bs: &BlockSystem,
    index: usize,
) -> Result<Vec<Permutation>> {
    bs.check_invariant(g)?;
    if index >= bs.block_count() {
        return Err(Error::Precondition(format!("no block {index}")));
    }
    let d = bs.block_count();
    let block_gens: Vec<Permutation> = g
        .generators()
        .iter()
        .map(|gen| bs.permute_blocks(gen).expect("invariance checked"))
        .collect();
    let mut transversal: Vec<Option<Permutation>> = vec![None; d];
    transversal[index] = Some(Permutation::identity(g.degree()));
    let mut orbit = vec![index];
    let mut k = 0;
    while k < orbit.len() {
        let b = orbit[k];
        for (gen, bgen) in g.generators().iter().zip(&block_gens) {
            let c = bgen.apply(b);
            if transversal[c].is_none() {
                transversal[c] = Some(transversal[b].as_ref().unwrap().then(gen));
                orbit.push(c);
            }
        }
        k += 1;
    }
    let mut out = Vec::new();
    for &b in &orbit {
        for (gen, bgen) in g.generators().iter().zip(&block_gens) {
            let c = bgen.apply(b);
            let h = transversal[b]
                .as_ref()
                .unwrap()
                .then(gen)
                .then(&transversal[c].as_ref().unwrap().inverse());
            if !h.is_identity() && !out.contains(&h) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// Restricts `perm` (which must stabilize `block` setwise) to the sorted
/// block, relabelled `0..r`.
pub fn restrict_to_block(perm: &Permutation, block: &[usize]) -> Permutation {
    let images = block
        .iter()
        .map(|&x| {
            let y = perm.apply(x);
            block.binary_search(&y).expect("block not stabilized") as u32
        })
        .collect();
    Permutation::from_images_unchecked(images)
}

/// The group induced on block `index` by its setwise stabilizer, on `r`
/// points (block points relabelled in increasing order).
pub fn block_restriction(g: &GroupSpec, bs: &BlockSystem, index: usize) -> Result<GroupSpec> {
    require_transitive(g)?;
    let block = bs.block(index);
    let r = block.len();
    let mut chain = StabilizerChain::trivial(r);
    let mut gens = Vec::new();
    for h in block_stabilizer_generators(g, bs, index)? {
        let local = restrict_to_block(&h, block);
        if chain.insert(&local) {
            gens.push(local);
        }
    }
    let out = if gens.is_empty() {
        GroupSpec::trivial(r)
    } else {
        GroupSpec::new(r, gens)?
    };
    Ok(match g.label() {
        Some(l) => out.with_label(format!("{l} block {index}")),
        None => out,
    })
}
