//! Permutations of `{0, …, n-1}`, generated groups, and the textual group file
//! format.
//!
//! All products act on the right: `p.then(&q)` first applies `p`, then `q`, so
//! `i ↦ q(p(i))`. Orbits, stabilizer chains and block actions all use this
//! convention.

use std::fmt;

use crate::error::{Error, Result};

/// Largest degree accepted by the parser unless the caller raises it.
pub const DEFAULT_DEGREE_CAP: usize = 10_000;

/// A bijection of `{0, …, n-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image list, checking that it is a
    /// bijection.
    pub fn from_images<I, T>(images: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: TryInto<u32>,
    {
        let images: Vec<u32> = images
            .into_iter()
            .map(|x| {
                x.try_into()
                    .map_err(|_| Error::InvalidPermutation("image out of range".into()))
            })
            .collect::<Result<_>>()?;
        if images.is_empty() {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} out of range for degree {}",
                    images.len()
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
        }
        Ok(Self { images })
    }

    /// Builds a permutation from disjoint 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {a} out of range for degree {degree}"
                    )));
                }
                if std::mem::replace(&mut used[a], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {a} appears twice"
                    )));
                }
                images[a] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Self::from_images(images)
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Self { images: inv }
    }

    /// `self` followed by `other`. Panics on a degree mismatch; use
    /// [`permutation_product`] for a checked version.
    pub fn then(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Self {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[x as usize];
        }
        Self { images }
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().then(&b.inverse()).then(a).then(b)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, each starting at its smallest
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted cycle lengths including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lens = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.apply(x);
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i != x as usize)
            .map(|(i, _)| i)
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Checked product: the result maps `i` to `q(p(i))`.
pub fn permutation_product(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    Ok(p.then(q))
}

/// A permutation group given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    degree: usize,
    generators: Vec<Permutation>,
    label: Option<String>,
}

impl GroupSpec {
    /// `generators` must be nonempty and all of degree `degree`.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::Precondition(
                "a group needs at least one generator".into(),
            ));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        Ok(Self {
            degree,
            generators,
            label: None,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            generators: vec![Permutation::identity(degree)],
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Generators with identities removed.
    pub fn nontrivial_generators(&self) -> impl Iterator<Item = &Permutation> {
        self.generators.iter().filter(|g| !g.is_identity())
    }
}

/// Parses the group file format with [`DEFAULT_DEGREE_CAP`].
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    parse_group_capped(text, DEFAULT_DEGREE_CAP)
}

/// Parses the group file format:
///
/// ```text
/// degree 4
/// # comment
/// gen (1,2,3,4)
/// gen (1,3)
/// ```
///
/// Points are 1-based in the file and 0-based in the result. A comment of
/// the form `# label: <text>` sets the group label.
pub fn parse_group_capped(text: &str, degree_cap: usize) -> Result<GroupSpec> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    let mut label = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(l) = comment.trim_start().strip_prefix("label:") {
                label = Some(l.trim().to_string());
            }
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "degree" => {
                if degree.is_some() {
                    return Err(err("duplicate degree header".into()));
                }
                let n: usize = rest
                    .parse()
                    .map_err(|_| err(format!("invalid degree {rest:?}")))?;
                if n == 0 {
                    return Err(err("degree must be positive".into()));
                }
                if n > degree_cap {
                    return Err(Error::DegreeCap {
                        degree: n,
                        cap: degree_cap,
                    });
                }
                degree = Some(n);
            }
            "gen" => {
                let n = degree.ok_or_else(|| err("missing degree header".into()))?;
                gens.push(parse_cycles(rest, n).map_err(err)?);
            }
            other => return Err(err(format!("unknown keyword {other:?}"))),
        }
    }
    let degree = degree.ok_or(Error::Parse {
        line: 0,
        msg: "missing degree header".into(),
    })?;
    if gens.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no generators".into(),
        });
    }
    let mut g = GroupSpec::new(degree, gens)?;
    g.label = label;
    Ok(g)
}

fn parse_cycles(text: &str, degree: usize) -> std::result::Result<Permutation, String> {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut used = vec![false; degree];
    let mut rest = text.trim_start();
    if rest.is_empty() {
        return Err("empty generator".into());
    }
    while !rest.is_empty() {
        let body_end = rest
            .find(')')
            .ok_or_else(|| format!("unterminated cycle in {text:?}"))?;
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("malformed cycle in {text:?}"))?;
        let body = &body[..body_end - 1];
        rest = rest[body_end + 1..].trim_start();
        if body.is_empty() {
            continue;
        }
        let points: Vec<usize> = body
            .split(',')
            .map(|tok| {
                let p: usize = tok
                    .parse()
                    .map_err(|_| format!("malformed cycle entry {tok:?}"))?;
                if p == 0 || p > degree {
                    return Err(format!("point {p} out of range 1..={degree}"));
                }
                Ok(p - 1)
            })
            .collect::<std::result::Result<_, _>>()?;
        for (k, &a) in points.iter().enumerate() {
            if std::mem::replace(&mut used[a], true) {
                return Err(format!("duplicate point {}", a + 1));
            }
            images[a] = points[(k + 1) % points.len()] as u32;
        }
    }
    Ok(Permutation::from_images_unchecked(images))
}

/// Writes the group file format; inverse of [`parse_group`].
pub fn format_group(g: &GroupSpec) -> String {
    let mut out = format!("degree {}\n", g.degree);
    if let Some(label) = &g.label {
        out.push_str(&format!("# label: {label}\n"));
    }
    for gen in &g.generators {
        out.push_str(&format!("gen {gen}\n"));
    }
    out
}
