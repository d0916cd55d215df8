//! Wreath products, the block-system hypotheses, recursive bound
//! certificates for `log₂|G_ab|`, and the end-to-end theorem check.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{
    block_action, block_restriction, block_stabilizer_generators, is_transitive,
    minimal_block_system, restrict_to_block, BlockSystem,
};
use crate::chain::{build_chain, StabilizerChain};
use crate::error::{Error, Result};
use crate::inequalities::{decide_le, kp_bits, theorem_rhs_bits, Constants, KP_THRESHOLD};
use crate::interval::{decimal, parse_decimal, Interval, DEFAULT_PRECISION};
use crate::perm::{GroupSpec, Permutation, DEFAULT_DEGREE_CAP};
use crate::structure::{a_invariant_with, abelianization_order, ARInvariant, FactorOptions};

/// Fractional digits of the decimal endpoints stored in a certificate.
pub const CERT_DIGITS: usize = 40;

/// `R wr T`: the bottom group `R` on `r` points, the top group `T` on `d`
/// points.
#[derive(Clone, Debug)]
pub struct WreathSpec {
    pub bottom: GroupSpec,
    pub top: GroupSpec,
}

impl WreathSpec {
    pub fn new(bottom: GroupSpec, top: GroupSpec) -> Self {
        Self { bottom, top }
    }

    pub fn degree(&self) -> usize {
        self.bottom.degree() * self.top.degree()
    }

    /// Point `(i, δ)` is `δ·r + i`; the fibers `{δ·r, …, δ·r + r − 1}` form
    /// the natural block system.
    pub fn build(&self) -> Result<GroupSpec> {
        let r = self.bottom.degree();
        let d = self.top.degree();
        let n = r * d;
        if n > DEFAULT_DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree: n,
                cap: DEFAULT_DEGREE_CAP,
            });
        }
        let mut gens = Vec::new();
        for b in self.bottom.generators() {
            let images: Vec<usize> = (0..n).map(|x| if x < r { b.apply(x) } else { x }).collect();
            gens.push(Permutation::from_images(images)?);
        }
        for t in self.top.generators() {
            let images: Vec<usize> = (0..n).map(|x| t.apply(x / r) * r + x % r).collect();
            gens.push(Permutation::from_images(images)?);
        }
        let out = GroupSpec::new(n, gens)?;
        Ok(match (self.bottom.label(), self.top.label()) {
            (Some(a), Some(b)) => out.with_label(format!("{a} wr {b}")),
            _ => out,
        })
    }

    pub fn fiber_blocks(&self) -> Result<BlockSystem> {
        let r = self.bottom.degree();
        let blocks = (0..self.top.degree())
            .map(|delta| (delta * r..delta * r + r).collect())
            .collect();
        BlockSystem::from_partition(self.degree(), blocks)
    }
}

/// The imprimitive wreath product `R wr T` on `r·d` points.
pub fn wreath_product(r: &GroupSpec, t: &GroupSpec) -> Result<GroupSpec> {
    WreathSpec::new(r.clone(), t.clone()).build()
}

/// Outcome of checking one block in [`hypothesis_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCheck {
    pub index: usize,
    /// Order of the group induced on the block by its setwise stabilizer.
    pub order: BigUint,
    /// Whether that group equals the block-0 group carried over by an
    /// element of `G` mapping block 0 to this block.
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    /// `π(G)` is transitive on the blocks.
    pub blocks_transitive: bool,
    /// One entry per block, empty when the blocks are not transitive.
    pub blocks: Vec<BlockCheck>,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.blocks_transitive && self.blocks.iter().all(|b| b.matches)
    }
}

fn induced_chain(g: &GroupSpec, bs: &BlockSystem, index: usize) -> Result<StabilizerChain> {
    let block = bs.block(index);
    let mut chain = StabilizerChain::trivial(block.len());
    for h in block_stabilizer_generators(g, bs, index)? {
        chain.insert(&restrict_to_block(&h, block));
    }
    Ok(chain)
}

fn same_group(a: &StabilizerChain, b: &StabilizerChain) -> bool {
    a.order() == b.order()
        && a.strong_generators()
            .iter()
            .all(|x| b.contains_unchecked(x))
}

/// Checks the two conditions the inductive step needs for the block system
/// `bs`: the blocks are permuted transitively, and the group `R_δ` induced on
/// each block `δ` is the block-0 group transported along `G`.
pub fn hypothesis_check(g: &GroupSpec, bs: &BlockSystem) -> Result<HypothesisReport> {
    let top = block_action(g, bs)?;
    if !is_transitive(&top) {
        return Ok(HypothesisReport {
            blocks_transitive: false,
            blocks: Vec::new(),
        });
    }
    let d = bs.block_count();
    let mut carry: Vec<Option<Permutation>> = vec![None; d];
    carry[0] = Some(Permutation::identity(g.degree()));
    let mut queue = vec![0];
    while let Some(b) = queue.pop() {
        for gen in g.generators() {
            let c = bs.block_of(gen.apply(bs.block(b)[0]));
            if carry[c].is_none() {
                carry[c] = Some(carry[b].as_ref().unwrap().then(gen));
                queue.push(c);
            }
        }
    }
    let r0 = induced_chain(g, bs, 0)?;
    let block0 = bs.block(0);
    let mut blocks = Vec::with_capacity(d);
    for (index, t) in carry.iter().enumerate() {
        let t = t.as_ref().expect("blocks are transitive");
        let block = bs.block(index);
        let t_inv = t.inverse();
        // x ↦ t(r(t⁻¹(x))) on the block's sorted points.
        let mut transported = StabilizerChain::trivial(block.len());
        for s in r0.strong_generators() {
            let images: Vec<usize> = block
                .iter()
                .map(|&x| {
                    let y = t_inv.apply(x);
                    let i = block0.binary_search(&y).expect("t maps block 0 here");
                    let z = t.apply(block0[s.apply(i)]);
                    block.binary_search(&z).expect("t maps block 0 here")
                })
                .collect();
            transported.insert(&Permutation::from_images(images)?);
        }
        let direct = induced_chain(g, bs, index)?;
        blocks.push(BlockCheck {
            index,
            order: direct.order(),
            matches: same_group(&direct, &transported),
        });
    }
    Ok(HypothesisReport {
        blocks_transitive: true,
        blocks,
    })
}

/// What a certificate node rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// `G` is primitive, so `|G_ab| ≤ n`.
    PrimitiveBase,
    /// A minimal block system splits off the term `a(R)·b′·d/√log₂ d`.
    ImprimitiveStep,
    /// `n ≤ 20603` and the bound `|G_ab| ≤ 3^{n/3}` is used directly.
    SmallDegreeKpBase,
}

impl std::fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::PrimitiveBase => "primitive-base",
            Self::ImprimitiveStep => "imprimitive-step",
            Self::SmallDegreeKpBase => "small-degree-kp-base",
        })
    }
}

/// Data recorded for an imprimitive step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub r: usize,
    pub d: usize,
    pub a_r: ARInvariant,
    pub term_lo: BigRational,
    pub term_hi: BigRational,
    pub child: Box<Certificate>,
}

/// A recursive upper bound on `log₂|G_ab|`. Decimal endpoints carry
/// [`CERT_DIGITS`] fractional digits so a node's bound is exactly its
/// child's bound plus its term's upper end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub degree: usize,
    pub kind: CertificateKind,
    pub step: Option<Step>,
    pub bound_hi: BigRational,
    pub precision: u32,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    degree: usize,
    kind: CertificateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(rename = "aR_exact", default, skip_serializing_if = "Option::is_none")]
    a_r_exact: Option<String>,
    #[serde(rename = "aR_counts", default, skip_serializing_if = "Option::is_none")]
    a_r_counts: Option<BTreeMap<u64, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    term_lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    term_hi: Option<String>,
    bound_hi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    child: Option<Box<Wire>>,
    precision: u32,
}

fn dec(q: &BigRational) -> String {
    decimal(q, CERT_DIGITS, true)
}

fn undec(field: &str, s: &str) -> Result<BigRational> {
    parse_decimal(s).ok_or_else(|| Error::Certificate(format!("{field}: bad decimal {s:?}")))
}

impl Certificate {
    pub fn depth(&self) -> usize {
        1 + self.step.as_ref().map_or(0, |s| s.child.depth())
    }

    /// The nodes from the root down to the leaf.
    pub fn path(&self) -> Vec<&Certificate> {
        let mut out = vec![self];
        while let Some(step) = &out.last().unwrap().step {
            out.push(&step.child);
        }
        out
    }

    fn to_wire(&self) -> Wire {
        let step = self.step.as_ref();
        Wire {
            degree: self.degree,
            kind: self.kind,
            r: step.map(|s| s.r),
            d: step.map(|s| s.d),
            a_r_exact: step.map(|s| s.a_r.product().to_string()),
            a_r_counts: step.map(|s| s.a_r.counts.clone()),
            term_lo: step.map(|s| decimal(&s.term_lo, CERT_DIGITS, false)),
            term_hi: step.map(|s| dec(&s.term_hi)),
            bound_hi: dec(&self.bound_hi),
            child: step.map(|s| Box::new(s.child.to_wire())),
            precision: self.precision,
        }
    }

    fn from_wire(w: Wire) -> Result<Self> {
        let step = match (w.r, w.d, w.a_r_counts, w.term_lo, w.term_hi, w.child) {
            (None, None, None, None, None, None) => None,
            (Some(r), Some(d), Some(counts), Some(lo), Some(hi), Some(child)) => {
                let a_r = ARInvariant { counts };
                if let Some(p) = &w.a_r_exact {
                    if a_r.product().to_string() != *p {
                        return Err(Error::Certificate(format!(
                            "aR_exact {p} disagrees with aR_counts"
                        )));
                    }
                }
                Some(Step {
                    r,
                    d,
                    a_r,
                    term_lo: undec("term_lo", &lo)?,
                    term_hi: undec("term_hi", &hi)?,
                    child: Box::new(Self::from_wire(*child)?),
                })
            }
            _ => {
                return Err(Error::Certificate(format!(
                    "degree {} node has partial step data",
                    w.degree
                )))
            }
        };
        Ok(Self {
            degree: w.degree,
            kind: w.kind,
            step,
            bound_hi: undec("bound_hi", &w.bound_hi)?,
            precision: w.precision,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_wire()).expect("plain data") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_wire(serde_json::from_str(text)?)
    }

    /// Upper end of the bound as an `f64` rounded upward.
    pub fn bound_hi_f64(&self) -> f64 {
        Interval::from_rational(&self.bound_hi, 64)
            .to_f64_bounds()
            .1
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub prec: u32,
    /// Stop at the first node of degree at most 20603 with a
    /// [`CertificateKind::SmallDegreeKpBase`] leaf.
    pub kp_base: bool,
    pub factors: FactorOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            prec: DEFAULT_PRECISION,
            kp_base: false,
            factors: FactorOptions::default(),
        }
    }
}

/// `a·b′·d/√(log₂ d)`.
pub fn step_term(a: &Interval, d: u64, bprime: &Interval) -> Result<Interval> {
    let prec = a.prec().max(bprime.prec());
    let scale = Interval::from_int(d, prec).div(&Interval::from_int(d, prec).log2()?.sqrt()?)?;
    Ok(&(a * bprime) * &scale)
}

fn leaf_bound(kind: CertificateKind, n: usize, prec: u32) -> Result<Interval> {
    match kind {
        CertificateKind::PrimitiveBase => Interval::from_int(n as u64, prec).log2(),
        CertificateKind::SmallDegreeKpBase => Ok(kp_bits(n as u64, prec)),
        CertificateKind::ImprimitiveStep => unreachable!("not a leaf"),
    }
}

fn leaf(kind: CertificateKind, n: usize, prec: u32) -> Result<Certificate> {
    let bound = leaf_bound(kind, n, prec)?;
    Ok(Certificate {
        degree: n,
        kind,
        step: None,
        bound_hi: parse_decimal(&bound.hi_decimal(CERT_DIGITS)).expect("own output"),
        precision: prec,
    })
}

/// Certificate for a transitive group of degree at least 2.
pub fn certify(g: &GroupSpec) -> Result<Certificate> {
    certify_with(g, &CertifyOptions::default())
}

pub fn certify_with(g: &GroupSpec, opts: &CertifyOptions) -> Result<Certificate> {
    let n = g.degree();
    let prec = opts.prec;
    let bs = match minimal_block_system(g)? {
        _ if opts.kp_base && n as u64 <= KP_THRESHOLD => {
            return leaf(CertificateKind::SmallDegreeKpBase, n, prec)
        }
        None => return leaf(CertificateKind::PrimitiveBase, n, prec),
        Some(bs) => bs,
    };
    let r = bs.block_size();
    let d = bs.block_count();
    let a_r = a_invariant_with(&block_restriction(g, &bs, 0)?, &opts.factors)?;
    let bprime = Constants::compute(prec).bprime;
    let term = step_term(&a_r.a_value(prec), d as u64, &bprime)?;
    let child = certify_with(&block_action(g, &bs)?, opts)?;
    let term_lo = parse_decimal(&term.lo_decimal(CERT_DIGITS)).expect("own output");
    let term_hi = parse_decimal(&term.hi_decimal(CERT_DIGITS)).expect("own output");
    Ok(Certificate {
        degree: n,
        kind: CertificateKind::ImprimitiveStep,
        bound_hi: &child.bound_hi + &term_hi,
        step: Some(Step {
            r,
            d,
            a_r,
            term_lo,
            term_hi,
            child: Box::new(child),
        }),
        precision: prec,
    })
}

fn point(q: &BigRational, prec: u32) -> Interval {
    Interval::from_rational(q, prec)
}

/// Re-derives every node of `cert` from its recorded data alone: leaf
/// bounds against `log₂ n` (or `(n/3) log₂ 3`), each term against a fresh
/// enclosure of `a(R)·b′·d/√log₂ d`, and each bound as child plus term.
pub fn recheck(cert: &Certificate) -> Result<()> {
    let fail = |msg: String| Err(Error::Certificate(format!("degree {}: {msg}", cert.degree)));
    let prec = cert.precision.max(16);
    match (&cert.kind, &cert.step) {
        (CertificateKind::ImprimitiveStep, Some(step)) => {
            if step.r < 2 || step.d < 2 || step.r * step.d != cert.degree {
                return fail(format!(
                    "r = {}, d = {} do not split the degree",
                    step.r, step.d
                ));
            }
            if step.child.degree != step.d {
                return fail(format!(
                    "child has degree {} instead of {}",
                    step.child.degree, step.d
                ));
            }
            if step
                .a_r
                .counts
                .keys()
                .any(|&p| !crate::structure::is_prime(p))
            {
                return fail("aR_counts lists a non-prime".into());
            }
            let a = step.a_r.a_value(prec);
            let d = step.d as u64;
            let upper = decide_le("certificate term upper end", prec, |p| {
                let bprime = Constants::compute(p).bprime;
                Ok((
                    step_term(&step.a_r.a_value(p), d, &bprime)?,
                    point(&step.term_hi, p),
                ))
            })?;
            let lower = decide_le("certificate term lower end", prec, |p| {
                let bprime = Constants::compute(p).bprime;
                Ok((
                    point(&step.term_lo, p),
                    step_term(&step.a_r.a_value(p), d, &bprime)?,
                ))
            })?;
            if !upper || !lower {
                return fail(format!(
                    "term does not enclose a(R)·b′·d/√log d with a(R) ∈ {a}"
                ));
            }
            if cert.bound_hi < &step.child.bound_hi + &step.term_hi {
                return fail("bound is below child bound plus term".into());
            }
            recheck(&step.child)
        }
        (CertificateKind::ImprimitiveStep, None) => {
            fail("imprimitive node without step data".into())
        }
        (kind, None) => {
            if *kind == CertificateKind::SmallDegreeKpBase && cert.degree as u64 > KP_THRESHOLD {
                return fail("KP base used above the threshold".into());
            }
            let covered = decide_le("certificate leaf", prec, |p| {
                Ok((leaf_bound(*kind, cert.degree, p)?, point(&cert.bound_hi, p)))
            })?;
            if covered {
                Ok(())
            } else {
                fail("leaf bound is too small".into())
            }
        }
        (_, Some(_)) => fail("leaf node with step data".into()),
    }
}

/// Result of checking `|G_ab| ≤ 4^{n/√log₂ n}` for one group.
#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub degree: usize,
    /// `m = |G_ab|`, exact.
    pub abelianization: BigUint,
    /// Enclosure of `2n/√(log₂ n) − log₂ m`.
    pub margin: Interval,
    pub theorem_holds: bool,
    /// `m ≤ 3^{n/3}`, decided exactly as `m³ ≤ 3ⁿ`.
    pub kp_holds: bool,
    pub certificate_bound_hi: BigRational,
    /// Whether the certificate's bound alone is at most `2n/√(log₂ n)`.
    pub certificate_suffices: bool,
    /// Whether `log₂ m` lies below the certificate's bound.
    pub certificate_sound: bool,
}

impl TheoremReport {
    pub fn passes(&self) -> bool {
        self.theorem_holds && self.kp_holds && self.certificate_sound
    }
}

fn log2_big(m: &BigUint, prec: u32) -> Result<Interval> {
    Interval::from_int(BigInt::from(m.clone()), prec).log2()
}

pub fn verify_theorem(g: &GroupSpec) -> Result<TheoremReport> {
    verify_theorem_with(g, &CertifyOptions::default())
}

pub fn verify_theorem_with(g: &GroupSpec, opts: &CertifyOptions) -> Result<TheoremReport> {
    let n = g.degree();
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    if !is_transitive(g) {
        return Err(Error::NotTransitive);
    }
    let m = abelianization_order(g);
    let prec = opts.prec;
    let theorem_holds = decide_le("|G_ab| against the theorem bound", prec, |p| {
        Ok((log2_big(&m, p)?, theorem_rhs_bits(n as u64, p)?))
    })?;
    let margin = &theorem_rhs_bits(n as u64, prec)? - &log2_big(&m, prec)?;
    let kp_holds = m.pow(3) <= BigUint::from(3u32).pow(n as u32);
    let cert = certify_with(g, opts)?;
    let certificate_suffices = decide_le("certificate against the theorem bound", prec, |p| {
        Ok((point(&cert.bound_hi, p), theorem_rhs_bits(n as u64, p)?))
    })?;
    let certificate_sound = m.is_zero()
        || decide_le("log2 |G_ab| against the certificate", prec, |p| {
            Ok((log2_big(&m, p)?, point(&cert.bound_hi, p)))
        })?;
    Ok(TheoremReport {
        degree: n,
        abelianization: m,
        margin,
        theorem_holds,
        kp_holds,
        certificate_bound_hi: cert.bound_hi,
        certificate_suffices,
        certificate_sound,
    })
}

/// [`verify_theorem_with`] over many groups, on `jobs` threads when given;
/// results come back in input order.
pub fn verify_all(
    groups: &[GroupSpec],
    opts: &CertifyOptions,
    jobs: Option<usize>,
) -> Result<Vec<Result<TheoremReport>>> {
    let run = || {
        groups
            .par_iter()
            .map(|g| verify_theorem_with(g, opts))
            .collect()
    };
    match jobs {
        Some(k) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?
            .install(run)),
        None => Ok(run()),
    }
}

/// The group's order, saturating at `u64::MAX`.
pub fn order_of(g: &GroupSpec) -> u64 {
    build_chain(g).order().to_u64().unwrap_or(u64::MAX)
}
