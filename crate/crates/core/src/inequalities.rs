//! The numeric side of the bound: the constants `c₀` and `b′`, the crossover
//! between the `3^{n/3}` bound and `4^{n/√log₂ n}`, the primitive-group
//! bound on `a(R)`, and the inductive right-hand side checked for every
//! admissible block size.
//!
//! Every decision here compares disjoint interval enclosures. When two
//! enclosures overlap the computation is repeated at twice the precision,
//! up to [`MAX_PRECISION`] bits, and only then reported as indeterminate.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::{ceil_shr, pi, Interval, DEFAULT_PRECISION, MAX_PRECISION};

/// First degree not covered by the `3^{n/3}` bound.
pub const SWEEP_START: u64 = 20_604;

/// Largest degree for which `3^{n/3} ≤ 4^{n/√log₂ n}`; [`kp_threshold`]
/// recomputes it.
pub const KP_THRESHOLD: u64 = 20_603;

/// Default upper end of the inequality sweep.
pub const DEFAULT_SWEEP_END: u64 = 1_000_000;

/// Enclosures of the constants the bound consumes.
#[derive(Clone, Debug)]
pub struct Constants {
    pub prec: u32,
    /// `log₉(48 · 24^{1/3})`.
    pub c0: Interval,
    /// `2/√π`.
    pub bprime: Interval,
    /// `log₂(24) / 3`.
    pub log24_over_3: Interval,
    /// `log₂ 3`.
    pub log3: Interval,
}

impl Constants {
    /// Computes every constant with a few guard bits and rounds to `prec`;
    /// widths end up at most `2^{2-prec}`.
    pub fn compute(prec: u32) -> Self {
        let w = prec + 16;
        let log = |n: u64| Interval::from_int(n, w).log2().expect("positive");
        let log3 = log(3);
        let log24_over_3 = log(24).div(&Interval::from_int(3, w)).expect("nonzero");
        // log₉ x = log₂ x / log₂ 9
        let c0 = (&log(48) + &log24_over_3).div(&log(9)).expect("nonzero");
        let two = Interval::from_int(2, w);
        let bprime = two.div(&pi(w).sqrt().expect("positive")).expect("nonzero");
        Self {
            prec,
            c0: c0.round_to(prec),
            bprime: bprime.round_to(prec),
            log24_over_3: log24_over_3.round_to(prec),
            log3: log3.round_to(prec),
        }
    }
}

/// Runs `attempt` at increasing precision until it returns a decision.
pub fn escalate<T>(
    what: &str,
    start: u32,
    mut attempt: impl FnMut(u32) -> Result<Option<T>>,
) -> Result<T> {
    let mut prec = start.max(16);
    loop {
        if let Some(v) = attempt(prec)? {
            return Ok(v);
        }
        if prec >= MAX_PRECISION {
            return Err(Error::Indeterminate {
                what: what.to_string(),
                bits: prec,
            });
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

/// Decides `a ≤ b` for the enclosures produced by `f` at each precision.
pub fn decide_le(
    what: &str,
    start: u32,
    f: impl Fn(u32) -> Result<(Interval, Interval)>,
) -> Result<bool> {
    escalate(what, start, |p| {
        let (a, b) = f(p)?;
        Ok(if a.certainly_le(&b) {
            Some(true)
        } else if b.certainly_lt(&a) {
            Some(false)
        } else {
            None
        })
    })
}

/// `2n / √(log₂ n)`, the base-2 logarithm of `4^{n/√log₂ n}`.
pub fn theorem_rhs_bits(n: u64, prec: u32) -> Result<Interval> {
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n} must be at least 2")));
    }
    let log_n = Interval::from_int(n, prec).log2()?;
    Interval::from_int(2 * n, prec).div(&log_n.sqrt()?)
}

/// `(n/3) · log₂ 3`, the base-2 logarithm of `3^{n/3}`.
pub fn kp_bits(n: u64, prec: u32) -> Interval {
    let c = Constants::compute(prec);
    c.log3
        .mul_int(n)
        .div(&Interval::from_int(3, prec))
        .expect("nonzero")
}

/// Whether `3^{n/3} ≤ 4^{n/√log₂ n}`.
pub fn kp_holds(n: u64) -> Result<bool> {
    decide_le(
        &format!("3^(n/3) vs 4^(n/sqrt(log n)) at n = {n}"),
        DEFAULT_PRECISION,
        |p| Ok((kp_bits(n, p), theorem_rhs_bits(n, p)?)),
    )
}

/// Largest `n` with `3^{n/3} ≤ 4^{n/√log₂ n}`.
///
/// The inequality is equivalent to `log₂ n ≤ 36 / (log₂ 3)²`, so the answer
/// is `⌊2^{36/(log₂ 3)²}⌋`; the enclosure is refined until its floor is
/// unambiguous, and the result is then re-checked against the original
/// inequality on both sides of the threshold.
pub fn kp_threshold() -> Result<u64> {
    let t = escalate("floor of the KP threshold", DEFAULT_PRECISION, |p| {
        let log3 = Interval::from_int(3, p + 16).log2()?;
        let exponent = Interval::from_int(36, p + 16).div(&log3.square())?;
        let value = exponent.pow2().round_to(p);
        let (lo, hi) = (value.lo().floor(), value.hi().floor());
        Ok((lo == hi).then(|| lo.to_integer()))
    })?;
    let t: u64 = t
        .try_into()
        .map_err(|_| Error::Precondition("threshold does not fit in u64".into()))?;
    if !kp_holds(t)? || kp_holds(t + 1)? {
        return Err(Error::Indeterminate {
            what: "threshold cross-check".into(),
            bits: MAX_PRECISION,
        });
    }
    Ok(t)
}

/// `(1 + c₀) log₂ r − log₂(24)/3`, the bound on `a(R)` for primitive `R` of
/// degree `r`.
pub fn primitive_a_bound(r: u64, prec: u32) -> Result<Interval> {
    if r < 2 {
        return Err(Error::Precondition(format!("r = {r} must be at least 2")));
    }
    let c = Constants::compute(prec);
    Ok(primitive_a_from(&c, &Interval::from_int(r, prec).log2()?))
}

fn primitive_a_from(c: &Constants, log_r: &Interval) -> Interval {
    let one_plus_c0 = &Interval::from_int(1, c.prec) + &c.c0;
    &(&one_plus_c0 * log_r) - &c.log24_over_3
}

/// The value substituted for `a(R)` at block size `r`: the exact maxima
/// `1`, `1 + log₂ 3`, `3 + log₂ 3` for `r = 2, 3, 4`, and the primitive
/// bound [`primitive_a_bound`] beyond.
pub fn a_bound(r: u64, prec: u32) -> Result<Interval> {
    let c = Constants::compute(prec);
    match r {
        0 | 1 => Err(Error::Precondition(format!("r = {r} must be at least 2"))),
        2 => Ok(Interval::from_int(1, prec)),
        3 => Ok(&Interval::from_int(1, prec) + &c.log3),
        4 => Ok(&Interval::from_int(3, prec) + &c.log3),
        _ => primitive_a_bound(r, prec),
    }
}

/// `b′ d / √(log₂ d) · a + 2 d / √(log₂ d)` with `d = n / r`.
pub fn rhs_aux_with(n: u64, r: u64, a: &Interval, bprime: &Interval) -> Result<Interval> {
    if r < 2 || !n.is_multiple_of(r) || n / r < 2 {
        return Err(Error::Precondition(format!(
            "need r ≥ 2, r | n and n/r ≥ 2 (n = {n}, r = {r})"
        )));
    }
    let prec = a.prec().max(bprime.prec());
    let d = n / r;
    let log_d = Interval::from_int(d, prec).log2()?;
    aux_from_parts(d, &log_d, a, bprime)
}

fn aux_from_parts(d: u64, log_d: &Interval, a: &Interval, bprime: &Interval) -> Result<Interval> {
    let prec = a.prec().max(bprime.prec());
    let scale = Interval::from_int(d, prec).div(&log_d.sqrt()?)?;
    let factor = &(bprime * a) + &Interval::from_int(2, prec);
    Ok(&factor * &scale)
}

/// The inductive right-hand side for degree `n` and block size `r`, with
/// `b′ = 2/√π` and `a(R)` replaced by [`a_bound`].
pub fn rhs_aux(n: u64, r: u64, prec: u32) -> Result<Interval> {
    let c = Constants::compute(prec);
    rhs_aux_with(n, r, &a_bound(r, prec)?, &c.bprime)
}

/// How a sweep pair failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The right-hand side certainly exceeds `2n/√log₂ n`.
    Exceeds,
    /// Still overlapping at the maximum precision.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub n: u64,
    pub r: u64,
    pub kind: ViolationKind,
    pub rhs_aux_hi: f64,
    pub theorem_rhs_lo: f64,
}

/// The tightest block size for one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: u64,
    pub r: u64,
    pub rhs_aux_hi: f64,
    pub theorem_rhs_lo: f64,
    /// Lower bound on `theorem_rhs − rhs_aux`.
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub n_min: u64,
    pub n_max: u64,
    pub prec: u32,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Replaces `b′`; exists to show the checker can fail.
    pub bprime_override: Option<Interval>,
    /// Keep one [`SweepRow`] per `n`.
    pub keep_rows: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_min: SWEEP_START,
            n_max: DEFAULT_SWEEP_END,
            prec: DEFAULT_PRECISION,
            jobs: None,
            bprime_override: None,
            keep_rows: true,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub n_min: u64,
    pub n_max: u64,
    pub pairs_checked: u64,
    pub violations: Vec<Violation>,
    /// One row per `n` (when requested), in increasing `n`.
    pub rows: Vec<SweepRow>,
    /// The row with the smallest margin.
    pub tightest: Option<SweepRow>,
}

impl SweepReport {
    /// Smallest margin over the whole sweep.
    pub fn min_margin(&self) -> Option<&SweepRow> {
        self.tightest.as_ref()
    }

    /// CSV with columns `n,r,rhs_aux_hi,theorem_rhs_lo,margin`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,r,rhs_aux_hi,theorem_rhs_lo,margin")?;
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{:.6},{:.6},{:.6}",
                row.n, row.r, row.rhs_aux_hi, row.theorem_rhs_lo, row.margin
            )?;
        }
        Ok(())
    }
}

/// Base-2 logarithms of integers assembled from cached prime logarithms.
struct LogTable {
    prec: u32,
    /// Smallest prime factor of every integer up to the limit.
    spf: Vec<u32>,
    prime_logs: Vec<Interval>,
    /// Position of each prime in `prime_logs`.
    prime_index: Vec<u32>,
}

impl LogTable {
    fn new(limit: u64, prec: u32) -> Self {
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
                let mut j = i * i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        let mut prime_index = vec![u32::MAX; limit + 1];
        for (k, &p) in primes.iter().enumerate() {
            prime_index[p as usize] = k as u32;
        }
        let prime_logs = primes
            .par_iter()
            .map(|&p| Interval::from_int(p, prec).log2().expect("positive"))
            .collect();
        Self {
            prec,
            spf,
            prime_logs,
            prime_index,
        }
    }

    fn factor(&self, mut m: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            m /= p;
        }
        out
    }

    fn log2(&self, m: u64) -> Interval {
        let mut acc = Interval::from_int(0, self.prec);
        for (p, e) in self.factor(m) {
            let lp = &self.prime_logs[self.prime_index[p as usize] as usize];
            acc = &acc + &lp.mul_int(e);
        }
        acc
    }

    fn divisors(&self, n: u64) -> Vec<u64> {
        let mut divs = vec![1u64];
        for (p, e) in self.factor(n) {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Checks the inductive inequality on `[n_min, n_max]` with the defaults of
/// [`SweepConfig`].
pub fn check_aux_sweep(n_min: u64, n_max: u64) -> Result<SweepReport> {
    check_aux_sweep_with(&SweepConfig {
        n_min,
        n_max,
        ..SweepConfig::default()
    })
}

/// For every `n` in range and every block size `r | n` with `4 < r < n`,
/// plus `r ∈ {2, 3, 4}` when they divide `n`, decides
/// `rhs_aux(n, r) ≤ 2n/√log₂ n` rigorously.
pub fn check_aux_sweep_with(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.n_min < SWEEP_START {
        return Err(Error::Precondition(format!(
            "sweep must start at n ≥ {SWEEP_START}, got {}",
            cfg.n_min
        )));
    }
    if cfg.n_max < cfg.n_min {
        return Err(Error::Precondition(format!(
            "sweep end {} is below its start {}",
            cfg.n_max, cfg.n_min
        )));
    }
    let run = || sweep_inner(cfg);
    match cfg.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?
            .install(run),
        None => run(),
    }
}

struct NOutcome {
    n: u64,
    pairs: u64,
    /// Pairs whose fast upper bound did not clear the threshold.
    failed: Vec<u64>,
    worst: Option<SweepRow>,
}

// The right-hand side factors as G(r) · F(d) with G(r) = b′·a(r) + 2 and
// F(d) = d / √(log₂ d), both positive, so the product of their upper ends
// bounds it from above. Both factors are tabulated once; each (n, r) pair
// then costs one multiplication. Pairs that do not clear the threshold are
// re-decided from scratch with escalating precision.
fn sweep_inner(cfg: &SweepConfig) -> Result<SweepReport> {
    let prec = cfg.prec;
    let consts = Constants::compute(prec);
    let bprime = cfg
        .bprime_override
        .clone()
        .unwrap_or_else(|| consts.bprime.clone());
    let table = LogTable::new(cfg.n_max, prec);
    let one = Interval::from_int(1, prec);
    let two = Interval::from_int(2, prec);
    let small_a = [
        one.clone(),
        &one + &consts.log3,
        &Interval::from_int(3, prec) + &consts.log3,
    ];
    let half = (cfg.n_max / 2) as usize;

    let g_hi: Vec<BigInt> = (0..=half)
        .into_par_iter()
        .map(|r| {
            if r < 2 {
                return BigInt::zero();
            }
            let a = if r <= 4 {
                small_a[r - 2].clone()
            } else {
                primitive_a_from(&consts, &table.log2(r as u64))
            };
            (&(&bprime * &a) + &two)
                .round_to(prec)
                .hi_mantissa()
                .clone()
        })
        .collect();
    let f_hi: Vec<BigInt> = (0..=half)
        .into_par_iter()
        .map(|d| -> Result<BigInt> {
            if d < 2 {
                return Ok(BigInt::zero());
            }
            let f = Interval::from_int(d as u64, prec).div(&table.log2(d as u64).sqrt()?)?;
            Ok(f.hi_mantissa().clone())
        })
        .collect::<Result<_>>()?;

    let check_n = |n: u64| -> Result<NOutcome> {
        let theorem = Interval::from_int(2 * n, prec).div(&table.log2(n).sqrt()?)?;
        let t_lo = theorem.lo_mantissa();
        let mut out = NOutcome {
            n,
            pairs: 0,
            failed: Vec::new(),
            worst: None,
        };
        let mut worst: Option<(BigInt, u64)> = None;
        for r in table.divisors(n) {
            if r < 2 || r >= n {
                continue;
            }
            out.pairs += 1;
            let d = n / r;
            let rhs_hi = ceil_shr(&(&g_hi[r as usize] * &f_hi[d as usize]), prec);
            if &rhs_hi > t_lo {
                out.failed.push(r);
            }
            if worst.as_ref().is_none_or(|(w, _)| &rhs_hi > w) {
                worst = Some((rhs_hi, r));
            }
        }
        out.worst = worst.map(|(rhs_hi, r)| {
            let margin = Interval::mantissa_to_f64(&(t_lo - &rhs_hi), prec);
            let rhs = Interval::mantissa_to_f64(&rhs_hi, prec);
            let t = Interval::mantissa_to_f64(t_lo, prec);
            let slack = 2f64.powi(-40) * (1.0 + rhs.abs());
            SweepRow {
                n,
                r,
                rhs_aux_hi: rhs + slack,
                theorem_rhs_lo: t - slack,
                margin: margin - 2.0 * slack,
            }
        });
        Ok(out)
    };

    let per_n: Vec<NOutcome> = (cfg.n_min..=cfg.n_max)
        .into_par_iter()
        .map(check_n)
        .collect::<Result<_>>()?;

    let mut report = SweepReport {
        n_min: cfg.n_min,
        n_max: cfg.n_max,
        ..Default::default()
    };
    for o in per_n {
        report.pairs_checked += o.pairs;
        for r in o.failed {
            if let Some(kind) = recheck_pair(o.n, r, cfg.bprime_override.as_ref()) {
                let p = DEFAULT_PRECISION;
                let rhs = rhs_aux_with(o.n, r, &a_bound(r, p)?, &bprime.round_to(p))?;
                report.violations.push(Violation {
                    n: o.n,
                    r,
                    kind,
                    rhs_aux_hi: rhs.to_f64_bounds().1,
                    theorem_rhs_lo: theorem_rhs_bits(o.n, p)?.to_f64_bounds().0,
                });
            }
        }
        if let Some(row) = o.worst {
            if report
                .tightest
                .as_ref()
                .is_none_or(|t| row.margin < t.margin)
            {
                report.tightest = Some(row.clone());
            }
            if cfg.keep_rows {
                report.rows.push(row);
            }
        }
    }
    Ok(report)
}

/// Re-decides one pair from scratch at escalating precision.
fn recheck_pair(n: u64, r: u64, bprime_override: Option<&Interval>) -> Option<ViolationKind> {
    let decided = decide_le(
        &format!("aux at n = {n}, r = {r}"),
        DEFAULT_PRECISION * 2,
        |p| {
            let bprime = match bprime_override {
                Some(b) => b.round_to(p),
                None => Constants::compute(p).bprime,
            };
            Ok((
                rhs_aux_with(n, r, &a_bound(r, p)?, &bprime)?,
                theorem_rhs_bits(n, p)?,
            ))
        },
    );
    match decided {
        Ok(true) => None,
        Ok(false) => Some(ViolationKind::Exceeds),
        Err(_) => Some(ViolationKind::Indeterminate),
    }
}
