//! Rigorous interval arithmetic over dyadic rationals.
//!
//! An [`Interval`] is `[lo / 2^prec, hi / 2^prec]` with integer mantissas.
//! Every operation rounds its lower end down and its upper end up, so the
//! exact real result of applying the operation to any points of the inputs
//! lies inside the output. Transcendental functions use argument reduction
//! and truncated series whose tails are bounded explicitly; nothing depends
//! on floating-point rounding modes.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Working precision used when callers do not ask for one.
pub const DEFAULT_PRECISION: u32 = 128;

/// Highest precision reached by escalation before giving up.
pub const MAX_PRECISION: u32 = 1024;

/// Extra bits carried inside series evaluations.
const GUARD_BITS: u32 = 32;

fn floor_shr(x: &BigInt, bits: u32) -> BigInt {
    x.div_floor(&(BigInt::one() << bits))
}

pub(crate) fn ceil_shr(x: &BigInt, bits: u32) -> BigInt {
    -floor_shr(&-x, bits)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

/// Floor and ceiling of `sqrt(x)` for `x ≥ 0`.
fn isqrt_bounds(x: &BigInt) -> (BigInt, BigInt) {
    let s = x.sqrt();
    if &(&s * &s) == x {
        (s.clone(), s)
    } else {
        let t = &s + 1;
        (s, t)
    }
}

/// A closed interval with dyadic endpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

impl Interval {
    fn from_mantissas(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi, prec }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        let m = n.into() << prec;
        Self::from_mantissas(m.clone(), m, prec)
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Result<Self> {
        let (mut num, mut den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let scaled = num << prec;
        let lo = scaled.div_floor(&den);
        let hi = ceil_div(&scaled, &den);
        Ok(Self::from_mantissas(lo, hi, prec))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_ratio(q.numer().clone(), q.denom().clone(), prec).expect("nonzero denominator")
    }

    /// Enclosure of `[lo, hi]`.
    pub fn from_bounds(lo: &BigRational, hi: &BigRational, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain("lower end above upper end".into()));
        }
        let a = Self::from_rational(lo, prec);
        let b = Self::from_rational(hi, prec);
        Ok(Self::from_mantissas(a.lo, b.hi, prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub(crate) fn lo_mantissa(&self) -> &BigInt {
        &self.lo
    }

    pub(crate) fn hi_mantissa(&self) -> &BigInt {
        &self.hi
    }

    /// `m / 2^prec`, approximately.
    pub(crate) fn mantissa_to_f64(m: &BigInt, prec: u32) -> f64 {
        if prec > 64 {
            floor_shr(m, prec - 64).to_f64().unwrap_or(f64::NAN) * 2f64.powi(-64)
        } else {
            m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(prec as i32))
        }
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.prec)
    }

    /// `log₂` of the width rounded up, or `None` for a point interval.
    pub fn width_bits(&self) -> Option<i64> {
        let w = &self.hi - &self.lo;
        if w.is_zero() {
            None
        } else {
            Some(w.bits() as i64 - self.prec as i64)
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo() <= q && q <= &self.hi()
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec_exact(p), other.with_prec_exact(p));
        a.lo <= b.lo && b.hi <= a.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        !(self.certainly_lt(other) || other.certainly_lt(self))
    }

    /// Re-expresses the endpoints at precision `p ≥ self.prec` exactly.
    fn with_prec_exact(&self, p: u32) -> Self {
        debug_assert!(p >= self.prec);
        let s = p - self.prec;
        Self::from_mantissas(&self.lo << s, &self.hi << s, p)
    }

    /// Outward rounding to precision `p` (exact when `p ≥ self.prec`).
    pub fn round_to(&self, p: u32) -> Self {
        if p >= self.prec {
            self.with_prec_exact(p)
        } else {
            let s = self.prec - p;
            Self::from_mantissas(floor_shr(&self.lo, s), ceil_shr(&self.hi, s), p)
        }
    }

    fn aligned<'a>(a: &'a Self, b: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        match a.prec.cmp(&b.prec) {
            Ordering::Equal => (Cow::Borrowed(a), Cow::Borrowed(b)),
            Ordering::Less => (Cow::Owned(a.with_prec_exact(b.prec)), Cow::Borrowed(b)),
            Ordering::Greater => (Cow::Borrowed(a), Cow::Owned(b.with_prec_exact(a.prec))),
        }
    }

    /// Every point of `self` is `≤` every point of `other`.
    pub fn certainly_le(&self, other: &Self) -> bool {
        let (a, b) = Self::aligned(self, other);
        a.hi <= b.lo
    }

    /// Every point of `self` is `<` every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        let (a, b) = Self::aligned(self, other);
        a.hi < b.lo
    }

    /// Ordering of the enclosed values, if the enclosures decide it.
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        if self.certainly_lt(other) {
            Some(Ordering::Less)
        } else if other.certainly_lt(self) {
            Some(Ordering::Greater)
        } else if self.is_point() && self == &other.round_to(self.prec) && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        let p = a.prec;
        Self::from_mantissas(
            a.lo.clone().min(b.lo.clone()),
            a.hi.clone().max(b.hi.clone()),
            p,
        )
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        let (x, y) = (&self.lo * &k, &self.hi * &k);
        if k.is_negative() {
            Self::from_mantissas(y, x, self.prec)
        } else {
            Self::from_mantissas(x, y, self.prec)
        }
    }

    /// Multiplication by `2^k`, exact for `k ≥ 0`.
    pub fn scale_pow2(&self, k: i64) -> Self {
        if k >= 0 {
            Self::from_mantissas(&self.lo << k as u32, &self.hi << k as u32, self.prec)
        } else {
            let s = (-k) as u32;
            Self::from_mantissas(floor_shr(&self.lo, s), ceil_shr(&self.hi, s), self.prec)
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::aligned(self, other);
        if b.lo.sign() != b.hi.sign() || b.lo.is_zero() {
            return Err(Error::Domain(
                "division by an interval containing zero".into(),
            ));
        }
        let p = a.prec;
        if !a.lo.is_negative() && b.lo.is_positive() {
            let lo = (&a.lo << p).div_floor(&b.hi);
            let hi = ceil_div(&(&a.hi << p), &b.lo);
            return Ok(Self::from_mantissas(lo, hi, p));
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&a.lo, &a.hi] {
            for y in [&b.lo, &b.hi] {
                let scaled = x << p;
                let (f, c) = if y.is_negative() {
                    let (nx, ny) = (-&scaled, -y);
                    (nx.div_floor(&ny), ceil_div(&nx, &ny))
                } else {
                    (scaled.div_floor(y), ceil_div(&scaled, y))
                };
                lo = Some(lo.map_or(f.clone(), |l| l.min(f)));
                hi = Some(hi.map_or(c.clone(), |h| h.max(c)));
            }
        }
        Ok(Self::from_mantissas(lo.unwrap(), hi.unwrap(), p))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_int(1, self.prec).div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::Domain(
                "sqrt of an interval reaching below zero".into(),
            ));
        }
        let (lo, _) = isqrt_bounds(&(&self.lo << self.prec));
        let (_, hi) = isqrt_bounds(&(&self.hi << self.prec));
        Ok(Self::from_mantissas(lo, hi, self.prec))
    }

    pub fn square(&self) -> Self {
        if !self.lo.is_negative() || !self.hi.is_positive() {
            self * self
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            Self::from_mantissas(BigInt::zero(), ceil_shr(&(&m * &m), self.prec), self.prec)
        }
    }

    /// Base-2 logarithm.
    pub fn log2(&self) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::Domain(
                "log2 of an interval reaching zero or below".into(),
            ));
        }
        let w = self.prec + GUARD_BITS;
        let lo = log2_point(&self.lo, self.prec, w);
        let hi = if self.is_point() {
            lo.clone()
        } else {
            log2_point(&self.hi, self.prec, w)
        };
        Ok(Self::from_mantissas(lo.lo, hi.hi, w).round_to(self.prec))
    }

    /// Natural logarithm.
    pub fn ln(&self) -> Result<Self> {
        Ok(&self.log2()? * &ln2(self.prec))
    }

    /// `2^x`.
    pub fn pow2(&self) -> Self {
        let w = self.prec + GUARD_BITS;
        let lo = pow2_point(&self.lo, self.prec, w);
        let hi = if self.is_point() {
            lo.clone()
        } else {
            pow2_point(&self.hi, self.prec, w)
        };
        Self::from_mantissas(lo.lo, hi.hi, w).round_to(self.prec)
    }

    /// Conservative `f64` bounds for reporting.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let nudge = |x: f64, up: bool| {
            let e = x.abs() * 4.0 * f64::EPSILON + 2f64.powi(-60);
            if up {
                x + e
            } else {
                x - e
            }
        };
        let lo = Self::mantissa_to_f64(&self.lo, self.prec);
        let hi = Self::mantissa_to_f64(&self.hi, self.prec);
        (nudge(lo, false), nudge(hi, true))
    }

    /// Lower end as a decimal string with `digits` fractional digits, rounded
    /// down.
    pub fn lo_decimal(&self, digits: usize) -> String {
        decimal(&self.lo(), digits, false)
    }

    /// Upper end as a decimal string with `digits` fractional digits, rounded
    /// up.
    pub fn hi_decimal(&self, digits: usize) -> String {
        decimal(&self.hi(), digits, true)
    }
}

/// Formats `q` with `digits` fractional digits, rounding toward −∞ or +∞.
pub fn decimal(q: &BigRational, digits: usize, round_up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    let m = if round_up {
        scaled.ceil()
    } else {
        scaled.floor()
    }
    .to_integer();
    let neg = m.is_negative();
    let (int, frac) = m.abs().div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        s.push_str(&"0".repeat(digits - f.len()));
        s.push_str(&f);
    }
    s
}

/// Parses a plain decimal string such as `-12.0345` exactly.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty()
        || !int.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let q = BigRational::new(digits, num_traits::pow(BigInt::from(10u32), frac.len()));
    Some(if neg { -q } else { q })
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]@{}",
            self.lo_decimal(20),
            self.hi_decimal(20),
            self.prec
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        write!(
            f,
            "[{}, {}]",
            self.lo_decimal(digits),
            self.hi_decimal(digits)
        )
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, other: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, other);
        Interval::from_mantissas(&a.lo + &b.lo, &a.hi + &b.hi, a.prec)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, other: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, other);
        Interval::from_mantissas(&a.lo - &b.hi, &a.hi - &b.lo, a.prec)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::from_mantissas(-&self.hi, -&self.lo, self.prec)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, other: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, other);
        let p = a.prec;
        if !a.lo.is_negative() && !b.lo.is_negative() {
            return Interval::from_mantissas(
                floor_shr(&(&a.lo * &b.lo), p),
                ceil_shr(&(&a.hi * &b.hi), p),
                p,
            );
        }
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval::from_mantissas(floor_shr(min, p), ceil_shr(max, p), p)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, other: Interval) -> Interval {
                (&self).$m(&other)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, other: &Interval) -> Interval {
                (&self).$m(other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

/// `Σ_{j≥0} t^{2j+1} / (2j+1)` (that is `atanh t`) for a fixed-point
/// `t = m / 2^w` with `0 ≤ t ≤ 1/3`. Returns mantissas at precision `w`.
fn atanh_series(t_lo: &BigInt, t_hi: &BigInt, w: u32) -> (BigInt, BigInt) {
    debug_assert!(!t_lo.is_negative() && t_lo <= t_hi);
    // Lower bound: truncated sum at t_lo with every rounding downward.
    let mut lo = BigInt::zero();
    if t_lo.is_positive() {
        let t2 = floor_shr(&(t_lo * t_lo), w);
        let mut pow = t_lo.clone();
        let mut k = 1u32;
        while pow.is_positive() {
            lo += &pow / BigInt::from(k);
            pow = floor_shr(&(&pow * &t2), w);
            k += 2;
        }
    }
    // Upper bound: sum at t_hi rounding upward, then the tail. With t² ≤ 1/9
    // the tail after the last term is at most twice the next power.
    let mut hi = BigInt::zero();
    if t_hi.is_positive() {
        let t2 = ceil_shr(&(t_hi * t_hi), w);
        let mut pow = t_hi.clone();
        let mut k = 1u32;
        loop {
            hi += ceil_div(&pow, &BigInt::from(k));
            pow = ceil_shr(&(&pow * &t2), w);
            k += 2;
            if pow <= BigInt::one() {
                break;
            }
        }
        hi += &pow * 2;
    }
    (lo, hi)
}

fn ln2_uncached(prec: u32) -> Interval {
    let w = prec + GUARD_BITS;
    let one = BigInt::one() << w;
    // ln 2 = 2 atanh(1/3)
    let t_lo = one.div_floor(&BigInt::from(3));
    let t_hi = ceil_div(&one, &BigInt::from(3));
    let (lo, hi) = atanh_series(&t_lo, &t_hi, w);
    Interval::from_mantissas(lo * 2, hi * 2, w).round_to(prec)
}

fn cached(
    table: &'static OnceLock<RwLock<HashMap<u32, Interval>>>,
    prec: u32,
    f: fn(u32) -> Interval,
) -> Interval {
    let table = table.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = table.read().unwrap().get(&prec) {
        return v.clone();
    }
    let v = f(prec);
    table.write().unwrap().insert(prec, v.clone());
    v
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    static TABLE: OnceLock<RwLock<HashMap<u32, Interval>>> = OnceLock::new();
    cached(&TABLE, prec, ln2_uncached)
}

fn pi_uncached(prec: u32) -> Interval {
    // Machin: π = 16 atan(1/5) − 4 atan(1/239). Partial sums of an
    // alternating series with decreasing terms bracket the limit.
    fn atan_recip(k: u64, terms: usize) -> (BigRational, BigRational) {
        let k = BigInt::from(k);
        let mut sum = BigRational::zero();
        let mut pow = k.clone();
        let k2 = &k * &k;
        let mut prev = sum.clone();
        for j in 0..=terms {
            prev = sum.clone();
            let term = BigRational::new(BigInt::one(), &pow * BigInt::from(2 * j as u64 + 1));
            if j % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            pow *= &k2;
        }
        if prev < sum {
            (prev, sum)
        } else {
            (sum, prev)
        }
    }
    let w = prec + GUARD_BITS;
    let terms5 = (w as usize) / 4 + 2;
    let terms239 = (w as usize) / 15 + 2;
    let (a_lo, a_hi) = atan_recip(5, terms5);
    let (b_lo, b_hi) = atan_recip(239, terms239);
    let sixteen = BigRational::from_integer(16.into());
    let four = BigRational::from_integer(4.into());
    let lo = &sixteen * a_lo - &four * b_hi;
    let hi = sixteen * a_hi - four * b_lo;
    Interval::from_bounds(&lo, &hi, prec).expect("ordered")
}

/// Enclosure of `π`.
pub fn pi(prec: u32) -> Interval {
    static TABLE: OnceLock<RwLock<HashMap<u32, Interval>>> = OnceLock::new();
    cached(&TABLE, prec, pi_uncached)
}

/// Enclosure of `log₂(m / 2^q)` for `m > 0`, at working precision `w`.
fn log2_point(m: &BigInt, q: u32, w: u32) -> Interval {
    debug_assert!(m.is_positive());
    // m / 2^q = 2^k · y with y = m / 2^(bits-1) in [1, 2).
    let bits = m.bits();
    let mut k = bits as i64 - 1 - q as i64;
    let num = m.clone();
    let mut den = BigInt::one() << (bits - 1);
    // Pull y into (3/4, 3/2] so that |t| ≤ 1/5.
    if &num * 2 > &den * 3 {
        den <<= 1;
        k += 1;
    }
    if num == den {
        return Interval::from_int(k, w);
    }
    // ln y = 2 atanh((y − 1)/(y + 1)).
    let (t_num, t_den) = (&num - &den, &num + &den);
    let negative = t_num.is_negative();
    let t_abs = t_num.abs() << w;
    let t_lo = t_abs.div_floor(&t_den);
    let t_hi = ceil_div(&t_abs, &t_den);
    let (s_lo, s_hi) = atanh_series(&t_lo, &t_hi, w);
    let s = Interval::from_mantissas(s_lo * 2, s_hi * 2, w);
    let ln_y = if negative { -s } else { s };
    let frac = ln_y.div(&ln2(w)).expect("ln 2 is positive");
    &frac + &Interval::from_int(k, w)
}

/// Enclosure of `2^(m / 2^q)` at working precision `w`.
fn pow2_point(m: &BigInt, q: u32, w: u32) -> Interval {
    // m / 2^q = k + f with integer k and f in [0, 1).
    let k = floor_shr(m, q);
    let f_mant = m - (&k << q);
    let k = k.to_i64().expect("exponent fits in i64");
    if f_mant.is_zero() {
        return Interval::from_int(1, w).scale_pow2(k);
    }
    let f = Interval::from_mantissas(f_mant.clone(), f_mant, q).round_to(w);
    // z = f ln 2 lies in [0, 0.7): exp(z) = Σ z^j / j!, and the tail after
    // the last kept term is bounded by twice the next term.
    let z = &f * &ln2(w);
    let (z_lo, z_hi) = (z.lo.max(BigInt::zero()), z.hi.clone());
    let one = BigInt::one() << w;
    let mut lo = one.clone();
    let mut term = one.clone();
    let mut j = 1u32;
    while term.is_positive() {
        term = floor_shr(&(&term * &z_lo), w) / BigInt::from(j);
        lo += &term;
        j += 1;
    }
    let mut hi = one.clone();
    let mut term = one;
    let mut j = 1u32;
    loop {
        term = ceil_div(&ceil_shr(&(&term * &z_hi), w), &BigInt::from(j));
        hi += &term;
        j += 1;
        if term <= BigInt::one() {
            break;
        }
    }
    hi += &term * 2;
    Interval::from_mantissas(lo, hi, w).scale_pow2(k)
}

/// Point enclosure of the integer `n`'s base-2 logarithm.
pub fn log2_int(n: u64, prec: u32) -> Result<Interval> {
    Interval::from_int(n, prec).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn shifts_round_the_right_way() {
        let x = BigInt::from(-5);
        assert_eq!(floor_shr(&x, 1), BigInt::from(-3));
        assert_eq!(ceil_shr(&x, 1), BigInt::from(-2));
        assert_eq!(floor_shr(&BigInt::from(5), 1), BigInt::from(2));
        assert_eq!(ceil_shr(&BigInt::from(5), 1), BigInt::from(3));
    }

    #[test]
    fn ratio_encloses() {
        let third = Interval::from_ratio(1, 3, 64).unwrap();
        assert!(third.contains(&q(1, 3)));
        assert!(!third.is_point());
        let neg = Interval::from_ratio(1, -3, 64).unwrap();
        assert!(neg.contains(&q(-1, 3)));
        assert!(Interval::from_ratio(1, 0, 64).is_err());
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let a = Interval::from_bounds(&q(-3, 7), &q(5, 11), 80).unwrap();
        let b = Interval::from_bounds(&q(2, 3), &q(9, 4), 80).unwrap();
        for x in [q(-3, 7), q(0, 1), q(5, 11)] {
            for y in [q(2, 3), q(1, 1), q(9, 4)] {
                assert!((&a + &b).contains(&(&x + &y)));
                assert!((&a - &b).contains(&(&x - &y)));
                assert!((&a * &b).contains(&(&x * &y)));
                assert!(a.div(&b).unwrap().contains(&(&x / &y)));
            }
        }
        assert!(b.div(&a).is_err());
    }

    #[test]
    fn log2_of_powers_of_two_is_exact() {
        let l = Interval::from_int(4, 128).log2().unwrap();
        assert!(l.is_point());
        assert_eq!(l.lo(), q(2, 1));
        let l = Interval::from_ratio(1, 8, 128).unwrap().log2().unwrap();
        assert_eq!(l.hi(), q(-3, 1));
        assert!(Interval::from_int(0, 64).log2().is_err());
    }

    #[test]
    fn sqrt_two_bracket() {
        let s = Interval::from_int(2, 128).sqrt().unwrap();
        assert!(s.lo() * s.lo() <= q(2, 1));
        assert!(s.hi() * s.hi() >= q(2, 1));
        assert!(s.width_bits().unwrap() <= -127);
        assert!(Interval::from_int(-1, 64).sqrt().is_err());
        assert!(Interval::from_int(9, 64).sqrt().unwrap().is_point());
    }

    #[test]
    fn pow2_of_half_is_sqrt_two() {
        let h = Interval::from_ratio(1, 2, 128).unwrap().pow2();
        let s = Interval::from_int(2, 128).sqrt().unwrap();
        assert!(h.overlaps(&s));
        assert!(h.width_bits().unwrap() <= -120);
        let back = h.log2().unwrap();
        assert!(back.contains(&q(1, 2)));
        assert_eq!(Interval::from_int(-3, 64).pow2().lo(), q(1, 8));
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&q(1, 3), 3, false), "0.333");
        assert_eq!(decimal(&q(1, 3), 3, true), "0.334");
        assert_eq!(decimal(&q(-1, 3), 3, false), "-0.334");
        assert_eq!(decimal(&q(5, 1), 2, true), "5.00");
        assert_eq!(parse_decimal("-0.334"), Some(q(-334, 1000)));
        assert_eq!(parse_decimal("12"), Some(q(12, 1)));
        assert_eq!(parse_decimal("1.2.3"), None);
    }

    #[test]
    fn comparisons_need_disjointness() {
        let a = Interval::from_ratio(1, 3, 64).unwrap();
        let b = Interval::from_ratio(1, 2, 64).unwrap();
        assert_eq!(a.compare(&b), Some(Ordering::Less));
        assert_eq!(a.compare(&a.hull(&b)), None);
        let p = Interval::from_int(2, 64);
        assert_eq!(
            p.compare(&Interval::from_int(2, 128)),
            Some(Ordering::Equal)
        );
    }
}
