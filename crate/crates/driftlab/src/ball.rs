//! Certified fixed-point ball arithmetic.
//!
//! A [`Ball`] encloses a real number as `mid·2^{-bits} ± rad·2^{-bits}` with
//! arbitrary-precision integer midpoint and radius. Every operation rounds
//! the midpoint and inflates the radius so that the enclosure is preserved;
//! comparisons succeed only when the enclosures are disjoint. Elementary
//! functions are restricted to what the library needs: π, sine and cosine at
//! rational multiples of π, natural logarithm, and square root.
//!
//! The transcendental routines use classical alternating/geometric series
//! with explicit tail bounds, so the radius of every result is a proven
//! bound, not an estimate.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Working precision with an escalation cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    /// Starting number of fractional bits.
    pub bits: u32,
    /// Largest precision escalation may reach.
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            bits: 128,
            max_bits: 4096,
        }
    }
}

impl Precision {
    pub fn new(bits: u32, max_bits: u32) -> Self {
        Precision { bits, max_bits }
    }

    /// Fixed precision, no escalation.
    pub fn fixed(bits: u32) -> Self {
        Precision {
            bits,
            max_bits: bits,
        }
    }
}

/// Runs `f` at doubling precision until it stops asking for more bits.
///
/// `f` signals a too-coarse enclosure by returning
/// [`Error::PrecisionExhausted`]; any other error aborts immediately.
pub fn with_escalation<T>(prec: Precision, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let mut bits = prec.bits;
    loop {
        match f(bits) {
            Err(Error::PrecisionExhausted { .. }) if bits < prec.max_bits => {
                bits = (bits.saturating_mul(2)).min(prec.max_bits);
            }
            other => return other,
        }
    }
}

fn shr_floor(x: &BigInt, k: u32) -> BigInt {
    // num-bigint shifts right arithmetically (rounds toward −∞)
    x >> k
}

fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    -((-x) >> k)
}

fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    // den > 0 in all call sites
    let (q, r) = num.div_rem(den);
    if r.is_zero() || num.sign() == Sign::Minus {
        q
    } else {
        q + 1
    }
}

/// Enclosure `mid·2^{-bits} ± rad·2^{-bits}` of a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    bits: u32,
}

impl Ball {
    pub fn zero(bits: u32) -> Self {
        Ball {
            mid: BigInt::zero(),
            rad: BigInt::zero(),
            bits,
        }
    }

    pub fn exact_int(n: i64, bits: u32) -> Self {
        Ball {
            mid: BigInt::from(n) << bits,
            rad: BigInt::zero(),
            bits,
        }
    }

    /// Encloses `r` with at most one ulp of slack (exact when the
    /// denominator is a power of two that fits the precision).
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        let scaled_num = r.numer() << bits;
        let (q, rem) = scaled_num.div_mod_floor(r.denom());
        let rad = if rem.is_zero() {
            BigInt::zero()
        } else {
            BigInt::one()
        };
        Ball { mid: q, rad, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mid_int(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_int(&self) -> &BigInt {
        &self.rad
    }

    /// Largest rational certainly ≥ the enclosed value.
    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, BigInt::one() << self.bits)
    }

    /// Smallest rational certainly ≤ the enclosed value.
    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, BigInt::one() << self.bits)
    }

    /// Upper bound on the radius as a rational.
    pub fn radius(&self) -> BigRational {
        BigRational::new(self.rad.clone(), BigInt::one() << self.bits)
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(self.mid.clone(), BigInt::one() << self.bits)
    }

    fn assert_same_bits(&self, other: &Ball) {
        assert_eq!(self.bits, other.bits, "mixed-precision ball arithmetic");
    }

    pub fn add(&self, other: &Ball) -> Ball {
        self.assert_same_bits(other);
        Ball {
            mid: &self.mid + &other.mid,
            rad: &self.rad + &other.rad,
            bits: self.bits,
        }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        self.assert_same_bits(other);
        Ball {
            mid: &self.mid - &other.mid,
            rad: &self.rad + &other.rad,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        self.assert_same_bits(other);
        let bits = self.bits;
        let mid = shr_floor(&(&self.mid * &other.mid), bits);
        let slop = self.mid.magnitude() * other.rad.magnitude()
            + other.mid.magnitude() * self.rad.magnitude()
            + self.rad.magnitude() * other.rad.magnitude();
        let rad = shr_ceil(&BigInt::from(slop), bits) + 1;
        Ball { mid, rad, bits }
    }

    /// Multiplication by an exact integer (no midpoint rounding).
    pub fn mul_int(&self, n: i64) -> Ball {
        Ball {
            mid: &self.mid * n,
            rad: &self.rad * n.unsigned_abs(),
            bits: self.bits,
        }
    }

    /// Division by an exact positive integer.
    pub fn div_int(&self, n: u64) -> Ball {
        let den = BigInt::from(n);
        let mid = self.mid.div_floor(&den);
        let rad = ceil_div(&self.rad, &den) + 1;
        Ball { mid, rad, bits: self.bits }
    }

    /// Division; errors when the divisor's enclosure touches zero.
    pub fn div(&self, other: &Ball) -> Result<Ball> {
        self.assert_same_bits(other);
        let bits = self.bits;
        let bm = other.mid.magnitude().clone();
        if BigInt::from(bm.clone()) <= other.rad {
            return Err(Error::PrecisionExhausted {
                bits,
                context: "division by an enclosure containing zero".into(),
            });
        }
        let mid = (&self.mid << bits).div_floor(&other.mid);
        let num = (self.rad.magnitude() * &bm + self.mid.magnitude() * other.rad.magnitude())
            << bits;
        let den = (BigInt::from(bm.clone()) - &other.rad) * BigInt::from(bm);
        let rad = ceil_div(&BigInt::from(num), &den) + 1;
        Ok(Ball { mid, rad, bits })
    }

    /// `self^k` by binary exponentiation.
    pub fn powi(&self, k: u64) -> Ball {
        let mut acc = Ball::exact_int(1, self.bits);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Square root via monotone integer endpoints; errors when the
    /// enclosure contains negative values.
    pub fn sqrt(&self) -> Result<Ball> {
        let bits = self.bits;
        let lo_int = &self.mid - &self.rad;
        if lo_int.is_negative() {
            return Err(Error::Domain("sqrt of an enclosure below zero".into()));
        }
        let hi_int = &self.mid + &self.rad;
        let lo = (lo_int << bits).sqrt();
        let hi_arg = hi_int << bits;
        let hi_root = hi_arg.sqrt();
        let hi = if &hi_root * &hi_root == hi_arg {
            hi_root
        } else {
            hi_root + 1
        };
        let mid = (&lo + &hi) >> 1u32;
        let rad = &hi - &mid;
        Ok(Ball { mid, rad, bits })
    }

    /// Rescales to a (usually lower) precision.
    pub fn to_bits(&self, bits: u32) -> Ball {
        if bits == self.bits {
            return self.clone();
        }
        if bits > self.bits {
            let s = bits - self.bits;
            return Ball {
                mid: &self.mid << s,
                rad: &self.rad << s,
                bits,
            };
        }
        let s = self.bits - bits;
        Ball {
            mid: shr_floor(&self.mid, s),
            rad: shr_ceil(&self.rad, s) + 1,
            bits,
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.magnitude() <= self.rad.magnitude()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.mid < -(&self.rad)
    }

    /// Certified strict comparison: `Some(true)` when every value of `self`
    /// is below every value of `other`, `Some(false)` for the reverse, and
    /// `None` when the enclosures overlap.
    pub fn try_lt(&self, other: &Ball) -> Option<bool> {
        self.assert_same_bits(other);
        if &self.mid + &self.rad < &other.mid - &other.rad {
            Some(true)
        } else if &self.mid - &self.rad > &other.mid + &other.rad {
            Some(false)
        } else {
            None
        }
    }

    /// Whether the enclosure lies strictly above the rational `x`.
    pub fn gt_rational(&self, x: &BigRational) -> bool {
        self.lower() > *x
    }

    /// Whether the enclosure lies strictly below the rational `x`.
    pub fn lt_rational(&self, x: &BigRational) -> bool {
        self.upper() < *x
    }

    /// Nearest integer to the midpoint together with a certified upper
    /// bound on the distance from the enclosed value to that integer.
    pub fn round_to_int(&self) -> (BigInt, BigRational) {
        let half = BigInt::one() << (self.bits - 1);
        let c = shr_floor(&(&self.mid + half), self.bits);
        let err_int = (&self.mid - (&c << self.bits)).magnitude() + self.rad.magnitude();
        let residual = BigRational::new(BigInt::from(err_int), BigInt::one() << self.bits);
        (c, residual)
    }

    /// `|enclosed value| ≤ bound` certaintly holds.
    pub fn abs_upper(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.mid.magnitude() + self.rad.magnitude()),
            BigInt::one() << self.bits,
        )
    }

    /// Midpoint as `f64` (diagnostics only).
    pub fn mid_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering of the midpoint, truncated toward zero at
    /// `sig` significant digits, in scientific notation.
    pub fn decimal_mid(&self, sig: u32) -> String {
        decimal_of_scaled(&self.mid, self.bits, sig, false)
    }

    /// Decimal upper bound of the radius (rounded away from zero).
    pub fn decimal_rad(&self, sig: u32) -> String {
        decimal_of_scaled(&self.rad, self.bits, sig, true)
    }
}

/// Deterministic decimal rendering of `x·2^{-bits}`.
fn decimal_of_scaled(x: &BigInt, bits: u32, sig: u32, round_up: bool) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let mag = x.magnitude().clone();
    // |v| ∈ [2^{L-1-bits}, 2^{L-bits}) where L = bit length
    let l = mag.bits() as i64 - bits as i64;
    // first estimate of the decimal exponent, then correct below
    let mut e10 = ((l as f64 - 0.5) * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        // digits = round(|v| · 10^{sig-1-e10}), computed exactly
        let shift = sig as i64 - 1 - e10;
        let (num, den): (BigUint, BigUint) = if shift >= 0 {
            (
                &mag * BigUint::from(10u32).pow(shift as u32),
                BigUint::one() << bits,
            )
        } else {
            (
                mag.clone(),
                (BigUint::one() << bits) * BigUint::from(10u32).pow((-shift) as u32),
            )
        };
        let (q, r) = num.div_rem(&den);
        let digits = if round_up && !r.is_zero() { q + 1u32 } else { q };
        let lo = BigUint::from(10u32).pow(sig - 1);
        let hi = BigUint::from(10u32).pow(sig);
        if digits < lo {
            e10 -= 1;
            continue;
        }
        if digits >= hi {
            e10 += 1;
            continue;
        }
        let ds = digits.to_string();
        let (head, tail) = ds.split_at(1);
        let tail = tail.trim_end_matches('0');
        let mantissa = if tail.is_empty() {
            head.to_string()
        } else {
            format!("{head}.{tail}")
        };
        return format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, e10);
    }
}

/// Rectangular complex enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn zero(bits: u32) -> Self {
        ComplexBall {
            re: Ball::zero(bits),
            im: Ball::zero(bits),
        }
    }

    pub fn one(bits: u32) -> Self {
        ComplexBall {
            re: Ball::exact_int(1, bits),
            im: Ball::zero(bits),
        }
    }

    pub fn add(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn mul(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn scale(&self, b: &Ball) -> ComplexBall {
        ComplexBall {
            re: self.re.mul(b),
            im: self.im.mul(b),
        }
    }

    pub fn div_int(&self, n: u64) -> ComplexBall {
        ComplexBall {
            re: self.re.div_int(n),
            im: self.im.div_int(n),
        }
    }

    /// `e^{iπ·r}` for an exact rational `r`.
    pub fn from_arg_over_pi(r: &BigRational, bits: u32) -> ComplexBall {
        ComplexBall {
            re: cos_pi(r, bits),
            im: sin_pi(r, bits),
        }
    }

    /// `self^k` by repeated multiplication.
    pub fn powi_via_mul(&self, k: u32) -> ComplexBall {
        let bits = self.re.bits();
        let mut acc = ComplexBall::one(bits);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

// ------------------------------------------------------------------
// π and elementary functions
// ------------------------------------------------------------------

/// Integer arctangent series: returns (Σ (−1)^k / ((2k+1)·x^{2k+1}) scaled
/// by 2^bits, ulp error bound). Requires x ≥ 2.
fn atan_inv_scaled(x: u64, bits: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut p = (BigInt::one() << bits).div_floor(&BigInt::from(x));
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    let mut terms: u64 = 0;
    while !p.is_zero() {
        let term = p.div_floor(&BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        p = p.div_floor(&x2);
        k += 1;
        terms += 1;
    }
    // each retained term carries ≤ 2 ulps of floor error; the alternating
    // tail after a zero power is < 1 ulp
    (acc, BigInt::from(2 * terms + 1))
}

/// Integer artanh series: Σ 1/((2k+1)·x^{2k+1}) scaled by 2^bits, with ulp
/// error bound. Requires x ≥ 2 (tail of the geometric majorant < one term).
fn atanh_inv_scaled(x: u64, bits: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut p = (BigInt::one() << bits).div_floor(&BigInt::from(x));
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    let mut terms: u64 = 0;
    while !p.is_zero() {
        acc += p.div_floor(&BigInt::from(2 * k + 1));
        p = p.div_floor(&x2);
        k += 1;
        terms += 1;
    }
    // positive tail ≤ geometric with ratio 1/x² ≤ 1/4 ⇒ ≤ 2 ulps once p = 0
    (acc, BigInt::from(2 * terms + 2))
}

/// Keyed by (precision bits, constant id); holds (midpoint, radius).
type ConstantsCache = Mutex<HashMap<(u32, u8), (BigInt, BigInt)>>;

fn constants_cache() -> &'static ConstantsCache {
    static CACHE: OnceLock<ConstantsCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// π as a ball (Machin's formula, cached per precision).
pub fn pi(bits: u32) -> Ball {
    const PI_KEY: u8 = 0;
    if let Some((mid, rad)) = constants_cache().lock().unwrap().get(&(bits, PI_KEY)) {
        return Ball {
            mid: mid.clone(),
            rad: rad.clone(),
            bits,
        };
    }
    let work = bits + 32;
    let (a5, e5) = atan_inv_scaled(5, work);
    let (a239, e239) = atan_inv_scaled(239, work);
    let mid_w = a5 * 16 - a239 * 4;
    let rad_w = e5 * 16 + e239 * 4;
    let ball = Ball {
        mid: mid_w,
        rad: rad_w,
        bits: work,
    }
    .to_bits(bits);
    constants_cache()
        .lock()
        .unwrap()
        .insert((bits, PI_KEY), (ball.mid.clone(), ball.rad.clone()));
    ball
}

/// ln 2 as a ball (2·artanh(1/3), cached per precision).
pub fn ln2(bits: u32) -> Ball {
    const LN2_KEY: u8 = 1;
    if let Some((mid, rad)) = constants_cache().lock().unwrap().get(&(bits, LN2_KEY)) {
        return Ball {
            mid: mid.clone(),
            rad: rad.clone(),
            bits,
        };
    }
    let work = bits + 32;
    let (a3, e3) = atanh_inv_scaled(3, work);
    let ball = Ball {
        mid: a3 * 2,
        rad: e3 * 2,
        bits: work,
    }
    .to_bits(bits);
    constants_cache()
        .lock()
        .unwrap()
        .insert((bits, LN2_KEY), (ball.mid.clone(), ball.rad.clone()));
    ball
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

/// sin(π·r) for an exact rational `r`.
pub fn sin_pi(r: &BigRational, bits: u32) -> Ball {
    // exact reduction to [0, 1/4] with a sign and a sin/cos selector
    let mut x = r - (r / two()).floor() * two(); // x ∈ [0, 2)
    let mut sign = 1i64;
    if x >= BigRational::one() {
        sign = -1;
        x -= BigRational::one();
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if x > half {
        x = BigRational::one() - x;
    }
    if x.is_zero() {
        return Ball::zero(bits);
    }
    if x == half {
        return Ball::exact_int(sign, bits);
    }
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let work = bits + 32;
    let ball = if x <= quarter {
        sin_taylor(&pi_times(&x, work))
    } else {
        cos_taylor(&pi_times(&(half - x), work))
    };
    let ball = ball.to_bits(bits);
    if sign < 0 {
        ball.neg()
    } else {
        ball
    }
}

/// cos(π·r) for an exact rational `r`.
pub fn cos_pi(r: &BigRational, bits: u32) -> Ball {
    sin_pi(&(r + BigRational::new(BigInt::one(), BigInt::from(2))), bits)
}

fn pi_times(r: &BigRational, bits: u32) -> Ball {
    pi(bits).mul(&Ball::from_rational(r, bits))
}

/// Alternating Taylor series for sin on [0, π/4]; the tail is bounded by
/// the first omitted term.
fn sin_taylor(x: &Ball) -> Ball {
    let x2 = x.mul(x);
    let mut term = x.clone();
    let mut acc = x.clone();
    let mut k: u64 = 1;
    loop {
        term = term.mul(&x2).div_int(2 * k).div_int(2 * k + 1);
        let bound = term.mid.magnitude().clone() + term.rad.magnitude();
        if bound <= BigUint::from(4u32) {
            acc.rad += BigInt::from(bound) + 4;
            return acc;
        }
        if k % 2 == 1 {
            acc = acc.sub(&term);
        } else {
            acc = acc.add(&term);
        }
        k += 1;
    }
}

/// Alternating Taylor series for cos on [0, π/4].
fn cos_taylor(x: &Ball) -> Ball {
    let bits = x.bits;
    let x2 = x.mul(x);
    let mut term = Ball::exact_int(1, bits);
    let mut acc = Ball::exact_int(1, bits);
    let mut k: u64 = 1;
    loop {
        term = term.mul(&x2).div_int(2 * k - 1).div_int(2 * k);
        let bound = term.mid.magnitude().clone() + term.rad.magnitude();
        if bound <= BigUint::from(4u32) {
            acc.rad += BigInt::from(bound) + 4;
            return acc;
        }
        if k % 2 == 1 {
            acc = acc.sub(&term);
        } else {
            acc = acc.add(&term);
        }
        k += 1;
    }
}

/// Natural logarithm of a strictly positive enclosure.
pub fn ln(x: &Ball) -> Result<Ball> {
    let bits = x.bits;
    if !x.is_strictly_positive() {
        return Err(Error::PrecisionExhausted {
            bits,
            context: "ln of an enclosure not strictly positive".into(),
        });
    }
    let work = bits + 32;
    let xw = x.to_bits(work);
    // normalize to y ∈ [1, 2): value = y·2^e
    let e = xw.mid.bits() as i64 - work as i64 - 1;
    let y = if e >= 0 {
        Ball {
            mid: shr_floor(&xw.mid, e as u32),
            rad: shr_ceil(&xw.rad, e as u32) + 1,
            bits: work,
        }
    } else {
        Ball {
            mid: &xw.mid << (-e) as u32,
            rad: &xw.rad << (-e) as u32,
            bits: work,
        }
    };
    // u = (y−1)/(y+1) ∈ [0, 1/3]; ln y = 2·artanh u
    let one = Ball::exact_int(1, work);
    let u = y.sub(&one).div(&y.add(&one))?;
    let u2 = u.mul(&u);
    let mut term = u.clone();
    let mut acc = u.clone();
    let mut k: u64 = 1;
    loop {
        term = term.mul(&u2);
        let add = term.div_int(2 * k + 1);
        let bound = add.mid.magnitude().clone() + add.rad.magnitude();
        if bound <= BigUint::from(4u32) {
            // geometric tail with ratio u² ≤ 1/8: tail < 2 × next term
            acc.rad += BigInt::from(bound * 2u32) + 16;
            break;
        }
        acc = acc.add(&add);
        k += 1;
    }
    let lny = acc.mul_int(2);
    let result = lny.add(&ln2(work).mul_int(e));
    Ok(result.to_bits(bits))
}
