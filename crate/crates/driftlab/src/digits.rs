//! Base-q digit expansions and the sum-of-digits function.
//!
//! Expansions are stored least-significant digit first, so the digit at
//! index `i` carries weight `q^i`. Zero is the empty expansion: every
//! operation treats absent positions as zero digits.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A canonical base-`q` digit expansion of a nonnegative integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitString {
    base: u64,
    digits: Vec<u64>,
}

impl DigitString {
    /// Base of the expansion.
    pub fn base(&self) -> u64 {
        self.base
    }

    /// Digits, least significant first, with no trailing (most significant) zero.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at position `i` (weight `q^i`); zero when the position is absent.
    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    /// Number of stored digits. Zero for the integer 0.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Sum of all digits. Fits in `u64`: any in-memory expansion has far
    /// fewer than `2^64 / base` digits.
    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// Reconstructs the represented integer `Σ εᵢ qⁱ`.
    pub fn value(&self) -> BigUint {
        let base = BigUint::from(self.base);
        let mut acc = BigUint::zero();
        for &d in self.digits.iter().rev() {
            acc = acc * &base + BigUint::from(d);
        }
        acc
    }
}

/// Expands `n` in base `q`.
pub fn to_digits(n: &BigUint, q: u64) -> Result<DigitString> {
    if q < 2 {
        return Err(Error::InvalidBase(q));
    }
    let base = BigUint::from(q);
    let mut rest = n.clone();
    let mut digits = Vec::new();
    while !rest.is_zero() {
        let (quot, rem) = num_integer::Integer::div_rem(&rest, &base);
        digits.push(u64::try_from(&rem).expect("remainder below base fits u64"));
        rest = quot;
    }
    Ok(DigitString { base: q, digits })
}

/// Inverse of [`to_digits`].
pub fn from_digits(ds: &DigitString) -> BigUint {
    ds.value()
}

/// The sum-of-digits function `s_q(n)`.
pub fn digit_sum(n: &BigUint, q: u64) -> Result<u64> {
    Ok(to_digits(n, q)?.digit_sum())
}
