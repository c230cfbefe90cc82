//! Exact zero- and equality-testing for integer combinations of roots of
//! unity.
//!
//! An element `Σ c_s·e^{2πi s/n}` is stored as an integer coefficient
//! vector. Its value is zero exactly when the polynomial `Σ c_s x^s` is
//! divisible by the nth cyclotomic polynomial; rational values of
//! Galois-invariant vectors come out of Möbius bookkeeping. Both checks are
//! complete: no precision, no tolerance.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// Möbius function by trial factorization.
fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Exact polynomial division, requiring that it comes out even.
/// Coefficients ascending; divisor monic.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (dd..=nd).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (k, dk) in den.iter().enumerate() {
            rem[i - dd + k] -= &c * dk;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact cyclotomic division");
    quot
}

/// The nth cyclotomic polynomial, ascending coefficients, monic.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // Φ_n = (x^n − 1) / ∏_{d|n, d<n} Φ_d
    let mut result: Vec<BigInt> = {
        let mut v = vec![BigInt::zero(); (n + 1) as usize];
        v[0] = -BigInt::one();
        v[n as usize] = BigInt::one();
        v
    };
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        result = poly_div_exact(&result, &phi_d);
    }
    result
}

/// Integer combination of nth roots of unity, `Σ coeffs[s]·e^{2πi s/n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCombination {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl RootCombination {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        RootCombination {
            order,
            coeffs: vec![BigInt::zero(); order as usize],
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Adds `c·e^{2πi·turns}` where `turns` is an exact rational whose
    /// reduced denominator must divide the order.
    pub fn add_root_turns(&mut self, turns: &BigRational, c: &BigInt) {
        let frac = turns - turns.floor();
        let denom = frac.denom();
        let order = BigInt::from(self.order);
        let (mult, rem) = order.div_rem(denom);
        assert!(rem.is_zero(), "root order does not divide combination order");
        let idx = (frac.numer() * mult) % &order;
        let idx = usize::try_from(&idx).expect("index fits");
        self.coeffs[idx] += c;
    }

    /// Whether the represented complex value is exactly zero.
    pub fn is_zero_value(&self) -> bool {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            return true;
        }
        let phi = cyclotomic_polynomial(self.order);
        let mut rem = self.coeffs.clone();
        let dd = phi.len() - 1;
        // reduce mod the monic Φ_order
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            for (k, pk) in phi.iter().enumerate() {
                rem[i - dd + k] -= &c * pk;
            }
        }
        rem.iter().all(|c| c.is_zero())
    }

    /// Exact rational value for Galois-invariant combinations;
    /// `None` when the vector is not fixed by every automorphism
    /// (in which case the value is irrational).
    pub fn rational_value(&self) -> Option<BigInt> {
        let n = self.order;
        for t in 2..n {
            if t.gcd(&n) != 1 {
                continue;
            }
            for s in 0..n {
                if self.coeffs[s as usize] != self.coeffs[((t * s) % n) as usize] {
                    return None;
                }
            }
        }
        // orbit of elements of multiplicative order e contributes c_e·μ(e)
        let mut total = BigInt::zero();
        for e in divisors(n) {
            let s = n / e; // a representative of the order-e orbit
            let rep = if e == 1 { 0 } else { s };
            total += &self.coeffs[rep as usize] * BigInt::from(moebius(e));
        }
        Some(total)
    }
}

/// Exact zero test for `Σ c·e^{2πi·turns}` over any rational angles.
pub fn root_sum_is_zero(terms: &[(BigRational, BigInt)]) -> bool {
    let mut order = BigInt::one();
    for (turns, _) in terms {
        let frac = turns - turns.floor();
        order = order.lcm(frac.denom());
    }
    let order = u64::try_from(&order).expect("combined root order fits u64");
    let mut acc = RootCombination::zero(order);
    for (turns, c) in terms {
        acc.add_root_turns(turns, c);
    }
    acc.is_zero_value()
}
