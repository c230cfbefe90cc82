//! Exact roots of unity, the discrete Fourier residue filter, and
//! evaluation of the digit generating polynomial at root-of-unity points.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::ball::{with_escalation, ComplexBall, Precision};
use crate::counting::{dp_count, Quintuple};
use crate::cyclo::RootCombination;
use crate::error::{Error, Result};

/// `e^{2πi·t/n}` in lowest terms: `0 ≤ t < n`, `gcd(t, n) = 1`, and the
/// identity is `t = 0, n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnityRoot {
    t: u64,
    n: u64,
}

impl UnityRoot {
    /// Canonicalizes `e^{2πi·t/n}`.
    pub fn new(t: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus { min: 1, got: 0 });
        }
        let t = t % n;
        if t == 0 {
            return Ok(UnityRoot { t: 0, n: 1 });
        }
        let g = t.gcd(&n);
        Ok(UnityRoot { t: t / g, n: n / g })
    }

    pub fn identity() -> Self {
        UnityRoot { t: 0, n: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.t
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.t == 0
    }

    /// Angle as a fraction of a full turn, in `[0, 1)`.
    pub fn turns(&self) -> BigRational {
        BigRational::new(BigInt::from(self.t), BigInt::from(self.n))
    }

    pub fn mul(&self, other: &UnityRoot) -> UnityRoot {
        let n = self.n.lcm(&other.n);
        let t = (self.t * (n / self.n) + other.t * (n / other.n)) % n;
        UnityRoot::new(t, n).expect("n ≥ 1")
    }

    pub fn inv(&self) -> UnityRoot {
        if self.t == 0 {
            *self
        } else {
            UnityRoot {
                t: self.n - self.t,
                n: self.n,
            }
        }
    }

    pub fn conj(&self) -> UnityRoot {
        self.inv()
    }

    /// `self^e` with the exponent reduced modulo the order.
    pub fn pow(&self, e: &BigInt) -> UnityRoot {
        let n = BigInt::from(self.n);
        let r = u64::try_from(&e.mod_floor(&n)).expect("reduced exponent fits");
        self.pow_u64(r)
    }

    pub fn pow_u64(&self, e: u64) -> UnityRoot {
        let t = ((u128::from(self.t) * u128::from(e % self.n)) % u128::from(self.n)) as u64;
        UnityRoot::new(t, self.n).expect("n ≥ 1")
    }

    /// Rectangular enclosure of the root.
    pub fn to_complex(&self, bits: u32) -> ComplexBall {
        let two_t = BigRational::new(BigInt::from(2 * self.t), BigInt::from(self.n));
        ComplexBall::from_arg_over_pi(&two_t, bits)
    }
}

/// The n elements of `U(n)`, `e^{2πi·s/n}` for `s = 0..n`.
pub fn roots_of_unity(n: u64) -> impl Iterator<Item = UnityRoot> {
    (0..n).map(move |s| UnityRoot::new(s, n).expect("n ≥ 1"))
}

/// Keeps the coefficients `a_k` with `k ≡ l (mod n)` and zeroes the rest,
/// computed through the root-of-unity average
/// `(1/n)·Σ_s ω_n^{-ls} f(ω_n^s x)` with exact cyclotomic bookkeeping.
pub fn residue_filter(coeffs: &[BigRational], n: u64, l: u64) -> Result<Vec<BigRational>> {
    if n == 0 {
        return Err(Error::InvalidModulus { min: 1, got: 0 });
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for (k, a_k) in coeffs.iter().enumerate() {
        // coefficient of x^k in the average is a_k·(1/n)·Σ_s ω_n^{s(k-l)}
        let mut sum = RootCombination::zero(n);
        for s in 0..n {
            let shift = (s as i64) * (k as i64 - l as i64);
            let turns = BigRational::new(BigInt::from(shift), BigInt::from(n));
            sum.add_root_turns(&turns, &BigInt::one());
        }
        let value = sum
            .rational_value()
            .expect("geometric root sums are Galois invariant");
        out.push(a_k * BigRational::new(value, BigInt::from(n)));
    }
    Ok(out)
}

/// Evaluates the digit generating polynomial
/// `P(w, e) = ∏_{i<k} Σ_{l<q} w^l·e^{l·qⁱ}` where the `e`-exponent is taken
/// modulo the order of `e`.
pub fn evaluate_p(
    p: &Quintuple,
    k: u32,
    w: &UnityRoot,
    e: &UnityRoot,
    bits: u32,
) -> Result<ComplexBall> {
    if k == 0 {
        return Err(Error::Domain("P(x, y) needs at least one digit position".into()));
    }
    let q = p.q();
    // cache the finitely many root values that appear
    let w_powers: Vec<UnityRoot> = (0..q).map(|l| w.pow_u64(l)).collect();
    let mut product = ComplexBall::one(bits);
    let mut q_pow_mod = 1u64; // qⁱ mod order(e)
    let e_order = e.order();
    let mut factor_cache: std::collections::HashMap<u64, ComplexBall> =
        std::collections::HashMap::new();
    let mut root_cache: std::collections::HashMap<UnityRoot, ComplexBall> =
        std::collections::HashMap::new();
    for _ in 0..k {
        let factor = factor_cache.entry(q_pow_mod).or_insert_with(|| {
            let mut sum = ComplexBall::zero(bits);
            for l in 0..q {
                let root = w_powers[l as usize].mul(&e.pow_u64(l * q_pow_mod));
                let val = root_cache
                    .entry(root)
                    .or_insert_with(|| root.to_complex(bits));
                sum = sum.add(val);
            }
            sum
        });
        product = product.mul(factor);
        q_pow_mod = (q_pow_mod * (q % e_order)) % e_order;
    }
    Ok(product)
}

/// Counts `{0 ≤ n < q^k : n ≡ a (mod d), s_q(n) ≡ j (mod m)}` through the
/// double root-of-unity filter, rounding a certified enclosure to the
/// nearest integer.
pub fn count_via_filter(p: &Quintuple, k: u32, prec: Precision) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Domain("filter counting needs k ≥ 1".into()));
    }
    let (d, m) = (p.d(), p.m());
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    with_escalation(prec, |bits| {
        let mut total = ComplexBall::zero(bits);
        for s in 0..m {
            let w = UnityRoot::new(s, m)?;
            for t in 0..d {
                let e = UnityRoot::new(t, d)?;
                let weight = w.pow_u64(p.j()).inv().mul(&e.pow_u64(p.a()).inv());
                let val = evaluate_p(p, k, &w, &e, bits)?;
                total = total.add(&val.mul(&weight.to_complex(bits)));
            }
        }
        let scaled = total.div_int(d * m);
        let (count, residual) = scaled.re.round_to_int();
        let im_bound = scaled.im.abs_upper();
        if residual >= quarter || im_bound >= quarter {
            return Err(Error::PrecisionExhausted {
                bits,
                context: format!(
                    "filter count residual {} / imaginary {} not below 1/4",
                    residual.to_f64().unwrap_or(f64::NAN),
                    im_bound.to_f64().unwrap_or(f64::NAN)
                ),
            });
        }
        if count.is_negative() {
            return Err(Error::PrecisionExhausted {
                bits,
                context: "filter count rounded to a negative integer".into(),
            });
        }
        Ok(count.magnitude().clone())
    })
}

/// Convenience check used in tests: dp cross-validation at `N = q^k`.
pub fn filter_matches_dp(p: &Quintuple, k: u32, prec: Precision) -> Result<bool> {
    let filtered = count_via_filter(p, k, prec)?;
    let n = BigUint::from(p.q()).pow(k);
    Ok(filtered == dp_count(p, &n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn canonical_form() {
        let r = UnityRoot::new(4, 6).unwrap();
        assert_eq!((r.numerator(), r.order()), (2, 3));
        let r = UnityRoot::new(6, 6).unwrap();
        assert!(r.is_identity());
        assert_eq!((r.numerator(), r.order()), (0, 1));
        assert!(UnityRoot::new(1, 0).is_err());
    }

    #[test]
    fn group_laws() {
        let a = UnityRoot::new(1, 6).unwrap();
        let b = UnityRoot::new(1, 4).unwrap();
        let ab = a.mul(&b);
        assert_eq!((ab.numerator(), ab.order()), (5, 12));
        assert!(a.mul(&a.inv()).is_identity());
        // n-th power of any element of U(n) is the identity
        for n in 1..=12u64 {
            for root in roots_of_unity(n) {
                assert!(root.pow_u64(n).is_identity());
            }
        }
    }

    #[test]
    fn residue_filter_small_cases() {
        let coeffs = vec![rat(1), rat(2), rat(1)];
        assert_eq!(
            residue_filter(&coeffs, 2, 0).unwrap(),
            vec![rat(1), rat(0), rat(1)]
        );
        assert_eq!(
            residue_filter(&coeffs, 2, 1).unwrap(),
            vec![rat(0), rat(2), rat(0)]
        );
        assert!(matches!(
            residue_filter(&coeffs, 0, 0),
            Err(Error::InvalidModulus { .. })
        ));
    }

    #[test]
    fn residue_filter_matches_direct_indexing() {
        // deterministic pseudo-random degree-20 integer polynomial
        let mut state = 0xabcdef12345u64;
        let mut coeffs = Vec::new();
        for _ in 0..21 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            coeffs.push(rat((state >> 33) as i64 % 50 - 25));
        }
        for n in 1..=7u64 {
            for l in 0..n {
                let filtered = residue_filter(&coeffs, n, l).unwrap();
                let direct: Vec<BigRational> = coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| if k as u64 % n == l { c.clone() } else { rat(0) })
                    .collect();
                assert_eq!(filtered, direct, "n={n} l={l}");
            }
        }
    }

    #[test]
    fn residue_filter_partition_and_idempotence() {
        let coeffs: Vec<BigRational> = (0..15).map(|k| rat(3 * k - 7)).collect();
        for n in 1..=6u64 {
            let mut sum = vec![rat(0); coeffs.len()];
            for l in 0..n {
                let f = residue_filter(&coeffs, n, l).unwrap();
                let again = residue_filter(&f, n, l).unwrap();
                assert_eq!(again, f, "idempotence n={n} l={l}");
                for (s, x) in sum.iter_mut().zip(&f) {
                    *s += x;
                }
            }
            assert_eq!(sum, coeffs, "partition of unity n={n}");
        }
    }

    #[test]
    fn evaluate_p_known_values() {
        let p = Quintuple::new(3, 2, 3, 0, 0).unwrap();
        // identity points give q^k
        let id = UnityRoot::identity();
        let v = evaluate_p(&p, 3, &id, &id, 128).unwrap();
        let (c, res) = v.re.round_to_int();
        assert_eq!(c, BigInt::from(27));
        assert!(res < BigRational::new(BigInt::one(), BigInt::from(1000)));
        // q=3, d=2, w=1, e=−1, k=2 → (1−1+1)² = 1
        let e = UnityRoot::new(1, 2).unwrap();
        let v = evaluate_p(&p, 2, &id, &e, 128).unwrap();
        let (c, _) = v.re.round_to_int();
        assert_eq!(c, BigInt::from(1));
        // w=ζ₃, e=1, k=1 → 0
        let w = UnityRoot::new(1, 3).unwrap();
        let v = evaluate_p(&p, 1, &w, &id, 128).unwrap();
        assert!(v.re.abs_upper() < BigRational::new(BigInt::one(), BigInt::from(1u64 << 40)));
        assert!(v.im.abs_upper() < BigRational::new(BigInt::one(), BigInt::from(1u64 << 40)));
        // k = 0 rejected
        assert!(evaluate_p(&p, 0, &id, &id, 128).is_err());
    }

    #[test]
    fn evaluate_p_collapses_when_d_divides_q_minus_1 () {
        // d | q−1 ⇒ P(w, e) = (Σ_l (we)^l)^k
        let p = Quintuple::new(7, 3, 7, 0, 0).unwrap();
        let bits = 128;
        for (wt, et, k) in [(1u64, 1u64, 3u32), (3, 2, 4), (5, 1, 2)] {
            let w = UnityRoot::new(wt, 7).unwrap();
            let e = UnityRoot::new(et, 3).unwrap();
            let full = evaluate_p(&p, k, &w, &e, bits).unwrap();
            let we = w.mul(&e);
            let mut geom = ComplexBall::zero(bits);
            for l in 0..7 {
                geom = geom.add(&we.pow_u64(l).to_complex(bits));
            }
            let collapsed = geom.powi_via_mul(k);
            let diff_re = full.re.sub(&collapsed.re).abs_upper();
            let diff_im = full.im.sub(&collapsed.im).abs_upper();
            let tol = BigRational::new(BigInt::one(), BigInt::from(1u64 << 50));
            assert!(diff_re < tol && diff_im < tol, "w={wt} e={et} k={k}");
        }
    }

    #[test]
    fn count_via_filter_known_values() {
        let prec = Precision::default();
        let p = Quintuple::new(3, 2, 3, 0, 0).unwrap();
        assert_eq!(count_via_filter(&p, 1, prec).unwrap(), BigUint::from(1u32));
        assert_eq!(count_via_filter(&p, 2, prec).unwrap(), BigUint::from(1u32));
        let p = Quintuple::new(2, 1, 2, 0, 0).unwrap();
        assert_eq!(count_via_filter(&p, 3, prec).unwrap(), BigUint::from(4u32));
    }
}
