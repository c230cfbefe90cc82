//! The `d | q−1` regime (with `m = q`): exact evaluation of the
//! roots-of-unity sum for the deviation `E_{a,j}(k) − q^{k−1}/d`, its
//! asymptotic profile `(R, rᵢ, M, c′(k), k₁, k₂)`, and machine-checkable
//! oscillation certificates.
//!
//! Every term `(1−ε)/(1−ωε)` carries an exact rational argument (as a
//! multiple of π) and a certified magnitude enclosure of the exact form
//! `sin(θ_ε/2)/sin(θ_{ωε}/2)`; equalities are decided exactly through
//! cyclotomic zero-tests, never by numeric tolerance.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ball::{with_escalation, Ball, ComplexBall, Precision};
use crate::counting::{dp_count, CaseTag, Quintuple};
use crate::cyclo::root_sum_is_zero;
use crate::error::{Error, Result};
use crate::unity::UnityRoot;

fn require_div_qm1(p: &Quintuple) -> Result<()> {
    let tag = p.case_tag();
    if tag != CaseTag::DividesQMinus1 || p.m() != p.q() {
        return Err(Error::WrongCase {
            required: "d | q−1 with d ≥ 2 and m = q",
            actual: tag,
            q: p.q(),
            d: p.d(),
            m: p.m(),
        });
    }
    Ok(())
}

/// One summand of the deviation formula: the value `(1−ε)/(1−ωε)` with
/// weight `ω^{−j}·ε^{−a}`.
#[derive(Debug, Clone)]
pub struct Term {
    pub omega: UnityRoot,
    pub eps: UnityRoot,
    pub weight: UnityRoot,
    /// True exactly when `ε = 1` (and then `ω ≠ 1`): the numerator vanishes.
    pub is_zero: bool,
    /// `(1/π)·arg((1−ε)/(1−ωε))`, exact, in `(−1, 1)`; `None` for zero terms.
    pub arg_over_pi: Option<BigRational>,
    /// Certified enclosure of `|(1−ε)/(1−ωε)| = sin(θ_ε/2)/sin(θ_{ωε}/2)`.
    pub magnitude: Ball,
    /// `θ_ε/2π ∈ (0,1)` for nonzero terms.
    num_turns: Option<BigRational>,
    /// `θ_{ωε}/2π ∈ (0,1)` for nonzero terms.
    den_turns: Option<BigRational>,
}

impl Term {
    /// Angle of the weight as a multiple of π.
    fn weight_arg_over_pi(&self) -> BigRational {
        self.weight.turns() * BigRational::from_integer(BigInt::from(2))
    }

    /// Key under which exactly-equal magnitudes collide structurally
    /// (conjugation symmetry included): `sin(πr)` depends only on
    /// `min(r, 1−r)`.
    fn magnitude_key(&self) -> Option<(BigRational, BigRational)> {
        let fold = |r: &BigRational| {
            let one_minus = BigRational::one() - r;
            if *r <= one_minus {
                r.clone()
            } else {
                one_minus
            }
        };
        Some((
            fold(self.num_turns.as_ref()?),
            fold(self.den_turns.as_ref()?),
        ))
    }
}

/// All `qd − 1` terms of the deviation sum, in `(ω, ε)` enumeration order.
pub fn enumerate_terms(p: &Quintuple, bits: u32) -> Result<Vec<Term>> {
    require_div_qm1(p)?;
    let (q, d, a, j) = (p.q(), p.d(), p.a(), p.j());
    let mut terms = Vec::with_capacity((q * d - 1) as usize);
    for s in 0..q {
        for t in 0..d {
            if s == 0 && t == 0 {
                continue; // ωε = 1 if and only if ω = ε = 1 (gcd(q, d) = 1)
            }
            let omega = UnityRoot::new(s, q)?;
            let eps = UnityRoot::new(t, d)?;
            let weight = omega.pow_u64(j).inv().mul(&eps.pow_u64(a).inv());
            if eps.is_identity() {
                terms.push(Term {
                    omega,
                    eps,
                    weight,
                    is_zero: true,
                    arg_over_pi: None,
                    magnitude: Ball::zero(bits),
                    num_turns: None,
                    den_turns: None,
                });
                continue;
            }
            let we = omega.mul(&eps);
            debug_assert!(!we.is_identity());
            let num_turns = eps.turns();
            let den_turns = we.turns();
            // arg(1−e^{iθ}) = θ/2 − π/2 on θ ∈ (0, 2π), so the quotient has
            // exact argument π·(θ_ε − θ_{ωε})/2π
            let arg = &num_turns - &den_turns;
            let magnitude = sin_pi_ball(&num_turns, bits).div(&sin_pi_ball(&den_turns, bits))?;
            terms.push(Term {
                omega,
                eps,
                weight,
                is_zero: false,
                arg_over_pi: Some(arg),
                magnitude,
                num_turns: Some(num_turns),
                den_turns: Some(den_turns),
            });
        }
    }
    Ok(terms)
}

/// `sin(π·r)` (the chord half-length `|1 − e^{2πir}| / 2` scaled by 2).
fn sin_pi_ball(turns: &BigRational, bits: u32) -> Ball {
    crate::ball::sin_pi(turns, bits)
}

/// Result of the exact deviation evaluation at `N = q^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    /// The integer count `E_{a,j}(k)`.
    pub count: BigUint,
    /// `E_{a,j}(k) − q^{k−1}/d`, exact.
    pub deviation: BigRational,
}

/// Evaluates `E_{a,j}(k) − q^{k−1}/d` from the roots-of-unity sum at
/// certified precision, rounding the implied integer to nearest with a
/// residual below 1/4.
pub fn e_exact(p: &Quintuple, k: u32, prec: Precision) -> Result<Deviation> {
    require_div_qm1(p)?;
    if k == 0 {
        return Err(Error::Domain("deviation evaluation needs k ≥ 1".into()));
    }
    let (q, d) = (p.q(), p.d());
    let main_term = BigRational::new(
        BigInt::from(BigUint::from(q).pow(k - 1)),
        BigInt::from(d),
    );
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    with_escalation(prec, |bits| {
        let terms = enumerate_terms(p, bits)?;
        let mut sum = ComplexBall::zero(bits);
        for term in terms.iter().filter(|t| !t.is_zero) {
            let arg = term.arg_over_pi.as_ref().expect("nonzero term");
            let angle = term.weight_arg_over_pi()
                + arg * BigRational::from_integer(BigInt::from(k));
            let unit = ComplexBall::from_arg_over_pi(&angle, bits);
            let scale = term.magnitude.powi(u64::from(k));
            sum = sum.add(&unit.scale(&scale));
        }
        let dev = sum.div_int(d * q);
        let e_ball = dev.re.add(&Ball::from_rational(&main_term, bits));
        let (count, residual) = e_ball.round_to_int();
        let im_bound = dev.im.abs_upper();
        if residual >= quarter || im_bound >= quarter || count.is_negative() {
            return Err(Error::PrecisionExhausted {
                bits,
                context: format!("deviation rounding residual not below 1/4 at k = {k}"),
            });
        }
        let deviation = BigRational::from_integer(count.clone()) - &main_term;
        Ok(Deviation {
            count: count.magnitude().clone(),
            deviation,
        })
    })
}

/// Exact data of one nonzero term used in profile arithmetic.
#[derive(Debug, Clone)]
struct ExactTerm {
    arg: BigRational,
    weight_arg: BigRational,
    index: usize,
}

/// `c′(k) = Σ_{maximal} e^{iπ(weight_arg + k·arg)}` as a ball.
fn cprime_ball(maximal: &[ExactTerm], k: u64, bits: u32) -> ComplexBall {
    let mut sum = ComplexBall::zero(bits);
    let kk = BigRational::from_integer(BigInt::from(k));
    for t in maximal {
        let angle = &t.weight_arg + &t.arg * &kk;
        sum = sum.add(&ComplexBall::from_arg_over_pi(&angle, bits));
    }
    sum
}

/// Exact equality of `c′(k)` and `c′(k′)` via a cyclotomic zero-test.
fn cprime_equal(maximal: &[ExactTerm], k1: u64, k2: u64) -> bool {
    let mut roots: Vec<(BigRational, BigInt)> = Vec::new();
    for t in maximal {
        let a1 = (&t.weight_arg + &t.arg * BigRational::from_integer(BigInt::from(k1)))
            / BigRational::from_integer(BigInt::from(2));
        let a2 = (&t.weight_arg + &t.arg * BigRational::from_integer(BigInt::from(k2)))
            / BigRational::from_integer(BigInt::from(2));
        roots.push((a1, BigInt::one()));
        roots.push((a2, -BigInt::one()));
    }
    root_sum_is_zero(&roots)
}

/// Exact equality of two magnitudes `sin(πa)/sin(πb)` and `sin(πc)/sin(πd)`
/// through `sin(πa)sin(πd) = sin(πb)sin(πc)`, reduced to a cyclotomic
/// zero-test with product-to-sum.
fn magnitudes_equal(x: (&BigRational, &BigRational), y: (&BigRational, &BigRational)) -> bool {
    let (a, b) = x;
    let (c, d) = y;
    // 2·sin(πu)sin(πv) = cos(π(u−v)) − cos(π(u+v));
    // 2·cos(πw) = e^{iπw} + e^{−iπw}, angles stored in turns (πw ⇒ w/2)
    let half = |r: BigRational| r / BigRational::from_integer(BigInt::from(2));
    let mut roots: Vec<(BigRational, BigInt)> = Vec::new();
    let mut push_cos = |w: BigRational, sign: i64| {
        roots.push((half(w.clone()), BigInt::from(sign)));
        roots.push((half(-w), BigInt::from(sign)));
    };
    // sin(πa)sin(πd) − sin(πb)sin(πc) = 0, all scaled by 4
    push_cos(a - d, 1);
    push_cos(a + d, -1);
    push_cos(b - c, -1);
    push_cos(b + c, 1);
    root_sum_is_zero(&roots)
}

/// The asymptotic profile of the deviation sum.
#[derive(Debug, Clone)]
pub struct AsymptoticProfile {
    pub quintuple: Quintuple,
    /// All `qd − 1` terms at the profile's final precision.
    pub terms: Vec<Term>,
    /// Enclosure of the maximal magnitude `R`.
    pub r: Ball,
    /// Indices (into `terms`) of the `h` maximal terms.
    pub maximal: Vec<usize>,
    pub h: usize,
    /// Enclosure of the second-largest magnitude.
    pub r2: Ball,
    /// Count of nonzero, non-maximal terms (the tail bounded by `r2`).
    pub tail_count: u64,
    /// Least common period of the unit rotations `rᵢ/R`.
    pub m_period: u64,
    /// `c′(k)` for `k = 0..M`.
    pub cprime: Vec<ComplexBall>,
    /// Residue attaining the most negative `c′` value (ties: smallest k).
    pub k1: u64,
    /// Residue attaining the largest positive `c′` value (ties: smallest k).
    pub k2: u64,
    /// `|c′(k1)|`, strictly positive.
    pub c1_abs: Ball,
    /// `c′(k2)`, strictly positive.
    pub c2: Ball,
    /// Precision at which everything above was certified.
    pub bits: u32,
}

/// Computes the full profile with precision escalation; every ordering and
/// sign below is certified at the returned precision.
pub fn profile(p: &Quintuple, prec: Precision) -> Result<AsymptoticProfile> {
    require_div_qm1(p)?;
    with_escalation(prec, |bits| profile_at(p, bits))
}

fn profile_at(p: &Quintuple, bits: u32) -> Result<AsymptoticProfile> {
    let terms = enumerate_terms(p, bits)?;
    let exact: Vec<ExactTerm> = terms
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_zero)
        .map(|(index, t)| ExactTerm {
            arg: t.arg_over_pi.clone().expect("nonzero"),
            weight_arg: t.weight_arg_over_pi(),
            index,
        })
        .collect();

    // group by the exact magnitude key; keys collapse conjugate pairs and
    // any other structurally equal sines
    let mut class_map: BTreeMap<(BigRational, BigRational), Vec<usize>> = BTreeMap::new();
    for (i, t) in exact.iter().enumerate() {
        let key = terms[t.index].magnitude_key().expect("nonzero");
        class_map.entry(key).or_default().push(i);
    }
    let mut classes: Vec<((BigRational, BigRational), Vec<usize>)> =
        class_map.into_iter().collect();

    // certified extraction of the largest class; exactly-equal classes with
    // different keys (decided cyclotomically) merge instead of escalating
    let extract_max =
        |classes: &mut Vec<((BigRational, BigRational), Vec<usize>)>| -> Result<(Ball, Vec<usize>)> {
            let mut best = 0usize;
            let mut i = 1usize;
            while i < classes.len() {
                let mag_i = &terms[exact[classes[i].1[0]].index].magnitude;
                let mag_b = &terms[exact[classes[best].1[0]].index].magnitude;
                match mag_i.try_lt(mag_b) {
                    Some(true) => i += 1,
                    Some(false) => {
                        best = i;
                        i += 1;
                    }
                    None => {
                        let (ki, kb) = (classes[i].0.clone(), classes[best].0.clone());
                        if magnitudes_equal((&ki.0, &ki.1), (&kb.0, &kb.1)) {
                            let members = classes.remove(i).1;
                            if best > i {
                                best -= 1;
                            }
                            classes[best].1.extend(members);
                            // i now points at the next unvisited class
                        } else {
                            return Err(Error::PrecisionExhausted {
                                bits,
                                context: "magnitude classes not separated".into(),
                            });
                        }
                    }
                }
            }
            let (_, members) = classes.remove(best);
            let ball = terms[exact[members[0]].index].magnitude.clone();
            Ok((ball, members))
        };

    let (r_ball, maximal_local) = extract_max(&mut classes)?;
    let r2_ball = if classes.is_empty() {
        Ball::zero(bits)
    } else {
        extract_max(&mut classes)?.0
    };

    if !r_ball.gt_rational(&BigRational::one()) {
        return Err(Error::PrecisionExhausted {
            bits,
            context: "cannot certify R > 1".into(),
        });
    }

    let maximal_exact: Vec<ExactTerm> = maximal_local.iter().map(|&i| exact[i].clone()).collect();
    let maximal: Vec<usize> = maximal_exact.iter().map(|t| t.index).collect();
    let h = maximal.len();
    let tail_count = (exact.len() - h) as u64;

    // the identity value 1 must not be maximal (it has magnitude 1 < R);
    // structurally: arg 0 and equal sine angles occur only at ω = 1
    for t in &maximal_exact {
        if t.arg.is_zero() {
            return Err(Error::Contradiction(
                "a maximal term has argument 0, contradicting R > 1".into(),
            ));
        }
    }

    // period M: each rᵢ/R = e^{iπ·arg} is the root of unity e^{2πi·(arg/2)}
    let mut m_period = 1u64;
    for t in &maximal_exact {
        let turns = &t.arg / BigRational::from_integer(BigInt::from(2));
        let reduced = turns.clone(); // Ratio is always reduced
        let order = u64::try_from(reduced.denom().magnitude()).map_err(|_| Error::Domain(
            "root order overflow".into(),
        ))?;
        m_period = num_integer::Integer::lcm(&m_period, &order);
    }

    // c′ table with realness certification
    let width_cap = BigRational::new(
        BigInt::one(),
        BigInt::one() << (bits.saturating_sub(16)),
    );
    let mut cprime = Vec::with_capacity(m_period as usize);
    for k in 0..m_period {
        let c = cprime_ball(&maximal_exact, k, bits);
        if !c.im.contains_zero() {
            return Err(Error::Contradiction(format!(
                "c′({k}) has nonreal enclosure"
            )));
        }
        if c.im.radius() * BigRational::from_integer(BigInt::from(2)) >= width_cap {
            return Err(Error::PrecisionExhausted {
                bits,
                context: format!("c′({k}) imaginary width above 2^-(P-16)"),
            });
        }
        cprime.push(c);
    }

    // Σ_k c′(k) must enclose zero tightly
    let mut total = ComplexBall::zero(bits);
    for c in &cprime {
        total = total.add(c);
    }
    if !total.re.contains_zero() || !total.im.contains_zero() {
        return Err(Error::Contradiction("Σ c′(k) does not enclose 0".into()));
    }
    if total.re.radius() * BigRational::from_integer(BigInt::from(2)) >= width_cap {
        return Err(Error::PrecisionExhausted {
            bits,
            context: "Σ c′(k) interval too wide".into(),
        });
    }

    // select k1 (most negative) and k2 (largest positive), ties by smallest k
    let mut k1 = 0u64;
    let mut k2 = 0u64;
    for k in 1..m_period {
        if !cprime_equal(&maximal_exact, k, k1) {
            match cprime[k as usize].re.try_lt(&cprime[k1 as usize].re) {
                Some(true) => k1 = k,
                Some(false) => {}
                None => {
                    return Err(Error::PrecisionExhausted {
                        bits,
                        context: "c′ ordering not separated".into(),
                    })
                }
            }
        }
        if !cprime_equal(&maximal_exact, k, k2) {
            match cprime[k2 as usize].re.try_lt(&cprime[k as usize].re) {
                Some(true) => k2 = k,
                Some(false) => {}
                None => {
                    return Err(Error::PrecisionExhausted {
                        bits,
                        context: "c′ ordering not separated".into(),
                    })
                }
            }
        }
    }
    let c1 = cprime[k1 as usize].re.clone();
    let c2 = cprime[k2 as usize].re.clone();
    if !c1.is_strictly_negative() || !c2.is_strictly_positive() {
        return Err(Error::PrecisionExhausted {
            bits,
            context: "cannot certify c′(k1) < 0 < c′(k2)".into(),
        });
    }

    Ok(AsymptoticProfile {
        quintuple: *p,
        r: r_ball,
        maximal,
        h,
        r2: r2_ball,
        tail_count,
        m_period,
        cprime,
        k1,
        k2,
        c1_abs: c1.neg(),
        c2,
        bits,
        terms,
    })
}

/// The constructive ingredients behind `R > 1`: an `ε₀` in the open left
/// half-plane and an `ω₀` with `Re(ε₀ω₀) ≥ 0`, giving
/// `|1−ε₀| > √2 ≥ |1−ω₀ε₀|`.
pub fn find_r_gt1_witness(p: &Quintuple, prec: Precision) -> Result<(UnityRoot, UnityRoot)> {
    require_div_qm1(p)?;
    let (q, d) = (p.q(), p.d());
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let three_quarters = BigRational::new(BigInt::from(3), BigInt::from(4));
    let eps0 = (0..d)
        .map(|t| UnityRoot::new(t, d).expect("d ≥ 1"))
        .find(|e| {
            let r = e.turns();
            r > quarter && r < three_quarters // Re(ε) < 0
        })
        .ok_or_else(|| Error::SearchExhausted("no ε₀ with Re(ε₀) < 0".into()))?;
    let omega0 = (0..q)
        .map(|s| UnityRoot::new(s, q).expect("q ≥ 2"))
        .find(|w| {
            let r = w.mul(&eps0).turns();
            r <= quarter || r >= three_quarters // Re(ωε₀) ≥ 0
        })
        .ok_or_else(|| Error::SearchExhausted("no ω₀ with Re(ε₀ω₀) ≥ 0".into()))?;
    // certify the magnitude ratio strictly exceeds 1
    with_escalation(prec, |bits| {
        let num = sin_pi_ball(&eps0.turns(), bits);
        let den = sin_pi_ball(&omega0.mul(&eps0).turns(), bits);
        let ratio = num.div(&den)?;
        if ratio.gt_rational(&BigRational::one()) {
            Ok(())
        } else {
            Err(Error::PrecisionExhausted {
                bits,
                context: "witness ratio not certified above 1".into(),
            })
        }
    })?;
    Ok((eps0, omega0))
}

/// One verified point of a certificate.
#[derive(Debug, Clone)]
pub struct VerifiedPoint {
    pub k: u32,
    pub count: BigUint,
    pub deviation: BigRational,
    /// −1, 0, or 1.
    pub sign: i8,
    pub residue: u64,
    /// Whether the digit-DP counter confirmed the rounded integer count.
    pub dp_checked: bool,
}

/// A finite, machine-checkable witness of two-sided unbounded oscillation:
/// beyond `k_star`, deviations along `k ≡ k1 (mod M)` are negative and
/// along `k ≡ k2 (mod M)` positive, and every claim in `verified` was
/// checked exactly.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub quintuple: Quintuple,
    pub m_period: u64,
    pub k1: u64,
    pub k2: u64,
    /// Smallest k with (tail count)·R2^k < min(|c′(k1)|, c′(k2))·R^k,
    /// computed with outward rounding.
    pub k_star: u32,
    pub r: Ball,
    pub r2: Ball,
    pub c1_abs: Ball,
    pub c2: Ball,
    pub verified: Vec<VerifiedPoint>,
    pub bits: u32,
}

/// Builds the profile, finitizes the asymptotics through `k_star`, and
/// verifies the sign claims exactly for all `k ≤ k_check`.
pub fn certify_oscillation(p: &Quintuple, k_check: u32, prec: Precision) -> Result<Certificate> {
    let prof = profile(p, prec)?;
    let bits = prof.bits;
    let q = p.q();

    // dominance threshold with outward rounding
    let bound = {
        let c1 = prof.c1_abs.lower();
        let c2 = prof.c2.lower();
        if c1 < c2 {
            c1
        } else {
            c2
        }
    };
    let mut k_star = None;
    for k in 1u32..=10_000 {
        let tail = prof.r2.powi(u64::from(k)).upper() * BigRational::from_integer(
            BigInt::from(prof.tail_count),
        );
        let main = prof.r.powi(u64::from(k)).lower() * &bound;
        if tail < main {
            k_star = Some(k);
            break;
        }
    }
    let k_star = k_star.ok_or_else(|| Error::PrecisionExhausted {
        bits,
        context: "dominance threshold not reached by k = 10000".into(),
    })?;

    let mut verified = Vec::with_capacity(k_check as usize);
    for k in 1..=k_check {
        let dev = e_exact(p, k, Precision::new(bits, prec.max_bits))?;
        // the digit DP is polynomial in k: cross-check every point
        let n = BigUint::from(q).pow(k);
        let dp = dp_count(p, &n);
        if dp != dev.count {
            return Err(Error::Contradiction(format!(
                "roots-of-unity count {} disagrees with digit DP {} at k = {k}",
                dev.count, dp
            )));
        }
        let sign = match dev.deviation.cmp(&BigRational::zero()) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        };
        let residue = u64::from(k) % prof.m_period;
        if u64::from(k) >= u64::from(k_star) {
            if residue == prof.k1 && sign != -1 {
                return Err(Error::Contradiction(format!(
                    "claimed negative deviation at k = {k} (≡ {} mod {}), got {}",
                    prof.k1, prof.m_period, dev.deviation
                )));
            }
            if residue == prof.k2 && sign != 1 {
                return Err(Error::Contradiction(format!(
                    "claimed positive deviation at k = {k} (≡ {} mod {}), got {}",
                    prof.k2, prof.m_period, dev.deviation
                )));
            }
        }
        verified.push(VerifiedPoint {
            k,
            count: dev.count,
            deviation: dev.deviation,
            sign,
            residue,
            dp_checked: true,
        });
    }

    Ok(Certificate {
        quintuple: *p,
        m_period: prof.m_period,
        k1: prof.k1,
        k2: prof.k2,
        k_star,
        r: prof.r,
        r2: prof.r2,
        c1_abs: prof.c1_abs,
        c2: prof.c2,
        verified,
        bits,
    })
}

/// Refined distinctness check for the nonzero term values.
///
/// For `ω ≠ 1` the values are pairwise distinct; every `(ω = 1, ε ≠ 1)`
/// term equals exactly 1, and no `ω ≠ 1` term does. (The blanket claim
/// fails for `d ≥ 3` precisely on that value-1 class.)
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinctnessReport {
    pub nonzero_terms: usize,
    pub distinct_values: usize,
    pub value_one_class: usize,
}

pub fn check_term_distinctness(p: &Quintuple, prec: Precision) -> Result<DistinctnessReport> {
    let terms = with_escalation(prec, |bits| enumerate_terms(p, bits))?;
    let nonzero: Vec<&Term> = terms.iter().filter(|t| !t.is_zero).collect();
    let mut ones = 0usize;
    let mut general: Vec<&Term> = Vec::new();
    for t in &nonzero {
        if t.omega.is_identity() {
            // (1−ε)/(1−ε) = 1 exactly
            let arg = t.arg_over_pi.as_ref().expect("nonzero");
            if !arg.is_zero() || t.num_turns != t.den_turns {
                return Err(Error::Contradiction(
                    "ω = 1 term does not reduce to the value 1".into(),
                ));
            }
            ones += 1;
        } else {
            general.push(t);
        }
    }
    // ω ≠ 1 terms never take the value 1: their argument is nonzero
    for t in &general {
        if t.arg_over_pi.as_ref().expect("nonzero").is_zero() {
            return Err(Error::Contradiction(
                "ω ≠ 1 term with zero argument".into(),
            ));
        }
    }
    // pairwise distinctness among ω ≠ 1 terms: distinct arguments settle
    // most pairs; equal arguments require distinct magnitudes
    let mut by_arg: BTreeMap<BigRational, Vec<&Term>> = BTreeMap::new();
    for t in &general {
        by_arg
            .entry(t.arg_over_pi.clone().expect("nonzero"))
            .or_default()
            .push(t);
    }
    for (arg, group) in &by_arg {
        for i in 0..group.len() {
            for jj in (i + 1)..group.len() {
                let (x, y) = (group[i], group[jj]);
                let separated = with_escalation(prec, |bits| {
                    let mx = terms_magnitude_at(p, x, bits)?;
                    let my = terms_magnitude_at(p, y, bits)?;
                    match mx.try_lt(&my) {
                        Some(_) => Ok(true),
                        None => {
                            let kx = x.magnitude_key().expect("nonzero");
                            let ky = y.magnitude_key().expect("nonzero");
                            if magnitudes_equal((&kx.0, &kx.1), (&ky.0, &ky.1)) {
                                Ok(false)
                            } else {
                                Err(Error::PrecisionExhausted {
                                    bits,
                                    context: "magnitude pair not separated".into(),
                                })
                            }
                        }
                    }
                })?;
                if !separated {
                    return Err(Error::Contradiction(format!(
                        "terms ({:?}, {:?}) and ({:?}, {:?}) share argument {arg} and magnitude",
                        x.omega, x.eps, y.omega, y.eps
                    )));
                }
            }
        }
    }
    let distinct = general.len() + usize::from(ones > 0);
    Ok(DistinctnessReport {
        nonzero_terms: nonzero.len(),
        distinct_values: distinct,
        value_one_class: ones,
    })
}

fn terms_magnitude_at(_p: &Quintuple, t: &Term, bits: u32) -> Result<Ball> {
    let num = t.num_turns.as_ref().expect("nonzero");
    let den = t.den_turns.as_ref().expect("nonzero");
    sin_pi_ball(num, bits).div(&sin_pi_ball(den, bits))
}
