//! The `d | q` regime (with `m = q`): a closed form for `g(N)` built from
//! the last two digits and the digit sum, plus witness families of both
//! signs showing the bounded oscillation.
//!
//! When `d` divides `q`, the residue of an integer mod `d` is decided by
//! its last base-`q` digit, which collapses the counting recursion: every
//! block with two or more free digit positions contributes exactly zero,
//! and `g(N)` depends only on `(ε₁, ε₀, s_q(N) mod q)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::counting::{dp_count, g_exact_with, CaseTag, DpCounter, Quintuple};
use crate::digits::to_digits;
use crate::error::{Error, Result};

fn require_div_q(p: &Quintuple) -> Result<()> {
    let tag = p.case_tag();
    if !matches!(tag, CaseTag::DividesQ | CaseTag::BothTrivial) || p.m() != p.q() {
        return Err(Error::WrongCase {
            required: "d | q and m = q",
            actual: tag,
            q: p.q(),
            d: p.d(),
            m: p.m(),
        });
    }
    Ok(())
}

fn ceil_div_int(num: &BigInt, den: u64) -> BigInt {
    let den = BigInt::from(den);
    let (q, r) = num_integer::Integer::div_mod_floor(num, &den);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// The pieces of the closed form: `g = form1 + form2 + correction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormBreakdown {
    /// `α = j − s_q(N) + ε₁ + ε₀ (mod q)`
    pub alpha: u64,
    /// `β = j − s_q(N) + ε₀ (mod q)`
    pub beta: u64,
    pub form1: BigRational,
    pub form2: BigRational,
    pub correction: BigRational,
    pub g: BigRational,
}

/// Evaluates `g(N)` from the two-digit closed form. Exactly equal to
/// [`crate::counting::g_exact`] whenever `d | q` and `m = q`.
pub fn closed_form_g(p: &Quintuple, n: &BigUint) -> Result<ClosedFormBreakdown> {
    require_div_q(p)?;
    let (q, d, a, j) = (p.q(), p.d(), p.a(), p.j());
    let ds = to_digits(n, q)?;
    let eps0 = ds.digit(0);
    let eps1 = ds.digit(1);
    let s = ds.digit_sum();
    let alpha = reduce(j as i128 - s as i128 + eps1 as i128 + eps0 as i128, q);
    let beta = reduce(j as i128 - s as i128 + eps0 as i128, q);

    // Σ_{δ<ε₁} [the unique i₀ ≡ α−δ (mod q) in [0,q) has i₀ ≡ a (mod d)],
    // minus ε₁/d
    let mut hits = 0u64;
    for delta in 0..eps1 {
        let i0 = reduce(alpha as i128 - delta as i128, q);
        if i0 % d == a {
            hits += 1;
        }
    }
    let form1 = BigRational::from_integer(BigInt::from(hits))
        - BigRational::new(BigInt::from(eps1), BigInt::from(d));

    // at most one δ < ε₀ with δ ≡ a (mod d) and δ ≡ β (mod q),
    // minus (1/q)·⌈(ε₀−a)/d⌉
    let hit2 = u64::from(beta < eps0 && beta % d == a);
    let form2 = BigRational::from_integer(BigInt::from(hit2))
        - BigRational::new(
            ceil_div_int(&BigInt::from(eps0 as i128 - a as i128), d),
            BigInt::from(q),
        );

    // (1/q)·⌈(N−a)/d⌉ − N/(dq)
    let n_int = BigInt::from(n.clone());
    let correction = BigRational::new(
        ceil_div_int(&(&n_int - BigInt::from(a)), d),
        BigInt::from(q),
    ) - BigRational::new(n_int, BigInt::from(d * q));

    let g = &form1 + &form2 + &correction;
    Ok(ClosedFormBreakdown {
        alpha,
        beta,
        form1,
        form2,
        correction,
        g,
    })
}

fn reduce(x: i128, q: u64) -> u64 {
    (x.rem_euclid(q as i128)) as u64
}

/// Verifies the vanishing `D_{j′}(q^r) = 0` for `r ≥ 2`:
/// `count(q^r) − (1/q)·#{n < q^r : n ≡ a (mod d)}` computed exactly.
pub fn check_block_vanishing(p: &Quintuple, j_prime: u64, r: u32) -> Result<bool> {
    require_div_q(p)?;
    if r < 2 {
        return Err(Error::Domain("block vanishing needs r ≥ 2".into()));
    }
    let (q, d, a) = (p.q(), p.d(), p.a());
    let pj = Quintuple::new(q, d, q, a, j_prime % q)?;
    let n = BigUint::from(q).pow(r);
    let count = dp_count(&pj, &n);
    // #{n < q^r : n ≡ a (mod d)} = ⌈(q^r − a)/d⌉
    let in_class = ceil_div_int(&(BigInt::from(n) - BigInt::from(a)), d);
    let d_j = BigRational::from_integer(BigInt::from(count))
        - BigRational::new(in_class, BigInt::from(q));
    Ok(d_j.is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSign {
    Positive,
    Negative,
}

impl std::fmt::Display for WitnessSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WitnessSign::Positive => "positive",
            WitnessSign::Negative => "negative",
        })
    }
}

/// How a witness family compares to a published closed-form recipe.
/// Search is oracle-first: the family constant always comes from validated
/// computation, and any disagreement with the published constant is
/// flagged rather than trusted.
#[derive(Debug, Clone)]
pub struct PublishedRecipe {
    pub description: String,
    pub published_g: BigRational,
    pub matches_oracle: bool,
    /// Which digit-sum constraint validated, when one applies.
    pub validated_constraint: Option<String>,
}

/// An infinite family of `N` with constant, sign-definite `g(N)`.
///
/// Members share the last two digits and, when `s_classes` is set, the
/// residue of the digit sum mod `q`; the free high digits parameterize the
/// family.
#[derive(Debug, Clone)]
pub struct WitnessFamily {
    pub quintuple: Quintuple,
    pub eps1: u64,
    pub eps0: u64,
    /// Allowed residues of `s_q(N) mod q`; `None` means unconstrained.
    pub s_classes: Option<Vec<u64>>,
    pub predicted_g: BigRational,
    pub sign: WitnessSign,
    pub members: Vec<u64>,
    pub recipe: Option<PublishedRecipe>,
}

impl WitnessFamily {
    pub fn constraint_string(&self) -> String {
        match &self.s_classes {
            None => format!("ε₁={}, ε₀={}", self.eps1, self.eps0),
            Some(cls) => format!(
                "ε₁={}, ε₀={}, s_q(N) mod {} ∈ {:?}",
                self.eps1,
                self.eps0,
                self.quintuple.q(),
                cls
            ),
        }
    }
}

/// Smallest `N ≥ 1` whose last two digits are `(ε₁, ε₀)` and whose digit
/// sum is `≡ t (mod q)`, built by appending one adjusting high digit.
fn representative(q: u64, eps1: u64, eps0: u64, t: u64) -> BigUint {
    let base = BigUint::from(q);
    let low = BigUint::from(eps0) + BigUint::from(eps1) * &base;
    let h = (t + 2 * q - (eps0 + eps1) % q) % q;
    if h > 0 {
        low + BigUint::from(h) * &base * &base
    } else if !low.is_zero() {
        low
    } else {
        // all-zero digits with digit-sum class 0: use digits [0,0,1,q−1]
        (&base * &base) * (BigUint::one() + BigUint::from(q - 1) * &base)
    }
}

struct FamilySearch {
    p: Quintuple,
    counter: DpCounter,
}

impl FamilySearch {
    fn new(p: Quintuple) -> Self {
        FamilySearch {
            p,
            counter: DpCounter::new(p),
        }
    }

    /// Oracle-validated `g` for the configuration `(ε₁, ε₀, t)`.
    fn config_g(&mut self, eps1: u64, eps0: u64, t: u64) -> Result<BigRational> {
        let rep = representative(self.p.q(), eps1, eps0, t);
        let breakdown = closed_form_g(&self.p, &rep)?;
        let oracle = g_exact_with(&mut self.counter, &rep);
        if breakdown.g != oracle {
            return Err(Error::Contradiction(format!(
                "closed form disagrees with the counting oracle at N = {rep}"
            )));
        }
        Ok(oracle)
    }

    /// All `(value, classes)` groups for fixed last two digits, ordered by
    /// smallest class representative.
    fn groups(&mut self, eps1: u64, eps0: u64) -> Result<Vec<(BigRational, Vec<u64>)>> {
        let q = self.p.q();
        let mut groups: Vec<(BigRational, Vec<u64>)> = Vec::new();
        for t in 0..q {
            let g = self.config_g(eps1, eps0, t)?;
            if let Some(entry) = groups.iter_mut().find(|(v, _)| *v == g) {
                entry.1.push(t);
            } else {
                groups.push((g, vec![t]));
            }
        }
        Ok(groups)
    }

    fn sign_ok(g: &BigRational, sign: WitnessSign) -> bool {
        match sign {
            WitnessSign::Positive => g.is_positive(),
            WitnessSign::Negative => g.is_negative(),
        }
    }

    /// Collects members ≤ `limit` by direct digit inspection, validating
    /// each against the exact oracle.
    fn collect_members(
        &mut self,
        eps1: u64,
        eps0: u64,
        classes: Option<&[u64]>,
        predicted: &BigRational,
        limit: u64,
        want: usize,
    ) -> Result<Vec<u64>> {
        let q = self.p.q();
        let mut members = Vec::new();
        let mut n = 0u64;
        let mut digits: Vec<u64> = Vec::new();
        let mut digit_sum = 0u64;
        while n < limit && members.len() < want {
            // increment the digit string to n+1
            let mut i = 0;
            loop {
                if i == digits.len() {
                    digits.push(1);
                    digit_sum += 1;
                    break;
                }
                if digits[i] == q - 1 {
                    digits[i] = 0;
                    digit_sum -= q - 1;
                    i += 1;
                } else {
                    digits[i] += 1;
                    digit_sum += 1;
                    break;
                }
            }
            n += 1;
            let e0 = digits.first().copied().unwrap_or(0);
            let e1 = digits.get(1).copied().unwrap_or(0);
            if e0 != eps0 || e1 != eps1 {
                continue;
            }
            if let Some(cls) = classes {
                if !cls.contains(&(digit_sum % q)) {
                    continue;
                }
            }
            let g = g_exact_with(&mut self.counter, &BigUint::from(n));
            if g != *predicted {
                return Err(Error::Contradiction(format!(
                    "family member N = {n} has g = {g}, expected {predicted}"
                )));
            }
            members.push(n);
        }
        Ok(members)
    }
}

const MEMBER_TARGET: usize = 8;
const MIN_MEMBERS: usize = 5;

/// Default search bound for concrete family members.
pub const DEFAULT_MEMBER_LIMIT: u64 = 1_000_000;

fn witness_family(p: &Quintuple, sign: WitnessSign, member_limit: u64) -> Result<WitnessFamily> {
    require_div_q(p)?;
    let (q, d, a, j) = (p.q(), p.d(), p.a(), p.j());
    let mut search = FamilySearch::new(*p);

    // the published recipes, tried first as seeds
    struct Seed {
        eps1: u64,
        eps0: u64,
        published_g: BigRational,
        description: String,
        constraint_check: bool,
    }
    let rat = |n: i128, den: i128| BigRational::new(BigInt::from(n), BigInt::from(den));
    let seeds: Vec<Seed> = match sign {
        WitnessSign::Negative => {
            if a != 0 {
                vec![Seed {
                    eps1: 0,
                    eps0: a,
                    published_g: rat(-(a as i128), (q * d) as i128),
                    description: format!("a≠0 recipe: ε₁=0, ε₀=a={a}"),
                    constraint_check: false,
                }]
            } else {
                vec![Seed {
                    eps1: 1,
                    eps0: 0,
                    published_g: rat(-1, d as i128),
                    description: "a=0 recipe: ε₁=1, ε₀=0 with a digit-sum constraint".into(),
                    constraint_check: true,
                }]
            }
        }
        WitnessSign::Positive => {
            if a + 1 < q {
                vec![Seed {
                    eps1: 0,
                    eps0: a + 1,
                    published_g: BigRational::one() + rat(1, d as i128)
                        - rat((a + 1) as i128, (q * d) as i128)
                        - rat(1, q as i128),
                    description: format!("a+1<q recipe: ε₁=0, ε₀=a+1={}", a + 1),
                    constraint_check: false,
                }]
            } else {
                vec![Seed {
                    eps1: 1,
                    eps0: 0,
                    published_g: BigRational::one() - rat(1, d as i128),
                    description: "a+1=q recipe: ε₁=1, ε₀=0 with s ≡ j+2 (mod q)".into(),
                    constraint_check: true,
                }]
            }
        }
    };

    struct Candidate {
        eps1: u64,
        eps0: u64,
        g: BigRational,
        classes: Vec<u64>,
        recipe: Option<PublishedRecipe>,
    }
    let mut chosen: Option<Candidate> = None;
    for seed in &seeds {
        let groups = search.groups(seed.eps1, seed.eps0)?;
        if let Some((g, classes)) = groups
            .iter()
            .find(|(g, _)| FamilySearch::sign_ok(g, sign))
        {
            let validated_constraint = if classes.len() == q as usize {
                None
            } else if seed.constraint_check {
                // record which modulus the digit-sum condition validated at
                let mod_d: Vec<u64> = (0..q).filter(|t| t % d != (j + 1) % d).collect();
                let mod_q: Vec<u64> = (0..q).filter(|t| *t != (j + 1) % q).collect();
                let classes_sorted = classes.clone();
                Some(if classes_sorted == mod_d {
                    format!("s_q(N) ≢ j+1 (mod d) — modulus d={d} validated")
                } else if classes_sorted == mod_q {
                    format!("s_q(N) ≢ j+1 (mod q) — modulus q={q} validated")
                } else {
                    format!("s_q(N) mod {q} ∈ {classes_sorted:?} (empirical)")
                })
            } else {
                Some(format!("s_q(N) mod {q} ∈ {classes:?} (empirical)"))
            };
            let report = PublishedRecipe {
                description: seed.description.clone(),
                published_g: seed.published_g.clone(),
                matches_oracle: seed.published_g == *g,
                validated_constraint,
            };
            chosen = Some(Candidate {
                eps1: seed.eps1,
                eps0: seed.eps0,
                g: g.clone(),
                classes: classes.clone(),
                recipe: Some(report),
            });
            break;
        }
    }

    // deterministic full enumeration when no seed validates
    if chosen.is_none() {
        'outer: for eps1 in 0..q {
            for eps0 in 0..q {
                let groups = search.groups(eps1, eps0)?;
                if let Some((g, classes)) =
                    groups.iter().find(|(g, _)| FamilySearch::sign_ok(g, sign))
                {
                    chosen = Some(Candidate {
                        eps1,
                        eps0,
                        g: g.clone(),
                        classes: classes.clone(),
                        recipe: None,
                    });
                    break 'outer;
                }
            }
        }
    }

    let Candidate {
        eps1,
        eps0,
        g: predicted,
        classes,
        recipe,
    } = chosen.ok_or_else(|| {
        Error::SearchExhausted(format!(
            "no {sign} family over (ε₁, ε₀, s-class) configurations for q={q}, d={d}, a={a}, j={j}"
        ))
    })?;

    let unconstrained = classes.len() == q as usize;
    let class_filter: Option<Vec<u64>> = if unconstrained { None } else { Some(classes) };
    let members = search.collect_members(
        eps1,
        eps0,
        class_filter.as_deref(),
        &predicted,
        member_limit,
        MEMBER_TARGET,
    )?;
    if members.len() < MIN_MEMBERS {
        return Err(Error::SearchExhausted(format!(
            "only {} family members at or below {member_limit}",
            members.len()
        )));
    }
    Ok(WitnessFamily {
        quintuple: *p,
        eps1,
        eps0,
        s_classes: class_filter,
        predicted_g: predicted,
        sign,
        members,
        recipe,
    })
}

/// A family with `g < 0` on every member.
pub fn witness_negative(p: &Quintuple, member_limit: u64) -> Result<WitnessFamily> {
    witness_family(p, WitnessSign::Negative, member_limit)
}

/// A family with `g > 0` on every member.
pub fn witness_positive(p: &Quintuple, member_limit: u64) -> Result<WitnessFamily> {
    witness_family(p, WitnessSign::Positive, member_limit)
}
