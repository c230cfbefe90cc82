//! Exact counting of `{0 ≤ n < N : n ≡ a (mod d), s_q(n) ≡ j (mod m)}`,
//! the error term `g(N) = count − N/(dm)`, and the Gelfond exponent.
//!
//! Two independent counters are provided: a linear-scan oracle
//! ([`brute_count`]) and a digit dynamic program ([`DpCounter`]) that runs
//! in time proportional to `digits(N)·q·d·m` and therefore reaches
//! astronomically large `N`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::ball::{self, with_escalation, Ball, Precision};
use crate::digits::to_digits;
use crate::error::{Error, Result};

/// Case classification of `(q, d)` per the two drift regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    DividesQ,
    DividesQMinus1,
    BothTrivial,
    Uncovered,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseTag::DividesQ => "DIVIDES_Q",
            CaseTag::DividesQMinus1 => "DIVIDES_Q_MINUS_1",
            CaseTag::BothTrivial => "BOTH_TRIVIAL",
            CaseTag::Uncovered => "UNCOVERED",
        };
        f.write_str(s)
    }
}

/// The parameters `(q, a, d, j, m)`: count `n < N` with `n ≡ a (mod d)`
/// and `s_q(n) ≡ j (mod m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quintuple {
    q: u64,
    d: u64,
    m: u64,
    a: u64,
    j: u64,
}

impl Quintuple {
    pub fn new(q: u64, d: u64, m: u64, a: u64, j: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidBase(q));
        }
        if d < 1 {
            return Err(Error::InvalidModulus { min: 1, got: d });
        }
        if m < 1 {
            return Err(Error::InvalidModulus { min: 1, got: m });
        }
        if a >= d {
            return Err(Error::ResidueOutOfRange {
                residue: a,
                modulus: d,
            });
        }
        if j >= m {
            return Err(Error::ResidueOutOfRange {
                residue: j,
                modulus: m,
            });
        }
        Ok(Quintuple { q, d, m, a, j })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn j(&self) -> u64 {
        self.j
    }

    /// Classifies `(q, d)`: the drift analysis covers `d | q` and
    /// `d | q−1`; `d = 1` is trivial either way.
    pub fn case_tag(&self) -> CaseTag {
        classify(self.q, self.d)
    }

    /// Denominator `d·m` of every exact `g` value.
    pub fn dm(&self) -> u64 {
        self.d * self.m
    }
}

/// See [`Quintuple::case_tag`].
pub fn classify(q: u64, d: u64) -> CaseTag {
    if d == 1 {
        CaseTag::BothTrivial
    } else if q % d == 0 {
        CaseTag::DividesQ
    } else if (q - 1) % d == 0 {
        CaseTag::DividesQMinus1
    } else {
        CaseTag::Uncovered
    }
}

/// Direct enumeration; the oracle all other counters are judged against.
///
/// Refuses `N` beyond `budget` rather than silently grinding.
pub fn brute_count(p: &Quintuple, n: &BigUint, budget: u64) -> Result<u64> {
    let n_small = n.to_u64().filter(|&v| v <= budget).ok_or_else(|| {
        Error::BudgetExceeded {
            what: "brute-force enumeration bound",
            requested: n.to_string(),
            limit: budget,
        }
    })?;
    let mut scanner = Scanner::new(*p);
    let mut count = 0u64;
    for _ in 0..n_small {
        if scanner.step_qualifies() {
            count += 1;
        }
    }
    Ok(count)
}

/// Digit dynamic program with memoized completion tables.
///
/// `tables[i][s][v]` counts the `i`-digit strings (digits in `[0, q)`)
/// whose digit sum is `≡ s (mod m)` and whose value is `≡ v (mod d)`.
/// A count for any `N` is then a single most-significant-first walk.
pub struct DpCounter {
    p: Quintuple,
    tables: Vec<Vec<BigUint>>,
    pow_q_mod_d: Vec<u64>,
}

impl DpCounter {
    pub fn new(p: Quintuple) -> Self {
        let mut table0 = vec![BigUint::zero(); (p.m * p.d) as usize];
        table0[0] = BigUint::one();
        DpCounter {
            p,
            tables: vec![table0],
            pow_q_mod_d: vec![1 % p.d],
        }
    }

    pub fn quintuple(&self) -> &Quintuple {
        &self.p
    }

    fn idx(&self, s: u64, v: u64) -> usize {
        (s * self.p.d + v) as usize
    }

    fn ensure_levels(&mut self, levels: usize) {
        let (q, d, m) = (self.p.q, self.p.d, self.p.m);
        while self.tables.len() <= levels {
            let i = self.tables.len() - 1;
            let qi_mod_d = self.pow_q_mod_d[i];
            let prev = &self.tables[i];
            let mut next = vec![BigUint::zero(); (m * d) as usize];
            for s in 0..m {
                for v in 0..d {
                    let src = prev[self.idx(s, v)].clone();
                    if src.is_zero() {
                        continue;
                    }
                    // append digit δ at the new most-significant position i
                    for delta in 0..q {
                        let s2 = (s + delta) % m;
                        let v2 = (v + delta % d * qi_mod_d) % d;
                        next[(s2 * d + v2) as usize] += &src;
                    }
                }
            }
            self.tables.push(next);
            self.pow_q_mod_d.push(qi_mod_d * (q % d) % d);
        }
    }

    /// Exact `#{0 ≤ n < N : n ≡ a (mod d), s_q(n) ≡ j (mod m)}`.
    pub fn count(&mut self, n: &BigUint) -> BigUint {
        let (q, d, m, a, j) = (self.p.q, self.p.d, self.p.m, self.p.a, self.p.j);
        let ds = to_digits(n, q).expect("base validated at construction");
        self.ensure_levels(ds.len());
        let mut total = BigUint::zero();
        let mut s_pre = 0u64; // digit sum of the fixed prefix, mod m
        let mut v_pre = 0u64; // value of the fixed prefix, mod d
        for i in (0..ds.len()).rev() {
            let eps = ds.digit(i);
            let qi_mod_d = self.pow_q_mod_d[i];
            for delta in 0..eps {
                let s_need = (j + m - (s_pre + delta) % m) % m;
                let v_need = (a + d - (v_pre + delta % d * qi_mod_d) % d) % d;
                total += &self.tables[i][(s_need * d + v_need) as usize];
            }
            s_pre = (s_pre + eps) % m;
            v_pre = (v_pre + eps % d * qi_mod_d) % d;
        }
        total
    }
}

/// One-shot digit-DP count.
pub fn dp_count(p: &Quintuple, n: &BigUint) -> BigUint {
    DpCounter::new(*p).count(n)
}

/// `g(N) = count(N) − N/(d·m)` as an exact rational.
pub fn g_exact(p: &Quintuple, n: &BigUint) -> BigRational {
    let count = dp_count(p, n);
    BigRational::from_integer(BigInt::from(count))
        - BigRational::new(BigInt::from(n.clone()), BigInt::from(p.dm()))
}

/// [`g_exact`] using an existing counter (keeps the DP tables warm).
pub fn g_exact_with(counter: &mut DpCounter, n: &BigUint) -> BigRational {
    let count = counter.count(n);
    BigRational::from_integer(BigInt::from(count))
        - BigRational::new(BigInt::from(n.clone()), BigInt::from(counter.p.dm()))
}

/// The exponent `λ = (1/(2·log q))·log(q·sin(π/2m)/sin(π/2mq))` with a
/// certified enclosure; also certifies `λ < 1`.
pub fn gelfond_exponent(q: u64, m: u64, prec: Precision) -> Result<Ball> {
    if q < 2 {
        return Err(Error::InvalidBase(q));
    }
    if m < 2 {
        return Err(Error::InvalidModulus { min: 2, got: m });
    }
    with_escalation(prec, |bits| {
        let half_m = BigRational::new(BigInt::one(), BigInt::from(2 * m));
        let half_mq = BigRational::new(BigInt::one(), BigInt::from(2 * m * q));
        let num = ball::sin_pi(&half_m, bits).mul_int(q as i64);
        let den = ball::sin_pi(&half_mq, bits);
        let ratio = num.div(&den)?;
        let log_ratio = ball::ln(&ratio)?;
        let log_q = ball::ln(&Ball::exact_int(q as i64, bits))?;
        let lambda = log_ratio.div(&log_q.mul_int(2))?;
        if !lambda.lt_rational(&BigRational::one()) {
            return Err(Error::PrecisionExhausted {
                bits,
                context: "cannot certify λ < 1".into(),
            });
        }
        Ok(lambda)
    })
}

/// Incremental pointwise evaluation of `g` over `N = 1, 2, 3, …`.
///
/// Each step costs O(1) amortized: the digit string of the running `n` is
/// incremented in place and `g(N)·d·m` is maintained as an integer.
pub struct Scanner {
    p: Quintuple,
    digits: Vec<u64>,
    digit_sum: u64,
    n_mod_d: u64,
    count: u64,
    n: u64,
}

impl Scanner {
    pub fn new(p: Quintuple) -> Self {
        Scanner {
            p,
            digits: Vec::new(),
            digit_sum: 0,
            n_mod_d: 0,
            count: 0,
            n: 0,
        }
    }

    /// Advances past the current `n`, returning whether it qualified.
    fn step_qualifies(&mut self) -> bool {
        let qualifies = self.n_mod_d == self.p.a && self.digit_sum % self.p.m == self.p.j;
        if qualifies {
            self.count += 1;
        }
        // increment the base-q digit string
        let q = self.p.q;
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.digits.push(1);
                self.digit_sum += 1;
                break;
            }
            if self.digits[i] == q - 1 {
                self.digits[i] = 0;
                self.digit_sum -= q - 1;
                i += 1;
            } else {
                self.digits[i] += 1;
                self.digit_sum += 1;
                break;
            }
        }
        self.n_mod_d = (self.n_mod_d + 1) % self.p.d;
        self.n += 1;
        qualifies
    }
}

impl Iterator for Scanner {
    /// `(N, g(N)·d·m)` for `N = 1, 2, …`.
    type Item = (u64, i128);

    fn next(&mut self) -> Option<Self::Item> {
        self.step_qualifies();
        let scaled = i128::from(self.count) * i128::from(self.p.dm()) - i128::from(self.n);
        Some((self.n, scaled))
    }
}

/// Summary of a scan of `g(N)` for `1 ≤ N ≤ n_max`.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub quintuple: Quintuple,
    pub n_max: u64,
    /// Number of strict sign alternations (zeros skipped).
    pub sign_changes: u64,
    pub min_g: BigRational,
    pub argmin_n: u64,
    pub max_g: BigRational,
    pub argmax_n: u64,
    /// Gelfond exponent for `(q, m)`; absent when `m < 2`.
    pub lambda: Option<Ball>,
    /// max over scanned `N ≥ 2`, `g(N) ≠ 0`, of `log|g(N)| / log N`.
    /// Diagnostic only: the theorem's O-constant is unspecified.
    pub empirical_envelope: Option<f64>,
}

/// Scans `g` exactly over `1 ≤ N ≤ n_max`.
pub fn scan(p: &Quintuple, n_max: u64, budget: u64, prec: Precision) -> Result<ScanReport> {
    if n_max > budget {
        return Err(Error::BudgetExceeded {
            what: "scan bound",
            requested: n_max.to_string(),
            limit: budget,
        });
    }
    if n_max == 0 {
        return Err(Error::Domain("scan needs n_max ≥ 1".into()));
    }
    let dm = i128::from(p.dm());
    let mut sign_changes = 0u64;
    let mut last_sign = 0i8;
    let mut min_scaled = i128::MAX;
    let mut max_scaled = i128::MIN;
    let mut argmin = 0u64;
    let mut argmax = 0u64;
    let mut envelope: Option<f64> = None;
    let log_dm = (p.dm() as f64).ln();
    for (n, scaled) in Scanner::new(*p).take(n_max as usize) {
        if scaled < min_scaled {
            min_scaled = scaled;
            argmin = n;
        }
        if scaled > max_scaled {
            max_scaled = scaled;
            argmax = n;
        }
        if scaled != 0 {
            let sign = if scaled > 0 { 1 } else { -1 };
            if last_sign != 0 && sign != last_sign {
                sign_changes += 1;
            }
            last_sign = sign;
            if n >= 2 {
                let ratio = ((scaled.unsigned_abs() as f64).ln() - log_dm) / (n as f64).ln();
                envelope = Some(envelope.map_or(ratio, |e: f64| e.max(ratio)));
            }
        }
    }
    let lambda = if p.m >= 2 {
        Some(gelfond_exponent(p.q, p.m, prec)?)
    } else {
        None
    };
    Ok(ScanReport {
        quintuple: *p,
        n_max,
        sign_changes,
        min_g: BigRational::new(BigInt::from(min_scaled), BigInt::from(dm)),
        argmin_n: argmin,
        max_g: BigRational::new(BigInt::from(max_scaled), BigInt::from(dm)),
        argmax_n: argmax,
        lambda,
        empirical_envelope: envelope,
    })
}

/// Renders a rational as `p/q` text (always with the denominator).
pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
