//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the scope it covered. Everything here is pinned — tolerances,
//! parameter grids, and expected values — and runs on exact arithmetic or
//! certified enclosures.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};

use driftlab::ball::Precision;
use driftlab::counting::{
    brute_count, dp_count, g_exact_with, gelfond_exponent, scan, DpCounter, Quintuple, Scanner,
};
use driftlab::drift_div_q::{
    check_block_vanishing, closed_form_g, witness_negative, witness_positive,
};
use driftlab::drift_div_qm1::{certify_oscillation, check_term_distinctness, e_exact, profile};
use driftlab::unity::count_via_filter;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Quintuples with `m = q` for a list of `(q, d)` pairs, all residues.
fn all_residues(pairs: &[(u64, u64)]) -> Vec<Quintuple> {
    let mut out = Vec::new();
    for &(q, d) in pairs {
        for a in 0..d {
            for j in 0..q {
                out.push(Quintuple::new(q, d, q, a, j).unwrap());
            }
        }
    }
    out
}

const DIV_Q_PAIRS: [(u64, u64); 8] = [
    (2, 2),
    (4, 2),
    (4, 4),
    (6, 2),
    (6, 3),
    (10, 2),
    (10, 5),
    (10, 10),
];

#[test]
fn acceptance_01_oracle_equivalence() {
    let mut quintuples = 0u64;
    let mut points = 0u64;
    for q in 2..=5u64 {
        for d in 1..=4u64 {
            for m in 1..=5u64 {
                for a in 0..d {
                    for j in 0..m {
                        let p = Quintuple::new(q, d, m, a, j).unwrap();
                        let mut counter = DpCounter::new(p);
                        let mut scanner = Scanner::new(p);
                        for n in 1..=2000u64 {
                            let (nn, scaled) = scanner.next().unwrap();
                            assert_eq!(nn, n);
                            let brute = ((scaled + i128::from(n)) / i128::from(p.dm())) as u64;
                            let dp = counter.count(&big(n));
                            assert_eq!(
                                dp,
                                big(brute),
                                "dp ≠ brute at q={q} d={d} m={m} a={a} j={j} N={n}"
                            );
                            points += 1;
                        }
                        quintuples += 1;
                    }
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 1 PASS: dp_count = brute_count on {quintuples} quintuples × N ≤ 2000 ({points} points)"
    );
}

#[test]
fn acceptance_02_filter_equivalence() {
    // zero rounding failures allowed at fixed 128 bits
    let prec = Precision::fixed(128);
    let mut checks = 0u64;
    for q in 2..=5u64 {
        for d in 1..=4u64 {
            for m in 1..=5u64 {
                for a in 0..d {
                    for j in 0..m {
                        let p = Quintuple::new(q, d, m, a, j).unwrap();
                        let mut counter = DpCounter::new(p);
                        for k in 1..=6u32 {
                            let filtered = count_via_filter(&p, k, prec)
                                .expect("no rounding failure at 128 bits");
                            let dp = counter.count(&big(q.pow(k)));
                            assert_eq!(
                                filtered, dp,
                                "filter ≠ dp at q={q} d={d} m={m} a={a} j={j} k={k}"
                            );
                            checks += 1;
                        }
                    }
                }
            }
        }
    }
    println!("ACCEPTANCE 2 PASS: count_via_filter = dp_count at {checks} points, 128-bit, zero rounding failures");
}

#[test]
fn acceptance_03_closed_form_equivalence() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260809);
    let mut exact_points = 0u64;
    let mut random_points = 0u64;
    for p in all_residues(&DIV_Q_PAIRS) {
        let mut counter = DpCounter::new(p);
        for n in 0..=10_000u64 {
            let n = big(n);
            let cf = closed_form_g(&p, &n).unwrap();
            let oracle = g_exact_with(&mut counter, &n);
            assert_eq!(cf.g, oracle, "closed form ≠ oracle at {p:?} N={n}");
            exact_points += 1;
        }
    }
    // 10³ random N ≤ 10¹², spread across the configuration list
    let configs = all_residues(&DIV_Q_PAIRS);
    for i in 0..1000u64 {
        let p = configs[(i as usize) % configs.len()];
        let mut counter = DpCounter::new(p);
        let n: u64 = rng.gen_range(10_000..=1_000_000_000_000u64);
        let n = big(n);
        let cf = closed_form_g(&p, &n).unwrap();
        let oracle = g_exact_with(&mut counter, &n);
        assert_eq!(cf.g, oracle, "closed form ≠ oracle at {p:?} N={n}");
        random_points += 1;
    }
    println!(
        "ACCEPTANCE 3 PASS: closed_form_g = g_exact at {exact_points} exhaustive + {random_points} random points"
    );
}

#[test]
fn acceptance_04_block_vanishing() {
    let mut checks = 0u64;
    for &(q, d) in &DIV_Q_PAIRS {
        for a in 0..d {
            let p = Quintuple::new(q, d, q, a, 0).unwrap();
            for j_prime in 0..q {
                for r in 2..=4u32 {
                    assert!(
                        check_block_vanishing(&p, j_prime, r).unwrap(),
                        "D_{{{j_prime}}}({q}^{r}) ≠ 0 at q={q} d={d} a={a}"
                    );
                    checks += 1;
                }
            }
        }
    }
    println!("ACCEPTANCE 4 PASS: block vanishing D_j'(q^r) = 0 on {checks} cases (r ≤ 4)");
}

#[test]
fn acceptance_05_div_q_oscillation_bounded() {
    let two = rat(2, 1);
    let mut scans = 0u64;
    for p in all_residues(&DIV_Q_PAIRS) {
        let report = scan(&p, 100_000, 10_000_000, Precision::default()).unwrap();
        assert!(
            report.min_g < BigRational::zero(),
            "no negative g in scan of {p:?}"
        );
        assert!(
            report.max_g > BigRational::zero(),
            "no positive g in scan of {p:?}"
        );
        assert!(report.min_g.abs() <= two && report.max_g.abs() <= two,
            "|g| exceeds 2 in scan of {p:?}");
        // boundedness in the strong sense: finitely many values, ≤ q³
        let distinct: std::collections::HashSet<i128> =
            Scanner::new(p).take(100_000).map(|(_, s)| s).collect();
        assert!(
            distinct.len() as u64 <= p.q().pow(3),
            "more than q³ distinct g values in scan of {p:?}"
        );
        scans += 1;
    }
    println!(
        "ACCEPTANCE 5 PASS: both signs, max|g| ≤ 2, and ≤ q³ distinct values in {scans} scans to N = 10⁵ (d | q)"
    );
}

#[test]
fn acceptance_06_newman_sanity() {
    // (q,a,d,j,m) = (2,0,3,0,2): Moser's observation, Newman's theorem
    let p = Quintuple::new(2, 3, 2, 0, 0).unwrap();
    let report = scan(&p, 100_000, 10_000_000, Precision::default()).unwrap();
    assert!(report.min_g > BigRational::zero(), "g must stay positive");
    assert_eq!(report.sign_changes, 0);
    println!("ACCEPTANCE 6 PASS: g(N) > 0 for all 1 ≤ N ≤ 10⁵ on (2,0,3,0,2)");
}

/// All `(q, d)` with `d | q−1`, `d ≥ 2`, `q ≤ bound`.
fn div_qm1_pairs(bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for q in 3..=bound {
        for d in 2..q {
            if (q - 1) % d == 0 {
                out.push((q, d));
            }
        }
    }
    out
}

#[test]
fn acceptance_07_eq7_exactness() {
    let prec = Precision::fixed(128);
    let mut checks = 0u64;
    for (q, d) in div_qm1_pairs(7) {
        for a in 0..d {
            for j in 0..q {
                let p = Quintuple::new(q, d, q, a, j).unwrap();
                let mut counter = DpCounter::new(p);
                for k in 1..=8u32 {
                    let dev = e_exact(&p, k, prec).expect("residual below 1/4 at 128 bits");
                    let dp = counter.count(&big(q.pow(k)));
                    assert_eq!(
                        dev.count, dp,
                        "Eq.(7) count ≠ dp at q={q} d={d} a={a} j={j} k={k}"
                    );
                    checks += 1;
                }
            }
        }
    }
    println!("ACCEPTANCE 7 PASS: roots-of-unity E = dp_count at {checks} points (q ≤ 7, k ≤ 8)");
}

#[test]
fn acceptance_08_profile_golden_values() {
    let p = Quintuple::new(3, 2, 3, 0, 0).unwrap();
    let prof = profile(&p, Precision::default()).unwrap();
    // R = 2 with interval width below 10⁻²⁰
    let two = rat(2, 1);
    assert!(prof.r.lower() <= two && two <= prof.r.upper());
    let width = prof.r.radius() * rat(2, 1);
    assert!(
        width < BigRational::new(BigInt::one(), BigInt::from(10u8).pow(20)),
        "R interval too wide: {width}"
    );
    assert_eq!(prof.h, 2);
    assert_eq!(prof.m_period, 6);
    assert_eq!((prof.k1, prof.k2), (3, 0));
    let table = [2i64, 1, -1, -2, -1, 1];
    for (k, expect) in table.iter().enumerate() {
        let c = &prof.cprime[k];
        let e = rat(*expect, 1);
        assert!(
            c.re.lower() <= e && e <= c.re.upper(),
            "c'({k}) must enclose {e}"
        );
        assert!(c.im.contains_zero());
    }
    let d1 = e_exact(&p, 1, Precision::default()).unwrap();
    let d2 = e_exact(&p, 2, Precision::default()).unwrap();
    assert_eq!(d1.deviation, rat(1, 2));
    assert_eq!(d2.deviation, rat(-1, 2));
    println!("ACCEPTANCE 8 PASS: (3,2,0,0) profile R=2, h=2, M=6, c'=[2,1,-1,-2,-1,1], k1=3, k2=0, deviations ±1/2");
}

#[test]
fn acceptance_09_oscillation_certificates() {
    let pairs: [(u64, u64); 9] = [
        (3, 2),
        (4, 3),
        (5, 2),
        (5, 4),
        (7, 2),
        (7, 3),
        (7, 6),
        (10, 3),
        (10, 9),
    ];
    let mut certs = 0u64;
    for &(q, d) in &pairs {
        // a = j = 0 plus two nonzero (a, j) choices
        let choices = [(0u64, 0u64), (1, 1), (d - 1, q - 1)];
        for &(a, j) in &choices {
            let p = Quintuple::new(q, d, q, a, j).unwrap();
            let cert = certify_oscillation(&p, 24, Precision::default())
                .unwrap_or_else(|e| panic!("certificate failed for q={q} d={d} a={a} j={j}: {e}"));
            // every verified point within dp budget was cross-checked
            // (the library checks all k; re-verify the budgeted claim here)
            let mut counter = DpCounter::new(p);
            for v in &cert.verified {
                assert!(v.dp_checked);
                if big(q).pow(v.k) <= big(10_000_000) {
                    assert_eq!(counter.count(&big(q.pow(v.k))), v.count);
                }
                // sign claims beyond the dominance threshold
                if u64::from(v.k) >= u64::from(cert.k_star) {
                    if v.residue == cert.k1 {
                        assert_eq!(v.sign, -1, "q={q} d={d} a={a} j={j} k={}", v.k);
                    }
                    if v.residue == cert.k2 {
                        assert_eq!(v.sign, 1, "q={q} d={d} a={a} j={j} k={}", v.k);
                    }
                }
            }
            assert_eq!(cert.verified.len(), 24);
            certs += 1;
        }
    }
    println!(
        "ACCEPTANCE 9 PASS: {certs} oscillation certificates verified (k ≤ 24, dp cross-checks, zero contradictions)"
    );
}

#[test]
fn acceptance_10_structural_properties() {
    // pairwise distinctness for q ≤ 20 — refined to what the injectivity
    // argument proves: ω ≠ 1 values pairwise distinct and never 0 or 1;
    // the (ω = 1, ε ≠ 1) class collapses to the single value 1
    let mut distinct_cases = 0u64;
    for (q, d) in div_qm1_pairs(20) {
        let p = Quintuple::new(q, d, q, 0, 0).unwrap();
        let report = check_term_distinctness(&p, Precision::default())
            .unwrap_or_else(|e| panic!("distinctness failed for q={q} d={d}: {e}"));
        assert_eq!(report.nonzero_terms, (q * (d - 1)) as usize);
        assert_eq!(report.value_one_class, (d - 1) as usize);
        assert_eq!(
            report.distinct_values,
            ((q - 1) * (d - 1) + 1) as usize,
            "q={q} d={d}"
        );
        distinct_cases += 1;
    }

    // R > 1 for all q ≤ 50
    let mut r_cases = 0u64;
    for (q, d) in div_qm1_pairs(50) {
        let p = Quintuple::new(q, d, q, 0, 0).unwrap();
        let prof = profile(&p, Precision::default())
            .unwrap_or_else(|e| panic!("profile failed for q={q} d={d}: {e}"));
        assert!(prof.r.gt_rational(&BigRational::one()), "R ≤ 1 at q={q} d={d}");
        r_cases += 1;
    }

    // c′ realness and zero-sum at 128 bits with width < 2⁻¹¹²
    let width_cap = BigRational::new(BigInt::one(), BigInt::one() << 112);
    let mut cprime_cases = 0u64;
    for (q, d) in div_qm1_pairs(20) {
        let p = Quintuple::new(q, d, q, 0, 0).unwrap();
        let prof = profile(&p, Precision::fixed(128)).unwrap();
        let mut total_re = driftlab::ball::Ball::zero(prof.bits);
        let mut total_im = driftlab::ball::Ball::zero(prof.bits);
        for c in &prof.cprime {
            assert!(c.im.contains_zero(), "Im c' excludes 0 at q={q} d={d}");
            total_re = total_re.add(&c.re);
            total_im = total_im.add(&c.im);
        }
        assert!(total_re.contains_zero() && total_im.contains_zero());
        let width = total_re.radius() * rat(2, 1);
        assert!(width < width_cap, "zero-sum width {width} too wide at q={q} d={d}");
        cprime_cases += 1;
    }
    println!(
        "ACCEPTANCE 10 PASS: distinctness (refined, {distinct_cases} cases q ≤ 20), R > 1 ({r_cases} cases q ≤ 50), c' real + zero-sum < 2⁻¹¹² ({cprime_cases} cases)"
    );
}

#[test]
fn acceptance_11_lambda_evaluation() {
    // independent 40-digit reference for λ(2,2), frozen from a separate
    // high-precision system; the first 20+ digits must agree
    let reference = BigRational::new(
        "9428883257909029931609030924628660653931"
            .parse::<BigInt>()
            .unwrap(),
        BigInt::from(10u8).pow(40),
    );
    let lambda = gelfond_exponent(2, 2, Precision::default()).unwrap();
    let err = (lambda.midpoint() - &reference).abs();
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u8).pow(21));
    assert!(err < tol, "λ(2,2) differs from reference by {err}");
    assert!(lambda.lt_rational(&BigRational::one()));

    // second, algebraically independent route:
    // λ(2,2) = ln(2√2 / √(2−√2)) / (2 ln 2), via square roots only
    {
        use driftlab::ball::{ln, Ball};
        let bits = 192;
        let sqrt2 = Ball::exact_int(2, bits).sqrt().unwrap();
        let num = sqrt2.mul_int(2);
        let den = Ball::exact_int(2, bits).sub(&sqrt2).sqrt().unwrap();
        let ratio = num.div(&den).unwrap();
        let alt = ln(&ratio).unwrap().div(&ln(&Ball::exact_int(2, bits)).unwrap().mul_int(2)).unwrap();
        let diff = (alt.midpoint() - lambda.midpoint()).abs();
        assert!(diff < BigRational::new(BigInt::one(), BigInt::one() << 100));
    }

    // envelope check: the Newman scan's empirical envelope stays below λ
    let p = Quintuple::new(2, 3, 2, 0, 0).unwrap();
    let report = scan(&p, 100_000, 10_000_000, Precision::default()).unwrap();
    let envelope = report.empirical_envelope.expect("nonzero g values exist");
    let lambda_f = lambda.mid_f64();
    assert!(
        envelope <= lambda_f,
        "envelope {envelope} exceeds λ(2,2) = {lambda_f}"
    );
    println!(
        "ACCEPTANCE 11 PASS: λ(2,2) matches reference to 20+ digits, λ < 1, envelope {envelope:.4} ≤ λ = {lambda_f:.4}"
    );
}

#[test]
fn witness_families_for_div_q_pairs() {
    // supporting check behind criteria 3–5: witness machinery stays sound
    // across the d | q acceptance pairs
    for &(q, d) in &DIV_Q_PAIRS {
        for (a, j) in [(0u64, 0u64), (d - 1, q - 1)] {
            let p = Quintuple::new(q, d, q, a, j).unwrap();
            let neg = witness_negative(&p, 1_000_000).unwrap();
            let pos = witness_positive(&p, 1_000_000).unwrap();
            assert!(neg.predicted_g < BigRational::zero());
            assert!(pos.predicted_g > BigRational::zero());
            assert!(neg.members.len() >= 5 && pos.members.len() >= 5);
        }
    }
    println!("SUPPORT PASS: witness families validated on all d | q acceptance pairs");
}

#[test]
fn brute_oracle_agrees_with_dp_on_filter_sizes() {
    // belt-and-braces: the N = q^k values used by criteria 2 and 7 are also
    // confirmed against the linear-scan oracle where affordable
    for (q, d) in div_qm1_pairs(5) {
        for a in 0..d {
            let p = Quintuple::new(q, d, q, a, 0).unwrap();
            for k in 1..=6u32 {
                let n = big(q.pow(k));
                if n <= big(100_000) {
                    let b = brute_count(&p, &n, 1_000_000).unwrap();
                    assert_eq!(big(b), dp_count(&p, &n));
                }
            }
        }
    }
    println!("SUPPORT PASS: brute oracle agrees with dp at filter sizes");
}
