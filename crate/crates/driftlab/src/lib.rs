//! # driftlab
//!
//! Exact counting of integers by residue class and digit-sum congruence,
//! and constructive analysis of the error term's drift behaviour.
//!
//! For a base `q ≥ 2` and parameters `(q, a, d, j, m)`, the library counts
//!
//! ```text
//! #{0 ≤ n < N : n ≡ a (mod d), s_q(n) ≡ j (mod q)}  =  N/(dm) + g(N)
//! ```
//!
//! with `s_q` the base-`q` sum-of-digits function, and studies the error
//! term `g(N)` exactly:
//!
//! * [`counting`] — two independent exact counters (linear-scan oracle and
//!   a digit dynamic program good for astronomically large `N`), exact
//!   rational `g(N)`, incremental scans, and the Gelfond exponent `λ` with
//!   a certified enclosure.
//! * [`unity`] — exact roots of unity, the discrete Fourier residue filter,
//!   and root-of-unity counting of digit patterns.
//! * [`drift_div_q`] — the bounded regime `d | q`: a closed form for
//!   `g(N)` and witness families of both signs.
//! * [`drift_div_qm1`] — the unbounded regime `d | q−1`: exact evaluation
//!   of the deviation at `N = q^k`, its roots-of-unity asymptotic profile,
//!   and machine-checkable oscillation certificates.
//! * [`ball`] — the certified fixed-point interval arithmetic backing all
//!   numeric claims.
//! * [`cyclo`] — exact zero-tests for integer combinations of roots of
//!   unity (cyclotomic reduction), used wherever equality must be decided
//!   rather than approximated.
//!
//! Everything on a counting path is exact integer or rational arithmetic;
//! floating point appears only in diagnostics. Numeric comparisons are
//! certified: an enclosure either proves an ordering or precision
//! escalates, and an undecidable comparison is an error, never a silent
//! tie.
//!
//! ```
//! use driftlab::counting::{Quintuple, g_exact, dp_count};
//! use num_bigint::BigUint;
//!
//! let p = Quintuple::new(10, 2, 10, 0, 0).unwrap();
//! assert_eq!(dp_count(&p, &BigUint::from(10u32)), BigUint::from(1u32));
//! assert_eq!(g_exact(&p, &BigUint::from(10u32)).to_string(), "1/2");
//! ```

pub mod ball;
pub mod counting;
pub mod cyclo;
pub mod digits;
pub mod drift_div_q;
pub mod drift_div_qm1;
mod error;
pub mod unity;

pub use error::{Error, Result};

/// Default linear-scan budget: the brute-force oracle refuses larger `N`.
pub const DEFAULT_BRUTE_BUDGET: u64 = 1_000_000;
/// Default scan budget for pointwise `g` scans.
pub const DEFAULT_SCAN_BUDGET: u64 = 10_000_000;
