//! Exact subset-divisor combinatorics.
//!
//! A subset `B` of a set `A` of positive integers is a *divisor* of `A` when
//! `sum(B)` divides `sum(A)`. This crate counts divisors (in total and by
//! subset size), classifies separations `{B, A∖B}`, builds the extremal
//! constructions, runs bounded exhaustive searches for the maximum number of
//! divisors, and evaluates the zero-sum analogue that counts subsets with
//! nonnegative sum.

pub mod constructions;
pub mod divisor;
pub mod document;
pub mod enumeration;
pub mod error;
pub mod repro;
pub mod search;
pub mod set;
pub mod zero_sum;

pub use constructions::{
    construct_anti_pencil, construct_k_anti_pencil, construct_prime_set, family, FamilyId,
    FamilyKind,
};
pub use divisor::{
    census, classify_separation, divisor_report, halving_sets, is_anti_pencil, is_divisor,
    is_k_anti_pencil, is_prime_set, DivisorReport, SeparationCensus, SeparationClass,
};
pub use enumeration::{count_divisors_mitm, count_halving_mitm, divisors_of, stream_sums};
pub use error::{Error, Result};
pub use search::{ExecConfig, Objective};
pub use set::{IntSet, SubsetMask};
pub use zero_sum::{SignedSet, ZeroSumSet};

/// Largest set for which every subset is materialized.
pub const DEFAULT_NAIVE_LIMIT: usize = 24;

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}
