//! Counting kernels that scale past the list-producing API.
//!
//! [`SumStream`] walks all `2^n` subsets in reflected Gray-code order, so each
//! step costs one addition or subtraction. [`count_divisors_mitm`] and
//! [`count_halving_mitm`] split the set into two halves, tabulate the subset
//! sums of each half stratified by cardinality, and pair the tables per
//! target sum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{IntSet, SubsetMask};
use crate::DEFAULT_NAIVE_LIMIT;

/// Largest set accepted by the meet-in-the-middle counters.
pub const MITM_LIMIT: usize = 40;

/// All positive divisors of `total`, ascending. Returns an empty list for 0.
pub fn divisors_of(total: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d <= total / d {
        if total.is_multiple_of(d) {
            small.push(d);
            if d != total / d {
                large.push(total / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Iterator over `(mask, sum)` for every subset of a slice, in Gray-code order
/// starting from the empty set.
#[derive(Clone, Debug)]
pub struct SumStream<'a> {
    elements: &'a [u64],
    step: u64,
    end: u64,
    mask: u64,
    sum: u64,
}

impl<'a> SumStream<'a> {
    pub fn new(elements: &'a [u64]) -> Self {
        assert!(elements.len() < 64, "stream limited to 63 elements");
        SumStream {
            elements,
            step: 0,
            end: 1u64 << elements.len(),
            mask: 0,
            sum: 0,
        }
    }

    pub fn mask(&self) -> SubsetMask {
        SubsetMask::new(self.mask)
    }

    pub fn sum(&self) -> u64 {
        self.sum
    }
}

impl Iterator for SumStream<'_> {
    type Item = (SubsetMask, u64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.step >= self.end {
            return None;
        }
        if self.step > 0 {
            let bit = self.step.trailing_zeros() as usize;
            let flip = 1u64 << bit;
            if self.mask & flip == 0 {
                self.sum += self.elements[bit];
            } else {
                self.sum -= self.elements[bit];
            }
            self.mask ^= flip;
        }
        self.step += 1;
        Some((SubsetMask::new(self.mask), self.sum))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.step) as usize;
        (left, Some(left))
    }
}

/// Visits all `2^n` subsets of `set` in Gray-code order.
pub fn stream_sums<F>(set: &IntSet, mut visitor: F) -> Result<()>
where
    F: FnMut(SubsetMask, u64),
{
    check_limit(
        set.len(),
        DEFAULT_NAIVE_LIMIT,
        "streaming visits every subset",
    )?;
    for (mask, sum) in SumStream::new(set.elements()) {
        visitor(mask, sum);
    }
    Ok(())
}

/// Masks over `n` bits with exactly `k` bits set, in increasing order
/// (Gosper's hack).
#[derive(Clone, Debug)]
pub struct KSubsets {
    next: Option<u64>,
    limit: u64,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n < 64);
        let next = if k > n {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some((1u64 << k) - 1)
        };
        KSubsets {
            next,
            limit: 1u64 << n,
        }
    }
}

impl Iterator for KSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt)
        };
        Some(cur)
    }
}

/// Number of `k`-subsets whose sum divides `total`.
pub(crate) fn k_divisor_count(elements: &[u64], total: u64, k: usize) -> u64 {
    KSubsets::new(elements.len(), k)
        .filter(|&m| {
            let s = crate::set::mask_sum(elements, m);
            s != 0 && total.is_multiple_of(s)
        })
        .count() as u64
}

/// Sorted subset sums of one half of a set with multiplicities split by
/// cardinality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfTable {
    width: usize,
    sums: Vec<u64>,
    counts: Vec<u64>,
}

impl HalfTable {
    pub fn build(elements: &[u64]) -> Self {
        let width = elements.len() + 1;
        let mut raw: Vec<(u64, u8)> = SumStream::new(elements)
            .map(|(m, s)| (s, m.popcount() as u8))
            .collect();
        raw.sort_unstable();
        let mut sums = Vec::new();
        let mut counts = Vec::new();
        for (s, c) in raw {
            if sums.last() != Some(&s) {
                sums.push(s);
                counts.extend(std::iter::repeat_n(0, width));
            }
            let base = counts.len() - width;
            counts[base + c as usize] += 1;
        }
        HalfTable {
            width,
            sums,
            counts,
        }
    }

    /// Number of distinct sums.
    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn sums(&self) -> &[u64] {
        &self.sums
    }

    /// Multiplicities of the `i`-th distinct sum, indexed by cardinality.
    pub fn counts(&self, i: usize) -> &[u64] {
        &self.counts[i * self.width..(i + 1) * self.width]
    }

    /// Total number of subsets tabulated (`2^h`).
    pub fn subsets(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Counts pairs `(x, y)` of a left subset and a right subset with
    /// `sum(x) + sum(y) = target`, by combined cardinality.
    pub fn pair_counts(&self, right: &HalfTable, target: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.width + right.width - 1];
        self.accumulate_pairs(right, target, &mut out);
        out
    }

    fn accumulate_pairs(&self, right: &HalfTable, target: u64, out: &mut [u64]) {
        let mut j = right.sums.len();
        for (i, &s1) in self.sums.iter().enumerate() {
            if s1 > target {
                break;
            }
            let need = target - s1;
            while j > 0 && right.sums[j - 1] > need {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            if right.sums[j - 1] == need {
                let lc = self.counts(i);
                let rc = right.counts(j - 1);
                for (a, &x) in lc.iter().enumerate().filter(|(_, &x)| x != 0) {
                    for (b, &y) in rc.iter().enumerate() {
                        out[a + b] += x * y;
                    }
                }
            }
        }
    }
}

/// Divisor counts produced without listing divisors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorCounts {
    pub d: u64,
    pub d_by_k: BTreeMap<usize, u64>,
}

impl DivisorCounts {
    pub(crate) fn from_strata(by_k: &[u64]) -> Self {
        DivisorCounts {
            d: by_k.iter().sum(),
            d_by_k: by_k.iter().copied().enumerate().skip(1).collect(),
        }
    }

    /// `d_k`; zero for `k = 0` and `k > n`.
    pub fn d_k(&self, k: usize) -> u64 {
        self.d_by_k.get(&k).copied().unwrap_or(0)
    }
}

/// Number of halving subsets, overall and per cardinality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalvingCounts {
    pub count: u64,
    pub by_k: BTreeMap<usize, u64>,
    /// Abundant separations (`count / 2`).
    pub abundant: u64,
    /// Abundant strong separations; present for even `n`.
    pub abundant_strong: Option<u64>,
}

fn split_tables(set: &IntSet) -> (HalfTable, HalfTable) {
    let (left, right) = set.elements().split_at(set.len().div_ceil(2));
    if set.len() >= 24 {
        rayon::join(|| HalfTable::build(left), || HalfTable::build(right))
    } else {
        (HalfTable::build(left), HalfTable::build(right))
    }
}

fn check_limit(n: usize, limit: usize, hint: &'static str) -> Result<()> {
    if n > limit {
        return Err(Error::Capacity { n, limit, hint });
    }
    Ok(())
}

/// `d(A)` and `d_k(A)` for sets of up to [`MITM_LIMIT`] elements.
pub fn count_divisors_mitm(set: &IntSet) -> Result<DivisorCounts> {
    check_limit(
        set.len(),
        MITM_LIMIT,
        "meet-in-the-middle tables would exceed 2^20 rows",
    )?;
    let (left, right) = split_tables(set);
    let mut by_k = vec![0u64; set.len() + 1];
    for t in divisors_of(set.total()) {
        // Targets are at least 1, so the empty subset never pairs.
        debug_assert!(t >= 1);
        left.accumulate_pairs(&right, t, &mut by_k);
    }
    debug_assert_eq!(by_k[0], 0);
    Ok(DivisorCounts::from_strata(&by_k))
}

/// Halving-set counts for sets of up to [`MITM_LIMIT`] elements.
pub fn count_halving_mitm(set: &IntSet) -> Result<HalvingCounts> {
    check_limit(
        set.len(),
        MITM_LIMIT,
        "meet-in-the-middle tables would exceed 2^20 rows",
    )?;
    let n = set.len();
    let mut by_k = vec![0u64; n + 1];
    if set.total().is_multiple_of(2) {
        let (left, right) = split_tables(set);
        left.accumulate_pairs(&right, set.total() / 2, &mut by_k);
    }
    let count = by_k.iter().sum::<u64>();
    Ok(HalvingCounts {
        count,
        abundant: count / 2,
        abundant_strong: n.is_multiple_of(2).then(|| by_k[n / 2] / 2),
        by_k: by_k.into_iter().enumerate().collect(),
    })
}
