//! Divisors, halving sets and separations of an [`IntSet`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumeration::{KSubsets, SumStream};
use crate::error::{Error, Result};
use crate::set::{IntSet, SubsetMask};
use crate::DEFAULT_NAIVE_LIMIT;

/// True iff the subset is nonempty and its sum divides the set's sum.
pub fn is_divisor(set: &IntSet, mask: SubsetMask) -> Result<bool> {
    let s = set.subset_sum(mask)?;
    Ok(divides(s, set.total()))
}

#[inline]
pub(crate) fn divides(part: u64, total: u64) -> bool {
    part != 0 && total.is_multiple_of(part)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparationClass {
    /// Neither side divides.
    Barren,
    /// Exactly one side divides.
    Neutral,
    /// Both sides divide, i.e. both are halving sets.
    Abundant,
}

impl SeparationClass {
    fn of(b: bool, c: bool) -> Self {
        match (b, c) {
            (true, true) => SeparationClass::Abundant,
            (false, false) => SeparationClass::Barren,
            _ => SeparationClass::Neutral,
        }
    }
}

/// Classifies the separation `{mask, complement}`.
pub fn classify_separation(set: &IntSet, mask: SubsetMask) -> Result<SeparationClass> {
    let s = set.subset_sum(mask)?;
    let t = set.total();
    Ok(SeparationClass::of(divides(s, t), divides(t - s, t)))
}

/// Counts of unordered separations `{B, A∖B}` by class. `{∅, A}` is counted
/// (as neutral) in the general census.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationCensus {
    pub barren: u64,
    pub neutral: u64,
    pub abundant: u64,
    pub strong: bool,
}

impl SeparationCensus {
    pub fn total(&self) -> u64 {
        self.barren + self.neutral + self.abundant
    }

    /// Divisors accounted for by the counted separations.
    pub fn divisor_contribution(&self) -> u64 {
        self.neutral + 2 * self.abundant
    }

    fn record(&mut self, class: SeparationClass) {
        match class {
            SeparationClass::Barren => self.barren += 1,
            SeparationClass::Neutral => self.neutral += 1,
            SeparationClass::Abundant => self.abundant += 1,
        }
    }
}

fn check_naive(set: &IntSet, limit: usize) -> Result<()> {
    if set.len() > limit {
        return Err(Error::Capacity {
            n: set.len(),
            limit,
            hint: "use enumeration::count_divisors_mitm for counts without lists",
        });
    }
    Ok(())
}

/// Separation census over all separations, or only `|B| = |C|` when `strong`.
pub fn census(set: &IntSet, strong: bool) -> Result<SeparationCensus> {
    check_naive(set, DEFAULT_NAIVE_LIMIT)?;
    let n = set.len();
    if strong && !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "strong separations need an even number of elements, got {n}"
        )));
    }
    let t = set.total();
    let mut out = SeparationCensus {
        strong,
        ..Default::default()
    };
    // Each unordered pair is visited once, through the side missing a_n.
    let rest = &set.elements()[..n - 1];
    if strong {
        for m in KSubsets::new(n - 1, n / 2) {
            let s = crate::set::mask_sum(rest, m);
            out.record(SeparationClass::of(divides(s, t), divides(t - s, t)));
        }
    } else {
        for (_, s) in SumStream::new(rest) {
            out.record(SeparationClass::of(divides(s, t), divides(t - s, t)));
        }
    }
    Ok(out)
}

/// Every divisor of a set plus derived counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorReport {
    pub set: IntSet,
    /// Ascending by mask bits.
    pub divisors: Vec<SubsetMask>,
    pub d: u64,
    pub d_by_k: BTreeMap<usize, u64>,
    pub census: SeparationCensus,
    /// Strong census, for even `n`.
    pub strong_census: Option<SeparationCensus>,
}

impl DivisorReport {
    /// `d_k(A)`; zero for `k = 0` and `k > n`.
    pub fn d_k(&self, k: usize) -> u64 {
        self.d_by_k.get(&k).copied().unwrap_or(0)
    }
}

/// Exact divisor list with the default enumeration limit.
pub fn divisor_report(set: &IntSet) -> Result<DivisorReport> {
    divisor_report_with_limit(set, DEFAULT_NAIVE_LIMIT)
}

pub fn divisor_report_with_limit(set: &IntSet, limit: usize) -> Result<DivisorReport> {
    check_naive(set, limit)?;
    let n = set.len();
    let t = set.total();
    let mut divisors = Vec::new();
    let mut by_k = vec![0u64; n + 1];
    for (mask, s) in SumStream::new(set.elements()) {
        if divides(s, t) {
            divisors.push(mask);
            by_k[mask.popcount()] += 1;
        }
    }
    divisors.sort_unstable();
    Ok(DivisorReport {
        set: set.clone(),
        d: divisors.len() as u64,
        divisors,
        d_by_k: by_k.into_iter().enumerate().skip(1).collect(),
        census: census(set, false)?,
        strong_census: if n.is_multiple_of(2) {
            Some(census(set, true)?)
        } else {
            None
        },
    })
}

/// Masks of all subsets summing to exactly half the total.
pub fn halving_sets(set: &IntSet) -> Result<Vec<SubsetMask>> {
    check_naive(set, DEFAULT_NAIVE_LIMIT)?;
    if !set.total().is_multiple_of(2) {
        return Ok(Vec::new());
    }
    let half = set.total() / 2;
    let mut out: Vec<SubsetMask> = SumStream::new(set.elements())
        .filter(|&(_, s)| s == half)
        .map(|(m, _)| m)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// True iff the divisors are exactly the nonempty subsets avoiding the
/// largest element, together with the whole set.
pub fn is_anti_pencil(set: &IntSet) -> Result<bool> {
    check_naive(set, DEFAULT_NAIVE_LIMIT)?;
    let n = set.len();
    let full = set.full_mask().bits();
    let top = 1u64 << (n - 1);
    let t = set.total();
    Ok(SumStream::new(set.elements()).all(|(m, s)| {
        let m = m.bits();
        let expected = m == full || (m != 0 && m & top == 0);
        divides(s, t) == expected
    }))
}

/// True iff the `k`-subset divisors are exactly the `k`-subsets avoiding the
/// largest element.
pub fn is_k_anti_pencil(set: &IntSet, k: usize) -> Result<bool> {
    check_naive(set, DEFAULT_NAIVE_LIMIT)?;
    let n = set.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k must lie in 1..={n}, got {k}"
        )));
    }
    let top = 1u64 << (n - 1);
    let t = set.total();
    Ok(KSubsets::new(n, k).all(|m| {
        let s = crate::set::mask_sum(set.elements(), m);
        divides(s, t) == (m & top == 0)
    }))
}

/// True iff the only divisor is the set itself.
pub fn is_prime_set(set: &IntSet) -> Result<bool> {
    check_naive(set, DEFAULT_NAIVE_LIMIT)?;
    let full = set.full_mask().bits();
    let t = set.total();
    Ok(SumStream::new(set.elements()).all(|(m, s)| m.bits() == full || !divides(s, t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> IntSet {
        IntSet::new(xs.to_vec()).unwrap()
    }

    fn mask(ix: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(ix.iter().copied())
    }

    #[test]
    fn divisor_predicate() {
        let a = set(&[1, 5, 7, 11]);
        assert!(is_divisor(&a, mask(&[0, 1])).unwrap());
        assert!(!is_divisor(&a, SubsetMask::EMPTY).unwrap());
        assert!(is_divisor(&a, a.full_mask()).unwrap());
        assert!(is_divisor(&a, SubsetMask::new(1 << 9)).is_err());
    }

    #[test]
    fn reports_match_known_counts() {
        assert_eq!(divisor_report(&set(&[1, 5, 7, 11])).unwrap().d_k(2), 4);
        assert_eq!(divisor_report(&set(&[1, 2, 3])).unwrap().d, 5);
        assert_eq!(divisor_report(&set(&[1, 2, 3, 6])).unwrap().d, 8);
        assert_eq!(divisor_report(&set(&[1, 11, 19, 29])).unwrap().d_k(2), 4);
    }

    #[test]
    fn report_shape() {
        let r = divisor_report(&set(&[1, 5, 7, 11])).unwrap();
        assert!(r.divisors.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(r.divisors.last().copied(), Some(SubsetMask::full(4)));
        assert!(!r.divisors.contains(&SubsetMask::EMPTY));
        assert_eq!(r.d, r.d_by_k.values().sum::<u64>());
        assert_eq!(r.d, r.census.divisor_contribution());
        assert_eq!(r.d_k(0), 0);
        assert_eq!(r.d_k(5), 0);
        let strong = r.strong_census.unwrap();
        assert_eq!(r.d_k(2), strong.divisor_contribution());
    }

    #[test]
    fn report_limit() {
        let big = IntSet::new((1..=25).collect()).unwrap();
        assert!(matches!(divisor_report(&big), Err(Error::Capacity { .. })));
        assert!(divisor_report_with_limit(&set(&[1, 2, 3]), 2).is_err());
    }

    #[test]
    fn halving_examples() {
        assert_eq!(
            halving_sets(&set(&[1, 5, 7, 11])).unwrap(),
            vec![mask(&[1, 2]), mask(&[0, 3])]
        );
        // total 6: {3} and {1,2}
        assert_eq!(
            halving_sets(&set(&[1, 2, 3])).unwrap(),
            vec![mask(&[0, 1]), mask(&[2])]
        );
        assert!(halving_sets(&set(&[1, 2, 4, 8])).unwrap().is_empty());
    }

    #[test]
    fn separation_classes() {
        let a = set(&[1, 5, 7, 11]);
        assert_eq!(
            classify_separation(&a, mask(&[0, 3])).unwrap(),
            SeparationClass::Abundant
        );
        assert_eq!(
            classify_separation(&a, mask(&[1])).unwrap(),
            SeparationClass::Barren
        );
        assert_eq!(
            classify_separation(&a, SubsetMask::EMPTY).unwrap(),
            SeparationClass::Neutral
        );
    }

    #[test]
    fn census_examples() {
        let a = set(&[1, 5, 7, 11]);
        let strong = census(&a, true).unwrap();
        assert_eq!(strong.abundant, 1);
        assert_eq!(strong.total(), 3);
        assert_eq!(census(&set(&[1, 2, 4, 8]), false).unwrap().abundant, 0);
        assert_eq!(census(&a, false).unwrap().total(), 8);
        assert!(matches!(
            census(&set(&[1, 2, 3]), true),
            Err(Error::InvalidArgument(_))
        ));
        // n = 1: only {∅, A}
        let one = census(&set(&[7]), false).unwrap();
        assert_eq!((one.neutral, one.total()), (1, 1));
    }

    #[test]
    fn anti_pencil_predicate() {
        assert!(is_anti_pencil(&set(&[1, 2, 3, 54])).unwrap());
        assert!(!is_anti_pencil(&set(&[1, 2, 3, 6])).unwrap());
        assert!(is_anti_pencil(&set(&[1, 2])).unwrap());
        assert!(!is_anti_pencil(&set(&[2, 3])).unwrap());
    }

    #[test]
    fn k_anti_pencil_predicate() {
        assert!(is_k_anti_pencil(&set(&[1, 2, 3, 4, 5, 27705]), 3).unwrap());
        assert!(!is_k_anti_pencil(&set(&[1, 5, 7, 11]), 2).unwrap());
        assert!(!is_k_anti_pencil(&set(&[1, 2, 3]), 3).unwrap());
        assert!(is_k_anti_pencil(&set(&[1, 2]), 0).is_err());
        assert!(is_k_anti_pencil(&set(&[1, 2]), 3).is_err());
    }

    #[test]
    fn prime_set_predicate() {
        assert!(is_prime_set(&set(&[2, 3, 6])).unwrap());
        assert!(!is_prime_set(&set(&[1, 40, 41])).unwrap());
        assert!(!is_prime_set(&set(&[1, 2, 3])).unwrap());
        assert!(is_prime_set(&set(&[5])).unwrap());
    }

    #[test]
    fn scaling_preserves_divisor_structure() {
        let a = set(&[1, 2, 3]);
        let b = a.scale(2).unwrap();
        assert_eq!(b, set(&[2, 4, 6]));
        let (ra, rb) = (divisor_report(&a).unwrap(), divisor_report(&b).unwrap());
        assert_eq!(rb.d, 5);
        assert_eq!(ra.divisors, rb.divisors);
        assert_eq!(ra.census, rb.census);
    }
}
