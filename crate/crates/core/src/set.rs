use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported cardinality; masks are 64-bit.
pub const MAX_ELEMENTS: usize = 63;

/// A finite set of distinct positive integers, stored in increasing order.
///
/// The element sum is cached and checked for overflow at construction, so
/// every subset sum of an `IntSet` fits in a `u64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct IntSet {
    elements: Vec<u64>,
    total: u64,
}

impl IntSet {
    /// Builds a set from elements in any order. Duplicates, zeros and the
    /// empty list are rejected.
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        Self::from_sorted(elements)
    }

    /// Builds a set from an already strictly increasing list.
    pub fn from_sorted(elements: Vec<u64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSet("a set needs at least one element".into()));
        }
        if elements.len() > MAX_ELEMENTS {
            return Err(Error::InvalidSet(format!(
                "{} elements given, at most {MAX_ELEMENTS} supported",
                elements.len()
            )));
        }
        if elements[0] == 0 {
            return Err(Error::InvalidSet("elements must be positive".into()));
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet(if w[0] == w[1] {
                format!("duplicate element {}", w[0])
            } else {
                format!("elements not increasing: {} then {}", w[0], w[1])
            }));
        }
        let total = elements
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_add(x))
            .ok_or_else(|| Error::Overflow("element sum exceeds 64 bits".into()))?;
        Ok(Self { elements, total })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false; sets are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn largest(&self) -> u64 {
        *self.elements.last().expect("nonempty")
    }

    pub fn smallest(&self) -> u64 {
        self.elements[0]
    }

    /// The mask selecting every element.
    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask::full(self.len())
    }

    /// Checks that `mask` only selects indices below `n`.
    pub fn check_mask(&self, mask: SubsetMask) -> Result<()> {
        if mask.bits() >> self.len() != 0 {
            return Err(Error::InvalidMask {
                bits: mask.bits(),
                n: self.len(),
            });
        }
        Ok(())
    }

    /// Sum of the selected elements; 0 for the empty mask.
    pub fn subset_sum(&self, mask: SubsetMask) -> Result<u64> {
        self.check_mask(mask)?;
        Ok(self.sum_unchecked(mask.bits()))
    }

    pub(crate) fn sum_unchecked(&self, bits: u64) -> u64 {
        mask_sum(&self.elements, bits)
    }

    /// The selected elements, increasing.
    pub fn subset(&self, mask: SubsetMask) -> Result<Vec<u64>> {
        self.check_mask(mask)?;
        Ok(mask.indices().map(|i| self.elements[i]).collect())
    }

    /// Multiplies every element by `c`.
    pub fn scale(&self, c: u64) -> Result<IntSet> {
        if c == 0 {
            return Err(Error::InvalidArgument(
                "scale factor must be at least 1".into(),
            ));
        }
        let elements = self
            .elements
            .iter()
            .map(|&x| x.checked_mul(c))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Overflow(format!("scaling by {c}")))?;
        IntSet::from_sorted(elements)
    }

    pub fn gcd(&self) -> u64 {
        self.elements.iter().fold(0, |g, &x| g.gcd(&x))
    }

    /// Divides out the element gcd, returning the primitive set and the factor.
    pub fn normalized(&self) -> (IntSet, u64) {
        let g = self.gcd();
        if g == 1 {
            return (self.clone(), 1);
        }
        let elements = self.elements.iter().map(|&x| x / g).collect();
        (
            IntSet::from_sorted(elements).expect("dividing by the gcd keeps order"),
            g,
        )
    }

    /// The set with `x` added.
    pub fn with_element(&self, x: u64) -> Result<IntSet> {
        let mut elements = self.elements.clone();
        elements.push(x);
        IntSet::new(elements)
    }
}

pub(crate) fn mask_sum(elements: &[u64], mut bits: u64) -> u64 {
    let mut s = 0;
    while bits != 0 {
        s += elements[bits.trailing_zeros() as usize];
        bits &= bits - 1;
    }
    s
}

impl TryFrom<Vec<u64>> for IntSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        IntSet::from_sorted(v)
    }
}

impl From<IntSet> for Vec<u64> {
    fn from(s: IntSet) -> Self {
        s.elements
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Parses a comma-separated literal such as `1,5,7,11`; braces and spaces
/// are tolerated.
impl FromStr for IntSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let elements = parse_list::<u64>(s)?;
        IntSet::new(elements)
    }
}

pub(crate) fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    let body = s.trim().trim_start_matches('{').trim_end_matches('}');
    body.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<T>()
                .map_err(|_| Error::InvalidSet(format!("cannot parse {tok:?} as an integer")))
        })
        .collect()
}

/// Selects a subset of an `IntSet` by element index (bit `i` = `a_{i+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn new(bits: u64) -> Self {
        SubsetMask(bits)
    }

    pub fn full(n: usize) -> Self {
        SubsetMask(low_bits(n))
    }

    /// Mask from zero-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        SubsetMask(indices.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn popcount(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    /// Complement relative to a set of `n` elements.
    pub fn complement(self, n: usize) -> Self {
        SubsetMask(!self.0 & low_bits(n))
    }

    /// Size of the symmetric difference.
    pub fn distance(self, other: SubsetMask) -> usize {
        (self.0 ^ other.0).count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
