//! Explicit constructions: anti-pencils and `k`-anti-pencils built from the
//! lcm of a base set's subset sums, prime sets, and the closed-form extremal
//! families.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::enumeration::{KSubsets, SumStream};
use crate::error::{Error, Result};
use crate::set::{mask_sum, IntSet};
use crate::DEFAULT_NAIVE_LIMIT;

fn lcm_of<I: IntoIterator<Item = u64>>(values: I) -> Result<u64> {
    let mut l: u128 = 1;
    for v in values {
        let v = v as u128;
        let g = l.gcd(&v);
        l = (l / g)
            .checked_mul(v)
            .ok_or_else(|| Error::Overflow("lcm of subset sums exceeds 2^128".into()))?;
    }
    u64::try_from(l).map_err(|_| {
        Error::Overflow(format!(
            "lcm of subset sums is {l} (about 2^{}), beyond 64 bits",
            128 - l.leading_zeros()
        ))
    })
}

/// Appends `a = m*l - sum(base)` for the least `m` making `a` exceed every
/// base element.
fn extend_to_multiple(base: &IntSet, l: u64) -> Result<IntSet> {
    let floor = base.total() + base.largest();
    let total = (floor / l + 1).checked_mul(l).ok_or_else(|| {
        Error::Overflow(format!("no multiple of {l} above {floor} fits in 64 bits"))
    })?;
    base.with_element(total - base.total())
}

fn check_base(base: &IntSet) -> Result<()> {
    if base.len() > DEFAULT_NAIVE_LIMIT {
        return Err(Error::Capacity {
            n: base.len(),
            limit: DEFAULT_NAIVE_LIMIT,
            hint: "the lcm recipe enumerates every subset sum",
        });
    }
    if base.len() >= crate::set::MAX_ELEMENTS {
        return Err(Error::InvalidSet("no room for another element".into()));
    }
    Ok(())
}

/// Adds one element so that every nonempty subset of `base` divides the
/// result.
pub fn construct_anti_pencil(base: &IntSet) -> Result<IntSet> {
    check_base(base)?;
    let l = lcm_of(SumStream::new(base.elements()).skip(1).map(|(_, s)| s))?;
    extend_to_multiple(base, l)
}

/// Adds one element so that every `k`-subset of `base` divides the result.
pub fn construct_k_anti_pencil(base: &IntSet, k: usize) -> Result<IntSet> {
    check_base(base)?;
    if k == 0 || k > base.len() {
        return Err(Error::InvalidArgument(format!(
            "k must lie in 1..={}, got {k}",
            base.len()
        )));
    }
    let l = lcm_of(KSubsets::new(base.len(), k).map(|m| mask_sum(base.elements(), m)))?;
    extend_to_multiple(base, l)
}

/// Adds `p - sum(base)` for the least prime `p >= 2*sum(base)`, so the total
/// is prime and no proper subset divides it.
pub fn construct_prime_set(base: &IntSet) -> Result<IntSet> {
    if base.smallest() == 1 {
        return Err(Error::InvalidArgument("base must not contain 1".into()));
    }
    let sigma = base.total();
    let mut p = sigma
        .checked_mul(2)
        .ok_or_else(|| Error::Overflow("twice the base sum exceeds 64 bits".into()))?;
    loop {
        if primal_check::miller_rabin(p) && !base.elements().contains(&(p - sigma)) {
            return base.with_element(p - sigma);
        }
        p = p
            .checked_add(1)
            .ok_or_else(|| Error::Overflow("no prime found below 2^64".into()))?;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `{a, 2a, 3a}`
    #[serde(rename = "triple-1-2-3")]
    Triple123,
    /// `{a, 2a, 3a, 6a}`
    #[serde(rename = "quad-1-2-3-6")]
    Quad1236,
    /// `{a, 5a, 7a, 11a}`
    #[serde(rename = "quad-1-5-7-11")]
    Quad15711,
    /// `{a, 11a, 19a, 29a}`
    #[serde(rename = "quad-1-11-19-29")]
    Quad1111929,
    AntiPencil,
    KAntiPencil,
    PrimeSet,
}

impl FamilyKind {
    pub const CLOSED_FORM: [FamilyKind; 4] = [
        FamilyKind::Triple123,
        FamilyKind::Quad1236,
        FamilyKind::Quad15711,
        FamilyKind::Quad1111929,
    ];

    /// Primitive representative of a closed-form family.
    pub fn pattern(self) -> Option<&'static [u64]> {
        match self {
            FamilyKind::Triple123 => Some(&[1, 2, 3]),
            FamilyKind::Quad1236 => Some(&[1, 2, 3, 6]),
            FamilyKind::Quad15711 => Some(&[1, 5, 7, 11]),
            FamilyKind::Quad1111929 => Some(&[1, 11, 19, 29]),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Triple123 => "triple-1-2-3",
            FamilyKind::Quad1236 => "quad-1-2-3-6",
            FamilyKind::Quad15711 => "quad-1-5-7-11",
            FamilyKind::Quad1111929 => "quad-1-11-19-29",
            FamilyKind::AntiPencil => "anti-pencil",
            FamilyKind::KAntiPencil => "k-anti-pencil",
            FamilyKind::PrimeSet => "prime-set",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            FamilyKind::Triple123,
            FamilyKind::Quad1236,
            FamilyKind::Quad15711,
            FamilyKind::Quad1111929,
            FamilyKind::AntiPencil,
            FamilyKind::KAntiPencil,
            FamilyKind::PrimeSet,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown family {s:?}")))
    }
}

/// A family member: closed-form kinds need only `scale`; constructive kinds
/// also need `base` (and `k` for [`FamilyKind::KAntiPencil`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyId {
    pub kind: FamilyKind,
    pub scale: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<IntSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl FamilyId {
    pub fn closed(kind: FamilyKind, scale: u64) -> Self {
        FamilyId {
            kind,
            scale,
            base: None,
            k: None,
        }
    }
}

/// The family member named by `id`.
pub fn family(id: &FamilyId) -> Result<IntSet> {
    let base = || {
        id.base
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("{} needs a base set", id.kind)))
    };
    let primitive = match id.kind {
        FamilyKind::AntiPencil => construct_anti_pencil(base()?)?,
        FamilyKind::KAntiPencil => {
            let k =
                id.k.ok_or_else(|| Error::InvalidArgument("k-anti-pencil needs k".into()))?;
            construct_k_anti_pencil(base()?, k)?
        }
        FamilyKind::PrimeSet => construct_prime_set(base()?)?,
        closed => IntSet::from_sorted(closed.pattern().expect("closed form").to_vec())?,
    };
    primitive.scale(id.scale)
}

/// Recognizes a scaled closed-form family member.
pub fn match_closed_family(set: &IntSet) -> Option<(FamilyKind, u64)> {
    let (primitive, g) = set.normalized();
    FamilyKind::CLOSED_FORM
        .into_iter()
        .find(|k| k.pattern() == Some(primitive.elements()))
        .map(|k| (k, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{divisor_report, is_anti_pencil, is_k_anti_pencil, is_prime_set};

    fn set(xs: &[u64]) -> IntSet {
        IntSet::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn family_names_agree_everywhere() {
        for k in FamilyKind::CLOSED_FORM.into_iter().chain([
            FamilyKind::AntiPencil,
            FamilyKind::KAntiPencil,
            FamilyKind::PrimeSet,
        ]) {
            assert_eq!(serde_json::to_value(k).unwrap(), k.name());
            assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
        }
    }

    #[test]
    fn anti_pencil_examples() {
        let a = construct_anti_pencil(&set(&[1, 2])).unwrap();
        assert_eq!(a, set(&[1, 2, 3]));
        assert_eq!(divisor_report(&a).unwrap().d, 5);

        let a = construct_anti_pencil(&set(&[1, 2, 3])).unwrap();
        assert_eq!(a, set(&[1, 2, 3, 54]));
        assert_eq!(divisor_report(&a).unwrap().d, 8);

        let a = construct_anti_pencil(&set(&[1, 2, 3, 4])).unwrap();
        assert_eq!(a, set(&[1, 2, 3, 4, 2510]));
        assert_eq!(divisor_report(&a).unwrap().d, 16);
        assert!(is_anti_pencil(&a).unwrap());
    }

    #[test]
    fn single_element_base_skips_collision() {
        // l = 4, multiples 8 (a = 4 collides) and 12 (a = 8)
        assert_eq!(construct_anti_pencil(&set(&[4])).unwrap(), set(&[4, 8]));
    }

    #[test]
    fn k_anti_pencil_examples() {
        let a = construct_k_anti_pencil(&set(&[1, 2, 3, 4, 5]), 3).unwrap();
        assert_eq!(a, set(&[1, 2, 3, 4, 5, 27705]));
        assert_eq!(divisor_report(&a).unwrap().d_k(3), 10);
        assert!(is_k_anti_pencil(&a, 3).unwrap());

        let a = construct_k_anti_pencil(&set(&[1, 2, 3]), 1).unwrap();
        assert_eq!(a, set(&[1, 2, 3, 6]));
        assert_eq!(divisor_report(&a).unwrap().d_k(1), 4);

        assert_eq!(
            construct_k_anti_pencil(&set(&[3, 5]), 2).unwrap(),
            set(&[3, 5, 8])
        );
        assert!(construct_k_anti_pencil(&set(&[3, 5]), 3).is_err());
        assert!(construct_k_anti_pencil(&set(&[3, 5]), 0).is_err());
    }

    #[test]
    fn lcm_overflow_reports_magnitude() {
        let base = IntSet::new((1..=20).map(|i| i * 7 + 100).collect()).unwrap();
        match construct_anti_pencil(&base) {
            Err(Error::Overflow(msg)) => assert!(msg.contains("lcm")),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn prime_set_examples() {
        assert_eq!(construct_prime_set(&set(&[2, 3])).unwrap(), set(&[2, 3, 6]));
        assert_eq!(
            construct_prime_set(&set(&[4, 5])).unwrap(),
            set(&[4, 5, 10])
        );
        assert_eq!(construct_prime_set(&set(&[2])).unwrap(), set(&[2, 3]));
        assert!(is_prime_set(&set(&[4, 5, 10])).unwrap());
        assert!(matches!(
            construct_prime_set(&set(&[1, 4])),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn closed_families() {
        let q = family(&FamilyId::closed(FamilyKind::Quad15711, 1)).unwrap();
        assert_eq!(q, set(&[1, 5, 7, 11]));
        assert_eq!(divisor_report(&q).unwrap().d_k(2), 4);

        let t = family(&FamilyId::closed(FamilyKind::Triple123, 2)).unwrap();
        assert_eq!(t, set(&[2, 4, 6]));
        assert_eq!(divisor_report(&t).unwrap().d, 5);

        let q = family(&FamilyId::closed(FamilyKind::Quad1111929, 1)).unwrap();
        assert_eq!(divisor_report(&q).unwrap().d_k(2), 4);

        let q = family(&FamilyId::closed(FamilyKind::Quad1236, 1)).unwrap();
        assert_eq!(divisor_report(&q).unwrap().d, 8);
    }

    #[test]
    fn constructive_families() {
        let id = FamilyId {
            kind: FamilyKind::AntiPencil,
            scale: 2,
            base: Some(set(&[1, 2, 3])),
            k: None,
        };
        assert_eq!(family(&id).unwrap(), set(&[2, 4, 6, 108]));
        let missing = FamilyId::closed(FamilyKind::PrimeSet, 1);
        assert!(family(&missing).is_err());
    }

    #[test]
    fn family_recognition() {
        assert_eq!(
            match_closed_family(&set(&[3, 6, 9, 18])),
            Some((FamilyKind::Quad1236, 3))
        );
        assert_eq!(
            match_closed_family(&set(&[1, 11, 19, 29])),
            Some((FamilyKind::Quad1111929, 1))
        );
        assert_eq!(match_closed_family(&set(&[1, 2, 3, 54])), None);
        assert_eq!(
            "quad-1-5-7-11".parse::<FamilyKind>().unwrap(),
            FamilyKind::Quad15711
        );
        assert!("quad".parse::<FamilyKind>().is_err());
    }
}
