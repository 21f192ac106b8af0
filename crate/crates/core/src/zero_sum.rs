//! Nonnegative-sum subset counts for sets of nonzero integers.
//!
//! Real-valued sets are represented by integer sets: the counts depend only
//! on the signs of subset sums, which survive rational approximation and
//! scaling. Bounded searches are therefore exact for integer sets within the
//! bound and evidence for the real case.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::enumeration::KSubsets;
use crate::error::{Error, Result};
use crate::search::{
    checksum, drive, ExecConfig, Objective, ShardContext, ShardSelector, Space, SumRule, TaskEcho,
    Verdict,
};
use crate::set::{parse_list, MAX_ELEMENTS};
use crate::{binomial, DEFAULT_NAIVE_LIMIT};

/// Caveat attached to every bounded zero-sum result.
pub const INTEGER_BOUND_CAVEAT: &str =
    "exact over sets of distinct nonzero integers in [-bound, bound] only; \
     evidence, not proof, for real-valued sets; 0 is excluded as an element";

/// Distinct nonzero integers in increasing order, with any sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SignedSet {
    elements: Vec<i64>,
    total: i64,
}

impl SignedSet {
    pub fn new(mut elements: Vec<i64>) -> Result<Self> {
        elements.sort_unstable();
        if elements.is_empty() || elements.len() > MAX_ELEMENTS {
            return Err(Error::InvalidSet(format!(
                "need 1..={MAX_ELEMENTS} elements, got {}",
                elements.len()
            )));
        }
        if elements.contains(&0) {
            return Err(Error::InvalidSet("0 is not allowed as an element".into()));
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSet(format!("duplicate element {}", w[0])));
        }
        // Bounding the absolute sum bounds every subset sum.
        let abs = elements
            .iter()
            .try_fold(0i64, |acc, &x| acc.checked_add(x.checked_abs()?))
            .ok_or_else(|| Error::Overflow("element magnitudes exceed 63 bits".into()))?;
        debug_assert!(abs >= 0);
        let total = elements.iter().sum();
        Ok(SignedSet { elements, total })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn total(&self) -> i64 {
        self.total
    }

    /// Every element negated.
    pub fn negated(&self) -> SignedSet {
        SignedSet::new(self.elements.iter().map(|x| -x).collect()).expect("negation keeps validity")
    }
}

impl TryFrom<Vec<i64>> for SignedSet {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        SignedSet::new(v)
    }
}

impl From<SignedSet> for Vec<i64> {
    fn from(s: SignedSet) -> Self {
        s.elements
    }
}

impl FromStr for SignedSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SignedSet::new(parse_list::<i64>(s)?)
    }
}

impl fmt::Display for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A [`SignedSet`] whose elements sum to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ZeroSumSet(SignedSet);

impl ZeroSumSet {
    pub fn new(elements: Vec<i64>) -> Result<Self> {
        SignedSet::new(elements)?.try_into()
    }

    pub fn elements(&self) -> &[i64] {
        self.0.elements()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_signed(&self) -> &SignedSet {
        &self.0
    }

    pub fn negated(&self) -> ZeroSumSet {
        ZeroSumSet(self.0.negated())
    }
}

impl TryFrom<SignedSet> for ZeroSumSet {
    type Error = Error;

    fn try_from(s: SignedSet) -> Result<Self> {
        if s.total() != 0 {
            return Err(Error::InvalidSet(format!(
                "elements sum to {}, not 0",
                s.total()
            )));
        }
        Ok(ZeroSumSet(s))
    }
}

impl TryFrom<Vec<i64>> for ZeroSumSet {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        ZeroSumSet::new(v)
    }
}

impl From<ZeroSumSet> for Vec<i64> {
    fn from(s: ZeroSumSet) -> Self {
        s.0.into()
    }
}

impl FromStr for ZeroSumSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<SignedSet>()?.try_into()
    }
}

impl fmt::Display for ZeroSumSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Subset counts by sign; `∅` is included (its sum is 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuReport {
    pub mu: u64,
    pub mu_by_k: BTreeMap<usize, u64>,
    pub zero_subsets: u64,
    pub zero_by_k: BTreeMap<usize, u64>,
}

impl MuReport {
    /// Nonnegative `k`-subsets; zero for `k > n`.
    pub fn mu_k(&self, k: usize) -> u64 {
        self.mu_by_k.get(&k).copied().unwrap_or(0)
    }
}

/// Gray-code walk over signed elements.
fn signed_stream(elements: &[i64], mut visit: impl FnMut(u64, i64)) {
    let n = elements.len();
    let (mut mask, mut sum) = (0u64, 0i64);
    visit(0, 0);
    for step in 1u64..(1 << n) {
        let bit = step.trailing_zeros() as usize;
        if mask >> bit & 1 == 0 {
            sum += elements[bit];
        } else {
            sum -= elements[bit];
        }
        mask ^= 1 << bit;
        visit(mask, sum);
    }
}

/// Sign counts for any signed set (no zero-sum requirement).
pub fn nonnegative_counts(set: &SignedSet) -> Result<MuReport> {
    let n = set.len();
    if n > DEFAULT_NAIVE_LIMIT {
        return Err(Error::Capacity {
            n,
            limit: DEFAULT_NAIVE_LIMIT,
            hint: "nonnegative counts enumerate every subset",
        });
    }
    let mut nonneg = vec![0u64; n + 1];
    let mut zero = vec![0u64; n + 1];
    signed_stream(set.elements(), |mask, s| {
        let k = mask.count_ones() as usize;
        if s >= 0 {
            nonneg[k] += 1;
        }
        if s == 0 {
            zero[k] += 1;
        }
    });
    Ok(MuReport {
        mu: nonneg.iter().sum(),
        zero_subsets: zero.iter().sum(),
        mu_by_k: nonneg.into_iter().enumerate().collect(),
        zero_by_k: zero.into_iter().enumerate().collect(),
    })
}

pub fn mu_report(set: &ZeroSumSet) -> Result<MuReport> {
    nonnegative_counts(set.as_signed())
}

/// `{-1, ..., -(n-1), n(n-1)/2}`: one positive element.
pub fn make_pencil(n: usize) -> Result<ZeroSumSet> {
    let top = pencil_top(n)?;
    ZeroSumSet::new((1..n as i64).map(|i| -i).chain([top]).collect())
}

/// `{1, ..., n-1, -n(n-1)/2}`: one negative element.
pub fn make_anti_pencil_zero(n: usize) -> Result<ZeroSumSet> {
    let top = pencil_top(n)?;
    ZeroSumSet::new((1..n as i64).chain([-top]).collect())
}

fn pencil_top(n: usize) -> Result<i64> {
    if !(2..=MAX_ELEMENTS).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "n must lie in 2..={MAX_ELEMENTS}, got {n}"
        )));
    }
    Ok((n * (n - 1) / 2) as i64)
}

/// True iff every subset with more than `k` elements has negative sum.
/// The set itself must have negative sum.
pub fn check_mu_prime_feasible(set: &SignedSet, k: usize) -> Result<bool> {
    if set.total() >= 0 {
        return Err(Error::InvalidArgument(format!(
            "total must be negative, got {}",
            set.total()
        )));
    }
    let n = set.len();
    if k >= n {
        return Ok(true);
    }
    // For each size, the largest elements give the largest subset sum.
    let desc: Vec<i64> = set.elements().iter().rev().copied().collect();
    Ok((k + 1..=n).all(|size| desc[..size].iter().sum::<i64>() < 0))
}

/// `C(n-1,k-1) + ... + C(n-1,0) + 1`.
pub fn mu_prime_formula(n: usize, k: usize) -> u64 {
    (0..k.min(n))
        .map(|i| binomial(n as u64 - 1, i as u64).expect("small binomial"))
        .sum::<u64>()
        + 1
}

const MAX_ZERO_SUM_N: usize = 16;

fn validate_shape(n: usize, k: Option<usize>, bound: i64) -> Result<()> {
    if !(1..=MAX_ZERO_SUM_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "n must lie in 1..={MAX_ZERO_SUM_N}, got {n}"
        )));
    }
    if !(1..=1 << 20).contains(&bound) {
        return Err(Error::InvalidArgument(format!(
            "bound must lie in 1..=2^20, got {bound}"
        )));
    }
    if let Some(k) = k {
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!(
                "k must lie in 1..={n}, got {k}"
            )));
        }
    }
    Ok(())
}

fn signed_universe(bound: i64) -> Vec<i64> {
    (-bound..=bound).filter(|&x| x != 0).collect()
}

fn mu_eval(k: Option<usize>) -> impl Fn(&[i64]) -> u64 + Sync {
    move |t: &[i64]| match k {
        Some(k) => KSubsets::new(t.len(), k)
            .filter(|&m| {
                let mut bits = m;
                let mut s = 0i64;
                while bits != 0 {
                    s += t[bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
                s >= 0
            })
            .count() as u64,
        None => {
            let mut c = 0;
            signed_stream(t, |_, s| c += (s >= 0) as u64);
            c
        }
    }
}

/// Zero-sum `n`-sets from `[-bound, bound] \ {0}`, scored by `μ` or `μ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuSearchTask {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub bound: i64,
    pub objective: Objective,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shard: Option<ShardSelector>,
}

impl MuSearchTask {
    pub fn new(n: usize, k: Option<usize>, bound: i64, objective: Objective) -> Self {
        MuSearchTask {
            n,
            k,
            bound,
            objective,
            shard: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuSearchRecord {
    pub task: MuSearchTask,
    /// Extremal value; `None` when no zero-sum set exists within the bound.
    pub best_value: Option<u64>,
    pub witnesses: Vec<ZeroSumSet>,
    pub sets_examined: u64,
    pub elapsed_secs: f64,
    pub checksum: String,
    pub caveat: String,
}

impl MuSearchRecord {
    /// Combines records of disjoint shards of the same task.
    pub fn merge_shards(parts: &[MuSearchRecord]) -> Result<MuSearchRecord> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("nothing to merge".into()))?;
        let task = MuSearchTask {
            shard: None,
            ..first.task.clone()
        };
        if parts.iter().any(|p| {
            MuSearchTask {
                shard: None,
                ..p.task.clone()
            } != task
        }) {
            return Err(Error::InvalidArgument(
                "records belong to different tasks".into(),
            ));
        }
        let best_value = parts.iter().filter_map(|p| p.best_value).reduce(|a, b| {
            if task.objective.improves(b, a) {
                b
            } else {
                a
            }
        });
        let mut witnesses: Vec<ZeroSumSet> = parts
            .iter()
            .filter(|p| p.best_value.is_some() && p.best_value == best_value)
            .flat_map(|p| p.witnesses.iter().cloned())
            .collect();
        witnesses.sort();
        witnesses.dedup();
        let raw: Vec<Vec<i64>> = witnesses.iter().map(|w| w.elements().to_vec()).collect();
        Ok(MuSearchRecord {
            checksum: checksum(best_value, &raw),
            task,
            best_value,
            witnesses,
            sets_examined: parts.iter().map(|p| p.sets_examined).sum(),
            elapsed_secs: parts.iter().map(|p| p.elapsed_secs).sum(),
            caveat: INTEGER_BOUND_CAVEAT.into(),
        })
    }
}

pub fn search_mu(task: &MuSearchTask, cfg: &ExecConfig) -> Result<MuSearchRecord> {
    validate_shape(task.n, task.k, task.bound)?;
    let start = Instant::now();
    let space = Space::new(signed_universe(task.bound), task.n, SumRule::Zero, false);
    let ctx = ShardContext {
        eval: mu_eval(task.k),
        objective: task.objective,
        exceed: None,
    };
    let echo = TaskEcho::ZeroSum { task: task.clone() };
    let p = drive(&space, ctx, task.shard, &echo, cfg)?;
    Ok(MuSearchRecord {
        task: task.clone(),
        best_value: p.best,
        checksum: checksum(p.best, &p.witnesses),
        witnesses: p
            .witnesses
            .into_iter()
            .map(ZeroSumSet::new)
            .collect::<Result<_>>()?,
        sets_examined: p.examined,
        elapsed_secs: start.elapsed().as_secs_f64(),
        caveat: INTEGER_BOUND_CAVEAT.into(),
    })
}

/// Outcome of a bounded conjecture probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureProbe {
    pub record: MuSearchRecord,
    /// Whether `n >= 4k` holds, the range the conjecture speaks about.
    pub in_range: bool,
    pub target: u64,
    pub verdict: Verdict,
}

/// Minimum of `μ_k` compared with `C(n-1, k-1)`.
pub fn probe_mms(n: usize, k: usize, bound: i64, cfg: &ExecConfig) -> Result<ConjectureProbe> {
    let record = search_mu(&MuSearchTask::new(n, Some(k), bound, Objective::Min), cfg)?;
    let target = binomial(n as u64 - 1, k as u64 - 1).expect("small binomial");
    let verdict = match record.best_value {
        Some(v) if v < target => Verdict::Exceeds,
        _ => Verdict::Consistent,
    };
    Ok(ConjectureProbe {
        record,
        in_range: n >= 4 * k,
        target,
        verdict,
    })
}

/// Maximum of `μ_k` compared with `C(n-1, k)`.
pub fn probe_mu_max(n: usize, k: usize, bound: i64, cfg: &ExecConfig) -> Result<ConjectureProbe> {
    let record = search_mu(&MuSearchTask::new(n, Some(k), bound, Objective::Max), cfg)?;
    let target = binomial(n as u64 - 1, k as u64).expect("small binomial");
    let verdict = match record.best_value {
        Some(v) if v > target => Verdict::Exceeds,
        _ => Verdict::Consistent,
    };
    Ok(ConjectureProbe {
        record,
        in_range: n >= 4 * k,
        target,
        verdict,
    })
}

/// Sets with negative total where every subset larger than `k` is negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuPrimeTask {
    pub n: usize,
    pub k: usize,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuPrimeProbe {
    pub task: MuPrimeTask,
    pub max_mu: Option<u64>,
    pub witnesses: Vec<SignedSet>,
    pub sets_examined: u64,
    pub formula: u64,
    pub verdict: Verdict,
    pub checksum: String,
    pub caveat: String,
}

/// Bounded maximum of `μ` over feasible sets, compared with the closed form.
pub fn probe_mu_prime(task: &MuPrimeTask, cfg: &ExecConfig) -> Result<MuPrimeProbe> {
    validate_shape(task.n, Some(task.k), task.bound)?;
    let space = Space::new(
        signed_universe(task.bound),
        task.n,
        SumRule::Negative,
        false,
    );
    let k = task.k;
    let eval = move |t: &[i64]| {
        // Sets failing the size constraint score 0, below any feasible set
        // (which counts at least ∅).
        let mut desc = t.to_vec();
        desc.reverse();
        let mut prefix = 0i64;
        for (i, x) in desc.iter().enumerate() {
            prefix += x;
            if i + 1 > k && prefix >= 0 {
                return 0;
            }
        }
        mu_eval(None)(t)
    };
    let ctx = ShardContext {
        eval,
        objective: Objective::Max,
        exceed: None,
    };
    let echo = TaskEcho::MuPrime { task: task.clone() };
    let p = drive(&space, ctx, None, &echo, cfg)?;
    let best = p.best.filter(|&v| v > 0);
    let formula = mu_prime_formula(task.n, task.k);
    Ok(MuPrimeProbe {
        task: task.clone(),
        max_mu: best,
        checksum: checksum(best, if best.is_some() { &p.witnesses } else { &[] }),
        witnesses: if best.is_some() {
            p.witnesses
                .into_iter()
                .map(SignedSet::new)
                .collect::<Result<_>>()?
        } else {
            Vec::new()
        },
        sets_examined: p.examined,
        verdict: match best {
            Some(v) if v > formula => Verdict::Exceeds,
            _ => Verdict::Consistent,
        },
        formula,
        caveat: INTEGER_BOUND_CAVEAT.into(),
    })
}
