use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    checksum, drive, ExecConfig, Objective, ShardContext, ShardSelector, Space, SumRule, TaskEcho,
};
use crate::binomial;
use crate::constructions::{
    construct_anti_pencil, construct_k_anti_pencil, match_closed_family, FamilyKind,
};
use crate::divisor::{divides, divisor_report, is_anti_pencil, is_k_anti_pencil};
use crate::enumeration::{k_divisor_count, SumStream};
use crate::error::{Error, Result};
use crate::set::IntSet;

pub const MAX_SEARCH_N: usize = 12;
const MAX_ELEMENT_BOUND: u64 = 1 << 40;

fn default_true() -> bool {
    true
}

/// The space of `n`-element sets drawn from `1..=max_element`, scored by
/// `d` (or `d_k` when `k` is given).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTask {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub max_element: u64,
    #[serde(default = "default_true")]
    pub normalize_gcd: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shard: Option<ShardSelector>,
}

impl SearchTask {
    pub fn new(n: usize, k: Option<usize>, max_element: u64) -> Self {
        SearchTask {
            n,
            k,
            max_element,
            normalize_gcd: true,
            shard: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_SEARCH_N).contains(&self.n) {
            return Err(Error::InvalidArgument(format!(
                "n must lie in 1..={MAX_SEARCH_N}, got {}",
                self.n
            )));
        }
        if self.max_element < self.n as u64 || self.max_element > MAX_ELEMENT_BOUND {
            return Err(Error::InvalidArgument(format!(
                "max_element must lie in {}..={MAX_ELEMENT_BOUND}, got {}",
                self.n, self.max_element
            )));
        }
        if let Some(k) = self.k {
            if k == 0 || k > self.n {
                return Err(Error::InvalidArgument(format!(
                    "k must lie in 1..={}, got {k}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    fn unsharded(&self) -> SearchTask {
        SearchTask {
            shard: None,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub task: SearchTask,
    pub max_value: u64,
    pub argmax_sets: Vec<IntSet>,
    pub sets_examined: u64,
    pub elapsed_secs: f64,
    pub checksum: String,
}

impl SearchRecord {
    fn witnesses(&self) -> Vec<Vec<i64>> {
        self.argmax_sets
            .iter()
            .map(|s| s.elements().iter().map(|&x| x as i64).collect())
            .collect()
    }

    /// Combines records of disjoint shards of the same task into the record
    /// of their union.
    pub fn merge_shards(parts: &[SearchRecord]) -> Result<SearchRecord> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("nothing to merge".into()))?;
        let task = first.task.unsharded();
        if parts.iter().any(|p| p.task.unsharded() != task) {
            return Err(Error::InvalidArgument(
                "records belong to different tasks".into(),
            ));
        }
        let max_value = parts.iter().map(|p| p.max_value).max().unwrap_or(0);
        let mut argmax_sets: Vec<IntSet> = parts
            .iter()
            .filter(|p| p.max_value == max_value)
            .flat_map(|p| p.argmax_sets.iter().cloned())
            .collect();
        argmax_sets.sort();
        argmax_sets.dedup();
        let mut out = SearchRecord {
            task,
            max_value,
            argmax_sets,
            sets_examined: parts.iter().map(|p| p.sets_examined).sum(),
            elapsed_secs: parts.iter().map(|p| p.elapsed_secs).sum(),
            checksum: String::new(),
        };
        out.checksum = checksum(Some(max_value), &out.witnesses());
        Ok(out)
    }
}

fn divisor_space(task: &SearchTask) -> Space {
    Space::new(
        (1..=task.max_element as i64).collect(),
        task.n,
        SumRule::Any,
        task.normalize_gcd,
    )
}

fn divisor_eval(k: Option<usize>) -> impl Fn(&[i64]) -> u64 + Sync {
    move |t: &[i64]| {
        let mut buf = [0u64; MAX_SEARCH_N];
        for (b, &x) in buf.iter_mut().zip(t) {
            *b = x as u64;
        }
        let xs = &buf[..t.len()];
        let total: u64 = xs.iter().sum();
        match k {
            Some(k) => k_divisor_count(xs, total, k),
            None => SumStream::new(xs)
                .filter(|&(_, s)| divides(s, total))
                .count() as u64,
        }
    }
}

fn execute(
    task: &SearchTask,
    exceed: Option<u64>,
    cfg: &ExecConfig,
) -> Result<(SearchRecord, Option<IntSet>)> {
    task.validate()?;
    let start = Instant::now();
    let echo = TaskEcho::Divisor {
        task: task.clone(),
        exceed,
    };
    let ctx = ShardContext {
        eval: divisor_eval(task.k),
        objective: Objective::Max,
        exceed,
    };
    let p = drive(&divisor_space(task), ctx, task.shard, &echo, cfg)?;
    let to_set = |v: &Vec<i64>| IntSet::from_sorted(v.iter().map(|&x| x as u64).collect());
    let argmax_sets = p.witnesses.iter().map(to_set).collect::<Result<Vec<_>>>()?;
    let first = p.first_exceeding.as_ref().map(to_set).transpose()?;
    Ok((
        SearchRecord {
            task: task.clone(),
            max_value: p.best.unwrap_or(0),
            checksum: checksum(p.best.or(Some(0)), &p.witnesses),
            argmax_sets,
            sets_examined: p.examined,
            elapsed_secs: start.elapsed().as_secs_f64(),
        },
        first,
    ))
}

/// Exact maximum of `d` (or `d_k`) over the task's space with every set
/// attaining it.
pub fn run_search(task: &SearchTask, cfg: &ExecConfig) -> Result<SearchRecord> {
    execute(task, None, cfg).map(|(r, _)| r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundVerdict {
    pub bound: u64,
    pub holds: bool,
    /// Lexicographically first set exceeding the bound.
    pub counterexample: Option<IntSet>,
    pub record: SearchRecord,
}

pub fn verify_upper_bound(
    task: &SearchTask,
    bound: u64,
    cfg: &ExecConfig,
) -> Result<UpperBoundVerdict> {
    let (record, counterexample) = execute(task, Some(bound), cfg)?;
    Ok(UpperBoundVerdict {
        bound,
        holds: record.max_value <= bound,
        counterexample,
        record,
    })
}

/// Known value of `d(n)` (`k = None`) or `d(k, 2k)`; `None` where the
/// maximum is open.
pub fn predicted_maximum(n: usize, k: Option<usize>) -> Option<u64> {
    match k {
        None => Some(match n {
            0 => return None,
            1 => 1,
            2 => 2,
            3 => 5,
            _ => 1u64.checked_shl(n as u32 - 1)?,
        }),
        Some(2) if n == 4 => Some(4),
        Some(k) if n == 2 * k && k >= 1 => Some(binomial(n as u64, k as u64)? / 2),
        Some(_) => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Classification {
    AntiPencil,
    KAntiPencil { k: usize },
    Family { family: FamilyKind, scale: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedSet {
    pub set: IntSet,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub record: SearchRecord,
    pub predicted_max: u64,
    /// No examined set exceeds the predicted maximum.
    pub bound_verified: bool,
    /// Some examined set reaches it.
    pub attained: bool,
    pub classified: Vec<ClassifiedSet>,
    /// Maximizers outside the predicted families.
    pub unexplained: Vec<IntSet>,
    /// A construction reaching the predicted maximum, with its value.
    pub certified_witness: Option<(IntSet, u64)>,
    pub note: String,
}

impl CharacterizationReport {
    pub fn consistent(&self) -> bool {
        self.bound_verified && self.unexplained.is_empty()
    }
}

fn classify(set: &IntSet, k: Option<usize>) -> Result<Option<Classification>> {
    let n = set.len();
    let family =
        match_closed_family(set).map(|(family, scale)| Classification::Family { family, scale });
    Ok(match k {
        None => match n {
            3 => family.filter(|c| {
                matches!(
                    c,
                    Classification::Family {
                        family: FamilyKind::Triple123,
                        ..
                    }
                )
            }),
            4 if matches!(
                family,
                Some(Classification::Family {
                    family: FamilyKind::Quad1236,
                    ..
                })
            ) =>
            {
                family
            }
            _ => is_anti_pencil(set)?.then_some(Classification::AntiPencil),
        },
        Some(2) if n == 4 => family.filter(|c| {
            matches!(
                c,
                Classification::Family {
                    family: FamilyKind::Quad15711 | FamilyKind::Quad1111929,
                    ..
                }
            )
        }),
        Some(k) => is_k_anti_pencil(set, k)?.then_some(Classification::KAntiPencil { k }),
    })
}

fn construction_witness(n: usize, k: Option<usize>) -> Option<(IntSet, u64)> {
    let set = match (n, k) {
        (3, None) => IntSet::new(vec![1, 2, 3]).ok()?,
        (4, Some(2)) => IntSet::new(vec![1, 5, 7, 11]).ok()?,
        (1, _) => IntSet::new(vec![1]).ok()?,
        _ => {
            let base = IntSet::new((1..n as u64).collect()).ok()?;
            match k {
                None => construct_anti_pencil(&base).ok()?,
                Some(k) => construct_k_anti_pencil(&base, k).ok()?,
            }
        }
    };
    let r = divisor_report(&set).ok()?;
    Some((set, k.map_or(r.d, |k| r.d_k(k))))
}

/// Checks every maximizer against the predicted extremal families.
pub fn verify_characterization(
    task: &SearchTask,
    cfg: &ExecConfig,
) -> Result<CharacterizationReport> {
    task.validate()?;
    let predicted_max = predicted_maximum(task.n, task.k).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "no characterization is known for n = {}, k = {:?}; use probe_dkn",
            task.n, task.k
        ))
    })?;
    let record = run_search(task, cfg)?;
    let bound_verified = record.max_value <= predicted_max;
    let attained = record.max_value == predicted_max;
    let mut classified = Vec::new();
    let mut unexplained = Vec::new();
    if attained {
        for set in &record.argmax_sets {
            match classify(set, task.k)? {
                Some(classification) => classified.push(ClassifiedSet {
                    set: set.clone(),
                    classification,
                }),
                None => unexplained.push(set.clone()),
            }
        }
    }
    let note = if !bound_verified {
        format!(
            "maximum {} exceeds the predicted {predicted_max}",
            record.max_value
        )
    } else if attained {
        "bound verified and attainment witnessed within the element bound".into()
    } else {
        format!(
            "bound verified; maximum {} < {predicted_max}, element bound too small to witness attainment",
            record.max_value
        )
    };
    Ok(CharacterizationReport {
        certified_witness: construction_witness(task.n, task.k),
        record,
        predicted_max,
        bound_verified,
        attained,
        classified,
        unexplained,
        note,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Exceeds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DknProbe {
    pub record: SearchRecord,
    /// `C(n-1, k)`.
    pub binomial: u64,
    pub verdict: Verdict,
}

/// Bounded maximum of `d_k` over `n`-sets compared with `C(n-1, k)`.
pub fn probe_dkn(n: usize, k: usize, max_element: u64, cfg: &ExecConfig) -> Result<DknProbe> {
    let record = run_search(&SearchTask::new(n, Some(k), max_element), cfg)?;
    let c = binomial(n as u64 - 1, k as u64).expect("small binomial");
    Ok(DknProbe {
        verdict: if record.max_value > c {
            Verdict::Exceeds
        } else {
            Verdict::Consistent
        },
        binomial: c,
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> IntSet {
        IntSet::new(xs.to_vec()).unwrap()
    }

    fn cfg() -> ExecConfig {
        ExecConfig::default()
    }

    #[test]
    fn small_searches() {
        let r = run_search(&SearchTask::new(3, None, 30), &cfg()).unwrap();
        assert_eq!(r.max_value, 5);
        assert_eq!(r.argmax_sets, vec![set(&[1, 2, 3])]);
        let r = run_search(&SearchTask::new(2, None, 20), &cfg()).unwrap();
        assert_eq!(r.max_value, 2);
        let r = run_search(&SearchTask::new(1, None, 5), &cfg()).unwrap();
        assert_eq!((r.max_value, r.sets_examined), (1, 1));
    }

    #[test]
    fn unnormalized_search_keeps_scalings() {
        let mut t = SearchTask::new(3, None, 9);
        t.normalize_gcd = false;
        let r = run_search(&t, &cfg()).unwrap();
        assert_eq!(
            r.argmax_sets,
            vec![set(&[1, 2, 3]), set(&[2, 4, 6]), set(&[3, 6, 9])]
        );
    }

    #[test]
    fn task_validation() {
        assert!(run_search(&SearchTask::new(0, None, 10), &cfg()).is_err());
        assert!(run_search(&SearchTask::new(13, None, 100), &cfg()).is_err());
        assert!(run_search(&SearchTask::new(4, None, 3), &cfg()).is_err());
        assert!(run_search(&SearchTask::new(4, Some(5), 10), &cfg()).is_err());
    }

    #[test]
    fn upper_bound_counterexample() {
        let v = verify_upper_bound(&SearchTask::new(3, None, 30), 4, &cfg()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.counterexample, Some(set(&[1, 2, 3])));
        let v = verify_upper_bound(&SearchTask::new(3, None, 30), 5, &cfg()).unwrap();
        assert!(v.holds);
        assert_eq!(v.counterexample, None);
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_maximum(3, None), Some(5));
        assert_eq!(predicted_maximum(5, None), Some(16));
        assert_eq!(predicted_maximum(4, Some(2)), Some(4));
        assert_eq!(predicted_maximum(6, Some(3)), Some(10));
        assert_eq!(predicted_maximum(2, Some(1)), Some(1));
        assert_eq!(predicted_maximum(5, Some(2)), None);
    }

    #[test]
    fn characterization_needs_a_prediction() {
        assert!(verify_characterization(&SearchTask::new(5, Some(2), 20), &cfg()).is_err());
    }

    #[test]
    fn small_bound_is_vacuous() {
        let r = verify_characterization(&SearchTask::new(5, None, 12), &cfg()).unwrap();
        assert!(r.bound_verified && !r.attained && r.consistent());
        assert!(r.note.contains("too small"));
        let (w, v) = r.certified_witness.unwrap();
        assert_eq!((w, v), (set(&[1, 2, 3, 4, 2510]), 16));
    }

    #[test]
    fn dkn_probe_flags_n4_k2() {
        let p = probe_dkn(4, 2, 60, &cfg()).unwrap();
        assert_eq!(
            (p.record.max_value, p.binomial, p.verdict),
            (4, 3, Verdict::Exceeds)
        );
    }

    #[test]
    fn shard_records_merge() {
        let task = SearchTask::new(4, None, 25);
        let whole = run_search(&task, &cfg()).unwrap();
        let parts: Vec<_> = (0..4)
            .map(|i| {
                let mut t = task.clone();
                t.shard = Some(ShardSelector::new(i, 4).unwrap());
                run_search(&t, &cfg()).unwrap()
            })
            .collect();
        let merged = SearchRecord::merge_shards(&parts).unwrap();
        assert_eq!(merged.checksum, whole.checksum);
        assert_eq!(merged.argmax_sets, whole.argmax_sets);
        assert_eq!(merged.sets_examined, whole.sets_examined);
    }
}
