//! Exhaustive, shardable, resumable searches over small sets.
//!
//! A search space is the set of strictly increasing `n`-tuples over a finite
//! universe. It is cut into shards by its first two elements. Shards run in
//! parallel and reduce with an associative, commutative merge, so results do
//! not depend on thread count or shard decomposition.

mod engine;
mod extremal;

use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::zero_sum::{MuPrimeTask, MuSearchTask};

pub(crate) use engine::{drive, ShardContext, Space, SumRule};
pub use extremal::{
    predicted_maximum, probe_dkn, run_search, verify_characterization, verify_upper_bound,
    CharacterizationReport, Classification, ClassifiedSet, DknProbe, SearchRecord, SearchTask,
    UpperBoundVerdict, Verdict, MAX_SEARCH_N,
};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Max,
    Min,
}

impl Objective {
    /// True iff `candidate` is strictly better than `incumbent`.
    pub fn improves(self, candidate: u64, incumbent: u64) -> bool {
        match self {
            Objective::Max => candidate > incumbent,
            Objective::Min => candidate < incumbent,
        }
    }
}

/// Restricts a search to shards whose position is `index` modulo `count`.
/// The selectors `0..count` partition the space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShardSelector {
    pub index: usize,
    pub count: usize,
}

impl ShardSelector {
    pub fn new(index: usize, count: usize) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::InvalidArgument(format!(
                "shard {index} of {count} is not valid"
            )));
        }
        Ok(ShardSelector { index, count })
    }

    pub fn selects(self, shard: usize) -> bool {
        shard % self.count == self.index
    }
}

/// How a search executes; none of these settings changes its result.
#[derive(Clone, Debug, Default)]
pub struct ExecConfig {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Wall-clock budget. Shards not started before it runs out are left for
    /// a resumed run.
    pub budget: Option<Duration>,
    pub resume: Option<Checkpoint>,
}

/// Which search a checkpoint belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TaskEcho {
    Divisor {
        #[serde(flatten)]
        task: SearchTask,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exceed: Option<u64>,
    },
    ZeroSum {
        #[serde(flatten)]
        task: MuSearchTask,
    },
    MuPrime {
        #[serde(flatten)]
        task: MuPrimeTask,
    },
}

/// Resumable progress of a search. For minimizing searches `max_value`
/// holds the running minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub task: TaskEcho,
    pub shard_count: usize,
    pub shards_done: Vec<usize>,
    pub max_value: Option<u64>,
    pub argmax_sets: Vec<Vec<i64>>,
    pub sets_examined: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_exceeding: Option<Vec<i64>>,
}

impl Checkpoint {
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub(crate) fn partial(&self) -> engine::Partial {
        engine::Partial {
            best: self.max_value,
            witnesses: self.argmax_sets.clone(),
            examined: self.sets_examined,
            first_exceeding: self.first_exceeding.clone(),
        }
    }
}

/// Hex SHA-256 over the extremal value and the sorted witness list.
pub(crate) fn checksum(value: Option<u64>, witnesses: &[Vec<i64>]) -> String {
    let mut sorted: Vec<&Vec<i64>> = witnesses.iter().collect();
    sorted.sort_unstable();
    let mut h = Sha256::new();
    match value {
        Some(v) => h.update(format!("value={v};")),
        None => h.update("value=none;"),
    }
    for w in sorted {
        let line: Vec<String> = w.iter().map(i64::to_string).collect();
        h.update(line.join(","));
        h.update(";");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksum_ignores_witness_order() {
        let a = vec![vec![1, 2, 3], vec![1, 5, 7, 11]];
        let b = vec![vec![1, 5, 7, 11], vec![1, 2, 3]];
        assert_eq!(checksum(Some(4), &a), checksum(Some(4), &b));
        assert_ne!(checksum(Some(4), &a), checksum(Some(5), &a));
        assert_eq!(checksum(None, &[]).len(), 64);
    }

    #[test]
    fn selectors_partition() {
        let sels: Vec<_> = (0..3).map(|i| ShardSelector::new(i, 3).unwrap()).collect();
        for s in 0..20 {
            assert_eq!(sels.iter().filter(|x| x.selects(s)).count(), 1);
        }
        assert!(ShardSelector::new(3, 3).is_err());
        assert!(ShardSelector::new(0, 0).is_err());
    }
}
