use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;

use super::{Checkpoint, ExecConfig, Objective, ShardSelector, TaskEcho, CHECKPOINT_VERSION};
use crate::error::{Error, Result};

/// Constraint on the element sum of a candidate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SumRule {
    Any,
    Zero,
    Negative,
}

/// Strictly increasing `n`-tuples drawn from a sorted universe.
#[derive(Clone, Debug)]
pub(crate) struct Space {
    universe: Vec<i64>,
    prefix: Vec<i64>,
    n: usize,
    rule: SumRule,
    primitive: bool,
}

impl Space {
    pub fn new(universe: Vec<i64>, n: usize, rule: SumRule, primitive: bool) -> Self {
        debug_assert!(universe.windows(2).all(|w| w[0] < w[1]));
        let mut prefix = vec![0i64; universe.len() + 1];
        for (i, &x) in universe.iter().enumerate() {
            prefix[i + 1] = prefix[i] + x;
        }
        Space {
            universe,
            prefix,
            n,
            rule,
            primitive,
        }
    }

    /// Shard prefixes: index tuples of the first `min(n, 2)` elements, in
    /// lexicographic order.
    pub fn shards(&self) -> Vec<[usize; 2]> {
        let len = self.universe.len();
        if self.n == 1 {
            return (0..len).map(|i| [i, usize::MAX]).collect();
        }
        let mut out = Vec::new();
        for i in 0..len {
            for j in i + 1..len {
                out.push([i, j]);
            }
        }
        out
    }

    /// Whether `r` more elements from `universe[start..]` can satisfy the sum
    /// rule given the running sum `cur`.
    fn feasible(&self, start: usize, r: usize, cur: i64) -> bool {
        let len = self.universe.len();
        if start + r > len {
            return false;
        }
        match self.rule {
            SumRule::Any => true,
            SumRule::Zero => {
                let lo = cur + self.prefix[start + r] - self.prefix[start];
                let hi = cur + self.prefix[len] - self.prefix[len - r];
                lo <= 0 && 0 <= hi
            }
            SumRule::Negative => cur + self.prefix[start + r] - self.prefix[start] < 0,
        }
    }

    fn accepts(&self, sum: i64, tuple: &[i64]) -> bool {
        let ok = match self.rule {
            SumRule::Any => true,
            SumRule::Zero => sum == 0,
            SumRule::Negative => sum < 0,
        };
        ok && (!self.primitive || tuple.iter().fold(0i64, |g, x| g.gcd(x)) == 1)
    }

    pub fn run_shard<F>(&self, shard: [usize; 2], ctx: &ShardContext<F>) -> Partial
    where
        F: Fn(&[i64]) -> u64,
    {
        let mut state = Partial::default();
        let mut tuple = Vec::with_capacity(self.n);
        let taken = if self.n == 1 { 1 } else { 2 };
        let mut cur = 0;
        for &i in &shard[..taken] {
            tuple.push(self.universe[i]);
            cur += self.universe[i];
        }
        let next = shard[taken - 1] + 1;
        if self.feasible(next, self.n - taken, cur) {
            self.descend(&mut tuple, cur, next, ctx, &mut state);
        }
        state
    }

    fn descend<F>(
        &self,
        tuple: &mut Vec<i64>,
        cur: i64,
        start: usize,
        ctx: &ShardContext<F>,
        state: &mut Partial,
    ) where
        F: Fn(&[i64]) -> u64,
    {
        if tuple.len() == self.n {
            if self.accepts(cur, tuple) {
                state.observe(tuple, (ctx.eval)(tuple), ctx.objective, ctx.exceed);
            }
            return;
        }
        let len = self.universe.len();
        let rest = self.n - tuple.len() - 1;
        for i in start..len - rest {
            let x = self.universe[i];
            // Smallest and largest completions after choosing x.
            let lo = cur + x + self.prefix[i + 1 + rest] - self.prefix[i + 1];
            match self.rule {
                SumRule::Any => {}
                SumRule::Zero => {
                    if lo > 0 {
                        break;
                    }
                    if cur + x + self.prefix[len] - self.prefix[len - rest] < 0 {
                        continue;
                    }
                }
                SumRule::Negative => {
                    if lo >= 0 {
                        break;
                    }
                }
            }
            tuple.push(x);
            self.descend(tuple, cur + x, i + 1, ctx, state);
            tuple.pop();
        }
    }
}

pub(crate) struct ShardContext<F> {
    pub eval: F,
    pub objective: Objective,
    pub exceed: Option<u64>,
}

/// Result of any number of shards; merging is associative and commutative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Partial {
    pub best: Option<u64>,
    pub witnesses: Vec<Vec<i64>>,
    pub examined: u64,
    pub first_exceeding: Option<Vec<i64>>,
}

impl Partial {
    fn observe(&mut self, tuple: &[i64], value: u64, objective: Objective, exceed: Option<u64>) {
        self.examined += 1;
        match self.best {
            Some(b) if b == value => self.witnesses.push(tuple.to_vec()),
            Some(b) if !objective.improves(value, b) => {}
            _ => {
                self.best = Some(value);
                self.witnesses.clear();
                self.witnesses.push(tuple.to_vec());
            }
        }
        if let Some(t) = exceed {
            let violates = match objective {
                Objective::Max => value > t,
                Objective::Min => value < t,
            };
            if violates && self.first_exceeding.as_deref().is_none_or(|f| tuple < f) {
                self.first_exceeding = Some(tuple.to_vec());
            }
        }
    }

    pub fn merge(mut self, other: Partial, objective: Objective) -> Partial {
        self.examined += other.examined;
        self.first_exceeding = match (self.first_exceeding.take(), other.first_exceeding) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        match (self.best, other.best) {
            (_, None) => {}
            (None, Some(_)) => {
                self.best = other.best;
                self.witnesses = other.witnesses;
            }
            (Some(a), Some(b)) if a == b => self.witnesses.extend(other.witnesses),
            (Some(a), Some(b)) => {
                if objective.improves(b, a) {
                    self.best = Some(b);
                    self.witnesses = other.witnesses;
                }
            }
        }
        self.witnesses.sort_unstable();
        self.witnesses.dedup();
        self
    }
}

/// Runs every selected shard not yet in `cfg.resume`, in parallel, and
/// reduces deterministically.
pub(crate) fn drive<F>(
    space: &Space,
    ctx: ShardContext<F>,
    selector: Option<ShardSelector>,
    echo: &TaskEcho,
    cfg: &ExecConfig,
) -> Result<Partial>
where
    F: Fn(&[i64]) -> u64 + Sync,
{
    let shards = space.shards();
    let shard_count = shards.len();
    let (mut done, mut acc) = match &cfg.resume {
        Some(cp) => {
            if &cp.task != echo {
                return Err(Error::InvalidArgument(
                    "checkpoint belongs to a different task".into(),
                ));
            }
            if cp.version != CHECKPOINT_VERSION {
                return Err(Error::InvalidArgument(format!(
                    "checkpoint version {} unsupported",
                    cp.version
                )));
            }
            (cp.shards_done.clone(), cp.partial())
        }
        None => (Vec::new(), Partial::default()),
    };
    let mut skip = vec![false; shard_count];
    for &i in &done {
        if i < shard_count {
            skip[i] = true;
        }
    }
    let pending: Vec<usize> = (0..shard_count)
        .filter(|&i| !skip[i] && selector.is_none_or(|s| s.selects(i)))
        .collect();

    let deadline = cfg.budget.map(|b| Instant::now() + b);
    let work = || {
        pending
            .par_iter()
            .map(|&i| {
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    return (i, None);
                }
                (i, Some(space.run_shard(shards[i], &ctx)))
            })
            .collect::<Vec<_>>()
    };
    let results = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };

    let mut incomplete = false;
    for (i, r) in results {
        match r {
            Some(p) => {
                acc = acc.merge(p, ctx.objective);
                done.push(i);
            }
            None => incomplete = true,
        }
    }
    done.sort_unstable();
    done.dedup();
    if incomplete {
        return Err(Error::BudgetExceeded(Box::new(Checkpoint {
            version: CHECKPOINT_VERSION,
            task: echo.clone(),
            shard_count,
            shards_done: done,
            max_value: acc.best,
            argmax_sets: acc.witnesses,
            sets_examined: acc.examined,
            first_exceeding: acc.first_exceeding,
        })));
    }
    Ok(acc)
}
