//! One check per reproduction criterion, shared by the `repro` subcommand and
//! the acceptance test suite.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::constructions::{
    construct_anti_pencil, construct_k_anti_pencil, construct_prime_set, FamilyKind,
};
use crate::divisor::{divisor_report, halving_sets};
use crate::enumeration::{count_divisors_mitm, count_halving_mitm};
use crate::error::Result;
use crate::search::{
    run_search, verify_characterization, verify_upper_bound, Classification, ExecConfig, Objective,
    SearchRecord, SearchTask, ShardSelector,
};
use crate::set::IntSet;
use crate::zero_sum::{
    make_pencil, mu_report, probe_mms, search_mu, MuSearchRecord, MuSearchTask, ZeroSumSet,
};

const SEED: u64 = 0x5_eedd_1715;

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_secs: f64,
    pub limit_secs: f64,
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub limit: Duration,
    check: fn(&ExecConfig) -> Result<(bool, String)>,
}

impl Criterion {
    /// Runs the check; errors and overruns of the time limit count as failures.
    pub fn run(&self, cfg: &ExecConfig) -> CheckOutcome {
        let start = Instant::now();
        let (passed, mut detail) = match (self.check)(cfg) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let elapsed = start.elapsed();
        let in_time = elapsed <= self.limit;
        if !in_time {
            detail.push_str(&format!("; exceeded time limit of {:?}", self.limit));
        }
        CheckOutcome {
            id: self.id,
            name: self.name,
            passed: passed && in_time,
            detail,
            elapsed_secs: elapsed.as_secs_f64(),
            limit_secs: self.limit.as_secs_f64(),
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, check| Criterion {
        id,
        name,
        limit: Duration::from_secs(secs),
        check,
    };
    vec![
        c(1, "max-d2-four-elements", 5, max_d2_four),
        c(2, "small-n-maxima", 5, small_n),
        c(3, "characterization-d(n)", 10, characterization_dn),
        c(4, "tight-d(n)", 60, tight_dn),
        c(5, "tight-d(n,2n)", 60, tight_dkn),
        c(6, "prime-sets", 10, prime_sets),
        c(7, "oracle-equivalence", 30, oracle_equivalence),
        c(8, "census-identities", 10, census_identities),
        c(9, "mu-min", 30, mu_min),
        c(10, "mu-max-attainment", 60, mu_max),
        c(11, "mms-probe", 600, mms),
        c(12, "determinism", 120, determinism),
    ]
}

pub fn run_all(cfg: &ExecConfig) -> Vec<CheckOutcome> {
    criteria().iter().map(|c| c.run(cfg)).collect()
}

fn sets(list: &[&[u64]]) -> Vec<IntSet> {
    list.iter()
        .map(|xs| IntSet::new(xs.to_vec()).expect("valid literal"))
        .collect()
}

fn show(sets: &[IntSet]) -> String {
    sets.iter()
        .map(IntSet::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn max_d2_four(cfg: &ExecConfig) -> Result<(bool, String)> {
    let r = run_search(&SearchTask::new(4, Some(2), 60), cfg)?;
    let want = sets(&[&[1, 5, 7, 11], &[1, 11, 19, 29]]);
    Ok((
        r.max_value == 4 && r.argmax_sets == want,
        format!("max d_2 = {}, argmax {}", r.max_value, show(&r.argmax_sets)),
    ))
}

fn small_n(cfg: &ExecConfig) -> Result<(bool, String)> {
    let d1 = divisor_report(&IntSet::new(vec![1])?)?.d;
    let r2 = run_search(&SearchTask::new(2, None, 20), cfg)?;
    let r3 = run_search(&SearchTask::new(3, None, 30), cfg)?;
    Ok((
        d1 == 1 && r2.max_value == 2 && r3.max_value == 5 && r3.argmax_sets == sets(&[&[1, 2, 3]]),
        format!(
            "d({{1}}) = {d1}, d-max n=2: {}, n=3: {} at {}",
            r2.max_value,
            r3.max_value,
            show(&r3.argmax_sets)
        ),
    ))
}

fn characterization_dn(cfg: &ExecConfig) -> Result<(bool, String)> {
    let rep = verify_characterization(&SearchTask::new(4, None, 60), cfg)?;
    let want = sets(&[&[1, 2, 3, 6], &[1, 2, 3, 54]]);
    let classes: Vec<&Classification> = rep.classified.iter().map(|c| &c.classification).collect();
    let expected = [
        Classification::Family {
            family: FamilyKind::Quad1236,
            scale: 1,
        },
        Classification::AntiPencil,
    ];
    let ok = rep.record.max_value == 8
        && rep.record.argmax_sets == want
        && rep.consistent()
        && classes.iter().copied().eq(expected.iter());
    Ok((
        ok,
        format!(
            "max d = {}, argmax {}, {} classified, {} unexplained",
            rep.record.max_value,
            show(&rep.record.argmax_sets),
            rep.classified.len(),
            rep.unexplained.len()
        ),
    ))
}

fn tight_dn(cfg: &ExecConfig) -> Result<(bool, String)> {
    let v = verify_upper_bound(&SearchTask::new(5, None, 40), 16, cfg)?;
    let a = construct_anti_pencil(&IntSet::new(vec![1, 2, 3, 4])?)?;
    let d = divisor_report(&a)?.d;
    Ok((
        v.holds && a.elements() == [1, 2, 3, 4, 2510] && d == 16,
        format!(
            "bounded max d = {} <= 16 over {} sets; witness {a} has d = {d}",
            v.record.max_value, v.record.sets_examined
        ),
    ))
}

fn tight_dkn(cfg: &ExecConfig) -> Result<(bool, String)> {
    let v = verify_upper_bound(&SearchTask::new(6, Some(3), 30), 10, cfg)?;
    let a = construct_k_anti_pencil(&IntSet::new(vec![1, 2, 3, 4, 5])?, 3)?;
    let d3 = divisor_report(&a)?.d_k(3);
    Ok((
        v.holds && d3 == 10,
        format!(
            "bounded max d_3 = {} <= 10 over {} sets; witness {a} has d_3 = {d3}",
            v.record.max_value, v.record.sets_examined
        ),
    ))
}

/// A random set of `n` distinct integers from `lo..=hi`.
pub fn random_set(rng: &mut impl Rng, n: usize, lo: u64, hi: u64) -> IntSet {
    let mut pool: Vec<u64> = (lo..=hi).collect();
    pool.shuffle(rng);
    pool.truncate(n);
    IntSet::new(pool).expect("distinct positive elements")
}

/// A random zero-sum set of `n >= 2` distinct nonzero integers.
pub fn random_zero_sum(rng: &mut impl Rng, n: usize, mag: i64) -> ZeroSumSet {
    loop {
        let mut xs: Vec<i64> = Vec::with_capacity(n);
        while xs.len() < n - 1 {
            let x = rng.gen_range(-mag..=mag);
            if x != 0 && !xs.contains(&x) {
                xs.push(x);
            }
        }
        xs.push(-xs.iter().sum::<i64>());
        if let Ok(s) = ZeroSumSet::new(xs) {
            return s;
        }
    }
}

fn prime_sets(_: &ExecConfig) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for _ in 0..100 {
        let n = rng.gen_range(1..=10);
        let base = random_set(&mut rng, n, 2, 500);
        let a = construct_prime_set(&base)?;
        if divisor_report(&a)?.d != 1 {
            bad.push(a);
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            "100 constructions, all with d = 1".to_string()
        } else {
            format!(
                "100 constructions, {} with d != 1: {}",
                bad.len(),
                show(&bad)
            )
        },
    ))
}

fn oracle_equivalence(_: &ExecConfig) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED + 7);
    let mut mismatches = 0;
    let mut half_violations = 0;
    let mut halving_seen = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=18);
        let hi = rng.gen_range(n as u64..=4 * n as u64 + 40);
        let a = random_set(&mut rng, n, 1, hi);
        let naive = divisor_report(&a)?;
        let mitm = count_divisors_mitm(&a)?;
        let halving = halving_sets(&a)?;
        let hm = count_halving_mitm(&a)?;
        let mut naive_by_k = vec![0u64; n + 1];
        for m in &halving {
            naive_by_k[m.popcount()] += 1;
        }
        let strata_ok = (1..=n).all(|k| naive.d_k(k) == mitm.d_k(k))
            && naive.d == mitm.d
            && hm.count == halving.len() as u64
            && (0..=n).all(|k| hm.by_k[&k] == naive_by_k[k]);
        if !strata_ok {
            mismatches += 1;
        }
        halving_seen += halving.len();
        for (i, x) in halving.iter().enumerate() {
            if halving[i + 1..].iter().any(|y| x.distance(*y) <= 2) {
                half_violations += 1;
            }
        }
    }
    Ok((
        mismatches == 0 && half_violations == 0,
        format!(
            "200 sets: {mismatches} count mismatches; {halving_seen} halving masks, {half_violations} close pairs"
        ),
    ))
}

fn census_identities(_: &ExecConfig) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED + 8);
    let mut failures = 0;
    for i in 0..200 {
        // Even sizes so every instance also exercises the strong census.
        let n = 2 * rng.gen_range(1..=8);
        // Small ranges produce halving sets often.
        let hi = if i % 2 == 0 { 3 * n as u64 } else { 200 };
        let a = random_set(&mut rng, n, 1, hi);
        let r = divisor_report(&a)?;
        let strong = r.strong_census.expect("even n");
        let ok = r.d == r.census.divisor_contribution()
            && r.census.total() == 1 << (n - 1)
            && r.d_k(n / 2) == strong.divisor_contribution();
        if !ok {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("200 even-size sets, {failures} identity failures"),
    ))
}

fn mu_min(cfg: &ExecConfig) -> Result<(bool, String)> {
    let r = search_mu(&MuSearchTask::new(4, None, 8, Objective::Min), cfg)?;
    let mut rng = StdRng::seed_from_u64(SEED + 9);
    let mut failures = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=14);
        let s = random_zero_sum(&mut rng, n, if n < 6 { 6 } else { 40 });
        let m = mu_report(&s)?;
        if m.zero_subsets % 2 != 0 || m.mu != (1 << (n - 1)) + m.zero_subsets / 2 {
            failures += 1;
        }
    }
    Ok((
        r.best_value == Some(9) && failures == 0,
        format!(
            "min mu (n=4, bound 8) = {} over {} witnesses; identity failures {failures}/200",
            shown(r.best_value),
            r.witnesses.len()
        ),
    ))
}

fn shown(v: Option<u64>) -> String {
    v.map_or("none".into(), |v| v.to_string())
}

fn mu_max(cfg: &ExecConfig) -> Result<(bool, String)> {
    let r4 = search_mu(&MuSearchTask::new(4, None, 5, Objective::Max), cfg)?;
    let r5 = search_mu(&MuSearchTask::new(5, None, 4, Objective::Max), cfg)?;
    let symmetric = ZeroSumSet::new(vec![-2, -1, 1, 2])?;
    let first5 = r5
        .witnesses
        .first()
        .map(ToString::to_string)
        .unwrap_or_default();
    Ok((
        r4.best_value == Some(10)
            && r4.witnesses.contains(&symmetric)
            && r5.best_value == Some(18)
            && r5.witnesses.iter().all(|w| !w.elements().contains(&0))
            && !r5.caveat.is_empty(),
        format!(
            "n=4 bound 5: max mu {} incl. {symmetric}; n=5 bound 4: max mu {} at {first5} (+{} more); {}",
            shown(r4.best_value),
            shown(r5.best_value),
            r5.witnesses.len().saturating_sub(1),
            r5.caveat
        ),
    ))
}

fn mms(cfg: &ExecConfig) -> Result<(bool, String)> {
    let cfg = ExecConfig {
        budget: Some(cfg.budget.unwrap_or(Duration::from_secs(600))),
        ..cfg.clone()
    };
    let p = probe_mms(8, 2, 28, &cfg)?;
    let pencil = make_pencil(8)?;
    Ok((
        p.record.best_value == Some(7) && p.target == 7 && p.record.witnesses.contains(&pencil),
        format!(
            "min mu_2 = {} (target C(7,1) = {}) over {} zero-sum sets; {} witnesses incl. {pencil}",
            shown(p.record.best_value),
            p.target,
            p.record.sets_examined,
            p.record.witnesses.len()
        ),
    ))
}

fn determinism(_: &ExecConfig) -> Result<(bool, String)> {
    let d_tasks = [
        SearchTask::new(4, Some(2), 60),
        SearchTask::new(5, None, 30),
        SearchTask::new(6, Some(3), 18),
    ];
    let mu_tasks = [
        MuSearchTask::new(4, None, 8, Objective::Min),
        MuSearchTask::new(6, Some(2), 9, Objective::Max),
    ];
    let mut runs = 0;
    let mut mismatches = 0;
    for task in &d_tasks {
        let mut sums = Vec::new();
        for threads in [1, 4] {
            for shards in [1usize, 3, 7] {
                let cfg = ExecConfig {
                    threads: Some(threads),
                    ..Default::default()
                };
                let parts = (0..shards)
                    .map(|i| {
                        let mut t = task.clone();
                        t.shard = (shards > 1)
                            .then(|| ShardSelector::new(i, shards))
                            .transpose()?;
                        run_search(&t, &cfg)
                    })
                    .collect::<Result<Vec<_>>>()?;
                sums.push(SearchRecord::merge_shards(&parts)?.checksum);
                runs += 1;
            }
        }
        mismatches += sums.iter().filter(|s| **s != sums[0]).count();
    }
    for task in &mu_tasks {
        let mut sums = Vec::new();
        for threads in [1, 4] {
            for shards in [1usize, 3, 7] {
                let cfg = ExecConfig {
                    threads: Some(threads),
                    ..Default::default()
                };
                let parts = (0..shards)
                    .map(|i| {
                        let mut t = task.clone();
                        t.shard = (shards > 1)
                            .then(|| ShardSelector::new(i, shards))
                            .transpose()?;
                        search_mu(&t, &cfg)
                    })
                    .collect::<Result<Vec<_>>>()?;
                sums.push(MuSearchRecord::merge_shards(&parts)?.checksum);
                runs += 1;
            }
        }
        mismatches += sums.iter().filter(|s| **s != sums[0]).count();
    }
    Ok((
        mismatches == 0,
        format!(
            "{runs} runs over threads {{1,4}} x shards {{1,3,7}}, {mismatches} checksum mismatches"
        ),
    ))
}
