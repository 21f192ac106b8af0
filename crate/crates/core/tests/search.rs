use std::time::Duration;

use divisor_lab::search::{
    run_search, Checkpoint, ExecConfig, SearchRecord, SearchTask, ShardSelector,
};
use divisor_lab::zero_sum::{search_mu, MuSearchRecord, MuSearchTask};
use divisor_lab::{divisor_report, Error, Objective};

fn cfg() -> ExecConfig {
    ExecConfig::default()
}

/// Runs to completion through repeated budget overruns, round-tripping the
/// checkpoint through disk each time.
fn run_in_slices<T>(mut step: impl FnMut(&ExecConfig) -> Result<T, Error>) -> (T, usize) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.json");
    let mut cfg = ExecConfig {
        budget: Some(Duration::from_millis(5)),
        ..ExecConfig::default()
    };
    let mut interruptions = 0;
    loop {
        match step(&cfg) {
            Ok(r) => return (r, interruptions),
            Err(Error::BudgetExceeded(cp)) => {
                interruptions += 1;
                assert!(interruptions < 100_000, "no progress");
                cp.save(&path).unwrap();
                let loaded = Checkpoint::load(&path).unwrap();
                assert_eq!(&loaded, cp.as_ref());
                cfg.resume = Some(loaded);
                // Later slices get more room so the loop always terminates.
                cfg.budget = cfg.budget.map(|b| b * 2);
            }
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn resume_reproduces_uninterrupted_run() {
    let task = SearchTask::new(5, None, 45);
    let full = run_search(&task, &cfg()).unwrap();
    let (sliced, interruptions) = run_in_slices(|c| run_search(&task, c));
    assert!(interruptions > 0);
    assert_eq!(sliced.max_value, full.max_value);
    assert_eq!(sliced.argmax_sets, full.argmax_sets);
    assert_eq!(sliced.sets_examined, full.sets_examined);
    assert_eq!(sliced.checksum, full.checksum);
}

#[test]
fn zero_budget_checkpoints_everything_pending() {
    let task = SearchTask::new(4, Some(2), 30);
    let cfg = ExecConfig {
        budget: Some(Duration::ZERO),
        ..ExecConfig::default()
    };
    let Err(Error::BudgetExceeded(cp)) = run_search(&task, &cfg) else {
        panic!("expected a checkpoint");
    };
    assert!(cp.shards_done.is_empty());
    assert!(cp.shard_count > 0);
    let resumed = run_search(
        &task,
        &ExecConfig {
            resume: Some(*cp),
            ..ExecConfig::default()
        },
    )
    .unwrap();
    assert_eq!(
        resumed.checksum,
        run_search(&task, &ExecConfig::default()).unwrap().checksum
    );
}

#[test]
fn checkpoint_rejects_other_task() {
    let cfg = ExecConfig {
        budget: Some(Duration::ZERO),
        ..ExecConfig::default()
    };
    let Err(Error::BudgetExceeded(cp)) = run_search(&SearchTask::new(4, None, 20), &cfg) else {
        panic!("expected a checkpoint");
    };
    let other = ExecConfig {
        resume: Some(*cp),
        ..ExecConfig::default()
    };
    assert!(matches!(
        run_search(&SearchTask::new(4, None, 21), &other),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn mu_search_resumes() {
    let task = MuSearchTask::new(7, Some(2), 12, Objective::Min);
    let full = search_mu(&task, &cfg()).unwrap();
    let (sliced, _) = run_in_slices(|c| search_mu(&task, c));
    assert_eq!(sliced.best_value, full.best_value);
    assert_eq!(sliced.witnesses, full.witnesses);
    assert_eq!(sliced.checksum, full.checksum);
}

#[test]
fn shards_partition_and_merge() {
    for count in [1, 2, 5, 11] {
        let task = SearchTask::new(5, Some(2), 30);
        let full = run_search(&task, &cfg()).unwrap();
        let parts: Vec<SearchRecord> = (0..count)
            .map(|i| {
                let mut t = task.clone();
                t.shard = Some(ShardSelector::new(i, count).unwrap());
                run_search(&t, &cfg()).unwrap()
            })
            .collect();
        assert_eq!(
            parts.iter().map(|p| p.sets_examined).sum::<u64>(),
            full.sets_examined
        );
        let mut reversed = parts.clone();
        reversed.reverse();
        for merged in [
            SearchRecord::merge_shards(&parts),
            SearchRecord::merge_shards(&reversed),
        ] {
            let merged = merged.unwrap();
            assert_eq!(merged.max_value, full.max_value);
            assert_eq!(merged.argmax_sets, full.argmax_sets);
            assert_eq!(merged.checksum, full.checksum);
        }

        let mt = MuSearchTask::new(6, None, 7, Objective::Max);
        let full = search_mu(&mt, &cfg()).unwrap();
        let parts: Vec<MuSearchRecord> = (0..count)
            .map(|i| {
                let mut t = mt.clone();
                t.shard = Some(ShardSelector::new(i, count).unwrap());
                search_mu(&t, &cfg()).unwrap()
            })
            .collect();
        let merged = MuSearchRecord::merge_shards(&parts).unwrap();
        assert_eq!(merged.checksum, full.checksum);
        assert_eq!(merged.best_value, full.best_value);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let task = SearchTask::new(5, None, 35);
    let one = run_search(
        &task,
        &ExecConfig {
            threads: Some(1),
            ..ExecConfig::default()
        },
    )
    .unwrap();
    let three = run_search(
        &task,
        &ExecConfig {
            threads: Some(3),
            ..ExecConfig::default()
        },
    )
    .unwrap();
    assert_eq!(one.checksum, three.checksum);
    assert_eq!(one.argmax_sets, three.argmax_sets);
}

#[test]
fn argmax_sets_reverify_and_bounds_grow() {
    let mut last = 0;
    for m in [12, 20, 30, 45] {
        let r = run_search(&SearchTask::new(5, None, m), &cfg()).unwrap();
        assert!(r.max_value >= last);
        last = r.max_value;
        for s in &r.argmax_sets {
            assert_eq!(s.gcd(), 1);
            assert_eq!(divisor_report(s).unwrap().d, r.max_value);
            assert!(s.largest() <= m);
        }
    }
}

#[test]
fn unnormalized_search_sees_scaled_copies() {
    let mut t = SearchTask::new(4, None, 60);
    t.normalize_gcd = false;
    let r = run_search(&t, &cfg()).unwrap();
    assert_eq!(r.max_value, 8);
    let shown: Vec<String> = r.argmax_sets.iter().map(ToString::to_string).collect();
    for s in ["{1,2,3,6}", "{2,4,6,12}", "{10,20,30,60}", "{1,2,3,54}"] {
        assert!(shown.iter().any(|x| x == s), "missing {s}");
    }
}

#[test]
fn invalid_tasks_are_rejected() {
    assert!(matches!(
        run_search(&SearchTask::new(0, None, 10), &cfg()),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        run_search(&SearchTask::new(13, None, 20), &cfg()),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        run_search(&SearchTask::new(5, None, 4), &cfg()),
        Err(Error::InvalidArgument(_))
    ));
    assert!(ShardSelector::new(3, 3).is_err());
}
