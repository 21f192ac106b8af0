use std::collections::BTreeSet;

use proptest::prelude::*;

use divisor_lab::enumeration::{HalfTable, SumStream};
use divisor_lab::zero_sum::{mu_report, nonnegative_counts, SignedSet, ZeroSumSet};
use divisor_lab::{
    binomial, census, construct_anti_pencil, construct_k_anti_pencil, count_divisors_mitm,
    count_halving_mitm, divisor_report, divisors_of, halving_sets, is_divisor, Error, IntSet,
    SubsetMask,
};

fn int_set(max_len: usize, max_elem: u64) -> impl Strategy<Value = IntSet> {
    prop::collection::btree_set(1..=max_elem, 1..=max_len)
        .prop_map(|s| IntSet::new(s.into_iter().collect()).unwrap())
}

fn even_int_set(max_half: usize, max_elem: u64) -> impl Strategy<Value = IntSet> {
    (1..=max_half).prop_flat_map(move |m| {
        prop::collection::btree_set(1..=max_elem, 2 * m)
            .prop_map(|s| IntSet::new(s.into_iter().collect()).unwrap())
    })
}

fn zero_sum_set(max_len: usize, bound: i64) -> impl Strategy<Value = ZeroSumSet> {
    prop::collection::btree_set(
        (1..=bound).prop_flat_map(|x| prop_oneof![Just(x), Just(-x)]),
        1..max_len,
    )
    .prop_filter_map("needs a fixing element", |s| {
        let mut xs: Vec<i64> = s.into_iter().collect();
        let fix = -xs.iter().sum::<i64>();
        if fix == 0 || xs.contains(&fix) {
            return None;
        }
        xs.push(fix);
        ZeroSumSet::new(xs).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scaling_preserves_divisors(a in int_set(10, 200), c in 1u64..50) {
        let b = a.scale(c).unwrap();
        for bits in 0..1u64 << a.len() {
            let m = SubsetMask::new(bits);
            prop_assert_eq!(is_divisor(&a, m).unwrap(), is_divisor(&b, m).unwrap());
        }
        let (ra, rb) = (divisor_report(&a).unwrap(), divisor_report(&b).unwrap());
        prop_assert_eq!(&ra.divisors, &rb.divisors);
        prop_assert_eq!(&ra.d_by_k, &rb.d_by_k);
        prop_assert_eq!(ra.census, rb.census);
        prop_assert_eq!(b.normalized().0, a.normalized().0);
    }

    #[test]
    fn report_invariants(a in int_set(12, 100)) {
        let r = divisor_report(&a).unwrap();
        let n = a.len();
        prop_assert_eq!(r.d, r.d_by_k.values().sum::<u64>());
        prop_assert_eq!(r.d, r.census.neutral + 2 * r.census.abundant);
        prop_assert_eq!(r.census.total(), 1u64 << (n - 1));
        prop_assert!(r.divisors.windows(2).all(|w| w[0].bits() < w[1].bits()));
        prop_assert_eq!(r.divisors.last().copied(), Some(SubsetMask::full(n)));
        prop_assert!(!r.divisors.contains(&SubsetMask::EMPTY));
    }

    #[test]
    fn strong_census_identity(a in even_int_set(6, 80)) {
        let n = a.len();
        let r = divisor_report(&a).unwrap();
        let s = census(&a, true).unwrap();
        prop_assert_eq!(r.d_k(n / 2), s.neutral + 2 * s.abundant);
        prop_assert_eq!(s.total(), binomial(n as u64, n as u64 / 2).unwrap() / 2);
    }

    #[test]
    fn halving_sets_close_under_complement(a in int_set(14, 40)) {
        let n = a.len();
        let hs: BTreeSet<SubsetMask> = halving_sets(&a).unwrap().into_iter().collect();
        for &h in &hs {
            prop_assert!(hs.contains(&h.complement(n)));
            prop_assert_eq!(2 * a.subset_sum(h).unwrap(), a.total());
        }
        let v: Vec<_> = hs.iter().copied().collect();
        for (i, x) in v.iter().enumerate() {
            for y in &v[i + 1..] {
                prop_assert!(x.distance(*y) > 2);
            }
        }
        prop_assert_eq!(count_halving_mitm(&a).unwrap().count, hs.len() as u64);
    }

    #[test]
    fn mitm_matches_naive(a in int_set(18, 1000)) {
        let r = divisor_report(&a).unwrap();
        let m = count_divisors_mitm(&a).unwrap();
        prop_assert_eq!(m.d, r.d);
        for k in 0..=a.len() + 1 {
            prop_assert_eq!(m.d_k(k), r.d_k(k));
        }
    }

    #[test]
    fn gray_code_walk(xs in prop::collection::vec(1u64..1000, 0..14)) {
        let mut seen = BTreeSet::new();
        let mut prev: Option<SubsetMask> = None;
        for (mask, sum) in SumStream::new(&xs) {
            let direct: u64 = mask.indices().map(|i| xs[i]).sum();
            prop_assert_eq!(sum, direct);
            if let Some(p) = prev {
                prop_assert_eq!(p.distance(mask), 1);
            }
            prop_assert!(seen.insert(mask));
            prev = Some(mask);
        }
        prop_assert_eq!(seen.len(), 1usize << xs.len());
    }

    #[test]
    fn half_table_pairing_is_symmetric(a in int_set(16, 300)) {
        let xs = a.elements();
        let (l, r) = xs.split_at(xs.len() / 2);
        let (tl, tr) = (HalfTable::build(l), HalfTable::build(r));
        prop_assert_eq!(tl.subsets(), 1u64 << l.len());
        prop_assert!(tl.sums().windows(2).all(|w| w[0] < w[1]));
        for t in divisors_of(a.total()) {
            prop_assert_eq!(tl.pair_counts(&tr, t), tr.pair_counts(&tl, t));
        }
    }

    #[test]
    fn constructions_meet_their_bounds(base in int_set(6, 30), k in 1usize..7) {
        let n = base.len() + 1;
        let a = match construct_anti_pencil(&base) {
            Err(Error::Overflow(_)) => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert!(a.largest() > base.largest());
        for bits in 1..1u64 << base.len() {
            let s: u64 = SubsetMask::new(bits).indices().map(|i| base.elements()[i]).sum();
            prop_assert_eq!(a.total() % s, 0);
        }
        prop_assert!(divisor_report(&a).unwrap().d >= 1 << (n - 1));

        if k < n {
            let a = match construct_k_anti_pencil(&base, k) {
                Err(Error::Overflow(_)) => return Ok(()),
                r => r.unwrap(),
            };
            let want = binomial(n as u64 - 1, k as u64).unwrap();
            prop_assert!(divisor_report(&a).unwrap().d_k(k) >= want);
        }
    }

    #[test]
    fn mu_identity_and_duality(z in zero_sum_set(12, 30)) {
        let n = z.len();
        let r = mu_report(&z).unwrap();
        prop_assert_eq!(r.zero_subsets % 2, 0);
        prop_assert_eq!(r.mu, (1u64 << (n - 1)) + r.zero_subsets / 2);

        let flipped = nonnegative_counts(&z.negated().as_signed().clone()).unwrap();
        for k in 0..=n {
            let c = binomial(n as u64, k as u64).unwrap();
            let zk = r.zero_by_k.get(&k).copied().unwrap_or(0);
            prop_assert_eq!(r.mu_k(k) + flipped.mu_k(k), c + zk);
        }
    }

    #[test]
    fn signed_sets_reject_bad_input(xs in prop::collection::vec(-20i64..20, 1..8)) {
        let distinct = xs.iter().collect::<BTreeSet<_>>().len() == xs.len();
        let ok = distinct && !xs.contains(&0);
        prop_assert_eq!(SignedSet::new(xs).is_ok(), ok);
    }
}
