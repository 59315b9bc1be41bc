mod common;

use std::collections::HashMap;

use nisec::model::{DomainId, StateId, SystemBuilder};
use nisec::oracle::{self, bounded_check, BoundedVerdict};
use nisec::verifier::{self, Closure, Merge, UnionFind, Verdict};
use nisec::{Notion, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn same_verdict_kind(a: &Verdict, b: &Verdict) -> bool {
    a.is_secure() == b.is_secure()
}

#[test]
fn deciders_match_exact_checks() {
    for (i, sys) in common::corpus(7, 300, 3).iter().enumerate() {
        let p = verifier::decide_p(sys);
        let ip = verifier::decide_ip(sys);
        let ta = verifier::decide_ta(sys);
        assert!(same_verdict_kind(&p, &oracle::exact_pair_check_p(sys)), "p, system {i}");
        assert!(same_verdict_kind(&ip, &oracle::exact_pair_check_ip(sys)), "ip, system {i}");
        assert!(same_verdict_kind(&ta, &oracle::exact_swap_check_ta(sys)), "ta, system {i}");
        for (n, v) in [(Notion::P, &p), (Notion::Ip, &ip), (Notion::Ta, &ta)] {
            assert!(verifier::validate_witness(sys, n, v), "{n} witness, system {i}");
        }
        for (n, v) in [
            (Notion::P, oracle::exact_pair_check_p(sys)),
            (Notion::Ip, oracle::exact_pair_check_ip(sys)),
            (Notion::Ta, oracle::exact_swap_check_ta(sys)),
        ] {
            assert!(verifier::validate_witness(sys, n, &v), "exact {n} witness, system {i}");
        }
    }
}

#[test]
fn two_token_corpus_agrees_too() {
    // fewer tokens means more secure instances
    for (i, sys) in common::corpus(11, 300, 2).iter().enumerate() {
        assert!(same_verdict_kind(&verifier::decide_p(sys), &oracle::exact_pair_check_p(sys)), "{i}");
        assert!(same_verdict_kind(&verifier::decide_ip(sys), &oracle::exact_pair_check_ip(sys)), "{i}");
        assert!(same_verdict_kind(&verifier::decide_ta(sys), &oracle::exact_swap_check_ta(sys)), "{i}");
    }
}

#[test]
fn bounded_matches_pairwise_enumeration() {
    for (i, sys) in common::corpus(3, 60, 2).iter().enumerate() {
        for n in Notion::ALL {
            let b = bounded_check(sys, n, 3).unwrap();
            assert_eq!(b.is_insecure(), common::naive_violation(sys, n, 3), "{n}, system {i}");
            if let BoundedVerdict::Insecure(w) = &b {
                assert!(oracle::check_witness_pair(sys, n, w.domain, &w.alpha, &w.beta), "{n}, system {i}");
            }
        }
    }
}

#[test]
fn secure_verdicts_survive_enumeration() {
    for sys in common::corpus(5, 150, 2).iter() {
        for n in [Notion::P, Notion::Ip, Notion::Ta] {
            let decided = verifier::decide(sys, n).unwrap();
            let bounded = bounded_check(sys, n, 5).unwrap();
            if decided.is_secure() {
                assert_eq!(bounded, BoundedVerdict::NoViolationUpTo(5));
            }
            if bounded.is_insecure() {
                assert!(!decided.is_secure());
            }
        }
    }
}

#[test]
fn hierarchy_on_corpus() {
    for sys in common::corpus(9, 300, 2).iter() {
        let p = verifier::decide_p(sys).is_secure();
        let ta = verifier::decide_ta(sys).is_secure();
        let ip = verifier::decide_ip(sys).is_secure();
        assert!(!p || ta);
        assert!(!ta || ip);
        if sys.policy().is_transitive() {
            assert_eq!(p, ip);
            assert_eq!(p, ta);
        }
    }
}

#[test]
fn union_counts_bounded_by_states() {
    for sys in common::corpus(13, 200, 1).iter() {
        for (_, stats) in [
            verifier::decide_p_stats(sys),
            verifier::decide_ip_stats(sys),
            verifier::decide_ta_stats(sys),
        ] {
            assert!(stats.max_unions() < sys.num_states().max(1));
        }
    }
}

// On IP-secure systems every bounded TA violation is a single swap of
// swappable actions that changes the observation.
#[test]
fn ta_violations_decompose_into_one_swap() {
    let mut checked = 0;
    for sys in common::corpus(17, 400, 2).iter() {
        if !verifier::decide_ip(sys).is_secure() {
            continue;
        }
        let by_swap = swap_violation(sys, 4);
        let by_enum = bounded_check(sys, Notion::Ta, 4).unwrap().is_insecure();
        if by_enum {
            assert!(by_swap);
        }
        if by_swap {
            assert!(!verifier::decide_ta(sys).is_secure());
        }
        checked += 1;
    }
    assert!(checked > 20, "only {checked} IP-secure systems");
}

fn swap_violation(sys: &System, depth: usize) -> bool {
    let reach = sys.reachable_states();
    let tails = common::traces(sys, depth.saturating_sub(2));
    for u in sys.domains() {
        for &q in &reach {
            for a in sys.actions() {
                for b in sys.actions() {
                    for t in &tails {
                        let mut w = vec![a, b];
                        w.extend(t);
                        if !nisec::semantics::swappable(sys, u, &w, 0).unwrap() {
                            continue;
                        }
                        let x = sys.exec_from(q, &w);
                        let y = sys.exec_from(q, &nisec::semantics::swap(&w, 0));
                        if sys.obs(x, u) != sys.obs(y, u) {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

// Within a ta key class, ipurge keeps the same multiset of actions.
#[test]
fn ta_classes_have_equal_ipurge_multisets() {
    for sys in common::corpus(19, 40, 2).iter() {
        let mut table = nisec::semantics::ConsTable::new();
        for u in sys.domains() {
            let mut classes: HashMap<_, Vec<usize>> = HashMap::new();
            for t in common::traces(sys, 4) {
                let key = nisec::semantics::ta(sys, &mut table, u, &t);
                let mut counts = vec![0usize; sys.num_actions()];
                for a in nisec::semantics::ipurge(sys, u, &t) {
                    counts[a.index()] += 1;
                }
                let entry = classes.entry(key).or_insert_with(|| counts.clone());
                assert_eq!(*entry, counts);
            }
        }
    }
}

#[test]
fn closure_is_smallest_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let n = rng.gen_range(2..12);
        let mut b = SystemBuilder::new();
        b.domain("U").action("a", "U");
        for i in 0..n {
            if i == 0 {
                b.initial_state("q0");
            } else {
                b.state(&format!("q{i}"));
            }
        }
        let sys = b.build().unwrap();
        let mut c = Closure::new(&sys, DomainId(0));
        let mut pairs = Vec::new();
        for _ in 0..rng.gen_range(0..n) {
            let s = StateId(rng.gen_range(0..n as u32));
            let t = StateId(rng.gen_range(0..n as u32));
            let m = c.merge(s, t, (s, s), &[], &[]);
            assert_ne!(m, Merge::Conflict);
            pairs.push((s, t));
        }
        // brute-force closure: repeated relaxation over a component array
        let mut comp: Vec<usize> = (0..n).collect();
        loop {
            let mut changed = false;
            for (s, t) in &pairs {
                let (x, y) = (comp[s.index()], comp[t.index()]);
                if x != y {
                    let m = x.min(y);
                    for c in comp.iter_mut() {
                        if *c == x || *c == y {
                            *c = m;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(c.same(StateId(i as u32), StateId(j as u32)), comp[i] == comp[j]);
            }
        }
        assert!(c.unions() < n);
    }
}

#[test]
fn store_is_forest_after_closure() {
    // run an IP-style closure by hand on a random system and check the store
    for sys in common::corpus(29, 50, 1).iter() {
        let mut c = Closure::new(sys, DomainId(0));
        let reach = sys.reachable_states();
        for &s in &reach {
            for a in sys.actions() {
                c.merge(sys.step(s, a), s, (s, s), &[a], &[]);
            }
        }
        while let Some((s, t)) = c.pop() {
            for a in sys.actions() {
                c.merge(sys.step(s, a), sys.step(t, a), (s, t), &[a], &[a]);
            }
        }
        assert!(c.store().is_forest());
        let paths = sys.shortest_paths();
        for (&(s, t), _) in c.store().iter() {
            let (x, y) = verifier::compute_witness(&paths, c.store(), s, t).unwrap();
            assert_eq!(sys.exec(&x), s);
            assert_eq!(sys.exec(&y), t);
        }
    }
}

#[test]
fn union_find_against_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut uf = UnionFind::new(30);
    let mut naive: Vec<usize> = (0..30).collect();
    for _ in 0..200 {
        let (a, b) = (rng.gen_range(0..30), rng.gen_range(0..30));
        let merged = uf.union(a, b);
        let (x, y) = (naive[a], naive[b]);
        assert_eq!(merged, x != y);
        for c in naive.iter_mut() {
            if *c == y {
                *c = x;
            }
        }
        let q = rng.gen_range(0..30);
        let r = rng.gen_range(0..30);
        assert_eq!(uf.same(q, r), naive[q] == naive[r]);
    }
}
