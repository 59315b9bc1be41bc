mod common;

use std::collections::HashMap;

use nisec::gen::{gen_random_system, GenParams};
use nisec::model::{ActionId, DomainSet, System};
use nisec::oracle::trace_key;
use nisec::semantics::{self, is_stutter_free, ConsTable, Prefix, Track};
use nisec::Notion;
use proptest::prelude::*;

prop_compose! {
    fn system_and_word(max_len: usize)(
        states in 1usize..=6,
        actions in 1usize..=4,
        domains in 1usize..=4,
        tokens in 1usize..=3,
        density in prop::sample::select(vec![0.0, 0.2, 0.4, 0.7]),
        seed in any::<u64>(),
        raw in prop::collection::vec(any::<u32>(), 0..=max_len),
    ) -> (System, Vec<ActionId>) {
        let sys = gen_random_system(&GenParams::new(states, actions, domains, tokens, density, seed)).unwrap();
        let word = raw.iter().map(|r| ActionId(r % actions as u32)).collect();
        (sys, word)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ipurge_is_idempotent((sys, w) in system_and_word(10)) {
        for u in sys.domains() {
            let once = semantics::ipurge(&sys, u, &w);
            prop_assert_eq!(semantics::ipurge(&sys, u, &once), once);
        }
    }

    #[test]
    fn purge_is_idempotent((sys, w) in system_and_word(10)) {
        for u in sys.domains() {
            let once = semantics::purge(&sys, u, &w);
            prop_assert_eq!(semantics::purge(&sys, u, &once), once);
        }
    }

    #[test]
    fn ipurge_is_purge_on_transitive_policies((sys, w) in system_and_word(10)) {
        let t = common::transitive_closure(&sys);
        prop_assert!(t.policy().is_transitive());
        for u in t.domains() {
            prop_assert_eq!(semantics::ipurge(&t, u, &w), semantics::purge(&t, u, &w));
        }
    }

    #[test]
    fn swapping_swappable_actions_keeps_ta((sys, w) in system_and_word(8)) {
        let mut table = ConsTable::new();
        for u in sys.domains() {
            for i in 0..w.len().saturating_sub(1) {
                if semantics::swappable(&sys, u, &w, i).unwrap() {
                    let swapped = semantics::swap(&w, i);
                    prop_assert_eq!(
                        semantics::ta(&sys, &mut table, u, &w),
                        semantics::ta(&sys, &mut table, u, &swapped)
                    );
                }
            }
        }
    }

    #[test]
    fn views_are_stutter_free((sys, w) in system_and_word(12)) {
        for u in sys.domains() {
            prop_assert!(is_stutter_free(&semantics::view(&sys, u, &w)));
            prop_assert!(is_stutter_free(&semantics::ftview(&sys, u, &w)));
            prop_assert!(is_stutter_free(&semantics::tview(&sys, u, &w)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn irrelevant_actions_do_not_change_ta(
        (sys, w) in system_and_word(8),
        mask in any::<u16>(),
    ) {
        let mut table = ConsTable::new();
        let variant: Vec<ActionId> = w.iter().enumerate().filter(|(i, _)| mask & (1 << i) == 0).map(|(_, a)| *a).collect();
        for u in sys.domains() {
            let full = semantics::ta(&sys, &mut table, u, &w);
            let ip = semantics::ipurge(&sys, u, &w);
            prop_assert_eq!(full, semantics::ta(&sys, &mut table, u, &ip));
            if semantics::ipurge(&sys, u, &variant) == ip {
                prop_assert_eq!(full, semantics::ta(&sys, &mut table, u, &variant));
            }
        }
    }

    #[test]
    fn library_matches_definitions((sys, w) in system_and_word(7)) {
        let mut table = ConsTable::new();
        let p = Prefix::of(&sys, &mut table, Track::ALL, &w);
        for u in sys.domains() {
            prop_assert_eq!(semantics::sources(&sys, u, &w), common::sources(&sys, &w, u));
            prop_assert_eq!(semantics::ipurge(&sys, u, &w), common::ipurge(&sys, &w, u));
            prop_assert_eq!(semantics::view(&sys, u, &w), common::view(&sys, &w, u));
            prop_assert_eq!(semantics::tview(&sys, u, &w), common::tview(&sys, &w, u));
            prop_assert_eq!(semantics::ftview(&sys, u, &w), common::ftview(&sys, &w, u));
            prop_assert_eq!(common::expand(&table, p.ta[u.index()]), common::ta(&sys, &w, u));
            prop_assert_eq!(common::expand(&table, p.to[u.index()]), common::to(&sys, &w, u));
            prop_assert_eq!(common::expand(&table, p.ito[u.index()]), common::ito(&sys, &w, u));
        }
    }

    #[test]
    fn run_composes((sys, w) in system_and_word(10), cut in any::<usize>()) {
        let k = if w.is_empty() { 0 } else { cut % (w.len() + 1) };
        let mid = sys.run(sys.initial(), &w[..k]).unwrap();
        prop_assert_eq!(sys.run(mid, &w[k..]).unwrap(), sys.run(sys.initial(), &w).unwrap());
    }

    #[test]
    fn policy_image_is_extensive_and_monotone((sys, _w) in system_and_word(0), a in any::<u64>(), b in any::<u64>()) {
        let p = sys.policy();
        let all = p.all().bits();
        let x = DomainSet::from_bits(a & all);
        let y = DomainSet::from_bits((a | b) & all);
        prop_assert!(x.is_subset(p.image(x).unwrap()));
        prop_assert!(p.image(x).unwrap().is_subset(p.image(y).unwrap()));
    }

    #[test]
    fn reachable_states_are_closed((sys, _w) in system_and_word(0)) {
        let reach = sys.reachable_states();
        for &s in &reach {
            for a in sys.actions() {
                prop_assert!(reach.contains(&sys.step(s, a)));
            }
        }
    }

    #[test]
    fn tree_handles_match_canonical_encodings((sys, w) in system_and_word(6), (_s2, v) in system_and_word(6)) {
        let v: Vec<ActionId> = v.iter().map(|a| ActionId(a.0 % sys.num_actions() as u32)).collect();
        let mut table = ConsTable::new();
        for u in sys.domains() {
            let (x, y) = (semantics::ta(&sys, &mut table, u, &w), semantics::ta(&sys, &mut table, u, &v));
            let kx = trace_key(&sys, Notion::Ta, u, &w).unwrap();
            let ky = trace_key(&sys, Notion::Ta, u, &v).unwrap();
            prop_assert_eq!(x == y, kx == ky);
        }
    }
}

#[test]
fn fig6_first_actions_are_swappable() {
    let sys = nisec::gen::fixture("fig6").unwrap();
    let l = sys.domain("L").unwrap();
    let w = sys.word("h1 h2").unwrap();
    assert!(semantics::swappable(&sys, l, &w, 0).unwrap());
    let w = sys.word("h1 d1").unwrap();
    assert!(!semantics::swappable(&sys, l, &w, 0).unwrap());
}

/// Groups traces by two labellings and checks that they induce the same partition.
fn same_partition<A: std::hash::Hash + Eq, B: std::hash::Hash + Eq>(labels: impl Iterator<Item = (A, B)>) -> bool {
    let mut fwd: HashMap<A, usize> = HashMap::new();
    let mut back: HashMap<B, usize> = HashMap::new();
    let mut pairs: HashMap<usize, usize> = HashMap::new();
    for (a, b) in labels {
        let n = fwd.len();
        let ia = *fwd.entry(a).or_insert(n);
        let m = back.len();
        let ib = *back.entry(b).or_insert(m);
        if *pairs.entry(ia).or_insert(ib) != ib {
            return false;
        }
    }
    fwd.len() == back.len()
}

#[test]
fn flat_keys_partition_like_trees() {
    let mut systems: Vec<System> = nisec::gen::FIXTURES.iter().take(4).map(|f| f.build()).collect();
    systems.extend(common::corpus(41, 30, 2));
    for sys in &systems {
        let mut table = ConsTable::new();
        let traces = common::traces(sys, 4);
        let prefixes: Vec<Prefix> = traces
            .iter()
            .map(|t| Prefix::of(sys, &mut table, Track::TO.union(Track::ITO), t))
            .collect();
        for u in sys.domains() {
            let to = traces.iter().zip(&prefixes).map(|(t, p)| (p.to[u.index()], trace_key(sys, Notion::To, u, t).unwrap()));
            assert!(same_partition(to));
            let ito = traces.iter().zip(&prefixes).map(|(t, p)| (p.ito[u.index()], trace_key(sys, Notion::Ito, u, t).unwrap()));
            assert!(same_partition(ito));
        }
    }
}

// Leaving the observer's own tview out of the flat key merges traces whose
// trees differ: with H not interfering with L and L's observation flipping
// after h, the traces `h l` and `l` agree on purge, yet their to-trees differ in the view L had before acting.
#[test]
fn flat_key_without_observer_is_coarser() {
    let mut b = nisec::SystemBuilder::new();
    b.domain("H").domain("L");
    b.action("h", "H").action("l", "L");
    b.initial_state("s0").state("s1");
    b.trans("s0", "h", "s1");
    b.obs("s0", "L", "0").obs("s1", "L", "1");
    let sys = b.build().unwrap();
    let l = sys.domain("L").unwrap();
    let x = sys.word("h l").unwrap();
    let y = sys.word("l").unwrap();
    // L is its only interferer, so a key over v ≠ u is purge_L alone
    assert_eq!(sys.policy().interferers_of(l), DomainSet::singleton(l));
    assert_eq!(semantics::purge(&sys, l, &x), semantics::purge(&sys, l, &y));
    let mut table = ConsTable::new();
    assert_ne!(semantics::to(&sys, &mut table, l, &x), semantics::to(&sys, &mut table, l, &y));
    assert_ne!(semantics::ito(&sys, &mut table, l, &x), semantics::ito(&sys, &mut table, l, &y));
    assert_ne!(trace_key(&sys, Notion::To, l, &x).unwrap(), trace_key(&sys, Notion::To, l, &y).unwrap());
    assert_ne!(trace_key(&sys, Notion::Ito, l, &x).unwrap(), trace_key(&sys, Notion::Ito, l, &y).unwrap());
}
