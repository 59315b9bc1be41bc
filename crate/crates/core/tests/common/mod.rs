//! Definition-level reference implementations. Deliberately naive: plain
//! recursion on the last action, owned trees, no interning.
#![allow(dead_code)]

use nisec::gen::{gen_random_system, GenParams};
use nisec::model::{ActionId, DomainId, DomainSet, ObsId, Policy, System};
use nisec::semantics::{ConsTable, InfoTree, Mid, TreeNode, ViewItem};
use nisec::Notion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NTree {
    Eps,
    Leaf(Vec<ViewItem>),
    Node(Box<NTree>, NMid, ActionId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NMid {
    Tree(Box<NTree>),
    View(Vec<ViewItem>),
}

pub fn flows(sys: &System, a: ActionId, u: DomainId) -> bool {
    sys.policy().interferes(sys.dom(a), u)
}

/// sources(aα, u) by recursion on the first action.
pub fn sources(sys: &System, alpha: &[ActionId], u: DomainId) -> DomainSet {
    match alpha.split_first() {
        None => DomainSet::singleton(u),
        Some((&a, rest)) => {
            let src = sources(sys, rest, u);
            if src.iter().any(|v| flows(sys, a, v)) {
                src.with(sys.dom(a))
            } else {
                src
            }
        }
    }
}

pub fn ipurge(sys: &System, alpha: &[ActionId], u: DomainId) -> Vec<ActionId> {
    match alpha.split_first() {
        None => Vec::new(),
        Some((&a, rest)) => {
            let mut tail = ipurge(sys, rest, u);
            if sources(sys, alpha, u).contains(sys.dom(a)) {
                tail.insert(0, a);
            }
            tail
        }
    }
}

pub fn purge(sys: &System, alpha: &[ActionId], u: DomainId) -> Vec<ActionId> {
    alpha.iter().copied().filter(|a| flows(sys, *a, u)).collect()
}

pub fn obs_after(sys: &System, alpha: &[ActionId], u: DomainId) -> ObsId {
    let mut s = sys.initial();
    for a in alpha {
        s = sys.step(s, *a);
    }
    sys.obs(s, u)
}

/// view_u(αa) = (view_u(α)·b) ∘ obs_u(s₀·αa)
pub fn view(sys: &System, alpha: &[ActionId], u: DomainId) -> Vec<ViewItem> {
    match alpha.split_last() {
        None => vec![ViewItem::Obs(obs_after(sys, &[], u))],
        Some((&a, prefix)) => {
            let mut v = view(sys, prefix, u);
            if sys.dom(a) == u {
                v.push(ViewItem::Action(a));
            }
            let o = ViewItem::Obs(obs_after(sys, alpha, u));
            if v.last() != Some(&o) {
                v.push(o);
            }
            v
        }
    }
}

pub fn tview(sys: &System, alpha: &[ActionId], u: DomainId) -> Vec<ViewItem> {
    match alpha.iter().rposition(|a| sys.dom(*a) == u) {
        None => Vec::new(),
        Some(i) => {
            let mut v = view(sys, &alpha[..i], u);
            v.push(ViewItem::Action(alpha[i]));
            v
        }
    }
}

pub fn ftview(sys: &System, alpha: &[ActionId], u: DomainId) -> Vec<ViewItem> {
    match alpha.iter().rposition(|a| sys.dom(*a) == u) {
        None => view(sys, &[], u),
        Some(i) => view(sys, &alpha[..=i], u),
    }
}

pub fn ta(sys: &System, alpha: &[ActionId], u: DomainId) -> NTree {
    match alpha.split_last() {
        None => NTree::Eps,
        Some((&a, prefix)) => {
            if flows(sys, a, u) {
                NTree::Node(
                    Box::new(ta(sys, prefix, u)),
                    NMid::Tree(Box::new(ta(sys, prefix, sys.dom(a)))),
                    a,
                )
            } else {
                ta(sys, prefix, u)
            }
        }
    }
}

pub fn to(sys: &System, alpha: &[ActionId], u: DomainId) -> NTree {
    match alpha.split_last() {
        None => NTree::Leaf(view(sys, &[], u)),
        Some((&a, prefix)) => {
            if flows(sys, a, u) {
                NTree::Node(Box::new(to(sys, prefix, u)), NMid::View(view(sys, prefix, sys.dom(a))), a)
            } else {
                to(sys, prefix, u)
            }
        }
    }
}

pub fn ito(sys: &System, alpha: &[ActionId], u: DomainId) -> NTree {
    match alpha.split_last() {
        None => NTree::Leaf(view(sys, &[], u)),
        Some((&a, prefix)) => {
            if !flows(sys, a, u) {
                ito(sys, prefix, u)
            } else if sys.dom(a) == u {
                NTree::Node(Box::new(ito(sys, prefix, u)), NMid::View(view(sys, prefix, u)), a)
            } else {
                NTree::Node(Box::new(ito(sys, prefix, u)), NMid::View(view(sys, alpha, sys.dom(a))), a)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NKey {
    Word(Vec<ActionId>),
    Tree(NTree),
}

pub fn key(sys: &System, notion: Notion, alpha: &[ActionId], u: DomainId) -> NKey {
    match notion {
        Notion::P => NKey::Word(purge(sys, alpha, u)),
        Notion::Ip => NKey::Word(ipurge(sys, alpha, u)),
        Notion::Ta => NKey::Tree(ta(sys, alpha, u)),
        Notion::To => NKey::Tree(to(sys, alpha, u)),
        Notion::Ito => NKey::Tree(ito(sys, alpha, u)),
    }
}

/// All traces of length ≤ depth in length-then-lexicographic order.
pub fn traces(sys: &System, depth: usize) -> Vec<Vec<ActionId>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &layer {
            for a in sys.actions() {
                let mut x: Vec<ActionId> = t.clone();
                x.push(a);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Pairwise comparison of every two traces up to `depth`.
pub fn naive_violation(sys: &System, notion: Notion, depth: usize) -> bool {
    let all = traces(sys, depth);
    for u in sys.domains() {
        let keyed: Vec<(NKey, ObsId)> = all.iter().map(|t| (key(sys, notion, t, u), obs_after(sys, t, u))).collect();
        for i in 0..keyed.len() {
            for j in 0..i {
                if keyed[i].0 == keyed[j].0 && keyed[i].1 != keyed[j].1 {
                    return true;
                }
            }
        }
    }
    false
}

pub fn random_params(rng: &mut ChaCha8Rng, obs: usize) -> GenParams {
    GenParams::new(
        rng.gen_range(1..=6),
        rng.gen_range(1..=4),
        rng.gen_range(1..=3),
        obs,
        [0.0, 0.25, 0.5, 0.75][rng.gen_range(0..4)],
        rng.gen(),
    )
}

/// A reproducible corpus of small random systems.
pub fn corpus(seed: u64, n: usize, obs: usize) -> Vec<System> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| gen_random_system(&random_params(&mut rng, obs)).unwrap())
        .collect()
}

pub fn random_word(rng: &mut ChaCha8Rng, sys: &System, max_len: usize) -> Vec<ActionId> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| ActionId::from_index(rng.gen_range(0..sys.num_actions())))
        .collect()
}

pub fn rebuild(sys: &System, policy: Policy) -> System {
    let names = sys.states().map(|s| sys.state_name(s).to_string()).collect();
    let actions = sys.actions().map(|a| (sys.action_name(a).to_string(), sys.dom(a))).collect();
    let step = sys.states().flat_map(|s| sys.actions().map(move |a| sys.step(s, a))).collect();
    let obs = sys
        .states()
        .flat_map(|s| sys.domains().map(move |u| sys.obs_token(s, u).to_string()))
        .collect();
    System::from_tables(policy, names, sys.initial(), actions, step, obs).unwrap()
}

pub fn transitive_closure(sys: &System) -> System {
    let p = sys.policy();
    let mut reach: Vec<DomainSet> = p.domains().map(|u| p.image_of(u)).collect();
    loop {
        let mut changed = false;
        for u in 0..reach.len() {
            let next = p.image(reach[u]).unwrap().union(reach[u]);
            let mut all = next;
            for v in next.iter() {
                all = all.union(reach[v.index()]);
            }
            if all != reach[u] {
                reach[u] = all;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let edges: Vec<(DomainId, DomainId)> =
        p.domains().flat_map(|u| reach[u.index()].iter().map(move |v| (u, v))).collect();
    let names = p.domains().map(|u| p.name(u).to_string()).collect();
    rebuild(sys, Policy::new(names, edges).unwrap())
}

pub fn expand(table: &ConsTable, t: InfoTree) -> NTree {
    match table.get(t) {
        TreeNode::Epsilon => NTree::Eps,
        TreeNode::Leaf(v) => NTree::Leaf(table.views.to_vec(v)),
        TreeNode::Node { left, mid, label } => NTree::Node(
            Box::new(expand(table, left)),
            match mid {
                Mid::Tree(m) => NMid::Tree(Box::new(expand(table, m))),
                Mid::View(v) => NMid::View(table.views.to_vec(v)),
            },
            label,
        ),
    }
}
