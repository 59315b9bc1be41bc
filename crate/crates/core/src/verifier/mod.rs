//! Polynomial-time deciders for P-, IP- and TA-security.
//!
//! Each decider computes, per observer (and per interfering domain pair),
//! the least equivalence on states closed under the unwinding conditions,
//! using union-find. A merge of two states with different observations
//! for the observer is a violation; the witness store then yields two
//! traces that lead to the offending pair.

pub mod store;
pub mod union_find;

use std::collections::VecDeque;

use crate::model::{ActionId, DomainId, ShortestPaths, StateId, System};
use crate::notion::Notion;
use crate::semantics::{self, ConsTable};

pub use store::{Entry, Steps, StoreError, WitnessStore};
pub use union_find::UnionFind;

/// Two traces that should be indistinguishable to `domain` but are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub domain: DomainId,
    pub alpha: Vec<ActionId>,
    pub beta: Vec<ActionId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Secure,
    Insecure(Witness),
}

impl Verdict {
    pub fn is_secure(&self) -> bool {
        matches!(self, Verdict::Secure)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Secure => None,
            Verdict::Insecure(w) => Some(w),
        }
    }
}

/// Union counts of each closure iteration, in iteration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub unions: Vec<usize>,
}

impl Stats {
    pub fn iterations(&self) -> usize {
        self.unions.len()
    }

    pub fn max_unions(&self) -> usize {
        self.unions.iter().copied().max().unwrap_or(0)
    }
}

/// Outcome of [`Closure::merge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Merge {
    /// The two states were already equivalent.
    Same,
    Merged,
    /// Merged, and the observer sees different observations in them.
    Conflict,
}

/// One closure iteration: union-find, witness store and FIFO worklist.
#[derive(Debug)]
pub struct Closure<'a> {
    sys: &'a System,
    observer: DomainId,
    uf: UnionFind,
    store: WitnessStore,
    queue: VecDeque<(StateId, StateId)>,
    unions: usize,
}

impl<'a> Closure<'a> {
    pub fn new(sys: &'a System, observer: DomainId) -> Self {
        Closure {
            sys,
            observer,
            uf: UnionFind::new(sys.num_states()),
            store: WitnessStore::new(),
            queue: VecDeque::new(),
            unions: 0,
        }
    }

    /// Starts a fresh iteration for another observer.
    pub fn reset(&mut self, observer: DomainId) {
        self.observer = observer;
        self.uf.reset();
        self.store.clear();
        self.queue.clear();
        self.unions = 0;
    }

    /// Records that `s` and `t` must be equivalent because `parent` is,
    /// with `s = parent.0 · x` and `t = parent.1 · y`.
    pub fn merge(
        &mut self,
        s: StateId,
        t: StateId,
        parent: (StateId, StateId),
        x: &[ActionId],
        y: &[ActionId],
    ) -> Merge {
        if self.uf.same(s.index(), t.index()) {
            return Merge::Same;
        }
        let entry = Entry {
            parent,
            x: x.iter().copied().collect(),
            y: y.iter().copied().collect(),
        };
        self.store
            .insert((s, t), entry)
            .expect("a pair of inequivalent states is stored at most once");
        self.queue.push_back((s, t));
        self.uf.union(s.index(), t.index());
        self.unions += 1;
        if self.sys.obs(s, self.observer) != self.sys.obs(t, self.observer) {
            Merge::Conflict
        } else {
            Merge::Merged
        }
    }

    pub fn pop(&mut self) -> Option<(StateId, StateId)> {
        self.queue.pop_front()
    }

    pub fn same(&mut self, s: StateId, t: StateId) -> bool {
        self.uf.same(s.index(), t.index())
    }

    pub fn unions(&self) -> usize {
        self.unions
    }

    pub fn store(&self) -> &WitnessStore {
        &self.store
    }

    /// Closes under synchronized steps on every action accepted by `allowed`.
    /// Returns the first conflicting pair.
    fn propagate(&mut self, allowed: impl Fn(ActionId) -> bool) -> Option<(StateId, StateId)> {
        let sys = self.sys;
        while let Some((s, t)) = self.pop() {
            for a in sys.actions().filter(|a| allowed(*a)) {
                let (sa, ta) = (sys.step(s, a), sys.step(t, a));
                if self.merge(sa, ta, (s, t), &[a], &[a]) == Merge::Conflict {
                    return Some((sa, ta));
                }
            }
        }
        None
    }
}

/// Walks the store from `(s, t)` back to a diagonal root `(r, r)` and
/// prefixes both suffixes with a shortest path to `r`.
pub fn compute_witness(
    paths: &ShortestPaths,
    store: &WitnessStore,
    s: StateId,
    t: StateId,
) -> Result<(Vec<ActionId>, Vec<ActionId>), StoreError> {
    let (root, xs, ys) = store.unwind(s, t)?;
    let gamma = paths.path_to(root).ok_or(StoreError::Dangling(root, root))?;
    let mut alpha = gamma.clone();
    alpha.extend(xs);
    let mut beta = gamma;
    beta.extend(ys);
    Ok((alpha, beta))
}

fn insecure(sys: &System, paths: &ShortestPaths, c: &Closure, pair: (StateId, StateId)) -> Verdict {
    let (alpha, beta) = compute_witness(paths, c.store(), pair.0, pair.1)
        .expect("every merged pair has a complete provenance chain");
    debug_assert_ne!(sys.final_obs(c.observer, &alpha), sys.final_obs(c.observer, &beta));
    Verdict::Insecure(Witness { domain: c.observer, alpha, beta })
}

/// Decides P-security.
pub fn decide_p(sys: &System) -> Verdict {
    decide_p_stats(sys).0
}

pub fn decide_p_stats(sys: &System) -> (Verdict, Stats) {
    let mut stats = Stats::default();
    let reach = sys.reachable_states();
    let paths = sys.shortest_paths();
    let policy = sys.policy();
    let mut c = Closure::new(sys, DomainId(0));
    for u in sys.domains() {
        c.reset(u);
        let hidden: Vec<ActionId> = sys.actions().filter(|a| !policy.interferes(sys.dom(*a), u)).collect();
        let mut conflict = None;
        'lr: for &s in &reach {
            for &a in &hidden {
                let sa = sys.step(s, a);
                if c.merge(sa, s, (s, s), &[a], &[]) == Merge::Conflict {
                    conflict = Some((sa, s));
                    break 'lr;
                }
            }
        }
        if conflict.is_none() {
            conflict = c.propagate(|_| true);
        }
        stats.unions.push(c.unions());
        if let Some(pair) = conflict {
            return (insecure(sys, &paths, &c, pair), stats);
        }
    }
    (Verdict::Secure, stats)
}

/// Decides IP-security.
pub fn decide_ip(sys: &System) -> Verdict {
    decide_ip_stats(sys).0
}

pub fn decide_ip_stats(sys: &System) -> (Verdict, Stats) {
    let mut stats = Stats::default();
    let paths = sys.shortest_paths();
    let v = ip_phase(sys, &sys.reachable_states(), &paths, &mut stats);
    (v, stats)
}

fn ip_phase(sys: &System, reach: &[StateId], paths: &ShortestPaths, stats: &mut Stats) -> Verdict {
    let policy = sys.policy();
    let mut c = Closure::new(sys, DomainId(0));
    for u in sys.domains() {
        for v in sys.domains().filter(|v| !policy.interferes(*v, u)) {
            c.reset(u);
            let own: Vec<ActionId> = sys.actions().filter(|a| sys.dom(*a) == v).collect();
            let mut conflict = None;
            'lr: for &s in reach {
                for &a in &own {
                    let sa = sys.step(s, a);
                    if c.merge(sa, s, (s, s), &[a], &[]) == Merge::Conflict {
                        conflict = Some((sa, s));
                        break 'lr;
                    }
                }
            }
            if conflict.is_none() {
                conflict = c.propagate(|a| !policy.interferes(v, sys.dom(a)));
            }
            stats.unions.push(c.unions());
            if let Some(pair) = conflict {
                return insecure(sys, paths, &c, pair);
            }
        }
    }
    Verdict::Secure
}

/// Decides TA-security: IP-security plus invariance under swaps of
/// actions from mutually non-interfering domains.
pub fn decide_ta(sys: &System) -> Verdict {
    decide_ta_stats(sys).0
}

pub fn decide_ta_stats(sys: &System) -> (Verdict, Stats) {
    let mut stats = Stats::default();
    let reach = sys.reachable_states();
    let paths = sys.shortest_paths();
    let ip = ip_phase(sys, &reach, &paths, &mut stats);
    if !ip.is_secure() {
        return (ip, stats);
    }
    let policy = sys.policy();
    let mut c = Closure::new(sys, DomainId(0));
    for u in sys.domains() {
        for v in sys.domains() {
            for w in sys.domains() {
                if policy.interferes(w, v) || policy.interferes(v, w) || policy.interferes(w, u) {
                    continue;
                }
                debug_assert_ne!(v, w);
                c.reset(u);
                let av: Vec<ActionId> = sys.actions().filter(|a| sys.dom(*a) == v).collect();
                let bw: Vec<ActionId> = sys.actions().filter(|b| sys.dom(*b) == w).collect();
                let mut conflict = None;
                'lr: for &s in &reach {
                    for &a in &av {
                        for &b in &bw {
                            let sab = sys.step(sys.step(s, a), b);
                            let sba = sys.step(sys.step(s, b), a);
                            if c.merge(sab, sba, (s, s), &[a, b], &[b, a]) == Merge::Conflict {
                                conflict = Some((sab, sba));
                                break 'lr;
                            }
                        }
                    }
                }
                if conflict.is_none() {
                    conflict = c.propagate(|a| {
                        let d = sys.dom(a);
                        !policy.interferes(v, d) || !policy.interferes(w, d)
                    });
                }
                stats.unions.push(c.unions());
                if let Some(pair) = conflict {
                    return (insecure(sys, &paths, &c, pair), stats);
                }
            }
        }
    }
    (Verdict::Secure, stats)
}

/// Runs the decider for a decidable notion; `None` for TO and ITO.
pub fn decide(sys: &System, notion: Notion) -> Option<Verdict> {
    match notion {
        Notion::P => Some(decide_p(sys)),
        Notion::Ip => Some(decide_ip(sys)),
        Notion::Ta => Some(decide_ta(sys)),
        Notion::To | Notion::Ito => None,
    }
}

/// Checks the violation a verdict claims: equal key for the notion and
/// different final observations. Secure verdicts are vacuously valid.
pub fn validate_witness(sys: &System, notion: Notion, verdict: &Verdict) -> bool {
    match verdict {
        Verdict::Secure => true,
        Verdict::Insecure(w) => witness_holds(sys, notion, w),
    }
}

/// Direct check of one witness against the definitions.
pub fn witness_holds(sys: &System, notion: Notion, w: &Witness) -> bool {
    let u = w.domain;
    if u.index() >= sys.num_domains()
        || w.alpha.iter().chain(&w.beta).any(|a| a.index() >= sys.num_actions())
    {
        return false;
    }
    if sys.final_obs(u, &w.alpha) == sys.final_obs(u, &w.beta) {
        return false;
    }
    let mut table = ConsTable::new();
    match notion {
        Notion::P => semantics::purge(sys, u, &w.alpha) == semantics::purge(sys, u, &w.beta),
        Notion::Ip => semantics::ipurge(sys, u, &w.alpha) == semantics::ipurge(sys, u, &w.beta),
        Notion::Ta => {
            semantics::ta(sys, &mut table, u, &w.alpha) == semantics::ta(sys, &mut table, u, &w.beta)
        }
        Notion::To => {
            semantics::to(sys, &mut table, u, &w.alpha) == semantics::to(sys, &mut table, u, &w.beta)
        }
        Notion::Ito => {
            semantics::ito(sys, &mut table, u, &w.alpha) == semantics::ito(sys, &mut table, u, &w.beta)
        }
    }
}
