//! Brute-force and pair-automaton checkers, independent of the deciders.
//!
//! [`bounded_check`] enumerates every trace up to a depth and groups traces
//! by their [`trace_key`]; it is the only tool here for TO and ITO, and a
//! spot check for the rest. The `exact_*` checks decide their notion
//! exactly by reachability in a product of the system with itself.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::model::{ActionId, DomainId, ModelError, ObsId, StateId, System};
use crate::notion::Notion;
use crate::semantics::{self, ConsTable, Prefix, Track, View, ViewItem};
use crate::verifier::{Verdict, Witness};

/// Default cap on the number of enumerated traces.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedVerdict {
    Insecure(Witness),
    /// No violation among traces of length at most the given depth. This is
    /// not a proof of security.
    NoViolationUpTo(usize),
}

impl BoundedVerdict {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            BoundedVerdict::Insecure(w) => Some(w),
            BoundedVerdict::NoViolationUpTo(_) => None,
        }
    }

    pub fn is_insecure(&self) -> bool {
        matches!(self, BoundedVerdict::Insecure(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("depth {depth} needs {traces} traces, above the budget of {budget}")]
    BudgetExceeded { depth: usize, traces: u128, budget: u64 },
}

/// An opaque value whose equality is the notion's indistinguishability.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceKey(Vec<u32>);

fn check_ids(sys: &System, u: DomainId, alpha: &[ActionId]) -> Result<(), ModelError> {
    if u.index() >= sys.num_domains() {
        return Err(ModelError::UnknownDomain(format!("#{}", u.0)));
    }
    if let Some(a) = alpha.iter().find(|a| a.index() >= sys.num_actions()) {
        return Err(ModelError::UnknownAction(format!("#{}", a.0)));
    }
    Ok(())
}

fn push_word(out: &mut Vec<u32>, w: &[ActionId]) {
    out.push(w.len() as u32);
    out.extend(w.iter().map(|a| a.0));
}

fn push_view(out: &mut Vec<u32>, v: &View) {
    out.push(v.len() as u32);
    for x in v {
        match x {
            ViewItem::Action(a) => out.extend_from_slice(&[0, a.0]),
            ViewItem::Obs(o) => out.extend_from_slice(&[1, o.0]),
        }
    }
}

/// Key of α for observer `u` under a notion.
///
/// * p: `purge_u(α)`; ip: `ipurge_u(α)`; ta: the `ta_u(α)` tree.
/// * to: `purge_u(α)` and `tview_v(α)` for every `v ⇝ u`.
/// * ito: `purge_u(α)`, `ftview_v(α)` for every `v ⇝ u` other than `u`,
///   and `tview_u(α)`.
///
/// For to and ito these flat keys are equal exactly when the trees are.
pub fn trace_key(sys: &System, notion: Notion, u: DomainId, alpha: &[ActionId]) -> Result<TraceKey, ModelError> {
    check_ids(sys, u, alpha)?;
    let mut out = Vec::new();
    match notion {
        Notion::P => push_word(&mut out, &semantics::purge(sys, u, alpha)),
        Notion::Ip => push_word(&mut out, &semantics::ipurge(sys, u, alpha)),
        Notion::Ta => {
            let mut table = ConsTable::new();
            let t = semantics::ta(sys, &mut table, u, alpha);
            table.encode(t, &mut out);
        }
        Notion::To => {
            push_word(&mut out, &semantics::purge(sys, u, alpha));
            for v in sys.policy().interferers_of(u).iter() {
                push_view(&mut out, &semantics::tview(sys, v, alpha));
            }
        }
        Notion::Ito => {
            push_word(&mut out, &semantics::purge(sys, u, alpha));
            for v in sys.policy().interferers_of(u).iter() {
                if v == u {
                    push_view(&mut out, &semantics::tview(sys, u, alpha));
                } else {
                    push_view(&mut out, &semantics::ftview(sys, v, alpha));
                }
            }
        }
    }
    Ok(TraceKey(out))
}

/// True iff (α, β) is a genuine violation: equal keys, different final
/// observations for `u`. Invalid identifiers give false.
pub fn check_witness_pair(sys: &System, notion: Notion, u: DomainId, alpha: &[ActionId], beta: &[ActionId]) -> bool {
    let (Ok(ka), Ok(kb)) = (trace_key(sys, notion, u, alpha), trace_key(sys, notion, u, beta)) else {
        return false;
    };
    ka == kb && sys.final_obs(u, alpha) != sys.final_obs(u, beta)
}

/// Number of traces of length at most `depth`.
pub fn trace_count(num_actions: usize, depth: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=depth {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(num_actions as u128);
    }
    total
}

/// Enumerates all traces of length ≤ `depth` in length-then-lexicographic
/// order and reports the first one whose key matches an earlier trace with
/// a different observation, together with that earlier trace.
pub fn bounded_check(sys: &System, notion: Notion, depth: usize) -> Result<BoundedVerdict, OracleError> {
    bounded_check_with_budget(sys, notion, depth, DEFAULT_BUDGET)
}

pub fn bounded_check_with_budget(
    sys: &System,
    notion: Notion,
    depth: usize,
    budget: u64,
) -> Result<BoundedVerdict, OracleError> {
    let traces = trace_count(sys.num_actions(), depth);
    if traces > budget as u128 {
        return Err(OracleError::BudgetExceeded { depth, traces, budget });
    }
    let track = match notion {
        Notion::P => Track::PURGE,
        Notion::Ip => Track::STATE,
        Notion::Ta => Track::TA,
        Notion::To => Track::TO,
        Notion::Ito => Track::ITO,
    };
    let mut search = Search {
        sys,
        notion,
        track,
        table: ConsTable::new(),
        seen: vec![HashMap::new(); sys.num_domains()],
        word: Vec::new(),
    };
    let root = Prefix::initial(sys, &mut search.table, track);
    for len in 0..=depth {
        if let Some(w) = search.dfs(&root, len) {
            return Ok(BoundedVerdict::Insecure(w));
        }
    }
    Ok(BoundedVerdict::NoViolationUpTo(depth))
}

struct Search<'a> {
    sys: &'a System,
    notion: Notion,
    track: Track,
    table: ConsTable,
    // per observer: key -> (observation, length, rank) of the first trace
    seen: Vec<HashMap<u32, (ObsId, usize, u64)>>,
    word: Vec<ActionId>,
}

impl Search<'_> {
    fn dfs(&mut self, prefix: &Prefix, len: usize) -> Option<Witness> {
        if self.word.len() == len {
            return self.visit(prefix);
        }
        for a in self.sys.actions() {
            let next = prefix.extend(self.sys, &mut self.table, self.track, a);
            self.word.push(a);
            let found = self.dfs(&next, len);
            self.word.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn key(&mut self, prefix: &Prefix, u: DomainId) -> u32 {
        let i = u.index();
        match self.notion {
            Notion::P => prefix.purge[i].0,
            Notion::Ip => {
                let kept = semantics::ipurge(self.sys, u, &self.word);
                self.table.words.intern(&kept).0
            }
            Notion::Ta => prefix.ta[i].0,
            Notion::To => prefix.to[i].0,
            Notion::Ito => prefix.ito[i].0,
        }
    }

    fn visit(&mut self, prefix: &Prefix) -> Option<Witness> {
        let n = self.sys.num_actions() as u64;
        let rank = self.word.iter().fold(0u64, |r, a| r * n + a.0 as u64);
        for u in self.sys.domains() {
            let key = self.key(prefix, u);
            let o = self.sys.obs(prefix.state, u);
            match self.seen[u.index()].get(&key) {
                None => {
                    self.seen[u.index()].insert(key, (o, self.word.len(), rank));
                }
                Some(&(o1, len1, rank1)) if o1 != o => {
                    return Some(Witness {
                        domain: u,
                        alpha: unrank(n, len1, rank1),
                        beta: self.word.clone(),
                    });
                }
                Some(_) => {}
            }
        }
        None
    }
}

fn unrank(n: u64, len: usize, mut rank: u64) -> Vec<ActionId> {
    let mut out = vec![ActionId(0); len];
    for slot in out.iter_mut().rev() {
        *slot = ActionId((rank % n) as u32);
        rank /= n;
    }
    out
}

type Pair = (StateId, StateId);
/// Predecessor pair and the actions taken on each side to leave it.
type Pred = (Option<Pair>, Option<ActionId>, Option<ActionId>);

/// Breadth-first search in a pair automaton. Each pair remembers how it was
/// reached so the two traces can be read back.
struct PairSearch {
    pred: HashMap<Pair, Pred>,
    queue: VecDeque<Pair>,
}

impl PairSearch {
    fn new() -> Self {
        PairSearch { pred: HashMap::new(), queue: VecDeque::new() }
    }

    fn visit(&mut self, p: Pair, from: Option<Pair>, x: Option<ActionId>, y: Option<ActionId>) -> bool {
        if self.pred.contains_key(&p) {
            return false;
        }
        self.pred.insert(p, (from, x, y));
        self.queue.push_back(p);
        true
    }

    fn traces(&self, mut p: Pair) -> (Vec<ActionId>, Vec<ActionId>) {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        loop {
            let (from, x, y) = self.pred[&p];
            xs.extend(x);
            ys.extend(y);
            match from {
                Some(q) => p = q,
                None => break,
            }
        }
        xs.reverse();
        ys.reverse();
        (xs, ys)
    }
}

/// Exact P-security check: from `(s₀, s₀)`, both sides move together on any
/// action, or one side alone moves on an action invisible to `u`.
pub fn exact_pair_check_p(sys: &System) -> Verdict {
    let policy = sys.policy();
    for u in sys.domains() {
        let mut search = PairSearch::new();
        let s0 = sys.initial();
        search.visit((s0, s0), None, None, None);
        while let Some((s, t)) = search.queue.pop_front() {
            if sys.obs(s, u) != sys.obs(t, u) {
                let (alpha, beta) = search.traces((s, t));
                return Verdict::Insecure(Witness { domain: u, alpha, beta });
            }
            for a in sys.actions() {
                let (sa, ta) = (sys.step(s, a), sys.step(t, a));
                search.visit((sa, ta), Some((s, t)), Some(a), Some(a));
                if !policy.interferes(sys.dom(a), u) {
                    search.visit((sa, t), Some((s, t)), Some(a), None);
                    search.visit((s, ta), Some((s, t)), None, Some(a));
                }
            }
        }
    }
    Verdict::Secure
}

/// Exact IP-security check: a `v`-action with `v ̸⇝ u` is inserted at some
/// reachable state and followed by actions outside the image of `v`.
pub fn exact_pair_check_ip(sys: &System) -> Verdict {
    let policy = sys.policy();
    let reach = sys.reachable_states();
    let paths = sys.shortest_paths();
    for u in sys.domains() {
        for v in sys.domains().filter(|v| !policy.interferes(*v, u)) {
            let mut search = PairSearch::new();
            let mut roots = HashMap::new();
            for &q in &reach {
                for a in sys.actions().filter(|a| sys.dom(*a) == v) {
                    let p = (sys.step(q, a), q);
                    if search.visit(p, None, Some(a), None) {
                        roots.insert(p, q);
                    }
                }
            }
            if let Some(w) = drain(sys, u, &mut search, &roots, &paths, |c| !policy.interferes(v, sys.dom(c))) {
                return Verdict::Insecure(w);
            }
        }
    }
    Verdict::Secure
}

/// Exact TA-security check: IP-security, plus no observation change when
/// two swappable actions are exchanged and followed by actions that keep
/// them swappable.
pub fn exact_swap_check_ta(sys: &System) -> Verdict {
    let ip = exact_pair_check_ip(sys);
    if !ip.is_secure() {
        return ip;
    }
    let policy = sys.policy();
    let reach = sys.reachable_states();
    let paths = sys.shortest_paths();
    for u in sys.domains() {
        for v in sys.domains() {
            for w in sys.domains() {
                let common = policy.image_of(v).intersection(policy.image_of(w));
                if common.contains(u) || common.contains(v) || common.contains(w) {
                    continue;
                }
                let mut search = PairSearch::new();
                let mut roots = HashMap::new();
                for &q in &reach {
                    for a in sys.actions().filter(|a| sys.dom(*a) == v) {
                        for b in sys.actions().filter(|b| sys.dom(*b) == w) {
                            let p = (sys.exec_from(q, &[a, b]), sys.exec_from(q, &[b, a]));
                            if let std::collections::hash_map::Entry::Vacant(e) = search.pred.entry(p) {
                                e.insert((None, None, None));
                                search.queue.push_back(p);
                                roots.insert(p, (q, a, b));
                            }
                        }
                    }
                }
                let mut found = None;
                while let Some((s, t)) = search.queue.pop_front() {
                    if sys.obs(s, u) != sys.obs(t, u) {
                        found = Some((s, t));
                        break;
                    }
                    for c in sys.actions().filter(|c| !common.contains(sys.dom(*c))) {
                        search.visit((sys.step(s, c), sys.step(t, c)), Some((s, t)), Some(c), Some(c));
                    }
                }
                if let Some(p) = found {
                    let (xs, _) = search.traces(p);
                    let mut root = p;
                    while let Some((Some(q), _, _)) = search.pred.get(&root).copied() {
                        root = q;
                    }
                    let (q, a, b) = roots[&root];
                    let gamma = paths.path_to(q).expect("seed states are reachable");
                    let mut alpha = gamma.clone();
                    alpha.extend([a, b]);
                    alpha.extend(&xs);
                    let mut beta = gamma;
                    beta.extend([b, a]);
                    beta.extend(&xs);
                    return Verdict::Insecure(Witness { domain: u, alpha, beta });
                }
            }
        }
    }
    Verdict::Secure
}

fn drain(
    sys: &System,
    u: DomainId,
    search: &mut PairSearch,
    roots: &HashMap<Pair, StateId>,
    paths: &crate::model::ShortestPaths,
    allowed: impl Fn(ActionId) -> bool,
) -> Option<Witness> {
    while let Some((s, t)) = search.queue.pop_front() {
        if sys.obs(s, u) != sys.obs(t, u) {
            let (xs, ys) = search.traces((s, t));
            let mut root = (s, t);
            while let Some((Some(q), _, _)) = search.pred.get(&root).copied() {
                root = q;
            }
            let gamma = paths.path_to(roots[&root]).expect("seed states are reachable");
            let mut alpha = gamma.clone();
            alpha.extend(xs);
            let mut beta = gamma;
            beta.extend(ys);
            return Some(Witness { domain: u, alpha, beta });
        }
        for c in sys.actions().filter(|c| allowed(*c)) {
            search.visit((sys.step(s, c), sys.step(t, c)), Some((s, t)), Some(c), Some(c));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(trace_count(4, 0), 1);
        assert_eq!(trace_count(4, 2), 21);
        assert_eq!(trace_count(0, 5), 1);
        assert_eq!(unrank(3, 3, 5), vec![ActionId(0), ActionId(1), ActionId(2)]);
    }
}
