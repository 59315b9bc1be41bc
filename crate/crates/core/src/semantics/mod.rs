//! Trace semantics: purges, views and the information trees.
//!
//! The plain functions here take a trace as a slice of already-validated
//! action ids and index the system tables directly; passing ids from a
//! different system panics. Tree-valued functions intern their results in a
//! caller-supplied [`ConsTable`] so that equality is handle equality.

pub mod cons;
pub mod trace;

use thiserror::Error;

use crate::model::{ActionId, DomainId, DomainSet, System};

pub use cons::{absorb, is_stutter_free, ConsTable, InfoTree, Mid, SeqId, TreeNode, View, ViewItem};
pub use trace::{Prefix, Track};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("position {pos} out of range for a trace of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
}

/// `purge_u(α)`: the actions of α whose domain may interfere with `u`.
pub fn purge(sys: &System, u: DomainId, alpha: &[ActionId]) -> Vec<ActionId> {
    alpha.iter().copied().filter(|a| sys.may_affect(*a, u)).collect()
}

/// `sources(α, u)`, computed right to left.
pub fn sources(sys: &System, u: DomainId, alpha: &[ActionId]) -> DomainSet {
    let policy = sys.policy();
    let mut src = DomainSet::singleton(u);
    for a in alpha.iter().rev() {
        let d = sys.dom(*a);
        if !policy.image_of(d).intersection(src).is_empty() {
            src.insert(d);
        }
    }
    src
}

/// `ipurge_u(α)`: actions that can lie on a permitted causal chain to `u`.
pub fn ipurge(sys: &System, u: DomainId, alpha: &[ActionId]) -> Vec<ActionId> {
    let policy = sys.policy();
    let mut src = DomainSet::singleton(u);
    let mut kept = Vec::new();
    for a in alpha.iter().rev() {
        let d = sys.dom(*a);
        if !policy.image_of(d).intersection(src).is_empty() {
            src.insert(d);
            kept.push(*a);
        }
    }
    kept.reverse();
    kept
}

/// `view_u(α)`: u's own actions interleaved with the stutter-free sequence of
/// its observations, each taken in the state after the action.
pub fn view(sys: &System, u: DomainId, alpha: &[ActionId]) -> View {
    let mut s = sys.initial();
    let mut v = vec![ViewItem::Obs(sys.obs(s, u))];
    for a in alpha {
        s = sys.step(s, *a);
        if sys.dom(*a) == u {
            v.push(ViewItem::Action(*a));
        }
        absorb(&mut v, sys.obs(s, u));
    }
    v
}

/// `tview_u(α)`: the prefix of `view_u(α)` ending in u's last action, or the
/// empty sequence when u does not act in α.
pub fn tview(sys: &System, u: DomainId, alpha: &[ActionId]) -> View {
    let mut v = view(sys, u, alpha);
    match v.iter().rposition(|x| matches!(x, ViewItem::Action(_))) {
        Some(i) => {
            v.truncate(i + 1);
            v
        }
        None => Vec::new(),
    }
}

/// `lpre_u(α)`: the longest prefix of α ending in an action of `u`.
pub fn lpre<'a>(sys: &System, u: DomainId, alpha: &'a [ActionId]) -> &'a [ActionId] {
    match alpha.iter().rposition(|a| sys.dom(*a) == u) {
        Some(i) => &alpha[..=i],
        None => &alpha[..0],
    }
}

/// `ftview_u(α) = view_u(lpre_u(α))`.
pub fn ftview(sys: &System, u: DomainId, alpha: &[ActionId]) -> View {
    view(sys, u, lpre(sys, u, alpha))
}

/// `ta_u(α)`.
pub fn ta(sys: &System, table: &mut ConsTable, u: DomainId, alpha: &[ActionId]) -> InfoTree {
    Prefix::of(sys, table, Track::TA, alpha).ta[u.index()]
}

/// `to_u(α)`.
pub fn to(sys: &System, table: &mut ConsTable, u: DomainId, alpha: &[ActionId]) -> InfoTree {
    Prefix::of(sys, table, Track::TO, alpha).to[u.index()]
}

/// `ito_u(α)`.
pub fn ito(sys: &System, table: &mut ConsTable, u: DomainId, alpha: &[ActionId]) -> InfoTree {
    Prefix::of(sys, table, Track::ITO, alpha).ito[u.index()]
}

/// Whether `alpha[i]` and `alpha[i+1]` are swappable for observer `u`:
/// the images of their domains share no domain from `{u}` or from the
/// domains acting in `alpha[i..]`.
pub fn swappable(sys: &System, u: DomainId, alpha: &[ActionId], i: usize) -> Result<bool, SemanticsError> {
    if i + 1 >= alpha.len() {
        return Err(SemanticsError::PositionOutOfRange { pos: i, len: alpha.len() });
    }
    let policy = sys.policy();
    let common = policy
        .image_of(sys.dom(alpha[i]))
        .intersection(policy.image_of(sys.dom(alpha[i + 1])));
    let later: DomainSet = alpha[i..].iter().map(|a| sys.dom(*a)).collect();
    Ok(common.intersection(later.with(u)).is_empty())
}

/// α with positions `i` and `i+1` exchanged.
pub fn swap(alpha: &[ActionId], i: usize) -> Vec<ActionId> {
    let mut out = alpha.to_vec();
    out.swap(i, i + 1);
    out
}
