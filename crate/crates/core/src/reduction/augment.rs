//! Final-action augmentation M ↦ M′.
//!
//! Every action `a` gets a twin `final-a` of the same domain. A domain that
//! has performed a final action sees a constant ⊥ from then on, and all its
//! later actions are ignored. States of M′ are pairs of a state of M and the
//! set of finished domains; only the reachable pairs are built.

use std::collections::{HashMap, VecDeque};

use crate::model::{ActionId, DomainId, DomainSet, StateId, System};

/// M′ together with the maps back to M.
#[derive(Clone, Debug)]
pub struct AugmentedSystem {
    pub system: System,
    /// For every action of M′, the action of M it is based on.
    pub base: Vec<ActionId>,
    /// Whether each action of M′ is a final action.
    pub is_final: Vec<bool>,
    /// For every state of M′, its component in M.
    pub base_state: Vec<StateId>,
    /// For every state of M′, the set of finished domains.
    pub finished: Vec<DomainSet>,
    /// The token used for ⊥.
    pub bottom: String,
}

fn fresh(taken: impl Fn(&str) -> bool, stem: &str) -> String {
    let mut name = stem.to_string();
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// Builds M′ from M.
pub fn augment_final(sys: &System) -> AugmentedSystem {
    let na = sys.num_actions();
    let bottom = fresh(|t| sys.tokens().iter().any(|x| x == t), "bot");
    let mut actions: Vec<(String, DomainId)> = sys.actions().map(|a| (sys.action_name(a).to_string(), sys.dom(a))).collect();
    for a in sys.actions() {
        let name = fresh(
            |n| actions.iter().any(|(m, _)| m == n),
            &format!("final-{}", sys.action_name(a)),
        );
        actions.push((name, sys.dom(a)));
    }
    let base: Vec<ActionId> = (0..2 * na).map(|i| ActionId::from_index(i % na.max(1))).collect();
    let is_final: Vec<bool> = (0..2 * na).map(|i| i >= na).collect();

    let init = (sys.initial(), DomainSet::EMPTY);
    let mut index: HashMap<(StateId, DomainSet), StateId> = HashMap::from([(init, StateId(0))]);
    let mut states = vec![init];
    let mut step = Vec::new();
    let mut queue = VecDeque::from([StateId(0)]);
    while let Some(id) = queue.pop_front() {
        let (s, done) = states[id.index()];
        for i in 0..2 * na {
            let a = base[i];
            let d = sys.dom(a);
            let next = if done.contains(d) {
                (s, done)
            } else if is_final[i] {
                (sys.step(s, a), done.with(d))
            } else {
                (sys.step(s, a), done)
            };
            let nid = match index.get(&next) {
                Some(n) => *n,
                None => {
                    let n = StateId::from_index(states.len());
                    index.insert(next, n);
                    states.push(next);
                    queue.push_back(n);
                    n
                }
            };
            step.push(nid);
        }
    }

    let names: Vec<String> = states
        .iter()
        .map(|(s, done)| {
            let set: Vec<&str> = done.iter().map(|u| sys.domain_name(u)).collect();
            format!("{}{{{}}}", sys.state_name(*s), set.join(","))
        })
        .collect();
    let mut obs = Vec::with_capacity(states.len() * sys.num_domains());
    for (s, done) in &states {
        for u in sys.domains() {
            obs.push(if done.contains(u) { bottom.clone() } else { sys.obs_token(*s, u).to_string() });
        }
    }
    let system = System::from_tables(sys.policy().clone(), names, StateId(0), actions, step, obs)
        .expect("augmented construction is total and deterministic");
    AugmentedSystem {
        system,
        base,
        is_final,
        base_state: states.iter().map(|(s, _)| *s).collect(),
        finished: states.iter().map(|(_, d)| *d).collect(),
        bottom,
    }
}

impl AugmentedSystem {
    /// The run in M that a run of M′ simulates: each domain's actions after
    /// its first final action are dropped, and that final action becomes its
    /// base action.
    pub fn convertback(&self, alpha: &[ActionId]) -> Vec<ActionId> {
        let mut done = DomainSet::EMPTY;
        let mut out = Vec::new();
        for &a in alpha {
            let d = self.system.dom(a);
            if done.contains(d) {
                continue;
            }
            out.push(self.base[a.index()]);
            if self.is_final[a.index()] {
                done.insert(d);
            }
        }
        out
    }

    /// The final twin of an action of M.
    pub fn final_of(&self, a: ActionId) -> ActionId {
        ActionId::from_index(a.index() + self.base.len() / 2)
    }
}
