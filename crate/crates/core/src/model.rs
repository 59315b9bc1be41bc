//! Policies and deterministic state-observed machines.
//!
//! A [`System`] is the tuple of states, initial state, actions, transition
//! function, per-domain observation function and action-to-domain map,
//! together with the interference [`Policy`] it is checked against. All
//! identifiers are dense indices in declaration order, so every iteration
//! over domains, actions or states is deterministic.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Observation token used when a state/domain pair has no explicit observation.
pub const NULL_OBS: &str = "_";

/// Upper bound on the number of domains (domain sets are 64-bit masks).
pub const MAX_DOMAINS: usize = 64;

macro_rules! index_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }

            #[inline]
            pub fn from_index(i: usize) -> Self {
                Self(i as u32)
            }
        }
    };
}

index_type!(
    /// A security domain, by declaration index.
    DomainId
);
index_type!(
    /// An action, by declaration index.
    ActionId
);
index_type!(
    /// A state, by declaration index.
    StateId
);
index_type!(
    /// An interned observation token of one system.
    ObsId
);

/// A set of domains, stored as a bit mask over declaration indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DomainSet(u64);

impl DomainSet {
    pub const EMPTY: DomainSet = DomainSet(0);

    pub fn singleton(u: DomainId) -> Self {
        DomainSet(1u64 << u.0)
    }

    pub fn from_bits(bits: u64) -> Self {
        DomainSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, u: DomainId) -> bool {
        u.0 < 64 && self.0 & (1u64 << u.0) != 0
    }

    pub fn insert(&mut self, u: DomainId) {
        self.0 |= 1u64 << u.0;
    }

    pub fn with(mut self, u: DomainId) -> Self {
        self.insert(u);
        self
    }

    pub fn union(self, other: DomainSet) -> Self {
        DomainSet(self.0 | other.0)
    }

    pub fn intersection(self, other: DomainSet) -> Self {
        DomainSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: DomainSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in ascending declaration order.
    pub fn iter(self) -> impl Iterator<Item = DomainId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                Some(DomainId(i))
            }
        })
    }
}

impl FromIterator<DomainId> for DomainSet {
    fn from_iter<I: IntoIterator<Item = DomainId>>(iter: I) -> Self {
        let mut set = DomainSet::EMPTY;
        for u in iter {
            set.insert(u);
        }
        set
    }
}

/// One problem found while assembling or validating a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: Option<usize>, message: impl Into<String>) -> Self {
        Diagnostic { line, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {}: {}", line, self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// A non-empty list of diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn iter(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter()
    }

    pub fn contains(&self, needle: &str) -> bool {
        self.0.iter().any(|d| d.message.contains(needle))
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("{0}")]
    Invalid(Diagnostics),
}

/// A reflexive interference relation over named domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    names: Vec<String>,
    index: HashMap<String, DomainId>,
    /// `image[u]` = { v | u ⇝ v }
    image: Vec<DomainSet>,
    /// `interferers[u]` = { v | v ⇝ u }
    interferers: Vec<DomainSet>,
}

impl Policy {
    /// Builds a policy from domain names and `(u, v)` edges meaning `u ⇝ v`.
    /// Reflexive edges are added for every domain; duplicates are ignored.
    pub fn new(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (DomainId, DomainId)>,
    ) -> Result<Policy, ModelError> {
        let mut diags = Vec::new();
        if names.is_empty() {
            diags.push(Diagnostic::new(None, "policy declares no domains"));
        }
        if names.len() > MAX_DOMAINS {
            diags.push(Diagnostic::new(
                None,
                format!("too many domains ({} > {MAX_DOMAINS})", names.len()),
            ));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), DomainId::from_index(i)).is_some() {
                diags.push(Diagnostic::new(None, format!("duplicate domain `{name}`")));
            }
        }
        if !diags.is_empty() {
            return Err(ModelError::Invalid(Diagnostics(diags)));
        }
        let n = names.len();
        let mut image: Vec<DomainSet> = (0..n).map(|u| DomainSet::singleton(DomainId::from_index(u))).collect();
        for (u, v) in edges {
            if u.index() >= n {
                return Err(ModelError::UnknownDomain(format!("#{}", u.0)));
            }
            if v.index() >= n {
                return Err(ModelError::UnknownDomain(format!("#{}", v.0)));
            }
            image[u.index()].insert(v);
        }
        let mut interferers = vec![DomainSet::EMPTY; n];
        for (u, img) in image.iter().enumerate() {
            for v in img.iter() {
                interferers[v.index()].insert(DomainId::from_index(u));
            }
        }
        Ok(Policy { names, index, image, interferers })
    }

    /// Convenience constructor from string names, e.g. `&[("H", "D"), ("D", "L")]`.
    pub fn from_names(domains: &[&str], edges: &[(&str, &str)]) -> Result<Policy, ModelError> {
        let names: Vec<String> = domains.iter().map(|s| s.to_string()).collect();
        let lookup = |s: &str| {
            domains
                .iter()
                .position(|d| *d == s)
                .map(DomainId::from_index)
                .ok_or_else(|| ModelError::UnknownDomain(s.to_string()))
        };
        let mut ids = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            ids.push((lookup(u)?, lookup(v)?));
        }
        Policy::new(names, ids)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn domains(&self) -> impl Iterator<Item = DomainId> + '_ {
        (0..self.names.len()).map(DomainId::from_index)
    }

    pub fn all(&self) -> DomainSet {
        self.domains().collect()
    }

    pub fn name(&self, u: DomainId) -> &str {
        &self.names[u.index()]
    }

    pub fn domain(&self, name: &str) -> Option<DomainId> {
        self.index.get(name).copied()
    }

    #[inline]
    pub fn interferes(&self, u: DomainId, v: DomainId) -> bool {
        self.image[u.index()].contains(v)
    }

    /// `⇝(u)`: every domain `u` may interfere with, including `u`.
    #[inline]
    pub fn image_of(&self, u: DomainId) -> DomainSet {
        self.image[u.index()]
    }

    /// Every domain that may interfere with `u`, including `u`.
    #[inline]
    pub fn interferers_of(&self, u: DomainId) -> DomainSet {
        self.interferers[u.index()]
    }

    /// `⇝(U)` for a set of domains.
    pub fn image(&self, sources: DomainSet) -> Result<DomainSet, ModelError> {
        if !sources.is_subset(self.all()) {
            let bad = sources.iter().find(|u| u.index() >= self.len()).unwrap();
            return Err(ModelError::UnknownDomain(format!("#{}", bad.0)));
        }
        Ok(sources
            .iter()
            .fold(DomainSet::EMPTY, |acc, u| acc.union(self.image_of(u))))
    }

    pub fn is_transitive(&self) -> bool {
        self.domains().all(|u| {
            self.image_of(u)
                .iter()
                .all(|v| self.image_of(v).is_subset(self.image_of(u)))
        })
    }

    /// Non-reflexive edges in declaration order.
    pub fn edges(&self) -> impl Iterator<Item = (DomainId, DomainId)> + '_ {
        self.domains().flat_map(move |u| {
            self.image_of(u)
                .iter()
                .filter(move |v| *v != u)
                .map(move |v| (u, v))
        })
    }
}

/// A finite deterministic state-observed machine together with its policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    policy: Policy,
    state_names: Vec<String>,
    state_index: HashMap<String, StateId>,
    initial: StateId,
    action_names: Vec<String>,
    action_index: HashMap<String, ActionId>,
    action_dom: Vec<DomainId>,
    /// row-major `[state][action]`
    step: Vec<StateId>,
    /// row-major `[state][domain]`
    obs: Vec<ObsId>,
    tokens: Vec<String>,
}

impl System {
    /// Assembles a system from dense tables.
    ///
    /// `step` is indexed `[s * |A| + a]` and `obs` is indexed `[s * |D| + u]`.
    /// Observation tokens are re-interned in a canonical order (null token
    /// first, then first occurrence in state-major order) so that two systems
    /// with the same tables compare equal.
    pub fn from_tables(
        policy: Policy,
        state_names: Vec<String>,
        initial: StateId,
        actions: Vec<(String, DomainId)>,
        step: Vec<StateId>,
        obs: Vec<String>,
    ) -> Result<System, ModelError> {
        let mut diags = Vec::new();
        let ns = state_names.len();
        let na = actions.len();
        let nd = policy.len();
        if ns == 0 {
            diags.push(Diagnostic::new(None, "no states declared"));
        }
        if initial.index() >= ns {
            diags.push(Diagnostic::new(None, "initial state out of range"));
        }
        if step.len() != ns * na {
            diags.push(Diagnostic::new(None, "transition table is not total"));
        }
        if obs.len() != ns * nd {
            diags.push(Diagnostic::new(None, "observation table is not total"));
        }
        if let Some(t) = step.iter().find(|t| t.index() >= ns) {
            diags.push(Diagnostic::new(None, format!("transition target #{} out of range", t.0)));
        }
        let mut state_index = HashMap::with_capacity(ns);
        for (i, name) in state_names.iter().enumerate() {
            check_name(&mut diags, "state", name);
            if state_index.insert(name.clone(), StateId::from_index(i)).is_some() {
                diags.push(Diagnostic::new(None, format!("duplicate state `{name}`")));
            }
        }
        let mut action_index = HashMap::with_capacity(na);
        let mut action_names = Vec::with_capacity(na);
        let mut action_dom = Vec::with_capacity(na);
        for (i, (name, dom)) in actions.into_iter().enumerate() {
            check_name(&mut diags, "action", &name);
            if dom.index() >= nd {
                diags.push(Diagnostic::new(None, format!("action `{name}` has unknown domain")));
            }
            if action_index.insert(name.clone(), ActionId::from_index(i)).is_some() {
                diags.push(Diagnostic::new(None, format!("duplicate action `{name}`")));
            }
            action_names.push(name);
            action_dom.push(dom);
        }
        for name in policy.names.iter() {
            check_name(&mut diags, "domain", name);
        }
        let mut tokens = vec![NULL_OBS.to_string()];
        let mut token_index: HashMap<&str, ObsId> = HashMap::new();
        token_index.insert(NULL_OBS, ObsId(0));
        let mut obs_ids = Vec::with_capacity(obs.len());
        for tok in obs.iter() {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) || tok.contains('#') {
                diags.push(Diagnostic::new(None, format!("invalid observation token `{tok}`")));
            }
            let id = match token_index.get(tok.as_str()) {
                Some(id) => *id,
                None => {
                    let id = ObsId::from_index(tokens.len());
                    tokens.push(tok.clone());
                    token_index.insert(tok.as_str(), id);
                    id
                }
            };
            obs_ids.push(id);
        }
        if !diags.is_empty() {
            return Err(ModelError::Invalid(Diagnostics(diags)));
        }
        Ok(System {
            policy,
            state_names,
            state_index,
            initial,
            action_names,
            action_index,
            action_dom,
            step,
            obs: obs_ids,
            tokens,
        })
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn num_domains(&self) -> usize {
        self.policy.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.num_states()).map(StateId::from_index)
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> {
        (0..self.num_actions()).map(ActionId::from_index)
    }

    pub fn domains(&self) -> impl Iterator<Item = DomainId> {
        (0..self.num_domains()).map(DomainId::from_index)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.index()]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a.index()]
    }

    pub fn domain_name(&self, u: DomainId) -> &str {
        self.policy.name(u)
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn action(&self, name: &str) -> Option<ActionId> {
        self.action_index.get(name).copied()
    }

    pub fn domain(&self, name: &str) -> Option<DomainId> {
        self.policy.domain(name)
    }

    /// Resolves a list of action names.
    pub fn actions_named<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<ActionId>, ModelError> {
        names
            .iter()
            .map(|n| {
                self.action(n.as_ref())
                    .ok_or_else(|| ModelError::UnknownAction(n.as_ref().to_string()))
            })
            .collect()
    }

    /// Resolves a whitespace-separated action sequence such as `"h d l"`.
    pub fn word(&self, text: &str) -> Result<Vec<ActionId>, ModelError> {
        let names: Vec<&str> = text.split_whitespace().collect();
        self.actions_named(&names)
    }

    pub fn action_names<'a>(&'a self, alpha: &'a [ActionId]) -> impl Iterator<Item = &'a str> + 'a {
        alpha.iter().map(move |a| self.action_name(*a))
    }

    /// Renders an action sequence as space-separated names (`ε` when empty).
    pub fn format_word(&self, alpha: &[ActionId]) -> String {
        if alpha.is_empty() {
            "ε".to_string()
        } else {
            self.action_names(alpha).collect::<Vec<_>>().join(" ")
        }
    }

    #[inline]
    pub fn dom(&self, a: ActionId) -> DomainId {
        self.action_dom[a.index()]
    }

    #[inline]
    pub fn step(&self, s: StateId, a: ActionId) -> StateId {
        self.step[s.index() * self.action_names.len() + a.index()]
    }

    #[inline]
    pub fn obs(&self, s: StateId, u: DomainId) -> ObsId {
        self.obs[s.index() * self.policy.len() + u.index()]
    }

    pub fn token(&self, o: ObsId) -> &str {
        &self.tokens[o.index()]
    }

    pub fn obs_token(&self, s: StateId, u: DomainId) -> &str {
        self.token(self.obs(s, u))
    }

    pub fn obs_token_id(&self, token: &str) -> Option<ObsId> {
        self.tokens.iter().position(|t| t == token).map(ObsId::from_index)
    }

    /// Every token of this system; index 0 is always the null token.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// `dom(a) ⇝ u`
    #[inline]
    pub fn may_affect(&self, a: ActionId, u: DomainId) -> bool {
        self.policy.interferes(self.dom(a), u)
    }

    /// Runs `alpha` from `start`, checking every identifier.
    pub fn run(&self, start: StateId, alpha: &[ActionId]) -> Result<StateId, ModelError> {
        if start.index() >= self.num_states() {
            return Err(ModelError::UnknownState(format!("#{}", start.0)));
        }
        if let Some(a) = alpha.iter().find(|a| a.index() >= self.num_actions()) {
            return Err(ModelError::UnknownAction(format!("#{}", a.0)));
        }
        Ok(self.exec_from(start, alpha))
    }

    /// `s · alpha` for identifiers already known to be valid.
    pub fn exec_from(&self, start: StateId, alpha: &[ActionId]) -> StateId {
        alpha.iter().fold(start, |s, a| self.step(s, *a))
    }

    /// `s₀ · alpha`
    pub fn exec(&self, alpha: &[ActionId]) -> StateId {
        self.exec_from(self.initial, alpha)
    }

    /// `obs_u(s₀ · alpha)`
    pub fn final_obs(&self, u: DomainId, alpha: &[ActionId]) -> ObsId {
        self.obs(self.exec(alpha), u)
    }

    /// States reachable from the initial state, layer by layer; each BFS
    /// layer is listed in declaration order.
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        seen[self.initial.index()] = true;
        let mut order = vec![self.initial];
        let mut layer = vec![self.initial];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &s in &layer {
                for a in self.actions() {
                    let t = self.step(s, a);
                    if !seen[t.index()] {
                        seen[t.index()] = true;
                        next.push(t);
                    }
                }
            }
            next.sort_unstable();
            order.extend_from_slice(&next);
            layer = next;
        }
        order
    }

    /// A shortest action sequence from the initial state to every reachable state.
    pub fn shortest_paths(&self) -> ShortestPaths {
        let mut pred: Vec<Option<(StateId, ActionId)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        seen[self.initial.index()] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(s) = queue.pop_front() {
            for a in self.actions() {
                let t = self.step(s, a);
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    pred[t.index()] = Some((s, a));
                    queue.push_back(t);
                }
            }
        }
        ShortestPaths { initial: self.initial, pred, seen }
    }

    /// Re-checks every structural invariant of an assembled system.
    pub fn validate(&self) -> Result<(), Diagnostics> {
        let mut diags = Vec::new();
        for u in self.domains() {
            if !self.policy.interferes(u, u) {
                diags.push(Diagnostic::new(None, format!("policy is not reflexive at `{}`", self.domain_name(u))));
            }
        }
        if self.step.len() != self.num_states() * self.num_actions() {
            diags.push(Diagnostic::new(None, "transition table is not total"));
        }
        if self.obs.len() != self.num_states() * self.num_domains() {
            diags.push(Diagnostic::new(None, "observation table is not total"));
        }
        if self.step.iter().any(|t| t.index() >= self.num_states()) {
            diags.push(Diagnostic::new(None, "transition target out of range"));
        }
        if self.obs.iter().any(|o| o.index() >= self.tokens.len()) {
            diags.push(Diagnostic::new(None, "observation out of range"));
        }
        if self.action_dom.iter().any(|u| u.index() >= self.num_domains()) {
            diags.push(Diagnostic::new(None, "unknown domain"));
        }
        if self.initial.index() >= self.num_states() {
            diags.push(Diagnostic::new(None, "initial state out of range"));
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Diagnostics(diags))
        }
    }
}

fn check_name(diags: &mut Vec<Diagnostic>, kind: &str, name: &str) {
    if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains('#') {
        diags.push(Diagnostic::new(None, format!("invalid {kind} name `{name}`")));
    }
}

/// Checks every invariant of an assembled system.
pub fn validate(system: &System) -> Result<(), Diagnostics> {
    system.validate()
}

/// Breadth-first predecessor tree rooted at the initial state.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    initial: StateId,
    pred: Vec<Option<(StateId, ActionId)>>,
    seen: Vec<bool>,
}

impl ShortestPaths {
    pub fn is_reachable(&self, s: StateId) -> bool {
        self.seen[s.index()]
    }

    /// A shortest path from the initial state to `s`, if `s` is reachable.
    pub fn path_to(&self, s: StateId) -> Option<Vec<ActionId>> {
        if !self.is_reachable(s) {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = s;
        while cur != self.initial {
            let (prev, a) = self.pred[cur.index()]?;
            path.push(a);
            cur = prev;
        }
        path.reverse();
        Some(path)
    }
}

#[derive(Clone, Debug)]
struct Decl<T> {
    value: T,
    line: Option<usize>,
}

/// Assembles a [`System`] from named declarations.
///
/// Missing transitions default to self-loops and missing observations to
/// [`NULL_OBS`]. Reflexive policy edges are implicit.
#[derive(Clone, Debug, Default)]
pub struct SystemBuilder {
    line: Option<usize>,
    domains: Vec<Decl<String>>,
    edges: Vec<Decl<(String, String)>>,
    actions: Vec<Decl<(String, String)>>,
    states: Vec<Decl<(String, bool)>>,
    trans: Vec<Decl<(String, String, String)>>,
    obs: Vec<Decl<(String, String, String)>>,
}

impl SystemBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Attributes subsequent declarations to a source line.
    pub fn at_line(&mut self, line: usize) -> &mut Self {
        self.line = Some(line);
        self
    }

    fn decl<T>(&self, value: T) -> Decl<T> {
        Decl { value, line: self.line }
    }

    pub fn domain(&mut self, name: &str) -> &mut Self {
        let d = self.decl(name.to_string());
        self.domains.push(d);
        self
    }

    pub fn interferes(&mut self, from: &str, to: &str) -> &mut Self {
        let d = self.decl((from.to_string(), to.to_string()));
        self.edges.push(d);
        self
    }

    pub fn action(&mut self, name: &str, domain: &str) -> &mut Self {
        let d = self.decl((name.to_string(), domain.to_string()));
        self.actions.push(d);
        self
    }

    pub fn state(&mut self, name: &str) -> &mut Self {
        let d = self.decl((name.to_string(), false));
        self.states.push(d);
        self
    }

    pub fn initial_state(&mut self, name: &str) -> &mut Self {
        let d = self.decl((name.to_string(), true));
        self.states.push(d);
        self
    }

    pub fn trans(&mut self, from: &str, action: &str, to: &str) -> &mut Self {
        let d = self.decl((from.to_string(), action.to_string(), to.to_string()));
        self.trans.push(d);
        self
    }

    pub fn obs(&mut self, state: &str, domain: &str, token: &str) -> &mut Self {
        let d = self.decl((state.to_string(), domain.to_string(), token.to_string()));
        self.obs.push(d);
        self
    }

    /// Every problem with the declarations, without building.
    pub fn validate(&self) -> Vec<Diagnostic> {
        match self.assemble() {
            Ok(_) => Vec::new(),
            Err(d) => d.0,
        }
    }

    pub fn build(&self) -> Result<System, Diagnostics> {
        self.assemble()
    }

    fn assemble(&self) -> Result<System, Diagnostics> {
        let mut diags = Vec::new();

        let mut domain_index: HashMap<&str, DomainId> = HashMap::new();
        let mut domain_names = Vec::new();
        for d in &self.domains {
            if domain_index.contains_key(d.value.as_str()) {
                diags.push(Diagnostic::new(d.line, format!("duplicate domain `{}`", d.value)));
                continue;
            }
            domain_index.insert(&d.value, DomainId::from_index(domain_names.len()));
            domain_names.push(d.value.clone());
        }
        if domain_names.is_empty() {
            diags.push(Diagnostic::new(None, "no domains declared"));
        }
        if domain_names.len() > MAX_DOMAINS {
            diags.push(Diagnostic::new(None, format!("too many domains (limit {MAX_DOMAINS})")));
        }

        let mut edges = Vec::new();
        for d in &self.edges {
            let (u, v) = &d.value;
            match (domain_index.get(u.as_str()), domain_index.get(v.as_str())) {
                (Some(u), Some(v)) => edges.push((*u, *v)),
                (None, _) => diags.push(Diagnostic::new(d.line, format!("unknown domain `{u}`"))),
                (_, None) => diags.push(Diagnostic::new(d.line, format!("unknown domain `{v}`"))),
            }
        }

        let mut action_index: HashMap<&str, ActionId> = HashMap::new();
        let mut actions = Vec::new();
        for d in &self.actions {
            let (name, dom) = &d.value;
            if action_index.contains_key(name.as_str()) {
                diags.push(Diagnostic::new(d.line, format!("duplicate action `{name}`")));
                continue;
            }
            match domain_index.get(dom.as_str()) {
                Some(u) => {
                    action_index.insert(name, ActionId::from_index(actions.len()));
                    actions.push((name.clone(), *u));
                }
                None => diags.push(Diagnostic::new(
                    d.line,
                    format!("unknown domain `{dom}` for action `{name}`"),
                )),
            }
        }

        let mut state_index: HashMap<&str, StateId> = HashMap::new();
        let mut state_names = Vec::new();
        let mut initial = None;
        for d in &self.states {
            let (name, init) = &d.value;
            if state_index.contains_key(name.as_str()) {
                diags.push(Diagnostic::new(d.line, format!("duplicate state `{name}`")));
                continue;
            }
            let id = StateId::from_index(state_names.len());
            state_index.insert(name, id);
            state_names.push(name.clone());
            if *init {
                if initial.is_some() {
                    diags.push(Diagnostic::new(d.line, "multiple initial states"));
                } else {
                    initial = Some(id);
                }
            }
        }
        if state_names.is_empty() {
            diags.push(Diagnostic::new(None, "no states declared"));
        } else if initial.is_none() {
            diags.push(Diagnostic::new(None, "no initial state"));
        }

        let na = actions.len();
        let nd = domain_names.len();
        let ns = state_names.len();
        let mut step: Vec<StateId> = (0..ns)
            .flat_map(|s| std::iter::repeat_n(StateId::from_index(s), na))
            .collect();
        let mut step_set = vec![false; ns * na];
        for d in &self.trans {
            let (from, act, to) = &d.value;
            let s = state_index.get(from.as_str());
            let a = action_index.get(act.as_str());
            let t = state_index.get(to.as_str());
            if s.is_none() {
                diags.push(Diagnostic::new(d.line, format!("unknown state `{from}`")));
            }
            if a.is_none() {
                diags.push(Diagnostic::new(d.line, format!("unknown action `{act}`")));
            }
            if t.is_none() {
                diags.push(Diagnostic::new(d.line, format!("unknown state `{to}`")));
            }
            if let (Some(s), Some(a), Some(t)) = (s, a, t) {
                let slot = s.index() * na + a.index();
                if step_set[slot] && step[slot] != *t {
                    diags.push(Diagnostic::new(
                        d.line,
                        format!("nondeterministic transition from `{from}` on `{act}`"),
                    ));
                }
                step_set[slot] = true;
                step[slot] = *t;
            }
        }

        let mut obs = vec![NULL_OBS.to_string(); ns * nd];
        let mut obs_set = vec![false; ns * nd];
        for d in &self.obs {
            let (state, dom, tok) = &d.value;
            let s = state_index.get(state.as_str());
            let u = domain_index.get(dom.as_str());
            if s.is_none() {
                diags.push(Diagnostic::new(d.line, format!("unknown state `{state}`")));
            }
            if u.is_none() {
                diags.push(Diagnostic::new(d.line, format!("unknown domain `{dom}`")));
            }
            if let (Some(s), Some(u)) = (s, u) {
                let slot = s.index() * nd + u.index();
                if obs_set[slot] && obs[slot] != *tok {
                    diags.push(Diagnostic::new(
                        d.line,
                        format!("conflicting observations for `{state}` in domain `{dom}`"),
                    ));
                }
                obs_set[slot] = true;
                obs[slot] = tok.clone();
            }
        }

        if !diags.is_empty() {
            return Err(Diagnostics(diags));
        }
        let policy = Policy::new(domain_names, edges).map_err(into_diagnostics)?;
        System::from_tables(policy, state_names, initial.unwrap(), actions, step, obs)
            .map_err(into_diagnostics)
    }
}

fn into_diagnostics(e: ModelError) -> Diagnostics {
    match e {
        ModelError::Invalid(d) => d,
        other => Diagnostics(vec![Diagnostic::new(None, other.to_string())]),
    }
}
