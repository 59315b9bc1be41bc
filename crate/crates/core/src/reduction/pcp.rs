//! The four-domain machine M(U, W) built from a PCP instance.
//!
//! Domain A guesses letters, B optionally switches to the W list (only as
//! the very first action) and guesses indices, C declares the end, and D
//! finally learns which list was being matched. M(U, W) is TO-insecure
//! exactly when the instance has a solution.

use std::collections::{HashMap, VecDeque};

use crate::model::{ActionId, DomainId, Policy, StateId, System};

use super::ReductionError;

/// Observation token for "nothing determined yet".
pub const BOT: &str = "bot";
/// Observation token for "inconsistency detected".
pub const TOP: &str = "top";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpInstance {
    sigma: Vec<char>,
    u: Vec<String>,
    w: Vec<String>,
}

impl PcpInstance {
    pub fn new<S: AsRef<str>>(sigma: &str, u: &[S], w: &[S]) -> Result<Self, ReductionError> {
        let bad = |m: String| Err(ReductionError::InvalidInstance(m));
        let letters: Vec<char> = sigma.chars().collect();
        if letters.len() < 2 {
            return bad("the alphabet needs at least two letters".into());
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return bad(format!("letter `{c}` repeated"));
            }
            if c.is_whitespace() || *c == '#' || *c == ',' {
                return bad(format!("letter `{c}` cannot be used as an action name"));
            }
            if *c == 'w' {
                return bad("letter `w` clashes with the list-switch action".into());
            }
        }
        if u.is_empty() || u.len() != w.len() {
            return bad(format!("word lists must be nonempty and of equal length ({} vs {})", u.len(), w.len()));
        }
        for word in u.iter().chain(w) {
            let word = word.as_ref();
            if word.is_empty() {
                return bad("words must be nonempty".into());
            }
            if let Some(c) = word.chars().find(|c| !letters.contains(c)) {
                return bad(format!("word `{word}` uses `{c}`, which is not in the alphabet"));
            }
        }
        Ok(PcpInstance {
            sigma: letters,
            u: u.iter().map(|s| s.as_ref().to_string()).collect(),
            w: w.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    /// The classic solvable instance over {a, b}: U = (a, ab, bba),
    /// W = (baa, aa, bb), with solution (3, 2, 3, 1).
    pub fn classic() -> Self {
        PcpInstance::new("ab", &["a", "ab", "bba"], &["baa", "aa", "bb"]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn sigma(&self) -> &[char] {
        &self.sigma
    }

    pub fn u(&self) -> &[String] {
        &self.u
    }

    pub fn w(&self) -> &[String] {
        &self.w
    }

    /// Checks that a 1-based index sequence is a solution.
    pub fn check_solution(&self, solution: &[usize]) -> Result<(), ReductionError> {
        if solution.is_empty() {
            return Err(ReductionError::EmptySolution);
        }
        if let Some(&i) = solution.iter().find(|&&i| i == 0 || i > self.len()) {
            return Err(ReductionError::IndexOutOfRange(i));
        }
        let left: String = solution.iter().map(|&i| self.u[i - 1].as_str()).collect();
        let right: String = solution.iter().map(|&i| self.w[i - 1].as_str()).collect();
        if left == right {
            return Ok(());
        }
        let position = left
            .chars()
            .zip(right.chars())
            .position(|(x, y)| x != y)
            .unwrap_or(left.len().min(right.len()));
        Err(ReductionError::NotASolution { position, left, right })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum List {
    U,
    UPrime,
    W,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct PcpState {
    p: List,
    // None is ⊤
    v: Option<String>,
    i: usize,
    done: bool,
}

#[derive(Clone, Copy, Debug)]
enum Act {
    Letter(char),
    Switch,
    Guess(usize),
    End,
}

impl PcpState {
    fn name(&self) -> String {
        let p = match self.p {
            List::U => "U",
            List::UPrime => "U'",
            List::W => "W",
        };
        let v = match &self.v {
            None => "T",
            Some(v) if v.is_empty() => "-",
            Some(v) => v,
        };
        format!("{p}/{v}/{}/{}", self.i, self.done as u8)
    }

    fn list<'a>(&self, inst: &'a PcpInstance) -> &'a [String] {
        match self.p {
            List::U | List::UPrime => &inst.u,
            List::W => &inst.w,
        }
    }

    fn moved(&self) -> List {
        match self.p {
            List::U | List::UPrime => List::UPrime,
            List::W => List::W,
        }
    }

    fn step(&self, inst: &PcpInstance, act: Act) -> PcpState {
        if self.done {
            return self.clone();
        }
        let mut next = self.clone();
        match act {
            Act::Switch => {
                if self.p == List::U {
                    next.p = List::W;
                }
            }
            Act::Letter(c) => {
                next.p = self.moved();
                next.v = self.v.as_ref().and_then(|v| {
                    let ext = format!("{v}{c}");
                    self.list(inst).iter().any(|g| g.starts_with(&ext)).then_some(ext)
                });
            }
            Act::Guess(j) => {
                next.p = self.moved();
                next.v = match &self.v {
                    Some(v) if *v == self.list(inst)[j - 1] => Some(String::new()),
                    _ => None,
                };
                next.i = j;
            }
            Act::End => {
                next.p = self.moved();
                next.v = match &self.v {
                    Some(v) if v.is_empty() => Some(String::new()),
                    _ => None,
                };
                next.done = true;
            }
        }
        next
    }

    fn obs(&self) -> [String; 4] {
        let c = match &self.v {
            Some(v) if v.is_empty() => self.i.to_string(),
            None => TOP.to_string(),
            Some(_) => BOT.to_string(),
        };
        let d = if !self.done {
            BOT
        } else if self.v.as_deref() == Some("") && self.i != 0 {
            match self.p {
                List::U | List::UPrime => "U",
                List::W => "W",
            }
        } else {
            TOP
        };
        [BOT.to_string(), BOT.to_string(), c, d.to_string()]
    }
}

/// Builds M(U, W) over its reachable states. Domains are A, B, C, D with
/// A ⇝ C, A ⇝ D, B ⇝ C, C ⇝ D. Actions are the letters (A), `w` and
/// `g1`…`gn` (B), and `end` (C).
pub fn build_pcp_system(inst: &PcpInstance) -> System {
    let domains = ["A", "B", "C", "D"];
    let policy = Policy::from_names(&domains, &[("A", "C"), ("A", "D"), ("B", "C"), ("C", "D")])
        .expect("fixed policy is well formed");
    let mut acts = Vec::new();
    let mut actions = Vec::new();
    for &c in &inst.sigma {
        acts.push(Act::Letter(c));
        actions.push((c.to_string(), DomainId(0)));
    }
    acts.push(Act::Switch);
    actions.push(("w".to_string(), DomainId(1)));
    for j in 1..=inst.len() {
        acts.push(Act::Guess(j));
        actions.push((format!("g{j}"), DomainId(1)));
    }
    acts.push(Act::End);
    actions.push(("end".to_string(), DomainId(2)));

    let init = PcpState { p: List::U, v: Some(String::new()), i: 0, done: false };
    let mut index: HashMap<PcpState, StateId> = HashMap::new();
    let mut states = vec![init.clone()];
    index.insert(init, StateId(0));
    let mut step = Vec::new();
    let mut queue = VecDeque::from([StateId(0)]);
    while let Some(s) = queue.pop_front() {
        let cur = states[s.index()].clone();
        for &act in &acts {
            let next = cur.step(inst, act);
            let id = match index.get(&next) {
                Some(id) => *id,
                None => {
                    let id = StateId::from_index(states.len());
                    index.insert(next.clone(), id);
                    states.push(next);
                    queue.push_back(id);
                    id
                }
            };
            step.push(id);
        }
    }
    let names = states.iter().map(PcpState::name).collect();
    let obs = states.iter().flat_map(|s| s.obs()).collect();
    System::from_tables(policy, names, StateId(0), actions, step, obs)
        .expect("reachable construction is total and deterministic")
}

/// The two traces of a TO-violation built from a solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpWitness {
    /// `U_{i1} g_{i1} … U_{ik} g_{ik} end`
    pub alpha: Vec<String>,
    /// `w W_{i1} g_{i1} … W_{ik} g_{ik} end`
    pub beta: Vec<String>,
}

impl PcpWitness {
    pub fn resolve(&self, sys: &System) -> (Vec<ActionId>, Vec<ActionId>) {
        let alpha = sys.actions_named(&self.alpha).expect("witness actions exist in the PCP machine");
        let beta = sys.actions_named(&self.beta).expect("witness actions exist in the PCP machine");
        (alpha, beta)
    }
}

/// Builds the witness pair for a (checked) solution, with 1-based indices.
pub fn pcp_witness(inst: &PcpInstance, solution: &[usize]) -> Result<PcpWitness, ReductionError> {
    inst.check_solution(solution)?;
    let trace = |words: &[String], prefix: Option<&str>| {
        let mut out: Vec<String> = prefix.into_iter().map(str::to_string).collect();
        for &i in solution {
            out.extend(words[i - 1].chars().map(|c| c.to_string()));
            out.push(format!("g{i}"));
        }
        out.push("end".to_string());
        out
    };
    Ok(PcpWitness { alpha: trace(&inst.u, None), beta: trace(&inst.w, Some("w")) })
}
