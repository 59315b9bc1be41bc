//! The line-oriented system file format and the witness JSON.
//!
//! ```text
//! # comment
//! domain H
//! domain L
//! interferes L H
//! action h H
//! state s0 init
//! state s1
//! trans s0 h s1
//! obs s1 H seen
//! ```
//!
//! Missing transitions are self-loops, missing observations are `_`, and
//! every domain interferes with itself.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Diagnostic, Diagnostics, System, SystemBuilder, NULL_OBS};
use crate::notion::Notion;
use crate::verifier::Witness;

/// Parses a system file, reporting every problem with its line number.
pub fn parse_system(text: &str) -> Result<System, Diagnostics> {
    let mut b = SystemBuilder::new();
    let mut diags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, args)) = words.split_first() else {
            continue;
        };
        b.at_line(line);
        let arity = |n: usize, usage: &str, diags: &mut Vec<Diagnostic>| {
            if args.len() == n {
                true
            } else {
                diags.push(Diagnostic::new(Some(line), format!("expected `{usage}`")));
                false
            }
        };
        match kw {
            "domain" => {
                if arity(1, "domain NAME", &mut diags) {
                    b.domain(args[0]);
                }
            }
            "interferes" => {
                if arity(2, "interferes FROM TO", &mut diags) {
                    b.interferes(args[0], args[1]);
                }
            }
            "action" => {
                if arity(2, "action NAME DOMAIN", &mut diags) {
                    b.action(args[0], args[1]);
                }
            }
            "state" => match args {
                [name] => {
                    b.state(name);
                }
                [name, "init"] => {
                    b.initial_state(name);
                }
                _ => diags.push(Diagnostic::new(Some(line), "expected `state NAME [init]`")),
            },
            "trans" => {
                if arity(3, "trans STATE ACTION STATE", &mut diags) {
                    b.trans(args[0], args[1], args[2]);
                }
            }
            "obs" => {
                if arity(3, "obs STATE DOMAIN TOKEN", &mut diags) {
                    b.obs(args[0], args[1], args[2]);
                }
            }
            other => diags.push(Diagnostic::new(Some(line), format!("unknown declaration `{other}`"))),
        }
    }
    if !diags.is_empty() {
        return Err(Diagnostics(diags));
    }
    b.build()
}

/// Canonical text of a system: domains, edges, actions, states,
/// non-loop transitions and non-null observations, each in declaration order.
pub fn serialize_system(sys: &System) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    for u in sys.domains() {
        line(format!("domain {}", sys.domain_name(u)));
    }
    for (u, v) in sys.policy().edges() {
        line(format!("interferes {} {}", sys.domain_name(u), sys.domain_name(v)));
    }
    for a in sys.actions() {
        line(format!("action {} {}", sys.action_name(a), sys.domain_name(sys.dom(a))));
    }
    for s in sys.states() {
        let init = if s == sys.initial() { " init" } else { "" };
        line(format!("state {}{init}", sys.state_name(s)));
    }
    for s in sys.states() {
        for a in sys.actions() {
            let t = sys.step(s, a);
            if t != s {
                line(format!("trans {} {} {}", sys.state_name(s), sys.action_name(a), sys.state_name(t)));
            }
        }
    }
    for s in sys.states() {
        for u in sys.domains() {
            let tok = sys.obs_token(s, u);
            if tok != NULL_OBS {
                line(format!("obs {} {} {}", sys.state_name(s), sys.domain_name(u), tok));
            }
        }
    }
    out
}

/// A witness in self-describing form: names instead of ids, plus the two
/// observations it claims.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub notion: String,
    pub domain: String,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub obs_alpha: String,
    pub obs_beta: String,
}

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("malformed witness JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Notion(#[from] crate::notion::UnknownNotion),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
    #[error("recorded observation `{recorded}` does not match `{actual}`")]
    ObservationMismatch { recorded: String, actual: String },
}

impl WitnessJson {
    pub fn new(sys: &System, notion: Notion, w: &Witness) -> Self {
        let names = |t: &[crate::model::ActionId]| sys.action_names(t).map(str::to_string).collect();
        WitnessJson {
            notion: notion.name().to_string(),
            domain: sys.domain_name(w.domain).to_string(),
            alpha: names(&w.alpha),
            beta: names(&w.beta),
            obs_alpha: sys.obs_token(sys.exec(&w.alpha), w.domain).to_string(),
            obs_beta: sys.obs_token(sys.exec(&w.beta), w.domain).to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, WitnessError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolves names against a system and checks the recorded observations.
    pub fn resolve(&self, sys: &System) -> Result<(Notion, Witness), WitnessError> {
        let notion: Notion = self.notion.parse()?;
        let domain = sys
            .domain(&self.domain)
            .ok_or_else(|| crate::model::ModelError::UnknownDomain(self.domain.clone()))?;
        let alpha = sys.actions_named(&self.alpha)?;
        let beta = sys.actions_named(&self.beta)?;
        for (recorded, trace) in [(&self.obs_alpha, &alpha), (&self.obs_beta, &beta)] {
            let actual = sys.obs_token(sys.exec(trace), domain);
            if actual != recorded {
                return Err(WitnessError::ObservationMismatch {
                    recorded: recorded.clone(),
                    actual: actual.to_string(),
                });
            }
        }
        Ok((notion, Witness { domain, alpha, beta }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let sys = parse_system("domain H\naction h H\nstate s0 init\n").unwrap();
        assert_eq!(sys.num_states(), 1);
        let h = sys.action("h").unwrap();
        assert_eq!(sys.step(sys.initial(), h), sys.initial());
        assert_eq!(serialize_system(&sys).lines().count(), 3);
    }

    #[test]
    fn undeclared_target_state() {
        let err = parse_system("domain H\naction h H\nstate s0 init\ntrans s0 h s1\n").unwrap_err();
        let d = err.iter().next().unwrap();
        assert_eq!(d.line, Some(4));
        assert!(d.message.contains("unknown state `s1`"));
    }

    #[test]
    fn syntax_errors_are_line_numbered() {
        let err = parse_system("domain H\n\n  # just a comment\nstate\nfrobnicate x\n").unwrap_err();
        let lines: Vec<_> = err.iter().map(|d| d.line).collect();
        assert_eq!(lines, vec![Some(4), Some(5)]);
    }

    #[test]
    fn comments_and_round_trip() {
        let text = "domain H # high\ndomain L\ninterferes L H\naction h H\nstate s0 init\nstate s1\ntrans s0 h s1\nobs s1 H seen\n";
        let sys = parse_system(text).unwrap();
        let again = parse_system(&serialize_system(&sys)).unwrap();
        assert_eq!(sys, again);
    }
}
