//! Seeded random systems and the reconstructed example machines.

pub mod fixtures;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{DomainId, Policy, StateId, System, MAX_DOMAINS};

pub use fixtures::{fixture, Expect, Fixture, FIXTURES};

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub num_states: usize,
    pub num_actions: usize,
    pub num_domains: usize,
    pub obs_alphabet_size: usize,
    pub policy_density: f64,
    pub seed: u64,
}

impl GenParams {
    pub fn new(
        num_states: usize,
        num_actions: usize,
        num_domains: usize,
        obs_alphabet_size: usize,
        policy_density: f64,
        seed: u64,
    ) -> Self {
        GenParams { num_states, num_actions, num_domains, obs_alphabet_size, policy_density, seed }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("at most {MAX_DOMAINS} domains are supported")]
    TooManyDomains,
    #[error("policy density {0} is outside [0, 1]")]
    BadDensity(f64),
    #[error("unknown fixture `{0}` (expected one of fig5, fig6, fig7, fig8, pcp_demo)")]
    UnknownFixture(String),
}

/// Uniformly random tables over a random reflexive policy in which every
/// non-reflexive edge is present with probability `policy_density`.
pub fn gen_random_system(params: &GenParams) -> Result<System, GenError> {
    for (n, what) in [
        (params.num_states, "num_states"),
        (params.num_actions, "num_actions"),
        (params.num_domains, "num_domains"),
        (params.obs_alphabet_size, "obs_alphabet_size"),
    ] {
        if n == 0 {
            return Err(GenError::ZeroCount(what));
        }
    }
    if params.num_domains > MAX_DOMAINS {
        return Err(GenError::TooManyDomains);
    }
    if !(0.0..=1.0).contains(&params.policy_density) {
        return Err(GenError::BadDensity(params.policy_density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let nd = params.num_domains;
    let mut edges = Vec::new();
    for u in 0..nd {
        for v in 0..nd {
            if u != v && rng.gen_bool(params.policy_density) {
                edges.push((DomainId::from_index(u), DomainId::from_index(v)));
            }
        }
    }
    let policy = Policy::new((0..nd).map(|i| format!("D{i}")).collect(), edges)
        .expect("generated policy is well formed");
    let actions = (0..params.num_actions)
        .map(|i| (format!("a{i}"), DomainId::from_index(rng.gen_range(0..nd))))
        .collect();
    let ns = params.num_states;
    let step = (0..ns * params.num_actions)
        .map(|_| StateId::from_index(rng.gen_range(0..ns)))
        .collect();
    let obs = (0..ns * nd)
        .map(|_| rng.gen_range(0..params.obs_alphabet_size).to_string())
        .collect();
    let names = (0..ns).map(|i| format!("s{i}")).collect();
    Ok(System::from_tables(policy, names, StateId(0), actions, step, obs)
        .expect("generated tables are total"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_params() {
        let sys = gen_random_system(&GenParams::new(1, 1, 1, 1, 0.5, 9)).unwrap();
        assert_eq!(sys.num_states(), 1);
        let a = sys.actions().next().unwrap();
        assert_eq!(sys.step(sys.initial(), a), sys.initial());
    }

    #[test]
    fn deterministic() {
        let p = GenParams::new(6, 4, 3, 3, 0.3, 42);
        let a = gen_random_system(&p).unwrap();
        let b = gen_random_system(&p).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_ok());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(gen_random_system(&GenParams::new(0, 1, 1, 1, 0.5, 0)).is_err());
        assert!(gen_random_system(&GenParams::new(1, 1, 1, 1, 1.5, 0)).is_err());
    }
}
