//! Wall-clock scaling of the deciders on generated systems.
//!
//! Bench systems have a single observation token, so every closure runs to
//! completion without an early exit and the measured time is the full
//! closure cost.

use std::time::{Duration, Instant};

use crate::gen::{gen_random_system, GenParams};
use crate::model::System;
use crate::notion::Notion;
use crate::verifier;

/// Largest accepted ratio between a measured time and the linear fit (and
/// the reciprocal of the smallest).
pub const LINEAR_TOLERANCE: f64 = 3.0;

pub const BENCH_ACTIONS: usize = 4;
pub const BENCH_DOMAINS: usize = 3;
pub const BENCH_DENSITY: f64 = 0.3;

#[derive(Clone, Debug)]
pub struct BenchPoint {
    pub size: usize,
    pub best: Duration,
    pub mean: Duration,
    pub unions: usize,
}

#[derive(Clone, Debug)]
pub struct LinearFit {
    /// Seconds per state.
    pub slope: f64,
    /// Measured best time over fitted time, per point.
    pub ratios: Vec<f64>,
}

impl LinearFit {
    pub fn within(&self, tolerance: f64) -> bool {
        self.ratios.iter().all(|r| *r <= tolerance && *r >= 1.0 / tolerance)
    }
}

pub fn bench_system(size: usize, seed: u64) -> System {
    let params = GenParams::new(size, BENCH_ACTIONS, BENCH_DOMAINS, 1, BENCH_DENSITY, seed);
    gen_random_system(&params).expect("bench parameters are valid")
}

fn run_once(sys: &System, notion: Notion) -> (Duration, usize) {
    let start = Instant::now();
    let (verdict, stats) = match notion {
        Notion::Ip => verifier::decide_ip_stats(sys),
        Notion::Ta => verifier::decide_ta_stats(sys),
        _ => verifier::decide_p_stats(sys),
    };
    let elapsed = start.elapsed();
    assert!(verdict.is_secure(), "single-token systems are secure");
    (elapsed, stats.unions.iter().sum())
}

/// Times the decider `repeats` times at each size. TO and ITO have no
/// decider and fall back to P.
pub fn run_bench(notion: Notion, sizes: &[usize], seed: u64, repeats: usize) -> Vec<BenchPoint> {
    let repeats = repeats.max(1);
    sizes
        .iter()
        .map(|&size| {
            let sys = bench_system(size, seed);
            let mut times = Vec::with_capacity(repeats);
            let mut unions = 0;
            for _ in 0..repeats {
                let (t, u) = run_once(&sys, notion);
                times.push(t);
                unions = u;
            }
            let best = *times.iter().min().unwrap();
            let mean = times.iter().sum::<Duration>() / repeats as u32;
            BenchPoint { size, best, mean, unions }
        })
        .collect()
}

/// Least-squares fit `t = c·n` through the origin on the best times.
pub fn fit_linear(points: &[BenchPoint]) -> LinearFit {
    let num: f64 = points.iter().map(|p| p.best.as_secs_f64() * p.size as f64).sum();
    let den: f64 = points.iter().map(|p| (p.size as f64).powi(2)).sum();
    let slope = if den > 0.0 { num / den } else { 0.0 };
    let ratios = points
        .iter()
        .map(|p| p.best.as_secs_f64() / (slope * p.size as f64))
        .collect();
    LinearFit { slope, ratios }
}
