//! Times the deciders on growing random systems and fits a line.
//!
//! Run with `--release`; sizes can be given as arguments.

use nisec::bench::{fit_linear, run_bench, LINEAR_TOLERANCE};
use nisec::Notion;

fn main() {
    let sizes: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let sizes = if sizes.is_empty() { vec![1_000, 10_000, 100_000] } else { sizes };
    for notion in [Notion::P, Notion::Ip, Notion::Ta] {
        let points = run_bench(notion, &sizes, 0, 3);
        let fit = fit_linear(&points);
        println!("{notion}: {:.0} ns/state", fit.slope * 1e9);
        for (p, r) in points.iter().zip(&fit.ratios) {
            println!("  {:>8} states  {:>9.3} ms  ratio {r:.2}", p.size, p.best.as_secs_f64() * 1e3);
        }
        println!("  within {LINEAR_TOLERANCE}x of linear: {}", fit.within(LINEAR_TOLERANCE));
    }
}
