//! Bounded search for TO and ITO violations, with growing depth.

use std::time::Instant;

use nisec::gen::fixture;
use nisec::oracle::{bounded_check, trace_count, BoundedVerdict};
use nisec::Notion;

fn main() {
    for name in ["fig7", "fig8"] {
        let sys = fixture(name).unwrap();
        for n in [Notion::To, Notion::Ito] {
            for depth in 1..=6 {
                let start = Instant::now();
                let v = bounded_check(&sys, n, depth).unwrap();
                let t = start.elapsed();
                match v {
                    BoundedVerdict::Insecure(w) => {
                        println!(
                            "{name} {n} depth {depth}: violation for {} ({} / {}) in {t:.2?}",
                            sys.domain_name(w.domain),
                            sys.format_word(&w.alpha),
                            sys.format_word(&w.beta)
                        );
                        break;
                    }
                    BoundedVerdict::NoViolationUpTo(_) => println!(
                        "{name} {n} depth {depth}: none among {} traces in {t:.2?}",
                        trace_count(sys.num_actions(), depth)
                    ),
                }
            }
        }
    }
}
