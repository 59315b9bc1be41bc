//! Classifies the built-in fixtures under every notion.
//!
//! P, IP and TA use the polynomial deciders; TO and ITO fall back to a
//! bounded search.

use nisec::gen::{Fixture, FIXTURES};
use nisec::oracle::{bounded_check, BoundedVerdict};
use nisec::{verifier, Notion};

fn main() {
    print!("{:<10}", "fixture");
    for n in Notion::ALL {
        print!("{:>10}", n.name());
    }
    println!();
    for f in FIXTURES.iter() {
        let sys = f.build();
        print!("{:<10}", f.name);
        for n in Notion::ALL {
            let cell = match verifier::decide(&sys, n) {
                Some(v) if v.is_secure() => "secure".to_string(),
                Some(_) => "insecure".to_string(),
                None => match bounded_check(&sys, n, Fixture::DEPTH).unwrap() {
                    BoundedVerdict::Insecure(_) => "insecure".to_string(),
                    BoundedVerdict::NoViolationUpTo(k) => format!("ok<={k}"),
                },
            };
            print!("{cell:>10}");
        }
        println!("   {}", f.summary);
    }
}
