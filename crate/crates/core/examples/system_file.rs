//! Parses a system from the text format, reports problems with line
//! numbers, and checks the fixed-up version.

use nisec::format::parse_system;
use nisec::{verifier, Notion};

const BROKEN: &str = "\
domain H
domain L
interferes H L
action h H
state s0 init
state s1
trans s0 h s1
trans s0 h s0
obs s1 L 1
obs s9 L 0
";

const FIXED: &str = "\
# a high action that L can see, allowed by the policy
domain H
domain L
interferes H L
action h H
action l L
state s0 init
state s1
trans s0 h s1
obs s1 L 1
";

fn main() {
    match parse_system(BROKEN) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(d) => println!("rejected:\n{d}"),
    }
    let sys = parse_system(FIXED).unwrap();
    for n in [Notion::P, Notion::Ip, Notion::Ta] {
        println!("{n}: {}", if verifier::decide(&sys, n).unwrap().is_secure() { "secure" } else { "insecure" });
    }
}
