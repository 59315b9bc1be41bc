//! Finds a TA violation, serializes it to JSON, and checks it again against
//! a system parsed back from text.

use nisec::format::{parse_system, serialize_system, WitnessJson};
use nisec::oracle::check_witness_pair;
use nisec::{gen, verifier, Notion, Verdict};

fn main() {
    let sys = gen::fixture("fig6").unwrap();
    let Verdict::Insecure(w) = verifier::decide_ta(&sys) else {
        panic!("fig6 is TA-insecure");
    };
    println!("domain {}", sys.domain_name(w.domain));
    println!("  alpha = {}", sys.format_word(&w.alpha));
    println!("  beta  = {}", sys.format_word(&w.beta));

    let json = WitnessJson::new(&sys, Notion::Ta, &w).to_json();
    println!("{json}");

    let text = serialize_system(&sys);
    let reread = parse_system(&text).unwrap();
    let (notion, w2) = WitnessJson::from_json(&json).unwrap().resolve(&reread).unwrap();
    let ok = check_witness_pair(&reread, notion, w2.domain, &w2.alpha, &w2.beta);
    println!("re-verified against the parsed system: {ok}");
}
