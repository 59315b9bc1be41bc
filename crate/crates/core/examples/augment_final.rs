//! The final-action augmentation turns TO-style leaks into ITO violations.

use nisec::gen::fixture;
use nisec::oracle::bounded_check;
use nisec::reduction::augment_final;
use nisec::Notion;

fn main() {
    for name in ["fig8", "fig5"] {
        let base = fixture(name).unwrap();
        let aug = augment_final(&base);
        println!(
            "{name}: {} -> {} states, {} -> {} actions",
            base.num_states(),
            aug.system.num_states(),
            base.num_actions(),
            aug.system.num_actions()
        );
        println!("  base ITO (depth 6): {:?}", bounded_check(&base, Notion::Ito, 6).unwrap().is_insecure());
        match bounded_check(&aug.system, Notion::Ito, 8).unwrap().witness() {
            Some(w) => println!(
                "  augmented ITO violation for {}: {} / {}, which runs as {} / {} in {name}",
                aug.system.domain_name(w.domain),
                aug.system.format_word(&w.alpha),
                aug.system.format_word(&w.beta),
                base.format_word(&aug.convertback(&w.alpha)),
                base.format_word(&aug.convertback(&w.beta)),
            ),
            None => println!("  augmented system: no ITO violation up to depth 8"),
        }
    }
}
