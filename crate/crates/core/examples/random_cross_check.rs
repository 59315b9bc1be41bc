//! Compares the deciders with brute-force pair searches on random systems.

use nisec::gen::{gen_random_system, GenParams};
use nisec::{oracle, verifier};

fn main() {
    let mut agree = 0;
    let mut insecure = [0usize; 3];
    let n = 200;
    for seed in 0..n {
        // dense policies keep a share of the systems secure
        let params = GenParams::new(4, 3, 3, 2, [0.5, 0.8, 1.0][seed as usize % 3], seed);
        let sys = gen_random_system(&params).unwrap();
        let pairs = [
            (verifier::decide_p(&sys), oracle::exact_pair_check_p(&sys)),
            (verifier::decide_ip(&sys), oracle::exact_pair_check_ip(&sys)),
            (verifier::decide_ta(&sys), oracle::exact_swap_check_ta(&sys)),
        ];
        if pairs.iter().all(|(a, b)| a.is_secure() == b.is_secure()) {
            agree += 1;
        }
        for (k, (v, _)) in pairs.iter().enumerate() {
            insecure[k] += !v.is_secure() as usize;
        }
    }
    println!("{agree}/{n} systems agree on all three notions");
    println!("insecure: p {}, ip {}, ta {}", insecure[0], insecure[1], insecure[2]);
}
