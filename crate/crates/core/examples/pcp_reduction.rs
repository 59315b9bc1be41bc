//! Builds the machine of a PCP instance and shows the TO violation that a
//! solution produces.

use nisec::oracle::check_witness_pair;
use nisec::reduction::{build_pcp_system, pcp_witness, PcpInstance};
use nisec::{verifier, Notion};

fn main() {
    let inst = PcpInstance::classic();
    println!("U = {:?}", inst.u());
    println!("W = {:?}", inst.w());
    let sys = build_pcp_system(&inst);
    println!("{} states, {} actions", sys.num_states(), sys.num_actions());

    let solution = [3, 2, 3, 1];
    let pair = pcp_witness(&inst, &solution).unwrap();
    let (alpha, beta) = pair.resolve(&sys);
    let d = sys.domain("D").unwrap();
    println!("alpha = {}  -> D sees {}", sys.format_word(&alpha), sys.obs_token(sys.exec(&alpha), d));
    println!("beta  = {}  -> D sees {}", sys.format_word(&beta), sys.obs_token(sys.exec(&beta), d));
    for n in Notion::ALL {
        println!("  violates {n}: {}", check_witness_pair(&sys, n, d, &alpha, &beta));
    }
    // the decidable notions see nothing wrong beyond P
    println!("IP-secure: {}", verifier::decide_ip(&sys).is_secure());
    println!("TA-secure: {}", verifier::decide_ta(&sys).is_secure());
}
