//! Small machines that separate the security notions.
//!
//! `fig5`–`fig8` use the downgrader policy H ⇝ D ⇝ L (fig6 uses two
//! such chains into L); `pcp_demo` is the PCP machine of the classic
//! solvable instance. Transitions not listed are self-loops.

use crate::model::{System, SystemBuilder};
use crate::notion::Notion;
use crate::reduction::{build_pcp_system, PcpInstance};

use super::GenError;

/// Expected outcome for one notion. For TO and ITO, `Secure` means the
/// bounded check at [`Fixture::DEPTH`] finds no violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Secure,
    Insecure,
    /// Insecure, with every violation longer than the bounded depth.
    InsecureBeyondDepth,
}

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    /// Indexed like [`Notion::ALL`]: p, ip, ta, to, ito.
    pub expected: [Expect; 5],
}

impl Fixture {
    pub const DEPTH: usize = 6;

    pub fn expect(&self, notion: Notion) -> Expect {
        self.expected[Notion::ALL.iter().position(|n| *n == notion).unwrap()]
    }

    pub fn build(&self) -> System {
        fixture(self.name).expect("listed fixtures exist")
    }
}

use Expect::*;

pub const FIXTURES: [Fixture; 5] = [
    Fixture {
        name: "fig5",
        summary: "TO-secure but not P-secure",
        expected: [Insecure, Secure, Secure, Secure, Secure],
    },
    Fixture {
        name: "fig6",
        summary: "IP-secure but not TA-secure",
        expected: [Insecure, Secure, Insecure, Insecure, Insecure],
    },
    Fixture {
        name: "fig7",
        summary: "TA-secure but neither TO- nor ITO-secure",
        expected: [Insecure, Secure, Secure, Insecure, Insecure],
    },
    Fixture {
        name: "fig8",
        summary: "ITO-secure but not TO-secure",
        expected: [Insecure, Secure, Secure, Insecure, Secure],
    },
    Fixture {
        name: "pcp_demo",
        summary: "PCP machine of a solvable instance; TO-insecure via a 14/15-step witness",
        expected: [Insecure, Secure, Secure, InsecureBeyondDepth, InsecureBeyondDepth],
    },
];

/// Builds a fixture by name.
pub fn fixture(name: &str) -> Result<System, GenError> {
    let sys = match name {
        "fig5" => fig5(),
        "fig6" => fig6(),
        "fig7" => fig7(),
        "fig8" => fig8(),
        "pcp_demo" => build_pcp_system(&PcpInstance::classic()),
        _ => return Err(GenError::UnknownFixture(name.to_string())),
    };
    Ok(sys)
}

fn downgrader() -> SystemBuilder {
    let mut b = SystemBuilder::new();
    b.domain("H").domain("D").domain("L");
    b.interferes("H", "D").interferes("D", "L");
    b.action("h", "H").action("d", "D").action("l", "L");
    b.initial_state("s0").state("s1").state("s2");
    b.trans("s0", "h", "s1").trans("s1", "d", "s2");
    b
}

fn set_obs(b: &mut SystemBuilder, rows: &[(&str, [&str; 3])]) {
    for (s, toks) in rows {
        for (d, t) in ["H", "D", "L"].iter().zip(toks) {
            b.obs(s, d, t);
        }
    }
}

// H and D see h at once; L sees it only after a later d.
fn fig5() -> System {
    let mut b = downgrader();
    set_obs(&mut b, &[("s0", ["0", "0", "0"]), ("s1", ["1", "1", "0"]), ("s2", ["1", "1", "1"])]);
    b.build().expect("fig5 is well formed")
}

// D never observes anything, yet L learns of h after d.
fn fig7() -> System {
    let mut b = downgrader();
    set_obs(&mut b, &[("s0", ["0", "0", "0"]), ("s1", ["0", "0", "0"]), ("s2", ["0", "0", "1"])]);
    b.build().expect("fig7 is well formed")
}

// D learns of h only through the effect of its own d, which L may see at once.
fn fig8() -> System {
    let mut b = downgrader();
    set_obs(&mut b, &[("s0", ["0", "0", "0"]), ("s1", ["0", "0", "0"]), ("s2", ["0", "1", "1"])]);
    b.build().expect("fig8 is well formed")
}

// Two downgrader chains into L. The state records the order of the first
// h1/h2 and whether each was followed by its own downgrade; L observes
// that order once both downgrades happened.
fn fig6() -> System {
    let mut b = SystemBuilder::new();
    for d in ["H1", "H2", "D1", "D2", "L"] {
        b.domain(d);
    }
    b.interferes("H1", "D1").interferes("D1", "L");
    b.interferes("H2", "D2").interferes("D2", "L");
    b.action("h1", "H1").action("h2", "H2").action("d1", "D1").action("d2", "D2");

    let orders = ["", "1", "2", "12", "21"];
    let name = |o: &str, f1: bool, f2: bool| format!("o{o}_{}{}", f1 as u8, f2 as u8);
    let mut valid = Vec::new();
    for o in orders {
        for f1 in [false, true] {
            for f2 in [false, true] {
                if (f1 && !o.contains('1')) || (f2 && !o.contains('2')) {
                    continue;
                }
                valid.push((o, f1, f2));
            }
        }
    }
    for &(o, f1, f2) in &valid {
        let n = name(o, f1, f2);
        if o.is_empty() && !f1 && !f2 {
            b.initial_state(&n);
        } else {
            b.state(&n);
        }
    }
    for &(o, f1, f2) in &valid {
        let n = name(o, f1, f2);
        if !o.contains('1') {
            b.trans(&n, "h1", &name(&format!("{o}1"), f1, f2));
        }
        if !o.contains('2') {
            b.trans(&n, "h2", &name(&format!("{o}2"), f1, f2));
        }
        if o.contains('1') && !f1 {
            b.trans(&n, "d1", &name(o, true, f2));
        }
        if o.contains('2') && !f2 {
            b.trans(&n, "d2", &name(o, f1, true));
        }
        let l = match (o, f1 && f2) {
            ("12", true) => "1",
            ("21", true) => "2",
            _ => "0",
        };
        b.obs(&n, "L", l);
    }
    b.build().expect("fig6 is well formed")
}
