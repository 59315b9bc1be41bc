use std::fmt;
use std::str::FromStr;

/// The five security notions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Notion {
    P,
    Ip,
    Ta,
    To,
    Ito,
}

impl Notion {
    pub const ALL: [Notion; 5] = [Notion::P, Notion::Ip, Notion::Ta, Notion::To, Notion::Ito];

    pub fn name(self) -> &'static str {
        match self {
            Notion::P => "p",
            Notion::Ip => "ip",
            Notion::Ta => "ta",
            Notion::To => "to",
            Notion::Ito => "ito",
        }
    }

    /// P, IP and TA have polynomial-time deciders; TO and ITO do not.
    pub fn is_decidable(self) -> bool {
        matches!(self, Notion::P | Notion::Ip | Notion::Ta)
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown notion `{0}` (expected p, ip, ta, to or ito)")]
pub struct UnknownNotion(pub String);

impl FromStr for Notion {
    type Err = UnknownNotion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "p" => Ok(Notion::P),
            "ip" => Ok(Notion::Ip),
            "ta" => Ok(Notion::Ta),
            "to" => Ok(Notion::To),
            "ito" => Ok(Notion::Ito),
            _ => Err(UnknownNotion(s.to_string())),
        }
    }
}
