use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A computer algebra system the forward translator can emit code for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Maple,
    Mathematica,
}

impl Target {
    pub const ALL: [Target; 2] = [Target::Maple, Target::Mathematica];

    /// Key used for this target inside lexicon files.
    pub fn key(self) -> &'static str {
        match self {
            Target::Maple => "maple",
            Target::Mathematica => "mathematica",
        }
    }

    /// Symbol emitted for an inferred or explicit multiplication.
    pub fn mult(self) -> &'static str {
        match self {
            Target::Maple => "*",
            Target::Mathematica => " ",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "maple" => Ok(Target::Maple),
            "mathematica" => Ok(Target::Mathematica),
            other => Err(format!("unknown target `{other}`")),
        }
    }
}
