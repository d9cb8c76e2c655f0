use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Number of comparison profiles shown in every session.
pub const PROFILES_PER_SESSION: usize = 4;

/// One comparison configuration the bandit can choose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arm {
    /// Four downward comparisons.
    A,
    /// Two upward and two downward comparisons.
    B,
    /// Four upward comparisons.
    C,
}

impl Arm {
    pub const ALL: [Arm; 3] = [Arm::A, Arm::B, Arm::C];

    pub fn spec(self) -> ArmSpec {
        match self {
            Arm::A => ArmSpec { arm: self, upward_count: 0, downward_count: 4 },
            Arm::B => ArmSpec { arm: self, upward_count: 2, downward_count: 2 },
            Arm::C => ArmSpec { arm: self, upward_count: 4, downward_count: 0 },
        }
    }

    /// Position in [`Arm::ALL`].
    pub fn index(self) -> usize {
        match self {
            Arm::A => 0,
            Arm::B => 1,
            Arm::C => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Arm::A => "A",
            Arm::B => "B",
            Arm::C => "C",
        }
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Arm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Arm::A),
            "B" | "b" => Ok(Arm::B),
            "C" | "c" => Ok(Arm::C),
            other => Err(format!("unknown arm `{other}`")),
        }
    }
}

/// Counts of better- and worse-performing profiles an arm displays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmSpec {
    pub arm: Arm,
    pub upward_count: usize,
    pub downward_count: usize,
}
