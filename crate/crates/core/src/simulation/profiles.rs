use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bandit::{Arm, PROFILES_PER_SESSION};
use crate::simulation::{Direction, SimulationError};

const BUNDLED_PACK: &str = include_str!("../../data/profiles.csv");

/// A comparison profile shown to the player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonProfile {
    pub steps: u32,
    pub direction: Direction,
    /// Index into the content pack.
    pub detail_id: u32,
}

/// Non-behavioral flavor text of a fabricated profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDetail {
    pub id: String,
    pub name: String,
    pub profession: String,
    pub diet: String,
    pub hobbies: String,
    pub exercise_habits: String,
}

/// Static set of profile details, loaded from `id,name,profession,diet,hobbies,exercise_habits` CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentPack {
    details: Vec<ProfileDetail>,
}

impl ContentPack {
    pub fn bundled() -> Self {
        Self::from_csv(BUNDLED_PACK.as_bytes()).expect("bundled content pack is valid")
    }

    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self, SimulationError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let details = rdr
            .deserialize()
            .collect::<Result<Vec<ProfileDetail>, _>>()
            .map_err(|e| SimulationError::ContentPack(e.to_string()))?;
        if details.len() < PROFILES_PER_SESSION {
            return Err(SimulationError::ContentPack(format!(
                "content pack needs at least {PROFILES_PER_SESSION} profiles, found {}",
                details.len()
            )));
        }
        Ok(Self { details })
    }

    pub fn load(path: &Path) -> Result<Self, SimulationError> {
        let file = std::fs::File::open(path)
            .map_err(|e| SimulationError::ContentPack(format!("{}: {e}", path.display())))?;
        Self::from_csv(file)
    }

    pub fn len(&self) -> usize {
        self.details.len()
    }

    pub fn is_empty(&self) -> bool {
        self.details.is_empty()
    }

    pub fn get(&self, detail_id: u32) -> Option<&ProfileDetail> {
        self.details.get(detail_id as usize)
    }
}

/// Step multiplier ranges for fabricated profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRanges {
    pub upward: (f64, f64),
    pub downward: (f64, f64),
}

impl Default for ProfileRanges {
    fn default() -> Self {
        Self { upward: (1.15, 1.60), downward: (0.40, 0.85) }
    }
}

impl ProfileRanges {
    pub fn validate(&self) -> Result<(), SimulationError> {
        let (ul, uh) = self.upward;
        let (dl, dh) = self.downward;
        if !(ul > 1.0 && uh >= ul && uh.is_finite()) {
            return Err(SimulationError::InvalidParameter(format!(
                "upward multipliers must satisfy 1 < low <= high, got ({ul}, {uh})"
            )));
        }
        if !(dl >= 0.0 && dh >= dl && dh < 1.0) {
            return Err(SimulationError::InvalidParameter(format!(
                "downward multipliers must satisfy 0 <= low <= high < 1, got ({dl}, {dh})"
            )));
        }
        Ok(())
    }
}

/// Fabricates the four profiles of a session for a chosen arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileGenerator {
    pub ranges: ProfileRanges,
    /// Reference used when the previous-day step count is zero or unknown.
    pub fallback_reference: f64,
    pub pack_size: usize,
}

impl ProfileGenerator {
    pub fn new(ranges: ProfileRanges, fallback_reference: f64, pack_size: usize) -> Result<Self, SimulationError> {
        ranges.validate()?;
        if pack_size < PROFILES_PER_SESSION {
            return Err(SimulationError::ContentPack(format!("pack of {pack_size} profiles is too small")));
        }
        if !(fallback_reference.is_finite() && fallback_reference >= 1.0) {
            return Err(SimulationError::InvalidParameter(format!(
                "fallback reference must be at least one step, got {fallback_reference}"
            )));
        }
        Ok(Self { ranges, fallback_reference, pack_size })
    }

    /// Reference step count the profiles are generated against.
    pub fn reference(&self, prev_steps: u32) -> u32 {
        if prev_steps == 0 {
            self.fallback_reference.round() as u32
        } else {
            prev_steps
        }
    }

    /// Multipliers are drawn for upward profiles first, then downward; then
    /// four distinct details are drawn and the display order shuffled.
    pub fn generate<R: Rng + ?Sized>(
        &self,
        arm: Arm,
        prev_steps: u32,
        rng: &mut R,
    ) -> [ComparisonProfile; PROFILES_PER_SESSION] {
        let spec = arm.spec();
        let reference = self.reference(prev_steps);
        let base = f64::from(reference);
        let mut steps = Vec::with_capacity(PROFILES_PER_SESSION);
        for _ in 0..spec.upward_count {
            let m = rng.random_range(self.ranges.upward.0..=self.ranges.upward.1);
            let s = ((base * m).round() as u32).max(reference + 1);
            steps.push((s, Direction::Upward));
        }
        for _ in 0..spec.downward_count {
            let m = rng.random_range(self.ranges.downward.0..=self.ranges.downward.1);
            let s = ((base * m).round() as u32).min(reference.saturating_sub(1));
            steps.push((s, Direction::Downward));
        }
        let details = index::sample(rng, self.pack_size, PROFILES_PER_SESSION);
        let mut profiles: Vec<ComparisonProfile> = steps
            .into_iter()
            .zip(details.iter())
            .map(|((steps, direction), d)| ComparisonProfile { steps, direction, detail_id: d as u32 })
            .collect();
        profiles.shuffle(rng);
        profiles.try_into().expect("four profiles")
    }
}
