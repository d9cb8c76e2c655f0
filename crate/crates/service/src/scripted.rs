use scomab_core::rng::{stream, SimRng, StreamRole};
use scomab_core::simulation::{
    ComparisonProfile, Direction, PlayerConfig, SessionResponse, SimulatedPlayer, SimulationError,
};

use crate::ProfileCard;

/// A simulated participant that sees only what the API shows a person:
/// its own step counts and the profiles' step counts.
#[derive(Debug, Clone)]
pub struct ScriptedPlayer {
    player: SimulatedPlayer,
    rng: SimRng,
    last_steps: Option<u32>,
}

impl ScriptedPlayer {
    /// Uses the player stream of `(seed, ordinal)`, matching trial `ordinal` of a simulation.
    pub fn new(config: &PlayerConfig, seed: u64, ordinal: u64) -> Result<Self, SimulationError> {
        Ok(Self {
            player: SimulatedPlayer::new(config)?,
            rng: stream(seed, ordinal, StreamRole::Player),
            last_steps: None,
        })
    }

    /// Steps on a day without a session.
    pub fn baseline_day(&mut self) -> u32 {
        let steps = self.player.baseline_day(&mut self.rng);
        self.last_steps = Some(steps);
        steps
    }

    /// Reacts to the four cards; directions are judged against the player's own
    /// last count, or the gamma mean when that is zero or unknown.
    pub fn respond(&mut self, cards: &[ProfileCard]) -> SessionResponse {
        let reference = match self.last_steps {
            Some(s) if s > 0 => s,
            _ => self.player.step_model.mean().round() as u32,
        };
        let profiles: Vec<ComparisonProfile> = cards
            .iter()
            .map(|c| ComparisonProfile {
                steps: c.steps,
                direction: if c.steps > reference { Direction::Upward } else { Direction::Downward },
                detail_id: 0,
            })
            .collect();
        let response = self.player.respond(&profiles, &mut self.rng);
        self.last_steps = Some(response.steps);
        response
    }
}
