use std::collections::BTreeMap;

use chrono::{Days, NaiveDate};
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use scomab_core::bandit::{Arm, DecisionMode, EstimatorContext, Strategy, StrategyConfig, PROFILES_PER_SESSION};
use scomab_core::rng::{stream, SimRng, StreamRole};
use scomab_core::simulation::{
    ComparisonProfile, ContentPack, ObservationRecord, ProfileGenerator, ProfileRanges, RewardMode, StepHistory,
    StepModel,
};

use crate::ServiceError;

/// Reward the service feeds its bandits.
pub const SERVICE_REWARD: RewardMode = RewardMode::CombinedZ;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Experimental,
    Control,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionState {
    Started,
    PreMotivationRecorded,
    ProfileSelected,
    Completed,
}

/// Study-wide settings.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    /// Root of every participant's random streams.
    pub seed: u64,
    pub program_days: u32,
    /// Completed sessions needed to count a participant as having completed the study.
    pub completion_threshold: u32,
    pub strategy: StrategyConfig,
    /// Gamma model whose mean stands in for missing previous-day steps.
    pub step_model: StepModel,
    pub profile_ranges: ProfileRanges,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            program_days: 21,
            completion_threshold: 14,
            strategy: StrategyConfig::deployed(),
            step_model: StepModel::default(),
            profile_ranges: ProfileRanges::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Participant {
    pub id: String,
    pub ordinal: u64,
    pub condition: Condition,
    pub enrollment_date: NaiveDate,
    /// Experimental participants only.
    pub strategy: Option<Strategy>,
    pub steps: BTreeMap<NaiveDate, u32>,
    /// Settled sessions, in settlement order.
    pub history: Vec<ObservationRecord>,
    pub sessions: Vec<String>,
    #[serde(skip)]
    strategy_rng: SimRng,
    #[serde(skip)]
    environment_rng: SimRng,
}

impl Participant {
    fn step_history(&self) -> StepHistory {
        self.steps.iter().map(|(d, s)| (*d, f64::from(*s))).collect()
    }

    /// Steps the day before `date`, else the latest earlier day on record.
    fn reference_steps(&self, date: NaiveDate) -> Option<u32> {
        self.steps.range(..date).next_back().map(|(_, s)| *s)
    }

    pub fn bandit_observations(&self) -> u64 {
        self.strategy.as_ref().map_or(0, |s| s.state().observations())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Session {
    pub id: String,
    pub participant_id: String,
    pub date: NaiveDate,
    pub day_index: u32,
    pub state: SessionState,
    pub arm: Arm,
    pub mode: DecisionMode,
    pub previous_day_steps: Option<u32>,
    pub profiles: [ComparisonProfile; PROFILES_PER_SESSION],
    pub selected_profile: Option<usize>,
    pub pre_motivation: Option<u8>,
    pub post_motivation: Option<u8>,
    pub settled: bool,
}

/// Response to enrollment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantView {
    pub id: String,
    pub condition: Condition,
    pub enrollment_date: NaiveDate,
    pub program_days: u32,
}

/// A profile as shown to the participant: steps only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileCard {
    pub index: usize,
    pub steps: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionStarted {
    pub session_id: String,
    pub participant_id: String,
    pub date: NaiveDate,
    pub day_index: u32,
    pub state: SessionState,
    pub previous_day_steps: Option<u32>,
    pub profiles: Vec<ProfileCard>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub session_id: String,
    pub day_index: u32,
    pub state: SessionState,
    pub pre_motivation: Option<u8>,
    pub post_motivation: Option<u8>,
    pub selected_profile: Option<usize>,
    pub settled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDetailView {
    pub index: usize,
    pub steps: u32,
    pub name: String,
    pub profession: String,
    pub diet: String,
    pub hobbies: String,
    pub exercise_habits: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settlement {
    pub session_id: String,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestOutcome {
    pub participant_id: String,
    pub date: NaiveDate,
    pub steps: u32,
    /// False when the same value was already on record.
    pub stored: bool,
    pub settlement: Option<Settlement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub session_id: String,
    pub date: NaiveDate,
    pub day_index: u32,
    pub state: SessionState,
    pub arm: Arm,
    pub settled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryView {
    pub participant_id: String,
    pub condition: Condition,
    pub enrollment_date: NaiveDate,
    pub completed_sessions: u32,
    pub completed: bool,
    pub bandit_observations: u64,
    pub forced_schedule: Vec<Arm>,
    pub sessions: Vec<SessionSummary>,
    pub observations: Vec<ObservationRecord>,
}

/// Side effects a command produced besides its response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Effect {
    ArmSelected {
        participant_id: String,
        session_id: String,
        arm: Arm,
        mode: DecisionMode,
        /// Strategy state after the decision; absent for control participants.
        strategy_hash: Option<String>,
    },
    RewardSettled {
        participant_id: String,
        session_id: String,
        date: NaiveDate,
        arm: Arm,
        steps: u32,
        motivation: u8,
        reward: f64,
        bandit_observations: u64,
    },
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn sha256_hex(data: &[u8]) -> String {
    hex(&Sha256::digest(data))
}

fn opaque_id(prefix: &str, seed: u64, counter: u64) -> String {
    let mut h = Sha256::new();
    h.update(prefix.as_bytes());
    h.update(seed.to_le_bytes());
    h.update(counter.to_le_bytes());
    format!("{prefix}_{}", &hex(&h.finalize())[..16])
}

fn strategy_hash(strategy: &Strategy, rng: &SimRng) -> String {
    let mut bytes = serde_json::to_vec(strategy).expect("strategy serializes");
    bytes.extend_from_slice(&rng.get_word_pos().to_le_bytes());
    sha256_hex(&bytes)
}

fn check_motivation(value: i64) -> Result<u8, ServiceError> {
    if (1..=5).contains(&value) {
        Ok(value as u8)
    } else {
        Err(ServiceError::Range(format!("motivation must be in 1..=5, got {value}")))
    }
}

/// In-memory state of the study. Every mutation is deterministic given the
/// config and the sequence of commands.
#[derive(Debug, Clone)]
pub struct Study {
    config: StudyConfig,
    pack: ContentPack,
    generator: ProfileGenerator,
    participants: BTreeMap<String, Participant>,
    sessions: BTreeMap<String, Session>,
    next_ordinal: u64,
    next_session: u64,
}

impl Study {
    pub fn new(config: StudyConfig) -> Result<Self, ServiceError> {
        config.strategy.validate().map_err(|e| ServiceError::InvalidRequest(e.to_string()))?;
        if config.program_days < 1 {
            return Err(ServiceError::InvalidRequest("program must last at least one day".into()));
        }
        let pack = ContentPack::bundled();
        let generator = ProfileGenerator::new(config.profile_ranges, config.step_model.mean(), pack.len())
            .map_err(|e| ServiceError::InvalidRequest(e.to_string()))?;
        Ok(Self {
            config,
            pack,
            generator,
            participants: BTreeMap::new(),
            sessions: BTreeMap::new(),
            next_ordinal: 0,
            next_session: 0,
        })
    }

    pub fn config(&self) -> &StudyConfig {
        &self.config
    }

    pub fn participant(&self, id: &str) -> Option<&Participant> {
        self.participants.get(id)
    }

    pub fn participants(&self) -> impl Iterator<Item = &Participant> {
        self.participants.values()
    }

    pub fn session(&self, id: &str) -> Option<&Session> {
        self.sessions.get(id)
    }

    fn session_for(&self, id: &str) -> Result<&Session, ServiceError> {
        self.sessions.get(id).ok_or_else(|| ServiceError::NotFound(format!("session {id}")))
    }

    fn expect_state(session: &Session, state: SessionState) -> Result<(), ServiceError> {
        if session.state == state {
            Ok(())
        } else {
            Err(ServiceError::StateViolation(format!(
                "session {} is {:?}, expected {:?}",
                session.id, session.state, state
            )))
        }
    }

    /// Enrolls a participant. Experimental participants get a fresh deployed strategy.
    pub fn create_participant(&mut self, condition: Condition, enrollment_date: NaiveDate) -> ParticipantView {
        let ordinal = self.next_ordinal;
        self.next_ordinal += 1;
        let id = opaque_id("p", self.config.seed, ordinal);
        let mut strategy_rng = stream(self.config.seed, ordinal, StreamRole::Strategy);
        let environment_rng = stream(self.config.seed, ordinal, StreamRole::Environment);
        let strategy = match condition {
            Condition::Experimental => Some(
                Strategy::new(self.config.strategy.clone(), &Arm::ALL, self.config.program_days, &mut strategy_rng)
                    .expect("strategy validated at startup"),
            ),
            Condition::Control => None,
        };
        self.participants.insert(
            id.clone(),
            Participant {
                id: id.clone(),
                ordinal,
                condition,
                enrollment_date,
                strategy,
                steps: BTreeMap::new(),
                history: Vec::new(),
                sessions: Vec::new(),
                strategy_rng,
                environment_rng,
            },
        );
        ParticipantView { id, condition, enrollment_date, program_days: self.config.program_days }
    }

    /// Stores a day's steps and settles that day's completed session, if any.
    pub fn ingest_steps(
        &mut self,
        participant_id: &str,
        date: NaiveDate,
        steps: i64,
        effects: &mut Vec<Effect>,
    ) -> Result<IngestOutcome, ServiceError> {
        let steps = u32::try_from(steps)
            .map_err(|_| ServiceError::Range(format!("steps must be a non-negative 32-bit count, got {steps}")))?;
        let participant = self
            .participants
            .get_mut(participant_id)
            .ok_or_else(|| ServiceError::NotFound(format!("participant {participant_id}")))?;
        if let Some(&existing) = participant.steps.get(&date) {
            if existing != steps {
                return Err(ServiceError::Conflict(format!(
                    "steps for {date} already recorded as {existing}, not {steps}"
                )));
            }
            return Ok(IngestOutcome {
                participant_id: participant_id.to_string(),
                date,
                steps,
                stored: false,
                settlement: None,
            });
        }
        participant.steps.insert(date, steps);
        let pending = participant.sessions.iter().find(|sid| {
            let s = &self.sessions[*sid];
            s.date == date && s.state == SessionState::Completed && !s.settled
        });
        let settlement = pending.cloned().map(|sid| self.settle(&sid, effects));
        Ok(IngestOutcome { participant_id: participant_id.to_string(), date, steps, stored: true, settlement })
    }

    fn settle(&mut self, session_id: &str, effects: &mut Vec<Effect>) -> Settlement {
        let session = self.sessions.get_mut(session_id).expect("session exists");
        let participant = self.participants.get_mut(&session.participant_id).expect("participant exists");
        let steps = participant.steps[&session.date];
        let motivation = session.post_motivation.expect("completed session");
        let profile = session.profiles[session.selected_profile.expect("completed session")];
        let reward = SERVICE_REWARD.reward(&participant.history, f64::from(steps), f64::from(motivation));
        if let Some(strategy) = participant.strategy.as_mut() {
            strategy.observe(session.arm, reward).expect("arm awaiting settlement");
        }
        participant.history.push(ObservationRecord {
            day: session.day_index,
            date: session.date,
            arm: session.arm,
            selected_direction: profile.direction,
            target_steps: profile.steps,
            steps,
            pre_motivation: session.pre_motivation.expect("completed session"),
            post_motivation: motivation,
            reward,
        });
        session.settled = true;
        effects.push(Effect::RewardSettled {
            participant_id: participant.id.clone(),
            session_id: session.id.clone(),
            date: session.date,
            arm: session.arm,
            steps,
            motivation,
            reward,
            bandit_observations: participant.bandit_observations(),
        });
        Settlement { session_id: session.id.clone(), reward }
    }

    /// Opens the day's session: picks an arm and fabricates four profiles.
    pub fn start_session(
        &mut self,
        participant_id: &str,
        date: NaiveDate,
        effects: &mut Vec<Effect>,
    ) -> Result<SessionStarted, ServiceError> {
        let program_days = self.config.program_days;
        let seed = self.config.seed;
        let session_counter = self.next_session;
        let generator = self.generator;
        let sessions = &self.sessions;
        let participant = self
            .participants
            .get_mut(participant_id)
            .ok_or_else(|| ServiceError::NotFound(format!("participant {participant_id}")))?;
        let offset = (date - participant.enrollment_date).num_days();
        if offset < 0 {
            return Err(ServiceError::Range(format!(
                "{date} is before enrollment on {}",
                participant.enrollment_date
            )));
        }
        if offset >= i64::from(program_days) {
            return Err(ServiceError::StateViolation(format!("the {program_days}-day program is complete")));
        }
        if let Some(last) = participant.sessions.last().map(|sid| &sessions[sid]) {
            if last.date == date {
                return Err(ServiceError::Duplicate(format!("a session already exists for {date}")));
            }
            if last.date > date {
                return Err(ServiceError::StateViolation(format!("a later session exists ({})", last.date)));
            }
        }

        let steps = participant.step_history();
        let (arm, mode, strategy_hash) = match participant.strategy.as_mut() {
            Some(strategy) => {
                let ctx = EstimatorContext {
                    records: &participant.history,
                    steps: &steps,
                    target_date: date,
                    reward_mode: SERVICE_REWARD,
                };
                let decision = strategy.decide(&ctx, &mut participant.strategy_rng);
                (decision.arm, decision.mode, Some(strategy_hash(strategy, &participant.strategy_rng)))
            }
            None => (Arm::ALL[participant.strategy_rng.random_range(0..Arm::ALL.len())], DecisionMode::Explore, None),
        };
        let reference = participant.reference_steps(date).unwrap_or(0);
        let profiles = generator.generate(arm, reference, &mut participant.environment_rng);
        let previous_day_steps = date.checked_sub_days(Days::new(1)).and_then(|d| participant.steps.get(&d).copied());

        let id = opaque_id("s", seed, session_counter);
        participant.sessions.push(id.clone());
        let session = Session {
            id: id.clone(),
            participant_id: participant_id.to_string(),
            date,
            day_index: offset as u32 + 1,
            state: SessionState::Started,
            arm,
            mode,
            previous_day_steps,
            profiles,
            selected_profile: None,
            pre_motivation: None,
            post_motivation: None,
            settled: false,
        };
        effects.push(Effect::ArmSelected {
            participant_id: participant_id.to_string(),
            session_id: id.clone(),
            arm,
            mode,
            strategy_hash,
        });
        let view = SessionStarted {
            session_id: id.clone(),
            participant_id: participant_id.to_string(),
            date,
            day_index: session.day_index,
            state: session.state,
            previous_day_steps,
            profiles: profiles.iter().enumerate().map(|(index, p)| ProfileCard { index, steps: p.steps }).collect(),
        };
        self.sessions.insert(id, session);
        self.next_session += 1;
        Ok(view)
    }

    fn session_view(session: &Session) -> SessionView {
        SessionView {
            session_id: session.id.clone(),
            day_index: session.day_index,
            state: session.state,
            pre_motivation: session.pre_motivation,
            post_motivation: session.post_motivation,
            selected_profile: session.selected_profile,
            settled: session.settled,
        }
    }

    pub fn submit_pre_motivation(&mut self, session_id: &str, value: i64) -> Result<SessionView, ServiceError> {
        let session = self.session_for(session_id)?;
        Self::expect_state(session, SessionState::Started)?;
        let value = check_motivation(value)?;
        let session = self.sessions.get_mut(session_id).expect("checked above");
        session.pre_motivation = Some(value);
        session.state = SessionState::PreMotivationRecorded;
        Ok(Self::session_view(session))
    }

    pub fn select_profile(&mut self, session_id: &str, index: i64) -> Result<ProfileDetailView, ServiceError> {
        let session = self.session_for(session_id)?;
        Self::expect_state(session, SessionState::PreMotivationRecorded)?;
        if !(0..PROFILES_PER_SESSION as i64).contains(&index) {
            return Err(ServiceError::Range(format!("profile index must be in 0..=3, got {index}")));
        }
        let index = index as usize;
        let session = self.sessions.get_mut(session_id).expect("checked above");
        session.selected_profile = Some(index);
        session.state = SessionState::ProfileSelected;
        let profile = session.profiles[index];
        let detail = self.pack.get(profile.detail_id).expect("detail id drawn from the pack");
        Ok(ProfileDetailView {
            index,
            steps: profile.steps,
            name: detail.name.clone(),
            profession: detail.profession.clone(),
            diet: detail.diet.clone(),
            hobbies: detail.hobbies.clone(),
            exercise_habits: detail.exercise_habits.clone(),
        })
    }

    /// Completes the session; settles at once if the day's steps are already in.
    pub fn submit_post_motivation(
        &mut self,
        session_id: &str,
        value: i64,
        effects: &mut Vec<Effect>,
    ) -> Result<SessionView, ServiceError> {
        let session = self.session_for(session_id)?;
        Self::expect_state(session, SessionState::ProfileSelected)?;
        let value = check_motivation(value)?;
        let session = self.sessions.get_mut(session_id).expect("checked above");
        session.post_motivation = Some(value);
        session.state = SessionState::Completed;
        let steps_known = self.participants[&session.participant_id].steps.contains_key(&session.date);
        if steps_known {
            self.settle(session_id, effects);
        }
        Ok(Self::session_view(&self.sessions[session_id]))
    }

    pub fn history(&self, participant_id: &str) -> Result<HistoryView, ServiceError> {
        let p = self
            .participants
            .get(participant_id)
            .ok_or_else(|| ServiceError::NotFound(format!("participant {participant_id}")))?;
        let sessions: Vec<SessionSummary> = p
            .sessions
            .iter()
            .map(|sid| {
                let s = &self.sessions[sid];
                SessionSummary {
                    session_id: s.id.clone(),
                    date: s.date,
                    day_index: s.day_index,
                    state: s.state,
                    arm: s.arm,
                    settled: s.settled,
                }
            })
            .collect();
        let completed_sessions = sessions.iter().filter(|s| s.state == SessionState::Completed).count() as u32;
        Ok(HistoryView {
            participant_id: p.id.clone(),
            condition: p.condition,
            enrollment_date: p.enrollment_date,
            completed_sessions,
            completed: completed_sessions >= self.config.completion_threshold,
            bandit_observations: p.bandit_observations(),
            forced_schedule: p.strategy.as_ref().map(|s| s.state().forced_schedule.clone()).unwrap_or_default(),
            sessions,
            observations: p.history.clone(),
        })
    }

    /// SHA-256 over all participants, sessions, strategies and stream positions.
    pub fn state_hash(&self) -> String {
        #[derive(Serialize)]
        struct Snapshot<'a> {
            participants: Vec<(&'a Participant, String, String)>,
            sessions: &'a BTreeMap<String, Session>,
            next_ordinal: u64,
            next_session: u64,
        }
        let snapshot = Snapshot {
            participants: self
                .participants
                .values()
                .map(|p| (p, p.strategy_rng.get_word_pos().to_string(), p.environment_rng.get_word_pos().to_string()))
                .collect(),
            sessions: &self.sessions,
            next_ordinal: self.next_ordinal,
            next_session: self.next_session,
        };
        sha256_hex(&serde_json::to_vec(&snapshot).expect("state serializes"))
    }
}
