use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, LineWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{NaiveDate, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::study::{
    Condition, Effect, HistoryView, IngestOutcome, ParticipantView, ProfileDetailView, SessionStarted, SessionView,
    Study, StudyConfig,
};
use crate::ServiceError;

/// A state-changing request. Serialized with `kind` naming the event it produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Command {
    ParticipantCreated { condition: Condition, enrollment_date: NaiveDate },
    StepsIngested { participant_id: String, date: NaiveDate, steps: i64 },
    SessionStarted { participant_id: String, date: NaiveDate },
    PreMotivationRecorded { session_id: String, value: i64 },
    ProfileSelected { session_id: String, index: i64 },
    PostMotivationRecorded { session_id: String, value: i64 },
}

/// One line of the event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    pub timestamp: String,
    pub kind: String,
    pub payload: Value,
}

fn split_kind(value: Value) -> (String, Map<String, Value>) {
    let Value::Object(mut map) = value else { unreachable!("tagged enums serialize to objects") };
    let Some(Value::String(kind)) = map.remove("kind") else { unreachable!("tag present") };
    (kind, map)
}

fn join_kind(kind: &str, payload: &Value) -> Option<Value> {
    let mut map = payload.as_object()?.clone();
    map.remove("result");
    map.insert("kind".into(), Value::String(kind.into()));
    Some(Value::Object(map))
}

impl Event {
    fn command(seq: u64, timestamp: String, command: &Command, result: Value) -> Self {
        let (kind, mut payload) = split_kind(serde_json::to_value(command).expect("command serializes"));
        payload.insert("result".into(), result);
        Self { seq, timestamp, kind, payload: Value::Object(payload) }
    }

    fn effect(seq: u64, timestamp: String, effect: &Effect) -> Self {
        let (kind, payload) = split_kind(serde_json::to_value(effect).expect("effect serializes"));
        Self { seq, timestamp, kind, payload: Value::Object(payload) }
    }

    /// The command this event records, or `None` for derived events.
    pub fn as_command(&self) -> Option<Command> {
        serde_json::from_value(join_kind(&self.kind, &self.payload)?).ok()
    }

    pub fn as_effect(&self) -> Option<Effect> {
        serde_json::from_value(join_kind(&self.kind, &self.payload)?).ok()
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("event serializes")
    }
}

/// Study state plus its append-only log.
pub struct Service {
    study: Study,
    events: Vec<Event>,
    sink: Option<LineWriter<File>>,
    clock: fn() -> String,
}

fn wall_clock() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl std::fmt::Debug for Service {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Service").field("events", &self.events.len()).finish_non_exhaustive()
    }
}

impl Service {
    /// In-memory service without a log file.
    pub fn new(config: StudyConfig) -> Result<Self, ServiceError> {
        Ok(Self { study: Study::new(config)?, events: Vec::new(), sink: None, clock: wall_clock })
    }

    /// Replaces the timestamp source, e.g. with a fixed clock in tests.
    pub fn with_clock(mut self, clock: fn() -> String) -> Self {
        self.clock = clock;
        self
    }

    /// Opens `path`, replaying any events already in it, and appends from there.
    ///
    /// If the log ends in a damaged line, the valid prefix is kept and the
    /// file is rewritten to contain only that prefix.
    pub fn open(config: StudyConfig, path: &Path) -> Result<(Self, ReplayReport), ServiceError> {
        let io = |e: std::io::Error| ServiceError::Internal(format!("{}: {e}", path.display()));
        let (mut service, report) = if path.exists() {
            replay(config, BufReader::new(File::open(path).map_err(io)?))?
        } else {
            (Service::new(config)?, ReplayReport::default())
        };
        if report.halted.is_some() {
            let tmp = PathBuf::from(format!("{}.tmp", path.display()));
            let mut out = File::create(&tmp).map_err(io)?;
            for e in &service.events {
                writeln!(out, "{}", e.to_line()).map_err(io)?;
            }
            out.sync_all().map_err(io)?;
            std::fs::rename(&tmp, path).map_err(io)?;
        }
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
        service.sink = Some(LineWriter::new(file));
        Ok((service, report))
    }

    pub fn study(&self) -> &Study {
        &self.study
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn last_seq(&self) -> u64 {
        self.events.last().map_or(0, |e| e.seq)
    }

    fn run(&mut self, command: &Command, effects: &mut Vec<Effect>) -> Result<(Value, bool), ServiceError> {
        let s = &mut self.study;
        Ok(match command {
            Command::ParticipantCreated { condition, enrollment_date } => {
                (json(&s.create_participant(*condition, *enrollment_date)), true)
            }
            Command::StepsIngested { participant_id, date, steps } => {
                let out = s.ingest_steps(participant_id, *date, *steps, effects)?;
                let stored = out.stored;
                (json(&out), stored)
            }
            Command::SessionStarted { participant_id, date } => {
                (json(&s.start_session(participant_id, *date, effects)?), true)
            }
            Command::PreMotivationRecorded { session_id, value } => {
                (json(&s.submit_pre_motivation(session_id, *value)?), true)
            }
            Command::ProfileSelected { session_id, index } => (json(&s.select_profile(session_id, *index)?), true),
            Command::PostMotivationRecorded { session_id, value } => {
                (json(&s.submit_post_motivation(session_id, *value, effects)?), true)
            }
        })
    }

    /// Executes `command`; if it changed state, appends it and its effects to the log.
    pub fn apply(&mut self, command: Command) -> Result<Value, ServiceError> {
        let mut effects = Vec::new();
        let (result, changed) = self.run(&command, &mut effects)?;
        if changed {
            let timestamp = (self.clock)();
            let mut seq = self.last_seq();
            let mut batch = Vec::with_capacity(1 + effects.len());
            seq += 1;
            batch.push(Event::command(seq, timestamp.clone(), &command, result.clone()));
            for effect in &effects {
                seq += 1;
                batch.push(Event::effect(seq, timestamp.clone(), effect));
            }
            if let Some(sink) = self.sink.as_mut() {
                for e in &batch {
                    writeln!(sink, "{}", e.to_line())
                        .map_err(|e| ServiceError::Internal(format!("event log write failed: {e}")))?;
                }
            }
            self.events.extend(batch);
        }
        Ok(result)
    }

    fn typed<T: serde::de::DeserializeOwned>(&mut self, command: Command) -> Result<T, ServiceError> {
        let value = self.apply(command)?;
        Ok(serde_json::from_value(value).expect("response round-trips"))
    }

    pub fn create_participant(
        &mut self,
        condition: Condition,
        enrollment_date: NaiveDate,
    ) -> Result<ParticipantView, ServiceError> {
        self.typed(Command::ParticipantCreated { condition, enrollment_date })
    }

    pub fn ingest_steps(&mut self, participant_id: &str, date: NaiveDate, steps: i64) -> Result<IngestOutcome, ServiceError> {
        self.typed(Command::StepsIngested { participant_id: participant_id.into(), date, steps })
    }

    pub fn start_session(&mut self, participant_id: &str, date: NaiveDate) -> Result<SessionStarted, ServiceError> {
        self.typed(Command::SessionStarted { participant_id: participant_id.into(), date })
    }

    pub fn submit_pre_motivation(&mut self, session_id: &str, value: i64) -> Result<SessionView, ServiceError> {
        self.typed(Command::PreMotivationRecorded { session_id: session_id.into(), value })
    }

    pub fn select_profile(&mut self, session_id: &str, index: i64) -> Result<ProfileDetailView, ServiceError> {
        self.typed(Command::ProfileSelected { session_id: session_id.into(), index })
    }

    pub fn submit_post_motivation(&mut self, session_id: &str, value: i64) -> Result<SessionView, ServiceError> {
        self.typed(Command::PostMotivationRecorded { session_id: session_id.into(), value })
    }

    pub fn history(&self, participant_id: &str) -> Result<HistoryView, ServiceError> {
        self.study.history(participant_id)
    }

    pub fn state_hash(&self) -> String {
        self.study.state_hash()
    }

    /// The whole log as newline-terminated lines.
    pub fn log_text(&self) -> String {
        self.events.iter().map(|e| e.to_line() + "\n").collect()
    }
}

fn json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("response serializes")
}

/// Where and why replay stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayHalt {
    /// 1-based line number of the first rejected line.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplayReport {
    /// Sequence number of the last event applied.
    pub last_seq: u64,
    pub events_applied: usize,
    pub halted: Option<ReplayHalt>,
}

/// Rebuilds a service by re-executing every logged command.
///
/// Each command's result and derived events must match what the log
/// recorded. Replay stops at the first unreadable or out-of-sequence line,
/// or at the first command that diverges; a command is kept only together
/// with all of its derived events, so the state is that of the last
/// complete command.
pub fn replay<R: BufRead>(config: StudyConfig, reader: R) -> Result<(Service, ReplayReport), ServiceError> {
    let mut events: Vec<Event> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    let mut halted = None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                halted = Some(ReplayHalt { line: lineno, reason: format!("unreadable line: {e}") });
                break;
            }
        };
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Event>(&line) {
            Ok(e) if e.seq == events.len() as u64 + 1 => {
                events.push(e);
                lines.push(lineno);
            }
            Ok(e) => {
                let reason = format!("expected seq {}, found {}", events.len() + 1, e.seq);
                halted = Some(ReplayHalt { line: lineno, reason });
                break;
            }
            Err(e) => {
                halted = Some(ReplayHalt { line: lineno, reason: format!("malformed event: {e}") });
                break;
            }
        }
    }

    let mut service = Service::new(config.clone())?;
    if let Err((index, reason)) = service.apply_logged(&events) {
        let line = lines[index];
        halted = Some(ReplayHalt { line, reason });
        service = Service::new(config)?;
        service.apply_logged(&events[..index]).expect("prefix replays cleanly");
    }
    let report = ReplayReport { last_seq: service.last_seq(), events_applied: service.events.len(), halted };
    Ok((service, report))
}

impl Service {
    /// Re-executes `events`; on failure returns the index of the offending command.
    fn apply_logged(&mut self, events: &[Event]) -> Result<(), (usize, String)> {
        let mut i = 0;
        while i < events.len() {
            let event = &events[i];
            let command = event
                .as_command()
                .ok_or_else(|| (i, format!("expected a command event, found `{}`", event.kind)))?;
            let mut effects = Vec::new();
            let (result, changed) =
                self.run(&command, &mut effects).map_err(|e| (i, format!("command rejected on replay: {e}")))?;
            if !changed || Some(&result) != event.payload.get("result") {
                return Err((i, format!("result of seq {} diverged on replay", event.seq)));
            }
            for (k, effect) in effects.iter().enumerate() {
                match events.get(i + 1 + k) {
                    None => return Err((i, format!("log ends before the derived events of seq {}", event.seq))),
                    Some(logged) if logged.as_effect().as_ref() == Some(effect) => {}
                    Some(logged) => return Err((i, format!("derived event seq {} diverged on replay", logged.seq))),
                }
            }
            let end = i + 1 + effects.len();
            self.events.extend_from_slice(&events[i..end]);
            i = end;
        }
        Ok(())
    }
}
