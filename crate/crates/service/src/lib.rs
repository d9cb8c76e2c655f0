//! Study backend for the daily comparison sessions.
//!
//! [`Study`] holds participants, sessions and their bandits; [`Service`]
//! wraps it with an append-only JSON-lines event log that [`replay`] can
//! rebuild state from; [`router`] exposes both over HTTP.

mod error;
mod http;
mod journal;
pub mod scripted;
mod study;

pub use error::ServiceError;
pub use http::{router, serve, SharedService};
pub use journal::{replay, Command, Event, ReplayHalt, ReplayReport, Service};
pub use study::{
    Condition, Effect, HistoryView, IngestOutcome, Participant, ParticipantView, ProfileCard, ProfileDetailView,
    Session, SessionStarted, SessionState, SessionSummary, SessionView, Settlement, Study, StudyConfig,
    SERVICE_REWARD,
};
