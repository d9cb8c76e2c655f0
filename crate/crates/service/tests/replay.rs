mod common;

use std::io::Cursor;

use chrono::Days;
use scomab_core::simulation::PlayerConfig;
use scomab_service::scripted::ScriptedPlayer;
use scomab_service::{replay, Condition, Service, StudyConfig};

use common::{drive, fixed_clock, start};

fn config() -> StudyConfig {
    StudyConfig { seed: 17, ..StudyConfig::default() }
}

fn full_program() -> (Service, String) {
    let mut service = Service::new(config()).unwrap().with_clock(fixed_clock);
    let mut player = ScriptedPlayer::new(&PlayerConfig::default(), 17, 0).unwrap();
    let pid = drive(&mut service, &mut player, 21);
    (service, pid)
}

#[test]
fn full_program_replays_exactly() {
    let (service, pid) = full_program();
    let (replayed, report) = replay(config(), Cursor::new(service.log_text())).unwrap();
    assert!(report.halted.is_none(), "{report:?}");
    assert_eq!(report.last_seq, service.last_seq());
    assert_eq!(replayed.state_hash(), service.state_hash());
    assert_eq!(replayed.history(&pid).unwrap(), service.history(&pid).unwrap());
    let h = service.history(&pid).unwrap();
    assert_eq!(h.bandit_observations, 21);
    assert!(h.completed);
}

#[test]
fn replay_is_idempotent() {
    let (service, _) = full_program();
    let (once, _) = replay(config(), Cursor::new(service.log_text())).unwrap();
    let (twice, _) = replay(config(), Cursor::new(once.log_text())).unwrap();
    assert_eq!(once.log_text(), service.log_text());
    assert_eq!(twice.log_text(), once.log_text());
    assert_eq!(twice.state_hash(), once.state_hash());
}

#[test]
fn empty_log_is_empty_state() {
    let (service, report) = replay(config(), Cursor::new("")).unwrap();
    assert_eq!(report.last_seq, 0);
    assert!(report.halted.is_none());
    assert_eq!(service.state_hash(), Service::new(config()).unwrap().state_hash());
}

#[test]
fn truncated_log_stops_at_last_complete_command() {
    let mut service = Service::new(config()).unwrap().with_clock(fixed_clock);
    let p = service.create_participant(Condition::Experimental, start()).unwrap();
    let s = service.start_session(&p.id, start()).unwrap();
    service.submit_pre_motivation(&s.session_id, 3).unwrap();
    let mid_session_hash = service.state_hash();
    let mid_session_log = service.log_text();
    service.select_profile(&s.session_id, 1).unwrap();

    // cut the final line in half
    let text = service.log_text();
    let cut = &text[..text.len() - 20];
    let (replayed, report) = replay(config(), Cursor::new(cut)).unwrap();
    let halt = report.halted.expect("damaged line reported");
    assert_eq!(halt.line, 5);
    assert_eq!(report.last_seq, 4);
    assert_eq!(replayed.state_hash(), mid_session_hash);
    assert_eq!(replayed.log_text(), mid_session_log);

    // a session start without its arm_selected event is dropped as a unit
    let lines: Vec<&str> = mid_session_log.lines().collect();
    let (replayed, report) = replay(config(), Cursor::new(lines[..2].join("\n"))).unwrap();
    assert_eq!(report.last_seq, 1);
    assert_eq!(report.halted.unwrap().line, 2);
    assert_eq!(replayed.events().len(), 1);
}

#[test]
fn tampered_result_is_detected() {
    let (service, _) = full_program();
    let text = service.log_text().replacen("\"steps\":", "\"steps\":1", 3);
    let (replayed, report) = replay(config(), Cursor::new(text)).unwrap();
    assert!(report.halted.is_some());
    assert!(replayed.last_seq() < service.last_seq());
}

#[test]
fn file_backed_service_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.jsonl");
    let (mut service, report) = Service::open(config(), &path).unwrap();
    assert_eq!(report.last_seq, 0);
    let p = service.create_participant(Condition::Control, start()).unwrap();
    service.ingest_steps(&p.id, start() - Days::new(1), 5000).unwrap();
    let hash = service.state_hash();
    drop(service);

    let (mut resumed, report) = Service::open(config(), &path).unwrap();
    assert_eq!(report.last_seq, 2);
    assert_eq!(resumed.state_hash(), hash);
    resumed.start_session(&p.id, start()).unwrap();
    drop(resumed);

    // damage the tail; reopening keeps and rewrites the valid prefix
    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("{\"seq\":5,\"times");
    std::fs::write(&path, text).unwrap();
    let (reopened, report) = Service::open(config(), &path).unwrap();
    assert_eq!(report.last_seq, 4);
    assert_eq!(report.halted.unwrap().line, 5);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), reopened.log_text());
}
