#![allow(dead_code)]

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use chrono::{Days, NaiveDate};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use scomab_service::scripted::ScriptedPlayer;
use scomab_service::{Condition, ProfileCard, Service, SessionStarted};

pub fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 1, 1).unwrap()
}

pub fn fixed_clock() -> String {
    "2024-01-01T00:00:00.000Z".into()
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

/// Drives one experimental participant through `days` daily sessions in-process.
pub fn drive(service: &mut Service, player: &mut ScriptedPlayer, days: u32) -> String {
    let p = service.create_participant(Condition::Experimental, start()).unwrap();
    service.ingest_steps(&p.id, start() - Days::new(1), i64::from(player.baseline_day())).unwrap();
    for day in 0..days {
        let date = start() + Days::new(u64::from(day));
        let started: SessionStarted = service.start_session(&p.id, date).unwrap();
        let cards: Vec<ProfileCard> = started.profiles.clone();
        let r = player.respond(&cards);
        service.submit_pre_motivation(&started.session_id, i64::from(r.pre_motivation)).unwrap();
        service.select_profile(&started.session_id, r.profile_index as i64).unwrap();
        service.submit_post_motivation(&started.session_id, i64::from(r.post_motivation)).unwrap();
        service.ingest_steps(&p.id, date, i64::from(r.steps)).unwrap();
    }
    p.id
}
