use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use clusterweyl::interface::service::{router, AppState};
use clusterweyl::quiver::WeightedQuiver;
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn json_call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (s, b) = call(app, method, uri, body).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

fn app() -> Router {
    router(Arc::new(AppState::new(None)))
}

fn qm_c3() -> Value {
    json!({ "build": { "kind": "qm", "type": "C", "n": 3, "m": 3 } })
}

#[tokio::test]
async fn create_mutate_undo_returns_to_start() {
    let app = app();
    let (s, created) = json_call(&app, "POST", "/session", Some(qm_c3())).await;
    assert_eq!(s, StatusCode::CREATED);
    let id = created["id"].as_str().unwrap().to_string();
    assert!(created["signs"].as_array().unwrap().iter().all(|e| e["sign"] == "+"));

    let (s, after) = json_call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({ "vertex": "v:2:2" }))).await;
    assert_eq!(s, StatusCode::OK);
    assert_ne!(after["quiver"], created["quiver"]);
    assert_eq!(after["history"], json!(1));

    let (s, undone) = json_call(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(undone["quiver"], created["quiver"]);
    assert_eq!(undone["redo"], json!(1));

    let (_, redone) = json_call(&app, "POST", &format!("/session/{id}/redo"), None).await;
    assert_eq!(redone["quiver"], after["quiver"]);
}

#[tokio::test]
async fn r_sequence_fixes_the_quiver_and_moves_row_one() {
    let app = app();
    let (_, created) = json_call(&app, "POST", "/session", Some(qm_c3())).await;
    let id = created["id"].as_str().unwrap();
    let (s, st) = json_call(&app, "POST", &format!("/session/{id}/sequence"), Some(json!({ "name": "R", "params": { "s": 1, "i": 1 } }))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(st["quiver"], created["quiver"]);
    let (_, a1) = json_call(&app, "GET", &format!("/session/{id}/variable/v:1:1?kind=A"), None).await;
    assert_ne!(a1["expression"], json!("A[v:1:1]"));
    let (_, a2) = json_call(&app, "GET", &format!("/session/{id}/variable/v:2:1?kind=A"), None).await;
    assert_eq!(a2["expression"], json!("A[v:2:1]"));
    let (_, c) = json_call(&app, "GET", &format!("/session/{id}/variable/v:1:1?kind=coeff"), None).await;
    assert_eq!(c["sign"], json!("-"));
    let (_, h) = json_call(&app, "GET", &format!("/session/{id}/history"), None).await;
    assert_eq!(h["entries"][0]["name"], json!("R"));
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let (s, e) = json_call(&app, "GET", "/session/nope", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(e["error"], json!("unknown_session"));

    let (_, w) = json_call(&app, "POST", "/session", Some(json!({ "build": { "kind": "word", "type": "A", "n": 2, "word": "121" } }))).await;
    let id = w["id"].as_str().unwrap();
    let (s, e) = json_call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({ "vertex": "v:1:1" }))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(e["error"], json!("frozen_vertex"));
    let (s, _) = json_call(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);

    let (s, _) = json_call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({ "vertx": "v:1:2" }))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = json_call(&app, "POST", "/session", Some(json!({ "build": { "kind": "qm", "type": "A", "n": 2, "m": 1 } }))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = json_call(&app, "POST", &format!("/session/{id}/sequence"), Some(json!({ "name": "nonsense" }))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn quiver_view_has_layout_for_every_vertex() {
    let app = app();
    let (_, created) = json_call(&app, "POST", "/session", Some(json!({ "build": { "kind": "tilde", "type": "C", "n": 3, "k": 1 } }))).await;
    let id = created["id"].as_str().unwrap();
    let (s, v) = json_call(&app, "GET", &format!("/session/{id}/quiver"), None).await;
    assert_eq!(s, StatusCode::OK);
    let q = WeightedQuiver::from_json_str(&v["quiver"].to_string()).unwrap();
    assert_eq!(v["layout"].as_array().unwrap().len(), q.ids().len());
    let (_, again) = json_call(&app, "GET", &format!("/session/{id}/quiver"), None).await;
    assert_eq!(v, again);
}

#[tokio::test]
async fn build_matches_cli_bytes() {
    let app = app();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.json");
    let code = clusterweyl::interface::cli::run(["clusterweyl", "build", "qm", "--type", "C", "--n", "3", "--m", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (s, body) = call(&app, "POST", "/build", Some(json!({ "kind": "qm", "type": "C", "n": 3, "m": 3 }))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body, std::fs::read(&out).unwrap());
}

#[tokio::test]
async fn journal_recovers_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let first = router(Arc::new(AppState::new(Some(dir.path().to_path_buf()))));
    let (_, created) = json_call(&first, "POST", "/session", Some(qm_c3())).await;
    let id = created["id"].as_str().unwrap().to_string();
    json_call(&first, "POST", &format!("/session/{id}/mutate"), Some(json!({ "vertex": "v:1:2" }))).await;
    json_call(&first, "POST", &format!("/session/{id}/sequence"), Some(json!({ "name": "R", "params": { "s": 2, "i": 1 } }))).await;
    json_call(&first, "POST", &format!("/session/{id}/undo"), None).await;
    let (_, before) = json_call(&first, "GET", &format!("/session/{id}"), None).await;

    let state = AppState::recover(dir.path().to_path_buf()).unwrap();
    assert_eq!(state.session_count(), 1);
    let second = router(Arc::new(state));
    let (s, after) = json_call(&second, "GET", &format!("/session/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(before, after);
    let (_, fresh) = json_call(&second, "POST", "/session", Some(qm_c3())).await;
    assert_ne!(fresh["id"].as_str().unwrap(), id);
}

#[tokio::test]
async fn random_scripts_replay_identically() {
    let ops = ["v:1:1", "v:1:2", "v:2:1", "v:2:2", "v:1:3", "v:2:3"];
    for seed in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let script: Vec<(String, Option<Value>)> = (0..12)
            .map(|_| match rng.gen_range(0..4) {
                0 => ("undo".to_string(), None),
                1 => ("sequence".to_string(), Some(json!({ "name": "R", "params": { "s": rng.gen_range(1..=2), "i": 1 } }))),
                _ => ("mutate".to_string(), Some(json!({ "vertex": ops[rng.gen_range(0..ops.len())] }))),
            })
            .collect();
        let mut finals = Vec::new();
        for _ in 0..2 {
            let app = app();
            let (_, created) = json_call(&app, "POST", "/session", Some(json!({ "build": { "kind": "qm", "type": "A", "n": 2, "m": 3 } }))).await;
            let id = created["id"].as_str().unwrap();
            for (op, body) in &script {
                call(&app, "POST", &format!("/session/{id}/{op}"), body.clone()).await;
            }
            finals.push(json_call(&app, "GET", &format!("/session/{id}"), None).await.1);
        }
        assert_eq!(finals[0], finals[1]);
    }
}
