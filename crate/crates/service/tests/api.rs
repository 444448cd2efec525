use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use tradeoff_service::{router, ServiceConfig};

async fn call(method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let app = router(&ServiceConfig::default());
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn post(uri: &str, body: Value) -> (StatusCode, Value) {
    call("POST", uri, Some(body.to_string())).await
}

fn reference2() -> Value {
    json!({"frontier": {"a": 10, "b": 0.1, "c": 10}, "valuation": {"p_life": 1e6, "p_job": 6e4}, "unit_scale": 1e6})
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() <= tol
}

#[tokio::test]
async fn health_reports_version() {
    let (status, body) = call("GET", "/v1/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
    assert_eq!(body["version"], env!("CARGO_PKG_VERSION"));
}

#[tokio::test]
async fn static_reference() {
    let (status, body) = post("/v1/solve/static", reference2()).await;
    assert_eq!(status, StatusCode::OK);
    let alloc = &body["solution"]["allocation"];
    assert!(close(&alloc["lives_saved"], 0.8575, 1e-4));
    assert!(close(&alloc["jobs_saved"], 5.1450, 1e-4));
    assert!((body["z_scaled"].as_f64().unwrap() / 1.166e12 - 1.0).abs() < 1e-3);
    assert_eq!(body["diagnostics"]["kkt"]["passed"], true);
    assert!(body["diagnostics"].get("oracle").is_none());
}

#[tokio::test]
async fn static_verify_attaches_oracle_gap() {
    let mut req = reference2();
    req["verify"] = json!(true);
    req["oracle_points"] = json!(10_000);
    let (status, body) = post("/v1/solve/static", req).await;
    assert_eq!(status, StatusCode::OK);
    let oracle = &body["diagnostics"]["oracle"];
    assert_eq!(oracle["n_points"], 10_000);
    assert!(oracle["gap"].as_f64().unwrap() >= 0.0);
}

#[tokio::test]
async fn non_positive_parameter_is_422_with_path() {
    let mut req = reference2();
    req["frontier"]["a"] = json!(0);
    let (status, body) = post("/v1/solve/static", req).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "NON_POSITIVE_PARAMETER");
    assert_eq!(body["path"], "frontier.a");
    assert!(body["message"].as_str().unwrap().contains("frontier.a"));
}

#[tokio::test]
async fn malformed_bodies_are_400() {
    let (status, body) = call("POST", "/v1/solve/static", Some("{not json".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "MALFORMED");

    let mut req = reference2();
    req["frontier"]["d"] = json!(1);
    let (status, body) = post("/v1/solve/static", req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["path"], "frontier.d");

    let mut req = reference2();
    req["valuation"]["p_job"] = json!("many");
    let (status, body) = post("/v1/solve/static", req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["path"], "valuation.p_job");

    let (status, _) = call("POST", "/v1/solve/static", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn dynamic_reference() {
    let req = json!({
        "constraint1": {"a": 0.2, "b": 1, "c": 1},
        "constraint2": {"a": 1, "b": 0.1, "c": 2},
        "period1": {"p_life": 1e6, "p_job": 6e4},
        "period2": {"p_life": 1e6, "p_job": 6e4},
        "discount_rate": 0.02,
        "unit_scale": 1e6
    });
    let (status, body) = post("/v1/solve/dynamic", req).await;
    assert_eq!(status, StatusCode::OK);
    let a = &body["solution"]["allocation"];
    assert!(close(&a["lives_period1"], 1.3903, 1e-4));
    assert!(close(&a["lives_period2"], 2.2352, 1e-4));
    assert!(close(&a["jobs_period1"], 0.0273, 1e-4));
    assert!(close(&a["jobs_period2"], 0.8178, 1e-4));
    assert!((body["z_scaled"].as_f64().unwrap() / 3.631e12 - 1.0).abs() < 1e-3);
    assert!(close(&body["optimality_ratios"][0], 1.7, 1e-9));
    assert_eq!(body["diagnostics"]["kkt"]["passed"], true);
}

#[tokio::test]
async fn dynamic_bad_discount_rate() {
    let req = json!({
        "constraint1": {"a": 0.2, "b": 1, "c": 1},
        "constraint2": {"a": 1, "b": 0.1, "c": 2},
        "period1": {"p_life": 1, "p_job": 1},
        "period2": {"p_life": 1, "p_job": 1},
        "discount_rate": -1.0
    });
    let (status, body) = post("/v1/solve/dynamic", req).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "INVALID_DISCOUNT_RATE");
    assert_eq!(body["path"], "discount_rate");
}

#[tokio::test]
async fn chain_matches_dynamic_total() {
    let chain = json!({
        "discount_rate": 0.02,
        "prices": [{"p_life": 1e6, "p_job": 6e4}, {"p_life": 1e6, "p_job": 6e4}],
        "constraints": [
            {"a": 0.2, "b": 1, "c": 1, "lives_period": 2, "jobs_period": 1},
            {"a": 1, "b": 0.1, "c": 2, "lives_period": 1, "jobs_period": 2}
        ],
        "verify": true,
        "oracle_points": 1000
    });
    let (status, body) = post("/v1/solve/chain", chain).await;
    assert_eq!(status, StatusCode::OK);
    assert!((body["solution"]["total_z"].as_f64().unwrap() - 3_631_517.29).abs() < 0.01);
    assert_eq!(body["diagnostics"]["kkt"].as_array().unwrap().len(), 2);
    assert!(body["diagnostics"]["oracle"]["gap"].as_f64().unwrap() >= 0.0);
}

#[tokio::test]
async fn chain_period_out_of_horizon() {
    let chain = json!({
        "discount_rate": 0.0,
        "prices": [{"p_life": 1, "p_job": 1}],
        "constraints": [{"a": 1, "b": 1, "c": 1, "lives_period": 1, "jobs_period": 2}]
    });
    let (status, body) = post("/v1/solve/chain", chain).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "INVALID_PERIOD");
    assert!(body["path"].as_str().unwrap().starts_with("constraints[0]"));
}

#[tokio::test]
async fn enumerate_reference() {
    let points: Vec<Value> = [(0.0, 10.0), (0.2, 9.8), (0.4, 9.2), (0.6, 8.0), (0.8, 6.0), (1.0, 0.0)]
        .iter()
        .map(|(l, j)| json!({"lives_saved": l, "jobs_saved": j}))
        .collect();
    let req = json!({"points": points, "valuation": {"p_life": 1e6, "p_job": 6e4}, "unit_scale": 1e6});
    let (status, body) = post("/v1/enumerate", req).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["table"]["argmax"], 4);
    let z: Vec<f64> = body["z_scaled"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(z, vec![600e9, 788e9, 952e9, 1080e9, 1160e9, 1000e9]);
}

#[tokio::test]
async fn enumerate_rejects_negative_point() {
    let req = json!({"points": [{"lives_saved": -1, "jobs_saved": 0}], "valuation": {"p_life": 1, "p_job": 1}});
    let (status, body) = post("/v1/enumerate", req).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["path"], "points[0].lives_saved");
}

#[tokio::test]
async fn trace_two_points_are_intercepts() {
    let (status, body) = post("/v1/trace", json!({"frontier": {"a": 10, "b": 0.1, "c": 10}, "n": 2})).await;
    assert_eq!(status, StatusCode::OK);
    let pts = body["points"].as_array().unwrap();
    assert_eq!(pts.len(), 2);
    assert_eq!((pts[0]["lives_saved"].as_f64(), pts[0]["jobs_saved"].as_f64()), (Some(1.0), Some(0.0)));
    assert_eq!((pts[1]["lives_saved"].as_f64(), pts[1]["jobs_saved"].as_f64()), (Some(0.0), Some(10.0)));
}

#[tokio::test]
async fn trace_limits() {
    let (status, body) = post("/v1/trace", json!({"frontier": {"a": 1, "b": 1, "c": 1}, "n": 1})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["path"], "n");
    let (status, body) = post("/v1/trace", json!({"frontier": {"a": 1, "b": 1, "c": 1}, "n": 10_000_000})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "LIMIT_EXCEEDED");
}

#[tokio::test]
async fn sensitivity_envelope() {
    let mut req = reference2();
    req.as_object_mut().unwrap().remove("unit_scale");
    req["parameter"] = json!("c");
    let (status, body) = post("/v1/sensitivity", req).await;
    assert_eq!(status, StatusCode::OK);
    let (dz, lambda) = (body["d_z"].as_f64().unwrap(), body["multiplier"].as_f64().unwrap());
    assert!((dz / lambda - 1.0).abs() < 1e-4);
    assert!((dz / 5.831e4 - 1.0).abs() < 1e-3);
}

#[tokio::test]
async fn sensitivity_errors_name_their_field() {
    let mut req = reference2();
    req.as_object_mut().unwrap().remove("unit_scale");
    req["parameter"] = json!("q");
    let (status, body) = post("/v1/sensitivity", req.clone()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "INVALID_PARAMETER_NAME");
    assert_eq!(body["path"], "parameter");

    req["parameter"] = json!("a");
    req["relative_step"] = json!(0.5);
    let (_, body) = post("/v1/sensitivity", req).await;
    assert_eq!(body["code"], "STEP_OUT_OF_RANGE");
    assert_eq!(body["path"], "relative_step");
}

#[tokio::test]
async fn infer_recovers_ratio() {
    let req = json!({
        "frontier": {"a": 10, "b": 0.1, "c": 10},
        "observed": {"lives_saved": 0.8574929257125443, "jobs_saved": 5.144957554275265}
    });
    let (status, body) = post("/v1/infer", req).await;
    assert_eq!(status, StatusCode::OK);
    assert!((body["ratio"].as_f64().unwrap() - 1e6 / 6e4).abs() < 1e-9);
}

#[tokio::test]
async fn infer_rounded_point_needs_tolerance() {
    let req = json!({"frontier": {"a": 10, "b": 0.1, "c": 10}, "observed": {"lives_saved": 0.8575, "jobs_saved": 5.1450}});
    let (status, body) = post("/v1/infer", req.clone()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "OFF_FRONTIER_OBSERVATION");
    assert_eq!(body["path"], "observed");

    let mut loose = req;
    loose["tolerance"] = json!(1e-4);
    let (status, body) = post("/v1/infer", loose).await;
    assert_eq!(status, StatusCode::OK);
    assert!((body["ratio"].as_f64().unwrap() - 16.667).abs() < 1e-2);
}

#[tokio::test]
async fn shift_level_scales_optimum() {
    let req = json!({
        "frontier": {"a": 10, "b": 0.1, "c": 10},
        "shift": {"kind": "level", "factor": 4},
        "valuation": {"p_life": 1e6, "p_job": 6e4}
    });
    let (status, body) = post("/v1/shift", req).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["after"]["c"], 40.0);
    let cmp = &body["comparison"];
    let (base, shifted) = (cmp["base"]["z_star"].as_f64().unwrap(), cmp["rows"][0]["solution"]["z_star"].as_f64().unwrap());
    assert!((shifted / base - 2.0).abs() < 1e-12);
}

#[tokio::test]
async fn shift_rejects_bad_factor() {
    let req = json!({"frontier": {"a": 1, "b": 1, "c": 1}, "shift": {"kind": "per_axis", "lives_factor": 1, "jobs_factor": 0}});
    let (status, body) = post("/v1/shift", req).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["path"], "shift.jobs_factor");
}

#[tokio::test]
async fn unknown_route_is_json_404() {
    let (status, body) = post("/v1/nope", json!({})).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "NOT_FOUND");
}

#[tokio::test]
async fn cors_preflight_honours_configured_origin() {
    let config = ServiceConfig::with_origins("http://localhost:5173").unwrap();
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/v1/solve/static")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let resp = router(&config).oneshot(req).await.unwrap();
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "http://localhost:5173");

    let req = Request::builder()
        .method("OPTIONS")
        .uri("/v1/solve/static")
        .header(header::ORIGIN, "http://evil.example")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let resp = router(&config).oneshot(req).await.unwrap();
    assert!(resp.headers().get(header::ACCESS_CONTROL_ALLOW_ORIGIN).is_none());
}

#[tokio::test]
async fn concurrent_requests_are_independent() {
    let bodies: Vec<Value> = (1..=16)
        .map(|k| json!({"frontier": {"a": k, "b": 1, "c": 1}, "valuation": {"p_life": 1, "p_job": 1}}))
        .collect();
    let sequential: Vec<Value> = {
        let mut out = Vec::new();
        for b in &bodies {
            out.push(post("/v1/solve/static", b.clone()).await.1);
        }
        out
    };
    let handles: Vec<_> = bodies.iter().rev().cloned().map(|b| tokio::spawn(post("/v1/solve/static", b))).collect();
    let mut concurrent = Vec::new();
    for h in handles {
        concurrent.push(h.await.unwrap().1);
    }
    concurrent.reverse();
    assert_eq!(sequential, concurrent);
}

#[tokio::test]
async fn serves_over_tcp() {
    use tokio::io::{AsyncReadExt, AsyncWriteExt};

    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { tradeoff_service::serve(listener, &ServiceConfig::default()).await });
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    let req = "GET /v1/health HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n";
    stream.write_all(req.as_bytes()).await.unwrap();
    let mut resp = String::new();
    stream.read_to_string(&mut resp).await.unwrap();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.contains("\"status\":\"ok\""), "{resp}");
}
