//! Endpoint adapter tests against a local single-shot HTTP server: field
//! mapping, mode-dependent token budgets, reasoning suffixes, and the retry
//! path.

use std::io::{Read, Write};
use std::net::TcpListener;
use std::sync::mpsc;
use std::thread;

use phenolab_agents::{EndpointAgent, EndpointConfig, EndpointStyle};
use phenolab_core::{Agent, AnswerKind, ChoiceQuery, PromptMode, QueryView, COT_TEMPLATE, SB_TEMPLATE};

/// Serves `responses` one per connection and sends each request body back
/// over the channel.
fn spawn_server(responses: Vec<(u16, String)>) -> (String, mpsc::Receiver<serde_json::Value>) {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind");
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for (status, body) in responses {
            let (mut socket, _) = listener.accept().expect("accept");
            let mut buf = vec![0u8; 65536];
            let mut read = 0;
            let request = loop {
                let n = socket.read(&mut buf[read..]).expect("read");
                read += n;
                let text = String::from_utf8_lossy(&buf[..read]).to_string();
                if let Some(split) = text.find("\r\n\r\n") {
                    let headers = &text[..split];
                    let len = headers
                        .lines()
                        .find_map(|l| l.to_ascii_lowercase().strip_prefix("content-length: ").map(str::to_string))
                        .and_then(|v| v.trim().parse::<usize>().ok())
                        .unwrap_or(0);
                    if text.len() >= split + 4 + len {
                        break text[split + 4..split + 4 + len].to_string();
                    }
                }
            };
            if let Ok(v) = serde_json::from_str::<serde_json::Value>(&request) {
                let _ = tx.send(v);
            }
            let reason = if status == 200 { "OK" } else { "ERR" };
            let reply = format!(
                "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
            let _ = socket.write_all(reply.as_bytes());
        }
    });
    (format!("http://{addr}/v1/completions"), rx)
}

fn config(url: &str) -> EndpointConfig {
    EndpointConfig {
        base_url: url.to_string(),
        model_name: "test-model".into(),
        temperature: 0.0,
        max_tokens_base: 1,
        max_tokens_reasoning: 300,
        retry_budget: 3,
        timeout_s: 5,
        api_key_env: None,
        prompt_prefix: String::new(),
        prompt_suffix: String::new(),
        style: EndpointStyle::OpenaiCompletions,
        completion_pointer: None,
    }
}

fn machine_query() -> ChoiceQuery {
    ChoiceQuery::discrete(
        AnswerKind::LetterChoice,
        "Pick a machine.".into(),
        vec!["F".into(), "J".into()],
        "A: Machine",
    )
}

#[test]
fn base_mode_sends_standard_fields_and_one_token() {
    let ok = r#"{"choices":[{"text":" F."}]}"#.to_string();
    let (url, rx) = spawn_server(vec![(200, ok)]);
    let mut agent = EndpointAgent::new(config(&url));
    let reply = agent
        .choose(&machine_query(), &QueryView::Opaque, PromptMode::Base)
        .unwrap();
    assert_eq!(reply, " F.");
    let body = rx.recv().unwrap();
    assert_eq!(body["model"], "test-model");
    assert_eq!(body["temperature"], 0.0);
    assert_eq!(body["max_tokens"], 1);
    let prompt = body["prompt"].as_str().unwrap();
    assert!(prompt.ends_with("A: Machine"));
}

#[test]
fn cot_mode_appends_template_and_raises_budget() {
    let ok = r#"{"choices":[{"text":"Final answer: Machine J"}]}"#.to_string();
    let (url, rx) = spawn_server(vec![(200, ok)]);
    let mut agent = EndpointAgent::new(config(&url));
    agent
        .choose(&machine_query(), &QueryView::Opaque, PromptMode::Cot)
        .unwrap();
    let body = rx.recv().unwrap();
    assert_eq!(body["max_tokens"], 300);
    let prompt = body["prompt"].as_str().unwrap();
    let expected_suffix = COT_TEMPLATE.replace("{format_answer}", "Machine ");
    assert!(prompt.ends_with(&expected_suffix), "prompt: {prompt}");
}

#[test]
fn sb_mode_uses_the_step_back_template() {
    let ok = r#"{"choices":[{"text":"Final answer: Machine F"}]}"#.to_string();
    let (url, rx) = spawn_server(vec![(200, ok)]);
    let mut agent = EndpointAgent::new(config(&url));
    agent
        .choose(&machine_query(), &QueryView::Opaque, PromptMode::Sb)
        .unwrap();
    let body = rx.recv().unwrap();
    let prompt = body["prompt"].as_str().unwrap();
    let expected_suffix = SB_TEMPLATE.replace("{format_answer}", "Machine ");
    assert!(prompt.ends_with(&expected_suffix));
    assert!(prompt.contains("First, take-a-step-back"));
}

#[test]
fn transient_errors_are_retried_until_budget() {
    let ok = r#"{"choices":[{"text":" J."}]}"#.to_string();
    let (url, _rx) = spawn_server(vec![
        (500, "{}".to_string()),
        (500, "{}".to_string()),
        (200, ok),
    ]);
    let mut agent = EndpointAgent::new(config(&url));
    let reply = agent
        .choose(&machine_query(), &QueryView::Opaque, PromptMode::Base)
        .unwrap();
    assert_eq!(reply, " J.");
}

#[test]
fn exhausted_budget_surfaces_endpoint_failure() {
    let (url, _rx) = spawn_server(vec![
        (500, "{}".to_string()),
        (500, "{}".to_string()),
        (500, "{}".to_string()),
    ]);
    let mut agent = EndpointAgent::new(config(&url));
    let err = agent
        .choose(&machine_query(), &QueryView::Opaque, PromptMode::Base)
        .unwrap_err();
    assert!(err.to_string().contains("endpoint failure"));
}

#[test]
fn bare_style_reads_the_completion_field() {
    let (url, _rx) = spawn_server(vec![(200, r#"{"completion":" F."}"#.to_string())]);
    let mut cfg = config(&url);
    cfg.style = EndpointStyle::Bare;
    let mut agent = EndpointAgent::new(cfg);
    let reply = agent
        .choose(&machine_query(), &QueryView::Opaque, PromptMode::Base)
        .unwrap();
    assert_eq!(reply, " F.");
}

#[test]
fn custom_pointer_overrides_style() {
    let (url, _rx) = spawn_server(vec![(200, r#"{"out":{"text":" J."}}"#.to_string())]);
    let mut cfg = config(&url);
    cfg.completion_pointer = Some("/out/text".into());
    let mut agent = EndpointAgent::new(cfg);
    let reply = agent
        .choose(&machine_query(), &QueryView::Opaque, PromptMode::Base)
        .unwrap();
    assert_eq!(reply, " J.");
}
