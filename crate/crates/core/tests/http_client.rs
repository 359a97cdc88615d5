//! End-to-end checks of the HTTP chat client against a loopback server
//! speaking the chat-completions wire format.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use gvbench_core::chat::{ChatMessage, ChatRequest, ContentPart, HttpChatClient, ModelClient, ModelEndpoint};

struct Received {
    body: serde_json::Value,
    authorization: Option<String>,
}

/// Minimal HTTP/1.1 server: runs `script` once per request, in order, then
/// keeps serving the last entry. Each entry is (status, body).
fn serve(
    listener: TcpListener,
    script: Vec<(u16, String)>,
    seen: Arc<std::sync::Mutex<Vec<Received>>>,
) -> std::thread::JoinHandle<()> {
    std::thread::spawn(move || {
        let hits = AtomicUsize::new(0);
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            let Some(received) = read_request(&mut stream) else { break };
            seen.lock().unwrap().push(received);
            let index = hits.fetch_add(1, Ordering::SeqCst).min(script.len() - 1);
            let (status, body) = &script[index];
            let reason = if *status == 200 { "OK" } else { "Error" };
            let response = format!(
                "HTTP/1.1 {status} {reason}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
                body.len()
            );
            stream.write_all(response.as_bytes()).ok();
            if hits.load(Ordering::SeqCst) >= script.len() {
                break;
            }
        }
    })
}

fn read_request(stream: &mut TcpStream) -> Option<Received> {
    let mut reader = BufReader::new(stream.try_clone().ok()?);
    let mut line = String::new();
    reader.read_line(&mut line).ok()?;
    let mut content_length = 0usize;
    let mut authorization = None;
    loop {
        let mut header = String::new();
        reader.read_line(&mut header).ok()?;
        let header = header.trim_end();
        if header.is_empty() {
            break;
        }
        let lower = header.to_lowercase();
        if let Some(value) = lower.strip_prefix("content-length:") {
            content_length = value.trim().parse().ok()?;
        }
        if let Some(value) = header.split_once(':').filter(|(k, _)| k.eq_ignore_ascii_case("authorization")) {
            authorization = Some(value.1.trim().to_string());
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body).ok()?;
    Some(Received { body: serde_json::from_slice(&body).ok()?, authorization })
}

fn ok_reply(content: &str) -> (u16, String) {
    (
        200,
        serde_json::json!({ "choices": [{ "message": { "role": "assistant", "content": content } }] })
            .to_string(),
    )
}

fn request_with_image() -> ChatRequest {
    ChatRequest {
        model: "test-model".into(),
        temperature: 0.0,
        max_tokens: 128,
        messages: vec![ChatMessage {
            role: "user".into(),
            content: vec![
                ContentPart::Image { data: "aGVsbG8=".into(), media_type: "image/svg+xml".into() },
                ContentPart::Text { text: "Is there a cycle?".into() },
            ],
        }],
    }
}

#[test]
fn posts_wire_format_with_auth_and_reads_reply() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let seen = Arc::new(std::sync::Mutex::new(Vec::new()));
    let handle = serve(listener, vec![ok_reply("Yes.")], seen.clone());

    std::env::set_var("GVBENCH_HTTP_TEST_TOKEN", "secret-token");
    let mut endpoint = ModelEndpoint::new(format!("http://{addr}/v1/chat/completions"), "test-model");
    endpoint.token_env = Some("GVBENCH_HTTP_TEST_TOKEN".into());
    endpoint.max_retries = 0;
    let client = HttpChatClient::new(endpoint).unwrap();
    let reply = client.complete(&request_with_image()).unwrap();
    assert_eq!(reply, "Yes.");
    handle.join().unwrap();

    let seen = seen.lock().unwrap();
    assert_eq!(seen.len(), 1);
    let body = &seen[0].body;
    assert_eq!(body["model"], "test-model");
    assert_eq!(body["temperature"], 0.0);
    assert_eq!(body["messages"][0]["role"], "user");
    assert_eq!(body["messages"][0]["content"][0]["type"], "image");
    assert_eq!(body["messages"][0]["content"][0]["media_type"], "image/svg+xml");
    assert_eq!(body["messages"][0]["content"][1]["type"], "text");
    assert_eq!(seen[0].authorization.as_deref(), Some("Bearer secret-token"));
}

#[test]
fn retries_transient_failures_with_backoff() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let seen = Arc::new(std::sync::Mutex::new(Vec::new()));
    let script = vec![
        (500, "{}".to_string()),
        (429, "{}".to_string()),
        ok_reply("No."),
    ];
    let handle = serve(listener, script, seen.clone());

    let mut endpoint = ModelEndpoint::new(format!("http://{addr}/v1/chat/completions"), "m");
    endpoint.max_retries = 3;
    endpoint.backoff_ms = 1;
    let client = HttpChatClient::new(endpoint).unwrap();
    let reply = client.complete(&request_with_image()).unwrap();
    assert_eq!(reply, "No.");
    handle.join().unwrap();
    assert_eq!(seen.lock().unwrap().len(), 3);
}

#[test]
fn exhausted_retries_surface_as_transport_error() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let seen = Arc::new(std::sync::Mutex::new(Vec::new()));
    let script = vec![(500, "{}".to_string()), (500, "{}".to_string())];
    let handle = serve(listener, script, seen.clone());

    let mut endpoint = ModelEndpoint::new(format!("http://{addr}/v1/chat/completions"), "m");
    endpoint.max_retries = 1;
    endpoint.backoff_ms = 1;
    let client = HttpChatClient::new(endpoint).unwrap();
    let result = client.complete(&request_with_image());
    assert!(matches!(result, Err(gvbench_core::Error::Transport(_))));
    handle.join().unwrap();
    assert_eq!(seen.lock().unwrap().len(), 2);
}
