//! A MediaWiki `action=parse` endpoint on localhost that serves the fixture
//! corpus files and counts the requests it answers.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use percent_encoding::percent_decode_str;
use serde_json::{json, Value};

pub struct MockWiki {
    pub base_url: String,
    requests: Arc<AtomicUsize>,
    user_agents: Arc<Mutex<Vec<String>>>,
}

impl MockWiki {
    pub fn serve(corpus_dir: &Path) -> MockWiki {
        let manifest: Value =
            serde_json::from_str(&std::fs::read_to_string(corpus_dir.join("index.json")).unwrap())
                .unwrap();
        let pages: HashMap<String, String> = manifest["pages"]
            .as_object()
            .unwrap()
            .iter()
            .map(|(title, file)| {
                let markup = std::fs::read_to_string(corpus_dir.join(file.as_str().unwrap())).unwrap();
                (title.clone(), markup)
            })
            .collect();
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let requests = Arc::new(AtomicUsize::new(0));
        let user_agents = Arc::new(Mutex::new(Vec::new()));
        let (r, ua) = (requests.clone(), user_agents.clone());
        thread::spawn(move || {
            for stream in listener.incoming().flatten() {
                r.fetch_add(1, Ordering::SeqCst);
                handle(stream, &pages, &ua);
            }
        });
        MockWiki {
            base_url: format!("http://{addr}/w/api.php"),
            requests,
            user_agents,
        }
    }

    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }

    pub fn user_agents(&self) -> Vec<String> {
        self.user_agents.lock().unwrap().clone()
    }
}

fn handle(stream: TcpStream, pages: &HashMap<String, String>, agents: &Mutex<Vec<String>>) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut request_line = String::new();
    if reader.read_line(&mut request_line).is_err() {
        return;
    }
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.eq_ignore_ascii_case("user-agent") {
                agents.lock().unwrap().push(value.trim().to_string());
            }
        }
    }
    let target = request_line.split_whitespace().nth(1).unwrap_or("");
    let query = target.split_once('?').map(|(_, q)| q).unwrap_or("");
    let params: HashMap<&str, String> = query
        .split('&')
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k, percent_decode_str(v).decode_utf8_lossy().into_owned()))
        .collect();
    let ok = params.get("action").map(String::as_str) == Some("parse")
        && params.get("format").map(String::as_str) == Some("json")
        && params.get("formatversion").map(String::as_str) == Some("2");
    let (status, body) = if !ok {
        ("400 Bad Request", json!({"error": {"code": "badrequest", "info": "unexpected query"}}))
    } else {
        let page = params.get("page").cloned().unwrap_or_default();
        match pages.get(&page) {
            Some(markup) => ("200 OK", json!({"parse": {"title": page.replace('_', " "), "pageid": 1, "text": markup}})),
            None => ("200 OK", json!({"error": {"code": "missingtitle", "info": "The page you specified doesn't exist."}})),
        }
    };
    let body = body.to_string();
    let mut stream = stream;
    let _ = write!(
        stream,
        "HTTP/1.1 {status}\r\nContent-Type: application/json; charset=utf-8\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
}
