//! Minimal SPARQL endpoint over a fixed triple set.
//!
//! Understands exactly the four SELECT shapes used for hop lookups, over
//! GET (`?query=`) or form-encoded POST. Anything else gets HTTP 400.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{Shutdown, SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};
use std::thread::JoinHandle;
use std::time::Duration;

use regex::Regex;
use serde_json::{json, Map, Value};

use crate::data::{RawTerm, RawTriple};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    /// `SELECT ?p ?o WHERE { <s> ?p ?o }`
    Forward(String),
    /// `SELECT ?p ?s WHERE { ?s ?p <o> }`
    Reverse(String),
    /// `SELECT ?s ?p ?o WHERE { VALUES ?s { ... } ?s ?p ?o }`
    ForwardBundle(Vec<String>),
    /// `SELECT ?s ?p ?o WHERE { VALUES ?o { ... } ?s ?p ?o }`
    ReverseBundle(Vec<String>),
}

fn patterns() -> &'static [Regex; 4] {
    static RE: OnceLock<[Regex; 4]> = OnceLock::new();
    RE.get_or_init(|| {
        [
            Regex::new(r"^\s*SELECT\s+\?p\s+\?o\s+WHERE\s*\{\s*<([^<>\s]+)>\s+\?p\s+\?o\s*\.?\s*\}\s*$").unwrap(),
            Regex::new(r"^\s*SELECT\s+\?p\s+\?s\s+WHERE\s*\{\s*\?s\s+\?p\s+<([^<>\s]+)>\s*\.?\s*\}\s*$").unwrap(),
            Regex::new(
                r"^\s*SELECT\s+\?s\s+\?p\s+\?o\s+WHERE\s*\{\s*VALUES\s+\?([so])\s*\{((?:\s*<[^<>\s]+>)*)\s*\}\s*\?s\s+\?p\s+\?o\s*\.?\s*\}\s*$",
            )
            .unwrap(),
            Regex::new(r"<([^<>\s]+)>").unwrap(),
        ]
    })
}

fn classify(query: &str) -> Option<Shape> {
    let [forward, reverse, bundle, iri] = patterns();
    if let Some(c) = forward.captures(query) {
        return Some(Shape::Forward(c[1].to_string()));
    }
    if let Some(c) = reverse.captures(query) {
        return Some(Shape::Reverse(c[1].to_string()));
    }
    let c = bundle.captures(query)?;
    let iris = iri.captures_iter(&c[2]).map(|m| m[1].to_string()).collect();
    Some(if &c[1] == "s" { Shape::ForwardBundle(iris) } else { Shape::ReverseBundle(iris) })
}

fn binding(term: &RawTerm) -> Value {
    match term {
        RawTerm::Iri(i) => json!({"type": "uri", "value": i}),
        RawTerm::Blank(b) => json!({"type": "bnode", "value": b}),
        RawTerm::Literal { lexical, datatype, lang } => {
            let mut m = Map::new();
            m.insert("type".into(), json!("literal"));
            m.insert("value".into(), json!(lexical));
            if let Some(d) = datatype {
                m.insert("datatype".into(), json!(d));
            }
            if let Some(l) = lang {
                m.insert("xml:lang".into(), json!(l));
            }
            Value::Object(m)
        }
    }
}

fn answer(triples: &[RawTriple], shape: &Shape) -> Value {
    let p = |t: &RawTriple| binding(&RawTerm::Iri(t.p.clone()));
    let (vars, rows): (Vec<&str>, Vec<Value>) = match shape {
        Shape::Forward(s) => (
            vec!["p", "o"],
            triples
                .iter()
                .filter(|t| t.s == RawTerm::Iri(s.clone()))
                .map(|t| json!({"p": p(t), "o": binding(&t.o)}))
                .collect(),
        ),
        Shape::Reverse(o) => (
            vec!["p", "s"],
            triples
                .iter()
                .filter(|t| t.o == RawTerm::Iri(o.clone()))
                .map(|t| json!({"p": p(t), "s": binding(&t.s)}))
                .collect(),
        ),
        Shape::ForwardBundle(keys) | Shape::ReverseBundle(keys) => {
            let forward = matches!(shape, Shape::ForwardBundle(_));
            let rows = triples
                .iter()
                .filter(|t| {
                    let key = if forward { &t.s } else { &t.o };
                    matches!(key, RawTerm::Iri(i) if keys.contains(i))
                })
                .map(|t| json!({"s": binding(&t.s), "p": p(t), "o": binding(&t.o)}))
                .collect();
            (vec!["s", "p", "o"], rows)
        }
    };
    json!({"head": {"vars": vars}, "results": {"bindings": rows}})
}

struct Shared {
    triples: Vec<RawTriple>,
    requests: AtomicU64,
    rejected: AtomicU64,
    queries: Mutex<Vec<String>>,
    /// When set, every request is answered with this status and no body.
    forced_status: Mutex<Option<u16>>,
    stop: AtomicBool,
}

/// A running stub endpoint. Stops when dropped.
pub struct StubSparqlServer {
    addr: SocketAddr,
    shared: Arc<Shared>,
    acceptor: Option<JoinHandle<()>>,
}

impl StubSparqlServer {
    pub fn start(triples: Vec<RawTriple>) -> std::io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let shared = Arc::new(Shared {
            triples,
            requests: AtomicU64::new(0),
            rejected: AtomicU64::new(0),
            queries: Mutex::new(Vec::new()),
            forced_status: Mutex::new(None),
            stop: AtomicBool::new(false),
        });
        let worker_shared = shared.clone();
        let acceptor = std::thread::spawn(move || {
            for stream in listener.incoming() {
                if worker_shared.stop.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = stream else { continue };
                let s = worker_shared.clone();
                std::thread::spawn(move || serve_connection(stream, &s));
            }
        });
        Ok(StubSparqlServer { addr, shared, acceptor: Some(acceptor) })
    }

    pub fn endpoint(&self) -> String {
        format!("http://{}/sparql", self.addr)
    }

    /// Requests answered so far, including rejected ones.
    pub fn request_count(&self) -> u64 {
        self.shared.requests.load(Ordering::SeqCst)
    }

    /// Requests answered with 400 because the query shape was unknown.
    pub fn rejected_count(&self) -> u64 {
        self.shared.rejected.load(Ordering::SeqCst)
    }

    pub fn queries(&self) -> Vec<String> {
        self.shared.queries.lock().unwrap().clone()
    }

    /// Answer every following request with `status` (or resume normal
    /// service with `None`).
    pub fn force_status(&self, status: Option<u16>) {
        *self.shared.forced_status.lock().unwrap() = status;
    }
}

impl Drop for StubSparqlServer {
    fn drop(&mut self) {
        self.shared.stop.store(true, Ordering::SeqCst);
        // Wake the acceptor so it observes the flag.
        let _ = TcpStream::connect_timeout(&self.addr, Duration::from_secs(1));
        if let Some(h) = self.acceptor.take() {
            let _ = h.join();
        }
    }
}

struct Request {
    method: String,
    target: String,
    body: Vec<u8>,
    close: bool,
}

fn read_request(reader: &mut BufReader<TcpStream>) -> Option<Request> {
    let mut line = String::new();
    if reader.read_line(&mut line).ok()? == 0 {
        return None;
    }
    let mut parts = line.split_whitespace();
    let method = parts.next()?.to_string();
    let target = parts.next()?.to_string();
    let http10 = parts.next().is_some_and(|v| v.ends_with("1.0"));
    let mut length = 0usize;
    let mut close = http10;
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header).ok()? == 0 {
            return None;
        }
        let header = header.trim_end();
        if header.is_empty() {
            break;
        }
        if let Some((name, value)) = header.split_once(':') {
            let (name, value) = (name.trim().to_ascii_lowercase(), value.trim());
            if name == "content-length" {
                length = value.parse().ok()?;
            } else if name == "connection" {
                close = value.eq_ignore_ascii_case("close");
            }
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body).ok()?;
    Some(Request { method, target, body, close })
}

fn query_param(encoded: &[u8]) -> Option<String> {
    url::form_urlencoded::parse(encoded).find(|(k, _)| k == "query").map(|(_, v)| v.into_owned())
}

fn serve_connection(stream: TcpStream, shared: &Shared) {
    let _ = stream.set_read_timeout(Some(Duration::from_secs(30)));
    let Ok(mut writer) = stream.try_clone() else { return };
    let mut reader = BufReader::new(stream);
    while let Some(req) = read_request(&mut reader) {
        if shared.stop.load(Ordering::SeqCst) {
            break;
        }
        shared.requests.fetch_add(1, Ordering::SeqCst);
        let query = match req.method.as_str() {
            "GET" => req.target.split_once('?').and_then(|(_, q)| query_param(q.as_bytes())),
            "POST" => query_param(&req.body),
            _ => None,
        };
        let forced = *shared.forced_status.lock().unwrap();
        let (status, body) = match (forced, query) {
            (Some(code), _) => (code, String::new()),
            (None, Some(q)) => {
                shared.queries.lock().unwrap().push(q.clone());
                match classify(&q) {
                    Some(shape) => (200, answer(&shared.triples, &shape).to_string()),
                    None => {
                        shared.rejected.fetch_add(1, Ordering::SeqCst);
                        (400, format!("unsupported query shape: {q}"))
                    }
                }
            }
            (None, None) => {
                shared.rejected.fetch_add(1, Ordering::SeqCst);
                (400, "missing query parameter".to_string())
            }
        };
        let content_type = if status == 200 { "application/sparql-results+json" } else { "text/plain" };
        let head = format!(
            "HTTP/1.1 {status} {}\r\nContent-Type: {content_type}\r\nContent-Length: {}\r\n{}\r\n",
            reason(status),
            body.len(),
            if req.close { "Connection: close\r\n" } else { "" }
        );
        if writer.write_all(head.as_bytes()).and_then(|_| writer.write_all(body.as_bytes())).is_err() {
            break;
        }
        let _ = writer.flush();
        if req.close {
            break;
        }
    }
    let _ = writer.shutdown(Shutdown::Both);
}

fn reason(status: u16) -> &'static str {
    match status {
        200 => "OK",
        400 => "Bad Request",
        500 => "Internal Server Error",
        503 => "Service Unavailable",
        _ => "Status",
    }
}
