#![cfg(feature = "fetch")]

mod common;

use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use chainpair::pdb_io::{cached_pdb, parse_pdb, PdbError, PdbFetcher};

/// Serves `entry` under each of `ids` and answers 404 otherwise. Returns
/// the base URL and a request counter.
fn serve(entry: String, ids: &'static [&'static str]) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            counter.fetch_add(1, Ordering::SeqCst);
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request = String::new();
            reader.read_line(&mut request).unwrap();
            let mut line = String::new();
            while reader.read_line(&mut line).unwrap() > 2 {
                line.clear();
            }
            let path = request.split_whitespace().nth(1).unwrap_or("");
            let (status, body) = if ids.iter().any(|id| path.ends_with(&format!("/{id}.pdb"))) {
                ("200 OK", entry.as_str())
            } else {
                ("404 Not Found", "")
            };
            let _ = write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
        }
    });
    (base, hits)
}

fn fetcher(base: &str, dir: &std::path::Path) -> PdbFetcher {
    PdbFetcher { base_url: format!("{base}/download"), cache_dir: dir.to_owned(), timeout: Duration::from_secs(10) }
}

#[test]
fn downloads_once_then_uses_cache() {
    let entry = common::pdb_entry(&[('A', common::helix(20, [0.0; 3]))]);
    let (base, hits) = serve(entry.clone(), &["1ABC"]);
    let dir = tempfile::tempdir().unwrap();
    let f = fetcher(&base, dir.path());

    let first = f.fetch("1abc").unwrap();
    assert_eq!(first, entry);
    assert_eq!(hits.load(Ordering::SeqCst), 1);
    assert_eq!(cached_pdb(dir.path(), "1ABC").unwrap().as_deref(), Some(entry.as_str()));

    let second = f.fetch("1ABC").unwrap();
    assert_eq!(second, entry);
    assert_eq!(hits.load(Ordering::SeqCst), 1);
    assert_eq!(parse_pdb(&second, 'A').unwrap().chain.len(), 20);
    // no temporary files left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn missing_entries_and_bad_ids() {
    let (base, hits) = serve(String::new(), &[]);
    let dir = tempfile::tempdir().unwrap();
    let f = fetcher(&base, dir.path());
    assert!(matches!(f.fetch("9zzz"), Err(PdbError::NotFound(_))));
    assert!(cached_pdb(dir.path(), "9zzz").unwrap().is_none());
    for bad in ["abcd", "1ab", "../etc", "1a/c"] {
        assert!(matches!(f.fetch(bad), Err(PdbError::InvalidId(_))), "{bad}");
    }
    assert_eq!(hits.load(Ordering::SeqCst), 1);
}

#[test]
fn unreachable_server_is_a_network_error() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let f = fetcher(&format!("http://127.0.0.1:{port}"), dir.path());
    assert!(matches!(f.fetch("1abc"), Err(PdbError::Network(_))));
}

#[test]
fn bench_fetches_and_gates_on_length() {
    // The served entries are far shorter than the tabulated chains.
    let entry = common::pdb_entry(&[('A', common::helix(30, [0.0; 3]))]);
    let (base, hits) = serve(entry, &["107J", "1TOH"]);
    let dir = tempfile::tempdir().unwrap();
    let bench = |fetch: bool| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_chainpair"));
        cmd.args(["bench", "--table", "1", "--rows", "1toh", "--cache-dir", dir.path().to_str().unwrap()]);
        if fetch {
            cmd.args(["--fetch", "--base-url", &format!("{base}/download")]);
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(1));
        String::from_utf8(out.stdout).unwrap()
    };
    assert!(bench(false).contains("ERROR"));
    assert_eq!(hits.load(Ordering::SeqCst), 0);
    let text = bench(true);
    assert!(text.contains("LENGTH_MISMATCH"), "{text}");
    assert_eq!(hits.load(Ordering::SeqCst), 2);
    assert!(bench(false).contains("LENGTH_MISMATCH"));
    assert_eq!(hits.load(Ordering::SeqCst), 2);
}
