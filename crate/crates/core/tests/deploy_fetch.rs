//! Genesis fetching against a local stub HTTP server: the published-file
//! workflow is fetch, then validate, then place — never trust transport.

use indyforge::deploykit::{fetch_genesis, DeployError};
use indyforge::genesis::{
    build_pool_genesis, parse_genesis, serialize_genesis, GenesisKind,
};
use indyforge::synth;
use std::io::{Read, Write};
use std::net::TcpListener;
use std::thread;

/// Serves canned routes over bare HTTP/1.1 until `connections` requests
/// have been answered, then lets the thread die.
fn stub_server(routes: Vec<(&'static str, u16, Vec<u8>)>, connections: usize) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind stub server");
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        for _ in 0..connections {
            let Ok((mut stream, _)) = listener.accept() else {
                return;
            };
            let mut request = Vec::new();
            let mut buf = [0u8; 1024];
            while !request.windows(4).any(|w| w == b"\r\n\r\n") {
                match stream.read(&mut buf) {
                    Ok(0) | Err(_) => break,
                    Ok(n) => request.extend_from_slice(&buf[..n]),
                }
            }
            let request = String::from_utf8_lossy(&request);
            let path = request.split_whitespace().nth(1).unwrap_or("/");
            let (status, body) = routes
                .iter()
                .find(|(route, _, _)| *route == path)
                .map(|(_, status, body)| (*status, body.clone()))
                .unwrap_or((404, Vec::new()));
            let reason = if status == 200 { "OK" } else { "Not Found" };
            let header = format!(
                "HTTP/1.1 {status} {reason}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
                body.len()
            );
            let _ = stream.write_all(header.as_bytes());
            let _ = stream.write_all(&body);
        }
    });
    format!("http://{addr}")
}

#[test]
fn fetched_bytes_validate_and_match_the_published_file() {
    let pool = serialize_genesis(&build_pool_genesis(&synth::fixture_roster()));
    let base = stub_server(vec![("/pool_transactions_genesis", 200, pool.clone())], 1);
    let fetched = fetch_genesis(&format!("{base}/pool_transactions_genesis")).unwrap();
    assert_eq!(fetched, pool);
    let doc = parse_genesis(&fetched, GenesisKind::Pool).unwrap();
    assert_eq!(doc.txns.len(), 4);
}

#[test]
fn a_missing_file_is_a_network_error() {
    let base = stub_server(vec![], 1);
    let err = fetch_genesis(&format!("{base}/nowhere")).unwrap_err();
    let DeployError::Network { detail } = err else {
        panic!("expected a network error");
    };
    assert!(detail.contains("404"), "detail was {detail:?}");
}

#[test]
fn a_truncated_publication_fails_validation_after_the_fetch() {
    let pool = serialize_genesis(&build_pool_genesis(&synth::fixture_roster()));
    // Cut mid-line so the damage is structural, not a shorter valid chain.
    let truncated = pool[..pool.len() / 2 + 1].to_vec();
    let base = stub_server(vec![("/pool_transactions_genesis", 200, truncated.clone())], 1);
    let fetched = fetch_genesis(&format!("{base}/pool_transactions_genesis")).unwrap();
    assert_eq!(fetched, truncated, "the fetch itself is faithful");
    assert!(parse_genesis(&fetched, GenesisKind::Pool).is_err());
}

#[test]
fn an_unreachable_host_is_a_network_error() {
    // A listener that is bound and immediately dropped: the port refuses.
    let port = {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        listener.local_addr().unwrap().port()
    };
    let err = fetch_genesis(&format!("http://127.0.0.1:{port}/pool")).unwrap_err();
    assert!(matches!(err, DeployError::Network { .. }));
}
