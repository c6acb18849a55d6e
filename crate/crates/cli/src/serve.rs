//! HTTP viewer for a single trace document.

use std::net::{Ipv4Addr, TcpListener};
use std::path::Path;

use axum::http::header;
use axum::response::{Html, IntoResponse};
use axum::routing::get;
use axum::Router;

use crate::{load_valid, CliError, EXIT_FAILURE};

const INDEX: &str = include_str!("index.html");

pub fn router(trace: Vec<u8>) -> Router {
    Router::new()
        .route("/", get(|| async { Html(INDEX) }))
        .route(
            "/trace",
            get(move || async move { ([(header::CONTENT_TYPE, "application/json")], trace).into_response() }),
        )
        .route("/healthz", get(|| async { "ok" }))
}

pub fn run(path: &Path, port: u16) -> Result<u8, CliError> {
    let Some(trace) = load_valid(path)? else {
        eprintln!("{}: refusing to serve an invalid trace", path.display());
        return Ok(EXIT_FAILURE);
    };
    let addr = (Ipv4Addr::LOCALHOST, port);
    let listener = TcpListener::bind(addr).map_err(|source| CliError::Io {
        path: format!("127.0.0.1:{port}"),
        source,
    })?;
    listener.set_nonblocking(true).map_err(|source| CliError::Io {
        path: format!("127.0.0.1:{port}"),
        source,
    })?;
    let local = listener.local_addr().map_err(|source| CliError::Io {
        path: format!("127.0.0.1:{port}"),
        source,
    })?;
    println!("serving {} on http://{local}", path.display());
    let runtime = tokio::runtime::Runtime::new().map_err(|source| CliError::Io {
        path: "tokio runtime".into(),
        source,
    })?;
    runtime
        .block_on(async {
            let listener = tokio::net::TcpListener::from_std(listener)?;
            axum::serve(listener, router(trace)).await
        })
        .map_err(|source| CliError::Io {
            path: local.to_string(),
            source,
        })?;
    Ok(0)
}
