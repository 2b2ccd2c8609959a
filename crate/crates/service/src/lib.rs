//! HTTP/JSON service over the navigation library.
//!
//! Built spanners, routing schemes and metric navigators live in an
//! in-memory store under numeric ids; queries refer to them by id. All
//! computation runs on the blocking pool so the async workers stay free.

pub mod api;
mod error;
mod handlers;
mod state;

use std::net::SocketAddr;

use axum::routing::{delete, get, post};
use axum::Router;
use tokio::net::TcpListener;
use tokio::task::JoinHandle;

pub use error::ApiError;
pub use state::AppState;

pub fn router() -> Router {
    use handlers::*;
    Router::new()
        .route("/health", get(health))
        .route("/v1/alpha", post(alpha))
        .route("/v1/generate", post(generate))
        .route("/v1/bench", post(bench))
        .route("/v1/trees", post(build_tree))
        .route("/v1/trees/{id}", delete(drop_tree))
        .route("/v1/trees/{id}/spanner", get(spanner))
        .route("/v1/trees/{id}/paths", post(tree_paths))
        .route("/v1/trees/{id}/products", post(products))
        .route("/v1/trees/{id}/verify", post(verify))
        .route("/v1/routing", post(build_routing))
        .route("/v1/routing/{id}/routes", post(routes))
        .route("/v1/metrics", post(build_metric))
        .route("/v1/metrics/{id}/paths", post(metric_paths))
        .route("/v1/metrics/{id}/spt", post(spt))
        .route("/v1/metrics/{id}/mst", post(mst))
        .route("/v1/metrics/{id}/sparsify", post(sparsify))
        .route("/v1/metrics/{id}/routes", post(cover_routes))
        .with_state(AppState::default())
}

/// Serves on an already bound listener until the task is dropped.
pub async fn serve(listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router()).await
}

/// Binds `addr` (port 0 picks a free one) and serves in a background task.
pub async fn spawn(addr: SocketAddr) -> std::io::Result<(SocketAddr, JoinHandle<std::io::Result<()>>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    Ok((local, tokio::spawn(serve(listener))))
}
