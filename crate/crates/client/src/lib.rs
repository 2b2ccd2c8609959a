//! Typed client for the hop-spanner HTTP service.

use std::fmt;

use hopnav_service::api::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum ClientError {
    /// The service answered with an error body.
    Api { status: u16, body: ErrorBody },
    /// The request never produced a usable answer.
    Transport(String),
}

impl ClientError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            ClientError::Api { body, .. } => body.kind,
            ClientError::Transport(_) => ErrorKind::Internal,
        }
    }
}

impl fmt::Display for ClientError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClientError::Api { body, .. } => {
                write!(f, "{}", body.message)?;
                if let Some((x, y)) = body.witness {
                    write!(f, " [witness ({x}, {y})]")?;
                }
                Ok(())
            }
            ClientError::Transport(msg) => write!(f, "transport error: {msg}"),
        }
    }
}

impl std::error::Error for ClientError {}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is the service root, such as `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Self {
        Client {
            base: base.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    async fn send<T: DeserializeOwned>(&self, req: reqwest::RequestBuilder) -> Result<T> {
        let resp = req.send().await.map_err(|e| ClientError::Transport(e.to_string()))?;
        let status = resp.status();
        let bytes = resp.bytes().await.map_err(|e| ClientError::Transport(e.to_string()))?;
        if status.is_success() {
            return serde_json::from_slice(&bytes)
                .map_err(|e| ClientError::Transport(format!("unexpected response body: {e}")));
        }
        // framework rejections (malformed JSON and the like) are plain text
        let body = serde_json::from_slice(&bytes).unwrap_or_else(|_| ErrorBody {
            kind: if status.is_client_error() {
                ErrorKind::Input
            } else {
                ErrorKind::Internal
            },
            message: String::from_utf8_lossy(&bytes).into_owned(),
            witness: None,
        });
        Err(ClientError::Api {
            status: status.as_u16(),
            body,
        })
    }

    async fn post<B: Serialize + ?Sized, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        self.send(self.http.post(format!("{}{path}", self.base)).json(body)).await
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        self.send(self.http.get(format!("{}{path}", self.base))).await
    }

    pub async fn health(&self) -> Result<serde_json::Value> {
        self.get("/health").await
    }

    pub async fn alpha(&self, k: u32, n: u64) -> Result<AlphaResponse> {
        self.post("/v1/alpha", &AlphaRequest { k, n }).await
    }

    pub async fn generate(&self, req: &GenRequest) -> Result<GenResponse> {
        self.post("/v1/generate", req).await
    }

    pub async fn bench(&self, ns: Vec<usize>, ks: Vec<usize>) -> Result<BenchResponse> {
        self.post("/v1/bench", &BenchRequest { ns, ks }).await
    }

    pub async fn build_tree(&self, tree: &str, k: usize) -> Result<BuildResponse> {
        self.post("/v1/trees", &BuildRequest { tree: tree.to_string(), k }).await
    }

    pub async fn spanner(&self, id: u64) -> Result<SpannerResponse> {
        self.get(&format!("/v1/trees/{id}/spanner")).await
    }

    pub async fn tree_paths(&self, id: u64, req: &PairsRequest) -> Result<PathsResponse> {
        self.post(&format!("/v1/trees/{id}/paths"), req).await
    }

    pub async fn products(&self, id: u64, req: &ProductRequest) -> Result<ProductResponse> {
        self.post(&format!("/v1/trees/{id}/products"), req).await
    }

    pub async fn verify(&self, id: u64, req: &VerifyRequest) -> Result<VerifyResponse> {
        self.post(&format!("/v1/trees/{id}/verify"), req).await
    }

    pub async fn build_routing(&self, tree: &str, seed: u64) -> Result<RoutingResponse> {
        self.post("/v1/routing", &RoutingRequest { tree: tree.to_string(), seed }).await
    }

    pub async fn routes(&self, id: u64, req: &PairsRequest) -> Result<RoutesResponse> {
        self.post(&format!("/v1/routing/{id}/routes"), req).await
    }

    pub async fn build_metric(&self, req: &MetricRequest) -> Result<MetricResponse> {
        self.post("/v1/metrics", req).await
    }

    pub async fn metric_paths(&self, id: u64, req: &PairsRequest<usize>) -> Result<MetricPathsResponse> {
        self.post(&format!("/v1/metrics/{id}/paths"), req).await
    }

    pub async fn spt(&self, id: u64, root: usize, instrument: bool) -> Result<SptResponse> {
        self.post(&format!("/v1/metrics/{id}/spt"), &SptRequest { root, instrument }).await
    }

    pub async fn mst(&self, id: u64) -> Result<MstResponse> {
        self.post(&format!("/v1/metrics/{id}/mst"), &()).await
    }

    pub async fn sparsify(&self, id: u64, req: &SparsifyRequest) -> Result<SparsifyResponse> {
        self.post(&format!("/v1/metrics/{id}/sparsify"), req).await
    }

    pub async fn cover_routes(&self, id: u64, req: &CoverRoutesRequest) -> Result<CoverRoutesResponse> {
        self.post(&format!("/v1/metrics/{id}/routes"), req).await
    }
}
