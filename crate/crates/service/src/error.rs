use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use hopnav_core::Error;

use crate::api::{ErrorBody, ErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError(pub ErrorBody);

impl ApiError {
    pub fn input(msg: impl Into<String>) -> Self {
        ApiError(ErrorBody {
            kind: ErrorKind::Input,
            message: msg.into(),
            witness: None,
        })
    }

    pub fn not_found(what: &str, id: u64) -> Self {
        ApiError(ErrorBody {
            kind: ErrorKind::NotFound,
            message: format!("no {what} with id {id}"),
            witness: None,
        })
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        ApiError(ErrorBody {
            kind: ErrorKind::Internal,
            message: msg.into(),
            witness: None,
        })
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (kind, witness) = match &e {
            Error::Input(_) | Error::Parse { .. } => (ErrorKind::Input, None),
            Error::Domination { x, y, .. } | Error::Coverage { x, y, .. } => (ErrorKind::Violation, Some((*x, *y))),
            Error::Internal(_) => (ErrorKind::Internal, None),
        };
        ApiError(ErrorBody {
            kind,
            message: e.to_string(),
            witness,
        })
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.0.kind {
            ErrorKind::Input => StatusCode::BAD_REQUEST,
            ErrorKind::NotFound => StatusCode::NOT_FOUND,
            ErrorKind::Violation => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorKind::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(self.0)).into_response()
    }
}
