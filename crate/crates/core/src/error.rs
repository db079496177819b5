use crate::graph::Edge;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("cycle cover not sufficiently light: edge {edge:?} exceeds the bound in coordinate {coord}")]
    Lightness { edge: Edge, coord: usize },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
