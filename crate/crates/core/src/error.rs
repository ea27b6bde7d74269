use thiserror::Error;

use crate::graph::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", join_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("class {0} unassigned")]
    ClassUnassigned(usize),

    #[error("realization covers {got} classes, instance has {expected}")]
    RealizationSize { expected: usize, got: usize },

    #[error("vertex {vertex} chosen for class {class} has color {actual}")]
    WrongColor {
        class: usize,
        vertex: usize,
        actual: usize,
    },

    #[error("vertex {vertex} out of range (instance has {num_vertices} vertices)")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },

    #[error("{budget} budget of {limit} exceeded")]
    BudgetExceeded { budget: &'static str, limit: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cluster graph is not bipartite across the layout: classes {0} and {1} are on the same side")]
    NonBipartite(usize, usize),

    #[error("neighborhood of y-class {0} is not contiguous in the x-order")]
    NonContiguous(usize),

    #[error("invalid x-order: {0}")]
    InvalidOrder(String),

    #[error("layout does not match the instance: {0}")]
    LayoutMismatch(String),

    #[error("invalid tree decomposition: {}", .0.join("; "))]
    InvalidDecomposition(Vec<String>),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("class {0} is isolated in the cluster graph and smaller than the target size; padding it would add choosable vertices")]
    PaddingIsolatedClass(usize),

    #[error("target edge ({0},{1}) is not an edge of the cluster graph")]
    TargetEdgeNotInQuotient(usize, usize),

    #[error("realization does not realize the cluster graph: {0}")]
    NotRealized(String),

    #[error("instance carries no generator provenance")]
    MissingProvenance,

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
