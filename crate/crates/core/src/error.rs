use thiserror::Error;

/// Errors raised while building meshes, elements or solving the plate problem.
#[derive(Debug, Error)]
pub enum VemError {
    #[error("malformed mesh file: {0}")]
    MalformedMesh(String),

    #[error("cell {cell} is not a simple polygon: {reason}")]
    NonSimplePolygon { cell: usize, reason: String },

    #[error("non-conforming partition: {0}")]
    NonConforming(String),

    #[error("vertices {first} and {second} coincide within tolerance {tol:e}")]
    DuplicateVertex { first: usize, second: usize, tol: f64 },

    #[error("cell {cell} is not star-shaped with respect to a disc (rho_star = {rho_star:e}); run check-mesh for the full regularity report")]
    NotStarShaped { cell: usize, rho_star: f64 },

    #[error("mesh fails the regularity threshold: rho = {rho:e} < {rho_min:e}")]
    Regularity { rho: f64, rho_min: f64 },

    #[error("unsupported element order k = {0} (supported: 2, 3, 4)")]
    UnsupportedOrder(usize),

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("singular local system on cell {cell}: {what}")]
    SingularLocalSystem { cell: usize, what: String },

    #[error("matrix is not positive definite: pivot {pivot} has value {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("conjugate gradients did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("solver accepted a solution with relative residual {0:e} above 1e-10")]
    InaccurateSolve(f64),

    #[error("lifting vector has length {got}, expected {expected}")]
    LiftingLength { got: usize, expected: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl VemError {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            VemError::MalformedMesh(_)
            | VemError::NonSimplePolygon { .. }
            | VemError::NonConforming(_)
            | VemError::DuplicateVertex { .. }
            | VemError::NotStarShaped { .. }
            | VemError::Regularity { .. } => 2,
            VemError::UnsupportedOrder(_) | VemError::InvalidOption(_) => 1,
            VemError::SingularLocalSystem { .. }
            | VemError::NotPositiveDefinite { .. }
            | VemError::NoConvergence { .. }
            | VemError::InaccurateSolve(_)
            | VemError::LiftingLength { .. } => 3,
            VemError::Io(_) | VemError::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, VemError>;
