//! Error type shared by all modules.

/// Errors reported by the library.
///
/// The split between "invalid input" and "numerical failure" matters to
/// callers that map errors to exit codes: the first four variants are
/// caller mistakes, the rest are conditions detected during computation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Interpolation data whose Pick matrix is singular up to tolerance.
    /// The solution there is a finite Blaschke product determined by the
    /// matrix rank, which this library does not construct.
    #[error("degenerate interpolation data: {0}")]
    DegenerateData(String),

    /// The node-evaluation system has no polynomial solution at the
    /// requested degree. `hint` is a degree that is always sufficient.
    #[error("no degree-{degree} polynomial interpolates the nodes; degree {hint} always suffices")]
    InfeasibleDegree { degree: u32, hint: u32 },

    /// A Gram matrix is numerically singular, typically because two nodes
    /// are (almost) coincident. `pivot` is the factorization step that
    /// failed or produced the smallest pivot.
    #[error("ill-conditioned configuration: {detail} (pivot {pivot})")]
    IllConditioned { pivot: usize, detail: String },

    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// Two independent computations of the same quantity disagree beyond
    /// the documented threshold.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

impl Error {
    /// True for errors caused by the input rather than by numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch(_) | Error::InvalidArgument(_) | Error::DegenerateData(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
