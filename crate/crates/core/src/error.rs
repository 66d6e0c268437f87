use thiserror::Error;

/// Errors raised by the discrimination toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unitary (max |U†U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error(
        "operator is not diagonal in the magic basis (max off-diagonal {max_offdiag:.3e}); \
         use `decompose` for gates with local parts"
    )]
    NotMagicDiagonal { max_offdiag: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("state is not a product state (concurrence {concurrence:.3e})")]
    NotProduct { concurrence: f64 },

    #[error("target is not inside the convex hull (residual {residual:.3e})")]
    NotInHull { residual: f64 },

    #[error("hull is degenerate: {0}")]
    DegenerateHull(String),

    #[error(
        "probe construction failed: achieved {achieved:.3e} vs hull distance {target:.3e}, \
         concurrence {concurrence:.3e}"
    )]
    ConstructionFailed {
        achieved: f64,
        target: f64,
        concurrence: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
