use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("invalid input `{field}`: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("height {height} m is unreachable (reachable hip distance {min}..={max} m, lateral offset {offset} m)")]
    UnreachableHeight {
        height: f64,
        offset: f64,
        min: f64,
        max: f64,
    },

    #[error("branch infeasible: {0}")]
    BranchInfeasible(String),

    #[error("stair height {stair_height} m is not reachable within the squat band of {band} m")]
    UnreachableStep { stair_height: f64, band: f64 },

    #[error("current {current} A exceeds the peak rating of {peak} A")]
    OverCurrent { current: f64, peak: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_non_negative(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidInput {
            field,
            reason: format!("expected a finite non-negative value, got {value}"),
        });
    }
    Ok(())
}

pub(crate) fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidInput {
            field,
            reason: format!("expected a finite positive value, got {value}"),
        });
    }
    Ok(())
}

pub(crate) fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidInput {
            field,
            reason: format!("expected a finite value, got {value}"),
        });
    }
    Ok(())
}
