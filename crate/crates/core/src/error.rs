use alloc::string::String;

/// Errors raised by the model and validation code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar argument or field is outside its allowed domain.
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    /// Raster sizes disagree with the declared dimensions.
    #[error("dimension mismatch for {what}: expected {expected} values, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    /// A raster value is NaN or infinite.
    #[error("non-finite value in {what} at flat index {index}")]
    NonFinite { what: &'static str, index: usize },

    /// Soil wetness outside [0, 1].
    #[error("soil wetness {value} out of [0, 1] at flat index {index}")]
    SoilWetnessRange { value: f32, index: usize },

    /// A planar position lies outside the simulation rectangle.
    #[error("position ({x}, {y}) km is outside the simulation rectangle")]
    OutOfBounds { x: f64, y: f64 },

    /// A geographic coordinate lies outside the transform bounds.
    #[error("coordinate lat={lat}, lon={lon} is outside the geographic bounds")]
    GeoOutOfBounds { lat: f64, lon: f64 },

    /// The requested hour is past the end of the environmental record.
    #[error("hour {hour} is outside the grid time range 0..{nt}")]
    TimeOutOfRange { hour: usize, nt: usize },

    /// The circle does not overlap the biomass raster.
    #[error("burn circle does not intersect the biomass grid")]
    OutsideBiomass,

    /// An operation needed at least one point.
    #[error("empty point set")]
    EmptySet,

    /// CNR too low for any entry of the TBS map.
    #[error(
        "link infeasible: CNR {cnr_db:.4} dB is below the lowest TBS threshold {min_cnr_db} dB"
    )]
    LinkInfeasible { cnr_db: f64, min_cnr_db: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidInput {
        field,
        reason: reason.into(),
    }
}

/// Rejects negative or non-finite values.
pub(crate) fn non_negative(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(invalid(
            field,
            alloc::format!("must be a finite value >= 0, got {value}"),
        ))
    }
}

/// Rejects zero, negative or non-finite values.
pub(crate) fn positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(invalid(
            field,
            alloc::format!("must be a finite value > 0, got {value}"),
        ))
    }
}
