use thiserror::Error;

/// Errors raised by the tensor layer, the differencing kernel, the material
/// models and the verification drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// Inversion requested for a tensor whose determinant is at machine-zero
    /// scale. Any physically admissible deformation gradient has |det| of
    /// order one, so the threshold is fixed at 1e-14.
    #[error("singular tensor: |det| = {det:e} is below 1e-14")]
    SingularTensor { det: f64 },

    /// A deformed configuration with non-positive volume ratio.
    #[error("non-positive Jacobian: det F = {det:e}")]
    NonPositiveJacobian { det: f64 },

    /// The energy model returned NaN or Inf.
    #[error("non-finite energy from model `{model}` while evaluating {context}")]
    NonFiniteEnergy { model: String, context: &'static str },

    /// Fiber exponential argument exceeds the cap of 700; exp() would
    /// silently overflow to Inf otherwise.
    #[error("fiber exponent {exponent:.3e} exceeds the overflow cap of 700")]
    ExponentOverflow { exponent: f64 },

    /// The analytic reference series is constant, so the fraction of
    /// variance unexplained has no meaningful denominator.
    #[error("degenerate FVU denominator: analytic series is constant")]
    DegenerateDenominator,

    /// The requested luminal pressure is beyond what the geometry scan could
    /// bracket.
    #[error(
        "pressure {target_kpa} kPa not bracketed: reached {max_kpa:.6} kPa at inner radius {max_radius:.6} mm"
    )]
    RootNotBracketed {
        target_kpa: f64,
        max_kpa: f64,
        max_radius: f64,
    },

    /// A caller-supplied value violates a documented precondition.
    #[error("invalid {what}: {why}")]
    InvalidInput { what: &'static str, why: String },

    /// Malformed configuration file.
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
