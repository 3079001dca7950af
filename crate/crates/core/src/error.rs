use thiserror::Error;

/// Domain and configuration failures raised by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} lies outside the open unit disk")]
    OutsideDisk { name: &'static str, value: f64 },

    #[error("nome q = {0} must lie in [0, 1)")]
    NomeOutOfRange(f64),

    #[error("Im(alpha) = {0} is below the normalizability guard {guard}", guard = crate::states::IM_ALPHA_GUARD)]
    ImAlphaTooSmall(f64),

    #[error("fiducial coefficients (x, y) must not both vanish")]
    FiducialZero,

    #[error("cylinder label l = {0} exceeds |l| <= {max}", max = crate::states::MAX_CYLINDER_L)]
    CylinderLabelTooLarge(f64),

    #[error("|l + l'| = {0} exceeds the degenerate-limit threshold {max}", max = crate::cylinder::MAX_DEGENERATE_LSUM)]
    DegenerateSumDiverges(f64),

    #[error("sector pair {0} is not supported by this operation")]
    UnsupportedPair(crate::pair::SectorPair),

    #[error("odd cat component is null at zero displacement")]
    NullOddCat,

    #[error("|A|^2 {sign} |B|^2 vanishes, the state cannot be normalized")]
    DegenerateNormalization { sign: char },

    #[error("truncation order must be at least {min}, got {got}")]
    Truncation { min: usize, got: usize },

    #[error("non-finite parameter {0}")]
    NonFinite(&'static str),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
