use thiserror::Error;

/// Errors raised by the catalog, lattice and classifier operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("objects live over different rings: {0}")]
    MixedRings(String),
    #[error("operation `{op}` is not defined over {ring}")]
    WrongRing { op: &'static str, ring: String },
    #[error("unsupported field operation: {0}")]
    UnsupportedField(String),
    #[error("ring {0} is not supported by the classifier")]
    UnsupportedRing(String),
    #[error("tau is undefined on the projective module {0}")]
    ProjectiveArgument(String),
    #[error("tau inverse is undefined on the injective module {0}")]
    InjectiveArgument(String),
    #[error("matrix data does not define a module map: {0}")]
    NonIntertwining(String),
    #[error("result leaves the descriptor family: {0}")]
    NotRepresentable(String),
    #[error("thick subcategory {0} is not countably generated")]
    NotCountablyGenerated(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("cannot validate witness: {0}")]
    UnverifiableWitness(String),
    #[error("projected map cannot be certified: {0}")]
    WitnessLost(String),
    #[error("no precover data for this start: {0}")]
    UnsupportedStart(String),
    #[error("sequence family not supported: {0}")]
    UnsupportedFamily(String),
    #[error("enumeration bounds exceeded: {0}")]
    BoundsExceeded(String),
    #[error("module does not decompose over the supported catalog: {0}")]
    Undecomposable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable variant name, used in structured error reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::MixedRings(_) => "MixedRings",
            Error::WrongRing { .. } => "WrongRing",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::UnsupportedRing(_) => "UnsupportedRing",
            Error::ProjectiveArgument(_) => "ProjectiveArgument",
            Error::InjectiveArgument(_) => "InjectiveArgument",
            Error::NonIntertwining(_) => "NonIntertwining",
            Error::NotRepresentable(_) => "NotRepresentable",
            Error::NotCountablyGenerated(_) => "NotCountablyGenerated",
            Error::InvalidSchedule(_) => "InvalidSchedule",
            Error::UnverifiableWitness(_) => "UnverifiableWitness",
            Error::WitnessLost(_) => "WitnessLost",
            Error::UnsupportedStart(_) => "UnsupportedStart",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::BoundsExceeded(_) => "BoundsExceeded",
            Error::Undecomposable(_) => "Undecomposable",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
