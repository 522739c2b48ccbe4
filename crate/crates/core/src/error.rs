use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// hbar or mass not strictly positive (or not finite).
    InvalidConstants,
    InvalidGrid(&'static str),
    DimensionMismatch { expected: usize, found: usize },
    NonpositiveWidth,
    CenterOutsideGrid { axis: usize },
    /// The grid does not reach five widths beyond the center on some axis.
    GridTooNarrow { axis: usize },
    ZeroDistribution,
    GridMismatch,
    NotNormalized { squared_norm: f64 },
    LengthMismatch { expected: usize, found: usize },
    IndexOutOfRange { index: usize, len: usize },
    OffGrid { record: usize },
    DuplicateMode { index: usize },
    EmptyModeSet,
    TooManyModes { count: usize, cap: usize },
    NullState,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConstants => write!(f, "hbar and mass must be positive and finite"),
            Error::InvalidGrid(why) => write!(f, "invalid grid: {why}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonpositiveWidth => write!(f, "width must be positive"),
            Error::CenterOutsideGrid { axis } => {
                write!(f, "center lies outside the grid bounds on axis {axis}")
            }
            Error::GridTooNarrow { axis } => {
                write!(f, "grid does not extend 5 widths around the center on axis {axis}")
            }
            Error::ZeroDistribution => write!(f, "distribution has zero norm"),
            Error::GridMismatch => write!(f, "distributions live on different grids"),
            Error::NotNormalized { squared_norm } => {
                write!(f, "distribution is not normalized (squared norm {squared_norm})")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::OffGrid { record } => write!(f, "record {record}: momentum not on grid"),
            Error::DuplicateMode { index } => write!(f, "mode {index} listed twice"),
            Error::EmptyModeSet => write!(f, "mode set is empty"),
            Error::TooManyModes { count, cap } => {
                write!(f, "{count} modes exceed the oracle cap of {cap}")
            }
            Error::NullState => write!(f, "state has zero norm"),
        }
    }
}

impl core::error::Error for Error {}
