pub mod classify;
pub mod elo;
pub mod error;
pub mod exactnum;
pub mod gje;
pub mod json;
pub mod linalg;
pub mod state;
pub mod zoo;

pub use elo::{ElementaryOp, EloSequence, SitedOp};
pub use error::{Error, Result};
pub use exactnum::{ExactScalar, FloatScalar, Rational, Scalar};
pub use linalg::Matrix;
pub use state::MultiState;
