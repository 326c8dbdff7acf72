//! Indefinite theta series of signature (n-1, 1).
//!
//! The crate computes exact q-expansions of holomorphic indefinite theta
//! series with polynomial insertions, evaluates their non-holomorphic modular
//! completions numerically, and reproduces three families of examples:
//! Eisenstein series, Zagier's weight k+1/2 forms on Gamma_0(4) and the
//! generating function of the Hurwitz class numbers H(8n+7).

pub mod error;
pub mod families;
pub mod io;
pub mod poly;
pub mod qform;
pub mod qseries;
pub mod rat;
pub mod special;
pub mod theta;

pub use error::{Error, Result};
pub use poly::{HatPoly, HomPoly};
pub use qform::{ConeKind, ConeVector, QuadraticForm};
pub use qseries::{CycNum, EvalPoint, QSeries, TailBound};
pub use rat::Rat;
pub use theta::{Characteristics, Move, ThetaSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
