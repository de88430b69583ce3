//! Computational verification of the sharp bounds on the third Hankel
//! determinant of inverse coefficients for the bounded turning classes
//! `R` (`Re f'(z) > 0`) and `R1` (`Re (zf'(z))' > 0`).
//!
//! The pipeline runs from truncated power series and Carathéodory
//! coefficients through the closed-form determinant to the integer
//! polynomial majorants and their maximization on the unit square.

pub mod caratheodory;
pub mod classes;
pub mod exec;
pub mod objectives;
pub mod optimizer;
pub mod series;
pub mod verification;

pub use caratheodory::{CaratheodoryCoeffs, HerglotzAtoms, SampleMode, SchurParams};
pub use classes::{ClassCoeffs, FunctionClass, InverseCoeffs};
pub use exec::Exec;
pub use objectives::{BivariatePoly, Objective, UniPoly};
pub use optimizer::{maximize_on_box, BoxMaxResult, CriticalPoint, PointKind};
pub use series::TruncatedSeries;
pub use verification::{verify_theorem1, verify_theorem2, TheoremReport, VerifyConfig};
