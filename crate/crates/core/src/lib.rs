//! Numerical machinery for fractional Hardy-type inequalities on periodic
//! grids: spectral multipliers, Littlewood-Paley pieces, Besov and
//! Triebel-Lizorkin norms, the dyadic Schur test, the Stein-Weiss kernel
//! operators, and empirical constant estimation.
//!
//! Every function is pure over immutable inputs. Fields live on a large
//! periodic box standing in for `R^d`.

pub mod corpus;
pub mod error;
pub mod extremal;
pub mod hardy;
pub mod littlewood_paley;
pub mod quadrature;
pub mod radial;
pub mod report;
pub mod schur;
pub mod spectral;
pub mod stein_weiss;
pub mod suite;

pub use error::{Error, Result};
pub use littlewood_paley::{DyadicPartition, LPDecomposition};
pub use report::{CheckReport, Identity, QuotientResult};
pub use spectral::{Centering, GridSpec, SampledField, Spectrum};
