//! Complex lattice reduction and lattice-reduction-aided MIMO detection,
//! together with a cycle-accurate simulator of a systolic processing-element
//! array that runs the reduction and the ensuing detection in place.
//!
//! The crate is organized around five pieces:
//!
//! - [`matrix`], [`qr`], [`gauss`]: dense complex matrices, Givens-rotation
//!   QR (plain and sorted), and exact Gaussian-integer arithmetic for
//!   unimodularity checks.
//! - [`reduce`]: sequential reference implementations of conventional
//!   complex LLL, LLL with full size reduction, and all-swap lattice
//!   reduction, with selectable Lovász/Siegel swap conditions and cost
//!   accounting.
//! - [`defect`]: orthogonality defect and its reduced-basis bound.
//! - [`systolic`]: deterministic cycle-accurate simulation of the
//!   processing-element array running the same reductions and detection.
//! - [`detect`]: QAM constellations, the fading-channel model, and the
//!   ZF / MMSE / LR-aided / SIC / ML detectors.

pub mod defect;
pub mod detect;
pub mod error;
pub mod gauss;
pub mod matrix;
pub mod qr;
pub mod reduce;
pub mod rng;
pub mod systolic;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, ComplexScalar};
pub use qr::{qr_givens, sorted_qr, GivensRotation, QrFactors};
pub use reduce::{
    Algorithm, Condition, Parity, ReductionOutcome, ReductionParams, ReductionStats,
};
pub use rng::SplitMix64;
