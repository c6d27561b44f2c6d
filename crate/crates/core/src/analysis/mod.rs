//! Entropy/Fourier toolkit over dense distributions on the Boolean cube
//! and the verifier suites for the inequalities behind the lower bound.

pub mod binomial;
pub mod dist;
pub mod fourier;
pub mod rect;
pub mod suites;
pub mod verify;

pub use dist::DenseDistribution;
pub use fourier::FourierSpectrum;
pub use rect::{RectangleBias, RectanglePair};
pub use suites::{SuiteParams, SuiteResult};
pub use verify::VerifierReport;
