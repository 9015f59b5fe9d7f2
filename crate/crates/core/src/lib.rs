//! Kravchuk polynomials and functions, the Kravchuk transform `K` with
//! `K³ = I`, and the su(2)/SU(2) representations and finite oscillator built
//! from it.
//!
//! Integer identities are checked exactly with big integers and the ring
//! `Z[e^{iπ/4}]`; unitary matrices live in complex double precision.

pub mod error;
pub mod func;
pub mod halfint;
pub mod io;
pub mod oscillator;
pub mod poly;
pub mod report;
pub mod su2;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use halfint::{make_label_set, LabelSet, TwiceInt};
pub use report::{eps, Mode, Report, Tolerance};
