//! Exact interpolation of planar algebraic curves.
//!
//! The crate decides minimal interpolation degrees for exact point sets,
//! certifies degree lower bounds over rectangular neighbourhoods, searches
//! sparse supports, and reconstructs integer curves through vertical
//! segments. All decisions are made in exact rational arithmetic or with
//! outward-rounded rational intervals.

pub mod boxcert;
pub mod cli_io;
pub mod error;
pub mod exactnum;
pub mod gram;
pub mod polybasis;
pub mod segrecon;
pub mod sparse;

pub use error::{Error, Result};
pub use exactnum::{Int, Ival, Matrix, Rat, UniPoly};
pub use polybasis::{Monomial, Poly, Support};
