//! Exact rationals, outward-rounded intervals, matrices, univariate
//! polynomials and continued fractions.

pub mod cf;
pub mod ival;
pub mod matrix;
pub mod rat;
pub mod unipoly;

pub use cf::{continued_fraction, convergents_of, ContinuedFraction};
pub use ival::Ival;
pub use matrix::{
    char_poly, det_exact, det_interval, det_interval_prec, nullspace_integer, rank_exact,
    solve_exact, Matrix, Scalar,
};
pub use rat::{fmt_rat, parse_number, rat, ri, to_f64, Int, Rat};
pub use unipoly::{isolate_real_roots, RealRooted, Sturm, UniPoly};
