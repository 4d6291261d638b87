//! Exact dynamical zeta functions.
//!
//! For a subshift of finite type with transition matrix `A` the zeta function
//! is `1/det(I - tA)`. For orientation-preserving piecewise-affine expanding
//! circle maps the crate builds a Markov cover, the signed overlap matrices
//! `B^(r)` on the index families `I_r`, and evaluates
//!
//! ```text
//! N_p = sum_r (-1)^(r-1) tr((B^(r))^p)
//! zeta(t) = prod_{r even} det(I - tB^(r)) / prod_{r odd} det(I - tB^(r))
//! ```
//!
//! with every quantity an exact rational. Each count is cross-checked against
//! brute-force enumeration of periodic points.
//!
//! Module map:
//!
//! - [`exactalg`]: big rationals, integer matrices, series, rational functions
//! - [`shiftspace`]: subshift counts, zeta, irreducibility, Perron data
//! - [`ruellemap`]: expanding circle maps, inverse branches, shadowing
//! - [`markovcover`]: arcs, Markov covers, `I_r`, `A^(r)` and `B^(r)`
//! - [`zetacalc`]: the cover pipeline, growth reports and the `Φ` audit
//! - [`cli`]: the command-line front end

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod markovcover;
pub mod ruellemap;
pub mod shiftspace;
pub mod zetacalc;

pub use error::{Error, Result};
