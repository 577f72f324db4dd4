// SPDX-License-Identifier: Apache-2.0

//! Closed-form mode theory for chains with a single impurity, used as an
//! independent check on the numerical spectra.
//!
//! Momenta `q` live in `(0, π)` and map to energies through `E = cos q`,
//! which is the dispersion of [`crate::spectral`] up to the site-staggering
//! similarity `(−1)^j` (it leaves `O²_{1k}` and the spectrum unchanged).

mod asymptotics;
mod bessel;
mod modes;
mod poly;

pub use asymptotics::{asymptotics_even, asymptotics_odd, beta5050_law, even_splitter, t_star_formula, AsymptoticsEven, AsymptoticsOdd, BETA_LAW_COEFF};
pub use bessel::{cm_closed, cm_discrete, cm_quadrature, cm_table, u1_bessel, u1_bessel_leading, u2_jacobi_anger, CmTable};
pub use modes::{mode_set_even, mode_set_odd, out_of_band_odd, ModeSet, OutOfBand, Parity};
pub use poly::{char_poly_even, char_poly_odd, char_poly_odd_eval, PolyBranch};
