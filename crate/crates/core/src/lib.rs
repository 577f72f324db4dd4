// SPDX-License-Identifier: Apache-2.0

//! Remote linear optics in one-dimensional tight-binding lattices.
//!
//! A localized impurity in the middle of a chain acts as a beam splitter
//! between the two end sites. This crate builds such chains, propagates one,
//! two and three particles exactly, calibrates the splitter (transfer time,
//! 50/50 impurity strength, boundary couplings, Mach-Zehnder phase), and
//! carries an independent analytic layer (mode equations, Bessel and Airy
//! asymptotics) used to cross-check the numerics.
//!
//! All routines are generic over the scalar type through [`Real`]; the
//! `*F64` / `*F32` aliases below fix the precision.

pub mod analytic;
pub mod calibrate;
pub mod error;
pub mod export;
pub mod imperfect;
pub mod lattice;
pub mod linalg;
pub mod manybody;
pub mod real;
pub mod spectral;
pub mod special;

pub use error::{Error, Result};
pub use lattice::{build_chain, ChainSpec, CouplingScheme, PotentialProfile};
pub use real::{Cplx, Real};
pub use spectral::{diagonalize, rt_coefficients, scatter_matrix, EndSpectrum, ScatterMatrix, SpectralDecomp};

pub type ChainSpecF64 = ChainSpec<f64>;
pub type ChainSpecF32 = ChainSpec<f32>;
pub type CouplingSchemeF64 = CouplingScheme<f64>;
pub type CouplingSchemeF32 = CouplingScheme<f32>;
pub type PotentialProfileF64 = PotentialProfile<f64>;
pub type PotentialProfileF32 = PotentialProfile<f32>;
pub type SpectralDecompF64 = SpectralDecomp<f64>;
pub type SpectralDecompF32 = SpectralDecomp<f32>;
pub type ScatterMatrixF64 = ScatterMatrix<f64>;
pub type ScatterMatrixF32 = ScatterMatrix<f32>;
pub type ModeSetF64 = analytic::ModeSet<f64>;
pub type ModeSetF32 = analytic::ModeSet<f32>;
pub type CmTableF64 = analytic::CmTable<f64>;
pub type CmTableF32 = analytic::CmTable<f32>;
pub type TwoBodyStateF64 = manybody::TwoBodyState<f64>;
pub type TwoBodyStateF32 = manybody::TwoBodyState<f32>;
pub type CorrelationMapF64 = manybody::CorrelationMap<f64>;
pub type CorrelationMapF32 = manybody::CorrelationMap<f32>;
pub type CalibrationF64 = calibrate::Calibration<f64>;
pub type CalibrationF32 = calibrate::Calibration<f32>;
pub type ImbalanceReportF64 = imperfect::ImbalanceReport<f64>;
pub type ImbalanceReportF32 = imperfect::ImbalanceReport<f32>;
