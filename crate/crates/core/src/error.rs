// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("profile {profile} requires {expected} length, got L = {length}")]
    ParityMismatch {
        profile: &'static str,
        expected: &'static str,
        length: usize,
    },

    #[error("coupling {index} is not strictly positive after scheme application ({value})")]
    NonPositiveCoupling { index: usize, value: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (index {index})")]
    NoConvergence { index: usize, iterations: usize },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate scattering extraction: |r|^2 + |t|^2 = {weight} at t = {time}")]
    DegenerateExtraction { weight: f64, time: f64 },

    #[error("root bracket failure for {what}: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    BracketFailure {
        what: String,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("no local maximum of the end-site amplitude in t in [{lo}, {hi}]")]
    NoMaximum { lo: f64, hi: f64 },

    #[error("quadrature did not converge ({0})")]
    Quadrature(String),

    #[error("optimizer stagnated: {0}")]
    Stagnation(String),

    #[error("power-law fit needs at least 4 tail points, got {0}")]
    FitFailure(usize),

    #[error("sector dimension cap exceeded: L = {length} > {max}")]
    SectorTooLarge { length: usize, max: usize },

    #[error("propagation failed: {0}")]
    Propagation(String),

    #[error("config parse error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
