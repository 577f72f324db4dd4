// SPDX-License-Identifier: Apache-2.0

//! Few-body states, their evolution and two-point correlations.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::export::Table;
use crate::real::{Cplx, Real};

use super::basis::{FockBasis, Generator, Statistics};
use super::propagate::{Evolver, Propagator};

/// Amplitudes over the ordered configurations of a [`FockBasis`]
/// (normalized Fock coefficients, `Σ|A|² = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct FockState<T = f64> {
    basis: Arc<FockBasis>,
    stats: Statistics<T>,
    amplitudes: Vec<Cplx<T>>,
}

/// Two particles; amplitudes `A_jk` over `j ≤ k` (bosons) or `j < k`.
pub type TwoBodyState<T = f64> = FockState<T>;

fn norm_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(1e3))
}

impl<T: Real> FockState<T> {
    /// `a†_{j₁} … a†_{jₙ}|0⟩` normalized, for sites of the generator's sector.
    pub fn from_sites(generator: &Generator<T>, sites: &[usize]) -> Result<Self> {
        let basis = generator.shared_basis();
        if sites.len() != basis.particles() {
            return Err(Error::InvalidArgument(format!(
                "{} sites given for a {}-particle sector",
                sites.len(),
                basis.particles()
            )));
        }
        if let Some(&j) = sites.iter().find(|&&j| j >= basis.length()) {
            return Err(Error::InvalidArgument(format!("site {j} outside chain of {}", basis.length())));
        }
        let idx = basis.index(sites).ok_or_else(|| {
            Error::InvalidArgument(format!("configuration {sites:?} violates the {} exclusion", generator.stats().name()))
        })?;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); basis.dim()];
        amplitudes[idx] = Complex::new(T::one(), T::zero());
        Ok(FockState {
            basis,
            stats: generator.stats(),
            amplitudes,
        })
    }

    /// One particle on each port: `A_jk(0) = δ_{j p₁} δ_{k p_L}`.
    pub fn hom_initial(generator: &Generator<T>, ports: (usize, usize)) -> Result<Self> {
        Self::from_sites(generator, &[ports.0, ports.1])
    }

    pub fn from_amplitudes(generator: &Generator<T>, amplitudes: Vec<Cplx<T>>) -> Result<Self> {
        let basis = generator.shared_basis();
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidArgument("amplitude vector does not match the sector".into()));
        }
        let s = FockState {
            basis,
            stats: generator.stats(),
            amplitudes,
        };
        s.check_norm()?;
        Ok(s)
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn stats(&self) -> Statistics<T> {
        self.stats
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amplitudes
    }

    pub fn length(&self) -> usize {
        self.basis.length()
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    fn check_norm(&self) -> Result<()> {
        let n = self.norm();
        if (n - T::one()).abs() > norm_tolerance::<T>() {
            return Err(Error::NotNormalized { norm: n.as_f64() });
        }
        Ok(())
    }

    /// Fock coefficient of the configuration `sites` (zero if excluded).
    pub fn amplitude(&self, sites: &[usize]) -> Cplx<T> {
        self.basis
            .index(sites)
            .map_or(Complex::new(T::zero(), T::zero()), |i| self.amplitudes[i])
    }

    /// Probability of the configuration `sites`.
    pub fn probability(&self, sites: &[usize]) -> T {
        self.amplitude(sites).norm_sqr()
    }

    fn with_amplitudes(&self, amplitudes: Vec<Cplx<T>>) -> Self {
        FockState {
            basis: self.basis.clone(),
            stats: self.stats,
            amplitudes,
        }
    }
}

/// `A(t) = e^{−iKt} A(0)`.
pub fn evolve_two_body<T: Real>(
    generator: &Generator<T>,
    initial: &FockState<T>,
    t: T,
    propagator: Propagator,
) -> Result<FockState<T>> {
    initial.check_norm()?;
    let ev = Evolver::new(generator, propagator)?;
    let out = ev.apply(&initial.amplitudes, t)?;
    Ok(initial.with_amplitudes(out))
}

/// States at every point of an ascending time grid.
pub fn evolve_grid<T: Real>(
    evolver: &Evolver<'_, T>,
    initial: &FockState<T>,
    times: &[T],
) -> Result<Vec<FockState<T>>> {
    initial.check_norm()?;
    let mut out = Vec::with_capacity(times.len());
    evolver.for_each_time(&initial.amplitudes, times, |_, _, a| out.push(initial.with_amplitudes(a.to_vec())))?;
    Ok(out)
}

/// Two-point correlations of a two-particle state.
///
/// `p` is the correlator `⟨a†_j a†_k a_k a_j⟩` (so `p_jj = 2|A_jj|²` for
/// bosons), `detection` the probability of finding the pair on `{j, k}`
/// (`Σ_{j≤k} = 1`, stored symmetrically).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMap<T = f64> {
    pub p: Vec<Vec<T>>,
    pub detection: Vec<Vec<T>>,
    /// `P_j = Σ_k P_jk`.
    pub marginals: Vec<T>,
    /// `C_jk = P_jk − P_j P_k`.
    pub c: Vec<Vec<T>>,
}

pub fn correlation_map<T: Real>(state: &FockState<T>) -> Result<CorrelationMap<T>> {
    if state.basis.particles() != 2 {
        return Err(Error::InvalidArgument("correlation map needs a two-particle state".into()));
    }
    state.check_norm()?;
    let l = state.length();
    let mut p = vec![vec![T::zero(); l]; l];
    let mut detection = vec![vec![T::zero(); l]; l];
    for (i, s) in state.basis.states().iter().enumerate() {
        let (j, k) = (s[0], s[1]);
        let w = state.amplitudes[i].norm_sqr();
        detection[j][k] = w;
        detection[k][j] = w;
        if j == k {
            p[j][j] = T::lit(2.0) * w;
        } else {
            p[j][k] = w;
            p[k][j] = w;
        }
    }
    let marginals: Vec<T> = p.iter().map(|row| row.iter().copied().sum()).collect();
    let c = (0..l)
        .map(|j| (0..l).map(|k| p[j][k] - marginals[j] * marginals[k]).collect())
        .collect();
    Ok(CorrelationMap {
        p,
        detection,
        marginals,
        c,
    })
}

impl<T: Real> CorrelationMap<T> {
    pub fn length(&self) -> usize {
        self.p.len()
    }

    /// `Σ_{j≤k}` of the detection probabilities.
    pub fn detection_total(&self) -> T {
        let mut s = T::zero();
        for j in 0..self.length() {
            for k in j..self.length() {
                s += self.detection[j][k];
            }
        }
        s
    }

    /// Correlator mass with both particles on the same half over the mass on
    /// opposite halves (the center site of an odd chain is left out).
    pub fn same_side_ratio(&self) -> T {
        let l = self.length();
        let side = |j: usize| -> Option<bool> {
            if l % 2 == 1 && j == l / 2 {
                None
            } else {
                Some(j < l / 2)
            }
        };
        let (mut same, mut cross) = (T::zero(), T::zero());
        for j in 0..l {
            for k in 0..l {
                match (side(j), side(k)) {
                    (Some(a), Some(b)) if a == b => same += self.p[j][k],
                    (Some(_), Some(_)) => cross += self.p[j][k],
                    _ => {}
                }
            }
        }
        same / cross
    }

    /// Columns `j, k, P, C` over all ordered site pairs (1-based sites).
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["j", "k", "P", "C"]);
        for j in 0..self.length() {
            for k in 0..self.length() {
                t.push([
                    (j + 1).to_string(),
                    (k + 1).to_string(),
                    self.p[j][k].to_string(),
                    self.c[j][k].to_string(),
                ]);
            }
        }
        t
    }
}
