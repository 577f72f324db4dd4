// SPDX-License-Identifier: Apache-2.0

//! Splitting imbalance `ε = (|R| − |T|)/|R|` under a smeared impurity,
//! soft walls and trap curvature.

use rayon::prelude::*;

use crate::calibrate::{balance_root, find_beta5050, find_tstar, Calibration};
use crate::error::{Error, Result};
use crate::export::Table;
use crate::lattice::{build_chain, sigma_from_fwhm, ChainSpec, CouplingScheme, PotentialProfile};
use crate::real::Real;
use crate::spectral::{rt_coefficients, EndSpectrum};
use crate::special::golden_max;

/// One imperfection setting and the resulting imbalance.
#[derive(Debug, Clone, PartialEq)]
pub struct ImbalanceReport<T = f64> {
    /// `fwhm`, `beta_walls` or `omega`.
    pub parameter_name: &'static str,
    pub parameter: T,
    pub epsilon: T,
    pub recalibrated: bool,
    pub beta_used: T,
    /// Time at which `ε` was read.
    pub t_star: T,
    /// `|T(t*)|²`.
    pub p_t: T,
    /// `(P_T − P_T^{ideal})/P_T^{ideal}`.
    pub delta_p: T,
}

/// Which transfer time the Gaussian scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TstarChoice {
    /// `t*` of the point-impurity calibration.
    #[default]
    Baseline,
    /// `t*` re-derived for every width.
    PerSetting,
}

/// Bracket used when `β` is re-bisected for a smeared impurity.
pub const RECALIBRATION_BRACKET: (f64, f64) = (0.05, 3.0);

/// `(ε, |T|²)` of a chain at `t`. `ε` is NaN when `|R| ≤ 1e−8`.
pub fn imbalance<T: Real>(spec: &ChainSpec<T>, t: T) -> Result<(T, T)> {
    let (r, tr) = rt_coefficients(&EndSpectrum::from_spec(spec)?, t);
    let eps = if r.norm() > T::lit(1e-8) {
        (r.norm() - tr.norm()) / r.norm()
    } else {
        T::nan()
    };
    Ok((eps, tr.norm_sqr()))
}

fn report<T: Real>(
    name: &'static str,
    parameter: T,
    spec: &ChainSpec<T>,
    t: T,
    beta: T,
    recalibrated: bool,
    reference: &Calibration<T>,
) -> Result<ImbalanceReport<T>> {
    let (epsilon, p_t) = imbalance(spec, t)?;
    Ok(ImbalanceReport {
        parameter_name: name,
        parameter,
        epsilon,
        recalibrated,
        beta_used: beta,
        t_star: t,
        p_t,
        delta_p: (p_t - reference.output_probability) / reference.output_probability,
    })
}

/// `ε` for Gaussian impurities of the given FWHM (in sites).
pub fn gaussian_width_scan<T: Real>(
    length: usize,
    fwhm_grid: &[T],
    recalibrate: bool,
    tstar: TstarChoice,
) -> Result<Vec<ImbalanceReport<T>>> {
    if let Some(w) = fwhm_grid.iter().find(|w| !(**w > T::zero())) {
        return Err(Error::InvalidArgument(format!("FWHM {w} must be positive")));
    }
    let scheme = CouplingScheme::Uniform;
    let base = find_beta5050(length, &scheme)?;
    fwhm_grid
        .par_iter()
        .map(|&fwhm| {
            let sigma = sigma_from_fwhm(fwhm);
            let build = |beta: T| build_chain(length, &scheme, &[PotentialProfile::GaussianImpurity { beta, sigma }]);
            let t = match tstar {
                TstarChoice::Baseline => base.t_star,
                TstarChoice::PerSetting => find_tstar(&build(T::one())?)?,
            };
            let beta = if recalibrate {
                let (lo, hi) = (T::lit(RECALIBRATION_BRACKET.0), T::lit(RECALIBRATION_BRACKET.1));
                match balance_root("gaussian recalibration", &build, t, lo, hi) {
                    Ok((b, _, _)) => b,
                    Err(Error::BracketFailure { .. }) => {
                        // no balanced point: take the least imbalanced strength
                        let f = |b: T| build(b).and_then(|s| imbalance(&s, t)).map_or(T::neg_infinity(), |x| -x.0.abs());
                        golden_max(f, lo, hi, T::lit(1e-8), 200).0
                    }
                    Err(e) => return Err(e),
                }
            } else {
                base.param
            };
            report("fwhm", fwhm, &build(beta)?, t, beta, recalibrate, &base)
        })
        .collect()
}

/// `ε` of the chain embedded between two wall sites of strength `β_walls`,
/// read between the embedded end sites at the embedded chain's `t*`.
pub fn wall_strength_scan<T: Real>(length: usize, beta_walls_grid: &[T]) -> Result<Vec<ImbalanceReport<T>>> {
    if let Some(b) = beta_walls_grid.iter().find(|b| !(**b > T::zero())) {
        return Err(Error::InvalidArgument(format!("wall strength {b} must be positive")));
    }
    let scheme = CouplingScheme::Uniform;
    let base = find_beta5050(length, &scheme)?;
    beta_walls_grid
        .par_iter()
        .map(|&bw| {
            let spec = build_chain(
                length,
                &scheme,
                &[PotentialProfile::CenterImpurity(base.param), PotentialProfile::Walls(bw)],
            )?;
            let t = find_tstar(&spec)?;
            report("beta_walls", bw, &spec, t, base.param, false, &base)
        })
        .collect()
}

/// `ε` and `ΔP` under the trap `μ_j = −ω²(j − c)²/2`, at each chain's own `t*`.
pub fn curvature_scan<T: Real>(length: usize, omega_grid: &[T]) -> Result<Vec<ImbalanceReport<T>>> {
    if let Some(w) = omega_grid.iter().find(|w| !(**w >= T::zero())) {
        return Err(Error::InvalidArgument(format!("trap frequency {w} must be >= 0")));
    }
    let scheme = CouplingScheme::Uniform;
    let base = find_beta5050(length, &scheme)?;
    omega_grid
        .par_iter()
        .map(|&w| {
            let spec = build_chain(
                length,
                &scheme,
                &[PotentialProfile::CenterImpurity(base.param), PotentialProfile::Harmonic(w)],
            )?;
            let t = if w == T::zero() { base.t_star } else { find_tstar(&spec)? };
            report("omega", w, &spec, t, base.param, false, &base)
        })
        .collect()
}

/// Columns `parameter, epsilon, beta_used, recalibrated, P_T`.
pub fn imbalance_table<T: Real>(rows: &[ImbalanceReport<T>]) -> Table {
    let mut t = Table::new(&["parameter", "epsilon", "beta_used", "recalibrated", "P_T"]);
    for r in rows {
        t.push([
            r.parameter.to_string(),
            r.epsilon.to_string(),
            r.beta_used.to_string(),
            r.recalibrated.to_string(),
            r.p_t.to_string(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrow_gaussian_is_point_impurity() {
        let r = gaussian_width_scan(21, &[0.05f64], false, TstarChoice::Baseline).unwrap();
        let base = find_beta5050(21, &CouplingScheme::Uniform).unwrap();
        assert!(r[0].epsilon.abs() < 1e-6);
        assert!(r[0].delta_p.abs() < 1e-6);
        assert_eq!(r[0].beta_used, base.param);
    }

    #[test]
    fn zero_curvature_is_baseline() {
        let r = curvature_scan(21, &[0.0f64]).unwrap();
        assert!(r[0].epsilon.abs() < 1e-6 && r[0].delta_p.abs() < 1e-12);
    }

    #[test]
    fn table_columns() {
        let r = curvature_scan(11, &[0.0f64, 0.02]).unwrap();
        let csv = imbalance_table(&r).to_csv();
        assert!(csv.starts_with("parameter,epsilon,beta_used,recalibrated,P_T\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
