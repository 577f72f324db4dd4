// SPDX-License-Identifier: Apache-2.0

//! Transfer time, balanced splitters, boundary couplings and the
//! Mach-Zehnder phase.

use std::cell::RefCell;

use rayon::prelude::*;

use crate::analytic::Parity;
use crate::error::{Error, Result};
use crate::export::Table;
use crate::lattice::{build_chain, ChainSpec, CouplingScheme, PotentialProfile};
use crate::real::{Cplx, Real};
use crate::spectral::{rt_coefficients, scatter_matrix, EndAmplitudes, EndSpectrum, PhaseAnchor, ScatterMatrix};
use crate::special::{bisect, golden_max, nelder_mead};

/// Coarse grid step for the transfer-time search.
pub const TSTAR_GRID_STEP: f64 = 0.1;
/// Parameter tolerance of the boundary-coupling optimizers.
pub const OPT_XTOL: f64 = 1e-4;
/// Objective tolerance of the boundary-coupling optimizers.
pub const OPT_FTOL: f64 = 1e-8;
/// Bound on `||R| − |T||` of a converged calibration.
pub const BALANCE_TOL: f64 = 1e-6;

/// First principal maximum of `|T(t)|` (`|R(t)|` when transmission is
/// negligible) in `t ∈ [0.5L, 1.5L]`, `L` the design length.
pub fn find_tstar<T: Real>(spec: &ChainSpec<T>) -> Result<T> {
    let ends = EndSpectrum::from_spec(spec)?;
    tstar_of(&ends, spec.design_length())
}

/// [`find_tstar`] on precomputed end amplitudes.
pub fn tstar_of<T: Real, S: EndAmplitudes<T> + ?Sized>(src: &S, length: usize) -> Result<T> {
    let lf = T::from_usize_lossy(length);
    let lo = lf * T::lit(0.5);
    let hi = lf * T::lit(1.5);
    let step = T::lit(TSTAR_GRID_STEP);
    let n = ((hi - lo) / step).floor().to_usize().unwrap_or(0) + 1;
    let grid: Vec<T> = (0..n).map(|i| lo + step * T::from_usize_lossy(i)).collect();
    let vals: Vec<(T, T)> = grid
        .par_iter()
        .map(|&t| {
            let (r, tr) = rt_coefficients(src, t);
            (r.norm(), tr.norm())
        })
        .collect();
    let max_r = vals.iter().map(|v| v.0).fold(T::zero(), T::max);
    let max_t = vals.iter().map(|v| v.1).fold(T::zero(), T::max);
    let use_t = max_t >= T::lit(0.1) * max_r;
    let amp: Vec<T> = vals.iter().map(|v| if use_t { v.1 } else { v.0 }).collect();
    let top = if use_t { max_t } else { max_r };
    let half = top * T::lit(0.5);
    let idx = (1..n.saturating_sub(1))
        .find(|&i| amp[i] >= half && amp[i] >= amp[i - 1] && amp[i] >= amp[i + 1])
        .ok_or(Error::NoMaximum {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        })?;
    let f = |t: T| {
        let (r, tr) = rt_coefficients(src, t);
        if use_t {
            tr.norm()
        } else {
            r.norm()
        }
    };
    let (t, _) = golden_max(f, grid[idx - 1], grid[idx + 1], T::lit(1e-10), 200);
    Ok(t)
}

/// A calibrated 50/50 splitter.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration<T = f64> {
    pub length: usize,
    pub parity: Parity,
    pub scheme: CouplingScheme<T>,
    pub t_star: T,
    /// `β^{50/50}` (odd) or `η^{50/50}` (even).
    pub param: T,
    /// `|R(t*)| − |T(t*)|`.
    pub balance_residual: T,
    /// `P^{50/50}_L = |T(t*)|²`.
    pub output_probability: T,
    pub r: Cplx<T>,
    pub t: Cplx<T>,
}

impl<T: Real> Calibration<T> {
    pub fn beta_5050(&self) -> Option<T> {
        (self.parity == Parity::Odd).then_some(self.param)
    }

    pub fn eta_5050(&self) -> Option<T> {
        (self.parity == Parity::Even).then_some(self.param)
    }

    /// The calibrated chain.
    pub fn chain(&self) -> Result<ChainSpec<T>> {
        let profile = match self.parity {
            Parity::Odd => PotentialProfile::CenterImpurity(self.param),
            Parity::Even => PotentialProfile::CouplingImpurity(self.param),
        };
        build_chain(self.length, &self.scheme, &[profile])
    }
}

/// Columns `L, scheme, param_value, t_star, balance_residual, P_5050`.
pub fn calibration_table<T: Real>(rows: &[Calibration<T>]) -> Table {
    let mut t = Table::new(&["L", "scheme", "param_value", "t_star", "balance_residual", "P_5050"]);
    for c in rows {
        t.push([
            c.length.to_string(),
            c.scheme.name().to_string(),
            c.param.to_string(),
            c.t_star.to_string(),
            c.balance_residual.to_string(),
            c.output_probability.to_string(),
        ]);
    }
    t
}

/// End amplitudes `(R, T)` of `build(x)` at `t`.
fn rt_at<T: Real, F>(build: &F, x: T, t: T) -> Result<(Cplx<T>, Cplx<T>)>
where
    F: Fn(T) -> Result<ChainSpec<T>>,
{
    let ends = EndSpectrum::from_spec(&build(x)?)?;
    Ok(rt_coefficients(&ends, t))
}

/// Root of `|R(t)| − |T(t)|` in the parameter of `build` on `[lo, hi]`.
/// Returns the root with `(R, T)` there.
pub fn balance_root<T: Real, F>(what: &str, build: F, t: T, lo: T, hi: T) -> Result<(T, Cplx<T>, Cplx<T>)>
where
    F: Fn(T) -> Result<ChainSpec<T>>,
{
    let h = |x: T| -> Result<T> {
        let (r, tr) = rt_at(&build, x, t)?;
        Ok(r.norm() - tr.norm())
    };
    let (h_lo, h_hi) = (h(lo)?, h(hi)?);
    if h_lo.signum() == h_hi.signum() || h_lo.is_nan() || h_hi.is_nan() {
        return Err(Error::BracketFailure {
            what: what.to_string(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: h_lo.as_f64(),
            f_hi: h_hi.as_f64(),
        });
    }
    let failure = RefCell::new(None);
    let x = bisect(
        |x| match h(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                T::nan()
            }
        },
        lo,
        hi,
        T::epsilon() * T::lit(8.0),
        200,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let (r, tr) = rt_at(&build, x, t)?;
    Ok((x, r, tr))
}

fn finish<T: Real>(
    length: usize,
    parity: Parity,
    scheme: &CouplingScheme<T>,
    t_star: T,
    param: T,
    r: Cplx<T>,
    tr: Cplx<T>,
) -> Calibration<T> {
    Calibration {
        length,
        parity,
        scheme: scheme.clone(),
        t_star,
        param,
        balance_residual: r.norm() - tr.norm(),
        output_probability: tr.norm_sqr(),
        r,
        t: tr,
    }
}

/// `β^{50/50}` of an odd chain: `t*` from the `β = 1` chain, then bisection
/// of `|R(t*)| − |T(t*)|` on `β ∈ [0.5, 1.5]`.
pub fn find_beta5050<T: Real>(length: usize, scheme: &CouplingScheme<T>) -> Result<Calibration<T>> {
    find_beta5050_with(length, scheme, &[])
}

/// [`find_beta5050`] with extra potential profiles present during both
/// the `t*` search and the bisection.
pub fn find_beta5050_with<T: Real>(
    length: usize,
    scheme: &CouplingScheme<T>,
    extra: &[PotentialProfile<T>],
) -> Result<Calibration<T>> {
    if length < 5 || length % 2 == 0 {
        return Err(Error::InvalidArgument(format!("beta calibration needs odd L >= 5, got {length}")));
    }
    let build = |beta: T| {
        let mut p = vec![PotentialProfile::CenterImpurity(beta)];
        p.extend_from_slice(extra);
        build_chain(length, scheme, &p)
    };
    let t_star = find_tstar(&build(T::one())?)?;
    let (beta, r, tr) = balance_root("beta 50/50", build, t_star, T::lit(0.5), T::lit(1.5))?;
    Ok(finish(length, Parity::Odd, scheme, t_star, beta, r, tr))
}

/// As [`find_beta5050`] but re-deriving `t*` at every trial `β`
/// (audit path for the `β`-independence of `t*`).
pub fn find_beta5050_audit<T: Real>(length: usize, scheme: &CouplingScheme<T>) -> Result<Calibration<T>> {
    let base = find_beta5050(length, scheme)?;
    let mut beta = base.param;
    let mut t_star = base.t_star;
    for _ in 0..4 {
        t_star = find_tstar(&build_chain(length, scheme, &[PotentialProfile::CenterImpurity(beta)])?)?;
        let build = |b: T| build_chain(length, scheme, &[PotentialProfile::CenterImpurity(b)]);
        beta = balance_root("beta 50/50 (audit)", build, t_star, T::lit(0.5), T::lit(1.5))?.0;
    }
    let (r, tr) = rt_coefficients(
        &EndSpectrum::from_spec(&build_chain(length, scheme, &[PotentialProfile::CenterImpurity(beta)])?)?,
        t_star,
    );
    Ok(finish(length, Parity::Odd, scheme, t_star, beta, r, tr))
}

/// `η^{50/50}` of an even chain: `t*` from the uniform-bond chain, then
/// bisection on `η ∈ [0.2, 0.7]`.
pub fn find_eta5050<T: Real>(length: usize, scheme: &CouplingScheme<T>) -> Result<Calibration<T>> {
    if length < 6 || length % 2 == 1 {
        return Err(Error::InvalidArgument(format!("eta calibration needs even L >= 6, got {length}")));
    }
    let build = |eta: T| build_chain(length, scheme, &[PotentialProfile::CouplingImpurity(eta)]);
    let t_star = find_tstar(&build(T::one())?)?;
    let (eta, r, tr) = balance_root("eta 50/50", build, t_star, T::lit(0.2), T::lit(0.7))?;
    Ok(finish(length, Parity::Even, scheme, t_star, eta, r, tr))
}

/// One or two tuned couplings at each end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryVariant {
    OneCoupling,
    TwoCoupling,
}

/// `|T(t*)|²` of the impurity-free chain (0 when no maximum is found).
pub fn transfer_peak<T: Real>(length: usize, scheme: &CouplingScheme<T>) -> T {
    let run = || -> Result<T> {
        let spec = build_chain(length, scheme, &[])?;
        let ends = EndSpectrum::from_spec(&spec)?;
        let t = tstar_of(&ends, length)?;
        Ok(rt_coefficients(&ends, t).1.norm_sqr())
    };
    run().unwrap_or(T::zero())
}

/// Boundary couplings maximizing `|T(t*)|²` of the impurity-free chain.
pub fn optimize_boundary_couplings<T: Real>(length: usize, variant: BoundaryVariant) -> Result<CouplingScheme<T>> {
    if length < 11 {
        return Err(Error::InvalidArgument(format!("boundary optimization needs L >= 11, got {length}")));
    }
    let one = |x: T| transfer_peak(length, &CouplingScheme::Optimal(x));
    let (x1, _) = golden_max(one, T::lit(0.05), T::one(), T::lit(OPT_XTOL), 200);
    if variant == BoundaryVariant::OneCoupling {
        return Ok(CouplingScheme::Optimal(x1));
    }
    let obj = |v: &[T]| {
        if v.iter().any(|&x| !(x > T::zero()) || x > T::one()) {
            return T::one();
        }
        -transfer_peak(length, &CouplingScheme::DoubleOptimal(v[0], v[1]))
    };
    let s = nelder_mead(
        obj,
        &[x1, T::lit(0.9)],
        T::lit(0.05),
        T::lit(OPT_XTOL),
        T::lit(OPT_FTOL),
        2000,
    );
    if !s.converged {
        return Err(Error::Stagnation(format!(
            "two-coupling search at L = {length} stopped after {} iterations",
            s.iterations
        )));
    }
    Ok(CouplingScheme::DoubleOptimal(s.x[0], s.x[1]))
}

/// A programmed interferometer.
#[derive(Debug, Clone, PartialEq)]
pub struct MachZehnder<T = f64> {
    pub phi_target: T,
    /// Step height `γ_R = 2φ/t*` on the right half.
    pub gamma_r: T,
    /// `β^{50/50}` re-bracketed with the step present.
    pub beta: T,
    pub t_star: T,
    pub s_tilde: ScatterMatrix<T>,
    /// `arg(S̃₁₂/(−i))` with `S̃₁₁` real.
    pub phi_measured: T,
    pub p_site1: T,
    pub p_site_l: T,
}

impl<T: Real> MachZehnder<T> {
    /// Share of the recovered end-site probability found on site `L`.
    pub fn fraction_last(&self) -> T {
        self.p_site_l / (self.p_site1 + self.p_site_l)
    }
}

/// Step height for an interferometer phase: `γ_R = 2φ/t*`.
pub fn gamma_for_phase<T: Real>(phi: T, t_star: T) -> T {
    T::lit(2.0) * phi / t_star
}

/// Splitter, step phase, splitter: the particle leaves site 1, crosses the
/// impurity twice and is read out on both ends at `2t*`.
pub fn mach_zehnder<T: Real>(length: usize, phi_target: T, scheme: &CouplingScheme<T>) -> Result<MachZehnder<T>> {
    if !(phi_target >= T::zero()) || phi_target >= T::PI() {
        return Err(Error::InvalidArgument(format!("phi = {phi_target} outside [0, pi)")));
    }
    let base = find_beta5050(length, scheme)?;
    let t_star = base.t_star;
    let gamma_r = gamma_for_phase(phi_target, t_star);
    let step = PotentialProfile::Step(gamma_r);
    let build = |beta: T| build_chain(length, scheme, &[PotentialProfile::CenterImpurity(beta), step.clone()]);
    let (beta, _, _) = balance_root("beta 50/50 with step", build, t_star, T::lit(0.5), T::lit(1.5))?;
    let ends = EndSpectrum::from_spec(&build(beta)?)?;
    let s_tilde = scatter_matrix(&ends, t_star, PhaseAnchor::RealDiagonal)?;
    let (r2, t2) = rt_coefficients(&ends, T::lit(2.0) * t_star);
    Ok(MachZehnder {
        phi_target,
        gamma_r,
        beta,
        t_star,
        phi_measured: s_tilde.phi(),
        s_tilde,
        p_site1: r2.norm_sqr(),
        p_site_l: t2.norm_sqr(),
    })
}

/// Columns `phi, gamma_R, p_site1, p_siteL`.
pub fn mach_zehnder_table<T: Real>(rows: &[MachZehnder<T>]) -> Table {
    let mut t = Table::new(&["phi", "gamma_R", "p_site1", "p_siteL"]);
    for m in rows {
        t.push([
            m.phi_target.to_string(),
            m.gamma_r.to_string(),
            m.p_site1.to_string(),
            m.p_site_l.to_string(),
        ]);
    }
    t
}
