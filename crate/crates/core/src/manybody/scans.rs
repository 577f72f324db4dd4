// SPDX-License-Identifier: Apache-2.0

//! HOM curves, the bunching transition, weak-interaction robustness and the
//! three-particle probe.

use rayon::prelude::*;

use crate::calibrate::find_beta5050;
use crate::error::{Error, Result};
use crate::export::Table;
use crate::lattice::{build_chain, ChainSpec, CouplingScheme, PotentialProfile};
use crate::real::{Cplx, Real};
use crate::special::{golden_max, linear_fit};

use super::basis::{build_generator, build_sector_generator, Generator, Statistics};
use super::propagate::{Evolver, Propagator};
use super::state::FockState;

/// `P_1L`, `P_11`, `P_LL` (correlator convention) at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomPoint<T = f64> {
    pub t: T,
    pub p_1l: T,
    pub p_11: T,
    pub p_ll: T,
}

fn port_correlators<T: Real>(g: &Generator<T>, amps: &[Cplx<T>], ports: (usize, usize)) -> (T, T, T) {
    let b = g.basis();
    let get = |j: usize, k: usize| b.pair_index(j, k).map_or(T::zero(), |i| amps[i].norm_sqr());
    let two = T::lit(2.0);
    (get(ports.0, ports.1), two * get(ports.0, ports.0), two * get(ports.1, ports.1))
}

/// End-site correlators after starting with one particle on each port.
pub fn hom_curve<T: Real>(
    spec: &ChainSpec<T>,
    stats: Statistics<T>,
    times: &[T],
    propagator: Propagator,
) -> Result<Vec<HomPoint<T>>> {
    let g = build_generator(spec, stats)?;
    let ev = Evolver::new(&g, propagator)?;
    let init = FockState::hom_initial(&g, spec.ports())?;
    let mut out = Vec::with_capacity(times.len());
    ev.for_each_time(init.amplitudes(), times, |_, t, a| {
        let (p_1l, p_11, p_ll) = port_correlators(&g, a, spec.ports());
        out.push(HomPoint { t, p_1l, p_11, p_ll });
    })?;
    Ok(out)
}

/// Columns `t, P_1L, P_11, P_LL`.
pub fn hom_table<T: Real>(points: &[HomPoint<T>]) -> Table {
    let mut t = Table::new(&["t", "P_1L", "P_11", "P_LL"]);
    for p in points {
        t.push([p.t.to_string(), p.p_1l.to_string(), p.p_11.to_string(), p.p_ll.to_string()]);
    }
    t
}

/// Search windows of the bunching optimization, as fractions of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct BunchingWindows<T = f64> {
    pub t_lo: T,
    pub t_hi: T,
    /// Coarse time step before the local refinement.
    pub t_step: T,
    pub beta_lo: T,
    pub beta_hi: T,
    pub beta_step: T,
    pub beta_xtol: T,
    /// Smallest `u` entering the power-law fit.
    pub tail_min: T,
}

impl<T: Real> Default for BunchingWindows<T> {
    fn default() -> Self {
        BunchingWindows {
            t_lo: T::lit(0.8),
            t_hi: T::lit(1.3),
            t_step: T::lit(0.25),
            beta_lo: T::lit(0.7),
            beta_hi: T::lit(1.3),
            beta_step: T::lit(0.05),
            beta_xtol: T::lit(1e-4),
            tail_min: T::lit(3.0),
        }
    }
}

/// Interaction grid used when none is given.
pub fn default_u_grid<T: Real>() -> Vec<T> {
    [
        0.0, 0.01, 0.03, 0.06, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0,
    ]
    .iter()
    .map(|&x| T::lit(x))
    .collect()
}

/// `max_t P_LL(t)` of two bosons on an odd chain with center impurity `beta`,
/// over `t ∈ [t_lo L, t_hi L]`. Returns `(t_max, P_LL)`.
pub fn pll_peak<T: Real>(
    length: usize,
    scheme: &CouplingScheme<T>,
    beta: T,
    u: T,
    windows: &BunchingWindows<T>,
) -> Result<(T, T)> {
    let spec = build_chain(length, scheme, &[PotentialProfile::CenterImpurity(beta)])?;
    pll_peak_spec(&spec, Statistics::Boson(u), windows)
}

fn pll_peak_spec<T: Real>(spec: &ChainSpec<T>, stats: Statistics<T>, windows: &BunchingWindows<T>) -> Result<(T, T)> {
    let g = build_generator(spec, stats)?;
    let ev = Evolver::new(&g, Propagator::Chebyshev)?;
    let init = FockState::hom_initial(&g, spec.ports())?;
    let lf = T::from_usize_lossy(spec.design_length());
    let (lo, hi) = (windows.t_lo * lf, windows.t_hi * lf);
    let n = ((hi - lo) / windows.t_step).ceil().to_usize().unwrap_or(1).max(2);
    let times: Vec<T> = (0..=n).map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(n)).collect();
    let ports = spec.ports();
    let mut best = (0usize, T::neg_infinity());
    let mut states = Vec::with_capacity(times.len());
    ev.for_each_time(init.amplitudes(), &times, |i, _, a| {
        let p = port_correlators(&g, a, ports).2;
        if p > best.1 {
            best = (i, p);
        }
        states.push(a.to_vec());
    })?;
    // refine between the neighbouring grid points
    let i0 = best.0.saturating_sub(1);
    let i1 = (best.0 + 1).min(times.len() - 1);
    let base = &states[i0];
    let t0 = times[i0];
    let eval = |t: T| -> T {
        ev.apply(base, t - t0)
            .map(|a| port_correlators(&g, &a, ports).2)
            .unwrap_or(T::neg_infinity())
    };
    let (t, p) = golden_max(eval, t0, times[i1], T::lit(1e-4), 100);
    if p >= best.1 {
        Ok((t, p))
    } else {
        Ok((times[best.0], best.1))
    }
}

/// One point of the bunching transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BunchingPoint<T = f64> {
    pub u: T,
    pub beta_opt: T,
    pub t_opt: T,
    pub p_ll: T,
    /// `P_LL(u)/P_LL(0)`.
    pub p_normalized: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BunchingScan<T = f64> {
    pub length: usize,
    pub points: Vec<BunchingPoint<T>>,
    /// Optimum at `u = 0`.
    pub reference: BunchingPoint<T>,
    /// Power law `P̃ = e^a u^b` over the tail.
    pub fit_intercept: T,
    pub fit_slope: T,
    pub tail_points: usize,
    /// Crossing of the tail fit with `P̃ = 1`.
    pub uc: T,
}

/// `(β_opt, t_opt, P_LL)` maximizing the bunching peak at one `u`: coarse
/// `β` grid, then golden refinement around the best node.
pub fn optimize_bunching<T: Real>(
    length: usize,
    scheme: &CouplingScheme<T>,
    u: T,
    windows: &BunchingWindows<T>,
) -> Result<(T, T, T)> {
    let nb = ((windows.beta_hi - windows.beta_lo) / windows.beta_step).round().to_usize().unwrap_or(1).max(2);
    let betas: Vec<T> = (0..=nb)
        .map(|i| windows.beta_lo + (windows.beta_hi - windows.beta_lo) * T::from_usize_lossy(i) / T::from_usize_lossy(nb))
        .collect();
    let mut coarse = Vec::with_capacity(betas.len());
    for &b in &betas {
        coarse.push(pll_peak(length, scheme, b, u, windows)?.1);
    }
    let k = (0..coarse.len())
        .max_by(|&a, &b| coarse[a].partial_cmp(&coarse[b]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let lo = betas[k.saturating_sub(1)];
    let hi = betas[(k + 1).min(betas.len() - 1)];
    let f = |b: T| pll_peak(length, scheme, b, u, windows).map_or(T::neg_infinity(), |x| x.1);
    let (mut beta, mut p) = golden_max(f, lo, hi, windows.beta_xtol, 100);
    if coarse[k] > p {
        beta = betas[k];
        p = coarse[k];
    }
    let (t, _) = pll_peak(length, scheme, beta, u, windows)?;
    Ok((beta, t, p))
}

/// Optimized `P_LL` over a `u` grid, normalized to `u = 0`, with the
/// power-law threshold `U^c` from the tail `u ≥ tail_min`.
pub fn bunching_scan<T: Real>(
    length: usize,
    scheme: &CouplingScheme<T>,
    u_grid: &[T],
    windows: &BunchingWindows<T>,
) -> Result<BunchingScan<T>> {
    if length % 2 == 0 {
        return Err(Error::InvalidArgument(format!("bunching scan needs odd L, got {length}")));
    }
    if let Some(u) = u_grid.iter().find(|u| !(**u >= T::zero())) {
        return Err(Error::InvalidArgument(format!("interaction {u} must be >= 0")));
    }
    let mut all: Vec<T> = u_grid.to_vec();
    if !all.iter().any(|u| *u == T::zero()) {
        all.push(T::zero());
    }
    let raw: Vec<Result<(T, T, T, T)>> = all
        .par_iter()
        .map(|&u| optimize_bunching(length, scheme, u, windows).map(|(b, t, p)| (u, b, t, p)))
        .collect();
    let raw: Vec<(T, T, T, T)> = raw.into_iter().collect::<Result<_>>()?;
    let zero = raw.iter().find(|r| r.0 == T::zero()).copied().expect("u = 0 included");
    let norm = zero.3;
    let mk = |r: &(T, T, T, T)| BunchingPoint {
        u: r.0,
        beta_opt: r.1,
        t_opt: r.2,
        p_ll: r.3,
        p_normalized: r.3 / norm,
    };
    let points: Vec<BunchingPoint<T>> = raw[..u_grid.len()].iter().map(mk).collect();
    let reference = mk(&zero);
    let (lx, ly): (Vec<T>, Vec<T>) = points
        .iter()
        .filter(|p| p.u >= windows.tail_min && p.p_normalized > T::zero())
        .map(|p| (p.u.ln(), p.p_normalized.ln()))
        .unzip();
    if lx.len() < 4 {
        return Err(Error::FitFailure(lx.len()));
    }
    let (a, b) = linear_fit(&lx, &ly);
    Ok(BunchingScan {
        length,
        points,
        reference,
        fit_intercept: a,
        fit_slope: b,
        tail_points: lx.len(),
        uc: (-a / b).exp(),
    })
}

impl<T: Real> BunchingScan<T> {
    /// Columns `u, beta_opt, t_opt, P_LL, P_normalized`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["u", "beta_opt", "t_opt", "P_LL", "P_normalized"]);
        for p in &self.points {
            t.push([
                p.u.to_string(),
                p.beta_opt.to_string(),
                p.t_opt.to_string(),
                p.p_ll.to_string(),
                p.p_normalized.to_string(),
            ]);
        }
        t
    }
}

/// Relative change of the bunching peak at fixed `β^{50/50}(u = 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakInteraction<T = f64> {
    pub length: usize,
    pub beta: T,
    /// `(u, P_LL, |ΔP_LL|/P_LL(0))`.
    pub rows: Vec<(T, T, T)>,
    /// Largest grid `u` up to which every variation stays below 5%.
    pub threshold: Option<T>,
}

pub const WEAK_VARIATION_BAND: f64 = 0.05;

pub fn weak_interaction_scan<T: Real>(
    lengths: &[usize],
    u_grid: &[T],
    scheme: &CouplingScheme<T>,
    windows: &BunchingWindows<T>,
) -> Result<Vec<WeakInteraction<T>>> {
    if let Some(u) = u_grid.iter().find(|u| !(**u >= T::zero() && **u <= T::one())) {
        return Err(Error::InvalidArgument(format!("weak-coupling grid value {u} outside [0, 1]")));
    }
    let mut us = u_grid.to_vec();
    us.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    lengths
        .iter()
        .map(|&length| {
            let beta = find_beta5050(length, scheme)?.param;
            let p0 = pll_peak(length, scheme, beta, T::zero(), windows)?.1;
            let peaks: Vec<Result<T>> = us
                .par_iter()
                .map(|&u| pll_peak(length, scheme, beta, u, windows).map(|x| x.1))
                .collect();
            let mut rows = Vec::with_capacity(us.len());
            for (u, p) in us.iter().zip(peaks) {
                let p = p?;
                rows.push((*u, p, (p - p0).abs() / p0));
            }
            let band = T::lit(WEAK_VARIATION_BAND);
            let threshold = rows.iter().take_while(|r| r.2 < band).last().map(|r| r.0);
            Ok(WeakInteraction {
                length,
                beta,
                rows,
                threshold,
            })
        })
        .collect()
}

/// Columns `L, u, P_LL, variation`.
pub fn weak_interaction_table<T: Real>(scans: &[WeakInteraction<T>]) -> Table {
    let mut t = Table::new(&["L", "u", "P_LL", "variation"]);
    for s in scans {
        for (u, p, v) in &s.rows {
            t.push([s.length.to_string(), u.to_string(), p.to_string(), v.to_string()]);
        }
    }
    t
}

/// Largest chain accepted by the three-particle sector.
pub const THREE_BODY_MAX_LENGTH: usize = 35;

/// Double occupancy of the ports at `t*` with a third particle started on `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeBodyPoint<T = f64> {
    /// 1-based start site of the extra particle.
    pub m: usize,
    /// `Σ_j |⟨2_1 1_j|U(t*)|ψ(0)⟩|²` (`j = 1` is triple occupancy).
    pub p_11: T,
    pub p_ll: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeBodyScan<T = f64> {
    pub length: usize,
    pub u: T,
    pub beta: T,
    pub t_star: T,
    pub points: Vec<ThreeBodyPoint<T>>,
}

impl<T: Real> ThreeBodyScan<T> {
    /// `(max − min)/mean` of `P_11` over the scanned `m`.
    pub fn relative_spread(&self) -> T {
        let v: Vec<T> = self.points.iter().map(|p| p.p_11).collect();
        let max = v.iter().copied().fold(T::neg_infinity(), T::max);
        let min = v.iter().copied().fold(T::infinity(), T::min);
        let mean = v.iter().copied().sum::<T>() / T::from_usize_lossy(v.len());
        (max - min) / mean
    }

    /// Columns `m, P_11, P_LL`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["m", "P_11", "P_LL"]);
        for p in &self.points {
            t.push([p.m.to_string(), p.p_11.to_string(), p.p_ll.to_string()]);
        }
        t
    }
}

fn double_occupancy<T: Real>(g: &Generator<T>, amps: &[Cplx<T>], site: usize) -> T {
    let b = g.basis();
    (0..b.length())
        .filter_map(|j| b.index(&[site, site, j]))
        .map(|i| amps[i].norm_sqr())
        .sum()
}

/// Three bosons started on `1`, `L` and `m`, evolved to `t*` of the
/// calibrated splitter, for every `m` in `ms` (1-based, `2 ≤ m ≤ L−1`).
pub fn three_body_scan<T: Real>(
    length: usize,
    u: T,
    ms: &[usize],
    engineered: &CouplingScheme<T>,
    propagator: Propagator,
) -> Result<ThreeBodyScan<T>> {
    if length > THREE_BODY_MAX_LENGTH {
        return Err(Error::SectorTooLarge {
            length,
            max: THREE_BODY_MAX_LENGTH,
        });
    }
    if let Some(&m) = ms.iter().find(|&&m| m < 2 || m + 1 > length) {
        return Err(Error::InvalidArgument(format!("start site m = {m} outside 2..={}", length - 1)));
    }
    let cal = find_beta5050(length, engineered)?;
    let spec = cal.chain()?;
    let g = build_sector_generator(&spec, Statistics::Boson(u), 3)?;
    let ev = Evolver::new(&g, propagator)?;
    let (p1, pl) = spec.ports();
    let points: Vec<Result<ThreeBodyPoint<T>>> = ms
        .par_iter()
        .map(|&m| {
            let init = FockState::from_sites(&g, &[p1, pl, p1 + m - 1])?;
            let a = ev.apply(init.amplitudes(), cal.t_star)?;
            Ok(ThreeBodyPoint {
                m,
                p_11: double_occupancy(&g, &a, p1),
                p_ll: double_occupancy(&g, &a, pl),
            })
        })
        .collect();
    Ok(ThreeBodyScan {
        length,
        u,
        beta: cal.param,
        t_star: cal.t_star,
        points: points.into_iter().collect::<Result<_>>()?,
    })
}

/// `P_11(t*, m)` for one start site.
pub fn three_body_probe<T: Real>(length: usize, u: T, m: usize, engineered: &CouplingScheme<T>) -> Result<T> {
    Ok(three_body_scan(length, u, &[m], engineered, Propagator::Chebyshev)?.points[0].p_11)
}

/// `(p_1L, p_11, p_LL)` from single-particle `R`, `T`: bosons (`sign = +1`)
/// or fermions (`sign = −1`) in the free case.
pub fn free_hom_correlators<T: Real>(r: Cplx<T>, t: Cplx<T>, sign: T) -> (T, T, T) {
    let cross = (t * t + r * r * sign).norm_sqr();
    if sign > T::zero() {
        let d = T::lit(4.0) * (t * r).norm_sqr();
        (cross, d, d)
    } else {
        (cross, T::zero(), T::zero())
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{rt_coefficients, EndSpectrum};

    #[test]
    fn free_bosons_follow_quasi_free_formula() {
        let spec = build_chain(15, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(0.9)]).unwrap();
        let ends = EndSpectrum::from_spec(&spec).unwrap();
        let times = [3.0, 11.0, 16.5];
        for (stats, sign) in [(Statistics::Boson(0.0f64), 1.0f64), (Statistics::Fermion, -1.0)] {
            let c = hom_curve(&spec, stats, &times, Propagator::Chebyshev).unwrap();
            for p in &c {
                let (r, t) = rt_coefficients(&ends, p.t);
                let (a, b, d) = free_hom_correlators(r, t, sign);
                assert!((p.p_1l - a).abs() < 1e-10 && (p.p_11 - b).abs() < 1e-10 && (p.p_ll - d).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn three_body_rejects_large_chain() {
        let e = three_body_scan(37, 0.0, &[2], &CouplingScheme::Uniform, Propagator::Chebyshev).unwrap_err();
        assert!(matches!(e, Error::SectorTooLarge { .. }));
    }

    #[test]
    fn weak_grid_validated() {
        let e = weak_interaction_scan(&[11], &[0.5, 1.5], &CouplingScheme::Uniform, &BunchingWindows::default());
        assert!(e.is_err());
    }
}
