// SPDX-License-Identifier: Apache-2.0

//! Type-I / type-II momenta, end-site weights and the out-of-band mode.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::export::Table;
use crate::real::{phase, Cplx, Real};
use crate::special::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `L = 2N+1`, center impurity `β`.
    Odd,
    /// `L = 2N`, middle bond `η`.
    Even,
}

/// Impurity-bound state outside the band, `E = −cosh θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutOfBand<T = f64> {
    pub theta: T,
    pub energy: T,
    /// `O²_{1k}` of the bound state.
    pub weight: T,
}

/// Analytic mode census of a chain with one impurity.
///
/// Type-I modes are antisymmetric (`O_{1k} = −O_{Lk}`), type-II symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet<T = f64> {
    pub parity: Parity,
    pub n: usize,
    /// `β` (odd) or `η` (even).
    pub param: T,
    pub type1_momenta: Vec<T>,
    pub type2_momenta: Vec<T>,
    pub weights1: Vec<T>,
    pub weights2: Vec<T>,
    pub out_of_band_present: bool,
    pub out_of_band_energy: Option<T>,
    pub out_of_band_weight: T,
}

fn tol<T: Real>() -> T {
    T::epsilon() * T::lit(4.0)
}

fn phi_beta<T: Real>(q: T, beta: T) -> T {
    (q.sin() / beta).atan()
}

fn dphi_beta<T: Real>(q: T, beta: T) -> T {
    let s = q.sin();
    beta * q.cos() / (beta * beta + s * s)
}

fn bracket_error<T: Real>(what: String, lo: T, hi: T, err: Error) -> Error {
    match err {
        Error::BracketFailure { f_lo, f_hi, .. } => Error::BracketFailure {
            what,
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo,
            f_hi,
        },
        other => other,
    }
}

/// `sinh(nθ)/sinh(mθ)` without overflow.
fn sinh_ratio<T: Real>(n: usize, m: usize, theta: T) -> T {
    let nf = T::from_usize_lossy(n);
    let mf = T::from_usize_lossy(m);
    let two = T::lit(2.0);
    ((nf - mf) * theta).exp() * (-(-two * nf * theta).exp_m1()) / (-(-two * mf * theta).exp_m1())
}

/// Out-of-band mode of the odd chain; present iff `β(N+1) > 1`.
pub fn out_of_band_odd<T: Real>(n: usize, beta: T) -> Result<Option<OutOfBand<T>>> {
    if beta * T::from_usize_lossy(n + 1) <= T::one() {
        return Ok(None);
    }
    let f = |theta: T| beta - theta.cosh() + sinh_ratio(n, n + 1, theta);
    let hi = (beta + T::one()).acosh() + T::one();
    let lo = T::lit(1e-9).max(T::epsilon().sqrt());
    let theta = bisect(f, lo, hi, tol::<T>(), 400)
        .map_err(|e| bracket_error(format!("out-of-band mode (N = {n}, beta = {beta})"), lo, hi, e))?;
    let mut denom = T::one();
    for j in 1..=n {
        let s = sinh_ratio(j, n + 1, theta);
        denom += T::lit(2.0) * s * s;
    }
    let s1 = sinh_ratio(1, n + 1, theta);
    Ok(Some(OutOfBand {
        theta,
        energy: -theta.cosh(),
        weight: s1 * s1 / denom,
    }))
}

/// Modes of `L = 2N+1` with a center impurity `β > 0`.
pub fn mode_set_odd<T: Real>(n: usize, beta: T) -> Result<ModeSet<T>> {
    if n < 1 {
        return Err(Error::InvalidArgument("mode_set_odd needs N >= 1".into()));
    }
    if !(beta > T::zero()) {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be positive")));
    }
    let np1 = T::from_usize_lossy(n + 1);
    let pi = T::PI();
    let type1: Vec<T> = (1..=n).map(|k| T::from_usize_lossy(k) * pi / np1).collect();
    let weights1: Vec<T> = type1.iter().map(|&q| q.sin().powi(2) / np1).collect();

    let oob = out_of_band_odd(n, beta)?;
    let count2 = if oob.is_some() { n } else { n + 1 };
    let mut type2 = Vec::with_capacity(count2);
    let mut weights2 = Vec::with_capacity(count2);
    for k in 1..=count2.min(n) {
        let kpi = T::from_usize_lossy(k) * pi;
        let lo = T::from_usize_lossy(k - 1) * pi / np1;
        let hi = kpi / np1;
        let g = |q: T| np1 * q + phi_beta(q, beta) - kpi;
        // q = 0 is a spurious root of the k = 1 equation
        let a = if k == 1 { lo + tol::<T>() } else { lo };
        let q = bisect(g, a, hi, tol::<T>(), 400).map_err(|e| {
            bracket_error(format!("type-II momentum k = {k} (N = {n}, beta = {beta})"), a, hi, e)
        })?;
        type2.push(q);
        weights2.push(q.sin().powi(2) / (np1 + dphi_beta(q, beta)));
    }
    if count2 == n + 1 {
        // last mode near the band edge, in δ = π − q with the root δ = 0 divided out
        let h = |d: T| (d.sin() / beta).atan() / d - np1;
        let (lo, hi) = (T::lit(1e-300).max(T::min_positive_value()).sqrt(), pi / np1);
        let (q, w) = if h(lo) <= T::zero() {
            // β(N+1) = 1: the mode sits at E = −1 with a linear profile
            let mut denom = T::one();
            for j in 1..=n {
                let s = T::from_usize_lossy(j) / np1;
                denom += T::lit(2.0) * s * s;
            }
            (pi, T::one() / (np1 * np1 * denom))
        } else {
            let d = bisect(h, lo, hi, tol::<T>(), 400).map_err(|e| {
                bracket_error(format!("type-II momentum k = {} (N = {n}, beta = {beta})", n + 1), lo, hi, e)
            })?;
            let (s, c) = (d.sin(), d.cos());
            (pi - d, s * s / (np1 - beta * c / (beta * beta + s * s)))
        };
        type2.push(q);
        weights2.push(w);
    }
    Ok(ModeSet {
        parity: Parity::Odd,
        n,
        param: beta,
        type1_momenta: type1,
        type2_momenta: type2,
        weights1,
        weights2,
        out_of_band_present: oob.is_some(),
        out_of_band_energy: oob.map(|o| o.energy),
        out_of_band_weight: oob.map_or(T::zero(), |o| o.weight),
    })
}

/// Modes of `L = 2N` with the middle bond scaled by `η ∈ (0, 1]`.
pub fn mode_set_even<T: Real>(n: usize, eta: T) -> Result<ModeSet<T>> {
    if n < 1 {
        return Err(Error::InvalidArgument("mode_set_even needs N >= 1".into()));
    }
    if !(eta > T::zero()) || eta > T::one() {
        return Err(Error::InvalidArgument(format!("eta = {eta} outside (0, 1]")));
    }
    let np1 = T::from_usize_lossy(n + 1);
    let nf = T::from_usize_lossy(n);
    let pi = T::PI();
    let phi1 = |k: T| (eta * k.sin()).atan2(T::one() - eta * k.cos());
    let phi2 = |k: T| (eta * k.sin()).atan2(T::one() + eta * k.cos());
    let weight = |k: T| {
        let s = k.sin();
        s * s / (nf - (nf * k).sin() * (np1 * k).cos() / s)
    };
    let mut type1 = Vec::with_capacity(n);
    let mut type2 = Vec::with_capacity(n);
    for j in 1..=n {
        let jpi = T::from_usize_lossy(j) * pi;
        let lo = T::from_usize_lossy(j - 1) * pi / np1;
        let hi = jpi / np1;
        let a = if j == 1 { lo + tol::<T>() } else { lo };
        let k1 = bisect(|k: T| np1 * k + phi1(k) - jpi, a, hi, tol::<T>(), 400)
            .map_err(|e| bracket_error(format!("even type-I momentum j = {j} (eta = {eta})"), a, hi, e))?;
        type1.push(k1);

        let lo2 = jpi / np1;
        let hi2 = T::from_usize_lossy(j + 1) * pi / np1;
        let b = if j == n { hi2 - tol::<T>() * T::lit(8.0) } else { hi2 };
        let k2 = bisect(|k: T| np1 * k - phi2(k) - jpi, lo2, b, tol::<T>(), 400)
            .map_err(|e| bracket_error(format!("even type-II momentum j = {j} (eta = {eta})"), lo2, b, e))?;
        type2.push(k2);
    }
    let weights1 = type1.iter().map(|&k| weight(k)).collect();
    let weights2 = type2.iter().map(|&k| weight(k)).collect();
    Ok(ModeSet {
        parity: Parity::Even,
        n,
        param: eta,
        type1_momenta: type1,
        type2_momenta: type2,
        weights1,
        weights2,
        out_of_band_present: false,
        out_of_band_energy: None,
        out_of_band_weight: T::zero(),
    })
}

impl<T: Real> ModeSet<T> {
    pub fn length(&self) -> usize {
        match self.parity {
            Parity::Odd => 2 * self.n + 1,
            Parity::Even => 2 * self.n,
        }
    }

    /// All energies (in band via `E = cos q`, plus the bound state), ascending.
    pub fn energies(&self) -> Vec<T> {
        let mut e: Vec<T> = self
            .type1_momenta
            .iter()
            .chain(&self.type2_momenta)
            .map(|q| q.cos())
            .collect();
        if let Some(x) = self.out_of_band_energy {
            e.push(x);
        }
        e.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        e
    }

    /// `Σ O²_{1k}` over every mode (1 for a complete set).
    pub fn total_weight(&self) -> T {
        self.weights1.iter().copied().sum::<T>() + self.weights2.iter().copied().sum::<T>() + self.out_of_band_weight
    }

    /// `U^I(t) = Σ_k (O^I_{1k})² e^{−iE_k t}`.
    pub fn u1(&self, t: T) -> Cplx<T> {
        mode_sum(&self.type1_momenta, &self.weights1, t)
    }

    /// `U^II(t)` over the in-band type-II modes (bound state excluded).
    pub fn u2(&self, t: T) -> Cplx<T> {
        mode_sum(&self.type2_momenta, &self.weights2, t)
    }

    /// Bound-state contribution `w e^{−iE t}` (zero when absent).
    pub fn out_of_band_term(&self, t: T) -> Cplx<T> {
        match self.out_of_band_energy {
            Some(e) => phase(e * t) * self.out_of_band_weight,
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    /// `(R, T) = (U^I + U^II, −U^I + U^II)` without the bound state.
    pub fn reconstruct_rt(&self, t: T) -> (Cplx<T>, Cplx<T>) {
        let u1 = self.u1(t);
        let u2 = self.u2(t);
        (u1 + u2, u2 - u1)
    }

    /// Residual of the defining momentum equation, maximized over modes.
    pub fn max_equation_residual(&self) -> T {
        let np1 = T::from_usize_lossy(self.n + 1);
        let pi = T::PI();
        let mut worst = T::zero();
        for (i, &q) in self.type2_momenta.iter().enumerate() {
            let j = T::from_usize_lossy(i + 1);
            let r = match self.parity {
                Parity::Odd => np1 * q + phi_beta(q, self.param) - j * pi,
                Parity::Even => {
                    let eta = self.param;
                    np1 * q - (eta * q.sin()).atan2(T::one() + eta * q.cos()) - j * pi
                }
            };
            worst = worst.max(r.abs());
        }
        if self.parity == Parity::Even {
            for (i, &q) in self.type1_momenta.iter().enumerate() {
                let j = T::from_usize_lossy(i + 1);
                let eta = self.param;
                let r = np1 * q + (eta * q.sin()).atan2(T::one() - eta * q.cos()) - j * pi;
                worst = worst.max(r.abs());
            }
        }
        worst
    }

    /// Table with columns `family, k, q_k, E_k, weight`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["family", "k", "q_k", "E_k", "weight"]);
        for (k, (q, w)) in self.type1_momenta.iter().zip(&self.weights1).enumerate() {
            t.push(["I".to_string(), (k + 1).to_string(), q.to_string(), q.cos().to_string(), w.to_string()]);
        }
        for (k, (q, w)) in self.type2_momenta.iter().zip(&self.weights2).enumerate() {
            t.push(["II".to_string(), (k + 1).to_string(), q.to_string(), q.cos().to_string(), w.to_string()]);
        }
        if let Some(e) = self.out_of_band_energy {
            t.push([
                "oob".to_string(),
                "0".to_string(),
                String::new(),
                e.to_string(),
                self.out_of_band_weight.to_string(),
            ]);
        }
        t
    }
}

fn mode_sum<T: Real>(q: &[T], w: &[T], t: T) -> Cplx<T> {
    q.iter()
        .zip(w)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (&q, &w)| acc + phase(q.cos() * t) * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_chain, CouplingScheme, PotentialProfile};
    use crate::spectral::{diagonalize, rt_coefficients};

    #[test]
    fn odd_spectrum_and_completeness() {
        for &beta in &[0.05f64, 0.5, 1.0, 2.0, 10.0] {
            for n in [1usize, 2, 5, 17] {
                let ms = mode_set_odd(n, beta).unwrap();
                let spec = build_chain(2 * n + 1, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(beta)]).unwrap();
                let d = diagonalize(&spec).unwrap();
                let e = ms.energies();
                assert_eq!(e.len(), 2 * n + 1);
                for (a, b) in e.iter().zip(d.energies()) {
                    assert!((a - b).abs() < 1e-12, "N={n} beta={beta}: {a} vs {b}");
                }
                let s1: f64 = ms.weights1.iter().sum();
                assert!((s1 - 0.5).abs() < 1e-12);
                assert!((ms.total_weight() - 1.0).abs() < 1e-12, "N={n} beta={beta} total {} oob {}", ms.total_weight(), ms.out_of_band_weight);
                assert!(ms.max_equation_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn odd_weights_match_numerics() {
        let ms = mode_set_odd(6, 1.0f64).unwrap();
        let spec = build_chain(13, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(1.0)]).unwrap();
        let d = diagonalize(&spec).unwrap();
        for (q, w) in ms.type2_momenta.iter().zip(&ms.weights2) {
            let k = d.energies().iter().position(|e| (e - q.cos()).abs() < 1e-10).unwrap();
            assert!((d.modes()[0][k].powi(2) - w).abs() < 1e-12);
            assert!((d.modes()[0][k] - d.modes()[12][k]).abs() < 1e-12);
        }
        for (q, w) in ms.type1_momenta.iter().zip(&ms.weights1) {
            let k = d.energies().iter().position(|e| (e - q.cos()).abs() < 1e-10).unwrap();
            assert!((d.modes()[0][k].powi(2) - w).abs() < 1e-12);
            assert!((d.modes()[0][k] + d.modes()[12][k]).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_state_threshold() {
        assert!(!mode_set_odd(4, 0.19f64).unwrap().out_of_band_present);
        assert!(mode_set_odd(4, 0.21f64).unwrap().out_of_band_present);
    }

    #[test]
    fn infinite_impurity_limit() {
        let ms = mode_set_odd(10, 1e6f64).unwrap();
        for (a, b) in ms.type1_momenta.iter().zip(&ms.type2_momenta) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    #[test]
    fn reconstruction_tracks_numerics() {
        let ms = mode_set_odd(10, 1.0f64).unwrap();
        let spec = build_chain(21, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(1.0)]).unwrap();
        let d = diagonalize(&spec).unwrap();
        for i in 0..100 {
            let t = 0.5 * i as f64;
            let (r, tr) = ms.reconstruct_rt(t);
            let (rn, tn) = rt_coefficients(&d, t);
            assert!((r - rn).norm() <= ms.out_of_band_weight + 1e-12);
            assert!((tr - tn).norm() <= ms.out_of_band_weight + 1e-12);
            let full = r + ms.out_of_band_term(t);
            assert!((full - rn).norm() < 1e-12);
        }
    }

    #[test]
    fn even_spectrum_and_weights() {
        for &eta in &[0.2f64, 0.5, 0.9, 1.0] {
            for n in [2usize, 3, 8, 20] {
                let ms = mode_set_even(n, eta).unwrap();
                let spec = build_chain(2 * n, &CouplingScheme::Uniform, &[PotentialProfile::CouplingImpurity(eta)]).unwrap();
                let d = diagonalize(&spec).unwrap();
                for (a, b) in ms.energies().iter().zip(d.energies()) {
                    assert!((a - b).abs() < 1e-12, "N={n} eta={eta}");
                }
                assert!((ms.total_weight() - 1.0).abs() < 1e-12, "N={n} eta={eta} total {} oob {}", ms.total_weight(), ms.out_of_band_weight);
                assert!(ms.max_equation_residual() < 1e-12);
                for t in [1.0, 7.5, 20.0] {
                    let (r, tr) = ms.reconstruct_rt(t);
                    let (rn, tn) = rt_coefficients(&d, t);
                    assert!((r - rn).norm() < 1e-12 && (tr - tn).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn uniform_even_chain_momenta() {
        let n = 6;
        let ms = mode_set_even(n, 1.0f64).unwrap();
        let mut q: Vec<f64> = ms.type1_momenta.iter().chain(&ms.type2_momenta).copied().collect();
        q.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (m, v) in q.iter().enumerate() {
            assert!((v - (m + 1) as f64 * std::f64::consts::PI / 13.0).abs() < 1e-13);
        }
    }

    #[test]
    fn table_columns() {
        let t = mode_set_odd(3, 2.0f64).unwrap().to_table();
        assert_eq!(t.columns, vec!["family", "k", "q_k", "E_k", "weight"]);
        assert_eq!(t.rows.len(), 7);
    }
}
