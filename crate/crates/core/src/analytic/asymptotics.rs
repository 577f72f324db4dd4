// SPDX-License-Identifier: Apache-2.0

//! Large-`N` limits of the end amplitudes at the transfer time.

use num_complex::Complex;

use crate::real::{Cplx, Real};
use crate::special::{airy_ai, XI, XI_ROUNDED};

/// Coefficient `c` of `β^{50/50}(L) ≈ 1 − c L^{−2/3}`.
pub const BETA_LAW_COEFF: f64 = 0.809;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsOdd<T = f64> {
    /// `2N+2 + ξ(N+1)^{1/3}` with `ξ = 1.019`.
    pub t_star: T,
    /// Same with the full-precision `ξ`.
    pub t_star_precise: T,
    /// `U^II(t*) ≈ A (β−i)/(β+i)`, `A = 2(−1)^{N+1} N^{−1/3} Ai(−ξ)`.
    pub u2_limit: Cplx<T>,
    /// `D = 2A`, so that `R = D β/(β+i)` and `T = −i D/(β+i)`.
    pub damping: Cplx<T>,
    /// `R/T` to first order in `N^{−2/3}` about `β = 1`.
    pub r_over_t: Cplx<T>,
    /// `η = (1 − β) N^{2/3}`.
    pub eta_correction: T,
    /// Balanced impurity `1 − (ξ/2) N^{−2/3}`.
    pub beta_5050: T,
}

fn airy_amplitude<T: Real>(n: usize) -> T {
    let nf = T::from_usize_lossy(n);
    let sign = if (n + 1) % 2 == 1 { -T::one() } else { T::one() };
    T::lit(2.0) * sign * nf.powf(T::lit(-1.0 / 3.0)) * airy_ai(-T::lit(XI))
}

/// Transfer time `2N+2 + ξ(N+1)^{1/3}`.
pub fn t_star_formula<T: Real>(n: usize, xi: T) -> T {
    let np1 = T::from_usize_lossy(n + 1);
    T::lit(2.0) * np1 + xi * np1.cbrt()
}

pub fn asymptotics_odd<T: Real>(n: usize, beta: T) -> AsymptoticsOdd<T> {
    let n = n.max(1);
    let a = airy_amplitude::<T>(n);
    let i = Complex::new(T::zero(), T::one());
    let b = Complex::new(beta, T::zero());
    let nf = T::from_usize_lossy(n);
    let n23 = nf.powf(T::lit(2.0 / 3.0));
    let xi = T::lit(XI);
    let eta = (T::one() - beta) * n23;
    AsymptoticsOdd {
        t_star: t_star_formula(n, T::lit(XI_ROUNDED)),
        t_star_precise: t_star_formula(n, xi),
        u2_limit: (b - i) / (b + i) * a,
        damping: Complex::new(T::lit(2.0) * a, T::zero()),
        r_over_t: i - i * (T::lit(0.5) * (T::lit(2.0) * eta - xi) / n23),
        eta_correction: eta,
        beta_5050: T::one() - T::lit(0.5) * xi / n23,
    }
}

/// `1 − 0.809 L^{−2/3}`.
pub fn beta5050_law<T: Real>(length: usize) -> T {
    T::one() - T::lit(BETA_LAW_COEFF) * T::from_usize_lossy(length).powf(T::lit(-2.0 / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsEven<T = f64> {
    pub u1_limit: Cplx<T>,
    pub u2_limit: Cplx<T>,
}

impl<T: Real> AsymptoticsEven<T> {
    pub fn reflection(&self) -> Cplx<T> {
        self.u1_limit + self.u2_limit
    }

    pub fn transmission(&self) -> Cplx<T> {
        self.u2_limit - self.u1_limit
    }
}

pub fn asymptotics_even<T: Real>(n: usize, eta: T) -> AsymptoticsEven<T> {
    let a = airy_amplitude::<T>(n.max(1));
    let i = Complex::new(T::zero(), T::one());
    let e = Complex::new(eta, T::zero());
    AsymptoticsEven {
        u1_limit: (i - e) / (i + e) * a,
        u2_limit: (i + e) / (i - e) * a,
    }
}

/// Unit-modulus splitter of the coupling impurity,
/// `[[ρ, τ], [τ, ρ]]` with `ρ = (1−η²)/(1+η²)`, `τ = −2iη/(1+η²)`.
pub fn even_splitter<T: Real>(eta: T) -> [[Cplx<T>; 2]; 2] {
    let d = T::one() + eta * eta;
    let rho = Complex::new((T::one() - eta * eta) / d, T::zero());
    let tau = Complex::new(T::zero(), -T::lit(2.0) * eta / d);
    [[rho, tau], [tau, rho]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transfer_time_near_55() {
        let a = asymptotics_odd(25, 1.0f64);
        assert!((a.t_star - 55.0).abs() < 0.1, "{}", a.t_star);
        assert!((a.t_star - a.t_star_precise).abs() < 0.01);
    }

    #[test]
    fn damping_magnitude() {
        let a = asymptotics_odd(25, 1.0f64);
        assert!((a.damping.norm() - 0.733).abs() < 2e-3, "{}", a.damping.norm());
        let u = a.u2_limit.norm();
        assert!((u - a.damping.norm() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn ratio_at_balanced_impurity() {
        let a = asymptotics_odd(200, 1.0f64);
        let b = asymptotics_odd(200, a.beta_5050);
        assert!(b.r_over_t.re.abs() < 1e-14);
        assert!((b.r_over_t.im - 1.0).abs() < 1e-14);
        assert!(a.eta_correction == 0.0);
    }

    #[test]
    fn law_matches_expansion_coefficient() {
        // (ξ/2) N^{−2/3} = (ξ/2) 2^{2/3} L^{−2/3} at large L
        let c = 0.5 * XI * 2f64.powf(2.0 / 3.0);
        assert!((c - BETA_LAW_COEFF).abs() < 1e-3);
        assert!((beta5050_law::<f64>(51) - 0.9406).abs() < 1e-3);
    }

    #[test]
    fn even_balance_at_sqrt2_minus_1() {
        let eta = 2f64.sqrt() - 1.0;
        let a = asymptotics_even(40, eta);
        let q = a.u1_limit / a.u2_limit;
        assert!(q.re.abs() < 1e-14 && (q.im - 1.0).abs() < 1e-14);
        let s = even_splitter(eta);
        assert!((s[0][0].norm() - s[0][1].norm()).abs() < 1e-15);
    }

    #[test]
    fn even_splitter_from_limits() {
        for &eta in &[0.1f64, 0.4, 0.8] {
            let a = asymptotics_even(30, eta);
            let d = 2.0 * airy_amplitude::<f64>(30);
            let s = even_splitter(eta);
            assert!((a.reflection() / d - s[0][0]).norm() < 1e-14);
            assert!((a.transmission() / d - s[0][1]).norm() < 1e-14);
        }
    }

    #[test]
    fn decoupled_halves() {
        let a = asymptotics_even(30, 1e-12f64);
        assert!(a.transmission().norm() < 1e-10);
    }
}
