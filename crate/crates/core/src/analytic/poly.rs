// SPDX-License-Identifier: Apache-2.0

//! Characteristic polynomials of `−2H` in the variable `λ = −2E`.

use crate::real::Real;
use crate::special::chebyshev_u_array;

/// Which evaluation produced a characteristic-polynomial value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyBranch {
    /// Plain Chebyshev recurrence, `|λ| ≤ 2`.
    Direct,
    /// Outside the band the polynomial is divided by `U_N(−λ/2)² > 0`,
    /// evaluated through the ratio `U_{N−1}/U_N` (hyperbolic regime). The
    /// sign, and therefore every root, is unchanged.
    Hyperbolic,
}

/// `U_{n−1}(x)/U_n(x)` for `|x| > 1` by the stable continued fraction.
fn u_ratio<T: Real>(n: usize, x: T) -> T {
    let two_x = T::lit(2.0) * x;
    let mut r = T::zero();
    for _ in 0..n {
        r = T::one() / (two_x - r);
    }
    r
}

/// `χ(λ) = (2β − λ) U_N(−λ/2)² − 2 U_{N−1}(−λ/2) U_N(−λ/2)` for `L = 2N+1`,
/// together with the branch used.
pub fn char_poly_odd_eval<T: Real>(lambda: T, beta: T, length: usize) -> (T, PolyBranch) {
    assert!(length % 2 == 1 && length >= 3, "odd chain length required");
    let n = (length - 1) / 2;
    let x = -lambda * T::lit(0.5);
    let two_beta = T::lit(2.0) * beta;
    if lambda.abs() <= T::lit(2.0) {
        let u = chebyshev_u_array(n, x);
        let (un, unm1) = (u[n], u[n - 1]);
        ((two_beta - lambda) * un * un - T::lit(2.0) * unm1 * un, PolyBranch::Direct)
    } else {
        let r = u_ratio(n, x);
        (two_beta - lambda - T::lit(2.0) * r, PolyBranch::Hyperbolic)
    }
}

/// Characteristic polynomial of the odd chain with a center impurity; see
/// [`char_poly_odd_eval`] for the out-of-band normalization.
pub fn char_poly_odd<T: Real>(lambda: T, beta: T, length: usize) -> T {
    char_poly_odd_eval(lambda, beta, length).0
}

/// `χ(λ) = U_{2N}(−λ/2) + (1 − η²) U_{N−1}(−λ/2)²` for `L = 2N` with the
/// middle bond scaled by `η`. Outside the band the value is divided by
/// `U_N²`, giving `1 − η² (U_{N−1}/U_N)²`.
pub fn char_poly_even<T: Real>(lambda: T, eta: T, length: usize) -> T {
    assert!(length % 2 == 0 && length >= 2, "even chain length required");
    let n = length / 2;
    let x = -lambda * T::lit(0.5);
    if lambda.abs() <= T::lit(2.0) {
        let u = chebyshev_u_array(2 * n, x);
        u[2 * n] + (T::one() - eta * eta) * u[n - 1] * u[n - 1]
    } else {
        let r = u_ratio(n, x);
        T::one() - eta * eta * r * r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_chain, CouplingScheme, PotentialProfile};
    use crate::spectral::diagonalize;

    fn sign_change_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        let mut roots = vec![];
        let h = (hi - lo) / steps as f64;
        let mut a = lo;
        let mut fa = f(a);
        for i in 1..=steps {
            let b = lo + h * i as f64;
            let fb = f(b);
            if fa == 0.0 || fa * fb < 0.0 {
                let r = crate::special::bisect(&f, a, b, 1e-15, 200).unwrap();
                roots.push(r);
            }
            a = b;
            fa = fb;
        }
        roots
    }

    #[test]
    fn odd_roots_are_eigenvalues() {
        let spec = build_chain(7, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(1.0)]).unwrap();
        let d = diagonalize(&spec).unwrap();
        let roots = sign_change_roots(|l| char_poly_odd(l, 1.0, 7), -4.0, 4.0, 20000);
        assert_eq!(roots.len(), 7);
        let mut from_roots: Vec<f64> = roots.iter().map(|l| -l / 2.0).collect();
        from_roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in from_roots.iter().zip(d.energies()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn strong_impurity_has_one_root_outside_band() {
        let roots = sign_change_roots(|l| char_poly_odd(l, 5.0, 11), -14.0, 14.0, 40000);
        assert_eq!(roots.len(), 11);
        assert_eq!(roots.iter().filter(|l| l.abs() > 2.0).count(), 1);
        assert_eq!(char_poly_odd_eval(3.0, 5.0, 11).1, PolyBranch::Hyperbolic);
    }

    #[test]
    fn zero_impurity_is_bare_chain() {
        let roots = sign_change_roots(|l| char_poly_odd(l, 0.0, 9), -2.0, 2.0, 20000);
        assert_eq!(roots.len(), 9);
        for (j, r) in roots.iter().enumerate() {
            let want = -2.0 * ((j + 1) as f64 * std::f64::consts::PI / 10.0).cos();
            assert!((r - want).abs() < 1e-10);
        }
    }

    #[test]
    fn even_roots_are_eigenvalues() {
        let spec = build_chain(16, &CouplingScheme::Uniform, &[PotentialProfile::CouplingImpurity(0.5)]).unwrap();
        let d = diagonalize(&spec).unwrap();
        let roots = sign_change_roots(|l| char_poly_even(l, 0.5, 16), -2.0, 2.0, 40000);
        assert_eq!(roots.len(), 16);
        let mut e: Vec<f64> = roots.iter().map(|l| -l / 2.0).collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in e.iter().zip(d.energies()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
