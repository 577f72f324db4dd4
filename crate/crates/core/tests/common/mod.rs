// SPDX-License-Identifier: Apache-2.0

//! Dense reference computations built on nalgebra, sharing nothing with the
//! library's own solvers.

#![allow(dead_code)]

use lattice_optics::ChainSpec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub fn real_matrix(h: &[Vec<f64>]) -> DMatrix<f64> {
    let n = h.len();
    DMatrix::from_fn(n, n, |i, j| h[i][j])
}

/// Single-particle `H` of the chain as a dense matrix.
pub fn hamiltonian(spec: &ChainSpec<f64>) -> DMatrix<f64> {
    real_matrix(&spec.hamiltonian_dense())
}

/// `e^{−iHt}` by spectral decomposition.
pub fn propagator(h: &DMatrix<f64>, t: f64) -> CMat {
    let eig = h.clone().symmetric_eigen();
    let n = h.nrows();
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let d = DMatrix::from_diagonal(&DVector::from_fn(n, |k, _| Complex64::from_polar(1.0, -eig.eigenvalues[k] * t)));
    &v * d * v.adjoint()
}

/// `e^{−iHt}` by Padé scaling and squaring.
pub fn expm(h: &DMatrix<f64>, t: f64) -> CMat {
    h.map(|x| Complex64::new(0.0, -x * t)).exp()
}

/// Two particles in the `L²` product space: `h⊗1 + 1⊗h + U Σ_j |jj⟩⟨jj|`.
pub fn product_hamiltonian(spec: &ChainSpec<f64>, u: f64) -> DMatrix<f64> {
    let h = hamiltonian(spec);
    let n = h.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut h2 = h.kronecker(&id) + id.kronecker(&h);
    for j in 0..n {
        h2[(j * n + j, j * n + j)] += u;
    }
    h2
}

/// Product-space wavefunction `ψ(j, k)` after starting from
/// `(|ab⟩ ± |ba⟩)/√2` (`sign = ±1`).
pub fn product_evolution(spec: &ChainSpec<f64>, u: f64, a: usize, b: usize, sign: f64, t: f64) -> DVector<Complex64> {
    let n = spec.len();
    let mut psi = DVector::from_element(n * n, Complex64::new(0.0, 0.0));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    psi[a * n + b] += Complex64::new(s, 0.0);
    psi[b * n + a] += Complex64::new(sign * s, 0.0);
    expm(&product_hamiltonian(spec, u), t) * psi
}

/// Fock amplitude of the ordered pair `j ≤ k` from a product wavefunction.
pub fn fock_pair(psi: &DVector<Complex64>, n: usize, j: usize, k: usize) -> Complex64 {
    if j == k {
        psi[j * n + j]
    } else {
        psi[j * n + k] * std::f64::consts::SQRT_2
    }
}

pub fn permanent(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sum = Complex64::new(0.0, 0.0);
    // Heap's algorithm; only used for n ≤ 3
    fn go(k: usize, perm: &mut Vec<usize>, m: &[Vec<Complex64>], sum: &mut Complex64) {
        if k == 1 {
            *sum += perm.iter().enumerate().map(|(i, &p)| m[i][p]).product::<Complex64>();
            return;
        }
        for i in 0..k {
            go(k - 1, perm, m, sum);
            let swap = if k % 2 == 0 { i } else { 0 };
            perm.swap(swap, k - 1);
        }
    }
    go(n, &mut perm, m, &mut sum);
    sum
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

/// Free-boson Fock amplitude `⟨sites|U^{⊗n}|sources⟩` for distinct sources:
/// `perm(G[sites, sources]) / √(Π n_i!)`.
pub fn boson_wick(g: &CMat, sites: &[usize], sources: &[usize]) -> Complex64 {
    let m: Vec<Vec<Complex64>> = sites.iter().map(|&s| sources.iter().map(|&a| g[(s, a)]).collect()).collect();
    let mut occ = std::collections::HashMap::new();
    for s in sites {
        *occ.entry(s).or_insert(0usize) += 1;
    }
    let norm: f64 = occ.values().map(|&n| factorial(n)).product();
    permanent(&m) / norm.sqrt()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
