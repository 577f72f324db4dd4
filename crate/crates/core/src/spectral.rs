// SPDX-License-Identifier: Apache-2.0

//! Single-particle spectra, exact propagation, end-to-end amplitudes and the
//! effective 2×2 scattering matrix between the two port sites.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::export::Table;
use crate::lattice::ChainSpec;
use crate::linalg::{fix_signs, tridiag_eigen_full, tridiag_eigen_rows};
use crate::real::{phase, Cplx, Real};

/// Full eigen-decomposition `H = O diag(E) Oᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomp<T = f64> {
    energies: Vec<T>,
    /// `modes[j][k]`: component `j` of eigenvector `k`.
    modes: Vec<Vec<T>>,
    ports: (usize, usize),
}

/// Eigenvalues and the two port rows of `O` only; enough for `R`, `T` and
/// the scattering matrix at `O(L²)` cost.
#[derive(Debug, Clone, PartialEq)]
pub struct EndSpectrum<T = f64> {
    pub energies: Vec<T>,
    /// `O_{p₁ k}`.
    pub first: Vec<T>,
    /// `O_{p_L k}`.
    pub last: Vec<T>,
}

/// Anything that can produce the 2×2 port block of `e^{−iHt}`.
pub trait EndAmplitudes<T: Real>: Sync {
    /// `[[A₁₁, A₁L], [A_L1, A_LL]]` at time `t`.
    fn end_block(&self, t: T) -> [[Cplx<T>; 2]; 2];
}

/// Diagonalize the single-particle Hamiltonian of `spec`.
pub fn diagonalize<T: Real>(spec: &ChainSpec<T>) -> Result<SpectralDecomp<T>> {
    let (energies, mut modes) = tridiag_eigen_full(&spec.hamiltonian_diagonal(), &spec.hamiltonian_offdiagonal())?;
    fix_signs(&mut modes);
    Ok(SpectralDecomp {
        energies,
        modes,
        ports: spec.ports(),
    })
}

impl<T: Real> SpectralDecomp<T> {
    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn modes(&self) -> &[Vec<T>] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn ports(&self) -> (usize, usize) {
        self.ports
    }

    pub fn end_spectrum(&self) -> EndSpectrum<T> {
        EndSpectrum {
            energies: self.energies.clone(),
            first: self.modes[self.ports.0].clone(),
            last: self.modes[self.ports.1].clone(),
        }
    }

    /// Transition amplitude `⟨a|e^{−iHt}|b⟩`.
    pub fn amplitude(&self, a: usize, b: usize, t: T) -> Cplx<T> {
        self.energies
            .iter()
            .enumerate()
            .map(|(k, &e)| phase(e * t) * (self.modes[a][k] * self.modes[b][k]))
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    /// Full propagator `e^{−iHt}`, row-major.
    pub fn propagator(&self, t: T) -> Vec<Vec<Cplx<T>>> {
        let n = self.len();
        let ph: Vec<Cplx<T>> = self.energies.iter().map(|&e| phase(e * t)).collect();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                            acc + ph[k] * (self.modes[a][k] * self.modes[b][k])
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Decomposition table with columns `k, E_k, O_1k, O_Lk` (1-based `k`);
    /// `full` appends the whole eigenvector as `O[j]` columns.
    pub fn to_table(&self, full: bool) -> Table {
        let n = self.len();
        let mut cols: Vec<String> = ["k", "E_k", "O_1k", "O_Lk"].iter().map(|s| s.to_string()).collect();
        if full {
            cols.extend((1..=n).map(|j| format!("O[{j}]")));
        }
        let mut table = Table {
            columns: cols,
            rows: vec![],
        };
        for k in 0..n {
            let mut row = vec![
                (k + 1).to_string(),
                self.energies[k].to_string(),
                self.modes[self.ports.0][k].to_string(),
                self.modes[self.ports.1][k].to_string(),
            ];
            if full {
                row.extend((0..n).map(|j| self.modes[j][k].to_string()));
            }
            table.rows.push(row);
        }
        table
    }
}

impl<T: Real> EndSpectrum<T> {
    /// Port rows of the eigenvector matrix without building the full matrix.
    pub fn from_spec(spec: &ChainSpec<T>) -> Result<Self> {
        let (p1, pl) = spec.ports();
        let mut ids = vec![0];
        if p1 != 0 {
            ids.push(p1);
        }
        ids.push(pl);
        let te = tridiag_eigen_rows(&spec.hamiltonian_diagonal(), &spec.hamiltonian_offdiagonal(), &ids)?;
        let mut rows = te.rows;
        // the first component of an unreduced tridiagonal eigenvector never vanishes
        for k in 0..te.values.len() {
            if rows[0][k] < T::zero() {
                for r in rows.iter_mut() {
                    r[k] = -r[k];
                }
            }
        }
        let last = rows.pop().expect("last port row");
        let first = if p1 != 0 { rows.pop().expect("first port row") } else { rows[0].clone() };
        Ok(EndSpectrum {
            energies: te.values,
            first,
            last,
        })
    }

    /// Out-of-band helper: total port weight `Σ_k O_{p₁k}²` (1 for a complete set).
    pub fn first_weight(&self) -> T {
        self.first.iter().map(|&o| o * o).sum()
    }
}

fn end_block_from<T: Real>(energies: &[T], first: &[T], last: &[T], t: T) -> [[Cplx<T>; 2]; 2] {
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = [[zero; 2]; 2];
    for k in 0..energies.len() {
        let ph = phase(energies[k] * t);
        let (a, b) = (first[k], last[k]);
        out[0][0] += ph * (a * a);
        out[0][1] += ph * (a * b);
        out[1][1] += ph * (b * b);
    }
    out[1][0] = out[0][1];
    out
}

impl<T: Real> EndAmplitudes<T> for EndSpectrum<T> {
    fn end_block(&self, t: T) -> [[Cplx<T>; 2]; 2] {
        end_block_from(&self.energies, &self.first, &self.last, t)
    }
}

impl<T: Real> EndAmplitudes<T> for SpectralDecomp<T> {
    fn end_block(&self, t: T) -> [[Cplx<T>; 2]; 2] {
        end_block_from(
            &self.energies,
            &self.modes[self.ports.0],
            &self.modes[self.ports.1],
            t,
        )
    }
}

/// `R(t) = Σ_k O²_{1k} e^{−iE_k t}` and `T(t) = Σ_k O_{1k} O_{Lk} e^{−iE_k t}`.
pub fn rt_coefficients<T: Real, S: EndAmplitudes<T> + ?Sized>(src: &S, t: T) -> (Cplx<T>, Cplx<T>) {
    let b = src.end_block(t);
    (b[0][0], b[1][0])
}

/// `(t, R, T)` on a time grid, evaluated in parallel.
pub fn rt_curve<T: Real, S: EndAmplitudes<T> + ?Sized>(src: &S, times: &[T]) -> Vec<(T, Cplx<T>, Cplx<T>)> {
    times
        .par_iter()
        .map(|&t| {
            let (r, tr) = rt_coefficients(src, t);
            (t, r, tr)
        })
        .collect()
}

fn norm_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0))
}

fn check_normalized<T: Real>(psi: &[Cplx<T>]) -> Result<()> {
    let norm: T = psi.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    if (norm - T::one()).abs() > norm_tolerance::<T>() {
        return Err(Error::NotNormalized { norm: norm.as_f64() });
    }
    Ok(())
}

/// `ψ(t) = O e^{−iEt} Oᵀ ψ₀`.
pub fn evolve_single<T: Real>(decomp: &SpectralDecomp<T>, psi0: &[Cplx<T>], t: T) -> Result<Vec<Cplx<T>>> {
    let n = decomp.len();
    if psi0.len() != n {
        return Err(Error::InvalidArgument(format!(
            "state has {} sites, chain has {n}",
            psi0.len()
        )));
    }
    check_normalized(psi0)?;
    let zero = Complex::new(T::zero(), T::zero());
    let coeff: Vec<Cplx<T>> = (0..n)
        .map(|k| {
            let c = (0..n).fold(zero, |acc, j| acc + psi0[j] * decomp.modes[j][k]);
            c * phase(decomp.energies[k] * t)
        })
        .collect();
    Ok((0..n)
        .map(|j| (0..n).fold(zero, |acc, k| acc + coeff[k] * decomp.modes[j][k]))
        .collect())
}

/// Site-resolved densities `⟨n_j(t)⟩` for every time in `times`.
pub fn density_history<T: Real>(decomp: &SpectralDecomp<T>, psi0: &[Cplx<T>], times: &[T]) -> Result<Vec<Vec<T>>> {
    check_normalized(psi0)?;
    times
        .par_iter()
        .map(|&t| evolve_single(decomp, psi0, t).map(|psi| psi.iter().map(|z| z.norm_sqr()).collect()))
        .collect()
}

/// Long-format density table with columns `t, j, n` (1-based `j`).
pub fn density_table<T: Real>(times: &[T], densities: &[Vec<T>]) -> Table {
    let mut table = Table::new(&["t", "j", "n"]);
    for (t, row) in times.iter().zip(densities) {
        for (j, n) in row.iter().enumerate() {
            table.rows.push(vec![t.to_string(), (j + 1).to_string(), n.to_string()]);
        }
    }
    table
}

/// Site basis vector `|j⟩`.
pub fn site_state<T: Real>(length: usize, j: usize) -> Vec<Cplx<T>> {
    let mut v = vec![Complex::new(T::zero(), T::zero()); length];
    v[j] = Complex::new(T::one(), T::zero());
    v
}

/// How the free global phase of the unitary part is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseAnchor<T = f64> {
    /// `U₁₁` carries the phase of `β/(i+β)`.
    BeamSplitter(T),
    /// `U₁₁` real and positive.
    RealDiagonal,
}

impl<T: Real> PhaseAnchor<T> {
    fn diagonal_phase(&self) -> T {
        match *self {
            PhaseAnchor::BeamSplitter(beta) => {
                let z = Complex::new(beta, T::zero()) / Complex::new(beta, T::one());
                z.arg()
            }
            PhaseAnchor::RealDiagonal => T::zero(),
        }
    }

    fn offdiagonal_phase(&self) -> T {
        match *self {
            PhaseAnchor::BeamSplitter(beta) => {
                let z = Complex::new(T::zero(), -T::one()) / Complex::new(beta, T::one());
                z.arg()
            }
            PhaseAnchor::RealDiagonal => -T::FRAC_PI_2(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            PhaseAnchor::BeamSplitter(beta) => format!("U11 phase = arg(beta/(i+beta)), beta = {beta}"),
            PhaseAnchor::RealDiagonal => "U11 real positive".to_string(),
        }
    }
}

/// Effective beam splitter at one time: `S = D · U` with `U` unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterMatrix<T = f64> {
    pub time: T,
    /// Raw port block of the propagator.
    pub s: [[Cplx<T>; 2]; 2],
    pub r: Cplx<T>,
    pub t: Cplx<T>,
    pub damping: Cplx<T>,
    pub unitary_part: [[Cplx<T>; 2]; 2],
    /// `‖S − D U‖_F / ‖S‖_F`.
    pub residual: T,
    pub anchor: PhaseAnchor<T>,
}

type M2<T> = [[Cplx<T>; 2]; 2];

fn mul2<T: Real>(a: &M2<T>, b: &M2<T>) -> M2<T> {
    let mut c = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn adjoint2<T: Real>(a: &M2<T>) -> M2<T> {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn frob2<T: Real>(a: &M2<T>) -> T {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Unitary polar factor of a 2×2 matrix: `M (M†M)^{−1/2}`.
pub fn polar_unitary<T: Real>(m: &M2<T>) -> M2<T> {
    let a = mul2(&adjoint2(m), m);
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    let tr = a[0][0].re + a[1][1].re;
    let s = (tr + T::lit(2.0) * det).sqrt();
    // (M†M)^{1/2} = (M†M + |det M| I)/s
    let d = Complex::new(det, T::zero());
    let p = [[(a[0][0] + d) / s, a[0][1] / s], [a[1][0] / s, (a[1][1] + d) / s]];
    let pdet = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    let pinv = [[p[1][1] / pdet, -p[0][1] / pdet], [-p[1][0] / pdet, p[0][0] / pdet]];
    mul2(m, &pinv)
}

/// Extract `D` and the unitary part of the port block at `t_star`.
pub fn scatter_matrix<T: Real, S: EndAmplitudes<T> + ?Sized>(
    src: &S,
    t_star: T,
    anchor: PhaseAnchor<T>,
) -> Result<ScatterMatrix<T>> {
    if !(t_star > T::zero()) {
        return Err(Error::InvalidArgument(format!("t_star = {t_star} must be positive")));
    }
    let s = src.end_block(t_star);
    let weight = s[0][0].norm_sqr() + s[1][0].norm_sqr();
    if weight < T::lit(1e-8) {
        return Err(Error::DegenerateExtraction {
            weight: weight.as_f64(),
            time: t_star.as_f64(),
        });
    }
    let w = polar_unitary(&s);
    let rot = if w[0][0].norm() > T::lit(1e-6) {
        anchor.diagonal_phase() - w[0][0].arg()
    } else {
        anchor.offdiagonal_phase() - w[0][1].arg()
    };
    let e = Complex::new(rot.cos(), rot.sin());
    let u = [[w[0][0] * e, w[0][1] * e], [w[1][0] * e, w[1][1] * e]];
    let us = mul2(&adjoint2(&u), &s);
    let tr = us[0][0] + us[1][1];
    let mag = frob2(&s) / T::lit(2.0).sqrt();
    let damping = Complex::from_polar(mag, tr.arg());
    let mut diff = s;
    for i in 0..2 {
        for j in 0..2 {
            diff[i][j] = s[i][j] - damping * u[i][j];
        }
    }
    Ok(ScatterMatrix {
        time: t_star,
        s,
        r: s[0][0],
        t: s[1][0],
        damping,
        unitary_part: u,
        residual: frob2(&diff) / frob2(&s),
        anchor,
    })
}

impl<T: Real> ScatterMatrix<T> {
    /// `max |U†U − I|`.
    pub fn unitarity_defect(&self) -> T {
        let p = mul2(&adjoint2(&self.unitary_part), &self.unitary_part);
        let mut worst = T::zero();
        for (i, row) in p.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let id = if i == j { T::one() } else { T::zero() };
                worst = worst.max((*z - Complex::new(id, T::zero())).norm());
            }
        }
        worst
    }

    /// Interferometer phase `arg(U₁₂ / (−i))` in `(−π, π]`.
    pub fn phi(&self) -> T {
        (self.unitary_part[0][1] / Complex::new(T::zero(), -T::one())).arg()
    }

    /// `|R|² + |T|²` at the extraction time.
    pub fn recovered_weight(&self) -> T {
        self.r.norm_sqr() + self.t.norm_sqr()
    }
}
