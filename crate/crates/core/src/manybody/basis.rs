// SPDX-License-Identifier: Apache-2.0

//! Few-particle Fock bases and the sparse generator on them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::ChainSpec;
use crate::real::Real;

/// Particle statistics of a few-body sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Statistics<T = f64> {
    /// Bosons with on-site interaction `U ≥ 0` (units of `J`).
    Boson(T),
    Fermion,
    /// Bosons with double occupancy removed from the basis.
    HardCore,
}

impl<T: Real> Statistics<T> {
    pub fn exclusive(&self) -> bool {
        !matches!(self, Statistics::Boson(_))
    }

    pub fn interaction(&self) -> T {
        match self {
            Statistics::Boson(u) => *u,
            _ => T::zero(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Statistics::Boson(_) => "boson",
            Statistics::Fermion => "fermion",
            Statistics::HardCore => "hardcore",
        }
    }

    /// Parse `boson`, `fermion` or `hardcore` (`hard-core` accepted).
    pub fn parse(name: &str, u: T) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "boson" | "bosons" => {
                if u < T::zero() {
                    return Err(Error::InvalidArgument(format!("U = {u} must be >= 0")));
                }
                Ok(Statistics::Boson(u))
            }
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            "hardcore" | "hard-core" | "hard_core" => Ok(Statistics::HardCore),
            other => Err(Error::InvalidArgument(format!("unknown statistics '{other}'"))),
        }
    }
}

/// Ordered occupation tuples `j₁ ≤ j₂ ≤ …` (strict for exclusive statistics),
/// enumerated lexicographically. Sites are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    length: usize,
    particles: usize,
    exclusive: bool,
    states: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

fn enumerate(length: usize, particles: usize, exclusive: bool, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == particles {
        out.push(prefix.clone());
        return;
    }
    let start = match prefix.last() {
        None => 0,
        Some(&j) if exclusive => j + 1,
        Some(&j) => j,
    };
    for j in start..length {
        prefix.push(j);
        enumerate(length, particles, exclusive, prefix, out);
        prefix.pop();
    }
}

impl FockBasis {
    pub fn new(length: usize, particles: usize, exclusive: bool) -> Result<Self> {
        if particles == 0 || length == 0 {
            return Err(Error::InvalidArgument("empty Fock sector".into()));
        }
        if exclusive && particles > length {
            return Err(Error::InvalidArgument(format!(
                "{particles} exclusive particles do not fit on {length} sites"
            )));
        }
        let mut states = Vec::new();
        enumerate(length, particles, exclusive, &mut Vec::with_capacity(particles), &mut states);
        let lookup = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(FockBasis {
            length,
            particles,
            exclusive,
            states,
            lookup,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn exclusive(&self) -> bool {
        self.exclusive
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[usize] {
        &self.states[i]
    }

    /// Index of a configuration given in any order.
    pub fn index(&self, sites: &[usize]) -> Option<usize> {
        let mut key = sites.to_vec();
        key.sort_unstable();
        self.lookup.get(&key).copied()
    }

    /// Two-body index for `j ≤ k` (either order accepted).
    pub fn pair_index(&self, j: usize, k: usize) -> Option<usize> {
        self.index(&[j, k])
    }
}

/// Number of basis states in the sector without building it.
pub fn sector_dim(length: usize, particles: usize, exclusive: bool) -> usize {
    // C(L, n) for exclusive, C(L+n−1, n) otherwise
    let top = if exclusive { length } else { length + particles - 1 };
    if particles > top {
        return 0;
    }
    let mut c = 1usize;
    for i in 0..particles {
        c = c * (top - i) / (i + 1);
    }
    c
}

/// Real-symmetric generator `K` in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator<T = f64> {
    basis: std::sync::Arc<FockBasis>,
    stats: Statistics<T>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

/// `K_{a,b}` from the single-particle hopping `−J_j/2`, potentials `−μ_j`
/// and the on-site term `(U/2) n(n−1)`, in the normalized Fock basis.
pub fn build_generator<T: Real>(spec: &ChainSpec<T>, stats: Statistics<T>) -> Result<Generator<T>> {
    build_sector_generator(spec, stats, 2)
}

pub fn build_sector_generator<T: Real>(spec: &ChainSpec<T>, stats: Statistics<T>, particles: usize) -> Result<Generator<T>> {
    if let Statistics::Boson(u) = stats {
        if !(u >= T::zero()) || !u.is_finite() {
            return Err(Error::InvalidArgument(format!("U = {u} must be finite and >= 0")));
        }
    }
    let basis = FockBasis::new(spec.len(), particles, stats.exclusive())?;
    let diag = spec.hamiltonian_diagonal();
    let off = spec.hamiltonian_offdiagonal();
    let half_u = stats.interaction() * T::lit(0.5);
    let fermion = matches!(stats, Statistics::Fermion);
    let length = spec.len();

    let mut triplets: Vec<(usize, usize, T)> = Vec::with_capacity(basis.dim() * (2 * particles + 1));
    let mut occ = vec![0usize; length];
    let mut target = vec![0usize; particles];
    for (a, state) in basis.states().iter().enumerate() {
        for &j in state {
            occ[j] += 1;
        }
        let mut d = T::zero();
        for &j in state {
            d += diag[j];
        }
        for (idx, &j) in state.iter().enumerate() {
            // each distinct site once
            if idx > 0 && state[idx - 1] == j {
                continue;
            }
            let nj = T::from_usize_lossy(occ[j]);
            d += half_u * nj * (nj - T::one());
        }
        triplets.push((a, a, d));

        for (idx, &p) in state.iter().enumerate() {
            if idx > 0 && state[idx - 1] == p {
                continue;
            }
            for q in [p.wrapping_sub(1), p + 1] {
                if q >= length {
                    continue;
                }
                if basis.exclusive() && occ[q] > 0 {
                    continue;
                }
                let hop = off[p.min(q)];
                let amp = (T::from_usize_lossy(occ[p]) * T::from_usize_lossy(occ[q] + 1)).sqrt();
                target.copy_from_slice(state);
                target[idx] = q;
                let mut sign = T::one();
                if fermion {
                    // particles strictly between p and q
                    let (lo, hi) = (p.min(q), p.max(q));
                    let between = state.iter().filter(|&&s| s > lo && s < hi).count();
                    if between % 2 == 1 {
                        sign = -sign;
                    }
                }
                let b = basis.index(&target).expect("hop stays in sector");
                triplets.push((b, a, sign * hop * amp));
            }
        }
        for &j in state {
            occ[j] = 0;
        }
    }
    triplets.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let dim = basis.dim();
    let mut row_ptr = vec![0usize; dim + 1];
    let mut cols = Vec::with_capacity(triplets.len());
    let mut vals = Vec::with_capacity(triplets.len());
    for &(r, c, v) in &triplets {
        row_ptr[r + 1] += 1;
        cols.push(c);
        vals.push(v);
    }
    for r in 0..dim {
        row_ptr[r + 1] += row_ptr[r];
    }
    Ok(Generator {
        basis: std::sync::Arc::new(basis),
        stats,
        row_ptr,
        cols,
        vals,
    })
}

impl<T: Real> Generator<T> {
    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub(crate) fn shared_basis(&self) -> std::sync::Arc<FockBasis> {
        self.basis.clone()
    }

    pub fn stats(&self) -> Statistics<T> {
        self.stats
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `y = K x` for complex vectors.
    pub fn apply(&self, x: &[crate::Cplx<T>], y: &mut [crate::Cplx<T>]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = crate::Cplx::new(T::zero(), T::zero());
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.cols[p]] * self.vals[p];
            }
            *out = acc;
        }
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn spectral_bounds(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for r in 0..self.dim() {
            let mut centre = T::zero();
            let mut radius = T::zero();
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.cols[p] == r {
                    centre += self.vals[p];
                } else {
                    radius += self.vals[p].abs();
                }
            }
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        (lo, hi)
    }

    /// Entry `K_{rc}` (zero when not stored).
    pub fn get(&self, r: usize, c: usize) -> T {
        (self.row_ptr[r]..self.row_ptr[r + 1])
            .find(|&p| self.cols[p] == c)
            .map_or(T::zero(), |p| self.vals[p])
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.dim();
        let mut m = vec![vec![T::zero(); n]; n];
        for (r, row) in m.iter_mut().enumerate() {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                row[self.cols[p]] += self.vals[p];
            }
        }
        m
    }

    /// Largest `|K_{rc} − K_{cr}|`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.dim() {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[p];
                worst = worst.max((self.vals[p] - self.get(c, r)).abs());
            }
        }
        worst
    }
}
