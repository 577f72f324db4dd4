// SPDX-License-Identifier: Apache-2.0

//! Exact propagation `A(t) = e^{−iKt} A(0)` in a few-body sector.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::real::{phase, Cplx, Real};
use crate::special::bessel_j_array;

use super::basis::Generator;

/// How `e^{−iKt}` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Propagator {
    /// Chebyshev expansion of the sparse generator (Bessel coefficients).
    #[default]
    Chebyshev,
    /// Dense eigendecomposition of `K`; exact, `O(d³)` setup.
    Eigen,
}

impl Propagator {
    pub fn name(&self) -> &'static str {
        match self {
            Propagator::Chebyshev => "chebyshev",
            Propagator::Eigen => "eigen",
        }
    }
}

/// Largest sector the dense path accepts.
pub const EIGEN_MAX_DIM: usize = 2500;

/// Norm drift that aborts a propagation.
fn drift_tolerance<T: Real>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(1e3))
}

/// Propagator bound to one generator.
pub struct Evolver<'a, T: Real> {
    generator: &'a Generator<T>,
    kind: Propagator,
    centre: T,
    half_width: T,
    eigen: Option<(Vec<T>, Vec<Vec<T>>)>,
}

impl<'a, T: Real> Evolver<'a, T> {
    pub fn new(generator: &'a Generator<T>, kind: Propagator) -> Result<Self> {
        let (lo, hi) = generator.spectral_bounds();
        let centre = (lo + hi) * T::lit(0.5);
        // a small pad keeps the scaled spectrum strictly inside [−1, 1]
        let half_width = (hi - lo) * T::lit(0.5) * T::lit(1.01) + T::lit(1e-3);
        let eigen = match kind {
            Propagator::Chebyshev => None,
            Propagator::Eigen => {
                if generator.dim() > EIGEN_MAX_DIM {
                    return Err(Error::InvalidArgument(format!(
                        "dense propagator limited to dimension {EIGEN_MAX_DIM}, sector has {}",
                        generator.dim()
                    )));
                }
                Some(symmetric_eigen(&generator.to_dense())?)
            }
        };
        Ok(Evolver {
            generator,
            kind,
            centre,
            half_width,
            eigen,
        })
    }

    pub fn kind(&self) -> Propagator {
        self.kind
    }

    /// `e^{−iKt} v` (any real `t`).
    pub fn apply(&self, v: &[Cplx<T>], t: T) -> Result<Vec<Cplx<T>>> {
        if v.len() != self.generator.dim() {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} in a sector of dimension {}",
                v.len(),
                self.generator.dim()
            )));
        }
        let before: T = v.iter().map(|z| z.norm_sqr()).sum();
        let out = match &self.eigen {
            Some((vals, vecs)) => eigen_apply(vals, vecs, v, t),
            None => self.chebyshev(v, t),
        };
        let after: T = out.iter().map(|z| z.norm_sqr()).sum();
        if (after - before).abs() > drift_tolerance::<T>() * before.max(T::one()) {
            return Err(Error::Propagation(format!(
                "norm drift {} at t = {t}",
                (after - before).abs()
            )));
        }
        Ok(out)
    }

    fn chebyshev(&self, v: &[Cplx<T>], t: T) -> Vec<Cplx<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        if t == T::zero() {
            return v.to_vec();
        }
        let x = self.half_width * t.abs();
        let xf = x.as_f64();
        let nmax = (xf + 12.0 * xf.cbrt() + 40.0).ceil() as usize;
        let bessel = bessel_j_array(nmax, x);
        // drop the tail once the coefficients are below round-off
        let cutoff = T::epsilon() * T::lit(1e-3);
        let mut last = nmax;
        while last > 1 && (last as f64) > xf && bessel[last].abs() < cutoff {
            last -= 1;
        }
        let n = v.len();
        let inv = T::one() / self.half_width;
        // (−i)^k for t > 0, (+i)^k for t < 0
        let rot = if t > T::zero() {
            Complex::new(T::zero(), -T::one())
        } else {
            Complex::new(T::zero(), T::one())
        };
        let scaled = |src: &[Cplx<T>], dst: &mut [Cplx<T>]| {
            self.generator.apply(src, dst);
            for (d, s) in dst.iter_mut().zip(src) {
                *d = (*d - *s * self.centre) * inv;
            }
        };
        let mut prev = v.to_vec();
        let mut cur = vec![zero; n];
        scaled(&prev, &mut cur);
        let mut acc: Vec<Cplx<T>> = prev.iter().map(|z| *z * bessel[0]).collect();
        let two = T::lit(2.0);
        let mut ik = rot;
        for (a, c) in acc.iter_mut().zip(&cur) {
            *a += *c * ik * (two * bessel[1]);
        }
        let mut next = vec![zero; n];
        for &coef in bessel.iter().take(last + 1).skip(2) {
            scaled(&cur, &mut next);
            for (nx, p) in next.iter_mut().zip(&prev) {
                *nx = *nx * two - *p;
            }
            ik *= rot;
            let w = ik * (two * coef);
            for (a, c) in acc.iter_mut().zip(&next) {
                *a += *c * w;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        let global = phase(self.centre * t);
        for a in acc.iter_mut() {
            *a *= global;
        }
        acc
    }

    /// Visit `e^{−iKt} v` at each of the ascending `times`, stepping between
    /// successive points.
    pub fn for_each_time<F>(&self, v: &[Cplx<T>], times: &[T], mut visit: F) -> Result<()>
    where
        F: FnMut(usize, T, &[Cplx<T>]),
    {
        let mut state = v.to_vec();
        let mut now = T::zero();
        for (i, &t) in times.iter().enumerate() {
            if t < now {
                return Err(Error::InvalidArgument("time grid must be ascending".into()));
            }
            if t > now {
                state = self.apply(&state, t - now)?;
                now = t;
            }
            visit(i, t, &state);
        }
        Ok(())
    }
}

fn eigen_apply<T: Real>(vals: &[T], vecs: &[Vec<T>], v: &[Cplx<T>], t: T) -> Vec<Cplx<T>> {
    let n = vals.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut c = vec![zero; n];
    for (j, row) in vecs.iter().enumerate() {
        let x = v[j];
        if x == zero {
            continue;
        }
        for k in 0..n {
            c[k] += x * row[k];
        }
    }
    for k in 0..n {
        c[k] *= phase(vals[k] * t);
    }
    vecs.iter()
        .map(|row| row.iter().zip(&c).fold(zero, |acc, (&o, &ck)| acc + ck * o))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_chain, CouplingScheme, PotentialProfile};
    use crate::manybody::basis::{build_generator, Statistics};

    #[test]
    fn chebyshev_matches_eigen() {
        let spec = build_chain(9, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(0.9)]).unwrap();
        let g = build_generator(&spec, Statistics::Boson(1.3)).unwrap();
        let a = Evolver::new(&g, Propagator::Chebyshev).unwrap();
        let b = Evolver::new(&g, Propagator::Eigen).unwrap();
        let mut v = vec![Complex::new(0.0, 0.0); g.dim()];
        v[g.basis().pair_index(0, 8).unwrap()] = Complex::new(1.0, 0.0);
        for &t in &[0.0, 0.4, 7.0, 23.5, -3.0] {
            let x = a.apply(&v, t).unwrap();
            let y = b.apply(&v, t).unwrap();
            let err = x.iter().zip(&y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            assert!(err < 1e-11, "t = {t}: {err}");
        }
    }

    #[test]
    fn stepping_equals_direct() {
        let spec = build_chain(11, &CouplingScheme::Uniform, &[]).unwrap();
        let g = build_generator(&spec, Statistics::Fermion).unwrap();
        let e = Evolver::new(&g, Propagator::Chebyshev).unwrap();
        let mut v = vec![Complex::new(0.0, 0.0); g.dim()];
        v[0] = Complex::new(1.0, 0.0);
        let times = [1.0, 2.5, 2.5, 9.0];
        let mut got = vec![];
        e.for_each_time(&v, &times, |_, _, s| got.push(s.to_vec())).unwrap();
        let direct = e.apply(&v, 9.0).unwrap();
        let err = got[3].iter().zip(&direct).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }
}
