// SPDX-License-Identifier: Apache-2.0

//! Bessel-function forms of the mode sums and the Jacobi-Anger coefficients.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::export::Table;
use crate::real::{Cplx, Real};
use crate::special::{bessel_j_array, bessel_j_signed_table, gauss_kronrod_adaptive};

use super::modes::mode_set_odd;

/// `[(n/t)² J_n(t) − J'_n(t)/t]` from a table holding `J_0 … J_{n+1}`.
fn image_term<T: Real>(j: &[T], n: usize, t: T) -> T {
    let nf = T::from_usize_lossy(n);
    let jp = (j[n - 1] - j[n + 1]) * T::lit(0.5);
    (nf / t) * (nf / t) * j[n] - jp / t
}

/// Type-I mode sum `Σ_k sin²(q_k)/(N+1) e^{−i t cos q_k}`, `q_k = kπ/(N+1)`,
/// as the exact image series over multiples of `P = 2N+2`:
/// `J_1(t)/t + 2 Σ_{j≥1} (−1)^{j(N+1)} [(jP/t)² J_{jP}(t) − J'_{jP}(t)/t]`.
/// The value is real; `t = 0` returns the limit `1/2`.
pub fn u1_bessel<T: Real>(n: usize, t: T) -> T {
    let half = T::lit(0.5);
    if t.abs() < T::lit(1e-6) {
        return half - t * t / T::lit(16.0);
    }
    let p = 2 * n + 2;
    let tf = t.abs().as_f64();
    let jmax = ((tf + 30.0 + 3.0 * tf.cbrt()) / p as f64).ceil() as usize + 1;
    let nmax = jmax * p + 1;
    let j = bessel_j_array(nmax, t.abs());
    let mut sum = j[1] / t.abs();
    for img in 1..=jmax {
        let sign = if (img * (n + 1)) % 2 == 1 { -T::one() } else { T::one() };
        sum += T::lit(2.0) * sign * image_term(&j, img * p, t.abs());
    }
    sum
}

/// The single-image (`j = ±1`) approximation
/// `2(−1)^{N+1} [((2N+2)/t)² J_{2N+2}(t) − J'_{2N+2}(t)/t]`, which tends to
/// zero as `t → 0⁺`.
pub fn u1_bessel_leading<T: Real>(n: usize, t: T) -> T {
    if t == T::zero() {
        return T::zero();
    }
    let p = 2 * n + 2;
    let j = bessel_j_array(p + 1, t.abs());
    let sign = if (n + 1) % 2 == 1 { -T::one() } else { T::one() };
    T::lit(2.0) * sign * image_term(&j, p, t.abs())
}

/// Closed forms of `c_0 … c_3` written in `p = 1/(√(β²+1) + β)`, which is
/// algebraically identical to the polynomial-minus-root form but free of
/// cancellation at large `β`.
pub fn cm_closed<T: Real>(beta: T, m: usize) -> Option<T> {
    let p = T::one() / ((beta * beta + T::one()).sqrt() + beta);
    let q = p * p;
    let one = T::one();
    let two = T::lit(2.0);
    let den = two * (q + one);
    match m {
        0 => Some((two * q * q - T::lit(5.0) * q + one) / den),
        1 => Some(p * (q - one) * (q - T::lit(3.0)) / den),
        2 => Some((two * q * q * q - T::lit(6.0) * q * q + T::lit(7.0) * q - one) / (two * den)),
        3 => Some(p * (q - one).powi(3) / den),
        _ => None,
    }
}

/// `c_m` from the continuum integral, after `x = tan θ`:
/// `(4/π) ∫_{−π/2}^{π/2} (−1)^m sin²θ cos²θ Re[e^{−2imθ} (β − i sin 2θ)/(β + i sin 2θ)] dθ`.
/// Negative `m` is accepted and obeys `c_{−m} = (−1)^m c_m`.
pub fn cm_quadrature<T: Real>(beta: T, m: i64) -> Result<T> {
    if !(beta > T::zero()) {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be positive")));
    }
    let mf = T::from_i64(m).expect("small integer");
    let sign = if m.rem_euclid(2) == 1 { -T::one() } else { T::one() };
    let b2 = beta * beta;
    let two = T::lit(2.0);
    let f = |th: T| {
        let s2 = (two * th).sin();
        let (sn, cs) = (th.sin(), th.cos());
        let a = two * mf * th;
        let num = a.cos() * (b2 - s2 * s2) - two * beta * s2 * a.sin();
        sign * sn * sn * cs * cs * num / (b2 + s2 * s2)
    };
    let h = T::FRAC_PI_2();
    // the integrand varies on a scale ~β near θ = 0 and θ = ±π/2
    let cuts = [-h, -h * T::lit(0.5), T::zero(), h * T::lit(0.5), h];
    let mut total = T::zero();
    for w in cuts.windows(2) {
        let q = gauss_kronrod_adaptive(f, w[0], w[1], T::lit(1e-15), T::lit(1e-13), 2000)?;
        total += q.value;
    }
    Ok(total * T::lit(4.0) / T::PI())
}

/// Finite-`N` definition `c_m = Σ_k (O^II_{1k})² cos[(2N+2+m) q^II_k]`.
pub fn cm_discrete<T: Real>(n: usize, beta: T, m: i64) -> Result<T> {
    let ms = mode_set_odd(n, beta)?;
    let shift = T::from_i64(2 * n as i64 + 2 + m).expect("small integer");
    Ok(ms
        .type2_momenta
        .iter()
        .zip(&ms.weights2)
        .map(|(&q, &w)| w * (shift * q).cos())
        .sum())
}

/// Jacobi-Anger coefficients `c_0 … c_M` at one `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmTable<T = f64> {
    pub beta: T,
    pub order: usize,
    /// Values used downstream: closed form for `m ≤ 3`, quadrature beyond.
    pub coefficients: Vec<T>,
    pub closed: Vec<Option<T>>,
    pub quadrature: Vec<T>,
}

/// Build the `c_m` table for `m = 0 … M`.
pub fn cm_table<T: Real>(beta: T, order: usize) -> Result<CmTable<T>> {
    if !(beta > T::zero()) {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be positive")));
    }
    let mut closed = Vec::with_capacity(order + 1);
    let mut quadrature = Vec::with_capacity(order + 1);
    let mut coefficients = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let c = cm_closed(beta, m);
        let q = cm_quadrature(beta, m as i64)?;
        closed.push(c);
        quadrature.push(q);
        coefficients.push(c.unwrap_or(q));
    }
    Ok(CmTable {
        beta,
        order,
        coefficients,
        closed,
        quadrature,
    })
}

impl<T: Real> CmTable<T> {
    /// `c_m` for any sign of `m` within the table order.
    pub fn get(&self, m: i64) -> T {
        let a = m.unsigned_abs() as usize;
        let c = self.coefficients[a];
        if m < 0 && a % 2 == 1 {
            -c
        } else {
            c
        }
    }

    /// Largest `|closed − quadrature|` over `m ≤ 3`.
    pub fn max_closed_quadrature_gap(&self) -> T {
        self.closed
            .iter()
            .zip(&self.quadrature)
            .filter_map(|(c, q)| c.map(|c| (c - *q).abs()))
            .fold(T::zero(), T::max)
    }

    /// Table with columns `m, c_m_closed, c_m_quadrature, abs_diff`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["m", "c_m_closed", "c_m_quadrature", "abs_diff"]);
        for m in 0..=self.order {
            let (c, d) = match self.closed[m] {
                Some(c) => (c.to_string(), (c - self.quadrature[m]).abs().to_string()),
                None => (String::new(), String::new()),
            };
            t.push([m.to_string(), c, self.quadrature[m].to_string(), d]);
        }
        t
    }
}

/// `U^II(t) ≈ 2(−1)^{N+1} Σ_{m=−M}^{M} i^{−m} c_m J_{L+1+m}(t)` with `L = 2N+1`.
pub fn u2_jacobi_anger<T: Real>(n: usize, table: &CmTable<T>, t: T, order: usize) -> Cplx<T> {
    let order = order.min(table.order);
    let l1 = 2 * n + 2;
    let jt = bessel_j_signed_table(l1 + order, t);
    let offset = (l1 + order) as i64;
    let mut acc = Complex::new(T::zero(), T::zero());
    for m in -(order as i64)..=(order as i64) {
        // i^{−m}
        let im = match m.rem_euclid(4) {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), -T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), T::one()),
        };
        acc += im * (table.get(m) * jt[(offset + l1 as i64 + m) as usize]);
    }
    let sign = if (n + 1) % 2 == 1 { -T::one() } else { T::one() };
    acc * (T::lit(2.0) * sign)
}
