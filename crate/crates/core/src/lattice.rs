// SPDX-License-Identifier: Apache-2.0

//! Chain specifications: coupling patterns and on-site potential profiles.
//!
//! Energies are in units of the bulk tunneling rate `J ≡ 1`, times in `1/J`
//! and `ħ = 1`. The single-particle Hamiltonian of a spec has off-diagonal
//! entries `−J_j/2` and diagonal entries `−μ_j`; a global chemical potential
//! only adds a phase at fixed particle number and is never represented.
//!
//! Site indices in this module are 0-based. For an odd chain `L = 2N+1` the
//! center site is index `N`; for an even chain `L = 2N` the middle bond is
//! index `N−1` (between sites `N−1` and `N`).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::real::Real;

/// Which tunneling couplings are engineered.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingScheme<T = f64> {
    Uniform,
    /// `J_1 = J_{L−1} = x`.
    Optimal(T),
    /// `J_1 = J_{L−1} = x1`, `J_2 = J_{L−2} = x2`.
    DoubleOptimal(T, T),
    /// Full list of `L−1` couplings.
    Custom(Vec<T>),
}

impl<T: Real> CouplingScheme<T> {
    pub fn name(&self) -> &'static str {
        match self {
            CouplingScheme::Uniform => "uniform",
            CouplingScheme::Optimal(_) => "optimal",
            CouplingScheme::DoubleOptimal(..) => "double_optimal",
            CouplingScheme::Custom(_) => "custom",
        }
    }

    pub fn params(&self) -> Vec<T> {
        match self {
            CouplingScheme::Uniform => vec![],
            CouplingScheme::Optimal(x) => vec![*x],
            CouplingScheme::DoubleOptimal(a, b) => vec![*a, *b],
            CouplingScheme::Custom(v) => v.clone(),
        }
    }

    pub fn from_name(name: &str, params: &[T]) -> Result<Self> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "scheme {name} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "uniform" => want(0).map(|_| CouplingScheme::Uniform),
            "optimal" => want(1).map(|_| CouplingScheme::Optimal(params[0])),
            "double_optimal" => want(2).map(|_| CouplingScheme::DoubleOptimal(params[0], params[1])),
            "custom" => Ok(CouplingScheme::Custom(params.to_vec())),
            other => Err(Error::Config(format!("unknown coupling scheme `{other}`"))),
        }
    }

    /// Couplings of an `L`-site chain under this scheme.
    pub fn couplings(&self, length: usize) -> Result<Vec<T>> {
        if length < 2 {
            return Err(Error::InvalidChain(format!("length {length} < 2")));
        }
        let bonds = length - 1;
        let mut j = vec![T::one(); bonds];
        let check_unit = |x: T, which: &str| -> Result<()> {
            if x > T::one() {
                Err(Error::InvalidArgument(format!(
                    "{which} boundary coupling {x} outside (0, 1]"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            CouplingScheme::Uniform => {}
            CouplingScheme::Optimal(x) => {
                check_unit(*x, "optimal")?;
                j[0] = *x;
                j[bonds - 1] = *x;
            }
            CouplingScheme::DoubleOptimal(x1, x2) => {
                if length < 5 {
                    return Err(Error::InvalidChain(
                        "double-optimal scheme needs L >= 5".into(),
                    ));
                }
                check_unit(*x1, "first")?;
                check_unit(*x2, "second")?;
                j[0] = *x1;
                j[bonds - 1] = *x1;
                j[1] = *x2;
                j[bonds - 2] = *x2;
            }
            CouplingScheme::Custom(v) => {
                if v.len() != bonds {
                    return Err(Error::InvalidChain(format!(
                        "custom scheme has {} couplings, chain needs {bonds}",
                        v.len()
                    )));
                }
                j.copy_from_slice(v);
            }
        }
        for (index, &value) in j.iter().enumerate() {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::NonPositiveCoupling {
                    index,
                    value: value.as_f64(),
                });
            }
        }
        Ok(j)
    }
}

/// On-site potential (or middle-bond) modifications. Profiles compose:
/// potentials add, coupling impurities multiply the middle bond.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialProfile<T = f64> {
    /// `μ = β` on the center site of an odd chain.
    CenterImpurity(T),
    /// Middle bond of an even chain scaled to `η J`.
    CouplingImpurity(T),
    /// `μ = γ_R` on every site right of the center.
    Step(T),
    /// `μ_j = β exp[−(j − c)²/σ²]` centered on the chain midpoint `c`.
    GaussianImpurity { beta: T, sigma: T },
    /// Two extra sites at both ends carrying `μ = β_walls`; the original
    /// chain becomes the embedded chain between them.
    Walls(T),
    /// Trap curvature `μ_j = −ω² (j − c)²/2`, measured from the midpoint.
    Harmonic(T),
    /// Site-resolved potentials added verbatim (length `L`).
    Custom(Vec<T>),
}

impl<T: Real> PotentialProfile<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            PotentialProfile::CenterImpurity(_) => "center_impurity",
            PotentialProfile::CouplingImpurity(_) => "coupling_impurity",
            PotentialProfile::Step(_) => "step",
            PotentialProfile::GaussianImpurity { .. } => "gaussian_impurity",
            PotentialProfile::Walls(_) => "walls",
            PotentialProfile::Harmonic(_) => "harmonic",
            PotentialProfile::Custom(_) => "custom",
        }
    }

    pub fn params(&self) -> Vec<T> {
        match self {
            PotentialProfile::CenterImpurity(x)
            | PotentialProfile::CouplingImpurity(x)
            | PotentialProfile::Step(x)
            | PotentialProfile::Walls(x)
            | PotentialProfile::Harmonic(x) => vec![*x],
            PotentialProfile::GaussianImpurity { beta, sigma } => vec![*beta, *sigma],
            PotentialProfile::Custom(v) => v.clone(),
        }
    }

    pub fn from_kind(kind: &str, params: &[T]) -> Result<Self> {
        let one = || -> Result<T> {
            match params {
                [x] => Ok(*x),
                _ => Err(Error::Config(format!(
                    "profile {kind} takes 1 parameter, got {}",
                    params.len()
                ))),
            }
        };
        Ok(match kind {
            "center_impurity" => PotentialProfile::CenterImpurity(one()?),
            "coupling_impurity" => PotentialProfile::CouplingImpurity(one()?),
            "step" => PotentialProfile::Step(one()?),
            "walls" => PotentialProfile::Walls(one()?),
            "harmonic" => PotentialProfile::Harmonic(one()?),
            "gaussian_impurity" => match params {
                [beta, sigma] => PotentialProfile::GaussianImpurity {
                    beta: *beta,
                    sigma: *sigma,
                },
                _ => {
                    return Err(Error::Config(
                        "gaussian_impurity takes 2 parameters (beta, sigma)".into(),
                    ))
                }
            },
            "custom" => PotentialProfile::Custom(params.to_vec()),
            other => return Err(Error::Config(format!("unknown profile kind `{other}`"))),
        })
    }

    /// Gaussian impurity parametrized by its full width at half maximum.
    pub fn gaussian_fwhm(beta: T, fwhm: T) -> Self {
        PotentialProfile::GaussianImpurity {
            beta,
            sigma: sigma_from_fwhm(fwhm),
        }
    }

    /// Mirror-symmetric profiles keep the chain reflection invariant.
    pub fn is_mirror_symmetric(&self) -> bool {
        !matches!(
            self,
            PotentialProfile::Step(_) | PotentialProfile::Custom(_)
        )
    }
}

/// `σ` of `exp(−x²/σ²)` with the given FWHM (`FWHM = 2σ√ln 2`).
pub fn sigma_from_fwhm<T: Real>(fwhm: T) -> T {
    fwhm / (T::lit(2.0) * T::LN_2().sqrt())
}

pub fn fwhm_from_sigma<T: Real>(sigma: T) -> T {
    sigma * T::lit(2.0) * T::LN_2().sqrt()
}

/// One lattice instance: `L` sites, `L−1` couplings, `L` potentials, and the
/// two port sites (the chain ends, or the embedded ends when walls are used).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec<T = f64> {
    couplings: Vec<T>,
    potentials: Vec<T>,
    ports: (usize, usize),
    scheme: CouplingScheme<T>,
    profiles: Vec<PotentialProfile<T>>,
    design_length: usize,
}

impl<T: Real> ChainSpec<T> {
    /// Raw constructor; ports are the chain ends.
    pub fn from_parts(couplings: Vec<T>, potentials: Vec<T>) -> Result<Self> {
        let length = potentials.len();
        if length == 0 {
            return Err(Error::InvalidChain("empty chain".into()));
        }
        if couplings.len() + 1 != length {
            return Err(Error::InvalidChain(format!(
                "{} couplings for {length} sites",
                couplings.len()
            )));
        }
        for (index, &value) in couplings.iter().enumerate() {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::NonPositiveCoupling {
                    index,
                    value: value.as_f64(),
                });
            }
        }
        if potentials.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidChain("non-finite potential".into()));
        }
        let scheme = if length > 1 {
            CouplingScheme::Custom(couplings.clone())
        } else {
            CouplingScheme::Uniform
        };
        let profiles = if potentials.iter().all(|p| p.is_zero()) {
            vec![]
        } else {
            vec![PotentialProfile::Custom(potentials.clone())]
        };
        Ok(ChainSpec {
            couplings,
            potentials,
            ports: (0, length - 1),
            scheme,
            profiles,
            design_length: length,
        })
    }

    pub fn uniform(length: usize) -> Result<Self> {
        build_chain(length, &CouplingScheme::Uniform, &[])
    }

    /// Number of sites actually simulated (includes wall sites).
    pub fn len(&self) -> usize {
        self.potentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potentials.is_empty()
    }

    /// Length of the chain the spec was designed for (excludes wall sites).
    pub fn design_length(&self) -> usize {
        self.design_length
    }

    pub fn couplings(&self) -> &[T] {
        &self.couplings
    }

    pub fn potentials(&self) -> &[T] {
        &self.potentials
    }

    /// `(first, last)` port sites, 0-based.
    pub fn ports(&self) -> (usize, usize) {
        self.ports
    }

    pub fn has_walls(&self) -> bool {
        self.ports != (0, self.len() - 1)
    }

    pub fn scheme(&self) -> &CouplingScheme<T> {
        &self.scheme
    }

    pub fn profiles(&self) -> &[PotentialProfile<T>] {
        &self.profiles
    }

    /// Diagonal of the single-particle Hamiltonian (`−μ_j`).
    pub fn hamiltonian_diagonal(&self) -> Vec<T> {
        self.potentials.iter().map(|&m| -m).collect()
    }

    /// Off-diagonal of the single-particle Hamiltonian (`−J_j/2`).
    pub fn hamiltonian_offdiagonal(&self) -> Vec<T> {
        let half = T::lit(0.5);
        self.couplings.iter().map(|&j| -j * half).collect()
    }

    /// Dense single-particle Hamiltonian, row-major.
    pub fn hamiltonian_dense(&self) -> Vec<Vec<T>> {
        let n = self.len();
        let mut h = vec![vec![T::zero(); n]; n];
        let d = self.hamiltonian_diagonal();
        let e = self.hamiltonian_offdiagonal();
        for i in 0..n {
            h[i][i] = d[i];
            if i + 1 < n {
                h[i][i + 1] = e[i];
                h[i + 1][i] = e[i];
            }
        }
        h
    }

    /// Reflection about the chain center maps the spec onto itself.
    pub fn is_mirror_symmetric(&self, tol: T) -> bool {
        let n = self.len();
        let j_ok = (0..self.couplings.len())
            .all(|i| (self.couplings[i] - self.couplings[n - 2 - i]).abs() <= tol);
        let mu_ok = (0..n).all(|i| (self.potentials[i] - self.potentials[n - 1 - i]).abs() <= tol);
        j_ok && mu_ok
    }

    /// Same recipe with the coupling scheme replaced.
    pub fn with_scheme(&self, scheme: &CouplingScheme<T>) -> Result<Self> {
        build_chain(self.design_length, scheme, &self.profiles)
    }

    /// Flat key-value serialization with deterministic key order.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let join = |v: &[T]| {
            v.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(out, "length = {}", self.design_length);
        let _ = writeln!(out, "scheme = {}", self.scheme.name());
        let _ = writeln!(out, "scheme_params = {}", join(&self.scheme.params()));
        for (i, p) in self.profiles.iter().enumerate() {
            let _ = writeln!(out, "profiles[{i}].kind = {}", p.kind());
            let _ = writeln!(out, "profiles[{i}].params = {}", join(&p.params()));
        }
        out
    }

    /// Inverse of [`ChainSpec::to_kv`]; unknown keys are rejected.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut length = None;
        let mut scheme = None;
        let mut scheme_params: Vec<T> = vec![];
        let mut kinds: BTreeMap<usize, String> = BTreeMap::new();
        let mut params: BTreeMap<usize, Vec<T>> = BTreeMap::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "length" => {
                    length = Some(value.parse::<usize>().map_err(|e| {
                        Error::Config(format!("line {}: length: {e}", lineno + 1))
                    })?)
                }
                "scheme" => scheme = Some(value.to_string()),
                "scheme_params" => scheme_params = parse_list(value, lineno)?,
                _ => {
                    let (index, field) = parse_profile_key(key)
                        .ok_or_else(|| Error::Config(format!("unknown key `{key}`")))?;
                    match field {
                        "kind" => {
                            kinds.insert(index, value.to_string());
                        }
                        "params" => {
                            params.insert(index, parse_list(value, lineno)?);
                        }
                        _ => return Err(Error::Config(format!("unknown key `{key}`"))),
                    }
                }
            }
        }
        let length = length.ok_or_else(|| Error::Config("missing `length`".into()))?;
        let scheme = CouplingScheme::from_name(scheme.as_deref().unwrap_or("uniform"), &scheme_params)?;
        let mut profiles = Vec::with_capacity(kinds.len());
        for (expected, (index, kind)) in kinds.iter().enumerate() {
            if *index != expected {
                return Err(Error::Config(format!("profiles[{expected}] missing")));
            }
            let p = params.get(index).map(Vec::as_slice).unwrap_or(&[]);
            profiles.push(PotentialProfile::from_kind(kind, p)?);
        }
        if let Some(extra) = params.keys().find(|k| !kinds.contains_key(k)) {
            return Err(Error::Config(format!("profiles[{extra}].params without kind")));
        }
        build_chain(length, &scheme, &profiles)
    }
}

fn parse_list<T: Real>(value: &str, lineno: usize) -> Result<Vec<T>> {
    if value.is_empty() {
        return Ok(vec![]);
    }
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map(T::lit)
                .map_err(|e| Error::Config(format!("line {}: `{}`: {e}", lineno + 1, s.trim())))
        })
        .collect()
}

fn parse_profile_key(key: &str) -> Option<(usize, &str)> {
    let rest = key.strip_prefix("profiles[")?;
    let (index, field) = rest.split_once("].")?;
    Some((index.parse().ok()?, field))
}

/// Build a chain from a coupling scheme and a list of potential profiles.
pub fn build_chain<T: Real>(
    length: usize,
    scheme: &CouplingScheme<T>,
    profiles: &[PotentialProfile<T>],
) -> Result<ChainSpec<T>> {
    if length < 3 {
        return Err(Error::InvalidChain(format!("length {length} < 3")));
    }
    let odd = length % 2 == 1;
    let half = length / 2;
    let center = T::from_usize_lossy(length - 1) * T::lit(0.5);

    let mut couplings = scheme.couplings(length)?;
    let mut potentials = vec![T::zero(); length];
    let mut walls = T::zero();
    let mut has_walls = false;

    for profile in profiles {
        match profile {
            PotentialProfile::CenterImpurity(beta) => {
                if !odd {
                    return Err(Error::ParityMismatch {
                        profile: "center_impurity",
                        expected: "odd",
                        length,
                    });
                }
                potentials[half] += *beta;
            }
            PotentialProfile::CouplingImpurity(eta) => {
                if odd {
                    return Err(Error::ParityMismatch {
                        profile: "coupling_impurity",
                        expected: "even",
                        length,
                    });
                }
                if !(*eta > T::zero()) || *eta > T::one() {
                    return Err(Error::InvalidArgument(format!(
                        "coupling impurity {eta} outside (0, 1]"
                    )));
                }
                couplings[half - 1] *= *eta;
            }
            PotentialProfile::Step(gamma) => {
                let start = half + usize::from(odd);
                for mu in &mut potentials[start..] {
                    *mu += *gamma;
                }
            }
            PotentialProfile::GaussianImpurity { beta, sigma } => {
                if !(*sigma > T::zero()) {
                    return Err(Error::InvalidArgument(format!(
                        "gaussian width {sigma} must be positive"
                    )));
                }
                for (j, mu) in potentials.iter_mut().enumerate() {
                    let x = (T::from_usize_lossy(j) - center) / *sigma;
                    *mu += *beta * (-x * x).exp();
                }
            }
            PotentialProfile::Harmonic(omega) => {
                if *omega < T::zero() {
                    return Err(Error::InvalidArgument(format!(
                        "trap frequency {omega} must be >= 0"
                    )));
                }
                let w2 = *omega * *omega * T::lit(0.5);
                for (j, mu) in potentials.iter_mut().enumerate() {
                    let x = T::from_usize_lossy(j) - center;
                    *mu -= w2 * x * x;
                }
            }
            PotentialProfile::Walls(b) => {
                has_walls = true;
                walls += *b;
            }
            PotentialProfile::Custom(v) => {
                if v.len() != length {
                    return Err(Error::InvalidChain(format!(
                        "custom potential has {} entries, chain has {length}",
                        v.len()
                    )));
                }
                for (mu, add) in potentials.iter_mut().zip(v) {
                    *mu += *add;
                }
            }
        }
    }

    for (index, &value) in couplings.iter().enumerate() {
        if !(value > T::zero()) {
            return Err(Error::NonPositiveCoupling {
                index,
                value: value.as_f64(),
            });
        }
    }
    if potentials.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidChain("non-finite potential".into()));
    }

    let ports = if has_walls {
        couplings.insert(0, T::one());
        couplings.push(T::one());
        potentials.insert(0, walls);
        potentials.push(walls);
        (1, length)
    } else {
        (0, length - 1)
    };

    Ok(ChainSpec {
        couplings,
        potentials,
        ports,
        scheme: scheme.clone(),
        profiles: profiles.to_vec(),
        design_length: length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_impurity_on_middle_site() {
        let spec = build_chain(51, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(0.95)])
            .unwrap();
        assert_eq!(spec.potentials()[25], 0.95);
        assert!(spec.couplings().iter().all(|&j| j == 1.0));
        assert_eq!(spec.potentials().iter().filter(|&&m| m != 0.0).count(), 1);
    }

    #[test]
    fn empty_profile_is_bare_chain() {
        let spec = build_chain::<f64>(5, &CouplingScheme::Uniform, &[]).unwrap();
        assert_eq!(spec.couplings(), &[1.0; 4]);
        assert_eq!(spec.potentials(), &[0.0; 5]);
    }

    #[test]
    fn gaussian_profile_values() {
        let fwhm = 0.66;
        let sigma = sigma_from_fwhm(fwhm);
        assert!((2.0 * sigma * 2f64.ln().sqrt() - fwhm).abs() < 1e-15);
        let spec = build_chain(21, &CouplingScheme::Uniform, &[PotentialProfile::gaussian_fwhm(0.94, fwhm)])
            .unwrap();
        for j in 1..=21usize {
            let expect = 0.94 * (-((11.0 - j as f64).powi(2)) / (sigma * sigma)).exp();
            assert!((spec.potentials()[j - 1] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn parity_is_enforced() {
        let err = build_chain(50, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(1.0)]);
        assert!(matches!(err, Err(Error::ParityMismatch { .. })));
        let err = build_chain(51, &CouplingScheme::Uniform, &[PotentialProfile::CouplingImpurity(0.4)]);
        assert!(matches!(err, Err(Error::ParityMismatch { .. })));
    }

    #[test]
    fn coupling_impurity_scales_middle_bond() {
        let spec = build_chain(10, &CouplingScheme::Uniform, &[PotentialProfile::CouplingImpurity(0.5)])
            .unwrap();
        assert_eq!(spec.couplings()[4], 0.5);
        assert_eq!(spec.couplings().iter().filter(|&&j| j != 1.0).count(), 1);
    }

    #[test]
    fn non_positive_coupling_rejected() {
        let err = build_chain(7, &CouplingScheme::Optimal(0.0), &[]);
        assert!(matches!(err, Err(Error::NonPositiveCoupling { index: 0, .. })));
        let err = build_chain(4, &CouplingScheme::Custom(vec![1.0, -1.0, 1.0]), &[]);
        assert!(matches!(err, Err(Error::NonPositiveCoupling { index: 1, .. })));
    }

    #[test]
    fn schemes_touch_only_boundary_bonds() {
        let spec = build_chain(11, &CouplingScheme::DoubleOptimal(0.4, 0.7), &[]).unwrap();
        let j = spec.couplings();
        assert_eq!((j[0], j[1], j[8], j[9]), (0.4, 0.7, 0.7, 0.4));
        assert!(j[2..8].iter().all(|&x| x == 1.0));
        let spec = build_chain(11, &CouplingScheme::Optimal(0.6), &[]).unwrap();
        assert_eq!(spec.couplings()[0], 0.6);
        assert_eq!(spec.couplings()[9], 0.6);
        assert!(spec.couplings()[1..9].iter().all(|&x| x == 1.0));
    }

    #[test]
    fn step_covers_right_half() {
        let spec = build_chain(7, &CouplingScheme::Uniform, &[PotentialProfile::Step(0.3), PotentialProfile::CenterImpurity(1.0)])
            .unwrap();
        assert_eq!(spec.potentials(), &[0.0, 0.0, 0.0, 1.0, 0.3, 0.3, 0.3]);
    }

    #[test]
    fn walls_extend_chain() {
        let spec = build_chain(5, &CouplingScheme::Uniform, &[PotentialProfile::Walls(3.0), PotentialProfile::CenterImpurity(1.0)])
            .unwrap();
        assert_eq!(spec.len(), 7);
        assert_eq!(spec.design_length(), 5);
        assert_eq!(spec.ports(), (1, 5));
        assert_eq!(spec.potentials(), &[3.0, 0.0, 0.0, 1.0, 0.0, 0.0, 3.0]);
        assert_eq!(spec.couplings(), &[1.0; 6]);
        assert!(spec.has_walls());
    }

    #[test]
    fn harmonic_is_centered() {
        let spec = build_chain(5, &CouplingScheme::Uniform, &[PotentialProfile::Harmonic(0.1f64)]).unwrap();
        let mu = spec.potentials();
        assert_eq!(mu[2], 0.0);
        assert!((mu[0] + 0.01 * 4.0 / 2.0).abs() < 1e-16);
        assert_eq!(mu[1], mu[3]);
    }

    #[test]
    fn kv_round_trip_and_strictness() {
        let spec = build_chain(
            21,
            &CouplingScheme::DoubleOptimal(0.54, 0.81),
            &[PotentialProfile::CenterImpurity(0.94), PotentialProfile::Harmonic(0.03)],
        )
        .unwrap();
        let text = spec.to_kv();
        assert!(text.starts_with("length = 21\nscheme = double_optimal\n"));
        let back = ChainSpec::<f64>::from_kv(&text).unwrap();
        assert_eq!(back, spec);
        assert!(ChainSpec::<f64>::from_kv("length = 5\ncolour = red\n").is_err());
        assert!(ChainSpec::<f64>::from_kv("scheme = uniform\n").is_err());
    }

    #[test]
    fn hamiltonian_sign_convention() {
        let spec = build_chain(3, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(2.0)]).unwrap();
        let h = spec.hamiltonian_dense();
        assert_eq!(h[1][1], -2.0);
        assert_eq!(h[0][1], -0.5);
        assert_eq!(h[2][1], -0.5);
    }

    #[test]
    fn works_in_single_precision() {
        let spec = build_chain(9, &CouplingScheme::Optimal(0.5f32), &[PotentialProfile::CenterImpurity(1.0f32)]).unwrap();
        assert_eq!(spec.potentials()[4], 1.0f32);
    }
}
