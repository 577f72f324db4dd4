// SPDX-License-Identifier: Apache-2.0

use lattice_optics::analytic::{asymptotics_odd, beta5050_law, t_star_formula};
use lattice_optics::calibrate::{
    find_beta5050, find_eta5050, find_tstar, mach_zehnder, optimize_boundary_couplings, transfer_peak, BoundaryVariant,
};
use lattice_optics::imperfect::{curvature_scan, gaussian_width_scan, wall_strength_scan, TstarChoice};
use lattice_optics::manybody::{three_body_scan, weak_interaction_scan, BunchingWindows, Propagator};
use lattice_optics::special::XI;
use lattice_optics::{build_chain, CouplingScheme, Error, PotentialProfile};

#[test]
fn transfer_time_is_insensitive_to_impurity_strength() {
    let t = |beta: f64| {
        find_tstar(&build_chain(51, &CouplingScheme::Uniform, &[PotentialProfile::CenterImpurity(beta)]).unwrap()).unwrap()
    };
    let base = t(1.0);
    for beta in [0.5, 0.8, 1.2] {
        assert!((t(beta) - base).abs() < 1.0, "beta = {beta}");
    }
    assert!((base - t_star_formula(25, XI)).abs() < 1.5);
}

#[test]
fn beta_converges_to_law() {
    let mut prev = f64::INFINITY;
    for l in [51usize, 101, 201] {
        let c = find_beta5050(l, &CouplingScheme::<f64>::Uniform).unwrap();
        let gap = (c.param - beta5050_law::<f64>(l)).abs();
        assert!(gap < prev, "L = {l}");
        prev = gap;
        assert!(c.balance_residual.abs() < 1e-6);
    }
    let a = asymptotics_odd(100, beta5050_law::<f64>(201));
    assert!((a.r_over_t.im - 1.0).abs() < 0.05);
}

#[test]
fn eta_decreases_towards_limit() {
    let etas: Vec<f64> = [20usize, 40, 80]
        .iter()
        .map(|&l| find_eta5050(l, &CouplingScheme::Uniform).unwrap().param)
        .collect();
    let lim = 2f64.sqrt() - 1.0;
    assert!((etas[0] - lim).abs() > (etas[2] - lim).abs());
}

#[test]
fn boundary_couplings_raise_transfer() {
    let uni = transfer_peak(21, &CouplingScheme::<f64>::Uniform);
    let one = optimize_boundary_couplings::<f64>(21, BoundaryVariant::OneCoupling).unwrap();
    let two = optimize_boundary_couplings::<f64>(21, BoundaryVariant::TwoCoupling).unwrap();
    let (p1, p2) = (transfer_peak(21, &one), transfer_peak(21, &two));
    assert!(uni < p1 && p1 <= p2 + 1e-9, "{uni} {p1} {p2}");
}

#[test]
fn mach_zehnder_routes_with_phase() {
    let s = CouplingScheme::Uniform;
    let a = mach_zehnder(21, 0.0, &s).unwrap();
    let b = mach_zehnder(21, std::f64::consts::FRAC_PI_2 - 1e-9, &s).unwrap();
    assert!(a.fraction_last() > b.fraction_last());
    assert!(a.phi_measured.abs() < 1e-6);
    assert!((b.phi_measured - std::f64::consts::FRAC_PI_2).abs() < 0.05);
    assert!(matches!(mach_zehnder(21, 4.0, &s), Err(Error::InvalidArgument(_))));
}

#[test]
fn walls_approach_hard_boundary() {
    let r = wall_strength_scan(21, &[0.5f64, 1e3]).unwrap();
    let hard = find_beta5050(21, &CouplingScheme::Uniform).unwrap();
    assert!(r[1].epsilon.abs() < 1e-3);
    assert!(r[0].epsilon.abs() > r[1].epsilon.abs());
    assert_eq!(r[0].beta_used, hard.param);
}

#[test]
fn curvature_degrades_monotonically() {
    let r = curvature_scan(21, &[0.0f64, 0.03, 0.1]).unwrap();
    assert!(r[0].delta_p.abs() < 1e-12);
    assert!(r[2].delta_p.abs() > r[1].delta_p.abs());
}

#[test]
fn gaussian_recalibration_reduces_imbalance() {
    let plain = gaussian_width_scan(21, &[4.0f64], false, TstarChoice::Baseline).unwrap();
    let fixed = gaussian_width_scan(21, &[4.0f64], true, TstarChoice::Baseline).unwrap();
    assert!(fixed[0].recalibrated);
    assert!(fixed[0].epsilon.abs() <= plain[0].epsilon.abs());
    let per = gaussian_width_scan(21, &[4.0f64], true, TstarChoice::PerSetting).unwrap();
    assert!(per[0].epsilon.is_finite());
    assert!(gaussian_width_scan::<f64>(21, &[0.0], false, TstarChoice::Baseline).is_err());
}

#[test]
fn three_body_scan_limits() {
    let s = CouplingScheme::Uniform;
    assert!(matches!(
        three_body_scan(37, 0.0, &[2], &s, Propagator::Chebyshev),
        Err(Error::SectorTooLarge { .. })
    ));
    assert!(three_body_scan(11, 0.0, &[1], &s, Propagator::Chebyshev).is_err());
    let r = three_body_scan(11, 0.05, &[2, 5, 10], &s, Propagator::Eigen).unwrap();
    for p in &r.points {
        assert!(p.p_11 > 0.0 && p.p_11 <= 2.0);
    }
}

#[test]
fn weak_interaction_stays_flat_on_short_chain() {
    let w = weak_interaction_scan(&[21], &[0.0, 0.05], &CouplingScheme::Uniform, &BunchingWindows::default()).unwrap();
    assert_eq!(w[0].rows.len(), 2);
    assert!(weak_interaction_scan(&[21], &[1.5], &CouplingScheme::Uniform, &BunchingWindows::default()).is_err());
}
