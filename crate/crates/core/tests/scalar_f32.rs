// SPDX-License-Identifier: Apache-2.0

use lattice_optics::calibrate::find_beta5050;
use lattice_optics::manybody::{build_generator, correlation_map, evolve_two_body, FockState, Propagator, Statistics};
use lattice_optics::{build_chain, rt_coefficients, ChainSpecF32, CouplingSchemeF32, EndSpectrum, PotentialProfileF32};

#[test]
fn single_precision_calibration_tracks_double() {
    let c32 = find_beta5050(21, &CouplingSchemeF32::Uniform).unwrap();
    let c64 = find_beta5050(21, &lattice_optics::CouplingSchemeF64::Uniform).unwrap();
    assert!((c32.param as f64 - c64.param).abs() < 1e-3, "{} vs {}", c32.param, c64.param);
    assert!((c32.t_star as f64 - c64.t_star).abs() < 1e-2);
    assert!(c32.balance_residual.abs() < 1e-4);
}

#[test]
fn single_precision_two_body_evolution() {
    let spec: ChainSpecF32 = build_chain(11, &CouplingSchemeF32::Uniform, &[PotentialProfileF32::CenterImpurity(0.9)]).unwrap();
    let g = build_generator(&spec, Statistics::Boson(0.5f32)).unwrap();
    let init = FockState::hom_initial(&g, spec.ports()).unwrap();
    let st = evolve_two_body(&g, &init, 12.0, Propagator::Chebyshev).unwrap();
    assert!((st.norm() - 1.0).abs() < 1e-4);
    let map = correlation_map(&st).unwrap();
    assert!((map.detection_total() - 1.0).abs() < 1e-4);
    let (r, t) = rt_coefficients(&EndSpectrum::from_spec(&spec).unwrap(), 12.0f32);
    assert!(r.norm_sqr() + t.norm_sqr() <= 1.0 + 1e-5);
}
