// SPDX-License-Identifier: Apache-2.0

//! One runner per subcommand. Each resolves its parameters, calls the
//! library and returns a table plus the values it resolved on the way.

use lattice_optics::analytic::{cm_table, mode_set_even, mode_set_odd, Parity};
use lattice_optics::calibrate::{
    calibration_table, find_beta5050, find_eta5050, find_tstar, mach_zehnder, mach_zehnder_table,
    optimize_boundary_couplings, BoundaryVariant, Calibration,
};
use lattice_optics::export::Table;
use lattice_optics::imperfect::{
    curvature_scan, gaussian_width_scan, imbalance_table, wall_strength_scan, ImbalanceReport, TstarChoice,
};
use lattice_optics::manybody::{
    bunching_scan, build_generator, correlation_map, default_u_grid, evolve_two_body, hom_curve, hom_table,
    three_body_scan, weak_interaction_scan, weak_interaction_table, BunchingWindows, FockState, Propagator,
    Statistics,
};
use lattice_optics::spectral::rt_curve;
use lattice_optics::{build_chain, ChainSpec, CouplingScheme, EndSpectrum, PotentialProfile};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{NumOrAuto, Params};
use crate::error::{CliError, Context};
use crate::grid::GridSpec;

type Scheme = CouplingScheme<f64>;

/// Result of one run.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub table: Table,
    /// Values resolved during the run (auto parameters, fits, checks).
    pub resolved: Map<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    RtCurve,
    Calibrate,
    CorrelationMap,
    Hom,
    BunchingTransition,
    WeakU,
    MachZehnder,
    CmTable,
    AnalyticCheck,
    Imperfections,
    ThreeBody,
}

const SCHEME_KEYS: [&str; 2] = ["scheme", "scheme-params"];

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::RtCurve,
        Experiment::Calibrate,
        Experiment::CorrelationMap,
        Experiment::Hom,
        Experiment::BunchingTransition,
        Experiment::WeakU,
        Experiment::MachZehnder,
        Experiment::CmTable,
        Experiment::AnalyticCheck,
        Experiment::Imperfections,
        Experiment::ThreeBody,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::RtCurve => "rt-curve",
            Experiment::Calibrate => "calibrate",
            Experiment::CorrelationMap => "correlation-map",
            Experiment::Hom => "hom",
            Experiment::BunchingTransition => "bunching-transition",
            Experiment::WeakU => "weak-u",
            Experiment::MachZehnder => "mach-zehnder",
            Experiment::CmTable => "cm-table",
            Experiment::AnalyticCheck => "analytic-check",
            Experiment::Imperfections => "imperfections",
            Experiment::ThreeBody => "three-body",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Parameter keys this experiment accepts.
    pub fn keys(self) -> Vec<&'static str> {
        let mut k: Vec<&'static str> = match self {
            Experiment::RtCurve => vec!["L", "beta", "eta", "t-max", "t-step"],
            Experiment::Calibrate => vec!["L", "L-grid", "parity"],
            Experiment::CorrelationMap => vec!["L", "beta", "eta", "stats", "u", "t", "propagator"],
            Experiment::Hom => vec!["L", "beta", "eta", "stats", "u", "t-max", "t-step", "propagator"],
            Experiment::BunchingTransition => vec!["L", "u-grid"],
            Experiment::WeakU => vec!["L", "L-grid", "u-grid"],
            Experiment::MachZehnder => vec!["L", "phi", "phi-grid"],
            Experiment::CmTable => return vec!["L", "beta", "order"],
            Experiment::AnalyticCheck => return vec!["L", "beta", "eta", "t-step"],
            Experiment::Imperfections => return vec!["L", "scan", "grid", "recalibrate", "tstar"],
            Experiment::ThreeBody => vec!["L", "u", "m-grid", "propagator"],
        };
        k.extend(SCHEME_KEYS);
        k
    }

    /// Reject keys that do not apply.
    pub fn check_keys(self, p: &Params) -> Result<(), CliError> {
        let allowed = self.keys();
        let bad: Vec<String> = p.set_keys().into_iter().filter(|k| !allowed.contains(&k.as_str())).collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(format!(
                "{} does not take {}; accepted keys: {}",
                self.name(),
                bad.join(", "),
                allowed.join(", ")
            )))
        }
    }

    pub fn run(self, p: &Params) -> Result<Artifact, CliError> {
        self.check_keys(p)?;
        let mut r = Map::new();
        let table = match self {
            Experiment::RtCurve => rt_curve_run(p, &mut r),
            Experiment::Calibrate => calibrate_run(p, &mut r),
            Experiment::CorrelationMap => correlation_map_run(p, &mut r),
            Experiment::Hom => hom_run(p, &mut r),
            Experiment::BunchingTransition => bunching_run(p, &mut r),
            Experiment::WeakU => weak_u_run(p, &mut r),
            Experiment::MachZehnder => mach_zehnder_run(p, &mut r),
            Experiment::CmTable => cm_table_run(p, &mut r),
            Experiment::AnalyticCheck => analytic_check_run(p, &mut r),
            Experiment::Imperfections => imperfections_run(p, &mut r),
            Experiment::ThreeBody => three_body_run(p, &mut r),
        }?;
        Ok(Artifact { table, resolved: r })
    }
}

fn config<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

fn length(p: &Params, default: Option<usize>) -> Result<usize, CliError> {
    match p.length.or(default) {
        Some(l) if l >= 3 => Ok(l),
        Some(l) => config(format!("L = {l} is too short (need L >= 3)")),
        None => config("L is required"),
    }
}

fn grid_values(g: &GridSpec, key: &str) -> Result<Vec<f64>, CliError> {
    g.values().map_err(|e| CliError::Config(format!("{key}: {e}")))
}

fn grid_integers(g: &GridSpec, key: &str) -> Result<Vec<usize>, CliError> {
    g.integers().map_err(|e| CliError::Config(format!("{key}: {e}")))
}

fn default_grid(text: &str) -> GridSpec {
    GridSpec::Text(text.to_string())
}

/// Lengths from `L-grid`, or the single `L`.
fn lengths(p: &Params, default: &str) -> Result<Vec<usize>, CliError> {
    let ls = match (&p.length_grid, p.length) {
        (Some(_), Some(_)) => return config("give either L or L-grid, not both"),
        (Some(g), None) => grid_integers(g, "L-grid")?,
        (None, Some(l)) => vec![l],
        (None, None) => grid_integers(&default_grid(default), "L-grid")?,
    };
    if let Some(l) = ls.iter().find(|&&l| l < 3) {
        return config(format!("L = {l} is too short (need L >= 3)"));
    }
    Ok(ls)
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// The coupling scheme at length `l`. Optimal schemes without explicit
/// couplings are optimized for `l`.
fn scheme_at(p: &Params, l: usize, default: &str) -> Result<Scheme, CliError> {
    let name = p.scheme.as_deref().unwrap_or(default);
    match (name, &p.scheme_params) {
        ("optimal", None) => {
            optimize_boundary_couplings(l, BoundaryVariant::OneCoupling).context(format!("optimal couplings at L = {l}"))
        }
        ("double_optimal", None) => {
            optimize_boundary_couplings(l, BoundaryVariant::TwoCoupling).context(format!("double-optimal couplings at L = {l}"))
        }
        ("custom", None) => config("scheme custom needs scheme-params (L-1 couplings)"),
        (name, params) => Ok(CouplingScheme::from_name(name, params.as_deref().unwrap_or(&[]))?),
    }
}

fn scheme(p: &Params, l: usize, default: &str, r: &mut Map<String, Value>) -> Result<Scheme, CliError> {
    let s = scheme_at(p, l, default)?;
    record_scheme(&s, r);
    Ok(s)
}

fn record_scheme(s: &Scheme, r: &mut Map<String, Value>) {
    r.insert("scheme".into(), json!(s.name()));
    r.insert("scheme_params".into(), Value::Array(s.params().into_iter().map(num).collect()));
}

/// A splitter chain: center impurity `β` (odd `L`) or middle bond `η`
/// (even `L`), either given or calibrated to 50/50.
struct Splitter {
    spec: ChainSpec<f64>,
    t_star: f64,
}

fn splitter(p: &Params, l: usize, scheme: &Scheme, r: &mut Map<String, Value>) -> Result<Splitter, CliError> {
    let odd = l % 2 == 1;
    let (key, given, other) = if odd { ("beta", &p.beta, &p.eta) } else { ("eta", &p.eta, &p.beta) };
    if other.is_some() {
        let wrong = if odd { "eta" } else { "beta" };
        return config(format!("{wrong} does not apply to L = {l}; use {key}"));
    }
    let value = given.as_ref().unwrap_or(&NumOrAuto::Text("auto".into())).value(key)?;
    let (spec, t_star) = match value {
        None => {
            let cal: Calibration<f64> = if odd {
                find_beta5050(l, scheme).context(format!("beta auto at L = {l}"))?
            } else {
                find_eta5050(l, scheme).context(format!("eta auto at L = {l}"))?
            };
            r.insert(key.into(), num(cal.param));
            r.insert(format!("{key}_source"), json!("calibrated 50/50"));
            r.insert("balance_residual".into(), num(cal.balance_residual));
            (cal.chain()?, cal.t_star)
        }
        Some(x) => {
            let profile = if odd { PotentialProfile::CenterImpurity(x) } else { PotentialProfile::CouplingImpurity(x) };
            let spec = build_chain(l, scheme, &[profile])?;
            r.insert(key.into(), num(x));
            r.insert(format!("{key}_source"), json!("given"));
            let t = find_tstar(&spec).context(format!("transfer time at L = {l}"))?;
            (spec, t)
        }
    };
    r.insert("t_star".into(), num(t_star));
    Ok(Splitter { spec, t_star })
}

/// `0, dt, 2dt, …` up to `t_max`.
fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>, CliError> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return config(format!("t-max = {t_max} must be positive"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return config(format!("t-step = {dt} must be positive"));
    }
    let n = (t_max / dt + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return config("time grid exceeds 10^6 points");
    }
    Ok((0..=n).map(|i| i as f64 * dt).collect())
}

fn statistics(p: &Params) -> Result<Statistics<f64>, CliError> {
    let name = p.stats.as_deref().unwrap_or("boson");
    let stats = Statistics::parse(name, p.u.unwrap_or(0.0))?;
    if !matches!(stats, Statistics::Boson(_)) && p.u.is_some() {
        return config(format!("u applies to bosons only, not {name}"));
    }
    Ok(stats)
}

fn propagator(p: &Params) -> Result<Propagator, CliError> {
    match p.propagator.as_deref().unwrap_or("chebyshev") {
        "chebyshev" => Ok(Propagator::Chebyshev),
        "eigen" => Ok(Propagator::Eigen),
        other => config(format!("unknown propagator '{other}' (chebyshev | eigen)")),
    }
}

fn append_column(t: &mut Table, name: &str, values: impl IntoIterator<Item = String>) {
    t.columns.push(name.to_string());
    for (row, v) in t.rows.iter_mut().zip(values) {
        row.push(v);
    }
}

fn rt_curve_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let l = length(p, None)?;
    let s = scheme(p, l, "uniform", r)?;
    let sp = splitter(p, l, &s, r)?;
    let times = time_grid(p.t_max.unwrap_or(2.0 * sp.t_star), p.t_step.unwrap_or(0.1))?;
    let ends = EndSpectrum::from_spec(&sp.spec)?;
    let mut t = Table::new(&["t", "abs_R", "abs_T", "arg_R_over_T"]);
    for (time, rr, tt) in rt_curve(&ends, &times) {
        t.push([time, rr.norm(), tt.norm(), (rr * tt.conj()).arg()]);
    }
    Ok(t)
}

fn calibrate_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let odd = match p.parity.as_deref().unwrap_or("odd") {
        "odd" => true,
        "even" => false,
        other => return config(format!("parity must be odd or even, got '{other}'")),
    };
    let ls: Vec<usize> = lengths(p, "11:51")?.into_iter().filter(|l| (l % 2 == 1) == odd).collect();
    if ls.is_empty() {
        return config("no length of the requested parity in the grid");
    }
    let rows: Vec<Calibration<f64>> = ls
        .par_iter()
        .map(|&l| {
            let s = scheme_at(p, l, "uniform")?;
            let c = if odd { find_beta5050(l, &s) } else { find_eta5050(l, &s) };
            c.context(format!("L = {l}"))
        })
        .collect::<Result<_, _>>()?;
    r.insert("parity".into(), json!(if odd { "odd" } else { "even" }));
    r.insert("points".into(), json!(rows.len()));
    let mut t = calibration_table(&rows);
    append_column(
        &mut t,
        "scheme_params",
        rows.iter().map(|c| c.scheme.params().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")),
    );
    Ok(t)
}

fn correlation_map_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let l = length(p, None)?;
    let s = scheme(p, l, "uniform", r)?;
    let stats = statistics(p)?;
    let prop = propagator(p)?;
    let sp = splitter(p, l, &s, r)?;
    let t = match p.t {
        Some(t) if t.is_finite() && t >= 0.0 => t,
        Some(t) => return config(format!("t = {t} must be >= 0")),
        None => 0.75 * sp.t_star,
    };
    let g = build_generator(&sp.spec, stats)?;
    let init = FockState::hom_initial(&g, sp.spec.ports())?;
    let st = evolve_two_body(&g, &init, t, prop).context(format!("evolution to t = {t}"))?;
    let map = correlation_map(&st)?;
    r.insert("t".into(), num(t));
    r.insert("stats".into(), json!(stats.name()));
    r.insert("same_side_ratio".into(), num(map.same_side_ratio()));
    r.insert("detection_total".into(), num(map.detection_total()));
    Ok(map.to_table())
}

fn hom_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let l = length(p, None)?;
    let s = scheme(p, l, "uniform", r)?;
    let stats = statistics(p)?;
    let prop = propagator(p)?;
    let sp = splitter(p, l, &s, r)?;
    let times = time_grid(p.t_max.unwrap_or(1.5 * sp.t_star), p.t_step.unwrap_or(0.5))?;
    let pts = hom_curve(&sp.spec, stats, &times, prop).context("two-particle evolution")?;
    r.insert("stats".into(), json!(stats.name()));
    Ok(hom_table(&pts))
}

fn bunching_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let l = length(p, Some(51))?;
    let s = scheme(p, l, "uniform", r)?;
    let us = match &p.u_grid {
        Some(g) => grid_values(g, "u-grid")?,
        None => default_u_grid(),
    };
    let scan = bunching_scan(l, &s, &us, &BunchingWindows::default()).context(format!("bunching scan at L = {l}"))?;
    r.insert("uc".into(), num(scan.uc));
    r.insert("fit_slope".into(), num(scan.fit_slope));
    r.insert("fit_intercept".into(), num(scan.fit_intercept));
    r.insert("tail_points".into(), json!(scan.tail_points));
    r.insert("reference_beta".into(), num(scan.reference.beta_opt));
    r.insert("reference_t".into(), num(scan.reference.t_opt));
    r.insert("reference_P_LL".into(), num(scan.reference.p_ll));
    Ok(scan.to_table())
}

fn weak_u_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let ls = lengths(p, "21:51:10")?;
    let us = grid_values(p.u_grid.as_ref().unwrap_or(&default_grid("0:0.2:0.02")), "u-grid")?;
    let mut scans = Vec::with_capacity(ls.len());
    for &l in &ls {
        let s = scheme_at(p, l, "uniform")?;
        let mut one = weak_interaction_scan(&[l], &us, &s, &BunchingWindows::default())
            .context(format!("weak-interaction scan at L = {l}"))?;
        scans.append(&mut one);
    }
    let thresholds: Map<String, Value> =
        scans.iter().map(|w| (w.length.to_string(), w.threshold.map_or(Value::Null, num))).collect();
    r.insert("threshold".into(), Value::Object(thresholds));
    Ok(weak_interaction_table(&scans))
}

fn mach_zehnder_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let l = length(p, Some(51))?;
    let s = scheme(p, l, "double_optimal", r)?;
    let phis = match (p.phi, &p.phi_grid) {
        (Some(_), Some(_)) => return config("give either phi or phi-grid, not both"),
        (Some(x), None) => vec![x],
        (None, Some(g)) => grid_values(g, "phi-grid")?,
        (None, None) => grid_values(&default_grid("0:1.5:0.1"), "phi-grid")?,
    };
    let rows: Vec<_> = phis
        .par_iter()
        .map(|&phi| mach_zehnder(l, phi, &s).context(format!("phi = {phi}")))
        .collect::<Result<_, _>>()?;
    if let Some(m) = rows.first() {
        r.insert("t_star".into(), num(m.t_star));
    }
    let mut t = mach_zehnder_table(&rows);
    append_column(&mut t, "phi_measured", rows.iter().map(|m| m.phi_measured.to_string()));
    append_column(&mut t, "beta", rows.iter().map(|m| m.beta.to_string()));
    append_column(&mut t, "fraction_L", rows.iter().map(|m| m.fraction_last().to_string()));
    Ok(t)
}

fn cm_table_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let beta = match p.beta.as_ref().map(|b| b.value("beta")).transpose()?.flatten() {
        Some(b) => b,
        None => {
            let l = match p.length {
                Some(l) if l % 2 == 1 && l >= 3 => l,
                Some(l) => return config(format!("beta auto needs an odd L >= 3, got {l}")),
                None => return config("cm-table needs beta, or L to calibrate it"),
            };
            let s = scheme(p, l, "uniform", r)?;
            let c = find_beta5050(l, &s).context(format!("beta auto at L = {l}"))?;
            r.insert("beta_source".into(), json!("calibrated 50/50"));
            c.param
        }
    };
    let order = p.order.unwrap_or(6);
    let table = cm_table(beta, order)?;
    r.insert("beta".into(), num(beta));
    r.insert("max_closed_quadrature_gap".into(), num(table.max_closed_quadrature_gap()));
    Ok(table.to_table())
}

fn analytic_check_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let l = length(p, None)?;
    let s = scheme(p, l, "uniform", r)?;
    if s != CouplingScheme::Uniform {
        return config("analytic-check covers the uniform chain only");
    }
    let sp = splitter(p, l, &s, r)?;
    let param = match sp.spec.profiles().first() {
        Some(PotentialProfile::CenterImpurity(x)) | Some(PotentialProfile::CouplingImpurity(x)) => *x,
        _ => unreachable!("splitter chains carry one impurity"),
    };
    let ms = if l % 2 == 1 { mode_set_odd((l - 1) / 2, param) } else { mode_set_even(l / 2, param) }
        .context("analytic modes")?;
    let mut analytic: Vec<(&str, String, f64, f64)> = vec![];
    for (q, w) in ms.type1_momenta.iter().zip(&ms.weights1) {
        analytic.push(("I", q.to_string(), q.cos(), *w));
    }
    for (q, w) in ms.type2_momenta.iter().zip(&ms.weights2) {
        analytic.push(("II", q.to_string(), q.cos(), *w));
    }
    if let Some(e) = ms.out_of_band_energy {
        analytic.push(("oob", String::new(), e, ms.out_of_band_weight));
    }
    analytic.sort_by(|a, b| a.2.total_cmp(&b.2));
    let ends = EndSpectrum::from_spec(&sp.spec)?;
    let mut numeric: Vec<(f64, f64)> = ends.energies.iter().zip(&ends.first).map(|(&e, &o)| (e, o * o)).collect();
    numeric.sort_by(|a, b| a.0.total_cmp(&b.0));
    if numeric.len() != analytic.len() {
        return config(format!("mode count {} differs from L = {l}", analytic.len()));
    }
    let mut t = Table::new(&["k", "family", "q_k", "E_analytic", "E_numeric", "abs_diff", "weight_analytic", "weight_numeric"]);
    let (mut de, mut dw) = (0.0f64, 0.0f64);
    for (k, ((fam, q, e, w), (en, wn))) in analytic.iter().zip(&numeric).enumerate() {
        de = de.max((e - en).abs());
        dw = dw.max((w - wn).abs());
        t.push([
            (k + 1).to_string(),
            fam.to_string(),
            q.clone(),
            e.to_string(),
            en.to_string(),
            (e - en).abs().to_string(),
            w.to_string(),
            wn.to_string(),
        ]);
    }
    let mut dev = 0.0f64;
    for time in time_grid(2.0 * sp.t_star, p.t_step.unwrap_or(0.5))? {
        let (ra, ta) = ms.reconstruct_rt(time);
        let (rn, tn) = lattice_optics::rt_coefficients(&ends, time);
        dev = dev.max((ra - rn).norm()).max((ta - tn).norm());
    }
    r.insert("parity".into(), json!(if ms.parity == Parity::Odd { "odd" } else { "even" }));
    r.insert("max_energy_diff".into(), num(de));
    r.insert("max_weight_diff".into(), num(dw));
    r.insert("max_equation_residual".into(), num(ms.max_equation_residual()));
    r.insert("total_weight".into(), num(ms.total_weight()));
    r.insert("out_of_band_weight".into(), num(ms.out_of_band_weight));
    r.insert("max_rt_reconstruction_diff".into(), num(dev));
    Ok(t)
}

fn imperfections_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let l = length(p, Some(51))?;
    if l % 2 == 0 {
        return config(format!("imperfection scans need an odd L, got {l}"));
    }
    let scan = p.scan.as_deref().unwrap_or("gaussian");
    if scan != "gaussian" && (p.recalibrate.is_some() || p.tstar.is_some()) {
        return config("recalibrate and tstar apply to the gaussian scan only");
    }
    let default = match scan {
        "gaussian" => "0.5:8:0.5",
        "walls" => "1:10:1",
        "curvature" => "0:0.05:0.01",
        other => return config(format!("scan must be gaussian, walls or curvature, got '{other}'")),
    };
    let grid = grid_values(p.grid.as_ref().unwrap_or(&default_grid(default)), "grid")?;
    let rows: Vec<ImbalanceReport<f64>> = match scan {
        "gaussian" => {
            let tstar = match p.tstar.as_deref().unwrap_or("baseline") {
                "baseline" => TstarChoice::Baseline,
                "per-setting" => TstarChoice::PerSetting,
                other => return config(format!("tstar must be baseline or per-setting, got '{other}'")),
            };
            gaussian_width_scan(l, &grid, p.recalibrate.unwrap_or(false), tstar)
        }
        "walls" => wall_strength_scan(l, &grid),
        _ => curvature_scan(l, &grid),
    }
    .context(format!("{scan} scan"))?;
    if let Some(x) = rows.first() {
        r.insert("parameter".into(), json!(x.parameter_name));
    }
    let mut t = imbalance_table(&rows);
    append_column(&mut t, "t_star", rows.iter().map(|x| x.t_star.to_string()));
    append_column(&mut t, "delta_P", rows.iter().map(|x| x.delta_p.to_string()));
    Ok(t)
}

fn three_body_run(p: &Params, r: &mut Map<String, Value>) -> Result<Table, CliError> {
    let l = length(p, Some(21))?;
    let s = scheme(p, l, "uniform", r)?;
    let u = p.u.unwrap_or(0.0);
    let ms = match &p.m_grid {
        Some(g) => grid_integers(g, "m-grid")?,
        None => (2..l).collect(),
    };
    let scan = three_body_scan(l, u, &ms, &s, propagator(p)?).context(format!("three-body scan at L = {l}"))?;
    r.insert("beta".into(), num(scan.beta));
    r.insert("t_star".into(), num(scan.t_star));
    r.insert("relative_spread".into(), num(scan.relative_spread()));
    Ok(scan.to_table())
}
