use anyhow::{bail, Context, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use orlicz_lab::cech::{bicomplex_identity_report, zigzag_report, BicomplexOptions, CoverNerve, CoverSpec};
use orlicz_lab::forms::{
    bourdon_example, cone_homotopy, verify_poincare, AnalyticForm, BourdonParams, ChartedDomain, DiscreteForm,
    Grid, PoincareOptions,
};
use orlicz_lab::group::{
    cartan_identity_check, derivative_commutation_check, operator_ratios, pointwise_bound_check,
    relative_preservation, GroupModel, Kernel,
};
use orlicz_lab::orlicz::{luxemburg_norm, MeasureSpace, YoungFunction};
use orlicz_lab::qi::{build_chain_map, verify_quasi_isometry, verify_relative, FillOptions, QuasiIsometry};
use orlicz_lab::simplicial::{
    cochain_norm, cohomology_dims, delta_continuity_report, euler_characteristic, harmonic_basis,
    reduced_representative, BoundaryPointModel, Cochain, ComplexSpec, ReducedOptions,
};

use crate::complexes::parse_complex;
use crate::report::{Check, Outcome, Series};

/// Run-wide settings shared by all scenarios.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunContext {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

impl RunContext {
    fn rng(&self, scenario: &str) -> Result<ChaCha8Rng> {
        match self.seed {
            Some(s) => Ok(ChaCha8Rng::seed_from_u64(s)),
            None => bail!("scenario '{scenario}' is randomized and needs --seed"),
        }
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

fn phi_of(spec: &Option<String>, default: &str) -> Result<YoungFunction> {
    let s = spec.as_deref().unwrap_or(default);
    s.parse().with_context(|| format!("parsing Young function '{s}'"))
}

const SOLVER_TOL: f64 = 1e-12;

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormArgs {
    /// Young function, e.g. `power:2` or `log:2,2`.
    #[arg(long)]
    pub phi: Option<String>,
    /// Function values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,
    /// Atom weights (counting measure when omitted).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
}

pub fn norm(a: &NormArgs, ctx: &RunContext) -> Result<Outcome> {
    let phi = phi_of(&a.phi, "power:2")?;
    let values = a.values.clone().context("norm needs --values")?;
    let space = match &a.weights {
        Some(w) => MeasureSpace::from_weights(w)?,
        None => MeasureSpace::counting(values.len()),
    };
    let r = luxemburg_norm(&phi, &values, &space, SOLVER_TOL)?;
    let mut checks = vec![Check::at_most("modular_at_norm", r.modular_at_value, 1.0 + 1e-12)];
    if phi.is_quadratic() {
        let w = space.weights();
        let e: f64 = values.iter().zip(&w).map(|(v, w)| w * v * v).sum::<f64>().sqrt();
        let err = if e > 0.0 { (r.value() - e).abs() / e } else { r.value() };
        checks.push(Check::at_most("matches_euclidean", err, ctx.tol_or(1e-9)));
    }
    Ok(Outcome {
        values: json!({ "phi": phi.to_string(), "value": r.value(), "divergent": r.is_divergent(),
            "iterations": r.iterations, "modular_at_value": r.modular_at_value }),
        checks,
        series: None,
    })
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CohomologyArgs {
    /// Complex, e.g. `torus7`, `cycle:6`, `random:40,4,3,1`.
    #[arg(long)]
    pub complex: Option<String>,
    #[arg(long)]
    pub phi: Option<String>,
    /// Random cochains per degree for the continuity check.
    #[arg(long)]
    pub trials: Option<usize>,
}

pub fn cohomology(a: &CohomologyArgs, ctx: &RunContext) -> Result<Outcome> {
    let spec = parse_complex(a.complex.as_deref().unwrap_or("torus7"))?;
    let x = spec.build()?;
    let phi = phi_of(&a.phi, "power:2")?;
    let mut rng = ctx.rng("cohomology")?;
    let dims: Vec<usize> = (0..=x.dim()).map(|k| cohomology_dims(&x, k)).collect::<Result<_, _>>()?;
    let counts: Vec<usize> = (0..=x.dim()).map(|k| x.count(k)).collect();
    let chi = euler_characteristic(&x);
    let betti_chi: i64 = dims.iter().enumerate().map(|(k, d)| if k % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum();
    let cont = delta_continuity_report(&phi, &x, a.trials.unwrap_or(20), &mut rng, SOLVER_TOL)?;
    Ok(Outcome {
        values: json!({ "complex": spec, "counts": counts, "dims": dims, "euler_characteristic": chi,
            "continuity": cont }),
        checks: vec![
            Check::holds("euler_matches_betti", chi == betti_chi),
            Check::holds("delta_squared_zero", cont.delta_squared_zero),
            Check::at_most("continuity_violations", cont.violations as f64, 0.0),
        ],
        series: None,
    })
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReducedArgs {
    #[arg(long)]
    pub complex: Option<String>,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub degree: Option<usize>,
}

/// Hides a harmonic class behind a random coboundary and recovers a
/// norm-minimising representative.
pub fn reduced(a: &ReducedArgs, ctx: &RunContext) -> Result<Outcome> {
    let spec = parse_complex(a.complex.as_deref().unwrap_or("cycle:8"))?;
    let x = spec.build()?;
    let phi = phi_of(&a.phi, "power:3")?;
    let k = a.degree.unwrap_or(1);
    let mut rng = ctx.rng("reduced")?;
    let basis = harmonic_basis(&x, k)?;
    let Some(z) = basis.cocycles.first() else { bail!("the complex has no degree-{k} cohomology") };
    let theta = if k == 0 {
        z.clone()
    } else {
        let eta = Cochain { degree: k - 1, values: (0..x.count(k - 1)).map(|_| rng.random_range(-1.0..1.0)).collect() };
        z.add(&x.coboundary(&eta)?)
    };
    let r = reduced_representative(&phi, &x, &theta, &ReducedOptions::default())?;
    let rep = if k == 0 { theta.clone() } else { theta.sub(&x.coboundary(&r.eta)?) };
    let (before, _) = basis.coordinates(&x, &theta)?;
    let (after, off) = basis.coordinates(&x, &rep)?;
    let drift = before.iter().zip(&after).map(|(a, b)| (a - b).abs()).fold(off, f64::max);
    let theta_norm = cochain_norm(&phi, &theta, SOLVER_TOL);
    let harmonic_norm = cochain_norm(&phi, z, SOLVER_TOL);
    let tol = ctx.tol_or(1e-6);
    Ok(Outcome {
        values: json!({ "complex": spec, "degree": k, "phi": phi.to_string(), "theta_norm": theta_norm,
            "harmonic_norm": harmonic_norm, "reduced_norm": r.residual, "iterations": r.iterations,
            "class_drift": drift }),
        checks: vec![
            Check::at_most("class_preserved", drift, 1e-8),
            Check::at_most("not_above_input", r.residual / theta_norm, 1.0 + tol),
            Check::at_most("not_above_harmonic", r.residual / harmonic_norm, 1.0 + tol),
        ],
        series: None,
    })
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QiArgs {
    /// Source complex (cycles and paths get a rounding map automatically).
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
    /// Explicit vertex map source → target.
    #[arg(long, value_delimiter = ',')]
    pub map: Option<Vec<usize>>,
    /// Explicit quasi-inverse target → source.
    #[arg(long, value_delimiter = ',')]
    pub inverse: Option<Vec<usize>>,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
}

fn rounding_map(x: &ComplexSpec, y: &ComplexSpec) -> Result<(Vec<usize>, Option<Vec<usize>>)> {
    let scale = |n: usize, m: usize, cyclic: bool| -> Vec<usize> {
        (0..n)
            .map(|i| {
                if cyclic {
                    ((m * i) as f64 / n as f64).round() as usize % m
                } else {
                    ((m - 1) as f64 * i as f64 / (n - 1).max(1) as f64).round() as usize
                }
            })
            .collect()
    };
    match (x, y) {
        (ComplexSpec::Cycle { n }, ComplexSpec::Cycle { n: m }) => Ok((scale(*n, *m, true), Some(scale(*m, *n, true)))),
        (ComplexSpec::Path { n }, ComplexSpec::Path { n: m }) => Ok((scale(*n, *m, false), None)),
        _ => bail!("no automatic map between these complexes; pass --map"),
    }
}

pub fn qi_check(a: &QiArgs, ctx: &RunContext) -> Result<Outcome> {
    let xs = parse_complex(a.source.as_deref().unwrap_or("cycle:6"))?;
    let ys = parse_complex(a.target.as_deref().unwrap_or("cycle:10"))?;
    let (x, y) = (xs.build()?, ys.build()?);
    let (map, inverse) = match &a.map {
        Some(m) => (m.clone(), a.inverse.clone()),
        None => rounding_map(&xs, &ys)?,
    };
    let phi = phi_of(&a.phi, "power:2")?;
    let mut rng = ctx.rng("qi-check")?;
    let tol = ctx.tol_or(1e-9);
    let f = QuasiIsometry::measure(&x, &y, map, inverse)?;
    let r = verify_quasi_isometry(&f, &x, &y, &phi, &FillOptions::default(), a.trials.unwrap_or(50), &mut rng, 1e-10)?;
    let mut checks = vec![
        Check::at_most("commutation_defects", r.commutation_defects as f64, 0.0),
        Check::at_most("prism_defects", r.prism_defects as f64, 0.0),
        Check::at_most("induced_identity_error", r.identity_error, tol),
        Check::holds("homotopy_formula_exact", r.homotopy_formula_exact),
        Check::holds("choice_independent", r.choice_independent),
        Check::holds(
            "pullback_bounds",
            r.pullback_bounds.iter().all(|b| b.violations == 0 && b.commutes_with_delta),
        ),
    ];
    let mut values = json!({ "source": xs, "target": ys, "report": r });
    if let (ComplexSpec::Path { n }, ComplexSpec::Path { n: m }) = (&xs, &ys) {
        let c = build_chain_map(&f, &x, &y, 1, &FillOptions::default())?;
        let xi_x = BoundaryPointModel::new(&x, (0..*n).collect())?;
        let xi_y = BoundaryPointModel::new(&y, (0..*m).collect())?;
        let rel = verify_relative(&c, &x, &xi_x, &y, &xi_y, (*m / 2) as f64, 20, &mut rng)?;
        checks.push(Check::holds("relative_preserved", rel.preserved && rel.masked_source > 0));
        values["relative"] = serde_json::to_value(&rel)?;
    }
    Ok(Outcome { values, checks, series: None })
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoincareArgs {
    /// Samples per axis on the square around the unit disc.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub t_nodes: Option<usize>,
    #[arg(long)]
    pub phi: Option<String>,
}

pub fn poincare(a: &PoincareArgs, ctx: &RunContext) -> Result<Outcome> {
    let ball = ChartedDomain::unit_ball(2, a.grid.unwrap_or(64))?;
    let phi = phi_of(&a.phi, "power:2")?;
    let opts = PoincareOptions { t_nodes: a.t_nodes.unwrap_or(32), ..PoincareOptions::default() };
    let tol = ctx.tol_or(1e-2);
    let one = AnalyticForm::new(2, 1, |p, o| {
        let (x, y) = (p[0], p[1]);
        o[0] = x * x * x - 2.0 * x * y * y + y;
        o[1] = x * x * y + 3.0 * y * y * y - x;
    });
    let two = AnalyticForm::new(2, 2, |p, o| o[0] = 1.0 + p[0] * p[1] * p[1] - p[0] * p[0] * p[0]);
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    for omega in [&one, &two] {
        let r = verify_poincare(&phi, omega, &ball, &opts, SOLVER_TOL)?;
        checks.push(Check::at_most(&format!("homotopy_identity_degree_{}", r.degree), r.residual, tol));
        reports.push(r);
    }
    let f = |p: &[f64]| p[0] * p[0] * p[1] - 2.0 * p[1] * p[1] * p[1] + p[0];
    let df = AnalyticForm::new(2, 1, |p, o| {
        o[0] = 2.0 * p[0] * p[1] + 1.0;
        o[1] = p[0] * p[0] - 6.0 * p[1] * p[1];
    });
    let x = [0.2, -0.1];
    let chi = cone_homotopy(&df, &x, &ball, opts.t_nodes)?;
    let cone = ball.region_indices().into_iter().map(|i| (chi.at(i)[0] - (f(&ball.grid.point(i)) - f(&x))).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("cone_recovers_differences", cone, 1e-3));
    Ok(Outcome { values: json!({ "reports": reports, "cone_error": cone }), checks, series: None })
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZigzagArgs {
    /// Only `torus` is supported.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Cover boxes per axis.
    #[arg(long)]
    pub per_axis: Option<usize>,
    /// Box overlap as a fraction of the box width.
    #[arg(long)]
    pub overlap: Option<f64>,
    #[arg(long)]
    pub phi: Option<String>,
    /// Also measure the bicomplex identities (randomized; needs --seed).
    #[arg(long)]
    pub identities: Option<bool>,
}

pub fn zigzag(a: &ZigzagArgs, ctx: &RunContext) -> Result<Outcome> {
    let model = a.model.as_deref().unwrap_or("torus");
    if model != "torus" {
        bail!("zigzag supports the flat torus model only, got '{model}'");
    }
    let d = ChartedDomain::flat_torus(2, a.grid.unwrap_or(128))?;
    let spec = CoverSpec::uniform(&d.grid, a.per_axis.unwrap_or(4), a.overlap.unwrap_or(0.25));
    let cover = CoverNerve::build(&d, &spec)?;
    let phi = phi_of(&a.phi, "power:2")?;
    let opts = BicomplexOptions::default();
    let tol = ctx.tol_or(1e-2);
    let r = zigzag_report(&cover, &phi, &opts)?;
    let mut checks = vec![
        Check::at_least("h1_dim", r.h1_dim as f64, 1.0),
        Check::at_most("form_closedness", r.max_form_closedness, tol),
        Check::at_most("cochain_coboundary", r.max_cochain_coboundary, tol),
        Check::at_least("normalized_det", r.normalized_det.abs(), 0.5),
        Check::at_most("roundtrip", r.max_roundtrip_residual, tol),
    ];
    let mut values = json!({ "nerve_counts": (0..=cover.nerve.dim()).map(|l| cover.nerve.count(l)).collect::<Vec<_>>(),
        "h1_dim": r.h1_dim, "period_matrix": r.period_matrix, "normalized_period_matrix": r.normalized_period_matrix,
        "normalized_det": r.normalized_det, "form_closedness": r.max_form_closedness,
        "cochain_coboundary": r.max_cochain_coboundary, "roundtrip": r.max_roundtrip_residual });
    if a.identities.unwrap_or(false) {
        let seed = ctx.seed.context("the identity check is randomized and needs --seed")?;
        let b = bicomplex_identity_report(&cover, &phi, &opts, seed)?;
        checks.push(Check::holds("bicomplex_identities", b.passes(1e-8, tol)));
        values["bicomplex"] = serde_json::to_value(&b)?;
    }
    Ok(Outcome { values, checks, series: None })
}

fn group_setup(model: Option<&str>, n: usize) -> Result<(GroupModel, Grid)> {
    match model.unwrap_or("affine") {
        "flat" => Ok((GroupModel::Abelian { dim: 2 }, Grid::new(vec![-1.0, -1.0], vec![1.0, 1.0], vec![n, n], vec![false; 2])?)),
        "affine" => Ok((GroupModel::AffineHalfPlane, Grid::new(vec![-1.0, 1.0], vec![1.0, 3.0], vec![n, n], vec![false; 2])?)),
        other => bail!("unknown group model '{other}' (flat | affine)"),
    }
}

fn generic_form() -> (AnalyticForm, AnalyticForm) {
    let w = AnalyticForm::new(2, 1, |p, o| {
        o[0] = (-p[0] * p[0]).exp() * p[1].sin();
        o[1] = (p[0] * p[1]).cos();
    });
    let dw = AnalyticForm::new(2, 2, |p, o| {
        let (x, y) = (p[0], p[1]);
        o[0] = -y * (x * y).sin() - (-x * x).exp() * y.cos();
    });
    (w, dw)
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvolveArgs {
    /// `flat` or `affine`.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Kernel quadrature nodes per axis.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Random forms for the operator-norm ratios.
    #[arg(long)]
    pub forms: Option<usize>,
    #[arg(long)]
    pub phi: Option<String>,
}

pub fn convolve(a: &ConvolveArgs, ctx: &RunContext) -> Result<Outcome> {
    let n = a.grid.unwrap_or(64);
    let (model, grid) = group_setup(a.model.as_deref(), n)?;
    let radius = a.radius.unwrap_or(0.25);
    let kernel = Kernel::bump(model, radius, a.nodes.unwrap_or(16))?;
    let phi = phi_of(&a.phi, "power:2")?;
    let seed = ctx.rng("convolve")?.random::<u64>();
    let tol = ctx.tol_or(1e-2);
    let (w, _) = generic_form();
    let bound = pointwise_bound_check(&kernel, &w, &grid)?;
    let comm = derivative_commutation_check(&kernel, &w, None, &grid)?;
    let (_, coarse) = group_setup(a.model.as_deref(), 32)?;
    let small = Kernel::bump(model, radius, 8)?;
    let ratios = operator_ratios(&phi, &small, &coarse, 1, a.forms.unwrap_or(100), 4, 6, seed)?;
    let finite = ratios.convolution_ratios.iter().chain(&ratios.homotopy_ratios).chain(&ratios.piecewise_ratios).all(|v| v.is_finite());
    let mut checks = vec![
        Check::at_most("pointwise_bound_violations", bound.violations as f64, 0.0),
        Check::at_most("derivative_commutation", comm.residual, tol),
        Check::holds("ratios_finite", finite),
    ];
    let mut values = json!({ "kernel_mass_check": kernel.normalization_check(), "pointwise": bound,
        "commutation": comm, "max_convolution_ratio": ratios.max_convolution_ratio,
        "max_homotopy_ratio": ratios.max_homotopy_ratio, "max_piecewise_ratio": ratios.max_piecewise_ratio });
    if matches!(model, GroupModel::AffineHalfPlane) {
        let step = |s: f64| if s <= 0.0 { 0.0 } else { (-1.0 / s).exp() };
        let cut = AnalyticForm::new(2, 1, move |p, o| {
            o[0] = step(1.6 - p[1]) * p[0].cos();
            o[1] = step(1.6 - p[1]) * p[1];
        });
        let sampled = DiscreteForm::sample(&grid, &cut)?;
        let rel = relative_preservation(&Kernel::bump(model, radius.min(0.2), 8)?, &sampled, 1.6, 6)?;
        checks.push(Check::holds("relative_preserved", rel.preserved));
        values["relative"] = serde_json::to_value(&rel)?;
    }
    let mut series = Series::new(&["form", "convolution_ratio", "homotopy_ratio", "piecewise_ratio"]);
    for i in 0..ratios.forms {
        series.rows.push(vec![i as f64, ratios.convolution_ratios[i], ratios.homotopy_ratios[i], ratios.piecewise_ratios[i]]);
    }
    Ok(Outcome { values, checks, series: Some(series) })
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CartanArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub t_nodes: Option<usize>,
    #[arg(long)]
    pub phi: Option<String>,
}

pub fn cartan(a: &CartanArgs, ctx: &RunContext) -> Result<Outcome> {
    let (model, grid) = group_setup(a.model.as_deref(), a.grid.unwrap_or(128))?;
    let kernel = Kernel::bump(model, a.radius.unwrap_or(0.25), a.nodes.unwrap_or(32))?;
    let phi = phi_of(&a.phi, "power:2")?;
    let default_tol = if matches!(model, GroupModel::AffineHalfPlane) { 2e-2 } else { 1e-2 };
    let (w, dw) = generic_form();
    let r = cartan_identity_check(&phi, &kernel, &w, Some(&dw), &grid, a.t_nodes.unwrap_or(8))?;
    Ok(Outcome {
        checks: vec![Check::at_most("cartan_identity", r.residual, ctx.tol_or(default_tol))],
        values: json!({ "model": model, "translation_bound": kernel.translation_bound(), "report": r }),
        series: None,
    })
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BourdonArgs {
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Number of intervals.
    #[arg(long = "N", alias = "n-max")]
    #[serde(rename = "N", alias = "n_max")]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub tail_start: Option<usize>,
}

pub fn bourdon(a: &BourdonArgs, _ctx: &RunContext) -> Result<Outcome> {
    let defaults = BourdonParams::default();
    let n_max = a.n_max.unwrap_or(defaults.n_max);
    let params = BourdonParams {
        p: a.p.unwrap_or(defaults.p),
        kappa: a.kappa.unwrap_or(defaults.kappa),
        n_max,
        epsilon: a.epsilon.unwrap_or(defaults.epsilon),
        tail_start: a.tail_start.unwrap_or(defaults.tail_start.min(n_max / 10).max(1)),
        mollified_pieces: defaults.mollified_pieces.min(n_max),
    };
    let r = bourdon_example(&params)?;
    let mut checks = vec![
        Check::holds("divergent_global", r.divergent),
        Check::holds("finite_piecewise", r.piece_sequence_norm.is_finite() && r.pieces_within_bound),
        Check::at_most("mollified_pieces", r.max_mollified_ratio, 1.0 + 1e-9),
    ];
    if n_max >= 7 {
        checks.push(Check::at_least("log_growth", r.min_log_growth, 0.9));
    }
    if params.tail_start >= 1000 {
        checks.push(Check::at_most("integral_test_gap", r.integral_test_relative_gap, 0.1));
    }
    let mut series = Series::new(&["n", "modular", "global_norm"]);
    series.rows = r.checkpoints.iter().map(|c| vec![c.n as f64, c.modular, c.global_norm]).collect();
    Ok(Outcome { values: serde_json::to_value(&r)?, checks, series: Some(series) })
}
