//! One function per subcommand, each producing a result table.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{KernelSource, ScenarioConfig};
use super::output::{Cell, Table};
use crate::criteria::{evaluate, Scenario};
use crate::discrete::io::from_text;
use crate::discrete::{
    minimality_bound, ptolemy_check, quasi_metric_constant, random_quasi_metric_space, riesz_space, wmp_constant,
    KernelSpace, RandomSpaceSpec, WmpOptions,
};
use crate::error::{Error, Result};
use crate::green::{green_riesz, green_subordinated_euclidean, green_volume_estimate};
use crate::iterate::grid::{build_grid_problem, EtaSpec, GridProblem, MAX_DENSE_CELLS};
use crate::iterate::picard::{equivalence_probe, sweep_problems, PicardOptions};
use crate::iterate::run_iteration;
use crate::profiles::ModelParams;
use crate::quadrature::IntegralResult;

fn model_params(cfg: &ScenarioConfig) -> Result<ModelParams<f64>> {
    Ok(ModelParams {
        alpha: cfg.alpha()?,
        q: cfg.model.q.unwrap_or(2.0),
        n: cfg.dimension()?,
        gamma: cfg.gamma().unwrap_or(0.0),
        r0: cfg.model.r0,
        a: cfg.model.a,
    })
}

fn scalar(t: &mut Table, quantity: &str, value: impl Into<Cell>) {
    t.push(vec![quantity.into(), Cell::Empty, Cell::Empty, value.into()]);
}

fn integral(t: &mut Table, name: &str, r: &Option<IntegralResult<f64>>) {
    match r {
        Some(r) => {
            scalar(t, &format!("{name}.status"), r.status.as_str());
            scalar(t, &format!("{name}.value"), r.value);
            scalar(t, &format!("{name}.rel_error_estimate"), r.rel_error_estimate);
        }
        None => scalar(t, &format!("{name}.status"), "not-evaluated"),
    }
}

/// Existence criteria with every intermediate value; cond-int2 samples are
/// listed with their `(d(x,o), r)` coordinates.
pub fn cmd_criteria(cfg: &ScenarioConfig) -> Result<Table> {
    let alpha = cfg.alpha()?;
    let q = cfg.q()?;
    if let Some(n) = cfg.model.n {
        model_params(cfg)?.require_transient_euclidean().map_err(|_| {
            Error::Recurrent(format!("n = {n} does not exceed 2 alpha = {}", 2.0 * alpha))
        })?;
    }
    let mut sc = Scenario::new(cfg.volume_profile()?, cfg.measure_profile()?, alpha, q);
    sc.r0 = cfg.model.r0;
    sc.tol = cfg.model.tol;
    let report = evaluate(&sc, &cfg.cond2_grids())?;
    let mut t = Table::new("criteria", &["quantity", "x_distance", "r", "value"]);
    scalar(&mut t, "existence_verdict", report.existence_verdict.as_str());
    scalar(&mut t, "henon_threshold", report.henon_threshold);
    integral(&mut t, "transient", &Some(report.transient));
    integral(&mut t, "cond_int1", &report.cond_int1);
    integral(&mut t, "cond_int1b", &report.cond_int1b);
    match &report.cond_int2 {
        Some(c) => {
            scalar(&mut t, "cond_int2.verdict", c.verdict.as_str());
            scalar(&mut t, "cond_int2.verdict_upper", c.verdict_upper.as_str());
            scalar(&mut t, "cond_int2.verdict_lower", c.verdict_lower.as_str());
            scalar(&mut t, "cond_int2.sup_estimate", c.sup_estimate);
            scalar(&mut t, "cond_int2.sup_lower", c.sup_lower);
            for s in &c.samples {
                for (name, v) in [("cond_int2.lower", s.lower), ("cond_int2.upper", s.upper)] {
                    t.push(vec![name.into(), s.x_distance.into(), s.r.into(), v.into()]);
                }
            }
        }
        None => scalar(&mut t, "cond_int2.verdict", "not-evaluated"),
    }
    Ok(t)
}

/// Green function by the three routes. `ratio_lo` and `ratio_hi` are the
/// smaller and larger of `g_riesz / g_volest` and `g_subord / g_volest`.
pub fn cmd_green(cfg: &ScenarioConfig) -> Result<Table> {
    let params = model_params(cfg)?;
    params.require_transient_euclidean()?;
    let volume = cfg.volume_profile()?;
    let tol = cfg.model.tol;
    let (n, alpha) = (params.n, params.alpha);
    let mut t = Table::new("green", &["d", "g_riesz", "g_subord", "g_volest", "ratio_lo", "ratio_hi"]);
    for d in cfg.d_grid() {
        let riesz = green_riesz(n, alpha, d)?.value;
        let subord = green_subordinated_euclidean(n, alpha, d, tol)?.value;
        let volest = green_volume_estimate(&volume, alpha, d, tol)?.value;
        let (a, b) = (riesz / volest, subord / volest);
        t.push(vec![d.into(), riesz.into(), subord.into(), volest.into(), a.min(b).into(), a.max(b).into()]);
    }
    Ok(t)
}

fn uniform_points(points: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..points).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect()
}

/// Kernel space described by the `[discrete]` section.
pub fn build_space(cfg: &ScenarioConfig) -> Result<KernelSpace> {
    let d = &cfg.discrete;
    let random = || {
        let spec = RandomSpaceSpec {
            points: d.points,
            dim: d.dim,
            power: d.power,
            quantize_bits: d.quantize_bits,
            infinite_diagonal: false,
        };
        random_quasi_metric_space(&spec, d.seed)
    };
    match d.kernel {
        KernelSource::Random => random(),
        KernelSource::Riesz => riesz_space(uniform_points(d.points, d.dim, d.seed), cfg.alpha()?, vec![1.0; d.points]),
        KernelSource::File => {
            let path = d.path.as_deref().expect("validated");
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
            from_text(&text)
        }
        KernelSource::Perturbed => {
            if d.points < 3 {
                return Err(Error::Config("a perturbed kernel needs at least 3 points".into()));
            }
            // Inflating the quasi-distance 1/K of one pair breaks the triangle
            // inequality through every third point.
            let s = random()?;
            let mut rows = s.rows();
            rows[0][1] /= d.inflate;
            rows[1][0] /= d.inflate;
            KernelSpace::new(rows, s.weights.clone(), s.coords.clone())
        }
    }
}

fn witness(ix: &[usize]) -> String {
    let parts: Vec<String> = ix.iter().map(|i| i.to_string()).collect();
    format!("({})", parts.join(" "))
}

/// Quasi-metric constant, weak maximum principle, Ptolemy and minimality on one space.
pub fn cmd_kernel_check(cfg: &ScenarioConfig) -> Result<Table> {
    let d = &cfg.discrete;
    let space = build_space(cfg)?;
    if d.origin >= space.len() {
        return Err(Error::Config(format!("discrete.origin {} is not a point index", d.origin)));
    }
    let qm = quasi_metric_constant(&space);
    let wmp = wmp_constant(
        &space,
        &WmpOptions {
            seed: d.seed,
            ..WmpOptions::default()
        },
    )?;
    let pt = ptolemy_check(&space, Some(d.origin))?;
    let min = minimality_bound(&space, d.origin, cfg.model.a)?;
    let mut t = Table::new("kernel-check", &["quantity", "value"]);
    let mut put = |k: &str, v: Cell| t.push(vec![k.into(), v]);
    put("points", space.len().into());
    put("kappa", qm.kappa.into());
    put("kappa_witness", qm.witness.map(|(x, y, z)| witness(&[x, y, z])).into());
    put("kappa_flagged", (qm.kappa > d.kappa_limit).into());
    put("wmp_b", wmp.constant_b.into());
    put("wmp_exact", wmp.exact.into());
    put("wmp_exhaustive", wmp.exhaustive.into());
    put("wmp_truncation", wmp.truncation.into());
    put("wmp_lp_cells", wmp.lp_cells_solved.into());
    put("wmp_witness_subset", wmp.witness.as_ref().map(|w| witness(&w.subset)).into());
    put("wmp_witness_target", wmp.witness.as_ref().map(|w| w.target).into());
    put("b_le_kappa", (wmp.constant_b <= qm.kappa).into());
    put("ptolemy_minimal", pt.minimal_constant.into());
    put("ptolemy_kappa_squared", pt.kappa_squared.into());
    put("ptolemy_holds", pt.holds.into());
    put("ptolemy_witness", pt.witness.map(|(a, b, c, e)| witness(&[a, b, c, e])).into());
    put("minimality_ratio", min.ratio.into());
    put("minimality_bound", min.bound.into());
    put("minimality_lambda", min.lambda.into());
    put("minimality_holds", min.holds.into());
    Ok(t)
}

/// Iterates `f_k` on the configured space together with the `ψ_k` lower bounds.
pub fn cmd_iterate(cfg: &ScenarioConfig) -> Result<Table> {
    let q = cfg.q()?;
    let space = build_space(cfg)?;
    let trace = run_iteration(&space, q, cfg.discrete.depth)?;
    let mut t = Table::new(
        "iterate",
        &["k", "point", "f_k", "psi_k_f0", "c_qk", "bound_check", "corollary_check", "b"],
    );
    for (k, f) in trace.f_seq.iter().enumerate() {
        for (x, &fx) in f.iter().enumerate() {
            let get = |m: &Vec<Vec<bool>>| m.get(k).and_then(|r| r.get(x)).copied();
            t.push(vec![
                k.into(),
                x.into(),
                fx.into(),
                trace.psi_of_f0.get(k).and_then(|r| r.get(x)).copied().into(),
                trace.c_qk.get(k).copied().into(),
                get(&trace.bound_checks).into(),
                get(&trace.corollary_checks).into(),
                trace.b.into(),
            ]);
        }
    }
    Ok(t)
}

fn cache_file(dir: &Path, p: &GridProblem) -> std::path::PathBuf {
    dir.join(format!(
        "kernel-n{}-a{}-h{}-r{}-c{}.bin",
        p.n,
        p.alpha,
        p.h,
        p.r_max,
        p.len()
    ))
}

/// Picard sweep over `picard.r_max`, optionally followed by the equivalence probe.
pub fn cmd_solve(cfg: &ScenarioConfig) -> Result<Table> {
    let params = model_params(cfg)?;
    params.require_transient_euclidean()?;
    let q = cfg.q()?;
    let n = cfg.lattice_dimension()?;
    let measure = cfg.measure_profile()?;
    let p = &cfg.picard;
    let eta = EtaSpec {
        amplitude: p.eta_amplitude,
        radius: p.eta_radius,
    };
    let mut problems = p
        .r_max
        .iter()
        .map(|&r| build_grid_problem(n, params.alpha, q, &measure, r, p.h, eta))
        .collect::<Result<Vec<_>>>()?;
    if let Some(dir) = &p.kernel_cache {
        let dir = Path::new(dir);
        std::fs::create_dir_all(dir)?;
        for prob in problems.iter_mut().filter(|g| g.len() <= MAX_DENSE_CELLS) {
            let file = cache_file(dir, prob);
            prob.attach_kernel_cache(&file)?;
        }
    }
    let opts = PicardOptions {
        max_iters: p.max_iters,
        tol: p.tol,
        guard: p.guard,
        auto_scale: p.auto_scale,
        a: cfg.model.a,
        ..PicardOptions::default()
    };
    let sweep = sweep_problems(&problems, &opts)?;
    let mut t = Table::new("solve", &["quantity", "radius", "value"]);
    t.push(vec!["h".into(), Cell::Empty, sweep.h.into()]);
    t.push(vec!["eta_scale".into(), Cell::Empty, sweep.eta_scale.into()]);
    for (i, &r) in sweep.radii.iter().enumerate() {
        let rows: [(&str, Cell); 6] = [
            ("cells", sweep.cells[i].into()),
            ("converged", sweep.converged[i].into()),
            ("iterations", sweep.iterations[i].into()),
            ("residual", sweep.residual[i].into()),
            ("max_v", sweep.max_v[i].into()),
            ("domination_c", sweep.c[i].into()),
        ];
        for (k, v) in rows {
            t.push(vec![k.into(), r.into(), v]);
        }
    }
    for (i, g) in sweep.growth.iter().enumerate() {
        t.push(vec!["growth".into(), sweep.radii[i + 1].into(), (*g).into()]);
    }
    if p.probe {
        let probe = equivalence_probe(problems.last().expect("non-empty"), &measure, cfg.model.a, &opts)?;
        for (name, tr) in [
            ("probe.picard_c", &probe.picard_exists),
            ("probe.domination", &probe.domination),
            ("probe.integrability", &probe.integrability),
            ("probe.level_set_potential", &probe.level_set_potential),
        ] {
            for (r, v) in tr.radii.iter().zip(&tr.values) {
                t.push(vec![name.into(), (*r).into(), (*v).into()]);
            }
            t.push(vec![format!("{name}.bounded").into(), Cell::Empty, tr.bounded.into()]);
        }
        t.push(vec!["probe.agree".into(), Cell::Empty, probe.agree.into()]);
    }
    Ok(t)
}
