//! Minimal solutions of `v = G_σ(v^q) + G_σ(η)` by monotone Picard iteration,
//! and finite-domain trend diagnostics for the equivalent existence conditions.

use crate::error::{Error, Result};
use crate::profiles::MeasureProfile;

use super::grid::{build_grid_problem, EtaSpec, GridProblem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    pub max_iters: usize,
    /// Sup-norm increment at which the iteration stops.
    pub tol: f64,
    /// Iterates above this are treated as blow-up.
    pub guard: f64,
    /// Halve the forcing until the first iterates contract and the run stays bounded.
    pub auto_scale: bool,
    pub max_halvings: usize,
    /// Truncation level in `m = G(·,o) ∧ a^{−1}`.
    pub a: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        PicardOptions {
            max_iters: 10_000,
            tol: 1e-8,
            guard: 1e6,
            auto_scale: true,
            max_halvings: 60,
            a: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardResult {
    pub v: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub blow_up: bool,
    /// `sup |G_σ(v^q) + G_σ(η) − v|` at the returned `v`.
    pub residual: f64,
    /// Multiplier applied to `η`.
    pub eta_scale: f64,
    pub halvings: usize,
    /// Smallest `c` with `v ≤ c m` on the grid (`+inf` after blow-up).
    pub domination_c: f64,
    /// `v_{k+1} ≥ v_k` held at every step, up to rounding of the convolution.
    pub monotone: bool,
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn step(problem: &GridProblem, v: &[f64], forcing: &[f64]) -> Vec<f64> {
    let vq: Vec<f64> = v.iter().map(|x| x.powf(problem.q)).collect();
    problem
        .green_sigma(&vq)
        .into_iter()
        .zip(forcing)
        .map(|(a, b)| a + b)
        .collect()
}

fn bounded(v: &[f64], guard: f64) -> bool {
    v.iter().all(|x| x.is_finite() && *x <= guard)
}

/// Smallest `c` with `v ≤ c m`.
pub fn domination_constant(v: &[f64], m: &[f64]) -> f64 {
    v.iter().zip(m).map(|(a, b)| a / b).fold(0.0, f64::max)
}

/// Iterates `v₀ = 0`, `v_{k+1} = G_σ(v_k^q) + G_σ(s η)` with `s` the
/// forcing scale. With `auto_scale`, `s` starts at 1 and is halved until the
/// first three iterates contract and the full run stays below the guard.
pub fn picard_minimal_solution(problem: &GridProblem, opts: &PicardOptions) -> Result<PicardResult> {
    picard_with_scale(problem, opts, 1.0)
}

pub fn picard_with_scale(problem: &GridProblem, opts: &PicardOptions, start_scale: f64) -> Result<PicardResult> {
    if !(opts.tol > 0.0) || !(opts.guard > 0.0) || !(opts.a > 0.0) || opts.max_iters == 0 {
        return Err(Error::Domain("Picard options need positive tol, guard, a and max_iters".into()));
    }
    let m = problem.truncated_green(opts.a);
    let base = problem.green_sigma(&problem.eta);
    let mut scale = start_scale;
    let mut halvings = 0;
    let blown = |scale: f64, halvings: usize, iterations: usize| PicardResult {
        v: vec![f64::INFINITY; problem.len()],
        iterations,
        converged: false,
        blow_up: true,
        residual: f64::INFINITY,
        eta_scale: scale,
        halvings,
        domination_c: f64::INFINITY,
        monotone: true,
    };
    if !bounded(&base, f64::INFINITY) {
        // An infinite forcing potential cannot be scaled away.
        return Ok(blown(scale, 0, 1));
    }
    loop {
        let forcing: Vec<f64> = base.iter().map(|x| x * scale).collect();
        let retry = opts.auto_scale && halvings < opts.max_halvings;
        if opts.auto_scale {
            let v1 = forcing.clone();
            let v2 = step(problem, &v1, &forcing);
            let v3 = step(problem, &v2, &forcing);
            let (d2, d3) = (sup_diff(&v2, &v1), sup_diff(&v3, &v2));
            let ok = bounded(&v3, opts.guard) && d3 <= 0.5 * d2;
            if !ok && retry {
                scale *= 0.5;
                halvings += 1;
                continue;
            }
        }
        let mut v = vec![0.0; problem.len()];
        let mut monotone = true;
        let mut outcome = None;
        for it in 1..=opts.max_iters {
            let next = step(problem, &v, &forcing);
            if !bounded(&next, opts.guard) {
                outcome = Some((it, false, true));
                break;
            }
            let top = next.iter().copied().fold(0.0, f64::max);
            if next.iter().zip(&v).any(|(a, b)| *a < b - 1e-12 * top) {
                monotone = false;
            }
            let inc = sup_diff(&next, &v);
            v = next;
            if inc < opts.tol {
                outcome = Some((it, true, false));
                break;
            }
        }
        let (iterations, converged, blow_up) = outcome.unwrap_or((opts.max_iters, false, false));
        if blow_up {
            if retry {
                scale *= 0.5;
                halvings += 1;
                continue;
            }
            return Ok(blown(scale, halvings, iterations));
        }
        let residual = sup_diff(&step(problem, &v, &forcing), &v);
        return Ok(PicardResult {
            domination_c: domination_constant(&v, &m),
            v,
            iterations,
            converged,
            blow_up: false,
            residual,
            eta_scale: scale,
            halvings,
            monotone,
        });
    }
}

/// Quantity sampled on nested domains.
#[derive(Debug, Clone, PartialEq)]
pub struct Trend {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Finite values whose last increment is below 0.9 of the previous one.
    pub bounded: bool,
}

/// Bounded trend: all values finite and the last increment at most 0.9
/// times the one before (a non-increasing tail also counts).
pub fn trend(radii: Vec<f64>, values: Vec<f64>) -> Trend {
    let finite = values.iter().all(|v| v.is_finite());
    let bounded = finite
        && match values.len() {
            0 | 1 => true,
            2 => values[1] <= values[0],
            k => {
                let (d1, d2) = (values[k - 2] - values[k - 3], values[k - 1] - values[k - 2]);
                d2 <= 0.0 || d2 <= 0.9 * d1
            }
        };
    Trend { radii, values, bounded }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub radii: Vec<f64>,
    pub h: f64,
    /// Forcing scale fixed across the sweep.
    pub eta_scale: f64,
    /// Minimal domination constants, `+inf` after blow-up.
    pub c: Vec<f64>,
    pub converged: Vec<bool>,
    pub iterations: Vec<usize>,
    pub residual: Vec<f64>,
    pub max_v: Vec<f64>,
    /// `c[i+1] / c[i]`.
    pub growth: Vec<f64>,
    pub cells: Vec<usize>,
}

/// Runs Picard over increasing domain radii with one forcing: the scale is
/// calibrated on the largest domain and then held fixed, so the constants are
/// comparable.
#[allow(clippy::too_many_arguments)]
pub fn domination_sweep(
    n: usize,
    alpha: f64,
    q: f64,
    measure: &MeasureProfile<f64>,
    radii: &[f64],
    h: f64,
    eta: EtaSpec,
    opts: &PicardOptions,
) -> Result<SweepReport> {
    let problems = radii
        .iter()
        .map(|&r| build_grid_problem(n, alpha, q, measure, r, h, eta))
        .collect::<Result<Vec<_>>>()?;
    sweep_problems(&problems, opts)
}

/// [`domination_sweep`] on prepared grids of increasing radius and common spacing.
pub fn sweep_problems(problems: &[GridProblem], opts: &PicardOptions) -> Result<SweepReport> {
    let radii: Vec<f64> = problems.iter().map(|p| p.r_max).collect();
    if problems.is_empty() || radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("sweep radii must be strictly increasing".into()));
    }
    let largest = picard_minimal_solution(problems.last().expect("non-empty"), opts)?;
    let fixed = PicardOptions {
        auto_scale: false,
        ..*opts
    };
    let mut report = SweepReport {
        radii,
        h: problems[0].h,
        eta_scale: largest.eta_scale,
        c: Vec::new(),
        converged: Vec::new(),
        iterations: Vec::new(),
        residual: Vec::new(),
        max_v: Vec::new(),
        growth: Vec::new(),
        cells: problems.iter().map(|p| p.len()).collect(),
    };
    for (i, p) in problems.iter().enumerate() {
        let r = if i + 1 == problems.len() {
            largest.clone()
        } else {
            picard_with_scale(p, &fixed, largest.eta_scale)?
        };
        report.c.push(r.domination_c);
        report.converged.push(r.converged);
        report.iterations.push(r.iterations);
        report.residual.push(r.residual);
        report.max_v.push(r.v.iter().copied().fold(0.0, f64::max));
    }
    report.growth = report.c.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub a: f64,
    /// Picard solutions exist and their domination constants stay bounded.
    pub picard_exists: Trend,
    /// `max G_σ(m^q)/m` on each domain.
    pub domination: Trend,
    /// `∫_{B_r} m^q dσ`.
    pub integrability: Trend,
    /// `sup_x ∫_{B_ρ} G(x,y) dσ(y) / t^{q−1}`, where `B_ρ = {G(o,·) > 1/t}`.
    pub level_set_potential: Trend,
    /// Existence, domination and the conjunction of the two integral
    /// conditions give the same answer.
    pub agree: bool,
}

/// Evaluates the four conditions on nested domains `R/4, R/2, R` with the grid
/// spacing of `problem`.
pub fn equivalence_probe(problem: &GridProblem, measure: &MeasureProfile<f64>, a: f64, opts: &PicardOptions) -> Result<EquivalenceReport> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("truncation level a must be positive, got {a}")));
    }
    let r = problem.r_max;
    let radii = vec![r / 4.0, r / 2.0, r];
    if problem.h >= radii[0] || problem.eta_spec.radius >= radii[0] {
        return Err(Error::Domain(format!(
            "grid spacing and forcing radius must be below R_max/4 = {}",
            radii[0]
        )));
    }
    let mut problems = Vec::new();
    for &rad in &radii[..2] {
        problems.push(build_grid_problem(problem.n, problem.alpha, problem.q, measure, rad, problem.h, problem.eta_spec)?);
    }
    problems.push(problem.clone());
    let q = problem.q;
    let opts = PicardOptions { a, ..*opts };

    let outer = picard_minimal_solution(problem, &opts)?;
    let fixed = PicardOptions {
        auto_scale: false,
        ..opts
    };
    let mut picard_c = Vec::new();
    let mut domination = Vec::new();
    let mut integrability = Vec::new();
    let mut level = Vec::new();
    for (i, p) in problems.iter().enumerate() {
        let res = if i == 2 {
            outer.clone()
        } else {
            picard_with_scale(p, &fixed, outer.eta_scale)?
        };
        picard_c.push(if res.converged { res.domination_c } else { f64::INFINITY });

        let m = p.truncated_green(a);
        let mq: Vec<f64> = m.iter().map(|v| v.powf(q)).collect();
        let gm = p.green_sigma(&mq);
        domination.push(gm.iter().zip(&m).map(|(g, mv)| g / mv).fold(0.0, f64::max));
        integrability.push(mq.iter().zip(p.sigma_masses()).map(|(v, s)| v * s).sum());

        // The level set {G(o,·) > 1/t} is the ball of radius ρ = radii[i].
        let t = radii[i].powf(p.n as f64 - 2.0 * p.alpha) / p.riesz_c;
        let pot = p.green_sigma(&vec![1.0; p.len()]);
        let sup = pot.iter().copied().fold(0.0, f64::max);
        level.push(sup / t.powf(q - 1.0));
    }
    let picard_exists = trend(radii.clone(), picard_c);
    let domination = trend(radii.clone(), domination);
    let integrability = trend(radii.clone(), integrability);
    let level_set_potential = trend(radii, level);
    let conj = integrability.bounded && level_set_potential.bounded;
    Ok(EquivalenceReport {
        a,
        agree: picard_exists.bounded == domination.bounded && domination.bounded == conj,
        picard_exists,
        domination,
        integrability,
        level_set_potential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_rule() {
        assert!(trend(vec![1.0, 2.0, 4.0], vec![1.0, 1.5, 1.7]).bounded);
        assert!(!trend(vec![1.0, 2.0, 4.0], vec![1.0, 1.5, 2.0]).bounded);
        assert!(trend(vec![1.0, 2.0, 4.0], vec![3.0, 2.0, 1.0]).bounded);
        assert!(!trend(vec![1.0, 2.0, 4.0], vec![1.0, 2.0, f64::INFINITY]).bounded);
    }
}
