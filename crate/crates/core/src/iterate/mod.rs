//! Iteration schemes on kernel spaces, the quantitative bounds they imply, and
//! minimal solutions by Picard iteration on Euclidean grids.
//!
//! Everything on finite spaces is computed in log space: the iterates
//! `f_k = K_ν(f_{k-1}^q)` grow like `t^{1+q+…+q^k}` and leave the f64 range
//! after a handful of steps.

pub mod grid;
pub mod picard;

use crate::discrete::{wmp_constant, KernelSpace, WmpOptions};
use crate::error::{Error, Result};

/// Deepest `ψ_k` the recursive quadrature will build.
pub const MAX_PSI_DEPTH: usize = 8;
/// Relative tolerance of the `ψ_k(f₀) ≤ f_k` comparisons.
pub const BOUND_TOL: f64 = 1e-8;

/// Node spacing in `ln t` of the `ψ_k` tables.
const LOG_STEP: f64 = 0.05;
const MAX_NODES: usize = 1_000_000;

/// Gauss-Legendre 8-point rule on `[-1, 1]`.
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `1 + q + … + q^k`.
pub fn geometric_sum(q: f64, k: usize) -> f64 {
    (0..=k).map(|j| q.powi(j as i32)).sum()
}

/// Exponent `p_k` and log-coefficient `ln A_k` of `ψ_k(t) = A_k t^{p_k}` for
/// `φ(t) = t^q`: `p_{k+1} = q p_k + 1`, `A_{k+1} = A_k^q / (b^q p_{k+1})`.
pub fn psi_closed_form(q: f64, b: f64, k: usize) -> (f64, f64) {
    let (mut p, mut ln_a) = (1.0, 0.0);
    for _ in 0..k {
        let next = q * p + 1.0;
        ln_a = q * ln_a - q * b.ln() - next.ln();
        p = next;
    }
    (p, ln_a)
}

/// `ln c(q,k)` with `c(q,k) = ∏_{j=1}^{k} (1+q+…+q^j)^{q^{k−j}}`.
pub fn ln_c_qk(q: f64, k: usize) -> f64 {
    (1..=k).map(|j| q.powi((k - j) as i32) * geometric_sum(q, j).ln()).sum()
}

/// `c(q,k)`; `+inf` once it leaves the f64 range. The direct product is
/// used while it stays finite, so integer cases come out exact.
pub fn c_qk(q: f64, k: usize) -> f64 {
    let direct: f64 = (1..=k).map(|j| geometric_sum(q, j).powf(q.powi((k - j) as i32))).product();
    if direct.is_finite() {
        direct
    } else {
        ln_c_qk(q, k).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedBoundReport {
    pub q: f64,
    pub k: usize,
    /// `c(q,k)^{(q−1)/(q^{k+1}−1)}`.
    pub lhs: f64,
    /// `∏_{j≥1} (1+q+…+q^j)^{q^{−j}}`.
    pub infinite_product: f64,
    /// `q^{q/(q−1)²} (q/(q−1))^{1/(q−1)}`, the value of the bounding chain.
    pub bound: f64,
    /// The same expression with the first exponent `−1/(q(q−1)²)`.
    pub reciprocal_exponent_bound: f64,
    /// `lhs ≤ infinite_product ≤ bound`.
    pub holds: bool,
    pub reciprocal_exponent_holds: bool,
}

/// Uniform-in-`k` bound on the normalized product constant.
pub fn c_qk_closed_bound(q: f64, k: usize) -> Result<ClosedBoundReport> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::Domain(format!("closed bound needs q > 1, got {q}")));
    }
    if k == 0 {
        return Err(Error::Domain("closed bound needs k >= 1".into()));
    }
    let expo = (q - 1.0) / (q.powi(k as i32 + 1) - 1.0);
    let lhs = (ln_c_qk(q, k) * expo).exp();
    let mut ln_prod = 0.0;
    for j in 1..10_000 {
        let term = q.powi(-(j as i32)) * geometric_sum(q, j).ln();
        ln_prod += term;
        if term < 1e-18 * ln_prod {
            break;
        }
    }
    let infinite_product = ln_prod.exp();
    let tail = (q / (q - 1.0)).powf(1.0 / (q - 1.0));
    let bound = q.powf(q / ((q - 1.0) * (q - 1.0))) * tail;
    let reciprocal_exponent_bound = q.powf(-1.0 / (q * (q - 1.0) * (q - 1.0))) * tail;
    let slack = 1.0 + 1e-12;
    Ok(ClosedBoundReport {
        q,
        k,
        lhs,
        infinite_product,
        bound,
        reciprocal_exponent_bound,
        holds: lhs <= infinite_product * slack && infinite_product <= bound * slack,
        reciprocal_exponent_holds: lhs <= reciprocal_exponent_bound * slack,
    })
}

/// `ln ψ_k` tabulated on a uniform grid in `u = ln t`.
#[derive(Debug, Clone)]
struct PsiTable {
    u0: f64,
    du: f64,
    /// `levels[k][i] = ln ψ_k(e^{u0 + i du})`.
    levels: Vec<Vec<f64>>,
}

impl PsiTable {
    /// Cubic Hermite interpolation of `ln ψ_k` in `u`, slopes by central differences.
    fn log_eval(&self, k: usize, u: f64) -> f64 {
        let l = &self.levels[k];
        let n = l.len();
        let slope = |i: usize| {
            if i == 0 {
                (l[1] - l[0]) / self.du
            } else if i == n - 1 {
                (l[n - 1] - l[n - 2]) / self.du
            } else {
                (l[i + 1] - l[i - 1]) / (2.0 * self.du)
            }
        };
        let s = (u - self.u0) / self.du;
        if s <= 0.0 {
            return l[0] + slope(0) * (u - self.u0);
        }
        let i = (s.floor() as usize).min(n - 2);
        let t = s - i as f64;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t),
            t * (1.0 - t) * (1.0 - t),
            t * t * (3.0 - 2.0 * t),
            t * t * (t - 1.0),
        );
        h00 * l[i] + h10 * self.du * slope(i) + h01 * l[i + 1] + h11 * self.du * slope(i + 1)
    }
}

/// `ψ_{k+1}(t) = ∫_0^t ψ(ψ_k(s)) ds` with `ψ(t) = φ(t/b)`, `φ(t) = t^q`,
/// integrated cell by cell in `u = ln s`. Cells are subdivided so the
/// exponent of the integrand moves by at most 1/4 per Gauss-Legendre panel.
fn build_psi_table(q: f64, b: f64, t_lo: f64, t_hi: f64, depth: usize) -> Result<PsiTable> {
    let u0 = t_lo.ln();
    let cells = ((t_hi.ln() - u0) / LOG_STEP).ceil().max(2.0) as usize;
    if cells + 1 > MAX_NODES {
        return Err(Error::CostGuard(format!("psi table would need {} nodes", cells + 1)));
    }
    let du = (t_hi.ln() - u0) / cells as f64;
    let mut table = PsiTable {
        u0,
        du,
        levels: vec![(0..=cells).map(|i| u0 + i as f64 * du).collect()],
    };
    let ln_b = b.ln();
    for k in 0..depth {
        let g = |u: f64| q * (table.log_eval(k, u) - ln_b) + u;
        let prev = &table.levels[k];
        // Head: ψ_k continued as a power law below the first node.
        let p = (prev[1] - prev[0]) / du;
        let mut acc = u0 + q * (prev[0] - ln_b) - (q * p + 1.0).ln();
        let mut next = Vec::with_capacity(cells + 1);
        next.push(acc);
        for i in 0..cells {
            let (a, c) = (u0 + i as f64 * du, u0 + (i + 1) as f64 * du);
            let span = (g(c) - g(a)).abs() + (g(0.5 * (a + c)) - 0.5 * (g(a) + g(c))).abs();
            let panels = ((span / 0.25).ceil() as usize).max(1);
            let w = (c - a) / panels as f64;
            let mut cell = f64::NEG_INFINITY;
            for j in 0..panels {
                let lo = a + j as f64 * w;
                let mid = lo + 0.5 * w;
                let vals: Vec<(f64, f64)> = GL8.iter().map(|&(x, wt)| (g(mid + 0.5 * w * x), wt)).collect();
                let shift = vals.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
                let s: f64 = vals.iter().map(|&(v, wt)| wt * (v - shift).exp()).sum();
                cell = log_add(cell, shift + (0.5 * w * s).ln());
            }
            acc = log_add(acc, cell);
            next.push(acc);
        }
        table.levels.push(next);
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiSequence {
    pub q: f64,
    pub b: f64,
    pub t: Vec<f64>,
    /// `values[k][i] = ψ_k(t_i)`, `k = 0..=depth`.
    pub values: Vec<Vec<f64>>,
    pub log_values: Vec<Vec<f64>>,
    /// `ln` of the power-law closed form at the same points.
    pub log_closed_form: Vec<Vec<f64>>,
    /// Largest `|ln ψ_k^{quad} − ln ψ_k^{closed}|`, a relative error.
    pub max_log_deviation: f64,
}

fn check_psi_args(q: f64, b: f64, depth: usize) -> Result<()> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("b must be positive and finite, got {b}")));
    }
    if depth > MAX_PSI_DEPTH {
        return Err(Error::CostGuard(format!(
            "psi depth {depth} exceeds the limit {MAX_PSI_DEPTH}"
        )));
    }
    Ok(())
}

/// `ψ_0, …, ψ_depth` at the points `t_grid` for `φ(t) = t^q`.
pub fn psi_sequence(q: f64, b: f64, t_grid: &[f64], depth: usize) -> Result<PsiSequence> {
    check_psi_args(q, b, depth)?;
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::Domain("t grid must be non-empty, positive and finite".into()));
    }
    let lo = t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t_grid.iter().copied().fold(0.0, f64::max);
    let table = build_psi_table(q, b, lo * 1e-3, hi * (1.0 + LOG_STEP), depth)?;
    let mut log_values = Vec::with_capacity(depth + 1);
    let mut log_closed_form = Vec::with_capacity(depth + 1);
    let mut dev = 0.0_f64;
    for k in 0..=depth {
        let (p, ln_a) = psi_closed_form(q, b, k);
        let num: Vec<f64> = t_grid.iter().map(|&t| table.log_eval(k, t.ln())).collect();
        let closed: Vec<f64> = t_grid.iter().map(|&t| ln_a + p * t.ln()).collect();
        for (a, c) in num.iter().zip(&closed) {
            dev = dev.max((a - c).abs());
        }
        log_values.push(num);
        log_closed_form.push(closed);
    }
    Ok(PsiSequence {
        q,
        b,
        t: t_grid.to_vec(),
        values: log_values.iter().map(|r| r.iter().map(|v| v.exp()).collect()).collect(),
        log_values,
        log_closed_form,
        max_log_deviation: dev,
    })
}

/// Record of `f_k = K_ν(f_{k−1}^q)` and the lower bounds it must satisfy.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub q: f64,
    /// Weak-maximum-principle constant used in `ψ`.
    pub b: f64,
    /// `f_seq[k][x]`, `+inf` where the value left the f64 range.
    pub f_seq: Vec<Vec<f64>>,
    pub log_f_seq: Vec<Vec<f64>>,
    /// `ψ_k(f₀(x))`.
    pub psi_of_f0: Vec<Vec<f64>>,
    pub log_psi_of_f0: Vec<Vec<f64>>,
    /// `c(q,k)` for `k = 0..=depth` (`c(q,0) = 1`).
    pub c_qk: Vec<f64>,
    pub log_c_qk: Vec<f64>,
    /// `ψ_k(f₀(x)) ≤ f_k(x)`.
    pub bound_checks: Vec<Vec<bool>>,
    /// `f₀^{1+q+…+q^k} ≤ b^{q+…+q^k} c(q,k) f_k`.
    pub corollary_checks: Vec<Vec<bool>>,
    /// Quadrature-versus-closed-form deviation of the `ψ_k` values used.
    pub psi_log_deviation: f64,
    /// Set when an iterate became non-finite even in log space.
    pub truncated: bool,
}

impl IterationTrace {
    pub fn all_bounds_hold(&self) -> bool {
        self.bound_checks.iter().chain(&self.corollary_checks).all(|r| r.iter().all(|&v| v))
    }
}

fn log_kernel_potential(space: &KernelSpace, log_g: &[f64]) -> Vec<f64> {
    let n = space.len();
    (0..n)
        .map(|x| {
            let mut acc = f64::NEG_INFINITY;
            for y in 0..n {
                let (k, w) = (space.k(x, y), space.weights[y]);
                if k == 0.0 || w == 0.0 || log_g[y] == f64::NEG_INFINITY {
                    continue;
                }
                acc = log_add(acc, k.ln() + w.ln() + log_g[y]);
            }
            acc
        })
        .collect()
}

/// `f₀ = K_ν1, f_{k+1} = K_ν(f_k^q)` with `b` from [`wmp_constant`].
pub fn run_iteration(space: &KernelSpace, q: f64, depth: usize) -> Result<IterationTrace> {
    check_psi_args(q, 1.0, depth)?;
    let b = wmp_constant(space, &WmpOptions::default())?.constant_b;
    run_iteration_with_constant(space, q, depth, b)
}

/// As [`run_iteration`] with a given weak-maximum-principle constant `b ≥ 1`.
pub fn run_iteration_with_constant(space: &KernelSpace, q: f64, depth: usize, b: f64) -> Result<IterationTrace> {
    check_psi_args(q, b, depth)?;
    if b < 1.0 {
        return Err(Error::Domain(format!("weak maximum principle constant must be >= 1, got {b}")));
    }
    let n = space.len();
    let f0 = space.potential_of_one();
    if let Some(x) = f0.iter().position(|v| !v.is_finite()) {
        return Err(Error::Precondition(format!("K_nu 1 is infinite at point {x}")));
    }
    let log_f0: Vec<f64> = f0.iter().map(|v| v.ln()).collect();
    let positive: Vec<f64> = f0.iter().copied().filter(|&v| v > 0.0).collect();
    let psi = if positive.is_empty() {
        None
    } else {
        Some(psi_sequence(q, b, &positive, depth)?)
    };

    let mut trace = IterationTrace {
        q,
        b,
        f_seq: Vec::new(),
        log_f_seq: Vec::new(),
        psi_of_f0: Vec::new(),
        log_psi_of_f0: Vec::new(),
        c_qk: Vec::new(),
        log_c_qk: Vec::new(),
        bound_checks: Vec::new(),
        corollary_checks: Vec::new(),
        psi_log_deviation: psi.as_ref().map_or(0.0, |p| p.max_log_deviation),
        truncated: false,
    };
    let tol = BOUND_TOL.ln_1p();
    let mut log_f = log_f0.clone();
    for k in 0..=depth {
        if k > 0 {
            let powered: Vec<f64> = log_f.iter().map(|&v| q * v).collect();
            log_f = log_kernel_potential(space, &powered);
        }
        if log_f.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            trace.truncated = true;
            break;
        }
        let mut log_psi = vec![f64::NEG_INFINITY; n];
        if let Some(p) = &psi {
            let mut j = 0;
            for x in 0..n {
                if f0[x] > 0.0 {
                    log_psi[x] = p.log_values[k][j];
                    j += 1;
                }
            }
        }
        let s_k = geometric_sum(q, k);
        let ln_c = ln_c_qk(q, k);
        let bound: Vec<bool> = (0..n).map(|x| log_psi[x] <= log_f[x] + tol).collect();
        let corollary: Vec<bool> = (0..n)
            .map(|x| {
                if f0[x] == 0.0 {
                    return true;
                }
                let lhs = s_k * log_f0[x];
                let rhs = (s_k - 1.0) * b.ln() + ln_c + log_f[x];
                lhs <= rhs + tol + 1e-13 * (lhs.abs() + rhs.abs())
            })
            .collect();
        trace.f_seq.push(log_f.iter().map(|v| v.exp()).collect());
        trace.log_f_seq.push(log_f.clone());
        trace.psi_of_f0.push(log_psi.iter().map(|v| v.exp()).collect());
        trace.log_psi_of_f0.push(log_psi);
        trace.c_qk.push(c_qk(q, k));
        trace.log_c_qk.push(ln_c);
        trace.bound_checks.push(bound);
        trace.corollary_checks.push(corollary);
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupersolutionReport {
    pub b: f64,
    /// `K_ν1`, or `K_ν(h^q)` in the weighted form.
    pub potential: Vec<f64>,
    /// `b/(q−1)`, times `h(x)` in the weighted form.
    pub bound: Vec<f64>,
    /// `max potential / bound`.
    pub max_ratio: f64,
    pub holds: bool,
}

fn check_q_above_one(q: f64) -> Result<()> {
    if q > 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("q must exceed 1, got {q}")))
    }
}

/// Points where `u ≥ K_ν(u^q) + h` fails.
fn supersolution_failures(space: &KernelSpace, q: f64, h: &[f64], u: &[f64]) -> Vec<usize> {
    let uq: Vec<f64> = u.iter().map(|v| v.powf(q)).collect();
    let ku = space.potential(&uq);
    (0..space.len()).filter(|&x| !(u[x].is_finite() && u[x] >= ku[x] + h[x])).collect()
}

fn check_lengths(space: &KernelSpace, v: &[f64], what: &str) -> Result<()> {
    if v.len() == space.len() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} has {} entries, expected {}", v.len(), space.len())))
    }
}

/// Given `u ≥ K_ν(u^q) + 1` pointwise, checks `K_ν1 < b/(q−1)`.
/// `b` defaults to the exact weak-maximum-principle constant of the space.
pub fn supersolution_bound_check(space: &KernelSpace, q: f64, u: &[f64], b: Option<f64>) -> Result<SupersolutionReport> {
    weighted_supersolution_check(space, q, &vec![1.0; space.len()], u, b)
}

/// Given `u ≥ K_ν(u^q) + h` pointwise, checks `K_ν(h^q) < b/(q−1) · h`,
/// where `b` is the weak-maximum-principle constant of `K(x,y)/(h(x)h(y))`.
pub fn weighted_supersolution_check(
    space: &KernelSpace,
    q: f64,
    h: &[f64],
    u: &[f64],
    b: Option<f64>,
) -> Result<SupersolutionReport> {
    check_q_above_one(q)?;
    check_lengths(space, h, "h")?;
    check_lengths(space, u, "u")?;
    if h.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain("h must be positive and bounded".into()));
    }
    let failures = supersolution_failures(space, q, h, u);
    if !failures.is_empty() {
        return Err(Error::Precondition(format!(
            "supersolution inequality fails at points {failures:?}"
        )));
    }
    let b = match b {
        Some(b) => b,
        None => wmp_constant(&h_normalized(space, h)?, &WmpOptions::default())?.constant_b,
    };
    let hq: Vec<f64> = h.iter().map(|v| v.powf(q)).collect();
    let potential = space.potential(&hq);
    let bound: Vec<f64> = h.iter().map(|&v| b / (q - 1.0) * v).collect();
    let max_ratio = potential.iter().zip(&bound).map(|(p, c)| p / c).fold(0.0, f64::max);
    Ok(SupersolutionReport {
        b,
        holds: potential.iter().zip(&bound).all(|(p, c)| p < c),
        potential,
        bound,
        max_ratio,
    })
}

/// `K(x,y) / (h(x) h(y))`.
pub fn h_normalized(space: &KernelSpace, h: &[f64]) -> Result<KernelSpace> {
    check_lengths(space, h, "h")?;
    let n = space.len();
    let mut rows = vec![vec![0.0; n]; n];
    for x in 0..n {
        for y in x..n {
            let v = space.k(x, y) / h[x] / h[y];
            rows[x][y] = v;
            rows[y][x] = v;
        }
    }
    KernelSpace::new(rows, space.weights.clone(), space.coords.clone())
}

/// Minimal solution of `u = h + K_ν(u^q)` by Picard iteration from `u = h`;
/// `None` when the iterates exceed `1e12` or fail to settle.
pub fn finite_picard(space: &KernelSpace, q: f64, h: &[f64]) -> Option<Vec<f64>> {
    let mut u = h.to_vec();
    for _ in 0..20_000 {
        let uq: Vec<f64> = u.iter().map(|v| v.powf(q)).collect();
        let next: Vec<f64> = space.potential(&uq).iter().zip(h).map(|(k, hv)| k + hv).collect();
        if next.iter().any(|v| !(v.abs() <= 1e12)) {
            return None;
        }
        let done = next.iter().zip(&u).all(|(a, b)| (a - b).abs() <= 1e-14 * a.abs());
        u = next;
        if done {
            return Some(u);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupersolutionInstance {
    /// Space with masses `λ ν`.
    pub space: KernelSpace,
    pub u: Vec<f64>,
    pub lambda: f64,
    /// Bisected largest mass scale at which the Picard iteration converges.
    pub lambda_critical: f64,
}

/// Scales the masses of `space` to `fraction · λ*`, where `λ*` is the edge of
/// solvability of `u = h + K_{λν}(u^q)`, and returns a strict supersolution:
/// the fixed point at a slightly larger scale.
pub fn constructed_supersolution(space: &KernelSpace, q: f64, h: &[f64], fraction: f64) -> Result<SupersolutionInstance> {
    check_q_above_one(q)?;
    check_lengths(space, h, "h")?;
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Domain(format!("fraction must lie in (0,1), got {fraction}")));
    }
    let scaled = |lambda: f64| space.with_weights(space.weights.iter().map(|w| w * lambda).collect());
    let solvable = |lambda: f64| -> Result<bool> { Ok(finite_picard(&scaled(lambda)?, q, h).is_some()) };
    let (mut lo, mut hi) = (0.0, 1.0);
    while solvable(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Precondition("masses can be scaled without bound".into()));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if solvable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0.0 {
        return Err(Error::Precondition("no positive mass scale admits a solution".into()));
    }
    let outer = fraction.sqrt() * lo;
    let lambda = fraction * lo;
    let u = finite_picard(&scaled(outer)?, q, h)
        .ok_or_else(|| Error::Precondition("Picard iteration failed below the critical scale".into()))?;
    Ok(SupersolutionInstance {
        space: scaled(lambda)?,
        u,
        lambda,
        lambda_critical: lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_matches_hand_values() {
        assert_eq!(psi_closed_form(2.0, 1.0, 1), (3.0, (1.0_f64 / 3.0).ln()));
        let (p, a) = psi_closed_form(2.0, 1.0, 2);
        assert_eq!(p, 7.0);
        assert!((a.exp() - 1.0 / 63.0).abs() < 1e-16);
    }

    #[test]
    fn product_constant() {
        assert!((c_qk(2.0, 1) - 3.0).abs() < 1e-13);
        assert_eq!(c_qk(2.0, 2), 63.0);
        assert_eq!(c_qk(3.0, 0), 1.0);
    }

    #[test]
    fn hermite_is_exact_on_lines() {
        let t = PsiTable {
            u0: 0.0,
            du: 0.5,
            levels: vec![vec![1.0, 2.0, 3.0, 4.0]],
        };
        assert!((t.log_eval(0, 0.7) - 2.4).abs() < 1e-15);
    }

    #[test]
    fn depth_guard() {
        assert!(matches!(psi_sequence(2.0, 1.0, &[1.0], 9), Err(Error::CostGuard(_))));
    }
}
