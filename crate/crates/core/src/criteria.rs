//! Existence criteria for `(−Δ)^α u ≥ u^q σ` on radial models, and the
//! auxiliary one-dimensional inequalities used in their proofs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::green::green_volume_estimate;
use crate::profiles::{MeasureKind, MeasureProfile, VolumeKind, VolumeProfile};
use crate::quadrature::{integrate_log, integrate_tail, integrate_to_zero, IntegralResult};
use crate::scalar::log_grid;

/// Verdict of the sampled supremum in (cond-int2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cond2Verdict {
    Bounded,
    UnboundedTrend,
    /// Upper and lower brackets disagree.
    Indeterminate,
}

impl Cond2Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Cond2Verdict::Bounded => "bounded",
            Cond2Verdict::UnboundedTrend => "unbounded-trend",
            Cond2Verdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExistenceVerdict {
    Exists,
    NotExists,
    Inconclusive,
}

impl ExistenceVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ExistenceVerdict::Exists => "exists",
            ExistenceVerdict::NotExists => "not-exists",
            ExistenceVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// One grid cell of (cond-int2): bracketed product
/// `[∫₀^∞ σ(B(x,s) ∩ B(o,r)) s^{2α−1} / V(s) ds] · R(r)^{q−1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cond2Sample {
    pub x_distance: f64,
    pub r: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CondInt2 {
    /// Sampled supremum of the upper bracket.
    pub sup_estimate: f64,
    pub sup_lower: f64,
    pub samples: Vec<Cond2Sample>,
    pub verdict: Cond2Verdict,
    pub verdict_upper: Cond2Verdict,
    pub verdict_lower: Cond2Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub transient: IntegralResult<f64>,
    pub cond_int1: Option<IntegralResult<f64>>,
    pub cond_int2: Option<CondInt2>,
    pub cond_int1b: Option<IntegralResult<f64>>,
    pub henon_threshold: Option<f64>,
    pub existence_verdict: ExistenceVerdict,
}

/// Sampling grids for the supremum in (cond-int2).
#[derive(Debug, Clone, PartialEq)]
pub struct Cond2Grids {
    pub x: Vec<f64>,
    pub r: Vec<f64>,
}

impl Cond2Grids {
    /// Log grids over `d(x,o) ∈ [1e-3, 1e6]` and `r ∈ [r0, 1e6]`, four points per decade.
    pub fn standard(r0: f64) -> Self {
        let per_decade = 4.0;
        let x = log_grid(1e-3, 1e6, (9.0 * per_decade) as usize + 1);
        let decades = (1e6 / r0).log10().max(1.0);
        let r = log_grid(r0, 1e6, (decades * per_decade).round() as usize + 1);
        Cond2Grids { x, r }
    }
}

/// Inputs shared by the criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub volume: VolumeProfile<f64>,
    pub measure: MeasureProfile<f64>,
    pub alpha: f64,
    pub q: f64,
    pub r0: f64,
    pub tol: f64,
}

impl Scenario {
    pub fn new(volume: VolumeProfile<f64>, measure: MeasureProfile<f64>, alpha: f64, q: f64) -> Self {
        Scenario {
            volume,
            measure,
            alpha,
            q,
            r0: 1.0,
            tol: crate::quadrature::DEFAULT_TOL,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0,1), got {}", self.alpha)));
        }
        if !(self.q > 1.0) {
            return Err(Error::Domain(format!("q must exceed 1, got {}", self.q)));
        }
        if !(self.r0 > 0.0) {
            return Err(Error::Domain(format!("r0 must be positive, got {}", self.r0)));
        }
        Ok(())
    }

    fn r_of(&self, d: f64) -> Result<f64> {
        Ok(green_volume_estimate(&self.volume, self.alpha, d, self.tol)?.value)
    }
}

/// Transience: `∫₁^∞ t^{2α−1} / V(t) dt < ∞`.
pub fn check_transience(profile: &VolumeProfile<f64>, alpha: f64) -> Result<IntegralResult<f64>> {
    let exponent = profile.asymptotic_exponent().map(|n| 2.0 * alpha - 1.0 - n);
    integrate_tail(
        |t: f64| t.powf(2.0 * alpha - 1.0) / profile.eval(t).unwrap_or(f64::NAN),
        1.0,
        crate::quadrature::DEFAULT_TOL,
        exponent,
    )
}

fn require_transient(sc: &Scenario) -> Result<()> {
    let t = check_transience(&sc.volume, sc.alpha)?;
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::Recurrent(format!("volume growth is recurrent ({})", t.status.as_str())))
    }
}

/// (cond-int1): `∫_{r₀}^∞ R(r)^{q−1} σ(B(o,r)) / V(r) · r^{2α−1} dr`.
pub fn eval_cond_int1(sc: &Scenario) -> Result<IntegralResult<f64>> {
    sc.validate()?;
    require_transient(sc)?;
    let (a, q) = (sc.alpha, sc.q);
    let exponent = match (sc.volume.asymptotic_exponent(), sc.measure.asymptotic_exponent(&sc.volume)) {
        (Some(n), Some(s)) => Some((2.0 * a - n) * (q - 1.0) + s - n + 2.0 * a - 1.0),
        _ => None,
    };
    let f = |r: f64| -> f64 {
        let inner = sc.r_of(r).unwrap_or(f64::NAN);
        let sig = sc.measure.sigma_ball(r, &sc.volume).unwrap_or(f64::NAN);
        let v = sc.volume.eval(r).unwrap_or(f64::NAN);
        inner.powf(q - 1.0) * sig / v * r.powf(2.0 * a - 1.0)
    };
    integrate_tail(f, sc.r0, sc.tol, exponent)
}

/// (cond-int1b), the σ = μ form: `∫_{r₀}^∞ r^{2αq−1} / V(r)^{q−1} dr`.
pub fn eval_cond_int1b(volume: &VolumeProfile<f64>, alpha: f64, q: f64, r0: f64) -> Result<IntegralResult<f64>> {
    eval_cond_int1b_with_tol(volume, alpha, q, r0, crate::quadrature::DEFAULT_TOL)
}

/// [`eval_cond_int1b`] with an explicit relative tolerance.
pub fn eval_cond_int1b_with_tol(
    volume: &VolumeProfile<f64>,
    alpha: f64,
    q: f64,
    r0: f64,
    tol: f64,
) -> Result<IntegralResult<f64>> {
    if !(q > 1.0) || !(alpha > 0.0 && alpha < 1.0) || !(r0 > 0.0) {
        return Err(Error::Domain(format!("invalid parameters alpha={alpha}, q={q}, r0={r0}")));
    }
    let exponent = volume
        .asymptotic_exponent()
        .map(|n| 2.0 * alpha * q - 1.0 - n * (q - 1.0));
    integrate_tail(
        |r: f64| r.powf(2.0 * alpha * q - 1.0) / volume.eval(r).unwrap_or(f64::NAN).powf(q - 1.0),
        r0,
        tol,
        exponent,
    )
}

/// Lower and upper brackets of `∫₀^∞ σ(B(x,s) ∩ B(o,r)) s^{2α−1} / V(s) ds`
/// for `d(x,o) = d`.
///
/// For `s >= d + r` the ball `B(x,s)` contains `B(o,r)`, so that range
/// contributes exactly `σ(B(o,r)) R(d + r)`. Below that, `B(x,s)` still
/// contains `B(o, s − d)`, which completes the lower bracket. For
/// `s < d − r` the intersection is empty. On the remaining window the
/// intersection is bounded by `min(σ(B(x,s)), σ(B(o,r)))`.
pub fn intersection_brackets(sc: &Scenario, d: f64, r: f64) -> Result<(f64, f64)> {
    let sigma_r = sc.measure.sigma_ball(r, &sc.volume)?;
    let two_a = 2.0 * sc.alpha;
    let inner = |s: f64| -> f64 {
        let t = s - d;
        if t <= 0.0 {
            return 0.0;
        }
        let m = sc.measure.sigma_ball(t.min(r), &sc.volume).unwrap_or(f64::NAN);
        m / sc.volume.eval(s).unwrap_or(f64::NAN) * s.powf(two_a - 1.0)
    };
    let window = if d > 0.0 {
        piecewise_log(&inner, d, d + r, 2.0 * d, sc.tol)
    } else {
        let head = integrate_to_zero(inner, r, sc.tol)?;
        if head.is_finite() {
            head.value
        } else {
            f64::INFINITY
        }
    };
    let lower = sigma_r * sc.r_of(d + r)? + window;
    let f = |s: f64| -> f64 {
        let up = sc.measure.ball_upper(d, s, &sc.volume).unwrap_or(f64::NAN);
        up.min(sigma_r) / sc.volume.eval(s).unwrap_or(f64::NAN) * s.powf(two_a - 1.0)
    };
    let hi = d + r;
    let middle = if d > r {
        piecewise_log(&f, d - r, hi, d, sc.tol)
    } else {
        let cut = if d > 0.0 && d < hi { d } else { hi };
        // Unit-scale the head so the divergence threshold is not tripped by
        // large but finite magnitudes.
        let scale = match f(cut) {
            v if v.is_finite() && v > 0.0 => v * cut,
            _ => 1.0,
        };
        let head = integrate_to_zero(|t: f64| f(cut * t) * cut / scale, 1.0, sc.tol)?;
        if !head.is_finite() {
            f64::INFINITY
        } else {
            head.value * scale + piecewise_log(&f, cut, hi, hi, sc.tol)
        }
    };
    Ok((lower, lower + middle))
}

fn piecewise_log<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, split: f64, tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let wtol = (tol * 1e-3).max(1e-14);
    if split > a && split < b {
        integrate_log(f, a, split, wtol).0 + integrate_log(f, split, b, wtol).0
    } else {
        integrate_log(f, a, b, wtol).0
    }
}

/// Decade-stability verdict on a product matrix indexed `[r][x]`.
///
/// Each open edge of the sampled box (large `r`, small `d(x,o)`, large
/// `d(x,o)`) is probed separately: `S_j` is the sup with the last `j`
/// decades on that edge removed. The edge is stable when the outermost
/// decade adds at most 5% (`S_0 <= 1.05 S_1`) or adds less than the decade
/// before it (`S_0 − S_1 <= 0.9 (S_1 − S_2)`), i.e. the running sup is
/// converging rather than growing geometrically.
fn stability_verdict(values: &[Vec<f64>], x: &[f64], r: &[f64]) -> Result<Cond2Verdict> {
    let (x_lo, x_hi) = (x[0], x[x.len() - 1]);
    let r_hi = r[r.len() - 1];
    if x_hi / x_lo < 1e4 * (1.0 + 1e-9) || r_hi / r[0] < 1e2 * (1.0 + 1e-9) {
        return Err(Error::Domain(
            "cond-int2 grids must span at least four decades in x and two in r".into(),
        ));
    }
    let sup = |keep: &dyn Fn(f64, f64) -> bool| -> f64 {
        let mut m = 0.0_f64;
        for (i, row) in values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if keep(r[i], x[j]) {
                    m = m.max(if v.is_nan() { f64::INFINITY } else { v });
                }
            }
        }
        m
    };
    let slack = 1.0 + 1e-9;
    let edges: [&dyn Fn(f64, f64, f64) -> bool; 3] = [
        &|k, ri, _| ri <= r_hi / k * slack,
        &|k, _, xj| xj >= x_lo * k / slack,
        &|k, _, xj| xj <= x_hi / k * slack,
    ];
    for edge in edges {
        let s: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&k| sup(&|ri, xj| edge(k, ri, xj)))
            .collect();
        if !s[0].is_finite() {
            return Ok(Cond2Verdict::UnboundedTrend);
        }
        let (outer, inner) = (s[0] - s[1], s[1] - s[2]);
        if !(s[0] <= 1.05 * s[1] || outer <= 0.9 * inner) {
            return Ok(Cond2Verdict::UnboundedTrend);
        }
    }
    Ok(Cond2Verdict::Bounded)
}

/// (cond-int2) on sampled grids with upper and lower brackets.
pub fn eval_cond_int2(sc: &Scenario, grids: &Cond2Grids) -> Result<CondInt2> {
    sc.validate()?;
    require_transient(sc)?;
    if grids.x.iter().chain(&grids.r).any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("cond-int2 grids must be positive".into()));
    }
    let rows: Vec<Result<(Vec<f64>, Vec<f64>)>> = grids
        .r
        .par_iter()
        .map(|&r| {
            let w = sc.r_of(r)?.powf(sc.q - 1.0);
            let mut lo = Vec::with_capacity(grids.x.len());
            let mut hi = Vec::with_capacity(grids.x.len());
            for &d in &grids.x {
                let (l, u) = intersection_brackets(sc, d, r)?;
                lo.push(l * w);
                hi.push(u * w);
            }
            Ok((lo, hi))
        })
        .collect();
    let mut lower = Vec::with_capacity(rows.len());
    let mut upper = Vec::with_capacity(rows.len());
    for row in rows {
        let (l, u) = row?;
        lower.push(l);
        upper.push(u);
    }
    let verdict_lower = stability_verdict(&lower, &grids.x, &grids.r)?;
    let verdict_upper = stability_verdict(&upper, &grids.x, &grids.r)?;
    let verdict = if verdict_lower == verdict_upper {
        verdict_upper
    } else {
        Cond2Verdict::Indeterminate
    };
    let mut samples = Vec::with_capacity(grids.r.len() * grids.x.len());
    let mut sup_estimate = 0.0_f64;
    let mut sup_lower = 0.0_f64;
    for (i, &r) in grids.r.iter().enumerate() {
        for (j, &d) in grids.x.iter().enumerate() {
            sup_estimate = sup_estimate.max(upper[i][j]);
            sup_lower = sup_lower.max(lower[i][j]);
            samples.push(Cond2Sample {
                x_distance: d,
                r,
                lower: lower[i][j],
                upper: upper[i][j],
            });
        }
    }
    Ok(CondInt2 {
        sup_estimate,
        sup_lower,
        samples,
        verdict,
        verdict_upper,
        verdict_lower,
    })
}

/// `(n + γ) / (n − 2α)` when the scenario is a Euclidean power model.
pub fn henon_threshold_of(sc: &Scenario) -> Option<f64> {
    let VolumeKind::PowerLaw { n, .. } = sc.volume.kind else {
        return None;
    };
    let gamma = match sc.measure.kind {
        MeasureKind::PowerDensity { gamma, n: m } if m == n => gamma,
        MeasureKind::SameAsVolume => 0.0,
        _ => return None,
    };
    (n > 2.0 * sc.alpha).then(|| (n + gamma) / (n - 2.0 * sc.alpha))
}

/// Runs every applicable criterion and combines them into a verdict.
pub fn evaluate(sc: &Scenario, grids: &Cond2Grids) -> Result<CriterionReport> {
    sc.validate()?;
    let transient = check_transience(&sc.volume, sc.alpha)?;
    let henon_threshold = henon_threshold_of(sc);
    if !transient.is_finite() {
        return Ok(CriterionReport {
            transient,
            cond_int1: None,
            cond_int2: None,
            cond_int1b: None,
            henon_threshold,
            existence_verdict: ExistenceVerdict::NotExists,
        });
    }
    let cond_int1 = eval_cond_int1(sc)?;
    let cond_int2 = eval_cond_int2(sc, grids)?;
    let cond_int1b = if sc.measure.is_same_as_volume() {
        Some(eval_cond_int1b(&sc.volume, sc.alpha, sc.q, sc.r0)?)
    } else {
        None
    };
    let existence_verdict = match &cond_int1b {
        Some(b) => {
            if b.is_finite() {
                ExistenceVerdict::Exists
            } else {
                ExistenceVerdict::NotExists
            }
        }
        None => match (cond_int1.is_finite(), cond_int2.verdict) {
            (false, _) | (_, Cond2Verdict::UnboundedTrend) => ExistenceVerdict::NotExists,
            (true, Cond2Verdict::Bounded) => ExistenceVerdict::Exists,
            (true, Cond2Verdict::Indeterminate) => ExistenceVerdict::Inconclusive,
        },
    };
    Ok(CriterionReport {
        transient,
        cond_int1: Some(cond_int1),
        cond_int2: Some(cond_int2),
        cond_int1b,
        henon_threshold,
        existence_verdict,
    })
}

/// Closed-form Hardy-Hénon classification: exists iff `q > (n + γ)/(n − 2α)`.
pub fn henon_classify(n: f64, alpha: f64, gamma: f64, q: f64) -> Result<ExistenceVerdict> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(n > 2.0 * alpha) {
        return Err(Error::Domain(format!("n = {n} must exceed 2 alpha")));
    }
    if !(gamma > -2.0 * alpha) {
        return Err(Error::Domain(format!("gamma = {gamma} must exceed -2 alpha")));
    }
    if !(q > 1.0) {
        return Err(Error::Domain(format!("q must exceed 1, got {q}")));
    }
    Ok(if q > (n + gamma) / (n - 2.0 * alpha) {
        ExistenceVerdict::Exists
    } else {
        ExistenceVerdict::NotExists
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropSReport {
    /// `(∫_r^∞ φ t^{2α−1} dt)^s`.
    pub lhs: f64,
    /// `∫_r^∞ φ^s t^{2αs−1} dt`.
    pub integral_term: f64,
    /// `r^{2αs} φ(r)^s`.
    pub boundary_term: f64,
    /// Constant extracted from the proof.
    pub constant: f64,
    /// Smallest constant for which the inequality holds here.
    pub minimal_constant: f64,
    pub holds: bool,
}

/// `C(s, α) = s (2α)^{1−s} max((1 − 2^{−2α})^{s−1}, (2^{2α} − 1)^s / (2αs))`.
pub fn prop_s_constant(s: f64, alpha: f64) -> f64 {
    let ta = 2.0 * alpha;
    let a = (1.0 - 2f64.powf(-ta)).powf(s - 1.0);
    let b = (2f64.powf(ta) - 1.0).powf(s) / (ta * s);
    s * ta.powf(1.0 - s) * a.max(b)
}

/// Checks `(∫_r^∞ φ t^{2α−1})^s ≤ C ∫_r^∞ φ^s t^{2αs−1} + C r^{2αs} φ(r)^s`
/// for a non-increasing positive `φ`.
pub fn check_prop_s<F: Fn(f64) -> f64>(phi: F, s: f64, alpha: f64, r: f64, tol: f64) -> Result<PropSReport> {
    if !(s > 0.0 && s < 1.0) || !(alpha > 0.0 && alpha < 1.0) || !(r > 0.0) {
        return Err(Error::Domain(format!("invalid s={s}, alpha={alpha}, r={r}")));
    }
    let ta = 2.0 * alpha;
    let left = integrate_tail(|t| phi(t) * t.powf(ta - 1.0), r, tol, None)?;
    let right = integrate_tail(|t| phi(t).powf(s) * t.powf(ta * s - 1.0), r, tol, None)?;
    if !left.is_finite() || !right.is_finite() {
        return Err(Error::Precondition(format!(
            "integrals are not finite ({}, {})",
            left.status.as_str(),
            right.status.as_str()
        )));
    }
    let lhs = left.value.powf(s);
    let boundary_term = r.powf(ta * s) * phi(r).powf(s);
    let constant = prop_s_constant(s, alpha);
    let denom = right.value + boundary_term;
    Ok(PropSReport {
        lhs,
        integral_term: right.value,
        boundary_term,
        constant,
        minimal_constant: lhs / denom,
        holds: lhs <= constant * denom * (1.0 + 1e-9),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementaryReport {
    /// The series `Σ a_k (u_k − u_{k+1})` passed the truncation test.
    pub precondition_ok: bool,
    /// `a_k u_k ≤ Σ_{l≥k} a_l (u_l − u_{l+1})` at every checked index.
    pub holds: bool,
    pub series_sum: f64,
    /// Share of the series contributed by its second half.
    pub tail_share: f64,
    /// Largest `a_k u_k / (tail sum + a_k u_N)` seen.
    pub max_ratio: f64,
}

/// Checks the summation-by-parts bound behind `lim a_k u_k = 0`.
///
/// On a truncation of length `N` the exact identity
/// `Σ_{l=k}^{N−1} a_l (u_l − u_{l+1}) ≥ a_k (u_k − u_N)` is what can be
/// verified, so the right side carries the correction `a_k u_N`.
pub fn check_elementary_lemma(a: &[f64], u: &[f64]) -> Result<ElementaryReport> {
    let n = a.len();
    if n < 4 || u.len() != n {
        return Err(Error::Domain("sequences must have equal length of at least 4".into()));
    }
    if a.iter().chain(u).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain("sequences must be positive and finite".into()));
    }
    if a.windows(2).any(|w| w[1] < w[0]) || u.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Domain("a must be non-decreasing and u non-increasing".into()));
    }
    let terms: Vec<f64> = (0..n - 1).map(|k| a[k] * (u[k] - u[k + 1])).collect();
    let mut tails = vec![0.0; n];
    for k in (0..n - 1).rev() {
        tails[k] = tails[k + 1] + terms[k];
    }
    let series_sum = tails[0];
    let half = tails[(n - 1) / 2];
    let tail_share = if series_sum > 0.0 { half / series_sum } else { 0.0 };
    let precondition_ok = tail_share < 1e-2;
    let u_last = u[n - 1];
    let mut holds = true;
    let mut max_ratio = 0.0_f64;
    for k in 0..n - 1 {
        let rhs = tails[k] + a[k] * u_last;
        let lhs = a[k] * u[k];
        max_ratio = max_ratio.max(lhs / rhs);
        if lhs > rhs * (1.0 + 1e-12) {
            holds = false;
        }
    }
    Ok(ElementaryReport {
        precondition_ok,
        holds,
        series_sum,
        tail_share,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prop_s_worked_example() {
        let r = check_prop_s(|t| t.powi(-3), 0.5, 0.5, 1.0, 1e-10).unwrap();
        assert!((r.lhs - 0.5f64.sqrt()).abs() < 1e-9);
        assert!((r.integral_term - 1.0).abs() < 1e-9);
        assert!((r.boundary_term - 1.0).abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn prop_s_constant_phi_is_rejected() {
        assert!(matches!(
            check_prop_s(|_| 1.0, 0.5, 0.5, 1.0, 1e-10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn elementary_examples() {
        let a: Vec<f64> = (0..60).map(|k| 2f64.powi(k)).collect();
        let u: Vec<f64> = (0..60).map(|k| 4f64.powi(-k)).collect();
        let r = check_elementary_lemma(&a, &u).unwrap();
        assert!(r.precondition_ok && r.holds);

        let a: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        let u: Vec<f64> = (1..=1000).map(|k| 1.0 / (k * k) as f64).collect();
        let r = check_elementary_lemma(&a, &u).unwrap();
        assert!(r.precondition_ok && r.holds);

        let a: Vec<f64> = (0..60).map(|k| 2f64.powi(k)).collect();
        let u: Vec<f64> = (0..60).map(|k| 2f64.powi(-k)).collect();
        let r = check_elementary_lemma(&a, &u).unwrap();
        assert!(!r.precondition_ok);
    }

    #[test]
    fn henon_examples() {
        assert_eq!(henon_classify(3.0, 0.5, 0.0, 1.6).unwrap(), ExistenceVerdict::Exists);
        assert_eq!(henon_classify(3.0, 0.5, 1.0, 2.0).unwrap(), ExistenceVerdict::NotExists);
        assert_eq!(henon_classify(4.0, 0.75, -1.0, 1.3).unwrap(), ExistenceVerdict::Exists);
        assert!(henon_classify(1.0, 0.5, 0.0, 2.0).is_err());
        assert!(henon_classify(3.0, 0.5, -1.0, 2.0).is_err());
    }
}
