//! Adaptive quadrature for improper integrals with divergence classification.
//!
//! All routines work in the logarithmic variable `t = e^u`, where power-type
//! integrands become exponentials and windows `[ρ 2^k, ρ 2^{k+1}]` have equal
//! width. Window sums are accumulated strictly in order so results are
//! reproducible bit for bit.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Partial sums beyond this value are reported as numerically divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Maximum number of windows examined on one side of an integral.
const MAX_WINDOWS: usize = 2000;

/// Outcome class of an improper integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralStatus {
    /// Convergent by declared exponent; value within tolerance.
    Finite,
    /// Declared tail exponent is `>= -1`; no numerics were attempted.
    DivergentByExponent,
    /// Numeric windows failed to converge.
    NumericDivergent,
    /// Convergent by numeric window analysis.
    FiniteNumeric,
}

impl IntegralStatus {
    pub fn is_finite(self) -> bool {
        matches!(self, IntegralStatus::Finite | IntegralStatus::FiniteNumeric)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IntegralStatus::Finite => "finite",
            IntegralStatus::DivergentByExponent => "divergent-by-exponent",
            IntegralStatus::NumericDivergent => "numeric-divergent",
            IntegralStatus::FiniteNumeric => "finite-numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult<T> {
    pub status: IntegralStatus,
    /// Meaningful only when the status is finite; `+inf` otherwise.
    pub value: T,
    pub rel_error_estimate: T,
    pub tail_exponent: Option<T>,
}

impl<T: Real> IntegralResult<T> {
    pub fn is_finite(&self) -> bool {
        self.status.is_finite()
    }

    fn divergent(tail_exponent: Option<T>) -> Self {
        IntegralResult {
            status: IntegralStatus::DivergentByExponent,
            value: T::infinity(),
            rel_error_estimate: T::zero(),
            tail_exponent,
        }
    }
}

// Gauss-Kronrod 7/15 nodes and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 15-point panel on `[a, b]`. Returns `(value, error)`.
pub fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let two = lit::<T>(2.0);
    let center = (a + b) / two;
    let half = (b - a) / two;
    let fc = f(center);
    let mut res_k = fc * lit(WGK[7]);
    let mut res_g = fc * lit(WG[3]);
    let mut res_abs = fc.abs() * lit(WGK[7]);
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + (f1 + f2) * lit(WGK[j]);
        res_abs = res_abs + (f1.abs() + f2.abs()) * lit(WGK[j]);
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * lit(WG[j / 2]);
        }
    }
    let mean = res_k / two;
    let mut res_asc = (fc - mean).abs() * lit(WGK[7]);
    for j in 0..7 {
        res_asc = res_asc + ((fv1[j] - mean).abs() + (fv2[j] - mean).abs()) * lit(WGK[j]);
    }
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (lit::<T>(200.0) * err / res_asc).powf(lit(1.5));
        err = res_asc * if scale < T::one() { scale } else { T::one() };
    }
    let eps = T::epsilon();
    let round = res_abs * half.abs() * eps * lit(50.0);
    if round > err {
        err = round;
    }
    (res_k * half, err)
}

/// Globally adaptive Gauss-Kronrod integration on a finite interval.
///
/// Bisects the panel with the largest error estimate until the total error is
/// below `max(rel_tol * |value|, abs_tol)` or `max_panels` is reached.
pub fn adaptive<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    rel_tol: T,
    abs_tol: T,
    max_panels: usize,
) -> (T, T) {
    if a == b {
        return (T::zero(), T::zero());
    }
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: T = panels.iter().fold(T::zero(), |s, p| s + p.2);
        let err: T = panels.iter().fold(T::zero(), |s, p| s + p.3);
        let target = (rel_tol * total.abs()).max(abs_tol);
        if err <= target || panels.len() >= max_panels || !total.is_finite() {
            return (total, err);
        }
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.3 > panels[worst].3 {
                worst = i;
            }
        }
        let (pa, pb, _, _) = panels[worst];
        let mid = (pa + pb) / lit(2.0);
        if mid <= pa || mid >= pb {
            return (total, err);
        }
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        panels[worst] = (pa, mid, v1, e1);
        panels.insert(worst + 1, (mid, pb, v2, e2));
    }
}

/// Integrates `f` over `[a, b]` with `0 < a < b` in the variable `u = ln t`.
pub fn integrate_log<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, rel_tol: T) -> (T, T) {
    let g = |u: T| {
        let t = u.exp();
        f(t) * t
    };
    adaptive(&g, a.ln(), b.ln(), rel_tol, T::min_positive_value(), 400)
}

/// Sums a sequence of non-negative window integrals until the tail is negligible.
///
/// Convergence is accepted either when a window is negligible against the
/// running sum, or when the geometric extrapolation `S + I r / (1 - r)`, with
/// `r` the ratio of successive windows, agrees with itself over consecutive
/// windows. A ratio not clearly below one never triggers extrapolation, so
/// slowly convergent and slowly divergent tails are told apart by the sign of
/// `ln r` rather than by the size of the partial sum.
fn window_series<T: Real, W: FnMut(usize) -> Option<(T, T)>>(
    mut window: W,
    tol: T,
) -> (IntegralStatus, T, T) {
    let big = lit::<T>(DIVERGENCE_THRESHOLD);
    let ratio_cap = T::one() - lit(1e-6);
    let mut sum = T::zero();
    let mut err = T::zero();
    let mut prev: Option<T> = None;
    let mut prev_ext: Option<T> = None;
    let mut stable = 0;
    for k in 0..MAX_WINDOWS {
        let Some((inc, e)) = window(k) else {
            break;
        };
        sum = sum + inc;
        err = err + e;
        if !sum.is_finite() || sum > big {
            return (IntegralStatus::NumericDivergent, sum, err);
        }
        if let Some(p) = prev {
            if p == T::zero() && inc == T::zero() && sum > T::zero() {
                return (IntegralStatus::FiniteNumeric, sum, err);
            }
            if k >= 2 && inc <= sum * tol * lit(1e-3) && inc <= p {
                return (IntegralStatus::FiniteNumeric, sum, err + inc);
            }
            if p > T::zero() {
                let r = inc / p;
                if r < ratio_cap {
                    let rem = inc * r / (T::one() - r);
                    let ext = sum + rem;
                    if ext > big {
                        return (IntegralStatus::NumericDivergent, ext, err);
                    }
                    if let Some(pe) = prev_ext {
                        let change = (ext - pe).abs();
                        if change <= tol * ext {
                            stable += 1;
                            if stable >= 2 {
                                return (IntegralStatus::FiniteNumeric, ext, err + change);
                            }
                        } else {
                            stable = 0;
                        }
                    }
                    prev_ext = Some(ext);
                } else {
                    prev_ext = None;
                    stable = 0;
                }
            }
        }
        prev = Some(inc);
    }
    if sum == T::zero() {
        return (IntegralStatus::FiniteNumeric, sum, err);
    }
    (IntegralStatus::NumericDivergent, sum, err)
}

fn window_tol<T: Real>(tol: T) -> T {
    (tol * lit(1e-3)).max(T::epsilon() * lit(100.0))
}

/// Integrates `f` over `(rho, ∞)`.
///
/// A declared asymptotic exponent `p` (meaning `f(t) ~ t^p`) preempts numeric
/// divergence hunting: `p >= -1` is reported divergent immediately.
pub fn integrate_tail<T: Real, F: Fn(T) -> T>(
    f: F,
    rho: T,
    tol: T,
    exponent: Option<T>,
) -> Result<IntegralResult<T>> {
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(Error::Domain(format!("tail start must be positive, got {rho}")));
    }
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if let Some(p) = exponent {
        if p >= -T::one() {
            return Ok(IntegralResult::divergent(exponent));
        }
    }
    let wtol = window_tol(tol);
    let limit = T::max_value() / lit(4.0);
    let mut a = rho;
    let mut undefined_at = None;
    let (status, value, err) = window_series(
        |_| {
            if a > limit {
                return None;
            }
            let b = a + a;
            let out = integrate_log(&f, a, b, wtol);
            if out.0.is_nan() {
                undefined_at = Some(a);
                return None;
            }
            a = b;
            Some(out)
        },
        tol,
    );
    if let Some(at) = undefined_at {
        if !status.is_finite() {
            return Err(Error::UnsupportedRange(format!("integrand undefined beyond t = {at}")));
        }
    }
    let status = match (status, exponent) {
        (IntegralStatus::FiniteNumeric, Some(_)) => IntegralStatus::Finite,
        (s, _) => s,
    };
    Ok(IntegralResult {
        status,
        value: if status.is_finite() { value } else { T::infinity() },
        rel_error_estimate: if value > T::zero() { err / value } else { err },
        tail_exponent: exponent,
    })
}

/// Integrates `f` over `(0, end)`, or `(0, ∞)` when `end` is `None`, where
/// `f(s) ~ s^beta` near zero.
///
/// The substitution `s = e^u` removes the endpoint singularity; the integral
/// is summed over unit windows in `u` outward from `ln end` (or from `u = 0`
/// in both directions for an infinite range). For an infinite range a declared
/// decay exponent `tail_exponent >= -1` reports divergence without numerics.
pub fn integrate_singular<T: Real, F: Fn(T) -> T>(
    f: F,
    end: Option<T>,
    beta: T,
    tail_exponent: Option<T>,
    tol: T,
) -> Result<IntegralResult<T>> {
    if !(beta > -T::one()) {
        return Err(Error::NonIntegrableSingularity(beta.to_f64().unwrap_or(f64::NAN)));
    }
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if let Some(t) = end {
        if !(t > T::zero()) {
            return Err(Error::Domain(format!("upper limit must be positive, got {t}")));
        }
    }
    if end.is_none() {
        if let Some(p) = tail_exponent {
            if p >= -T::one() {
                return Ok(IntegralResult::divergent(tail_exponent));
            }
        }
    }
    let wtol = window_tol(tol);
    let g = |u: T| {
        let s = u.exp();
        f(s) * s
    };
    let u_cap = lit::<T>(700.0);
    let top = end.map(|t| t.ln()).unwrap_or_else(T::zero);

    let (up_status, up_value, up_err) = if end.is_none() {
        window_series(
            |k| {
                let lo = T::from_usize(k).unwrap();
                if lo > u_cap {
                    return None;
                }
                Some(adaptive(&g, lo, lo + T::one(), wtol, T::min_positive_value(), 200))
            },
            tol,
        )
    } else {
        (IntegralStatus::FiniteNumeric, T::zero(), T::zero())
    };
    let (down_status, down_value, down_err) = window_series(
        |k| {
            let hi = top - T::from_usize(k).unwrap();
            if hi < -u_cap {
                return None;
            }
            Some(adaptive(&g, hi - T::one(), hi, wtol, T::min_positive_value(), 200))
        },
        tol,
    );
    let value = up_value + down_value;
    let finite = up_status.is_finite() && down_status.is_finite();
    let status = if !finite {
        IntegralStatus::NumericDivergent
    } else if end.is_some() || tail_exponent.is_some() {
        IntegralStatus::Finite
    } else {
        IntegralStatus::FiniteNumeric
    };
    let err = up_err + down_err;
    Ok(IntegralResult {
        status,
        value: if finite { value } else { T::infinity() },
        rel_error_estimate: if value > T::zero() { err / value } else { err },
        tail_exponent,
    })
}

/// Integrates `f` over `(0, end)` without a declared endpoint exponent; the
/// behavior at zero is classified from the unit windows in `ln s`.
pub fn integrate_to_zero<T: Real, F: Fn(T) -> T>(f: F, end: T, tol: T) -> Result<IntegralResult<T>> {
    if !(end > T::zero()) || !(tol > T::zero()) {
        return Err(Error::Domain(format!("need positive end and tolerance, got {end}, {tol}")));
    }
    let wtol = window_tol(tol);
    let g = |u: T| {
        let s = u.exp();
        f(s) * s
    };
    let u_cap = lit::<T>(700.0);
    let top = end.ln();
    let (status, value, err) = window_series(
        |k| {
            let hi = top - T::from_usize(k).unwrap();
            if hi < -u_cap {
                return None;
            }
            Some(adaptive(&g, hi - T::one(), hi, wtol, T::min_positive_value(), 200))
        },
        tol,
    );
    Ok(IntegralResult {
        status,
        value: if status.is_finite() { value } else { T::infinity() },
        rel_error_estimate: if value > T::zero() { err / value } else { err },
        tail_exponent: None,
    })
}

/// Integrates `f` over `[a, b]` with `0 <= a < b`, where `f(s) ~ s^beta` near
/// zero when `a = 0`. Returns the value.
pub fn integrate_interval<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    beta: T,
    tol: T,
) -> Result<T> {
    if !(b > a) {
        return Ok(T::zero());
    }
    if a > T::zero() {
        return Ok(integrate_log(&f, a, b, window_tol(tol)).0);
    }
    let r = integrate_singular(f, Some(b), beta, None, tol)?;
    Ok(r.value)
}
