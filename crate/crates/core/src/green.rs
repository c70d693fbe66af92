//! Fractional Green kernel by closed form, subordination and volume estimate.

use crate::error::{Error, Result};
use crate::profiles::VolumeProfile;
use crate::quadrature::{integrate_singular, integrate_tail};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenRoute {
    RieszExact,
    Subordination,
    VolumeEstimate,
}

impl GreenRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            GreenRoute::RieszExact => "riesz-exact",
            GreenRoute::Subordination => "subordination",
            GreenRoute::VolumeEstimate => "volume-estimate",
        }
    }
}

/// A kernel value; `value` is `+inf` exactly at distance zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenValue<T> {
    pub value: T,
    pub route: GreenRoute,
    pub distance: T,
}

fn check_distance<T: Real>(r: T) -> Result<()> {
    if r >= T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("distance must be non-negative and finite, got {r}")))
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")))
    }
}

fn check_transient<T: Real>(n: T, alpha: T) -> Result<()> {
    if n > alpha + alpha {
        Ok(())
    } else {
        Err(Error::Recurrent(format!("n = {n} does not exceed 2 alpha = {}", alpha + alpha)))
    }
}

/// `C(n, α) = Γ(n/2 − α) / (Γ(α) 4^α π^{n/2})`.
pub fn riesz_constant<T: Real>(n: T, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    check_transient(n, alpha)?;
    let half_n = n / lit(2.0);
    let pi = lit::<T>(std::f64::consts::PI);
    Ok((half_n - alpha).gamma() / (alpha.gamma() * lit::<T>(4.0).powf(alpha) * pi.powf(half_n)))
}

/// `C(n, α) r^{2α − n}`.
pub fn green_riesz<T: Real>(n: T, alpha: T, r: T) -> Result<GreenValue<T>> {
    let c = riesz_constant(n, alpha)?;
    check_distance(r)?;
    let value = if r == T::zero() {
        T::infinity()
    } else {
        c * r.powf(alpha + alpha - n)
    };
    Ok(GreenValue {
        value,
        route: GreenRoute::RieszExact,
        distance: r,
    })
}

/// Gaussian heat kernel `p_s(r) = (4πs)^{−n/2} e^{−r²/(4s)}`.
pub fn euclidean_heat_kernel<T: Real>(n: T) -> impl Fn(T, T) -> T {
    move |s: T, r: T| {
        let four = lit::<T>(4.0);
        let pi = lit::<T>(std::f64::consts::PI);
        (four * pi * s).powf(-n / lit(2.0)) * (-(r * r) / (four * s)).exp()
    }
}

/// `(1/Γ(α)) ∫₀^∞ s^{α−1} p_s(r) ds` by quadrature.
///
/// `decay` is the exponent with `p_s(r) ~ s^{decay}` as `s → ∞`; the
/// integral is declared non-integrable, and the kernel recurrent, when
/// `α − 1 + decay >= −1`.
pub fn green_subordinated<T: Real, H: Fn(T, T) -> T>(
    heat: H,
    decay: T,
    alpha: T,
    r: T,
    tol: T,
) -> Result<GreenValue<T>> {
    check_alpha(alpha)?;
    check_distance(r)?;
    let tail = alpha - T::one() + decay;
    if tail >= -T::one() {
        return Err(Error::Recurrent(format!(
            "subordination integrand decays like s^{tail}, not integrable at infinity"
        )));
    }
    if r == T::zero() {
        return Ok(GreenValue {
            value: T::infinity(),
            route: GreenRoute::Subordination,
            distance: r,
        });
    }
    // s = r² σ puts the bulk of the heat kernel mass near σ of order one.
    let r2 = r * r;
    let f = |sigma: T| sigma.powf(alpha - T::one()) * heat(r2 * sigma, r);
    let res = integrate_singular(f, None, alpha - T::one(), Some(tail), tol)?;
    if !res.is_finite() {
        return Err(Error::Recurrent("subordination integral failed to converge".into()));
    }
    Ok(GreenValue {
        value: r.powf(alpha + alpha) * res.value / alpha.gamma(),
        route: GreenRoute::Subordination,
        distance: r,
    })
}

/// Subordination route with the Euclidean heat kernel in dimension `n`.
pub fn green_subordinated_euclidean<T: Real>(n: T, alpha: T, r: T, tol: T) -> Result<GreenValue<T>> {
    green_subordinated(euclidean_heat_kernel(n), -n / lit(2.0), alpha, r, tol)
}

/// `R(d) = ∫_d^∞ t^{2α−1} / V(t) dt`.
pub fn green_volume_estimate<T: Real>(
    profile: &VolumeProfile<T>,
    alpha: T,
    d: T,
    tol: T,
) -> Result<GreenValue<T>> {
    check_alpha(alpha)?;
    check_distance(d)?;
    let exponent = profile
        .asymptotic_exponent()
        .map(|n| alpha + alpha - T::one() - n);
    if d == T::zero() {
        // Transience is still decided from the tail.
        green_volume_estimate(profile, alpha, T::one(), tol)?;
        return Ok(GreenValue {
            value: T::infinity(),
            route: GreenRoute::VolumeEstimate,
            distance: d,
        });
    }
    let two_alpha = alpha + alpha;
    let f = |t: T| t.powf(two_alpha - T::one()) / profile.eval(t).unwrap_or_else(|_| T::nan());
    let res = integrate_tail(f, d, tol, exponent)?;
    if !res.is_finite() || !res.value.is_finite() {
        return Err(Error::Recurrent(format!(
            "∫ t^(2α−1)/V(t) dt diverges ({})",
            res.status.as_str()
        )));
    }
    Ok(GreenValue {
        value: res.value,
        route: GreenRoute::VolumeEstimate,
        distance: d,
    })
}

/// Minimum and maximum of `R(d) / G_riesz(d)` over `d_grid`.
pub fn comparison_ratio<T: Real>(
    profile: &VolumeProfile<T>,
    n: T,
    alpha: T,
    d_grid: &[T],
    tol: T,
) -> Result<(T, T)> {
    if d_grid.is_empty() {
        return Err(Error::Domain("comparison grid is empty".into()));
    }
    let mut lo = T::infinity();
    let mut hi = T::zero();
    for &d in d_grid {
        if !(d > T::zero()) {
            return Err(Error::Domain(format!("comparison distance must be positive, got {d}")));
        }
        let ratio = green_volume_estimate(profile, alpha, d, tol)?.value / green_riesz(n, alpha, d)?.value;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok((lo, hi))
}

/// Source of the Green kernel values used for truncation.
#[derive(Debug, Clone, PartialEq)]
pub enum GreenContext<T> {
    Riesz { n: T, alpha: T },
    VolumeEstimate { profile: VolumeProfile<T>, alpha: T, tol: T },
}

impl<T: Real> GreenContext<T> {
    pub fn eval(&self, d: T) -> Result<T> {
        match self {
            GreenContext::Riesz { n, alpha } => Ok(green_riesz(*n, *alpha, d)?.value),
            GreenContext::VolumeEstimate { profile, alpha, tol } => {
                Ok(green_volume_estimate(profile, *alpha, d, *tol)?.value)
            }
        }
    }
}

/// `m(x) = G(x, o) ∧ a^{−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedGreen<T> {
    pub base: GreenContext<T>,
    pub a: T,
}

impl<T: Real> TruncatedGreen<T> {
    pub fn new(base: GreenContext<T>, a: T) -> Result<Self> {
        if !(a > T::zero()) {
            return Err(Error::Domain(format!("truncation level a must be positive, got {a}")));
        }
        Ok(TruncatedGreen { base, a })
    }

    pub fn eval(&self, x_distance: T) -> Result<T> {
        Ok(truncated_m(self.base.eval(x_distance)?, self.a))
    }
}

/// `min(g, 1/a)`.
pub fn truncated_m<T: Real>(g: T, a: T) -> T {
    g.min(T::one() / a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riesz_rejects_recurrent_dimension() {
        assert!(matches!(green_riesz(1.0_f64, 0.5, 1.0), Err(Error::Recurrent(_))));
        assert!(matches!(
            green_subordinated_euclidean(1.0_f64, 0.5, 1.0, 1e-10),
            Err(Error::Recurrent(_))
        ));
    }

    #[test]
    fn riesz_infinite_at_zero() {
        assert!(green_riesz(3.0_f64, 0.5, 0.0).unwrap().value.is_infinite());
    }

    #[test]
    fn volume_estimate_cube() {
        let v = VolumeProfile::power_law(1.0_f64, 3.0).unwrap();
        let g = green_volume_estimate(&v, 0.5, 2.0, 1e-10).unwrap();
        assert!((g.value - 0.125).abs() < 1e-11);
    }

    #[test]
    fn volume_estimate_recurrent() {
        let v = VolumeProfile::power_law(1.0_f64, 1.0).unwrap();
        assert!(matches!(green_volume_estimate(&v, 0.5, 2.0, 1e-10), Err(Error::Recurrent(_))));
    }

    #[test]
    fn truncation_levels() {
        let m = TruncatedGreen::new(GreenContext::Riesz { n: 3.0_f64, alpha: 0.5 }, 1.0).unwrap();
        assert_eq!(m.eval(0.0).unwrap(), 1.0);
        assert_eq!(truncated_m(0.7_f64, 2.0), 0.5);
        assert!(m.eval(10.0).unwrap() < 1.0);
    }
}
