//! Volume-growth and measure-growth models of radial spaces.

use crate::error::{Error, Result};
use crate::scalar::{lit, log_grid, sphere_area, unit_ball_volume, Real};

#[derive(Debug, Clone, PartialEq)]
pub enum VolumeKind<T> {
    /// `V(r) = c r^n`.
    PowerLaw { c: T, n: T },
    /// `V(r) = c_i r^{e_i}` on the `i`-th piece; `c_0` is given and the rest
    /// follow from continuity at the breakpoints.
    PiecewisePower {
        breakpoints: Vec<T>,
        exponents: Vec<T>,
        coefficients: Vec<T>,
    },
    /// Sampled `(r, V(r))` pairs, interpolated linearly in log-log scale.
    Table {
        r: Vec<T>,
        v: Vec<T>,
        tail_exponent: Option<T>,
    },
}

/// Radial volume function `r ↦ μ(B(o, r))`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeProfile<T> {
    pub kind: VolumeKind<T>,
    pub doubling_constant: T,
}

fn positive<T: Real>(x: T, what: &str) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive and finite, got {x}")))
    }
}

impl<T: Real> VolumeProfile<T> {
    pub fn power_law(c: T, n: T) -> Result<Self> {
        positive(c, "power-law coefficient")?;
        positive(n, "power-law exponent")?;
        Ok(VolumeProfile {
            kind: VolumeKind::PowerLaw { c, n },
            doubling_constant: lit::<T>(2.0).powf(n),
        })
    }

    /// Lebesgue measure of Euclidean balls in dimension `n`.
    pub fn euclidean(n: T) -> Result<Self> {
        positive(n, "dimension")?;
        Self::power_law(unit_ball_volume(n), n)
    }

    /// Piecewise power law with `exponents.len() == breakpoints.len() + 1`.
    pub fn piecewise(c0: T, breakpoints: Vec<T>, exponents: Vec<T>) -> Result<Self> {
        positive(c0, "first-piece coefficient")?;
        if exponents.len() != breakpoints.len() + 1 {
            return Err(Error::Domain(format!(
                "piecewise profile needs {} exponents for {} breakpoints, got {}",
                breakpoints.len() + 1,
                breakpoints.len(),
                exponents.len()
            )));
        }
        for &b in &breakpoints {
            positive(b, "breakpoint")?;
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("breakpoints must be strictly increasing".into()));
        }
        for &e in &exponents {
            if !(e >= T::zero()) || !e.is_finite() {
                return Err(Error::Domain(format!("exponent must be non-negative, got {e}")));
            }
        }
        let mut coefficients = vec![c0];
        for (i, &b) in breakpoints.iter().enumerate() {
            let prev = coefficients[i];
            coefficients.push(prev * b.powf(exponents[i] - exponents[i + 1]));
        }
        let mut p = VolumeProfile {
            kind: VolumeKind::PiecewisePower {
                breakpoints,
                exponents,
                coefficients,
            },
            doubling_constant: T::one(),
        };
        p.doubling_constant = p.dense_doubling();
        Ok(p)
    }

    /// Tabulated profile. `tail_exponent` enables extrapolation beyond the
    /// last sample; below the first sample the first piece is extended.
    pub fn table(r: Vec<T>, v: Vec<T>, tail_exponent: Option<T>) -> Result<Self> {
        if r.len() < 2 || r.len() != v.len() {
            return Err(Error::Domain("table needs at least two (r, V) pairs of equal length".into()));
        }
        for (&ri, &vi) in r.iter().zip(&v) {
            positive(ri, "table radius")?;
            positive(vi, "table volume")?;
        }
        if r.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("table radii must be strictly increasing".into()));
        }
        if v.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain("table volumes must be non-decreasing".into()));
        }
        if let Some(p) = tail_exponent {
            if !(p >= T::zero()) {
                return Err(Error::Domain(format!("tail exponent must be non-negative, got {p}")));
            }
        }
        let mut p = VolumeProfile {
            kind: VolumeKind::Table { r, v, tail_exponent },
            doubling_constant: T::one(),
        };
        p.doubling_constant = p.sample_doubling();
        Ok(p)
    }

    /// Table whose tail continues the power fit of its last piece.
    pub fn table_with_last_piece_tail(r: Vec<T>, v: Vec<T>) -> Result<Self> {
        let k = r.len();
        if k < 2 || v.len() != k {
            return Self::table(r, v, None);
        }
        let slope = (v[k - 1] / v[k - 2]).ln() / (r[k - 1] / r[k - 2]).ln();
        Self::table(r, v, Some(slope))
    }

    /// Exponent `n_∞` with `V(r) ~ r^{n_∞}` as `r → ∞`, when known.
    pub fn asymptotic_exponent(&self) -> Option<T> {
        match &self.kind {
            VolumeKind::PowerLaw { n, .. } => Some(*n),
            VolumeKind::PiecewisePower { exponents, .. } => exponents.last().copied(),
            VolumeKind::Table { tail_exponent, .. } => *tail_exponent,
        }
    }

    /// Radius beyond which `V` is an exact power law with the asymptotic exponent.
    pub fn power_tail_start(&self) -> Option<T> {
        match &self.kind {
            VolumeKind::PowerLaw { .. } => Some(T::zero()),
            VolumeKind::PiecewisePower { breakpoints, .. } => {
                Some(breakpoints.last().copied().unwrap_or_else(T::zero))
            }
            VolumeKind::Table { r, tail_exponent, .. } => tail_exponent.map(|_| *r.last().unwrap()),
        }
    }

    /// Evaluates `V(r)`.
    pub fn eval(&self, r: T) -> Result<T> {
        if !(r > T::zero()) {
            return Err(Error::Domain(format!("volume radius must be positive, got {r}")));
        }
        match &self.kind {
            VolumeKind::PowerLaw { c, n } => Ok(*c * r.powf(*n)),
            VolumeKind::PiecewisePower {
                breakpoints,
                exponents,
                coefficients,
            } => {
                let i = breakpoints.iter().take_while(|&&b| r > b).count();
                Ok(coefficients[i] * r.powf(exponents[i]))
            }
            VolumeKind::Table { r: rs, v, tail_exponent } => {
                let last = rs.len() - 1;
                if r > rs[last] {
                    return match tail_exponent {
                        Some(p) => Ok(v[last] * (r / rs[last]).powf(*p)),
                        None => Err(Error::UnsupportedRange(format!(
                            "radius {r} beyond table end {} and no tail exponent declared",
                            rs[last]
                        ))),
                    };
                }
                let j = rs.iter().take_while(|&&x| x < r).count().clamp(1, last);
                let (r0, r1, v0, v1) = (rs[j - 1], rs[j], v[j - 1], v[j]);
                let slope = (v1 / v0).ln() / (r1 / r0).ln();
                Ok(v0 * (r / r0).powf(slope))
            }
        }
    }

    /// Empirical doubling constant `max V(2r)/V(r)` over `r_grid`.
    pub fn check_doubling(&self, r_grid: &[T]) -> Result<T> {
        if r_grid.is_empty() {
            return Err(Error::Domain("doubling grid is empty".into()));
        }
        let mut best = T::zero();
        for &r in r_grid {
            let ratio = self.eval(r + r)? / self.eval(r)?;
            if ratio > best {
                best = ratio;
            }
        }
        Ok(best)
    }

    fn dense_doubling(&self) -> T {
        let VolumeKind::PiecewisePower {
            breakpoints,
            exponents,
            ..
        } = &self.kind
        else {
            return T::one();
        };
        let two = lit::<T>(2.0);
        if breakpoints.is_empty() {
            return two.powf(exponents[0]);
        }
        let lo = breakpoints[0] / lit(8.0);
        let hi = *breakpoints.last().unwrap() * lit(8.0);
        let decades = (hi / lo).log10().ceil().to_usize().unwrap_or(1).max(1);
        let grid = log_grid(lo, hi, 400 * decades + 1);
        let sampled = self.check_doubling(&grid).unwrap_or(T::one());
        let ends = two
            .powf(exponents[0])
            .max(two.powf(*exponents.last().unwrap()));
        sampled.max(ends)
    }

    fn sample_doubling(&self) -> T {
        let VolumeKind::Table { r, .. } = &self.kind else {
            return T::one();
        };
        let grid: Vec<T> = r
            .iter()
            .copied()
            .filter(|&x| self.eval(x + x).is_ok())
            .collect();
        if grid.is_empty() {
            return T::one();
        }
        self.check_doubling(&grid).unwrap_or(T::one())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureKind<T> {
    /// `dσ = |x|^γ dx` on `ℝ^n`.
    PowerDensity { gamma: T, n: T },
    /// `σ = δ_o`.
    DiracAtOrigin,
    /// `σ = μ`.
    SameAsVolume,
    /// Sampled `(r, σ(B(o, r)))` pairs, stored with the same interpolation
    /// rules as a volume table.
    Table(VolumeProfile<T>),
}

/// Radial growth model of the measure `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureProfile<T> {
    pub kind: MeasureKind<T>,
}

impl<T: Real> MeasureProfile<T> {
    pub fn power_density(gamma: T, n: T) -> Result<Self> {
        positive(n, "dimension")?;
        if !(n + gamma > T::zero()) {
            return Err(Error::Domain(format!("density |x|^{gamma} is not locally integrable in dimension {n}")));
        }
        Ok(MeasureProfile {
            kind: MeasureKind::PowerDensity { gamma, n },
        })
    }

    pub fn dirac() -> Self {
        MeasureProfile {
            kind: MeasureKind::DiracAtOrigin,
        }
    }

    pub fn same_as_volume() -> Self {
        MeasureProfile {
            kind: MeasureKind::SameAsVolume,
        }
    }

    pub fn table(r: Vec<T>, s: Vec<T>, tail_exponent: Option<T>) -> Result<Self> {
        Ok(MeasureProfile {
            kind: MeasureKind::Table(VolumeProfile::table(r, s, tail_exponent)?),
        })
    }

    pub fn is_same_as_volume(&self) -> bool {
        matches!(self.kind, MeasureKind::SameAsVolume)
    }

    /// `σ(B(o, r))`.
    pub fn sigma_ball(&self, r: T, vol: &VolumeProfile<T>) -> Result<T> {
        if !(r > T::zero()) {
            return Err(Error::Domain(format!("measure radius must be positive, got {r}")));
        }
        match &self.kind {
            MeasureKind::PowerDensity { gamma, n } => {
                let e = *n + *gamma;
                Ok(sphere_area(*n) / e * r.powf(e))
            }
            MeasureKind::DiracAtOrigin => Ok(T::one()),
            MeasureKind::SameAsVolume => vol.eval(r),
            MeasureKind::Table(t) => t.eval(r),
        }
    }

    /// Pointwise density `θ` with respect to the volume measure, where defined.
    pub fn density(&self, x_norm: T) -> Option<T> {
        match &self.kind {
            MeasureKind::PowerDensity { gamma, .. } => Some(x_norm.powf(*gamma)),
            MeasureKind::SameAsVolume => Some(T::one()),
            _ => None,
        }
    }

    /// Exponent `s` with `σ(B(o, r)) ~ r^s` as `r → ∞`, when known.
    pub fn asymptotic_exponent(&self, vol: &VolumeProfile<T>) -> Option<T> {
        match &self.kind {
            MeasureKind::PowerDensity { gamma, n } => Some(*n + *gamma),
            MeasureKind::DiracAtOrigin => Some(T::zero()),
            MeasureKind::SameAsVolume => vol.asymptotic_exponent(),
            MeasureKind::Table(t) => t.asymptotic_exponent(),
        }
    }

    /// Upper bound for `σ(B(x, s))` over points `x` with `d(x, o) = d`, in the
    /// radial model where `μ(B(x, s))` is modeled by `V(s)`.
    pub fn ball_upper(&self, d: T, s: T, vol: &VolumeProfile<T>) -> Result<T> {
        match &self.kind {
            MeasureKind::PowerDensity { gamma, n } => {
                let lebesgue = unit_ball_volume(*n) * s.powf(*n);
                if *gamma >= T::zero() {
                    // The density is at most (d + s)^γ on the ball.
                    let a = (d + s).powf(*gamma) * lebesgue;
                    Ok(a.min(self.sigma_ball(d + s, vol)?))
                } else {
                    // A radially decreasing density puts the most mass on the
                    // centered ball; away from o the density is at most (d - s)^γ.
                    let centered = self.sigma_ball(s, vol)?;
                    if s < d {
                        Ok(centered.min((d - s).powf(*gamma) * lebesgue))
                    } else {
                        Ok(centered)
                    }
                }
            }
            MeasureKind::DiracAtOrigin => Ok(if s > d { T::one() } else { T::zero() }),
            MeasureKind::SameAsVolume => vol.eval(s),
            MeasureKind::Table(t) => {
                let outer = t.eval(d + s)?;
                if s >= d {
                    return Ok(outer);
                }
                // Density with respect to μ on the annulus d - s < |y| < d + s.
                let mut theta = T::zero();
                let mut probe = vec![d - s, d + s];
                if let VolumeKind::Table { r, .. } = &t.kind {
                    probe.extend(r.iter().copied().filter(|&x| x > d - s && x < d + s));
                }
                for rho in probe {
                    theta = theta.max(radial_density(t, vol, rho)?);
                }
                Ok(outer.min(theta * vol.eval(s)?))
            }
        }
    }
}

/// Density `dσ/dμ` at radius `rho` for radial measures given by ball masses,
/// from local log-log slopes on both sides of `rho` (the larger is taken).
fn radial_density<T: Real>(sigma: &VolumeProfile<T>, vol: &VolumeProfile<T>, rho: T) -> Result<T> {
    let h = lit::<T>(1e-6);
    let up = T::one() + h;
    let down = T::one() - h;
    let slope = |p: &VolumeProfile<T>, a: T, b: T| -> Result<T> {
        Ok((p.eval(b)? / p.eval(a)?).ln() / (b / a).ln())
    };
    let mut best = T::zero();
    for (a, b) in [(rho * down, rho), (rho, rho * up)] {
        let ks = slope(sigma, a, b)?;
        let kv = slope(vol, a, b)?;
        if kv > T::zero() {
            best = best.max(ks / kv * sigma.eval(rho)? / vol.eval(rho)?);
        } else if ks > T::zero() {
            return Ok(T::infinity());
        }
    }
    Ok(best)
}

/// Model parameters of the inequality `(−Δ)^α u ≥ u^q σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    pub alpha: T,
    pub q: T,
    pub n: T,
    pub gamma: T,
    pub r0: T,
    pub a: T,
}

impl<T: Real> ModelParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero() && self.alpha < T::one()) {
            return Err(Error::Domain(format!("alpha must lie in (0,1), got {}", self.alpha)));
        }
        if !(self.q > T::one()) {
            return Err(Error::Domain(format!("q must exceed 1, got {}", self.q)));
        }
        positive(self.n, "n")?;
        positive(self.r0, "r0")?;
        positive(self.a, "a")?;
        Ok(())
    }

    /// Additional check required before any Euclidean Green evaluation.
    pub fn require_transient_euclidean(&self) -> Result<()> {
        if !(self.n > self.alpha + self.alpha) {
            return Err(Error::Recurrent(format!(
                "n = {} does not exceed 2 alpha = {}",
                self.n,
                self.alpha + self.alpha
            )));
        }
        Ok(())
    }

    pub fn require_henon_gamma(&self) -> Result<()> {
        if !(self.gamma > -(self.alpha + self.alpha)) {
            return Err(Error::Domain(format!(
                "gamma = {} must exceed -2 alpha = {}",
                self.gamma,
                -(self.alpha + self.alpha)
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_values() {
        let p = VolumeProfile::power_law(1.0_f64, 3.0).unwrap();
        assert_eq!(p.eval(2.0).unwrap(), 8.0);
        assert_eq!(p.doubling_constant, 8.0);
        assert_eq!(p.check_doubling(&[0.1, 1.0, 37.0]).unwrap(), 8.0);
    }

    #[test]
    fn piecewise_matches_continuity() {
        let p = VolumeProfile::piecewise(1.0_f64, vec![1.0], vec![2.0, 4.0]).unwrap();
        assert_eq!(p.eval(2.0).unwrap(), 16.0);
        assert_eq!(p.eval(0.5).unwrap(), 0.25);
        assert!((p.doubling_constant - 16.0).abs() < 1e-12);
    }

    #[test]
    fn table_interpolates_log_log() {
        let r: Vec<f64> = (0..6).map(|i| 2f64.powi(i)).collect();
        let v: Vec<f64> = r.iter().map(|x| x * x).collect();
        let p = VolumeProfile::table(r, v, None).unwrap();
        assert!((p.eval(3.0).unwrap() - 9.0).abs() < 1e-12);
        assert!((p.doubling_constant - 4.0).abs() < 1e-12);
        assert!(matches!(p.eval(100.0), Err(Error::UnsupportedRange(_))));
    }

    #[test]
    fn rejects_non_positive_radius() {
        let p = VolumeProfile::power_law(1.0_f64, 3.0).unwrap();
        assert!(matches!(p.eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(p.eval(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn dirac_ball_is_one() {
        let v = VolumeProfile::power_law(1.0_f64, 3.0).unwrap();
        let m = MeasureProfile::dirac();
        for r in [1e-6, 1.0, 1e9] {
            assert_eq!(m.sigma_ball(r, &v).unwrap(), 1.0);
        }
    }

    #[test]
    fn power_density_ball_mass() {
        let v = VolumeProfile::euclidean(3.0_f64).unwrap();
        let m = MeasureProfile::power_density(0.0, 3.0).unwrap();
        assert!((m.sigma_ball(2.0, &v).unwrap() - v.eval(2.0).unwrap()).abs() < 1e-12);
        let m1 = MeasureProfile::power_density(1.0, 3.0).unwrap();
        // ∫_{B(0,1)} |x| dx = 4π/4 = π.
        assert!((m1.sigma_ball(1.0, &v).unwrap() - std::f64::consts::PI).abs() < 1e-12);
    }
}
