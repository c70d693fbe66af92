//! Scalar abstraction for the generic numeric core.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating-point scalar accepted by the profile, quadrature and Green routines.
pub trait Real:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Gamma function.
    fn gamma(self) -> Self;
}

impl Real for f32 {
    fn gamma(self) -> Self {
        libm::tgammaf(self)
    }
}

impl Real for f64 {
    fn gamma(self) -> Self {
        libm::tgamma(self)
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Surface area of the unit sphere S^{n-1}, for real `n > 0`.
pub fn sphere_area<T: Real>(n: T) -> T {
    let two = lit::<T>(2.0);
    let pi = lit::<T>(std::f64::consts::PI);
    two * pi.powf(n / two) / (n / two).gamma()
}

/// Volume of the unit ball in dimension `n`.
pub fn unit_ball_volume<T: Real>(n: T) -> T {
    sphere_area(n) / n
}

/// Logarithmically spaced grid with `points` entries from `lo` to `hi` inclusive.
pub fn log_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    if points <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let denom = T::from_usize(points - 1).unwrap();
    (0..points)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == points {
                hi
            } else {
                (a + (b - a) * T::from_usize(i).unwrap() / denom).exp()
            }
        })
        .collect()
}

/// Linearly spaced grid with `points` entries from `lo` to `hi` inclusive.
pub fn lin_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    if points <= 1 {
        return vec![lo];
    }
    let denom = T::from_usize(points - 1).unwrap();
    (0..points)
        .map(|i| lo + (hi - lo) * T::from_usize(i).unwrap() / denom)
        .collect()
}
