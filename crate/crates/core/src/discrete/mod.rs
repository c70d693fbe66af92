//! Finite kernel spaces and brute-force checks of the potential-theoretic
//! lemmas: quasi-metric constant, Ptolemy, weak maximum principle,
//! minimality and rearrangement.

pub mod io;
pub mod lp;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::adaptive;

/// Largest space on which every subset is enumerated in [`wmp_constant`].
pub const EXACT_SUBSET_LIMIT: usize = 10;
/// Largest LP solved in exact arithmetic.
pub const EXACT_LP_LIMIT: usize = 7;

/// `a · b` with `0 · ∞ = 0`.
pub fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Ratio `num / den` used for "`num ≤ C den`" checks: an infinite denominator
/// or zero numerator give 0, a zero denominator with positive numerator gives `+∞`.
pub fn ratio0(num: f64, den: f64) -> f64 {
    if den.is_infinite() || num == 0.0 {
        0.0
    } else if num.is_infinite() || den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Finite set with a symmetric kernel `K: X × X → [0, ∞]` and atom masses `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpace {
    pub coords: Option<Vec<Vec<f64>>>,
    /// Row-major `n × n`.
    kernel: Vec<f64>,
    pub weights: Vec<f64>,
}

impl KernelSpace {
    pub fn new(kernel: Vec<Vec<f64>>, weights: Vec<f64>, coords: Option<Vec<Vec<f64>>>) -> Result<Self> {
        let n = kernel.len();
        if n == 0 {
            return Err(Error::Domain("kernel space must have at least one point".into()));
        }
        if weights.len() != n {
            return Err(Error::Domain(format!("expected {n} weights, got {}", weights.len())));
        }
        if let Some(c) = &coords {
            if c.len() != n {
                return Err(Error::Domain(format!("expected {n} coordinate rows, got {}", c.len())));
            }
        }
        for (i, row) in kernel.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!("kernel row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if v.is_nan() || v < 0.0 {
                    return Err(Error::Domain(format!("kernel entry ({i},{j}) = {v} is not in [0, inf]")));
                }
                if v != kernel[j][i] {
                    return Err(Error::Domain(format!("kernel is not symmetric at ({i},{j})")));
                }
            }
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::Domain("weights must be finite and non-negative".into()));
        }
        Ok(KernelSpace {
            coords,
            kernel: kernel.into_iter().flatten().collect(),
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn k(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.len() + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.kernel.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    /// Same space with kernel `K ∧ N`.
    pub fn truncated(&self, cap: f64) -> Self {
        KernelSpace {
            coords: self.coords.clone(),
            kernel: self.kernel.iter().map(|&v| v.min(cap)).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Same space with different atom masses.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        KernelSpace::new(self.rows(), weights, self.coords.clone())
    }

    /// Largest off-diagonal entry.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.len();
        let mut m = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.k(i, j));
                }
            }
        }
        m
    }

    /// `K_ν f(x) = Σ_y K(x,y) f(y) ν(y)` at every point, with `0 · ∞ = 0`.
    pub fn potential(&self, f: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|x| (0..n).map(|y| mul0(self.k(x, y), mul0(f[y], self.weights[y]))).sum())
            .collect()
    }

    /// `K_ν 1`.
    pub fn potential_of_one(&self) -> Vec<f64> {
        self.potential(&vec![1.0; self.len()])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiMetric {
    pub kappa: f64,
    /// Ordered triple `(x, y, z)` attaining `κ`.
    pub witness: Option<(usize, usize, usize)>,
}

/// Smallest `κ ≥ 1` with `K(x,y) ∧ K(y,z) ≤ κ K(x,z)` over all ordered triples,
/// repeats included.
pub fn quasi_metric_constant(space: &KernelSpace) -> QuasiMetric {
    let n = space.len();
    let mut best = QuasiMetric { kappa: 1.0, witness: None };
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let r = ratio0(space.k(x, y).min(space.k(y, z)), space.k(x, z));
                if r > best.kappa {
                    best = QuasiMetric {
                        kappa: r,
                        witness: Some((x, y, z)),
                    };
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtolemyReport {
    pub minimal_constant: f64,
    pub kappa_squared: f64,
    pub holds: bool,
    /// `(o, x, y, z)` attaining the minimal constant.
    pub witness: Option<(usize, usize, usize, usize)>,
}

/// `(K(x,y)K(o,z)) ∧ (K(y,z)K(o,x)) ≤ C K(x,z)K(o,y)`, over every base
/// point `o` when `origin` is `None`.
pub fn ptolemy_check(space: &KernelSpace, origin: Option<usize>) -> Result<PtolemyReport> {
    let kappa = quasi_metric_constant(space).kappa;
    if !kappa.is_finite() {
        return Err(Error::Precondition("quasi-metric constant is infinite".into()));
    }
    let n = space.len();
    let origins: Vec<usize> = match origin {
        Some(o) if o < n => vec![o],
        Some(o) => return Err(Error::Domain(format!("origin {o} out of range"))),
        None => (0..n).collect(),
    };
    let k = |i, j| space.k(i, j);
    let mut minimal = 0.0_f64;
    let mut witness = None;
    for &o in &origins {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = mul0(k(x, y), k(o, z)).min(mul0(k(y, z), k(o, x)));
                    let r = ratio0(lhs, mul0(k(x, z), k(o, y)));
                    if r > minimal {
                        minimal = r;
                        witness = Some((o, x, y, z));
                    }
                }
            }
        }
    }
    let kappa_squared = kappa * kappa;
    Ok(PtolemyReport {
        minimal_constant: minimal,
        kappa_squared,
        holds: minimal <= kappa_squared * (1.0 + 1e-12),
        witness,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WmpWitness {
    pub subset: Vec<usize>,
    pub target: usize,
    /// Extremal atom masses on `subset`.
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WmpReport {
    pub constant_b: f64,
    pub witness: Option<WmpWitness>,
    pub lp_cells_solved: usize,
    /// Every LP was solved in rational arithmetic.
    pub exact: bool,
    /// All subsets were enumerated.
    pub exhaustive: bool,
    pub truncation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WmpOptions {
    /// `N` in `K ∧ N`; defaults to `10⁶ ×` the largest off-diagonal entry.
    pub truncation: Option<f64>,
    /// Subsets drawn when the space exceeds [`EXACT_SUBSET_LIMIT`].
    pub samples: usize,
    pub seed: u64,
}

impl Default for WmpOptions {
    fn default() -> Self {
        WmpOptions {
            truncation: None,
            samples: 4096,
            seed: 0,
        }
    }
}

/// Weak maximum principle constant of `K ∧ N`.
///
/// For each subset `A` and point `x ∉ A` it solves
/// `max Σ_{j∈A} K(x,j) ν_j  s.t.  Σ_{j∈A} K(i,j) ν_j ≤ 1 (i ∈ A), ν ≥ 0`;
/// points of `A` are bounded by 1 by the constraint itself.
pub fn wmp_constant(space: &KernelSpace, opts: &WmpOptions) -> Result<WmpReport> {
    let n = space.len();
    if n == 0 {
        return Err(Error::Domain("empty space".into()));
    }
    let cap = match opts.truncation {
        Some(c) if c > 0.0 => c,
        Some(c) => return Err(Error::Domain(format!("truncation must be positive, got {c}"))),
        None => {
            let m = space.max_off_diagonal();
            if m > 0.0 && m.is_finite() {
                1e6 * m
            } else {
                1e6
            }
        }
    };
    if !cap.is_finite() {
        return Err(Error::Domain("truncation must be finite".into()));
    }
    let kn = space.truncated(cap);
    let exhaustive = n <= EXACT_SUBSET_LIMIT;
    let masks: Vec<u64> = if exhaustive {
        (1..(1u64 << n)).filter(|&m| m.count_ones() < n as u32).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.samples)
            .map(|_| {
                let size = rng.gen_range(1..n);
                let mut idx: Vec<usize> = (0..n).collect();
                for i in 0..size {
                    let j = rng.gen_range(i..n);
                    idx.swap(i, j);
                }
                idx[..size].iter().fold(0u64, |m, &i| m | (1 << i))
            })
            .collect()
    };
    if n > 64 {
        return Err(Error::CostGuard(format!("{n} points exceed the 64-point subset encoding")));
    }
    type Cell = (f64, usize, Vec<usize>, Vec<f64>, bool);
    let cells: Vec<Vec<Cell>> = masks
        .par_iter()
        .map(|&mask| {
            let a: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let m: Vec<Vec<f64>> = a.iter().map(|&i| a.iter().map(|&j| kn.k(i, j)).collect()).collect();
            (0..n)
                .filter(|&x| mask >> x & 1 == 0)
                .map(|x| {
                    let c: Vec<f64> = a.iter().map(|&j| kn.k(x, j)).collect();
                    let sol = if a.len() <= EXACT_LP_LIMIT {
                        lp::solve_exact_lp(&m, &c)
                    } else {
                        lp::solve_float(&m, &c)
                    };
                    let exact = sol.exact.is_some();
                    (sol.value, x, a.clone(), sol.x, exact)
                })
                .collect()
        })
        .collect();
    let mut report = WmpReport {
        constant_b: 1.0,
        witness: None,
        lp_cells_solved: 0,
        exact: true,
        exhaustive,
        truncation: cap,
    };
    for (value, x, a, w, exact) in cells.into_iter().flatten() {
        report.lp_cells_solved += 1;
        report.exact &= exact;
        if value > report.constant_b {
            report.constant_b = value;
            report.witness = Some(WmpWitness {
                subset: a,
                target: x,
                weights: w,
            });
        }
    }
    Ok(report)
}

/// `K̃(x,y) = K(x,y) / (k(x) k(y))` with `k = K(o,·) ∧ c`.
pub fn tilde_kernel(space: &KernelSpace, origin: usize, c: f64) -> Result<KernelSpace> {
    let n = space.len();
    if origin >= n {
        return Err(Error::Domain(format!("origin {origin} out of range")));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("cap c must be positive, got {c}")));
    }
    let k: Vec<f64> = (0..n).map(|x| space.k(origin, x).min(c)).collect();
    if k.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Precondition("K(o,·) must be positive".into()));
    }
    // Divide one factor at a time (k(o) may be near overflow) and mirror so
    // the result stays exactly symmetric.
    let mut rows = vec![vec![0.0; n]; n];
    for x in 0..n {
        for y in x..n {
            let v = space.k(x, y) / k[x] / k[y];
            rows[x][y] = v;
            rows[y][x] = v;
        }
    }
    KernelSpace::new(rows, space.weights.clone(), space.coords.clone())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalityReport {
    /// `min_{x ≠ o} K_ω1(x) / m(x)`.
    pub ratio: f64,
    /// `ω(A)/κ · min(λa, 1)`.
    pub bound: f64,
    pub lambda: f64,
    pub holds: bool,
}

/// Lower bound `K_ω1 ≥ ω(A)/κ · min(λa, 1) · m` with `m = K(o,·) ∧ 1/a`,
/// `ω` the space weights and `λ = min_{y ∈ supp ω} K(y, o)`.
pub fn minimality_bound(space: &KernelSpace, origin: usize, a: f64) -> Result<MinimalityReport> {
    let n = space.len();
    if origin >= n {
        return Err(Error::Domain(format!("origin {origin} out of range")));
    }
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a must be positive, got {a}")));
    }
    let mass: f64 = space.weights.iter().sum();
    if !(mass > 0.0) {
        return Err(Error::Domain("weights have zero total mass".into()));
    }
    let kappa = quasi_metric_constant(space).kappa;
    let lambda = (0..n)
        .filter(|&y| space.weights[y] > 0.0)
        .map(|y| space.k(y, origin))
        .fold(f64::INFINITY, f64::min);
    let pot = space.potential_of_one();
    let mut ratio = f64::INFINITY;
    for x in (0..n).filter(|&x| x != origin) {
        let m = space.k(origin, x).min(1.0 / a);
        ratio = ratio.min(ratio_or_inf(pot[x], m));
    }
    let bound = mass / kappa * (lambda * a).min(1.0);
    Ok(MinimalityReport {
        ratio,
        bound,
        lambda,
        holds: ratio >= bound * (1.0 - 1e-12),
    })
}

fn ratio_or_inf(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RearrangementReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `∫₀^{ω(Ω)} φ ≤ Σ_y ω_y φ(ω{z : f(z) ≤ f(y)})` on a finite `Ω`.
pub fn rearrangement_check<P: Fn(f64) -> f64>(omega: &[f64], f: &[f64], phi: P) -> Result<RearrangementReport> {
    if omega.len() != f.len() || omega.is_empty() {
        return Err(Error::Domain("omega and f must be non-empty and of equal length".into()));
    }
    if omega.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(Error::Domain("omega must be finite and non-negative".into()));
    }
    let total: f64 = omega.iter().sum();
    let (lhs, err) = if total > 0.0 {
        adaptive(&phi, 0.0, total, 1e-13, 0.0, 2000)
    } else {
        (0.0, 0.0)
    };
    let rhs: f64 = (0..f.len())
        .map(|y| {
            let level: f64 = (0..f.len()).filter(|&z| f[z] <= f[y]).map(|z| omega[z]).sum();
            mul0(omega[y], phi(level))
        })
        .sum();
    Ok(RearrangementReport {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-12) + err.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandyReport {
    /// `max_{x,y} K_ν(1_{E_y} f)(x) / K_ν f(y)`.
    pub max_ratio: f64,
    pub b: f64,
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

/// `K_ν(1_{E_y} f)(x) ≤ b K_ν f(y)` for every pair, with
/// `E_y = {z : K_ν f(z) ≤ K_ν f(y)}`.
pub fn handy_lemma_check(space: &KernelSpace, f: &[f64], b: f64) -> Result<HandyReport> {
    let n = space.len();
    if f.len() != n || f.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::Domain("f must be non-negative with one value per point".into()));
    }
    let pot = space.potential(f);
    let mut out = HandyReport {
        max_ratio: 0.0,
        b,
        holds: true,
        witness: None,
    };
    for y in 0..n {
        let masked: Vec<f64> = (0..n).map(|z| if pot[z] <= pot[y] { f[z] } else { 0.0 }).collect();
        let pm = space.potential(&masked);
        for (x, &v) in pm.iter().enumerate() {
            let r = ratio0(v, pot[y]);
            if r > out.max_ratio {
                out.max_ratio = r;
                out.witness = Some((x, y));
            }
        }
    }
    out.holds = out.max_ratio <= b * (1.0 + 1e-12);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxFReport {
    /// `sup_X K_{ν'} f` after scaling `f` to make `K_{ν'} f ≤ 1` on `{f > 0} ∩ A`.
    pub sup_potential: f64,
    pub b: f64,
    pub holds: bool,
}

/// Weak maximum principle in the form `K_ν f ≤ 1` on `{f > 0} ∩ A` ⇒
/// `K_ν f ≤ b`, for `ν` the space weights restricted to `A`.
pub fn max_f_check(space: &KernelSpace, f: &[f64], subset: &[usize], b: f64) -> Result<MaxFReport> {
    let n = space.len();
    if f.len() != n || f.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(Error::Domain("f must be finite, non-negative, one value per point".into()));
    }
    if subset.iter().any(|&i| i >= n) {
        return Err(Error::Domain("subset index out of range".into()));
    }
    let weights: Vec<f64> = (0..n)
        .map(|i| if subset.contains(&i) { space.weights[i] } else { 0.0 })
        .collect();
    let restricted = space.with_weights(weights)?;
    let pot = restricted.potential(f);
    let on_set = subset
        .iter()
        .filter(|&&i| f[i] > 0.0)
        .map(|&i| pot[i])
        .fold(0.0_f64, f64::max);
    if on_set == 0.0 || !on_set.is_finite() {
        return Err(Error::Precondition("K_ν f must be positive and finite somewhere on {f > 0} ∩ A".into()));
    }
    let sup = pot.iter().map(|&v| v / on_set).fold(0.0_f64, f64::max);
    Ok(MaxFReport {
        sup_potential: sup,
        b,
        holds: sup <= b * (1.0 + 1e-12),
    })
}

/// Parameters of [`random_quasi_metric_space`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpaceSpec {
    pub points: usize,
    pub dim: usize,
    /// `K(x,y) = |x − y|^{−power}`.
    pub power: f64,
    /// Round kernel entries to multiples of `2^{−bits}` (relative to their
    /// binade) so that exact LPs stay small.
    pub quantize_bits: Option<u32>,
    /// Infinite diagonal instead of the finite row-maximum diagonal.
    pub infinite_diagonal: bool,
}

fn quantize(v: f64, bits: Option<u32>) -> f64 {
    match bits {
        Some(b) if v.is_finite() && v > 0.0 => {
            let e = v.log2().floor();
            let scale = 2f64.powf(b as f64 - e);
            (v * scale).round().max(1.0) / scale
        }
        _ => v,
    }
}

/// Points uniform in `[0,1]^dim` with kernel `|x − y|^{−p}` and uniform
/// weights in `[0.1, 1]`. The finite diagonal is the row maximum times a
/// factor in `[1, 2)`.
pub fn random_quasi_metric_space(spec: &RandomSpaceSpec, seed: u64) -> Result<KernelSpace> {
    if spec.points == 0 || spec.dim == 0 || !(spec.power > 0.0) {
        return Err(Error::Domain("random space needs points, dimension and positive power".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.points;
    let coords: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..spec.dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d: f64 = coords[i].iter().zip(&coords[j]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let v = quantize(d.max(1e-9).powf(-spec.power), spec.quantize_bits);
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    for i in 0..n {
        k[i][i] = if spec.infinite_diagonal {
            f64::INFINITY
        } else {
            let row_max = (0..n).filter(|&j| j != i).map(|j| k[i][j]).fold(1.0_f64, f64::max);
            quantize(row_max * rng.gen_range(1.0..2.0), spec.quantize_bits).max(row_max)
        };
    }
    let weights = (0..n)
        .map(|_| quantize(rng.gen_range(0.1..1.0), spec.quantize_bits))
        .collect();
    KernelSpace::new(k, weights, Some(coords))
}

/// Riesz kernel `|x − y|^{2α − n}` on given points with infinite diagonal.
pub fn riesz_space(points: Vec<Vec<f64>>, alpha: f64, weights: Vec<f64>) -> Result<KernelSpace> {
    let n = points.len();
    let dim = points.first().map_or(0, |p| p.len()) as f64;
    if !(dim > 2.0 * alpha) {
        return Err(Error::Recurrent(format!("dimension {dim} does not exceed 2 alpha")));
    }
    let mut k = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                k[i][j] = if d == 0.0 { f64::INFINITY } else { d.powf(2.0 * alpha - dim) };
            }
        }
    }
    KernelSpace::new(k, weights, Some(points))
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn three_point_kappa() {
        let s = KernelSpace::new(
            vec![vec![INF, 1.0, 0.5], vec![1.0, INF, 1.0], vec![0.5, 1.0, INF]],
            vec![1.0; 3],
            None,
        )
        .unwrap();
        let q = quasi_metric_constant(&s);
        assert_eq!(q.kappa, 2.0);
        assert_eq!(q.witness, Some((0, 1, 2)));
    }

    #[test]
    fn constant_kernel_kappa_one() {
        let s = KernelSpace::new(vec![vec![INF, 1.0, 1.0], vec![1.0, INF, 1.0], vec![1.0, 1.0, INF]], vec![1.0; 3], None)
            .unwrap();
        assert_eq!(quasi_metric_constant(&s).kappa, 1.0);
    }

    #[test]
    fn two_point_wmp() {
        let s = KernelSpace::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], vec![1.0; 2], None).unwrap();
        let r = wmp_constant(&s, &WmpOptions::default()).unwrap();
        assert_eq!(r.constant_b, 1.0);
        assert_eq!(r.lp_cells_solved, 2);
        assert!(r.exact && r.exhaustive);
    }

    #[test]
    fn rearrangement_example() {
        let r = rearrangement_check(&[1.0, 1.0], &[1.0, 2.0], |t| t).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert_eq!(r.rhs, 3.0);
        assert!(r.holds);
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(KernelSpace::new(vec![vec![1.0, 2.0], vec![1.0, 1.0]], vec![1.0; 2], None).is_err());
    }

    #[test]
    fn quantize_keeps_bits() {
        let v = quantize(std::f64::consts::PI, Some(8));
        assert!((v - std::f64::consts::PI).abs() < 2f64.powi(-6));
        assert_eq!(v * 128.0, (v * 128.0).round());
    }
}
