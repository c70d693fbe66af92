//! Cell-centred discretization of the Riesz potential on a Euclidean ball.
//!
//! Cells are the cubes of side `h` around lattice points `h z`, `z ∈ ℤ^n`,
//! with `|h z| < R_max`. Off the diagonal the kernel is `C(n,α) |x − y|^{2α−n}`
//! at the centres; the diagonal is the kernel averaged over the ball with the
//! cell's volume, so the cell integral of the kernel is preserved. Products
//! with the kernel are zero-padded FFT convolutions on the bounding box.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::green::riesz_constant;
use crate::profiles::{MeasureKind, MeasureProfile};
use crate::scalar::unit_ball_volume;

/// Largest grid accepted by [`build_grid_problem`].
pub const MAX_CELLS: usize = 100_000;
/// Largest grid whose kernel may be materialized as a dense matrix.
pub const MAX_DENSE_CELLS: usize = 4096;
/// Largest zero-padded FFT box.
const MAX_FFT_POINTS: usize = 1 << 25;

const CACHE_MAGIC: &[u8; 4] = b"FGKC";
const CACHE_VERSION: u32 = 1;

/// Forcing `η(x) = amplitude · (1 − |x|²/radius²)₊`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSpec {
    pub amplitude: f64,
    pub radius: f64,
}

impl EtaSpec {
    pub fn eval(&self, norm: f64) -> f64 {
        self.amplitude * (1.0 - (norm / self.radius).powi(2)).max(0.0)
    }
}

/// How `σ` enters the grid operator `G_σ f = ∫ G(·,y) f(y) dσ(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMeasure {
    /// `dσ = θ dμ` with `θ` averaged per cell.
    Density,
    /// Unit atom at the origin; `G(o,o) = +∞`.
    DiracAtOrigin,
}

struct Convolver {
    dims: usize,
    side: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    spectrum: Vec<Complex<f64>>,
}

impl Convolver {
    fn total(&self) -> usize {
        self.side.pow(self.dims as u32)
    }

    /// In-place n-dimensional transform, one axis at a time; lines are
    /// independent so the result does not depend on the thread count.
    fn transform(&self, data: &mut [Complex<f64>], fft: &Arc<dyn Fft<f64>>) {
        let p = self.side;
        for axis in 0..self.dims {
            let stride = p.pow((self.dims - 1 - axis) as u32);
            if stride == 1 {
                data.par_chunks_mut(p).for_each(|line| fft.process(line));
                continue;
            }
            let lines = data.len() / p;
            let done: Vec<Vec<Complex<f64>>> = (0..lines)
                .into_par_iter()
                .map(|l| {
                    let base = (l / stride) * stride * p + l % stride;
                    let mut line: Vec<Complex<f64>> = (0..p).map(|k| data[base + k * stride]).collect();
                    fft.process(&mut line);
                    line
                })
                .collect();
            for (l, line) in done.into_iter().enumerate() {
                let base = (l / stride) * stride * p + l % stride;
                for (k, v) in line.into_iter().enumerate() {
                    data[base + k * stride] = v;
                }
            }
        }
    }

    fn convolve(&self, positions: &[usize], f: &[f64]) -> Vec<f64> {
        let mut buf = vec![Complex::new(0.0, 0.0); self.total()];
        for (&p, &v) in positions.iter().zip(f) {
            buf[p] = Complex::new(v, 0.0);
        }
        self.transform(&mut buf, &self.forward);
        buf.par_iter_mut().zip(self.spectrum.par_iter()).for_each(|(b, s)| *b *= s);
        self.transform(&mut buf, &self.inverse);
        let scale = 1.0 / self.total() as f64;
        positions.iter().map(|&p| buf[p].re * scale).collect()
    }
}

/// Smallest `m ≥ n` of the form `2^a 3^b 5^c`.
fn smooth_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Discretized fixed-point problem `v = G(v^q θ) + G(η θ)` on a ball.
#[derive(Clone)]
pub struct GridProblem {
    pub n: usize,
    pub alpha: f64,
    pub q: f64,
    pub r_max: f64,
    pub h: f64,
    /// Lattice coordinates `z` of each cell (centre `h z`).
    pub lattice: Vec<Vec<i64>>,
    /// `|h z|` per cell.
    pub norms: Vec<f64>,
    pub theta: Vec<f64>,
    pub eta: Vec<f64>,
    pub eta_spec: EtaSpec,
    pub measure: GridMeasure,
    /// `C(n, α)`.
    pub riesz_c: f64,
    /// Corrected diagonal entry of the kernel.
    pub diagonal: f64,
    /// Index of the cell at the origin.
    pub origin: usize,
    positions: Vec<usize>,
    conv: Arc<Convolver>,
    dense: Option<Arc<Vec<f64>>>,
}

impl fmt::Debug for GridProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridProblem")
            .field("n", &self.n)
            .field("alpha", &self.alpha)
            .field("q", &self.q)
            .field("r_max", &self.r_max)
            .field("h", &self.h)
            .field("cells", &self.len())
            .field("measure", &self.measure)
            .field("diagonal", &self.diagonal)
            .field("dense_kernel", &self.dense.is_some())
            .finish()
    }
}

/// `C(n,α) · n r_h^{2α−n} / (2α)` with `ω_n r_h^n = h^n`: the mean of
/// `C(n,α)|z|^{2α−n}` over the ball of volume `h^n`.
pub fn diagonal_correction(n: usize, alpha: f64, h: f64) -> Result<f64> {
    let nf = n as f64;
    let c = riesz_constant(nf, alpha)?;
    let r_h = h * (1.0 / unit_ball_volume(nf)).powf(1.0 / nf);
    Ok(c * nf * r_h.powf(2.0 * alpha - nf) / (2.0 * alpha))
}

/// Cell count `#{z ∈ ℤ^n : |h z| < R}`.
pub fn count_cells(n: usize, r_max: f64, h: f64) -> usize {
    let half = (r_max / h).floor() as i64;
    let mut z = vec![-half; n];
    let mut count = 0;
    loop {
        let s: f64 = z.iter().map(|&v| (v as f64 * h).powi(2)).sum();
        if s.sqrt() < r_max {
            count += 1;
        }
        let mut a = 0;
        loop {
            if a == n {
                return count;
            }
            z[a] += 1;
            if z[a] <= half {
                break;
            }
            z[a] = -half;
            a += 1;
        }
    }
}

pub fn build_grid_problem(
    n: usize,
    alpha: f64,
    q: f64,
    measure: &MeasureProfile<f64>,
    r_max: f64,
    h: f64,
    eta: EtaSpec,
) -> Result<GridProblem> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let riesz_c = riesz_constant(n as f64, alpha)?;
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    if !(h > 0.0 && h < r_max) || !r_max.is_finite() {
        return Err(Error::Domain(format!("need 0 < h < R_max, got h = {h}, R_max = {r_max}")));
    }
    if !(eta.amplitude >= 0.0) || !eta.amplitude.is_finite() || !(eta.radius > 0.0 && eta.radius < r_max) {
        return Err(Error::Domain(format!(
            "forcing must be non-negative with support radius in (0, R_max), got {eta:?}"
        )));
    }
    let estimate = unit_ball_volume(n as f64) * (r_max / h).powi(n as i32);
    if estimate > 1.2 * MAX_CELLS as f64 {
        return Err(Error::MemoryGuard(format!(
            "about {estimate:.0} cells exceeds the limit {MAX_CELLS}"
        )));
    }
    let half = (r_max / h).floor() as i64;
    let box_side = (2 * half + 1) as usize;
    let side = smooth_size(2 * box_side - 1);
    let total = side
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_FFT_POINTS)
        .ok_or_else(|| Error::MemoryGuard(format!("FFT box {side}^{n} is too large")))?;

    let (grid_measure, density): (GridMeasure, Box<dyn Fn(f64) -> f64>) = match &measure.kind {
        MeasureKind::SameAsVolume => (GridMeasure::Density, Box::new(|_| 1.0)),
        MeasureKind::PowerDensity { gamma, n: mn } => {
            if *mn != n as f64 {
                return Err(Error::Domain(format!("density dimension {mn} differs from grid dimension {n}")));
            }
            let g = *gamma;
            let nf = n as f64;
            // Mean of |x|^γ over the origin cell's equivalent ball.
            let r_h = h * (1.0 / unit_ball_volume(nf)).powf(1.0 / nf);
            let origin_mean = nf / (nf + g) * r_h.powf(g);
            (
                GridMeasure::Density,
                Box::new(move |r: f64| if r == 0.0 { origin_mean } else { r.powf(g) }),
            )
        }
        MeasureKind::DiracAtOrigin => (GridMeasure::DiracAtOrigin, Box::new(|_| 0.0)),
        MeasureKind::Table(_) => {
            return Err(Error::Domain("tabulated measures have no pointwise density for the grid".into()))
        }
    };

    let mut lattice = Vec::new();
    let mut norms = Vec::new();
    let mut positions = Vec::new();
    let mut z = vec![-half; n];
    'outer: loop {
        let norm = z.iter().map(|&v| (v as f64 * h).powi(2)).sum::<f64>().sqrt();
        if norm < r_max {
            let pos = z.iter().fold(0usize, |acc, &v| acc * side + (v + half) as usize);
            lattice.push(z.clone());
            norms.push(norm);
            positions.push(pos);
            if lattice.len() > MAX_CELLS {
                return Err(Error::MemoryGuard(format!("more than {MAX_CELLS} cells")));
            }
        }
        let mut a = n;
        loop {
            if a == 0 {
                break 'outer;
            }
            a -= 1;
            z[a] += 1;
            if z[a] <= half {
                break;
            }
            z[a] = -half;
        }
    }
    let origin = norms.iter().position(|&r| r == 0.0).expect("origin cell is always inside the ball");
    let diagonal = diagonal_correction(n, alpha, h)?;

    // Kernel on the padded box, offsets taken modulo the side.
    let expo = 2.0 * alpha - n as f64;
    let mut kernel = vec![Complex::new(0.0, 0.0); total];
    let reach = box_side as i64 - 1;
    let mut d = vec![-reach; n];
    'kern: loop {
        let pos = d
            .iter()
            .fold(0usize, |acc, &v| acc * side + v.rem_euclid(side as i64) as usize);
        let dist = d.iter().map(|&v| (v as f64 * h).powi(2)).sum::<f64>().sqrt();
        kernel[pos] = Complex::new(if dist == 0.0 { diagonal } else { riesz_c * dist.powf(expo) }, 0.0);
        let mut a = n;
        loop {
            if a == 0 {
                break 'kern;
            }
            a -= 1;
            d[a] += 1;
            if d[a] <= reach {
                break;
            }
            d[a] = -reach;
        }
    }
    let mut planner = FftPlanner::new();
    let conv = Convolver {
        dims: n,
        side,
        forward: planner.plan_fft_forward(side),
        inverse: planner.plan_fft_inverse(side),
        spectrum: Vec::new(),
    };
    conv.transform(&mut kernel, &conv.forward);
    let conv = Convolver { spectrum: kernel, ..conv };

    Ok(GridProblem {
        n,
        alpha,
        q,
        r_max,
        h,
        theta: norms.iter().map(|&r| density(r)).collect(),
        eta: norms.iter().map(|&r| eta.eval(r)).collect(),
        eta_spec: eta,
        lattice,
        norms,
        measure: grid_measure,
        riesz_c,
        diagonal,
        origin,
        positions,
        conv: Arc::new(conv),
        dense: None,
    })
}

impl GridProblem {
    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.n as i32)
    }

    pub fn center(&self, i: usize) -> Vec<f64> {
        self.lattice[i].iter().map(|&v| v as f64 * self.h).collect()
    }

    /// Kernel entry between cells `i` and `j`.
    pub fn kernel(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diagonal;
        }
        let d2: f64 = self.lattice[i]
            .iter()
            .zip(&self.lattice[j])
            .map(|(&a, &b)| ((a - b) as f64 * self.h).powi(2))
            .sum();
        self.riesz_c * d2.sqrt().powf(2.0 * self.alpha - self.n as f64)
    }

    /// `G(x_i, o)` for the continuum kernel: `+∞` at the origin cell.
    pub fn green_to_origin(&self, i: usize) -> f64 {
        if i == self.origin {
            f64::INFINITY
        } else {
            self.riesz_c * self.norms[i].powf(2.0 * self.alpha - self.n as f64)
        }
    }

    /// `m = G(·, o) ∧ a^{−1}` per cell.
    pub fn truncated_green(&self, a: f64) -> Vec<f64> {
        (0..self.len()).map(|i| self.green_to_origin(i).min(1.0 / a)).collect()
    }

    /// `G f = Σ_j K(x_i, x_j) f_j h^n` by FFT convolution, or by the dense
    /// kernel when one is attached.
    pub fn green(&self, f: &[f64]) -> Vec<f64> {
        let vol = self.cell_volume();
        match &self.dense {
            Some(k) => dense_product(k, f).into_iter().map(|v| v * vol).collect(),
            None => self.conv.convolve(&self.positions, f).into_iter().map(|v| v * vol).collect(),
        }
    }

    /// Same product by direct summation over all pairs.
    pub fn green_direct(&self, f: &[f64]) -> Vec<f64> {
        let vol = self.cell_volume();
        (0..self.len())
            .into_par_iter()
            .map(|i| (0..self.len()).map(|j| self.kernel(i, j) * f[j]).sum::<f64>() * vol)
            .collect()
    }

    /// `G_σ f`.
    pub fn green_sigma(&self, f: &[f64]) -> Vec<f64> {
        match self.measure {
            GridMeasure::Density => {
                let ft: Vec<f64> = f.iter().zip(&self.theta).map(|(a, t)| a * t).collect();
                self.green(&ft)
            }
            GridMeasure::DiracAtOrigin => {
                let fo = f[self.origin];
                (0..self.len())
                    .map(|i| if fo == 0.0 { 0.0 } else { self.green_to_origin(i) * fo })
                    .collect()
            }
        }
    }

    /// `σ` mass of each cell.
    pub fn sigma_masses(&self) -> Vec<f64> {
        match self.measure {
            GridMeasure::Density => self.theta.iter().map(|t| t * self.cell_volume()).collect(),
            GridMeasure::DiracAtOrigin => (0..self.len()).map(|i| if i == self.origin { 1.0 } else { 0.0 }).collect(),
        }
    }

    /// Row-major dense kernel.
    pub fn dense_kernel(&self) -> Result<Vec<f64>> {
        let c = self.len();
        if c > MAX_DENSE_CELLS {
            return Err(Error::MemoryGuard(format!(
                "dense kernel of {c} cells exceeds the limit {MAX_DENSE_CELLS}"
            )));
        }
        Ok((0..c * c).map(|k| self.kernel(k / c, k % c)).collect())
    }

    /// Uses the cached dense kernel at `path`, writing it first if absent.
    /// A cache whose size or sampled entries disagree with this grid is rejected.
    pub fn attach_kernel_cache(&mut self, path: &Path) -> Result<()> {
        let c = self.len();
        let dense = if path.exists() {
            let (count, k) = read_kernel_cache(path)?;
            if count != c {
                return Err(Error::Parse(format!("kernel cache holds {count} cells, grid has {c}")));
            }
            for j in [0, c / 2, c - 1] {
                let expect = self.kernel(0, j);
                if (k[j] - expect).abs() > 1e-12 * expect.abs() {
                    return Err(Error::Parse("kernel cache does not match this grid".into()));
                }
            }
            k
        } else {
            let k = self.dense_kernel()?;
            write_kernel_cache(path, c, &k)?;
            k
        };
        self.dense = Some(Arc::new(dense));
        Ok(())
    }
}

fn dense_product(k: &[f64], f: &[f64]) -> Vec<f64> {
    let c = f.len();
    k.par_chunks(c)
        .map(|row| row.iter().zip(f).map(|(a, b)| a * b).sum())
        .collect()
}

/// Binary kernel cache: `FGKC`, u32 version, u64 cell count (little-endian),
/// then the row-major f64 entries.
pub fn write_kernel_cache(path: &Path, count: usize, kernel: &[f64]) -> Result<()> {
    if kernel.len() != count * count {
        return Err(Error::Domain(format!("kernel has {} entries, expected {}", kernel.len(), count * count)));
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&(count as u64).to_le_bytes())?;
    for v in kernel {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_kernel_cache(path: &Path) -> Result<(usize, Vec<f64>)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut head = [0u8; 16];
    r.read_exact(&mut head).map_err(|_| Error::Parse("kernel cache header is truncated".into()))?;
    if &head[..4] != CACHE_MAGIC {
        return Err(Error::Parse("not a kernel cache file".into()));
    }
    let version = u32::from_le_bytes(head[4..8].try_into().expect("4 bytes"));
    if version != CACHE_VERSION {
        return Err(Error::Parse(format!("unsupported kernel cache version {version}")));
    }
    let count = u64::from_le_bytes(head[8..16].try_into().expect("8 bytes")) as usize;
    if count > MAX_DENSE_CELLS {
        return Err(Error::MemoryGuard(format!("kernel cache of {count} cells exceeds the limit")));
    }
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != count * count * 8 {
        return Err(Error::Parse(format!(
            "kernel cache body has {} bytes, expected {}",
            bytes.len(),
            count * count * 8
        )));
    }
    let k = bytes
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
        .collect();
    Ok((count, k))
}
