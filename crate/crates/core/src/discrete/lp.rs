//! Packing LPs `max cᵀν  s.t.  Mν ≤ 1, ν ≥ 0`.
//!
//! These are the linear programs behind the weak maximum principle on a
//! finite space: `M` is the kernel restricted to a subset and `c` a row of the
//! kernel outside it. The right-hand side is all ones, so the slack basis is
//! always feasible and no phase one is needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Feasibility and optimality tolerance of the floating simplex.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// Optimal objective, `+inf` when unbounded.
    pub value: f64,
    /// Optimal `ν`.
    pub x: Vec<f64>,
    /// Exact optimum when solved in rational arithmetic.
    pub exact: Option<BigRational>,
}

/// Basis found by the floating simplex: indices into the columns `[M | I]`.
fn float_simplex(m: &[Vec<f64>], c: &[f64]) -> Option<(Vec<usize>, Vec<f64>, f64)> {
    let rows = m.len();
    let n = c.len();
    let width = n + rows + 1;
    let mut t = vec![vec![0.0; width]; rows];
    for i in 0..rows {
        t[i][..n].copy_from_slice(&m[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = 1.0;
    }
    // Reduced costs of a maximization; the objective value sits in the last slot.
    let mut z = vec![0.0; width];
    z[..n].copy_from_slice(c);
    let mut basis: Vec<usize> = (n..n + rows).collect();
    for _ in 0..10_000 {
        // Bland: lowest index with a positive reduced cost.
        let Some(e) = (0..n + rows).find(|&j| z[j] > FLOAT_TOL) else {
            let mut x = vec![0.0; n];
            for (i, &b) in basis.iter().enumerate() {
                if b < n {
                    x[b] = t[i][width - 1];
                }
            }
            return Some((basis, x, -z[width - 1]));
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            if t[i][e] > FLOAT_TOL {
                let ratio = t[i][width - 1] / t[i][e];
                match leave {
                    Some((l, r)) if ratio > r || (ratio == r && basis[i] > basis[l]) => {}
                    _ => leave = Some((i, ratio)),
                }
            }
        }
        let (l, _) = leave?;
        let p = t[l][e];
        for v in t[l].iter_mut() {
            *v /= p;
        }
        let pivot_row = t[l].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != l && row[e] != 0.0 {
                let f = row[e];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = z[e];
        for (v, pv) in z.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
        basis[l] = e;
    }
    None
}

/// Floating-point solve.
pub fn solve_float(m: &[Vec<f64>], c: &[f64]) -> LpSolution {
    match float_simplex(m, c) {
        Some((_, x, value)) => LpSolution { value, x, exact: None },
        None => LpSolution {
            value: f64::INFINITY,
            x: vec![0.0; c.len()],
            exact: None,
        },
    }
}

fn rat(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite LP coefficient")
}

fn column(m: &[Vec<BigRational>], j: usize, n: usize) -> Vec<BigRational> {
    let rows = m.len();
    (0..rows)
        .map(|i| {
            if j < n {
                m[i][j].clone()
            } else if j - n == i {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// Solves `A x = b` by Gaussian elimination; `None` when singular.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for j in col..k {
                let d = &f * &a[col][j];
                a[r][j] -= d;
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    let mut x = vec![BigRational::zero(); k];
    for r in (0..k).rev() {
        let mut s = b[r].clone();
        for j in r + 1..k {
            s -= &a[r][j] * &x[j];
        }
        x[r] = s / &a[r][r];
    }
    Some(x)
}

/// Checks primal and dual feasibility of `basis` exactly; returns `(value, x)`.
fn certify(
    m: &[Vec<BigRational>],
    c: &[BigRational],
    basis: &[usize],
) -> Option<(BigRational, Vec<BigRational>)> {
    let rows = m.len();
    let n = c.len();
    let cols: Vec<Vec<BigRational>> = basis.iter().map(|&j| column(m, j, n)).collect();
    let bmat: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| (0..rows).map(|k| cols[k][i].clone()).collect())
        .collect();
    let ones = vec![BigRational::from_integer(1.into()); rows];
    let xb = solve_exact(bmat.clone(), ones)?;
    if xb.iter().any(|v| v.is_negative()) {
        return None;
    }
    let cb: Vec<BigRational> = basis
        .iter()
        .map(|&j| if j < n { c[j].clone() } else { BigRational::zero() })
        .collect();
    let bt: Vec<Vec<BigRational>> = (0..rows).map(|i| cols[i].clone()).collect();
    let y = solve_exact(bt, cb)?;
    for j in 0..n + rows {
        if basis.contains(&j) {
            continue;
        }
        let cj = if j < n { c[j].clone() } else { BigRational::zero() };
        let mut red = cj;
        for (yi, ai) in y.iter().zip(column(m, j, n)) {
            red -= yi * ai;
        }
        if red.is_positive() {
            return None;
        }
    }
    let value = y.iter().fold(BigRational::zero(), |s, v| s + v);
    let mut x = vec![BigRational::zero(); n];
    for (k, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = xb[k].clone();
        }
    }
    Some((value, x))
}

/// Exact tableau simplex with Bland's rule; `None` when unbounded.
fn exact_simplex(m: &[Vec<BigRational>], c: &[BigRational]) -> Option<(BigRational, Vec<BigRational>)> {
    let rows = m.len();
    let n = c.len();
    let width = n + rows + 1;
    let one = BigRational::from_integer(BigInt::from(1));
    let mut t: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r = vec![BigRational::zero(); width];
            r[..n].clone_from_slice(&m[i]);
            r[n + i] = one.clone();
            r[width - 1] = one.clone();
            r
        })
        .collect();
    let mut z = vec![BigRational::zero(); width];
    z[..n].clone_from_slice(c);
    let mut basis: Vec<usize> = (n..n + rows).collect();
    loop {
        let Some(e) = (0..n + rows).find(|&j| z[j].is_positive()) else {
            let mut x = vec![BigRational::zero(); n];
            for (i, &b) in basis.iter().enumerate() {
                if b < n {
                    x[b] = t[i][width - 1].clone();
                }
            }
            return Some((-z[width - 1].clone(), x));
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][e].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (l, _) = leave?;
        let p = t[l][e].clone();
        for v in t[l].iter_mut() {
            *v /= &p;
        }
        let pivot_row = t[l].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != l && !row[e].is_zero() {
                let f = row[e].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        let f = z[e].clone();
        for (v, pv) in z.iter_mut().zip(&pivot_row) {
            *v -= &f * pv;
        }
        basis[l] = e;
    }
}

/// Exact solve: the floating optimal basis is certified in rational
/// arithmetic, with an exact simplex as fallback.
pub fn solve_exact_lp(m: &[Vec<f64>], c: &[f64]) -> LpSolution {
    let mq: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
    let cq: Vec<BigRational> = c.iter().map(|&v| rat(v)).collect();
    let certified = float_simplex(m, c).and_then(|(basis, _, _)| certify(&mq, &cq, &basis));
    let solved = certified.or_else(|| exact_simplex(&mq, &cq));
    match solved {
        Some((value, x)) => LpSolution {
            value: value.to_f64().unwrap_or(f64::INFINITY),
            x: x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect(),
            exact: Some(value),
        },
        None => LpSolution {
            value: f64::INFINITY,
            x: vec![0.0; c.len()],
            exact: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable() {
        let s = solve_exact_lp(&[vec![2.0]], &[1.0]);
        assert_eq!(s.value, 0.5);
        assert_eq!(s.exact.unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn two_variable_by_hand() {
        // max x + y s.t. 2x + y <= 1, x + 2y <= 1 → x = y = 1/3, value 2/3.
        let m = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let s = solve_exact_lp(&m, &[1.0, 1.0]);
        assert_eq!(s.exact.unwrap(), BigRational::new(2.into(), 3.into()));
        let f = solve_float(&m, &[1.0, 1.0]);
        assert!((f.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_fallback_agrees() {
        let m = vec![vec![3.0, 1.0, 0.5], vec![1.0, 3.0, 1.0], vec![0.5, 1.0, 3.0]];
        let c = [1.0, 0.25, 2.0];
        let mq: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        let cq: Vec<BigRational> = c.iter().map(|&v| rat(v)).collect();
        let (v, _) = exact_simplex(&mq, &cq).unwrap();
        assert_eq!(solve_exact_lp(&m, &c).exact.unwrap(), v);
    }

    #[test]
    fn unbounded_column() {
        let s = solve_float(&[vec![0.0]], &[1.0]);
        assert!(s.value.is_infinite());
        assert!(solve_exact_lp(&[vec![0.0]], &[1.0]).value.is_infinite());
    }
}
