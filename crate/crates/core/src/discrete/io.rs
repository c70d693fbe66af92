//! Plain-text serialization of kernel spaces.
//!
//! ```text
//! points 3
//! coords 2
//! 0 0
//! 1 0
//! 0 1
//! kernel
//! inf 1 1
//! 1 inf 0.7071067811865476
//! 1 0.7071067811865476 inf
//! weights
//! 1 1 1
//! ```
//!
//! The `coords` block is optional. Floats use the shortest representation
//! that parses back to the same value, and `inf` for `+∞`. Lines starting
//! with `#` are ignored.

use std::fmt::Write as _;

use super::KernelSpace;
use crate::error::{Error, Result};

fn fmt_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v:?}")
    }
}

fn row(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(" ")
}

pub fn to_text(space: &KernelSpace) -> String {
    let mut s = String::new();
    let n = space.len();
    let _ = writeln!(s, "points {n}");
    if let Some(coords) = &space.coords {
        let _ = writeln!(s, "coords {}", coords.first().map_or(0, |c| c.len()));
        for c in coords {
            let _ = writeln!(s, "{}", row(c));
        }
    }
    let _ = writeln!(s, "kernel");
    for r in space.rows() {
        let _ = writeln!(s, "{}", row(&r));
    }
    let _ = writeln!(s, "weights");
    let _ = writeln!(s, "{}", row(&space.weights));
    s
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Ok((i + 1, t));
            }
        }
        Err(Error::Parse("unexpected end of input".into()))
    }

    fn floats(&mut self, expect: usize) -> Result<Vec<f64>> {
        let (ln, l) = self.next()?;
        let vals = l
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {ln}: cannot parse number '{t}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != expect {
            return Err(Error::Parse(format!("line {ln}: expected {expect} values, got {}", vals.len())));
        }
        Ok(vals)
    }

    fn keyword(&mut self, word: &str) -> Result<Option<usize>> {
        let (ln, l) = self.next()?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(word) {
            return Err(Error::Parse(format!("line {ln}: expected '{word}', got '{l}'")));
        }
        match parts.next() {
            None => Ok(None),
            Some(t) => t
                .parse::<usize>()
                .map(Some)
                .map_err(|_| Error::Parse(format!("line {ln}: bad count '{t}'"))),
        }
    }
}

pub fn from_text(text: &str) -> Result<KernelSpace> {
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    let n = lines
        .keyword("points")?
        .ok_or_else(|| Error::Parse("'points' needs a count".into()))?;
    let mut coords = None;
    let (_, head) = lines.next()?;
    let head_word = head.split_whitespace().next().unwrap_or("");
    if head_word == "coords" {
        let dim: usize = head
            .split_whitespace()
            .nth(1)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("'coords' needs a dimension".into()))?;
        let mut c = Vec::with_capacity(n);
        for _ in 0..n {
            c.push(lines.floats(dim)?);
        }
        coords = Some(c);
        lines.keyword("kernel")?;
    } else if head_word != "kernel" {
        return Err(Error::Parse(format!("expected 'coords' or 'kernel', got '{head}'")));
    }
    let mut kernel = Vec::with_capacity(n);
    for _ in 0..n {
        kernel.push(lines.floats(n)?);
    }
    lines.keyword("weights")?;
    let weights = lines.floats(n)?;
    KernelSpace::new(kernel, weights, coords).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_coords() {
        let s = super::super::riesz_space(
            vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.1, 0.3, 0.7]],
            0.5,
            vec![0.1, 1.0 / 3.0, 2.0],
        )
        .unwrap();
        let t = to_text(&s);
        assert_eq!(from_text(&t).unwrap(), s);
        assert!(t.contains("inf"));
    }

    #[test]
    fn parses_without_coords() {
        let s = from_text("# two points\npoints 2\nkernel\n2 1\n1 2\nweights\n1 0.5\n").unwrap();
        assert_eq!(s.k(0, 1), 1.0);
        assert!(s.coords.is_none());
    }

    #[test]
    fn reports_bad_rows() {
        assert!(matches!(from_text("points 2\nkernel\n2 1\n1\nweights\n1 1\n"), Err(Error::Parse(_))));
    }
}
