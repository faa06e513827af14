//! Matrix rank, exact and numeric, plus rank-one factor extraction.
//!
//! Both backends use Gaussian elimination with full pivoting. The exact
//! backend works over complex rationals (real rationals when every imaginary
//! part vanishes) and is the ground truth; the numeric backend accepts a pivot
//! only when it exceeds `tol_rel` times the largest initial entry magnitude.

use std::ops::{Div, Mul, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coefficient::CoefficientMatrix;
use crate::error::{Error, Result};
use crate::scalar::{exact_inv, exact_mul, ExactComplex, Scalar, ScalarKind};

pub const DEFAULT_TOL_REL: f64 = 1e-9;

/// A rejected pivot within this factor below the threshold marks the
/// numeric rank as ambiguous.
pub const AMBIGUITY_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Numeric,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Numeric => f.write_str("numeric"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub backend: Backend,
    /// Numeric only: smallest accepted pivot magnitude over the threshold.
    pub ambiguity_margin: Option<f64>,
    /// Numeric only: some rejected pivot came within [`AMBIGUITY_FACTOR`] of
    /// the threshold.
    pub ambiguous: bool,
}

/// Exact rank. Fails with `KIND_MISMATCH` on numeric entries.
pub fn rank_exact(m: &CoefficientMatrix) -> Result<RankResult> {
    if m.kind() != ScalarKind::Exact {
        return Err(Error::KindMismatch);
    }
    let rank = if m.rows() == 0 || m.cols() == 0 {
        0
    } else {
        exact_rank(m.rows(), m.cols(), exact_entries(m))
    };
    Ok(RankResult {
        rank,
        backend: Backend::Exact,
        ambiguity_margin: None,
        ambiguous: false,
    })
}

fn exact_entries(m: &CoefficientMatrix) -> Vec<ExactComplex> {
    m.entries()
        .iter()
        .map(|s| s.as_exact().expect("exact kind").clone())
        .collect()
}

/// Rank of a row-major exact matrix.
pub(crate) fn exact_rank(rows: usize, cols: usize, entries: Vec<ExactComplex>) -> usize {
    if entries.iter().all(|z| z.im.is_zero()) {
        let reals = entries.into_iter().map(|z| z.re).collect();
        field_rank::<BigRational>(rows, cols, reals)
    } else {
        field_rank::<ExactComplex>(rows, cols, entries)
    }
}

fn field_rank<T>(rows: usize, cols: usize, mut a: Vec<T>) -> usize
where
    T: Clone + Zero,
    for<'x> &'x T: Sub<&'x T, Output = T> + Mul<&'x T, Output = T> + Div<&'x T, Output = T>,
{
    let mut rank = 0;
    for step in 0..rows.min(cols) {
        let pivot = (step..rows)
            .flat_map(|r| (step..cols).map(move |c| (r, c)))
            .find(|&(r, c)| !a[r * cols + c].is_zero());
        let Some((pr, pc)) = pivot else { break };
        swap_rows(&mut a, cols, step, pr);
        swap_cols(&mut a, rows, cols, step, pc);
        let pivot_row: Vec<T> = a[step * cols..(step + 1) * cols].to_vec();
        for r in step + 1..rows {
            let lead = &a[r * cols + step];
            if lead.is_zero() {
                continue;
            }
            let factor = lead / &pivot_row[step];
            for c in step + 1..cols {
                let cell = &mut a[r * cols + c];
                if !pivot_row[c].is_zero() {
                    *cell = &*cell - &(&factor * &pivot_row[c]);
                }
            }
            a[r * cols + step] = T::zero();
        }
        rank += 1;
    }
    rank
}

fn swap_rows<T>(a: &mut [T], cols: usize, i: usize, j: usize) {
    if i != j {
        for c in 0..cols {
            a.swap(i * cols + c, j * cols + c);
        }
    }
}

fn swap_cols<T>(a: &mut [T], rows: usize, cols: usize, i: usize, j: usize) {
    if i != j {
        for r in 0..rows {
            a.swap(r * cols + i, r * cols + j);
        }
    }
}

/// Numeric rank with relative pivot tolerance `tol_rel`.
pub fn rank_numeric(m: &CoefficientMatrix, tol_rel: f64) -> Result<RankResult> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let entries: Vec<Complex64> = m.entries().iter().map(Scalar::to_c64).collect();
    Ok(numeric_rank(m.rows(), m.cols(), entries, tol_rel))
}

fn numeric_rank(rows: usize, cols: usize, mut a: Vec<Complex64>, tol_rel: f64) -> RankResult {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut result = RankResult {
        rank: 0,
        backend: Backend::Numeric,
        ambiguity_margin: None,
        ambiguous: false,
    };
    if scale == 0.0 {
        return result;
    }
    let threshold = tol_rel * scale;
    let mut smallest_accepted = f64::INFINITY;
    for step in 0..rows.min(cols) {
        let (mut pr, mut pc, mut best) = (step, step, -1.0);
        for r in step..rows {
            for c in step..cols {
                let mag = a[r * cols + c].norm();
                if mag > best {
                    (pr, pc, best) = (r, c, mag);
                }
            }
        }
        if best <= threshold {
            result.ambiguous = best * AMBIGUITY_FACTOR >= threshold;
            break;
        }
        smallest_accepted = smallest_accepted.min(best);
        swap_rows(&mut a, cols, step, pr);
        swap_cols(&mut a, rows, cols, step, pc);
        let pivot = a[step * cols + step];
        for r in step + 1..rows {
            let factor = a[r * cols + step] / pivot;
            if factor == Complex64::zero() {
                continue;
            }
            for c in step + 1..cols {
                let sub = factor * a[step * cols + c];
                a[r * cols + c] -= sub;
            }
            a[r * cols + step] = Complex64::zero();
        }
        result.rank += 1;
    }
    if result.rank > 0 {
        result.ambiguity_margin = Some(smallest_accepted / threshold);
    }
    result
}

/// Splits a rank-one matrix into `m = u vᵀ`.
///
/// `u` is a nonzero column of `m`, `v` the matching row divided by the pivot
/// entry they share. Exact matrices reconstruct exactly.
pub fn rank_one_factors(m: &CoefficientMatrix) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let rank = match m.kind() {
        ScalarKind::Exact => rank_exact(m)?.rank,
        ScalarKind::Numeric => rank_numeric(m, DEFAULT_TOL_REL)?.rank,
    };
    if rank != 1 {
        return Err(Error::NotRankOne { rank });
    }
    Ok(outer_factors(m))
}

/// The factor split of [`rank_one_factors`] for a matrix already known to
/// have rank one.
pub(crate) fn outer_factors(m: &CoefficientMatrix) -> (Vec<Scalar>, Vec<Scalar>) {
    let cols = m.cols();
    let flat = match m.kind() {
        ScalarKind::Exact => m.entries().iter().position(|s| !s.is_zero()),
        ScalarKind::Numeric => m
            .entries()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i),
    }
    .expect("rank one has a nonzero entry");
    let (pr, pc) = (flat / cols, flat % cols);
    let pivot_inv = m.get(pr, pc).inv().expect("pivot is nonzero");
    let u = (0..m.rows()).map(|r| m.get(r, pc).clone()).collect();
    let v = (0..cols).map(|c| m.get(pr, c) * &pivot_inv).collect();
    (u, v)
}

/// Determinant of a square exact matrix (row-major).
pub(crate) fn exact_determinant(n: usize, entries: &[ExactComplex]) -> ExactComplex {
    let mut a = entries.to_vec();
    let mut det = ExactComplex::one();
    for step in 0..n {
        let Some(pr) = (step..n).find(|&r| !a[r * n + step].is_zero()) else {
            return ExactComplex::zero();
        };
        if pr != step {
            swap_rows(&mut a, n, step, pr);
            det = -det;
        }
        let pivot = a[step * n + step].clone();
        det = exact_mul(&det, &pivot);
        let pivot_inv = exact_inv(&pivot);
        for r in step + 1..n {
            if a[r * n + step].is_zero() {
                continue;
            }
            let factor = exact_mul(&a[r * n + step], &pivot_inv);
            for c in step + 1..n {
                let sub = exact_mul(&factor, &a[step * n + c]);
                a[r * n + c] = &a[r * n + c] - &sub;
            }
        }
    }
    det
}

/// Inverse of a square exact matrix by Gauss-Jordan, `None` when singular.
pub(crate) fn exact_inverse(n: usize, entries: &[ExactComplex]) -> Option<Vec<ExactComplex>> {
    let w = 2 * n;
    let mut a = vec![ExactComplex::zero(); n * w];
    for r in 0..n {
        for c in 0..n {
            a[r * w + c] = entries[r * n + c].clone();
        }
        a[r * w + n + r] = ExactComplex::one();
    }
    for step in 0..n {
        let pr = (step..n).find(|&r| !a[r * w + step].is_zero())?;
        swap_rows(&mut a, w, step, pr);
        let pivot_inv = exact_inv(&a[step * w + step]);
        for c in 0..w {
            a[step * w + c] = exact_mul(&a[step * w + c], &pivot_inv);
        }
        for r in 0..n {
            if r == step || a[r * w + step].is_zero() {
                continue;
            }
            let factor = a[r * w + step].clone();
            for c in 0..w {
                let sub = exact_mul(&factor, &a[step * w + c]);
                a[r * w + c] = &a[r * w + c] - &sub;
            }
        }
    }
    Some(
        (0..n)
            .flat_map(|r| a[r * w + n..(r + 1) * w].to_vec())
            .collect(),
    )
}

/// Determinant of a square numeric matrix with partial pivoting.
pub(crate) fn numeric_determinant(n: usize, entries: &[Complex64]) -> Complex64 {
    let mut a = entries.to_vec();
    let mut det = Complex64::one();
    for step in 0..n {
        let pr = (step..n)
            .max_by(|&x, &y| a[x * n + step].norm().total_cmp(&a[y * n + step].norm()))
            .expect("nonempty range");
        if a[pr * n + step] == Complex64::zero() {
            return Complex64::zero();
        }
        if pr != step {
            swap_rows(&mut a, n, step, pr);
            det = -det;
        }
        let pivot = a[step * n + step];
        det *= pivot;
        for r in step + 1..n {
            let factor = a[r * n + step] / pivot;
            for c in step + 1..n {
                let sub = factor * a[step * n + c];
                a[r * n + c] -= sub;
            }
        }
    }
    det
}
