//! Invertible local operators and signature-invariance trials.
//!
//! Two states are SLOCC-equivalent when one is `F_1 ⊗ ... ⊗ F_n` applied to
//! the other with every `F_k` invertible. Every coefficient-matrix rank is
//! unchanged by such a map, so the label must survive it.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::classify::rank_signature;
use crate::error::{Error, Result};
use crate::rank::{exact_determinant, exact_inverse, numeric_determinant};
use crate::scalar::{exact_mul, ExactComplex, Scalar, ScalarKind};
use crate::state::PureState;

/// Relative determinant threshold for numeric operators.
const NUMERIC_DET_TOL: f64 = 1e-9;

/// Largest numerator magnitude and denominator drawn by [`random_ilo`].
pub const RANDOM_ENTRY_BOUND: i64 = 5;

const RANDOM_ATTEMPTS: usize = 100;

/// An invertible `dim x dim` operator on one qudit, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    dim: usize,
    kind: ScalarKind,
    entries: Vec<Scalar>,
}

impl LocalOperator {
    pub fn new(dim: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        let kind = entries
            .iter()
            .fold(ScalarKind::Exact, |k, s| k.join(s.kind()));
        let entries: Vec<Scalar> = entries
            .into_iter()
            .map(|s| s.to_kind(kind).expect("promotion"))
            .collect();
        let op = LocalOperator { dim, kind, entries };
        if !op.is_invertible() {
            return Err(Error::NotInvertible);
        }
        Ok(op)
    }

    pub fn from_ints(dim: usize, entries: &[i64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&v| Scalar::int(v)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim * dim)
            .map(|i| Scalar::int((i / dim == i % dim) as i64))
            .collect();
        LocalOperator {
            dim,
            kind: ScalarKind::Exact,
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.dim + col]
    }

    fn exact_entries(&self) -> Option<Vec<ExactComplex>> {
        self.entries.iter().map(|s| s.as_exact().cloned()).collect()
    }

    pub fn determinant(&self) -> Scalar {
        match self.exact_entries() {
            Some(e) => Scalar::Exact(exact_determinant(self.dim, &e)),
            None => {
                let e: Vec<Complex64> = self.entries.iter().map(Scalar::to_c64).collect();
                Scalar::Numeric(numeric_determinant(self.dim, &e))
            }
        }
    }

    fn is_invertible(&self) -> bool {
        let det = self.determinant();
        match self.kind {
            ScalarKind::Exact => !det.is_zero(),
            ScalarKind::Numeric => {
                let scale = self.entries.iter().map(Scalar::norm).fold(0.0, f64::max);
                det.norm() > NUMERIC_DET_TOL * scale.powi(self.dim as i32)
            }
        }
    }

    /// Exact inverse. Numeric operators give `KIND_MISMATCH`.
    pub fn inverse(&self) -> Result<LocalOperator> {
        let e = self.exact_entries().ok_or(Error::KindMismatch)?;
        let inv = exact_inverse(self.dim, &e).ok_or(Error::NotInvertible)?;
        Ok(LocalOperator {
            dim: self.dim,
            kind: ScalarKind::Exact,
            entries: inv.into_iter().map(Scalar::Exact).collect(),
        })
    }
}

/// Applies `ops[0] ⊗ ... ⊗ ops[n-1]` to the state.
pub fn apply_ilos(state: &PureState, ops: &[LocalOperator]) -> Result<PureState> {
    let dims = state.dims().to_vec();
    if ops.len() != dims.len() {
        return Err(Error::LengthMismatch {
            expected: dims.len(),
            actual: ops.len(),
        });
    }
    for (position, (op, &d)) in ops.iter().zip(&dims).enumerate() {
        if op.dim != d {
            return Err(Error::DimMismatch {
                position,
                op_dim: op.dim,
                qudit_dim: d,
            });
        }
    }
    let kind = ops.iter().fold(state.kind(), |k, op| k.join(op.kind));
    let dense: Vec<Scalar> = match kind {
        ScalarKind::Exact => {
            let mut amps: Vec<ExactComplex> = state
                .to_dense()
                .into_iter()
                .map(|s| s.as_exact().expect("exact").clone())
                .collect();
            for (k, op) in ops.iter().enumerate() {
                let matrix = op.exact_entries().expect("exact");
                amps = mode_product(&amps, &dims, k, &matrix, exact_mul, |a, b| a + b);
            }
            amps.into_iter().map(Scalar::Exact).collect()
        }
        ScalarKind::Numeric => {
            let mut amps: Vec<Complex64> = state.to_dense().iter().map(Scalar::to_c64).collect();
            for (k, op) in ops.iter().enumerate() {
                let matrix: Vec<Complex64> = op.entries.iter().map(Scalar::to_c64).collect();
                amps = mode_product(&amps, &dims, k, &matrix, |a, b| a * b, |a, b| a + b);
            }
            amps.into_iter().map(Scalar::Numeric).collect()
        }
    };
    PureState::from_dense(dims, dense).map_err(|e| match e {
        Error::ZeroState => Error::Internal("invertible operators produced the zero state".into()),
        other => other,
    })
}

/// Contracts `matrix` (d x d, row-major) with tensor mode `k`:
/// `out[.., t, ..] = sum_s matrix[t, s] * amps[.., s, ..]`.
fn mode_product<T: Clone + Zero>(
    amps: &[T],
    dims: &[usize],
    k: usize,
    matrix: &[T],
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let d = dims[k];
    let inner: usize = dims[k + 1..].iter().product();
    let outer: usize = dims[..k].iter().product();
    let mut out = vec![T::zero(); amps.len()];
    for o in 0..outer {
        for i in 0..inner {
            let at = |s: usize| (o * d + s) * inner + i;
            for s in 0..d {
                let a = &amps[at(s)];
                if a.is_zero() {
                    continue;
                }
                for t in 0..d {
                    let m = &matrix[t * d + s];
                    if m.is_zero() {
                        continue;
                    }
                    let slot = &mut out[at(t)];
                    *slot = add(slot, &mul(m, a));
                }
            }
        }
    }
    out
}

/// Draws an exact operator with entries `p/q`, `|p| <= 5`, `1 <= q <= 5`,
/// resampling until the determinant is nonzero.
pub fn random_ilo<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<LocalOperator> {
    for _ in 0..RANDOM_ATTEMPTS {
        let entries = (0..dim * dim)
            .map(|_| {
                let p = rng.random_range(-RANDOM_ENTRY_BOUND..=RANDOM_ENTRY_BOUND);
                let q = rng.random_range(1..=RANDOM_ENTRY_BOUND);
                Scalar::Exact(ExactComplex::new(
                    BigRational::new(p.into(), q.into()),
                    BigRational::zero(),
                ))
            })
            .collect();
        match LocalOperator::new(dim, entries) {
            Ok(op) => return Ok(op),
            Err(Error::NotInvertible) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal(format!(
        "no invertible {dim}x{dim} operator after {RANDOM_ATTEMPTS} draws"
    )))
}

/// Outcome of one invariance trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport {
    pub passed: bool,
    pub before: String,
    pub after: String,
}

/// Applies one random exact operator per qudit and compares labels.
///
/// Requires an exact state so that no numeric rank decision is involved.
pub fn invariance_trial<R: Rng + ?Sized>(state: &PureState, rng: &mut R) -> Result<TrialReport> {
    if state.kind() != ScalarKind::Exact {
        return Err(Error::KindMismatch);
    }
    let ops = state
        .dims()
        .iter()
        .map(|&d| random_ilo(d, rng))
        .collect::<Result<Vec<_>>>()?;
    let transformed = apply_ilos(state, &ops)?;
    let before = rank_signature(state)?.label();
    let after = rank_signature(&transformed)?.label();
    Ok(TrialReport {
        passed: before == after,
        before,
        after,
    })
}
