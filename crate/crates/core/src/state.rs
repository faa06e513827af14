//! Sparse n-qudit pure states.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::permutation::QuditPermutation;
use crate::radix;
use crate::scalar::{Scalar, ScalarKind};

pub type MultiIndex = Vec<usize>;

/// A pure state `sum_s a_s |s_1 ... s_n>` stored as its nonzero amplitudes.
///
/// All amplitudes share one [`ScalarKind`]; mixing kinds at construction
/// promotes the whole state to numeric. The zero vector is not a state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    kind: ScalarKind,
    terms: BTreeMap<MultiIndex, Scalar>,
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::MalformedDocument("state needs at least one qudit".into()));
    }
    for (position, &dim) in dims.iter().enumerate() {
        if dim < 2 {
            return Err(Error::DimTooSmall { position, dim });
        }
    }
    Ok(())
}

fn check_index(index: &[usize], dims: &[usize]) -> Result<()> {
    if index.len() != dims.len() || index.iter().zip(dims).any(|(&s, &d)| s >= d) {
        return Err(Error::IndexOutOfRange {
            index: index.to_vec(),
            dims: dims.to_vec(),
        });
    }
    Ok(())
}

impl PureState {
    /// Builds a state from `(multi-index, amplitude)` pairs.
    ///
    /// Zero amplitudes are dropped. Repeated indices are rejected.
    pub fn new<I>(dims: Vec<usize>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Scalar)>,
    {
        check_dims(&dims)?;
        let mut map = BTreeMap::new();
        let mut kind = ScalarKind::Exact;
        for (index, amp) in terms {
            check_index(&index, &dims)?;
            kind = kind.join(amp.kind());
            if map.insert(index.clone(), amp).is_some() {
                return Err(Error::MalformedDocument(format!("duplicate index {index:?}")));
            }
        }
        Self::from_map(dims, kind, map)
    }

    fn from_map(dims: Vec<usize>, kind: ScalarKind, map: BTreeMap<MultiIndex, Scalar>) -> Result<Self> {
        let terms: BTreeMap<_, _> = map
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| {
                let a = a.to_kind(kind).expect("kinds only promote to numeric");
                (i, a)
            })
            .collect();
        if terms.is_empty() {
            return Err(Error::ZeroState);
        }
        Ok(PureState { dims, kind, terms })
    }

    /// Builds a state from a dense amplitude vector in lexicographic order.
    pub fn from_dense(dims: Vec<usize>, amplitudes: Vec<Scalar>) -> Result<Self> {
        check_dims(&dims)?;
        let volume = radix::volume(&dims);
        if amplitudes.len() != volume {
            return Err(Error::LengthMismatch {
                expected: volume,
                actual: amplitudes.len(),
            });
        }
        let kind = amplitudes
            .iter()
            .fold(ScalarKind::Exact, |k, a| k.join(a.kind()));
        let map = amplitudes
            .into_iter()
            .enumerate()
            .map(|(flat, a)| (radix::decode(flat, &dims), a))
            .collect();
        Self::from_map(dims, kind, map)
    }

    /// The basis state `|index>` with amplitude 1 (exact).
    pub fn basis(dims: Vec<usize>, index: MultiIndex) -> Result<Self> {
        Self::new(dims, [(index, Scalar::int(1))])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of qudits.
    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    /// Number of nonzero amplitudes.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, index: &[usize]) -> Scalar {
        self.terms
            .get(index)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.kind))
    }

    /// Dense amplitudes in lexicographic order of multi-indices.
    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut dense = vec![Scalar::zero(self.kind); radix::volume(&self.dims)];
        for (index, amp) in &self.terms {
            dense[radix::encode(index, &self.dims)] = amp.clone();
        }
        dense
    }

    /// Highest level used on each qudit.
    pub fn max_levels(&self) -> Vec<usize> {
        let mut levels = vec![0; self.n()];
        for index in self.terms.keys() {
            for (m, &s) in levels.iter_mut().zip(index) {
                *m = (*m).max(s);
            }
        }
        levels
    }

    /// The same amplitudes viewed in a different local dimension per qudit.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims)?;
        if dims.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: dims.len(),
            });
        }
        for index in self.terms.keys() {
            check_index(index, &dims)?;
        }
        Ok(PureState {
            dims,
            kind: self.kind,
            terms: self.terms.clone(),
        })
    }

    /// Converts every amplitude to numeric kind.
    pub fn to_numeric(&self) -> PureState {
        PureState {
            dims: self.dims.clone(),
            kind: ScalarKind::Numeric,
            terms: self
                .terms
                .iter()
                .map(|(i, a)| (i.clone(), Scalar::Numeric(a.to_c64())))
                .collect(),
        }
    }

    /// `self ⊗ other`: dims concatenate and amplitudes multiply.
    pub fn tensor_product(&self, other: &PureState) -> PureState {
        let kind = self.kind.join(other.kind);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut terms = BTreeMap::new();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let mut index = s.clone();
                index.extend_from_slice(t);
                terms.insert(index, a * b);
            }
        }
        PureState::from_map(dims, kind, terms).expect("product of nonzero states is nonzero")
    }

    /// Reorders qudits so that position `k` holds input qudit `perm.mapping()[k]`.
    pub fn permute_qudits(&self, perm: &QuditPermutation) -> Result<PureState> {
        let dims = perm.apply(&self.dims)?;
        let terms = self
            .terms
            .iter()
            .map(|(i, a)| Ok((perm.apply(i)?, a.clone())))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(PureState {
            dims,
            kind: self.kind,
            terms,
        })
    }

    /// Multiplies every amplitude by `c`.
    pub fn scale(&self, c: &Scalar) -> Result<PureState> {
        if c.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let kind = self.kind.join(c.kind());
        let terms = self.terms.iter().map(|(i, a)| (i.clone(), a * c)).collect();
        PureState::from_map(self.dims.clone(), kind, terms)
    }

    /// Entrywise comparison with absolute tolerance `tol` (exact equality
    /// when `tol` is zero and both states are exact).
    pub fn approx_eq(&self, other: &PureState, tol: f64) -> bool {
        if self.dims != other.dims {
            return false;
        }
        if tol == 0.0 && self.kind == ScalarKind::Exact && other.kind == ScalarKind::Exact {
            return self.terms == other.terms;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| (self.amplitude(k).to_c64() - other.amplitude(k).to_c64()).norm() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(dims: &[usize], terms: &[(&[usize], i64)]) -> PureState {
        PureState::new(
            dims.to_vec(),
            terms.iter().map(|(i, a)| (i.to_vec(), Scalar::int(*a))),
        )
        .unwrap()
    }

    #[test]
    fn construction_invariants() {
        let bell = state(&[2, 2], &[(&[0, 0], 1), (&[1, 1], 1)]);
        assert_eq!(bell.kind(), ScalarKind::Exact);
        assert_eq!(bell.len(), 2);

        let err = PureState::new(vec![2, 2], [(vec![0, 2], Scalar::int(1))]).unwrap_err();
        assert_eq!(err.code(), "INDEX_OUT_OF_RANGE");
        let err = PureState::new(vec![2, 1], [(vec![0, 0], Scalar::int(1))]).unwrap_err();
        assert_eq!(err, Error::DimTooSmall { position: 1, dim: 1 });
        let err = PureState::new(vec![2, 2], [(vec![0, 0], Scalar::int(0))]).unwrap_err();
        assert_eq!(err, Error::ZeroState);
        let err = PureState::new(
            vec![2, 2],
            [(vec![0, 0], Scalar::int(1)), (vec![0, 0], Scalar::int(2))],
        )
        .unwrap_err();
        assert_eq!(err.code(), "MALFORMED_DOCUMENT");
    }

    #[test]
    fn mixed_kinds_promote() {
        let s = PureState::new(
            vec![2],
            [(vec![0], Scalar::int(1)), (vec![1], Scalar::real(0.5))],
        )
        .unwrap();
        assert_eq!(s.kind(), ScalarKind::Numeric);
        assert!(s.terms().all(|(_, a)| a.kind() == ScalarKind::Numeric));
    }

    #[test]
    fn tensor_product_cases() {
        let zero = state(&[2], &[(&[0], 1)]);
        assert_eq!(zero.tensor_product(&zero), state(&[2, 2], &[(&[0, 0], 1)]));

        let plus = state(&[2], &[(&[0], 1), (&[1], 1)]);
        assert_eq!(
            plus.tensor_product(&zero),
            state(&[2, 2], &[(&[0, 0], 1), (&[1, 0], 1)])
        );

        let bell = state(&[2, 2], &[(&[0, 0], 1), (&[1, 1], 1)]);
        let prod = bell.tensor_product(&plus);
        assert_eq!(
            prod,
            state(
                &[2, 2, 2],
                &[(&[0, 0, 0], 1), (&[0, 0, 1], 1), (&[1, 1, 0], 1), (&[1, 1, 1], 1)]
            )
        );
    }

    #[test]
    fn permute_cases() {
        let s = state(&[2, 2], &[(&[0, 1], 1)]);
        let id = QuditPermutation::identity(2);
        assert_eq!(s.permute_qudits(&id).unwrap(), s);
        let swap = QuditPermutation::from_transpositions(2, &[(0, 1)]).unwrap();
        assert_eq!(s.permute_qudits(&swap).unwrap(), state(&[2, 2], &[(&[1, 0], 1)]));

        let s = state(&[2, 2, 4], &[(&[0, 1, 3], 1)]);
        let p = QuditPermutation::from_transpositions(3, &[(0, 2)]).unwrap();
        assert_eq!(s.permute_qudits(&p).unwrap(), state(&[4, 2, 2], &[(&[3, 1, 0], 1)]));

        let err = s.permute_qudits(&swap).unwrap_err();
        assert_eq!(err.code(), "LENGTH_MISMATCH");
    }

    #[test]
    fn scale_cases() {
        let bell = state(&[2, 2], &[(&[0, 0], 1), (&[1, 1], 1)]);
        assert_eq!(bell.scale(&Scalar::int(1)).unwrap(), bell);
        let half = bell.scale(&Scalar::ratio(1, 2)).unwrap();
        assert!(half.terms().all(|(_, a)| *a == Scalar::ratio(1, 2)));
        assert_eq!(bell.scale(&Scalar::int(0)), Err(Error::ZeroScalar));
    }

    #[test]
    fn dense_round_trip_and_redimension() {
        let s = state(&[2, 3], &[(&[0, 2], 3), (&[1, 0], -1)]);
        let back = PureState::from_dense(vec![2, 3], s.to_dense()).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.max_levels(), vec![1, 2]);
        assert!(s.with_dims(vec![2, 5]).is_ok());
        assert_eq!(s.with_dims(vec![2, 2]).unwrap_err().code(), "INDEX_OUT_OF_RANGE");
    }
}
