//! Qudit permutations and the permutation sets that select coefficient-matrix
//! bipartitions.
//!
//! Positions are 0-based in the API and printed 1-based in cycle notation,
//! so the swap of the first and third qudits displays as `(1,3)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A swap of two qudit positions (0-based, `.0 < .1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transposition(pub usize, pub usize);

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0 + 1, self.1 + 1)
    }
}

/// A bijection on qudit positions, kept together with a factorization into
/// transpositions.
///
/// `mapping()[k]` is the input qudit that lands at position `k`; it is the
/// sequence `(q_1, ..., q_n)` obtained by applying the transpositions, in
/// order, to `(0, ..., n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuditPermutation {
    mapping: Vec<usize>,
    factors: Vec<Transposition>,
}

impl QuditPermutation {
    pub fn identity(n: usize) -> Self {
        QuditPermutation {
            mapping: (0..n).collect(),
            factors: Vec::new(),
        }
    }

    /// Applies the swaps one after another to `(0, ..., n-1)`.
    pub fn from_transpositions(n: usize, swaps: &[(usize, usize)]) -> Result<Self> {
        let mut mapping: Vec<usize> = (0..n).collect();
        let mut factors = Vec::with_capacity(swaps.len());
        for &(a, b) in swaps {
            if a == b || a >= n || b >= n {
                return Err(Error::Internal(format!(
                    "transposition ({a},{b}) invalid for {n} qudits"
                )));
            }
            mapping.swap(a, b);
            factors.push(Transposition(a.min(b), a.max(b)));
        }
        Ok(QuditPermutation { mapping, factors })
    }

    /// Builds a permutation from its image sequence, deriving a factorization.
    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &q in &mapping {
            if q >= n || std::mem::replace(&mut seen[q], true) {
                return Err(Error::Internal(format!("{mapping:?} is not a bijection")));
            }
        }
        let mut current: Vec<usize> = (0..n).collect();
        let mut factors = Vec::new();
        for k in 0..n {
            if current[k] != mapping[k] {
                let j = (k + 1..n)
                    .find(|&j| current[j] == mapping[k])
                    .expect("bijection checked above");
                current.swap(k, j);
                factors.push(Transposition(k, j));
            }
        }
        Ok(QuditPermutation { mapping, factors })
    }

    pub fn n(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn transpositions(&self) -> &[Transposition] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(k, &q)| k == q)
    }

    pub fn inverse(&self) -> QuditPermutation {
        let mut inv = vec![0; self.n()];
        for (k, &q) in self.mapping.iter().enumerate() {
            inv[q] = k;
        }
        QuditPermutation::from_mapping(inv).expect("inverse of a bijection")
    }

    /// The qudits that index rows when the first `l` positions form the row block.
    pub fn row_qudits(&self, l: usize) -> &[usize] {
        &self.mapping[..l]
    }

    /// Reorders `items` so that component `k` of the result is component
    /// `mapping()[k]` of the input.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Result<Vec<T>> {
        if items.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: items.len(),
            });
        }
        Ok(self.mapping.iter().map(|&q| items[q].clone()).collect())
    }
}

impl fmt::Display for QuditPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("I");
        }
        for t in &self.factors {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Reorders a multi-index. Same contract as [`QuditPermutation::apply`].
pub fn apply_permutation(perm: &QuditPermutation, idx: &[usize]) -> Result<Vec<usize>> {
    perm.apply(idx)
}

/// The ordered permutation set used for cut size `l` on `n` qudits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationSet {
    pub n: usize,
    pub l: usize,
    pub members: Vec<QuditPermutation>,
}

impl PermutationSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, QuditPermutation> {
        self.members.iter()
    }
}

/// Generates the permutation set for cut size `l`.
///
/// For `l = 1` the members are `I, (1,2), ..., (1,n)`. For `l >= 2` they are
/// all products of disjoint swaps `(w_1,u_1)...(w_k,u_k)` with
/// `w_1 < ... < w_k < l + (n mod 2)`, `l < u_1 < ... < u_k <= n` and
/// `k <= l - (n mod 2)` (1-based), ordered by `k` and then lexicographically.
pub fn permutation_set(n: usize, l: usize) -> Result<PermutationSet> {
    if n < 2 || l < 1 || l > n / 2 {
        return Err(Error::BadL { n, l });
    }
    let mut members = vec![QuditPermutation::identity(n)];
    if l == 1 {
        for k in 1..n {
            members.push(QuditPermutation::from_transpositions(n, &[(0, k)])?);
        }
        return Ok(PermutationSet { n, l, members });
    }

    let parity = n % 2;
    // 0-based: w in [0, l + parity - 1), u in [l, n).
    let w_pool: Vec<usize> = (0..l + parity - 1).collect();
    let u_pool: Vec<usize> = (l..n).collect();
    let k_max = l - parity;
    let mut products: Vec<Vec<(usize, usize)>> = Vec::new();
    for k in 1..=k_max {
        for ws in combinations(&w_pool, k) {
            for us in combinations(&u_pool, k) {
                products.push(ws.iter().copied().zip(us.iter().copied()).collect());
            }
        }
    }
    // Ascending k first, then lexicographic on the swap sequence.
    products.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for swaps in products {
        members.push(QuditPermutation::from_transpositions(n, &swaps)?);
    }
    Ok(PermutationSet { n, l, members })
}

/// All `k`-element subsets of `pool`, each in increasing order, in
/// lexicographic order.
pub(crate) fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn recurse(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            recurse(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= pool.len() {
        recurse(pool, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Cut size that maximizes the product, over the permutation set, of the
/// smaller side of each coefficient matrix. Ties go to the larger `l`.
///
/// This is the single-cut selection rule that predates using every cut size;
/// it is kept for comparison.
pub fn legacy_argmax_l(dims: &[usize]) -> Result<usize> {
    let n = dims.len();
    if n < 2 {
        return Err(Error::BadL { n, l: 1 });
    }
    let mut best = (1, BigUint::zero());
    for l in 1..=n / 2 {
        let set = permutation_set(n, l)?;
        let score = set.iter().fold(BigUint::one(), |acc, perm| {
            let permuted = perm.apply(dims).expect("length checked");
            let rows: BigUint = permuted[..l].iter().map(|&d| BigUint::from(d)).product();
            let cols: BigUint = permuted[l..].iter().map(|&d| BigUint::from(d)).product();
            acc * rows.min(cols)
        });
        if score >= best.1 {
            best = (l, score);
        }
    }
    Ok(best.0)
}
