//! Independent ground truth for the integration tests.
//!
//! Nothing here calls the library's elimination, permutation generation or
//! classification code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use slocc_rank::{block_matrix, CoefficientMatrix, PureState, Scalar};

pub type Q = Complex<BigRational>;

pub fn q(v: i64) -> Q {
    Q::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
}

/// Laplace expansion along the first row, skipping zero entries.
pub fn det(m: &[Vec<Q>]) -> Q {
    match m.len() {
        0 => Q::one(),
        1 => m[0][0].clone(),
        n => {
            let mut total = Q::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Q>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][c].clone() * det(&minor);
                if c % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

/// Ascending `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest `k` with a nonzero `k x k` minor. Zero rows and columns are
/// dropped first; they cannot contribute to a nonzero minor.
pub fn minor_rank(m: &[Vec<Q>]) -> usize {
    let rows: Vec<&Vec<Q>> = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    if rows.is_empty() {
        return 0;
    }
    let cols: Vec<usize> = (0..rows[0].len())
        .filter(|&c| rows.iter().any(|r| !r[c].is_zero()))
        .collect();
    let m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let (nr, nc) = (m.len(), cols.len());
    for k in (1..=nr.min(nc)).rev() {
        for rs in subsets(nr, k) {
            for cs in subsets(nc, k) {
                let sub: Vec<Vec<Q>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                if !det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

pub fn exact_rows(m: &CoefficientMatrix) -> Vec<Vec<Q>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|s| s.as_exact().expect("exact matrix").clone()).collect())
        .collect()
}

/// Rank of the matrix with rows on `block`, read straight off the amplitude
/// map rather than through the library's matrix builder.
pub fn cut_rank(state: &PureState, block: &[usize]) -> usize {
    let dims = state.dims();
    let rest: Vec<usize> = (0..dims.len()).filter(|q| !block.contains(q)).collect();
    let index = |qs: &[usize], s: &[usize]| qs.iter().fold(0, |acc, &q| acc * dims[q] + s[q]);
    let rows: usize = block.iter().map(|&q| dims[q]).product();
    let cols: usize = rest.iter().map(|&q| dims[q]).product();
    let mut m = vec![vec![Q::zero(); cols]; rows];
    for (s, a) in state.terms() {
        m[index(block, s)][index(&rest, s)] = a.as_exact().expect("exact state").clone();
    }
    minor_rank(&m)
}

/// Finest partition by brute force: the set partition with most blocks in
/// which every block has cut rank 1. 0-based, blocks sorted.
pub fn oracle_partition(state: &PureState) -> Vec<Vec<usize>> {
    fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
        let Some((&first, rest)) = items.split_first() else {
            return vec![Vec::new()];
        };
        let mut out = Vec::new();
        for p in partitions(rest) {
            for i in 0..p.len() {
                let mut p2 = p.clone();
                p2[i].insert(0, first);
                out.push(p2);
            }
            let mut p2 = p.clone();
            p2.insert(0, vec![first]);
            out.push(p2);
        }
        out
    }
    let n = state.n();
    let items: Vec<usize> = (0..n).collect();
    let mut best = vec![items.clone()];
    for p in partitions(&items) {
        if p.len() > best.len() && p.iter().all(|b| cut_rank(state, b) == 1) {
            best = p;
        }
    }
    for b in &mut best {
        b.sort_unstable();
    }
    best.sort();
    best
}

/// True when no bipartition of the state has rank 1.
pub fn oracle_genuine(state: &PureState) -> bool {
    let n = state.n();
    (1..=n / 2).all(|k| subsets(n, k).iter().all(|b| cut_rank(state, b) > 1))
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Random exact state with small integer amplitudes on a random support.
pub fn random_exact_state<R: Rng>(rng: &mut R, dims: &[usize], max_terms: usize) -> PureState {
    let volume: usize = dims.iter().product();
    loop {
        let count = rng.random_range(1..=max_terms.min(volume));
        let mut flat: Vec<usize> = (0..volume).collect();
        flat.shuffle(rng);
        let terms = flat[..count].iter().map(|&f| {
            let mut idx = vec![0; dims.len()];
            let mut rest = f;
            for k in (0..dims.len()).rev() {
                idx[k] = rest % dims[k];
                rest /= dims[k];
            }
            let mut v = 0;
            while v == 0 {
                v = rng.random_range(-3..=3);
            }
            (idx, Scalar::int(v))
        });
        if let Ok(s) = PureState::new(dims.to_vec(), terms) {
            return s;
        }
    }
}

/// Random exact state that is genuinely entangled across its own qudits
/// (any state on a single qudit qualifies).
pub fn random_genuine_block<R: Rng>(rng: &mut R, dims: &[usize]) -> PureState {
    let volume: usize = dims.iter().product();
    loop {
        let s = random_exact_state(rng, dims, volume);
        if dims.len() == 1 || oracle_genuine(&s) {
            return s;
        }
    }
}

pub fn block_rank_oracle(state: &PureState, block: &[usize]) -> usize {
    minor_rank(&exact_rows(&block_matrix(state, block).unwrap()))
}

/// Random exact matrix with min(rows, cols) <= 4, often rank deficient.
pub fn random_matrix<R: Rng>(rng: &mut R) -> CoefficientMatrix {
    let small = rng.random_range(1..=4);
    let large = rng.random_range(1..=7);
    let (rows, cols) = if rng.random_bool(0.5) { (small, large) } else { (large, small) };
    // Low-rank products and sparse entries make deficient ranks common.
    let inner = rng.random_range(1..=4);
    let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..inner).map(|_| rng.random_range(-2..=2)).collect()).collect();
    let b: Vec<Vec<i64>> = (0..inner).map(|_| (0..cols).map(|_| rng.random_range(-2..=2)).collect()).collect();
    let complex = rng.random_bool(0.25);
    let data = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| {
                    let v: i64 = (0..inner).map(|k| a[r][k] * b[k][c]).sum();
                    if complex && (r + c) % 3 == 0 {
                        Scalar::exact_complex(
                            BigRational::from_integer(v.into()),
                            BigRational::new(v.into(), 3.into()),
                        )
                    } else {
                        Scalar::ratio(v, 1 + (r as i64 % 2))
                    }
                })
                .collect()
        })
        .collect();
    CoefficientMatrix::from_rows(data).unwrap()
}
