//! Rank signatures, separability, and subfamily classification.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coefficient::{block_matrix, coefficient_matrix, CoefficientMatrix};
use crate::error::{Error, Result};
use crate::permutation::{combinations, permutation_set, QuditPermutation};
use crate::rank::{outer_factors, rank_exact, rank_numeric, Backend, RankResult, DEFAULT_TOL_REL};
use crate::scalar::ScalarKind;
use crate::state::PureState;

/// How ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOptions {
    /// `None` picks the backend from the state's scalar kind.
    pub backend: Option<Backend>,
    pub tol_rel: f64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            backend: None,
            tol_rel: DEFAULT_TOL_REL,
        }
    }
}

impl RankOptions {
    pub fn numeric(tol_rel: f64) -> Self {
        RankOptions {
            backend: Some(Backend::Numeric),
            tol_rel,
        }
    }

    fn backend_for(&self, kind: ScalarKind) -> Backend {
        self.backend.unwrap_or(match kind {
            ScalarKind::Exact => Backend::Exact,
            ScalarKind::Numeric => Backend::Numeric,
        })
    }

    pub fn rank(&self, m: &CoefficientMatrix) -> Result<RankResult> {
        match self.backend_for(m.kind()) {
            Backend::Exact => rank_exact(m),
            Backend::Numeric => rank_numeric(m, self.tol_rel),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WarningCode {
    /// A numeric rank had a rejected pivot close to the threshold.
    RankAmbiguous,
    /// The signature has every rank above 1 but some bipartition outside the
    /// permutation sets factorizes (possible from five qudits on).
    SignatureMissesCut,
    /// A pyramid layering disagrees with a reference layer count.
    LayerConvention,
}

impl fmt::Display for WarningCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WarningCode::RankAmbiguous => "RANK_AMBIGUOUS",
            WarningCode::SignatureMissesCut => "SIGNATURE_MISSES_CUT",
            WarningCode::LayerConvention => "LAYER_CONVENTION",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub code: WarningCode,
    pub detail: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

fn ambiguity_warning(rank: &RankResult, what: impl FnOnce() -> String) -> Option<Warning> {
    rank.ambiguous.then(|| Warning {
        code: WarningCode::RankAmbiguous,
        detail: format!(
            "{} (rank {}, margin {:.3e})",
            what(),
            rank.rank,
            rank.ambiguity_margin.unwrap_or(0.0)
        ),
    })
}

/// Ranks for one cut size, in permutation-set order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutRanks {
    pub l: usize,
    pub permutations: Vec<QuditPermutation>,
    pub ranks: Vec<usize>,
}

/// Every coefficient-matrix rank for `l = 1 ..= n/2` over the permutation sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSignature {
    dims: Vec<usize>,
    cuts: Vec<CutRanks>,
}

impl RankSignature {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cuts(&self) -> &[CutRanks] {
        &self.cuts
    }

    /// Ranks for cut size `l`, if present.
    pub fn ranks(&self, l: usize) -> Option<&[usize]> {
        self.cuts.iter().find(|c| c.l == l).map(|c| c.ranks.as_slice())
    }

    pub fn all_ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.cuts.iter().flat_map(|c| c.ranks.iter().copied())
    }

    pub fn rank_sum(&self) -> usize {
        self.all_ranks().sum()
    }

    /// Canonical label, e.g. `l1:(2,2,2,2);l2:(2,4,4)`.
    pub fn label(&self) -> String {
        self.cuts
            .iter()
            .map(|c| format!("l{}:{}", c.l, tuple(&c.ranks)))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Compact name, e.g. `(2,2,2,2)-(2,4,4)`.
    pub fn node_name(&self) -> String {
        self.cuts
            .iter()
            .map(|c| tuple(&c.ranks))
            .collect::<Vec<_>>()
            .join("-")
    }

    /// Componentwise comparison of two signatures with the same shape.
    pub fn dominated_by(&self, other: &RankSignature) -> bool {
        self.cuts.len() == other.cuts.len()
            && self
                .all_ranks()
                .zip(other.all_ranks())
                .all(|(a, b)| a <= b)
            && self.all_ranks().count() == other.all_ranks().count()
    }
}

fn tuple(ranks: &[usize]) -> String {
    let inner: Vec<String> = ranks.iter().map(usize::to_string).collect();
    format!("({})", inner.join(","))
}

/// Parses a canonical label back into per-cut rank lists.
pub fn parse_label(label: &str) -> Result<Vec<(usize, Vec<usize>)>> {
    let bad = || Error::MalformedDocument(format!("bad label {label:?}"));
    if label.is_empty() {
        return Ok(Vec::new());
    }
    label
        .split(';')
        .map(|part| {
            let (l, ranks) = part.split_once(':').ok_or_else(bad)?;
            let l: usize = l.strip_prefix('l').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let inner = ranks
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            let ranks = inner
                .split(',')
                .map(|r| r.trim().parse().map_err(|_| bad()))
                .collect::<Result<Vec<usize>>>()?;
            Ok((l, ranks))
        })
        .collect()
}

impl fmt::Display for RankSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Canonical label of a signature.
pub fn subfamily_label(sig: &RankSignature) -> String {
    sig.label()
}

/// A partition of qudit positions into disjoint blocks.
///
/// Blocks are kept sorted, and ordered by their smallest member. Displayed
/// 1-based as `1,2|3|4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::MalformedDocument("empty partition block".into()));
            }
            block.sort_unstable();
            for &q in block.iter() {
                if q >= n || std::mem::replace(&mut seen[q], true) {
                    return Err(Error::MalformedDocument(format!(
                        "blocks {blocks:?} do not partition 0..{n}"
                    )));
                }
            }
        }
        blocks.sort();
        Ok(Partition { blocks })
    }

    pub fn whole(n: usize) -> Self {
        Partition {
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(|q| vec![q]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|q| (q + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&text.join("|"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedDocument(format!("bad partition {s:?}"));
        let blocks = s
            .split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(|q| match q.trim().parse::<usize>() {
                        Ok(q) if q >= 1 => Ok(q - 1),
                        _ => Err(bad()),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(blocks)
    }
}

/// Computes the rank signature with the default options.
pub fn rank_signature(state: &PureState) -> Result<RankSignature> {
    rank_signature_with(state, &RankOptions::default()).map(|(sig, _)| sig)
}

/// Computes the rank signature, also returning numeric ambiguity warnings.
pub fn rank_signature_with(
    state: &PureState,
    opts: &RankOptions,
) -> Result<(RankSignature, Vec<Warning>)> {
    let n = state.n();
    let mut cuts = Vec::new();
    let mut warnings = Vec::new();
    for l in 1..=n / 2 {
        let set = permutation_set(n, l)?;
        let mut ranks = Vec::with_capacity(set.len());
        for perm in set.iter() {
            let m = coefficient_matrix(state, perm, l)?;
            let r = opts.rank(&m)?;
            warnings.extend(ambiguity_warning(&r, || format!("l={l} {perm}")));
            ranks.push(r.rank);
        }
        cuts.push(CutRanks {
            l,
            permutations: set.members,
            ranks,
        });
    }
    Ok((
        RankSignature {
            dims: state.dims().to_vec(),
            cuts,
        },
        warnings,
    ))
}

/// True iff the state factorizes as `|a>_block ⊗ |b>_rest` (0-based positions).
pub fn is_biseparable(state: &PureState, row_block: &[usize]) -> Result<bool> {
    let m = block_matrix(state, row_block)?;
    Ok(RankOptions::default().rank(&m)?.rank == 1)
}

/// True iff every rank in the signature exceeds 1.
pub fn is_genuinely_entangled(state: &PureState) -> Result<bool> {
    Ok(rank_signature(state)?.all_ranks().all(|r| r > 1))
}

/// A factor state living on the listed original qudit positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub qudits: Vec<usize>,
    pub state: PureState,
}

/// A state split into unentangled factors on disjoint qudit blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn partition(&self) -> Partition {
        Partition::new(self.factors.iter().map(|f| f.qudits.clone()).collect())
            .expect("factor blocks partition the qudits")
    }

    /// Tensor product of the factors, with qudits put back in original order.
    pub fn recompose(&self) -> PureState {
        let mut factors = self.factors.iter();
        let first = factors.next().expect("at least one factor");
        let mut state = first.state.clone();
        let mut labels = first.qudits.clone();
        for f in factors {
            state = state.tensor_product(&f.state);
            labels.extend_from_slice(&f.qudits);
        }
        let order = QuditPermutation::from_mapping(labels)
            .expect("labels are a permutation")
            .inverse();
        state.permute_qudits(&order).expect("matching length")
    }
}

/// Splits a state into its finest product of unentangled blocks.
pub fn factorize(state: &PureState) -> Result<Factorization> {
    factorize_with(state, &RankOptions::default()).map(|(f, _)| f)
}

pub fn factorize_with(
    state: &PureState,
    opts: &RankOptions,
) -> Result<(Factorization, Vec<Warning>)> {
    let mut warnings = Vec::new();
    let factors = split(
        state.clone(),
        (0..state.n()).collect(),
        opts,
        &HashMap::new(),
        &mut warnings,
    )?;
    Ok((Factorization { factors }, warnings))
}

/// Recursively peels off rank-one bipartitions. `known` maps a sorted row
/// block to an already computed rank (top level only).
fn split(
    state: PureState,
    labels: Vec<usize>,
    opts: &RankOptions,
    known: &HashMap<Vec<usize>, usize>,
    warnings: &mut Vec<Warning>,
) -> Result<Vec<Factor>> {
    let n = state.n();
    let positions: Vec<usize> = (0..n).collect();
    for size in 1..=n / 2 {
        for block in combinations(&positions, size) {
            if 2 * size == n && block[0] != 0 {
                // The complement was already tried.
                continue;
            }
            let rank = match known.get(&block) {
                Some(&r) => r,
                None => {
                    let m = block_matrix(&state, &block)?;
                    let r = opts.rank(&m)?;
                    warnings.extend(ambiguity_warning(&r, || {
                        let b: Vec<usize> = block.iter().map(|&q| labels[q] + 1).collect();
                        format!("block {b:?}")
                    }));
                    r.rank
                }
            };
            if rank != 1 {
                continue;
            }
            let m = block_matrix(&state, &block)?;
            let (u, v) = outer_factors(&m);
            let left = PureState::from_dense(m.row_dims().to_vec(), u)?;
            let right = PureState::from_dense(m.col_dims().to_vec(), v)?;
            let left_labels = block.iter().map(|&q| labels[q]).collect();
            let right_labels = m.col_qudits().iter().map(|&q| labels[q]).collect();
            let mut out = split(left, left_labels, opts, &HashMap::new(), warnings)?;
            out.extend(split(right, right_labels, opts, &HashMap::new(), warnings)?);
            return Ok(out);
        }
    }
    Ok(vec![Factor { qudits: labels, state }])
}

/// The finest partition of the qudits into mutually unentangled blocks.
pub fn finest_partition(state: &PureState) -> Result<Partition> {
    Ok(factorize(state)?.partition())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub signature: RankSignature,
    /// Finest separable partition.
    pub family: Partition,
    pub genuinely_entangled: bool,
    pub label: String,
    pub warnings: Vec<Warning>,
}

pub fn classify(state: &PureState) -> Result<ClassificationResult> {
    classify_with(state, &RankOptions::default())
}

pub fn classify_with(state: &PureState, opts: &RankOptions) -> Result<ClassificationResult> {
    let (signature, mut warnings) = rank_signature_with(state, opts)?;

    // Ranks already known from the signature seed the top-level split search.
    let n = state.n();
    let mut known = HashMap::new();
    for cut in signature.cuts() {
        for (perm, &rank) in cut.permutations.iter().zip(&cut.ranks) {
            let mut rows = perm.row_qudits(cut.l).to_vec();
            rows.sort_unstable();
            let cols: Vec<usize> = (0..n).filter(|q| !rows.contains(q)).collect();
            known.insert(rows, rank);
            known.insert(cols, rank);
        }
    }
    let factors = split(state.clone(), (0..n).collect(), opts, &known, &mut warnings)?;
    let family = Factorization { factors }.partition();

    let genuinely_entangled = family.is_single_block();
    let signature_says_genuine = signature.all_ranks().all(|r| r > 1);
    if genuinely_entangled != signature_says_genuine {
        warnings.push(Warning {
            code: WarningCode::SignatureMissesCut,
            detail: format!("signature ranks all exceed 1 but the state splits as {family}"),
        });
    }
    Ok(ClassificationResult {
        label: signature.label(),
        signature,
        family,
        genuinely_entangled,
        warnings,
    })
}

/// Checks the 2x2x2xd rank bounds: the (1,4) single-qudit rank is at most
/// `min(d, 8)`, the other single-qudit ranks at most 2, and every pair rank
/// at most 4.
pub fn verify_rank_bounds_222d(sig: &RankSignature, d: usize) -> Result<bool> {
    if sig.dims() != [2, 2, 2, d] {
        return Err(Error::WrongSystem(sig.dims().to_vec()));
    }
    let l1 = sig.ranks(1).expect("four qudits have l=1");
    let l2 = sig.ranks(2).expect("four qudits have l=2");
    Ok(l1[3] <= d.min(8) && l1[..3].iter().all(|&r| r <= 2) && l2.iter().all(|&r| r <= 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::state_io::parse_state;

    fn qubits(n: usize, kets: &[&str]) -> PureState {
        ket_state(&vec![2; n], kets)
    }

    fn ket_state(dims: &[usize], kets: &[&str]) -> PureState {
        PureState::new(
            dims.to_vec(),
            kets.iter().map(|k| {
                (
                    k.bytes().map(|b| (b - b'0') as usize).collect(),
                    Scalar::int(1),
                )
            }),
        )
        .unwrap()
    }

    #[test]
    fn cluster_signature() {
        let s = parse_state(
            r#"{"dims":[2,2,2,2],"terms":[
                {"index":[0,0,0,0],"amp":"1/2"},{"index":[0,0,1,1],"amp":"1/2"},
                {"index":[1,1,0,0],"amp":"1/2"},{"index":[1,1,1,1],"amp":"-1/2"}]}"#,
        )
        .unwrap();
        let sig = rank_signature(&s).unwrap();
        assert_eq!(sig.ranks(1).unwrap(), [2, 2, 2, 2]);
        assert_eq!(sig.ranks(2).unwrap(), [2, 4, 4]);
        assert_eq!(sig.label(), "l1:(2,2,2,2);l2:(2,4,4)");
        assert_eq!(sig.node_name(), "(2,2,2,2)-(2,4,4)");
    }

    #[test]
    fn product_state_signature() {
        let s = qubits(4, &["0000"]);
        assert_eq!(subfamily_label(&rank_signature(&s).unwrap()), "l1:(1,1,1,1);l2:(1,1,1)");
        assert!(!is_genuinely_entangled(&s).unwrap());
        assert_eq!(finest_partition(&s).unwrap().to_string(), "1|2|3|4");
    }

    #[test]
    fn biseparable_blocks() {
        let s = ket_state(&[2, 2, 4], &["000", "011"]);
        assert!(is_biseparable(&s, &[0]).unwrap());
        assert!(!is_biseparable(&s, &[1]).unwrap());
        let ghz = qubits(3, &["000", "111"]);
        for block in [&[0][..], &[1], &[2], &[0, 1], &[1, 2]] {
            assert!(!is_biseparable(&ghz, block).unwrap());
        }
        assert_eq!(is_biseparable(&ghz, &[0, 1, 2]).unwrap_err().code(), "BAD_BLOCK");
    }

    #[test]
    fn genuine_cases() {
        assert!(is_genuinely_entangled(&qubits(4, &["0000", "1111"])).unwrap());
        let zero_ghz = qubits(4, &["0000", "0111"]);
        assert!(!is_genuinely_entangled(&zero_ghz).unwrap());
    }

    #[test]
    fn finest_partition_cases() {
        let dims = [2, 2, 2, 8];
        let s = ket_state(&dims, &["1010", "1001"]);
        assert_eq!(finest_partition(&s).unwrap().to_string(), "1|2|3,4");
        let s = ket_state(&dims, &["0000", "0011", "1100", "1111"]);
        assert_eq!(finest_partition(&s).unwrap().to_string(), "1,2|3,4");
        let s = ket_state(&dims, &["0000", "1001", "0110", "1111"]);
        assert_eq!(finest_partition(&s).unwrap().to_string(), "1,4|2,3");
    }

    #[test]
    fn factorization_recomposes() {
        let s = ket_state(&[2, 2, 2, 8], &["0000", "1001", "0110", "1111"]);
        let f = factorize(&s).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.recompose(), s);
    }

    #[test]
    fn classify_examples() {
        let s = ket_state(&[2, 2, 4], &["000", "011", "102"]);
        let r = classify(&s).unwrap();
        assert_eq!(r.family.to_string(), "1,2,3");
        assert_eq!(r.label, "l1:(2,2,3)");
        assert!(r.genuinely_entangled);
        assert!(r.warnings.is_empty());

        let s = ket_state(&[2, 2, 2, 8], &["0000", "0011", "0102", "0113"]);
        let r = classify(&s).unwrap();
        assert_eq!(r.family.to_string(), "1|2,3,4");
        assert_eq!(r.label, "l1:(1,2,2,4);l2:(2,4,2)");
        assert!(!r.genuinely_entangled);

        let s = ket_state(&[2, 2, 2, 8], &["0000", "1100", "1112"]);
        assert_eq!(classify(&s).unwrap().label, "l1:(2,2,2,2);l2:(2,3,3)");
    }

    #[test]
    fn five_qudit_cut_outside_signature() {
        // Qudits 3 and 4 (1-based) form a Bell pair; the rest a GHZ triple.
        // No member of the l=2 permutation set on five qudits selects {3,4}.
        let pair = qubits(2, &["00", "11"]);
        let triple = qubits(3, &["000", "111"]);
        let product = pair.tensor_product(&triple);
        let order = QuditPermutation::from_mapping(vec![2, 3, 0, 1, 4]).unwrap();
        let s = product.permute_qudits(&order).unwrap();
        let r = classify(&s).unwrap();
        assert_eq!(r.family.to_string(), "1,2,5|3,4");
        assert!(!r.genuinely_entangled);
        assert!(r.signature.all_ranks().all(|x| x > 1));
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.warnings[0].code, WarningCode::SignatureMissesCut);
    }

    #[test]
    fn rank_bounds() {
        let s = ket_state(&[2, 2, 2, 2], &["0000", "1111"]);
        let sig = rank_signature(&s).unwrap();
        assert!(verify_rank_bounds_222d(&sig, 2).unwrap());
        assert_eq!(verify_rank_bounds_222d(&sig, 3).unwrap_err().code(), "WRONG_SYSTEM");
        let s = ket_state(&[2, 2, 2], &["000"]);
        let sig = rank_signature(&s).unwrap();
        assert!(verify_rank_bounds_222d(&sig, 2).is_err());
    }

    #[test]
    fn partition_text() {
        let p: Partition = "3,4|1|2".parse().unwrap();
        assert_eq!(p.to_string(), "1|2|3,4");
        assert_eq!(p.blocks(), [vec![0], vec![1], vec![2, 3]]);
        assert!("1|1".parse::<Partition>().is_err());
        assert!("0|1".parse::<Partition>().is_err());
        assert!("1|3".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
    }

    #[test]
    fn label_parsing() {
        assert_eq!(
            parse_label("l1:(2,2,2,2);l2:(2,4,4)").unwrap(),
            vec![(1, vec![2, 2, 2, 2]), (2, vec![2, 4, 4])]
        );
        assert!(parse_label("l1:2,2").is_err());
    }

    #[test]
    fn numeric_backend_on_exact_state() {
        let s = qubits(4, &["0000", "1111"]);
        let (sig, warnings) = rank_signature_with(&s, &RankOptions::numeric(1e-9)).unwrap();
        assert_eq!(sig.label(), "l1:(2,2,2,2);l2:(2,2,2)");
        assert!(warnings.is_empty());
        let exact_on_numeric = RankOptions {
            backend: Some(Backend::Exact),
            tol_rel: 1e-9,
        };
        assert_eq!(
            rank_signature_with(&s.to_numeric(), &exact_on_numeric).unwrap_err(),
            Error::KindMismatch
        );
    }
}
