//! SLOCC classification of multipartite qudit pure states by the ranks of
//! their coefficient matrices.
//!
//! A state's [`RankSignature`] lists, for every cut size `l = 1..=n/2`, the
//! rank of the coefficient matrix under each qudit permutation of the
//! canonical [`PermutationSet`]. Ranks are SLOCC invariants, so states with
//! different signatures are inequivalent. [`classify`] bundles the signature
//! with the finest separable partition of the qudits.
//!
//! ```
//! use slocc_rank::{classify, parse_state};
//!
//! let cluster = parse_state(r#"{"dims":[2,2,2,2],"terms":[
//!     {"index":[0,0,0,0],"amp":"1"},{"index":[0,0,1,1],"amp":"1"},
//!     {"index":[1,1,0,0],"amp":"1"},{"index":[1,1,1,1],"amp":"-1"}]}"#).unwrap();
//! let result = classify(&cluster).unwrap();
//! assert_eq!(result.label, "l1:(2,2,2,2);l2:(2,4,4)");
//! assert!(result.genuinely_entangled);
//! ```

pub mod catalog;
pub mod classify;
pub mod coefficient;
pub mod error;
pub mod permutation;
pub mod pyramid;
pub mod radix;
pub mod rank;
pub mod scalar;
pub mod slocc;
pub mod state;
pub mod state_io;

pub use catalog::{
    cluster4, dicke_2_4, dicke_2_4_exact, ghz, ghz_exact, representatives, subfamily_count, Catalog,
    CatalogEntry, EntryStatus, System, Verification,
};
pub use classify::{
    classify, classify_with, factorize, factorize_with, finest_partition, is_biseparable,
    is_genuinely_entangled, parse_label, rank_signature, rank_signature_with, subfamily_label,
    verify_rank_bounds_222d, ClassificationResult, CutRanks, Factor, Factorization, Partition,
    RankOptions, RankSignature, Warning, WarningCode,
};
pub use coefficient::{block_matrix, coefficient_matrix, CoefficientMatrix};
pub use error::{Error, Result};
pub use permutation::{
    apply_permutation, legacy_argmax_l, permutation_set, PermutationSet, QuditPermutation,
    Transposition,
};
pub use pyramid::{Pyramid, PyramidEdge, PyramidNode};
pub use rank::{rank_exact, rank_numeric, rank_one_factors, Backend, RankResult, DEFAULT_TOL_REL};
pub use scalar::{ExactComplex, Scalar, ScalarKind};
pub use slocc::{apply_ilos, invariance_trial, random_ilo, LocalOperator, TrialReport};
pub use state::{MultiIndex, PureState};
pub use state_io::{parse_state, read_state_file, serialize_state};
