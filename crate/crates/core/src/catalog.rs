//! Named states and the table representatives of the 2x2x4 and 2x2x2xd
//! classifications, with their expected signatures and families.
//!
//! The built-in catalog is embedded at compile time from `catalog/`. Setting
//! `SLOCC_RANK_CATALOG` to a directory with the same layout (a
//! `manifest.json` plus the state files it names) replaces it at runtime.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, rank_signature, Partition, Warning};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::state::PureState;
use crate::state_io::parse_state;

mod data {
    include!(concat!(env!("OUT_DIR"), "/catalog_data.rs"));
}

/// Environment variable naming a catalog directory that replaces the
/// built-in data.
pub const CATALOG_ENV: &str = "SLOCC_RANK_CATALOG";

/// Which table an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum System {
    #[serde(rename = "2x2x4")]
    Qubits2Qudit4,
    /// Three qubits and one qudit of dimension `d`; stored with `d = 8`.
    #[serde(rename = "2x2x2xd")]
    Qubits3QuditD,
    #[serde(rename = "named")]
    Named,
}

impl System {
    pub fn as_str(self) -> &'static str {
        match self {
            System::Qubits2Qudit4 => "2x2x4",
            System::Qubits3QuditD => "2x2x2xd",
            System::Named => "named",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2x2x4" => Ok(System::Qubits2Qudit4),
            "2x2x2xd" => Ok(System::Qubits3QuditD),
            "named" => Ok(System::Named),
            _ => Err(Error::UnknownSystem(s.to_string())),
        }
    }
}

/// How an entry's state relates to the printed table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    /// The printed state realizes the printed signature.
    Printed,
    /// The printed state does not realize its printed signature.
    /// `expected_label` holds what it actually computes to.
    Disputed,
    /// Replacement for a disputed row, realizing the printed signature.
    Corrected,
    /// Constructed for a row the table elides.
    Derived,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestRecord {
    id: String,
    file: String,
    system: System,
    source: String,
    claimed_label: String,
    expected_label: String,
    expected_family: String,
    min_d: usize,
    status: EntryStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub system: System,
    pub source: String,
    pub state: PureState,
    /// The signature printed next to the representative.
    pub claimed_label: String,
    /// The signature the state actually has.
    pub expected_label: String,
    pub expected_family: Partition,
    /// Smallest qudit dimension that holds the state: highest level of the
    /// last qudit plus one, and at least 2.
    pub min_d: usize,
    pub status: EntryStatus,
    pub note: Option<String>,
}

impl CatalogEntry {
    /// Disputed rows duplicate a label realized elsewhere and are left out of
    /// subfamily and family totals.
    pub fn counts_toward_totals(&self) -> bool {
        self.status != EntryStatus::Disputed
    }

    /// The state re-embedded with its last qudit of dimension `d`.
    pub fn state_in(&self, d: usize) -> Result<PureState> {
        let mut dims = self.state.dims().to_vec();
        *dims.last_mut().expect("catalog states are nonempty") = d;
        self.state.with_dims(dims)
    }
}

/// Outcome of classifying one entry and comparing with the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub id: String,
    pub status: EntryStatus,
    pub claimed_label: String,
    pub expected_label: String,
    pub computed_label: String,
    pub expected_family: String,
    pub computed_family: String,
    pub warnings: Vec<Warning>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.computed_label == self.expected_label && self.computed_family == self.expected_family
    }

    pub fn realizes_claim(&self) -> bool {
        self.computed_label == self.claimed_label
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The embedded catalog.
    pub fn builtin() -> Result<Catalog> {
        Self::from_sources(data::MANIFEST, |file| {
            data::STATE_FILES
                .iter()
                .find(|(name, _)| *name == file)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| Error::Io {
                    path: file.to_string(),
                    message: "not embedded".into(),
                })
        })
    }

    pub fn load_dir(dir: &Path) -> Result<Catalog> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|e| Error::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })
        };
        let manifest = read(&dir.join("manifest.json"))?;
        Self::from_sources(&manifest, |file| read(&dir.join(file)))
    }

    /// `SLOCC_RANK_CATALOG` if set, otherwise the embedded catalog.
    pub fn load() -> Result<Catalog> {
        match std::env::var_os(CATALOG_ENV) {
            Some(dir) => Self::load_dir(Path::new(&dir)),
            None => Self::builtin(),
        }
    }

    fn from_sources(manifest: &str, mut read: impl FnMut(&str) -> Result<String>) -> Result<Catalog> {
        let records: Vec<ManifestRecord> = serde_json::from_str(manifest)
            .map_err(|e| Error::MalformedDocument(format!("manifest: {e}")))?;
        let mut ids = BTreeSet::new();
        let mut entries = Vec::with_capacity(records.len());
        for r in records {
            if !ids.insert(r.id.clone()) {
                return Err(Error::MalformedDocument(format!("duplicate catalog id {:?}", r.id)));
            }
            let state = parse_state(&read(&r.file)?).map_err(|e| match e {
                Error::MalformedDocument(m) => Error::MalformedDocument(format!("{}: {m}", r.file)),
                other => other,
            })?;
            entries.push(CatalogEntry {
                id: r.id,
                system: r.system,
                source: r.source,
                state,
                claimed_label: r.claimed_label,
                expected_label: r.expected_label,
                expected_family: r.expected_family.parse()?,
                min_d: r.min_d,
                status: r.status,
                note: r.note,
            });
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEntry(id.to_string()))
    }

    pub fn representatives(&self, system: System) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| e.system == system).collect()
    }

    /// Distinct labels among counted 2x2x2xd entries that fit in dimension
    /// `d`, each classified in dims (2,2,2,d).
    pub fn subfamily_count(&self, d: usize) -> Result<usize> {
        if d < 2 {
            return Err(Error::DimTooSmall { position: 3, dim: d });
        }
        let labels = self
            .representatives(System::Qubits3QuditD)
            .into_par_iter()
            .filter(|e| e.counts_toward_totals() && e.min_d <= d)
            .map(|e| Ok(rank_signature(&e.state_in(d)?)?.label()))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(labels.len())
    }

    /// Classifies entries in parallel. With `d` set, 2x2x2xd entries that fit
    /// are re-embedded in dims (2,2,2,d) and the rest are skipped.
    pub fn verify(&self, entries: &[&CatalogEntry], d: Option<usize>) -> Result<Vec<Verification>> {
        entries
            .par_iter()
            .filter(|e| match d {
                Some(d) => e.system != System::Qubits3QuditD || e.min_d <= d,
                None => true,
            })
            .map(|e| {
                let state = match d {
                    Some(d) if e.system == System::Qubits3QuditD => e.state_in(d)?,
                    _ => e.state.clone(),
                };
                let result = classify(&state)?;
                Ok(Verification {
                    id: e.id.clone(),
                    status: e.status,
                    claimed_label: e.claimed_label.clone(),
                    expected_label: e.expected_label.clone(),
                    computed_label: result.label,
                    expected_family: e.expected_family.to_string(),
                    computed_family: result.family.to_string(),
                    warnings: result.warnings,
                })
            })
            .collect()
    }
}

/// Entries for `system` (`2x2x4`, `2x2x2xd` or `named`) from [`Catalog::load`].
pub fn representatives(system: &str) -> Result<Vec<CatalogEntry>> {
    let system: System = system.parse()?;
    let catalog = Catalog::load()?;
    Ok(catalog.representatives(system).into_iter().cloned().collect())
}

/// [`Catalog::subfamily_count`] on [`Catalog::load`].
pub fn subfamily_count(d: usize) -> Result<usize> {
    Catalog::load()?.subfamily_count(d)
}

fn diagonal(n: usize, d: usize, amp: Scalar) -> Result<PureState> {
    if n < 2 {
        return Err(Error::LengthMismatch { expected: 2, actual: n });
    }
    PureState::new(vec![d; n], (0..d).map(|i| (vec![i; n], amp.clone())))
}

/// `(1/sqrt d) sum_i |i...i>` on `n` qudits of dimension `d`.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    diagonal(n, d, Scalar::Numeric(Complex64::new(1.0 / (d as f64).sqrt(), 0.0)))
}

/// `sum_i |i...i>` with exact unit amplitudes.
pub fn ghz_exact(n: usize, d: usize) -> Result<PureState> {
    diagonal(n, d, Scalar::int(1))
}

fn qubit_state(kets: &[(&str, Scalar)]) -> PureState {
    let terms = kets.iter().map(|(k, a)| {
        let index = k.bytes().map(|b| (b - b'0') as usize).collect::<Vec<_>>();
        (index, a.clone())
    });
    PureState::new(vec![2; kets[0].0.len()], terms).expect("fixed qubit state")
}

/// `(|0000> + |0011> + |1100> - |1111>) / 2`.
pub fn cluster4() -> PureState {
    let h = Scalar::ratio(1, 2);
    qubit_state(&[
        ("0000", h.clone()),
        ("0011", h.clone()),
        ("1100", h.clone()),
        ("1111", Scalar::ratio(-1, 2)),
    ])
}

const DICKE_2_4: [&str; 6] = ["0011", "1100", "0110", "1001", "0101", "1010"];

/// Four-qubit Dicke state with two excitations, normalized.
pub fn dicke_2_4() -> PureState {
    let a = Scalar::real(1.0 / 6f64.sqrt());
    qubit_state(&DICKE_2_4.map(|k| (k, a.clone())))
}

/// [`dicke_2_4`] with exact unit amplitudes.
pub fn dicke_2_4_exact() -> PureState {
    qubit_state(&DICKE_2_4.map(|k| (k, Scalar::int(1))))
}
