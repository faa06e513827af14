//! The JSON state file format.
//!
//! ```json
//! { "dims": [2, 2, 2, 8],
//!   "terms": [ {"index": [0, 0, 0, 0], "amp": "1"},
//!              {"index": [1, 1, 1, 2], "amp": "1/sqrt(2)"},
//!              {"index": [1, 0, 0, 1], "amp": {"re": "1/2", "im": "-1/2"}} ] }
//! ```

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_real_token, real_token_text, scalar_from_parts, RealToken, Scalar};
use crate::state::PureState;

#[derive(Debug, Serialize, Deserialize)]
struct StateDocument {
    dims: Vec<usize>,
    terms: Vec<TermDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDocument {
    index: Vec<usize>,
    amp: AmpDocument,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum AmpDocument {
    Real(String),
    Complex {
        re: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<String>,
    },
}

impl AmpDocument {
    fn to_scalar(&self) -> Result<Scalar> {
        match self {
            AmpDocument::Real(t) => Ok(scalar_from_parts(
                parse_real_token(t)?,
                RealToken::Exact(BigRational::zero()),
            )),
            AmpDocument::Complex { re, im } => {
                let im = match im {
                    Some(t) => parse_real_token(t)?,
                    None => RealToken::Exact(BigRational::zero()),
                };
                Ok(scalar_from_parts(parse_real_token(re)?, im))
            }
        }
    }

    fn from_scalar(a: &Scalar) -> AmpDocument {
        let (re, im) = match a {
            Scalar::Exact(z) => (RealToken::Exact(z.re.clone()), RealToken::Exact(z.im.clone())),
            Scalar::Numeric(z) => (RealToken::Numeric(z.re), RealToken::Numeric(z.im)),
        };
        let im_zero = match &im {
            RealToken::Exact(r) => r.is_zero(),
            RealToken::Numeric(x) => *x == 0.0,
        };
        if im_zero {
            AmpDocument::Real(real_token_text(&re))
        } else {
            AmpDocument::Complex {
                re: real_token_text(&re),
                im: Some(real_token_text(&im)),
            }
        }
    }
}

/// Parses a state document. Fraction and integer tokens give exact
/// amplitudes; any decimal or square-root token makes the state numeric.
pub fn parse_state(document: &str) -> Result<PureState> {
    let doc: StateDocument =
        serde_json::from_str(document).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let terms = doc
        .terms
        .iter()
        .map(|t| Ok((t.index.clone(), t.amp.to_scalar()?)))
        .collect::<Result<Vec<_>>>()?;
    PureState::new(doc.dims, terms)
}

/// Serializes a state so that [`parse_state`] reproduces it.
pub fn serialize_state(state: &PureState) -> String {
    let doc = StateDocument {
        dims: state.dims().to_vec(),
        terms: state
            .terms()
            .map(|(i, a)| TermDocument {
                index: i.clone(),
                amp: AmpDocument::from_scalar(a),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("state documents always serialize")
}

/// Reads and parses a state file.
pub fn read_state_file(path: &std::path::Path) -> Result<PureState> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_state(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarKind;

    #[test]
    fn bell_is_exact() {
        let s = parse_state(
            r#"{"dims":[2,2],"terms":[{"index":[0,0],"amp":"1"},{"index":[1,1],"amp":"1"}]}"#,
        )
        .unwrap();
        assert_eq!(s.kind(), ScalarKind::Exact);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn sqrt_token_forces_numeric() {
        let s = parse_state(
            r#"{"dims":[2,2,2,8],"terms":[{"index":[0,0,0,0],"amp":"1"},
                {"index":[1,1,1,7],"amp":"1/sqrt(2)"}]}"#,
        )
        .unwrap();
        assert_eq!(s.kind(), ScalarKind::Numeric);
        let a = s.amplitude(&[1, 1, 1, 7]).to_c64();
        assert!((a.re - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.amplitude(&[0, 0, 0, 0]), Scalar::real(1.0));
    }

    #[test]
    fn complex_amplitudes() {
        let s = parse_state(
            r#"{"dims":[2],"terms":[{"index":[0],"amp":{"re":"1/2","im":"-3"}},
                {"index":[1],"amp":{"re":"2"}}]}"#,
        )
        .unwrap();
        assert_eq!(s.kind(), ScalarKind::Exact);
        assert_eq!(s.amplitude(&[0]).to_string(), "1/2-3i");
    }

    #[test]
    fn errors() {
        let oob = r#"{"dims":[2,2],"terms":[{"index":[0,2],"amp":"1"}]}"#;
        assert_eq!(parse_state(oob).unwrap_err().code(), "INDEX_OUT_OF_RANGE");
        let zero = r#"{"dims":[2,2],"terms":[{"index":[0,0],"amp":"0"}]}"#;
        assert_eq!(parse_state(zero).unwrap_err(), Error::ZeroState);
        let empty = r#"{"dims":[2,2],"terms":[]}"#;
        assert_eq!(parse_state(empty).unwrap_err(), Error::ZeroState);
        let small = r#"{"dims":[1,2],"terms":[{"index":[0,0],"amp":"1"}]}"#;
        assert_eq!(parse_state(small).unwrap_err().code(), "DIM_TOO_SMALL");
        let dup = r#"{"dims":[2],"terms":[{"index":[0],"amp":"1"},{"index":[0],"amp":"1"}]}"#;
        assert_eq!(parse_state(dup).unwrap_err().code(), "MALFORMED_DOCUMENT");
        for bad in [
            "not json",
            r#"{"dims":[2]}"#,
            r#"{"dims":[2],"terms":[{"index":[0],"amp":"x"}]}"#,
            r#"{"dims":[2],"terms":[{"index":[0],"amp":1}]}"#,
            r#"{"dims":[2],"terms":[{"index":[0],"amp":"1","extra":0}]}"#,
        ] {
            assert_eq!(parse_state(bad).unwrap_err().code(), "MALFORMED_DOCUMENT", "{bad}");
        }
    }

    #[test]
    fn serialization_round_trip() {
        let doc = r#"{"dims":[2,3],"terms":[{"index":[0,2],"amp":"-7/3"},
            {"index":[1,0],"amp":{"re":"0","im":"1"}}]}"#;
        let s = parse_state(doc).unwrap();
        assert_eq!(parse_state(&serialize_state(&s)).unwrap(), s);

        let n = s.to_numeric();
        assert_eq!(parse_state(&serialize_state(&n)).unwrap(), n);
    }
}
