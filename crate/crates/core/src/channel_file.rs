//! JSON channel-family files.
//!
//! ```json
//! {
//!   "input_size": 2,
//!   "legit": [[[0.9, 0.1], [0.1, 0.9]]],
//!   "eaves": [[[0.7, 0.3], [0.3, 0.7]]],
//!   "pairing": "matched"
//! }
//! ```
//!
//! A row that is not a distribution is reported with its line number.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::channel::{Channel, CompoundWiretap, Pairing};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile<'a> {
    input_size: usize,
    #[serde(borrow)]
    legit: Vec<Vec<&'a RawValue>>,
    #[serde(borrow)]
    eaves: Vec<Vec<&'a RawValue>>,
    #[serde(default = "default_pairing")]
    pairing: Pairing,
}

fn default_pairing() -> Pairing {
    Pairing::Matched
}

#[derive(Serialize)]
struct OutFile<'a> {
    input_size: usize,
    legit: &'a [Channel],
    eaves: &'a [Channel],
    pairing: Pairing,
}

fn line_of(text: &str, fragment: &str) -> usize {
    let offset = (fragment.as_ptr() as usize).saturating_sub(text.as_ptr() as usize);
    text[..offset.min(text.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

fn parse_family(text: &str, family: &str, mats: &[Vec<&RawValue>], input_size: usize) -> Result<Vec<Channel>> {
    let mut out = Vec::with_capacity(mats.len());
    for (k, rows) in mats.iter().enumerate() {
        if rows.len() != input_size {
            return Err(Error::Parse(format!(
                "{family}[{k}] has {} rows but input_size is {input_size}",
                rows.len()
            )));
        }
        let mut parsed = Vec::with_capacity(rows.len());
        for (a, raw) in rows.iter().enumerate() {
            let line = line_of(text, raw.get());
            let row: Vec<f64> = serde_json::from_str(raw.get()).map_err(|e| {
                Error::Parse(format!(
                    "line {line}: {family}[{k}] row {a} is not a numeric array: {e}"
                ))
            })?;
            if let Err(e) = crate::channel::Distribution::new(row.clone()) {
                let detail = match e {
                    Error::InvalidArgument(m) => m,
                    other => other.to_string(),
                };
                return Err(Error::Parse(format!(
                    "line {line}: {family}[{k}] row {a} is not a probability distribution: {detail}"
                )));
            }
            parsed.push(row);
        }
        let ch = Channel::new(parsed).map_err(|e| Error::Parse(format!("{family}[{k}]: {e}")))?;
        out.push(ch);
    }
    Ok(out)
}

/// Parses a channel-family file into a validated compound.
pub fn parse_compound(text: &str) -> Result<CompoundWiretap> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}: {e}", e.line())))?;
    let legit = parse_family(text, "legit", &raw.legit, raw.input_size)?;
    let eaves = parse_family(text, "eaves", &raw.eaves, raw.input_size)?;
    CompoundWiretap::new(legit, eaves, raw.pairing).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::Parse(m),
        other => other,
    })
}

/// Serializes a compound into the file format, pretty-printed.
pub fn to_json(compound: &CompoundWiretap) -> String {
    let out = OutFile {
        input_size: compound.input_size(),
        legit: compound.legit(),
        eaves: compound.eaves(),
        pairing: compound.pairing(),
    };
    serde_json::to_string_pretty(&out).expect("channel serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::bsc;

    #[test]
    fn round_trip() {
        let c = CompoundWiretap::new(
            vec![bsc(0.1).unwrap(), bsc(0.2).unwrap()],
            vec![bsc(0.3).unwrap()],
            Pairing::Product,
        )
        .unwrap();
        let text = to_json(&c);
        assert_eq!(parse_compound(&text).unwrap(), c);
    }

    #[test]
    fn bad_row_reports_line() {
        let text = "{\n  \"input_size\": 2,\n  \"legit\": [[\n    [0.9, 0.1],\n    [0.2, 0.9]\n  ]],\n  \"eaves\": [[[0.5, 0.5], [0.5, 0.5]]]\n}\n";
        let err = parse_compound(text).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse(_)));
        assert!(msg.contains("line 5"), "{msg}");
        assert!(msg.contains("legit[0] row 1"), "{msg}");
    }

    #[test]
    fn shape_errors() {
        let text = r#"{"input_size": 3, "legit": [[[1.0, 0.0], [0.0, 1.0]]], "eaves": [[[1.0], [1.0]]]}"#;
        assert!(matches!(parse_compound(text), Err(Error::Parse(_))));
        let text = r#"{"input_size": 2, "legit": [[[1.0, 0.0], [0.0, 1.0]]], "eaves": []}"#;
        assert!(matches!(parse_compound(text), Err(Error::Parse(_))));
        assert!(matches!(parse_compound("{not json"), Err(Error::Parse(_))));
    }
}
