//! Check-result rows and their serialized forms.
//!
//! Every verification run emits a stream of [`ReportRow`]s: one row per
//! check, carrying the inputs that identify the case (algebra id, field
//! parameters, a digest of the linear form), the computed values, and the
//! verdict.  Rows serialize as JSON lines (the default) or CSV.
//!
//! Timing is recorded on each row but excluded from serialization unless
//! explicitly requested, so that repeated runs with the same seed produce
//! byte-identical output.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::Scalar;
use crate::{Error, Result};

/// One check result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    /// Name of the check that produced this row.
    pub check: String,
    /// Case identifier, usually the catalog name of the algebra.
    pub case: String,
    pub p: u32,
    pub k: u32,
    /// Digest of the dense coefficient list of the linear form.
    pub chi_digest: String,
    /// Computed values backing the verdict.
    pub values: serde_json::Value,
    pub pass: bool,
    /// Wall-clock milliseconds, when timing was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl ReportRow {
    pub fn new(
        check: impl Into<String>,
        case: impl Into<String>,
        p: u32,
        k: u32,
        chi: &[Scalar],
        values: serde_json::Value,
        pass: bool,
    ) -> ReportRow {
        ReportRow {
            check: check.into(),
            case: case.into(),
            p,
            k,
            chi_digest: chi_digest(chi),
            values,
            pass,
            millis: None,
        }
    }

    /// Records the elapsed time since `start` on the row.
    pub fn timed(mut self, start: Instant) -> ReportRow {
        self.millis = Some(start.elapsed().as_millis() as u64);
        self
    }
}

/// Digest identifying a linear form: the first 16 hex digits of the SHA-256
/// of its dense coefficient list.  The zero form on an n-dimensional algebra
/// digests as `[0; n]`.
pub fn chi_digest(chi: &[Scalar]) -> String {
    let mut h = Sha256::new();
    for &c in chi {
        h.update(c.to_le_bytes());
    }
    let out = h.finalize();
    let mut s = String::with_capacity(16);
    for b in &out[..8] {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Output encodings for a row stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format `{s}`"))),
        }
    }
}

/// Sorts rows into the canonical emission order (case, then check, then
/// form digest), making merged parallel output deterministic.
pub fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| {
        (&a.case, &a.check, &a.chi_digest).cmp(&(&b.case, &b.check, &b.chi_digest))
    });
}

/// Serializes rows: JSON lines or CSV, with sorted object keys.  Timing is
/// dropped unless `timing` is set.
pub fn emit(rows: &[ReportRow], format: Format, timing: bool) -> Result<String> {
    let rows: Vec<ReportRow> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            if !timing {
                r.millis = None;
            }
            r
        })
        .collect();
    match format {
        Format::Json => {
            let mut out = String::new();
            for r in &rows {
                let value =
                    serde_json::to_value(r).map_err(|e| Error::Parse(e.to_string()))?;
                out.push_str(
                    &serde_json::to_string(&value).map_err(|e| Error::Parse(e.to_string()))?,
                );
                out.push('\n');
            }
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["check", "case", "p", "k", "chi_digest", "values", "pass"];
            if timing {
                header.push("millis");
            }
            w.write_record(&header)
                .map_err(|e| Error::Parse(e.to_string()))?;
            for r in &rows {
                let mut rec = vec![
                    r.check.clone(),
                    r.case.clone(),
                    r.p.to_string(),
                    r.k.to_string(),
                    r.chi_digest.clone(),
                    serde_json::to_string(&r.values).map_err(|e| Error::Parse(e.to_string()))?,
                    r.pass.to_string(),
                ];
                if timing {
                    rec.push(r.millis.map(|m| m.to_string()).unwrap_or_default());
                }
                w.write_record(&rec).map_err(|e| Error::Parse(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}
