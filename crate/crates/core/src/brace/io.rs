//! JSON brace files and CSV export of the circle table.
//!
//! ```json
//! {"kind": "family", "p": 5, "y": 1, "i": 0, "k": 0}
//! {"kind": "table", "p": 5, "n": 4, "basis": ["R","Q","P","S"], "lambda": [[1,0,...], ...]}
//! ```
//!
//! Each `lambda` entry is the row-major `n×n` matrix of `λ_a` for the element
//! with that index.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{verify_lambda_homomorphism, BraceError, BraceOps, BraceTable, Element};
use crate::exec::{Budget, Exec};
use crate::family::{build_brace, FamilyError, FamilyParams};
use crate::linalg::{FpMatrix, LinalgError, Prime};
use crate::report::{Check, Mode, Report};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed brace file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Brace(#[from] BraceError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BraceFile {
    Family { p: u32, y: i64, i: i64, k: i64 },
    Table { p: u32, n: usize, basis: Vec<String>, lambda: Vec<Vec<i64>> },
}

impl BraceFile {
    /// Family provenance is kept unless `expand` asks for the raw table.
    pub fn from_brace(brace: &BraceTable, expand: bool) -> BraceFile {
        match brace.meta() {
            Some(m) if !expand => BraceFile::Family {
                p: m.p().get(),
                y: m.y().value() as i64,
                i: m.i().value() as i64,
                k: m.k().value() as i64,
            },
            _ => BraceFile::Table {
                p: brace.prime().get(),
                n: brace.dim(),
                basis: brace.basis_names().to_vec(),
                lambda: brace.lambdas().iter().map(|m| m.data().iter().map(|&x| x as i64).collect()).collect(),
            },
        }
    }

    /// Rebuilds the brace. Tables are checked structurally here; call
    /// [`validate_loaded`] for the homomorphism property.
    pub fn into_brace(self) -> Result<BraceTable, IoError> {
        match self {
            BraceFile::Family { p, y, i, k } => Ok(build_brace(&FamilyParams::new(p, y, i, k)?)?),
            BraceFile::Table { p, n, basis, lambda } => {
                let prime = Prime::new(p)?;
                let mats =
                    lambda.iter().map(|flat| FpMatrix::from_flat(prime, n, n, flat)).collect::<Result<Vec<_>, _>>()?;
                Ok(BraceTable::from_lambda(prime, n, basis, mats)?)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("brace files always serialize")
    }
}

pub fn parse_brace(json: &str) -> Result<BraceTable, IoError> {
    serde_json::from_str::<BraceFile>(json)?.into_brace()
}

pub fn load_brace_file(path: &Path) -> Result<BraceTable, IoError> {
    parse_brace(&std::fs::read_to_string(path)?)
}

/// Full λ-homomorphism check for a loaded table. On failure at `(a, b)` an
/// associativity counterexample `(a, b, c)` is derived from it.
pub fn validate_loaded(brace: &BraceTable, exec: Exec) -> Report {
    let mut report = verify_lambda_homomorphism(brace, Mode::Full, exec, Budget::unlimited());
    let assoc = report.checks[0].witness.as_ref().map(|w| {
        let (a, b) = (Element::from_index(w[0] as usize), Element::from_index(w[1] as usize));
        let c = brace
            .elements()
            .find(|&c| brace.circle(brace.circle(a, b), c) != brace.circle(a, brace.circle(b, c)))
            .expect("a λ mismatch always breaks associativity");
        vec![a.into(), b.into(), c.into()]
    });
    report.checks.push(Check::from_witness("associativity", assoc));
    report
}

/// Writes the circle table as CSV: row `a`, column `b`, entry index of `a∘b`.
pub fn write_circle_csv<B: BraceOps, W: Write>(brace: &B, mut out: W) -> std::io::Result<()> {
    let coords = brace.coords();
    let mut line = String::new();
    for a in coords.elements() {
        line.clear();
        for (j, b) in coords.elements().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&brace.circle(a, b).index().to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::test_support::truncated_polynomial;
    use super::*;

    #[test]
    fn table_files_round_trip() {
        let t = truncated_polynomial(3, 2);
        let json = BraceFile::from_brace(&t, true).to_json();
        let back = parse_brace(&json).unwrap();
        assert_eq!(back, t);
        assert!(validate_loaded(&back, Exec::Sequential).passed());
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(matches!(parse_brace("{\"kind\":\"nope\"}"), Err(IoError::Json(_))));
        let short = r#"{"kind":"table","p":3,"n":1,"basis":["x"],"lambda":[[1],[1]]}"#;
        assert!(matches!(parse_brace(short), Err(IoError::Brace(BraceError::WrongTableSize { .. }))));
        let bad_p = r#"{"kind":"table","p":4,"n":1,"basis":["x"],"lambda":[[1]]}"#;
        assert!(matches!(parse_brace(bad_p), Err(IoError::Linalg(LinalgError::NotPrime(4)))));
    }

    #[test]
    fn corrupted_table_yields_associativity_triple() {
        let t = truncated_polynomial(3, 2);
        let mut file = BraceFile::from_brace(&t, true);
        if let BraceFile::Table { lambda, .. } = &mut file {
            lambda[4][2] = (lambda[4][2] + 1) % 3;
        }
        let bad = parse_brace(&file.to_json()).unwrap();
        let r = validate_loaded(&bad, Exec::Sequential);
        assert!(!r.passed());
        let w = r.get("associativity").unwrap().witness.clone().unwrap();
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn csv_has_one_row_per_element() {
        let t = truncated_polynomial(3, 2);
        let mut buf = Vec::new();
        write_circle_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<_> = text.lines().collect();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0], "0,1,2,3,4,5,6,7,8");
    }
}
