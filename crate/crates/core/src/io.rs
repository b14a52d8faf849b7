//! PALP-style vertex matrices, JSON polytope input and one-line JSON reports.
//!
//! A PALP record is a header line `r c [comment]` followed by `r` rows of `c`
//! integers. With `r < c` the columns are the points, otherwise the rows.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{IntVector, LatticeIndex};
use crate::verify::{Flags, RootCertificate, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalpRecord {
    pub rows: usize,
    pub cols: usize,
    /// Trailing header text, kept verbatim (trimmed).
    pub comment: Option<String>,
    pub matrix: Vec<IntVector>,
}

impl PalpRecord {
    pub fn from_points(points: &[IntVector], comment: Option<String>) -> Self {
        let cols = points.first().map_or(0, Vec::len);
        PalpRecord { rows: points.len(), cols, comment, matrix: points.to_vec() }
    }

    /// Columns are points when `rows < cols`; `transpose` flips the choice.
    pub fn points(&self, transpose: bool) -> Vec<IntVector> {
        if (self.rows < self.cols) != transpose {
            (0..self.cols).map(|j| self.matrix.iter().map(|r| r[j]).collect()).collect()
        } else {
            self.matrix.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: zero dimension in header")]
    ZeroDimension { line: usize },
    #[error("line {line}: non-integer token {token:?}")]
    NonInteger { line: usize, token: String },
    #[error("line {line}: expected {expected} entries, found {got}")]
    RowLength { line: usize, expected: usize, got: usize },
    #[error("line {line}: record expects {expected} rows, input ended after {got}")]
    RowCount { line: usize, expected: usize, got: usize },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match *self {
            ParseError::BadHeader { line, .. }
            | ParseError::ZeroDimension { line }
            | ParseError::NonInteger { line, .. }
            | ParseError::RowLength { line, .. }
            | ParseError::RowCount { line, .. } => line,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Parsed {
    pub records: Vec<PalpRecord>,
    /// Records skipped in lenient mode; always empty in strict mode.
    pub diagnostics: Vec<ParseError>,
}

fn parse_row(line: usize, text: &str) -> Result<IntVector, ParseError> {
    text.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| ParseError::NonInteger { line, token: t.to_string() }))
        .collect()
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize, Option<String>), ParseError> {
    let bad = || ParseError::BadHeader { line, text: text.to_string() };
    let mut it = text.split_whitespace();
    let r: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    let c: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    if r == 0 || c == 0 {
        return Err(ParseError::ZeroDimension { line });
    }
    let rest = it.collect::<Vec<_>>().join(" ");
    Ok((r, c, (!rest.is_empty()).then_some(rest)))
}

/// Parses every record in `text`. Blank lines are ignored everywhere. In
/// strict mode the first malformed record is an error; otherwise it is
/// skipped (resuming after the offending line) and reported in `diagnostics`.
pub fn parse_palp(text: &str, strict: bool) -> Result<Parsed, ParseError> {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty()).collect();
    let mut out = Parsed::default();
    let mut pos = 0;
    while pos < lines.len() {
        let (hline, htext) = lines[pos];
        pos += 1;
        let record = parse_header(hline, htext).and_then(|(r, c, comment)| {
            let mut matrix = Vec::with_capacity(r);
            while matrix.len() < r {
                let Some(&(line, text)) = lines.get(pos) else {
                    return Err(ParseError::RowCount { line: hline, expected: r, got: matrix.len() });
                };
                pos += 1;
                let row = parse_row(line, text)?;
                if row.len() != c {
                    return Err(ParseError::RowLength { line, expected: c, got: row.len() });
                }
                matrix.push(row);
            }
            Ok(PalpRecord { rows: r, cols: c, comment, matrix })
        });
        match record {
            Ok(rec) => out.records.push(rec),
            Err(e) if strict => return Err(e),
            Err(e) => out.diagnostics.push(e),
        }
    }
    Ok(out)
}

pub fn to_palp_string(records: &[PalpRecord]) -> String {
    let mut s = String::new();
    for r in records {
        let _ = write!(s, "{} {}", r.rows, r.cols);
        if let Some(c) = &r.comment {
            let _ = write!(s, " {c}");
        }
        s.push('\n');
        for row in &r.matrix {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPolytope {
    #[serde(default)]
    pub id: Option<String>,
    pub vertices: Vec<IntVector>,
}

pub fn parse_json_polytope(text: &str) -> Result<JsonPolytope, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Serialize)]
struct LevelLine {
    k: usize,
    /// `null` for infinite index.
    index: Option<u64>,
    free_rank: usize,
    torsion: Vec<i64>,
}

#[derive(Serialize)]
struct ReportLine<'a> {
    id: &'a str,
    n: usize,
    reflexive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariants: Option<Vec<LevelLine>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flags: Option<Flags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificates: Option<&'a [RootCertificate]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma_violations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<&'a [IntVector]>,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    notes: &'a [String],
}

fn report_line(r: &VerificationReport, with_certificates: bool) -> String {
    let line = ReportLine {
        id: &r.id,
        n: r.n,
        reflexive: r.reflexive,
        invariants: r.reflexive.then(|| {
            r.levels
                .iter()
                .map(|l| LevelLine {
                    k: l.k,
                    index: match l.index {
                        LatticeIndex::Finite(i) => Some(i),
                        LatticeIndex::Infinite => None,
                    },
                    free_rank: l.quotient.free_rank,
                    torsion: l.quotient.torsion.clone(),
                })
                .collect()
        }),
        flags: r.flags,
        roots: r.reflexive.then_some(r.root_count),
        certificate_count: r.reflexive.then_some(r.certificates.len()),
        certificates: (r.reflexive && with_certificates).then_some(&r.certificates[..]),
        lemma_violations: r.lemmas.as_ref().map(|l| l.violations.len()),
        counterexample: r.counterexample.as_ref().map(|c| &c.vertices[..]),
        notes: &r.notes,
    };
    serde_json::to_string(&line).expect("report serialization cannot fail")
}

/// One self-contained JSON line, no trailing newline.
pub fn emit_report(r: &VerificationReport) -> String {
    report_line(r, false)
}

pub fn emit_report_with_certificates(r: &VerificationReport) -> String {
    report_line(r, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::cube;
    use crate::verify::{verify_theorem, VerifyOptions};
    use proptest::prelude::*;

    #[test]
    fn spec_examples() {
        let p = parse_palp("2 4\n 1 0 -1 0\n 0 1 0 -1\n", true).unwrap();
        assert_eq!(p.records.len(), 1);
        assert_eq!(p.records[0].points(false), vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]);

        let p = parse_palp("3 3\n1 0 0\n0 1 0\n0 0 1\n", true).unwrap();
        assert_eq!(p.records[0].points(false), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(crate::polytope::build_polytope(&p.records[0].points(false)).is_err());

        assert_eq!(parse_palp("", true).unwrap(), Parsed::default());
    }

    #[test]
    fn orientation_and_comments() {
        let text = "4 2 M:5 4 N:5 4 H:1,1\n1 0\n\n0 1\n-1 0\n0 -1\n";
        let p = parse_palp(text, true).unwrap();
        let r = &p.records[0];
        assert_eq!(r.comment.as_deref(), Some("M:5 4 N:5 4 H:1,1"));
        assert_eq!(r.points(false).len(), 4);
        assert_eq!(r.points(true), vec![vec![1, 0, -1, 0], vec![0, 1, 0, -1]]);
        // tabs are whitespace
        let p = parse_palp("2\t2\n1\t0\n0\t1\n", true).unwrap();
        assert_eq!(p.records[0].matrix, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(
            parse_palp("2 2\n1 x\n0 1\n", true).unwrap_err(),
            ParseError::NonInteger { line: 2, token: "x".into() }
        );
        assert_eq!(parse_palp("0 3\n", true).unwrap_err(), ParseError::ZeroDimension { line: 1 });
        assert_eq!(parse_palp("2 2\n1 0\n", true).unwrap_err(), ParseError::RowCount { line: 1, expected: 2, got: 1 });
        assert_eq!(
            parse_palp("2 2\n1 0 0\n0 1\n", true).unwrap_err(),
            ParseError::RowLength { line: 2, expected: 2, got: 3 }
        );
        assert!(matches!(parse_palp("two 2\n", true), Err(ParseError::BadHeader { line: 1, .. })));
    }

    #[test]
    fn lenient_skips_bad_records() {
        let text = "2 2\n1 0\n0 1\n2 2\n1 q\n0 1\n1 2\n1 -1\n";
        let p = parse_palp(text, false).unwrap();
        // the bad record's second row is then read as a header "0 1" with dimension 0
        assert_eq!(p.diagnostics.iter().map(ParseError::line).collect::<Vec<_>>(), vec![5, 6]);
        assert_eq!(p.records.len(), 2);
        assert!(parse_palp(text, true).is_err());
        assert!(p.records.iter().any(|r| r.matrix == vec![vec![1, -1]]));
    }

    #[test]
    fn report_lines() {
        let sq = verify_theorem("square", &cube(2), VerifyOptions::default()).unwrap();
        let line = emit_report(&sq);
        assert!(!line.contains('\n'));
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["flags"]["codim2_eq_codim1"], false);
        assert_eq!(v["invariants"][0]["torsion"], serde_json::json!([2]));
        assert!(line.contains("\"torsion\":[2]"));
        assert!(v["notes"][0].as_str().unwrap().starts_with("planar exception"));

        let c = verify_theorem("cube", &cube(3), VerifyOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&emit_report(&c)).unwrap();
        for f in ["codim2_eq_codim1", "codim1_eq_full", "codim1_eq_m"] {
            assert_eq!(v["flags"][f], true);
        }
        assert_eq!(v["certificate_count"], 6);
        assert_eq!(emit_report(&c), emit_report(&c));
        let full: serde_json::Value = serde_json::from_str(&emit_report_with_certificates(&c)).unwrap();
        assert_eq!(full["certificates"].as_array().unwrap().len(), 6);

        let nr = VerificationReport::not_reflexive("x", 3);
        assert_eq!(emit_report(&nr), r#"{"id":"x","n":3,"reflexive":false}"#);
    }

    #[test]
    fn json_input() {
        let p = parse_json_polytope(r#"{"id":"sq","vertices":[[1,1],[1,-1],[-1,1],[-1,-1]]}"#).unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert!(parse_json_polytope(r#"{"vertices":[[1,"a"]]}"#).is_err());
    }

    fn record() -> impl Strategy<Value = PalpRecord> {
        (1usize..5, 1usize..5, proptest::option::of("[A-Za-z:0-9]{1,8}( [A-Za-z:0-9]{1,8}){0,2}")).prop_flat_map(
            |(r, c, comment)| {
                proptest::collection::vec(proptest::collection::vec(-1000i64..1000, c), r)
                    .prop_map(move |matrix| PalpRecord { rows: r, cols: c, comment: comment.clone(), matrix })
            },
        )
    }

    proptest! {
        #[test]
        fn parse_emit_parse(records in proptest::collection::vec(record(), 0..5)) {
            let text = to_palp_string(&records);
            let once = parse_palp(&text, true).unwrap();
            prop_assert_eq!(&once.records, &records);
            let twice = parse_palp(&to_palp_string(&once.records), true).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
