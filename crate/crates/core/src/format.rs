//! Text formats: matrices, certificates and atlases.
//!
//! Matrix files:
//!
//! ```text
//! # optional comment lines
//! 3
//! 010
//! 0 0 1
//! 000
//! ```
//!
//! The first non-comment line is `n`, followed by `n` rows of `n` characters
//! from `{0,1}`. Single spaces between characters are ignored. Blank lines
//! are skipped. Writers emit no spaces.
//!
//! Certificates are JSON documents with the fields `initial`, `moves`,
//! `final` and optionally `intermediates`, in that order. Matrices inside a
//! certificate are arrays of row strings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::decompose::{Move, MoveSequence};
use crate::error::{Error, Result};
use crate::matrix::ZeroOneMatrix;
use crate::search::ClassAtlas;
use crate::vertex_set::{VertexSet, MAX_DIM};

pub fn parse_matrix(text: &str) -> Result<ZeroOneMatrix> {
    let mut n: Option<usize> = None;
    let mut rows: Vec<VertexSet> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim_end();
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match n {
            None => {
                let value: usize = trimmed.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    column: line.len() - trimmed.len() + 1,
                    message: format!("expected dimension, found {trimmed:?}"),
                })?;
                if value == 0 || value > MAX_DIM {
                    return Err(Error::Parse {
                        line: line_no,
                        column: line.len() - trimmed.len() + 1,
                        message: format!("dimension must be in 1..={MAX_DIM}"),
                    });
                }
                n = Some(value);
            }
            Some(dim) => {
                if rows.len() == dim {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: format!("unexpected content after {dim} rows"),
                    });
                }
                rows.push(parse_row(line, dim, line_no)?);
            }
        }
    }
    let Some(n) = n else {
        return Err(Error::Parse {
            line: last_line.max(1),
            column: 1,
            message: "missing dimension".into(),
        });
    };
    if rows.len() != n {
        return Err(Error::Parse {
            line: last_line + 1,
            column: 1,
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    ZeroOneMatrix::new(n, rows)
}

fn parse_row(line: &str, n: usize, line_no: usize) -> Result<VertexSet> {
    let err = |column: usize, message: String| Error::Parse {
        line: line_no,
        column,
        message,
    };
    let bytes = line.as_bytes();
    let mut row = VertexSet::EMPTY;
    let mut count = 0;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'0' | b'1' => {
                if count == n {
                    return Err(err(i + 1, format!("row has more than {n} entries")));
                }
                if b == b'1' {
                    row.insert(count);
                }
                count += 1;
            }
            // a single separator between two entries
            b' ' if i > 0
                && bytes[i - 1] != b' '
                && i + 1 < bytes.len()
                && bytes[i + 1] != b' ' => {}
            other => return Err(err(i + 1, format!("unexpected {:?}", other as char))),
        }
    }
    if count != n {
        return Err(err(
            bytes.len() + 1,
            format!("row has {count} entries, expected {n}"),
        ));
    }
    Ok(row)
}

pub fn write_matrix(a: &ZeroOneMatrix) -> String {
    format!("{}\n{a}", a.n())
}

fn matrix_rows(a: &ZeroOneMatrix) -> Vec<String> {
    a.to_string().lines().map(str::to_owned).collect()
}

fn matrix_from_rows(rows: &[String], field: &str) -> Result<ZeroOneMatrix> {
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    ZeroOneMatrix::from_strs(&refs).map_err(|e| Error::Certificate(format!("{field}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    initial: Vec<String>,
    moves: Vec<Move>,
    #[serde(rename = "final")]
    final_matrix: Vec<String>,
    #[serde(default)]
    intermediates: Option<Vec<Vec<String>>>,
}

/// Pretty JSON with one move or matrix per line.
pub fn write_certificate(seq: &MoveSequence) -> String {
    let mut out = String::from("{\n");
    writeln!(
        out,
        "  \"initial\": {},",
        to_json(&matrix_rows(&seq.initial))
    )
    .unwrap();
    out.push_str("  \"moves\": [");
    for (i, mv) in seq.moves.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        write!(out, "    {}", to_json(mv)).unwrap();
    }
    out.push_str(if seq.moves.is_empty() {
        "],\n"
    } else {
        "\n  ],\n"
    });
    write!(
        out,
        "  \"final\": {}",
        to_json(&matrix_rows(&seq.final_matrix))
    )
    .unwrap();
    if let Some(mids) = &seq.intermediates {
        out.push_str(",\n  \"intermediates\": [");
        for (i, m) in mids.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            write!(out, "    {}", to_json(&matrix_rows(m))).unwrap();
        }
        out.push_str(if mids.is_empty() { "]" } else { "\n  ]" });
    }
    out.push_str("\n}\n");
    out
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("certificate parts serialize")
}

pub fn parse_certificate(text: &str) -> Result<MoveSequence> {
    let doc: CertificateDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let intermediates = match doc.intermediates {
        Some(ms) => Some(
            ms.iter()
                .map(|rows| matrix_from_rows(rows, "intermediates"))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(MoveSequence {
        initial: matrix_from_rows(&doc.initial, "initial")?,
        moves: doc.moves,
        final_matrix: matrix_from_rows(&doc.final_matrix, "final")?,
        intermediates,
    })
}

/// One record per class:
///
/// ```text
/// class 0
/// size 6
/// members 25
/// irreducible false
/// 3
/// 000
/// 000
/// 000
/// ```
///
/// `size` counts canonical forms, `members` counts labelled matrices.
pub fn write_atlas(atlas: &ClassAtlas) -> String {
    let mut out = String::new();
    writeln!(out, "# primitive equivalence classes").unwrap();
    writeln!(out, "n {}", atlas.n).unwrap();
    writeln!(out, "filter {}", atlas.filter).unwrap();
    writeln!(out, "classes {}", atlas.classes.len()).unwrap();
    for (i, class) in atlas.classes.iter().enumerate() {
        out.push('\n');
        writeln!(out, "class {i}").unwrap();
        writeln!(out, "size {}", class.size()).unwrap();
        writeln!(out, "members {}", class.matrix_count).unwrap();
        writeln!(out, "irreducible {}", class.irreducible).unwrap();
        out.push_str(&write_matrix(&class.representative));
    }
    out
}
