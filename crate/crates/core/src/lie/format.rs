//! Declarative text format for algebra specs.
//!
//! ```text
//! # comment
//! name su2
//! size 2
//! matrix
//! 0    1/2i
//! 1/2i 0
//! end
//! matrix
//! ...
//! end
//! ```
//!
//! `dim` is the number of `matrix` blocks; entries use the Gaussian rational
//! token grammar of [`crate::exact::parse_gauss`]. A file consisting only of
//! `builtin <name>` loads a built-in algebra.

use super::algebra::{builtin, LieAlgebraSpec};
use super::matrix::QMat;
use crate::error::{Error, Result};
use crate::exact::{fmt_gauss, parse_gauss_at, GaussRat};

pub fn parse_algebra(text: &str) -> Result<LieAlgebraSpec> {
    let mut name: Option<String> = None;
    let mut size: Option<usize> = None;
    let mut matrices: Vec<QMat> = Vec::new();
    let mut current: Option<(usize, Vec<Vec<GaussRat>>)> = None;

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap_or_default();
        if let Some((start, rows)) = current.as_mut() {
            if head == "end" {
                let n = size.ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "`size` must precede matrices".into(),
                })?;
                if rows.len() != n {
                    return Err(Error::Parse {
                        line: *start,
                        message: format!("matrix has {} rows, expected {n}", rows.len()),
                    });
                }
                let m = QMat::from_rows(std::mem::take(rows)).ok_or_else(|| Error::Parse {
                    line: *start,
                    message: "ragged matrix".into(),
                })?;
                matrices.push(m);
                current = None;
                continue;
            }
            let row: Vec<GaussRat> = line
                .split_whitespace()
                .map(|t| parse_gauss_at(t, line_no))
                .collect::<Result<_>>()?;
            if Some(row.len()) != size {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("row has {} entries, expected {:?}", row.len(), size),
                });
            }
            rows.push(row);
            continue;
        }
        match head {
            "builtin" => {
                let n = toks.next().ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "missing built-in name".into(),
                })?;
                return builtin(n);
            }
            "name" => name = toks.next().map(str::to_string),
            "size" => {
                let tok = toks.next().unwrap_or_default();
                size = Some(tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid size `{tok}`"),
                })?);
            }
            "dim" => {}
            "matrix" => current = Some((line_no, Vec::new())),
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    if current.is_some() {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: "unterminated matrix block".into(),
        });
    }
    let name = name.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing `name`".into(),
    })?;
    LieAlgebraSpec::from_matrices(name, matrices)
}

pub fn write_algebra(alg: &LieAlgebraSpec) -> String {
    let mut out = format!("name {}\nsize {}\ndim {}\n", alg.name(), alg.rep_size(), alg.dim());
    for m in alg.basis() {
        out.push_str("matrix\n");
        for r in 0..m.size() {
            let row: Vec<String> = (0..m.size()).map(|c| fmt_gauss(m.get(r, c))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out
}
