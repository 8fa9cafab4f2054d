//! Text format for field literals.
//!
//! ```text
//! field X
//! domain T3
//! algebra su2
//! degree 0
//! # k1 k2 k3  poly  form  generator  coefficient
//! 1 0 -1  0  0  2  1/2i
//! end
//! ```
//!
//! Wavevector components beyond the domain's periodic dimension must be 0.
//! `form` is the bitmask of coordinate indices (bit 0 = first coordinate).

use std::sync::Arc;

use num_traits::Zero;

use super::fourier::{Domain, FourierField, Mode, ValueKind};
use crate::error::{Error, Result};
use crate::exact::{fmt_gauss, parse_gauss_at, GaussRat};
use crate::lie::{builtin, LieAlgebraSpec};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Pending {
    name: String,
    start: usize,
    domain: Option<Domain>,
    algebra: Option<Arc<LieAlgebraSpec>>,
    degree: usize,
    terms: Vec<(usize, Mode, usize, GaussRat)>,
}

/// Parses every `field … end` block. Algebras are resolved by built-in name.
pub fn parse_fields(text: &str) -> Result<Vec<(String, FourierField)>> {
    let mut out = Vec::new();
    let mut cur: Option<Pending> = None;
    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some(p) = cur.as_mut() else {
            if toks[0] != "field" || toks.len() != 2 {
                return Err(perr(ln, "expected `field <name>`"));
            }
            cur = Some(Pending {
                name: toks[1].to_string(),
                start: ln,
                domain: None,
                algebra: None,
                degree: 0,
                terms: Vec::new(),
            });
            continue;
        };
        match toks[0] {
            "domain" => {
                let d = toks.get(1).and_then(|s| Domain::from_name(s));
                p.domain = Some(d.ok_or_else(|| perr(ln, "unknown domain"))?);
            }
            "algebra" => {
                let name = toks.get(1).ok_or_else(|| perr(ln, "missing algebra name"))?;
                p.algebra = Some(Arc::new(
                    builtin(name).map_err(|e| perr(ln, e.to_string()))?,
                ));
            }
            "degree" => {
                p.degree = toks
                    .get(1)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| perr(ln, "invalid degree"))?;
            }
            "end" => {
                let p = cur.take().expect("open block");
                out.push((p.name.clone(), finish(p)?));
            }
            _ => {
                if toks.len() != 7 {
                    return Err(perr(ln, format!("term needs 7 entries, got {}", toks.len())));
                }
                let int = |s: &str| -> Result<i64> {
                    s.parse().map_err(|_| perr(ln, format!("invalid integer `{s}`")))
                };
                let k = [int(toks[0])? as i32, int(toks[1])? as i32, int(toks[2])? as i32];
                let poly = u32::try_from(int(toks[3])?).map_err(|_| perr(ln, "negative degree"))?;
                let form = u8::try_from(int(toks[4])?).map_err(|_| perr(ln, "invalid form index"))?;
                let gen = usize::try_from(int(toks[5])?).map_err(|_| perr(ln, "invalid generator"))?;
                let c = parse_gauss_at(toks[6], ln)?;
                p.terms.push((ln, Mode::new(k, poly, form), gen, c));
            }
        }
    }
    if let Some(p) = cur {
        return Err(perr(p.start, "unterminated field block"));
    }
    Ok(out)
}

fn finish(p: Pending) -> Result<FourierField> {
    let domain = p.domain.ok_or_else(|| perr(p.start, "missing `domain`"))?;
    let alg = p.algebra.ok_or_else(|| perr(p.start, "missing `algebra`"))?;
    let mut f = FourierField::zero(domain, p.degree, ValueKind::Lie, alg.clone());
    for (ln, mode, gen, c) in p.terms {
        if gen >= alg.dim() {
            return Err(perr(ln, format!("generator {gen} out of range")));
        }
        let mut v = vec![GaussRat::zero(); alg.dim()];
        v[gen] = c;
        f.add_term(mode, v).map_err(|e| perr(ln, e.to_string()))?;
    }
    Ok(f)
}

/// Serializes a Lie-valued field whose algebra is a built-in.
pub fn write_field(name: &str, f: &FourierField) -> String {
    let mut out = format!(
        "field {name}\ndomain {}\nalgebra {}\ndegree {}\n",
        f.domain().name(),
        f.algebra().name(),
        f.degree()
    );
    for (m, v) in f.terms() {
        for (g, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.push_str(&format!(
                    "{} {} {} {} {} {} {}\n",
                    m.k[0],
                    m.k[1],
                    m.k[2],
                    m.poly,
                    m.form,
                    g,
                    fmt_gauss(c)
                ));
            }
        }
    }
    out.push_str("end\n");
    out
}
