//! Plain-text family files.
//!
//! ```text
//! q=2 n=3
//! k=0
//! k=1
//! 100
//! ```
//!
//! Header `q=<q> n=<n>`, then per member a `k=<k>` line followed by `k`
//! basis rows. Entries are single digits for `q ≤ 9` and comma-separated
//! integers otherwise. Lines starting with `#` are comments.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{Family, Subspace};
use crate::error::{Error, Result};
use crate::gfq::{Field, Matrix};

pub fn write_family(fam: &Family) -> String {
    let q = fam.field().order();
    let mut out = String::new();
    writeln!(out, "q={} n={}", q, fam.ambient_dim()).unwrap();
    for m in fam {
        writeln!(out, "k={}", m.dim()).unwrap();
        for row in m.basis().row_iter() {
            if q <= 9 {
                for &x in row {
                    out.push(char::from(b'0' + x));
                }
            } else {
                let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                out.push_str(&cells.join(","));
            }
            out.push('\n');
        }
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: usize, text: &str) -> Result<(u32, usize)> {
    let mut q = None;
    let mut n = None;
    for tok in text.split_whitespace() {
        match tok.split_once('=') {
            Some(("q", v)) => q = v.parse().ok(),
            Some(("n", v)) => n = v.parse().ok(),
            _ => return Err(parse_err(line, format!("unexpected token `{tok}` in header"))),
        }
    }
    match (q, n) {
        (Some(q), Some(n)) => Ok((q, n)),
        _ => Err(parse_err(line, "header must be `q=<q> n=<n>`")),
    }
}

fn parse_row(line: usize, text: &str, q: u32, n: usize) -> Result<Vec<u8>> {
    let row: Vec<u32> = if q <= 9 {
        text.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| parse_err(line, format!("bad digit `{c}`"))))
            .collect::<Result<_>>()?
    } else {
        text.split(',')
            .map(|c| {
                c.trim()
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad entry `{c}`")))
            })
            .collect::<Result<_>>()?
    };
    if row.len() != n {
        return Err(parse_err(line, format!("row has {} entries, expected {n}", row.len())));
    }
    if let Some(&x) = row.iter().find(|&&x| x >= q) {
        return Err(parse_err(line, format!("entry {x} is not an element of GF({q})")));
    }
    Ok(row.into_iter().map(|x| x as u8).collect())
}

/// Parses a family file. Rows need not be reduced; each member is brought
/// to canonical form and must have rank equal to its declared `k`.
pub fn parse_family(text: &str) -> Result<Family> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, htext) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (q, n) = parse_header(hline, htext)?;
    let field: Arc<Field> = Field::shared(q)?;

    let mut members = Vec::new();
    while let Some((kline, ktext)) = lines.next() {
        let k: usize = ktext
            .strip_prefix("k=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| parse_err(kline, format!("expected `k=<k>`, found `{ktext}`")))?;
        if k > n {
            return Err(parse_err(kline, format!("k = {k} exceeds n = {n}")));
        }
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let (rline, rtext) = lines
                .next()
                .ok_or_else(|| parse_err(kline, "unexpected end of file inside member"))?;
            rows.push(parse_row(rline, rtext, q, n)?);
        }
        let s = Subspace::from_matrix(&field, Matrix::from_rows(n, &rows)?)?;
        if s.dim() != k {
            return Err(Error::RankMismatch {
                declared: k,
                rank: s.dim(),
            });
        }
        members.push(s);
    }
    Family::new(&field, n, members)
}
