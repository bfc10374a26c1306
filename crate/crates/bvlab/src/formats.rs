//! Text formats: `polyfun v1`, `bintree v1` and `ratpres v1`.
//!
//! All three start with a header line, ignore blank lines and `#` comments,
//! and write rationals as `n/d`.

use std::fmt::Write as _;

use bvlab_core::present::TablePresentation;
use bvlab_core::{BinaryTree, DyadicString, PolygonalFunction, Rational};

use crate::error::CliError;

pub const POLYFUN_HEADER: &str = "polyfun v1";
pub const BINTREE_HEADER: &str = "bintree v1";
pub const RATPRES_HEADER: &str = "ratpres v1";

/// Non-comment lines with their 1-based line numbers, after checking the
/// header.
fn body<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, &'a str)>, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, h)) if h == header => Ok(lines.collect()),
        Some((n, h)) => Err(CliError::format(n, format!("expected header {header:?}, found {h:?}"))),
        None => Err(CliError::format(1, format!("empty file, expected header {header:?}"))),
    }
}

fn rational(line: usize, s: &str) -> Result<Rational, CliError> {
    s.parse().map_err(|e| CliError::format(line, format!("bad rational {s:?}: {e}")))
}

pub fn parse_polyfun(text: &str) -> Result<PolygonalFunction, CliError> {
    let mut pts = Vec::new();
    for (n, line) in body(text, POLYFUN_HEADER)? {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(CliError::format(n, format!("expected \"x y\", found {line:?}")));
        }
        pts.push((rational(n, cols[0])?, rational(n, cols[1])?));
    }
    PolygonalFunction::new(pts).map_err(|e| CliError::format(0, e.to_string()))
}

pub fn write_polyfun(f: &PolygonalFunction) -> String {
    let mut out = format!("{POLYFUN_HEADER}\n");
    for (x, y) in f.breakpoints() {
        writeln!(out, "{x} {y}").expect("write to string");
    }
    out
}

/// Parses a tree file. An optional `cap N` line sets the cap; otherwise the
/// longest string's length is used.
pub fn parse_bintree(text: &str) -> Result<BinaryTree, CliError> {
    let mut cap = None;
    let mut strings = Vec::new();
    for (n, line) in body(text, BINTREE_HEADER)? {
        if let Some(rest) = line.strip_prefix("cap ") {
            let c = rest.trim().parse().map_err(|_| CliError::format(n, format!("bad cap {rest:?}")))?;
            cap = Some(c);
            continue;
        }
        let s: DyadicString = line.parse().map_err(|e| CliError::format(n, format!("bad string {line:?}: {e}")))?;
        strings.push(s);
    }
    let cap = cap.unwrap_or_else(|| strings.iter().map(|s| s.len()).max().unwrap_or(0));
    Ok(BinaryTree::explicit(strings, cap)?)
}

/// Writes the tree's members up to `depth` in length-lex order.
pub fn write_bintree(t: &BinaryTree, depth: usize) -> Result<String, CliError> {
    let mut out = format!("{BINTREE_HEADER}\ncap {}\n", t.cap());
    for level in t.levels(depth)? {
        for s in level {
            writeln!(out, "{s}").expect("write to string");
        }
    }
    Ok(out)
}

/// `(index, p, q, member)` rows.
pub type RatpresRows = Vec<(u64, Rational, Rational, bool)>;

pub fn parse_ratpres_rows(text: &str) -> Result<RatpresRows, CliError> {
    let mut rows = Vec::new();
    for (n, line) in body(text, RATPRES_HEADER)? {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(CliError::format(n, format!("expected \"index p q member\", found {line:?}")));
        }
        let idx = cols[0].parse().map_err(|_| CliError::format(n, format!("bad index {:?}", cols[0])))?;
        let member = match cols[3] {
            "0" => false,
            "1" => true,
            m => return Err(CliError::format(n, format!("member must be 0 or 1, found {m:?}"))),
        };
        rows.push((idx, rational(n, cols[1])?, rational(n, cols[2])?, member));
    }
    Ok(rows)
}

pub fn parse_ratpres(text: &str) -> Result<TablePresentation, CliError> {
    Ok(TablePresentation::from_indexed(&parse_ratpres_rows(text)?)?)
}

pub fn write_ratpres(rows: &[(u64, Rational, Rational, bool)]) -> String {
    let mut out = format!("{RATPRES_HEADER}\n");
    for (i, p, q, m) in rows {
        writeln!(out, "{i} {p} {q} {}", u8::from(*m)).expect("write to string");
    }
    out
}
