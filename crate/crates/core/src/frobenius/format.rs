//! Text format for Frobenius tables.
//!
//! ```text
//! #degree=2
//! #label1=chi+chi
//! #label2=Ind(psi^2)
//! #moduli=4
//! #excluded=2 even characteristic
//! 3;1 -6 9;1 0 9
//! ```
//!
//! Records are `p;charpoly1;charpoly2` with coefficients high-to-low. A comma is accepted in
//! place of either semicolon. Other lines starting with `#` are comments.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::FrobeniusTable;
use crate::algebra::RatPoly;
use crate::error::{Error, Result};
use crate::potequiv::SemisimpleClass;

fn format_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        column,
        message: message.into(),
    }
}

/// Splits on `sep`, returning each piece with its 1-based starting column.
fn split_columns(text: &str, sep: impl Fn(char) -> bool) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if sep(c) {
            out.push((start + 1, &text[start..i]));
            start = i + c.len_utf8();
        }
    }
    out.push((start + 1, &text[start..]));
    out
}

fn parse_number(token: &str, line: usize, column: usize) -> Result<BigRational> {
    let bad = || format_err(line, column, format!("not a number: {token:?}"));
    match token.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(format_err(line, column, "zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => token.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
    }
}

fn parse_class(field: &str, line: usize, column: usize) -> Result<SemisimpleClass> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for token in field.split(' ') {
        if !token.is_empty() {
            let c = parse_number(token, line, column + offset)?;
            if !c.is_integer() {
                return Err(format_err(line, column + offset, format!("coefficient {c} is not an integer")));
            }
            coeffs.push(c);
        }
        offset += token.len() + 1;
    }
    if coeffs.is_empty() {
        return Err(format_err(line, column, "empty coefficient list"));
    }
    coeffs.reverse();
    SemisimpleClass::new(RatPoly::from_coeffs(coeffs))
        .map_err(|e| format_err(line, column, e.to_string()))
}

fn parse_header(table: &mut FrobeniusTable, degree: &mut Option<usize>, body: &str, line: usize) -> Result<()> {
    let Some((key, value)) = body.split_once('=') else {
        return Ok(());
    };
    let col = key.len() + 3;
    match key.trim() {
        "degree" => {
            let n = value
                .trim()
                .parse()
                .map_err(|_| format_err(line, col, format!("bad degree {value:?}")))?;
            *degree = Some(n);
        }
        "label1" => table.label1 = value.to_string(),
        "label2" => table.label2 = value.to_string(),
        "moduli" => {
            table.moduli = value
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse().map_err(|_| format_err(line, col, format!("bad modulus {s:?}"))))
                .collect::<Result<_>>()?;
        }
        "excluded" => {
            let (p, reason) = value.split_once(' ').unwrap_or((value, ""));
            let p = p
                .parse()
                .map_err(|_| format_err(line, col, format!("bad prime {p:?}")))?;
            table
                .exclude(p, reason)
                .map_err(|e| format_err(line, col, e.to_string()))?;
        }
        _ => {}
    }
    Ok(())
}

pub fn parse_frobenius_table(text: &str) -> Result<FrobeniusTable> {
    let mut table = FrobeniusTable::new("", "", Vec::new());
    let mut degree: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() {
            continue;
        }
        if let Some(body) = raw.strip_prefix('#') {
            if !table.is_empty() && body.starts_with("moduli=") {
                return Err(format_err(line, 1, "moduli header after the first record"));
            }
            parse_header(&mut table, &mut degree, body, line)?;
            continue;
        }
        let Some(n) = degree else {
            return Err(format_err(line, 1, "record before the #degree= header"));
        };
        let fields = split_columns(raw, |c| c == ';' || c == ',');
        if fields.len() != 3 {
            return Err(format_err(line, 1, format!("expected 3 fields, found {}", fields.len())));
        }
        let (pcol, ptext) = fields[0];
        let p: u64 = ptext
            .trim()
            .parse()
            .map_err(|_| format_err(line, pcol, format!("bad prime {ptext:?}")))?;
        let c1 = parse_class(fields[1].1, line, fields[1].0)?;
        let c2 = parse_class(fields[2].1, line, fields[2].0)?;
        for (c, col) in [(&c1, fields[1].0), (&c2, fields[2].0)] {
            if c.degree() != n {
                return Err(format_err(line, col, format!("degree {} but header says {n}", c.degree())));
            }
        }
        table
            .push(p, c1, c2)
            .map_err(|e| format_err(line, pcol, e.to_string()))?;
    }
    if let Some(n) = degree {
        table.set_degree(n);
    }
    Ok(table)
}

fn coefficient_list(c: &SemisimpleClass) -> String {
    let mut coeffs: Vec<String> = c.charpoly().coeffs().iter().map(|q| q.to_string()).collect();
    coeffs.reverse();
    coeffs.join(" ")
}

pub fn write_frobenius_table(table: &FrobeniusTable) -> String {
    let mut out = String::new();
    if let Some(n) = table.degree() {
        writeln!(out, "#degree={n}").unwrap();
    }
    writeln!(out, "#label1={}", table.label1).unwrap();
    writeln!(out, "#label2={}", table.label2).unwrap();
    if !table.moduli.is_empty() {
        let m: Vec<String> = table.moduli.iter().map(u64::to_string).collect();
        writeln!(out, "#moduli={}", m.join(",")).unwrap();
    }
    for (p, reason) in table.excluded() {
        writeln!(out, "#excluded={p} {reason}").unwrap();
    }
    for e in table.entries() {
        writeln!(
            out,
            "{};{};{}",
            e.record.p,
            coefficient_list(&e.charpoly1),
            coefficient_list(&e.charpoly2)
        )
        .unwrap();
    }
    out
}

pub fn read_frobenius_table(path: impl AsRef<Path>) -> Result<FrobeniusTable> {
    parse_frobenius_table(&std::fs::read_to_string(path)?)
}

pub fn save_frobenius_table(table: &FrobeniusTable, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_frobenius_table(table))?;
    Ok(())
}
