//! Text formats for algebras and congruence lists.
//!
//! Algebra files:
//!
//! ```text
//! # comment
//! algebra chain3
//! size 3
//! op meet 2
//! 0 0 0
//! 0 1 1
//! 0 1 2
//! ```
//!
//! Values may be spread over any number of lines. Congruence files hold one
//! `cong <name> <label_0> ... <label_{n-1}>` line per partition.

use crtkit_core::{FiniteAlgebra, Operation, Partition};

use crate::CliError;

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment tokens with their 1-based line numbers.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
        .collect()
}

fn number(tok: Option<&(usize, &str)>, last_line: usize, what: &str) -> Result<usize, CliError> {
    let &(line, t) = tok.ok_or_else(|| parse_err(last_line, format!("expected {what}, found end of file")))?;
    t.parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{t}`")))
}

fn keyword(tok: Option<&(usize, &str)>, last_line: usize, kw: &str) -> Result<(), CliError> {
    match tok {
        Some(&(_, t)) if t == kw => Ok(()),
        Some(&(line, t)) => Err(parse_err(line, format!("expected `{kw}`, found `{t}`"))),
        None => Err(parse_err(last_line, format!("expected `{kw}`, found end of file"))),
    }
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra, CliError> {
    let toks = tokens(text);
    let last = text.lines().count().max(1);
    let mut it = toks.iter().peekable();
    keyword(it.next(), last, "algebra")?;
    let &(_, name) = it
        .next()
        .ok_or_else(|| parse_err(last, "expected algebra name"))?;
    keyword(it.next(), last, "size")?;
    let size = number(it.next(), last, "universe size")?;
    if size == 0 {
        return Err(parse_err(last, "universe size must be positive"));
    }
    let mut ops = Vec::new();
    while let Some(tok) = it.next() {
        keyword(Some(tok), last, "op")?;
        let &(op_line, op_name) = it
            .next()
            .ok_or_else(|| parse_err(last, "expected operation name"))?;
        let arity = number(it.next(), last, "arity")?;
        let entries = size
            .checked_pow(arity as u32)
            .ok_or_else(|| parse_err(op_line, format!("table of `{op_name}` too large")))?;
        let mut table = Vec::with_capacity(entries);
        for _ in 0..entries {
            match it.peek() {
                Some(&&(line, t)) if t.parse::<usize>().is_ok() => {
                    let v: usize = t.parse().expect("checked");
                    if v >= size {
                        return Err(parse_err(line, format!("value {v} outside 0..{size} in `{op_name}`")));
                    }
                    table.push(v);
                    it.next();
                }
                _ => {
                    return Err(parse_err(
                        op_line,
                        format!(
                            "operation `{op_name}` of arity {arity} needs {entries} entries, found {}",
                            table.len()
                        ),
                    ))
                }
            }
        }
        ops.push(Operation::new(op_name, arity, table));
    }
    Ok(FiniteAlgebra::with_name(name, size, ops)?)
}

/// Canonical text: one row of `size` values per line (a single value for
/// constants), single spaces.
pub fn write_algebra(alg: &FiniteAlgebra) -> String {
    let mut out = format!("algebra {}\nsize {}\n", alg.name(), alg.size());
    for op in alg.ops() {
        out.push_str(&format!("op {} {}\n", op.name, op.arity));
        let width = if op.arity == 0 { 1 } else { alg.size() };
        for row in op.table.chunks(width) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Named partitions of `0..size`; labels are canonicalized.
pub fn parse_congruences(text: &str, size: usize) -> Result<Vec<(String, Partition)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        keyword(parts.next().map(|t| (line_no, t)).as_ref(), line_no, "cong")?;
        let name = parts
            .next()
            .ok_or_else(|| parse_err(line_no, "expected congruence name"))?;
        let labels = parts
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("expected a label, found `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if labels.len() != size {
            return Err(parse_err(
                line_no,
                format!("`{name}` has {} labels, the algebra has {size} elements", labels.len()),
            ));
        }
        out.push((name.to_string(), Partition::from_labels(&labels)));
    }
    if out.is_empty() {
        return Err(parse_err(text.lines().count().max(1), "no congruences given"));
    }
    Ok(out)
}

pub fn write_congruences(named: &[(String, Partition)]) -> String {
    let mut out = String::new();
    for (name, p) in named {
        let labels: Vec<String> = p.labels().iter().map(|l| l.to_string()).collect();
        out.push_str(&format!("cong {name} {}\n", labels.join(" ")));
    }
    out
}
