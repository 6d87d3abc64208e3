//! Text formats for formulae (`kdnf`), PDGs (`pdg`) and hypergraphs (`hgr`).
//!
//! All three share one shape: optional `c` comment lines, a `p <kind> ...`
//! header, then one record per line terminated by `0`. Vertices and
//! variables are 1-based in files and 0-based in memory.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use unate_core::combin::elements;
use unate_core::formula::{Clause, Formula, Literal};
use unate_core::lemmas::Hypergraph;
use unate_core::pdg::{EdgeState, Pdg};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

struct Body<'a> {
    header_line: usize,
    header: Vec<usize>,
    /// Tokens of each record with the trailing `0` removed.
    records: Vec<(usize, Vec<&'a str>)>,
}

fn split<'a>(text: &'a str, kind: &str, header_fields: usize) -> Result<Body<'a>, ParseError> {
    let mut header: Option<(usize, Vec<usize>)> = None;
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None => continue,
            Some(&"c") => continue,
            Some(t) if t.starts_with('c') && toks.len() == 1 => continue,
            Some(&"p") => {
                if header.is_some() {
                    return err(line, "second header line");
                }
                if toks.len() != header_fields + 2 || toks[1] != kind {
                    return err(
                        line,
                        format!("expected `p {kind}` followed by {header_fields} numbers"),
                    );
                }
                let mut nums = Vec::with_capacity(header_fields);
                for t in &toks[2..] {
                    match t.parse::<usize>() {
                        Ok(v) => nums.push(v),
                        Err(_) => {
                            return err(
                                line,
                                format!("header field `{t}` is not a non-negative integer"),
                            )
                        }
                    }
                }
                header = Some((line, nums));
            }
            Some(_) => {
                if header.is_none() {
                    return err(line, "record before the header");
                }
                if toks.pop() != Some("0") {
                    return err(line, "record must end with 0");
                }
                records.push((line, toks));
            }
        }
    }
    let Some((header_line, header)) = header else {
        return err(
            text.lines().count().max(1),
            format!("missing `p {kind}` header"),
        );
    };
    Ok(Body {
        header_line,
        header,
        records,
    })
}

fn int(line: usize, tok: &str) -> Result<i64, ParseError> {
    match tok.parse::<i64>() {
        Ok(0) => err(line, "0 inside a record"),
        Ok(v) => Ok(v),
        Err(_) => err(line, format!("not an integer: `{tok}`")),
    }
}

/// 1-based vertex list to a mask, rejecting repeats and out-of-range values.
fn vertex_mask(line: usize, toks: &[&str], n: usize) -> Result<u64, ParseError> {
    let mut mask = 0u64;
    for t in toks {
        let v = int(line, t)?;
        if v < 1 || v as usize > n || v > 64 {
            return err(line, format!("vertex {v} outside 1..={n}"));
        }
        if mask >> (v - 1) & 1 == 1 {
            return err(line, format!("vertex {v} repeated"));
        }
        mask |= 1 << (v - 1);
    }
    Ok(mask)
}

pub fn parse_kdnf(text: &str) -> Result<Formula, ParseError> {
    let body = split(text, "kdnf", 3)?;
    let (n, m, k) = (body.header[0], body.header[1], body.header[2]);
    if body.records.len() != m {
        return err(
            body.header_line,
            format!("header declares {m} clauses, found {}", body.records.len()),
        );
    }
    let mut clauses = Vec::with_capacity(m);
    for (line, toks) in &body.records {
        if toks.len() != k {
            return err(
                *line,
                format!("expected {k} literals, found {}", toks.len()),
            );
        }
        let mut lits = Vec::with_capacity(k);
        for t in toks {
            let x = int(*line, t)?;
            match Literal::from_dimacs(x).filter(|l| l.var < n) {
                Some(l) => lits.push(l),
                None => return err(*line, format!("literal {x} outside ±1..={n}")),
            }
        }
        match Clause::from_literals(&lits) {
            Ok(c) => clauses.push(c),
            Err(e) => return err(*line, e.to_string()),
        }
    }
    Formula::new(n, k, clauses).or_else(|e| err(body.header_line, e.to_string()))
}

/// Clauses in canonical order, literals by variable.
pub fn write_kdnf(f: &Formula) -> String {
    let mut s = format!("p kdnf {} {} {}\n", f.n(), f.len(), f.k());
    for c in f.clauses() {
        for l in c.literals() {
            write!(s, "{} ", l.to_dimacs()).unwrap();
        }
        s.push_str("0\n");
    }
    s
}

pub fn parse_pdg(text: &str) -> Result<Pdg, ParseError> {
    let body = split(text, "pdg", 2)?;
    let (n, k) = (body.header[0], body.header[1]);
    let mut h = Pdg::empty(n, k).or_else(|e| err(body.header_line, e.to_string()))?;
    let mut seen = BTreeSet::new();
    for (line, toks) in &body.records {
        let line = *line;
        let (head, verts) = match toks.split_first() {
            Some((&"u", rest)) => (None, rest),
            Some((&"d", rest)) if !rest.is_empty() => (Some(int(line, rest[0])?), &rest[1..]),
            _ => return err(line, "record must start with `u` or `d <head>`"),
        };
        if verts.len() != k {
            return err(
                line,
                format!("expected {k} vertices, found {}", verts.len()),
            );
        }
        let mask = vertex_mask(line, verts, n)?;
        if !seen.insert(mask) {
            return err(line, "edge listed twice");
        }
        let state = match head {
            None => EdgeState::Undirected,
            Some(t) if (1..=64).contains(&t) && mask >> (t - 1) & 1 == 1 => {
                EdgeState::DirectedAt((t - 1) as u8)
            }
            Some(t) => return err(line, format!("head {t} is not a vertex of the edge")),
        };
        h.set(mask, state).or_else(|e| err(line, e.to_string()))?;
    }
    Ok(h)
}

pub fn write_pdg(h: &Pdg) -> String {
    let mut s = format!("p pdg {} {}\n", h.n(), h.k());
    for (mask, state) in h.edges() {
        match state {
            EdgeState::Absent => continue,
            EdgeState::Undirected => s.push('u'),
            EdgeState::DirectedAt(t) => write!(s, "d {}", t + 1).unwrap(),
        }
        for v in elements(mask) {
            write!(s, " {}", v + 1).unwrap();
        }
        s.push_str(" 0\n");
    }
    s
}

pub fn parse_hgr(text: &str) -> Result<Hypergraph, ParseError> {
    let body = split(text, "hgr", 3)?;
    let (n, m, ell) = (body.header[0], body.header[1], body.header[2]);
    if body.records.len() != m {
        return err(
            body.header_line,
            format!("header declares {m} edges, found {}", body.records.len()),
        );
    }
    let mut edges = Vec::with_capacity(m);
    for (line, toks) in &body.records {
        if toks.len() != ell {
            return err(
                *line,
                format!("expected {ell} vertices, found {}", toks.len()),
            );
        }
        edges.push(vertex_mask(*line, toks, n)?);
    }
    Hypergraph::new(n, ell, edges).or_else(|e| err(body.header_line, e.to_string()))
}

pub fn write_hgr(h: &Hypergraph) -> String {
    let mut s = format!("p hgr {} {} {}\n", h.n(), h.edge_count(), h.ell());
    for &e in h.edges() {
        for v in elements(e) {
            write!(s, "{} ", v + 1).unwrap();
        }
        s.push_str("0\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kdnf_round_trip_is_byte_stable() {
        let text = "c example\np kdnf 4 4 2\n2 -4 0\n1 2 0\n-3 4 0\n1 3 0\n";
        let f = parse_kdnf(text).unwrap();
        let once = write_kdnf(&f);
        assert_eq!(write_kdnf(&parse_kdnf(&once).unwrap()), once);
        assert_eq!(parse_kdnf(&once).unwrap(), f);
    }

    #[test]
    fn kdnf_errors_carry_lines() {
        let e = parse_kdnf("p kdnf 3 1 2\n1 x 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(parse_kdnf("p kdnf 3 1 2\n1 2\n").unwrap_err().line, 2);
        assert_eq!(parse_kdnf("p kdnf 3 1 2\n1 4 0\n").unwrap_err().line, 2);
        assert_eq!(parse_kdnf("p kdnf 3 2 2\n1 2 0\n").unwrap_err().line, 1);
        assert_eq!(parse_kdnf("c only\n1 2 0\n").unwrap_err().line, 2);
        assert_eq!(parse_kdnf("p kdnf 3 1 2\n1 -1 0\n").unwrap_err().line, 2);
    }

    #[test]
    fn pdg_round_trip() {
        let text = "p pdg 4 3\nu 1 2 3 0\nd 4 1 2 4 0\nu 1 3 4 0\n";
        let h = parse_pdg(text).unwrap();
        assert_eq!(h, unate_core::pdg::make_tk(3));
        assert_eq!(parse_pdg(&write_pdg(&h)).unwrap(), h);
        assert_eq!(parse_pdg("p pdg 4 3\nd 3 1 2 4 0\n").unwrap_err().line, 2);
        assert_eq!(
            parse_pdg("p pdg 4 3\nu 1 2 3 0\nu 3 2 1 0\n")
                .unwrap_err()
                .line,
            3
        );
    }

    #[test]
    fn hgr_round_trip() {
        let h = parse_hgr("p hgr 3 3 2\n1 2 0\n2 3 0\n1 3 0\n").unwrap();
        assert_eq!(h.edge_count(), 3);
        assert_eq!(parse_hgr(&write_hgr(&h)).unwrap(), h);
        assert_eq!(parse_hgr("p hgr 3 1 2\n1 1 0\n").unwrap_err().line, 2);
    }
}
