//! Line-oriented sequence files.
//!
//! An explicit file lists the clubs of every index whose club holds more
//! than one element; the minimal rule covers the rest:
//!
//! ```text
//! # optional comments
//! ncseq n=2 domain=interval(w^2+1)
//! index w*2 := pieces[w, w+1..w*2]
//! index w,w*2 := finite[3,7]
//! ```
//!
//! Rule-based universes serialize as a one-line header instead, since
//! their club tables are not finite:
//!
//! ```text
//! ncseq n=2 domain=interval(w^2) rule=maximal
//! ```
//!
//! and the stepped-up builder records its parameters:
//!
//! ```text
//! ncseq n=2 domain=interval(w^2) rule=stepped-up kappa=w d=minimal-fs:w^2 e=minimal-fs:w s=w*2,w*3
//! ```
//!
//! Malformed input is reported with its line number.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::club::Club;
use crate::cseq::{CSequence, ExplicitSeq};
use crate::error::ParseError;
use crate::ordinal::{format_ordinal_list, parse_ordinal_list, Ordinal};
use crate::stepped::SteppedUp;

/// Parses a builtin descriptor such as `minimal-fs:w^2` or `maximal:w^2`.
pub fn parse_builtin(desc: &str, n: usize) -> Result<CSequence, ParseError> {
    let (kind, lambda) = desc
        .split_once(':')
        .ok_or_else(|| ParseError::new(format!("builtin `{desc}` needs `<kind>:<ordinal>`")))?;
    let lambda: Ordinal = lambda.parse()?;
    match kind {
        "minimal-fs" => CSequence::order_minimal(n, lambda),
        "maximal" => CSequence::maximal(n, lambda),
        other => {
            return Err(ParseError::new(format!(
                "unknown builtin `{other}`; expected `minimal-fs` or `maximal`"
            )))
        }
    }
    .map_err(|e| ParseError::new(e.to_string()))
}

/// Parses a sequence file; errors carry the first offending line number.
pub fn parse_ncseq(text: &str) -> Result<CSequence, ParseError> {
    let mut header: Option<(usize, &str)> = None;
    let mut index_lines: Vec<(usize, &str)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if header.is_none() {
            header = Some((no + 1, line));
        } else {
            index_lines.push((no + 1, line));
        }
    }
    let Some((hline, header)) = header else {
        return Err(ParseError::new("empty sequence file"));
    };
    let rest = header
        .strip_prefix("ncseq ")
        .ok_or_else(|| ParseError::new("expected an `ncseq` header").at(hline))?;
    let mut n: Option<usize> = None;
    let mut domain: Option<Club> = None;
    let mut rule: Option<String> = None;
    let mut kappa: Option<Ordinal> = None;
    let mut d_desc: Option<String> = None;
    let mut e_desc: Option<String> = None;
    let mut s_list: Option<Vec<Ordinal>> = None;
    for field in split_header_fields(rest) {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| ParseError::new(format!("bad header field `{field}`")).at(hline))?;
        match key {
            "n" => {
                n = Some(
                    value
                        .parse()
                        .map_err(|_| ParseError::new("bad dimension").at(hline))?,
                )
            }
            "domain" => domain = Some(value.parse().map_err(|e: ParseError| e.at(hline))?),
            "rule" => rule = Some(value.to_string()),
            "kappa" => kappa = Some(value.parse().map_err(|e: ParseError| e.at(hline))?),
            "d" => d_desc = Some(value.to_string()),
            "e" => e_desc = Some(value.to_string()),
            "s" => s_list = Some(parse_ordinal_list(value).map_err(|e| e.at(hline))?),
            other => {
                return Err(ParseError::new(format!("unknown header field `{other}`")).at(hline))
            }
        }
    }
    let n = n.ok_or_else(|| ParseError::new("missing `n=` in header").at(hline))?;
    let domain = domain.ok_or_else(|| ParseError::new("missing `domain=` in header").at(hline))?;
    if n == 0 {
        return Err(ParseError::new("dimension must be positive").at(hline));
    }

    match rule.as_deref() {
        None | Some("explicit") => {
            let mut table = BTreeMap::new();
            for (no, line) in index_lines {
                let rest = line
                    .strip_prefix("index ")
                    .ok_or_else(|| ParseError::new("expected an `index` line").at(no))?;
                let (tuple_str, club_str) = rest
                    .split_once(":=")
                    .ok_or_else(|| ParseError::new("missing `:=`").at(no))?;
                let tuple = parse_ordinal_list(tuple_str).map_err(|e| e.at(no))?;
                if tuple.is_empty() {
                    return Err(ParseError::new("empty index tuple").at(no));
                }
                if tuple.len() > n {
                    return Err(
                        ParseError::new(format!("index longer than the dimension {n}")).at(no),
                    );
                }
                if !tuple.windows(2).all(|w| w[0] < w[1]) {
                    return Err(ParseError::new("index tuples must strictly increase").at(no));
                }
                let club: Club = club_str.trim().parse().map_err(|e: ParseError| e.at(no))?;
                if table.insert(tuple.clone(), club).is_some() {
                    return Err(ParseError::new(format!(
                        "duplicate index {}",
                        format_ordinal_list(&tuple)
                    ))
                    .at(no));
                }
            }
            Ok(CSequence::explicit(
                n,
                ExplicitSeq {
                    domain,
                    table,
                    transcript: Vec::new(),
                },
            ))
        }
        Some("minimal-fs") => CSequence::order_minimal(n, domain.bound().clone())
            .map_err(|e| ParseError::new(e.to_string()).at(hline)),
        Some("maximal") => CSequence::maximal(n, domain.bound().clone())
            .map_err(|e| ParseError::new(e.to_string()).at(hline)),
        Some("stepped-up") => {
            let kappa =
                kappa.ok_or_else(|| ParseError::new("stepped-up needs `kappa=`").at(hline))?;
            let d_desc =
                d_desc.ok_or_else(|| ParseError::new("stepped-up needs `d=`").at(hline))?;
            let e_desc =
                e_desc.ok_or_else(|| ParseError::new("stepped-up needs `e=`").at(hline))?;
            let s_list =
                s_list.ok_or_else(|| ParseError::new("stepped-up needs `s=`").at(hline))?;
            let d_seq = parse_builtin(&d_desc, 1).map_err(|e| e.at(hline))?;
            let e_seq = parse_builtin(&e_desc, n - 1).map_err(|e| e.at(hline))?;
            let stepped = SteppedUp::new(d_seq, e_seq, s_list, kappa)
                .map_err(|e| ParseError::new(e.to_string()).at(hline))?;
            Ok(CSequence::from_stepped(stepped))
        }
        Some(other) => Err(ParseError::new(format!("unknown rule `{other}`")).at(hline)),
    }
}

/// Serializes a sequence to the file format. Explicit sequences list their
/// whole table; rule-based ones serialize as their header. The optional
/// transcript renders as comments.
pub fn print_ncseq(seq: &CSequence) -> String {
    let mut out = String::new();
    for t in seq.transcript() {
        let _ = writeln!(
            out,
            "# turn {} ({}): top {} - {}",
            t.turn, t.player, t.top, t.note
        );
    }
    match seq.kind_name() {
        "order-minimal" => {
            let _ = writeln!(
                out,
                "ncseq n={} domain={} rule=minimal-fs",
                seq.n(),
                seq.domain()
            );
        }
        "maximal-interval" => {
            let _ = writeln!(
                out,
                "ncseq n={} domain={} rule=maximal",
                seq.n(),
                seq.domain()
            );
        }
        "stepped-up" => {
            let s = seq.stepped_params().expect("stepped kind");
            let points: Vec<Ordinal> = s.s_points().cloned().collect();
            let _ = writeln!(
                out,
                "ncseq n={} domain={} rule=stepped-up kappa={} d={} e={} s={}",
                seq.n(),
                seq.domain(),
                s.kappa(),
                builtin_desc(s.scaffold()).expect("serializable scaffold"),
                builtin_desc(s.copied()).expect("serializable copied sequence"),
                format_ordinal_list(&points),
            );
        }
        _ => {
            let _ = writeln!(out, "ncseq n={} domain={}", seq.n(), seq.domain());
            for (tuple, club) in seq.explicit_table() {
                let _ = writeln!(out, "index {} := {club}", format_ordinal_list(&tuple));
            }
        }
    }
    out
}

/// The builtin descriptor of a rule-based sequence, when it has one.
pub fn builtin_desc(seq: &CSequence) -> Option<String> {
    match seq.kind_name() {
        "order-minimal" => Some(format!("minimal-fs:{}", seq.bound())),
        "maximal-interval" => Some(format!("maximal:{}", seq.bound())),
        _ => None,
    }
}

fn split_header_fields(s: &str) -> Vec<&str> {
    // fields are space-separated, but club literals may contain spaces
    // after commas; split on spaces not inside brackets
    let mut fields = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            ' ' if depth == 0 => {
                if start < i {
                    fields.push(&s[start..i]);
                }
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < s.len() {
        fields.push(&s[start..]);
    }
    fields
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_roundtrip() {
        let text = "\
# a small two-dimensional sequence
ncseq n=2 domain=interval(w*2+1)
index w := interval(w)
index w*2 := pieces[w, w+1..w*2]
";
        let seq = parse_ncseq(text).unwrap();
        assert_eq!(seq.n(), 2);
        let printed = print_ncseq(&seq);
        let reparsed = parse_ncseq(&printed).unwrap();
        assert_eq!(printed, print_ncseq(&reparsed));
    }

    #[test]
    fn rule_headers() {
        let seq = parse_ncseq("ncseq n=2 domain=interval(w^2) rule=maximal").unwrap();
        assert_eq!(seq.kind_name(), "maximal-interval");
        let printed = print_ncseq(&seq);
        assert!(printed.contains("rule=maximal"));
        let seq = parse_ncseq(&printed).unwrap();
        assert_eq!(seq.kind_name(), "maximal-interval");
    }

    #[test]
    fn stepped_header() {
        let text = "ncseq n=2 domain=interval(w^2) rule=stepped-up kappa=w \
                    d=minimal-fs:w^2 e=minimal-fs:w s=w,w*2,w*3,w*4,w*5";
        let seq = parse_ncseq(text).unwrap();
        assert_eq!(seq.kind_name(), "stepped-up");
        assert_eq!(seq.n(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "ncseq n=2 domain=interval(w*2+1)\nindex w := junk(3)\n";
        let err = parse_ncseq(bad).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let bad = "ncseq n=2 domain=interval(w*2+1)\nindex w*2,w := interval(w)\n";
        let err = parse_ncseq(bad).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_ncseq("nonsense").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }
}
