//! Input notation for link presentations.
//!
//! Three sugared forms and a general tree form:
//!
//! ```text
//! pretzel(2,3,7)
//! montesinos(twists=1; 1/2, 1/3, 1/7)
//! twobridge(5/2)
//! tree {
//!   v1 = bracelet(d=3, twists=0);
//!   v2 = tangle(1/2);
//!   v3 = bracelet(d=1, n=1, arcs=0);
//!   glue v1.0 v2.0 [[1,0],[0,1]];
//! }
//! ```
//!
//! Slope literals are reduced rationals `p/q`, plain integers, or `inf`.
//! Matrices are row-major and act on (numerator, denominator) columns.
//! `pretzel(p,q,r)` abbreviates `montesinos(twists=1; 1/p, 1/q, 1/r)`;
//! `twobridge(p/q)` glues a slope-∞ tangle to a slope-q/p tangle by the
//! identity marking, so the two slopes have wedge p.

use crate::presentation::{Bracelet, LinkPresentation, PortRef};
use crate::slope::{GluingMap, Slope};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("parse error at {line}:{col}: {message}")]
    ParseError {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("semantic error: {0}")]
    SemanticError(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(char),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(input: &str) -> Result<Lexer, DslError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, col);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c2) = chars.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' | ')' | '{' | '}' | '[' | ']' | ',' | ';' | '=' | '.' | '/' => {
                chars.next();
                col += 1;
                toks.push((Tok::Punct(ch), l, c));
            }
            '-' => {
                chars.next();
                col += 1;
                let mut num = String::from("-");
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_digit() {
                        num.push(c2);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                if num == "-" {
                    return Err(DslError::ParseError {
                        line: l,
                        col: c,
                        message: "dangling minus sign".into(),
                    });
                }
                toks.push((
                    Tok::Int(num.parse().map_err(|_| DslError::ParseError {
                        line: l,
                        col: c,
                        message: "integer overflow".into(),
                    })?),
                    l,
                    c,
                ));
            }
            c2 if c2.is_ascii_digit() => {
                let mut num = String::new();
                while let Some(&c3) = chars.peek() {
                    if c3.is_ascii_digit() {
                        num.push(c3);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((
                    Tok::Int(num.parse().map_err(|_| DslError::ParseError {
                        line: l,
                        col: c,
                        message: "integer overflow".into(),
                    })?),
                    l,
                    c,
                ));
            }
            c2 if c2.is_ascii_alphabetic() || c2 == '_' => {
                let mut id = String::new();
                while let Some(&c3) = chars.peek() {
                    if c3.is_ascii_alphanumeric() || c3 == '_' {
                        id.push(c3);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(id), l, c));
            }
            other => {
                return Err(DslError::ParseError {
                    line: l,
                    col: c,
                    message: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn loc(&self) -> (usize, usize) {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn err(&self, message: impl Into<String>) -> DslError {
        let (line, col) = self.loc();
        DslError::ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_punct(&mut self, ch: char) -> Result<(), DslError> {
        match self.next() {
            Some(Tok::Punct(c)) if c == ch => Ok(()),
            other => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected '{ch}', found {other:?}")))
            }
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), DslError> {
        match self.next() {
            Some(Tok::Ident(s)) if s == name => Ok(()),
            other => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected '{name}', found {other:?}")))
            }
        }
    }

    fn int(&mut self) -> Result<i64, DslError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            other => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected an integer, found {other:?}")))
            }
        }
    }

    /// `inf`, `p/q`, or a plain integer.
    fn slope(&mut self) -> Result<Slope, DslError> {
        match self.next() {
            Some(Tok::Ident(s)) if s == "inf" => Ok(Slope::infinity()),
            Some(Tok::Int(n)) => {
                if let Some(Tok::Punct('/')) = self.peek() {
                    self.next();
                    let d = self.int()?;
                    Slope::new(n, d).map_err(|e| self.err(e.to_string()))
                } else {
                    Ok(Slope::integer(n))
                }
            }
            other => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected a slope, found {other:?}")))
            }
        }
    }

    fn matrix(&mut self) -> Result<GluingMap, DslError> {
        self.expect_punct('[')?;
        let mut rows = Vec::new();
        for i in 0..2 {
            self.expect_punct('[')?;
            let a = self.int()?;
            self.expect_punct(',')?;
            let b = self.int()?;
            self.expect_punct(']')?;
            rows.push([a, b]);
            if i == 0 {
                self.expect_punct(',')?;
            }
        }
        self.expect_punct(']')?;
        GluingMap::new([rows[0], rows[1]]).map_err(|e| self.err(e.to_string()))
    }
}

/// Parse an input document into a validated presentation.
pub fn parse(input: &str) -> Result<LinkPresentation, DslError> {
    let trimmed = input.trim();
    if trimmed.starts_with('{') {
        return parse_json(trimmed);
    }
    let mut lx = lex(trimmed)?;
    let p = match lx.peek() {
        Some(Tok::Ident(s)) if s == "pretzel" => parse_pretzel(&mut lx)?,
        Some(Tok::Ident(s)) if s == "montesinos" => parse_montesinos(&mut lx)?,
        Some(Tok::Ident(s)) if s == "twobridge" => parse_twobridge(&mut lx)?,
        Some(Tok::Ident(s)) if s == "tree" => parse_tree(&mut lx)?,
        _ => return Err(lx.err("expected pretzel, montesinos, twobridge, or tree")),
    };
    if lx.peek().is_some() {
        return Err(lx.err("trailing input after presentation"));
    }
    let violations = p.validate();
    if !violations.is_empty() {
        return Err(DslError::SemanticError(
            violations
                .iter()
                .map(|v| v.message.clone())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    Ok(p)
}

fn parse_pretzel(lx: &mut Lexer) -> Result<LinkPresentation, DslError> {
    lx.expect_ident("pretzel")?;
    lx.expect_punct('(')?;
    let mut entries = Vec::new();
    loop {
        let n = lx.int()?;
        if n == 0 {
            return Err(lx.err("pretzel entries must be nonzero"));
        }
        entries.push(Slope::new(1, n).map_err(|e| lx.err(e.to_string()))?);
        match lx.next() {
            Some(Tok::Punct(',')) => continue,
            Some(Tok::Punct(')')) => break,
            _ => return Err(lx.err("expected ',' or ')'")),
        }
    }
    Ok(crate::classifier::montesinos_presentation(1, &entries))
}

fn parse_montesinos(lx: &mut Lexer) -> Result<LinkPresentation, DslError> {
    lx.expect_ident("montesinos")?;
    lx.expect_punct('(')?;
    lx.expect_ident("twists")?;
    lx.expect_punct('=')?;
    let k = lx.int()?;
    lx.expect_punct(';')?;
    let mut slopes = Vec::new();
    loop {
        slopes.push(lx.slope()?);
        match lx.next() {
            Some(Tok::Punct(',')) => continue,
            Some(Tok::Punct(')')) => break,
            _ => return Err(lx.err("expected ',' or ')'")),
        }
    }
    Ok(crate::classifier::montesinos_presentation(k, &slopes))
}

fn parse_twobridge(lx: &mut Lexer) -> Result<LinkPresentation, DslError> {
    lx.expect_ident("twobridge")?;
    lx.expect_punct('(')?;
    let s = lx.slope()?;
    lx.expect_punct(')')?;
    // The fraction p/q names the link; the far tangle carries slope q/p so
    // that its wedge with the slope-∞ tangle is p.
    let far = Slope::new(s.denom(), s.numer()).map_err(|e| lx.err(e.to_string()))?;
    Ok(crate::classifier::twobridge_presentation(
        Slope::infinity(),
        far,
    ))
}

fn parse_tree(lx: &mut Lexer) -> Result<LinkPresentation, DslError> {
    lx.expect_ident("tree")?;
    lx.expect_punct('{')?;
    let mut p = LinkPresentation::new();
    let mut names: BTreeMap<String, usize> = BTreeMap::new();
    loop {
        match lx.peek() {
            Some(Tok::Punct('}')) => {
                lx.next();
                break;
            }
            Some(Tok::Ident(s)) if s == "glue" => {
                lx.next();
                let a = parse_port(lx, &names)?;
                let b = parse_port(lx, &names)?;
                let m = lx.matrix()?;
                lx.expect_punct(';')?;
                p.glue(a, b, m);
            }
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = lx.next() else {
                    unreachable!()
                };
                lx.expect_punct('=')?;
                let b = parse_bracelet_decl(lx)?;
                lx.expect_punct(';')?;
                let id = p.add_bracelet(b);
                if names.insert(name.clone(), id).is_some() {
                    return Err(DslError::SemanticError(format!(
                        "duplicate vertex name {name}"
                    )));
                }
            }
            _ => return Err(lx.err("expected a vertex declaration, glue, or '}'")),
        }
    }
    Ok(p)
}

fn parse_port(lx: &mut Lexer, names: &BTreeMap<String, usize>) -> Result<PortRef, DslError> {
    let Some(Tok::Ident(name)) = lx.next() else {
        return Err(lx.err("expected a vertex name"));
    };
    let id = *names
        .get(&name)
        .ok_or_else(|| DslError::SemanticError(format!("unknown vertex {name}")))?;
    lx.expect_punct('.')?;
    let port = lx.int()?;
    if port < 0 {
        return Err(lx.err("port index must be nonnegative"));
    }
    Ok(PortRef {
        bracelet: id,
        port: port as usize,
    })
}

fn parse_bracelet_decl(lx: &mut Lexer) -> Result<Bracelet, DslError> {
    match lx.next() {
        Some(Tok::Ident(s)) if s == "tangle" => {
            lx.expect_punct('(')?;
            let slope = lx.slope()?;
            lx.expect_punct(')')?;
            Ok(LinkPresentation::tangle(slope))
        }
        Some(Tok::Ident(s)) if s == "bracelet" => {
            lx.expect_punct('(')?;
            let mut d: Option<i64> = None;
            let mut n: i64 = 0;
            let mut twists: i64 = 0;
            let mut arcs: Option<i64> = None;
            let mut slope: Option<Slope> = None;
            loop {
                let Some(Tok::Ident(key)) = lx.next() else {
                    return Err(lx.err("expected a parameter name"));
                };
                lx.expect_punct('=')?;
                match key.as_str() {
                    "d" => d = Some(lx.int()?),
                    "n" => n = lx.int()?,
                    "twists" => twists = lx.int()?,
                    "arcs" => arcs = Some(lx.int()?),
                    "slope" => slope = Some(lx.slope()?),
                    other => return Err(lx.err(format!("unknown parameter {other}"))),
                }
                match lx.next() {
                    Some(Tok::Punct(',')) => continue,
                    Some(Tok::Punct(')')) => break,
                    _ => return Err(lx.err("expected ',' or ')'")),
                }
            }
            let d = d.ok_or_else(|| lx.err("bracelet needs d=<degree>"))? as usize;
            if n < 0 {
                return Err(lx.err("n must be nonnegative"));
            }
            let mut b = LinkPresentation::band(d, n as usize, twists);
            if d == 1 && n == 0 {
                b = LinkPresentation::tangle(
                    slope.ok_or_else(|| lx.err("a trivial tangle needs slope=<s>"))?,
                );
            } else if let Some(a) = arcs {
                b.arcs_slope = Some(a);
            }
            Ok(b)
        }
        other => Err(lx.err(format!("expected tangle or bracelet, found {other:?}"))),
    }
}

// ---------------------------------------------------------------------
// JSON input form.

fn parse_json(input: &str) -> Result<LinkPresentation, DslError> {
    let doc: serde_json::Value =
        serde_json::from_str(input).map_err(|e| DslError::SemanticError(e.to_string()))?;
    let bracelets = doc
        .get("bracelets")
        .and_then(|b| b.as_array())
        .ok_or_else(|| DslError::SemanticError("missing bracelets array".into()))?;
    let mut p = LinkPresentation::new();
    let mut id_map: BTreeMap<i64, usize> = BTreeMap::new();
    for b in bracelets {
        let d = b.get("d").and_then(|v| v.as_i64()).unwrap_or(0) as usize;
        let n = b.get("n").and_then(|v| v.as_i64()).unwrap_or(0) as usize;
        let twists = b.get("twists").and_then(|v| v.as_i64()).unwrap_or(0);
        let mut br = if d == 1 && n == 0 {
            let s = b
                .get("tangle_slope")
                .and_then(|v| v.as_str())
                .ok_or_else(|| DslError::SemanticError("tangle without a slope".into()))?;
            LinkPresentation::tangle(parse_slope_str(s)?)
        } else {
            LinkPresentation::band(d, n, twists)
        };
        if let Some(a) = b.get("arcs").and_then(|v| v.as_i64()) {
            br.arcs_slope = Some(a);
        }
        let new_id = p.add_bracelet(br);
        if let Some(orig) = b.get("id").and_then(|v| v.as_i64()) {
            id_map.insert(orig, new_id);
        } else {
            id_map.insert(new_id as i64, new_id);
        }
    }
    if let Some(gluings) = doc.get("gluings").and_then(|g| g.as_array()) {
        for g in gluings {
            let port = |key: &str| -> Result<PortRef, DslError> {
                let arr = g
                    .get(key)
                    .and_then(|v| v.as_array())
                    .ok_or_else(|| DslError::SemanticError(format!("missing port {key}")))?;
                let id = arr[0]
                    .as_i64()
                    .ok_or_else(|| DslError::SemanticError("bad port id".into()))?;
                let idx = arr[1]
                    .as_i64()
                    .ok_or_else(|| DslError::SemanticError("bad port index".into()))?;
                Ok(PortRef {
                    bracelet: *id_map
                        .get(&id)
                        .ok_or_else(|| DslError::SemanticError(format!("unknown id {id}")))?,
                    port: idx as usize,
                })
            };
            let a = port("a")?;
            let b = port("b")?;
            let m = g
                .get("matrix")
                .and_then(|v| v.as_array())
                .ok_or_else(|| DslError::SemanticError("missing matrix".into()))?;
            let entry = |i: usize, j: usize| -> Result<i64, DslError> {
                m.get(i)
                    .and_then(|r| r.as_array())
                    .and_then(|r| r.get(j))
                    .and_then(|v| v.as_i64())
                    .ok_or_else(|| DslError::SemanticError("bad matrix entry".into()))
            };
            let map = GluingMap::new([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
                .map_err(|e| DslError::SemanticError(e.to_string()))?;
            p.glue(a, b, map);
        }
    }
    let violations = p.validate();
    if !violations.is_empty() {
        return Err(DslError::SemanticError(
            violations
                .iter()
                .map(|v| v.message.clone())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    Ok(p)
}

fn parse_slope_str(s: &str) -> Result<Slope, DslError> {
    if s == "inf" {
        return Ok(Slope::infinity());
    }
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || DslError::SemanticError(format!("bad slope literal {s}"));
    match parts.as_slice() {
        [n] => Ok(Slope::integer(n.parse().map_err(|_| bad())?)),
        [n, d] => Slope::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?)
            .map_err(|_| bad()),
        _ => Err(bad()),
    }
}

/// Emit the canonical tree form; `parse(emit(p))` is structurally equal to
/// `p` up to bracelet renumbering.
pub fn emit(p: &LinkPresentation) -> String {
    let mut out = String::from("tree {\n");
    let ids = p.ids();
    let name_of: BTreeMap<usize, String> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (*id, format!("v{}", i + 1)))
        .collect();
    for id in &ids {
        let b = &p.bracelets[id];
        let name = &name_of[id];
        if b.is_tangle() {
            out.push_str(&format!(
                "  {name} = tangle({});\n",
                b.tangle_slope.expect("tangle slope")
            ));
        } else {
            out.push_str(&format!(
                "  {name} = bracelet(d={}, n={}, twists={}{});\n",
                b.degree,
                b.aug,
                b.half_twists,
                match b.arcs_slope {
                    Some(a) => format!(", arcs={a}"),
                    None => String::new(),
                }
            ));
        }
    }
    for e in &p.gluings {
        let [[a, bb], [c, d]] = e.map.entries;
        out.push_str(&format!(
            "  glue {}.{} {}.{} [[{},{}],[{},{}]];\n",
            name_of[&e.a.bracelet], e.a.port, name_of[&e.b.bracelet], e.b.port, a, bb, c, d
        ));
    }
    out.push_str("}\n");
    out
}

/// Emit the JSON input document form.
pub fn emit_json(p: &LinkPresentation) -> serde_json::Value {
    let bracelets: Vec<serde_json::Value> = p
        .bracelets
        .values()
        .map(|b| {
            let mut obj = serde_json::json!({
                "id": b.id,
                "d": b.degree,
                "n": b.aug,
                "twists": b.half_twists,
            });
            if let Some(s) = b.tangle_slope {
                obj["tangle_slope"] = serde_json::json!(s.to_string());
            }
            if let Some(a) = b.arcs_slope {
                obj["arcs"] = serde_json::json!(a);
            }
            obj
        })
        .collect();
    let gluings: Vec<serde_json::Value> = p
        .gluings
        .iter()
        .map(|e| {
            serde_json::json!({
                "a": [e.a.bracelet, e.a.port],
                "b": [e.b.bracelet, e.b.port],
                "matrix": e.map.entries,
            })
        })
        .collect();
    serde_json::json!({
        "schema": "arborhyp/1",
        "kind": "input",
        "bracelets": bracelets,
        "gluings": gluings,
    })
}

/// DOT rendering of the bracelet tree with slope labels.
pub fn emit_dot(p: &LinkPresentation) -> String {
    let mut out = String::from("graph bracelets {\n  node [shape=circle];\n");
    for b in p.bracelets.values() {
        let label = if b.is_tangle() {
            format!("tangle {}", b.tangle_slope.expect("slope"))
        } else {
            format!("B({},{}) k={}", b.degree, b.aug, b.half_twists)
        };
        out.push_str(&format!("  v{} [label=\"{}\"];\n", b.id, label));
    }
    for e in &p.gluings {
        let [[a, bb], [c, d]] = e.map.entries;
        out.push_str(&format!(
            "  v{} -- v{} [label=\"{}.{}~{}.{} [[{},{}],[{},{}]]\"];\n",
            e.a.bracelet,
            e.b.bracelet,
            e.a.bracelet,
            e.a.port,
            e.b.bracelet,
            e.b.port,
            a,
            bb,
            c,
            d
        ));
    }
    out.push_str("}\n");
    out
}

/// Minimal radial SVG rendering of the bracelet tree.
pub fn emit_svg(p: &LinkPresentation) -> String {
    let n = p.bracelets.len().max(1);
    let r = 160.0;
    let cx = 220.0;
    let cy = 220.0;
    let ids = p.ids();
    let pos: BTreeMap<usize, (f64, f64)> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let th = std::f64::consts::TAU * (i as f64) / (n as f64);
            (*id, (cx + r * th.cos(), cy + r * th.sin()))
        })
        .collect();
    let mut out = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\" \
         font-family=\"monospace\" font-size=\"11\">\n",
    );
    for e in &p.gluings {
        let (x1, y1) = pos[&e.a.bracelet];
        let (x2, y2) = pos[&e.b.bracelet];
        out.push_str(&format!(
            "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" \
             stroke=\"black\"/>\n"
        ));
    }
    for b in p.bracelets.values() {
        let (x, y) = pos[&b.id];
        let label = if b.is_tangle() {
            format!("{}", b.tangle_slope.expect("slope"))
        } else {
            format!("B({},{})k{}", b.degree, b.aug, b.half_twists)
        };
        out.push_str(&format!(
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"26\" fill=\"white\" stroke=\"black\"/>\n  \
             <text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"middle\" dy=\"4\">{label}</text>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretzel_sugar() {
        let p = parse("pretzel(2,3,7)").unwrap();
        assert_eq!(p.bracelets.len(), 4);
        let hub = p.bracelets.values().find(|b| b.degree == 3).unwrap();
        assert_eq!(hub.half_twists, 1);
        let slopes: Vec<Slope> = p
            .bracelets
            .values()
            .filter_map(|b| b.tangle_slope)
            .collect();
        assert_eq!(
            slopes,
            vec![
                Slope::new(1, 2).unwrap(),
                Slope::new(1, 3).unwrap(),
                Slope::new(1, 7).unwrap()
            ]
        );
    }

    #[test]
    fn twobridge_sugar_has_long_path() {
        let p = parse("twobridge(5/2)").unwrap();
        let slopes: Vec<Slope> = p
            .bracelets
            .values()
            .map(|b| b.tangle_slope.unwrap())
            .collect();
        let path = crate::farey::farey_path(&slopes[0], &slopes[1]).unwrap();
        assert!(path.m() >= 3, "m = {}", path.m());
        assert_eq!(crate::slope::wedge(&slopes[0], &slopes[1]), 5);
    }

    #[test]
    fn tree_with_open_port_is_semantic_error() {
        let src = "tree { v1 = bracelet(d=3, twists=0); v2 = tangle(1/2); \
                   glue v1.0 v2.0 [[1,0],[0,1]]; }";
        match parse(src) {
            Err(DslError::SemanticError(msg)) => assert!(msg.contains("open port")),
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn parse_error_carries_location() {
        match parse("pretzel(2,,7)") {
            Err(DslError::ParseError { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col > 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn emit_round_trip() {
        for src in [
            "pretzel(2,3,7)",
            "montesinos(twists=-2; 1/2, 1/2, 2/7)",
            "twobridge(7/3)",
            "tree { v1 = bracelet(d=1, n=1, arcs=2); v2 = tangle(3/5); \
             glue v1.0 v2.0 [[0,1],[1,0]]; }",
        ] {
            let p = parse(src).unwrap();
            let text = emit(&p);
            let q = parse(&text).unwrap();
            assert_eq!(emit(&q), text, "canonical form unstable for {src}");
            assert_eq!(p.bracelets.len(), q.bracelets.len());
            assert_eq!(p.gluings.len(), q.gluings.len());
        }
    }

    #[test]
    fn json_round_trip() {
        let p = parse("montesinos(twists=1; 1/2, 2/5, 1/7)").unwrap();
        let doc = emit_json(&p).to_string();
        let q = parse(&doc).unwrap();
        assert_eq!(emit(&p), emit(&q));
    }
}
