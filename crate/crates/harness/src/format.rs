//! The `asymlin/1` instance format.
//!
//! ```text
//! asymlin/1
//! # comments run to the end of the line
//! space u 1 [1] [0]
//! space l 2 [1 0] [-1 0] [0 1] [0 -1]
//! linear A l u [1 -1]
//! bilinear T l l u {[1 0] [0 1]}
//! form b l l [1 0] [0 1]
//! polyhedron P 2 [1 0 1] [0 -1 2]
//! check eval u [3] => 3
//! check norm T => report
//! ```
//!
//! Spaces list generator rows, linear maps list matrix rows, bilinear maps list
//! one braced `d1 × d2` slice per target coordinate, polyhedra list rows
//! `[a_1 … a_d b]` of `⟨a, x⟩ ≤ b`. Rationals are `n` or `n/d`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use asymlin::bilinear_ops::{BilinearForm, BilinearOp};
use asymlin::linear_ops::LinearOp;
use asymlin::rational::{format_rational, parse_rational, Matrix, Vector};
use asymlin::{AsymNorm, Caps, Halfspace, Polyhedron};

pub const HEADER: &str = "asymlin/1";

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDef {
    pub name: String,
    pub dim: usize,
    pub generators: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    Linear { source: String, target: String, matrix: Matrix },
    Bilinear { source1: String, source2: String, target: String, tensor: Vec<Matrix> },
    Form { source1: String, source2: String, matrix: Matrix },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDef {
    pub name: String,
    pub kind: OperatorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedronDef {
    pub name: String,
    pub dim: usize,
    /// `[a_1, …, a_dim, b]` for `⟨a, x⟩ ≤ b`.
    pub rows: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Name(String),
    Vector(Vector),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    Report,
    Value(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Directive {
    pub op: String,
    pub args: Vec<Arg>,
    pub expect: Expectation,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceFile {
    pub spaces: Vec<SpaceDef>,
    pub operators: Vec<OperatorDef>,
    pub polyhedra: Vec<PolyhedronDef>,
    pub directives: Vec<Directive>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormatError {
    Parse { line: usize, column: usize, message: String },
    Semantic { key: String, message: String },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Parse { line, column, message } => write!(f, "parse error at {line}:{column}: {message}"),
            FormatError::Semantic { key, message } => write!(f, "error in `{key}`: {message}"),
        }
    }
}

impl std::error::Error for FormatError {}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    for (i, c) in line.char_indices() {
        let column = line[..i].chars().count() + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() || "[]{}".contains(c) {
            if !current.is_empty() {
                out.push(Token { text: std::mem::take(&mut current), column: start });
            }
            if !c.is_whitespace() {
                out.push(Token { text: c.to_string(), column });
            }
        } else {
            if current.is_empty() {
                start = column;
            }
            current.push(c);
        }
    }
    if !current.is_empty() {
        out.push(Token { text: current, column: start });
    }
    out
}

struct Cursor<'a> {
    line: usize,
    tokens: &'a [Token],
    pos: usize,
    end_column: usize,
}

impl Cursor<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> FormatError {
        FormatError::Parse { line: self.line, column, message: message.into() }
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(|t| t.text.as_str())
    }

    fn next(&mut self, what: &str) -> Result<Token, FormatError> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| self.err(self.end_column, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn name(&mut self, what: &str) -> Result<String, FormatError> {
        let t = self.next(what)?;
        let ok = t.text.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && t.text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '\'');
        if !ok {
            return Err(self.err(t.column, format!("expected {what}, found `{}`", t.text)));
        }
        Ok(t.text)
    }

    fn expect(&mut self, s: &str) -> Result<(), FormatError> {
        let t = self.next(&format!("`{s}`"))?;
        if t.text != s {
            return Err(self.err(t.column, format!("expected `{s}`, found `{}`", t.text)));
        }
        Ok(())
    }

    fn vector(&mut self) -> Result<Vector, FormatError> {
        self.expect("[")?;
        let mut v = Vec::new();
        loop {
            let t = self.next("`]`")?;
            if t.text == "]" {
                return Ok(v);
            }
            let r = parse_rational(&t.text).map_err(|_| self.err(t.column, format!("malformed rational `{}`", t.text)))?;
            v.push(r);
        }
    }

    fn rows(&mut self, stop: Option<&str>) -> Result<Matrix, FormatError> {
        let mut rows = Vec::new();
        while self.peek() == Some("[") {
            rows.push(self.vector()?);
        }
        match (stop, self.peek()) {
            (Some(s), _) => self.expect(s)?,
            (None, Some(t)) => return Err(self.err(self.column(), format!("unexpected `{t}`"))),
            (None, None) => {}
        }
        Ok(rows)
    }

    fn done(&self) -> Result<(), FormatError> {
        match self.peek() {
            Some(t) => Err(self.err(self.column(), format!("unexpected `{t}`"))),
            None => Ok(()),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, FormatError> {
    let mut file = InstanceFile::default();
    let mut header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let mut c = Cursor { line, tokens: &tokens, pos: 0, end_column: raw.chars().count() + 1 };
        if !header {
            let t = c.next("header")?;
            if t.text != HEADER {
                return Err(c.err(t.column, format!("expected header `{HEADER}`, found `{}`", t.text)));
            }
            c.done()?;
            header = true;
            continue;
        }
        let keyword = c.next("keyword")?;
        match keyword.text.as_str() {
            "space" => {
                let name = c.name("space name")?;
                let t = c.next("dimension")?;
                let dim = t.text.parse::<usize>().map_err(|_| c.err(t.column, format!("malformed dimension `{}`", t.text)))?;
                let generators = c.rows(None)?;
                file.spaces.push(SpaceDef { name, dim, generators });
            }
            "linear" => {
                let name = c.name("operator name")?;
                let source = c.name("source space")?;
                let target = c.name("target space")?;
                let matrix = c.rows(None)?;
                file.operators.push(OperatorDef { name, kind: OperatorKind::Linear { source, target, matrix } });
            }
            "bilinear" => {
                let name = c.name("operator name")?;
                let source1 = c.name("first source space")?;
                let source2 = c.name("second source space")?;
                let target = c.name("target space")?;
                let mut tensor = Vec::new();
                while c.peek() == Some("{") {
                    c.expect("{")?;
                    tensor.push(c.rows(Some("}"))?);
                }
                c.done()?;
                file.operators.push(OperatorDef { name, kind: OperatorKind::Bilinear { source1, source2, target, tensor } });
            }
            "form" => {
                let name = c.name("form name")?;
                let source1 = c.name("first source space")?;
                let source2 = c.name("second source space")?;
                let matrix = c.rows(None)?;
                file.operators.push(OperatorDef { name, kind: OperatorKind::Form { source1, source2, matrix } });
            }
            "polyhedron" => {
                let name = c.name("polyhedron name")?;
                let t = c.next("dimension")?;
                let dim = t.text.parse::<usize>().map_err(|_| c.err(t.column, format!("malformed dimension `{}`", t.text)))?;
                let rows = c.rows(None)?;
                file.polyhedra.push(PolyhedronDef { name, dim, rows });
            }
            "check" => {
                let op = c.name("operation")?;
                let mut args = Vec::new();
                loop {
                    match c.peek() {
                        Some("[") => args.push(Arg::Vector(c.vector()?)),
                        Some("=>") => break,
                        Some(_) => args.push(Arg::Name(c.name("argument")?)),
                        None => return Err(c.err(c.column(), "expected `=>`")),
                    }
                }
                c.expect("=>")?;
                let mut rest = Vec::new();
                while let Some(t) = c.peek() {
                    rest.push(t.to_string());
                    c.pos += 1;
                }
                let expect = match rest.as_slice() {
                    [] => return Err(c.err(c.column(), "expected an outcome or `report`")),
                    [r] if r == "report" => Expectation::Report,
                    _ => Expectation::Value(rest.join(" ")),
                };
                file.directives.push(Directive { op, args, expect });
            }
            other => return Err(c.err(keyword.column, format!("unknown keyword `{other}`"))),
        }
    }
    if !header {
        return Err(FormatError::Parse { line: 1, column: 1, message: format!("missing header `{HEADER}`") });
    }
    Ok(file)
}

fn write_rows(out: &mut String, rows: &[Vector]) {
    for r in rows {
        out.push_str(" [");
        let cells: Vec<String> = r.iter().map(format_rational).collect();
        out.push_str(&cells.join(" "));
        out.push(']');
    }
}

/// Normalized text: one declaration per line, single spaces, no comments.
pub fn serialize(file: &InstanceFile) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for s in &file.spaces {
        let _ = write!(out, "space {} {}", s.name, s.dim);
        write_rows(&mut out, &s.generators);
        out.push('\n');
    }
    for o in &file.operators {
        match &o.kind {
            OperatorKind::Linear { source, target, matrix } => {
                let _ = write!(out, "linear {} {source} {target}", o.name);
                write_rows(&mut out, matrix);
            }
            OperatorKind::Bilinear { source1, source2, target, tensor } => {
                let _ = write!(out, "bilinear {} {source1} {source2} {target}", o.name);
                for slice in tensor {
                    out.push_str(" {");
                    let mut inner = String::new();
                    write_rows(&mut inner, slice);
                    out.push_str(inner.trim_start());
                    out.push('}');
                }
            }
            OperatorKind::Form { source1, source2, matrix } => {
                let _ = write!(out, "form {} {source1} {source2}", o.name);
                write_rows(&mut out, matrix);
            }
        }
        out.push('\n');
    }
    for p in &file.polyhedra {
        let _ = write!(out, "polyhedron {} {}", p.name, p.dim);
        write_rows(&mut out, &p.rows);
        out.push('\n');
    }
    for d in &file.directives {
        let _ = write!(out, "check {}", d.op);
        for a in &d.args {
            match a {
                Arg::Name(n) => {
                    let _ = write!(out, " {n}");
                }
                Arg::Vector(v) => write_rows(&mut out, std::slice::from_ref(v)),
            }
        }
        match &d.expect {
            Expectation::Report => out.push_str(" => report\n"),
            Expectation::Value(v) => {
                let _ = writeln!(out, " => {v}");
            }
        }
    }
    out
}

/// An operator with its spaces resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Linear(LinearOp),
    Bilinear(BilinearOp),
    Form(BilinearForm),
}

#[derive(Debug, Clone, Default)]
pub struct Resolved {
    pub spaces: BTreeMap<String, AsymNorm>,
    pub operators: BTreeMap<String, Operator>,
    pub polyhedra: BTreeMap<String, Polyhedron>,
}

impl Resolved {
    pub fn space(&self, name: &str) -> Result<&AsymNorm, FormatError> {
        self.spaces.get(name).ok_or_else(|| semantic(name, "unknown space"))
    }

    pub fn operator(&self, name: &str) -> Result<&Operator, FormatError> {
        self.operators.get(name).ok_or_else(|| semantic(name, "unknown operator"))
    }

    pub fn polyhedron(&self, name: &str) -> Result<&Polyhedron, FormatError> {
        self.polyhedra.get(name).ok_or_else(|| semantic(name, "unknown polyhedron"))
    }
}

fn semantic(key: &str, message: impl Into<String>) -> FormatError {
    FormatError::Semantic { key: key.to_string(), message: message.into() }
}

/// Builds every space and operator, checking names, dimensions and caps.
pub fn resolve(file: &InstanceFile, caps: &Caps) -> Result<Resolved, FormatError> {
    let mut r = Resolved::default();
    for s in &file.spaces {
        if r.spaces.contains_key(&s.name) {
            return Err(semantic(&s.name, "duplicate space"));
        }
        if s.dim == 0 || s.dim > caps.max_dim {
            return Err(semantic(&s.name, format!("dimension {} outside 1..={}", s.dim, caps.max_dim)));
        }
        if s.generators.len() > caps.max_generators {
            return Err(semantic(&s.name, format!("{} generators exceed cap {}", s.generators.len(), caps.max_generators)));
        }
        let norm = AsymNorm::new(s.dim, s.generators.clone()).map_err(|e| semantic(&s.name, e.to_string()))?;
        r.spaces.insert(s.name.clone(), norm);
    }
    for o in &file.operators {
        if r.operators.contains_key(&o.name) || r.spaces.contains_key(&o.name) {
            return Err(semantic(&o.name, "duplicate name"));
        }
        let wrap = |e: asymlin::Error| semantic(&o.name, e.to_string());
        let op = match &o.kind {
            OperatorKind::Linear { source, target, matrix } => {
                Operator::Linear(LinearOp::new(matrix.clone(), r.space(source)?.clone(), r.space(target)?.clone()).map_err(wrap)?)
            }
            OperatorKind::Bilinear { source1, source2, target, tensor } => Operator::Bilinear(
                BilinearOp::new(tensor.clone(), r.space(source1)?.clone(), r.space(source2)?.clone(), r.space(target)?.clone())
                    .map_err(wrap)?,
            ),
            OperatorKind::Form { source1, source2, matrix } => Operator::Form(
                BilinearForm::new(matrix.clone(), r.space(source1)?.clone(), r.space(source2)?.clone()).map_err(wrap)?,
            ),
        };
        r.operators.insert(o.name.clone(), op);
    }
    for p in &file.polyhedra {
        if r.polyhedra.contains_key(&p.name) || r.operators.contains_key(&p.name) || r.spaces.contains_key(&p.name) {
            return Err(semantic(&p.name, "duplicate name"));
        }
        if p.dim == 0 || p.dim > caps.max_dim {
            return Err(semantic(&p.name, format!("dimension {} outside 1..={}", p.dim, caps.max_dim)));
        }
        if p.rows.len() > caps.max_generators {
            return Err(semantic(&p.name, format!("{} inequalities exceed cap {}", p.rows.len(), caps.max_generators)));
        }
        let mut h = Vec::new();
        for row in &p.rows {
            if row.len() != p.dim + 1 {
                return Err(semantic(&p.name, format!("inequality rows need {} entries", p.dim + 1)));
            }
            h.push(Halfspace::new(row[..p.dim].to_vec(), row[p.dim].clone()));
        }
        let poly = Polyhedron::from_h_rep(p.dim, h)
            .and_then(|poly| poly.enumerate(caps))
            .map_err(|e| semantic(&p.name, e.to_string()))?;
        r.polyhedra.insert(p.name.clone(), poly);
    }
    Ok(r)
}

/// The u-space fixture: `(Q, u)` with `u(α) = max{α, 0}`.
pub const U_SPACE: &str = "asymlin/1
space u 1 [1] [0]
space abs 1 [1] [-1]
linear neg u u [-1]
bilinear prod abs abs u {[1]}
bilinear prod_u u u u {[1]}
check eval u [3] => 3
check eval u [-2] => 0
check norm neg => inf
check norm prod => 1
check norm prod_u => inf
check sym-norm prod_u => 1
";
