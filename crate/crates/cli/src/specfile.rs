//! The line-oriented algebra file format.
//!
//! ```text
//! [field]
//! Q
//!
//! [vertices]
//! 1 2
//!
//! [arrows]
//! a: 1 -> 2
//! b: 2 -> 1
//!
//! [relations]
//! b a b
//!
//! [module M]
//! dims: 1 1
//! a: [1]
//!
//! [right-module N]
//! dims: 1 0
//!
//! [subsets]
//! E: 1
//! ```
//!
//! `#` starts a comment. Arrow words list the first arrow first. Module
//! matrices have one row per basis vector at the target of the arrow, rows
//! separated by `;`. A right module is a representation of the opposite
//! quiver, so the matrix of `a: s -> t` is `dim_s x dim_t`. Arrows without a
//! matrix act as zero.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use fdim_core::algebra::{Algebra, AlgebraRef, Arrow, MonomialPresentation, Quiver};
use fdim_core::modules::Module;
use fdim_core::{Field, FieldSpec, Matrix, Q};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowDecl {
    pub label: String,
    pub source: String,
    pub target: String,
}

/// Matrix literal with canonical entry strings, row major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixLit {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleDecl {
    pub name: String,
    pub side: Side,
    pub dims: Vec<usize>,
    /// Arrow label and matrix, in file order.
    pub matrices: Vec<(String, MatrixLit)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetDecl {
    pub name: String,
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraSpecFile {
    pub field: FieldSpec,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub relations: Vec<Vec<String>>,
    pub modules: Vec<ModuleDecl>,
    pub subsets: Vec<SubsetDecl>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Field,
    Vertices,
    Arrows,
    Relations,
    Module(usize),
    Subsets,
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Canonical form of a scalar literal over `field`.
pub fn canonical_literal(field: FieldSpec, s: &str) -> Result<String, String> {
    fn go<F: Field>(s: &str) -> Result<String, String> {
        F::parse_literal(s).map(|x| x.to_string()).map_err(|e| e.to_string())
    }
    match field {
        FieldSpec::Rationals => go::<Q>(s),
        // any prime is accepted here; arithmetic support is checked when the algebra is built
        FieldSpec::PrimeField(p) => {
            let t = s.trim();
            let n: i128 = t
                .parse()
                .map_err(|_| format!("malformed literal `{t}` over F{p}"))?;
            Ok(n.rem_euclid(p as i128).to_string())
        }
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.no,
            column,
            message: message.into(),
        }
    }

    /// 1-based column of a subslice of this line.
    fn col(&self, part: &str) -> usize {
        part.as_ptr() as usize - self.text.as_ptr() as usize + 1
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens<'a>(line: &Line<'a>, s: &'a str) -> Vec<(usize, &'a str)> {
    s.split_whitespace().map(|t| (line.col(t), t)).collect()
}

pub fn parse_spec(text: &str) -> Result<AlgebraSpecFile, ParseError> {
    let mut spec = AlgebraSpecFile {
        field: FieldSpec::Rationals,
        vertices: Vec::new(),
        arrows: Vec::new(),
        relations: Vec::new(),
        modules: Vec::new(),
        subsets: Vec::new(),
    };
    let mut section = Section::None;
    let mut seen_sections: HashSet<&'static str> = HashSet::new();
    let mut field_set = false;
    let mut names: HashSet<String> = HashSet::new();
    // matrix literals are checked once the field is known
    let mut pending: Vec<(usize, usize, usize, usize, String)> = Vec::new();
    let mut module_has_dims: Vec<bool> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = Line { no: i + 1, text: raw };
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let start = line.col(trimmed);
        if let Some(rest) = trimmed.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| line.err(start + trimmed.len(), "expected `]` to close the section header"))?
                .trim();
            let mut parts = inner.split_whitespace();
            let head = parts.next().unwrap_or("");
            let arg = parts.next();
            if parts.next().is_some() {
                return Err(line.err(start, "expected `[section]` or `[module NAME]`"));
            }
            let single = |name: &'static str, seen: &mut HashSet<&'static str>| {
                if arg.is_some() {
                    return Err(line.err(start, format!("section `{name}` takes no name")));
                }
                if !seen.insert(name) {
                    return Err(line.err(start, format!("duplicate section `[{name}]`")));
                }
                Ok(())
            };
            section = match head {
                "field" => {
                    single("field", &mut seen_sections)?;
                    Section::Field
                }
                "vertices" => {
                    single("vertices", &mut seen_sections)?;
                    Section::Vertices
                }
                "arrows" => {
                    single("arrows", &mut seen_sections)?;
                    Section::Arrows
                }
                "relations" => {
                    single("relations", &mut seen_sections)?;
                    Section::Relations
                }
                "subsets" => {
                    single("subsets", &mut seen_sections)?;
                    Section::Subsets
                }
                "module" | "right-module" => {
                    let name = arg.ok_or_else(|| line.err(start, format!("expected a name after `{head}`")))?;
                    if !is_ident(name) {
                        return Err(line.err(line.col(name), format!("invalid module name `{name}`")));
                    }
                    if !names.insert(name.to_string()) {
                        return Err(line.err(line.col(name), format!("duplicate name `{name}`")));
                    }
                    spec.modules.push(ModuleDecl {
                        name: name.to_string(),
                        side: if head == "module" { Side::Left } else { Side::Right },
                        dims: Vec::new(),
                        matrices: Vec::new(),
                    });
                    module_has_dims.push(false);
                    Section::Module(spec.modules.len() - 1)
                }
                other => {
                    return Err(line.err(
                        start,
                        format!(
                            "unknown section `{other}`; expected field, vertices, arrows, relations, module, right-module or subsets"
                        ),
                    ))
                }
            };
            continue;
        }
        match section {
            Section::None => return Err(line.err(start, "expected a `[section]` header")),
            Section::Field => {
                if field_set {
                    return Err(line.err(start, "the field is already declared"));
                }
                spec.field = trimmed
                    .parse()
                    .map_err(|_| line.err(start, format!("expected `Q` or `F<p>`, found `{trimmed}`")))?;
                field_set = true;
            }
            Section::Vertices => {
                for (c, t) in tokens(&line, content) {
                    if !is_ident(t) {
                        return Err(line.err(c, format!("invalid vertex label `{t}`")));
                    }
                    if spec.vertices.iter().any(|v| v == t) {
                        return Err(line.err(c, format!("duplicate vertex `{t}`")));
                    }
                    spec.vertices.push(t.to_string());
                }
            }
            Section::Arrows => {
                let (label, rest) = trimmed
                    .split_once(':')
                    .ok_or_else(|| line.err(start, "expected `label: source -> target`"))?;
                let label = label.trim();
                if !is_ident(label) {
                    return Err(line.err(start, format!("invalid arrow label `{label}`")));
                }
                if spec.arrows.iter().any(|a| a.label == label) {
                    return Err(line.err(start, format!("duplicate arrow `{label}`")));
                }
                let (s, t) = rest
                    .split_once("->")
                    .ok_or_else(|| line.err(line.col(rest), "expected `->`"))?;
                let mut ends = Vec::new();
                for part in [s, t] {
                    let toks = tokens(&line, part);
                    let (c, v) = match toks.as_slice() {
                        [(c, v)] => (*c, *v),
                        _ => return Err(line.err(line.col(part), "expected one vertex label")),
                    };
                    if !spec.vertices.iter().any(|x| x == v) {
                        return Err(line.err(c, format!("unknown vertex `{v}`")));
                    }
                    ends.push(v.to_string());
                }
                spec.arrows.push(ArrowDecl {
                    label: label.to_string(),
                    source: ends[0].clone(),
                    target: ends[1].clone(),
                });
            }
            Section::Relations => {
                let toks = tokens(&line, content);
                let mut word: Vec<String> = Vec::new();
                let mut prev: Option<&ArrowDecl> = None;
                for (c, t) in toks {
                    let a = spec
                        .arrows
                        .iter()
                        .find(|a| a.label == t)
                        .ok_or_else(|| line.err(c, format!("unknown arrow `{t}`")))?;
                    if let Some(p) = prev {
                        if p.target != a.source {
                            return Err(line.err(
                                c,
                                format!(
                                    "relation is not composable: `{}` ends at {} but `{}` starts at {}",
                                    p.label, p.target, a.label, a.source
                                ),
                            ));
                        }
                    }
                    prev = Some(a);
                    word.push(t.to_string());
                }
                if word.len() < 2 {
                    return Err(line.err(start, "a relation needs at least two arrows"));
                }
                if spec.relations.contains(&word) {
                    return Err(line.err(start, format!("duplicate relation `{}`", word.join(" "))));
                }
                spec.relations.push(word);
            }
            Section::Subsets => {
                let (name, rest) = trimmed
                    .split_once(':')
                    .ok_or_else(|| line.err(start, "expected `name: vertex ...`"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(line.err(start, format!("invalid subset name `{name}`")));
                }
                if !names.insert(name.to_string()) {
                    return Err(line.err(start, format!("duplicate name `{name}`")));
                }
                let mut vs: Vec<String> = Vec::new();
                for (c, t) in tokens(&line, rest) {
                    let t = t.trim_end_matches(',');
                    if !spec.vertices.iter().any(|v| v == t) {
                        return Err(line.err(c, format!("unknown vertex `{t}`")));
                    }
                    if vs.iter().any(|v| v == t) {
                        return Err(line.err(c, format!("vertex `{t}` repeated")));
                    }
                    vs.push(t.to_string());
                }
                spec.subsets.push(SubsetDecl {
                    name: name.to_string(),
                    vertices: vs,
                });
            }
            Section::Module(k) => {
                let (key, rest) = trimmed
                    .split_once(':')
                    .ok_or_else(|| line.err(start, "expected `dims: ...` or `arrow: [matrix]`"))?;
                let key = key.trim();
                if key == "dims" {
                    if module_has_dims[k] {
                        return Err(line.err(start, "dims already given"));
                    }
                    let mut dims = Vec::new();
                    for (c, t) in tokens(&line, rest) {
                        dims.push(
                            t.parse::<usize>()
                                .map_err(|_| line.err(c, format!("expected a dimension, found `{t}`")))?,
                        );
                    }
                    if dims.len() != spec.vertices.len() {
                        return Err(line.err(
                            line.col(rest),
                            format!("expected {} dimensions, one per vertex", spec.vertices.len()),
                        ));
                    }
                    spec.modules[k].dims = dims;
                    module_has_dims[k] = true;
                    continue;
                }
                if !module_has_dims[k] {
                    return Err(line.err(start, "expected `dims:` before the arrow matrices"));
                }
                let arrow = spec
                    .arrows
                    .iter()
                    .find(|a| a.label == key)
                    .ok_or_else(|| line.err(start, format!("unknown arrow `{key}`")))?
                    .clone();
                if spec.modules[k].matrices.iter().any(|(l, _)| l == key) {
                    return Err(line.err(start, format!("matrix for `{key}` given twice")));
                }
                let vi = |l: &str| spec.vertices.iter().position(|v| v == l).unwrap();
                let dims = &spec.modules[k].dims;
                let (rows, cols) = match spec.modules[k].side {
                    Side::Left => (dims[vi(&arrow.target)], dims[vi(&arrow.source)]),
                    Side::Right => (dims[vi(&arrow.source)], dims[vi(&arrow.target)]),
                };
                let body = rest.trim();
                let bc = line.col(body);
                let inner = body
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| line.err(bc, "expected a matrix `[r r; r r]`"))?;
                let mut entries = Vec::new();
                let row_parts: Vec<&str> = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner.split(';').collect()
                };
                if rows * cols == 0 {
                    if !row_parts.is_empty() {
                        return Err(line.err(bc, format!("expected `[]` for a {rows}x{cols} matrix")));
                    }
                } else {
                    if row_parts.len() != rows {
                        return Err(line.err(bc, format!("expected {rows} rows, found {}", row_parts.len())));
                    }
                    for part in row_parts {
                        let toks = tokens(&line, part);
                        if toks.len() != cols {
                            return Err(line.err(
                                line.col(part),
                                format!("expected {cols} entries in a row, found {}", toks.len()),
                            ));
                        }
                        for (c, t) in toks {
                            pending.push((line.no, c, k, spec.modules[k].matrices.len(), t.to_string()));
                            entries.push(t.to_string());
                        }
                    }
                }
                spec.modules[k].matrices.push((key.to_string(), MatrixLit { rows, cols, entries }));
            }
        }
    }
    for (k, has) in module_has_dims.iter().enumerate() {
        if !has {
            return Err(ParseError {
                line: text.lines().count().max(1),
                column: 1,
                message: format!("module `{}` has no `dims:` line", spec.modules[k].name),
            });
        }
    }
    // canonicalize literals; entries were pushed in order so an index walk suffices
    let mut cursor: Vec<Vec<usize>> = spec.modules.iter().map(|m| vec![0; m.matrices.len()]).collect();
    for (line, column, k, j, lit) in pending {
        let c = canonical_literal(spec.field, &lit).map_err(|message| ParseError { line, column, message })?;
        let idx = cursor[k][j];
        spec.modules[k].matrices[j].1.entries[idx] = c;
        cursor[k][j] += 1;
    }
    Ok(spec)
}

/// Inverse of [`parse_spec`] on parsed files.
pub fn render_spec(spec: &AlgebraSpecFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("[field]\n{}\n\n[vertices]\n{}\n", spec.field, spec.vertices.join(" ")));
    if !spec.arrows.is_empty() {
        out.push_str("\n[arrows]\n");
        for a in &spec.arrows {
            out.push_str(&format!("{}: {} -> {}\n", a.label, a.source, a.target));
        }
    }
    if !spec.relations.is_empty() {
        out.push_str("\n[relations]\n");
        for r in &spec.relations {
            out.push_str(&r.join(" "));
            out.push('\n');
        }
    }
    for m in &spec.modules {
        let head = match m.side {
            Side::Left => "module",
            Side::Right => "right-module",
        };
        out.push_str(&format!("\n[{head} {}]\n", m.name));
        let dims: Vec<String> = m.dims.iter().map(usize::to_string).collect();
        out.push_str(&format!("dims: {}\n", dims.join(" ")));
        for (label, lit) in &m.matrices {
            let rows: Vec<String> = (0..lit.rows)
                .filter(|_| lit.cols > 0)
                .map(|i| lit.entries[i * lit.cols..(i + 1) * lit.cols].join(" "))
                .collect();
            out.push_str(&format!("{label}: [{}]\n", rows.join("; ")));
        }
    }
    if !spec.subsets.is_empty() {
        out.push_str("\n[subsets]\n");
        for s in &spec.subsets {
            out.push_str(&format!("{}: {}\n", s.name, s.vertices.join(" ")));
        }
    }
    out
}

impl AlgebraSpecFile {
    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn presentation(&self) -> fdim_core::Result<MonomialPresentation> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                label: a.label.clone(),
                source: self.vertex_index(&a.source).expect("validated"),
                target: self.vertex_index(&a.target).expect("validated"),
            })
            .collect();
        let quiver = Quiver::new(self.vertices.clone(), arrows)?;
        let relations = self
            .relations
            .iter()
            .map(|r| r.iter().map(|l| quiver.arrow_index(l).expect("validated")).collect())
            .collect();
        MonomialPresentation::new(quiver, relations, self.field)
    }

    /// The algebra over `F`, which must match the declared field.
    pub fn algebra<F: Field>(&self) -> fdim_core::Result<AlgebraRef<F>> {
        let mut p = self.presentation()?;
        p.field = F::spec();
        Ok(Arc::new(Algebra::from_monomial(&p)?))
    }

    pub fn module_decl(&self, name: &str) -> Option<&ModuleDecl> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn subset(&self, name: &str) -> Option<&SubsetDecl> {
        self.subsets.iter().find(|s| s.name == name)
    }

    /// Builds a declared module over `a` (left) or `a^op` (right).
    pub fn build_module<F: Field>(&self, decl: &ModuleDecl, a: &AlgebraRef<F>) -> fdim_core::Result<Module<F>> {
        let alg = match decl.side {
            Side::Left => a.clone(),
            Side::Right => a.opposite_ref(),
        };
        let mut mats = Vec::with_capacity(self.arrows.len());
        for arrow in &self.arrows {
            let s = decl.dims[self.vertex_index(&arrow.source).expect("validated")];
            let t = decl.dims[self.vertex_index(&arrow.target).expect("validated")];
            let (rows, cols) = match decl.side {
                Side::Left => (t, s),
                Side::Right => (s, t),
            };
            let m = match decl.matrices.iter().find(|(l, _)| *l == arrow.label) {
                Some((_, lit)) => {
                    let data = lit
                        .entries
                        .iter()
                        .map(|e| F::parse_literal(e))
                        .collect::<fdim_core::Result<Vec<F>>>()?;
                    Matrix::new(rows, cols, data)?
                }
                None => Matrix::zeros(rows, cols),
            };
            mats.push(m);
        }
        Module::from_representation(alg, &decl.dims, &mats)
    }
}

/// Declaration of `m` under `name`, with canonical literals. `m` must be over
/// a monomial algebra; right modules are recorded by their opposite quiver.
pub fn module_decl_of<F: Field>(name: &str, side: Side, m: &Module<F>) -> fdim_core::Result<ModuleDecl> {
    let (dims, mats) = m.representation()?;
    let mono = m.algebra().monomial().expect("representation checked monomial");
    let matrices = mono
        .presentation
        .quiver
        .arrows()
        .iter()
        .zip(mats)
        .filter(|(_, mat)| !mat.is_zero())
        .map(|(a, mat)| {
            (
                a.label.clone(),
                MatrixLit {
                    rows: mat.rows(),
                    cols: mat.cols(),
                    entries: mat.entries().iter().map(|x| x.to_string()).collect(),
                },
            )
        })
        .collect();
    Ok(ModuleDecl {
        name: name.to_string(),
        side,
        dims,
        matrices,
    })
}

/// Algebra file of a presentation, with no modules or subsets.
pub fn spec_of_presentation(p: &MonomialPresentation) -> AlgebraSpecFile {
    let q = &p.quiver;
    AlgebraSpecFile {
        field: p.field,
        vertices: q.vertices().to_vec(),
        arrows: q
            .arrows()
            .iter()
            .map(|a| ArrowDecl {
                label: a.label.clone(),
                source: q.vertices()[a.source].clone(),
                target: q.vertices()[a.target].clone(),
            })
            .collect(),
        relations: p
            .relations
            .iter()
            .map(|r| r.iter().map(|&x| q.arrows()[x].label.clone()).collect())
            .collect(),
        modules: Vec::new(),
        subsets: Vec::new(),
    }
}
