//! Module expressions used on the command line.
//!
//! Atoms: a module declared in the algebra file, `S<v>`, `P<v>`, `I<v>`,
//! `radP<v>` (each with an optional `_r` suffix for the right-module
//! version), `A` and `A_r`. With an idempotent subset in scope also `AeA`,
//! `AeA_r`, `Abar`, `Abar_r`, `Ae` and `eA_r`. Functions: `rad(X)`,
//! `Omega<n>(X)` (`Omega(X)` is `Omega1(X)`), `D(X)` (the vector space dual,
//! which swaps sides), `trace(X)` and `quot(X)` (the trace `AeX` and `X/AeX`).
//! Declared names shadow built-in atoms.

use fdim_core::algebra::AlgebraRef;
use fdim_core::ideals::IdealContext;
use fdim_core::modules::{
    dual, projective, quotient_module, radical_columns, regular, simple, submodule, syzygy_n, trace_submodule,
    Module,
};
use fdim_core::{Error, Field, Result};

use crate::specfile::{AlgebraSpecFile, Side};

/// A resolved module expression.
#[derive(Clone, Debug)]
pub struct Resolved<F> {
    pub name: String,
    pub side: Side,
    pub module: Module<F>,
}

pub struct Scope<'a, F> {
    pub spec: &'a AlgebraSpecFile,
    pub a: &'a AlgebraRef<F>,
    pub ctx: Option<&'a IdealContext<F>>,
}

fn unknown(name: &str) -> Error {
    Error::Precondition(format!("unknown module `{name}`"))
}

impl<F: Field> Scope<'_, F> {
    fn over(&self, side: Side) -> AlgebraRef<F> {
        match side {
            Side::Left => self.a.clone(),
            Side::Right => self.a.opposite_ref(),
        }
    }

    pub fn resolve(&self, expr: &str) -> Result<Resolved<F>> {
        let expr = expr.trim();
        let (side, module) = self.eval(expr)?;
        Ok(Resolved {
            name: expr.to_string(),
            side,
            module,
        })
    }

    fn eval(&self, expr: &str) -> Result<(Side, Module<F>)> {
        if let Some(open) = expr.find('(') {
            let inner = expr[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("expected `)` at the end of `{expr}`")))?;
            let func = &expr[..open];
            let (side, m) = self.eval(inner.trim())?;
            return match func {
                "rad" => Ok((side, submodule(&m, &radical_columns(&m))?.0)),
                "D" => Ok((flip(side), dual(&m))),
                "trace" | "quot" => {
                    let subset = self.subset(func)?;
                    let (t, incl) = trace_submodule(&m, subset)?;
                    if func == "trace" {
                        Ok((side, t))
                    } else {
                        Ok((side, quotient_module(&m, &incl)?.0))
                    }
                }
                _ => {
                    let n = func
                        .strip_prefix("Omega")
                        .and_then(|d| if d.is_empty() { Some(1) } else { d.parse().ok() })
                        .ok_or_else(|| Error::Parse(format!("unknown function `{func}`")))?;
                    Ok((side, syzygy_n(&m, n)))
                }
            };
        }
        self.atom(expr)
    }

    fn subset(&self, what: &str) -> Result<&[usize]> {
        self.ctx
            .map(|c| c.subset.as_slice())
            .ok_or_else(|| Error::Precondition(format!("`{what}` needs an idempotent subset")))
    }

    fn atom(&self, name: &str) -> Result<(Side, Module<F>)> {
        if let Some(decl) = self.spec.module_decl(name) {
            return Ok((decl.side, self.spec.build_module(decl, self.a)?));
        }
        if let Some(ctx) = self.ctx {
            let found = match name {
                "AeA" => Some((Side::Left, &ctx.aea_left)),
                "AeA_r" => Some((Side::Right, &ctx.aea_right)),
                "Abar" => Some((Side::Left, &ctx.abar_left)),
                "Abar_r" => Some((Side::Right, &ctx.abar_right)),
                "Ae" => Some((Side::Left, &ctx.ae)),
                "eA_r" => Some((Side::Right, &ctx.ea)),
                _ => None,
            };
            if let Some((side, m)) = found {
                return Ok((side, m.clone()));
            }
        }
        let (base, side) = match name.strip_suffix("_r") {
            Some(b) => (b, Side::Right),
            None => (name, Side::Left),
        };
        let alg = self.over(side);
        if base == "A" {
            return Ok((side, regular(&alg)));
        }
        let vertex = |label: &str| self.a.vertex_index(label).ok_or_else(|| unknown(name));
        if let Some(v) = base.strip_prefix("radP") {
            let p = projective(&alg, vertex(v)?);
            return Ok((side, submodule(&p, &radical_columns(&p))?.0));
        }
        if let Some(v) = base.strip_prefix('S') {
            return Ok((side, simple(&alg, vertex(v)?)));
        }
        if let Some(v) = base.strip_prefix('P') {
            return Ok((side, projective(&alg, vertex(v)?)));
        }
        if let Some(v) = base.strip_prefix('I') {
            // injective hull of the simple: dual of a projective on the other side
            let other = self.over(flip(side));
            return Ok((side, dual(&projective(&other, vertex(v)?))));
        }
        Err(unknown(name))
    }
}

fn flip(s: Side) -> Side {
    match s {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

/// Vertex indices of an idempotent subset: a declared subset name or a
/// comma-separated list of vertex labels.
pub fn resolve_subset(spec: &AlgebraSpecFile, text: &str) -> Result<Vec<usize>> {
    let labels: Vec<String> = match spec.subset(text) {
        Some(s) => s.vertices.clone(),
        None => text
            .split(',')
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty())
            .collect(),
    };
    let mut out = Vec::new();
    for l in &labels {
        let v = spec
            .vertex_index(l)
            .ok_or_else(|| Error::Precondition(format!("unknown subset or vertex `{l}`")))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::Precondition("empty idempotent subset".into()));
    }
    out.sort_unstable();
    Ok(out)
}
