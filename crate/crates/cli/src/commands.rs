//! The file-based commands, generic over the scalar field.

use fdim_core::algebra::AlgebraRef;
use fdim_core::homology::{ext_dims, inj_dim, minimal_resolution, proj_dim, tor_dims};
use fdim_core::ideals::{
    build_context, multiplication_map_check, pe_profile, pe_verdict, strongly_idempotent_report, IdealContext,
};
use fdim_core::modules::{dual, loewy_layers, projective, socle_layers};
use fdim_core::theorems::{
    bound_reports, canonical_ses, fdim_certificate, general_hypothesis_check, lemma_aex_check,
    lemma_syzygy_trace_check, pd_transfer_check, ses_bound_check, standard_battery, stratified_chain_search,
    auto_certificate, Bound, BoundInputs, FdimRequest, Named, WitnessStatus,
};
use fdim_core::{Error, Field};
use serde_json::json;

use crate::names::{resolve_subset, Resolved, Scope};
use crate::render::{composition, layers, list, short};
use crate::specfile::{AlgebraSpecFile, Side};
use crate::{AssertedFdims, Cli, CliError, Command, CommandOutput};

/// Primes with arithmetic support.
pub const SUPPORTED_PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

/// Calls `$f::<F>($args)` for the scalar type of `$field`.
#[macro_export]
macro_rules! with_field {
    ($field:expr, $f:ident ( $($args:expr),* )) => {
        match $field {
            fdim_core::FieldSpec::Rationals => $f::<fdim_core::Q>($($args),*),
            fdim_core::FieldSpec::PrimeField(2) => $f::<fdim_core::Fp<2>>($($args),*),
            fdim_core::FieldSpec::PrimeField(3) => $f::<fdim_core::Fp<3>>($($args),*),
            fdim_core::FieldSpec::PrimeField(5) => $f::<fdim_core::Fp<5>>($($args),*),
            fdim_core::FieldSpec::PrimeField(7) => $f::<fdim_core::Fp<7>>($($args),*),
            fdim_core::FieldSpec::PrimeField(11) => $f::<fdim_core::Fp<11>>($($args),*),
            fdim_core::FieldSpec::PrimeField(13) => $f::<fdim_core::Fp<13>>($($args),*),
            fdim_core::FieldSpec::PrimeField(p) => Err(fdim_core::Error::Precondition(format!(
                "F{p} is not supported; available fields are Q, F2, F3, F5, F7, F11, F13"
            ))
            .into()),
        }
    };
}

pub fn dispatch(cli: &Cli, spec: &AlgebraSpecFile) -> Result<CommandOutput, CliError> {
    with_field!(spec.field, run_command(cli, spec))
}

fn out(result: serde_json::Value, text: String, refuted: bool) -> Result<CommandOutput, CliError> {
    Ok(CommandOutput { result, text, refuted })
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn left_only<F: Field>(r: &Resolved<F>) -> Result<(), CliError> {
    if r.side == Side::Right {
        return Err(CliError::Core(Error::AlgebraMismatch(format!(
            "`{}` is a right module; this command needs a left module",
            r.name
        ))));
    }
    Ok(())
}

fn context<F: Field>(spec: &AlgebraSpecFile, a: &AlgebraRef<F>, subset: &str) -> Result<IdealContext<F>, CliError> {
    let vs = resolve_subset(spec, subset)?;
    Ok(build_context(a, &vs)?)
}

fn inputs<F: Field>(ctx: &IdealContext<F>, asserted: &AssertedFdims, cutoff: usize) -> Result<BoundInputs, CliError> {
    let mut inputs = BoundInputs::automatic(ctx, cutoff);
    let assert = |alg: &AlgebraRef<F>, v: Option<usize>, slot: &mut Option<_>| -> Result<(), CliError> {
        if let Some(value) = v {
            *slot = Some(fdim_certificate(alg, FdimRequest::UserAsserted { value }, cutoff)?);
        }
        Ok(())
    };
    assert(&ctx.b, asserted.fdim_b, &mut inputs.fdim_b)?;
    assert(&ctx.abar, asserted.fdim_abar, &mut inputs.fdim_abar)?;
    assert(&ctx.b.opposite_ref(), asserted.fidim_b, &mut inputs.fidim_b)?;
    assert(&ctx.abar.opposite_ref(), asserted.fidim_abar, &mut inputs.fidim_abar)?;
    Ok(inputs)
}

fn witnesses<F: Field>(scope: &Scope<'_, F>, ctx: &IdealContext<F>, names: &[String]) -> Result<Vec<Named<F>>, CliError> {
    if names.is_empty() {
        return Ok(standard_battery(ctx));
    }
    names
        .iter()
        .map(|n| {
            let r = scope.resolve(n)?;
            left_only(&r)?;
            Ok((r.name, r.module))
        })
        .collect()
}

fn cert_text(name: &str, c: &Option<fdim_core::theorems::FdimCertificate>) -> String {
    match c {
        Some(c) => format!(
            "{name} = {}{}",
            c.value,
            if c.certified { "" } else { " (uncertified)" }
        ),
        None => format!("{name} unknown"),
    }
}

fn run_command<F: Field>(cli: &Cli, spec: &AlgebraSpecFile) -> Result<CommandOutput, CliError> {
    let a = spec.algebra::<F>()?;
    let labels = a.vertex_labels().to_vec();
    let cutoff = cli.cutoff();
    let idem = cli.idem.as_deref().map(|e| context(spec, &a, e)).transpose()?;
    let scope = Scope { spec, a: &a, ctx: idem.as_ref() };
    match &cli.command {
        Command::Info => info(&a),
        Command::Resolve { module } => {
            let r = scope.resolve(module)?;
            let res = minimal_resolution(&r.module, cutoff);
            res.verify()?;
            let report = res.report();
            let terms: Vec<String> = report.multiplicities.iter().map(|m| composition("P", m, &labels)).collect();
            let syz: Vec<usize> = res.steps.iter().map(|s| s.syzygy.dim()).collect();
            let mut text = format!("minimal projective resolution of {} ({} module, dim {})\n", r.name, side_name(r.side), r.module.dim());
            for (i, t) in terms.iter().enumerate() {
                text.push_str(&format!("  P_{i} = {t}   (dim Ω^{} = {})\n", i + 1, syz[i]));
            }
            text.push_str(&format!("pd = {}\n", report.verdict));
            out(
                json!({"module": r.name, "side": r.side, "dim": r.module.dim(), "terms": terms,
                       "syzygy_dims": syz, "resolution": report}),
                text,
                false,
            )
        }
        Command::Pd { module } | Command::Injdim { module } => {
            let r = scope.resolve(module)?;
            let (what, v) = match cli.command {
                Command::Pd { .. } => ("pd", proj_dim(&r.module, cutoff)),
                _ => ("injdim", inj_dim(&r.module, cutoff)),
            };
            out(
                json!({"module": r.name, "side": r.side, "dim": r.module.dim(), what: v}),
                format!("{what} {} = {v}\n", r.name),
                false,
            )
        }
        Command::Tor { right, left, n } => {
            let (x, y) = (scope.resolve(right)?, scope.resolve(left)?);
            if x.side != Side::Right || y.side != Side::Left {
                return Err(CliError::Core(Error::AlgebraMismatch(format!(
                    "tor needs a right module then a left module, got {} ({}) and {} ({})",
                    x.name,
                    side_name(x.side),
                    y.name,
                    side_name(y.side)
                ))));
            }
            let res = minimal_resolution(&y.module, n + 1);
            let dims = tor_dims(&x.module, &res)?;
            let dims: Vec<usize> = (0..=*n).map(|k| dims.get(k).copied().unwrap_or(0)).collect();
            out(
                json!({"right": x.name, "left": y.name, "tor": dims}),
                format!("dim Tor_k({}, {}) for k = 0..{n}: {}\n", x.name, y.name, list(&dims)),
                false,
            )
        }
        Command::Ext { x, y, n } => {
            let (x, y) = (scope.resolve(x)?, scope.resolve(y)?);
            if x.side != y.side {
                return Err(CliError::Core(Error::AlgebraMismatch(format!(
                    "ext needs two modules on the same side, got {} ({}) and {} ({})",
                    x.name,
                    side_name(x.side),
                    y.name,
                    side_name(y.side)
                ))));
            }
            let res = minimal_resolution(&x.module, n + 1);
            let dims = ext_dims(&res, &y.module)?;
            let dims: Vec<usize> = (0..=*n).map(|k| dims.get(k).copied().unwrap_or(0)).collect();
            out(
                json!({"x": x.name, "y": y.name, "ext": dims}),
                format!("dim Ext^k({}, {}) for k = 0..{n}: {}\n", x.name, y.name, list(&dims)),
                false,
            )
        }
        Command::Context { subset } => {
            let ctx = context(spec, &a, subset)?;
            let s = ctx.summary();
            let mult = multiplication_map_check(&ctx)?;
            let pd_left = proj_dim(&ctx.aea_left, cutoff);
            let pd_right = proj_dim(&ctx.aea_right, cutoff);
            let abar_vertices: Vec<String> = ctx.abar_vertices.iter().map(|&v| labels[v].clone()).collect();
            let text = format!(
                "E = {{{}}}\ndim A = {}, dim AeA = {}, dim B = {} ({}), dim Ā = {} (vertices {})\n\
                 Ae ⊗_B eA -> AeA is an isomorphism: {mult}\npd_A(AeA) = {pd_left}\npd_A^op(AeA) = {pd_right}\n",
                s.subset.join(", "),
                s.dim_a,
                s.dim_aea,
                s.dim_b,
                if s.b_local { "local" } else { "not local" },
                s.dim_abar,
                if abar_vertices.is_empty() { "none".to_string() } else { abar_vertices.join(", ") },
            );
            out(
                json!({"summary": s, "abar_vertices": abar_vertices, "multiplication_iso": mult,
                       "pd_aea_left": pd_left, "pd_aea_right": pd_right}),
                text,
                false,
            )
        }
        Command::IdealCheck { subset } => {
            let ctx = context(spec, &a, subset)?;
            let r = strongly_idempotent_report(&ctx, cutoff)?;
            let pd = proj_dim(&ctx.aea_left, cutoff);
            let failing: Vec<usize> = (0..r.profile.terms_in_add.len()).filter(|&k| !r.profile.terms_in_add[k]).collect();
            let text = format!(
                "AeA for E = {{{}}}: strongly idempotent: {}\n  P_e route: {}\n  Tor^B route: {}\n  \
                 degrees checked: {}, failing: {}\n  Tor_n^A(Ā, AeA): {}\n  pd_A(AeA) = {pd}\n",
                ctx.summary().subset.join(", "),
                r.verdict,
                r.pe_route,
                r.cps_route,
                r.profile.terms_in_add.len(),
                list(&failing),
                list(&r.profile.tor),
            );
            let refuted = r.verdict.is_refuted();
            out(
                json!({"verdict": r.verdict, "pe_route": r.pe_route, "cps_route": r.cps_route,
                       "profile": r.profile, "failing_degrees": failing, "pd_aea_left": pd}),
                text,
                refuted,
            )
        }
        Command::PeCheck { subset, module } => {
            let ctx = context(spec, &a, subset)?;
            let scope = Scope { spec, a: &a, ctx: Some(&ctx) };
            let r = scope.resolve(module)?;
            left_only(&r)?;
            let p = pe_profile(&r.module, &ctx, cutoff)?;
            let v = pe_verdict(&p, &ctx);
            let text = format!(
                "{} in P_e^∞: {v}\n  terms in add(Ae): {:?}\n  Tor_n^A(Ā, -): {}\n",
                r.name,
                p.terms_in_add,
                list(&p.tor)
            );
            let refuted = v.is_refuted();
            out(json!({"module": r.name, "verdict": v, "profile": p}), text, refuted)
        }
        Command::PdTransfer { subset, module } => {
            let ctx = context(spec, &a, subset)?;
            let scope = Scope { spec, a: &a, ctx: Some(&ctx) };
            let r = scope.resolve(module)?;
            left_only(&r)?;
            let t = pd_transfer_check(&r.module, &ctx, cutoff)?;
            let text = format!(
                "{}: in P_e^∞: {}\n  pd_A = {}\n  pd_B(e·) = {}\n  {}\n",
                r.name, t.membership, t.pd_a, t.pd_b, t.status
            );
            let refuted = t.status.is_hypothesis_refuted() || t.status.is_hard_error();
            out(json!({"module": r.name, "report": t}), text, refuted)
        }
        Command::Bounds {
            subset,
            witnesses: names,
            bounds,
            asserted,
        } => {
            let ctx = context(spec, &a, subset)?;
            let scope = Scope { spec, a: &a, ctx: Some(&ctx) };
            let ws = witnesses(&scope, &ctx, names)?;
            let which: Vec<Bound> = if bounds.is_empty() {
                Bound::ALL.to_vec()
            } else {
                bounds
                    .iter()
                    .map(|&id| Bound::from_id(id).ok_or_else(|| CliError::Usage(format!("unknown bound {id} (expected 1-6)"))))
                    .collect::<Result<_, _>>()?
            };
            let inputs = inputs(&ctx, asserted, cutoff)?;
            let reports = bound_reports(&ctx, &which, &ws, &inputs, cutoff)?;
            let mut text = format!(
                "bounds for E = {{{}}}: {}, {}, {}, {}\n",
                ctx.summary().subset.join(", "),
                cert_text("fdim(B)", &inputs.fdim_b),
                cert_text("fdim(Ā)", &inputs.fdim_abar),
                cert_text("fidim(B)", &inputs.fidim_b),
                cert_text("fidim(Ā)", &inputs.fidim_abar),
            );
            let mut violations = 0;
            for r in &reports {
                violations += r.violations();
                text.push_str(&format!(
                    "\n[{}] {}\n  applicable: {}, rhs: {}, monotone: {}\n",
                    r.bound_id.id(),
                    r.statement,
                    r.applicable,
                    r.rhs.map_or("unknown".to_string(), |x| x.to_string()),
                    r.monotone
                ));
                for h in &r.hypotheses {
                    text.push_str(&format!("  hypothesis {}: {:?} ({})\n", h.name, h.status, h.detail));
                }
                for w in &r.witnesses {
                    text.push_str(&format!("  {:<24} lhs {:<12} {:?}\n", w.module, short(&w.lhs), w.status));
                }
                for n in &r.notes {
                    text.push_str(&format!("  note: {n}\n"));
                }
            }
            text.push_str(&format!("\nviolations: {violations}\n"));
            out(
                json!({"inputs": inputs, "reports": reports, "violations": violations}),
                text,
                violations > 0,
            )
        }
        Command::LemmaCheck {
            subset,
            module,
            n,
            asserted,
        } => {
            let ctx = context(spec, &a, subset)?;
            let scope = Scope { spec, a: &a, ctx: Some(&ctx) };
            let r = scope.resolve(module)?;
            left_only(&r)?;
            let inputs = inputs(&ctx, asserted, cutoff)?;
            let aex = lemma_aex_check(&r.module, &ctx, cutoff)?;
            let syz = lemma_syzygy_trace_check(&r.module, &ctx, *n, cutoff)?;
            let (incl, proj) = canonical_ses(&r.module, &ctx, *n)?;
            let ses = ses_bound_check(&incl, &proj, &ctx, inputs.fdim_b.as_ref(), inputs.fdim_abar.as_ref(), cutoff)?;
            let statuses = [&aex.status, &syz.status, &ses.conclusion1, &ses.conclusion2];
            let refuted = statuses.iter().any(|s| s.is_hypothesis_refuted() || s.is_hard_error());
            let text = format!(
                "{}, E = {{{}}}\n  AeX in P_e^∞: {}\n  AeΩ^{}(X) in P_e^∞: {}\n  \
                 0 -> AeΩ^{m}(X) -> Ω^{m}(X) -> quotient -> 0:\n    pd_Ā(Z) <= pd_A(Y) + 1: {}\n    \
                 pd_A(Y) <= fdim(Ā) + fdim(B) + 1: {}\n",
                r.name,
                ctx.summary().subset.join(", "),
                aex.status,
                n + 1,
                syz.status,
                ses.conclusion1,
                ses.conclusion2,
                m = n + 1,
            );
            out(
                json!({"module": r.name, "n": n, "aex": aex, "syzygy_trace": syz, "ses": ses}),
                text,
                refuted,
            )
        }
        Command::GeneralCheck {
            subset,
            n,
            witnesses: names,
            asserted,
        } => {
            let ctx = context(spec, &a, subset)?;
            let scope = Scope { spec, a: &a, ctx: Some(&ctx) };
            let ws = witnesses(&scope, &ctx, names)?;
            let inputs = inputs(&ctx, asserted, cutoff)?;
            let g = general_hypothesis_check(&ctx, &ws, *n, &inputs, cutoff)?;
            let violated = g.witnesses.iter().filter(|w| w.status == WitnessStatus::Violated).count();
            let mut text = format!(
                "fdim(A) <= {n} + fdim(B) + fdim(Ā) + 2 = {}\n  standing: {}\n  pd_B^op(Ae) = {}, hypothesis for all modules: {}\n",
                g.rhs.map_or("unknown".to_string(), |x| x.to_string()),
                g.standing,
                g.pd_ae,
                g.global_hypothesis
            );
            for w in &g.witnesses {
                text.push_str(&format!("  {:<24} pd {:<12} {:?}\n", w.module, short(&w.pd), w.status));
            }
            out(json!({"report": g, "violations": violated}), text, violated > 0)
        }
        Command::Fdim { method, max_dim } => {
            let cert = match method.as_str() {
                "auto" => auto_certificate(&a, cutoff).ok_or_else(|| {
                    CliError::Core(Error::Precondition(
                        "no automatic certificate: the algebra is not local and some simple has pd beyond the cutoff".into(),
                    ))
                })?,
                "local" => fdim_certificate(&a, FdimRequest::LocalZero, cutoff)?,
                "global" => fdim_certificate(&a, FdimRequest::GlobalDimBound, cutoff)?,
                "search" => fdim_certificate(&a, FdimRequest::ExhaustiveSearch { max_dim: *max_dim }, cutoff)?,
                other => {
                    let value = other
                        .parse()
                        .map_err(|_| CliError::Usage(format!("unknown method `{other}`")))?;
                    fdim_certificate(&a, FdimRequest::UserAsserted { value }, cutoff)?
                }
            };
            let text = format!(
                "fdim = {}{} ({:?})\n",
                cert.value,
                if cert.certified { "" } else { ", not certified" },
                cert.method
            );
            out(json!({"certificate": cert}), text, false)
        }
        Command::StratifiedSearch => {
            let r = stratified_chain_search(&a, cutoff)?;
            let text = match &r.chain {
                Some(c) => format!("standardly stratifying order: {}\n", c.join(", ")),
                None => format!("no standardly stratifying order ({} layers examined)\n", r.layers_checked),
            };
            out(json!({"result": r}), text, false)
        }
        Command::Corpus { .. } => unreachable!("handled before the algebra file is read"),
    }
}

fn info<F: Field>(a: &AlgebraRef<F>) -> Result<CommandOutput, CliError> {
    let labels = a.vertex_labels().to_vec();
    let op = a.opposite_ref();
    let mut projectives = Vec::new();
    let mut text = format!(
        "algebra over {}: {} vert{}, dim {}, {}\nbasis: {}\n",
        F::spec(),
        labels.len(),
        if labels.len() == 1 { "ex" } else { "ices" },
        a.dim(),
        if a.is_local() { "local" } else { "not local" },
        a.labels().join(" ")
    );
    for (v, l) in labels.iter().enumerate() {
        let p = projective(a, v);
        let i = dual(&projective(&op, v));
        let loewy = layers(&loewy_layers(&p), &labels);
        let socle = layers(&socle_layers(&i), &labels);
        text.push_str(&format!(
            "P{l}: dim {}, Loewy layers {}\nI{l}: dim {}, socle layers {}\n",
            p.dim(),
            loewy.join(" | "),
            i.dim(),
            socle.join(" | ")
        ));
        projectives.push(json!({
            "vertex": l, "dim": p.dim(), "dim_vector": p.dim_vector(), "loewy_layers": loewy,
            "injective_dim": i.dim(), "injective_socle_layers": socle,
        }));
    }
    out(
        json!({"field": F::spec().to_string(), "vertices": labels, "dim": a.dim(), "local": a.is_local(),
               "basis": a.labels(), "nilpotency_index": a.nilpotency_index(), "projectives": projectives}),
        text,
        false,
    )
}
