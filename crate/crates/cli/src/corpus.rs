//! Seeded random monomial algebras run through the cross-check suite.
//!
//! Case `i` of `corpus --seed S` uses the generator seed `S + i`, so a failing
//! case is replayed alone by `corpus --seed S+i --count 1`, and its rendered
//! algebra file is part of the report.

use std::sync::Arc;

use fdim_core::algebra::{Algebra, AlgebraRef, Arrow, MonomialPresentation, Quiver};
use fdim_core::homology::{inj_dim, minimal_resolution, proj_dim, tor_dims, Resolution};
use fdim_core::ideals::{build_context, pe_profile, IdealContext};
use fdim_core::modules::{dual, loewy_layers, projective, radical_columns, simple, socle_layers, submodule, syzygy, Module};
use fdim_core::theorems::{
    base_battery, bound_reports, lemma_aex_check, lemma_syzygy_trace_check, pd_transfer_check, standard_battery,
    Bound, BoundInputs, ImplicationStatus,
};
use fdim_core::{Error, Field, FieldSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::specfile::{render_spec, spec_of_presentation};
use crate::{with_field, CliError, CommandOutput};

pub const CORPUS_CUTOFF: usize = 8;
/// Tor balance is compared in degrees `0..=TOR_DEGREE`.
pub const TOR_DEGREE: usize = 6;
pub const MAX_VERTICES: usize = 4;
pub const MAX_ARROWS: usize = 6;
pub const MAX_RELATIONS: usize = 4;
pub const MAX_RELATION_LEN: usize = 4;
pub const MAX_DIM: usize = 30;
/// Growth budget: syzygies of the simples and injectives over `A` and
/// `A^op`, and of the simples of every corner `e_v A e_v` (both sides), stay
/// within `MAX_SYZYGY_DIM` through degree `GROWTH_DEGREE`. Rules out exponential Betti growth, which dense module
/// storage cannot follow to the cutoff.
pub const MAX_SYZYGY_DIM: usize = 128;
pub const GROWTH_DEGREE: usize = 11;
const ATTEMPTS: usize = 256;

/// Random admissible monomial presentation within the size budget. Over
/// `field` when given, otherwise F2 or F3 at random.
pub fn random_presentation(seed: u64, field: Option<FieldSpec>) -> MonomialPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = field.unwrap_or_else(|| {
        if rng.gen_bool(0.5) {
            FieldSpec::PrimeField(2)
        } else {
            FieldSpec::PrimeField(3)
        }
    });
    let mut nv = 1;
    for _ in 0..ATTEMPTS {
        nv = rng.gen_range(1..=MAX_VERTICES);
        let na = rng.gen_range(1..=MAX_ARROWS);
        let vertices: Vec<String> = (1..=nv).map(|v| v.to_string()).collect();
        let arrows: Vec<Arrow> = (0..na)
            .map(|i| Arrow {
                label: ((b'a' + i as u8) as char).to_string(),
                source: rng.gen_range(0..nv),
                target: rng.gen_range(0..nv),
            })
            .collect();
        let mut relations: Vec<Vec<usize>> = Vec::new();
        if na > 0 {
            for _ in 0..rng.gen_range(0..=MAX_RELATIONS) {
                if let Some(w) = random_word(&mut rng, &arrows) {
                    relations.push(w);
                }
            }
        }
        let Ok(quiver) = Quiver::new(vertices, arrows.clone()) else { continue };
        // a relation-free cycle gets more relations while the budget allows
        loop {
            relations = reduce(relations);
            let Ok(p) = MonomialPresentation::new(quiver.clone(), relations.clone(), field) else { break };
            match p.path_basis() {
                Ok(paths) if paths.len() <= MAX_DIM => {
                    let tame: Result<bool, Error> = with_field!(field, within_growth_budget(&p));
                    if tame.unwrap_or(false) {
                        return p;
                    }
                    break;
                }
                Ok(_) => break,
                Err(_) if relations.len() < MAX_RELATIONS => {
                    if let Some(w) = random_word(&mut rng, &arrows) {
                        relations.push(w);
                    }
                }
                Err(_) => break,
            }
        }
    }
    let quiver = Quiver::new((1..=nv).map(|v| v.to_string()).collect(), Vec::new()).expect("arrowless quiver");
    MonomialPresentation::new(quiver, Vec::new(), field).expect("arrowless presentation")
}

fn within_growth_budget<F: Field>(p: &MonomialPresentation) -> Result<bool, Error> {
    let a: AlgebraRef<F> = Arc::new(Algebra::from_monomial(p)?);
    let op = a.opposite_ref();
    let mut modules: Vec<Module<F>> = Vec::new();
    for v in 0..a.num_vertices() {
        modules.push(simple(&a, v));
        modules.push(simple(&op, v));
        modules.push(dual(&projective(&op, v)));
        modules.push(dual(&projective(&a, v)));
        let ctx = build_context(&a, &[v])?;
        modules.push(simple(&ctx.b, 0));
        modules.push(simple(&ctx.b_op, 0));
    }
    for mut m in modules {
        for _ in 0..GROWTH_DEGREE {
            m = syzygy(&m);
            if m.dim() > MAX_SYZYGY_DIM {
                return Ok(false);
            }
            if m.is_zero() {
                break;
            }
        }
    }
    Ok(true)
}

/// A composable arrow word of length `2..=MAX_RELATION_LEN`, following
/// random outgoing arrows; `None` when the walk dead-ends early.
fn random_word(rng: &mut ChaCha8Rng, arrows: &[Arrow]) -> Option<Vec<usize>> {
    let len = rng.gen_range(2..=MAX_RELATION_LEN);
    let mut word = vec![rng.gen_range(0..arrows.len())];
    while word.len() < len {
        let end = arrows[*word.last().unwrap()].target;
        let next: Vec<usize> = (0..arrows.len()).filter(|&b| arrows[b].source == end).collect();
        word.push(*next.choose(rng)?);
    }
    Some(word)
}

/// Drops duplicates and relations containing a shorter one.
fn reduce(mut rels: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    rels.sort_by_key(Vec::len);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for r in rels {
        if !out.iter().any(|s| r.windows(s.len()).any(|w| w == s.as_slice())) {
            out.push(r);
        }
    }
    out
}

/// Tallies of one case or of a whole run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tallies {
    /// Modules whose P_e^k membership was decided by both routes.
    pub route_modules: usize,
    pub route_degrees: usize,
    pub route_disagreements: usize,
    pub tor_pairs: usize,
    pub tor_mismatches: usize,
    pub resolutions_verified: usize,
    pub resolution_steps: usize,
    pub resolution_failures: usize,
    pub lemma_checks: usize,
    pub lemma_verified: usize,
    pub lemma_hypothesis_refuted: usize,
    pub lemma_unknown_inputs: usize,
    pub lemma_hard_errors: usize,
    pub transfer_checks: usize,
    pub transfer_hard_errors: usize,
    pub bound_reports: usize,
    pub bound_witness_lines: usize,
    pub bound_violations: usize,
    pub bound_nonmonotone: usize,
    pub socle_checks: usize,
    pub socle_mismatches: usize,
    pub duality_checks: usize,
    pub duality_mismatches: usize,
    pub errors: usize,
}

impl Tallies {
    fn add(&mut self, o: &Tallies) {
        macro_rules! sum {
            ($($f:ident),*) => { $(self.$f += o.$f;)* };
        }
        sum!(
            route_modules, route_degrees, route_disagreements, tor_pairs, tor_mismatches, resolutions_verified,
            resolution_steps, resolution_failures, lemma_checks, lemma_verified, lemma_hypothesis_refuted,
            lemma_unknown_inputs, lemma_hard_errors, transfer_checks, transfer_hard_errors, bound_reports,
            bound_witness_lines, bound_violations, bound_nonmonotone, socle_checks, socle_mismatches,
            duality_checks, duality_mismatches, errors
        );
    }

    /// Number of invariant failures.
    pub fn failures(&self) -> usize {
        self.route_disagreements
            + self.tor_mismatches
            + self.resolution_failures
            + self.lemma_hard_errors
            + self.transfer_hard_errors
            + self.bound_violations
            + self.bound_nonmonotone
            + self.socle_mismatches
            + self.duality_mismatches
            + self.errors
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub index: usize,
    pub seed: u64,
    pub field: String,
    pub dim: usize,
    pub vertices: usize,
    pub arrows: usize,
    pub relations: usize,
    /// The algebra as an algebra file, for replay.
    pub spec: String,
    pub tallies: Tallies,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub seed: u64,
    pub count: usize,
    pub cutoff: usize,
    pub totals: Tallies,
    pub failed_cases: Vec<usize>,
    pub cases: Vec<CaseReport>,
}

pub fn run_corpus(seed: u64, count: usize, field: Option<FieldSpec>, cutoff: usize) -> Result<CorpusReport, CliError> {
    if let Some(f) = field {
        if !f.is_finite() {
            return Err(CliError::Usage("the corpus needs a finite field".into()));
        }
    }
    let cases: Vec<CaseReport> = (0..count)
        .into_par_iter()
        .map(|i| run_case(i, seed.wrapping_add(i as u64), field, cutoff))
        .collect::<Result<_, _>>()?;
    let mut totals = Tallies::default();
    for c in &cases {
        totals.add(&c.tallies);
    }
    let failed_cases = cases.iter().filter(|c| !c.failures.is_empty()).map(|c| c.index).collect();
    Ok(CorpusReport {
        seed,
        count,
        cutoff,
        totals,
        failed_cases,
        cases,
    })
}

pub fn corpus_command(seed: u64, count: usize, field: Option<FieldSpec>, cutoff: usize) -> Result<CommandOutput, CliError> {
    let r = run_corpus(seed, count, field, cutoff)?;
    let mut text = String::new();
    for c in &r.cases {
        text.push_str(&format!(
            "case {:>3} seed {:<6} {:<3} dim {:>2}, {} vertices, {} arrows, {} relations: {}\n",
            c.index,
            c.seed,
            c.field,
            c.dim,
            c.vertices,
            c.arrows,
            c.relations,
            if c.failures.is_empty() { "ok".to_string() } else { format!("{} FAILURES", c.failures.len()) }
        ));
        for f in &c.failures {
            text.push_str(&format!("    {f}\n"));
        }
        if !c.failures.is_empty() {
            text.push_str(&format!("    replay with this algebra file:\n{}\n", indent(&c.spec)));
        }
    }
    let t = &r.totals;
    text.push_str(&format!(
        "\nroute agreement: {} modules, {} degrees, {} disagreements\n\
         Tor balance: {} pairs, {} mismatches\n\
         resolutions: {} verified ({} steps), {} failures\n\
         lemmas: {} checks, {} verified, {} hypothesis refuted, {} unknown inputs, {} hard errors\n\
         pd transfer: {} checks, {} hard errors\n\
         bounds: {} reports, {} witness lines, {} violations, {} non-monotone\n\
         socle/Loewy duality: {} checks, {} mismatches\n\
         injective/projective duality: {} checks, {} mismatches\n\
         errors: {}\n\
         failed cases: {}\n",
        t.route_modules,
        t.route_degrees,
        t.route_disagreements,
        t.tor_pairs,
        t.tor_mismatches,
        t.resolutions_verified,
        t.resolution_steps,
        t.resolution_failures,
        t.lemma_checks,
        t.lemma_verified,
        t.lemma_hypothesis_refuted,
        t.lemma_unknown_inputs,
        t.lemma_hard_errors,
        t.transfer_checks,
        t.transfer_hard_errors,
        t.bound_reports,
        t.bound_witness_lines,
        t.bound_violations,
        t.bound_nonmonotone,
        t.socle_checks,
        t.socle_mismatches,
        t.duality_checks,
        t.duality_mismatches,
        t.errors,
        r.failed_cases.len()
    ));
    let refuted = !r.failed_cases.is_empty();
    Ok(CommandOutput {
        result: serde_json::to_value(&r).expect("corpus report serializes"),
        text,
        refuted,
    })
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("      {l}")).collect::<Vec<_>>().join("\n")
}

pub fn run_case(index: usize, seed: u64, field: Option<FieldSpec>, cutoff: usize) -> Result<CaseReport, CliError> {
    let p = random_presentation(seed, field);
    let spec = render_spec(&spec_of_presentation(&p));
    let (tallies, failures, dim) = with_field!(p.field, check_case(&p, cutoff))?;
    Ok(CaseReport {
        index,
        seed,
        field: p.field.to_string(),
        dim,
        vertices: p.quiver.vertices().len(),
        arrows: p.quiver.arrows().len(),
        relations: p.relations.len(),
        spec,
        tallies,
        failures,
    })
}

struct Checker {
    t: Tallies,
    failures: Vec<String>,
}

impl Checker {
    fn error(&mut self, what: &str, e: Error) {
        self.t.errors += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    fn verify<F: Field>(&mut self, what: &str, r: &Resolution<F>) {
        match r.verify() {
            Ok(()) => {
                self.t.resolutions_verified += 1;
                self.t.resolution_steps += r.steps.len();
            }
            Err(e) => {
                self.t.resolution_failures += 1;
                self.failures.push(format!("resolution of {what}: {e}"));
            }
        }
    }
}

fn radical_of<F: Field>(p: &Module<F>) -> Module<F> {
    submodule(p, &radical_columns(p)).expect("radical is a submodule").0
}

/// Proper nonempty vertex subsets, as sorted index lists.
fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    (1..(1u32 << n) - 1)
        .map(|mask| (0..n).filter(|&v| mask & (1 << v) != 0).collect())
        .collect()
}

fn check_case<F: Field>(p: &MonomialPresentation, cutoff: usize) -> Result<(Tallies, Vec<String>, usize), CliError> {
    let a: AlgebraRef<F> = Arc::new(Algebra::from_monomial(p)?);
    let op = a.opposite_ref();
    let labels = a.vertex_labels().to_vec();
    let nv = a.num_vertices();
    let mut c = Checker {
        t: Tallies::default(),
        failures: Vec::new(),
    };

    let simples: Vec<Module<F>> = (0..nv).map(|v| simple(&a, v)).collect();
    let radicals: Vec<(usize, Module<F>)> = (0..nv)
        .map(|v| (v, radical_of(&projective(&a, v))))
        .filter(|(_, m)| !m.is_zero())
        .collect();

    // P_e^k route agreement: resolution terms in add(Ae) against Tor(Ā, -)
    for subset in proper_subsets(nv) {
        let ctx = match build_context(&a, &subset) {
            Ok(ctx) => ctx,
            Err(e) => {
                c.error("context", e);
                continue;
            }
        };
        let mut modules: Vec<(String, &Module<F>)> = Vec::new();
        for (v, s) in simples.iter().enumerate() {
            modules.push((format!("S{}", labels[v]), s));
        }
        for (v, r) in &radicals {
            modules.push((format!("radP{}", labels[*v]), r));
        }
        modules.push(("AeA".into(), &ctx.aea_left));
        for (name, m) in modules {
            c.verify(&name, &minimal_resolution(m, cutoff));
            match pe_profile(m, &ctx, cutoff) {
                Ok(prof) => {
                    c.t.route_modules += 1;
                    c.t.route_degrees += prof.tor.len();
                }
                Err(Error::Inconsistent(msg)) => {
                    c.t.route_disagreements += 1;
                    c.failures.push(format!("route disagreement for {name}, E = {subset:?}: {msg}"));
                }
                Err(e) => c.error(&format!("P_e profile of {name}"), e),
            }
        }
    }

    // Tor balance: resolve the left argument or the right one
    let tor_cutoff = TOR_DEGREE + 1;
    let left_res: Vec<Resolution<F>> = simples.iter().map(|s| minimal_resolution(s, tor_cutoff)).collect();
    let mut rights: Vec<(String, Module<F>)> = (0..nv).map(|v| (format!("S{}_r", labels[v]), simple(&op, v))).collect();
    rights.extend((0..nv).map(|v| (format!("D(P{})", labels[v]), dual(&projective(&a, v)))));
    let right_res: Vec<Resolution<F>> = rights.iter().map(|(_, x)| minimal_resolution(x, tor_cutoff)).collect();
    for (v, r) in left_res.iter().enumerate() {
        c.verify(&format!("S{}", labels[v]), r);
    }
    for ((name, _), r) in rights.iter().zip(&right_res) {
        c.verify(name, r);
    }
    let padded = |dims: Vec<usize>| -> Vec<usize> { (0..=TOR_DEGREE).map(|k| dims.get(k).copied().unwrap_or(0)).collect() };
    for ((xname, x), xres) in rights.iter().zip(&right_res) {
        for (v, y) in simples.iter().enumerate() {
            let by_left = tor_dims(x, &left_res[v]);
            let by_right = tor_dims(y, xres);
            match (by_left, by_right) {
                (Ok(l), Ok(r)) => {
                    c.t.tor_pairs += 1;
                    let (l, r) = (padded(l), padded(r));
                    if l != r {
                        c.t.tor_mismatches += 1;
                        c.failures.push(format!(
                            "Tor({xname}, S{}): resolving the left module gives {l:?}, the right module {r:?}",
                            labels[v]
                        ));
                    }
                }
                (Err(e), _) | (_, Err(e)) => c.error("Tor balance", e),
            }
        }
    }

    // socle series of D(P_v) against the Loewy series of P_v, and inj_dim against pd of the dual
    for v in 0..nv {
        let pv = projective(&a, v);
        let mut loewy = loewy_layers(&pv);
        loewy.reverse();
        c.t.socle_checks += 1;
        if socle_layers(&dual(&pv)) != loewy {
            c.t.socle_mismatches += 1;
            c.failures.push(format!("socle series of D(P{}) is not the reversed Loewy series", labels[v]));
        }
        c.t.duality_checks += 1;
        let s = &simples[v];
        if inj_dim(s, cutoff) != proj_dim(&dual(s), cutoff) {
            c.t.duality_mismatches += 1;
            c.failures.push(format!("injdim S{} differs from pd D(S{})", labels[v], labels[v]));
        }
    }

    // lemmas, pd transfer and bounds for each single-vertex idempotent
    let battery = base_battery(&a);
    for v in 0..nv {
        let ctx = match build_context(&a, &[v]) {
            Ok(ctx) => ctx,
            Err(e) => {
                c.error("context", e);
                continue;
            }
        };
        let e = format!("E = {{{}}}", labels[v]);
        lemma_checks(&mut c, &ctx, &battery, &e, cutoff);
        let witnesses = standard_battery(&ctx);
        let inputs = BoundInputs::automatic(&ctx, cutoff);
        match bound_reports(&ctx, &Bound::ALL, &witnesses, &inputs, cutoff) {
            Ok(reports) => {
                for r in reports {
                    c.t.bound_reports += 1;
                    c.t.bound_witness_lines += r.witnesses.len();
                    let viol = r.violations();
                    if viol > 0 {
                        c.t.bound_violations += viol;
                        c.failures.push(format!("bound {} violated {viol} times, {e}", r.bound_id.id()));
                    }
                    if !r.monotone {
                        c.t.bound_nonmonotone += 1;
                        c.failures.push(format!("bound {} right side is not monotone, {e}", r.bound_id.id()));
                    }
                }
            }
            Err(err) => c.error(&format!("bounds, {e}"), err),
        }
    }
    Ok((c.t, c.failures, a.dim()))
}

fn lemma_checks<F: Field>(c: &mut Checker, ctx: &IdealContext<F>, battery: &[(String, Module<F>)], e: &str, cutoff: usize) {
    let record = |c: &mut Checker, what: String, status: Result<ImplicationStatus, Error>| match status {
        Ok(s) => {
            c.t.lemma_checks += 1;
            match &s {
                ImplicationStatus::Verified { .. } => c.t.lemma_verified += 1,
                ImplicationStatus::HypothesisRefuted { .. } => c.t.lemma_hypothesis_refuted += 1,
                ImplicationStatus::UnknownInputs { .. } => c.t.lemma_unknown_inputs += 1,
                ImplicationStatus::Contradiction { detail } => {
                    c.t.lemma_hard_errors += 1;
                    c.failures.push(format!("{what}, {e}: {detail}"));
                }
            }
        }
        Err(err) => {
            c.t.lemma_checks += 1;
            c.t.lemma_hard_errors += 1;
            c.failures.push(format!("{what}, {e}: {err}"));
        }
    };
    for (name, m) in battery {
        record(c, format!("AeX lemma on {name}"), lemma_aex_check(m, ctx, cutoff).map(|r| r.status));
        for n in 0..=1 {
            record(
                c,
                format!("syzygy trace lemma on {name}, n = {n}"),
                lemma_syzygy_trace_check(m, ctx, n, cutoff).map(|r| r.status),
            );
        }
        c.t.transfer_checks += 1;
        match pd_transfer_check(m, ctx, cutoff) {
            Ok(r) if r.status.is_hard_error() => {
                c.t.transfer_hard_errors += 1;
                c.failures.push(format!("pd transfer on {name}, {e}: {}", r.status));
            }
            Ok(_) => {}
            Err(err) => {
                c.t.transfer_hard_errors += 1;
                c.failures.push(format!("pd transfer on {name}, {e}: {err}"));
            }
        }
    }
}
