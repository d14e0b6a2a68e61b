//! One function per subcommand. Each returns the rendered output and
//! whether the command succeeded semantically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use aggsem::fixpoints::{kripke_kleene, stable_check, stable_enumerate, well_founded};
use aggsem::oracle::{self, generate, VerificationReport};
use aggsem::ternary::{
    check_well_behaved, compare_precision, formulas_of, is_convex, Formula, PrecisionOrder,
    WellBehavedViolation, MAX_ANALYSIS_ATOMS,
};
use aggsem::{Error, Program, Result, SatisfactionRelation, SemanticsId, Universe};
use serde_json::{json, Value};

use crate::output::{atoms, models_doc, pair_doc, show_models, show_pair, Document};

pub struct Context {
    pub command: &'static str,
    pub rels: Vec<Arc<dyn SatisfactionRelation>>,
    pub max_atoms: usize,
    pub json: bool,
}

impl Context {
    fn single(&self) -> bool {
        self.rels.len() == 1
    }

    fn document(&self) -> Document {
        Document {
            command: self.command.to_string(),
            semantics: self.rels.iter().map(|r| r.name().to_string()).collect(),
            ..Document::default()
        }
    }

    fn ids(&self) -> Vec<SemanticsId> {
        self.rels.iter().map(|r| r.id()).collect()
    }
}

pub struct Outcome {
    pub text: String,
    pub success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            success: true,
        }
    }
}

pub fn parse(ctx: &Context, program: &Program) -> Outcome {
    if ctx.json {
        let mut doc = ctx.document();
        doc.semantics.clear();
        let rules: Vec<String> = program
            .rules
            .iter()
            .map(|r| program.universe.display(r).to_string())
            .collect();
        doc.report = Some(json!({
            "atoms": program.universe.names().collect::<Vec<_>>(),
            "rules": rules,
        }));
        Outcome::ok(doc.render())
    } else {
        Outcome::ok(program.to_string())
    }
}

pub fn models(ctx: &Context, program: &Program) -> Result<Outcome> {
    let u = &program.universe;
    let mut all = Vec::new();
    for rel in &ctx.rels {
        all.push((rel.name(), stable_enumerate(rel.as_ref(), program, ctx.max_atoms)?));
    }
    if ctx.json {
        let mut doc = ctx.document();
        if ctx.single() {
            doc.models = Some(models_doc(u, &all[0].1));
        } else {
            let map: BTreeMap<&str, Vec<Vec<String>>> =
                all.iter().map(|(n, m)| (*n, models_doc(u, m))).collect();
            doc.report = Some(json!({ "stable_models": map }));
        }
        return Ok(Outcome::ok(doc.render()));
    }
    let mut text = String::new();
    if ctx.single() {
        if all[0].1.is_empty() {
            text.push_str("no stable models\n");
        }
        for m in &all[0].1 {
            writeln!(text, "{}", u.format(m)).unwrap();
        }
    } else {
        for (name, models) in &all {
            writeln!(text, "{name}: {}", show_models(u, models)).unwrap();
        }
    }
    Ok(Outcome::ok(text))
}

pub fn check(ctx: &Context, program: &Program, model: &str) -> Result<Outcome> {
    let u = &program.universe;
    let y = u.parse_interpretation(model)?;
    let mut verdicts = Vec::new();
    for rel in &ctx.rels {
        verdicts.push((rel.name(), stable_check(rel.as_ref(), program, &y)?));
    }
    let success = verdicts.iter().all(|(_, v)| *v);
    let text = if ctx.json {
        let mut doc = ctx.document();
        let map: BTreeMap<&str, bool> = verdicts.iter().copied().collect();
        doc.report = Some(json!({ "model": atoms(u, &y), "stable": map }));
        doc.render()
    } else {
        let word = |v: bool| if v { "stable" } else { "not stable" };
        let mut text = String::new();
        for (name, v) in &verdicts {
            if ctx.single() {
                writeln!(text, "{}", word(*v)).unwrap();
            } else {
                writeln!(text, "{name}: {}", word(*v)).unwrap();
            }
        }
        text
    };
    Ok(Outcome { text, success })
}

pub fn fixpoint(ctx: &Context, program: &Program, wf: bool) -> Result<Outcome> {
    let u = &program.universe;
    let mut results = Vec::new();
    for rel in &ctx.rels {
        let (pair, iterations) = if wf {
            let r = well_founded(rel.as_ref(), program)?;
            (r.pair, Some(r.iterations))
        } else {
            (kripke_kleene(rel.as_ref(), program)?, None)
        };
        results.push((rel.name(), pair, iterations));
    }
    if ctx.json {
        let mut doc = ctx.document();
        if ctx.single() {
            let p = pair_doc(u, &results[0].1);
            if wf {
                doc.wf = Some(p);
                doc.report = Some(json!({ "iterations": results[0].2 }));
            } else {
                doc.kk = Some(p);
            }
        } else {
            let map: BTreeMap<&str, Value> = results
                .iter()
                .map(|(n, p, it)| {
                    let d = pair_doc(u, p);
                    let mut v = json!({ "lower": d.lower, "upper": d.upper });
                    if let Some(it) = it {
                        v["iterations"] = json!(it);
                    }
                    (*n, v)
                })
                .collect();
            doc.report = Some(json!(map));
        }
        return Ok(Outcome::ok(doc.render()));
    }
    let mut text = String::new();
    for (name, pair, iterations) in &results {
        let prefix = if ctx.single() { String::new() } else { format!("{name} ") };
        writeln!(text, "{prefix}lower: {}", u.format(&pair.lower)).unwrap();
        writeln!(text, "{prefix}upper: {}", u.format(&pair.upper)).unwrap();
        if let Some(it) = iterations {
            writeln!(text, "{prefix}iterations: {it}").unwrap();
        }
    }
    Ok(Outcome::ok(text))
}

fn order_word(order: PrecisionOrder) -> &'static str {
    match order {
        PrecisionOrder::Equal => "=p",
        PrecisionOrder::LessPrecise => "<=p",
        PrecisionOrder::MorePrecise => ">=p",
        PrecisionOrder::Incomparable => "incomparable",
    }
}

/// Pairwise precision among the selected relations, or why it was skipped.
fn precision_table(
    ctx: &Context,
    program: &Program,
    formulas: &[Formula],
) -> std::result::Result<Vec<(String, String, String)>, String> {
    let limit = ctx.max_atoms.min(MAX_ANALYSIS_ATOMS);
    if program.width() > limit {
        return Err(format!("universe larger than {limit} atoms"));
    }
    let mut rows = Vec::new();
    for (i, a) in ctx.rels.iter().enumerate() {
        for b in &ctx.rels[i + 1..] {
            let word = match compare_precision(a.as_ref(), b.as_ref(), formulas, program.width(), limit) {
                Ok(r) => order_word(r.order).to_string(),
                Err(e) => format!("skipped ({e})"),
            };
            rows.push((a.name().to_string(), b.name().to_string(), word));
        }
    }
    Ok(rows)
}

fn precision_json(rows: &std::result::Result<Vec<(String, String, String)>, String>) -> Value {
    match rows {
        Ok(rows) => json!(rows
            .iter()
            .map(|(a, b, o)| json!({ "a": a, "b": b, "order": o }))
            .collect::<Vec<_>>()),
        Err(reason) => json!({ "skipped": reason }),
    }
}

fn precision_text(text: &mut String, rows: &std::result::Result<Vec<(String, String, String)>, String>) {
    match rows {
        Ok(rows) => {
            for (a, b, o) in rows {
                writeln!(text, "precision: {a} {o} {b}").unwrap();
            }
        }
        Err(reason) => writeln!(text, "precision: skipped, {reason}").unwrap(),
    }
}

pub fn compare(ctx: &Context, program: &Program) -> Result<Outcome> {
    let u = &program.universe;
    let mut all = Vec::new();
    for rel in &ctx.rels {
        all.push((rel.name(), stable_enumerate(rel.as_ref(), program, ctx.max_atoms)?));
    }
    let rows = precision_table(ctx, program, &formulas_of(program));
    if ctx.json {
        let mut doc = ctx.document();
        let map: BTreeMap<&str, Vec<Vec<String>>> =
            all.iter().map(|(n, m)| (*n, models_doc(u, m))).collect();
        doc.report = Some(json!({ "stable_models": map, "precision": precision_json(&rows) }));
        return Ok(Outcome::ok(doc.render()));
    }
    let width = all.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max("semantics".len());
    let mut text = format!("{:<width$}  models\n", "semantics");
    for (name, models) in &all {
        writeln!(text, "{name:<width$}  {}", show_models(u, models)).unwrap();
    }
    precision_text(&mut text, &rows);
    Ok(Outcome::ok(text))
}

fn show_formula(u: &Universe, f: &Formula) -> String {
    f.iter()
        .map(|body| {
            if body.is_empty() {
                "true".to_string()
            } else {
                u.display(&body[..]).to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

fn show_violation(u: &Universe, formulas: &[Formula], v: &WellBehavedViolation) -> String {
    let f = show_formula(u, &formulas[v.formula()]);
    match v {
        WellBehavedViolation::NotExtending {
            interpretation,
            three_valued,
            two_valued,
            ..
        } => format!(
            "exact pair at {} gives {three_valued}, two-valued gives {two_valued}, on {f}",
            u.format(interpretation)
        ),
        WellBehavedViolation::NotMonotone { less, more, .. } => format!(
            "{} <=p {} loses satisfaction of {f}",
            show_pair(u, less),
            show_pair(u, more)
        ),
    }
}

pub fn analyze(ctx: &Context, program: &Program) -> Result<Outcome> {
    let u = &program.universe;
    let mut convexity = Vec::new();
    let mut seen = Vec::new();
    for agg in program.aggregates() {
        if !seen.contains(&agg) {
            seen.push(agg);
            convexity.push((u.display(agg).to_string(), is_convex(agg)?));
        }
    }
    let formulas = formulas_of(program);
    let limit = ctx.max_atoms.min(MAX_ANALYSIS_ATOMS);
    let mut behaved = Vec::new();
    for rel in &ctx.rels {
        let claimed = rel.capabilities().well_behaved;
        let result = match check_well_behaved(rel.as_ref(), &formulas, program.width(), limit) {
            Ok(r) => Ok((r.holds, r.violation.map(|v| show_violation(u, &formulas, &v)))),
            Err(e @ (Error::Unsupported { .. } | Error::TooLarge { .. })) => Err(e.to_string()),
            Err(e) => return Err(e),
        };
        behaved.push((rel.name(), claimed, result));
    }
    let rows = precision_table(ctx, program, &formulas);

    if ctx.json {
        let mut doc = ctx.document();
        let conv: Vec<Value> = convexity
            .iter()
            .map(|(a, c)| json!({ "aggregate": a, "convex": c }))
            .collect();
        let wb: BTreeMap<&str, Value> = behaved
            .iter()
            .map(|(name, claimed, r)| {
                let v = match r {
                    Ok((holds, cx)) => json!({ "claimed": claimed, "holds": holds, "counterexample": cx }),
                    Err(reason) => json!({ "claimed": claimed, "skipped": reason }),
                };
                (*name, v)
            })
            .collect();
        doc.report = Some(json!({
            "convexity": conv,
            "well_behaved": wb,
            "precision": precision_json(&rows),
        }));
        return Ok(Outcome::ok(doc.render()));
    }
    let mut text = String::new();
    for (agg, convex) in &convexity {
        writeln!(text, "{agg}: {}", if *convex { "convex" } else { "non-convex" }).unwrap();
    }
    for (name, claimed, r) in &behaved {
        let claim = if *claimed { "claimed well-behaved" } else { "not claimed well-behaved" };
        match r {
            Ok((true, _)) => writeln!(text, "{name}: well-behaved ({claim})").unwrap(),
            Ok((false, cx)) => writeln!(
                text,
                "{name}: not well-behaved ({claim}): {}",
                cx.as_deref().unwrap_or("")
            )
            .unwrap(),
            Err(reason) => writeln!(text, "{name}: skipped ({claim}): {reason}").unwrap(),
        }
    }
    precision_text(&mut text, &rows);
    Ok(Outcome::ok(text))
}

fn report_json(u: &Universe, r: &VerificationReport) -> Value {
    let models: BTreeMap<&str, Vec<Vec<String>>> = r
        .stable_models
        .iter()
        .map(|(id, m)| (id.name(), models_doc(u, m)))
        .collect();
    json!({
        "checked": r.checked,
        "mismatches": r.mismatches.iter().map(|m| json!({
            "input": m.input, "main": m.main, "oracle": m.oracle,
        })).collect::<Vec<_>>(),
        "skipped": r.skipped,
        "stable_models": models,
    })
}

pub fn verify(ctx: &Context, program: &Program) -> Result<Outcome> {
    let u = &program.universe;
    let r = oracle::verify_program_with_limit(program, &ctx.ids(), ctx.max_atoms)?;
    let text = if ctx.json {
        let mut doc = ctx.document();
        doc.report = Some(report_json(u, &r));
        doc.render()
    } else {
        let mut text = format!("checked {}, mismatches {}\n", r.checked, r.mismatches.len());
        for m in &r.mismatches {
            writeln!(text, "mismatch: {m}").unwrap();
        }
        for s in &r.skipped {
            writeln!(text, "skipped: {s}").unwrap();
        }
        for (id, models) in &r.stable_models {
            writeln!(text, "{id}: {}", show_models(u, models)).unwrap();
        }
        text
    };
    Ok(Outcome {
        text,
        success: r.passed(),
    })
}

/// Verifies `count` programs generated from `seed`.
pub fn verify_generated(ctx: &Context, seed: u64, count: usize) -> Result<Outcome> {
    let cfg = generate::GeneratorConfig::default();
    let mut rng = generate::rng(seed);
    let (mut checked, mut mismatches) = (0, Vec::new());
    for k in 0..count {
        let program = generate::random_program(&mut rng, &cfg);
        let r = oracle::verify_program_with_limit(&program, &ctx.ids(), ctx.max_atoms)?;
        checked += r.checked;
        for m in r.mismatches {
            let source = program.to_string().replace('\n', " ");
            mismatches.push((k, source.trim().to_string(), m));
        }
    }
    let text = if ctx.json {
        let mut doc = ctx.document();
        doc.report = Some(json!({
            "seed": seed,
            "programs": count,
            "checked": checked,
            "mismatches": mismatches.iter().map(|(k, src, m)| json!({
                "program": k, "source": src, "input": m.input, "main": m.main, "oracle": m.oracle,
            })).collect::<Vec<_>>(),
        }));
        doc.render()
    } else {
        let mut text = format!(
            "seed {seed}: {count} programs, checked {checked}, mismatches {}\n",
            mismatches.len()
        );
        for (k, src, m) in &mismatches {
            writeln!(text, "mismatch in program {k} [{src}]: {m}").unwrap();
        }
        text
    };
    Ok(Outcome {
        text,
        success: mismatches.is_empty(),
    })
}
