//! Program reducts relative to a two-valued interpretation.

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::eval2::{eval_aggregate, eval_literal, sat2};
use crate::interp::Interpretation;
use crate::syntax::{BodyElement, Program, Rule};

/// Gelfond-Lifschitz reduct: drop rules with a negative literal whose atom
/// is in `i`, then drop the remaining negative literals.
pub fn gl_reduct(program: &Program, i: &Interpretation) -> Result<Program> {
    if program.has_aggregates() {
        return Err(Error::AggregatesPresent);
    }
    let mut rules = Vec::new();
    'rules: for rule in &program.rules {
        let mut body = Vec::new();
        for elem in &rule.body {
            match elem {
                BodyElement::Literal(lit) if lit.negated => {
                    if i.contains(lit.atom) {
                        continue 'rules;
                    }
                }
                other => body.push(other.clone()),
            }
        }
        rules.push(Rule::new(rule.head, body));
    }
    Ok(Program::new(program.universe.clone(), rules))
}

/// Gelfond-Zhang reduct: drop rules with an aggregate false in `i`, replace
/// each remaining aggregate by the conjunction of its conditions true in
/// `i`, then take the Gelfond-Lifschitz reduct.
pub fn gz_reduct(program: &Program, i: &Interpretation) -> Result<Program> {
    let mut rules = Vec::new();
    'rules: for rule in &program.rules {
        let mut body: IndexSet<BodyElement> = IndexSet::new();
        for elem in &rule.body {
            match elem {
                BodyElement::Aggregate(agg) => {
                    if !eval_aggregate(agg, i)? {
                        continue 'rules;
                    }
                    for cond in agg.conditions() {
                        if eval_literal(&cond, i) {
                            body.insert(cond.into());
                        }
                    }
                }
                lit => {
                    body.insert(lit.clone());
                }
            }
        }
        rules.push(Rule::new(rule.head, body.into_iter().collect()));
    }
    gl_reduct(&Program::new(program.universe.clone(), rules), i)
}

/// FLP reduct: the rules whose body holds in `i`.
pub fn flp_reduct(program: &Program, i: &Interpretation) -> Result<Program> {
    let mut rules = Vec::new();
    for rule in &program.rules {
        if sat2(&rule.body, i)? {
            rules.push(rule.clone());
        }
    }
    Ok(Program::new(program.universe.clone(), rules))
}
