//! Brute-force reference implementations, kept apart from the main path.
//!
//! Nothing here uses the relation, bound or fixpoint code it checks. Interval
//! oracles enumerate the full interval, including atoms that cannot affect
//! the value. Reduct-based stable checks go through [`minimal_model_check`].

pub mod generate;

use std::fmt;

use crate::bounds::{bnd_truth, exact_bounds, Bounds};
use crate::error::{Error, Result};
use crate::eval2::{aggregate_value, eval_aggregate, eval_multiset, is_model, tp, AggValue};
use crate::fixpoints::{
    flp_reduct, gl_reduct, gz_reduct, ultimate_operator_bruteforce, Engine, DEFAULT_MAX_ATOMS,
};
use crate::interp::{Interpretation, Pair};
use crate::syntax::{AggregateAtom, Program};
use crate::ternary::{SemanticsId, TruthValue};

/// Cap on the interval size (as a power of two) for brute enumeration.
pub const MAX_ORACLE_ATOMS: usize = 20;

/// Universe cap for the per-pair checks of [`verify_program`].
pub const MAX_PAIR_CHECK_ATOMS: usize = 8;

/// Every subset of `free`, each or-ed into `base`.
fn subsets(base: u64, free: u64) -> Result<Vec<u64>> {
    let n = free.count_ones() as usize;
    if n > MAX_ORACLE_ATOMS {
        return Err(Error::TooLarge {
            what: "interval for brute-force oracle",
            size: n,
            limit: MAX_ORACLE_ATOMS,
        });
    }
    let bits: Vec<u64> = (0..64).map(|i| 1u64 << i).filter(|b| free & b != 0).collect();
    Ok((0..1u64 << n)
        .map(|k| {
            bits.iter()
                .enumerate()
                .filter(|(j, _)| k >> j & 1 == 1)
                .fold(base, |acc, (_, b)| acc | b)
        })
        .collect())
}

fn interval(pair: &Pair) -> Result<Vec<Interpretation>> {
    if !pair.lower.is_subset(&pair.upper) {
        return Err(Error::InconsistentPair);
    }
    let width = pair.width();
    let free = pair.upper.bits() & !pair.lower.bits();
    Ok(subsets(pair.lower.bits(), free)?
        .into_iter()
        .map(|b| Interpretation::from_bits(width, b))
        .collect())
}

/// Minimum and maximum value over the whole interval.
pub fn brute_bounds(agg: &AggregateAtom, pair: &Pair) -> Result<Bounds> {
    let mut lb: Option<AggValue> = None;
    let mut ub: Option<AggValue> = None;
    let (mut any_empty, mut all_empty) = (false, true);
    for z in interval(pair)? {
        let weights = eval_multiset(&agg.entries, &z);
        if weights.is_empty() {
            any_empty = true;
        } else {
            all_empty = false;
        }
        let v = aggregate_value(agg.func, &weights)?;
        if let Some(x) = v.value() {
            if lb.and_then(|l| l.value()).is_none_or(|l| x < l) {
                lb = Some(v);
            }
            if ub.and_then(|u| u.value()).is_none_or(|u| x > u) {
                ub = Some(v);
            }
        }
    }
    Ok(Bounds {
        lb: lb.unwrap_or(AggValue::Undefined),
        ub: ub.unwrap_or(AggValue::Undefined),
        empty_possible: any_empty,
        empty_certain: all_empty,
    })
}

/// The aggregate holds in every interpretation of the interval.
pub fn brute_sat_ult(agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
    for z in interval(pair)? {
        if !eval_aggregate(agg, &z)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The aggregate holds in some interpretation of the interval.
pub fn brute_sat_ult_upper(agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
    for z in interval(pair)? {
        if eval_aggregate(agg, &z)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Truth value from the two interval quantifiers.
pub fn brute_truth_ult(agg: &AggregateAtom, pair: &Pair) -> Result<TruthValue> {
    Ok(if brute_sat_ult(agg, pair)? {
        TruthValue::True
    } else if brute_sat_ult_upper(agg, pair)? {
        TruthValue::Unknown
    } else {
        TruthValue::False
    })
}

/// `Y ⊨ agg` and some `Z ⊆ X` satisfies it, over all subsets of `X`.
pub fn brute_sat_mr(agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
    if !pair.lower.is_subset(&pair.upper) {
        return Err(Error::InconsistentPair);
    }
    if !eval_aggregate(agg, &pair.upper)? {
        return Ok(false);
    }
    let bottom = Pair {
        lower: Interpretation::empty(pair.width()),
        upper: pair.lower,
    };
    brute_sat_ult_upper(agg, &bottom)
}

/// `i` is a model of `program` and no proper subset of `i` is.
pub fn minimal_model_check(program: &Program, i: &Interpretation) -> Result<bool> {
    if !is_model(program, i)? {
        return Ok(false);
    }
    let pair = Pair {
        lower: Interpretation::empty(i.width()),
        upper: *i,
    };
    for j in interval(&pair)? {
        if j != *i && is_model(program, &j)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `y` is the least model of the Gelfond-Lifschitz reduct.
pub fn gl_stable_via_reduct(program: &Program, y: &Interpretation) -> Result<bool> {
    minimal_model_check(&gl_reduct(program, y)?, y)
}

/// `y` is the least model of the Gelfond-Zhang reduct.
pub fn gz_stable_via_reduct(program: &Program, y: &Interpretation) -> Result<bool> {
    minimal_model_check(&gz_reduct(program, y)?, y)
}

/// `y` is a minimal model of the FLP reduct.
pub fn flp_stable_via_reduct(program: &Program, y: &Interpretation) -> Result<bool> {
    minimal_model_check(&flp_reduct(program, y)?, y)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub input: String,
    pub main: String,
    pub oracle: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: main {} vs oracle {}", self.input, self.main, self.oracle)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// Stable models per semantics, in enumeration order.
    pub stable_models: Vec<(SemanticsId, Vec<Interpretation>)>,
    /// Checks that could not run, with the reason.
    pub skipped: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn compare<T: PartialEq + fmt::Debug>(&mut self, input: impl FnOnce() -> String, main: T, oracle: T) {
        self.checked += 1;
        if main != oracle {
            self.mismatches.push(Mismatch {
                input: input(),
                main: format!("{main:?}"),
                oracle: format!("{oracle:?}"),
            });
        }
    }
}

/// Cross-checks the main path against the oracles for each semantics.
///
/// Per-pair checks run when the universe has at most
/// [`MAX_PAIR_CHECK_ATOMS`] atoms; stable models are cross-checked on every
/// candidate interpretation.
pub fn verify_program(program: &Program, sems: &[SemanticsId]) -> Result<VerificationReport> {
    verify_program_with_limit(program, sems, DEFAULT_MAX_ATOMS)
}

pub fn verify_program_with_limit(
    program: &Program,
    sems: &[SemanticsId],
    max_atoms: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let width = program.width();
    if width > max_atoms {
        return Err(Error::TooLarge {
            what: "universe for verification",
            size: width,
            limit: max_atoms,
        });
    }
    let pairs: Vec<Pair> = if width <= MAX_PAIR_CHECK_ATOMS {
        all_pairs(width)
    } else {
        report
            .skipped
            .push(format!("per-pair checks: universe has more than {MAX_PAIR_CHECK_ATOMS} atoms"));
        Vec::new()
    };
    let candidates: Vec<Interpretation> = (0..1u64 << width)
        .map(|b| Interpretation::from_bits(width, b))
        .collect();
    let aggs: Vec<&AggregateAtom> = program.aggregates().collect();
    let u = &program.universe;
    let show_pair = |p: &Pair| format!("({}, {})", u.format(&p.lower), u.format(&p.upper));

    for &sem in sems {
        let rel = sem.relation();
        let engine = match Engine::new(rel, program) {
            Ok(e) => e,
            Err(Error::AggregatesPresent) => {
                report.skipped.push(format!("{sem}: program has aggregates"));
                continue;
            }
            Err(e) => return Err(e),
        };

        for agg in &aggs {
            for pair in &pairs {
                let input = || format!("{sem} {} at {}", u.display(*agg), show_pair(pair));
                match sem {
                    SemanticsId::Ult | SemanticsId::Lpst => {
                        let main = rel.satisfies_aggregate(agg, pair)?;
                        report.compare(input, main, brute_sat_ult(agg, pair)?);
                        if sem == SemanticsId::Ult {
                            let input = || format!("ult truth {} at {}", u.display(*agg), show_pair(pair));
                            report.compare(input, rel.aggregate_truth(agg, pair)?, brute_truth_ult(agg, pair)?);
                        }
                    }
                    SemanticsId::Bnd => {
                        let input = || format!("bounds {} at {}", u.display(*agg), show_pair(pair));
                        report.compare(input, exact_bounds(agg, pair)?, brute_bounds(agg, pair)?);
                        let truth = bnd_truth(agg, pair)?;
                        let precise = brute_truth_ult(agg, pair)?;
                        let input = || format!("bnd truth {} at {}", u.display(*agg), show_pair(pair));
                        report.compare(input, true, truth.precision_leq(precise));
                    }
                    SemanticsId::Triv | SemanticsId::Gz => {
                        // Sound: certainty implies truth everywhere in the interval.
                        if rel.satisfies_aggregate(agg, pair)? {
                            report.compare(input, true, brute_sat_ult(agg, pair)?);
                        } else {
                            report.checked += 1;
                        }
                    }
                    SemanticsId::Mr => {
                        let main = rel.satisfies_aggregate(agg, pair)?;
                        report.compare(input, main, brute_sat_mr(agg, pair)?);
                    }
                    SemanticsId::Flp => {
                        let main = rel.satisfies_aggregate(agg, pair)?;
                        let oracle = eval_aggregate(agg, &pair.lower)? && eval_aggregate(agg, &pair.upper)?;
                        report.compare(input, main, oracle);
                    }
                    SemanticsId::Gl | SemanticsId::Ultimate => {}
                }
            }
        }

        if sem == SemanticsId::Ultimate {
            for pair in &pairs {
                let input = || format!("ultimate lower operator at {}", show_pair(pair));
                let main = engine.lower_operator(pair)?;
                report.compare(input, main, ultimate_operator_bruteforce(program, pair)?.lower);
            }
        }

        let models = engine.stable_enumerate(max_atoms)?;
        for y in &candidates {
            let reduct = match sem {
                SemanticsId::Gl => Some(gl_stable_via_reduct(program, y)?),
                SemanticsId::Gz => Some(gz_stable_via_reduct(program, y)?),
                SemanticsId::Flp => Some(flp_stable_via_reduct(program, y)?),
                _ => None,
            };
            if let Some(oracle) = reduct {
                let input = || format!("{sem} stable {}", u.format(y));
                report.compare(input, models.contains(y), oracle);
            }
            // Every stable model is a model.
            if models.contains(y) {
                let input = || format!("{sem} stable model {} is a model", u.format(y));
                report.compare(input, true, tp(program, y)?.is_subset(y));
            }
        }
        report.stable_models.push((sem, models));
    }
    Ok(report)
}

fn all_pairs(width: usize) -> Vec<Pair> {
    let all: Vec<Interpretation> = (0..1u64 << width)
        .map(|b| Interpretation::from_bits(width, b))
        .collect();
    let mut out = Vec::new();
    for upper in &all {
        for lower in &all {
            if lower.is_subset(upper) {
                out.push(Pair {
                    lower: *lower,
                    upper: *upper,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROGRAM_31: &str = "p :- sum{1:p, 1:q} > 1.  p :- sum{1:q} > 0.  q :- sum{1:p} > 0.";
    const PROGRAM_54: &str = "s :- sum{1:p, -1:q} >= 0.  q :- sum{1:s} > 0.  p :- sum{1:q} > 0.";
    const TAUTOLOGY: &str = "p :- sum{1:p} > 0.  p :- sum{1:p} <= 0.";

    fn prog(text: &str) -> Program {
        text.parse().unwrap()
    }

    fn pair(p: &Program, lower: &str, upper: &str) -> Pair {
        Pair::consistent(
            p.universe.parse_interpretation(lower).unwrap(),
            p.universe.parse_interpretation(upper).unwrap(),
        )
        .unwrap()
    }

    fn first_agg(p: &Program) -> AggregateAtom {
        p.aggregates().next().unwrap().clone()
    }

    #[test]
    fn bounds_examples() {
        let p = prog("h :- sum{1:p, -1:q} > 0.");
        let b = brute_bounds(&first_agg(&p), &pair(&p, "", "p,q")).unwrap();
        assert_eq!((b.lb, b.ub), (AggValue::int(-1), AggValue::int(1)));

        let p = prog("#atoms p. h :- sum{} > 0.");
        let b = brute_bounds(&first_agg(&p), &pair(&p, "", "p")).unwrap();
        assert_eq!((b.lb, b.ub), (AggValue::int(0), AggValue::int(0)));
        assert!(b.empty_certain);

        let p = prog("h :- sum{1:p, 1:not p} > 0.");
        let b = brute_bounds(&first_agg(&p), &pair(&p, "", "p")).unwrap();
        assert_eq!((b.lb, b.ub), (AggValue::int(1), AggValue::int(1)));
    }

    #[test]
    fn interval_examples() {
        let p = prog(PROGRAM_54);
        let a = first_agg(&p);
        let wide = pair(&p, "", "p,q,s");
        assert!(!brute_sat_ult(&a, &wide).unwrap());
        assert!(brute_sat_ult_upper(&a, &wide).unwrap());
        let exact = pair(&p, "q", "q");
        assert_eq!(brute_sat_ult(&a, &exact).unwrap(), eval_aggregate(&a, &exact.lower).unwrap());

        let p = prog("h :- card{1:p} >= 1. #atoms q.");
        assert!(brute_sat_ult(&first_agg(&p), &pair(&p, "p", "p,q")).unwrap());
    }

    #[test]
    fn minimal_model_examples() {
        let p = prog("s :- p.  s :- not q.  q :- s.  p :- q.");
        let all = p.universe.parse_interpretation("p,q,s").unwrap();
        assert!(!minimal_model_check(&gl_reduct(&p, &all).unwrap(), &all).unwrap());
        let p = prog("p.");
        assert!(minimal_model_check(&p, &p.universe.full_interpretation()).unwrap());
        let p = Program::default();
        assert!(minimal_model_check(&p, &Interpretation::empty(0)).unwrap());
    }

    fn models(report: &VerificationReport, p: &Program, sem: SemanticsId) -> Vec<String> {
        report
            .stable_models
            .iter()
            .find(|(s, _)| *s == sem)
            .unwrap()
            .1
            .iter()
            .map(|m| p.universe.format(m))
            .collect()
    }

    #[test]
    fn verify_examples() {
        let p = prog(PROGRAM_31);
        let r = verify_program(&p, &SemanticsId::ALL).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(r.skipped.len(), 1);

        let p = prog(PROGRAM_54);
        use SemanticsId::*;
        let r = verify_program(&p, &[Mr, Flp, Ult, Bnd]).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(models(&r, &p, Mr), vec!["{p, q, s}"]);
        assert_eq!(models(&r, &p, Flp), vec!["{p, q, s}"]);
        assert!(models(&r, &p, Ult).is_empty());
        assert!(models(&r, &p, Bnd).is_empty());

        let p = prog(TAUTOLOGY);
        let r = verify_program(&p, &[Ultimate, Ult]).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(models(&r, &p, Ultimate), vec!["{p}"]);
        assert!(models(&r, &p, Ult).is_empty());
    }

    #[test]
    fn verify_gl_on_aggregate_free_program() {
        let p = prog("s :- p.  s :- not q.  q :- s.  p :- q.  r :- not s.");
        let r = verify_program(&p, &[SemanticsId::Gl, SemanticsId::Flp]).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert!(r.checked > 0);
    }
}
