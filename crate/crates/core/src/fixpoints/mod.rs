//! Fixpoint engines over a chosen relation: the approximating operator,
//! least fixpoints, stable models, Kripke-Kleene and well-founded fixpoints.
//!
//! The engine always works on the per-head combined program. For
//! compositional relations the disjunction of bodies behaves exactly like
//! the separate rules; for `ultimate` it is what the relation requires.

mod reducts;

pub use reducts::{flp_reduct, gl_reduct, gz_reduct};

use crate::error::{Error, Result};
use crate::eval2::{is_model, is_supported_model, tp};
use crate::interp::{all_interpretations, enumerate_interval, Interpretation, Pair};
use crate::stats::record_interval_visit;
use crate::syntax::{DisjunctiveBodyProgram, Program};
use crate::ternary::SatisfactionRelation;

/// Default cap on the universe for candidate enumeration.
pub const DEFAULT_MAX_ATOMS: usize = 20;

/// Cap on undefined atoms for the brute-force ultimate operator.
pub const MAX_BRUTEFORCE_ATOMS: usize = 20;

/// One application of the approximating operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproximatorStep {
    pub lower_next: Interpretation,
    pub upper_next: Interpretation,
}

/// Well-founded fixpoint and the number of alternations that changed it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WellFoundedResult {
    pub pair: Pair,
    pub iterations: usize,
}

/// A relation bound to one program.
pub struct Engine<'a> {
    rel: &'a dyn SatisfactionRelation,
    program: &'a Program,
    combined: DisjunctiveBodyProgram,
}

impl<'a> Engine<'a> {
    pub fn new(rel: &'a dyn SatisfactionRelation, program: &'a Program) -> Result<Self> {
        if rel.capabilities().aggregate_free_only && program.has_aggregates() {
            return Err(Error::AggregatesPresent);
        }
        Ok(Engine {
            rel,
            program,
            combined: program.combine_rules_per_head(),
        })
    }

    pub fn width(&self) -> usize {
        self.program.width()
    }

    fn check_width(&self, i: &Interpretation) -> Result<()> {
        if i.width() != self.width() {
            Err(Error::UniverseMismatch(i.width(), self.width()))
        } else {
            Ok(())
        }
    }

    /// `A¹(X, Y) = {h | (X, Y) ⊨³ body(h)}`.
    pub fn lower_operator(&self, pair: &Pair) -> Result<Interpretation> {
        let mut out = Interpretation::empty(self.width());
        for head in &self.combined.heads {
            if self.rel.satisfies_any(&head.bodies, pair)? {
                out.insert(head.head);
            }
        }
        Ok(out)
    }

    /// `A²(X, Y) = {h | (X, Y) ⊨³↑ body(h)}`; needs a truth function.
    pub fn upper_operator(&self, pair: &Pair) -> Result<Interpretation> {
        self.require_truth_function()?;
        let mut out = Interpretation::empty(self.width());
        for head in &self.combined.heads {
            if self.rel.truth_any(&head.bodies, pair)?.is_possible() {
                out.insert(head.head);
            }
        }
        Ok(out)
    }

    pub fn step(&self, pair: &Pair) -> Result<ApproximatorStep> {
        Ok(ApproximatorStep {
            lower_next: self.lower_operator(pair)?,
            upper_next: self.upper_operator(pair)?,
        })
    }

    fn require_truth_function(&self) -> Result<()> {
        if self.rel.capabilities().has_truth_function {
            Ok(())
        } else {
            Err(Error::NoTruthFunction(self.rel.id()))
        }
    }

    /// Least fixpoint of `X ↦ A¹(X, y) ∩ y` from `∅`, with the number of
    /// operator applications.
    pub fn lfp_lower_counted(&self, y: &Interpretation) -> Result<(Interpretation, usize)> {
        if !self.rel.capabilities().monotone_lower_operator {
            return Err(Error::NonMonotone(self.rel.id()));
        }
        self.check_width(y)?;
        let mut x = Interpretation::empty(self.width());
        let mut steps = 0;
        loop {
            steps += 1;
            // Intersecting with y keeps every iterate on the lattice [∅, y].
            let next = self.lower_operator(&Pair { lower: x, upper: *y })?.intersection(y);
            if next == x {
                return Ok((x, steps));
            }
            x = next;
        }
    }

    pub fn lfp_lower(&self, y: &Interpretation) -> Result<Interpretation> {
        Ok(self.lfp_lower_counted(y)?.0)
    }

    pub fn stable_check(&self, y: &Interpretation) -> Result<bool> {
        self.check_width(y)?;
        if self.rel.capabilities().monotone_lower_operator {
            Ok(is_supported_model(self.program, y)? && self.lfp_lower(y)? == *y)
        } else {
            self.minimal_check(y)
        }
    }

    /// `y` is a model and no proper subset `J` is closed under `A¹(·, y)`.
    fn minimal_check(&self, y: &Interpretation) -> Result<bool> {
        if !is_model(self.program, y)? {
            return Ok(false);
        }
        if y.len() > MAX_BRUTEFORCE_ATOMS {
            return Err(Error::TooLarge {
                what: "model size for minimality check",
                size: y.len(),
                limit: MAX_BRUTEFORCE_ATOMS,
            });
        }
        let empty = Interpretation::empty(self.width());
        for j in enumerate_interval(&empty, y, None)? {
            if j == *y {
                continue;
            }
            let derived = self.lower_operator(&Pair { lower: j, upper: *y })?;
            if derived.is_subset(&j) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All stable models, sorted by their sorted atom names.
    pub fn stable_enumerate(&self, max_atoms: usize) -> Result<Vec<Interpretation>> {
        let limit = max_atoms.min(crate::MAX_UNIVERSE - 1);
        if self.width() > limit {
            return Err(Error::TooLarge {
                what: "universe for model enumeration",
                size: self.width(),
                limit,
            });
        }
        let caps = self.rel.capabilities();
        // A well-behaved truth function gives a ≤p-monotone approximator,
        // whose stable fixpoints all lie between the well-founded bounds.
        let candidates = if caps.has_truth_function && caps.well_behaved {
            let wf = self.well_founded()?.pair;
            enumerate_interval(&wf.lower, &wf.upper, None)?
        } else {
            all_interpretations(self.width())
        };
        let mut models = Vec::new();
        for y in candidates {
            if self.stable_check(&y)? {
                models.push(y);
            }
        }
        let universe = &self.program.universe;
        models.sort_by(|a, b| universe.sorted_names(a).cmp(&universe.sorted_names(b)));
        Ok(models)
    }

    pub fn kripke_kleene(&self) -> Result<Pair> {
        self.require_truth_function()?;
        let mut pair = Pair::bottom(self.width());
        loop {
            let step = self.step(&pair)?;
            let next = Pair::consistent(step.lower_next, step.upper_next)?;
            if next == pair {
                return Ok(pair);
            }
            pair = next;
        }
    }

    /// Alternating refinement from `(∅, U)`: the lower bound is the least
    /// fixpoint of `A¹(·, y)`, the upper bound the least fixpoint of
    /// `A²(x, ·)` above `x`.
    pub fn well_founded(&self) -> Result<WellFoundedResult> {
        self.require_truth_function()?;
        let mut pair = Pair::bottom(self.width());
        let mut iterations = 0;
        loop {
            let lower = self.lfp_lower(&pair.upper)?;
            let upper = self.lfp_upper(&pair.lower)?;
            let next = Pair::consistent(lower, upper)?;
            if next == pair {
                return Ok(WellFoundedResult { pair, iterations });
            }
            pair = next;
            iterations += 1;
        }
    }

    fn lfp_upper(&self, x: &Interpretation) -> Result<Interpretation> {
        let mut z = *x;
        loop {
            let next = self.upper_operator(&Pair { lower: *x, upper: z })?.union(x);
            if next == z {
                return Ok(z);
            }
            z = next;
        }
    }
}

/// Least fixpoint of `X ↦ {H(r) | (X, y) ⊨³ B(r)}`.
pub fn lfp_lower(
    rel: &dyn SatisfactionRelation,
    program: &Program,
    y: &Interpretation,
) -> Result<Interpretation> {
    Engine::new(rel, program)?.lfp_lower(y)
}

/// `y` is a supported model and the least fixpoint of the lower operator
/// at `y`; for a non-monotone lower operator, `y` is a model with no proper
/// subset closed under that operator.
pub fn stable_check(rel: &dyn SatisfactionRelation, program: &Program, y: &Interpretation) -> Result<bool> {
    Engine::new(rel, program)?.stable_check(y)
}

/// All stable models by candidate filtering.
pub fn stable_enumerate(
    rel: &dyn SatisfactionRelation,
    program: &Program,
    max_atoms: usize,
) -> Result<Vec<Interpretation>> {
    Engine::new(rel, program)?.stable_enumerate(max_atoms)
}

pub fn kripke_kleene(rel: &dyn SatisfactionRelation, program: &Program) -> Result<Pair> {
    Engine::new(rel, program)?.kripke_kleene()
}

pub fn well_founded(rel: &dyn SatisfactionRelation, program: &Program) -> Result<WellFoundedResult> {
    Engine::new(rel, program)?.well_founded()
}

/// `(⋂ tp(Z), ⋃ tp(Z))` over every `Z ∈ [X, Y]`.
pub fn ultimate_operator_bruteforce(program: &Program, pair: &Pair) -> Result<Pair> {
    pair.ensure_consistent()?;
    let free = pair.undefined_bits().count_ones() as usize;
    if free > MAX_BRUTEFORCE_ATOMS {
        return Err(Error::TooLarge {
            what: "undefined atoms for the ultimate operator",
            size: free,
            limit: MAX_BRUTEFORCE_ATOMS,
        });
    }
    let mut lower = Interpretation::full(program.width());
    let mut upper = Interpretation::empty(program.width());
    for z in enumerate_interval(&pair.lower, &pair.upper, None)? {
        record_interval_visit();
        let out = tp(program, &z)?;
        lower = lower.intersection(&out);
        upper = upper.union(&out);
    }
    Pair::new(lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ternary::SemanticsId;

    const PROGRAM_31: &str = "p :- sum{1:p, 1:q} > 1.  p :- sum{1:q} > 0.  q :- sum{1:p} > 0.";
    const PROGRAM_54: &str = "s :- sum{1:p, -1:q} >= 0.  q :- sum{1:s} > 0.  p :- sum{1:q} > 0.";
    const TAUTOLOGY: &str = "p :- sum{1:p} > 0.  p :- sum{1:p} <= 0.";

    fn prog(text: &str) -> Program {
        text.parse().unwrap()
    }

    fn interp(p: &Program, text: &str) -> Interpretation {
        p.universe.parse_interpretation(text).unwrap()
    }

    fn rel(name: &str) -> &'static dyn SatisfactionRelation {
        name.parse::<SemanticsId>().unwrap().relation()
    }

    fn models(name: &str, p: &Program) -> Vec<String> {
        stable_enumerate(rel(name), p, DEFAULT_MAX_ATOMS)
            .unwrap()
            .iter()
            .map(|m| p.universe.format(m))
            .collect()
    }

    #[test]
    fn lfp_examples() {
        let p = prog(PROGRAM_54);
        let all = interp(&p, "p,q,s");
        assert_eq!(lfp_lower(rel("mr"), &p, &all).unwrap(), all);
        assert!(lfp_lower(rel("ult"), &p, &all).unwrap().is_empty());
        assert_eq!(lfp_lower(rel("flp"), &p, &all), Err(Error::NonMonotone(SemanticsId::Flp)));

        let p = prog("p :- p.  p :- q.  q :- p.");
        assert!(lfp_lower(rel("gl"), &p, &interp(&p, "")).unwrap().is_empty());
    }

    #[test]
    fn stable_check_examples() {
        let p = prog(TAUTOLOGY);
        assert!(stable_check(rel("ultimate"), &p, &interp(&p, "p")).unwrap());
        for name in ["ult", "bnd", "triv"] {
            for y in ["", "p"] {
                assert!(!stable_check(rel(name), &p, &interp(&p, y)).unwrap(), "{name} {y}");
            }
        }
        let p = prog(PROGRAM_54);
        let all = interp(&p, "p,q,s");
        assert!(stable_check(rel("mr"), &p, &all).unwrap());
        assert!(!stable_check(rel("ult"), &p, &all).unwrap());
        assert!(stable_check(rel("flp"), &p, &all).unwrap());
        assert_eq!(stable_check(rel("gl"), &p, &all), Err(Error::AggregatesPresent));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(models("ult", &prog(PROGRAM_31)), vec!["{}"]);
        assert_eq!(models("gl", &prog("p :- p, q.  p :- q.  q :- p.")), vec!["{}"]);
        assert!(models("bnd", &prog(PROGRAM_54)).is_empty());
        assert_eq!(models("gl", &prog("p :- not q.  q :- not p.")), vec!["{p}", "{q}"]);
    }

    #[test]
    fn enumeration_limit() {
        let p = prog("#atoms a, b, c. h.");
        assert!(matches!(
            stable_enumerate(rel("ult"), &p, 3),
            Err(Error::TooLarge { .. })
        ));
    }

    fn show(p: &Program, pair: &Pair) -> (String, String) {
        (p.universe.format(&pair.lower), p.universe.format(&pair.upper))
    }

    #[test]
    fn kripke_kleene_examples() {
        let p = prog("p :- not q.  q :- not p.");
        assert_eq!(show(&p, &kripke_kleene(rel("gl"), &p).unwrap()), ("{}".into(), "{p, q}".into()));
        let p = prog("p.");
        for name in ["gl", "triv", "ult", "bnd"] {
            assert_eq!(show(&p, &kripke_kleene(rel(name), &p).unwrap()), ("{p}".into(), "{p}".into()));
        }
        let p = prog("p :- sum{1:p} > 0.");
        assert_eq!(show(&p, &kripke_kleene(rel("ult"), &p).unwrap()), ("{}".into(), "{p}".into()));
        assert_eq!(kripke_kleene(rel("mr"), &p), Err(Error::NoTruthFunction(SemanticsId::Mr)));
    }

    #[test]
    fn well_founded_examples() {
        let p = prog("p :- p.");
        let wf = well_founded(rel("gl"), &p).unwrap();
        assert_eq!(show(&p, &wf.pair), ("{}".into(), "{}".into()));
        let p = prog("p :- not q.  q :- not p.");
        assert_eq!(show(&p, &well_founded(rel("gl"), &p).unwrap().pair), ("{}".into(), "{p, q}".into()));
        let p = prog("p :- sum{1:p} > 0.");
        assert_eq!(show(&p, &well_founded(rel("ult"), &p).unwrap().pair), ("{}".into(), "{}".into()));
        let p = prog("a.  b :- a, not c.  c :- not a.  d :- not e.  e :- not d.");
        let wf = well_founded(rel("gl"), &p).unwrap();
        assert_eq!(show(&p, &wf.pair), ("{a, b}".into(), "{a, b, d, e}".into()));
        assert!(wf.iterations <= 2 * p.width() + 2);
    }

    #[test]
    fn ultimate_operator_examples() {
        let p = prog(TAUTOLOGY);
        let bottom = Pair::bottom(p.width());
        assert_eq!(show(&p, &ultimate_operator_bruteforce(&p, &bottom).unwrap()), ("{p}".into(), "{p}".into()));
        let p = prog(PROGRAM_31);
        let bottom = Pair::bottom(p.width());
        assert_eq!(show(&p, &ultimate_operator_bruteforce(&p, &bottom).unwrap()), ("{}".into(), "{p, q}".into()));
        for z in all_interpretations(p.width()) {
            let r = ultimate_operator_bruteforce(&p, &Pair::exact(z)).unwrap();
            let t = tp(&p, &z).unwrap();
            assert_eq!((r.lower, r.upper), (t, t));
        }
    }
}
