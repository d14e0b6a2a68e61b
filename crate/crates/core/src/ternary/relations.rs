use super::{gl_literal, Capabilities, SatisfactionRelation, SemanticsId, TruthValue};
use crate::bounds::bnd_truth;
use crate::error::{Error, Result};
use crate::eval2::{eval_aggregate, eval_literal, sat2};
use crate::interp::{enumerate_interval, Interpretation, Pair};
use crate::stats::record_interval_visit;
use crate::syntax::{AggregateAtom, BodyElement};

/// Cap on the number of varying atoms in an interval enumeration.
pub const MAX_ENUMERATION_ATOMS: usize = 30;

fn check_enumeration(free_bits: u64) -> Result<()> {
    let n = free_bits.count_ones() as usize;
    if n > MAX_ENUMERATION_ATOMS {
        Err(Error::TooLarge {
            what: "undefined atoms in interval",
            size: n,
            limit: MAX_ENUMERATION_ATOMS,
        })
    } else {
        Ok(())
    }
}

/// Truth of an aggregate over every `Z` in the pair's interval: `t` if all
/// satisfy it, `f` if none does, `u` otherwise. Only the undefined
/// condition atoms vary.
pub fn ult_truth(agg: &AggregateAtom, pair: &Pair) -> Result<TruthValue> {
    pair.ensure_consistent()?;
    let mask = agg.condition_mask();
    check_enumeration(pair.undefined_bits() & mask)?;
    let (mut seen_true, mut seen_false) = (false, false);
    for z in enumerate_interval(&pair.lower, &pair.upper, Some(mask))? {
        record_interval_visit();
        if eval_aggregate(agg, &z)? {
            seen_true = true;
        } else {
            seen_false = true;
        }
        if seen_true && seen_false {
            return Ok(TruthValue::Unknown);
        }
    }
    Ok(TruthValue::from_bool(seen_true))
}

/// Aggregate-free Gelfond-Lifschitz relation with Kleene's truth function.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gl;

impl SatisfactionRelation for Gl {
    fn id(&self) -> SemanticsId {
        SemanticsId::Gl
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: true,
            well_behaved: true,
            monotone_lower_operator: true,
            aggregate_free_only: true,
        }
    }

    fn satisfies_aggregate(&self, _agg: &AggregateAtom, _pair: &Pair) -> Result<bool> {
        Err(Error::Unsupported {
            semantics: SemanticsId::Gl,
            what: "aggregate atoms",
        })
    }

    fn aggregate_truth(&self, _agg: &AggregateAtom, _pair: &Pair) -> Result<TruthValue> {
        Err(Error::Unsupported {
            semantics: SemanticsId::Gl,
            what: "aggregate atoms",
        })
    }
}

/// Trivial relation: an aggregate is certain only when all its conditions
/// are already decided by the pair.
#[derive(Debug, Clone, Copy, Default)]
pub struct Triv;

fn conditions_decided(agg: &AggregateAtom, pair: &Pair) -> bool {
    // The sets of conditions true in X and in Y coincide exactly when no
    // condition atom is undefined.
    pair.undefined_bits() & agg.condition_mask() == 0
}

impl SatisfactionRelation for Triv {
    fn id(&self) -> SemanticsId {
        SemanticsId::Triv
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: true,
            well_behaved: true,
            monotone_lower_operator: true,
            aggregate_free_only: false,
        }
    }

    fn satisfies_aggregate(&self, agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
        pair.ensure_consistent()?;
        let true_in_upper = agg
            .conditions()
            .into_iter()
            .filter(|c| eval_literal(c, &pair.upper));
        let true_in_lower = agg
            .conditions()
            .into_iter()
            .filter(|c| eval_literal(c, &pair.lower));
        Ok(eval_aggregate(agg, &pair.upper)? && true_in_upper.eq(true_in_lower))
    }

    fn aggregate_truth(&self, agg: &AggregateAtom, pair: &Pair) -> Result<TruthValue> {
        pair.ensure_consistent()?;
        if conditions_decided(agg, pair) {
            Ok(TruthValue::from_bool(eval_aggregate(agg, &pair.lower)?))
        } else {
            Ok(TruthValue::Unknown)
        }
    }
}

/// Gelfond-Zhang relation: the aggregate holds in `Y` and the conjunction
/// of its `Y`-true conditions holds under the literal rules.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gz;

impl SatisfactionRelation for Gz {
    fn id(&self) -> SemanticsId {
        SemanticsId::Gz
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: false,
            well_behaved: true,
            monotone_lower_operator: true,
            aggregate_free_only: false,
        }
    }

    fn satisfies_aggregate(&self, agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
        pair.ensure_consistent()?;
        if !eval_aggregate(agg, &pair.upper)? {
            return Ok(false);
        }
        Ok(agg
            .entries
            .iter()
            .map(|e| &e.cond)
            .filter(|c| eval_literal(c, &pair.upper))
            .all(|c| gl_literal(c, pair)))
    }
}

/// Ultimate aggregate approximation: certain iff true in every `Z ∈ [X, Y]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ult;

impl SatisfactionRelation for Ult {
    fn id(&self) -> SemanticsId {
        SemanticsId::Ult
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: true,
            well_behaved: true,
            monotone_lower_operator: true,
            aggregate_free_only: false,
        }
    }

    fn satisfies_aggregate(&self, agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
        Ok(ult_truth(agg, pair)? == TruthValue::True)
    }

    fn aggregate_truth(&self, agg: &AggregateAtom, pair: &Pair) -> Result<TruthValue> {
        ult_truth(agg, pair)
    }
}

/// Sub-satisfiability for abstract constraints, applied to aggregates.
/// Same relation as [`Ult`], implemented as a depth-first search for a
/// falsifying interpretation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Lpst;

fn find_falsifier(agg: &AggregateAtom, z: &mut Interpretation, free: &[usize]) -> Result<bool> {
    match free.split_first() {
        None => {
            record_interval_visit();
            Ok(!eval_aggregate(agg, z)?)
        }
        Some((&atom, rest)) => {
            let atom = crate::syntax::Atom(atom);
            z.remove(atom);
            if find_falsifier(agg, z, rest)? {
                return Ok(true);
            }
            z.insert(atom);
            let found = find_falsifier(agg, z, rest)?;
            z.remove(atom);
            Ok(found)
        }
    }
}

impl SatisfactionRelation for Lpst {
    fn id(&self) -> SemanticsId {
        SemanticsId::Lpst
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: false,
            well_behaved: true,
            monotone_lower_operator: true,
            aggregate_free_only: false,
        }
    }

    fn satisfies_aggregate(&self, agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
        pair.ensure_consistent()?;
        let free_bits = pair.undefined_bits() & agg.condition_mask();
        check_enumeration(free_bits)?;
        let free: Vec<usize> = (0..pair.width()).filter(|i| free_bits >> i & 1 == 1).collect();
        let mut z = pair.lower;
        Ok(!find_falsifier(agg, &mut z, &free)?)
    }
}

/// Bound approximation: polynomial bounds for SUM, PROD and CARD.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bnd;

impl SatisfactionRelation for Bnd {
    fn id(&self) -> SemanticsId {
        SemanticsId::Bnd
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: true,
            well_behaved: true,
            monotone_lower_operator: true,
            aggregate_free_only: false,
        }
    }

    fn satisfies_aggregate(&self, agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
        Ok(bnd_truth(agg, pair)? == TruthValue::True)
    }

    fn aggregate_truth(&self, agg: &AggregateAtom, pair: &Pair) -> Result<TruthValue> {
        bnd_truth(agg, pair)
    }
}

/// Set-constraint relation: the aggregate holds in `Y` and in some `Z ⊆ X`.
/// Not ≤p-monotone on non-convex aggregates.
#[derive(Debug, Clone, Copy, Default)]
pub struct Mr;

impl SatisfactionRelation for Mr {
    fn id(&self) -> SemanticsId {
        SemanticsId::Mr
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: false,
            well_behaved: false,
            monotone_lower_operator: true,
            aggregate_free_only: false,
        }
    }

    fn satisfies_aggregate(&self, agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
        pair.ensure_consistent()?;
        if !eval_aggregate(agg, &pair.upper)? {
            return Ok(false);
        }
        // Atoms outside the conditions do not affect the value, so only
        // subsets of X's condition atoms need to be tried.
        let mask = agg.condition_mask();
        check_enumeration(pair.lower.bits() & mask)?;
        let bottom = Interpretation::empty(pair.width());
        for z in enumerate_interval(&bottom, &pair.lower, Some(mask))? {
            record_interval_visit();
            if eval_aggregate(agg, &z)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// FLP relation: the body holds in both `X` and `Y`. Its lower operator is
/// not monotone, so stable checks go through minimal models.
#[derive(Debug, Clone, Copy, Default)]
pub struct Flp;

impl SatisfactionRelation for Flp {
    fn id(&self) -> SemanticsId {
        SemanticsId::Flp
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: false,
            well_behaved: false,
            monotone_lower_operator: false,
            aggregate_free_only: false,
        }
    }

    fn satisfies_aggregate(&self, agg: &AggregateAtom, pair: &Pair) -> Result<bool> {
        pair.ensure_consistent()?;
        Ok(eval_aggregate(agg, &pair.lower)? && eval_aggregate(agg, &pair.upper)?)
    }
}

/// Ultimate relation of the whole program: the disjunction of all bodies of
/// a head must hold in every `Z ∈ [X, Y]`. Not compositional, so it only
/// judges whole bodies.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ultimate;

impl Ultimate {
    fn holds_everywhere<'a>(
        &self,
        bodies: impl Iterator<Item = &'a [BodyElement]> + Clone,
        pair: &Pair,
    ) -> Result<bool> {
        pair.ensure_consistent()?;
        let mask = bodies
            .clone()
            .flat_map(|b| b.iter())
            .fold(0u64, |m, e| m | e.atom_mask());
        check_enumeration(pair.undefined_bits() & mask)?;
        'interval: for z in enumerate_interval(&pair.lower, &pair.upper, Some(mask))? {
            record_interval_visit();
            for body in bodies.clone() {
                if sat2(body, &z)? {
                    continue 'interval;
                }
            }
            return Ok(false);
        }
        Ok(true)
    }
}

impl SatisfactionRelation for Ultimate {
    fn id(&self) -> SemanticsId {
        SemanticsId::Ultimate
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_truth_function: false,
            well_behaved: true,
            monotone_lower_operator: true,
            aggregate_free_only: false,
        }
    }

    fn satisfies_aggregate(&self, _agg: &AggregateAtom, _pair: &Pair) -> Result<bool> {
        Err(Error::Unsupported {
            semantics: SemanticsId::Ultimate,
            what: "individual body elements (it evaluates whole bodies)",
        })
    }

    fn satisfies(&self, _elem: &BodyElement, _pair: &Pair) -> Result<bool> {
        Err(Error::Unsupported {
            semantics: SemanticsId::Ultimate,
            what: "individual body elements (it evaluates whole bodies)",
        })
    }

    fn satisfies_body(&self, body: &[BodyElement], pair: &Pair) -> Result<bool> {
        self.holds_everywhere(std::iter::once(body), pair)
    }

    fn satisfies_any(&self, bodies: &[Vec<BodyElement>], pair: &Pair) -> Result<bool> {
        self.holds_everywhere(bodies.iter().map(Vec::as_slice), pair)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Program;
    use crate::ternary::{sat3, sat3_body, truth3};

    const PROGRAM_54: &str = "s :- sum{1:p, -1:q} >= 0.  q :- sum{1:s} > 0.  p :- sum{1:q} > 0.";

    fn pair(p: &Program, lower: &str, upper: &str) -> Pair {
        Pair::consistent(
            p.universe.parse_interpretation(lower).unwrap(),
            p.universe.parse_interpretation(upper).unwrap(),
        )
        .unwrap()
    }

    fn first_elem(p: &Program) -> BodyElement {
        p.rules[0].body[0].clone()
    }

    #[test]
    fn mr_examples() {
        let p: Program = PROGRAM_54.parse().unwrap();
        let a = first_elem(&p);
        assert!(sat3(&Mr, &a, &pair(&p, "", "p,q,s")).unwrap());
        assert!(!sat3(&Mr, &a, &pair(&p, "", "q")).unwrap());
    }

    #[test]
    fn ult_and_flp_examples() {
        let p: Program = PROGRAM_54.parse().unwrap();
        let a = first_elem(&p);
        // Z = {q} sums to -1.
        assert!(!sat3(&Ult, &a, &pair(&p, "", "p,q,s")).unwrap());
        assert!(!sat3(&Flp, &a, &pair(&p, "q", "p,q,s")).unwrap());
        assert!(sat3(&Flp, &a, &pair(&p, "", "p,q,s")).unwrap());
    }

    #[test]
    fn triv_ignores_non_condition_atoms() {
        let p: Program = "h :- sum{1:q} > 0. #atoms p.".parse().unwrap();
        let a = first_elem(&p);
        assert!(sat3(&Triv, &a, &pair(&p, "q", "q,p")).unwrap());
        assert!(!sat3(&Triv, &a, &pair(&p, "", "q,p")).unwrap());
    }

    #[test]
    fn ultimate_sees_tautologies() {
        let p: Program = "p :- sum{1:p} > 0.  p :- sum{1:p} <= 0.".parse().unwrap();
        let combined = p.combine_rules_per_head();
        let bodies = combined.bodies_of(p.universe.lookup("p").unwrap()).unwrap();
        let bottom = pair(&p, "", "p");
        assert!(Ultimate.satisfies_any(bodies, &bottom).unwrap());
        for body in bodies {
            assert!(!sat3_body(&Ult, body, &bottom).unwrap());
            assert!(!Ultimate.satisfies_body(body, &bottom).unwrap());
        }
        assert!(matches!(
            sat3(&Ultimate, &bodies[0][0], &bottom),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn gl_on_exact_pair_is_two_valued() {
        let p: Program = "h :- q, not r.".parse().unwrap();
        let body = &p.rules[0].body;
        assert!(sat3_body(&Gl, body, &pair(&p, "q", "q")).unwrap());
        assert!(!sat3_body(&Gl, body, &pair(&p, "q,r", "q,r")).unwrap());
    }

    #[test]
    fn gl_rejects_aggregates() {
        let p: Program = "h :- sum{1:q} > 0.".parse().unwrap();
        assert!(matches!(
            sat3(&Gl, &first_elem(&p), &pair(&p, "", "q")),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn truth_examples() {
        let p: Program = "h :- sum{1:p, -1:q} >= 0, not r, sum{1:p, 1:not p} = 1.".parse().unwrap();
        let body = &p.rules[0].body;
        assert_eq!(truth3(&Ult, &body[0], &pair(&p, "", "p,q")).unwrap(), TruthValue::Unknown);
        assert_eq!(truth3(&Gl, &body[1], &pair(&p, "", "r")).unwrap(), TruthValue::Unknown);
        assert_eq!(truth3(&Bnd, &body[2], &pair(&p, "", "p")).unwrap(), TruthValue::True);
        for rel in [&Mr as &dyn SatisfactionRelation, &Flp, &Gz, &Ultimate, &Lpst] {
            assert!(matches!(
                truth3(rel, &body[1], &pair(&p, "", "r")),
                Err(Error::NoTruthFunction(_))
            ));
        }
    }

    #[test]
    fn inconsistent_pairs_rejected() {
        let p: Program = "h :- sum{1:q} > 0, q.".parse().unwrap();
        let bad = Pair::new(p.universe.full_interpretation(), p.universe.empty_interpretation())
            .unwrap();
        for id in SemanticsId::ALL {
            let rel = id.relation();
            let r = rel.satisfies_body(&p.rules[0].body, &bad);
            assert_eq!(r, Err(Error::InconsistentPair), "{id}");
        }
    }

    #[test]
    fn lpst_and_ult_share_visits_only_over_condition_atoms() {
        let p: Program = "#atoms a, b, c, d. h :- sum{1:q} >= 0.".parse().unwrap();
        let a = first_elem(&p);
        let bottom = Pair::bottom(p.width());
        crate::stats::reset_interval_visits();
        assert!(sat3(&Ult, &a, &bottom).unwrap());
        assert_eq!(crate::stats::interval_visits(), 2);
        crate::stats::reset_interval_visits();
        assert!(sat3(&Lpst, &a, &bottom).unwrap());
        assert_eq!(crate::stats::interval_visits(), 2);
    }
}
