//! Exhaustive analyses of relations over small universes: well-behavedness,
//! relative precision and convexity.
//!
//! Formulas are disjunctions of conjunctive bodies and are judged with
//! [`SatisfactionRelation::satisfies_any`], so whole-body relations such as
//! `ultimate` take part on the same footing as compositional ones.

use indexmap::IndexSet;

use super::{SatisfactionRelation, SemanticsId, TruthValue};
use crate::error::{Error, Result};
use crate::eval2::{eval_aggregate, sat2};
use crate::interp::{all_interpretations, Interpretation, Pair};
use crate::syntax::{AggregateAtom, Atom, BodyElement, Program};

/// Disjunction of conjunctive bodies.
pub type Formula = Vec<Vec<BodyElement>>;

/// Hard cap on the universe for pair tables (4^n entries).
pub const MAX_ANALYSIS_ATOMS: usize = 10;

/// Hard cap on condition atoms for the convexity check.
pub const MAX_CONVEXITY_ATOMS: usize = 20;

/// Formulas a program exercises: each distinct body element on its own,
/// then each distinct combined body of a head that is not a single element.
pub fn formulas_of(program: &Program) -> Vec<Formula> {
    let mut out: IndexSet<Formula> = IndexSet::new();
    for rule in &program.rules {
        for elem in &rule.body {
            out.insert(vec![vec![elem.clone()]]);
        }
    }
    for head in program.combine_rules_per_head().heads {
        let single = head.bodies.len() == 1 && head.bodies[0].len() == 1;
        if !single {
            out.insert(head.bodies);
        }
    }
    out.into_iter().collect()
}

fn two_valued(formula: &Formula, i: &Interpretation) -> Result<bool> {
    for body in formula {
        if sat2(body, i)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn check_size(width: usize, max_universe: usize) -> Result<()> {
    let limit = max_universe.min(MAX_ANALYSIS_ATOMS);
    if width > limit {
        Err(Error::TooLarge {
            what: "universe for exhaustive analysis",
            size: width,
            limit,
        })
    } else {
        Ok(())
    }
}

/// Values of one formula on every consistent pair, indexed by
/// `lower << width | upper`.
struct PairTable<T> {
    width: usize,
    cells: Vec<T>,
}

impl<T: Copy + Default> PairTable<T> {
    fn build(width: usize, mut f: impl FnMut(&Pair) -> Result<T>) -> Result<Self> {
        let mut cells = vec![T::default(); 1usize << (2 * width)];
        for upper in all_interpretations(width) {
            for lower in all_interpretations(width) {
                if lower.is_subset(&upper) {
                    let pair = Pair { lower, upper };
                    cells[Self::index(width, &pair)] = f(&pair)?;
                }
            }
        }
        Ok(PairTable { width, cells })
    }

    fn index(width: usize, pair: &Pair) -> usize {
        ((pair.lower.bits() as usize) << width) | pair.upper.bits() as usize
    }

    fn get(&self, pair: &Pair) -> T {
        self.cells[Self::index(self.width, pair)]
    }
}

fn pair(width: usize, lower: u64, upper: u64) -> Pair {
    Pair {
        lower: Interpretation::from_bits(width, lower),
        upper: Interpretation::from_bits(width, upper),
    }
}

/// Pairs that cover `p` in ≤p: one undefined atom made true or false.
fn covers(p: &Pair) -> impl Iterator<Item = Pair> + '_ {
    let width = p.width();
    (0..width)
        .filter(move |&a| p.undefined_bits() >> a & 1 == 1)
        .flat_map(move |a| {
            let bit = 1u64 << a;
            [
                pair(width, p.lower.bits() | bit, p.upper.bits()),
                pair(width, p.lower.bits(), p.upper.bits() & !bit),
            ]
        })
}

fn consistent_pairs(width: usize) -> impl Iterator<Item = Pair> {
    all_interpretations(width).flat_map(move |upper| {
        all_interpretations(width)
            .filter(move |lower| lower.is_subset(&upper))
            .map(move |lower| Pair { lower, upper })
    })
}

/// Pairs in canonical order: lower ascending, upper descending, so less
/// precise pairs come first.
fn canonical_pairs(width: usize) -> Vec<Pair> {
    let all: Vec<Interpretation> = all_interpretations(width).collect();
    let mut out = Vec::new();
    for lower in &all {
        for upper in all.iter().rev() {
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

/// Pairs at least as precise as `p`: lower ascending, then upper ascending.
fn refinements(p: &Pair) -> Vec<Pair> {
    let width = p.width();
    let mut out = Vec::new();
    for lower in all_interpretations(width).filter(|x| p.lower.is_subset(x)) {
        for upper in all_interpretations(width) {
            if lower.is_subset(&upper) && upper.is_subset(&p.upper) {
                out.push(Pair { lower, upper });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WellBehavedViolation {
    /// The relation disagrees with two-valued satisfaction on an exact pair.
    NotExtending {
        formula: usize,
        interpretation: Interpretation,
        three_valued: String,
        two_valued: bool,
    },
    /// `less ≤p more` but the value at `more` is not at least as precise.
    NotMonotone {
        formula: usize,
        less: Pair,
        more: Pair,
    },
}

impl WellBehavedViolation {
    pub fn formula(&self) -> usize {
        match self {
            WellBehavedViolation::NotExtending { formula, .. }
            | WellBehavedViolation::NotMonotone { formula, .. } => *formula,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellBehavedReport {
    pub semantics: SemanticsId,
    pub holds: bool,
    pub formulas_checked: usize,
    pub violation: Option<WellBehavedViolation>,
}

/// First monotonicity counterexample in canonical order, given that one
/// exists. `leq` is the order the values must respect.
fn first_counterexample<T: Copy + Default>(
    table: &PairTable<T>,
    leq: impl Fn(T, T) -> bool,
    relevant: impl Fn(T) -> bool,
) -> Option<(Pair, Pair)> {
    for less in canonical_pairs(table.width) {
        let v = table.get(&less);
        if !relevant(v) {
            continue;
        }
        for more in refinements(&less) {
            if !leq(v, table.get(&more)) {
                return Some((less, more));
            }
        }
    }
    None
}

/// Checks that `rel` extends two-valued satisfaction and is ≤p-monotone on
/// every consistent pair over `width` atoms, for each formula.
pub fn check_well_behaved(
    rel: &dyn SatisfactionRelation,
    formulas: &[Formula],
    width: usize,
    max_universe: usize,
) -> Result<WellBehavedReport> {
    check_size(width, max_universe)?;
    let mut report = WellBehavedReport {
        semantics: rel.id(),
        holds: true,
        formulas_checked: 0,
        violation: None,
    };
    for (idx, formula) in formulas.iter().enumerate() {
        report.formulas_checked += 1;
        let table = PairTable::build(width, |p| rel.satisfies_any(formula, p))?;
        if let Some(v) = extension_violation(idx, formula, width, |i| {
            let three = table.get(&Pair::exact(*i));
            Ok((three.to_string(), Some(three)))
        })? {
            report.holds = false;
            report.violation = Some(v);
            return Ok(report);
        }
        // Monotonicity along covering steps implies it along ≤p.
        let broken = consistent_pairs(width)
            .any(|p| table.get(&p) && covers(&p).any(|q| !table.get(&q)));
        if broken {
            let (less, more) = first_counterexample(&table, |a, b| !a || b, |v| v)
                .expect("cover violation implies a counterexample");
            report.holds = false;
            report.violation = Some(WellBehavedViolation::NotMonotone {
                formula: idx,
                less,
                more,
            });
            return Ok(report);
        }
    }
    Ok(report)
}

fn extension_violation(
    idx: usize,
    formula: &Formula,
    width: usize,
    mut three: impl FnMut(&Interpretation) -> Result<(String, Option<bool>)>,
) -> Result<Option<WellBehavedViolation>> {
    for i in all_interpretations(width) {
        let two = two_valued(formula, &i)?;
        let (shown, value) = three(&i)?;
        if value != Some(two) {
            return Ok(Some(WellBehavedViolation::NotExtending {
                formula: idx,
                interpretation: i,
                three_valued: shown,
                two_valued: two,
            }));
        }
    }
    Ok(None)
}

/// Checks the truth-function form of well-behavedness: exact pairs get the
/// two-valued value, and truth values only gain precision along ≤p.
pub fn check_truth_well_behaved(
    rel: &dyn SatisfactionRelation,
    formulas: &[Formula],
    width: usize,
    max_universe: usize,
) -> Result<WellBehavedReport> {
    check_size(width, max_universe)?;
    let mut report = WellBehavedReport {
        semantics: rel.id(),
        holds: true,
        formulas_checked: 0,
        violation: None,
    };
    for (idx, formula) in formulas.iter().enumerate() {
        report.formulas_checked += 1;
        let table = PairTable::build(width, |p| rel.truth_any(formula, p).map(Truth))?;
        if let Some(v) = extension_violation(idx, formula, width, |i| {
            let t = table.get(&Pair::exact(*i)).0;
            let value = match t {
                TruthValue::True => Some(true),
                TruthValue::False => Some(false),
                TruthValue::Unknown => None,
            };
            Ok((t.to_string(), value))
        })? {
            report.holds = false;
            report.violation = Some(v);
            return Ok(report);
        }
        let broken = consistent_pairs(width).any(|p| {
            let v = table.get(&p).0;
            covers(&p).any(|q| !v.precision_leq(table.get(&q).0))
        });
        if broken {
            let (less, more) =
                first_counterexample(&table, |a, b| a.0.precision_leq(b.0), |v| v.0 != TruthValue::Unknown)
                    .expect("cover violation implies a counterexample");
            report.holds = false;
            report.violation = Some(WellBehavedViolation::NotMonotone {
                formula: idx,
                less,
                more,
            });
            return Ok(report);
        }
    }
    Ok(report)
}

/// Table cell wrapper; `u` is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Truth(TruthValue);

impl Default for Truth {
    fn default() -> Self {
        Truth(TruthValue::Unknown)
    }
}

/// Relative precision of relation `a` with respect to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionOrder {
    Equal,
    /// `a ≤p b`: whatever `a` satisfies, `b` satisfies.
    LessPrecise,
    /// `b ≤p a`.
    MorePrecise,
    Incomparable,
}

/// A formula and pair where one relation holds and the other does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionWitness {
    pub formula: usize,
    pub pair: Pair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionReport {
    pub a: SemanticsId,
    pub b: SemanticsId,
    pub order: PrecisionOrder,
    /// Satisfied by `a` only; present iff `a ≤p b` fails.
    pub a_only: Option<PrecisionWitness>,
    /// Satisfied by `b` only; present iff `b ≤p a` fails.
    pub b_only: Option<PrecisionWitness>,
}

/// Compares two relations over all consistent pairs and the given formulas.
pub fn compare_precision(
    a: &dyn SatisfactionRelation,
    b: &dyn SatisfactionRelation,
    formulas: &[Formula],
    width: usize,
    max_universe: usize,
) -> Result<PrecisionReport> {
    check_size(width, max_universe)?;
    let mut a_only = None;
    let mut b_only = None;
    'formulas: for (idx, formula) in formulas.iter().enumerate() {
        for pair in consistent_pairs(width) {
            let sa = a.satisfies_any(formula, &pair)?;
            let sb = b.satisfies_any(formula, &pair)?;
            if sa && !sb && a_only.is_none() {
                a_only = Some(PrecisionWitness { formula: idx, pair });
            }
            if sb && !sa && b_only.is_none() {
                b_only = Some(PrecisionWitness { formula: idx, pair });
            }
            if a_only.is_some() && b_only.is_some() {
                break 'formulas;
            }
        }
    }
    let order = match (&a_only, &b_only) {
        (None, None) => PrecisionOrder::Equal,
        (None, Some(_)) => PrecisionOrder::LessPrecise,
        (Some(_), None) => PrecisionOrder::MorePrecise,
        (Some(_), Some(_)) => PrecisionOrder::Incomparable,
    };
    Ok(PrecisionReport {
        a: a.id(),
        b: b.id(),
        order,
        a_only,
        b_only,
    })
}

/// Whether `X ⊨ agg` and `Z ⊨ agg` imply `Y ⊨ agg` for all `X ⊆ Y ⊆ Z`.
/// Only the condition atoms matter, so the check ranges over their subsets.
pub fn is_convex(agg: &AggregateAtom) -> Result<bool> {
    let atoms: Vec<usize> = {
        let mask = agg.condition_mask();
        (0..64).filter(|i| mask >> i & 1 == 1).collect()
    };
    let k = atoms.len();
    if k > MAX_CONVEXITY_ATOMS {
        return Err(Error::TooLarge {
            what: "condition atoms for convexity",
            size: k,
            limit: MAX_CONVEXITY_ATOMS,
        });
    }
    let width = atoms.last().map_or(0, |&a| a + 1);
    let n = 1usize << k;
    let mut sat = vec![false; n];
    for (s, slot) in sat.iter_mut().enumerate() {
        let i = Interpretation::from_atoms(
            width,
            atoms
                .iter()
                .enumerate()
                .filter(|(j, _)| s >> j & 1 == 1)
                .map(|(_, &a)| Atom(a)),
        );
        *slot = eval_aggregate(agg, &i)?;
    }
    // below[s]: some subset of s satisfies; above[s]: some superset does.
    let mut below = sat.clone();
    let mut above = sat.clone();
    for j in 0..k {
        for s in 0..n {
            if s >> j & 1 == 1 {
                below[s] |= below[s ^ (1 << j)];
            } else {
                above[s] |= above[s | (1 << j)];
            }
        }
    }
    Ok((0..n).all(|s| sat[s] || !(below[s] && above[s])))
}
