//! Ternary satisfaction relations.
//!
//! A relation decides `(X, Y) ⊨³ φ`: φ holds in every interpretation the
//! pair approximates, as far as the relation can tell. Each semantics is
//! one implementation of [`SatisfactionRelation`], looked up by name in a
//! [`Registry`]. Relations with a three-valued truth function also expose
//! it; for them `⊨³` is "truth is t" and the satisfiability relation `⊨³↑`
//! is "truth is t or u".

mod analysis;
mod relations;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::eval2::eval_literal;
use crate::interp::Pair;
use crate::syntax::{AggregateAtom, BodyElement, Literal};

pub use analysis::{
    check_truth_well_behaved, check_well_behaved, compare_precision, formulas_of, is_convex,
    Formula, PrecisionOrder, PrecisionReport, PrecisionWitness, WellBehavedReport,
    WellBehavedViolation, MAX_ANALYSIS_ATOMS, MAX_CONVEXITY_ATOMS,
};
pub use relations::{
    ult_truth, Bnd, Flp, Gl, Gz, Lpst, Mr, Triv, Ult, Ultimate, MAX_ENUMERATION_ATOMS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruthValue {
    False,
    Unknown,
    True,
}

impl TruthValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn negate(self) -> Self {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Unknown => TruthValue::Unknown,
        }
    }

    /// Precision order: `u` below both `t` and `f`.
    pub fn precision_leq(self, other: Self) -> bool {
        self == TruthValue::Unknown || self == other
    }

    /// Possibly true: `t` or `u`.
    pub fn is_possible(self) -> bool {
        self != TruthValue::False
    }

    pub fn symbol(self) -> char {
        match self {
            TruthValue::True => 't',
            TruthValue::Unknown => 'u',
            TruthValue::False => 'f',
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Kleene truth of a literal in a pair.
pub fn kleene_literal(lit: &Literal, pair: &Pair) -> TruthValue {
    let value = if pair.lower.contains(lit.atom) {
        TruthValue::True
    } else if pair.upper.contains(lit.atom) {
        TruthValue::Unknown
    } else {
        TruthValue::False
    };
    if lit.negated {
        value.negate()
    } else {
        value
    }
}

/// Literal case shared by every compositional relation: a positive literal
/// needs its atom in the lower bound, a negative one its atom outside the
/// upper bound.
pub fn gl_literal(lit: &Literal, pair: &Pair) -> bool {
    if lit.negated {
        eval_literal(lit, &pair.upper)
    } else {
        eval_literal(lit, &pair.lower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemanticsId {
    Gl,
    Triv,
    Gz,
    Ult,
    Lpst,
    Bnd,
    Mr,
    Flp,
    Ultimate,
}

impl SemanticsId {
    pub const ALL: [SemanticsId; 9] = [
        SemanticsId::Gl,
        SemanticsId::Triv,
        SemanticsId::Gz,
        SemanticsId::Ult,
        SemanticsId::Lpst,
        SemanticsId::Bnd,
        SemanticsId::Mr,
        SemanticsId::Flp,
        SemanticsId::Ultimate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemanticsId::Gl => "gl",
            SemanticsId::Triv => "triv",
            SemanticsId::Gz => "gz",
            SemanticsId::Ult => "ult",
            SemanticsId::Lpst => "lpst",
            SemanticsId::Bnd => "bnd",
            SemanticsId::Mr => "mr",
            SemanticsId::Flp => "flp",
            SemanticsId::Ultimate => "ultimate",
        }
    }

    /// The built-in relation for this id.
    pub fn relation(self) -> &'static dyn SatisfactionRelation {
        match self {
            SemanticsId::Gl => &Gl,
            SemanticsId::Triv => &Triv,
            SemanticsId::Gz => &Gz,
            SemanticsId::Ult => &Ult,
            SemanticsId::Lpst => &Lpst,
            SemanticsId::Bnd => &Bnd,
            SemanticsId::Mr => &Mr,
            SemanticsId::Flp => &Flp,
            SemanticsId::Ultimate => &Ultimate,
        }
    }

    pub fn capabilities(self) -> Capabilities {
        self.relation().capabilities()
    }
}

impl fmt::Display for SemanticsId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemanticsId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SemanticsId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownSemantics(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    /// Exposes a three-valued truth function (KK and WF are available).
    pub has_truth_function: bool,
    /// Extends two-valued satisfaction and is ≤p-monotone.
    pub well_behaved: bool,
    /// `X ↦ {H(r) | (X, Y) ⊨³ B(r)}` is monotone, so stable checks can use
    /// its least fixpoint.
    pub monotone_lower_operator: bool,
    /// Only defined for aggregate-free programs.
    pub aggregate_free_only: bool,
}

/// A ternary satisfaction relation over consistent pairs.
///
/// Implementors supply the aggregate case; literal, conjunction and
/// disjunction cases default to the compositional rules. A relation that is
/// not compositional (such as [`Ultimate`]) overrides the body methods.
pub trait SatisfactionRelation: Send + Sync {
    fn id(&self) -> SemanticsId;

    fn capabilities(&self) -> Capabilities;

    /// `(X, Y) ⊨³ agg` for a consistent pair.
    fn satisfies_aggregate(&self, agg: &AggregateAtom, pair: &Pair) -> Result<bool>;

    /// Three-valued truth of an aggregate atom.
    fn aggregate_truth(&self, _agg: &AggregateAtom, _pair: &Pair) -> Result<TruthValue> {
        Err(Error::NoTruthFunction(self.id()))
    }

    fn name(&self) -> &'static str {
        self.id().name()
    }

    fn satisfies(&self, elem: &BodyElement, pair: &Pair) -> Result<bool> {
        pair.ensure_consistent()?;
        match elem {
            BodyElement::Literal(lit) => Ok(gl_literal(lit, pair)),
            BodyElement::Aggregate(agg) => self.satisfies_aggregate(agg, pair),
        }
    }

    /// Conjunction of the elements.
    fn satisfies_body(&self, body: &[BodyElement], pair: &Pair) -> Result<bool> {
        pair.ensure_consistent()?;
        for elem in body {
            if !self.satisfies(elem, pair)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Disjunction of conjunctive bodies: the combined body of one head.
    fn satisfies_any(&self, bodies: &[Vec<BodyElement>], pair: &Pair) -> Result<bool> {
        pair.ensure_consistent()?;
        for body in bodies {
            if self.satisfies_body(body, pair)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn truth(&self, elem: &BodyElement, pair: &Pair) -> Result<TruthValue> {
        if !self.capabilities().has_truth_function {
            return Err(Error::NoTruthFunction(self.id()));
        }
        pair.ensure_consistent()?;
        match elem {
            BodyElement::Literal(lit) => Ok(kleene_literal(lit, pair)),
            BodyElement::Aggregate(agg) => self.aggregate_truth(agg, pair),
        }
    }

    /// Kleene conjunction: the minimum in the truth order.
    fn truth_body(&self, body: &[BodyElement], pair: &Pair) -> Result<TruthValue> {
        if !self.capabilities().has_truth_function {
            return Err(Error::NoTruthFunction(self.id()));
        }
        let mut acc = TruthValue::True;
        for elem in body {
            acc = acc.min(self.truth(elem, pair)?);
            if acc == TruthValue::False {
                break;
            }
        }
        Ok(acc)
    }

    /// Kleene disjunction: the maximum in the truth order.
    fn truth_any(&self, bodies: &[Vec<BodyElement>], pair: &Pair) -> Result<TruthValue> {
        let mut acc = TruthValue::False;
        for body in bodies {
            acc = acc.max(self.truth_body(body, pair)?);
            if acc == TruthValue::True {
                break;
            }
        }
        Ok(acc)
    }

    /// `(X, Y) ⊨³↑ elem`: possibly true.
    fn satisfiable(&self, elem: &BodyElement, pair: &Pair) -> Result<bool> {
        Ok(self.truth(elem, pair)?.is_possible())
    }
}

/// `sat3`: element-level satisfaction. `ultimate` only judges whole bodies.
pub fn sat3(rel: &dyn SatisfactionRelation, elem: &BodyElement, pair: &Pair) -> Result<bool> {
    rel.satisfies(elem, pair)
}

/// `sat3_body`: a conjunctive body.
pub fn sat3_body(
    rel: &dyn SatisfactionRelation,
    body: &[BodyElement],
    pair: &Pair,
) -> Result<bool> {
    rel.satisfies_body(body, pair)
}

/// `truth3`: the three-valued truth function of `rel`, if it has one.
pub fn truth3(rel: &dyn SatisfactionRelation, elem: &BodyElement, pair: &Pair) -> Result<TruthValue> {
    rel.truth(elem, pair)
}

/// Relations by name. [`Registry::standard`] holds the nine built-ins;
/// further relations can be registered under new names.
#[derive(Clone)]
pub struct Registry {
    relations: IndexMap<String, Arc<dyn SatisfactionRelation>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry {
            relations: IndexMap::new(),
        }
    }

    pub fn standard() -> Self {
        let mut registry = Self::empty();
        registry.register(Arc::new(Gl));
        registry.register(Arc::new(Triv));
        registry.register(Arc::new(Gz));
        registry.register(Arc::new(Ult));
        registry.register(Arc::new(Lpst));
        registry.register(Arc::new(Bnd));
        registry.register(Arc::new(Mr));
        registry.register(Arc::new(Flp));
        registry.register(Arc::new(Ultimate));
        registry
    }

    /// Registers `relation` under its name, replacing any previous entry.
    pub fn register(&mut self, relation: Arc<dyn SatisfactionRelation>) {
        self.relations.insert(relation.name().to_string(), relation);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn SatisfactionRelation>> {
        self.relations
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownSemantics(name.to_string()))
    }

    /// Resolves a comma-separated list such as `"ult,bnd"`.
    pub fn resolve_list(&self, list: &str) -> Result<Vec<Arc<dyn SatisfactionRelation>>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| self.get(name))
            .collect()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.relations.keys().map(String::as_str)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}
