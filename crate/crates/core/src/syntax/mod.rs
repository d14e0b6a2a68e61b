//! Ground aggregate programs: AST, text parser and pretty printer.

mod parser;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::interp::Interpretation;

pub use parser::parse_program;

/// Index of a propositional atom in a [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub usize);

impl Atom {
    pub(crate) fn bit(self) -> u64 {
        1u64 << self.0
    }
}

/// Ordered set of atom names. The position of a name is its [`Atom`] index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Universe {
    names: IndexSet<String>,
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a universe from names in order; duplicates are ignored.
    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut universe = Self::new();
        for name in names {
            universe.intern(name)?;
        }
        Ok(universe)
    }

    /// Returns the atom for `name`, adding it if absent.
    pub fn intern(&mut self, name: impl Into<String>) -> Result<Atom> {
        let (index, _) = self.names.insert_full(name.into());
        if self.names.len() > crate::MAX_UNIVERSE {
            self.names.pop();
            return Err(Error::UniverseCapacity(crate::MAX_UNIVERSE + 1));
        }
        Ok(Atom(index))
    }

    pub fn lookup(&self, name: &str) -> Option<Atom> {
        self.names.get_index_of(name).map(Atom)
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.0]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.names.len()).map(Atom)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.names.iter().map(String::as_str)
    }

    pub fn empty_interpretation(&self) -> Interpretation {
        Interpretation::empty(self.len())
    }

    pub fn full_interpretation(&self) -> Interpretation {
        Interpretation::full(self.len())
    }

    /// Parses a comma-separated list of atom names into an interpretation.
    pub fn parse_interpretation(&self, text: &str) -> Result<Interpretation> {
        let mut interp = self.empty_interpretation();
        let text = text.trim();
        let text = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(text);
        for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let atom = self
                .lookup(name)
                .ok_or_else(|| Error::UnknownAtom(name.to_string()))?;
            interp.insert(atom);
        }
        Ok(interp)
    }

    /// Sorted atom names of an interpretation.
    pub fn sorted_names(&self, interp: &Interpretation) -> Vec<&str> {
        let mut names: Vec<&str> = interp.atoms().map(|a| self.name(a)).collect();
        names.sort_unstable();
        names
    }

    /// Renders `{a, b}` with atoms in lexicographic name order.
    pub fn format(&self, interp: &Interpretation) -> String {
        format!("{{{}}}", self.sorted_names(interp).join(", "))
    }

    pub fn display<'a, T: ?Sized>(&'a self, item: &'a T) -> Named<'a, T> {
        Named {
            universe: self,
            item,
        }
    }
}

/// Pairs an AST node with the universe that names its atoms.
pub struct Named<'a, T: ?Sized> {
    universe: &'a Universe,
    item: &'a T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            negated: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggFunc {
    Sum,
    Prod,
    Card,
    Min,
    Max,
    Avg,
}

impl AggFunc {
    pub const ALL: [AggFunc; 6] = [
        AggFunc::Sum,
        AggFunc::Prod,
        AggFunc::Card,
        AggFunc::Min,
        AggFunc::Max,
        AggFunc::Avg,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            AggFunc::Sum => "sum",
            AggFunc::Prod => "prod",
            AggFunc::Card => "card",
            AggFunc::Min => "min",
            AggFunc::Max => "max",
            AggFunc::Avg => "avg",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.keyword() == word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Cmp {
    pub const ALL: [Cmp; 6] = [Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge, Cmp::Eq, Cmp::Ne];

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
        }
    }

    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ne => lhs != rhs,
        }
    }
}

/// One `weight:condition` element of a multiset expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entry {
    pub weight: i64,
    pub cond: Literal,
}

/// `func{w1:c1, ..., wk:ck} cmp bound`. Entries form a multiset: duplicates
/// contribute separately.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggregateAtom {
    pub func: AggFunc,
    pub entries: Vec<Entry>,
    pub cmp: Cmp,
    pub bound: i64,
}

impl AggregateAtom {
    pub fn new(func: AggFunc, entries: Vec<Entry>, cmp: Cmp, bound: i64) -> Self {
        AggregateAtom {
            func,
            entries,
            cmp,
            bound,
        }
    }

    /// Bit mask of the atoms occurring in conditions.
    pub fn condition_mask(&self) -> u64 {
        self.entries.iter().fold(0, |m, e| m | e.cond.atom.bit())
    }

    /// Distinct condition literals in first-occurrence order.
    pub fn conditions(&self) -> Vec<Literal> {
        let mut seen = IndexSet::new();
        for e in &self.entries {
            seen.insert(e.cond);
        }
        seen.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BodyElement {
    Literal(Literal),
    Aggregate(AggregateAtom),
}

impl BodyElement {
    pub fn atom_mask(&self) -> u64 {
        match self {
            BodyElement::Literal(l) => l.atom.bit(),
            BodyElement::Aggregate(a) => a.condition_mask(),
        }
    }

    pub fn as_aggregate(&self) -> Option<&AggregateAtom> {
        match self {
            BodyElement::Aggregate(a) => Some(a),
            BodyElement::Literal(_) => None,
        }
    }
}

impl From<Literal> for BodyElement {
    fn from(lit: Literal) -> Self {
        BodyElement::Literal(lit)
    }
}

impl From<AggregateAtom> for BodyElement {
    fn from(agg: AggregateAtom) -> Self {
        BodyElement::Aggregate(agg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<BodyElement>,
}

impl Rule {
    pub fn new(head: Atom, body: Vec<BodyElement>) -> Self {
        Rule { head, body }
    }

    pub fn fact(head: Atom) -> Self {
        Rule {
            head,
            body: Vec::new(),
        }
    }
}

/// A ground program with single-atom heads over an explicit universe.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub universe: Universe,
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(universe: Universe, rules: Vec<Rule>) -> Self {
        Program { universe, rules }
    }

    pub fn width(&self) -> usize {
        self.universe.len()
    }

    pub fn has_aggregates(&self) -> bool {
        self.rules
            .iter()
            .any(|r| r.body.iter().any(|e| e.as_aggregate().is_some()))
    }

    pub fn aggregates(&self) -> impl Iterator<Item = &AggregateAtom> + '_ {
        self.rules
            .iter()
            .flat_map(|r| r.body.iter().filter_map(BodyElement::as_aggregate))
    }

    /// Groups rule bodies by head; the body of a head is the disjunction of
    /// its rule bodies. Heads appear in order of first occurrence.
    pub fn combine_rules_per_head(&self) -> DisjunctiveBodyProgram {
        let mut heads: indexmap::IndexMap<Atom, Vec<Vec<BodyElement>>> = Default::default();
        for rule in &self.rules {
            heads.entry(rule.head).or_default().push(rule.body.clone());
        }
        DisjunctiveBodyProgram {
            width: self.width(),
            heads: heads
                .into_iter()
                .map(|(head, bodies)| HeadBodies { head, bodies })
                .collect(),
        }
    }
}

impl FromStr for Program {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_program(s)
    }
}

pub fn combine_rules_per_head(program: &Program) -> DisjunctiveBodyProgram {
    program.combine_rules_per_head()
}

/// All bodies of one head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadBodies {
    pub head: Atom,
    pub bodies: Vec<Vec<BodyElement>>,
}

/// A program with exactly one (disjunctive) body per head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctiveBodyProgram {
    pub width: usize,
    pub heads: Vec<HeadBodies>,
}

impl DisjunctiveBodyProgram {
    pub fn bodies_of(&self, head: Atom) -> Option<&[Vec<BodyElement>]> {
        self.heads
            .iter()
            .find(|h| h.head == head)
            .map(|h| h.bodies.as_slice())
    }
}

impl fmt::Display for Named<'_, Literal> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.item.negated {
            f.write_str("not ")?;
        }
        f.write_str(self.universe.name(self.item.atom))
    }
}

impl fmt::Display for Named<'_, AggregateAtom> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let agg = self.item;
        write!(f, "{}{{", agg.func.keyword())?;
        for (i, e) in agg.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", e.weight, self.universe.display(&e.cond))?;
        }
        write!(f, "}} {} {}", agg.cmp.symbol(), agg.bound)
    }
}

impl fmt::Display for Named<'_, BodyElement> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.item {
            BodyElement::Literal(l) => self.universe.display(l).fmt(f),
            BodyElement::Aggregate(a) => self.universe.display(a).fmt(f),
        }
    }
}

impl fmt::Display for Named<'_, [BodyElement]> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, elem) in self.item.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            self.universe.display(elem).fmt(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for Named<'_, Rule> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.universe.name(self.item.head))?;
        if !self.item.body.is_empty() {
            write!(f, " :- {}", self.universe.display(self.item.body.as_slice()))?;
        }
        f.write_str(".")
    }
}

/// Prints an `#atoms` line fixing the universe order, then one rule per line.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.universe.is_empty() {
            let names: Vec<&str> = self.universe.names().collect();
            writeln!(f, "#atoms {}.", names.join(", "))?;
        }
        for rule in &self.rules {
            writeln!(f, "{}", self.universe.display(rule))?;
        }
        Ok(())
    }
}
