//! Two-valued evaluation: literals, aggregate atoms, bodies, the immediate
//! consequence operator and (supported) model checks.

use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::interp::Interpretation;
use crate::syntax::{AggFunc, AggregateAtom, BodyElement, Cmp, Entry, Literal, Program};

/// Value of an aggregate function on a multiset. MIN, MAX and AVG of the
/// empty multiset are undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggValue {
    Undefined,
    Defined(Rational64),
}

impl AggValue {
    pub fn int(n: i64) -> Self {
        AggValue::Defined(Rational64::from_integer(n))
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, AggValue::Defined(_))
    }

    pub fn value(&self) -> Option<Rational64> {
        match self {
            AggValue::Defined(v) => Some(*v),
            AggValue::Undefined => None,
        }
    }

    /// `self cmp bound`; an undefined value satisfies no comparison.
    pub fn compare(&self, cmp: Cmp, bound: i64) -> bool {
        match self {
            AggValue::Undefined => false,
            AggValue::Defined(v) => cmp.holds(v, &Rational64::from_integer(bound)),
        }
    }
}

impl fmt::Display for AggValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggValue::Undefined => f.write_str("undefined"),
            AggValue::Defined(v) => write!(f, "{v}"),
        }
    }
}

pub fn eval_literal(lit: &Literal, i: &Interpretation) -> bool {
    i.contains(lit.atom) != lit.negated
}

/// Weights of the entries whose condition holds in `i`.
pub fn eval_multiset(entries: &[Entry], i: &Interpretation) -> Vec<i64> {
    entries
        .iter()
        .filter(|e| eval_literal(&e.cond, i))
        .map(|e| e.weight)
        .collect()
}

/// Applies an aggregate function to a multiset, with checked arithmetic.
pub fn aggregate_value(func: AggFunc, weights: &[i64]) -> Result<AggValue> {
    let checked_sum = |ws: &[i64]| {
        ws.iter()
            .try_fold(0i64, |acc, &w| acc.checked_add(w))
            .ok_or(Error::ArithmeticOverflow)
    };
    Ok(match func {
        AggFunc::Sum => AggValue::int(checked_sum(weights)?),
        AggFunc::Card => AggValue::int(weights.len() as i64),
        AggFunc::Prod => AggValue::int(
            weights
                .iter()
                .try_fold(1i64, |acc, &w| acc.checked_mul(w))
                .ok_or(Error::ArithmeticOverflow)?,
        ),
        AggFunc::Min => weights.iter().min().map_or(AggValue::Undefined, |&m| AggValue::int(m)),
        AggFunc::Max => weights.iter().max().map_or(AggValue::Undefined, |&m| AggValue::int(m)),
        AggFunc::Avg => {
            if weights.is_empty() {
                AggValue::Undefined
            } else {
                AggValue::Defined(Rational64::new(checked_sum(weights)?, weights.len() as i64))
            }
        }
    })
}

pub fn aggregate_value_at(agg: &AggregateAtom, i: &Interpretation) -> Result<AggValue> {
    aggregate_value(agg.func, &eval_multiset(&agg.entries, i))
}

/// `i ⊨ agg`.
pub fn eval_aggregate(agg: &AggregateAtom, i: &Interpretation) -> Result<bool> {
    Ok(aggregate_value_at(agg, i)?.compare(agg.cmp, agg.bound))
}

pub fn eval_element(elem: &BodyElement, i: &Interpretation) -> Result<bool> {
    match elem {
        BodyElement::Literal(l) => Ok(eval_literal(l, i)),
        BodyElement::Aggregate(a) => eval_aggregate(a, i),
    }
}

/// Truth of a conjunctive body in `i`.
pub fn sat2(body: &[BodyElement], i: &Interpretation) -> Result<bool> {
    for elem in body {
        if !eval_element(elem, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Heads of all rules whose body holds in `i`.
pub fn tp(program: &Program, i: &Interpretation) -> Result<Interpretation> {
    let mut out = Interpretation::empty(program.width());
    for rule in &program.rules {
        if !out.contains(rule.head) && sat2(&rule.body, i)? {
            out.insert(rule.head);
        }
    }
    Ok(out)
}

pub fn is_model(program: &Program, i: &Interpretation) -> Result<bool> {
    for rule in &program.rules {
        if !i.contains(rule.head) && sat2(&rule.body, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `tp(program, i) = i`.
pub fn is_supported_model(program: &Program, i: &Interpretation) -> Result<bool> {
    Ok(tp(program, i)? == *i)
}
