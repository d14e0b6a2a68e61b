//! Exact lower and upper bounds of an aggregate's value over an interval of
//! interpretations, and the bound-based three-valued truth function.
//!
//! Entries are grouped by the atom of their condition. An atom that is
//! defined in the pair fixes which of its entries count. An undefined atom
//! contributes one of two branches: the weights of its positive conditions
//! (atom true) or those of its negative conditions (atom false). Grouping
//! keeps `1:p, 1:not p` correlated, so the bounds are the true extrema and
//! not per-entry over-approximations.

use indexmap::IndexMap;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::eval2::{aggregate_value, AggValue};
use crate::interp::Pair;
use crate::syntax::{AggFunc, AggregateAtom, Cmp};
use crate::ternary::{ult_truth, TruthValue};

/// Branch-combination limit for MIN, MAX and AVG.
pub const MAX_BRANCH_ATOMS: usize = 24;

/// Minimum and maximum defined value of an aggregate over `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub lb: AggValue,
    pub ub: AggValue,
    /// Some interpretation in the interval yields the empty multiset.
    pub empty_possible: bool,
    /// Every interpretation in the interval yields the empty multiset.
    pub empty_certain: bool,
}

#[derive(Debug, Default)]
struct Split {
    fixed: Vec<i64>,
    /// Per undefined atom: (weights if the atom is true, weights if false).
    branches: Vec<(Vec<i64>, Vec<i64>)>,
}

fn split(agg: &AggregateAtom, pair: &Pair) -> Split {
    let mut out = Split::default();
    let mut undefined: IndexMap<usize, (Vec<i64>, Vec<i64>)> = IndexMap::new();
    let open = pair.undefined_bits();
    for e in &agg.entries {
        let atom = e.cond.atom;
        if open & atom.bit() != 0 {
            let slot = undefined.entry(atom.0).or_default();
            if e.cond.negated {
                slot.1.push(e.weight);
            } else {
                slot.0.push(e.weight);
            }
        } else if pair.lower.contains(atom) != e.cond.negated {
            out.fixed.push(e.weight);
        }
    }
    out.branches = undefined.into_values().collect();
    out
}

fn checked_sum(ws: &[i64]) -> Result<i64> {
    ws.iter()
        .try_fold(0i64, |a, &w| a.checked_add(w))
        .ok_or(Error::ArithmeticOverflow)
}

fn checked_prod(ws: &[i64]) -> Result<i64> {
    ws.iter()
        .try_fold(1i64, |a, &w| a.checked_mul(w))
        .ok_or(Error::ArithmeticOverflow)
}

fn additive(fixed: i64, branches: &[(i64, i64)]) -> Result<(i64, i64)> {
    branches.iter().try_fold((fixed, fixed), |(lo, hi), &(t, f)| {
        Ok((
            lo.checked_add(t.min(f)).ok_or(Error::ArithmeticOverflow)?,
            hi.checked_add(t.max(f)).ok_or(Error::ArithmeticOverflow)?,
        ))
    })
}

/// Extremes of `S · c` for the achievable product set `S ⊆ [lo, hi]` (with
/// both ends achievable) are among the four corner products.
fn product_range(fixed: i64, branches: &[(i64, i64)]) -> Result<(i64, i64)> {
    let (mut lo, mut hi) = (fixed as i128, fixed as i128);
    for &(t, f) in branches {
        let corners = [lo * t as i128, lo * f as i128, hi * t as i128, hi * f as i128];
        lo = *corners.iter().min().unwrap();
        hi = *corners.iter().max().unwrap();
        if lo < i64::MIN as i128 || hi > i64::MAX as i128 {
            return Err(Error::ArithmeticOverflow);
        }
    }
    Ok((lo as i64, hi as i64))
}

/// Exact min/max of the aggregate value over every `Z` in the interval.
///
/// SUM, CARD and PROD run in time linear in the number of entries. MIN, MAX
/// and AVG enumerate the branch combinations of the undefined condition
/// atoms, up to [`MAX_BRANCH_ATOMS`] of them.
pub fn exact_bounds(agg: &AggregateAtom, pair: &Pair) -> Result<Bounds> {
    pair.ensure_consistent()?;
    let parts = split(agg, pair);
    let fixed_empty = parts.fixed.is_empty();
    let empty_possible =
        fixed_empty && parts.branches.iter().all(|(t, f)| t.is_empty() || f.is_empty());
    let empty_certain =
        fixed_empty && parts.branches.iter().all(|(t, f)| t.is_empty() && f.is_empty());

    let (lb, ub) = match agg.func {
        AggFunc::Sum => {
            let branches = parts
                .branches
                .iter()
                .map(|(t, f)| Ok((checked_sum(t)?, checked_sum(f)?)))
                .collect::<Result<Vec<_>>>()?;
            let (lo, hi) = additive(checked_sum(&parts.fixed)?, &branches)?;
            (AggValue::int(lo), AggValue::int(hi))
        }
        AggFunc::Card => {
            let branches: Vec<(i64, i64)> = parts
                .branches
                .iter()
                .map(|(t, f)| (t.len() as i64, f.len() as i64))
                .collect();
            let (lo, hi) = additive(parts.fixed.len() as i64, &branches)?;
            (AggValue::int(lo), AggValue::int(hi))
        }
        AggFunc::Prod => {
            let branches = parts
                .branches
                .iter()
                .map(|(t, f)| Ok((checked_prod(t)?, checked_prod(f)?)))
                .collect::<Result<Vec<_>>>()?;
            let (lo, hi) = product_range(checked_prod(&parts.fixed)?, &branches)?;
            (AggValue::int(lo), AggValue::int(hi))
        }
        AggFunc::Min | AggFunc::Max | AggFunc::Avg => enumerate_branches(agg.func, &parts)?,
    };
    Ok(Bounds {
        lb,
        ub,
        empty_possible,
        empty_certain,
    })
}

fn enumerate_branches(func: AggFunc, parts: &Split) -> Result<(AggValue, AggValue)> {
    let k = parts.branches.len();
    if k > MAX_BRANCH_ATOMS {
        return Err(Error::TooLarge {
            what: "undefined condition atoms",
            size: k,
            limit: MAX_BRANCH_ATOMS,
        });
    }
    let mut lo: Option<Rational64> = None;
    let mut hi: Option<Rational64> = None;
    let mut multiset = Vec::with_capacity(parts.fixed.len() + 8);
    for choice in 0u64..(1u64 << k) {
        crate::stats::record_interval_visit();
        multiset.clear();
        multiset.extend_from_slice(&parts.fixed);
        for (j, (t, f)) in parts.branches.iter().enumerate() {
            multiset.extend_from_slice(if choice >> j & 1 == 1 { t } else { f });
        }
        if let AggValue::Defined(v) = aggregate_value(func, &multiset)? {
            lo = Some(lo.map_or(v, |l| l.min(v)));
            hi = Some(hi.map_or(v, |h| h.max(v)));
        }
    }
    let wrap = |v: Option<Rational64>| v.map_or(AggValue::Undefined, AggValue::Defined);
    Ok((wrap(lo), wrap(hi)))
}

/// Three-valued truth of an aggregate atom from its bounds.
///
/// SUM, PROD and CARD (CARD counts as SUM of unit weights) are decided by
/// comparing `bound` with `[LB, UB]`. For `=` and `≠` this loses precision
/// when the achievable values straddle the bound without hitting it. MIN,
/// MAX and AVG use the interval truth of `ult`.
pub fn bnd_truth(agg: &AggregateAtom, pair: &Pair) -> Result<TruthValue> {
    pair.ensure_consistent()?;
    match agg.func {
        AggFunc::Sum | AggFunc::Prod | AggFunc::Card => {}
        AggFunc::Min | AggFunc::Max | AggFunc::Avg => return ult_truth(agg, pair),
    }
    let b = exact_bounds(agg, pair)?;
    let (Some(lb), Some(ub)) = (b.lb.value(), b.ub.value()) else {
        unreachable!("SUM, PROD and CARD are total")
    };
    let w = Rational64::from_integer(agg.bound);
    let outside = lb > w || ub < w;
    let pinned = lb == w && ub == w;
    let (t, f) = match agg.cmp {
        Cmp::Eq => (pinned, outside),
        Cmp::Ne => (outside, pinned),
        Cmp::Ge => (lb >= w, ub < w),
        Cmp::Gt => (lb > w, ub <= w),
        Cmp::Le => (ub <= w, lb > w),
        Cmp::Lt => (ub < w, lb >= w),
    };
    Ok(match (t, f) {
        (true, _) => TruthValue::True,
        (false, true) => TruthValue::False,
        (false, false) => TruthValue::Unknown,
    })
}
