//! Per-thread instrumentation of interval enumeration.
//!
//! Every code path that evaluates an aggregate by visiting the
//! interpretations of an interval records how many it visited. Relations
//! with polynomial per-pair evaluation never touch the counter.

use std::cell::Cell;

thread_local! {
    static INTERVAL_VISITS: Cell<u64> = const { Cell::new(0) };
}

pub(crate) fn record_interval_visit() {
    INTERVAL_VISITS.with(|c| c.set(c.get() + 1));
}

/// Interpretations visited by interval enumeration on this thread.
pub fn interval_visits() -> u64 {
    INTERVAL_VISITS.with(Cell::get)
}

pub fn reset_interval_visits() {
    INTERVAL_VISITS.with(|c| c.set(0));
}
