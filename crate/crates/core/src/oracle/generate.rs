//! Seeded random programs and aggregate atoms.
//!
//! Defaults: up to 6 atoms named `a0, a1, ...`, up to 8 rules, up to 3 body
//! elements, weights and bounds in [-3, 3], every aggregate function and
//! comparison. The same seed always yields the same program.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{
    AggFunc, AggregateAtom, Atom, BodyElement, Cmp, Entry, Literal, Program, Rule, Universe,
};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub min_atoms: usize,
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
    pub max_entries: usize,
    pub min_weight: i64,
    pub max_weight: i64,
    /// Percentage of body elements that are aggregates.
    pub aggregate_percent: u32,
    /// Percentage of literals that are negated.
    pub negation_percent: u32,
    pub funcs: Vec<AggFunc>,
    pub cmps: Vec<Cmp>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            min_atoms: 1,
            max_atoms: 6,
            max_rules: 8,
            max_body: 3,
            max_entries: 4,
            min_weight: -3,
            max_weight: 3,
            aggregate_percent: 50,
            negation_percent: 30,
            funcs: AggFunc::ALL.to_vec(),
            cmps: Cmp::ALL.to_vec(),
        }
    }
}

impl GeneratorConfig {
    pub fn aggregate_free() -> Self {
        GeneratorConfig {
            aggregate_percent: 0,
            ..Self::default()
        }
    }
}

pub fn universe(width: usize) -> Universe {
    Universe::from_names((0..width).map(|i| format!("a{i}"))).expect("small universe")
}

pub fn random_literal(rng: &mut GenRng, width: usize, cfg: &GeneratorConfig) -> Literal {
    let atom = Atom(rng.gen_range(0..width));
    if rng.gen_range(0..100) < cfg.negation_percent {
        Literal::neg(atom)
    } else {
        Literal::pos(atom)
    }
}

pub fn random_aggregate(rng: &mut GenRng, width: usize, cfg: &GeneratorConfig) -> AggregateAtom {
    let func = *cfg.funcs.choose(rng).expect("at least one function");
    let cmp = *cfg.cmps.choose(rng).expect("at least one comparison");
    let n = rng.gen_range(0..=cfg.max_entries);
    let entries = (0..n)
        .map(|_| Entry {
            weight: rng.gen_range(cfg.min_weight..=cfg.max_weight),
            cond: random_literal(rng, width, cfg),
        })
        .collect();
    let bound = rng.gen_range(cfg.min_weight..=cfg.max_weight);
    AggregateAtom::new(func, entries, cmp, bound)
}

pub fn random_element(rng: &mut GenRng, width: usize, cfg: &GeneratorConfig) -> BodyElement {
    if rng.gen_range(0..100) < cfg.aggregate_percent {
        random_aggregate(rng, width, cfg).into()
    } else {
        random_literal(rng, width, cfg).into()
    }
}

pub fn random_program(rng: &mut GenRng, cfg: &GeneratorConfig) -> Program {
    let width = rng.gen_range(cfg.min_atoms..=cfg.max_atoms);
    random_program_over(rng, width, cfg)
}

/// A program over exactly `width` atoms.
pub fn random_program_over(rng: &mut GenRng, width: usize, cfg: &GeneratorConfig) -> Program {
    let n_rules = rng.gen_range(1..=cfg.max_rules);
    let rules = (0..n_rules)
        .map(|_| {
            let head = Atom(rng.gen_range(0..width));
            let len = rng.gen_range(0..=cfg.max_body);
            let body = (0..len).map(|_| random_element(rng, width, cfg)).collect();
            Rule::new(head, body)
        })
        .collect();
    Program::new(universe(width), rules)
}

/// A random program whose aggregates all satisfy `keep`.
pub fn random_program_filtered(
    rng: &mut GenRng,
    cfg: &GeneratorConfig,
    mut keep: impl FnMut(&AggregateAtom) -> bool,
) -> Program {
    let width = rng.gen_range(cfg.min_atoms..=cfg.max_atoms);
    let n_rules = rng.gen_range(1..=cfg.max_rules);
    let mut rules = Vec::with_capacity(n_rules);
    for _ in 0..n_rules {
        let head = Atom(rng.gen_range(0..width));
        let len = rng.gen_range(0..=cfg.max_body);
        let mut body = Vec::with_capacity(len);
        while body.len() < len {
            let elem = random_element(rng, width, cfg);
            if elem.as_aggregate().is_none_or(&mut keep) {
                body.push(elem);
            }
        }
        rules.push(Rule::new(head, body));
    }
    Program::new(universe(width), rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let cfg = GeneratorConfig::default();
        let a = random_program(&mut rng(7), &cfg);
        let b = random_program(&mut rng(7), &cfg);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn respects_limits() {
        let cfg = GeneratorConfig::default();
        let mut r = rng(1);
        for _ in 0..200 {
            let p = random_program(&mut r, &cfg);
            assert!((1..=6).contains(&p.width()));
            assert!((1..=8).contains(&p.rules.len()));
            for rule in &p.rules {
                assert!(rule.body.len() <= 3);
            }
            for agg in p.aggregates() {
                assert!((-3..=3).contains(&agg.bound));
                assert!(agg.entries.iter().all(|e| (-3..=3).contains(&e.weight)));
            }
        }
    }

    #[test]
    fn aggregate_free_config() {
        let mut r = rng(3);
        for _ in 0..50 {
            assert!(!random_program(&mut r, &GeneratorConfig::aggregate_free()).has_aggregates());
        }
    }
}
