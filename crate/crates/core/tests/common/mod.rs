#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rpes::kernel::{EventSet, Rpes};
use rpes::stepsem::{Configuration, Step};
use rpes::tooling::{gen_rpes, parse_rpes, GenMode, GenParams, RpesDocument};

pub const FIXTURES: [&str; 5] = ["e0", "e1", "e2", "e3", "e4"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.rpes"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture(name: &str) -> RpesDocument {
    parse_rpes(&fixture_text(name)).unwrap()
}

pub fn set(r: &Rpes, ids: &[&str]) -> EventSet {
    r.universe().set_of(ids, "test").unwrap()
}

pub fn config(r: &Rpes, ids: &[&str]) -> Configuration {
    Configuration::new(set(r, ids))
}

pub fn params(n: usize, mode: GenMode, seed: u64) -> GenParams {
    GenParams {
        num_events: n,
        mode,
        seed,
        ..GenParams::default()
    }
}

/// `count` generated structures with 1 to `max_events` events, cycling
/// through the three modes; some start from a nonempty configuration.
pub fn corpus(count: u64, max_events: usize) -> Vec<Rpes> {
    let modes = [GenMode::Any, GenMode::CauseRespecting, GenMode::Causal];
    (0..count)
        .map(|seed| {
            let mut p = params(
                1 + seed as usize % max_events,
                modes[seed as usize % 3],
                seed,
            );
            if seed % 4 == 3 {
                p.init_density = 0.3;
            }
            gen_rpes(&p).unwrap()
        })
        .collect()
}

/// Enabledness by the four clauses, evaluated event by event.
pub fn enabled_by_definition(r: &Rpes, c: EventSet, a: EventSet, b: EventSet) -> bool {
    let events: Vec<usize> = r.events().iter().collect();
    let conflict_free = |s: EventSet| {
        s.iter()
            .all(|x| s.iter().all(|y| !r.conflicts(x).contains(y)))
    };
    let clause_a =
        a.is_disjoint(c) && b.is_subset(c) && b.is_subset(r.reversible()) && conflict_free(c | a);
    let clause_b = a.iter().all(|e| {
        events
            .iter()
            .all(|&x| !r.causes(e).contains(x) || (c.contains(x) && !b.contains(x)))
    });
    let clause_c = b.iter().all(|e| {
        events.iter().all(|&x| {
            !r.reverse_causes(e).contains(x) || (c.contains(x) && (x == e || !b.contains(x)))
        })
    });
    let clause_d = b.iter().all(|e| {
        events
            .iter()
            .all(|&x| !r.preventers(e).contains(x) || !(c.contains(x) || a.contains(x)))
    });
    clause_a && clause_b && clause_c && clause_d
}

/// Every nonempty (A, B) over all subset pairs of the events that satisfies
/// the clauses.
pub fn brute_force_steps(r: &Rpes, c: Configuration) -> BTreeSet<Step> {
    let mut out = BTreeSet::new();
    for a in r.events().subsets() {
        for b in r.events().subsets() {
            if !(a.is_empty() && b.is_empty()) && enabled_by_definition(r, c.events(), a, b) {
                out.insert(Step::new(a, b));
            }
        }
    }
    out
}
