use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use super::{apply_unchecked, check_enabled, enabling_check, Configuration, Step, StepError};
use crate::kernel::{EventSet, Rpes};

/// All nonempty steps enabled at `c` with at most `max_step_size` events,
/// in canonical order.
///
/// Forward candidates are restricted to events outside `c` whose causes are
/// all in `c` and which do not conflict with `c`; reverse candidates to the
/// reversible events of `c`. Every enabled step draws from these.
pub fn enumerate_steps(r: &Rpes, c: Configuration, max_step_size: Option<usize>) -> Vec<Step> {
    let current = c.events();
    let forward_candidates: EventSet = (r.events() - current)
        .iter()
        .filter(|&e| r.causes(e).is_subset(current) && r.conflicts(e).is_disjoint(current))
        .collect();
    let reverse_candidates = current & r.reversible();
    let limit = max_step_size.unwrap_or(usize::MAX);
    let mut steps = Vec::new();
    for forward in forward_candidates.subsets() {
        if forward.len() > limit || !r.is_conflict_free(forward) {
            continue;
        }
        for reverse in reverse_candidates.subsets() {
            let step = Step::new(forward, reverse);
            if step.is_empty() || step.size() > limit {
                continue;
            }
            if enabling_check(r, current, step).is_ok() {
                steps.push(step);
            }
        }
    }
    steps.sort_unstable();
    steps
}

/// Breadth-first exploration from the initial configuration, returning every
/// reached configuration with its distance. `forward_only` restricts to steps
/// without undoing; `max_depth` stops the search early.
pub fn explore_configs(
    r: &Rpes,
    forward_only: bool,
    max_step_size: Option<usize>,
    max_depth: Option<usize>,
) -> BTreeMap<Configuration, usize> {
    let start = Configuration::new(r.initial());
    let mut seen = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        let depth = seen[&c];
        if max_depth.is_some_and(|d| depth >= d) {
            continue;
        }
        for step in enumerate_steps(r, c, max_step_size) {
            if forward_only && !step.reverse.is_empty() {
                continue;
            }
            let next = apply_unchecked(c, step);
            debug_assert!(r.is_conflict_free(next.events()));
            if let std::collections::btree_map::Entry::Vacant(slot) = seen.entry(next) {
                slot.insert(depth + 1);
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Configurations reachable from the initial one by mixed steps.
pub fn reachable_configs(r: &Rpes) -> BTreeSet<Configuration> {
    explore_configs(r, false, None, None).into_keys().collect()
}

/// Configurations reachable from the initial one by forward steps only.
pub fn forwards_reachable_configs(r: &Rpes) -> BTreeSet<Configuration> {
    explore_configs(r, true, None, None).into_keys().collect()
}

/// A finite sequence of steps.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(pub Vec<Step>);

impl Trace {
    pub fn new(steps: Vec<Step>) -> Self {
        Trace(steps)
    }

    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn then(&self, step: Step) -> Trace {
        let mut steps = self.0.clone();
        steps.push(step);
        Trace(steps)
    }

    pub fn concat(&self, other: &Trace) -> Trace {
        Trace(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn prefix(&self, n: usize) -> Trace {
        Trace(self.0[..n].to_vec())
    }

    pub fn suffix(&self, n: usize) -> Trace {
        Trace(self.0[n..].to_vec())
    }

    /// `a|;b,c|d` form.
    pub fn display(&self, universe: &crate::kernel::Universe) -> String {
        self.0
            .iter()
            .map(|s| s.display(universe))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Step `index` (1-based) of a trace is not enabled at its predecessor.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index}: {error}")]
pub struct TraceError {
    pub index: usize,
    pub error: StepError,
}

/// Replays `t` from the initial configuration and returns `C0, ..., Cn`.
pub fn validate_trace(r: &Rpes, t: &Trace) -> Result<Vec<Configuration>, TraceError> {
    let mut current = Configuration::new(r.initial());
    let mut out = vec![current];
    for (i, &step) in t.steps().iter().enumerate() {
        check_enabled(r, current, step).map_err(|error| TraceError {
            index: i + 1,
            error,
        })?;
        current = apply_unchecked(current, step);
        debug_assert!(r.is_conflict_free(current.events()));
        out.push(current);
    }
    Ok(out)
}

/// `last(t1) = last(t2)`.
pub fn traces_equivalent(r: &Rpes, t1: &Trace, t2: &Trace) -> Result<bool, TraceError> {
    let last = |t| validate_trace(r, t).map(|cs| *cs.last().expect("nonempty"));
    Ok(last(t1)? == last(t2)?)
}
