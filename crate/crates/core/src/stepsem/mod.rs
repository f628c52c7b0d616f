//! Step semantics: enabling of mixed steps, configurations, traces and the
//! configuration transition system.

mod explore;
mod lts;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernel::{Action, EventId, EventSet, Rpes, StructuralError, Universe};

pub use explore::{
    enumerate_steps, explore_configs, forwards_reachable_configs, reachable_configs,
    traces_equivalent, validate_trace, Trace, TraceError,
};
pub use lts::{build_tc, build_tc_bounded, LabelParseError, Lts, StateKind, Transition};

/// A set of executed events. Ordered by its sorted id list.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(EventSet);

impl Configuration {
    pub const EMPTY: Configuration = Configuration(EventSet::EMPTY);

    pub fn new(events: EventSet) -> Self {
        Configuration(events)
    }

    pub fn events(self) -> EventSet {
        self.0
    }

    /// Canonical text form, e.g. `{a,b}`.
    pub fn display(self, universe: &Universe) -> String {
        universe.fmt_set(self.0)
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({:?})", self.0)
    }
}

impl From<EventSet> for Configuration {
    fn from(events: EventSet) -> Self {
        Configuration(events)
    }
}

/// A mixed step `A ∪ B̲`: events `forward` are executed while `reverse` are
/// undone.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Step {
    pub forward: EventSet,
    pub reverse: EventSet,
}

impl Step {
    pub fn new(forward: EventSet, reverse: EventSet) -> Self {
        Step { forward, reverse }
    }

    pub fn forward(events: EventSet) -> Self {
        Step::new(events, EventSet::EMPTY)
    }

    pub fn reverse(events: EventSet) -> Self {
        Step::new(EventSet::EMPTY, events)
    }

    pub fn is_empty(self) -> bool {
        self.forward.is_empty() && self.reverse.is_empty()
    }

    pub fn size(self) -> usize {
        self.forward.len() + self.reverse.len()
    }

    /// `a,c|b` form used on the command line.
    pub fn display(self, universe: &Universe) -> String {
        format!(
            "{}|{}",
            universe.names(self.forward).join(","),
            universe.names(self.reverse).join(",")
        )
    }
}

/// Multiset of actions labelling a step. Forward and reverse occurrences are
/// counted alike.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StepLabel(BTreeMap<Action, u32>);

impl StepLabel {
    pub fn new() -> Self {
        StepLabel::default()
    }

    pub fn add(&mut self, action: Action) {
        *self.0.entry(action).or_insert(0) += 1;
    }

    pub fn count(&self, action: &str) -> u32 {
        self.0
            .iter()
            .find(|(a, _)| a.as_str() == action)
            .map_or(0, |(_, n)| *n)
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Action, u32)> {
        self.0.iter().map(|(a, n)| (a, *n))
    }
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}:{n}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for StepLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LabelParseError(s.to_string());
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(bad)?;
        let mut label = StepLabel::new();
        if inner.is_empty() {
            return Ok(label);
        }
        for entry in inner.split(',') {
            let (name, count) = entry.split_once(':').ok_or_else(bad)?;
            let action = Action::new(name).map_err(|_| bad())?;
            let count: u32 = count.parse().map_err(|_| bad())?;
            if count == 0 || label.0.insert(action, count).is_some() {
                return Err(bad());
            }
        }
        Ok(label)
    }
}

/// The enabling clause a step violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Clause::A => "a",
            Clause::B => "b",
            Clause::C => "c",
            Clause::D => "d",
        };
        f.write_str(c)
    }
}

/// Why a step is not enabled: the first violated clause and the events
/// witnessing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub clause: Clause,
    pub witnesses: Vec<EventId>,
    pub message: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {}: {}", self.clause, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("step not enabled ({0})")]
    NotEnabled(Rejection),
}

fn reject(r: &Rpes, clause: Clause, witnesses: &[usize], message: String) -> Rejection {
    Rejection {
        clause,
        witnesses: witnesses
            .iter()
            .map(|&i| r.universe().id(i).clone())
            .collect(),
        message,
    }
}

/// Checks clauses a-d in order; `Err` names the first failure.
pub(crate) fn enabling_check(r: &Rpes, c: EventSet, s: Step) -> Result<(), Rejection> {
    let u = r.universe();
    let name = |i: usize| u.id(i).as_str();
    let (a, b) = (s.forward, s.reverse);
    if let Some(e) = (a & c).iter().next() {
        return Err(reject(
            r,
            Clause::A,
            &[e],
            format!("{} is already in the configuration", name(e)),
        ));
    }
    if let Some(e) = (b - c).iter().next() {
        return Err(reject(
            r,
            Clause::A,
            &[e],
            format!(
                "{} cannot be undone: it is not in the configuration",
                name(e)
            ),
        ));
    }
    if let Some(e) = (b - r.reversible()).iter().next() {
        return Err(reject(
            r,
            Clause::A,
            &[e],
            format!("{} is not reversible", name(e)),
        ));
    }
    let union = c | a;
    for x in union {
        if let Some(y) = (r.conflicts(x) & union).iter().next() {
            return Err(reject(
                r,
                Clause::A,
                &[x, y],
                format!("{} and {} are in conflict", name(x), name(y)),
            ));
        }
    }
    let kept = c - b;
    for e in a {
        if let Some(cause) = (r.causes(e) - kept).iter().next() {
            return Err(reject(
                r,
                Clause::B,
                &[e, cause],
                format!("cause {} of {} is absent", name(cause), name(e)),
            ));
        }
    }
    for e in b {
        let allowed = c - b.without(e);
        if let Some(rc) = (r.reverse_causes(e) - allowed).iter().next() {
            return Err(reject(
                r,
                Clause::C,
                &[e, rc],
                format!("reverse cause {} of {}̲ is absent", name(rc), name(e)),
            ));
        }
    }
    for e in b {
        if let Some(p) = (r.preventers(e) & union).iter().next() {
            return Err(reject(
                r,
                Clause::D,
                &[e, p],
                format!("{} prevents undoing {}", name(p), name(e)),
            ));
        }
    }
    Ok(())
}

fn check_step_events(r: &Rpes, c: Configuration, s: Step) -> Result<(), StructuralError> {
    r.check_events(c.events())?;
    r.check_events(s.forward)?;
    r.check_events(s.reverse)
}

/// Whether `s` is enabled at `c`.
pub fn is_enabled(r: &Rpes, c: Configuration, s: Step) -> Result<bool, StructuralError> {
    check_step_events(r, c, s)?;
    Ok(enabling_check(r, c.events(), s).is_ok())
}

/// Like [`is_enabled`] but explains a refusal.
pub fn check_enabled(r: &Rpes, c: Configuration, s: Step) -> Result<(), StepError> {
    check_step_events(r, c, s)?;
    enabling_check(r, c.events(), s).map_err(StepError::NotEnabled)
}

/// `(C ∖ B) ∪ A` for an enabled step.
pub fn apply_step(r: &Rpes, c: Configuration, s: Step) -> Result<Configuration, StepError> {
    check_enabled(r, c, s)?;
    let next = apply_unchecked(c, s);
    debug_assert!(r.is_conflict_free(next.events()));
    Ok(next)
}

pub(crate) fn apply_unchecked(c: Configuration, s: Step) -> Configuration {
    Configuration((c.events() - s.reverse) | s.forward)
}

/// Multiset of the labels of `A ∪ B`.
pub fn step_label(r: &Rpes, s: Step) -> Result<StepLabel, StructuralError> {
    r.check_events(s.forward)?;
    r.check_events(s.reverse)?;
    Ok(label_unchecked(r, s))
}

pub(crate) fn label_unchecked(r: &Rpes, s: Step) -> StepLabel {
    let mut label = StepLabel::new();
    for e in s.forward | s.reverse {
        label.add(r.label(e).clone());
    }
    label
}
