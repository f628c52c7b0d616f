//! Residuals: what is left of a structure after a trace has been executed.
//!
//! Removing a step deletes the irreversibly executed events (forward events
//! that are not reversible, together with their reversible causes) and
//! everything in conflict with them, and demotes reversible events whose
//! undoing has become impossible. All relations of a residual are the root's
//! relations restricted to what survives, so a residual is identified by the
//! triple of its events, reversible events and initial configuration
//! ([`ResidualKey`]).

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::kernel::{EventSet, Pes, Rpes, StructuralError, Universe};
use crate::stepsem::{
    check_enabled, enumerate_steps, label_unchecked, validate_trace, Configuration, Lts, StateKind,
    Step, StepError, Trace, TraceError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RemovalError {
    #[error("removal is only defined for a step enabled at the initial configuration: {0}")]
    NotEnabled(StepError),
    #[error("removal is only defined along a trace: {0}")]
    InvalidTrace(TraceError),
    #[error("internal consistency violated: {0}")]
    Inconsistent(String),
}

/// Canonical identity of a residual of a fixed root structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidualKey {
    pub events: EventSet,
    pub reversible: EventSet,
    pub initial: EventSet,
}

impl ResidualKey {
    /// `E{..}F{..}C{..}`
    pub fn display(&self, universe: &Universe) -> String {
        format!(
            "E{}F{}C{}",
            universe.fmt_set(self.events),
            universe.fmt_set(self.reversible),
            universe.fmt_set(self.initial)
        )
    }
}

/// Intermediate sets computed while removing one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RemovalRecord {
    /// Irreversibly executed events: `A ∖ F` plus their reversible causes.
    pub tilde: EventSet,
    /// Events in conflict with `tilde`.
    pub conflict_of_tilde: EventSet,
    /// Reversible events losing a reverse cause to the conflict removal.
    pub hat: EventSet,
    /// Reversible events prevented by something in `tilde`.
    pub hat_hat: EventSet,
}

/// Evaluates the removal formulas for `step` without checking that the step
/// is enabled at `r`'s initial configuration.
pub fn apply_removal(r: &Rpes, step: Step) -> (Rpes, RemovalRecord) {
    let events = r.events();
    let reversible = r.reversible();
    let irreversible_forward = step.forward - reversible;
    let reversible_causes = irreversible_forward
        .iter()
        .fold(EventSet::EMPTY, |acc, a| acc | r.causes(a))
        & reversible;
    let tilde = irreversible_forward | reversible_causes;
    let conflict_of_tilde = r.conflicts_of(tilde) & events;
    let remaining = events - (tilde | conflict_of_tilde);
    let hat: EventSet = reversible
        .iter()
        .filter(|&e| !r.reverse_causes(e).is_disjoint(conflict_of_tilde))
        .collect();
    let hat_hat: EventSet = reversible
        .iter()
        .filter(|&e| !r.preventers(e).is_disjoint(tilde))
        .collect();
    let still_reversible = (reversible & remaining) - (hat | hat_hat);
    let initial = ((r.initial() - step.reverse) | step.forward) & remaining;
    let record = RemovalRecord {
        tilde,
        conflict_of_tilde,
        hat,
        hat_hat,
    };
    (r.restrict(remaining, still_reversible, initial), record)
}

/// `r ∖ (A ∪ B̲)` for a step enabled at `r`'s initial configuration.
pub fn remove_step(r: &Rpes, step: Step) -> Result<Rpes, RemovalError> {
    remove_step_audited(r, step).map(|(res, _)| res)
}

pub fn remove_step_audited(r: &Rpes, step: Step) -> Result<(Rpes, RemovalRecord), RemovalError> {
    check_enabled(r, Configuration::new(r.initial()), step).map_err(RemovalError::NotEnabled)?;
    Ok(apply_removal(r, step))
}

/// The residual chain `r ∖ t_0, ..., r ∖ t_n` of a trace together with its
/// configurations and the per-step removal records.
#[derive(Debug, Clone)]
pub struct ResidualChain {
    pub configurations: Vec<Configuration>,
    pub residuals: Vec<Rpes>,
    pub records: Vec<RemovalRecord>,
}

impl ResidualChain {
    pub fn last(&self) -> &Rpes {
        self.residuals.last().expect("chain always holds r ∖ ε")
    }
}

/// Validates `t` against `r` and folds the removal over its steps.
pub fn residual_chain(r: &Rpes, t: &Trace) -> Result<ResidualChain, RemovalError> {
    let configurations = validate_trace(r, t).map_err(RemovalError::InvalidTrace)?;
    let mut residuals = vec![r.clone()];
    let mut records = Vec::with_capacity(t.len());
    for &step in t.steps() {
        let (next, record) = apply_removal(residuals.last().expect("nonempty"), step);
        residuals.push(next);
        records.push(record);
    }
    Ok(ResidualChain {
        configurations,
        residuals,
        records,
    })
}

/// `r ∖ t`; the empty trace gives `r` back.
pub fn remove_trace(r: &Rpes, t: &Trace) -> Result<Rpes, RemovalError> {
    residual_chain(r, t).map(|chain| chain.last().clone())
}

/// Identity of `residual` as a state of the residual transition system of
/// `root`, after checking that its relations are the root's restricted ones.
pub fn residual_key(root: &Rpes, residual: &Rpes) -> Result<ResidualKey, RemovalError> {
    if root.universe() != residual.universe() {
        return Err(RemovalError::Inconsistent(
            "residual belongs to a different universe".into(),
        ));
    }
    if !residual.events().is_subset(root.events())
        || !residual.reversible().is_subset(root.reversible())
    {
        return Err(RemovalError::Inconsistent(
            "residual is not a substructure of its root".into(),
        ));
    }
    let key = key_of(residual);
    if root.restrict(key.events, key.reversible, key.initial) != *residual {
        return Err(RemovalError::Inconsistent(format!(
            "relations of residual {} are not the root's restricted relations",
            key.display(root.universe())
        )));
    }
    Ok(key)
}

fn key_of(r: &Rpes) -> ResidualKey {
    ResidualKey {
        events: r.events(),
        reversible: r.reversible(),
        initial: r.initial(),
    }
}

/// Residual transition system with states identified by [`ResidualKey`].
pub fn build_te(r: &Rpes) -> Lts {
    build_te_bounded(r, None)
}

pub fn build_te_bounded(r: &Rpes, max_step_size: Option<usize>) -> Lts {
    let u = r.universe();
    let start = key_of(r);
    let mut lts = Lts::new(StateKind::Residual, start.display(u));
    let mut seen: BTreeMap<ResidualKey, ()> = BTreeMap::from([(start, ())]);
    let mut queue = VecDeque::from([r.clone()]);
    while let Some(current) = queue.pop_front() {
        let from = key_of(&current).display(u);
        for step in enumerate_steps(
            &current,
            Configuration::new(current.initial()),
            max_step_size,
        ) {
            let (next, _) = apply_removal(&current, step);
            let key = key_of(&next);
            debug_assert_eq!(residual_key(r, &next), Ok(key));
            lts.add_transition(
                from.clone(),
                label_unchecked(&current, step),
                key.display(u),
            );
            if seen.insert(key, ()).is_none() {
                queue.push_back(next);
            }
        }
    }
    lts
}

/// Full rendering of a residual: its key followed by every relation.
pub fn structure_text(r: &Rpes) -> String {
    let u = r.universe();
    let rel = |pairs: Vec<(usize, usize)>| {
        pairs
            .iter()
            .map(|&(a, b)| format!("{}>{}", u.id(a), u.id(b)))
            .collect::<Vec<_>>()
            .join(",")
    };
    let labels: Vec<String> = r
        .events()
        .iter()
        .map(|e| format!("{}:{}", u.id(e), r.label(e)))
        .collect();
    format!(
        "{}|<[{}]#[{}]rc[{}]pr[{}]l[{}]",
        key_of(r).display(u),
        rel(r.causality_pairs()),
        rel(r.conflict_pairs()),
        rel(r.reverse_causality_pairs()),
        rel(r.prevention_pairs()),
        labels.join(",")
    )
}

/// Cross-check for [`build_te`]: the same unfolding, but states are whole
/// residual structures compared by full structural equality and named by
/// [`structure_text`].
pub fn build_te_full_structure(r: &Rpes, max_step_size: Option<usize>) -> Lts {
    let mut lts = Lts::new(StateKind::Opaque, structure_text(r));
    let mut seen: HashMap<Rpes, String> = HashMap::from([(r.clone(), structure_text(r))]);
    let mut queue = VecDeque::from([r.clone()]);
    while let Some(current) = queue.pop_front() {
        let from = seen[&current].clone();
        for step in enumerate_steps(
            &current,
            Configuration::new(current.initial()),
            max_step_size,
        ) {
            let (next, _) = apply_removal(&current, step);
            let label = label_unchecked(&current, step);
            let name = match seen.get(&next) {
                Some(name) => name.clone(),
                None => {
                    let name = structure_text(&next);
                    seen.insert(next.clone(), name.clone());
                    queue.push_back(next);
                    name
                }
            };
            lts.add_transition(from.clone(), label, name);
        }
    }
    lts
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigRemovalError {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("{0} is not conflict-free")]
    NotConflictFree(String),
    #[error("{0} is not left-closed")]
    NotLeftClosed(String),
}

/// Configuration-indexed removal on a PES: drops `c` and everything in
/// conflict with it.
pub fn remove_configuration(p: &Pes, c: Configuration) -> Result<Pes, ConfigRemovalError> {
    let set = c.events();
    if let Some(i) = (set - p.events()).iter().next() {
        return Err(StructuralError::UnknownEvent {
            id: p.universe().id(i).to_string(),
            context: "configuration",
        }
        .into());
    }
    let shown = || p.universe().fmt_set(set);
    if !p.is_conflict_free(set) {
        return Err(ConfigRemovalError::NotConflictFree(shown()));
    }
    if !p.is_left_closed(set) {
        return Err(ConfigRemovalError::NotLeftClosed(shown()));
    }
    let in_conflict = set
        .iter()
        .fold(EventSet::EMPTY, |acc, e| acc | p.conflicts(e));
    Ok(p.restrict(p.events() - (set | in_conflict)))
}

impl fmt::Display for RemovalRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tilde={:?} conflict={:?} hat={:?} hathat={:?}",
            self.tilde, self.conflict_of_tilde, self.hat, self.hat_hat
        )
    }
}
