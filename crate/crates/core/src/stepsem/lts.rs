use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::{
    apply_unchecked, enumerate_steps, label_unchecked, reachable_configs, Configuration, StepLabel,
};
use crate::kernel::Rpes;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed step label `{0}`")]
pub struct LabelParseError(pub String);

/// What the state keys of an [`Lts`] denote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StateKind {
    Configuration,
    Residual,
    Opaque,
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Configuration => "configuration",
            StateKind::Residual => "residual",
            StateKind::Opaque => "opaque",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: String,
    pub label: StepLabel,
    pub target: String,
}

/// A finite transition system over multiset labels. States are canonical
/// text keys; both sets are kept sorted so iteration and output are
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    kind: StateKind,
    states: BTreeSet<String>,
    initial: String,
    transitions: BTreeSet<Transition>,
}

impl Lts {
    pub fn new(kind: StateKind, initial: impl Into<String>) -> Self {
        let initial = initial.into();
        Lts {
            kind,
            states: BTreeSet::from([initial.clone()]),
            initial,
            transitions: BTreeSet::new(),
        }
    }

    pub fn add_state(&mut self, state: impl Into<String>) {
        self.states.insert(state.into());
    }

    /// Adds a transition, registering both endpoints as states.
    pub fn add_transition(
        &mut self,
        source: impl Into<String>,
        label: StepLabel,
        target: impl Into<String>,
    ) {
        let (source, target) = (source.into(), target.into());
        self.states.insert(source.clone());
        self.states.insert(target.clone());
        self.transitions.insert(Transition {
            source,
            label,
            target,
        });
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn states(&self) -> &BTreeSet<String> {
        &self.states
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn has_transition(&self, source: &str, label: &StepLabel, target: &str) -> bool {
        self.transitions
            .iter()
            .any(|t| t.source == source && &t.label == label && t.target == target)
    }

    /// Outgoing `(label, target)` pairs of `state`.
    pub fn successors<'a>(
        &'a self,
        state: &'a str,
    ) -> impl Iterator<Item = (&'a StepLabel, &'a str)> + 'a {
        self.transitions
            .iter()
            .filter(move |t| t.source == state)
            .map(|t| (&t.label, t.target.as_str()))
    }

    /// Applies `rename` to every state key.
    pub fn rename_states(&self, kind: StateKind, mut rename: impl FnMut(&str) -> String) -> Lts {
        let map: BTreeMap<&str, String> = self
            .states
            .iter()
            .map(|s| (s.as_str(), rename(s)))
            .collect();
        let mut out = Lts::new(kind, map[self.initial.as_str()].clone());
        for s in map.values() {
            out.add_state(s.clone());
        }
        for t in &self.transitions {
            out.add_transition(
                map[t.source.as_str()].clone(),
                t.label.clone(),
                map[t.target.as_str()].clone(),
            );
        }
        out
    }
}

/// Text listing: header, initial state, one line per state and transition.
impl fmt::Display for Lts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind {}", self.kind)?;
        writeln!(f, "states {}", self.states.len())?;
        writeln!(f, "transitions {}", self.transitions.len())?;
        writeln!(f, "initial {}", self.initial)?;
        for s in &self.states {
            writeln!(f, "state {s}")?;
        }
        for t in &self.transitions {
            writeln!(f, "trans {} {} {}", t.source, t.label, t.target)?;
        }
        Ok(())
    }
}

/// Configuration transition system: reachable configurations, with one
/// transition per distinct (source, label, target) realised by a nonempty
/// enabled step.
pub fn build_tc(r: &Rpes) -> Lts {
    build_tc_bounded(r, None)
}

/// [`build_tc`] with steps limited to `max_step_size` events.
pub fn build_tc_bounded(r: &Rpes, max_step_size: Option<usize>) -> Lts {
    let u = r.universe();
    let key = |c: Configuration| c.display(u);
    let start = Configuration::new(r.initial());
    let mut lts = Lts::new(StateKind::Configuration, key(start));
    let configs = if max_step_size.is_none() {
        reachable_configs(r)
    } else {
        super::explore_configs(r, false, max_step_size, None)
            .into_keys()
            .collect()
    };
    for &c in &configs {
        lts.add_state(key(c));
        for step in enumerate_steps(r, c, max_step_size) {
            let next = apply_unchecked(c, step);
            lts.add_transition(key(c), label_unchecked(r, step), key(next));
        }
    }
    debug_assert_eq!(lts.num_states(), configs.len());
    lts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::RawRpes;

    #[test]
    fn tc_of_e2_matches_figure() {
        let r = RawRpes::new(&["a", "b"])
            .reversible(&["a"])
            .prevents(&[("b", "a")])
            .build()
            .unwrap();
        let tc = build_tc(&r);
        assert_eq!(tc.num_states(), 4);
        let edges: Vec<String> = tc
            .transitions()
            .iter()
            .map(|t| format!("{} {} {}", t.source, t.label, t.target))
            .collect();
        assert_eq!(
            edges,
            [
                "{a} {a:1} {}",
                "{a} {b:1} {a,b}",
                "{b} {a:1} {a,b}",
                "{} {a:1} {a}",
                "{} {a:1,b:1} {a,b}",
                "{} {b:1} {b}",
            ]
        );
        assert_eq!(tc.initial(), "{}");
    }

    #[test]
    fn tc_of_empty_structure() {
        let tc = build_tc(&Rpes::empty());
        assert_eq!(tc.num_states(), 1);
        assert_eq!(tc.num_transitions(), 0);
    }

    #[test]
    fn renaming_merges_transitions() {
        // a step is determined by its endpoints, so collapsing only shows up
        // once states are identified
        let r = RawRpes::new(&["a", "b"])
            .label("a", "x")
            .label("b", "x")
            .conflicts(&[("a", "b")])
            .build()
            .unwrap();
        let tc = build_tc(&r);
        assert_eq!(tc.num_states(), 3);
        assert_eq!(tc.num_transitions(), 2);
        let lts = tc.rename_states(StateKind::Opaque, |s| format!("s{}", s.len()));
        assert_eq!(lts.num_states(), 2);
        assert_eq!(lts.num_transitions(), 1);
    }
}
