//! Prime and reversible prime event structures.
//!
//! Structures are built from name-based raw descriptions ([`RawPes`],
//! [`RawRpes`]) and stored over an index-based [`Universe`]: event `i` is the
//! `i`-th id in sorted order and every relation is kept as one [`EventSet`]
//! per event. Residuals share the universe of the structure they were derived
//! from, which makes "restricted to `E'`" a matter of masking.

mod classify;
mod eventset;
mod validate;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use classify::{
    is_causal, is_cause_respecting, phi, sustained_causation, varphi, ConversionError,
};
pub use eventset::{EventSet, MAX_EVENTS};
pub use validate::{validate_pes, validate_rpes, Axiom, ValidationReport, Violation};

/// Identifier of an event: a nonempty token over `[A-Za-z0-9_]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(String);

/// An action name from the global alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(String);

pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

macro_rules! token_type {
    ($ty:ident, $what:literal) => {
        impl $ty {
            pub fn new(token: impl Into<String>) -> Result<Self, StructuralError> {
                let token = token.into();
                if is_token(&token) {
                    Ok($ty(token))
                } else {
                    Err(StructuralError::InvalidToken { kind: $what, token })
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", self.0)
            }
        }
    };
}

token_type!(EventId, "event id");
token_type!(Action, "action");

/// Problems with a raw description that prevent interpreting it at all.
/// These are distinct from axiom violations, which are collected in a
/// [`ValidationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("invalid {kind} `{token}`: expected a nonempty token over [A-Za-z0-9_]")]
    InvalidToken { kind: &'static str, token: String },
    #[error("event `{0}` declared more than once")]
    DuplicateEvent(String),
    #[error("unknown event `{id}` referenced in {context}")]
    UnknownEvent { id: String, context: &'static str },
    #[error("event `{id}` used as a reversible target in {context} but is not reversible")]
    NotReversible { id: String, context: &'static str },
    #[error("event `{0}` has more than one label")]
    ConflictingLabel(String),
    #[error("{count} events declared; at most {MAX_EVENTS} are supported")]
    TooManyEvents { count: usize },
    #[error("event index {0} is outside the structure")]
    EventOutOfRange(usize),
}

/// Errors from turning a raw description into a structure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("structure violates its axioms:\n{0}")]
    Invalid(ValidationReport),
}

/// The event ids and labels shared by a structure and everything derived
/// from it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    ids: Vec<EventId>,
    labels: Vec<Action>,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, index: usize) -> &EventId {
        &self.ids[index]
    }

    pub fn label(&self, index: usize) -> &Action {
        &self.labels[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .ok()
    }

    pub fn all(&self) -> EventSet {
        EventSet::full(self.ids.len())
    }

    /// Resolves a list of ids into a set.
    pub fn set_of<S: AsRef<str>>(
        &self,
        ids: impl IntoIterator<Item = S>,
        context: &'static str,
    ) -> Result<EventSet, StructuralError> {
        let mut set = EventSet::EMPTY;
        for id in ids {
            let id = id.as_ref();
            let i = self
                .index_of(id)
                .ok_or_else(|| StructuralError::UnknownEvent {
                    id: id.to_string(),
                    context,
                })?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn names(&self, set: EventSet) -> Vec<&str> {
        set.iter().map(|i| self.ids[i].as_str()).collect()
    }

    /// Renders a set as `{a,b}`.
    pub fn fmt_set(&self, set: EventSet) -> String {
        format!("{{{}}}", self.names(set).join(","))
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.ids).finish()
    }
}

/// Name-based description of a PES, as read from input. Nothing is checked
/// until [`RawPes::build`] or [`validate_pes`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawPes {
    pub events: Vec<String>,
    pub labels: Vec<(String, String)>,
    pub causality: Vec<(String, String)>,
    pub conflict: Vec<(String, String)>,
    pub initial: Vec<String>,
}

/// Name-based description of an RPES. `(e, u)` in `reverse_causality` means
/// `e ≺ u̲`; in `prevention` it means `e ▷ u̲`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawRpes {
    pub events: Vec<String>,
    pub labels: Vec<(String, String)>,
    pub causality: Vec<(String, String)>,
    pub conflict: Vec<(String, String)>,
    pub reversible: Vec<String>,
    pub reverse_causality: Vec<(String, String)>,
    pub prevention: Vec<(String, String)>,
    pub initial: Vec<String>,
}

fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
    list.iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

impl RawRpes {
    pub fn new(events: &[&str]) -> Self {
        RawRpes {
            events: names(events),
            ..Default::default()
        }
    }

    pub fn label(mut self, event: &str, action: &str) -> Self {
        self.labels.push((event.into(), action.into()));
        self
    }

    pub fn causes(mut self, list: &[(&str, &str)]) -> Self {
        self.causality.extend(pairs(list));
        self
    }

    pub fn conflicts(mut self, list: &[(&str, &str)]) -> Self {
        self.conflict.extend(pairs(list));
        self
    }

    pub fn reversible(mut self, list: &[&str]) -> Self {
        self.reversible.extend(names(list));
        self
    }

    pub fn reverse_causes(mut self, list: &[(&str, &str)]) -> Self {
        self.reverse_causality.extend(pairs(list));
        self
    }

    pub fn prevents(mut self, list: &[(&str, &str)]) -> Self {
        self.prevention.extend(pairs(list));
        self
    }

    pub fn initial(mut self, list: &[&str]) -> Self {
        self.initial.extend(names(list));
        self
    }

    /// Resolves, closes and validates the description.
    pub fn build(&self) -> Result<Rpes, BuildError> {
        let rpes = Rpes::from_raw_unchecked(self)?;
        let report = rpes.validate();
        if report.valid {
            Ok(rpes)
        } else {
            Err(BuildError::Invalid(report))
        }
    }
}

impl RawPes {
    pub fn new(events: &[&str]) -> Self {
        RawPes {
            events: names(events),
            ..Default::default()
        }
    }

    pub fn label(mut self, event: &str, action: &str) -> Self {
        self.labels.push((event.into(), action.into()));
        self
    }

    pub fn causes(mut self, list: &[(&str, &str)]) -> Self {
        self.causality.extend(pairs(list));
        self
    }

    pub fn conflicts(mut self, list: &[(&str, &str)]) -> Self {
        self.conflict.extend(pairs(list));
        self
    }

    pub fn build(&self) -> Result<Pes, BuildError> {
        let pes = Pes::from_raw_unchecked(self)?;
        let report = pes.validate();
        if report.valid {
            Ok(pes)
        } else {
            Err(BuildError::Invalid(report))
        }
    }
}

fn universe_from(
    events: &[String],
    labels: &[(String, String)],
) -> Result<Arc<Universe>, StructuralError> {
    if events.len() > MAX_EVENTS {
        return Err(StructuralError::TooManyEvents {
            count: events.len(),
        });
    }
    let mut ids = Vec::with_capacity(events.len());
    for e in events {
        ids.push(EventId::new(e.clone())?);
    }
    ids.sort();
    for w in ids.windows(2) {
        if w[0] == w[1] {
            return Err(StructuralError::DuplicateEvent(w[0].to_string()));
        }
    }
    let mut assigned: Vec<Option<Action>> = vec![None; ids.len()];
    let probe = Universe {
        ids: ids.clone(),
        labels: Vec::new(),
    };
    for (e, a) in labels {
        let i = probe
            .index_of(e)
            .ok_or_else(|| StructuralError::UnknownEvent {
                id: e.clone(),
                context: "label",
            })?;
        let action = Action::new(a.clone())?;
        match &assigned[i] {
            Some(prev) if *prev != action => {
                return Err(StructuralError::ConflictingLabel(e.clone()))
            }
            _ => assigned[i] = Some(action),
        }
    }
    let labels = ids
        .iter()
        .zip(assigned)
        .map(|(id, a)| a.unwrap_or_else(|| Action(id.0.clone())))
        .collect();
    Ok(Arc::new(Universe { ids, labels }))
}

fn resolve_pairs(
    universe: &Universe,
    list: &[(String, String)],
    context: &'static str,
) -> Result<Vec<(usize, usize)>, StructuralError> {
    list.iter()
        .map(|(a, b)| {
            let find = |id: &String| {
                universe
                    .index_of(id)
                    .ok_or_else(|| StructuralError::UnknownEvent {
                        id: id.clone(),
                        context,
                    })
            };
            Ok((find(a)?, find(b)?))
        })
        .collect()
}

/// Transitive closure of a relation given as successor-of lists:
/// `below[y]` is the set of `x` with `x < y`.
pub(crate) fn transitive_closure(below: &mut [EventSet]) {
    // Warshall over bitsets
    let n = below.len();
    for k in 0..n {
        for y in 0..n {
            if below[y].contains(k) {
                below[y] = below[y] | below[k];
            }
        }
    }
}

/// A prime event structure. The initial configuration is always empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pes {
    universe: Arc<Universe>,
    events: EventSet,
    causes: Vec<EventSet>,
    conflicts: Vec<EventSet>,
    initial: EventSet,
}

impl Pes {
    /// Resolves names, closes causality and symmetrizes conflict without
    /// checking any axiom.
    pub fn from_raw_unchecked(raw: &RawPes) -> Result<Pes, StructuralError> {
        let universe = universe_from(&raw.events, &raw.labels)?;
        let n = universe.len();
        let mut causes = vec![EventSet::EMPTY; n];
        for (x, y) in resolve_pairs(&universe, &raw.causality, "causality")? {
            causes[y].insert(x);
        }
        transitive_closure(&mut causes);
        let mut conflicts = vec![EventSet::EMPTY; n];
        for (x, y) in resolve_pairs(&universe, &raw.conflict, "conflict")? {
            conflicts[x].insert(y);
            conflicts[y].insert(x);
        }
        let initial = universe.set_of(&raw.initial, "initial configuration")?;
        Ok(Pes {
            events: universe.all(),
            universe,
            causes,
            conflicts,
            initial,
        })
    }

    pub(crate) fn from_parts(
        universe: Arc<Universe>,
        events: EventSet,
        causes: Vec<EventSet>,
        conflicts: Vec<EventSet>,
    ) -> Pes {
        Pes {
            universe,
            events,
            causes,
            conflicts,
            initial: EventSet::EMPTY,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate::check_pes(self)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn events(&self) -> EventSet {
        self.events
    }

    /// `⌊e⌋`
    pub fn causes(&self, e: usize) -> EventSet {
        self.causes[e]
    }

    pub fn conflicts(&self, e: usize) -> EventSet {
        self.conflicts[e]
    }

    pub fn initial(&self) -> EventSet {
        self.initial
    }

    pub fn is_conflict_free(&self, set: EventSet) -> bool {
        set.iter().all(|e| self.conflicts[e].is_disjoint(set))
    }

    pub fn is_left_closed(&self, set: EventSet) -> bool {
        set.iter().all(|e| self.causes[e].is_subset(set))
    }

    /// Restriction of every relation and the labeling to `keep`.
    pub fn restrict(&self, keep: EventSet) -> Pes {
        let keep = keep & self.events;
        let mask = |v: &Vec<EventSet>| -> Vec<EventSet> {
            v.iter()
                .enumerate()
                .map(|(e, s)| {
                    if keep.contains(e) {
                        *s & keep
                    } else {
                        EventSet::EMPTY
                    }
                })
                .collect()
        };
        Pes {
            universe: self.universe.clone(),
            events: keep,
            causes: mask(&self.causes),
            conflicts: mask(&self.conflicts),
            initial: self.initial & keep,
        }
    }
}

impl fmt::Debug for Pes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = &self.universe;
        f.debug_struct("Pes")
            .field("events", &u.fmt_set(self.events))
            .field(
                "causality",
                &relation_names(u, self.events, &self.causes, true),
            )
            .field(
                "conflict",
                &relation_names(u, self.events, &self.conflicts, false),
            )
            .finish()
    }
}

/// A reversible prime event structure.
///
/// Invariant maintained by every constructor in this crate: all relations are
/// restricted to `events` (and reversible targets to `reversible`), so two
/// structures over the same universe are equal iff all their components are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rpes {
    universe: Arc<Universe>,
    events: EventSet,
    causes: Vec<EventSet>,
    conflicts: Vec<EventSet>,
    reversible: EventSet,
    reverse_causes: Vec<EventSet>,
    preventers: Vec<EventSet>,
    initial: EventSet,
}

impl Rpes {
    /// Resolves names, closes causality, symmetrizes conflict and inserts
    /// `u ≺ u̲` for every reversible `u`, without checking any axiom.
    pub fn from_raw_unchecked(raw: &RawRpes) -> Result<Rpes, StructuralError> {
        let universe = universe_from(&raw.events, &raw.labels)?;
        let n = universe.len();
        let mut causes = vec![EventSet::EMPTY; n];
        for (x, y) in resolve_pairs(&universe, &raw.causality, "causality")? {
            causes[y].insert(x);
        }
        transitive_closure(&mut causes);
        let mut conflicts = vec![EventSet::EMPTY; n];
        for (x, y) in resolve_pairs(&universe, &raw.conflict, "conflict")? {
            conflicts[x].insert(y);
            conflicts[y].insert(x);
        }
        let reversible = universe.set_of(&raw.reversible, "reversible")?;
        let mut reverse_causes = vec![EventSet::EMPTY; n];
        let mut preventers = vec![EventSet::EMPTY; n];
        for u in reversible {
            reverse_causes[u].insert(u);
        }
        for (list, target, context) in [
            (&raw.reverse_causality, &mut reverse_causes, "revcause"),
            (&raw.prevention, &mut preventers, "prevent"),
        ] {
            for (e, u) in resolve_pairs(&universe, list, context)? {
                if !reversible.contains(u) {
                    return Err(StructuralError::NotReversible {
                        id: universe.id(u).to_string(),
                        context,
                    });
                }
                target[u].insert(e);
            }
        }
        let initial = universe.set_of(&raw.initial, "initial configuration")?;
        Ok(Rpes {
            events: universe.all(),
            universe,
            causes,
            conflicts,
            reversible,
            reverse_causes,
            preventers,
            initial,
        })
    }

    /// Structure with no events.
    pub fn empty() -> Rpes {
        RawRpes::default()
            .build()
            .expect("empty structure is valid")
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        universe: Arc<Universe>,
        events: EventSet,
        causes: Vec<EventSet>,
        conflicts: Vec<EventSet>,
        reversible: EventSet,
        reverse_causes: Vec<EventSet>,
        preventers: Vec<EventSet>,
        initial: EventSet,
    ) -> Rpes {
        Rpes {
            universe,
            events,
            causes,
            conflicts,
            reversible,
            reverse_causes,
            preventers,
            initial,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate::check_rpes(self)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn events(&self) -> EventSet {
        self.events
    }

    /// `⌊e⌋`
    pub fn causes(&self, e: usize) -> EventSet {
        self.causes[e]
    }

    pub fn conflicts(&self, e: usize) -> EventSet {
        self.conflicts[e]
    }

    pub fn reversible(&self) -> EventSet {
        self.reversible
    }

    /// `{e | e ≺ u̲}`
    pub fn reverse_causes(&self, u: usize) -> EventSet {
        self.reverse_causes[u]
    }

    /// `{e | e ▷ u̲}`
    pub fn preventers(&self, u: usize) -> EventSet {
        self.preventers[u]
    }

    pub fn initial(&self) -> EventSet {
        self.initial
    }

    pub fn label(&self, e: usize) -> &Action {
        self.universe.label(e)
    }

    /// `CF(set)`
    pub fn is_conflict_free(&self, set: EventSet) -> bool {
        set.iter().all(|e| self.conflicts[e].is_disjoint(set))
    }

    /// Union of the conflict sets of every member of `set`.
    pub fn conflicts_of(&self, set: EventSet) -> EventSet {
        set.iter()
            .fold(EventSet::EMPTY, |acc, e| acc | self.conflicts[e])
    }

    pub fn is_left_closed(&self, set: EventSet) -> bool {
        set.iter().all(|e| self.causes[e].is_subset(set))
    }

    /// Checks that every member of `set` is an event of this structure.
    pub fn check_events(&self, set: EventSet) -> Result<(), StructuralError> {
        match (set - self.events).iter().next() {
            None => Ok(()),
            Some(i) if i < self.universe.len() => Err(StructuralError::UnknownEvent {
                id: self.universe.id(i).to_string(),
                context: "event set",
            }),
            Some(i) => Err(StructuralError::EventOutOfRange(i)),
        }
    }

    /// Restriction of all relations to `events`, of reversibility to
    /// `reversible`, with a new initial configuration. Used to form residuals.
    pub fn restrict(&self, events: EventSet, reversible: EventSet, initial: EventSet) -> Rpes {
        let events = events & self.events;
        let reversible = reversible & self.reversible & events;
        let over = |v: &Vec<EventSet>, domain: EventSet| -> Vec<EventSet> {
            v.iter()
                .enumerate()
                .map(|(e, s)| {
                    if domain.contains(e) {
                        *s & events
                    } else {
                        EventSet::EMPTY
                    }
                })
                .collect()
        };
        Rpes {
            universe: self.universe.clone(),
            events,
            causes: over(&self.causes, events),
            conflicts: over(&self.conflicts, events),
            reversible,
            reverse_causes: over(&self.reverse_causes, reversible),
            preventers: over(&self.preventers, reversible),
            initial: initial & events,
        }
    }

    /// Pairs `(a, b)` of the causality relation, in index order.
    pub fn causality_pairs(&self) -> Vec<(usize, usize)> {
        pairs_below(self.events, &self.causes)
    }

    /// Unordered conflict pairs `(a, b)` with `a < b` by index.
    pub fn conflict_pairs(&self) -> Vec<(usize, usize)> {
        self.events
            .iter()
            .flat_map(|a| {
                (self.conflicts[a] & self.events)
                    .iter()
                    .filter(move |&b| b > a)
                    .map(move |b| (a, b))
            })
            .collect()
    }

    /// Pairs `(e, u)` with `e ≺ u̲`.
    pub fn reverse_causality_pairs(&self) -> Vec<(usize, usize)> {
        pairs_below(self.reversible, &self.reverse_causes)
    }

    /// Pairs `(e, u)` with `e ▷ u̲`.
    pub fn prevention_pairs(&self) -> Vec<(usize, usize)> {
        pairs_below(self.reversible, &self.preventers)
    }
}

fn pairs_below(domain: EventSet, rel: &[EventSet]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = domain
        .iter()
        .flat_map(|y| rel[y].iter().map(move |x| (x, y)))
        .collect();
    out.sort_unstable();
    out
}

fn relation_names(
    u: &Universe,
    domain: EventSet,
    rel: &[EventSet],
    below: bool,
) -> BTreeSet<(String, String)> {
    domain
        .iter()
        .flat_map(|y| {
            rel[y].iter().map(move |x| {
                let (a, b) = if below { (x, y) } else { (y, x) };
                (u.id(a).to_string(), u.id(b).to_string())
            })
        })
        .collect()
}

impl fmt::Debug for Rpes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = &self.universe;
        f.debug_struct("Rpes")
            .field("events", &u.fmt_set(self.events))
            .field(
                "causality",
                &relation_names(u, self.events, &self.causes, true),
            )
            .field(
                "conflict",
                &relation_names(u, self.events, &self.conflicts, false),
            )
            .field("reversible", &u.fmt_set(self.reversible))
            .field(
                "reverse_causality",
                &relation_names(u, self.reversible, &self.reverse_causes, true),
            )
            .field(
                "prevention",
                &relation_names(u, self.reversible, &self.preventers, true),
            )
            .field("initial", &u.fmt_set(self.initial))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn causality_is_closed_and_ids_sorted() {
        let r = RawRpes::new(&["c", "a", "b"])
            .causes(&[("a", "b"), ("b", "c")])
            .build()
            .unwrap();
        let u = r.universe();
        assert_eq!(u.names(r.events()), vec!["a", "b", "c"]);
        let c = u.index_of("c").unwrap();
        assert_eq!(u.names(r.causes(c)), vec!["a", "b"]);
    }

    #[test]
    fn self_reverse_cause_is_inserted_once() {
        let r = RawRpes::new(&["a"])
            .reversible(&["a"])
            .reverse_causes(&[("a", "a")])
            .build()
            .unwrap();
        assert_eq!(r.reverse_causality_pairs(), vec![(0, 0)]);
    }

    #[test]
    fn structural_errors() {
        let unknown = RawRpes::new(&["a"]).causes(&[("a", "z")]).build();
        assert!(matches!(
            unknown,
            Err(BuildError::Structural(StructuralError::UnknownEvent { .. }))
        ));
        let not_rev = RawRpes::new(&["a", "b"])
            .reversible(&["a"])
            .reverse_causes(&[("a", "b")])
            .build();
        assert!(matches!(
            not_rev,
            Err(BuildError::Structural(
                StructuralError::NotReversible { .. }
            ))
        ));
        let dup = RawRpes::new(&["a", "a"]).build();
        assert!(matches!(
            dup,
            Err(BuildError::Structural(StructuralError::DuplicateEvent(_)))
        ));
        let bad = RawRpes::new(&["a-b"]).build();
        assert!(matches!(
            bad,
            Err(BuildError::Structural(StructuralError::InvalidToken { .. }))
        ));
        let many: Vec<String> = (0..65).map(|i| format!("e{i}")).collect();
        let raw = RawRpes {
            events: many,
            ..Default::default()
        };
        assert!(matches!(
            raw.build(),
            Err(BuildError::Structural(StructuralError::TooManyEvents {
                count: 65
            }))
        ));
    }

    #[test]
    fn labels_default_to_ids() {
        let r = RawRpes::new(&["a", "b"]).label("b", "x").build().unwrap();
        assert_eq!(r.label(0).as_str(), "a");
        assert_eq!(r.label(1).as_str(), "x");
        let clash = RawRpes::new(&["a"]).label("a", "x").label("a", "y").build();
        assert!(matches!(
            clash,
            Err(BuildError::Structural(StructuralError::ConflictingLabel(_)))
        ));
    }

    #[test]
    fn restriction_masks_relations() {
        let r = RawRpes::new(&["a", "b", "c"])
            .causes(&[("a", "b")])
            .conflicts(&[("b", "c")])
            .reversible(&["a", "b"])
            .prevents(&[("b", "a")])
            .build()
            .unwrap();
        let keep = r.universe().set_of(["a", "c"], "test").unwrap();
        let s = r.restrict(keep, r.reversible(), EventSet::EMPTY);
        assert!(s.causality_pairs().is_empty());
        assert!(s.conflict_pairs().is_empty());
        assert_eq!(s.reversible(), EventSet::singleton(0));
        assert!(s.prevention_pairs().is_empty());
        assert_eq!(s.reverse_causality_pairs(), vec![(0, 0)]);
    }
}
