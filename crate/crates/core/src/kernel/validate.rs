//! Axiom checking for PESs and RPESs. Every violated clause is reported, in a
//! fixed order: axioms in declaration order of [`Axiom`], witnesses in index
//! order.

use std::fmt;

use super::classify::sustained_below;
use super::{EventId, EventSet, Pes, RawPes, RawRpes, Rpes, StructuralError, Universe};

/// Identifies one clause of the PES/RPES definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    CausalityIrreflexive,
    CausalityTransitive,
    CausesConflictFree,
    ConflictIrreflexive,
    ConflictSymmetric,
    ConflictHereditary,
    ReverseSelfCause,
    ReverseCausesConflictFree,
    PreventionDisjoint,
    SustainedTransitive,
    ConflictHereditarySustained,
    InitialEmpty,
    InitialLeftClosed,
    InitialConflictFree,
}

impl Axiom {
    pub fn id(self) -> &'static str {
        match self {
            Axiom::CausalityIrreflexive => "causality-irreflexive",
            Axiom::CausalityTransitive => "causality-transitive",
            Axiom::CausesConflictFree => "causes-conflict-free",
            Axiom::ConflictIrreflexive => "conflict-irreflexive",
            Axiom::ConflictSymmetric => "conflict-symmetric",
            Axiom::ConflictHereditary => "conflict-hereditary",
            Axiom::ReverseSelfCause => "reverse-self-cause",
            Axiom::ReverseCausesConflictFree => "reverse-causes-conflict-free",
            Axiom::PreventionDisjoint => "prevention-disjoint",
            Axiom::SustainedTransitive => "sustained-transitive",
            Axiom::ConflictHereditarySustained => "conflict-hereditary-sustained",
            Axiom::InitialEmpty => "initial-empty",
            Axiom::InitialLeftClosed => "initial-left-closed",
            Axiom::InitialConflictFree => "initial-conflict-free",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<EventId>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.witness.iter().map(EventId::as_str).collect();
        write!(
            f,
            "[{}] ({}): {}",
            self.axiom,
            names.join(", "),
            self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

struct Collector<'a> {
    universe: &'a Universe,
    out: Vec<Violation>,
}

impl Collector<'_> {
    fn push(&mut self, axiom: Axiom, witness: &[usize], message: String) {
        self.out.push(Violation {
            axiom,
            witness: witness
                .iter()
                .map(|&i| self.universe.id(i).clone())
                .collect(),
            message,
        });
    }

    fn name(&self, i: usize) -> &str {
        self.universe.id(i).as_str()
    }
}

/// Resolves and checks a raw PES description.
pub fn validate_pes(candidate: &RawPes) -> Result<ValidationReport, StructuralError> {
    Ok(Pes::from_raw_unchecked(candidate)?.validate())
}

/// Resolves and checks a raw RPES description.
pub fn validate_rpes(candidate: &RawRpes) -> Result<ValidationReport, StructuralError> {
    Ok(Rpes::from_raw_unchecked(candidate)?.validate())
}

fn check_order_and_conflict(
    c: &mut Collector<'_>,
    events: EventSet,
    causes: &[EventSet],
    conflicts: &[EventSet],
) {
    for e in events {
        if causes[e].contains(e) {
            let msg = format!("{0} < {0} (causality has a cycle through {0})", c.name(e));
            c.push(Axiom::CausalityIrreflexive, &[e], msg);
        }
    }
    for z in events {
        for y in causes[z] {
            for x in causes[y] - causes[z] {
                let msg = format!(
                    "{} < {} < {} but not {} < {}",
                    c.name(x),
                    c.name(y),
                    c.name(z),
                    c.name(x),
                    c.name(z)
                );
                c.push(Axiom::CausalityTransitive, &[x, y, z], msg);
            }
        }
    }
    for e in events {
        if conflicts[e].contains(e) {
            let msg = format!("{0} ♯ {0}", c.name(e));
            c.push(Axiom::ConflictIrreflexive, &[e], msg);
        }
    }
    for a in events {
        for b in conflicts[a] {
            if !conflicts[b].contains(a) {
                let msg = format!(
                    "{} ♯ {} but not {} ♯ {}",
                    c.name(a),
                    c.name(b),
                    c.name(b),
                    c.name(a)
                );
                c.push(Axiom::ConflictSymmetric, &[a, b], msg);
            }
        }
    }
}

fn check_conflict_free(
    c: &mut Collector<'_>,
    axiom: Axiom,
    owner: Option<usize>,
    set: EventSet,
    conflicts: &[EventSet],
    what: &str,
) {
    for x in set {
        for y in conflicts[x] & set {
            if x <= y {
                let msg = format!("{what} contains {} ♯ {}", c.name(x), c.name(y));
                let witness: Vec<usize> = owner.into_iter().chain([x, y]).collect();
                c.push(axiom, &witness, msg);
            }
        }
    }
}

pub(super) fn check_pes(p: &Pes) -> ValidationReport {
    let mut c = Collector {
        universe: &p.universe,
        out: Vec::new(),
    };
    check_order_and_conflict(&mut c, p.events, &p.causes, &p.conflicts);
    // e < e' and e ♯ e'' imply e' ♯ e''
    for e2 in p.events {
        for e in p.causes[e2] {
            for e3 in p.conflicts[e] - p.conflicts[e2] {
                let msg = format!(
                    "{} < {} and {} ♯ {} but not {} ♯ {}",
                    c.name(e),
                    c.name(e2),
                    c.name(e),
                    c.name(e3),
                    c.name(e2),
                    c.name(e3)
                );
                c.push(Axiom::ConflictHereditary, &[e, e2, e3], msg);
            }
        }
    }
    if !p.initial.is_empty() {
        let witness: Vec<usize> = p.initial.iter().collect();
        let msg = format!(
            "initial configuration {} is not empty",
            p.universe.fmt_set(p.initial)
        );
        c.push(Axiom::InitialEmpty, &witness, msg);
    }
    ValidationReport::from_violations(c.out)
}

pub(super) fn check_rpes(r: &Rpes) -> ValidationReport {
    let mut c = Collector {
        universe: &r.universe,
        out: Vec::new(),
    };
    check_order_and_conflict(&mut c, r.events, &r.causes, &r.conflicts);
    for e in r.events {
        let what = format!("causes of {}", c.name(e));
        check_conflict_free(
            &mut c,
            Axiom::CausesConflictFree,
            Some(e),
            r.causes[e],
            &r.conflicts,
            &what,
        );
    }
    for u in r.reversible {
        if !r.reverse_causes[u].contains(u) {
            let msg = format!("{0} is reversible but not {0} ≺ {0}̲", c.name(u));
            c.push(Axiom::ReverseSelfCause, &[u], msg);
        }
    }
    for u in r.reversible {
        let what = format!("reverse causes of {}̲", c.name(u));
        check_conflict_free(
            &mut c,
            Axiom::ReverseCausesConflictFree,
            Some(u),
            r.reverse_causes[u],
            &r.conflicts,
            &what,
        );
    }
    for u in r.reversible {
        for e in r.preventers[u] & r.reverse_causes[u] {
            let msg = format!("{0} ▷ {1}̲ and {0} ≺ {1}̲", c.name(e), c.name(u));
            c.push(Axiom::PreventionDisjoint, &[e, u], msg);
        }
    }
    let sustained = sustained_below(r);
    for z in r.events {
        for y in sustained[z] {
            for x in sustained[y] - sustained[z] {
                let msg = format!(
                    "{} ≪ {} ≪ {} but not {} ≪ {}",
                    c.name(x),
                    c.name(y),
                    c.name(z),
                    c.name(x),
                    c.name(z)
                );
                c.push(Axiom::SustainedTransitive, &[x, y, z], msg);
            }
        }
    }
    // a ♯ b ≪ c implies a ♯ c
    for z in r.events {
        for y in sustained[z] {
            for x in r.conflicts[y] - r.conflicts[z] {
                let msg = format!(
                    "{} ♯ {} ≪ {} but not {} ♯ {}",
                    c.name(x),
                    c.name(y),
                    c.name(z),
                    c.name(x),
                    c.name(z)
                );
                c.push(Axiom::ConflictHereditarySustained, &[x, y, z], msg);
            }
        }
    }
    for e in r.initial {
        for missing in r.causes[e] - r.initial {
            let msg = format!(
                "{} is initial but its cause {} is not",
                c.name(e),
                c.name(missing)
            );
            c.push(Axiom::InitialLeftClosed, &[e, missing], msg);
        }
    }
    check_conflict_free(
        &mut c,
        Axiom::InitialConflictFree,
        None,
        r.initial,
        &r.conflicts,
        "initial configuration",
    );
    ValidationReport::from_violations(c.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::RawRpes;

    fn axioms(report: &ValidationReport) -> Vec<Axiom> {
        report.violations.iter().map(|v| v.axiom).collect()
    }

    #[test]
    fn empty_structures_are_valid() {
        assert!(validate_pes(&RawPes::default()).unwrap().valid);
        assert!(validate_rpes(&RawRpes::default()).unwrap().valid);
    }

    #[test]
    fn pes_cause_and_conflict_on_same_pair() {
        let raw = RawPes::new(&["a", "b"])
            .causes(&[("a", "b")])
            .conflicts(&[("a", "b")]);
        let report = validate_pes(&raw).unwrap();
        assert!(!report.valid);
        // a < b and a ♯ b force b ♯ b
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == Axiom::ConflictHereditary
                && v.witness.iter().map(EventId::as_str).collect::<Vec<_>>() == ["a", "b", "b"]));
    }

    #[test]
    fn pes_nonempty_initial() {
        let mut raw = RawPes::new(&["a"]);
        raw.initial.push("a".into());
        assert_eq!(
            axioms(&validate_pes(&raw).unwrap()),
            vec![Axiom::InitialEmpty]
        );
    }

    #[test]
    fn reflexive_cause_and_cycles() {
        let raw = RawRpes::new(&["a"]).causes(&[("a", "a")]);
        assert_eq!(
            axioms(&validate_rpes(&raw).unwrap()),
            vec![Axiom::CausalityIrreflexive]
        );
        let cyc = RawRpes::new(&["a", "b"]).causes(&[("a", "b"), ("b", "a")]);
        let report = validate_rpes(&cyc).unwrap();
        assert_eq!(
            axioms(&report),
            vec![Axiom::CausalityIrreflexive, Axiom::CausalityIrreflexive]
        );
    }

    #[test]
    fn reflexive_conflict_is_reported_not_dropped() {
        let raw = RawRpes::new(&["a"]).conflicts(&[("a", "a")]);
        assert_eq!(
            axioms(&validate_rpes(&raw).unwrap()),
            vec![Axiom::ConflictIrreflexive]
        );
    }

    #[test]
    fn prevention_overlapping_self_reverse_cause() {
        let raw = RawRpes::new(&["b"])
            .reversible(&["b"])
            .prevents(&[("b", "b")]);
        assert_eq!(
            axioms(&validate_rpes(&raw).unwrap()),
            vec![Axiom::PreventionDisjoint]
        );
    }

    #[test]
    fn conflicting_causes_and_reverse_causes() {
        let raw = RawRpes::new(&["a", "b", "c"])
            .causes(&[("a", "c"), ("b", "c")])
            .conflicts(&[("a", "b")]);
        let report = validate_rpes(&raw).unwrap();
        assert!(axioms(&report).contains(&Axiom::CausesConflictFree));

        let raw = RawRpes::new(&["a", "b", "u"])
            .conflicts(&[("a", "b")])
            .reversible(&["u"])
            .reverse_causes(&[("a", "u"), ("b", "u")]);
        assert_eq!(
            axioms(&validate_rpes(&raw).unwrap()),
            vec![Axiom::ReverseCausesConflictFree]
        );
    }

    #[test]
    fn sustained_causation_must_be_transitive() {
        // a ≪ b ≪ c holds but c does not prevent undoing a
        let raw = RawRpes::new(&["a", "b", "c"])
            .causes(&[("a", "b"), ("b", "c")])
            .reversible(&["a"])
            .prevents(&[("b", "a")]);
        let report = validate_rpes(&raw).unwrap();
        assert_eq!(axioms(&report), vec![Axiom::SustainedTransitive]);
        assert_eq!(report.violations[0].message, "a ≪ b ≪ c but not a ≪ c");
    }

    #[test]
    fn conflict_hereditary_along_sustained_causation() {
        let raw = RawRpes::new(&["a", "b", "c"])
            .causes(&[("b", "c")])
            .conflicts(&[("a", "b")]);
        let report = validate_rpes(&raw).unwrap();
        // b ≪ c since b is irreversible; a ♯ b but not a ♯ c
        assert_eq!(axioms(&report), vec![Axiom::ConflictHereditarySustained]);
        // along plain causality only (b reversible, no prevention) nothing is required
        let raw = RawRpes::new(&["a", "b", "c"])
            .causes(&[("b", "c")])
            .conflicts(&[("a", "b")])
            .reversible(&["b"]);
        assert!(validate_rpes(&raw).unwrap().valid);
    }

    #[test]
    fn initial_configuration_checks() {
        let raw = RawRpes::new(&["a", "b", "c"])
            .causes(&[("a", "b")])
            .conflicts(&[("b", "c")])
            .initial(&["b", "c"]);
        let report = validate_rpes(&raw).unwrap();
        assert_eq!(
            axioms(&report),
            vec![Axiom::InitialLeftClosed, Axiom::InitialConflictFree]
        );
        let ids: Vec<&str> = report.violations[1]
            .witness
            .iter()
            .map(EventId::as_str)
            .collect();
        assert_eq!(ids, vec!["b", "c"]);
    }

    #[test]
    fn all_violations_reported_deterministically() {
        let raw = RawRpes::new(&["a", "b"])
            .causes(&[("a", "a")])
            .conflicts(&[("b", "b")])
            .initial(&["a", "b"]);
        let first = validate_rpes(&raw).unwrap();
        let second = validate_rpes(&raw).unwrap();
        assert_eq!(first, second);
        assert!(first.violations.len() >= 3);
        assert!(!first.valid);
    }
}
