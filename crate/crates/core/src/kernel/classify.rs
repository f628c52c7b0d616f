//! Sustained causation, the cause-respecting / causal classes, and the
//! conversions between PESs and RPESs.

use thiserror::Error;

use super::{EventSet, Pes, Rpes, StructuralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConversionError {
    #[error("structure is not cause-respecting")]
    NotCauseRespecting,
    #[error("initial configuration {0} is not empty")]
    NonEmptyInitial(String),
    #[error(transparent)]
    Structural(#[from] StructuralError),
}

/// `result[b] = {a | a ≪ b}`.
pub(crate) fn sustained_below(r: &Rpes) -> Vec<EventSet> {
    let mut out = vec![EventSet::EMPTY; r.universe.len()];
    for b in r.events {
        out[b] = r.causes[b]
            .iter()
            .filter(|&a| !r.reversible.contains(a) || r.preventers[a].contains(b))
            .collect();
    }
    out
}

/// `{(a, b) | a < b ∧ (a ∈ F ⇒ b ▷ a̲)}` as index pairs, sorted.
pub fn sustained_causation(r: &Rpes) -> Vec<(usize, usize)> {
    let below = sustained_below(r);
    let mut pairs: Vec<(usize, usize)> = r
        .events
        .iter()
        .flat_map(|b| below[b].iter().map(move |a| (a, b)))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Every causal pair is sustained.
pub fn is_cause_respecting(r: &Rpes) -> bool {
    let below = sustained_below(r);
    r.events.iter().all(|e| r.causes[e] == below[e])
}

/// The only reverse cause of `u̲` is `u`, and exactly the causal successors
/// of `u` prevent its undoing.
pub fn is_causal(r: &Rpes) -> bool {
    r.reversible.iter().all(|u| {
        let successors: EventSet = r
            .events
            .iter()
            .filter(|&e| r.causes[e].contains(u))
            .collect();
        r.reverse_causes[u] == EventSet::singleton(u) && r.preventers[u] == successors
    })
}

/// Forgets reversibility of a cause-respecting RPES with empty initial
/// configuration.
pub fn phi(r: &Rpes) -> Result<Pes, ConversionError> {
    if !r.initial.is_empty() {
        return Err(ConversionError::NonEmptyInitial(
            r.universe.fmt_set(r.initial),
        ));
    }
    if !is_cause_respecting(r) {
        return Err(ConversionError::NotCauseRespecting);
    }
    Ok(Pes::from_parts(
        r.universe.clone(),
        r.events,
        r.causes.clone(),
        r.conflicts.clone(),
    ))
}

/// Makes the events in `reversible` reversible in the causal way: each is
/// its own only reverse cause and is prevented by its causal successors.
pub fn varphi(p: &Pes, reversible: EventSet) -> Result<Rpes, ConversionError> {
    if let Some(i) = (reversible - p.events).iter().next() {
        return Err(if i < p.universe.len() {
            StructuralError::UnknownEvent {
                id: p.universe.id(i).to_string(),
                context: "reversible set",
            }
        } else {
            StructuralError::EventOutOfRange(i)
        }
        .into());
    }
    let n = p.universe.len();
    let mut reverse_causes = vec![EventSet::EMPTY; n];
    let mut preventers = vec![EventSet::EMPTY; n];
    for u in reversible {
        reverse_causes[u] = EventSet::singleton(u);
        preventers[u] = p
            .events
            .iter()
            .filter(|&e| p.causes[e].contains(u))
            .collect();
    }
    Ok(Rpes::from_parts(
        p.universe.clone(),
        p.events,
        p.causes.clone(),
        p.conflicts.clone(),
        reversible,
        reverse_causes,
        preventers,
        EventSet::EMPTY,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{RawPes, RawRpes};

    fn pairs(r: &Rpes, list: &[(&str, &str)]) -> Vec<(usize, usize)> {
        let u = r.universe();
        let mut v: Vec<_> = list
            .iter()
            .map(|(a, b)| (u.index_of(a).unwrap(), u.index_of(b).unwrap()))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn no_reversible_events_means_sustained_is_causality() {
        let r = RawRpes::new(&["a", "b", "c"])
            .causes(&[("a", "b"), ("b", "c")])
            .build()
            .unwrap();
        assert_eq!(sustained_causation(&r), r.causality_pairs());
        assert!(is_cause_respecting(&r));
        assert!(is_causal(&r));
    }

    #[test]
    fn reversible_cause_needs_prevention() {
        let r = RawRpes::new(&["a", "b"])
            .causes(&[("a", "b")])
            .reversible(&["a"])
            .build()
            .unwrap();
        assert!(sustained_causation(&r).is_empty());
        assert!(!is_cause_respecting(&r));
        let r = RawRpes::new(&["a", "b"])
            .causes(&[("a", "b")])
            .reversible(&["a"])
            .prevents(&[("b", "a")])
            .build()
            .unwrap();
        assert_eq!(sustained_causation(&r), pairs(&r, &[("a", "b")]));
        assert!(is_causal(&r));
    }

    #[test]
    fn phi_rejections() {
        let not_cr = RawRpes::new(&["a", "b"])
            .causes(&[("a", "b")])
            .reversible(&["a"])
            .build()
            .unwrap();
        assert_eq!(phi(&not_cr), Err(ConversionError::NotCauseRespecting));
        let init = RawRpes::new(&["a"]).initial(&["a"]).build().unwrap();
        assert!(matches!(
            phi(&init),
            Err(ConversionError::NonEmptyInitial(_))
        ));
        let empty = phi(&Rpes::empty()).unwrap();
        assert!(empty.events().is_empty());
    }

    #[test]
    fn varphi_builds_causal_structure() {
        let p = RawPes::new(&["a", "b", "c"])
            .causes(&[("a", "b")])
            .conflicts(&[("a", "c"), ("b", "c")])
            .build()
            .unwrap();
        let f = p.universe().set_of(["a", "c"], "test").unwrap();
        let r = varphi(&p, f).unwrap();
        assert!(r.validate().valid);
        assert!(is_causal(&r));
        assert_eq!(
            r.reverse_causality_pairs(),
            pairs(&r, &[("a", "a"), ("c", "c")])
        );
        assert_eq!(r.prevention_pairs(), pairs(&r, &[("b", "a")]));
        assert_eq!(phi(&r).unwrap(), p);

        let outside = EventSet::singleton(7);
        assert!(matches!(
            varphi(&p, outside),
            Err(ConversionError::Structural(_))
        ));
    }
}
