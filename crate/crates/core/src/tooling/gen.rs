//! Seeded random structures.
//!
//! The stream is SplitMix64 seeded with the raw 64-bit seed; a coin with
//! probability `p` draws one word `w` and succeeds iff
//! `(w >> 11) as f64 * 2^-53 < p`. Draws happen in the fixed order
//! documented on [`gen_rpes`], so a seed reproduces the same structure in
//! any implementation following it.

use std::fmt;
use std::str::FromStr;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::kernel::{varphi, EventSet, Pes, RawPes, RawRpes, Rpes, StructuralError, MAX_EVENTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GenMode {
    #[default]
    Any,
    CauseRespecting,
    Causal,
}

impl FromStr for GenMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(GenMode::Any),
            "cause-respecting" => Ok(GenMode::CauseRespecting),
            "causal" => Ok(GenMode::Causal),
            other => Err(format!(
                "unknown mode `{other}` (any, cause-respecting, causal)"
            )),
        }
    }
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenMode::Any => "any",
            GenMode::CauseRespecting => "cause-respecting",
            GenMode::Causal => "causal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub num_events: usize,
    pub causality_density: f64,
    pub conflict_density: f64,
    pub reversible_prob: f64,
    pub prevention_density: f64,
    pub extra_revcause_density: f64,
    /// Chance of each event joining the initial configuration.
    pub init_density: f64,
    pub mode: GenMode,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            num_events: 5,
            causality_density: 0.3,
            conflict_density: 0.2,
            reversible_prob: 0.5,
            prevention_density: 0.3,
            extra_revcause_density: 0.1,
            init_density: 0.0,
            mode: GenMode::Any,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{name} must be a probability in [0, 1], got {value}")]
    InvalidProbability { name: &'static str, value: String },
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("no valid structure after {attempts} attempts; last violation: {last}")]
    RetriesExhausted { attempts: usize, last: String },
}

/// Attempts in `any` mode before giving up.
pub const MAX_ATTEMPTS: usize = 200;

struct Coins(SplitMix64);

impl Coins {
    fn new(seed: u64) -> Self {
        Coins(SplitMix64::seed_from_u64(seed))
    }

    fn flip(&mut self, p: f64) -> bool {
        let w = self.0.next_u64();
        ((w >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
    }
}

/// `a`..`z` for up to 26 events, `e00`, `e01`, ... beyond.
pub fn event_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (0..n).map(|i| format!("e{i:02}")).collect()
    }
}

impl GenParams {
    fn check(&self) -> Result<(), GenError> {
        if self.num_events > MAX_EVENTS {
            return Err(StructuralError::TooManyEvents {
                count: self.num_events,
            }
            .into());
        }
        for (name, value) in [
            ("causality density", self.causality_density),
            ("conflict density", self.conflict_density),
            ("reversible probability", self.reversible_prob),
            ("prevention density", self.prevention_density),
            ("extra reverse-cause density", self.extra_revcause_density),
            ("initial density", self.init_density),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GenError::InvalidProbability {
                    name,
                    value: value.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Causality and conflict, as index-based relations.
struct Skeleton {
    /// `causes[j]` is the set of `i < j`, transitively closed.
    causes: Vec<EventSet>,
    conflicts: Vec<EventSet>,
}

/// Causal pairs `i < j` for `i < j` by index, one coin each in row order;
/// then conflict pairs in the same order, accepted when the two events have
/// no common causal successor and closed upwards.
fn skeleton(n: usize, p: &GenParams, coins: &mut Coins) -> Skeleton {
    let mut causes = vec![EventSet::EMPTY; n];
    for i in 0..n {
        for row in causes.iter_mut().skip(i + 1) {
            if coins.flip(p.causality_density) {
                row.insert(i);
            }
        }
    }
    crate::kernel::transitive_closure(&mut causes);
    let above = |i: usize| -> EventSet {
        (0..n)
            .filter(|&k| k == i || causes[k].contains(i))
            .collect()
    };
    let mut conflicts = vec![EventSet::EMPTY; n];
    for i in 0..n {
        for j in i + 1..n {
            if coins.flip(p.conflict_density) {
                let (ui, uj) = (above(i), above(j));
                if ui.is_disjoint(uj) {
                    for x in ui {
                        conflicts[x] = conflicts[x] | uj;
                    }
                    for y in uj {
                        conflicts[y] = conflicts[y] | ui;
                    }
                }
            }
        }
    }
    Skeleton { causes, conflicts }
}

fn raw_pes(names: &[String], s: &Skeleton) -> RawPes {
    let mut raw = RawPes {
        events: names.to_vec(),
        ..Default::default()
    };
    for (j, cs) in s.causes.iter().enumerate() {
        for i in *cs {
            raw.causality.push((names[i].clone(), names[j].clone()));
        }
    }
    for (i, cs) in s.conflicts.iter().enumerate() {
        for j in cs.iter().filter(|&j| j > i) {
            raw.conflict.push((names[i].clone(), names[j].clone()));
        }
    }
    raw
}

/// A random valid PES (only the causality and conflict densities are used).
pub fn gen_pes(params: &GenParams) -> Result<Pes, GenError> {
    params.check()?;
    let mut coins = Coins::new(params.seed);
    let names = event_names(params.num_events);
    let s = skeleton(params.num_events, params, &mut coins);
    raw_pes(&names, &s)
        .build()
        .map_err(|e| GenError::RetriesExhausted {
            attempts: 1,
            last: e.to_string(),
        })
}

/// A random valid RPES.
///
/// Per attempt, after the skeleton: one reversibility coin per event; for
/// each reversible `u` and each other event `e`, a reverse-cause coin
/// (accepted unless it would put conflicting events below `u̲`, or, outside
/// `any` mode, `e` is a causal successor of `u`); then for each reversible
/// `u` and each event `e`, a prevention coin (forced for causal successors
/// outside `any` mode, refused where `e ≺ u̲`); finally an initial coin per
/// event, accepted when the event can be added to the configuration so far.
/// `causal` mode instead makes the reversible events causal in the skeleton.
/// `any` mode retries until the structure validates.
pub fn gen_rpes(params: &GenParams) -> Result<Rpes, GenError> {
    params.check()?;
    let n = params.num_events;
    let names = event_names(n);
    let mut coins = Coins::new(params.seed);
    let mut last = String::new();
    let attempts = if params.mode == GenMode::Any {
        MAX_ATTEMPTS
    } else {
        1
    };
    for _ in 0..attempts {
        let s = skeleton(n, params, &mut coins);
        let reversible: EventSet = (0..n)
            .filter(|_| coins.flip(params.reversible_prob))
            .collect();
        let (mut rc, mut pv) = (vec![EventSet::EMPTY; n], vec![EventSet::EMPTY; n]);
        if params.mode != GenMode::Causal {
            let strict = params.mode == GenMode::CauseRespecting;
            for u in reversible {
                rc[u].insert(u);
                for e in (0..n).filter(|&e| e != u) {
                    let hit = coins.flip(params.extra_revcause_density);
                    let below = rc[u].with(e);
                    let clean = below.iter().all(|x| s.conflicts[x].is_disjoint(below));
                    if hit && clean && !(strict && s.causes[e].contains(u)) {
                        rc[u] = below;
                    }
                }
            }
            for u in reversible {
                for e in 0..n {
                    let hit = coins.flip(params.prevention_density);
                    let forced = strict && s.causes[e].contains(u);
                    if (hit || forced) && !rc[u].contains(e) {
                        pv[u].insert(e);
                    }
                }
            }
        }
        let mut initial = EventSet::EMPTY;
        for e in 0..n {
            if coins.flip(params.init_density)
                && s.causes[e].is_subset(initial)
                && s.conflicts[e].is_disjoint(initial)
            {
                initial.insert(e);
            }
        }

        let base = raw_pes(&names, &s);
        if params.mode == GenMode::Causal {
            let built = base.build().map_err(|e| e.to_string()).and_then(|p| {
                let r = varphi(&p, reversible).map_err(|e| e.to_string())?;
                Ok(r.restrict(r.events(), r.reversible(), initial))
            });
            match built {
                Ok(r) if r.validate().valid => return Ok(r),
                Ok(r) => last = r.validate().to_string(),
                Err(e) => last = e,
            }
            continue;
        }
        let mut raw = RawRpes {
            events: base.events,
            causality: base.causality,
            conflict: base.conflict,
            reversible: reversible.iter().map(|u| names[u].clone()).collect(),
            initial: initial.iter().map(|e| names[e].clone()).collect(),
            ..Default::default()
        };
        for u in reversible {
            raw.reverse_causality
                .extend(rc[u].iter().map(|e| (names[e].clone(), names[u].clone())));
            raw.prevention
                .extend(pv[u].iter().map(|e| (names[e].clone(), names[u].clone())));
        }
        match raw.build() {
            Ok(r) => return Ok(r),
            Err(e) => last = e.to_string(),
        }
    }
    Err(GenError::RetriesExhausted { attempts, last })
}

/// A random PES together with a random subset of its events, drawn after the
/// skeleton with one coin per event.
pub fn gen_pes_with_subset(params: &GenParams) -> Result<(Pes, EventSet), GenError> {
    params.check()?;
    let mut coins = Coins::new(params.seed);
    let names = event_names(params.num_events);
    let s = skeleton(params.num_events, params, &mut coins);
    let subset = (0..params.num_events)
        .filter(|_| coins.flip(params.reversible_prob))
        .collect();
    let pes = raw_pes(&names, &s)
        .build()
        .map_err(|e| GenError::RetriesExhausted {
            attempts: 1,
            last: e.to_string(),
        })?;
    Ok((pes, subset))
}

/// Causal structure `varphi(p, F)` for a generated PES and subset.
pub fn gen_causal(params: &GenParams) -> Result<Rpes, GenError> {
    let (p, f) = gen_pes_with_subset(params)?;
    Ok(varphi(&p, f).expect("subset drawn from the events"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{is_causal, is_cause_respecting};

    #[test]
    fn splitmix_reference_stream() {
        let mut rng = SplitMix64::seed_from_u64(1477776061723855037);
        assert_eq!(rng.next_u64(), 1985237415132408290);
        assert_eq!(rng.next_u64(), 2979275885539914483);
    }

    #[test]
    fn coin_extremes() {
        let mut c = Coins::new(7);
        assert!((0..100).all(|_| !c.flip(0.0)));
        assert!((0..100).all(|_| c.flip(1.0)));
    }

    #[test]
    fn names() {
        assert_eq!(event_names(3), ["a", "b", "c"]);
        assert_eq!(event_names(27)[26], "e26");
        assert_eq!(event_names(27)[0], "e00");
    }

    #[test]
    fn no_events() {
        let r = gen_rpes(&GenParams {
            num_events: 0,
            seed: 99,
            ..Default::default()
        })
        .unwrap();
        assert!(r.events().is_empty());
    }

    #[test]
    fn modes_imply_their_predicates() {
        for seed in 0..100 {
            for mode in [GenMode::Any, GenMode::CauseRespecting, GenMode::Causal] {
                let p = GenParams {
                    num_events: 6,
                    mode,
                    seed,
                    ..Default::default()
                };
                let r = gen_rpes(&p).unwrap();
                assert!(r.validate().valid);
                match mode {
                    GenMode::Causal => assert!(is_causal(&r)),
                    GenMode::CauseRespecting => assert!(is_cause_respecting(&r)),
                    GenMode::Any => {}
                }
                assert_eq!(gen_rpes(&p).unwrap(), r);
            }
        }
    }

    #[test]
    fn bad_probability() {
        let p = GenParams {
            conflict_density: 1.5,
            ..Default::default()
        };
        assert!(matches!(
            gen_rpes(&p),
            Err(GenError::InvalidProbability { .. })
        ));
    }

    #[test]
    fn initial_configurations_are_valid() {
        for seed in 0..50 {
            let p = GenParams {
                num_events: 6,
                init_density: 0.5,
                mode: GenMode::CauseRespecting,
                seed,
                ..Default::default()
            };
            let r = gen_rpes(&p).unwrap();
            assert!(r.is_left_closed(r.initial()));
        }
    }
}
