//! Equivalences between transition systems and the semantic audit.

mod audit;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::stepsem::{Lts, StepLabel};

pub use audit::{
    audit_semantics, AuditEntry, AuditOptions, AuditReport, Counterexample, Property, Status,
};

/// Dense view of an [`Lts`]: states numbered in sorted key order, labels
/// numbered through a table shared by both systems under comparison.
struct Indexed<'a> {
    names: Vec<&'a str>,
    initial: usize,
    /// `succ[s]` sorted by (label, target).
    succ: Vec<Vec<(usize, usize)>>,
    pred: Vec<Vec<(usize, usize)>>,
}

fn label_table(l1: &Lts, l2: &Lts) -> BTreeMap<StepLabel, usize> {
    let labels: BTreeSet<&StepLabel> = l1
        .transitions()
        .iter()
        .chain(l2.transitions())
        .map(|t| &t.label)
        .collect();
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect()
}

impl<'a> Indexed<'a> {
    fn new(l: &'a Lts, labels: &BTreeMap<StepLabel, usize>) -> Self {
        let names: Vec<&str> = l.states().iter().map(String::as_str).collect();
        let index = |s: &str| names.binary_search(&s).expect("endpoint is a state");
        let mut succ = vec![Vec::new(); names.len()];
        let mut pred = vec![Vec::new(); names.len()];
        for t in l.transitions() {
            let (src, tgt, lab) = (index(&t.source), index(&t.target), labels[&t.label]);
            succ[src].push((lab, tgt));
            pred[tgt].push((lab, src));
        }
        for v in succ.iter_mut().chain(pred.iter_mut()) {
            v.sort_unstable();
        }
        let initial = index(l.initial());
        Indexed {
            names,
            initial,
            succ,
            pred,
        }
    }

    fn len(&self) -> usize {
        self.names.len()
    }
}

/// A distinguishing run: after `labels[..len-1]` the two systems reach
/// `pair`, where the last label can be taken on one side only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinction {
    pub labels: Vec<StepLabel>,
    pub pair: (String, String),
    /// `true` when the first system has the final move and the second lacks it.
    pub first_moves: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimResult {
    pub bisimilar: bool,
    /// Greatest bisimulation restricted to pairs reachable from the initial
    /// pair; present iff bisimilar.
    pub witness: Option<BTreeSet<(String, String)>>,
    /// Present iff not bisimilar.
    pub counterexample: Option<Distinction>,
}

/// Computes the greatest bisimulation by refining the full relation until
/// it is stable.
pub fn check_bisimulation(l1: &Lts, l2: &Lts) -> BisimResult {
    let labels = label_table(l1, l2);
    let a = Indexed::new(l1, &labels);
    let b = Indexed::new(l2, &labels);
    let n2 = b.len();
    // round in which a pair left the relation; 0 means still related
    let mut removed = vec![0u32; a.len() * n2];
    let mut round = 0u32;
    loop {
        round += 1;
        let related = |x: usize, y: usize, removed: &[u32]| removed[x * n2 + y] == 0;
        let mut dropped = Vec::new();
        for x in 0..a.len() {
            for y in 0..n2 {
                if related(x, y, &removed)
                    && first_unmatched(&a, &b, x, y, &removed, round).is_some()
                {
                    dropped.push(x * n2 + y);
                }
            }
        }
        if dropped.is_empty() {
            break;
        }
        for p in dropped {
            removed[p] = round;
        }
    }
    let (i1, i2) = (a.initial, b.initial);
    if removed[i1 * n2 + i2] == 0 {
        let mut seen = BTreeSet::from([(i1, i2)]);
        let mut queue = VecDeque::from([(i1, i2)]);
        while let Some((x, y)) = queue.pop_front() {
            for &(la, xa) in &a.succ[x] {
                for &(lb, yb) in &b.succ[y] {
                    if la == lb && removed[xa * n2 + yb] == 0 && seen.insert((xa, yb)) {
                        queue.push_back((xa, yb));
                    }
                }
            }
        }
        let witness = seen
            .into_iter()
            .map(|(x, y)| (a.names[x].to_string(), b.names[y].to_string()))
            .collect();
        return BisimResult {
            bisimilar: true,
            witness: Some(witness),
            counterexample: None,
        };
    }
    let label_of: Vec<&StepLabel> = labels.keys().collect();
    BisimResult {
        bisimilar: false,
        witness: None,
        counterexample: Some(distinguish(&a, &b, &removed, &label_of)),
    }
}

/// A move of one side of `(x, y)` that the other side cannot match within the
/// relation as it stood before `round`: `(label, mover is first, target)`.
fn first_unmatched(
    a: &Indexed,
    b: &Indexed,
    x: usize,
    y: usize,
    removed: &[u32],
    round: u32,
) -> Option<(usize, bool, usize)> {
    let n2 = b.len();
    let alive = |p: usize| removed[p] == 0 || removed[p] >= round;
    let mut candidates = Vec::new();
    for &(l, xa) in &a.succ[x] {
        if !b.succ[y]
            .iter()
            .any(|&(lb, yb)| lb == l && alive(xa * n2 + yb))
        {
            candidates.push((l, true, xa));
        }
    }
    for &(l, yb) in &b.succ[y] {
        if !a.succ[x]
            .iter()
            .any(|&(la, xa)| la == l && alive(xa * n2 + yb))
        {
            candidates.push((l, false, yb));
        }
    }
    candidates
        .into_iter()
        .min_by_key(|&(l, first, t)| (l, !first, t))
}

fn distinguish(a: &Indexed, b: &Indexed, removed: &[u32], label_of: &[&StepLabel]) -> Distinction {
    let n2 = b.len();
    let (mut x, mut y) = (a.initial, b.initial);
    let mut labels = Vec::new();
    loop {
        let round = removed[x * n2 + y];
        let (l, first, target) =
            first_unmatched(a, b, x, y, removed, round).expect("pair was removed for a reason");
        labels.push(label_of[l].clone());
        // continue against the answer that survived longest
        let answers: Vec<usize> = if first {
            b.succ[y]
                .iter()
                .filter(|&&(lb, _)| lb == l)
                .map(|&(_, t)| t)
                .collect()
        } else {
            a.succ[x]
                .iter()
                .filter(|&&(la, _)| la == l)
                .map(|&(_, t)| t)
                .collect()
        };
        let pair_of = |answer: usize| {
            if first {
                (target, answer)
            } else {
                (answer, target)
            }
        };
        let best = answers.into_iter().max_by_key(|&ans| {
            let (p, q) = pair_of(ans);
            (removed[p * n2 + q], std::cmp::Reverse(ans))
        });
        match best {
            None => {
                return Distinction {
                    labels,
                    pair: (a.names[x].to_string(), b.names[y].to_string()),
                    first_moves: first,
                }
            }
            Some(ans) => (x, y) = pair_of(ans),
        }
    }
}

/// A bijection between the states of `l1` and `l2` preserving the initial
/// state and the labelled transition relation, if one exists.
pub fn check_isomorphism(l1: &Lts, l2: &Lts) -> Option<BTreeMap<String, String>> {
    if l1.num_states() != l2.num_states() || l1.num_transitions() != l2.num_transitions() {
        return None;
    }
    let labels = label_table(l1, l2);
    let a = Indexed::new(l1, &labels);
    let b = Indexed::new(l2, &labels);
    let signature = |g: &Indexed, s: usize| {
        let mut out: Vec<usize> = g.succ[s].iter().map(|&(l, _)| l).collect();
        let mut inc: Vec<usize> = g.pred[s].iter().map(|&(l, _)| l).collect();
        out.sort_unstable();
        inc.sort_unstable();
        (out, inc, s == g.initial)
    };
    let sig_a: Vec<_> = (0..a.len()).map(|s| signature(&a, s)).collect();
    let sig_b: Vec<_> = (0..b.len()).map(|s| signature(&b, s)).collect();
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return None;
    }
    // assign states of `a` in BFS order from the initial state, then the rest
    let mut order = Vec::with_capacity(a.len());
    let mut placed = vec![false; a.len()];
    let mut queue = VecDeque::from([a.initial]);
    placed[a.initial] = true;
    loop {
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &(_, t) in a.succ[s].iter().chain(&a.pred[s]) {
                if !placed[t] {
                    placed[t] = true;
                    queue.push_back(t);
                }
            }
        }
        match placed.iter().position(|p| !p) {
            Some(s) => {
                placed[s] = true;
                queue.push_back(s);
            }
            None => break,
        }
    }
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    let ctx = IsoSearch {
        a: &a,
        b: &b,
        sig_a: &sig_a,
        sig_b: &sig_b,
        order: &order,
    };
    if ctx.extend(0, &mut map, &mut used) {
        Some(
            (0..a.len())
                .map(|s| (a.names[s].to_string(), b.names[map[s]].to_string()))
                .collect(),
        )
    } else {
        None
    }
}

type Signature = (Vec<usize>, Vec<usize>, bool);

struct IsoSearch<'a> {
    a: &'a Indexed<'a>,
    b: &'a Indexed<'a>,
    sig_a: &'a [Signature],
    sig_b: &'a [Signature],
    order: &'a [usize],
}

impl IsoSearch<'_> {
    fn extend(&self, depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        let Some(&s) = self.order.get(depth) else {
            return true;
        };
        for t in 0..self.b.len() {
            if used[t] || self.sig_a[s] != self.sig_b[t] {
                continue;
            }
            map[s] = t;
            if self.consistent(s, map) {
                used[t] = true;
                if self.extend(depth + 1, map, used) {
                    return true;
                }
                used[t] = false;
            }
            map[s] = usize::MAX;
        }
        false
    }

    /// Edges between `s` and already mapped states agree on both sides.
    fn consistent(&self, s: usize, map: &[usize]) -> bool {
        let t = map[s];
        let mapped = |edges: &[(usize, usize)]| {
            let mut v: Vec<(usize, usize)> = edges
                .iter()
                .filter(|&&(_, x)| map[x] != usize::MAX)
                .map(|&(l, x)| (l, map[x]))
                .collect();
            v.sort_unstable();
            v
        };
        let restricted = |edges: &[(usize, usize)]| {
            let image: BTreeSet<usize> = map.iter().copied().filter(|&x| x != usize::MAX).collect();
            let mut v: Vec<(usize, usize)> = edges
                .iter()
                .copied()
                .filter(|(_, y)| image.contains(y))
                .collect();
            v.sort_unstable();
            v
        };
        mapped(&self.a.succ[s]) == restricted(&self.b.succ[t])
            && mapped(&self.a.pred[s]) == restricted(&self.b.pred[t])
    }
}
