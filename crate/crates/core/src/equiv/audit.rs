//! Bounded execution of the structural claims linking configurations,
//! residuals and the two transition systems.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::check_bisimulation;
use crate::kernel::{is_cause_respecting, EventSet, Rpes};
use crate::residual::{apply_removal, build_te_bounded, remove_trace, RemovalRecord, ResidualKey};
use crate::stepsem::{
    build_tc_bounded, check_enabled, enumerate_steps, explore_configs, forwards_reachable_configs,
    label_unchecked, reachable_configs, validate_trace, Configuration, Lts, Step, Trace,
};

/// Counterexamples kept per property; the total is always counted.
const KEEP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditOptions {
    pub max_trace_len: usize,
    pub max_step_size: Option<usize>,
    /// Enumerate every trace instead of one per (configuration, residual)
    /// pair.
    pub exhaustive: bool,
}

impl AuditOptions {
    pub fn new(max_trace_len: usize) -> Self {
        AuditOptions {
            max_trace_len,
            max_step_size: None,
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// Configurations are exactly the ends of traces.
    TraceEnds,
    /// A trace extended by a step is a trace exactly when the step is enabled
    /// at its end.
    TraceExtension,
    /// An enabled step at the end of a trace extends it to a trace ending in
    /// the step's target.
    TraceStepMatch,
    /// Reachable configurations are left-closed under causality.
    LeftClosed,
    /// Every reachable configuration is forwards reachable.
    ForwardReachable,
    /// Residuals along a trace shrink.
    ResidualMonotone,
    /// Every residual is a valid cause-respecting structure.
    ResidualWellFormed,
    /// Undone events are reversible in the previous residual.
    ResidualUndoReversible,
    /// Executed events are present in the previous residual.
    ResidualForwardPresent,
    /// Irreversibly executed events stay in the final configuration.
    ResidualIrreversibleKept,
    /// The residual's initial configuration is the final configuration
    /// restricted to the residual's events.
    ResidualInitial,
    /// A trace of a residual continues the trace that produced it, with the
    /// same resulting residual.
    ResidualCompose,
    /// Any continuation of a trace is a trace of its residual.
    ResidualSuffix,
    /// Every trace leads to a state of the residual system.
    ResidualReached,
    /// Every state of the residual system is the residual of some trace.
    ResidualRealized,
    /// Configuration steps are matched by residual steps.
    ConfigStepInResidual,
    /// Residual steps are matched by configuration steps.
    ResidualStepInConfig,
    /// The configuration and residual systems are bisimilar.
    Bisimilar,
}

impl Property {
    pub const ALL: [Property; 18] = [
        Property::TraceEnds,
        Property::TraceExtension,
        Property::TraceStepMatch,
        Property::LeftClosed,
        Property::ForwardReachable,
        Property::ResidualMonotone,
        Property::ResidualWellFormed,
        Property::ResidualUndoReversible,
        Property::ResidualForwardPresent,
        Property::ResidualIrreversibleKept,
        Property::ResidualInitial,
        Property::ResidualCompose,
        Property::ResidualSuffix,
        Property::ResidualReached,
        Property::ResidualRealized,
        Property::ConfigStepInResidual,
        Property::ResidualStepInConfig,
        Property::Bisimilar,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::TraceEnds => "trace-ends",
            Property::TraceExtension => "trace-extension",
            Property::TraceStepMatch => "trace-step-match",
            Property::LeftClosed => "left-closed",
            Property::ForwardReachable => "forward-reachable",
            Property::ResidualMonotone => "residual-monotone",
            Property::ResidualWellFormed => "residual-well-formed",
            Property::ResidualUndoReversible => "residual-undo-reversible",
            Property::ResidualForwardPresent => "residual-forward-present",
            Property::ResidualIrreversibleKept => "residual-irreversible-kept",
            Property::ResidualInitial => "residual-initial",
            Property::ResidualCompose => "residual-compose",
            Property::ResidualSuffix => "residual-suffix",
            Property::ResidualReached => "residual-reached",
            Property::ResidualRealized => "residual-realized",
            Property::ConfigStepInResidual => "config-step-in-residual",
            Property::ResidualStepInConfig => "residual-step-in-config",
            Property::Bisimilar => "bisimilar",
        }
    }

    /// Holds for every structure, not only cause-respecting ones.
    fn unconditional(self) -> bool {
        matches!(
            self,
            Property::TraceEnds | Property::TraceExtension | Property::TraceStepMatch
        )
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// The traces involved, rendered in command-line syntax.
    pub traces: Vec<(&'static str, String)>,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, t) in &self.traces {
            write!(f, "{name}=[{t}] ")?;
        }
        f.write_str(&self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Failed where failure is allowed.
    Observed,
    /// Precondition does not hold for this structure.
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Observed => "OBSERVED",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub property: Property,
    /// Failures count against the structure.
    pub judged: bool,
    pub applicable: bool,
    pub checked: usize,
    pub failures: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl AuditEntry {
    fn new(property: Property, judged: bool) -> Self {
        AuditEntry {
            property,
            judged,
            applicable: true,
            checked: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, cx: impl FnOnce() -> Counterexample) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < KEEP {
                self.counterexamples.push(cx());
            }
        }
    }

    pub fn status(&self) -> Status {
        match (self.applicable, self.failures, self.judged) {
            (false, _, _) => Status::Skipped,
            (true, 0, _) => Status::Pass,
            (true, _, true) => Status::Fail,
            (true, _, false) => Status::Observed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub options: AuditOptions,
    pub cause_respecting: bool,
    pub traces_explored: usize,
    pub isomorphic: bool,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    /// No judged property failed.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status() != Status::Fail)
    }

    pub fn entry(&self, property: Property) -> &AuditEntry {
        self.entries
            .iter()
            .find(|e| e.property == property)
            .expect("every property has an entry")
    }

    /// Report text; at most `shown` counterexamples per property.
    pub fn render(&self, shown: usize) -> String {
        let mut out = String::new();
        let o = &self.options;
        out.push_str(&format!(
            "cause-respecting: {}\nmax-len: {}\nmax-step: {}\nmode: {}\ntraces: {}\n",
            self.cause_respecting,
            o.max_trace_len,
            o.max_step_size
                .map_or("unbounded".to_string(), |n| n.to_string()),
            if o.exhaustive {
                "exhaustive"
            } else {
                "deduplicated"
            },
            self.traces_explored
        ));
        for e in &self.entries {
            out.push_str(&format!(
                "{} {} checked={} failures={}\n",
                e.status(),
                e.property,
                e.checked,
                e.failures
            ));
            for cx in e.counterexamples.iter().take(shown) {
                out.push_str(&format!("  {cx}\n"));
            }
        }
        out.push_str(&format!("isomorphic: {}\n", self.isomorphic));
        out
    }
}

/// A trace found during enumeration with its configurations and residuals.
struct Node {
    trace: Trace,
    configs: Vec<Configuration>,
    residuals: Vec<Rpes>,
    records: Vec<RemovalRecord>,
}

impl Node {
    fn last_config(&self) -> Configuration {
        *self.configs.last().expect("nonempty")
    }

    fn residual(&self) -> &Rpes {
        self.residuals.last().expect("nonempty")
    }

    fn extend(&self, step: Step, r: &Rpes) -> Node {
        let next = Configuration::new((self.last_config().events() - step.reverse) | step.forward);
        debug_assert!(r.is_conflict_free(next.events()));
        let (res, record) = apply_removal(self.residual(), step);
        let mut node = Node {
            trace: self.trace.then(step),
            configs: self.configs.clone(),
            residuals: self.residuals.clone(),
            records: self.records.clone(),
        };
        node.configs.push(next);
        node.residuals.push(res);
        node.records.push(record);
        node
    }
}

fn key_of(r: &Rpes) -> ResidualKey {
    ResidualKey {
        events: r.events(),
        reversible: r.reversible(),
        initial: r.initial(),
    }
}

fn enumerate(r: &Rpes, options: &AuditOptions) -> Vec<Node> {
    let root = Node {
        trace: Trace::empty(),
        configs: vec![Configuration::new(r.initial())],
        residuals: vec![r.clone()],
        records: Vec::new(),
    };
    let mut seen = BTreeSet::from([(root.last_config(), key_of(r))]);
    let mut nodes = vec![root];
    let mut frontier = 0;
    while frontier < nodes.len() {
        let idx = frontier;
        frontier += 1;
        if nodes[idx].trace.len() >= options.max_trace_len {
            continue;
        }
        for step in enumerate_steps(r, nodes[idx].last_config(), options.max_step_size) {
            let child = nodes[idx].extend(step, r);
            if options.exhaustive || seen.insert((child.last_config(), key_of(child.residual()))) {
                nodes.push(child);
            }
        }
    }
    nodes
}

fn pairs_subset(small: Vec<(usize, usize)>, big: &[(usize, usize)]) -> bool {
    small.iter().all(|p| big.binary_search(p).is_ok())
}

/// Runs every check on `r` over traces of length at most
/// `options.max_trace_len`.
pub fn audit_semantics(r: &Rpes, options: AuditOptions) -> AuditReport {
    let cr = is_cause_respecting(r);
    let u = r.universe();
    let show = |t: &Trace| t.display(u);
    let mut entries: BTreeMap<Property, AuditEntry> = Property::ALL
        .iter()
        .map(|&p| (p, AuditEntry::new(p, cr || p.unconditional())))
        .collect();
    let nodes = enumerate(r, &options);

    // trace ends against breadth-first reachability at the same depth
    {
        let by_bfs: BTreeSet<Configuration> =
            explore_configs(r, false, options.max_step_size, Some(options.max_trace_len))
                .into_keys()
                .collect();
        let by_traces: BTreeSet<Configuration> = nodes.iter().map(Node::last_config).collect();
        let diff: Vec<String> = by_bfs
            .symmetric_difference(&by_traces)
            .map(|c| c.display(u))
            .collect();
        entries
            .get_mut(&Property::TraceEnds)
            .expect("entry")
            .check(diff.is_empty(), || Counterexample {
                traces: vec![],
                detail: format!(
                    "reached by only one of traces and exploration: {}",
                    diff.join(" ")
                ),
            });
    }

    let reachable = reachable_configs(r);
    {
        let e = entries.get_mut(&Property::LeftClosed).expect("entry");
        for &c in &reachable {
            e.check(r.is_left_closed(c.events()), || Counterexample {
                traces: vec![],
                detail: format!("{} is not left-closed", c.display(u)),
            });
        }
        let e = entries.get_mut(&Property::ForwardReachable).expect("entry");
        if r.initial().is_empty() {
            let forwards = forwards_reachable_configs(r);
            for &c in &reachable {
                e.check(forwards.contains(&c), || Counterexample {
                    traces: vec![],
                    detail: format!("{} is reachable but not forwards reachable", c.display(u)),
                });
            }
        } else {
            // undoing part of a nonempty initial configuration reaches
            // configurations no forward run produces
            e.applicable = false;
        }
    }

    let te = build_te_bounded(r, options.max_step_size);
    let tc = build_tc_bounded(r, options.max_step_size);
    let te_depth = depths(&te);

    for node in &nodes {
        let t = &node.trace;
        let c = node.last_config();
        let res = node.residual();
        let enabled = enumerate_steps(r, c, options.max_step_size);

        // extension: exactly the enabled steps extend the trace
        {
            let e = entries.get_mut(&Property::TraceExtension).expect("entry");
            let limit = options.max_step_size.unwrap_or(usize::MAX);
            for forward in (r.events() - c.events()).subsets() {
                for reverse in c.events().subsets() {
                    let step = Step::new(forward, reverse);
                    if step.is_empty() || step.size() > limit {
                        continue;
                    }
                    let extended = validate_trace(r, &t.then(step));
                    let is_enabled = enabled.binary_search(&step).is_ok();
                    let ok = match &extended {
                        Ok(cs) => {
                            is_enabled
                                && *cs.last().expect("nonempty")
                                    == Configuration::new((c.events() - reverse) | forward)
                        }
                        Err(_) => !is_enabled,
                    };
                    e.check(ok, || Counterexample {
                        traces: vec![("t", show(t)), ("s", step.display(u))],
                        detail: format!(
                            "extension valid: {}, step enabled at end: {}",
                            extended.is_ok(),
                            is_enabled
                        ),
                    });
                }
            }
        }
        {
            let e = entries.get_mut(&Property::TraceStepMatch).expect("entry");
            for &step in &enabled {
                let target = Configuration::new((c.events() - step.reverse) | step.forward);
                let ok = reachable.contains(&target)
                    && validate_trace(r, &t.then(step))
                        .is_ok_and(|cs| *cs.last().expect("nonempty") == target);
                e.check(ok, || Counterexample {
                    traces: vec![("t", show(t)), ("s", step.display(u))],
                    detail: format!("extension does not end at {}", target.display(u)),
                });
            }
        }

        residual_chain_checks(r, node, &mut entries, &show);

        {
            let k = key_of(res);
            let name = k.display(u);
            let e = entries.get_mut(&Property::ResidualReached).expect("entry");
            e.check(te.states().contains(&name), || Counterexample {
                traces: vec![("t", show(t))],
                detail: format!("residual {name} is not a state of the residual system"),
            });

            let e = entries
                .get_mut(&Property::ConfigStepInResidual)
                .expect("entry");
            for &step in &enabled {
                let (next, _) = apply_removal(res, step);
                let label = label_unchecked(r, step);
                let target = key_of(&next).display(u);
                e.check(te.has_transition(&name, &label, &target), || {
                    Counterexample {
                        traces: vec![("t", show(t)), ("s", step.display(u))],
                        detail: format!("no residual transition {name} {label} {target}"),
                    }
                });
            }

            let e = entries
                .get_mut(&Property::ResidualStepInConfig)
                .expect("entry");
            for (label, target) in te.successors(&name) {
                let matched = enabled.iter().any(|&step| {
                    label_unchecked(r, step) == *label
                        && key_of(&apply_removal(res, step).0).display(u) == target
                });
                e.check(matched, || Counterexample {
                    traces: vec![("t", show(t))],
                    detail: format!(
                        "residual transition {name} {label} {target} has no configuration step from {}",
                        c.display(u)
                    ),
                });
            }
        }

        let budget = options.max_trace_len - t.len();
        compose_checks(r, node, budget, options.max_step_size, &mut entries, &show);
        suffix_checks(r, node, budget, options.max_step_size, &mut entries, &show);
    }

    {
        let realized: BTreeSet<String> = nodes
            .iter()
            .map(|n| key_of(n.residual()).display(u))
            .collect();
        let e = entries.get_mut(&Property::ResidualRealized).expect("entry");
        for (state, depth) in &te_depth {
            if *depth <= options.max_trace_len {
                e.check(realized.contains(state), || Counterexample {
                    traces: vec![],
                    detail: format!(
                        "residual {state} at depth {depth} is the residual of no trace"
                    ),
                });
            }
        }
    }

    let bisim = check_bisimulation(&tc, &te);
    {
        let e = entries.get_mut(&Property::Bisimilar).expect("entry");
        e.check(bisim.bisimilar, || {
            let d = bisim
                .counterexample
                .as_ref()
                .expect("present when not bisimilar");
            Counterexample {
                traces: vec![],
                detail: format!(
                    "labels {} separate {} and {}",
                    d.labels
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" "),
                    d.pair.0,
                    d.pair.1
                ),
            }
        });
    }
    let isomorphic = super::check_isomorphism(&tc, &te).is_some();

    AuditReport {
        options,
        cause_respecting: cr,
        traces_explored: nodes.len(),
        isomorphic,
        entries: entries.into_values().collect(),
    }
}

fn depths(l: &Lts) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::from([(l.initial().to_string(), 0)]);
    let mut queue = VecDeque::from([l.initial().to_string()]);
    while let Some(s) = queue.pop_front() {
        let d = out[&s];
        let next: Vec<String> = l.successors(&s).map(|(_, t)| t.to_string()).collect();
        for t in next {
            if !out.contains_key(&t) {
                out.insert(t.clone(), d + 1);
                queue.push_back(t);
            }
        }
    }
    out
}

fn residual_chain_checks(
    r: &Rpes,
    node: &Node,
    entries: &mut BTreeMap<Property, AuditEntry>,
    show: &dyn Fn(&Trace) -> String,
) {
    let u = r.universe();
    let t = &node.trace;
    let n = t.len();
    let cx = |detail: String| Counterexample {
        traces: vec![("t", show(t))],
        detail,
    };
    let res = node.residual();
    if n > 0 {
        let prev = &node.residuals[n - 1];
        let step = t.steps()[n - 1];
        let shrinks = res.events().is_subset(prev.events())
            && res.reversible().is_subset(prev.reversible())
            && res.universe() == prev.universe()
            && pairs_subset(res.causality_pairs(), &prev.causality_pairs())
            && pairs_subset(res.conflict_pairs(), &prev.conflict_pairs())
            && pairs_subset(
                res.reverse_causality_pairs(),
                &prev.reverse_causality_pairs(),
            )
            && pairs_subset(res.prevention_pairs(), &prev.prevention_pairs());
        entries
            .get_mut(&Property::ResidualMonotone)
            .expect("entry")
            .check(shrinks, || {
                cx(format!(
                    "residual after step {n} is not contained in its predecessor"
                ))
            });
        entries
            .get_mut(&Property::ResidualUndoReversible)
            .expect("entry")
            .check(step.reverse.is_subset(prev.reversible()), || {
                cx(format!(
                    "step {n} undoes {} outside the reversible events {}",
                    u.fmt_set(step.reverse),
                    u.fmt_set(prev.reversible())
                ))
            });
        entries
            .get_mut(&Property::ResidualForwardPresent)
            .expect("entry")
            .check(step.forward.is_subset(prev.events()), || {
                cx(format!(
                    "step {n} executes {} outside the events {}",
                    u.fmt_set(step.forward),
                    u.fmt_set(prev.events())
                ))
            });
    }
    let valid = res.validate().valid && is_cause_respecting(res);
    entries
        .get_mut(&Property::ResidualWellFormed)
        .expect("entry")
        .check(valid, || {
            cx("residual is not a valid cause-respecting structure".into())
        });
    let last = node.last_config().events();
    let tilde_all = node
        .records
        .iter()
        .fold(EventSet::EMPTY, |acc, rec| acc | rec.tilde);
    entries
        .get_mut(&Property::ResidualIrreversibleKept)
        .expect("entry")
        .check(tilde_all.is_subset(last), || {
            cx(format!(
                "irreversibly executed {} not within {}",
                u.fmt_set(tilde_all - last),
                u.fmt_set(last)
            ))
        });
    entries
        .get_mut(&Property::ResidualInitial)
        .expect("entry")
        .check(res.initial() == last & res.events(), || {
            cx(format!(
                "initial configuration {} differs from {}",
                u.fmt_set(res.initial()),
                u.fmt_set(last & res.events())
            ))
        });
}

/// Traces of the residual of `node` continue its trace in the root, with the
/// same residual at the end.
fn compose_checks(
    r: &Rpes,
    node: &Node,
    budget: usize,
    max_step_size: Option<usize>,
    entries: &mut BTreeMap<Property, AuditEntry>,
    show: &dyn Fn(&Trace) -> String,
) {
    let t = &node.trace;
    let base = node.residual();
    let e = entries.get_mut(&Property::ResidualCompose).expect("entry");
    // (configuration of the residual, configuration of the root, residual of the residual)
    let start = (
        Configuration::new(base.initial()),
        node.last_config(),
        base.clone(),
        Trace::empty(),
    );
    let mut seen = BTreeSet::from([(start.0, start.1, key_of(&start.2))]);
    let mut queue = VecDeque::from([start]);
    while let Some((y, x, res, rest)) = queue.pop_front() {
        if rest.len() >= budget {
            continue;
        }
        for step in enumerate_steps(base, y, max_step_size) {
            let cont = rest.then(step);
            let in_root = check_enabled(r, x, step);
            if let Err(err) = &in_root {
                e.check(false, || Counterexample {
                    traces: vec![("t", show(t)), ("t'", show(&cont))],
                    detail: format!("concatenation is not a trace: {err}"),
                });
                continue;
            }
            let (next_res, _) = apply_removal(&res, step);
            let whole = remove_trace(r, &t.concat(&cont));
            e.check(whole.as_ref() == Ok(&next_res), || Counterexample {
                traces: vec![("t", show(t)), ("t'", show(&cont))],
                detail: "residual of the concatenation differs".into(),
            });
            let apply =
                |c: Configuration| Configuration::new((c.events() - step.reverse) | step.forward);
            let (y2, x2) = (apply(y), apply(x));
            if seen.insert((y2, x2, key_of(&next_res))) {
                queue.push_back((y2, x2, next_res, cont));
            }
        }
    }
}

/// Continuations of the trace of `node` in the root are traces of its
/// residual.
fn suffix_checks(
    r: &Rpes,
    node: &Node,
    budget: usize,
    max_step_size: Option<usize>,
    entries: &mut BTreeMap<Property, AuditEntry>,
    show: &dyn Fn(&Trace) -> String,
) {
    let t = &node.trace;
    let base = node.residual();
    let e = entries.get_mut(&Property::ResidualSuffix).expect("entry");
    let start = (
        node.last_config(),
        Configuration::new(base.initial()),
        Trace::empty(),
    );
    let mut seen = BTreeSet::from([(start.0, start.1)]);
    let mut queue = VecDeque::from([start]);
    while let Some((x, y, rest)) = queue.pop_front() {
        if rest.len() >= budget {
            continue;
        }
        for step in enumerate_steps(r, x, max_step_size) {
            let cont = rest.then(step);
            if let Err(err) = check_enabled(base, y, step) {
                e.check(false, || Counterexample {
                    traces: vec![("t", show(t)), ("t'", show(&cont))],
                    detail: format!("continuation is not a trace of the residual: {err}"),
                });
                continue;
            }
            e.checked += 1;
            let apply =
                |c: Configuration| Configuration::new((c.events() - step.reverse) | step.forward);
            let (x2, y2) = (apply(x), apply(y));
            if seen.insert((x2, y2)) {
                queue.push_back((x2, y2, cont));
            }
        }
    }
}
