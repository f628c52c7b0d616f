//! Graphviz rendering of transition systems.

use std::collections::{BTreeMap, BTreeSet};

use crate::stepsem::{Lts, StateKind};

/// Node name for a state key: `C_a_b` for configurations,
/// `R_E{..}_F{..}_C{..}` for residuals, the key itself otherwise.
pub fn node_name(kind: StateKind, key: &str) -> String {
    match kind {
        StateKind::Configuration => {
            let inner = key.trim_start_matches('{').trim_end_matches('}');
            format!("C_{}", inner.replace(',', "_"))
        }
        StateKind::Residual => format!("R_{}", key.replace("}F{", "}_F{").replace("}C{", "}_C{")),
        StateKind::Opaque => key.to_string(),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Node names for every state, made unique by a numeric suffix where ids
/// containing `_` make two names coincide.
fn node_names(l: &Lts) -> BTreeMap<&str, String> {
    let mut taken = BTreeSet::new();
    let mut out = BTreeMap::new();
    for s in l.states() {
        let base = node_name(l.kind(), s);
        let mut name = base.clone();
        let mut n = 2;
        while !taken.insert(name.clone()) {
            name = format!("{base}_{n}");
            n += 1;
        }
        out.insert(s.as_str(), name);
    }
    out
}

/// DOT digraph of `l`; states and edges in sorted order, the initial state
/// drawn as a double circle.
pub fn export_dot(l: &Lts, graph_name: &str) -> String {
    let names = node_names(l);
    let mut out = format!("digraph {} {{\n  node [shape=circle];\n", quote(graph_name));
    for s in l.states() {
        let shape = if s == l.initial() {
            ", shape=doublecircle"
        } else {
            ""
        };
        out.push_str(&format!(
            "  {} [label={}{}];\n",
            quote(&names[s.as_str()]),
            quote(s),
            shape
        ));
    }
    for t in l.transitions() {
        out.push_str(&format!(
            "  {} -> {} [label={}];\n",
            quote(&names[t.source.as_str()]),
            quote(&names[t.target.as_str()]),
            quote(&t.label.to_string())
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::RawRpes;
    use crate::residual::build_te;
    use crate::stepsem::build_tc;

    fn e2() -> crate::kernel::Rpes {
        RawRpes::new(&["a", "b"])
            .reversible(&["a"])
            .prevents(&[("b", "a")])
            .build()
            .unwrap()
    }

    #[test]
    fn names() {
        assert_eq!(node_name(StateKind::Configuration, "{a,b}"), "C_a_b");
        assert_eq!(node_name(StateKind::Configuration, "{}"), "C_");
        assert_eq!(
            node_name(StateKind::Residual, "E{a,b}F{a}C{}"),
            "R_E{a,b}_F{a}_C{}"
        );
    }

    #[test]
    fn tc_of_e2() {
        let dot = export_dot(&build_tc(&e2()), "tc");
        assert_eq!(dot.matches(" -> ").count(), 6);
        assert_eq!(dot.matches("[label=").count(), 10);
        assert!(dot.contains("\"C_\" [label=\"{}\", shape=doublecircle];"));
        assert!(dot.contains("\"C_\" -> \"C_a_b\" [label=\"{a:1,b:1}\"];"));
        assert_eq!(dot, export_dot(&build_tc(&e2()), "tc"));
    }

    #[test]
    fn te_of_e2() {
        let dot = export_dot(&build_te(&e2()), "te");
        assert_eq!(dot.matches(" -> ").count(), 6);
        assert_eq!(dot.matches("doublecircle").count(), 1);
        assert!(
            dot.contains("\"R_E{a,b}_F{a}_C{}\" [label=\"E{a,b}F{a}C{}\", shape=doublecircle];")
        );
    }

    #[test]
    fn single_state() {
        let dot = export_dot(&Lts::new(StateKind::Opaque, "s"), "one");
        assert_eq!(
            dot,
            "digraph \"one\" {\n  node [shape=circle];\n  \"s\" [label=\"s\", shape=doublecircle];\n}\n"
        );
    }

    #[test]
    fn colliding_names_are_kept_apart() {
        let mut l = Lts::new(StateKind::Configuration, "{a,b}");
        l.add_state("{a_b}");
        let dot = export_dot(&l, "x");
        assert!(dot.contains("\"C_a_b\""));
        assert!(dot.contains("\"C_a_b_2\""));
    }
}
