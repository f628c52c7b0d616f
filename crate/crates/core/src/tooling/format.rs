//! Line-oriented `.rpes` documents and the command-line trace syntax.
//!
//! ```text
//! rpes e2
//! events a b
//! label a x
//! cause a b
//! conflict a b
//! reversible a
//! revcause b a
//! prevent b a
//! init a
//! ```
//!
//! `#` starts a comment. Every keyword except `rpes` may repeat; lists
//! accumulate.

use thiserror::Error;

use crate::kernel::{BuildError, EventSet, RawRpes, Rpes, StructuralError, Universe};
use crate::stepsem::{Configuration, Step, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Build(#[from] BuildError),
}

impl From<StructuralError> for ParseError {
    fn from(e: StructuralError) -> Self {
        ParseError::Build(BuildError::Structural(e))
    }
}

/// A named structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RpesDocument {
    pub name: String,
    pub rpes: Rpes,
}

/// Reads a document without resolving or validating it.
pub fn parse_raw(text: &str) -> Result<(String, RawRpes), ParseError> {
    let mut name = None;
    let mut raw = RawRpes::default();
    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let content = full.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let Some(keyword) = words.next() else {
            continue;
        };
        let args: Vec<String> = words.map(str::to_string).collect();
        let syntax = |message: String| ParseError::Syntax { line, message };
        let pair = |args: &[String]| -> Result<(String, String), ParseError> {
            match args {
                [x, y] => Ok((x.clone(), y.clone())),
                _ => Err(syntax(format!(
                    "`{keyword}` takes exactly two ids, got {}",
                    args.len()
                ))),
            }
        };
        if name.is_none() && keyword != "rpes" {
            return Err(syntax(format!(
                "expected `rpes <name>` header, found `{keyword}`"
            )));
        }
        match keyword {
            "rpes" => {
                if name.is_some() {
                    return Err(syntax("duplicate `rpes` header".into()));
                }
                match args.as_slice() {
                    [n] => name = Some(n.clone()),
                    _ => return Err(syntax("`rpes` takes exactly one name".into())),
                }
            }
            "events" => raw.events.extend(args),
            "label" => raw.labels.push(pair(&args)?),
            "cause" => raw.causality.push(pair(&args)?),
            "conflict" => raw.conflict.push(pair(&args)?),
            "reversible" => raw.reversible.extend(args),
            "revcause" => raw.reverse_causality.push(pair(&args)?),
            "prevent" => raw.prevention.push(pair(&args)?),
            "init" => raw.initial.extend(args),
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or(ParseError::Syntax {
        line: 0,
        message: "missing `rpes <name>` header".into(),
    })?;
    crate::kernel::EventId::new(name.clone())?;
    Ok((name, raw))
}

/// Reads, resolves and validates a document.
pub fn parse_rpes(text: &str) -> Result<RpesDocument, ParseError> {
    let (name, raw) = parse_raw(text)?;
    let rpes = raw.build()?;
    Ok(RpesDocument { name, rpes })
}

/// Canonical document: sections in fixed order, contents sorted, causality
/// as its covering pairs, each conflict once, self reverse causes omitted.
pub fn serialize_rpes(name: &str, r: &Rpes) -> String {
    let u = r.universe();
    let id = |i: usize| u.id(i).as_str();
    let mut out = format!("rpes {name}\n");
    let list = |set: EventSet| {
        set.iter()
            .map(|i| format!(" {}", id(i)))
            .collect::<String>()
    };
    out.push_str(&format!("events{}\n", list(r.events())));
    for e in r.events() {
        if r.label(e).as_str() != id(e) {
            out.push_str(&format!("label {} {}\n", id(e), r.label(e)));
        }
    }
    for (a, b) in r.causality_pairs() {
        let covered = r.causes(b).iter().any(|c| r.causes(c).contains(a));
        if !covered {
            out.push_str(&format!("cause {} {}\n", id(a), id(b)));
        }
    }
    for (a, b) in r.conflict_pairs() {
        out.push_str(&format!("conflict {} {}\n", id(a), id(b)));
    }
    out.push_str(&format!("reversible{}\n", list(r.reversible())));
    for (e, v) in r.reverse_causality_pairs() {
        if e != v {
            out.push_str(&format!("revcause {} {}\n", id(e), id(v)));
        }
    }
    for (e, v) in r.prevention_pairs() {
        out.push_str(&format!("prevent {} {}\n", id(e), id(v)));
    }
    out.push_str(&format!("init{}\n", list(r.initial())));
    out
}

fn id_list(
    universe: &Universe,
    text: &str,
    context: &'static str,
) -> Result<EventSet, StructuralError> {
    let ids: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    universe.set_of(&ids, context)
}

/// `fwd|rev` with comma-separated ids; a step without `|` is forward only.
pub fn parse_step(universe: &Universe, text: &str) -> Result<Step, StructuralError> {
    let (forward, reverse) = text.split_once('|').unwrap_or((text, ""));
    Ok(Step::new(
        id_list(universe, forward, "step")?,
        id_list(universe, reverse, "step")?,
    ))
}

/// Steps separated by `;`. The empty string is the empty trace.
pub fn parse_trace(universe: &Universe, text: &str) -> Result<Trace, StructuralError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Trace::empty());
    }
    text.split(';')
        .map(|s| parse_step(universe, s))
        .collect::<Result<_, _>>()
        .map(Trace::new)
}

/// `{a,b}`, `a,b` or `{}`.
pub fn parse_configuration(
    universe: &Universe,
    text: &str,
) -> Result<Configuration, StructuralError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(t);
    id_list(universe, inner, "configuration").map(Configuration::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E2: &str = "# mutual independence, b blocks undoing a\nrpes e2\nevents a b\nreversible a\nrevcause a a\nprevent b a\ninit\n";

    #[test]
    fn parses_e2() {
        let doc = parse_rpes(E2).unwrap();
        assert_eq!(doc.name, "e2");
        let expected = RawRpes::new(&["a", "b"])
            .reversible(&["a"])
            .prevents(&[("b", "a")])
            .build()
            .unwrap();
        assert_eq!(doc.rpes, expected);
        assert_eq!(
            serialize_rpes("e2", &doc.rpes),
            "rpes e2\nevents a b\nreversible a\nprevent b a\ninit\n"
        );
    }

    #[test]
    fn canonical_form_reduces_causality() {
        let text = "rpes t\nevents d c b a\ncause a b\ncause b c\ncause a c\nconflict d c\nlabel b x\nreversible\ninit\n";
        let doc = parse_rpes(text).unwrap();
        let out = serialize_rpes(&doc.name, &doc.rpes);
        assert_eq!(out, "rpes t\nevents a b c d\nlabel b x\ncause a b\ncause b c\nconflict c d\nreversible\ninit\n");
        assert_eq!(parse_rpes(&out).unwrap(), doc);
    }

    #[test]
    fn empty_document() {
        let doc = parse_rpes("rpes nothing\n").unwrap();
        assert!(doc.rpes.events().is_empty());
        assert_eq!(
            serialize_rpes("nothing", &doc.rpes),
            "rpes nothing\nevents\nreversible\ninit\n"
        );
    }

    #[test]
    fn rejections() {
        let invalid = parse_rpes("rpes t\nevents a\ncause a a\n").unwrap_err();
        match invalid {
            ParseError::Build(BuildError::Invalid(report)) => {
                assert!(report
                    .violations
                    .iter()
                    .any(|v| v.axiom.id() == "causality-irreflexive"))
            }
            other => panic!("{other:?}"),
        }
        let structural = parse_rpes("rpes t\nevents a b\nrevcause a b\n").unwrap_err();
        assert!(matches!(
            structural,
            ParseError::Build(BuildError::Structural(
                StructuralError::NotReversible { .. }
            ))
        ));
        let syntax = parse_rpes("rpes t\nevents a b\ncause a\n").unwrap_err();
        assert!(matches!(syntax, ParseError::Syntax { line: 3, .. }));
        assert!(matches!(
            parse_rpes("events a\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_rpes("rpes t\nfoo a\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_rpes("# only a comment\n"),
            Err(ParseError::Syntax { line: 0, .. })
        ));
        assert!(parse_rpes("rpes t\nevents a a\n").is_err());
    }

    #[test]
    fn trace_syntax() {
        let r = parse_rpes(E2).unwrap().rpes;
        let u = r.universe();
        let t = parse_trace(u, "a;|a;a,b").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.display(u), "a|;|a;a,b|");
        assert_eq!(parse_trace(u, "").unwrap(), Trace::empty());
        assert!(parse_trace(u, "a;z").is_err());
        assert_eq!(parse_configuration(u, "{a,b}").unwrap().display(u), "{a,b}");
        assert_eq!(parse_configuration(u, "{}").unwrap(), Configuration::EMPTY);
        assert_eq!(parse_configuration(u, "b").unwrap().display(u), "{b}");
    }
}
