//! Net ingestion: a PNML subset and a small line-oriented text format.
//!
//! Both readers number places and transitions in declaration order.
//!
//! Text format, one declaration per line:
//!
//! ```text
//! # comment
//! place <id> [<tokens>]
//! trans <id>
//! arc <source-id> <target-id> [<weight>]
//! ```
//!
//! Arc endpoints must be declared before the arc; the direction follows from
//! which endpoint is the place.

use std::fmt::Write as _;

use thiserror::Error;

use crate::net::{NetBuilder, NetError, PetriNet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("expected exactly one <net> element, found {0}")]
    NetCount(usize),
    #[error("<{element}> element without `{attribute}` attribute")]
    MissingAttribute {
        element: &'static str,
        attribute: &'static str,
    },
    #[error("invalid {what} `{text}`")]
    BadNumber { what: &'static str, text: String },
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetFormat {
    Pnml,
    Text,
}

impl NetFormat {
    /// PNML when the first non-blank byte is `<`, text otherwise.
    pub fn detect(content: &[u8]) -> NetFormat {
        let first = content
            .strip_prefix(b"\xEF\xBB\xBF")
            .unwrap_or(content)
            .iter()
            .find(|b| !b.is_ascii_whitespace());
        match first {
            Some(b'<') => NetFormat::Pnml,
            _ => NetFormat::Text,
        }
    }
}

/// Parses `content` in the given format, or the detected one.
pub fn parse_net(content: &[u8], format: Option<NetFormat>) -> Result<PetriNet, ParseError> {
    let text = std::str::from_utf8(content).map_err(|_| ParseError::Utf8)?;
    match format.unwrap_or_else(|| NetFormat::detect(content)) {
        NetFormat::Pnml => parse_pnml(text),
        NetFormat::Text => parse_text(text),
    }
}

/// Elements whose subtrees never hold net structure.
const SKIPPED: &[&str] = &["toolspecific", "graphics", "name"];

pub fn parse_pnml(source: &str) -> Result<PetriNet, ParseError> {
    let doc = roxmltree::Document::parse(source).map_err(|e| ParseError::Xml(e.to_string()))?;
    let nets: Vec<_> = doc
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "net")
        .collect();
    if nets.len() != 1 {
        return Err(ParseError::NetCount(nets.len()));
    }

    let mut builder = NetBuilder::new();
    let mut stack: Vec<_> = element_children(nets[0]).rev().collect();
    while let Some(node) = stack.pop() {
        match node.tag_name().name() {
            "place" => {
                let id = required(node, "place", "id")?;
                let tokens = match labelled_value(node, "initialMarking") {
                    Some(text) => parse_count(&text, "initial marking")?,
                    None => 0,
                };
                builder.add_place(id, tokens)?;
            }
            "transition" => {
                builder.add_transition(required(node, "transition", "id")?)?;
            }
            "arc" => {
                let source = required(node, "arc", "source")?;
                let target = required(node, "arc", "target")?;
                let weight = match labelled_value(node, "inscription") {
                    Some(text) => parse_count(&text, "arc inscription")?,
                    None => 1,
                };
                builder.add_arc(source, target, weight);
            }
            name if SKIPPED.contains(&name) => {}
            _ => stack.extend(element_children(node).rev()),
        }
    }
    Ok(builder.build()?)
}

fn element_children<'a, 'i>(
    node: roxmltree::Node<'a, 'i>,
) -> impl DoubleEndedIterator<Item = roxmltree::Node<'a, 'i>> {
    node.children().filter(|c| c.is_element())
}

fn required<'a>(
    node: roxmltree::Node<'a, '_>,
    element: &'static str,
    attribute: &'static str,
) -> Result<&'a str, ParseError> {
    node.attribute(attribute)
        .ok_or(ParseError::MissingAttribute { element, attribute })
}

/// Text of `<label><text>...</text></label>` under `node`.
fn labelled_value(node: roxmltree::Node, label: &str) -> Option<String> {
    let label = node
        .children()
        .find(|c| c.is_element() && c.tag_name().name() == label)?;
    let text = label
        .children()
        .find(|c| c.is_element() && c.tag_name().name() == "text")?;
    Some(text.text().unwrap_or("").to_string())
}

fn parse_count(text: &str, what: &'static str) -> Result<u32, ParseError> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::BadNumber {
            what,
            text: text.to_string(),
        });
    }
    t.parse().map_err(|_| ParseError::BadNumber {
        what,
        text: text.to_string(),
    })
}

pub fn parse_text(source: &str) -> Result<PetriNet, ParseError> {
    let mut builder = NetBuilder::new();
    for (n, raw) in source.split('\n').enumerate() {
        let line = n + 1;
        let content = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let err = |message: String| ParseError::Text { line, message };
        let words: Vec<&str> = content.split_whitespace().collect();
        let number = |word: &str, what| {
            parse_count(word, what).map_err(|e| err(e.to_string()))
        };
        match words.as_slice() {
            ["place", id] => {
                builder.add_place(*id, 0).map_err(|e| err(e.to_string()))?;
            }
            ["place", id, tokens] => {
                let tokens = number(tokens, "token count")?;
                builder.add_place(*id, tokens).map_err(|e| err(e.to_string()))?;
            }
            ["trans", id] => {
                builder.add_transition(*id).map_err(|e| err(e.to_string()))?;
            }
            ["arc", source, target] | ["arc", source, target, _] => {
                let weight = match words.get(3) {
                    Some(w) => number(w, "arc weight")?,
                    None => 1,
                };
                for id in [source, target] {
                    if !builder.is_place(id) && !builder.is_transition(id) {
                        return Err(err(format!("arc refers to undeclared identifier `{id}`")));
                    }
                }
                if builder.is_place(source) == builder.is_place(target) {
                    let kind = if builder.is_place(source) { "places" } else { "transitions" };
                    return Err(err(format!("arc {source} -> {target} joins two {kind}")));
                }
                if weight == 0 {
                    return Err(err(format!("arc {source} -> {target} has weight 0")));
                }
                builder.add_arc(*source, *target, weight);
            }
            [keyword, ..] if matches!(*keyword, "place" | "trans" | "arc") => {
                return Err(err(format!("wrong number of fields for `{keyword}`")));
            }
            [keyword, ..] => return Err(err(format!("unknown keyword `{keyword}`"))),
            [] => unreachable!(),
        }
    }
    Ok(builder.build()?)
}

/// Prints `net` in the text format. Parallel arcs come out merged.
pub fn to_text(net: &PetriNet) -> String {
    let mut out = String::new();
    for p in net.places() {
        let _ = writeln!(out, "place {} {}", p.id, p.initial);
    }
    for t in net.transitions() {
        let _ = writeln!(out, "trans {}", t.id);
    }
    for (t, decl) in net.transitions().iter().enumerate() {
        for a in net.pre(t) {
            let _ = writeln!(out, "arc {} {} {}", net.places()[a.place].id, decl.id, a.weight);
        }
        for a in net.post(t) {
            let _ = writeln!(out, "arc {} {} {}", decl.id, net.places()[a.place].id, a.weight);
        }
    }
    out
}
