//! Line-based text formats for graphs and set systems.
//!
//! Graph files:
//!
//! ```text
//! c comment
//! p mwis <n> <m> <d>
//! v <id> <numerator>[/<denominator>]
//! e <u> <v>
//! ```
//!
//! Set files:
//!
//! ```text
//! p setpack <num_sets> <k>
//! s <weight> <element> ...
//! ```

use std::collections::{HashMap, HashSet};

use claw_mwis::setpacking::{SetSystem, WeightedSet};
use claw_mwis::{format_weight, parse_weight, ProblemInstance, VertexSet, Weight};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Document(String),
}

fn at(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

/// Comment annotations understood by the solver.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Annotations {
    /// From `c a-side <ids>`, written by the tight-instance generator.
    pub a_side: Option<VertexSet>,
}

#[derive(Clone, Debug)]
pub enum Document {
    Graph(ProblemInstance, Annotations),
    Sets(SetSystem),
}

/// Content lines with 1-based line numbers, skipping blanks.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
}

fn number<T: std::str::FromStr>(
    line: usize,
    token: Option<&&str>,
    what: &str,
) -> Result<T, FormatError> {
    let token = token.ok_or_else(|| at(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| at(line, format!("invalid {what} '{token}'")))
}

fn weight(line: usize, token: Option<&&str>) -> Result<Weight, FormatError> {
    let token = token.ok_or_else(|| at(line, "missing weight"))?;
    let w = parse_weight(token).ok_or_else(|| at(line, format!("invalid weight '{token}'")))?;
    if w <= Weight::zero() {
        return Err(at(line, format!("nonpositive weight {token}")));
    }
    Ok(w)
}

/// Reads the header type of the first content line.
pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let header = lines(text).find(|(_, t)| t[0] != "c");
    match header {
        Some((_, t)) if t[0] == "p" && t.get(1) == Some(&"setpack") => {
            parse_set_system(text).map(Document::Sets)
        }
        _ => parse_graph_annotated(text).map(|(g, a)| Document::Graph(g, a)),
    }
}

pub fn parse_graph(text: &str) -> Result<ProblemInstance, FormatError> {
    parse_graph_annotated(text).map(|(g, _)| g)
}

pub fn parse_graph_annotated(text: &str) -> Result<(ProblemInstance, Annotations), FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut weights: Vec<Option<Weight>> = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut notes = Annotations::default();
    let mut a_side_line = 0;
    for (line, t) in lines(text) {
        match t[0] {
            "c" => {
                if t.get(1) == Some(&"a-side") {
                    let ids: Result<VertexSet, _> = t[2..]
                        .iter()
                        .map(|s| {
                            s.parse::<usize>()
                                .map_err(|_| at(line, format!("invalid vertex id '{s}'")))
                        })
                        .collect();
                    notes.a_side = Some(ids?);
                    a_side_line = line;
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(at(line, "second header line"));
                }
                if t.get(1) != Some(&"mwis") {
                    return Err(at(line, "expected 'p mwis <n> <m> <d>'"));
                }
                let n = number(line, t.get(2), "vertex count")?;
                let m = number(line, t.get(3), "edge count")?;
                let d = number(line, t.get(4), "claw parameter d")?;
                if t.len() > 5 {
                    return Err(at(line, "trailing tokens after header"));
                }
                header = Some((n, m, d));
                weights = vec![None; n];
            }
            "v" | "e" if header.is_none() => {
                return Err(at(line, "data before the 'p mwis' header"))
            }
            "v" => {
                let id: usize = number(line, t.get(1), "vertex id")?;
                let w = weight(line, t.get(2))?;
                let slot = weights
                    .get_mut(id)
                    .ok_or_else(|| at(line, format!("vertex {id} out of range")))?;
                if slot.is_some() {
                    return Err(at(line, format!("duplicate vertex {id}")));
                }
                *slot = Some(w);
            }
            "e" => {
                let u: usize = number(line, t.get(1), "edge endpoint")?;
                let v: usize = number(line, t.get(2), "edge endpoint")?;
                let n = weights.len();
                if u >= n || v >= n {
                    return Err(at(
                        line,
                        format!("dangling edge endpoint in {u} {v} (n = {n})"),
                    ));
                }
                if u == v {
                    return Err(at(line, format!("self-loop at {u}")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(at(line, format!("duplicate edge {u} {v}")));
                }
                edges.push((u, v));
            }
            other => return Err(at(line, format!("unknown line type '{other}'"))),
        }
    }
    let (_, m, d) =
        header.ok_or_else(|| FormatError::Document("missing 'p mwis' header".into()))?;
    if edges.len() != m {
        return Err(FormatError::Document(format!(
            "header declares {m} edges but {} were given",
            edges.len()
        )));
    }
    let weights = weights
        .into_iter()
        .enumerate()
        .map(|(v, w)| {
            w.ok_or_else(|| FormatError::Document(format!("vertex {v} has no weight line")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(a) = &notes.a_side {
        if let Some(bad) = a.iter().find(|&v| v >= weights.len()) {
            return Err(at(a_side_line, format!("a-side vertex {bad} out of range")));
        }
    }
    let inst = ProblemInstance::new(weights, &edges, d)
        .map_err(|e| FormatError::Document(e.to_string()))?;
    Ok((inst, notes))
}

pub fn write_graph(inst: &ProblemInstance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("c {c}\n"));
    }
    out.push_str(&format!(
        "p mwis {} {} {}\n",
        inst.n(),
        inst.edge_count(),
        inst.d()
    ));
    for (v, w) in inst.weights().iter().enumerate() {
        out.push_str(&format!("v {v} {}\n", format_weight(w)));
    }
    for (u, v) in inst.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn parse_set_system(text: &str) -> Result<SetSystem, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut sets = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (line, t) in lines(text) {
        match t[0] {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(at(line, "second header line"));
                }
                if t.get(1) != Some(&"setpack") {
                    return Err(at(line, "expected 'p setpack <num_sets> <k>'"));
                }
                let count = number(line, t.get(2), "set count")?;
                let k: usize = number(line, t.get(3), "set size bound k")?;
                if k == 0 {
                    return Err(at(line, "k must be at least 1"));
                }
                if t.len() > 4 {
                    return Err(at(line, "trailing tokens after header"));
                }
                header = Some((count, k));
            }
            "s" => {
                let (_, k) =
                    header.ok_or_else(|| at(line, "data before the 'p setpack' header"))?;
                let w = weight(line, t.get(1))?;
                let mut elements = Vec::new();
                for token in &t[2..] {
                    let next = index.len();
                    let id = *index.entry((*token).to_string()).or_insert(next);
                    if id == labels.len() {
                        labels.push((*token).to_string());
                    }
                    if !elements.contains(&id) {
                        elements.push(id);
                    }
                }
                if elements.is_empty() {
                    return Err(at(line, "set without elements"));
                }
                if elements.len() > k {
                    return Err(at(
                        line,
                        format!("set has {} elements but k = {k}", elements.len()),
                    ));
                }
                sets.push(WeightedSet {
                    weight: w,
                    elements,
                });
            }
            other => return Err(at(line, format!("unknown line type '{other}'"))),
        }
    }
    let (count, k) =
        header.ok_or_else(|| FormatError::Document("missing 'p setpack' header".into()))?;
    if sets.len() != count {
        return Err(FormatError::Document(format!(
            "header declares {count} sets but {} were given",
            sets.len()
        )));
    }
    SetSystem::new(k, sets, labels).map_err(|e| FormatError::Document(e.to_string()))
}

pub fn write_set_system(system: &SetSystem) -> String {
    let mut out = format!("p setpack {} {}\n", system.len(), system.k());
    for set in system.sets() {
        out.push_str("s ");
        out.push_str(&format_weight(&set.weight));
        for &e in &set.elements {
            out.push(' ');
            out.push_str(&system.labels()[e]);
        }
        out.push('\n');
    }
    out
}
