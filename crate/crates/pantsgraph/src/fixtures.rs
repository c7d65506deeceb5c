//! Hand-labeled circuit fixtures: small graphs with explicit curve labels,
//! edge types and a distinguished circuit, loaded from JSON and validated
//! against the move rules before use.
//!
//! Fixtures let the circuit predicates run on configurations from surfaces
//! that have no built-in model. Validation checks that every edge's type
//! matches what its endpoint labels actually exchange.

use crate::models::{Curve, EdgeInfo, MoveType, Vertex};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};

/// Errors found while parsing or validating a fixture file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixtureError {
    #[error("fixture JSON is malformed: {0}")]
    BadJson(String),
    #[error("fixture '{0}': {1}")]
    Invalid(String, String),
}

#[derive(Deserialize)]
struct FileCurve {
    name: String,
    one_sided: bool,
}

#[derive(Deserialize)]
struct FileVertex {
    id: String,
    curves: Vec<FileCurve>,
}

#[derive(Deserialize)]
struct FileEdge {
    u: String,
    v: String,
    #[serde(rename = "type")]
    edge_type: u8,
    #[serde(default)]
    direction: Option<[String; 2]>,
}

#[derive(Deserialize)]
struct FileSubgraphs {
    u: String,
    v: String,
    subgraphs: Vec<String>,
}

#[derive(Deserialize)]
struct FixtureFile {
    name: String,
    note: String,
    vertices: Vec<FileVertex>,
    edges: Vec<FileEdge>,
    circuit: Vec<String>,
    #[serde(default)]
    subgraphs: Vec<FileSubgraphs>,
}

#[derive(Debug, Clone)]
struct EdgeRecord {
    move_type: MoveType,
    direction: Option<(String, String)>,
}

/// A validated fixture: labeled vertices, typed edges and one distinguished
/// circuit.
#[derive(Debug, Clone)]
pub struct LabeledFixture {
    pub name: String,
    pub note: String,
    labels: BTreeMap<String, Vec<Curve>>,
    edges: BTreeMap<(String, String), EdgeRecord>,
    circuit: Vec<String>,
    subgraphs: BTreeMap<(String, String), BTreeSet<String>>,
}

fn key(u: &str, v: &str) -> (String, String) {
    if u <= v {
        (u.to_string(), v.to_string())
    } else {
        (v.to_string(), u.to_string())
    }
}

impl LabeledFixture {
    pub fn from_json(text: &str) -> Result<LabeledFixture, FixtureError> {
        let file: FixtureFile =
            serde_json::from_str(text).map_err(|e| FixtureError::BadJson(e.to_string()))?;
        let name = file.name.clone();
        let invalid = |msg: String| FixtureError::Invalid(name.clone(), msg);

        let mut one_sidedness: BTreeMap<String, bool> = BTreeMap::new();
        let mut labels: BTreeMap<String, Vec<Curve>> = BTreeMap::new();
        for fv in &file.vertices {
            if fv.id.is_empty() {
                return Err(invalid("empty vertex id".to_string()));
            }
            let mut curves = Vec::new();
            for c in &fv.curves {
                match one_sidedness.get(&c.name) {
                    Some(prev) if *prev != c.one_sided => {
                        return Err(invalid(format!(
                            "curve '{}' is both one-sided and two-sided",
                            c.name
                        )));
                    }
                    None => {
                        one_sidedness.insert(c.name.clone(), c.one_sided);
                    }
                    _ => {}
                }
                curves.push(Curve::Sym {
                    name: c.name.clone(),
                    one_sided: c.one_sided,
                });
            }
            curves.sort();
            let n = curves.len();
            curves.dedup();
            if curves.len() != n {
                return Err(invalid(format!("vertex '{}' repeats a curve", fv.id)));
            }
            if labels.insert(fv.id.clone(), curves).is_some() {
                return Err(invalid(format!("duplicate vertex id '{}'", fv.id)));
            }
        }

        let mut edges: BTreeMap<(String, String), EdgeRecord> = BTreeMap::new();
        for fe in &file.edges {
            let lu = labels
                .get(&fe.u)
                .ok_or_else(|| invalid(format!("edge endpoint '{}' undefined", fe.u)))?;
            let lv = labels
                .get(&fe.v)
                .ok_or_else(|| invalid(format!("edge endpoint '{}' undefined", fe.v)))?;
            if fe.u == fe.v {
                return Err(invalid(format!("self-loop at '{}'", fe.u)));
            }
            let move_type = MoveType::from_number(fe.edge_type)
                .ok_or_else(|| invalid(format!("bad edge type {}", fe.edge_type)))?;
            let replaced: Vec<&Curve> = lu.iter().filter(|c| !lv.contains(c)).collect();
            let inserted: Vec<&Curve> = lv.iter().filter(|c| !lu.contains(c)).collect();
            let direction = match move_type {
                MoveType::T1 | MoveType::T2 | MoveType::T3 => {
                    if fe.direction.is_some() {
                        return Err(invalid(format!(
                            "edge {}-{} of type {} must not carry a direction",
                            fe.u, fe.v, fe.edge_type
                        )));
                    }
                    let one_sided = move_type == MoveType::T3;
                    let ok = replaced.len() == 1
                        && inserted.len() == 1
                        && replaced[0].is_one_sided() == one_sided
                        && inserted[0].is_one_sided() == one_sided;
                    if !ok {
                        return Err(invalid(format!(
                            "edge {}-{} does not exchange one {} curve as type {} requires",
                            fe.u,
                            fe.v,
                            if one_sided { "one-sided" } else { "two-sided" },
                            fe.edge_type
                        )));
                    }
                    None
                }
                MoveType::T4 => {
                    let dir = fe.direction.as_ref().ok_or_else(|| {
                        invalid(format!("type-4 edge {}-{} needs a direction", fe.u, fe.v))
                    })?;
                    let (from, to) = (dir[0].clone(), dir[1].clone());
                    if !(from == fe.u && to == fe.v || from == fe.v && to == fe.u) {
                        return Err(invalid(format!(
                            "direction of edge {}-{} names other vertices",
                            fe.u, fe.v
                        )));
                    }
                    let (lost, gained) = if from == fe.u {
                        (&replaced, &inserted)
                    } else {
                        (&inserted, &replaced)
                    };
                    let ok = lost.len() == 1
                        && !lost[0].is_one_sided()
                        && gained.len() == 2
                        && gained.iter().all(|c| c.is_one_sided());
                    if !ok {
                        return Err(invalid(format!(
                            "type-4 edge {}-{} must replace one two-sided curve by two one-sided curves",
                            fe.u, fe.v
                        )));
                    }
                    Some((from, to))
                }
            };
            if edges
                .insert(
                    key(&fe.u, &fe.v),
                    EdgeRecord {
                        move_type,
                        direction,
                    },
                )
                .is_some()
            {
                return Err(invalid(format!("duplicate edge {}-{}", fe.u, fe.v)));
            }
        }

        if file.circuit.len() < 3 {
            return Err(invalid("circuit needs at least three vertices".to_string()));
        }
        let mut seen = BTreeSet::new();
        for id in &file.circuit {
            if !labels.contains_key(id) {
                return Err(invalid(format!("circuit vertex '{id}' undefined")));
            }
            if !seen.insert(id.clone()) {
                return Err(invalid(format!("circuit repeats vertex '{id}'")));
            }
        }
        for i in 0..file.circuit.len() {
            let u = &file.circuit[i];
            let v = &file.circuit[(i + 1) % file.circuit.len()];
            if !edges.contains_key(&key(u, v)) {
                return Err(invalid(format!("circuit step {u}-{v} is not an edge")));
            }
        }

        let mut subgraphs: BTreeMap<(String, String), BTreeSet<String>> = BTreeMap::new();
        for fs in &file.subgraphs {
            if !edges.contains_key(&key(&fs.u, &fs.v)) {
                return Err(invalid(format!(
                    "subgraph entry {}-{} is not an edge",
                    fs.u, fs.v
                )));
            }
            subgraphs
                .entry(key(&fs.u, &fs.v))
                .or_default()
                .extend(fs.subgraphs.iter().cloned());
        }

        Ok(LabeledFixture {
            name: file.name,
            note: file.note,
            labels,
            edges,
            circuit: file.circuit,
            subgraphs,
        })
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.labels.keys().cloned().map(Vertex::Sym).collect()
    }

    fn id_of<'a>(&self, v: &'a Vertex) -> Option<&'a str> {
        match v {
            Vertex::Sym(id) if self.labels.contains_key(id) => Some(id),
            _ => None,
        }
    }

    pub fn label(&self, v: &Vertex) -> Option<Vec<Curve>> {
        self.id_of(v).map(|id| self.labels[id].clone())
    }

    pub fn adjacent(&self, u: &Vertex, v: &Vertex) -> bool {
        match (self.id_of(u), self.id_of(v)) {
            (Some(a), Some(b)) => a != b && self.edges.contains_key(&key(a, b)),
            _ => false,
        }
    }

    pub fn edge_info(&self, u: &Vertex, v: &Vertex) -> Option<EdgeInfo> {
        let a = self.id_of(u)?;
        let b = self.id_of(v)?;
        let rec = self.edges.get(&key(a, b))?;
        let lu = &self.labels[a];
        let lv = &self.labels[b];
        Some(EdgeInfo {
            move_type: rec.move_type,
            direction: rec
                .direction
                .as_ref()
                .map(|(f, t)| (Vertex::Sym(f.clone()), Vertex::Sym(t.clone()))),
            replaced: lu.iter().filter(|c| !lv.contains(c)).cloned().collect(),
            inserted: lv.iter().filter(|c| !lu.contains(c)).cloned().collect(),
        })
    }

    /// Declared Farey/fan subgraph memberships of an edge, as opaque tokens.
    pub fn edge_subgraphs(&self, u: &Vertex, v: &Vertex) -> BTreeSet<String> {
        match (self.id_of(u), self.id_of(v)) {
            (Some(a), Some(b)) => self.subgraphs.get(&key(a, b)).cloned().unwrap_or_default(),
            _ => BTreeSet::new(),
        }
    }

    /// Common neighbors by exhaustive scan of the fixture's vertex set.
    pub fn common_neighbors(&self, u: &Vertex, v: &Vertex) -> Vec<Vertex> {
        self.vertices()
            .into_iter()
            .filter(|w| w != u && w != v && self.adjacent(u, w) && self.adjacent(v, w))
            .collect()
    }

    /// The distinguished circuit, in file order.
    pub fn circuit(&self) -> Vec<Vertex> {
        self.circuit.iter().cloned().map(Vertex::Sym).collect()
    }
}

const BUILTIN: [&str; 5] = [
    include_str!("../fixtures/quad_2tight.json"),
    include_str!("../fixtures/pentagon_n4_not2tight.json"),
    include_str!("../fixtures/hexagon_n13.json"),
    include_str!("../fixtures/heptagon_n22.json"),
    include_str!("../fixtures/heptagon_n22_quad.json"),
];

/// All built-in fixtures, validated.
pub fn builtin_fixtures() -> Vec<LabeledFixture> {
    BUILTIN
        .iter()
        .map(|text| LabeledFixture::from_json(text).expect("built-in fixture"))
        .collect()
}

/// A built-in fixture by name.
pub fn builtin(name: &str) -> Option<LabeledFixture> {
    builtin_fixtures().into_iter().find(|f| f.name == name)
}
