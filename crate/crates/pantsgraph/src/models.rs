//! Exact oracles for three small pants graphs, plus finite ball extraction
//! with JSON and DOT export.
//!
//! The `n3` model is the pants graph of the closed nonorientable surface of
//! genus 3: vertices come in three kinds indexed by slopes and Farey
//! triangles. The `fan` model is the pants graph of the projective plane
//! with two holes minus its isolated decompositions: an infinite fan with
//! one centre. The `n12` model is the two-vertex pants graph of the Klein
//! bottle with one hole. All adjacency, degree and common-neighbor queries
//! are answered exactly from the defining arithmetic, never from a stored
//! finite graph.

use crate::farey::{self, FareyTriangle, Slope};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

/// A curve that can appear in a vertex label (a pants decomposition).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Curve {
    /// The distinguished one-sided curve fixed by every mapping class.
    AlphaZero,
    /// The two-sided curve of a given slope.
    TwoSided(Slope),
    /// The one-sided curve of a given slope (the core swapped in for the
    /// two-sided curve of the same slope).
    OneSided(Slope),
    /// The two-sided curve at the centre of the fan model.
    FanAlpha,
    /// The one-sided rim curves of the fan model, indexed by twisting.
    FanTwist(i64),
    /// The two one-sided curves of the two-vertex model.
    Mu(u8),
    /// A named curve from a hand-labeled fixture.
    Sym { name: String, one_sided: bool },
}

impl Curve {
    pub fn is_one_sided(&self) -> bool {
        match self {
            Curve::AlphaZero => true,
            Curve::TwoSided(_) => false,
            Curve::OneSided(_) => true,
            Curve::FanAlpha => false,
            Curve::FanTwist(_) => true,
            Curve::Mu(_) => true,
            Curve::Sym { one_sided, .. } => *one_sided,
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::AlphaZero => write!(f, "a0"),
            Curve::TwoSided(s) => write!(f, "2s:{s}"),
            Curve::OneSided(s) => write!(f, "1s:{s}"),
            Curve::FanAlpha => write!(f, "fa"),
            Curve::FanTwist(i) => write!(f, "tw:{i}"),
            Curve::Mu(i) => write!(f, "mu:{i}"),
            Curve::Sym { name, .. } => write!(f, "{name}"),
        }
    }
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// A pants-graph vertex in one of the three models, or a fixture vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Vertex {
    /// n3: the decomposition `{α₀, two-sided(s)}`.
    V1(Slope),
    /// n3: the decomposition `{one-sided(s), two-sided(s)}`.
    V2(Slope),
    /// n3: the decomposition of three one-sided curves over a triangle.
    V3(FareyTriangle),
    /// fan: the centre vertex `{fan-α}`.
    Centre,
    /// fan: the rim vertex `{twist(i), twist(i+1)}`.
    Rim(i64),
    /// n12: one of the two vertices.
    N12(u8),
    /// A named fixture vertex.
    Sym(String),
}

impl Vertex {
    fn tag(&self) -> u8 {
        match self {
            Vertex::V1(_) => 0,
            Vertex::V2(_) => 1,
            Vertex::V3(_) => 2,
            Vertex::Centre => 3,
            Vertex::Rim(_) => 4,
            Vertex::N12(_) => 5,
            Vertex::Sym(_) => 6,
        }
    }

    /// Kind name used in JSON exports.
    pub fn kind(&self) -> &'static str {
        match self {
            Vertex::V1(_) => "V1",
            Vertex::V2(_) => "V2",
            Vertex::V3(_) => "V3",
            Vertex::Centre => "centre",
            Vertex::Rim(_) => "rim",
            Vertex::N12(_) => "n12",
            Vertex::Sym(_) => "sym",
        }
    }

    /// The slopes indexing the vertex, if any.
    pub fn slopes(&self) -> Vec<Slope> {
        match self {
            Vertex::V1(s) | Vertex::V2(s) => vec![*s],
            Vertex::V3(t) => t.slopes().to_vec(),
            _ => Vec::new(),
        }
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Vertex::*;
        match (self, other) {
            (V1(a), V1(b)) | (V2(a), V2(b)) => a.cmp(b),
            (V3(a), V3(b)) => a.cmp(b),
            // Rim indices in fan-out order 0, 1, -1, 2, -2, ...
            (Rim(a), Rim(b)) => (a.abs(), *a < 0).cmp(&(b.abs(), *b < 0)),
            (N12(a), N12(b)) => a.cmp(b),
            (Sym(a), Sym(b)) => a.cmp(b),
            _ => self.tag().cmp(&other.tag()),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::V1(s) => write!(f, "V1:{s}"),
            Vertex::V2(s) => write!(f, "V2:{s}"),
            Vertex::V3(t) => write!(f, "V3:{t}"),
            Vertex::Centre => write!(f, "C"),
            Vertex::Rim(i) => write!(f, "R{i}"),
            Vertex::N12(i) => write!(f, "M{i}"),
            Vertex::Sym(name) => write!(f, "{name}"),
        }
    }
}

impl FromStr for Vertex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty vertex id".to_string());
        }
        if s == "C" {
            return Ok(Vertex::Centre);
        }
        if let Some(rest) = s.strip_prefix("V1:") {
            return rest
                .parse()
                .map(Vertex::V1)
                .map_err(|e| format!("bad V1 id: {e}"));
        }
        if let Some(rest) = s.strip_prefix("V2:") {
            return rest
                .parse()
                .map(Vertex::V2)
                .map_err(|e| format!("bad V2 id: {e}"));
        }
        if let Some(rest) = s.strip_prefix("V3:") {
            return rest
                .parse()
                .map(Vertex::V3)
                .map_err(|e| format!("bad V3 id: {e}"));
        }
        if let Some(rest) = s.strip_prefix('R') {
            if let Ok(i) = rest.parse::<i64>() {
                return Ok(Vertex::Rim(i));
            }
        }
        if let Some(rest) = s.strip_prefix('M') {
            if let Ok(i) = rest.parse::<u8>() {
                if i <= 1 {
                    return Ok(Vertex::N12(i));
                }
            }
        }
        Ok(Vertex::Sym(s.to_string()))
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Vertex {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The four elementary pants moves, numbered as edge types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveType {
    T1,
    T2,
    T3,
    T4,
}

impl MoveType {
    pub fn number(self) -> u8 {
        match self {
            MoveType::T1 => 1,
            MoveType::T2 => 2,
            MoveType::T3 => 3,
            MoveType::T4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<MoveType> {
        match n {
            1 => Some(MoveType::T1),
            2 => Some(MoveType::T2),
            3 => Some(MoveType::T3),
            4 => Some(MoveType::T4),
            _ => None,
        }
    }
}

impl fmt::Display for MoveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// What an edge does: its move type, its direction (type 4 only, pointing
/// from the two-sided curve to the pair of one-sided curves that replace
/// it), and the curves exchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeInfo {
    pub move_type: MoveType,
    pub direction: Option<(Vertex, Vertex)>,
    pub replaced: Vec<Curve>,
    pub inserted: Vec<Curve>,
}

/// One of the three built-in models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    N3,
    Fan,
    N12,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::N3 => write!(f, "n3"),
            Model::Fan => write!(f, "fan"),
            Model::N12 => write!(f, "n12"),
        }
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "n3" => Ok(Model::N3),
            "fan" => Ok(Model::Fan),
            "n12" => Ok(Model::N12),
            other => Err(format!("unknown model '{other}' (expected n3, fan or n12)")),
        }
    }
}

fn rim_index(j: usize) -> i64 {
    // Fan-out order 0, 1, -1, 2, -2, ...
    let j = j as i64;
    if j % 2 == 1 {
        (j + 1) / 2
    } else {
        -(j / 2)
    }
}

impl Model {
    /// The default base vertex for balls and walks.
    pub fn base_vertex(self) -> Vertex {
        match self {
            Model::N3 => Vertex::V1(Slope::new(0, 1).unwrap()),
            Model::Fan => Vertex::Centre,
            Model::N12 => Vertex::N12(0),
        }
    }

    /// True iff the vertex belongs to this model.
    pub fn contains(self, v: &Vertex) -> bool {
        matches!(
            (self, v),
            (Model::N3, Vertex::V1(_) | Vertex::V2(_) | Vertex::V3(_))
                | (Model::Fan, Vertex::Centre | Vertex::Rim(_))
                | (Model::N12, Vertex::N12(_))
        )
    }

    fn check(self, v: &Vertex) {
        assert!(self.contains(v), "vertex {v} does not belong to model {self}");
    }

    /// The pants decomposition labeling `v`, sorted canonically.
    pub fn label(self, v: &Vertex) -> Vec<Curve> {
        self.check(v);
        let mut out = match v {
            Vertex::V1(s) => vec![Curve::AlphaZero, Curve::TwoSided(*s)],
            Vertex::V2(s) => vec![Curve::TwoSided(*s), Curve::OneSided(*s)],
            Vertex::V3(t) => t.slopes().iter().map(|s| Curve::OneSided(*s)).collect(),
            Vertex::Centre => vec![Curve::FanAlpha],
            Vertex::Rim(i) => vec![Curve::FanTwist(*i), Curve::FanTwist(*i + 1)],
            Vertex::N12(i) => vec![Curve::Mu(*i)],
            Vertex::Sym(_) => unreachable!(),
        };
        out.sort();
        out
    }

    /// Exact adjacency in the pants graph.
    pub fn adjacent(self, u: &Vertex, v: &Vertex) -> bool {
        self.check(u);
        self.check(v);
        if u == v {
            return false;
        }
        match (u, v) {
            (Vertex::V1(s), Vertex::V1(t)) => farey::is_adjacent(*s, *t),
            (Vertex::V1(s), Vertex::V2(t)) | (Vertex::V2(t), Vertex::V1(s)) => s == t,
            (Vertex::V1(_), Vertex::V3(_)) | (Vertex::V3(_), Vertex::V1(_)) => false,
            (Vertex::V2(_), Vertex::V2(_)) => false,
            (Vertex::V2(s), Vertex::V3(t)) | (Vertex::V3(t), Vertex::V2(s)) => t.contains(*s),
            (Vertex::V3(t), Vertex::V3(u2)) => t.shared(u2).len() == 2,
            (Vertex::Centre, Vertex::Rim(_)) | (Vertex::Rim(_), Vertex::Centre) => true,
            (Vertex::Rim(i), Vertex::Rim(j)) => (i - j).abs() == 1,
            (Vertex::N12(_), Vertex::N12(_)) => true,
            _ => false,
        }
    }

    /// Move type, direction and exchanged curves for an edge; `None` if the
    /// vertices are not adjacent.
    pub fn edge_info(self, u: &Vertex, v: &Vertex) -> Option<EdgeInfo> {
        if !self.adjacent(u, v) {
            return None;
        }
        let (move_type, direction) = match (u, v) {
            (Vertex::V1(_), Vertex::V1(_)) => (MoveType::T1, None),
            (Vertex::V1(_), Vertex::V2(_)) | (Vertex::V2(_), Vertex::V1(_)) => (MoveType::T3, None),
            (Vertex::V2(_), Vertex::V3(_)) => (MoveType::T4, Some((u.clone(), v.clone()))),
            (Vertex::V3(_), Vertex::V2(_)) => (MoveType::T4, Some((v.clone(), u.clone()))),
            (Vertex::V3(_), Vertex::V3(_)) => (MoveType::T3, None),
            (Vertex::Centre, Vertex::Rim(_)) => (MoveType::T4, Some((u.clone(), v.clone()))),
            (Vertex::Rim(_), Vertex::Centre) => (MoveType::T4, Some((v.clone(), u.clone()))),
            (Vertex::Rim(_), Vertex::Rim(_)) => (MoveType::T3, None),
            (Vertex::N12(_), Vertex::N12(_)) => (MoveType::T3, None),
            _ => unreachable!(),
        };
        let lu = self.label(u);
        let lv = self.label(v);
        let replaced: Vec<Curve> = lu.iter().filter(|c| !lv.contains(c)).cloned().collect();
        let inserted: Vec<Curve> = lv.iter().filter(|c| !lu.contains(c)).cloned().collect();
        Some(EdgeInfo {
            move_type,
            direction,
            replaced,
            inserted,
        })
    }

    /// Exact degree; `None` means infinite.
    pub fn degree(self, v: &Vertex) -> Option<usize> {
        self.complete_neighbors(v).map(|n| n.len())
    }

    /// The full neighbor list of a finite-degree vertex; `None` if infinite.
    pub fn complete_neighbors(self, v: &Vertex) -> Option<Vec<Vertex>> {
        self.check(v);
        match v {
            Vertex::V1(_) | Vertex::V2(_) | Vertex::Centre => None,
            Vertex::V3(t) => {
                let mut out: Vec<Vertex> =
                    t.slopes().iter().map(|s| Vertex::V2(*s)).collect();
                out.extend(farey::tree_neighbors(t).into_iter().map(Vertex::V3));
                out.sort();
                Some(out)
            }
            Vertex::Rim(i) => {
                let mut out = vec![Vertex::Centre, Vertex::Rim(i - 1), Vertex::Rim(i + 1)];
                out.sort();
                Some(out)
            }
            Vertex::N12(i) => Some(vec![Vertex::N12(1 - i)]),
            Vertex::Sym(_) => unreachable!(),
        }
    }

    /// Neighbors for ball expansion: the complete list for finite-degree
    /// vertices; for infinite-degree vertices, every structurally
    /// distinguished neighbor plus the first `width` members of each
    /// infinite family in canonical order.
    pub fn neighbors(self, v: &Vertex, width: usize) -> Vec<Vertex> {
        if let Some(all) = self.complete_neighbors(v) {
            return all;
        }
        let mut out = match v {
            Vertex::V1(s) => {
                let mut o: Vec<Vertex> = farey::neighbors(*s, width)
                    .into_iter()
                    .map(Vertex::V1)
                    .collect();
                o.push(Vertex::V2(*s));
                o
            }
            Vertex::V2(s) => {
                let mut o: Vec<Vertex> = farey::triangles_on(*s, width)
                    .into_iter()
                    .map(Vertex::V3)
                    .collect();
                o.push(Vertex::V1(*s));
                o
            }
            Vertex::Centre => (0..width).map(|j| Vertex::Rim(rim_index(j))).collect(),
            _ => unreachable!(),
        };
        out.sort();
        out
    }

    /// The exact set of common neighbors of two distinct vertices.
    pub fn common_neighbors(self, a: &Vertex, b: &Vertex) -> Vec<Vertex> {
        self.check(a);
        self.check(b);
        assert_ne!(a, b, "common neighbors of equal vertices");
        let mut out = match self {
            Model::N3 => n3_common(a, b),
            Model::Fan => fan_common(a, b),
            Model::N12 => Vec::new(),
        };
        out.sort();
        out.dedup();
        out
    }

    /// Neighbors joined to `v` by a type-3 edge; exact for every kind.
    pub fn type3_neighbors(self, v: &Vertex) -> Vec<Vertex> {
        self.check(v);
        let mut out = match v {
            Vertex::V1(s) => vec![Vertex::V2(*s)],
            Vertex::V2(s) => vec![Vertex::V1(*s)],
            Vertex::V3(t) => farey::tree_neighbors(t).into_iter().map(Vertex::V3).collect(),
            Vertex::Centre => Vec::new(),
            Vertex::Rim(i) => vec![Vertex::Rim(i - 1), Vertex::Rim(i + 1)],
            Vertex::N12(i) => vec![Vertex::N12(1 - i)],
            Vertex::Sym(_) => unreachable!(),
        };
        out.sort();
        out
    }

    /// The maximal Farey and fan subgraphs containing an edge, as opaque
    /// tokens. In the n3 model every slope-line edge lies in the single
    /// Farey subgraph, an edge between triangle vertices lies in the fan
    /// of each shared slope, a spoke lies in the fan of its slope, and an
    /// exchange edge lies in neither kind; in the fan model every edge
    /// lies in the single central fan.
    pub fn edge_subgraphs(self, u: &Vertex, v: &Vertex) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if !self.adjacent(u, v) {
            return out;
        }
        match (self, u, v) {
            (Model::N3, Vertex::V1(_), Vertex::V1(_)) => {
                out.insert("farey".to_string());
            }
            (Model::N3, Vertex::V2(s), Vertex::V3(_)) | (Model::N3, Vertex::V3(_), Vertex::V2(s)) => {
                out.insert(format!("fan:{s}"));
            }
            (Model::N3, Vertex::V3(t), Vertex::V3(t2)) => {
                for s in t.shared(t2) {
                    out.insert(format!("fan:{s}"));
                }
            }
            (Model::Fan, _, _) => {
                out.insert("fan:centre".to_string());
            }
            _ => {}
        }
        out
    }
}

/// Disjointness of two distinct n3 curves, decided by slope arithmetic:
/// the base curve is disjoint from every two-sided curve and no one-sided
/// one, a two-sided and a one-sided curve are disjoint only over the same
/// slope, and two one-sided curves are disjoint iff their slopes are
/// Farey-adjacent. `None` for equal curves or curves of other models.
pub fn curves_disjoint(a: &Curve, b: &Curve) -> Option<bool> {
    if a == b {
        return None;
    }
    match (a, b) {
        (Curve::AlphaZero, Curve::TwoSided(_)) | (Curve::TwoSided(_), Curve::AlphaZero) => {
            Some(true)
        }
        (Curve::AlphaZero, Curve::OneSided(_)) | (Curve::OneSided(_), Curve::AlphaZero) => {
            Some(false)
        }
        (Curve::TwoSided(_), Curve::TwoSided(_)) => Some(false),
        (Curve::TwoSided(s), Curve::OneSided(t)) | (Curve::OneSided(t), Curve::TwoSided(s)) => {
            Some(s == t)
        }
        (Curve::OneSided(s), Curve::OneSided(t)) => Some(farey::is_adjacent(*s, *t)),
        _ => None,
    }
}

/// The partner across the perfect matching of line and spoke vertices:
/// `V1(s)` maps to `V2(s)` and back; `None` for any other vertex.
pub fn matching_partner(v: &Vertex) -> Option<Vertex> {
    match v {
        Vertex::V1(s) => Some(Vertex::V2(*s)),
        Vertex::V2(s) => Some(Vertex::V1(*s)),
        _ => None,
    }
}

fn n3_common(a: &Vertex, b: &Vertex) -> Vec<Vertex> {
    let (a, b) = if a.tag() <= b.tag() { (a, b) } else { (b, a) };
    match (a, b) {
        (Vertex::V1(s), Vertex::V1(t)) => farey::mutual_neighbors(*s, *t)
            .into_iter()
            .map(Vertex::V1)
            .collect(),
        (Vertex::V1(s), Vertex::V2(t)) => {
            if farey::is_adjacent(*s, *t) {
                vec![Vertex::V1(*t)]
            } else {
                Vec::new()
            }
        }
        (Vertex::V1(s), Vertex::V3(t)) => {
            if t.contains(*s) {
                vec![Vertex::V2(*s)]
            } else {
                Vec::new()
            }
        }
        (Vertex::V2(s), Vertex::V2(t)) => {
            if farey::is_adjacent(*s, *t) {
                farey::common_neighbors(*s, *t)
                    .unwrap()
                    .into_iter()
                    .map(|m| Vertex::V3(FareyTriangle::new(*s, *t, m).unwrap()))
                    .collect()
            } else {
                Vec::new()
            }
        }
        (Vertex::V2(s), Vertex::V3(t)) => {
            if t.contains(*s) {
                // The two flips of t across the edges through s.
                let others: Vec<Slope> =
                    t.slopes().into_iter().filter(|x| x != s).collect();
                vec![
                    Vertex::V3(t.flip(*s, others[0]).unwrap()),
                    Vertex::V3(t.flip(*s, others[1]).unwrap()),
                ]
            } else {
                // Triangles {x, y, s} over an edge {x, y} of t.
                let [x, y, z] = t.slopes();
                let mut out = Vec::new();
                for (p, q) in [(x, y), (x, z), (y, z)] {
                    if farey::common_neighbors(p, q).unwrap().contains(s) {
                        out.push(Vertex::V3(FareyTriangle::new(p, q, *s).unwrap()));
                    }
                }
                out
            }
        }
        (Vertex::V3(t), Vertex::V3(u)) => {
            let mut out: Vec<Vertex> = t.shared(u).into_iter().map(Vertex::V2).collect();
            for w in farey::tree_neighbors(t) {
                if w != *u && w.shared(u).len() == 2 {
                    out.push(Vertex::V3(w));
                }
            }
            out
        }
        _ => unreachable!("n3 pair"),
    }
}

fn fan_common(a: &Vertex, b: &Vertex) -> Vec<Vertex> {
    let (a, b) = if a.tag() <= b.tag() { (a, b) } else { (b, a) };
    match (a, b) {
        (Vertex::Centre, Vertex::Rim(i)) => vec![Vertex::Rim(i - 1), Vertex::Rim(i + 1)],
        (Vertex::Rim(i), Vertex::Rim(j)) => {
            let mut out = vec![Vertex::Centre];
            if (i - j).abs() == 2 {
                out.push(Vertex::Rim((i + j) / 2));
            }
            out
        }
        _ => unreachable!("fan pair"),
    }
}

/// A finite windowed ball: BFS to `radius` with infinite families truncated
/// at `width`, carrying all induced edges.
#[derive(Debug, Clone)]
pub struct Ball {
    pub model: Model,
    pub base: Vertex,
    pub radius: usize,
    pub width: usize,
    dist: BTreeMap<Vertex, usize>,
    edges: Vec<(Vertex, Vertex)>,
}

/// Builds the windowed ball around `base`.
pub fn ball(model: Model, base: &Vertex, radius: usize, width: usize) -> Ball {
    model.check(base);
    let mut dist: BTreeMap<Vertex, usize> = BTreeMap::new();
    dist.insert(base.clone(), 0);
    let mut queue: VecDeque<Vertex> = VecDeque::new();
    queue.push_back(base.clone());
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == radius {
            continue;
        }
        for w in model.neighbors(&v, width) {
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    let verts: Vec<Vertex> = dist.keys().cloned().collect();
    let mut edges = Vec::new();
    for (i, u) in verts.iter().enumerate() {
        for v in &verts[i + 1..] {
            if model.adjacent(u, v) {
                edges.push((u.clone(), v.clone()));
            }
        }
    }
    Ball {
        model,
        base: base.clone(),
        radius,
        width,
        dist,
        edges,
    }
}

#[derive(Serialize)]
struct BallVertexJson {
    id: String,
    kind: String,
    slopes: Vec<String>,
    frontier: bool,
}

#[derive(Serialize)]
struct BallEdgeJson {
    u: String,
    v: String,
    #[serde(rename = "type")]
    edge_type: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    direction: Option<[String; 2]>,
}

#[derive(Serialize)]
struct BallJson {
    model: String,
    base: String,
    radius: usize,
    width: usize,
    vertices: Vec<BallVertexJson>,
    edges: Vec<BallEdgeJson>,
}

impl Ball {
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.dist.keys()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.dist.contains_key(v)
    }

    pub fn distance(&self, v: &Vertex) -> Option<usize> {
        self.dist.get(v).copied()
    }

    /// All induced edges, as canonically ordered pairs.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// A vertex is a frontier vertex when the ball cannot certify its full
    /// neighborhood: its degree is infinite, or some true neighbor is
    /// missing from the ball.
    pub fn is_frontier(&self, v: &Vertex) -> bool {
        match self.model.complete_neighbors(v) {
            None => true,
            Some(nbs) => !nbs.iter().all(|w| self.contains(w)),
        }
    }

    /// A vertex is interior when BFS reached it strictly inside the radius.
    pub fn is_interior(&self, v: &Vertex) -> bool {
        self.distance(v).is_some_and(|d| d < self.radius)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices = self
            .dist
            .keys()
            .map(|v| BallVertexJson {
                id: v.to_string(),
                kind: v.kind().to_string(),
                slopes: v.slopes().iter().map(Slope::to_string).collect(),
                frontier: self.is_frontier(v),
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|(u, v)| {
                let info = self.model.edge_info(u, v).expect("induced edge");
                BallEdgeJson {
                    u: u.to_string(),
                    v: v.to_string(),
                    edge_type: info.move_type.number(),
                    direction: info
                        .direction
                        .map(|(x, y)| [x.to_string(), y.to_string()]),
                }
            })
            .collect();
        serde_json::to_value(BallJson {
            model: self.model.to_string(),
            base: self.base.to_string(),
            radius: self.radius,
            width: self.width,
            vertices,
            edges,
        })
        .expect("ball serialization")
    }

    /// Graphviz rendering with edge styles by move type.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph ball {\n  node [fontsize=10];\n");
        for v in self.dist.keys() {
            let shape = match v {
                Vertex::V1(_) | Vertex::Centre => "ellipse",
                Vertex::V2(_) | Vertex::Rim(_) => "box",
                Vertex::V3(_) | Vertex::N12(_) | Vertex::Sym(_) => "diamond",
            };
            let peripheries = if self.is_frontier(v) { 1 } else { 2 };
            writeln!(out, "  \"{v}\" [shape={shape}, peripheries={peripheries}];").unwrap();
        }
        for (u, v) in &self.edges {
            let info = self.model.edge_info(u, v).expect("induced edge");
            let style = match info.move_type {
                MoveType::T1 | MoveType::T2 => "solid",
                MoveType::T3 => "dashed",
                MoveType::T4 => "bold",
            };
            let dir = if info.direction.is_some() { ", dir=forward" } else { "" };
            let (x, y) = info.direction.unwrap_or((u.clone(), v.clone()));
            writeln!(
                out,
                "  \"{x}\" -- \"{y}\" [label={}, style={style}{dir}];",
                info.move_type
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    fn tri(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> FareyTriangle {
        FareyTriangle::new(s(a.0, a.1), s(b.0, b.1), s(c.0, c.1)).unwrap()
    }

    fn base_triangle() -> FareyTriangle {
        tri((0, 1), (1, 1), (1, 2))
    }

    #[test]
    fn labels() {
        let m = Model::N3;
        assert_eq!(
            m.label(&Vertex::V1(s(0, 1))),
            vec![Curve::AlphaZero, Curve::TwoSided(s(0, 1))]
        );
        assert_eq!(
            m.label(&Vertex::V2(s(0, 1))),
            vec![Curve::TwoSided(s(0, 1)), Curve::OneSided(s(0, 1))]
        );
        assert_eq!(m.label(&Vertex::V3(base_triangle())).len(), 3);
        assert_eq!(Model::Fan.label(&Vertex::Centre), vec![Curve::FanAlpha]);
        assert_eq!(
            Model::Fan.label(&Vertex::Rim(2)),
            vec![Curve::FanTwist(2), Curve::FanTwist(3)]
        );
        assert_eq!(Model::N12.label(&Vertex::N12(1)), vec![Curve::Mu(1)]);
    }

    #[test]
    fn one_sided_label_count_matches_type3_degree() {
        let pairs: Vec<(Model, Vertex)> = vec![
            (Model::N3, Vertex::V1(s(1, 2))),
            (Model::N3, Vertex::V2(s(1, 2))),
            (Model::N3, Vertex::V3(base_triangle())),
            (Model::Fan, Vertex::Centre),
            (Model::Fan, Vertex::Rim(-3)),
            (Model::N12, Vertex::N12(0)),
        ];
        for (m, v) in pairs {
            let one_sided = m.label(&v).iter().filter(|c| c.is_one_sided()).count();
            assert_eq!(m.type3_neighbors(&v).len(), one_sided, "at {v}");
            for w in m.type3_neighbors(&v) {
                assert_eq!(m.edge_info(&v, &w).unwrap().move_type, MoveType::T3);
            }
        }
    }

    #[test]
    fn adjacency_rules() {
        let m = Model::N3;
        let t = base_triangle();
        assert!(m.adjacent(&Vertex::V1(s(0, 1)), &Vertex::V1(s(1, 1))));
        assert!(!m.adjacent(&Vertex::V1(s(0, 1)), &Vertex::V1(s(2, 5))));
        assert!(m.adjacent(&Vertex::V1(s(0, 1)), &Vertex::V2(s(0, 1))));
        assert!(!m.adjacent(&Vertex::V1(s(0, 1)), &Vertex::V2(s(1, 1))));
        assert!(!m.adjacent(&Vertex::V1(s(0, 1)), &Vertex::V3(t)));
        assert!(!m.adjacent(&Vertex::V2(s(0, 1)), &Vertex::V2(s(1, 1))));
        assert!(m.adjacent(&Vertex::V2(s(0, 1)), &Vertex::V3(t)));
        assert!(!m.adjacent(&Vertex::V2(s(1, 3)), &Vertex::V3(t)));
        let t2 = tri((0, 1), (1, 2), (1, 3));
        assert!(m.adjacent(&Vertex::V3(t), &Vertex::V3(t2)));
        let far = tri((2, 5), (1, 2), (1, 3));
        assert!(!m.adjacent(&Vertex::V3(t), &Vertex::V3(far)));
        assert!(Model::Fan.adjacent(&Vertex::Centre, &Vertex::Rim(7)));
        assert!(Model::Fan.adjacent(&Vertex::Rim(0), &Vertex::Rim(1)));
        assert!(!Model::Fan.adjacent(&Vertex::Rim(0), &Vertex::Rim(2)));
        assert!(Model::N12.adjacent(&Vertex::N12(0), &Vertex::N12(1)));
    }

    #[test]
    fn degrees() {
        assert_eq!(Model::N3.degree(&Vertex::V3(base_triangle())), Some(6));
        assert_eq!(Model::N3.degree(&Vertex::V1(s(0, 1))), None);
        assert_eq!(Model::N3.degree(&Vertex::V2(s(0, 1))), None);
        assert_eq!(Model::Fan.degree(&Vertex::Centre), None);
        assert_eq!(Model::Fan.degree(&Vertex::Rim(4)), Some(3));
        assert_eq!(Model::N12.degree(&Vertex::N12(0)), Some(1));
        let nbs = Model::N3.complete_neighbors(&Vertex::V3(base_triangle())).unwrap();
        assert_eq!(nbs.iter().filter(|v| matches!(v, Vertex::V2(_))).count(), 3);
        assert_eq!(nbs.iter().filter(|v| matches!(v, Vertex::V3(_))).count(), 3);
        for w in &nbs {
            assert!(Model::N3.adjacent(&Vertex::V3(base_triangle()), w));
        }
    }

    #[test]
    fn edge_types_and_directions() {
        let m = Model::N3;
        let t = base_triangle();
        let e11 = m.edge_info(&Vertex::V1(s(0, 1)), &Vertex::V1(s(1, 1))).unwrap();
        assert_eq!(e11.move_type, MoveType::T1);
        assert_eq!(e11.direction, None);
        assert_eq!(e11.replaced, vec![Curve::TwoSided(s(0, 1))]);
        assert_eq!(e11.inserted, vec![Curve::TwoSided(s(1, 1))]);

        let e12 = m.edge_info(&Vertex::V1(s(0, 1)), &Vertex::V2(s(0, 1))).unwrap();
        assert_eq!(e12.move_type, MoveType::T3);
        assert_eq!(e12.replaced, vec![Curve::AlphaZero]);
        assert_eq!(e12.inserted, vec![Curve::OneSided(s(0, 1))]);

        let e23 = m.edge_info(&Vertex::V3(t), &Vertex::V2(s(0, 1))).unwrap();
        assert_eq!(e23.move_type, MoveType::T4);
        assert_eq!(e23.direction, Some((Vertex::V2(s(0, 1)), Vertex::V3(t))));
        assert_eq!(e23.replaced.len(), 2);
        assert_eq!(e23.inserted, vec![Curve::TwoSided(s(0, 1))]);

        let t2 = tri((0, 1), (1, 2), (1, 3));
        let e33 = m.edge_info(&Vertex::V3(t), &Vertex::V3(t2)).unwrap();
        assert_eq!(e33.move_type, MoveType::T3);
        assert_eq!(e33.replaced, vec![Curve::OneSided(s(1, 1))]);
        assert_eq!(e33.inserted, vec![Curve::OneSided(s(1, 3))]);

        let cr = Model::Fan.edge_info(&Vertex::Rim(0), &Vertex::Centre).unwrap();
        assert_eq!(cr.move_type, MoveType::T4);
        assert_eq!(cr.direction, Some((Vertex::Centre, Vertex::Rim(0))));
        let rr = Model::Fan.edge_info(&Vertex::Rim(0), &Vertex::Rim(1)).unwrap();
        assert_eq!(rr.move_type, MoveType::T3);
        assert_eq!(
            Model::N12
                .edge_info(&Vertex::N12(0), &Vertex::N12(1))
                .unwrap()
                .move_type,
            MoveType::T3
        );
    }

    #[test]
    fn triangle_counts_per_edge_kind() {
        let m = Model::N3;
        let t = base_triangle();
        let t2 = tri((0, 1), (1, 2), (1, 3));
        // Edge kind -> number of triangles it lies in.
        assert_eq!(
            m.common_neighbors(&Vertex::V1(s(0, 1)), &Vertex::V1(s(1, 1))).len(),
            2
        );
        assert_eq!(
            m.common_neighbors(&Vertex::V1(s(0, 1)), &Vertex::V2(s(0, 1))).len(),
            0
        );
        assert_eq!(m.common_neighbors(&Vertex::V2(s(0, 1)), &Vertex::V3(t)).len(), 2);
        assert_eq!(m.common_neighbors(&Vertex::V3(t), &Vertex::V3(t2)).len(), 2);
        assert_eq!(
            Model::Fan.common_neighbors(&Vertex::Centre, &Vertex::Rim(3)).len(),
            2
        );
        assert_eq!(
            Model::Fan.common_neighbors(&Vertex::Rim(3), &Vertex::Rim(4)).len(),
            1
        );
        assert_eq!(
            Model::N12.common_neighbors(&Vertex::N12(0), &Vertex::N12(1)).len(),
            0
        );
    }

    #[test]
    fn common_neighbors_exact_on_ball() {
        // Cross-check the closed-form answers against the induced graph of
        // a moderately large ball: everything the closed form returns is
        // adjacent to both endpoints, and nothing in the ball is missed.
        for (model, base, radius, width) in [
            (Model::N3, Vertex::V1(s(0, 1)), 3, 6),
            (Model::N3, Vertex::V3(base_triangle()), 3, 6),
            (Model::Fan, Vertex::Centre, 2, 6),
            (Model::N12, Vertex::N12(0), 2, 4),
        ] {
            let b = ball(model, &base, radius, width);
            let verts: Vec<Vertex> = b.vertices().cloned().collect();
            for (i, u) in verts.iter().enumerate() {
                for v in verts.iter().skip(i + 1) {
                    let cn = model.common_neighbors(u, v);
                    for w in &cn {
                        assert!(model.adjacent(u, w) && model.adjacent(v, w));
                    }
                    for w in &verts {
                        if w != u && w != v && model.adjacent(u, w) && model.adjacent(v, w) {
                            assert!(
                                cn.contains(w),
                                "missing common neighbor {w} of {u}, {v} in {model}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ball_sizes_frozen() {
        let b = ball(Model::N3, &Vertex::V3(base_triangle()), 1, 9);
        assert_eq!(b.len(), 7);
        let b = ball(Model::Fan, &Vertex::Centre, 1, 5);
        assert_eq!(b.len(), 6);
        let b = ball(Model::N12, &Vertex::N12(0), 1, 4);
        assert_eq!(b.len(), 2);
        assert!(!b.is_frontier(&Vertex::N12(0)));
        assert!(!b.is_frontier(&Vertex::N12(1)));
    }

    #[test]
    fn ball_frontier_and_interior() {
        let b = ball(Model::N3, &Vertex::V3(base_triangle()), 2, 6);
        // The base triangle's flips are present with all six neighbors only
        // if BFS reached them; at radius 2 their V2 spokes are present.
        assert!(b.is_interior(&Vertex::V3(base_triangle())));
        assert!(b.is_frontier(&Vertex::V2(s(0, 1))), "infinite degree is frontier");
        let flip = tri((0, 1), (1, 2), (1, 3));
        assert!(b.contains(&Vertex::V3(flip)));
        let complete = Model::N3
            .complete_neighbors(&Vertex::V3(flip))
            .unwrap()
            .into_iter()
            .all(|w| b.contains(&w));
        assert_eq!(!complete, b.is_frontier(&Vertex::V3(flip)));
    }

    #[test]
    fn rim_window_order() {
        let got: Vec<i64> = (0..5).map(rim_index).collect();
        assert_eq!(got, vec![0, 1, -1, 2, -2]);
        let nbs = Model::Fan.neighbors(&Vertex::Centre, 5);
        assert_eq!(
            nbs,
            vec![
                Vertex::Rim(0),
                Vertex::Rim(1),
                Vertex::Rim(-1),
                Vertex::Rim(2),
                Vertex::Rim(-2)
            ]
        );
    }

    #[test]
    fn vertex_ids_round_trip() {
        let vs = vec![
            Vertex::V1(s(-3, 7)),
            Vertex::V2(s(1, 0)),
            Vertex::V3(base_triangle()),
            Vertex::Centre,
            Vertex::Rim(-4),
            Vertex::N12(1),
            Vertex::Sym("P0".to_string()),
        ];
        for v in vs {
            let id = v.to_string();
            let back: Vertex = id.parse().unwrap();
            assert_eq!(back, v, "round trip of {id}");
        }
    }

    #[test]
    fn ball_exports_are_deterministic() {
        let b1 = ball(Model::N3, &Vertex::V1(s(0, 1)), 2, 5);
        let b2 = ball(Model::N3, &Vertex::V1(s(0, 1)), 2, 5);
        assert_eq!(
            serde_json::to_string(&b1.to_json()).unwrap(),
            serde_json::to_string(&b2.to_json()).unwrap()
        );
        assert_eq!(b1.to_dot(), b2.to_dot());
        assert!(b1.to_dot().starts_with("graph ball {"));
        let json = b1.to_json();
        assert!(json["vertices"].as_array().unwrap().len() == b1.len());
        assert!(json["edges"].as_array().unwrap().iter().all(|e| {
            let t = e["type"].as_u64().unwrap();
            (1..=4).contains(&t) && (t != 4 || e["direction"].is_array())
        }));
    }

    #[test]
    fn edge_subgraph_rules() {
        let m = Model::N3;
        let t = base_triangle();
        let t2 = tri((0, 1), (1, 2), (1, 3));
        let spoke = m.edge_subgraphs(&Vertex::V2(s(0, 1)), &Vertex::V3(t));
        assert_eq!(spoke.len(), 1);
        assert!(spoke.contains("fan:0/1"));
        let arc = m.edge_subgraphs(&Vertex::V3(t), &Vertex::V3(t2));
        assert_eq!(arc.len(), 2, "arc lies in the fans of both shared slopes");
        assert!(arc.contains("fan:0/1") && arc.contains("fan:1/2"));
        let line = m.edge_subgraphs(&Vertex::V1(s(0, 1)), &Vertex::V1(s(1, 1)));
        assert_eq!(line.len(), 1, "slope-line edges lie in the one Farey subgraph");
        assert!(line.contains("farey"));
        assert!(m.edge_subgraphs(&Vertex::V1(s(0, 1)), &Vertex::V2(s(0, 1))).is_empty());
        assert!(!Model::Fan.edge_subgraphs(&Vertex::Rim(0), &Vertex::Rim(1)).is_empty());
        assert!(Model::N12.edge_subgraphs(&Vertex::N12(0), &Vertex::N12(1)).is_empty());
    }

    #[test]
    fn curve_disjointness_table() {
        let a0 = Curve::AlphaZero;
        let two = |p, q| Curve::TwoSided(s(p, q));
        let one = |p, q| Curve::OneSided(s(p, q));
        assert_eq!(curves_disjoint(&a0, &two(3, 5)), Some(true));
        assert_eq!(curves_disjoint(&a0, &one(3, 5)), Some(false));
        assert_eq!(curves_disjoint(&two(0, 1), &two(1, 1)), Some(false));
        assert_eq!(curves_disjoint(&two(1, 2), &one(1, 2)), Some(true));
        assert_eq!(curves_disjoint(&one(1, 2), &two(1, 3)), Some(false));
        assert_eq!(curves_disjoint(&one(0, 1), &one(1, 1)), Some(true));
        assert_eq!(curves_disjoint(&one(0, 1), &one(1, 2)), Some(true));
        assert_eq!(curves_disjoint(&one(1, 2), &one(3, 4)), Some(false));
        assert_eq!(curves_disjoint(&a0, &a0), None);
        assert_eq!(curves_disjoint(&a0, &Curve::FanAlpha), None);
    }

    #[test]
    fn labels_are_pairwise_disjoint_multicurves() {
        let m = Model::N3;
        let vs = [
            Vertex::V1(s(2, 5)),
            Vertex::V2(s(2, 5)),
            Vertex::V3(base_triangle()),
        ];
        for v in &vs {
            let l = m.label(v);
            for (i, a) in l.iter().enumerate() {
                for b in &l[i + 1..] {
                    assert_eq!(curves_disjoint(a, b), Some(true), "label of {v}");
                }
            }
        }
    }

    #[test]
    fn matching_partner_is_the_type3_involution() {
        for sl in [s(0, 1), s(1, 0), s(2, 5), s(-3, 7)] {
            let line = Vertex::V1(sl);
            let spoke = matching_partner(&line).unwrap();
            assert_eq!(spoke, Vertex::V2(sl));
            assert_eq!(matching_partner(&spoke).unwrap(), line);
            let info = Model::N3.edge_info(&line, &spoke).unwrap();
            assert_eq!(info.move_type, MoveType::T3);
            assert_eq!(Model::N3.type3_neighbors(&line), vec![spoke]);
        }
        assert!(matching_partner(&Vertex::V3(base_triangle())).is_none());
        assert!(matching_partner(&Vertex::Centre).is_none());
    }
}
