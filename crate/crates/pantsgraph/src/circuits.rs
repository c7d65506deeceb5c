//! Circuits (embedded cycles) in pants graphs and their classification:
//! alternation, two-tightness, minimal vertices, triangle classes, standard
//! pentagons and heptagons, and tameness.
//!
//! Every predicate works against a `World`, which is either one of the
//! exact models or a hand-labeled fixture, so the same code path answers
//! both arithmetic and hand-checked instances.

use crate::farey::FareyTriangle;
use crate::fixtures::LabeledFixture;
use crate::models::{Curve, EdgeInfo, Model, MoveType, Vertex};
use std::collections::{BTreeMap, BTreeSet};

/// Errors from circuit construction and classification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("circuit needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("circuit repeats vertex {0}")]
    Repeated(Vertex),
    #[error("circuit entries {0} and {1} are consecutive but not adjacent")]
    NotAdjacent(Vertex, Vertex),
    #[error("triangle {0}, {1}, {2} fits neither the Farey nor the fan shape")]
    UnclassifiableTriangle(Vertex, Vertex, Vertex),
}

/// A queryable graph: an exact model or a labeled fixture.
#[derive(Clone, Copy)]
pub enum World<'a> {
    Model(Model),
    Fixture(&'a LabeledFixture),
}

impl World<'_> {
    pub fn label(&self, v: &Vertex) -> Vec<Curve> {
        match self {
            World::Model(m) => m.label(v),
            World::Fixture(f) => f.label(v).expect("vertex not in fixture"),
        }
    }

    pub fn adjacent(&self, u: &Vertex, v: &Vertex) -> bool {
        match self {
            World::Model(m) => m.adjacent(u, v),
            World::Fixture(f) => f.adjacent(u, v),
        }
    }

    pub fn edge_info(&self, u: &Vertex, v: &Vertex) -> Option<EdgeInfo> {
        match self {
            World::Model(m) => m.edge_info(u, v),
            World::Fixture(f) => f.edge_info(u, v),
        }
    }

    pub fn edge_subgraphs(&self, u: &Vertex, v: &Vertex) -> BTreeSet<String> {
        match self {
            World::Model(m) => m.edge_subgraphs(u, v),
            World::Fixture(f) => f.edge_subgraphs(u, v),
        }
    }

    pub fn common_neighbors(&self, u: &Vertex, v: &Vertex) -> Vec<Vertex> {
        match self {
            World::Model(m) => m.common_neighbors(u, v),
            World::Fixture(f) => f.common_neighbors(u, v),
        }
    }
}

/// An embedded cycle: at least three distinct vertices, cyclically
/// adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    vertices: Vec<Vertex>,
}

impl Circuit {
    pub fn new(world: World<'_>, vertices: Vec<Vertex>) -> Result<Circuit, CircuitError> {
        if vertices.len() < 3 {
            return Err(CircuitError::TooShort(vertices.len()));
        }
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(CircuitError::Repeated(v.clone()));
            }
        }
        let n = vertices.len();
        for i in 0..n {
            let (u, v) = (&vertices[i], &vertices[(i + 1) % n]);
            if !world.adjacent(u, v) {
                return Err(CircuitError::NotAdjacent(u.clone(), v.clone()));
            }
        }
        Ok(Circuit { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    fn at(&self, i: isize) -> &Vertex {
        let n = self.vertices.len() as isize;
        &self.vertices[i.rem_euclid(n) as usize]
    }

    /// Edge records around the cycle: entry `i` joins vertex `i` to `i+1`.
    pub fn edge_infos(&self, world: World<'_>) -> Vec<EdgeInfo> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                world
                    .edge_info(&self.vertices[i], &self.vertices[(i + 1) % n])
                    .expect("validated circuit edge")
            })
            .collect()
    }
}

fn label_set(world: World<'_>, v: &Vertex) -> BTreeSet<Curve> {
    world.label(v).into_iter().collect()
}

/// True iff the two edges meeting at `y` lie in no common Farey or fan
/// subgraph.
pub fn corner_is_alternating(world: World<'_>, x: &Vertex, y: &Vertex, z: &Vertex) -> bool {
    let f1 = world.edge_subgraphs(x, y);
    let f2 = world.edge_subgraphs(y, z);
    f1.intersection(&f2).next().is_none()
}

/// True iff no two consecutive edges of the circuit are contained in one
/// Farey or fan subgraph.
pub fn is_alternating(world: World<'_>, circuit: &Circuit) -> bool {
    let n = circuit.len() as isize;
    (0..n).all(|i| {
        corner_is_alternating(world, circuit.at(i - 1), circuit.at(i), circuit.at(i + 1))
    })
}

/// The same alternation test for an open path: only interior corners count.
pub fn path_is_alternating(world: World<'_>, path: &[Vertex]) -> bool {
    path.windows(3)
        .all(|w| corner_is_alternating(world, &w[0], &w[1], &w[2]))
}

/// True iff the labels' total intersection is within two of the smallest
/// label: `|⋂ labels| ≥ min |label| − 2`.
pub fn is_two_tight(world: World<'_>, circuit: &Circuit) -> bool {
    let labels: Vec<BTreeSet<Curve>> =
        circuit.vertices().iter().map(|v| label_set(world, v)).collect();
    let min_card = labels.iter().map(BTreeSet::len).min().expect("nonempty");
    let mut inter = labels[0].clone();
    for l in &labels[1..] {
        inter = inter.intersection(l).cloned().collect();
    }
    inter.len() + 2 >= min_card
}

/// The circuit vertices of smallest label cardinality.
pub fn minimal_vertices(world: World<'_>, circuit: &Circuit) -> Vec<Vertex> {
    let cards: Vec<usize> = circuit
        .vertices()
        .iter()
        .map(|v| world.label(v).len())
        .collect();
    let min = *cards.iter().min().expect("nonempty");
    circuit
        .vertices()
        .iter()
        .zip(&cards)
        .filter(|(_, c)| **c == min)
        .map(|(v, _)| v.clone())
        .collect()
}

/// The label-size step along a directed edge: +1 forward through a type-4
/// edge, −1 against it, 0 otherwise.
pub fn cardinality_step(info: &EdgeInfo, from: &Vertex, to: &Vertex) -> i64 {
    match (&info.move_type, &info.direction) {
        (MoveType::T4, Some((f, t))) => {
            if f == from && t == to {
                1
            } else {
                -1
            }
        }
        _ => 0,
    }
}

/// The two triangle shapes that occur in the models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleClass {
    /// All three edges of one type 1 or 2.
    Farey,
    /// Two type-4 edges leaving a common vertex plus one type-3 edge.
    Fan,
}

/// Classifies a 3-circuit by its edge types, rejecting anything that fits
/// neither shape.
pub fn classify_triangle(
    world: World<'_>,
    triangle: &Circuit,
) -> Result<TriangleClass, CircuitError> {
    assert_eq!(triangle.len(), 3, "classify_triangle needs a 3-circuit");
    let vs = triangle.vertices();
    let infos = triangle.edge_infos(world);
    let types: Vec<MoveType> = infos.iter().map(|e| e.move_type).collect();
    if types.iter().all(|t| *t == MoveType::T1) || types.iter().all(|t| *t == MoveType::T2) {
        return Ok(TriangleClass::Farey);
    }
    let t4s: Vec<&EdgeInfo> = infos.iter().filter(|e| e.move_type == MoveType::T4).collect();
    let t3s = infos.iter().filter(|e| e.move_type == MoveType::T3).count();
    if t4s.len() == 2 && t3s == 1 {
        let (f1, _) = t4s[0].direction.as_ref().expect("type-4 direction");
        let (f2, _) = t4s[1].direction.as_ref().expect("type-4 direction");
        if f1 == f2 {
            return Ok(TriangleClass::Fan);
        }
    }
    Err(CircuitError::UnclassifiableTriangle(
        vs[0].clone(),
        vs[1].clone(),
        vs[2].clone(),
    ))
}

fn slope_of_v1(v: &Vertex) -> Option<crate::farey::Slope> {
    match v {
        Vertex::V1(s) => Some(*s),
        _ => None,
    }
}

fn slope_of_v2(v: &Vertex) -> Option<crate::farey::Slope> {
    match v {
        Vertex::V2(s) => Some(*s),
        _ => None,
    }
}

fn triangle_of_v3(v: &Vertex) -> Option<FareyTriangle> {
    match v {
        Vertex::V3(t) => Some(*t),
        _ => None,
    }
}

/// True iff the 5-circuit is a standard pentagon: a triangle vertex `T`,
/// the two spoke vertices of two slopes of `T`, and the two line vertices
/// of those slopes, in cyclic order `T, V2(a), V1(a), V1(b), V2(b)`.
pub fn is_standard_pentagon(circuit: &Circuit) -> bool {
    if circuit.len() != 5 {
        return false;
    }
    for dir in [1isize, -1] {
        for rot in 0..5isize {
            let at = |k: isize| circuit.at(rot + dir * k);
            let (Some(t), Some(a1), Some(b1), Some(b2), Some(a2)) = (
                triangle_of_v3(at(0)),
                slope_of_v2(at(1)),
                slope_of_v1(at(2)),
                slope_of_v1(at(3)),
                slope_of_v2(at(4)),
            ) else {
                continue;
            };
            if a1 == b1 && a2 == b2 && a1 != a2 && t.contains(a1) && t.contains(a2) {
                return true;
            }
        }
    }
    false
}

/// True iff the 7-circuit has the standard heptagon shape: one type-3 edge,
/// flanked at distance two on each side by a type-4 edge directed toward
/// it, all other edges of type 1 or 2, and no quadrangle shortcut across
/// either type-4 corner: writing the cycle as
/// `X -4> Y - Z -3- P - Q <4- R - S`, both `common_neighbors(X, Z) ∖ {Y}` and
/// `common_neighbors(R, P) ∖ {Q}` must be empty.
pub fn is_standard_heptagon(world: World<'_>, circuit: &Circuit) -> bool {
    if circuit.len() != 7 {
        return false;
    }
    for dir in [1isize, -1] {
        for rot in 0..7isize {
            let at = |k: isize| circuit.at(rot + dir * k);
            let info = |k: isize| world.edge_info(at(k), at(k + 1)).expect("circuit edge");
            let farey_type =
                |k: isize| matches!(info(k).move_type, MoveType::T1 | MoveType::T2);
            let e0 = info(0);
            if e0.move_type != MoveType::T4
                || e0.direction != Some((at(0).clone(), at(1).clone()))
            {
                continue;
            }
            let e4 = info(4);
            if e4.move_type != MoveType::T4
                || e4.direction != Some((at(5).clone(), at(4).clone()))
            {
                continue;
            }
            if info(2).move_type != MoveType::T3 {
                continue;
            }
            if !(farey_type(1) && farey_type(3) && farey_type(5) && farey_type(6)) {
                continue;
            }
            let no_shortcut = |a: &Vertex, b: &Vertex, through: &Vertex| {
                world
                    .common_neighbors(a, b)
                    .iter()
                    .all(|w| w == through)
            };
            if no_shortcut(at(0), at(2), at(1)) && no_shortcut(at(5), at(3), at(4)) {
                return true;
            }
        }
    }
    false
}

/// Tameness: length 4 through 7; no type-4 edges at lengths 5 and 6; an
/// alternating hexagon has an odd number of type-3 edges; a heptagon must
/// be standard.
pub fn is_tame(world: World<'_>, circuit: &Circuit) -> bool {
    let n = circuit.len();
    if !(4..=7).contains(&n) {
        return false;
    }
    let infos = circuit.edge_infos(world);
    let t3 = infos.iter().filter(|e| e.move_type == MoveType::T3).count();
    let t4 = infos.iter().filter(|e| e.move_type == MoveType::T4).count();
    match n {
        4 => true,
        5 => t4 == 0,
        6 => t4 == 0 && (!is_alternating(world, circuit) || t3 % 2 == 1),
        7 => is_standard_heptagon(world, circuit),
        _ => unreachable!(),
    }
}

/// All circuits of length 3 to `max_len` in the graph induced on
/// `vertices`, one representative per rotation/reflection class.
pub fn enumerate_circuits(
    world: World<'_>,
    vertices: &[Vertex],
    max_len: usize,
) -> Vec<Circuit> {
    let verts: Vec<Vertex> = {
        let mut v: Vec<Vertex> = vertices.to_vec();
        v.sort();
        v.dedup();
        v
    };
    let mut adj: BTreeMap<&Vertex, Vec<&Vertex>> = BTreeMap::new();
    for (i, u) in verts.iter().enumerate() {
        for v in &verts[i + 1..] {
            if world.adjacent(u, v) {
                adj.entry(u).or_default().push(v);
                adj.entry(v).or_default().push(u);
            }
        }
    }
    let empty: Vec<&Vertex> = Vec::new();

    fn dfs<'a>(
        start: &'a Vertex,
        current: &'a Vertex,
        path: &mut Vec<&'a Vertex>,
        on_path: &mut BTreeSet<&'a Vertex>,
        adj: &BTreeMap<&'a Vertex, Vec<&'a Vertex>>,
        empty: &Vec<&'a Vertex>,
        max_len: usize,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        for &next in adj.get(current).unwrap_or(empty) {
            if next == start {
                // Close only when long enough and in canonical direction:
                // second vertex smaller than the last.
                if path.len() >= 3 && path[1] < path[path.len() - 1] {
                    out.push(path.iter().map(|v| (*v).clone()).collect());
                }
                continue;
            }
            if path.len() == max_len || on_path.contains(next) || next < start {
                continue;
            }
            path.push(next);
            on_path.insert(next);
            dfs(start, next, path, on_path, adj, empty, max_len, out);
            on_path.remove(next);
            path.pop();
        }
    }

    let mut raw: Vec<Vec<Vertex>> = Vec::new();
    let mut path: Vec<&Vertex> = Vec::new();
    let mut on_path: BTreeSet<&Vertex> = BTreeSet::new();
    for start in &verts {
        path.clear();
        on_path.clear();
        path.push(start);
        on_path.insert(start);
        dfs(start, start, &mut path, &mut on_path, &adj, &empty, max_len, &mut raw);
    }
    raw.into_iter()
        .map(|vs| Circuit::new(world, vs).expect("enumerated circuit"))
        .collect()
}
