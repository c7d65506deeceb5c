//! The 2-complex over the n3 graph and its loop-contraction engine.
//!
//! The cells are the Farey triangles (three line vertices), the fan
//! triangles (a spoke vertex and two adjacent tree vertices over a shared
//! slope), and the standard pentagons. A loop is a vertex list whose first
//! and last entries agree; a one-entry list is the constant loop.
//! [`contract_loop`] rewrites a loop to a point across registered cells and
//! records every step as a [`ContractionCertificate`]. [`replay`] and
//! [`verify_certificate`] re-validate such a record against nothing but the
//! model adjacency and the cell definitions, so an accepted certificate is
//! independent evidence that the loop is null-homotopic in the 2-complex.

use crate::circuits::{classify_triangle, is_standard_pentagon, Circuit, TriangleClass, World};
use crate::farey::{contract_farey_loop, FareyMove, FareyTriangle, Slope};
use crate::models::{Model, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Errors for loop validation, contraction and certificate replay.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("empty loop")]
    EmptyLoop,
    #[error("loop is not closed (first and last vertices differ)")]
    OpenLoop,
    #[error("consecutive loop vertices {0} and {1} are not adjacent")]
    BrokenLoop(Vertex, Vertex),
    #[error("vertex {0} does not belong to the model")]
    ForeignVertex(Vertex),
    #[error("illegal move at index {index}: {reason}")]
    BadMove { index: usize, reason: String },
    #[error("certificate ends at {found} but declares {declared}")]
    FinalMismatch { declared: Vertex, found: Vertex },
    #[error("contraction strategy stuck: {0}")]
    Stuck(String),
}

/// A 2-cell bounded by a 3-circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriCell {
    /// Three mutually adjacent line vertices over a Farey triangle.
    Farey(FareyTriangle),
    /// A spoke vertex and the two tree vertices of adjacent triangles
    /// through its slope; `left < right` canonically.
    Fan { slope: Slope, left: FareyTriangle, right: FareyTriangle },
}

impl TriCell {
    /// Builds a fan cell, ordering the two triangles canonically.
    pub fn fan(slope: Slope, t1: FareyTriangle, t2: FareyTriangle) -> Result<TriCell, String> {
        let (left, right) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let cell = TriCell::Fan { slope, left, right };
        cell.validate()?;
        Ok(cell)
    }

    /// The cell's boundary vertices in canonical order.
    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            TriCell::Farey(t) => t.slopes().iter().map(|s| Vertex::V1(*s)).collect(),
            TriCell::Fan { slope, left, right } => {
                vec![Vertex::V2(*slope), Vertex::V3(*left), Vertex::V3(*right)]
            }
        }
    }

    /// Checks that the boundary really is a triangle of the declared class.
    pub fn validate(&self) -> Result<(), String> {
        if let TriCell::Fan { slope, left, right } = self {
            if left >= right {
                return Err("fan cell triangles must be distinct and ordered".into());
            }
            if !left.contains(*slope) || !right.contains(*slope) {
                return Err("fan cell slope must lie on both triangles".into());
            }
        }
        let circ = Circuit::new(World::Model(Model::N3), self.vertices())
            .map_err(|e| e.to_string())?;
        let class =
            classify_triangle(World::Model(Model::N3), &circ).map_err(|e| e.to_string())?;
        match (self, class) {
            (TriCell::Farey(_), TriangleClass::Farey) => Ok(()),
            (TriCell::Fan { .. }, TriangleClass::Fan) => Ok(()),
            _ => Err("cell shape does not match its class".into()),
        }
    }
}

/// A standard-pentagon 2-cell: the tree vertex of `t` plus the spoke and
/// line vertices of two of its slopes `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentCell {
    pub t: FareyTriangle,
    pub a: Slope,
    pub b: Slope,
}

impl PentCell {
    /// Builds the cell over `t` and two of its slopes, ordered canonically.
    pub fn new(t: FareyTriangle, x: Slope, y: Slope) -> Result<PentCell, String> {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        let cell = PentCell { t, a, b };
        cell.validate()?;
        Ok(cell)
    }

    /// The boundary cycle `V3(t), V2(a), V1(a), V1(b), V2(b)`.
    pub fn cycle(&self) -> [Vertex; 5] {
        [
            Vertex::V3(self.t),
            Vertex::V2(self.a),
            Vertex::V1(self.a),
            Vertex::V1(self.b),
            Vertex::V2(self.b),
        ]
    }

    /// Checks that the boundary really is a standard pentagon.
    pub fn validate(&self) -> Result<(), String> {
        if self.a >= self.b {
            return Err("pentagon cell slopes must be distinct and ordered".into());
        }
        if !self.t.contains(self.a) || !self.t.contains(self.b) {
            return Err("pentagon cell slopes must lie on its triangle".into());
        }
        let circ = Circuit::new(World::Model(Model::N3), self.cycle().to_vec())
            .map_err(|e| e.to_string())?;
        if !is_standard_pentagon(&circ) {
            return Err("cell boundary is not a standard pentagon".into());
        }
        Ok(())
    }
}

/// One rewriting step on a closed loop in the 2-complex.
///
/// Positions index the current cyclic vertex list at the time the move is
/// applied. Every deleting move has an inserting inverse so certificates
/// can also lengthen a loop when that simplifies it later.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MoveJson", into = "MoveJson")]
pub enum Move {
    /// Removes `v` at `position` together with one equal flanking vertex
    /// (`a-v-a` becomes `a`).
    Backtrack { position: usize },
    /// Inserts the round trip `u-w-u` after the vertex `u` at `position`.
    BacktrackInverse { position: usize, inserted: Vertex },
    /// Replaces `a-v-b` (with `v` at `position`) by the edge `a-b` across
    /// the given triangle cell.
    Triangle { position: usize, cell: TriCell },
    /// Replaces the edge from `position` to its successor by the 2-path
    /// through the third vertex of the given triangle cell.
    TriangleInverse { position: usize, cell: TriCell },
    /// Replaces the 3-edge path starting at `position`, which must run
    /// along the given pentagon, by the complementary 2-edge path.
    Pentagon { position: usize, cell: PentCell },
    /// Replaces the 2-edge path starting at `position`, which must run
    /// along the given pentagon, by the complementary 3-edge path.
    PentagonInverse { position: usize, cell: PentCell },
}

#[derive(Serialize, Deserialize)]
struct MoveJson {
    kind: String,
    position: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cell: Option<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inserted: Option<Vertex>,
}

impl From<Move> for MoveJson {
    fn from(mv: Move) -> MoveJson {
        let (kind, position, cell, inserted) = match mv {
            Move::Backtrack { position } => ("backtrack", position, None, None),
            Move::BacktrackInverse { position, inserted } => {
                ("backtrack_inverse", position, None, Some(inserted))
            }
            Move::Triangle { position, cell } => {
                ("triangle", position, Some(cell.vertices()), None)
            }
            Move::TriangleInverse { position, cell } => {
                ("triangle_inverse", position, Some(cell.vertices()), None)
            }
            Move::Pentagon { position, cell } => {
                ("pentagon", position, Some(cell.cycle().to_vec()), None)
            }
            Move::PentagonInverse { position, cell } => {
                ("pentagon_inverse", position, Some(cell.cycle().to_vec()), None)
            }
        };
        MoveJson { kind: kind.to_string(), position, cell, inserted }
    }
}

fn tri_cell_from_vertices(vs: &[Vertex]) -> Result<TriCell, String> {
    match vs {
        [Vertex::V1(a), Vertex::V1(b), Vertex::V1(c)] => {
            let t = FareyTriangle::new(*a, *b, *c).map_err(|e| e.to_string())?;
            let cell = TriCell::Farey(t);
            cell.validate()?;
            Ok(cell)
        }
        [Vertex::V2(s), Vertex::V3(t1), Vertex::V3(t2)] => TriCell::fan(*s, *t1, *t2),
        _ => Err("unrecognized triangle cell shape".into()),
    }
}

fn pent_cell_from_vertices(vs: &[Vertex]) -> Result<PentCell, String> {
    match vs {
        [Vertex::V3(t), Vertex::V2(a), Vertex::V1(a2), Vertex::V1(b2), Vertex::V2(b)]
            if a == a2 && b == b2 =>
        {
            PentCell::new(*t, *a, *b)
        }
        _ => Err("unrecognized pentagon cell shape".into()),
    }
}

impl TryFrom<MoveJson> for Move {
    type Error = String;

    fn try_from(mj: MoveJson) -> Result<Move, String> {
        let position = mj.position;
        match mj.kind.as_str() {
            "backtrack" => Ok(Move::Backtrack { position }),
            "backtrack_inverse" => {
                let inserted =
                    mj.inserted.ok_or("backtrack_inverse needs an inserted vertex")?;
                Ok(Move::BacktrackInverse { position, inserted })
            }
            "triangle" | "triangle_inverse" => {
                let vs = mj.cell.ok_or("triangle move needs a cell")?;
                let cell = tri_cell_from_vertices(&vs)?;
                if mj.kind == "triangle" {
                    Ok(Move::Triangle { position, cell })
                } else {
                    Ok(Move::TriangleInverse { position, cell })
                }
            }
            "pentagon" | "pentagon_inverse" => {
                let vs = mj.cell.ok_or("pentagon move needs a cell")?;
                let cell = pent_cell_from_vertices(&vs)?;
                if mj.kind == "pentagon" {
                    Ok(Move::Pentagon { position, cell })
                } else {
                    Ok(Move::PentagonInverse { position, cell })
                }
            }
            other => Err(format!("unknown move kind {other}")),
        }
    }
}

/// A recorded contraction: the loop, the move sequence, and the point it
/// ends at. Serializes with keys `loop`, `moves` and `final`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    #[serde(rename = "loop")]
    pub initial_loop: Vec<Vertex>,
    pub moves: Vec<Move>,
    #[serde(rename = "final")]
    pub final_vertex: Vertex,
}

fn check_closed(l: &[Vertex]) -> Result<Vec<Vertex>, HomotopyError> {
    if l.is_empty() {
        return Err(HomotopyError::EmptyLoop);
    }
    if l.first() != l.last() {
        return Err(HomotopyError::OpenLoop);
    }
    for v in l {
        if !Model::N3.contains(v) {
            return Err(HomotopyError::ForeignVertex(v.clone()));
        }
    }
    let cyc: Vec<Vertex> = l[..l.len() - 1].to_vec();
    let n = cyc.len();
    if n >= 2 {
        for i in 0..n {
            let (u, v) = (&cyc[i], &cyc[(i + 1) % n]);
            if !Model::N3.adjacent(u, v) {
                return Err(HomotopyError::BrokenLoop(u.clone(), v.clone()));
            }
        }
    }
    if n == 0 {
        // Input was the 1-element list [x]; treat as the constant loop at x.
        return Ok(vec![l[0].clone()]);
    }
    Ok(cyc)
}

fn find_path_on_pentagon(cycle: &[Vertex; 5], w: &[Vertex]) -> Option<(usize, usize)> {
    for d in [1usize, 4] {
        for s in 0..5 {
            if (0..w.len()).all(|k| cycle[(s + d * k) % 5] == w[k]) {
                return Some((s, d));
            }
        }
    }
    None
}

fn apply_move(seq: &mut Vec<Vertex>, mv: &Move, index: usize) -> Result<(), HomotopyError> {
    let bad = |reason: String| HomotopyError::BadMove { index, reason };
    let n = seq.len();
    match mv {
        Move::Backtrack { position } => {
            let i = *position;
            if n < 2 || i >= n {
                return Err(bad("backtrack position out of range".into()));
            }
            if seq[(i + n - 1) % n] != seq[(i + 1) % n] {
                return Err(bad("backtrack neighbors differ".into()));
            }
            if n == 2 {
                seq.remove(i);
            } else {
                let j = (i + 1) % n;
                if j > i {
                    seq.remove(j);
                    seq.remove(i);
                } else {
                    seq.remove(i);
                    seq.remove(j);
                }
            }
        }
        Move::BacktrackInverse { position, inserted } => {
            let i = *position;
            if i >= n {
                return Err(bad("insertion position out of range".into()));
            }
            if !Model::N3.contains(inserted) {
                return Err(bad(format!("inserted vertex {inserted} is not in the model")));
            }
            let u = seq[i].clone();
            if !Model::N3.adjacent(&u, inserted) {
                return Err(bad(format!("inserted vertex {inserted} is not adjacent to {u}")));
            }
            if n == 1 {
                // Inflating the constant loop gives the 2-cycle u-w.
                seq.push(inserted.clone());
            } else {
                seq.insert(i + 1, u);
                seq.insert(i + 1, inserted.clone());
            }
        }
        Move::Triangle { position, cell } => {
            let i = *position;
            if n < 3 || i >= n {
                return Err(bad("triangle position out of range".into()));
            }
            cell.validate().map_err(&bad)?;
            let corner = [
                seq[(i + n - 1) % n].clone(),
                seq[i].clone(),
                seq[(i + 1) % n].clone(),
            ];
            let want: BTreeSet<Vertex> = cell.vertices().into_iter().collect();
            let got: BTreeSet<Vertex> = corner.into_iter().collect();
            if want != got {
                return Err(bad("triangle cell does not match the loop segment".into()));
            }
            seq.remove(i);
        }
        Move::TriangleInverse { position, cell } => {
            let i = *position;
            if n < 2 || i >= n {
                return Err(bad("edge position out of range".into()));
            }
            cell.validate().map_err(&bad)?;
            let a = seq[i].clone();
            let b = seq[(i + 1) % n].clone();
            let vs = cell.vertices();
            if a == b || !vs.contains(&a) || !vs.contains(&b) {
                return Err(bad("edge endpoints are not an edge of the cell".into()));
            }
            let third =
                vs.into_iter().find(|x| *x != a && *x != b).expect("distinct cell vertices");
            seq.insert(i + 1, third);
        }
        Move::Pentagon { position, cell } => {
            let i = *position;
            if n < 4 || i >= n {
                return Err(bad("pentagon position out of range".into()));
            }
            cell.validate().map_err(&bad)?;
            let cycle = cell.cycle();
            let w: Vec<Vertex> = (0..4).map(|k| seq[(i + k) % n].clone()).collect();
            let Some((s, d)) = find_path_on_pentagon(&cycle, &w) else {
                return Err(bad("loop segment is not a path along the pentagon".into()));
            };
            let y = cycle[(s + 4 * d) % 5].clone();
            let j1 = (i + 1) % n;
            let j2 = (i + 2) % n;
            if j1 == 0 {
                seq.remove(1);
                seq.remove(0);
                seq.push(y);
            } else if j2 == 0 {
                seq.remove(j1);
                seq.remove(0);
                seq.push(y);
            } else {
                seq.remove(j2);
                seq.remove(j1);
                seq.insert(j1, y);
            }
        }
        Move::PentagonInverse { position, cell } => {
            let i = *position;
            if n < 2 || i >= n {
                return Err(bad("pentagon position out of range".into()));
            }
            cell.validate().map_err(&bad)?;
            let cycle = cell.cycle();
            let w: Vec<Vertex> = (0..3).map(|k| seq[(i + k) % n].clone()).collect();
            let Some((s, d)) = find_path_on_pentagon(&cycle, &w) else {
                return Err(bad("loop segment is not a path along the pentagon".into()));
            };
            let m1 = cycle[(s + 4 * d) % 5].clone();
            let m2 = cycle[(s + 3 * d) % 5].clone();
            let j = (i + 1) % n;
            if j == 0 {
                seq.remove(0);
                seq.push(m1);
                seq.push(m2);
            } else {
                seq.remove(j);
                seq.insert(j, m2);
                seq.insert(j, m1);
            }
        }
    }
    Ok(())
}

/// Replays `moves` against the closed loop `l`, validating every step, and
/// returns the final vertex. Errors identify the first illegal move.
pub fn replay(l: &[Vertex], moves: &[Move]) -> Result<Vertex, HomotopyError> {
    let mut seq = check_closed(l)?;
    for (index, mv) in moves.iter().enumerate() {
        apply_move(&mut seq, mv, index)?;
    }
    if seq.len() != 1 {
        return Err(HomotopyError::BadMove {
            index: moves.len(),
            reason: format!("loop not reduced to a point (length {})", seq.len()),
        });
    }
    Ok(seq[0].clone())
}

/// Independently re-validates a certificate, returning its final vertex.
pub fn verify_certificate(cert: &ContractionCertificate) -> Result<Vertex, HomotopyError> {
    let end = replay(&cert.initial_loop, &cert.moves)?;
    if end != cert.final_vertex {
        return Err(HomotopyError::FinalMismatch {
            declared: cert.final_vertex.clone(),
            found: end,
        });
    }
    Ok(end)
}

fn push_move(
    seq: &mut Vec<Vertex>,
    moves: &mut Vec<Move>,
    mv: Move,
) -> Result<(), HomotopyError> {
    apply_move(seq, &mv, moves.len())?;
    moves.push(mv);
    Ok(())
}

fn eliminate_cyclic(
    seq: &mut Vec<Vertex>,
    moves: &mut Vec<Move>,
) -> Result<(), HomotopyError> {
    let mut i = 0;
    while i < seq.len() {
        let n = seq.len();
        if n < 2 {
            break;
        }
        let j = (i + 1) % n;
        let (t1, t2) = match (&seq[i], &seq[j]) {
            (Vertex::V3(a), Vertex::V3(b)) => (*a, *b),
            _ => {
                i += 1;
                continue;
            }
        };
        // The canonically smaller shared slope picks the fan triangle.
        let s = t1.shared(&t2)[0];
        let cell = TriCell::fan(s, t1, t2).map_err(HomotopyError::Stuck)?;
        push_move(seq, moves, Move::TriangleInverse { position: i, cell })?;
        i += 2;
    }
    Ok(())
}

/// Replaces every edge between two tree vertices by the 2-path through the
/// spoke vertex of their canonically smaller shared slope, and returns the
/// rewritten closed loop with the inserting moves that produced it.
pub fn eliminate_tree_edges(
    l: &[Vertex],
) -> Result<(Vec<Vertex>, Vec<Move>), HomotopyError> {
    let mut seq = check_closed(l)?;
    let mut moves = Vec::new();
    eliminate_cyclic(&mut seq, &mut moves)?;
    if seq.len() > 1 {
        let first = seq[0].clone();
        seq.push(first);
    }
    Ok((seq, moves))
}

fn kind_code(v: &Vertex) -> u8 {
    match v {
        Vertex::V1(_) => 1,
        Vertex::V2(_) => 2,
        Vertex::V3(_) => 3,
        _ => 0,
    }
}

fn v2_slope(v: &Vertex) -> Option<Slope> {
    match v {
        Vertex::V2(s) => Some(*s),
        _ => None,
    }
}

fn v3_triangle(v: &Vertex) -> Option<FareyTriangle> {
    match v {
        Vertex::V3(t) => Some(*t),
        _ => None,
    }
}

fn measure(seq: &[Vertex]) -> (usize, usize, usize) {
    let v3 = seq.iter().filter(|v| matches!(v, Vertex::V3(_))).count();
    let v2 = seq.iter().filter(|v| matches!(v, Vertex::V2(_))).count();
    (v3, v2, seq.len())
}

/// Contracts a closed loop to a point and returns the certificate.
///
/// Strategy: first eliminate tree-tree edges, then repeat: remove
/// backtracks; contract all-line loops by peak reduction over Farey
/// triangles; straighten a line-spoke-tree-spoke segment across its
/// standard pentagon; and collapse the remaining spoke-tree loops by fan
/// triangle moves, inserting a line round trip first when the loop is too
/// long for a direct collapse. Each round strictly decreases the measure
/// (tree count, spoke count, length), so the process terminates.
pub fn contract_loop(l: &[Vertex]) -> Result<ContractionCertificate, HomotopyError> {
    let mut seq = check_closed(l)?;
    let mut moves = Vec::new();
    eliminate_cyclic(&mut seq, &mut moves)?;
    let stuck = |msg: &str| HomotopyError::Stuck(msg.to_string());
    let mut prev_measure: Option<(usize, usize, usize)> = None;
    while seq.len() > 1 {
        let cur = measure(&seq);
        if let Some(p) = prev_measure {
            debug_assert!(cur < p, "termination measure must decrease: {p:?} -> {cur:?}");
        }
        prev_measure = Some(cur);
        let n = seq.len();
        if n == 2 {
            push_move(&mut seq, &mut moves, Move::Backtrack { position: 1 })?;
            continue;
        }
        if let Some(i) = (0..n).find(|&i| seq[(i + n - 1) % n] == seq[(i + 1) % n]) {
            push_move(&mut seq, &mut moves, Move::Backtrack { position: i })?;
            continue;
        }
        if seq.iter().all(|v| matches!(v, Vertex::V1(_))) {
            let mut closed: Vec<Slope> = seq
                .iter()
                .map(|v| match v {
                    Vertex::V1(s) => *s,
                    _ => unreachable!("all-line loop"),
                })
                .collect();
            closed.push(closed[0]);
            let fmoves = contract_farey_loop(&closed)
                .map_err(|e| HomotopyError::Stuck(format!("line contraction failed: {e}")))?;
            for fm in fmoves {
                let mv = match fm {
                    FareyMove::Backtrack { position } => Move::Backtrack { position },
                    FareyMove::Triangle { position, triangle } => {
                        Move::Triangle { position, cell: TriCell::Farey(triangle) }
                    }
                };
                push_move(&mut seq, &mut moves, mv)?;
            }
            continue;
        }
        let segment = (0..n).find(|&i| {
            kind_code(&seq[i]) == 1
                && kind_code(&seq[(i + 1) % n]) == 2
                && kind_code(&seq[(i + 2) % n]) == 3
                && kind_code(&seq[(i + 3) % n]) == 2
        });
        if let Some(i) = segment {
            let a1 = v2_slope(&seq[(i + 1) % n]).expect("scanned spoke");
            let t = v3_triangle(&seq[(i + 2) % n]).expect("scanned tree vertex");
            let a2 = v2_slope(&seq[(i + 3) % n]).expect("scanned spoke");
            let cell = PentCell::new(t, a1, a2).map_err(HomotopyError::Stuck)?;
            push_move(&mut seq, &mut moves, Move::Pentagon { position: i, cell })?;
            continue;
        }
        if seq.iter().any(|v| matches!(v, Vertex::V1(_))) {
            return Err(stuck("loop has line vertices but no pentagon segment"));
        }
        // Only spoke and tree vertices remain, alternating except for one
        // transient tree-tree edge right after the length-4 collapse below.
        let j = (0..n)
            .find(|&i| kind_code(&seq[i]) == 2)
            .ok_or_else(|| stuck("loop of tree vertices only"))?;
        match n {
            3 | 4 => {
                let s = v2_slope(&seq[j]).expect("scanned spoke");
                let t1 = v3_triangle(&seq[(j + n - 1) % n])
                    .ok_or_else(|| stuck("spoke vertex not flanked by tree vertices"))?;
                let t2 = v3_triangle(&seq[(j + 1) % n])
                    .ok_or_else(|| stuck("spoke vertex not flanked by tree vertices"))?;
                let cell = TriCell::fan(s, t1, t2).map_err(HomotopyError::Stuck)?;
                push_move(&mut seq, &mut moves, Move::Triangle { position: j, cell })?;
            }
            _ if n >= 6 && n % 2 == 0 => {
                let s = v2_slope(&seq[j]).expect("scanned spoke");
                let t = v3_triangle(&seq[(j + 1) % n])
                    .ok_or_else(|| stuck("spoke-tree loop does not alternate"))?;
                let s2 = v2_slope(&seq[(j + 2) % n])
                    .ok_or_else(|| stuck("spoke-tree loop does not alternate"))?;
                push_move(
                    &mut seq,
                    &mut moves,
                    Move::BacktrackInverse { position: j, inserted: Vertex::V1(s) },
                )?;
                let cell = PentCell::new(t, s, s2).map_err(HomotopyError::Stuck)?;
                push_move(&mut seq, &mut moves, Move::Pentagon { position: j + 1, cell })?;
            }
            _ => return Err(stuck("unexpected spoke-tree loop length")),
        }
    }
    Ok(ContractionCertificate {
        initial_loop: l.to_vec(),
        moves,
        final_vertex: seq[0].clone(),
    })
}

/// Seeded random closed loop based at the line vertex of 0/1: an out-walk
/// through neighbor windows, bounded in slope denominator, followed by a
/// deterministic canonical return (tree to spoke to line, then the
/// parent-chain down to a root).
pub fn random_loop(seed: u64, walk_len: usize, max_denom: i64) -> Vec<Vertex> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let start = Model::N3.base_vertex();
    let mut cur = start.clone();
    let mut out = vec![start.clone()];
    for _ in 0..walk_len {
        let opts: Vec<Vertex> = Model::N3
            .neighbors(&cur, 8)
            .into_iter()
            .filter(|v| v.slopes().iter().all(|s| s.denom() <= max_denom))
            .collect();
        if opts.is_empty() {
            break;
        }
        cur = opts[rng.gen_range(0..opts.len())].clone();
        out.push(cur.clone());
    }
    let mut s = match cur {
        Vertex::V3(t) => {
            let s0 = t.slopes()[0];
            out.push(Vertex::V2(s0));
            out.push(Vertex::V1(s0));
            s0
        }
        Vertex::V2(x) => {
            out.push(Vertex::V1(x));
            x
        }
        Vertex::V1(x) => x,
        _ => unreachable!("n3 walk"),
    };
    while !s.is_root() {
        s = crate::farey::parents(s).unwrap()[0];
        out.push(Vertex::V1(s));
    }
    if Vertex::V1(s) != start {
        out.push(start);
    }
    out
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

    fn v1(p: i64, q: i64) -> Vertex {
        Vertex::V1(s(p, q))
    }

    fn v2(p: i64, q: i64) -> Vertex {
        Vertex::V2(s(p, q))
    }

    #[test]
    fn constant_and_degenerate_loops() {
        let cert = contract_loop(&[v1(0, 1)]).unwrap();
        assert!(cert.moves.is_empty());
        assert_eq!(cert.final_vertex, v1(0, 1));
        assert_eq!(verify_certificate(&cert).unwrap(), v1(0, 1));

        let cert = contract_loop(&[v1(0, 1), v2(0, 1), v1(0, 1)]).unwrap();
        assert_eq!(cert.moves, vec![Move::Backtrack { position: 1 }]);
        assert_eq!(verify_certificate(&cert).unwrap(), v1(0, 1));

        assert_eq!(contract_loop(&[]), Err(HomotopyError::EmptyLoop));
        assert_eq!(contract_loop(&[v1(0, 1), v2(0, 1)]), Err(HomotopyError::OpenLoop));
        assert!(matches!(
            contract_loop(&[v1(0, 1), v2(1, 1), v1(0, 1)]),
            Err(HomotopyError::BrokenLoop(_, _))
        ));
        assert!(matches!(
            contract_loop(&[Vertex::Centre]),
            Err(HomotopyError::ForeignVertex(_))
        ));
    }

    #[test]
    fn pentagon_loop_uses_one_pentagon_move() {
        let t = tri((0, 1), (1, 1), (1, 0));
        let l = vec![v1(0, 1), v1(1, 1), v2(1, 1), Vertex::V3(t), v2(0, 1), v1(0, 1)];
        let cert = contract_loop(&l).unwrap();
        let pentagons =
            cert.moves.iter().filter(|m| matches!(m, Move::Pentagon { .. })).count();
        assert_eq!(pentagons, 1);
        assert!(matches!(cert.moves[0], Move::Pentagon { .. }));
        assert!(cert.moves[1..].iter().all(|m| matches!(m, Move::Backtrack { .. })));
        assert_eq!(verify_certificate(&cert).unwrap(), cert.final_vertex);
    }

    #[test]
    fn tree_edge_round_trip_is_eliminated() {
        let t = tri((0, 1), (1, 1), (1, 0));
        let t2 = tri((0, 1), (1, 1), (1, 2));
        let l = vec![Vertex::V3(t), Vertex::V3(t2), Vertex::V3(t)];
        let (rewritten, moves) = eliminate_tree_edges(&l).unwrap();
        assert_eq!(moves.len(), 2);
        assert!(moves.iter().all(|m| matches!(m, Move::TriangleInverse { .. })));
        // Both crossings of the tree edge detour through the spoke of 0/1,
        // the canonically smaller shared slope.
        assert_eq!(
            rewritten,
            vec![Vertex::V3(t), v2(0, 1), Vertex::V3(t2), v2(0, 1), Vertex::V3(t)]
        );

        let cert = contract_loop(&l).unwrap();
        let end = verify_certificate(&cert).unwrap();
        assert!(l.contains(&end));
    }

    #[test]
    fn spoke_tree_quadrangle_collapses_by_two_triangle_moves() {
        let t = tri((0, 1), (1, 1), (1, 0));
        let t2 = tri((0, 1), (1, 1), (1, 2));
        let l = vec![Vertex::V3(t), v2(0, 1), Vertex::V3(t2), v2(1, 1), Vertex::V3(t)];
        let cert = contract_loop(&l).unwrap();
        let kinds: Vec<&str> = cert
            .moves
            .iter()
            .map(|m| match m {
                Move::Triangle { .. } => "tri",
                Move::Backtrack { .. } => "back",
                _ => "other",
            })
            .collect();
        assert_eq!(kinds, vec!["tri", "tri", "back"]);
        assert_eq!(verify_certificate(&cert).unwrap(), Vertex::V3(t));
    }

    #[test]
    fn spoke_tree_hexagon_contracts() {
        let t1 = tri((0, 1), (1, 1), (1, 0));
        let t2 = tri((1, 1), (2, 1), (1, 0));
        let t3 = tri((0, 1), (-1, 1), (1, 0));
        let l = vec![
            v2(0, 1),
            Vertex::V3(t1),
            v2(1, 1),
            Vertex::V3(t2),
            v2(1, 0),
            Vertex::V3(t3),
            v2(0, 1),
        ];
        let cert = contract_loop(&l).unwrap();
        assert!(matches!(cert.moves[0], Move::BacktrackInverse { .. }));
        assert!(matches!(cert.moves[1], Move::Pentagon { .. }));
        assert!(cert.moves.len() <= 10);
        assert_eq!(verify_certificate(&cert).unwrap(), cert.final_vertex);
    }

    #[test]
    fn forged_certificates_are_rejected() {
        let t = tri((0, 1), (1, 1), (1, 0));
        let l = vec![v1(0, 1), v1(1, 1), v2(1, 1), Vertex::V3(t), v2(0, 1), v1(0, 1)];
        let good = contract_loop(&l).unwrap();

        // A pentagon cell whose slopes do not lie on its triangle.
        let mut cert = good.clone();
        cert.moves[0] = Move::Pentagon {
            position: 0,
            cell: PentCell { t, a: s(0, 1), b: s(1, 2) },
        };
        assert!(matches!(
            verify_certificate(&cert),
            Err(HomotopyError::BadMove { index: 0, .. })
        ));

        // A valid cell applied where the loop does not follow it.
        let mut cert = good.clone();
        let other = PentCell::new(tri((0, 1), (1, 2), (1, 1)), s(1, 2), s(1, 1)).unwrap();
        cert.moves[0] = Move::Pentagon { position: 0, cell: other };
        assert!(matches!(
            verify_certificate(&cert),
            Err(HomotopyError::BadMove { index: 0, .. })
        ));

        // A tampered final vertex.
        let mut cert = good.clone();
        cert.final_vertex = v1(1, 1);
        assert!(matches!(
            verify_certificate(&cert),
            Err(HomotopyError::FinalMismatch { .. })
        ));

        // A truncated move list leaves the loop unreduced.
        let mut cert = good;
        cert.moves.pop();
        assert!(matches!(verify_certificate(&cert), Err(HomotopyError::BadMove { .. })));
    }

    #[test]
    fn moves_and_certificates_round_trip_through_json() {
        let t = tri((0, 1), (1, 1), (1, 0));
        let t2 = tri((0, 1), (1, 1), (1, 2));
        let samples = vec![
            Move::Backtrack { position: 3 },
            Move::BacktrackInverse { position: 0, inserted: v1(0, 1) },
            Move::Triangle { position: 1, cell: TriCell::Farey(t) },
            Move::TriangleInverse {
                position: 2,
                cell: TriCell::fan(s(0, 1), t, t2).unwrap(),
            },
            Move::Pentagon { position: 0, cell: PentCell::new(t, s(0, 1), s(1, 1)).unwrap() },
            Move::PentagonInverse {
                position: 4,
                cell: PentCell::new(t2, s(1, 2), s(1, 1)).unwrap(),
            },
        ];
        for mv in &samples {
            let text = serde_json::to_string(mv).unwrap();
            let back: Move = serde_json::from_str(&text).unwrap();
            assert_eq!(*mv, back, "round trip of {text}");
        }
        let value = serde_json::to_value(&samples[1]).unwrap();
        assert_eq!(value["kind"], "backtrack_inverse");
        assert_eq!(value["inserted"], "V1:0/1");
        let value = serde_json::to_value(&samples[4]).unwrap();
        assert_eq!(value["kind"], "pentagon");
        assert_eq!(value["cell"].as_array().unwrap().len(), 5);

        let l = vec![v1(0, 1), v1(1, 1), v2(1, 1), Vertex::V3(t), v2(0, 1), v1(0, 1)];
        let cert = contract_loop(&l).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: ContractionCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(cert, back);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value["loop"].is_array());
        assert!(value["final"].is_string());
        assert_eq!(verify_certificate(&back).unwrap(), cert.final_vertex);
    }

    #[test]
    fn pentagon_inverse_replays() {
        let t = tri((0, 1), (1, 1), (1, 0));
        let cell = PentCell::new(t, s(0, 1), s(1, 1)).unwrap();
        // Start on the short side of the pentagon and open it up, then
        // contract the full boundary back to a point.
        let l = vec![v2(0, 1), v1(0, 1), v1(1, 1), v2(1, 1), Vertex::V3(t), v2(0, 1)];
        let mut seq = check_closed(&l).unwrap();
        let mv = Move::PentagonInverse { position: 1, cell };
        apply_move(&mut seq, &mv, 0).unwrap();
        assert_eq!(seq.len(), 6);
        let mut closed = seq.clone();
        closed.push(closed[0].clone());
        // The opened loop doubles back along the long side, so it still
        // contracts, and the original certificate plus this move verifies.
        assert!(verify_certificate(&contract_loop(&closed).unwrap()).is_ok());
    }

    #[test]
    fn random_loops_contract_and_verify() {
        for seed in 0..30 {
            let l = random_loop(seed, 10, 8);
            assert_eq!(l.first(), l.last());
            let cert = contract_loop(&l).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            let end = verify_certificate(&cert).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(Model::N3.contains(&end));
            assert!(
                cert.moves.len() <= 4 * l.len() + 8,
                "seed {seed}: {} moves for length {}",
                cert.moves.len(),
                l.len()
            );
        }
    }
}
