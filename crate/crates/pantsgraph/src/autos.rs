//! Slope symmetries, their induced graph maps, and signature recovery.
//!
//! Integer matrices of determinant plus or minus one act on slopes, and the
//! action extends vertexwise to the n3 model. The extension preserves edge
//! types and directions, so each matrix induces a graph automorphism. From
//! that automorphism alone a correspondence on curves is recovered: a curve
//! marked at a decomposition is followed through the span of the remaining
//! curves (`phi`). Finally, the signature (genus and boundary count) of the
//! underlying surface is recovered from ball invariants of any model, with
//! no access to labels beyond the graph oracle itself.

use crate::farey::{FareyTriangle, Slope};
use crate::models::{self, Curve, Model, Vertex};
use crate::structure::{span_of_curves, v_marked, SpanRep, StructureError};
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

/// Errors from matrix construction, word parsing, the curve correspondence
/// and signature recovery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutosError {
    #[error("matrix determinant is {0}, expected 1 or -1")]
    BadDeterminant(i64),
    #[error("unknown generator letter {0:?}")]
    BadLetter(char),
    #[error("curve {0} is not in the label of {1}")]
    NotInLabel(Curve, Vertex),
    #[error(transparent)]
    Span(#[from] StructureError),
    #[error("no vertex with a certified neighborhood attains a one-sided degree")]
    Inconclusive,
}

/// An integer matrix of determinant plus or minus one acting on slopes.
///
/// A matrix and its negative act identically, so the sign is normalized at
/// construction: the first nonzero entry in row-major order is positive.
/// Equality therefore means equality of actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SlopeMap {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl std::fmt::Display for SlopeMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl SlopeMap {
    /// Builds the map `p/q -> (a*p + b*q)/(c*p + d*q)` after checking that
    /// the determinant is plus or minus one.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<SlopeMap, AutosError> {
        let det = a * d - b * c;
        if det != 1 && det != -1 {
            return Err(AutosError::BadDeterminant(det));
        }
        let mut m = SlopeMap { a, b, c, d };
        let lead = [m.a, m.b, m.c, m.d].into_iter().find(|x| *x != 0).unwrap();
        if lead < 0 {
            m = SlopeMap {
                a: -m.a,
                b: -m.b,
                c: -m.c,
                d: -m.d,
            };
        }
        Ok(m)
    }

    pub fn identity() -> SlopeMap {
        SlopeMap {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    /// The shear `p/q -> (p + q)/q`, adding one to every slope.
    pub fn shear() -> SlopeMap {
        SlopeMap {
            a: 1,
            b: 1,
            c: 0,
            d: 1,
        }
    }

    /// The swap `p/q -> q/p`, inverting every slope.
    pub fn swap() -> SlopeMap {
        SlopeMap {
            a: 0,
            b: 1,
            c: 1,
            d: 0,
        }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// The matrix rows, for reports.
    pub fn entries(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// The matrix product `self * other`: `other` acts on slopes first.
    pub fn compose(&self, other: &SlopeMap) -> SlopeMap {
        SlopeMap::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
        .expect("product of unimodular matrices is unimodular")
    }

    pub fn inverse(&self) -> SlopeMap {
        SlopeMap::new(self.d, -self.b, -self.c, self.a)
            .expect("adjugate of a unimodular matrix is unimodular")
    }

    pub fn apply(&self, s: Slope) -> Slope {
        let (p, q) = (s.numer(), s.denom());
        Slope::new(self.a * p + self.b * q, self.c * p + self.d * q)
            .expect("a unimodular matrix never sends a slope to 0/0")
    }

    /// Triangles map to triangles: the action preserves Farey adjacency.
    pub fn apply_triangle(&self, t: &FareyTriangle) -> FareyTriangle {
        let [x, y, z] = t.slopes();
        FareyTriangle::new(self.apply(x), self.apply(y), self.apply(z))
            .expect("the slope action preserves Farey triangles")
    }

    /// The induced map on n3 vertices. Panics on vertices of other models.
    pub fn apply_vertex(&self, v: &Vertex) -> Vertex {
        match v {
            Vertex::V1(s) => Vertex::V1(self.apply(*s)),
            Vertex::V2(s) => Vertex::V2(self.apply(*s)),
            Vertex::V3(t) => Vertex::V3(self.apply_triangle(t)),
            other => panic!("{other} is not a vertex of the n3 model"),
        }
    }

    /// The induced map on n3 curves. Panics on curves of other models.
    pub fn apply_curve(&self, c: &Curve) -> Curve {
        match c {
            Curve::AlphaZero => Curve::AlphaZero,
            Curve::TwoSided(s) => Curve::TwoSided(self.apply(*s)),
            Curve::OneSided(s) => Curve::OneSided(self.apply(*s)),
            other => panic!("{other} is not a curve of the n3 model"),
        }
    }

    /// Parses a word over the letters `T` (shear), `S` (swap), `t` (inverse
    /// shear) and `s` (swap again; it is its own inverse). The word is read
    /// as a matrix product, so the rightmost letter acts on slopes first.
    pub fn from_word(word: &str) -> Result<SlopeMap, AutosError> {
        let mut m = SlopeMap::identity();
        for ch in word.chars() {
            let g = match ch {
                'T' => SlopeMap::shear(),
                't' => SlopeMap::shear().inverse(),
                'S' | 's' => SlopeMap::swap(),
                other => return Err(AutosError::BadLetter(other)),
            };
            m = m.compose(&g);
        }
        Ok(m)
    }

    /// All distinct maps expressible as words of length at most `max_len`
    /// over the shear, its inverse, and the swap, sorted canonically.
    pub fn words(max_len: usize) -> Vec<SlopeMap> {
        let gens = [
            SlopeMap::shear(),
            SlopeMap::shear().inverse(),
            SlopeMap::swap(),
        ];
        let mut seen: BTreeSet<SlopeMap> = BTreeSet::new();
        seen.insert(SlopeMap::identity());
        let mut queue: VecDeque<(SlopeMap, usize)> = VecDeque::new();
        queue.push_back((SlopeMap::identity(), 0));
        while let Some((m, depth)) = queue.pop_front() {
            if depth == max_len {
                continue;
            }
            for g in &gens {
                let next = m.compose(g);
                if seen.insert(next) {
                    queue.push_back((next, depth + 1));
                }
            }
        }
        seen.into_iter().collect()
    }
}

fn transport(m: &SlopeMap, rep: &SpanRep) -> SpanRep {
    match rep {
        SpanRep::FareyLine => SpanRep::FareyLine,
        SpanRep::FanAt(v) => SpanRep::FanAt(m.apply_vertex(v)),
        SpanRep::Edge(u, v) => {
            let (iu, iv) = (m.apply_vertex(u), m.apply_vertex(v));
            if iu <= iv {
                SpanRep::Edge(iu, iv)
            } else {
                SpanRep::Edge(iv, iu)
            }
        }
        SpanRep::Point(v) => SpanRep::Point(m.apply_vertex(v)),
        SpanRep::Empty => SpanRep::Empty,
    }
}

/// The curve correspondence induced by a slope map, evaluated at `alpha`
/// with a witnessing decomposition whose label contains it.
///
/// The remaining curves of the witness span a subgraph; the span is
/// transported by the induced automorphism, and the image curve is the one
/// marked at the image of the witness by that transported span. The result
/// does not depend on the witness, which tests check.
pub fn phi(m: &SlopeMap, alpha: &Curve, witness: &Vertex) -> Result<Curve, AutosError> {
    let label = Model::N3.label(witness);
    if !label.contains(alpha) {
        return Err(AutosError::NotInLabel(alpha.clone(), witness.clone()));
    }
    let rest: BTreeSet<Curve> = label.into_iter().filter(|c| c != alpha).collect();
    let rep = span_of_curves(Model::N3, &rest)?;
    let image = transport(m, &rep);
    Ok(v_marked(Model::N3, &image, &m.apply_vertex(witness))?)
}

/// A decomposition whose label contains `alpha`, chosen canonically; `None`
/// for curves outside the n3 model.
pub fn canonical_witness(alpha: &Curve) -> Option<Vertex> {
    match alpha {
        Curve::AlphaZero => Some(Vertex::V1(Slope::ZERO)),
        Curve::TwoSided(s) => Some(Vertex::V1(*s)),
        Curve::OneSided(s) => Some(Vertex::V2(*s)),
        _ => None,
    }
}

/// The number of neighbors reachable by a type-3 move: the count of
/// one-sided curves in the label, read off the graph alone.
pub fn one_sided_degree(model: Model, v: &Vertex) -> usize {
    model.type3_neighbors(v).len()
}

const SIGNATURE_WIDTH: usize = 12;

/// Recovers the signature (genus, boundary count) of the underlying
/// surface from the graph oracle alone.
///
/// A ball is grown around the base vertex. Over the vertices whose full
/// neighborhood the ball certifies, the maximal one-sided degree gives the
/// genus. The boundary count is the number of curves at a maximizing
/// vertex whose removal leaves a multicurve spanning the slope line, plus
/// three, minus the genus.
pub fn signature(model: Model, search_radius: usize) -> Result<(usize, usize), AutosError> {
    let ball = models::ball(model, &model.base_vertex(), search_radius, SIGNATURE_WIDTH);
    let mut best: Option<(usize, Vertex)> = None;
    for v in ball.vertices() {
        if ball.is_frontier(v) {
            continue;
        }
        let d = one_sided_degree(model, v);
        if best.as_ref().map_or(true, |(bd, _)| d > *bd) {
            best = Some((d, v.clone()));
        }
    }
    let (genus, maximizer) = best.ok_or(AutosError::Inconclusive)?;
    let label = model.label(&maximizer);
    let mut slope_line_count: usize = 0;
    for alpha in &label {
        let rest: BTreeSet<Curve> = label.iter().filter(|c| *c != alpha).cloned().collect();
        match span_of_curves(model, &rest) {
            Ok(SpanRep::FareyLine) => slope_line_count += 1,
            Ok(_) | Err(StructureError::WholeGraph) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let boundary = (slope_line_count + 3)
        .checked_sub(genus)
        .ok_or(AutosError::Inconclusive)?;
    Ok((genus, boundary))
}
