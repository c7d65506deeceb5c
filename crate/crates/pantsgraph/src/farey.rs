//! Exact model of the Farey graph on Q ∪ {∞}, its triangles, the dual
//! degree-3 tree, and null-homotopy of loops in the triangle flag complex.
//!
//! Slopes are normalized coprime pairs `p/q` with `q >= 0` and `∞ = 1/0`.
//! Two slopes are adjacent when `|p·s − q·r| = 1`. The canonical order used
//! everywhere for windows, peak selection and serialization is by
//! `(q, |p|, sign)` with positive numerators before negative ones; ∞ is the
//! minimum.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Errors from slope arithmetic and loop contraction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FareyError {
    #[error("0/0 is not a slope")]
    ZeroZero,
    #[error("slopes {0} and {1} are not adjacent")]
    NotAdjacent(Slope, Slope),
    #[error("root slope {0} has no parents")]
    RootSlope(Slope),
    #[error("triangle vertices {0}, {1}, {2} are not pairwise adjacent")]
    NotATriangle(Slope, Slope, Slope),
    #[error("loop is not closed (first and last entries differ)")]
    OpenLoop,
    #[error("empty loop")]
    EmptyLoop,
    #[error("entries {0} and {1} are consecutive but not adjacent")]
    BrokenLoop(Slope, Slope),
    #[error("illegal move at index {index}: {reason}")]
    BadMove { index: usize, reason: String },
}

/// A normalized slope `p/q`: coprime, `q >= 0`, and `∞ = 1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Slope {
    /// Normalizes `(p, q)` to the unique representative; rejects `(0, 0)`.
    pub fn new(p: i64, q: i64) -> Result<Slope, FareyError> {
        if p == 0 && q == 0 {
            return Err(FareyError::ZeroZero);
        }
        if q == 0 {
            return Ok(Slope { p: 1, q: 0 });
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    /// The point at infinity, `1/0`.
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    /// The slope `0/1`.
    pub const ZERO: Slope = Slope { p: 0, q: 1 };

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> i64 {
        self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }

    /// Canonical rank `(q, |p|, sign)`; the total order behind `Ord`.
    fn rank(&self) -> (i64, i64, u8) {
        (self.q, self.p.abs(), u8::from(self.p < 0))
    }

    /// The four slopes `{0/1, 1/0, 1/1, -1/1}` form the base cases of
    /// parent recursion.
    pub fn is_root(&self) -> bool {
        self.q == 0 || (self.q == 1 && self.p.abs() <= 1)
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = FareyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Slope::INFINITY);
        }
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| FareyError::ZeroZero);
        match s.split_once('/') {
            Some((a, b)) => Slope::new(parse(a)?, parse(b)?),
            None => Slope::new(parse(s)?, 1),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

fn det(a: Slope, b: Slope) -> i64 {
    let d = i128::from(a.p) * i128::from(b.q) - i128::from(a.q) * i128::from(b.p);
    i64::try_from(d).expect("determinant overflow")
}

/// True iff `|det(a, b)| = 1`.
pub fn is_adjacent(a: Slope, b: Slope) -> bool {
    det(a, b).abs() == 1
}

/// The mediant `(a.p + b.p) / (a.q + b.q)` of two adjacent slopes.
pub fn mediant(a: Slope, b: Slope) -> Result<Slope, FareyError> {
    if !is_adjacent(a, b) {
        return Err(FareyError::NotAdjacent(a, b));
    }
    Slope::new(a.p + b.p, a.q + b.q)
}

/// The two slopes adjacent to both `a` and `b`: the mediant and the
/// normalized difference. These are the third vertices of the two triangles
/// on the edge `ab`.
pub fn common_neighbors(a: Slope, b: Slope) -> Result<[Slope; 2], FareyError> {
    if !is_adjacent(a, b) {
        return Err(FareyError::NotAdjacent(a, b));
    }
    let m = Slope::new(a.p + b.p, a.q + b.q)?;
    let d = Slope::new(a.p - b.p, a.q - b.q)?;
    let mut out = [m, d];
    out.sort();
    Ok(out)
}

/// All slopes adjacent to both `s` and `t`, for any two distinct slopes.
///
/// Writing the neighbors of `s` as `a + k·s`, adjacency to `t` is the linear
/// condition `det(a, t) + k·det(s, t) = ±1`, so there are at most two
/// solutions; for adjacent `s`, `t` they are the mediant and the difference.
pub fn mutual_neighbors(s: Slope, t: Slope) -> Vec<Slope> {
    assert_ne!(s, t, "mutual neighbors of equal slopes");
    let a = base_neighbor(s);
    let d = det(s, t);
    let c0 = det(a, t);
    let mut out = Vec::new();
    for target in [1i64, -1] {
        let num = target - c0;
        if num % d == 0 {
            let k = num / d;
            out.push(Slope::new(a.p + k * s.p, a.q + k * s.q).expect("neighbor family"));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    // m >= 2 and gcd(a, m) = 1; returns the inverse in 1..m.
    let a = a.rem_euclid(m);
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m, a);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(m)
}

/// The two neighbors of `s` of strictly smaller canonical rank. They are
/// adjacent to each other, so `{s} ∪ parents(s)` is a triangle. Root slopes
/// (`0/1`, `1/0`, `±1/1`) are rejected. The pair is returned in canonical
/// order.
pub fn parents(s: Slope) -> Result<[Slope; 2], FareyError> {
    if s.is_root() {
        return Err(FareyError::RootSlope(s));
    }
    if s.q == 1 {
        // Integer slope p/1 with |p| >= 2: neighbors below it are ∞ and the
        // next integer toward zero.
        let step = s.p - s.p.signum();
        let mut out = [Slope::INFINITY, Slope::new(step, 1)?];
        out.sort();
        return Ok(out);
    }
    let y1 = mod_inverse(s.p, s.q);
    let x1 = (s.p * y1 - 1) / s.q;
    let y2 = s.q - y1;
    let x2 = s.p - x1;
    let mut out = [Slope::new(x1, y1)?, Slope::new(x2, y2)?];
    out.sort();
    Ok(out)
}

/// One neighbor of `s`, from the extended Euclidean algorithm.
fn base_neighbor(s: Slope) -> Slope {
    if s.q == 0 {
        return Slope { p: 0, q: 1 };
    }
    if s.q == 1 {
        return Slope::INFINITY;
    }
    let y = mod_inverse(s.p, s.q);
    let x = (s.p * y - 1) / s.q;
    Slope { p: x, q: y }
}

/// The first `count` neighbors of `s` in canonical order.
///
/// Every neighbor of `s` is `±a + k·s` for a fixed neighbor `a`, so the
/// enumeration walks `k` over a window around the denominator minimum and
/// sorts canonically.
pub fn neighbors(s: Slope, count: usize) -> Vec<Slope> {
    let a = base_neighbor(s);
    let k0 = if s.q == 0 {
        -a.p // for ∞ the family is (a.p + k)/1
    } else {
        // Minimize |a.q + k·s.q| over integers.
        -(a.q as f64 / s.q as f64).round() as i64
    };
    let r = count as i64 + 4;
    let mut out: Vec<Slope> = (k0 - r..=k0 + r)
        .map(|k| Slope::new(a.p + k * s.p, a.q + k * s.q).expect("neighbor family"))
        .collect();
    out.sort();
    out.dedup();
    out.truncate(count);
    out
}

/// An unordered triple of pairwise adjacent slopes, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FareyTriangle {
    slopes: [Slope; 3],
}

impl FareyTriangle {
    pub fn new(a: Slope, b: Slope, c: Slope) -> Result<FareyTriangle, FareyError> {
        if a == b || b == c || a == c || !is_adjacent(a, b) || !is_adjacent(b, c) || !is_adjacent(a, c)
        {
            return Err(FareyError::NotATriangle(a, b, c));
        }
        let mut slopes = [a, b, c];
        slopes.sort();
        Ok(FareyTriangle { slopes })
    }

    pub fn slopes(&self) -> [Slope; 3] {
        self.slopes
    }

    pub fn contains(&self, s: Slope) -> bool {
        self.slopes.contains(&s)
    }

    /// The slopes shared with another triangle.
    pub fn shared(&self, other: &FareyTriangle) -> Vec<Slope> {
        self.slopes.iter().copied().filter(|s| other.contains(*s)).collect()
    }

    /// Replaces the vertex opposite to the edge `{a, b}` by the other common
    /// neighbor of `a` and `b`.
    pub fn flip(&self, a: Slope, b: Slope) -> Result<FareyTriangle, FareyError> {
        if !self.contains(a) || !self.contains(b) || a == b {
            return Err(FareyError::NotATriangle(a, b, b));
        }
        let c = *self
            .slopes
            .iter()
            .find(|s| **s != a && **s != b)
            .expect("third vertex");
        let cn = common_neighbors(a, b)?;
        let third = if cn[0] == c { cn[1] } else { cn[0] };
        FareyTriangle::new(a, b, third)
    }
}

impl fmt::Display for FareyTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.slopes[0], self.slopes[1], self.slopes[2])
    }
}

impl FromStr for FareyTriangle {
    type Err = FareyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(FareyError::ZeroZero);
        }
        let a: Slope = parts[0].parse()?;
        let b: Slope = parts[1].parse()?;
        let c: Slope = parts[2].parse()?;
        FareyTriangle::new(a, b, c)
    }
}

/// The three triangles sharing an edge with `t`: its neighbors in the dual
/// degree-3 tree.
pub fn tree_neighbors(t: &FareyTriangle) -> [FareyTriangle; 3] {
    let [a, b, c] = t.slopes();
    [
        t.flip(a, b).expect("flip"),
        t.flip(a, c).expect("flip"),
        t.flip(b, c).expect("flip"),
    ]
}

/// The first `count` triangles containing `s`, in canonical order.
///
/// The triangles on `s` are `{s, c_k, c_{k+1}}` for consecutive members of
/// the neighbor family of `s`.
pub fn triangles_on(s: Slope, count: usize) -> Vec<FareyTriangle> {
    let a = base_neighbor(s);
    let k0 = if s.q == 0 {
        -a.p
    } else {
        -(a.q as f64 / s.q as f64).round() as i64
    };
    let r = count as i64 + 4;
    let fam: Vec<Slope> = (k0 - r..=k0 + r + 1)
        .map(|k| Slope::new(a.p + k * s.p, a.q + k * s.q).expect("neighbor family"))
        .collect();
    let mut out: Vec<FareyTriangle> = fam
        .windows(2)
        .map(|w| FareyTriangle::new(s, w[0], w[1]).expect("fan triangle"))
        .collect();
    out.sort();
    out.dedup();
    out.truncate(count);
    out
}

/// One rewriting step on a closed Farey loop.
///
/// Positions index the current cyclic vertex list at the time the move is
/// applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FareyMove {
    /// Removes `v` at `position` together with one of the two equal
    /// neighbors flanking it (`a–v–a → a`).
    Backtrack { position: usize },
    /// Replaces `a–v–b` (with `v` at `position`) by the edge `a–b` across
    /// the given triangle.
    Triangle { position: usize, triangle: FareyTriangle },
}

fn check_closed(l: &[Slope]) -> Result<Vec<Slope>, FareyError> {
    if l.is_empty() {
        return Err(FareyError::EmptyLoop);
    }
    if l.first() != l.last() {
        return Err(FareyError::OpenLoop);
    }
    let cyc: Vec<Slope> = l[..l.len() - 1].to_vec();
    let n = cyc.len();
    if n >= 2 {
        for i in 0..n {
            let (u, v) = (cyc[i], cyc[(i + 1) % n]);
            if !is_adjacent(u, v) {
                return Err(FareyError::BrokenLoop(u, v));
            }
        }
    }
    if n == 0 {
        // Input was the 1-element list [x]; treat as the constant loop at x.
        return Ok(vec![l[0]]);
    }
    Ok(cyc)
}

fn apply_farey_move(seq: &mut Vec<Slope>, mv: &FareyMove, index: usize) -> Result<(), FareyError> {
    let bad = |reason: &str| FareyError::BadMove {
        index,
        reason: reason.to_string(),
    };
    let n = seq.len();
    match mv {
        FareyMove::Backtrack { position } => {
            let i = *position;
            if n < 2 || i >= n {
                return Err(bad("backtrack position out of range"));
            }
            let prev = seq[(i + n - 1) % n];
            let next = seq[(i + 1) % n];
            if prev != next {
                return Err(bad("backtrack neighbors differ"));
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
        FareyMove::Triangle { position, triangle } => {
            let i = *position;
            if n < 3 || i >= n {
                return Err(bad("triangle position out of range"));
            }
            let v = seq[i];
            let a = seq[(i + n - 1) % n];
            let b = seq[(i + 1) % n];
            let t = FareyTriangle::new(a, v, b).map_err(|_| bad("vertices do not form a triangle"))?;
            if t != *triangle {
                return Err(bad("triangle does not match loop segment"));
            }
            seq.remove(i);
        }
    }
    Ok(())
}

/// Replays `moves` against the closed loop `l`, validating every step, and
/// returns the final vertex. Errors identify the first illegal move.
pub fn replay_farey(l: &[Slope], moves: &[FareyMove]) -> Result<Slope, FareyError> {
    let mut seq = check_closed(l)?;
    for (index, mv) in moves.iter().enumerate() {
        apply_farey_move(&mut seq, mv, index)?;
    }
    if seq.len() != 1 {
        return Err(FareyError::BadMove {
            index: moves.len(),
            reason: format!("loop not reduced to a point (length {})", seq.len()),
        });
    }
    Ok(seq[0])
}

/// Contracts a closed Farey loop to a point by peak reduction and returns
/// the move sequence.
///
/// Strategy: remove backtracks first; otherwise the vertex of maximal
/// canonical rank has its two smaller-rank graph neighbors on both sides,
/// and those two are mutually adjacent, so a triangle move applies. Loop
/// length strictly decreases at every move.
pub fn contract_farey_loop(l: &[Slope]) -> Result<Vec<FareyMove>, FareyError> {
    let mut seq = check_closed(l)?;
    let mut moves = Vec::new();
    while seq.len() > 1 {
        let n = seq.len();
        if n == 2 {
            let mv = FareyMove::Backtrack { position: 1 };
            apply_farey_move(&mut seq, &mv, moves.len())?;
            moves.push(mv);
            continue;
        }
        if let Some(i) = (0..n).find(|&i| seq[(i + n - 1) % n] == seq[(i + 1) % n]) {
            let mv = FareyMove::Backtrack { position: i };
            apply_farey_move(&mut seq, &mv, moves.len())?;
            moves.push(mv);
            continue;
        }
        let peak = (0..n).max_by_key(|&i| (seq[i], std::cmp::Reverse(i))).expect("nonempty");
        let a = seq[(peak + n - 1) % n];
        let v = seq[peak];
        let b = seq[(peak + 1) % n];
        let triangle = FareyTriangle::new(a, v, b)?;
        let mv = FareyMove::Triangle { position: peak, triangle };
        apply_farey_move(&mut seq, &mv, moves.len())?;
        moves.push(mv);
    }
    Ok(moves)
}

/// Seeded random closed loop based at 0/1: an out-walk through neighbor
/// windows, bounded in denominator, followed by the parent-chain return.
///
/// The result starts and ends at 0/1 and every consecutive pair is adjacent,
/// so it is always a valid input for [`contract_farey_loop`].
pub fn random_farey_loop(seed: u64, walk_len: usize, max_denom: i64) -> Vec<Slope> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let start = Slope::ZERO;
    let mut cur = start;
    let mut out = vec![start];
    for _ in 0..walk_len {
        let opts: Vec<Slope> =
            neighbors(cur, 8).into_iter().filter(|x| x.denom() <= max_denom).collect();
        if opts.is_empty() {
            break;
        }
        cur = opts[rng.gen_range(0..opts.len())];
        out.push(cur);
    }
    while !cur.is_root() {
        cur = parents(cur).unwrap()[0];
        out.push(cur);
    }
    if cur != start {
        out.push(start);
    }
    out
}
