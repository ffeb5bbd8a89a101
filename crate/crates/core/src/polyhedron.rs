//! Geometry of efficiently simulable diagonal triples.
//!
//! For a canonical source triple `h` (`h₁ ≥ h₂ ≥ h₃ ≥ 0`) the set of triples
//! reachable as convex mixtures of `R·diag(h)·S` with `R, S ∈ SO(3)` is a
//! polyhedron with 24 (possibly coincident) vertices: permutations of `h`
//! carrying an even number of sign flips. It is cut out by 14 half-spaces
//! in three families:
//!
//! * sum faces   `n·x ≤ Σh` for `n ∈ {(1,1,1), (−1,−1,1), (1,−1,−1), (−1,1,−1)}`
//! * skew faces  `−n·x ≤ Σh − 2h₃` for the same four `n`
//! * cap faces   `±x_k ≤ h₁`
//!
//! On s-ordered vectors the three families collapse to the three
//! inequalities of the s-majorization order, which is how the optimal
//! simulation factor is computed.

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::numerics::{Real3, Vec3};

/// Slack granted to every inequality test.
pub const SLACK: f64 = 1e-9;

/// `out[k] = signs[k] · input[perm[k]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedPermutation {
    pub perm: [usize; 3],
    pub signs: [f64; 3],
}

impl SignedPermutation {
    pub fn apply(&self, x: &Vec3) -> Vec3 {
        Vec3::from_fn(|k, _| self.signs[k] * x[self.perm[k]])
    }

    pub fn matrix(&self) -> Real3 {
        Real3::from_fn(|k, l| if self.perm[k] == l { self.signs[k] } else { 0.0 })
    }
}

/// A vector rearranged into s-order together with the map that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SOrderedTriple {
    /// `v₁ ≥ v₂ ≥ |v₃|`, `v₃` carrying the sign of the original product.
    pub v: Vec3,
    pub transform: SignedPermutation,
}

/// Absolute values in descending order, with the sign of the product of the
/// original entries placed on the last one. A zero product leaves the last
/// entry at `+0`.
pub fn s_order(x: &Vec3) -> SOrderedTriple {
    let mut perm = [0usize, 1, 2];
    // Stable sort keeps ties in input order, which keeps the transform
    // deterministic.
    perm.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()));
    let product_sign = if x.iter().any(|&e| e == 0.0) {
        1.0
    } else {
        x.iter().map(|e| e.signum()).product::<f64>()
    };
    let mut signs = [1.0; 3];
    for k in 0..2 {
        signs[k] = if x[perm[k]] < 0.0 { -1.0 } else { 1.0 };
    }
    signs[2] = if x[perm[2]] == 0.0 {
        // Any sign reproduces zero; choose the one keeping the flip count even.
        signs[0] * signs[1]
    } else {
        product_sign * x[perm[2]].signum()
    };
    let transform = SignedPermutation { perm, signs };
    SOrderedTriple {
        v: transform.apply(x),
        transform,
    }
}

/// `hp ≺_s h` with the default slack.
pub fn s_majorizes(hp: &Vec3, h: &Vec3) -> bool {
    s_majorizes_with(hp, h, SLACK)
}

pub fn s_majorizes_with(hp: &Vec3, h: &Vec3, slack: f64) -> bool {
    let u = s_order(hp).v;
    let v = s_order(h).v;
    u[0] <= v[0] + slack
        && u[0] + u[1] - u[2] <= v[0] + v[1] - v[2] + slack
        && u[0] + u[1] + u[2] <= v[0] + v[1] + v[2] + slack
}

/// Names one of the 24 vertices `π_i·diag(h)·π_iᵀ·s_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexLabel {
    pub i: u8,
    pub j: u8,
}

/// The six signed permutation matrices `π_0 … π_5`, all in SO(3).
pub fn pi_matrix(i: u8) -> Real3 {
    match i {
        0 => Real3::identity(),
        1 => Real3::new(-1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0),
        2 => Real3::new(0.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0),
        3 => Real3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0),
        4 => Real3::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0),
        5 => Real3::new(0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0),
        _ => panic!("permutation index {i} out of range 0..=5"),
    }
}

/// `s_0 = I` and the three diagonal sign matrices with two minus signs.
pub fn s_matrix(j: u8) -> Real3 {
    let d = match j {
        0 => Vec3::new(1.0, 1.0, 1.0),
        1 => Vec3::new(1.0, -1.0, -1.0),
        2 => Vec3::new(-1.0, 1.0, -1.0),
        3 => Vec3::new(-1.0, -1.0, 1.0),
        _ => panic!("sign index {j} out of range 0..=3"),
    };
    Real3::from_diagonal(&d)
}

impl VertexLabel {
    pub fn new(i: u8, j: u8) -> Self {
        assert!(i < 6 && j < 4, "vertex label ({i}, {j}) out of range");
        Self { i, j }
    }

    /// All 24 labels, `i` major.
    pub fn all() -> impl Iterator<Item = VertexLabel> {
        (0..6u8).flat_map(|i| (0..4u8).map(move |j| VertexLabel { i, j }))
    }

    /// Left factor `π_i` of the realizing product `π_i · D · (π_iᵀ s_j)`.
    pub fn left(&self) -> Real3 {
        pi_matrix(self.i)
    }

    /// Right factor `π_iᵀ s_j`.
    pub fn right(&self) -> Real3 {
        pi_matrix(self.i).transpose() * s_matrix(self.j)
    }

    /// Diagonal of `π_i·diag(h)·π_iᵀ·s_j`.
    pub fn apply(&self, h: &Vec3) -> Vec3 {
        (self.left() * Real3::from_diagonal(h) * self.right()).diagonal()
    }
}

/// The 24 labelled vertices of the polyhedron of `h` (duplicates kept).
pub fn vertices(h: &Vec3) -> Vec<(VertexLabel, Vec3)> {
    VertexLabel::all().map(|l| (l, l.apply(h))).collect()
}

/// Which family of faces a constraint belongs to (1 = sum, 2 = skew, 3 = cap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundTerm {
    Sum,
    Skew,
    Cap,
}

impl BoundTerm {
    pub fn case(self) -> u8 {
        match self {
            BoundTerm::Sum => 1,
            BoundTerm::Skew => 2,
            BoundTerm::Cap => 3,
        }
    }

    /// Preference when several families bind at once; the skew family is the
    /// fallback, as in the case analysis of the optimum.
    fn priority(self) -> u8 {
        match self {
            BoundTerm::Sum => 0,
            BoundTerm::Cap => 1,
            BoundTerm::Skew => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundTerm::Sum => "sum",
            BoundTerm::Skew => "skew",
            BoundTerm::Cap => "cap",
        }
    }
}

/// Half-space `normal · x ≤ bound`.
#[derive(Debug, Clone, Copy)]
pub struct Constraint {
    pub normal: Vec3,
    pub bound: f64,
    pub term: BoundTerm,
}

impl Constraint {
    pub fn slack(&self, x: &Vec3) -> f64 {
        self.bound - self.normal.dot(x)
    }

    pub fn describe(&self) -> String {
        let n = self.normal;
        format!(
            "{} face ({:+}x {:+}y {:+}z <= {:.6})",
            self.term.name(),
            n[0],
            n[1],
            n[2],
            self.bound
        )
    }
}

const SUM_NORMALS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [-1.0, -1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
];

/// The polyhedron of a canonical triple `h₁ ≥ h₂ ≥ h₃ ≥ 0` (any scale).
#[derive(Debug, Clone)]
pub struct Polyhedron {
    h: Vec3,
    constraints: Vec<Constraint>,
}

fn is_canonical(h: &Vec3) -> bool {
    h[0] >= h[1] - 1e-12 && h[1] >= h[2] - 1e-12 && h[2] >= -1e-12
}

impl Polyhedron {
    pub fn new(h: Vec3) -> Result<Self> {
        if !is_canonical(&h) {
            return Err(contract(format!(
                "polyhedron needs h1 >= h2 >= h3 >= 0, got ({}, {}, {})",
                h[0], h[1], h[2]
            )));
        }
        let total = h.sum();
        let inner = total - 2.0 * h[2];
        let mut constraints = Vec::with_capacity(14);
        for n in SUM_NORMALS {
            constraints.push(Constraint {
                normal: Vec3::from(n),
                bound: total,
                term: BoundTerm::Sum,
            });
        }
        for n in SUM_NORMALS {
            constraints.push(Constraint {
                normal: -Vec3::from(n),
                bound: inner,
                term: BoundTerm::Skew,
            });
        }
        for k in 0..3 {
            for sign in [1.0, -1.0] {
                let mut n = Vec3::zeros();
                n[k] = sign;
                constraints.push(Constraint {
                    normal: n,
                    bound: h[0],
                    term: BoundTerm::Cap,
                });
            }
        }
        Ok(Self { h, constraints })
    }

    pub fn h(&self) -> Vec3 {
        self.h
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn scale(&self) -> f64 {
        self.h.sum().max(f64::MIN_POSITIVE)
    }

    /// All 14 inequalities within `slack` (relative to `Σh`).
    pub fn contains(&self, x: &Vec3, slack: f64) -> bool {
        let tol = slack * self.scale();
        self.constraints.iter().all(|c| c.slack(x) >= -tol)
    }

    pub fn vertices(&self) -> Vec<(VertexLabel, Vec3)> {
        vertices(&self.h)
    }

    /// Vertices with exact duplicates (within roundoff) removed, keeping the
    /// first label in enumeration order.
    pub fn distinct_vertices(&self) -> Vec<(VertexLabel, Vec3)> {
        let tol = 1e-12 * self.scale();
        let mut out: Vec<(VertexLabel, Vec3)> = Vec::new();
        for (l, v) in self.vertices() {
            if !out.iter().any(|(_, w)| (w - v).abs().max() <= tol) {
                out.push((l, v));
            }
        }
        out
    }
}

/// Membership for a normalized canonical `h` (`h₃ ≥ 0`, `Σh = 1`).
pub fn membership(x: &Vec3, h: &Vec3) -> Result<bool> {
    if !is_canonical(h) || (h.sum() - 1.0).abs() > 1e-9 {
        return Err(contract(format!(
            "membership needs descending h with h3 >= 0 and sum 1, got ({}, {}, {})",
            h[0], h[1], h[2]
        )));
    }
    Ok(Polyhedron::new(*h)?.contains(x, SLACK))
}

/// Source and target brought into the frame where the source has `h₃ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPair {
    /// s-ordered source with its last sign made nonnegative.
    pub source: Vec3,
    /// s-ordered target, last sign flipped along with the source's.
    pub target: Vec3,
    /// Whether the last-entry sign flip was applied.
    pub flipped: bool,
}

pub fn canonicalize(hp: &Vec3, h: &Vec3) -> CanonicalPair {
    let mut source = s_order(h).v;
    let mut target = s_order(hp).v;
    let flipped = source[2] < 0.0;
    if flipped {
        source[2] = -source[2];
        target[2] = -target[2];
    }
    CanonicalPair {
        source,
        target,
        flipped,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalResult {
    /// Largest `s` with `s·h' ≺_s h`.
    pub s: f64,
    /// Face family hit by the ray `λ·h'` (1 = sum, 2 = skew, 3 = cap).
    pub face_case: u8,
    /// Every family whose bound is attained at `s`.
    pub tight_terms: Vec<BoundTerm>,
    /// Ratios of the sum, skew and cap bounds in the canonical frame.
    pub ratios: [f64; 3],
}

const ZERO_TRIPLE: f64 = 1e-14;

/// Optimal simulation factor `s_{H'|H}` for normal-form (or any) triples.
///
/// Computed in the canonical frame as the minimum of the three bound ratios
/// `Σv/Σu`, `(v₁+v₂−v₃)/(u₁+u₂−u₃)`, `v₁/u₁`.
pub fn optimal_factor(hp: &Vec3, h: &Vec3) -> Result<OptimalResult> {
    if hp.abs().max() <= ZERO_TRIPLE || h.abs().max() <= ZERO_TRIPLE {
        return Err(Error::Degenerate(
            "optimal_factor needs two nonzero triples".into(),
        ));
    }
    let pair = canonicalize(hp, h);
    let (u, v) = (pair.target, pair.source);
    let ratios = [
        v.sum() / u.sum(),
        (v[0] + v[1] - v[2]) / (u[0] + u[1] - u[2]),
        v[0] / u[0],
    ];
    let s = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let terms = [BoundTerm::Sum, BoundTerm::Skew, BoundTerm::Cap];
    let tight_terms: Vec<BoundTerm> = terms
        .iter()
        .zip(ratios)
        .filter(|(_, r)| *r <= s * (1.0 + 1e-10))
        .map(|(t, _)| *t)
        .collect();
    let face_case = tight_terms
        .iter()
        .min_by_key(|t| t.priority())
        .expect("the minimum is always attained")
        .case();
    Ok(OptimalResult {
        s,
        face_case,
        tight_terms,
        ratios,
    })
}

/// Convex combination of at most three vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDecomposition {
    /// `(weight, label)`, weights in `(0, 1]` summing to one, sorted by
    /// descending weight then label.
    pub terms: Vec<(f64, VertexLabel)>,
    /// Face family the decomposition was taken on.
    pub face_case: u8,
}

impl ConvexDecomposition {
    pub fn reconstruct(&self, h: &Vec3) -> Vec3 {
        self.terms
            .iter()
            .fold(Vec3::zeros(), |acc, (p, l)| acc + l.apply(h) * *p)
    }

    pub fn labels(&self) -> Vec<VertexLabel> {
        self.terms.iter().map(|(_, l)| *l).collect()
    }
}

const BOUNDARY_TOL: f64 = 1e-8;

/// Writes a boundary point of the polyhedron of canonical `h` as a convex
/// combination of at most three vertices.
///
/// Every tight face is tried; the face giving the fewest terms wins, ties
/// going to the sum family, then cap, then skew.
pub fn decompose_on_face(x: &Vec3, h: &Vec3) -> Result<ConvexDecomposition> {
    let poly = Polyhedron::new(*h)?;
    let tol = BOUNDARY_TOL * poly.scale();
    let slacks: Vec<f64> = poly.constraints().iter().map(|c| c.slack(x)).collect();
    if let Some((k, s)) = slacks
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < -tol)
        .min_by(|a, b| a.1.total_cmp(b.1))
    {
        return Err(Error::Geometry(format!(
            "point lies outside the polyhedron: violates {} by {:.3e}",
            poly.constraints()[k].describe(),
            -s
        )));
    }
    let tight: Vec<&Constraint> = poly
        .constraints()
        .iter()
        .zip(&slacks)
        .filter(|(_, s)| s.abs() <= tol)
        .map(|(c, _)| c)
        .collect();
    if tight.is_empty() {
        let (k, s) = slacks
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("fourteen constraints");
        return Err(Error::Geometry(format!(
            "point is interior: nearest is the {} with slack {:.3e}",
            poly.constraints()[k].describe(),
            s
        )));
    }
    let verts = poly.distinct_vertices();
    let mut best: Option<(Vec<(f64, VertexLabel)>, BoundTerm)> = None;
    for c in tight {
        let on_face: Vec<(VertexLabel, Vec3)> = verts
            .iter()
            .filter(|(_, v)| (c.slack(v)).abs() <= 1e-9 * poly.scale())
            .copied()
            .collect();
        let Some(terms) = fan_decompose(x, &on_face, &c.normal, poly.scale()) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((b, t)) => {
                terms.len() < b.len() || (terms.len() == b.len() && c.term.priority() < t.priority())
            }
        };
        if better {
            best = Some((terms, c.term));
        }
    }
    let (mut terms, term) = best.ok_or_else(|| {
        Error::Geometry("no tight face admits a convex decomposition of the point".into())
    })?;
    terms.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(ConvexDecomposition {
        terms,
        face_case: term.case(),
    })
}

/// Fan triangulation of a planar convex face from its lexicographically
/// first vertex; returns the barycentric terms of the containing triangle.
fn fan_decompose(
    x: &Vec3,
    face: &[(VertexLabel, Vec3)],
    normal: &Vec3,
    scale: f64,
) -> Option<Vec<(f64, VertexLabel)>> {
    let check = |terms: Vec<(f64, VertexLabel)>| -> Option<Vec<(f64, VertexLabel)>> {
        let rebuilt = terms
            .iter()
            .fold(Vec3::zeros(), |acc, (p, l)| acc + face_point(face, *l) * *p);
        ((rebuilt - x).abs().max() <= 1e-8 * scale).then_some(terms)
    };
    match face.len() {
        0 => None,
        1 => check(vec![(1.0, face[0].0)]),
        _ => {
            let n = normal.normalize();
            let seed = if n[0].abs() < 0.9 { Vec3::x() } else { Vec3::y() };
            let e1 = (seed - n * n.dot(&seed)).normalize();
            let e2 = n.cross(&e1);
            let project = |p: &Vec3| (p.dot(&e1), p.dot(&e2));
            let pts: Vec<(f64, f64)> = face.iter().map(|(_, p)| project(p)).collect();
            let (cx, cy) = pts
                .iter()
                .fold((0.0, 0.0), |(a, b), (px, py)| (a + px, b + py));
            let (cx, cy) = (cx / pts.len() as f64, cy / pts.len() as f64);
            let spread = pts
                .iter()
                .map(|(px, py)| (px - cx).hypot(py - cy))
                .fold(0.0, f64::max);
            let collinear = face.len() == 2 || polygon_area(&pts) <= 1e-12 * spread * spread.max(1e-300);
            if collinear {
                return segment_decompose(x, face, scale);
            }
            let mut order: Vec<usize> = (0..face.len()).collect();
            order.sort_by(|&a, &b| {
                let ta = (pts[a].1 - cy).atan2(pts[a].0 - cx);
                let tb = (pts[b].1 - cy).atan2(pts[b].0 - cx);
                ta.total_cmp(&tb)
            });
            let anchor_pos = (0..order.len())
                .min_by(|&a, &b| lex_cmp(&face[order[a]].1, &face[order[b]].1))
                .expect("non-empty face");
            order.rotate_left(anchor_pos);
            let (px, py) = project(x);
            let a = order[0];
            for k in 1..order.len() - 1 {
                let (b, c) = (order[k], order[k + 1]);
                let Some(w) = barycentric((px, py), pts[a], pts[b], pts[c]) else {
                    continue;
                };
                if w.iter().all(|&wi| wi >= -1e-10) {
                    let clamped: Vec<f64> = w.iter().map(|wi| wi.max(0.0)).collect();
                    let total: f64 = clamped.iter().sum();
                    let terms: Vec<(f64, VertexLabel)> = [a, b, c]
                        .iter()
                        .zip(clamped)
                        .map(|(&idx, wi)| (wi / total, face[idx].0))
                        .filter(|(wi, _)| *wi > 1e-12)
                        .collect();
                    let terms = renormalize(terms);
                    if let Some(t) = check(terms) {
                        return Some(t);
                    }
                }
            }
            None
        }
    }
}

fn face_point(face: &[(VertexLabel, Vec3)], l: VertexLabel) -> Vec3 {
    face.iter().find(|(m, _)| *m == l).map(|(_, p)| *p).expect("label on face")
}

fn renormalize(terms: Vec<(f64, VertexLabel)>) -> Vec<(f64, VertexLabel)> {
    let total: f64 = terms.iter().map(|(p, _)| p).sum();
    terms.into_iter().map(|(p, l)| (p / total, l)).collect()
}

fn lex_cmp(a: &Vec3, b: &Vec3) -> std::cmp::Ordering {
    a[0].total_cmp(&b[0])
        .then(a[1].total_cmp(&b[1]))
        .then(a[2].total_cmp(&b[2]))
}

fn polygon_area(pts: &[(f64, f64)]) -> f64 {
    // Area of the triangle spanned by the extreme points is enough to detect
    // collinearity.
    let mut best = 0.0_f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let (a, b, c) = (pts[i], pts[j], pts[k]);
                let area = ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1)).abs() / 2.0;
                best = best.max(area);
            }
        }
    }
    best
}

fn barycentric(p: (f64, f64), a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<[f64; 3]> {
    let det = (b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1);
    if det.abs() <= 1e-300 {
        return None;
    }
    let wb = ((p.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (p.1 - a.1)) / det;
    let wc = ((b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1)) / det;
    Some([1.0 - wb - wc, wb, wc])
}

/// Decomposition on a face whose vertices are collinear.
fn segment_decompose(
    x: &Vec3,
    face: &[(VertexLabel, Vec3)],
    scale: f64,
) -> Option<Vec<(f64, VertexLabel)>> {
    // Extreme points along the segment direction.
    let (mut lo, mut hi) = (0usize, 0usize);
    let mut dist = 0.0;
    for i in 0..face.len() {
        for j in i + 1..face.len() {
            let d = (face[i].1 - face[j].1).norm();
            if d > dist {
                dist = d;
                (lo, hi) = if lex_cmp(&face[i].1, &face[j].1).is_le() { (i, j) } else { (j, i) };
            }
        }
    }
    if dist <= 1e-15 * scale {
        return ((face[0].1 - x).abs().max() <= 1e-8 * scale).then(|| vec![(1.0, face[0].0)]);
    }
    let (a, b) = (face[lo].1, face[hi].1);
    let t = ((x - a).dot(&(b - a)) / (b - a).norm_squared()).clamp(0.0, 1.0);
    let terms: Vec<(f64, VertexLabel)> = [(1.0 - t, face[lo].0), (t, face[hi].0)]
        .into_iter()
        .filter(|(w, _)| *w > 1e-12)
        .collect();
    let rebuilt = a * (1.0 - t) + b * t;
    ((rebuilt - x).abs().max() <= 1e-8 * scale).then(|| renormalize(terms))
}

/// Optimal factor together with an explicit decomposition of the optimal
/// point, all in the canonical frame of `canonicalize(hp, h)`.
#[derive(Debug, Clone)]
pub struct OptimalPoint {
    pub result: OptimalResult,
    pub pair: CanonicalPair,
    /// `s · pair.target`, a boundary point of the source polyhedron.
    pub point: Vec3,
    pub decomposition: ConvexDecomposition,
}

pub fn optimal_point(hp: &Vec3, h: &Vec3) -> Result<OptimalPoint> {
    let result = optimal_factor(hp, h)?;
    let pair = canonicalize(hp, h);
    let point = pair.target * result.s;
    let decomposition = decompose_on_face(&point, &pair.source)?;
    Ok(OptimalPoint {
        result,
        pair,
        point,
        decomposition,
    })
}
