//! Combinatorial certification of triangulations and integral homology.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dsu::{SignedUnionFind, UnionFind};
use crate::minkus::CellComplex;
use crate::snf::{smith_normal_form, IntegerMatrix};
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexLink {
    pub chi: i64,
    pub connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub tet_count: usize,
    pub chi: i64,
    pub orientable: bool,
    pub vertex_links: Vec<VertexLink>,
    pub closed_manifold: bool,
    pub all_faces_glued: bool,
    pub involutive: bool,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
}

const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_slot(a: usize, b: usize) -> (usize, i8) {
    let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
    let slot = EDGES.iter().position(|&e| e == (lo, hi)).expect("distinct vertices");
    (slot, s)
}

/// Vertices of face `f` in increasing order.
fn face_vertices(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut i = 0;
    for v in 0..4 {
        if v != f {
            out[i] = v;
            i += 1;
        }
    }
    out
}

/// Sign of the permutation sorting three distinct values.
fn order_sign(x: [usize; 3]) -> i8 {
    let mut s = 1;
    for i in 0..3 {
        for j in i + 1..3 {
            if x[i] > x[j] {
                s = -s;
            }
        }
    }
    s
}

struct Classes {
    vertex: Vec<usize>,
    vertex_count: usize,
    edge: Vec<(usize, i8)>,
    edge_count: usize,
    face: Vec<(usize, i8)>,
    face_count: usize,
}

fn classes(t: &Triangulation) -> Classes {
    let n = t.tet_count();
    let mut vuf = UnionFind::new(4 * n);
    let mut euf = SignedUnionFind::new(6 * n);
    let mut fuf = SignedUnionFind::new(4 * n);
    for tet in 0..n {
        for f in 0..4 {
            let Some(g) = t.gluing(tet, f) else { continue };
            let fv = face_vertices(f);
            for &v in &fv {
                vuf.union(4 * tet + v, 4 * g.tet + g.perm.apply(v));
            }
            for (i, &a) in fv.iter().enumerate() {
                for &b in &fv[i + 1..] {
                    let (s1, _) = edge_slot(a, b);
                    let (s2, sg) = edge_slot(g.perm.apply(a), g.perm.apply(b));
                    euf.union(6 * tet + s1, 6 * g.tet + s2, sg);
                }
            }
            let image = fv.map(|v| g.perm.apply(v));
            fuf.union(4 * tet + f, 4 * g.tet + g.face, order_sign(image));
        }
    }
    let (vertex, vertex_count) = vuf.classes();
    let (edge, edge_count) = euf.classes();
    let (face, face_count) = fuf.classes();
    Classes {
        vertex,
        vertex_count,
        edge,
        edge_count,
        face,
        face_count,
    }
}

fn orientable(t: &Triangulation) -> bool {
    let n = t.tet_count();
    let mut orient = vec![0i8; n];
    for start in 0..n {
        if orient[start] != 0 {
            continue;
        }
        orient[start] = 1;
        let mut stack = vec![start];
        while let Some(tet) = stack.pop() {
            for f in 0..4 {
                let Some(g) = t.gluing(tet, f) else { continue };
                // Gluings must reverse the induced orientations.
                let want = -orient[tet] * g.perm.sign() as i8;
                if orient[g.tet] == 0 {
                    orient[g.tet] = want;
                    stack.push(g.tet);
                } else if orient[g.tet] != want {
                    return false;
                }
            }
        }
    }
    true
}

fn involutive(t: &Triangulation) -> bool {
    (0..t.tet_count()).all(|tet| {
        (0..4).all(|f| match t.gluing(tet, f) {
            None => true,
            Some(g) => {
                g.perm.apply(f) == g.face
                    && t.gluing(g.tet, g.face).is_some_and(|back| {
                        back.tet == tet && back.face == f && back.perm == g.perm.inverse()
                    })
            }
        })
    })
}

fn vertex_links(t: &Triangulation, cls: &Classes) -> Vec<VertexLink> {
    let n = t.tet_count();
    // Link vertices are edge ends (tet, v, w), link edges are (tet, v, f)
    // with f != v, link triangles are corners (tet, v).
    let mut ends = UnionFind::new(16 * n);
    let mut sides = UnionFind::new(16 * n);
    let mut corners = UnionFind::new(4 * n);
    for tet in 0..n {
        for f in 0..4 {
            let Some(g) = t.gluing(tet, f) else { continue };
            for v in (0..4).filter(|&v| v != f) {
                let pv = g.perm.apply(v);
                corners.union(4 * tet + v, 4 * g.tet + pv);
                sides.union(16 * tet + 4 * v + f, 16 * g.tet + 4 * pv + g.face);
                for w in (0..4).filter(|&w| w != f && w != v) {
                    ends.union(16 * tet + 4 * v + w, 16 * g.tet + 4 * pv + g.perm.apply(w));
                }
            }
        }
    }
    let mut chi = vec![0i64; cls.vertex_count];
    let mut seen_end = vec![false; 16 * n];
    let mut seen_side = vec![false; 16 * n];
    let mut roots: Vec<Option<usize>> = vec![None; cls.vertex_count];
    let mut connected = vec![true; cls.vertex_count];
    for tet in 0..n {
        for v in 0..4 {
            let vc = cls.vertex[4 * tet + v];
            chi[vc] += 1;
            let r = corners.find(4 * tet + v);
            match roots[vc] {
                None => roots[vc] = Some(r),
                Some(r0) if r0 != r => connected[vc] = false,
                _ => {}
            }
            for w in (0..4).filter(|&w| w != v) {
                let e = ends.find(16 * tet + 4 * v + w);
                if !seen_end[e] {
                    seen_end[e] = true;
                    chi[vc] += 1;
                }
                let s = sides.find(16 * tet + 4 * v + w);
                if !seen_side[s] {
                    seen_side[s] = true;
                    chi[vc] -= 1;
                }
            }
        }
    }
    chi.into_iter()
        .zip(connected)
        .map(|(chi, connected)| VertexLink { chi, connected })
        .collect()
}

pub fn validate_triangulation(t: &Triangulation) -> ValidationReport {
    let n = t.tet_count();
    let cls = classes(t);
    let all_faces_glued = (0..n).all(|tet| (0..4).all(|f| t.gluing(tet, f).is_some()));
    let involutive = involutive(t);
    let orientable = orientable(t);
    let chi = cls.vertex_count as i64 - cls.edge_count as i64 + cls.face_count as i64 - n as i64;
    let vertex_links = vertex_links(t, &cls);
    let closed_manifold = n > 0
        && all_faces_glued
        && involutive
        && chi == 0
        && vertex_links.iter().all(|l| l.chi == 2 && l.connected);
    ValidationReport {
        tet_count: n,
        chi,
        orientable,
        vertex_links,
        closed_manifold,
        all_faces_glued,
        involutive,
        vertex_count: cls.vertex_count,
        edge_count: cls.edge_count,
        face_count: cls.face_count,
    }
}

/// Cellular chain complex of the triangulation, with tetrahedra oriented
/// by their vertex order.
pub fn triangulation_complex(t: &Triangulation) -> CellComplex {
    let n = t.tet_count();
    let cls = classes(t);
    let mut d1 = IntegerMatrix::zeros(cls.vertex_count, cls.edge_count);
    let mut d2 = IntegerMatrix::zeros(cls.edge_count, cls.face_count);
    let mut d3 = IntegerMatrix::zeros(cls.face_count, n);
    let mut edge_done = vec![false; cls.edge_count];
    let mut face_done = vec![false; cls.face_count];
    for tet in 0..n {
        for (slot, &(a, b)) in EDGES.iter().enumerate() {
            let (e, s) = cls.edge[6 * tet + slot];
            if !edge_done[e] {
                edge_done[e] = true;
                let (head, tail) = if s > 0 { (b, a) } else { (a, b) };
                d1.add_to(cls.vertex[4 * tet + head], e, 1);
                d1.add_to(cls.vertex[4 * tet + tail], e, -1);
            }
        }
        for f in 0..4 {
            let (fc, fs) = cls.face[4 * tet + f];
            let sign = if f % 2 == 0 { 1 } else { -1 };
            d3.add_to(fc, tet, (sign * fs) as i64);
            if !face_done[fc] {
                face_done[fc] = true;
                let [a, b, c] = face_vertices(f);
                for (i, (x, y)) in [(b, c), (a, c), (a, b)].into_iter().enumerate() {
                    let (slot, _) = edge_slot(x, y);
                    let (e, es) = cls.edge[6 * tet + slot];
                    let alt = if i % 2 == 0 { 1 } else { -1 };
                    d2.add_to(e, fc, (alt * es * fs) as i64);
                }
            }
        }
    }
    CellComplex {
        counts: [cls.vertex_count, cls.edge_count, cls.face_count, n],
        boundaries: [d1, d2, d3],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub free_rank: usize,
    #[serde(serialize_with = "decimal_strings")]
    pub torsion: Vec<BigInt>,
}

fn decimal_strings<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl HomologyResult {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> HomologyResult {
        HomologyResult { free_rank, torsion }
    }

    pub fn cyclic(order: u64) -> HomologyResult {
        HomologyResult::new(0, vec![BigInt::from(order)])
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Reads off `Z^r + torsion` from the invariant factors of a relation
    /// matrix whose columns span the relations among `generators` classes.
    pub(crate) fn from_invariants(generators: usize, diag: &[BigInt]) -> HomologyResult {
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        HomologyResult {
            free_rank: generators - rank,
            torsion: diag.iter().filter(|d| **d > BigInt::one()).cloned().collect(),
        }
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("dimension {0} out of range")]
    Dimension(usize),
    #[error("malformed cell complex: boundary maps do not compose to zero")]
    Malformed,
}

/// `H_dim = ker ∂_dim / im ∂_{dim+1}`.
pub fn homology(c: &CellComplex, dim: usize) -> Result<HomologyResult, VerifyError> {
    if dim > 3 {
        return Err(VerifyError::Dimension(dim));
    }
    if !c.is_chain_complex() {
        return Err(VerifyError::Malformed);
    }
    let rank_of = |d: usize| -> usize {
        if d == 0 || d > 3 {
            0
        } else {
            smith_normal_form(c.boundary(d)).iter().filter(|x| !x.is_zero()).count()
        }
    };
    let incoming: Vec<BigInt> = if dim < 3 {
        smith_normal_form(c.boundary(dim + 1))
    } else {
        Vec::new()
    };
    let rank_in = incoming.iter().filter(|x| !x.is_zero()).count();
    Ok(HomologyResult {
        free_rank: c.counts[dim] - rank_of(dim) - rank_in,
        torsion: incoming.into_iter().filter(|d| *d > BigInt::one()).collect(),
    })
}
