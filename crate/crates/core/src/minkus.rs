//! Minkus polyhedral schemes for the meridian-cyclic coverings
//! `M_{n,m}(p,q)`, their triangulations and quotient cell complexes.
//!
//! The boundary of the ball carries `n` semicircles `C_0..C_{n-1}` from `N`
//! to `S`, each cut into `p` segments. Vertex `(i, j)` sits `j` segments
//! below `N` on `C_i`. The lune `L_i` lies between `C_i` and `C_{i+1}` and is
//! split by an arc from `P_i = (i, q)` to `(i+1, p-q)` into the upper region
//! `R_i` and the lower region `R'_{i+s}`, where the shift `s` is `m` for a
//! link. For a knot `s = 1` when `q` is odd; when `q` is even the same
//! pairing with `s = 1` does not close up to a manifold for `n >= 3`, and
//! `s = -1` is used instead. Both describe the unique `n`-fold cyclic
//! covering branched over the knot.
//!
//! Region vertex lists run counterclockwise as seen from outside the ball:
//!
//! ```text
//! R_k   : N, (k,1), .., (k,q), (k+1,p-q), .., (k+1,1)
//! R'_j  : S, (i+1,p-1), .., (i+1,p-q), (i,q), .., (i,p-1)      with i = j - s
//! ```
//!
//! The pairing `R_k -> R'_k` sends position `t` to position
//! `(2q + 1 - t) mod (p + 1)`. This reverses orientation and sends `P_k` (position
//! `q`) to `P_{k-s}` (position `q + 1`).
//!
//! Each `R_k` is fanned from `N` into triangles `A_t = {N, v_t, v_{t+1}}`
//! and `R'_k` carries the image fan. Tetrahedron `(k, t)` is the cone from
//! `N` over the image of `A_t`, with vertices
//! `[N, phi(N), phi(v_t), phi(v_{t+1})]`. Its base (face 0) is glued to
//! wherever `A_t` sits in the coned ball:
//!
//! * if the edge `v_t v_{t+1}` borders a lower region, `A_t` is the lateral
//!   face over that edge of the neighbouring cone;
//! * if it lies on a segment shared by two upper regions (depth at most
//!   `min(q, p-q)` on some `C_i`), the two triangles on either side have
//!   the same vertices and fold onto each other when the ball is coned from
//!   `N`, so their two image bases are glued directly.
//!
//! Lateral faces over edges inside or between lower regions are glued to
//! the neighbouring cone.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::SlopePair;
use crate::dsu::{SignedUnionFind, UnionFind};
use crate::snf::IntegerMatrix;
use crate::triangulation::{Perm4, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinkusError {
    #[error("covering order n = {0} must be at least 2")]
    CoveringOrder(u64),
    #[error("for odd p = {p} the link is a knot and m must be 1, got m = {m}")]
    KnotNeedsUnitM { p: u64, m: u64 },
    #[error("for even p need 1 <= m < n and gcd(m, n) = 1, got m = {m}, n = {n}")]
    BadLinkM { n: u64, m: u64 },
    #[error("scheme too large: p = {p}, n = {n}")]
    TooLarge { p: u64, n: u64 },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    North,
    South,
    /// `depth` segments below `N` on semicircle `circle`, `1 <= depth < p`.
    Semi { circle: usize, depth: usize },
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::North => write!(f, "N"),
            Vertex::South => write!(f, "S"),
            Vertex::Semi { circle, depth } => write!(f, "({circle},{depth})"),
        }
    }
}

/// Edges of the subdivided boundary sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeId {
    /// Segment of `C_circle` from depth `depth` to `depth + 1`.
    Seg { circle: usize, depth: usize },
    /// The arc in lune `L_lune`, from `(lune, q)` to `(lune+1, p-q)`.
    Arc { lune: usize },
    /// Fan diagonal of `R_region` from `N` to position `to`.
    DiagUpper { region: usize, to: usize },
    /// Image of `DiagUpper` in `R'_region`.
    DiagLower { region: usize, to: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    pub index: usize,
    pub lune: usize,
    /// Counterclockwise from outside, starting at `N` (upper) or `S` (lower).
    pub vertices: Vec<Vertex>,
    /// `edges[u]` joins `vertices[u]` to `vertices[u+1]`; the sign is `+1`
    /// when that direction agrees with the edge's canonical direction.
    pub edges: Vec<(EdgeId, i8)>,
}

/// The face pairing `R_k -> R'_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub region: usize,
    /// Position in `R'_k` of the image of position `t` of `R_k`.
    pub map: Vec<usize>,
    /// Image of `P_k`.
    pub anchor: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinkusScheme {
    pub slope: SlopePair,
    pub n: usize,
    pub m: usize,
    /// Lune `L_i` is split into `R_i` and `R'_{i+shift}`. Equal to `m` for
    /// links; for knots `1` when `q` is odd and `n - 1` when `q` is even.
    pub shift: usize,
    pub upper: Vec<Region>,
    pub lower: Vec<Region>,
    pub pairings: Vec<Pairing>,
    /// `P_k = (k, q)`, shared by `R_k` and `R'_{k+shift}`.
    pub marked: Vec<Vertex>,
}

const MAX_CELLS: u64 = 1 << 24;

pub fn build_scheme(s: SlopePair, n: u64, m: u64) -> Result<MinkusScheme, MinkusError> {
    let (p, q) = (s.p(), s.q());
    if n < 2 {
        return Err(MinkusError::CoveringOrder(n));
    }
    if p % 2 == 1 {
        if m != 1 {
            return Err(MinkusError::KnotNeedsUnitM { p, m });
        }
    } else if m == 0 || m >= n || m.gcd(&n) != 1 {
        return Err(MinkusError::BadLinkM { n, m });
    }
    if p.checked_mul(n).is_none_or(|c| c > MAX_CELLS) {
        return Err(MinkusError::TooLarge { p, n });
    }
    let (p, q, n, m) = (p as usize, q as usize, n as usize, m as usize);
    // For a knot the two bridge meridians map to the same generator up to a
    // sign fixed by the parity of q.
    let shift = match (p % 2, q % 2) {
        (1, 1) => 1,
        (1, _) => n - 1,
        _ => m,
    };
    let semi = |circle: usize, depth: usize| match depth {
        0 => Vertex::North,
        d if d == p => Vertex::South,
        d => Vertex::Semi {
            circle: circle % n,
            depth: d,
        },
    };
    let seg = |circle: usize, depth: usize| EdgeId::Seg {
        circle: circle % n,
        depth,
    };

    let mut upper = Vec::with_capacity(n);
    let mut lower: Vec<Option<Region>> = vec![None; n];
    for k in 0..n {
        let mut vertices = vec![Vertex::North];
        let mut edges = Vec::with_capacity(p + 1);
        for j in 1..=q {
            vertices.push(semi(k, j));
            edges.push((seg(k, j - 1), 1));
        }
        edges.push((EdgeId::Arc { lune: k }, 1));
        for j in (1..=p - q).rev() {
            vertices.push(semi(k + 1, j));
            edges.push((seg(k + 1, j - 1), -1));
        }
        upper.push(Region {
            kind: RegionKind::Upper,
            index: k,
            lune: k,
            vertices,
            edges,
        });

        let j = (k + shift) % n;
        let mut vertices = vec![Vertex::South];
        let mut edges = Vec::with_capacity(p + 1);
        for u in 1..=q {
            vertices.push(semi(k + 1, p - u));
            edges.push((seg(k + 1, p - u), -1));
        }
        edges.push((EdgeId::Arc { lune: k }, -1));
        for d in q..p {
            vertices.push(semi(k, d));
            edges.push((seg(k, d), 1));
        }
        lower[j] = Some(Region {
            kind: RegionKind::Lower,
            index: j,
            lune: k,
            vertices,
            edges,
        });
    }
    let lower: Vec<Region> = lower
        .into_iter()
        .map(|r| r.ok_or_else(|| MinkusError::Inconsistent("lower region missing".into())))
        .collect::<Result<_, _>>()?;

    let c = 2 * q + 1;
    let pairings = (0..n)
        .map(|k| {
            let map: Vec<usize> = (0..=p).map(|t| (c + p + 1 - t) % (p + 1)).collect();
            Pairing {
                region: k,
                anchor: lower[k].vertices[map[q]],
                map,
            }
        })
        .collect();
    let marked = (0..n).map(|k| semi(k, q)).collect();
    Ok(MinkusScheme {
        slope: s,
        n,
        m,
        shift,
        upper,
        lower,
        pairings,
        marked,
    })
}

impl MinkusScheme {
    pub fn p(&self) -> usize {
        self.slope.p() as usize
    }

    pub fn q(&self) -> usize {
        self.slope.q() as usize
    }

    pub fn tet_count(&self) -> usize {
        self.n * (self.p() - 1)
    }

    pub fn tet_index(&self, region: usize, t: usize) -> usize {
        region * (self.p() - 1) + (t - 1)
    }

    /// Image in `R'_k` of position `t` of `R_k`.
    pub fn image(&self, k: usize, t: usize) -> Vertex {
        self.lower[k].vertices[self.pairings[k].map[t]]
    }

    /// Triangles of the subdivided boundary sphere, counterclockwise from
    /// outside. Upper regions first, then lower regions, each in fan order.
    pub fn sphere_triangles(&self) -> Vec<[Vertex; 3]> {
        let p = self.p();
        let mut out = Vec::with_capacity(2 * self.tet_count());
        for r in &self.upper {
            for t in 1..p {
                out.push([Vertex::North, r.vertices[t], r.vertices[t + 1]]);
            }
        }
        for k in 0..self.n {
            for t in 1..p {
                out.push([self.image(k, 0), self.image(k, t + 1), self.image(k, t)]);
            }
        }
        out
    }

    fn vertex_index(&self, v: Vertex) -> usize {
        match v {
            Vertex::North => 0,
            Vertex::South => 1,
            Vertex::Semi { circle, depth } => 2 + circle * (self.p() - 1) + depth - 1,
        }
    }

    fn sphere_vertex_count(&self) -> usize {
        2 + self.n * (self.p() - 1)
    }

    fn edge_index(&self, e: EdgeId) -> usize {
        let (n, p) = (self.n, self.p());
        let diag = p.saturating_sub(2);
        match e {
            EdgeId::Seg { circle, depth } => circle * p + depth,
            EdgeId::Arc { lune } => n * p + lune,
            EdgeId::DiagUpper { region, to } => n * p + n + region * diag + to - 2,
            EdgeId::DiagLower { region, to } => n * p + n + n * diag + region * diag + to - 2,
        }
    }

    fn sphere_edge_count(&self) -> usize {
        let (n, p) = (self.n, self.p());
        n * p + n + 2 * n * p.saturating_sub(2)
    }

    fn edge_endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        let (p, q) = (self.p(), self.q());
        let semi = |circle: usize, depth: usize| match depth {
            0 => Vertex::North,
            d if d == p => Vertex::South,
            d => Vertex::Semi {
                circle: circle % self.n,
                depth: d,
            },
        };
        match e {
            EdgeId::Seg { circle, depth } => (semi(circle, depth), semi(circle, depth + 1)),
            EdgeId::Arc { lune } => (semi(lune, q), semi(lune + 1, p - q)),
            EdgeId::DiagUpper { region, to } => (Vertex::North, self.upper[region].vertices[to]),
            EdgeId::DiagLower { region, to } => (self.image(region, 0), self.image(region, to)),
        }
    }

    /// Oriented edge of `R_k` from `N` to position `s`.
    fn spoke(&self, k: usize, s: usize) -> (EdgeId, i8) {
        let p = self.p();
        let r = &self.upper[k];
        if s == 1 {
            r.edges[0]
        } else if s == p {
            let (e, sg) = r.edges[p];
            (e, -sg)
        } else {
            (EdgeId::DiagUpper { region: k, to: s }, 1)
        }
    }

    /// Oriented boundary of `A_t` in `R_k`: `N -> v_t -> v_{t+1} -> N`.
    fn triangle_boundary(&self, k: usize, t: usize) -> [(EdgeId, i8); 3] {
        let (a, sa) = self.spoke(k, t);
        let (b, sb) = self.upper[k].edges[t];
        let (c, sc) = self.spoke(k, t + 1);
        [(a, sa), (b, sb), (c, -sc)]
    }
}

/// Identification data of the boundary sphere under the scheme pairings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotient {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    /// Class of `N`.
    pub base_vertex: usize,
    /// Tail and head vertex class of each edge class.
    pub edge_ends: Vec<(usize, usize)>,
    /// Boundary word of each 2-cell as `(edge class, ±1)`, read around the
    /// triangle `A_t` of `R_k`. Cell `(k, t)` has index `k (p-1) + t - 1`.
    pub faces: Vec<[(usize, i8); 3]>,
}

pub fn quotient(sch: &MinkusScheme) -> Result<Quotient, MinkusError> {
    let (n, p) = (sch.n, sch.p());
    let mut vuf = UnionFind::new(sch.sphere_vertex_count());
    let mut euf = SignedUnionFind::new(sch.sphere_edge_count());
    for k in 0..n {
        let up = &sch.upper[k];
        let low = &sch.lower[k];
        let map = &sch.pairings[k].map;
        for t in 0..=p {
            vuf.union(sch.vertex_index(up.vertices[t]), sch.vertex_index(low.vertices[map[t]]));
        }
        for s in 0..=p {
            // v_s -> v_{s+1} maps to w_{u+1} -> w_u with u = map[s+1].
            let (e, se) = up.edges[s];
            let (f, sf) = low.edges[map[(s + 1) % (p + 1)]];
            euf.union(sch.edge_index(e), sch.edge_index(f), -se * sf);
        }
        for s in 2..p {
            euf.union(
                sch.edge_index(EdgeId::DiagUpper { region: k, to: s }),
                sch.edge_index(EdgeId::DiagLower { region: k, to: s }),
                1,
            );
        }
    }
    if euf.conflict {
        return Err(MinkusError::Inconsistent("edge glued to its own reverse".into()));
    }
    let (vclass, vertex_count) = vuf.classes();
    let (eclass, edge_count) = euf.classes();

    let mut edge_ends = vec![None; edge_count];
    let all_edges = sch.all_edges();
    for &e in &all_edges {
        let (cls, sg) = eclass[sch.edge_index(e)];
        let (a, b) = sch.edge_endpoints(e);
        let (a, b) = (vclass[sch.vertex_index(a)], vclass[sch.vertex_index(b)]);
        let ends = if sg > 0 { (a, b) } else { (b, a) };
        match edge_ends[cls] {
            None => edge_ends[cls] = Some(ends),
            Some(prev) if prev == ends => {}
            Some(_) => {
                return Err(MinkusError::Inconsistent("edge class endpoints disagree".into()));
            }
        }
    }
    let edge_ends: Vec<(usize, usize)> = edge_ends
        .into_iter()
        .map(|x| x.ok_or_else(|| MinkusError::Inconsistent("empty edge class".into())))
        .collect::<Result<_, _>>()?;

    let mut faces = Vec::with_capacity(sch.tet_count());
    for k in 0..n {
        for t in 1..p {
            let word = sch.triangle_boundary(k, t).map(|(e, s)| {
                let (cls, sg) = eclass[sch.edge_index(e)];
                (cls, s * sg)
            });
            faces.push(word);
        }
    }
    Ok(Quotient {
        vertex_count,
        edge_count,
        face_count: faces.len(),
        base_vertex: vclass[sch.vertex_index(Vertex::North)],
        edge_ends,
        faces,
    })
}

impl MinkusScheme {
    fn all_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.upper.iter().flat_map(|r| r.edges.iter().map(|e| e.0)).collect();
        out.extend(self.lower.iter().flat_map(|r| r.edges.iter().map(|e| e.0)));
        for k in 0..self.n {
            for s in 2..self.p() {
                out.push(EdgeId::DiagUpper { region: k, to: s });
                out.push(EdgeId::DiagLower { region: k, to: s });
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// A finite CW complex of dimension at most 3 given by its cellular chain
/// complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    pub counts: [usize; 4],
    /// `boundaries[d-1]` is `∂_d : C_d -> C_{d-1}`, a `counts[d-1] x counts[d]`
    /// matrix.
    pub boundaries: [IntegerMatrix; 3],
}

impl CellComplex {
    pub fn euler_characteristic(&self) -> i64 {
        self.counts[0] as i64 - self.counts[1] as i64 + self.counts[2] as i64 - self.counts[3] as i64
    }

    pub fn boundary(&self, d: usize) -> &IntegerMatrix {
        &self.boundaries[d - 1]
    }

    /// `∂_d ∘ ∂_{d+1} = 0` for `d = 1, 2`, with consistent dimensions.
    pub fn is_chain_complex(&self) -> bool {
        for d in 1..=3 {
            let b = self.boundary(d);
            if b.rows() != self.counts[d - 1] || b.cols() != self.counts[d] {
                return false;
            }
        }
        (1..3).all(|d| self.boundary(d).mul(self.boundary(d + 1)).is_zero())
    }
}

impl Quotient {
    pub fn complex(&self) -> CellComplex {
        let mut d1 = IntegerMatrix::zeros(self.vertex_count, self.edge_count);
        for (e, &(a, b)) in self.edge_ends.iter().enumerate() {
            d1.add_to(b, e, 1);
            d1.add_to(a, e, -1);
        }
        let mut d2 = IntegerMatrix::zeros(self.edge_count, self.face_count);
        for (f, word) in self.faces.iter().enumerate() {
            for &(e, s) in word {
                d2.add_to(e, f, s as i64);
            }
        }
        // Each 2-cell appears on the sphere once as A_t and once as its
        // image, which the orientation-reversing pairing traverses backwards.
        let d3 = IntegerMatrix::zeros(self.face_count, 1);
        CellComplex {
            counts: [self.vertex_count, self.edge_count, self.face_count, 1],
            boundaries: [d1, d2, d3],
        }
    }
}

/// The quotient of the ball by the scheme pairings, with a single 3-cell.
pub fn quotient_complex(sch: &MinkusScheme) -> Result<CellComplex, MinkusError> {
    let c = quotient(sch)?.complex();
    if !c.is_chain_complex() {
        return Err(MinkusError::Inconsistent("boundary of boundary is nonzero".into()));
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy)]
enum Side {
    /// Lateral face of a cone over a lower-region edge.
    Cone { tet: usize, face: usize },
    /// Polygon edge `s` of `R_k`.
    Upper { k: usize, s: usize },
}

pub fn triangulate(sch: &MinkusScheme) -> Result<Triangulation, MinkusError> {
    let (n, p) = (sch.n, sch.p());
    let count = sch.tet_count();
    // Vertices of each tetrahedron and, for base corners, their preimages in R_k.
    let mut verts = Vec::with_capacity(count);
    let mut pre = Vec::with_capacity(count);
    for k in 0..n {
        let up = &sch.upper[k];
        for t in 1..p {
            verts.push([Vertex::North, sch.image(k, 0), sch.image(k, t), sch.image(k, t + 1)]);
            pre.push([Vertex::North, up.vertices[0], up.vertices[t], up.vertices[t + 1]]);
        }
    }

    let mut sides: BTreeMap<EdgeId, Vec<Side>> = BTreeMap::new();
    for k in 0..n {
        let map = &sch.pairings[k].map;
        for t in 1..p {
            let tet = sch.tet_index(k, t);
            // Face 1 sits over image(t) image(t+1), face 2 over image(0)
            // image(t+1), face 3 over image(0) image(t).
            let over = |a: usize, b: usize| -> EdgeId {
                let (ia, ib) = (map[a], map[b]);
                let low = &sch.lower[k];
                if (ia + 1) % (p + 1) == ib {
                    low.edges[ia].0
                } else if (ib + 1) % (p + 1) == ia {
                    low.edges[ib].0
                } else {
                    EdgeId::DiagLower {
                        region: k,
                        to: if a == 0 { b } else { a },
                    }
                }
            };
            for (face, (a, b)) in [(1, (t, t + 1)), (2, (0, t + 1)), (3, (0, t))] {
                sides.entry(over(a, b)).or_default().push(Side::Cone { tet, face });
            }
        }
        for s in 1..p {
            sides
                .entry(sch.upper[k].edges[s].0)
                .or_default()
                .push(Side::Upper { k, s });
        }
    }

    // Corner keys of a face: the apex and sphere labels for lateral faces,
    // preimages for bases.
    let keys = |tet: usize, face: usize| -> [(usize, Vertex); 3] {
        let table = if face == 0 { &pre[tet] } else { &verts[tet] };
        let mut out = [(0, Vertex::North); 3];
        let mut i = 0;
        for v in 0..4 {
            if v != face {
                out[i] = (v, table[v]);
                i += 1;
            }
        }
        out
    };
    let mut tri = Triangulation::with_tetrahedra(count);
    let mut glue = |a: (usize, usize), b: (usize, usize)| -> Result<(), MinkusError> {
        let (ka, kb) = (keys(a.0, a.1), keys(b.0, b.1));
        let mut images = [0u8; 4];
        images[a.1] = b.1 as u8;
        for (v, key) in ka {
            let w = kb
                .iter()
                .find(|(_, k2)| *k2 == key)
                .ok_or_else(|| MinkusError::Inconsistent(format!("no corner {key} across face")))?;
            images[v] = w.0 as u8;
        }
        let perm = Perm4::new(images)
            .ok_or_else(|| MinkusError::Inconsistent("face corners do not match".into()))?;
        tri.join(a.0, a.1, b.0, perm)
            .map_err(|e| MinkusError::Inconsistent(e.to_string()))
    };
    for (edge, list) in &sides {
        let base = |k: usize, s: usize| (sch.tet_index(k, s), 0);
        match list.as_slice() {
            [Side::Cone { tet: a, face: fa }, Side::Cone { tet: b, face: fb }] => {
                glue((*a, *fa), (*b, *fb))?
            }
            [Side::Cone { tet, face }, Side::Upper { k, s }]
            | [Side::Upper { k, s }, Side::Cone { tet, face }] => glue(base(*k, *s), (*tet, *face))?,
            [Side::Upper { k, s }, Side::Upper { k: k2, s: s2 }] => {
                glue(base(*k, *s), base(*k2, *s2))?
            }
            other => {
                return Err(MinkusError::Inconsistent(format!(
                    "edge {edge:?} has {} incident faces",
                    other.len()
                )))
            }
        }
    }
    Ok(tri)
}
