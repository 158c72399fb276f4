//! Conway normal form diagrams of two-bridge links.
//!
//! The diagram is a 4-plat: four horizontal rows `0..=3` (bottom to top).
//! Block `j` (1-based) holds `a_j` half-twists between rows 1 and 2 when `j`
//! is odd and between rows 0 and 1 when `j` is even. On the left, rows 0-1
//! and rows 2-3 are capped off. On the right the closure depends on the
//! parity of `k`: rows 0-1 and 2-3 are capped for odd `k`; rows 1-2 are capped
//! and rows 0, 3 are joined around the outside for even `k`.
//!
//! Each crossing has four ports in counterclockwise order `NE, NW, SW, SE`,
//! and every arc of the diagram joins two ports. Faces of the complement are
//! traced from this rotation system, so region identification is exact and
//! needs no planar coordinates.
//!
//! Region graph convention: one edge per passage through a crossing whose two
//! ends lie in non-bigonal regions. Vertical passages join the regions above
//! and below a crossing; horizontal passages join the regions to its left and
//! right. With the labels `R_0` (band between rows 2 and 3), `R_1` (outer
//! region) and `R_{j+1}` (region across block `j` from `R_0`/`R_1`), tracing
//! gives, for both parities of `k`:
//!
//! * an `a_j`-fold connection `R_0 - R_{j+1}` for every odd `j`;
//! * an `a_j`-fold connection `R_1 - R_{j+1}` for every even `j`;
//! * a single connection `R_j - R_{j+2}` for `2 <= j <= k-1` with `a_j = 1`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{minimized_expansion, ContinuedFraction, SlopePair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error(
        "region analysis needs a_1 > 1; the diagram of {cf} is the mirror of the Conway form of K(p, p-q), use that instead"
    )]
    LeadingOne { cf: String },
    #[error("diagram is not planar: V - E + F = {0}")]
    NotPlanar(i64),
    #[error("expected {expected} non-bigonal regions, traced {found}")]
    RegionCount { expected: usize, found: usize },
}

/// Orientation of the twist a crossing belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistType {
    /// Twist between rows 1 and 2 (odd blocks).
    Horizontal,
    /// Twist between rows 0 and 1 (even blocks).
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    /// 1-based block index `j`.
    pub block: usize,
    /// 0-based position inside the block.
    pub index: usize,
    pub twist_type: TwistType,
    /// Lower of the two rows this crossing twists.
    pub lower_row: usize,
}

/// Crossing ports in counterclockwise order.
const NE: usize = 0;
const NW: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Port {
    crossing: usize,
    slot: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Region {
    /// Number of crossing corners on the boundary.
    pub size: usize,
    /// `Some(i)` for the non-bigonal region `R_i`. Labels are positional: for
    /// a single block the outer region `R_1` has only two corners.
    pub label: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ConwayDiagram {
    cf: ContinuedFraction,
    crossings: Vec<Crossing>,
    /// `mate[c][s]` is the port joined to port `s` of crossing `c`.
    mate: Vec<[Port; 4]>,
    regions: Vec<Region>,
    /// `corner_face[c]` = faces at the (top, left, bottom, right) corners.
    corner_face: Vec<[usize; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum End {
    Port(Port),
    Left(usize),
    Right(usize),
}

/// Builds the Conway normal form of `[a_1, ..., a_k]`.
pub fn build_conway(cf: &ContinuedFraction) -> ConwayDiagram {
    let a = cf.coefficients();
    let k = a.len();
    let mut crossings = Vec::new();
    // Each row carries its current loose end; every arc is recorded as a pair of ends.
    let mut open: [End; 4] = [End::Left(0), End::Left(1), End::Left(2), End::Left(3)];
    let mut arcs: Vec<(End, End)> = Vec::new();
    for (bi, &aj) in a.iter().enumerate() {
        let block = bi + 1;
        let (lower_row, twist_type) = if block % 2 == 1 {
            (1, TwistType::Horizontal)
        } else {
            (0, TwistType::Vertical)
        };
        for index in 0..aj as usize {
            let c = crossings.len();
            crossings.push(Crossing {
                block,
                index,
                twist_type,
                lower_row,
            });
            let port = |slot| End::Port(Port { crossing: c, slot });
            arcs.push((open[lower_row], port(SW)));
            arcs.push((open[lower_row + 1], port(NW)));
            open[lower_row] = port(SE);
            open[lower_row + 1] = port(NE);
        }
    }
    for (row, end) in open.iter().enumerate() {
        arcs.push((*end, End::Right(row)));
    }
    let left_caps = [(0, 1), (2, 3)];
    let right_caps = if k % 2 == 1 {
        [(0, 1), (2, 3)]
    } else {
        [(1, 2), (0, 3)]
    };

    for &(r, s) in &left_caps {
        arcs.push((End::Left(r), End::Left(s)));
    }
    for &(r, s) in &right_caps {
        arcs.push((End::Right(r), End::Right(s)));
    }
    // Closure points have degree two and ports degree one, so every port
    // starts a path that ends at another port.
    let mut adj: HashMap<End, Vec<End>> = HashMap::new();
    for &(x, y) in &arcs {
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    let mut port_arcs: Vec<(Port, Port)> = Vec::new();
    let mut done: HashSet<Port> = HashSet::new();
    for &start in adj.keys() {
        let End::Port(sp) = start else { continue };
        if done.contains(&sp) {
            continue;
        }
        let (mut prev, mut cur) = (start, adj[&start][0]);
        while !matches!(cur, End::Port(_)) {
            let next = *adj[&cur]
                .iter()
                .find(|&&e| e != prev)
                .expect("closure points have two neighbours");
            prev = cur;
            cur = next;
        }
        let End::Port(ep) = cur else { unreachable!() };
        done.insert(sp);
        done.insert(ep);
        port_arcs.push((sp, ep));
    }

    let mut mate = vec![[Port { crossing: 0, slot: 0 }; 4]; crossings.len()];
    for (x, y) in port_arcs {
        mate[x.crossing][x.slot] = y;
        mate[y.crossing][y.slot] = x;
    }

    let mut d = ConwayDiagram {
        cf: cf.clone(),
        crossings,
        mate,
        regions: Vec::new(),
        corner_face: Vec::new(),
    };
    d.trace_faces();
    d
}

impl ConwayDiagram {
    /// Face permutation `phi = sigma . alpha` on darts `(crossing, slot)`.
    fn trace_faces(&mut self) {
        let n = self.crossings.len();
        let mut face_of = vec![[usize::MAX; 4]; n];
        let mut sizes = Vec::new();
        for c in 0..n {
            for s in 0..4 {
                if face_of[c][s] != usize::MAX {
                    continue;
                }
                let f = sizes.len();
                let mut size = 0;
                let (mut cc, mut ss) = (c, s);
                while face_of[cc][ss] == usize::MAX {
                    face_of[cc][ss] = f;
                    size += 1;
                    let m = self.mate[cc][ss];
                    cc = m.crossing;
                    ss = (m.slot + 1) % 4;
                }
                sizes.push(size);
            }
        }
        // The corner between slot s and slot s+1 at c lies on the face of dart (c, s+1).
        self.corner_face = face_of
            .iter()
            .map(|f| [f[NW], f[SW], f[SE], f[NE]])
            .collect();
        self.regions = sizes
            .into_iter()
            .map(|size| Region { size, label: None })
            .collect();
        self.assign_labels();
    }

    fn assign_labels(&mut self) {
        let k = self.cf.len();
        let label = |face: usize, l: usize, regions: &mut Vec<Region>| {
            if regions[face].label.is_none() {
                regions[face].label = Some(l);
            }
        };
        let mut regions = std::mem::take(&mut self.regions);
        for (c, x) in self.crossings.iter().enumerate() {
            let [top, left, bottom, _] = self.corner_face[c];
            if x.block == 1 && x.index == 0 {
                label(top, 0, &mut regions);
                label(left, 1, &mut regions);
            }
            match x.twist_type {
                TwistType::Horizontal => label(bottom, x.block + 1, &mut regions),
                TwistType::Vertical => {
                    label(bottom, 1, &mut regions);
                    label(top, x.block + 1, &mut regions);
                }
            }
        }
        debug_assert!(regions.iter().all(|r| r.label.is_none_or(|l| l <= k + 1)));
        self.regions = regions;
    }

    pub fn continued_fraction(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn parity(&self) -> usize {
        self.cf.len() % 2
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Bigons inserted between consecutive half-twists of a block.
    pub fn bigon_count(&self) -> usize {
        self.regions.iter().filter(|r| r.label.is_none()).count()
    }

    /// Regions `R_0, ..., R_{k+1}`.
    pub fn non_bigonal_count(&self) -> usize {
        self.regions.iter().filter(|r| r.label.is_some()).count()
    }

    /// `V - E + F` of the underlying 4-valent graph on the sphere.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.crossings.len() as i64;
        v - 2 * v + self.regions.len() as i64
    }

    /// Groups crossings into twists: chains of crossings joined by faces with
    /// two corners. With `a_1 = 1` this merges the lone first crossing into
    /// the second block.
    /// Returns the twist index of every crossing.
    pub fn twists(&self) -> Vec<usize> {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let mut bigon_members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..n {
            for &f in &self.corner_face[c] {
                if self.regions[f].size == 2 {
                    bigon_members.entry(f).or_default().push(c);
                }
            }
        }
        for members in bigon_members.values() {
            for w in members.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let mut ids = BTreeMap::new();
        (0..n)
            .map(|c| {
                let root = find(&mut parent, c);
                let next = ids.len();
                *ids.entry(root).or_insert(next)
            })
            .collect()
    }

    /// Crossing list dump, one `block index type` line per crossing.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "conway {}", self.cf);
        for x in &self.crossings {
            let t = match x.twist_type {
                TwistType::Horizontal => "h",
                TwistType::Vertical => "v",
            };
            let _ = writeln!(out, "{} {} {}", x.block, x.index, t);
        }
        out
    }
}

/// Number of twists of the diagram.
pub fn twist_number(d: &ConwayDiagram) -> u64 {
    let t = d.twists();
    t.iter().copied().max().map_or(0, |m| m as u64 + 1)
}

/// One passage through a crossing between two non-bigonal regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionEdge {
    pub from: usize,
    pub to: usize,
    pub crossing: usize,
    pub vertical: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionGraph {
    /// Labels `0..=k+1`.
    pub vertices: Vec<usize>,
    pub edges: Vec<RegionEdge>,
}

impl RegionGraph {
    /// Edge multiplicities keyed by unordered label pairs.
    pub fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for e in &self.edges {
            let key = (e.from.min(e.to), e.from.max(e.to));
            *m.entry(key).or_insert(0) += 1;
        }
        m
    }
}

fn require_leading_gt_one(d: &ConwayDiagram) -> Result<(), DiagramError> {
    if d.cf.coefficients()[0] == 1 {
        return Err(DiagramError::LeadingOne {
            cf: d.cf.to_string(),
        });
    }
    if d.euler_characteristic() != 2 {
        return Err(DiagramError::NotPlanar(d.euler_characteristic()));
    }
    let expected = d.cf.len() + 2;
    if d.non_bigonal_count() != expected {
        return Err(DiagramError::RegionCount {
            expected,
            found: d.non_bigonal_count(),
        });
    }
    Ok(())
}

pub fn region_graph(d: &ConwayDiagram) -> Result<RegionGraph, DiagramError> {
    require_leading_gt_one(d)?;
    let mut edges = Vec::new();
    for c in 0..d.crossings.len() {
        let [top, left, bottom, right] = d.corner_face[c];
        for (x, y, vertical) in [(top, bottom, true), (left, right, false)] {
            if let (Some(a), Some(b)) = (d.regions[x].label, d.regions[y].label) {
                edges.push(RegionEdge {
                    from: a.min(b),
                    to: a.max(b),
                    crossing: c,
                    vertical,
                });
            }
        }
    }
    Ok(RegionGraph {
        vertices: (0..d.cf.len() + 2).collect(),
        edges,
    })
}

/// Every length-2 cycle of the region graph passes through two crossings of
/// one twist, and the graph has no loops.
pub fn is_twist_reduced(d: &ConwayDiagram) -> Result<bool, DiagramError> {
    let g = region_graph(d)?;
    let twist = d.twists();
    if g.edges.iter().any(|e| e.from == e.to) {
        return Ok(false);
    }
    for (i, e) in g.edges.iter().enumerate() {
        for f in &g.edges[i + 1..] {
            if (e.from, e.to) == (f.from, f.to) && twist[e.crossing] != twist[f.crossing] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Twist analysis of `K(p, q)`, mirroring to `K(p, p-q)` when `a_1 = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistAnalysis {
    pub expansion: Vec<u64>,
    pub crossings: usize,
    pub twist_number: u64,
    /// Expansion used for region analysis when the input starts with 1.
    pub mirrored_to: Option<Vec<u64>>,
    pub region_multiplicities: Vec<(usize, usize, usize)>,
    pub twist_reduced: bool,
}

pub fn analyze(s: SlopePair) -> TwistAnalysis {
    let cf = minimized_expansion(s);
    let d = build_conway(&cf);
    let t = twist_number(&d);
    let (rd, mirrored_to) = if cf.coefficients()[0] == 1 && s.p() > 2 {
        let m = minimized_expansion(SlopePair::new(s.p(), s.p() - s.q()).expect("p-q is a unit"));
        (build_conway(&m), Some(m.coefficients().to_vec()))
    } else {
        (d.clone(), None)
    };
    let g = region_graph(&rd).expect("Conway forms with a_1 > 1 are well formed");
    TwistAnalysis {
        expansion: cf.coefficients().to_vec(),
        crossings: d.crossing_count(),
        twist_number: t,
        mirrored_to,
        region_multiplicities: g
            .multiplicities()
            .into_iter()
            .map(|((a, b), m)| (a, b, m))
            .collect(),
        twist_reduced: is_twist_reduced(&rd).expect("validated above"),
    }
}
