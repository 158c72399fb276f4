//! Triangular presentations of the fundamental group read off the 2-skeleton
//! of the Minkus quotient complex.
//!
//! Generators are the edge classes. Each quotient triangle contributes its
//! boundary word, and the edges of a spanning tree of the 1-skeleton rooted
//! at the class of `N` are killed by relators of length one.
//!
//! Text format: one `gen <symbol>` line per generator followed by one
//! `rel <word>` line per relator, with words written as `g3 g7^-1 g2`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::SlopePair;
use crate::minkus::{quotient, MinkusError, MinkusScheme};
use crate::snf::{smith_normal_form, IntegerMatrix};
use crate::verify::HomologyResult;

/// A generator index with exponent `±1`.
pub type Letter = (usize, i8);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
    pub triangular_count: usize,
    pub short_count: usize,
    /// Length-3 relators whose cyclic free reduction is shorter than 3.
    pub degenerate_count: usize,
    /// Triangular relators before any deduplication.
    pub raw_triangular_count: usize,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<Letter>>) -> GroupPresentation {
        let triangular_count = relators.iter().filter(|r| r.len() == 3).count();
        let mut g = GroupPresentation {
            generators,
            relators,
            triangular_count,
            short_count: 0,
            degenerate_count: 0,
            raw_triangular_count: triangular_count,
        };
        g.recount();
        g
    }

    fn recount(&mut self) {
        self.triangular_count = self.relators.iter().filter(|r| r.len() == 3).count();
        self.short_count = self.relators.iter().filter(|r| r.len() <= 2).count();
        self.degenerate_count = self
            .relators
            .iter()
            .filter(|r| r.len() == 3 && cyclic_reduce(r).len() < 3)
            .count();
    }

    pub fn is_triangular(&self) -> bool {
        self.relators.iter().all(|r| r.len() <= 3)
    }

    /// Drops relators equal to an earlier one up to cyclic rotation and
    /// inversion. `raw_triangular_count` is kept.
    pub fn deduplicated(&self) -> GroupPresentation {
        let mut seen = BTreeSet::new();
        let relators: Vec<Vec<Letter>> = self
            .relators
            .iter()
            .filter(|r| seen.insert(cyclic_key(r)))
            .cloned()
            .collect();
        let mut g = GroupPresentation {
            generators: self.generators.clone(),
            relators,
            triangular_count: 0,
            short_count: 0,
            degenerate_count: 0,
            raw_triangular_count: self.raw_triangular_count,
        };
        g.recount();
        g
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            let _ = writeln!(out, "gen {g}");
        }
        for r in &self.relators {
            let word: Vec<String> = r
                .iter()
                .map(|&(g, e)| {
                    if e > 0 {
                        self.generators[g].clone()
                    } else {
                        format!("{}^-1", self.generators[g])
                    }
                })
                .collect();
            let _ = writeln!(out, "rel {}", word.join(" "));
        }
        out
    }
}

fn cyclic_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        match out.last() {
            Some(&(g, e)) if g == l.0 && e == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    while out.len() >= 2 {
        let (a, b) = (out[0], out[out.len() - 1]);
        if a.0 == b.0 && a.1 == -b.1 {
            out.pop();
            out.remove(0);
        } else {
            break;
        }
    }
    out
}

fn cyclic_key(word: &[Letter]) -> Vec<Letter> {
    let inverse: Vec<Letter> = word.iter().rev().map(|&(g, e)| (g, -e)).collect();
    let mut best = word.to_vec();
    for w in [word.to_vec(), inverse] {
        for i in 0..w.len() {
            let mut rot = w.clone();
            rot.rotate_left(i);
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

pub fn presentation_from_scheme(sch: &MinkusScheme) -> Result<GroupPresentation, MinkusError> {
    let quo = quotient(sch)?;
    let generators: Vec<String> = (0..quo.edge_count).map(|e| format!("g{e}")).collect();
    let mut relators: Vec<Vec<Letter>> = quo.faces.iter().map(|w| w.to_vec()).collect();

    let mut adj = vec![Vec::new(); quo.vertex_count];
    for (e, &(a, b)) in quo.edge_ends.iter().enumerate() {
        adj[a].push((e, b));
        adj[b].push((e, a));
    }
    let mut reached = vec![false; quo.vertex_count];
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([quo.base_vertex]);
    reached[quo.base_vertex] = true;
    while let Some(v) = queue.pop_front() {
        for &(e, w) in &adj[v] {
            if !reached[w] {
                reached[w] = true;
                tree.push(e);
                queue.push_back(w);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return Err(MinkusError::Inconsistent("quotient 1-skeleton is disconnected".into()));
    }
    tree.sort_unstable();
    relators.extend(tree.into_iter().map(|e| vec![(e, 1)]));
    Ok(GroupPresentation::new(generators, relators))
}

/// Abelianization as `Z^r + torsion`, from the relator exponent-sum matrix.
pub fn abelianization(g: &GroupPresentation) -> HomologyResult {
    let mut mat = IntegerMatrix::zeros(g.relators.len(), g.generators.len());
    for (i, r) in g.relators.iter().enumerate() {
        for &(gen, e) in r {
            mat.add_to(i, gen, e as i64);
        }
    }
    let diag: Vec<BigInt> = smith_normal_form(&mat);
    HomologyResult::from_invariants(g.generators.len(), &diag)
}

/// The bound `n (p - 1)` on the number of length-3 relators, or `None` on
/// overflow.
pub fn t_invariant_upper(s: SlopePair, n: u64) -> Option<u64> {
    n.checked_mul(s.p() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkus::{build_scheme, quotient};

    fn pres(p: u64, q: u64, n: u64, m: u64) -> (MinkusScheme, GroupPresentation) {
        let s = build_scheme(SlopePair::new(p, q).unwrap(), n, m).unwrap();
        let g = presentation_from_scheme(&s).unwrap();
        (s, g)
    }

    #[test]
    fn abelianization_basics() {
        let g = GroupPresentation::new(vec!["x".into()], vec![vec![(0, 1), (0, 1), (0, 1)]]);
        assert_eq!(abelianization(&g).to_string(), "Z/3");
        let g = GroupPresentation::new(vec!["x".into(), "y".into()], vec![]);
        assert_eq!(abelianization(&g).to_string(), "Z^2");
    }

    #[test]
    fn triangular_counts() {
        let (_, g) = pres(5, 3, 3, 1);
        assert_eq!(g.triangular_count, 12);
        assert_eq!(g.triangular_count + g.short_count, g.relators.len());
        assert!(g.is_triangular());
        assert_eq!(abelianization(&g).to_string(), "Z/4 + Z/4");
        let (_, g) = pres(2, 1, 2, 1);
        assert_eq!(g.triangular_count, 2);
        let (_, g) = pres(5, 2, 2, 1);
        assert_eq!(abelianization(&g).to_string(), "Z/5");
    }

    #[test]
    fn t_bound() {
        let s = |p, q| SlopePair::new(p, q).unwrap();
        assert_eq!(t_invariant_upper(s(5, 2), 3), Some(12));
        assert_eq!(t_invariant_upper(s(2, 1), 2), Some(2));
        assert_eq!(t_invariant_upper(s(7, 3), 5), Some(30));
        let (_, g) = pres(7, 3, 5, 1);
        assert_eq!(g.triangular_count, 30);
    }

    #[test]
    fn triangle_words_are_closed_paths() {
        let (s, g) = pres(8, 3, 3, 2);
        let quo = quotient(&s).unwrap();
        for r in g.relators.iter().filter(|r| r.len() == 3) {
            let ends: Vec<(usize, usize)> = r
                .iter()
                .map(|&(e, x)| {
                    let (a, b) = quo.edge_ends[e];
                    if x > 0 { (a, b) } else { (b, a) }
                })
                .collect();
            for i in 0..3 {
                assert_eq!(ends[i].1, ends[(i + 1) % 3].0);
            }
        }
    }

    #[test]
    fn dedup_keeps_raw_count() {
        let g = GroupPresentation::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![(0, 1), (1, 1), (2, 1)], vec![(1, 1), (2, 1), (0, 1)], vec![(2, -1), (1, -1), (0, -1)]],
        );
        let d = g.deduplicated();
        assert_eq!(d.relators.len(), 1);
        assert_eq!(d.triangular_count, 1);
        assert_eq!(d.raw_triangular_count, 3);
    }

    #[test]
    fn degenerate_relators_counted() {
        let g = GroupPresentation::new(vec!["a".into(), "b".into()], vec![vec![(0, 1), (1, 1), (1, -1)]]);
        assert_eq!(g.degenerate_count, 1);
        assert_eq!(g.triangular_count, 1);
    }

    #[test]
    fn text_export() {
        let g = GroupPresentation::new(vec!["g0".into(), "g1".into()], vec![vec![(1, 1), (0, -1)], vec![(0, 1)]]);
        assert_eq!(g.to_text(), "gen g0\ngen g1\nrel g1 g0^-1\nrel g0\n");
    }
}
