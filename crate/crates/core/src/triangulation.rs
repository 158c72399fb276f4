//! Loose triangulations: tetrahedra with face gluings.
//!
//! Face `f` of a tetrahedron is the face opposite vertex `f`. A gluing of
//! face `f` of tetrahedron `t` carries a permutation `perm` of `{0,1,2,3}`
//! with `perm[f]` the target face and `perm[v]` the image of vertex `v`.
//!
//! Text format:
//!
//! ```text
//! tri <tet_count>
//! <tet> <face> -> <tet'> <face'> <perm>
//! ```
//!
//! with one line per gluing, listed from its lexicographically smaller
//! `(tet, face)` side in ascending order, and `<perm>` the four vertex images
//! written as digits (`1023`).

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm4(pub [u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        let mut s = 1;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    s = -s;
                }
            }
        }
        s
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Perm4 {
    type Err = TriangulationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(TriangulationError::BadPerm(s.to_string()));
        }
        let mut images = [0u8; 4];
        for (slot, b) in images.iter_mut().zip(bytes) {
            *slot = b.wrapping_sub(b'0');
        }
        Perm4::new(images).ok_or_else(|| TriangulationError::BadPerm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub perm: Perm4,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("bad permutation `{0}`")]
    BadPerm(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("tetrahedron {tet} face {face} glued twice")]
    DoubleGluing { tet: usize, face: usize },
    #[error("gluing of tetrahedron {tet} face {face} does not send face {face} to face {target}")]
    FaceMismatch { tet: usize, face: usize, target: usize },
    #[error("index out of range: tetrahedron {tet} face {face}")]
    OutOfRange { tet: usize, face: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Triangulation {
    gluings: Vec<[Option<Gluing>; 4]>,
}

impl Triangulation {
    pub fn with_tetrahedra(n: usize) -> Triangulation {
        Triangulation {
            gluings: vec![[None; 4]; n],
        }
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Option<Gluing>; 4]] {
        &self.gluings
    }

    /// Glues face `face` of `tet` to `perm[face]` of `other`, and the reverse.
    pub fn join(
        &mut self,
        tet: usize,
        face: usize,
        other: usize,
        perm: Perm4,
    ) -> Result<(), TriangulationError> {
        let target = perm.apply(face);
        let n = self.gluings.len();
        if tet >= n || other >= n || face > 3 {
            return Err(TriangulationError::OutOfRange { tet, face });
        }
        if self.gluings[tet][face].is_some() {
            return Err(TriangulationError::DoubleGluing { tet, face });
        }
        if self.gluings[other][target].is_some() && (other, target) != (tet, face) {
            return Err(TriangulationError::DoubleGluing {
                tet: other,
                face: target,
            });
        }
        self.gluings[tet][face] = Some(Gluing {
            tet: other,
            face: target,
            perm,
        });
        self.gluings[other][target] = Some(Gluing {
            tet,
            face,
            perm: perm.inverse(),
        });
        Ok(())
    }

    /// Sets one side of a gluing without touching its partner. Used by
    /// tests and parsers that need to represent broken data.
    pub fn set_one_sided(&mut self, tet: usize, face: usize, g: Option<Gluing>) {
        self.gluings[tet][face] = g;
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tri {}", self.tet_count());
        for (t, faces) in self.gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if let Some(g) = g {
                    if (t, f) <= (g.tet, g.face) {
                        let _ = writeln!(out, "{} {} -> {} {} {}", t, f, g.tet, g.face, g.perm);
                    }
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Triangulation, TriangulationError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, msg: &str| TriangulationError::Parse {
            line,
            msg: msg.to_string(),
        };
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let count = header
            .strip_prefix("tri ")
            .and_then(|c| c.trim().parse::<usize>().ok())
            .ok_or_else(|| parse_err(ln, "expected `tri <count>`"))?;
        let mut tri = Triangulation::with_tetrahedra(count);
        for (ln, line) in lines {
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 6 || tok[2] != "->" {
                return Err(parse_err(ln, "expected `<tet> <face> -> <tet> <face> <perm>`"));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(ln, "bad integer"));
            let (t, f, t2, f2) = (num(tok[0])?, num(tok[1])?, num(tok[3])?, num(tok[4])?);
            let perm: Perm4 = tok[5].parse()?;
            if perm.apply(f) != f2 {
                return Err(TriangulationError::FaceMismatch {
                    tet: t,
                    face: f,
                    target: f2,
                });
            }
            tri.join(t, f, t2, perm)?;
        }
        Ok(tri)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perm_basics() {
        let p = Perm4([1, 0, 2, 3]);
        assert_eq!(p.sign(), -1);
        assert_eq!(Perm4::IDENTITY.sign(), 1);
        assert_eq!(p.inverse(), p);
        assert_eq!("1230".parse::<Perm4>().unwrap(), Perm4([1, 2, 3, 0]));
        assert!("1123".parse::<Perm4>().is_err());
        assert!("123".parse::<Perm4>().is_err());
        assert!(Perm4::new([0, 1, 2, 4]).is_none());
    }

    #[test]
    fn double_gluing_rejected() {
        let mut t = Triangulation::with_tetrahedra(2);
        t.join(0, 0, 1, Perm4::IDENTITY).unwrap();
        assert_eq!(
            t.join(0, 0, 1, Perm4([1, 0, 2, 3])),
            Err(TriangulationError::DoubleGluing { tet: 0, face: 0 })
        );
    }

    #[test]
    fn text_round_trip_and_ordering() {
        let mut t = Triangulation::with_tetrahedra(2);
        t.join(1, 2, 0, Perm4([0, 1, 3, 2])).unwrap();
        t.join(0, 0, 1, Perm4::IDENTITY).unwrap();
        let text = t.to_text();
        assert_eq!(text, "tri 2\n0 0 -> 1 0 0123\n0 3 -> 1 2 0132\n");
        assert_eq!(Triangulation::from_text(&text).unwrap(), t);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Triangulation::from_text("tri x"),
            Err(TriangulationError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Triangulation::from_text("tri 1\n0 0 -> 0 1 0123"),
            Err(TriangulationError::FaceMismatch { .. })
        ));
        assert!(matches!(
            Triangulation::from_text("tri 1\n0 0 -> 3 0 0123"),
            Err(TriangulationError::OutOfRange { .. })
        ));
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(v in proptest::sample::subsequence(vec![0u8,1,2,3], 4).prop_shuffle()) {
            let p = Perm4::new([v[0], v[1], v[2], v[3]]).unwrap();
            let q = p.inverse();
            for i in 0..4 {
                prop_assert_eq!(q.apply(p.apply(i)), i);
            }
            prop_assert_eq!(p.sign(), q.sign());
        }
    }
}
