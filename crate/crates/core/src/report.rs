//! Full pipeline for a single `(p, q, n, m)` case and parallel sweeps.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{classify, ArithError, LinkClass, SlopePair};
use crate::bounds::{bounds_report, BoundsError, BoundsReport};
use crate::diagram::{analyze, TwistAnalysis};
use crate::fundgroup::{abelianization, presentation_from_scheme, GroupPresentation};
use crate::minkus::{build_scheme, quotient, triangulate, MinkusError, MinkusScheme};
use crate::triangulation::Triangulation;
use crate::verify::{homology, triangulation_complex, validate_triangulation, HomologyResult, ValidationReport};

/// Default sweep limits, exceeded only with an explicit override.
pub const SWEEP_P_MAX: u64 = 25;
pub const SWEEP_N_MAX: u64 = 12;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Minkus(#[from] MinkusError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("internal consistency failure: {0}")]
    Defect(String),
}

impl ReportError {
    /// Whether the error comes from bad input rather than a defect.
    pub fn is_input_error(&self) -> bool {
        match self {
            ReportError::Arith(_) | ReportError::Bounds(_) => true,
            ReportError::Minkus(MinkusError::Inconsistent(_)) => false,
            ReportError::Minkus(_) => true,
            ReportError::Defect(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CaseInput {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub m: u64,
}

impl CaseInput {
    pub fn slope(&self) -> Result<SlopePair, ArithError> {
        SlopePair::new(self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeStats {
    pub polygons: usize,
    pub polygon_size: usize,
    pub shift: usize,
    pub quotient_vertices: usize,
    pub quotient_edges: usize,
    pub quotient_faces: usize,
}

impl SchemeStats {
    fn new(sch: &MinkusScheme) -> Result<SchemeStats, MinkusError> {
        let quo = quotient(sch)?;
        Ok(SchemeStats {
            polygons: sch.upper.len() + sch.lower.len(),
            polygon_size: sch.p() + 1,
            shift: sch.shift,
            quotient_vertices: quo.vertex_count,
            quotient_edges: quo.edge_count,
            quotient_faces: quo.face_count,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationStats {
    pub generators: usize,
    pub relators: usize,
    pub triangular_count: usize,
    pub short_count: usize,
    pub degenerate_count: usize,
    pub abelianization: HomologyResult,
}

impl PresentationStats {
    pub fn new(g: &GroupPresentation) -> PresentationStats {
        PresentationStats {
            generators: g.generators.len(),
            relators: g.relators.len(),
            triangular_count: g.triangular_count,
            short_count: g.short_count,
            degenerate_count: g.degenerate_count,
            abelianization: abelianization(g),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub input: CaseInput,
    pub class: LinkClass,
    pub twist: TwistAnalysis,
    pub scheme: SchemeStats,
    pub validation: ValidationReport,
    pub homology: HomologyResult,
    pub presentation: PresentationStats,
    pub bounds: BoundsReport,
    /// Failed internal cross-checks, empty when everything agrees.
    pub issues: Vec<String>,
}

impl Report {
    pub fn is_consistent(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Scheme and triangulation for one case, with input checks.
pub fn construct(input: CaseInput) -> Result<(MinkusScheme, Triangulation), ReportError> {
    let s = input.slope()?;
    let sch = build_scheme(s, input.n, input.m)?;
    let tri = triangulate(&sch)?;
    Ok((sch, tri))
}

pub fn build_report(input: CaseInput) -> Result<Report, ReportError> {
    let s = input.slope()?;
    let (sch, tri) = construct(input)?;
    let class = classify(s);
    let twist = analyze(s);
    let validation = validate_triangulation(&tri);
    let homology = homology(&triangulation_complex(&tri), 1).map_err(|e| ReportError::Defect(e.to_string()))?;
    let pres = presentation_from_scheme(&sch)?;
    let presentation = PresentationStats::new(&pres);
    let bounds = bounds_report(s, input.n, None)?;

    let mut issues = Vec::new();
    if twist.twist_number != class.ell {
        issues.push(format!("twist number {} differs from ell {}", twist.twist_number, class.ell));
    }
    if !validation.closed_manifold {
        issues.push("triangulation is not a closed manifold".into());
    }
    if !validation.orientable {
        issues.push("triangulation is not orientable".into());
    }
    if validation.tet_count as u64 != bounds.upper {
        issues.push(format!("{} tetrahedra, expected {}", validation.tet_count, bounds.upper));
    }
    if presentation.triangular_count as u64 != bounds.upper {
        issues.push(format!(
            "{} triangular relators, expected {}",
            presentation.triangular_count, bounds.upper
        ));
    }
    if presentation.abelianization != homology {
        issues.push(format!(
            "abelianization {} differs from H1 {}",
            presentation.abelianization, homology
        ));
    }
    Ok(Report {
        input,
        class,
        twist,
        scheme: SchemeStats::new(&sch)?,
        validation,
        homology,
        presentation,
        bounds,
        issues,
    })
}

/// All admissible `(p, q, n, m)` with `2 <= p <= p_max` and `2 <= n <= n_max`,
/// in lexicographic order.
pub fn admissible_cases(p_max: u64, n_max: u64) -> Vec<CaseInput> {
    let mut out = Vec::new();
    for p in 2..=p_max {
        for q in (1..p).filter(|q| q.gcd(&p) == 1) {
            for n in 2..=n_max {
                if p % 2 == 1 {
                    out.push(CaseInput { p, q, n, m: 1 });
                } else {
                    for m in (1..n).filter(|m| m.gcd(&n) == 1) {
                        out.push(CaseInput { p, q, n, m });
                    }
                }
            }
        }
    }
    out
}

/// Reports for every admissible case, in the order of [`admissible_cases`].
pub fn sweep(p_max: u64, n_max: u64) -> Result<Vec<Report>, ReportError> {
    admissible_cases(p_max, n_max)
        .into_par_iter()
        .map(build_report)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_enumeration() {
        assert_eq!(admissible_cases(2, 2), vec![CaseInput { p: 2, q: 1, n: 2, m: 1 }]);
        let cases = admissible_cases(4, 3);
        // p=2: (n=2,m=1), (n=3,m=1,2); p=3: q=1,2 x n=2,3; p=4: q=1,3 x 3.
        assert_eq!(cases.len(), 3 + 4 + 6);
        let mut sorted = cases.clone();
        sorted.sort();
        assert_eq!(sorted, cases);
    }

    #[test]
    fn hantzsche_wendt_report() {
        let r = build_report(CaseInput { p: 5, q: 3, n: 3, m: 1 }).unwrap();
        assert!(r.is_consistent(), "{:?}", r.issues);
        assert_eq!(r.homology.to_string(), "Z/4 + Z/4");
        assert_eq!(r.validation.tet_count, 12);
        assert_eq!(r.scheme.polygons, 6);
    }

    #[test]
    fn input_errors() {
        let e = build_report(CaseInput { p: 4, q: 2, n: 2, m: 1 }).unwrap_err();
        assert!(e.is_input_error());
        let e = build_report(CaseInput { p: 5, q: 2, n: 3, m: 2 }).unwrap_err();
        assert!(e.is_input_error());
        let e = build_report(CaseInput { p: 6, q: 1, n: 4, m: 2 }).unwrap_err();
        assert!(e.is_input_error());
        assert!(!ReportError::Defect("x".into()).is_input_error());
    }

    #[test]
    fn small_sweep() {
        let rs = sweep(5, 3).unwrap();
        assert_eq!(rs.len(), admissible_cases(5, 3).len());
        assert!(rs.iter().all(Report::is_consistent));
        let l52 = rs
            .iter()
            .find(|r| r.input == CaseInput { p: 5, q: 2, n: 2, m: 1 })
            .unwrap();
        assert_eq!(l52.homology, HomologyResult::cyclic(5));
    }
}
