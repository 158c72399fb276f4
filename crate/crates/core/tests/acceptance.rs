//! Acceptance suite. Runs without the libtest harness and prints one line per
//! criterion; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;

use twobridge::bounds::{
    improved_upper, lower_bound, upper_bound, vol_lower, volume_based_lower, CONSTANTS,
};
use twobridge::diagram::{build_conway, is_twist_reduced, twist_number};
use twobridge::fundgroup::{abelianization, presentation_from_scheme};
use twobridge::minkus::{build_scheme, quotient_complex, triangulate};
use twobridge::report::{admissible_cases, CaseInput};
use twobridge::verify::{homology, triangulation_complex, validate_triangulation, HomologyResult};
use twobridge::{classify, ell, evaluate_cf, minimized_expansion, SlopePair};

type Criterion = (&'static str, fn() -> String);

const VOL_TOL: f64 = 1e-4;
const CONST_TOL: f64 = 1e-3;
const V8_TOL: f64 = 2e-5;

fn slopes(p_max: u64) -> Vec<SlopePair> {
    (2..=p_max)
        .flat_map(|p| (1..p).filter(move |q| q.gcd(&p) == 1).map(move |q| SlopePair::new(p, q).unwrap()))
        .collect()
}

/// Euclid, independent of the library's expansion.
fn euclid_length(mut p: u64, mut q: u64) -> usize {
    let mut len = 0;
    while q != 0 {
        len += 1;
        let r = p % q;
        p = q;
        q = r;
    }
    len
}

fn grid() -> Vec<CaseInput> {
    admissible_cases(13, 8)
}

fn continued_fractions() -> String {
    let cf = |p, q| minimized_expansion(SlopePair::new(p, q).unwrap()).coefficients().to_vec();
    assert_eq!(cf(23, 13), vec![1, 1, 3, 3]);
    assert_eq!(cf(12, 5), vec![2, 2, 2]);
    let all = slopes(200);
    for &s in &all {
        let e = minimized_expansion(s);
        assert_eq!(evaluate_cf(&e).unwrap(), s, "{s}");
        let c = e.coefficients();
        assert!(c.iter().all(|&a| a > 0) && (c.len() == 1 || *c.last().unwrap() > 1), "{s}");
    }
    format!("{} slopes round-trip", all.len())
}

fn ell_orbit_minimum() -> String {
    let all = slopes(60);
    for &s in &all {
        let brute = s.orbit().iter().map(|&r| euclid_length(s.p(), r)).min().unwrap() as u64;
        assert_eq!(ell(s), brute, "{s}");
    }
    format!("{} slopes", all.len())
}

fn twist_numbers() -> String {
    let all = slopes(200);
    all.par_iter().for_each(|&s| {
        let d = build_conway(&minimized_expansion(s));
        assert_eq!(twist_number(&d), ell(s), "{s}");
    });
    let mut reduced = 0;
    for s in slopes(60) {
        let e = minimized_expansion(s);
        if e.coefficients()[0] > 1 {
            assert!(is_twist_reduced(&build_conway(&e)).unwrap(), "{s}");
            reduced += 1;
        }
    }
    format!("{} twist numbers, {reduced} twist-reduced forms", all.len())
}

fn triangulation_closedness() -> String {
    let cases = grid();
    cases.par_iter().for_each(|c| {
        let s = SlopePair::new(c.p, c.q).unwrap();
        let t = triangulate(&build_scheme(s, c.n, c.m).unwrap()).unwrap();
        let r = validate_triangulation(&t);
        assert_eq!(t.tet_count() as u64, c.n * (c.p - 1), "{c:?}");
        assert!(r.all_faces_glued && r.involutive && r.orientable, "{c:?}");
        assert_eq!(r.chi, 0, "{c:?}");
        assert!(r.vertex_links.iter().all(|l| l.chi == 2 && l.connected), "{c:?}");
        assert!(r.closed_manifold, "{c:?}");
    });
    format!("{} admissible cases", cases.len())
}

fn lens_spaces() -> String {
    let all = slopes(13);
    for &s in &all {
        let t = triangulate(&build_scheme(s, 2, 1).unwrap()).unwrap();
        let h = homology(&triangulation_complex(&t), 1).unwrap();
        assert_eq!(h, HomologyResult::cyclic(s.p()), "{s}");
    }
    format!("{} lens spaces", all.len())
}

fn hantzsche_wendt() -> String {
    let sch = build_scheme(SlopePair::new(5, 3).unwrap(), 3, 1).unwrap();
    let t = triangulate(&sch).unwrap();
    let r = validate_triangulation(&t);
    assert_eq!(t.tet_count(), 12);
    assert!(r.closed_manifold && r.orientable);
    let h = homology(&triangulation_complex(&t), 1).unwrap();
    assert_eq!(h, HomologyResult::new(0, vec![4.into(), 4.into()]));
    let g = presentation_from_scheme(&sch).unwrap();
    assert_eq!(abelianization(&g), h);
    format!("H1 = {h}")
}

fn presentation_counts() -> String {
    let cases = grid();
    let degenerate: usize = cases
        .par_iter()
        .map(|c| {
            let s = SlopePair::new(c.p, c.q).unwrap();
            let sch = build_scheme(s, c.n, c.m).unwrap();
            let g = presentation_from_scheme(&sch).unwrap();
            assert_eq!(g.triangular_count as u64, c.n * (c.p - 1), "{c:?}");
            let cw = homology(&quotient_complex(&sch).unwrap(), 1).unwrap();
            assert_eq!(abelianization(&g), cw, "{c:?}");
            g.degenerate_count
        })
        .sum();
    format!("{} cases, {degenerate} degenerate relators", cases.len())
}

fn bounds_table() -> String {
    let table = [((5, 2), 4, 3), ((7, 3), 6, 4), ((9, 4), 8, 5)];
    for n in 2..=100u64 {
        for &((p, q), up, imp) in &table {
            let s = SlopePair::new(p, q).unwrap();
            assert_eq!(upper_bound(s, n).unwrap(), up * n);
            assert_eq!(improved_upper(s, n).unwrap(), Some(imp * n));
        }
    }
    "4n/3n, 6n/4n, 8n/5n".into()
}

fn volume_coefficients() -> String {
    let n = 1_000_000_000u64;
    let coeff = |vol, excluded| volume_based_lower(vol, n, excluded).unwrap().coefficient(n).unwrap();
    let a = coeff(2.81812, true);
    let b = coeff(3.16396, false);
    let v = vol_lower(SlopePair::new(5, 2).unwrap()).unwrap();
    assert!((a - 2.77664).abs() < VOL_TOL, "{a}");
    assert!((b - 3.11739).abs() < VOL_TOL, "{b}");
    assert!((v - 2.02988).abs() < VOL_TOL, "{v}");
    format!("{a:.6}, {b:.6}, vol_lower {v:.6}")
}

fn two_sidedness() -> String {
    let mut checked = 0;
    for s in slopes(25).into_iter().filter(|&s| !classify(s).is_torus) {
        for n in 2..=100u64 {
            let up = upper_bound(s, n).unwrap() as f64;
            for c in lower_bound(s, n).unwrap().candidates.iter().filter(|c| c.valid) {
                let lo = c.value.expect("valid estimates are defined");
                assert!(lo < up, "{s} n={n} {lo} >= {up}");
                checked += 1;
            }
        }
    }
    for k in 2..=50u64 {
        for m in 2..=50u64 {
            assert!(k.min(m) + k + m - 3 <= k * m);
            let s = SlopePair::new(k * m + 1, m).unwrap();
            for n in [2, 7, 100] {
                if let Some(i) = improved_upper(s, n).unwrap() {
                    assert!(i <= upper_bound(s, n).unwrap(), "k={k} m={m}");
                }
            }
        }
    }
    format!("{checked} valid lower estimates below the upper bound")
}

fn constants() -> String {
    let c = CONSTANTS;
    let worst = (1..=20u64)
        .map(|l| {
            let l = l as f64;
            (2.0 * c.v3 * l - c.gf_offset - c.v3 * (2.0 * l - c.ell_offset)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < CONST_TOL, "{worst}");
    let dv8 = (2.0 * c.v8 - 2.0 * 3.66386).abs();
    assert!(dv8 < V8_TOL, "{dv8}");
    format!("max deviation {worst:.2e}, v8 deviation {dv8:.2e}")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("continued fractions", continued_fractions),
        ("ell is the orbit minimum", ell_orbit_minimum),
        ("twist numbers", twist_numbers),
        ("triangulation size and closedness", triangulation_closedness),
        ("lens-space homology", lens_spaces),
        ("Hantzsche-Wendt fixture", hantzsche_wendt),
        ("presentation counts", presentation_counts),
        ("bounds table", bounds_table),
        ("volume-based coefficients", volume_coefficients),
        ("two-sidedness", two_sidedness),
        ("constant consistency", constants),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f));
        let secs = t0.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2} FAIL {name}: {msg} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
