//! Complexity and volume estimates for `M_n(p,q)` and `S³ \ K(p,q)`.
//!
//! The offsets `2.7066` and `2.6667` are used exactly as printed; their
//! closed forms are not known here.

use std::f64::consts::{PI, SQRT_2};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{classify, SlopePair};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Volume of the regular ideal tetrahedron.
    pub v3: f64,
    /// Volume of the regular ideal octahedron.
    pub v8: f64,
    pub gf_offset: f64,
    pub ell_offset: f64,
    pub borromean_vol: f64,
    /// Printed volume of the Whitehead link complement, used to check `v8`.
    pub whitehead_vol: f64,
}

pub const CONSTANTS: Constants = Constants {
    v3: 1.014_941_606_409_653_6,
    v8: 3.663_862_376_708_876,
    gf_offset: 2.7066,
    ell_offset: 2.6667,
    borromean_vol: 7.32772,
    whitehead_vol: 3.66386,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("covering order n = {0} must be at least 2")]
    CoveringOrder(u64),
    #[error("{0} is a torus link, not hyperbolic")]
    Torus(SlopePair),
    #[error("volume must be positive, got {0}")]
    NonPositiveVolume(f64),
    #[error("bound overflows")]
    Overflow,
}

fn check_n(n: u64) -> Result<(), BoundsError> {
    if n < 2 {
        Err(BoundsError::CoveringOrder(n))
    } else {
        Ok(())
    }
}

fn check_hyperbolic(s: SlopePair) -> Result<u64, BoundsError> {
    let class = classify(s);
    if class.is_torus {
        Err(BoundsError::Torus(s))
    } else {
        Ok(class.ell)
    }
}

/// `n (p - 1)`.
pub fn upper_bound(s: SlopePair, n: u64) -> Result<u64, BoundsError> {
    check_n(n)?;
    n.checked_mul(s.p() - 1).ok_or(BoundsError::Overflow)
}

/// `n (min{k,m} + k + m - 3)` when the class has the form `p/q = k + 1/m`
/// with `k, m` not both odd.
pub fn improved_upper(s: SlopePair, n: u64) -> Result<Option<u64>, BoundsError> {
    check_n(n)?;
    let Some(km) = classify(s).km_form else {
        return Ok(None);
    };
    if km.both_odd() {
        return Ok(None);
    }
    let per = km.k.min(km.m) + km.k + km.m - 3;
    n.checked_mul(per).map(Some).ok_or(BoundsError::Overflow)
}

/// The class of `K(5,2)` or `K(7,3)`.
pub fn is_excluded_pair(s: SlopePair) -> bool {
    let fig8 = SlopePair::new(5, 2).expect("valid");
    let five2 = SlopePair::new(7, 3).expect("valid");
    s.is_equivalent(&fig8) || s.is_equivalent(&five2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CValue {
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "2sqrt2")]
    TwoSqrtTwo,
}

impl CValue {
    pub fn value(self) -> f64 {
        match self {
            CValue::Four => 4.0,
            CValue::TwoSqrtTwo => 2.0 * SQRT_2,
        }
    }

    /// Smallest `n` for which the inequality is proven with this `c`.
    pub fn min_n(self) -> u64 {
        match self {
            CValue::Four => 7,
            CValue::TwoSqrtTwo => 6,
        }
    }
}

/// `n (1 - c π² / n²)^{3/2} · factor` with its validity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerEstimate {
    pub c: CValue,
    pub min_n: u64,
    pub valid: bool,
    #[serde(serialize_with = "sig6")]
    pub factor: f64,
    /// `None` when `1 - c π² / n²` is negative.
    #[serde(serialize_with = "sig6_opt")]
    pub value: Option<f64>,
}

impl LowerEstimate {
    fn new(c: CValue, n: u64, factor: f64, allowed: bool) -> LowerEstimate {
        let nf = n as f64;
        let base = 1.0 - c.value() * PI * PI / (nf * nf);
        LowerEstimate {
            c,
            min_n: c.min_n(),
            valid: allowed && n >= c.min_n(),
            factor,
            value: (base >= 0.0).then(|| nf * base.powf(1.5) * factor),
        }
    }

    /// Multiplier of `n`.
    pub fn coefficient(&self, n: u64) -> Option<f64> {
        self.value.map(|v| v / n as f64)
    }
}

/// `max{2, 2ℓ - 2.6667}`.
pub fn volume_factor(ell: u64) -> f64 {
    f64::max(2.0, 2.0 * ell as f64 - CONSTANTS.ell_offset)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub ell: u64,
    pub excluded_pair: bool,
    /// The `c = 2√2` estimate, then the `c = 4` one.
    pub candidates: [LowerEstimate; 2],
}

impl LowerBound {
    /// Largest valid estimate.
    pub fn best(&self) -> Option<LowerEstimate> {
        self.candidates
            .iter()
            .filter(|c| c.valid && c.value.is_some())
            .copied()
            .max_by(|a, b| a.value.partial_cmp(&b.value).expect("finite"))
    }
}

fn candidates(n: u64, factor: f64, excluded: bool) -> [LowerEstimate; 2] {
    [
        LowerEstimate::new(CValue::TwoSqrtTwo, n, factor, !excluded),
        LowerEstimate::new(CValue::Four, n, factor, true),
    ]
}

/// Complexity lower bound from the twist number.
pub fn lower_bound(s: SlopePair, n: u64) -> Result<LowerBound, BoundsError> {
    check_n(n)?;
    let ell = check_hyperbolic(s)?;
    let excluded = is_excluded_pair(s);
    Ok(LowerBound {
        ell,
        excluded_pair: excluded,
        candidates: candidates(n, volume_factor(ell), excluded),
    })
}

/// `v3 · max{2, 2ℓ - 2.6667}`.
pub fn vol_lower(s: SlopePair) -> Result<f64, BoundsError> {
    let ell = check_hyperbolic(s)?;
    Ok(CONSTANTS.v3 * volume_factor(ell))
}

/// `2 v8 (ℓ - 1)`.
pub fn vol_upper(s: SlopePair) -> Result<f64, BoundsError> {
    let ell = check_hyperbolic(s)?;
    Ok(2.0 * CONSTANTS.v8 * (ell as f64 - 1.0))
}

/// Complexity lower bound `n (1 - c π²/n²)^{3/2} vol / v3` from a known
/// volume of the link complement. `c = 4` for the excluded pair, `2√2`
/// otherwise.
pub fn volume_based_lower(vol: f64, n: u64, excluded: bool) -> Result<LowerEstimate, BoundsError> {
    check_n(n)?;
    if vol <= 0.0 || !vol.is_finite() {
        return Err(BoundsError::NonPositiveVolume(vol));
    }
    let c = if excluded {
        CValue::Four
    } else {
        CValue::TwoSqrtTwo
    };
    Ok(LowerEstimate::new(c, n, vol / CONSTANTS.v3, true))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub slope: SlopePair,
    pub n: u64,
    pub upper: u64,
    pub improved_upper: Option<u64>,
    pub lower: Option<LowerBound>,
    pub lower_absent_reason: Option<String>,
    #[serde(serialize_with = "sig6_opt")]
    pub vol_lower: Option<f64>,
    #[serde(serialize_with = "sig6_opt")]
    pub vol_upper: Option<f64>,
    #[serde(serialize_with = "sig6_opt")]
    pub vol_input: Option<f64>,
    pub vol_based_cover_lower: Option<LowerEstimate>,
    pub is_hyperbolic: bool,
    pub excluded_pair: bool,
}

pub fn bounds_report(s: SlopePair, n: u64, vol: Option<f64>) -> Result<BoundsReport, BoundsError> {
    let upper = upper_bound(s, n)?;
    let improved_upper = improved_upper(s, n)?;
    let excluded = is_excluded_pair(s);
    let (lower, lower_absent_reason) = match lower_bound(s, n) {
        Ok(l) => (Some(l), None),
        Err(e @ BoundsError::Torus(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let vol_based_cover_lower = vol.map(|v| volume_based_lower(v, n, excluded)).transpose()?;
    Ok(BoundsReport {
        slope: s,
        n,
        upper,
        improved_upper,
        is_hyperbolic: lower.is_some(),
        lower,
        lower_absent_reason,
        vol_lower: vol_lower(s).ok(),
        vol_upper: vol_upper(s).ok(),
        vol_input: vol,
        vol_based_cover_lower,
        excluded_pair: excluded,
    })
}

/// Decimal string with six significant digits.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = |x: f64| 5 - x.abs().log10().floor() as i32;
    let mut d = digits(x);
    let s = format!("{:.*}", d.max(0) as usize, x);
    // Rounding may carry into a new leading digit.
    let rounded: f64 = s.parse().unwrap_or(x);
    if digits(rounded) != d {
        d = digits(rounded);
        return format!("{:.*}", d.max(0) as usize, x);
    }
    s
}

fn sig6<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_sig6(*x))
}

fn sig6_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&format_sig6(*v)),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp(p: u64, q: u64) -> SlopePair {
        SlopePair::new(p, q).unwrap()
    }

    #[test]
    fn upper_bounds() {
        assert_eq!(upper_bound(sp(5, 2), 7), Ok(28));
        assert_eq!(upper_bound(sp(9, 4), 3), Ok(24));
        assert_eq!(upper_bound(sp(2, 1), 2), Ok(2));
        assert_eq!(upper_bound(sp(2, 1), 1), Err(BoundsError::CoveringOrder(1)));
    }

    #[test]
    fn improved_bounds() {
        assert_eq!(improved_upper(sp(5, 2), 10), Ok(Some(30)));
        assert_eq!(improved_upper(sp(7, 3), 10), Ok(Some(40)));
        assert_eq!(improved_upper(sp(9, 4), 10), Ok(Some(50)));
        assert_eq!(improved_upper(sp(7, 1), 10), Ok(None));
        // 10/3 = 3 + 1/3 has k, m both odd.
        assert_eq!(improved_upper(sp(10, 3), 10), Ok(None));
    }

    #[test]
    fn excluded_pair_is_class_level() {
        assert!(is_excluded_pair(sp(5, 3)));
        assert!(is_excluded_pair(sp(7, 2)));
        assert!(is_excluded_pair(sp(7, 5)));
        assert!(!is_excluded_pair(sp(9, 4)));
        assert!(!is_excluded_pair(sp(7, 1)));
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound(sp(3, 1), 10), Err(BoundsError::Torus(sp(3, 1))));
        let l = lower_bound(sp(23, 13), 10).unwrap();
        assert_eq!(l.ell, 3);
        let two = l.candidates[0];
        assert!(two.valid);
        assert!((two.value.unwrap() - 20.400_350_462_534_8).abs() < 1e-9);

        let l = lower_bound(sp(5, 2), 10).unwrap();
        assert!(!l.candidates[0].valid);
        assert!(l.candidates[1].valid);
        assert!((l.candidates[1].value.unwrap() - 9.416_627_855_950_75).abs() < 1e-9);
        assert_eq!(l.best(), Some(l.candidates[1]));

        let far = lower_bound(sp(5, 2), 1_000_000).unwrap().candidates[1];
        assert!((far.coefficient(1_000_000).unwrap() - 2.0).abs() < 1e-4);

        let small = lower_bound(sp(9, 4), 2).unwrap();
        assert_eq!(small.candidates[1].value, None);
        assert!(!small.candidates[1].valid);
    }

    #[test]
    fn volume_bounds() {
        assert!((vol_lower(sp(5, 2)).unwrap() - 2.02988).abs() < 1e-4);
        assert!((vol_lower(sp(9, 4)).unwrap() - 2.0 * CONSTANTS.v3).abs() < 1e-12);
        assert!((vol_lower(sp(23, 13)).unwrap() - 3.383_104_856_645_3).abs() < 1e-9);
        assert!((vol_upper(sp(5, 2)).unwrap() - 7.327_724_753_417_752).abs() < 1e-12);
        assert!((vol_upper(sp(23, 13)).unwrap() - 4.0 * CONSTANTS.v8).abs() < 1e-12);
        assert!(vol_upper(sp(5, 1)).is_err());
    }

    #[test]
    fn volume_based() {
        let n = 10_000_000;
        let e = volume_based_lower(2.81812, n, true).unwrap();
        assert_eq!(e.c, CValue::Four);
        assert!((e.coefficient(n).unwrap() - 2.77664).abs() < 1e-4);
        let e = volume_based_lower(3.16396, n, false).unwrap();
        assert_eq!(e.c, CValue::TwoSqrtTwo);
        assert!((e.coefficient(n).unwrap() - 3.11739).abs() < 1e-4);
        let e = volume_based_lower(CONSTANTS.v3, n, false).unwrap();
        assert!((e.coefficient(n).unwrap() - 1.0).abs() < 1e-5);
        assert!(volume_based_lower(0.0, 7, false).is_err());
        assert!(volume_based_lower(-1.0, 7, false).is_err());
    }

    #[test]
    fn constants_consistency() {
        let c = CONSTANTS;
        assert!((c.ell_offset - c.gf_offset / c.v3).abs() < 1e-3);
        assert!((c.v8 - c.whitehead_vol).abs() < 1e-5);
        for ell in 1..=20u64 {
            let l = ell as f64;
            assert!((2.0 * c.v3 * l - c.gf_offset - c.v3 * (2.0 * l - c.ell_offset)).abs() < 1e-3);
        }
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(2.0298832128193072), "2.02988");
        assert_eq!(format_sig6(40.0), "40.0000");
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
        assert_eq!(format_sig6(9.9999996), "10.0000");
        assert_eq!(format_sig6(-3.16396), "-3.16396");
        assert_eq!(format_sig6(1234567.0), "1234567");
    }

    #[test]
    fn report_json() {
        let r = bounds_report(sp(7, 3), 10, Some(2.81812)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["upper"], 60);
        assert_eq!(v["improved_upper"], 40);
        assert_eq!(v["vol_input"], "2.81812");
        assert_eq!(v["excluded_pair"], true);
        let t = bounds_report(sp(3, 1), 10, None).unwrap();
        assert!(t.lower.is_none());
        assert!(t.lower_absent_reason.unwrap().contains("torus"));
    }

    proptest! {
        #[test]
        fn improved_never_worse(k in 2u64..=50, m in 2u64..=50) {
            prop_assert!(k.min(m) + k + m - 3 <= k * m);
        }

        #[test]
        fn lower_monotone_past_threshold(p in 5u64..60, q in 1u64..60, n in 7u64..200) {
            prop_assume!(q < p && num_integer::gcd(p, q) == 1);
            let s = sp(p, q);
            prop_assume!(!classify(s).is_torus);
            let a = lower_bound(s, n).unwrap();
            let b = lower_bound(s, n + 1).unwrap();
            for i in 0..2 {
                prop_assert!(b.candidates[i].value.unwrap() > a.candidates[i].value.unwrap());
            }
        }

        #[test]
        fn vol_lower_floor(p in 5u64..200, q in 1u64..200) {
            prop_assume!(q < p && num_integer::gcd(p, q) == 1);
            let s = sp(p, q);
            prop_assume!(!classify(s).is_torus);
            prop_assert!(vol_lower(s).unwrap() >= 2.0 * CONSTANTS.v3);
        }
    }
}
