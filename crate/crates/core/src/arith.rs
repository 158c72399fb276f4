//! Slopes of two-bridge links and their continued fractions.
//!
//! A two-bridge link `K(p, q)` is determined by a coprime pair with
//! `p >= 2` and `0 < q < p`. Two pairs give the same (unoriented) link iff
//! they share `p` and `q' = ±q^{±1} (mod p)`, so every slope has an orbit of
//! at most four `q`-values.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("p must be at least 2 (got {0})")]
    PTooSmall(u64),
    #[error("q must satisfy 0 < q < p (got p = {p}, q = {q})")]
    QOutOfRange { p: u64, q: u64 },
    #[error("gcd(p, q) = {gcd} != 1 for p = {p}, q = {q}")]
    NotCoprime { p: u64, q: u64, gcd: u64 },
    #[error("continued fraction must have at least one coefficient")]
    EmptyExpansion,
    #[error("continued fraction coefficients must be positive")]
    NonPositiveCoefficient,
    #[error("continued fraction evaluates to {0}, which is not a slope with p >= 2")]
    NotASlope(u64),
    #[error("continued fraction value does not fit in 64 bits")]
    Overflow,
}

/// A coprime pair `(p, q)` with `p >= 2` and `0 < q < p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlopePair {
    p: u64,
    q: u64,
}

impl SlopePair {
    pub fn new(p: u64, q: u64) -> Result<Self, ArithError> {
        if p < 2 {
            return Err(ArithError::PTooSmall(p));
        }
        if q == 0 || q >= p {
            return Err(ArithError::QOutOfRange { p, q });
        }
        let gcd = p.gcd(&q);
        if gcd != 1 {
            return Err(ArithError::NotCoprime { p, q, gcd });
        }
        Ok(SlopePair { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `K(p, q)` is a knot iff `p` is odd.
    pub fn is_knot(&self) -> bool {
        self.p % 2 == 1
    }

    /// The inverse `r` of `q` modulo `p`, with `1 <= r <= p - 1`.
    pub fn q_inverse(&self) -> u64 {
        mod_inverse(self.q, self.p).expect("q is a unit mod p")
    }

    /// Orbit `[q, p - q, r, p - r]` of equivalent `q`-values, in that order.
    /// Entries may repeat.
    pub fn orbit_raw(&self) -> [u64; 4] {
        let r = self.q_inverse();
        [self.q, self.p - self.q, r, self.p - r]
    }

    /// Sorted distinct orbit representatives.
    pub fn orbit(&self) -> Vec<u64> {
        let mut v = self.orbit_raw().to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The orbit member with the smallest `q`.
    pub fn canonical(&self) -> SlopePair {
        SlopePair {
            p: self.p,
            q: self.orbit()[0],
        }
    }

    pub fn is_equivalent(&self, other: &SlopePair) -> bool {
        self.p == other.p && self.canonical() == other.canonical()
    }

    /// Every admissible `q` for a given `p`.
    pub fn all_with_p(p: u64) -> impl Iterator<Item = SlopePair> {
        (1..p).filter_map(move |q| SlopePair::new(p, q).ok())
    }
}

impl fmt::Display for SlopePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({},{})", self.p, self.q)
    }
}

/// Inverse of `a` modulo `m` in `[1, m)`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Positive continued fraction `[a_1, ..., a_k]`.
///
/// Construction normalizes a trailing `1` away (`[.., a, 1] = [.., a + 1]`),
/// so a stored expansion of length at least two always ends in a coefficient
/// greater than one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContinuedFraction {
    coefficients: Vec<u64>,
    minimized: bool,
}

impl ContinuedFraction {
    pub fn new(mut coefficients: Vec<u64>) -> Result<Self, ArithError> {
        if coefficients.is_empty() {
            return Err(ArithError::EmptyExpansion);
        }
        if coefficients.contains(&0) {
            return Err(ArithError::NonPositiveCoefficient);
        }
        while coefficients.len() > 1 && *coefficients.last().unwrap() == 1 {
            coefficients.pop();
            *coefficients.last_mut().unwrap() += 1;
        }
        let minimized = coefficients.len() > 1 || coefficients[0] >= 2;
        Ok(ContinuedFraction {
            coefficients,
            minimized,
        })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_minimized(&self) -> bool {
        self.minimized
    }

    /// Numerator and denominator of the nested fraction, in lowest terms.
    pub fn value(&self) -> Result<(u64, u64), ArithError> {
        // Evaluate from the tail: x = a_k / 1, then x <- a + 1/x.
        let mut num: u64 = *self.coefficients.last().unwrap();
        let mut den: u64 = 1;
        for &a in self.coefficients.iter().rev().skip(1) {
            let next = a
                .checked_mul(num)
                .and_then(|v| v.checked_add(den))
                .ok_or(ArithError::Overflow)?;
            den = num;
            num = next;
        }
        Ok((num, den))
    }

    /// The expansion read backwards.
    pub fn reversed(&self) -> Result<ContinuedFraction, ArithError> {
        let mut c = self.coefficients.clone();
        c.reverse();
        ContinuedFraction::new(c)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// The unique positive expansion of `p/q` whose last coefficient exceeds one.
pub fn minimized_expansion(s: SlopePair) -> ContinuedFraction {
    let (mut a, mut b) = (s.p, s.q);
    let mut coefficients = Vec::new();
    while b != 0 {
        coefficients.push(a / b);
        let r = a % b;
        a = b;
        b = r;
    }
    ContinuedFraction::new(coefficients).expect("Euclid quotients are positive")
}

/// Evaluates `cf` and returns it as a slope.
pub fn evaluate_cf(cf: &ContinuedFraction) -> Result<SlopePair, ArithError> {
    let (num, den) = cf.value()?;
    if den == 1 {
        // Integer slopes p/1 are still valid when p >= 2.
        return SlopePair::new(num, 1).map_err(|_| ArithError::NotASlope(num));
    }
    SlopePair::new(num, den)
}

/// `k` if `a_1 > 1`, otherwise `k - 1`, for the minimized expansion of `p/q`.
pub fn ell(s: SlopePair) -> u64 {
    ell_of_expansion(&minimized_expansion(s))
}

pub(crate) fn ell_of_expansion(cf: &ContinuedFraction) -> u64 {
    let k = cf.len() as u64;
    if cf.coefficients()[0] > 1 {
        k
    } else {
        k - 1
    }
}

/// `(p, s) = [a_k, ..., a_1]` for `cf = [a_1, ..., a_k]`.
pub fn reversal_partner(cf: &ContinuedFraction) -> Result<SlopePair, ArithError> {
    evaluate_cf(&cf.reversed()?)
}

/// `p/q = k + 1/m` for integers `k, m >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmForm {
    pub k: u64,
    pub m: u64,
}

impl KmForm {
    /// Both odd exactly when `km + 1` is even, i.e. the slope is a link.
    pub fn both_odd(&self) -> bool {
        self.k % 2 == 1 && self.m % 2 == 1
    }
}

/// Orbit-level data of a two-bridge link.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkClass {
    pub canonical: SlopePair,
    pub orbit: Vec<u64>,
    pub is_knot: bool,
    pub is_torus: bool,
    pub is_hyperbolic: bool,
    pub ell: u64,
    pub km_form: Option<KmForm>,
}

/// Classifies `K(p, q)` up to equivalence.
///
/// `km_form` scans the whole orbit; when two members qualify they carry the
/// same unordered `{k, m}` and the one with the larger `m` is reported.
pub fn classify(s: SlopePair) -> LinkClass {
    let orbit = s.orbit();
    let canonical = SlopePair::new(s.p, orbit[0]).expect("orbit members are units");
    let is_torus = orbit.contains(&1);
    let ell = ell(canonical);
    let km_form = orbit
        .iter()
        .rev()
        .copied()
        .filter(|&m| m >= 2 && s.p % m == 1 && (s.p - 1) / m >= 2)
        .map(|m| KmForm {
            k: (s.p - 1) / m,
            m,
        })
        .next();
    LinkClass {
        canonical,
        orbit,
        is_knot: s.is_knot(),
        is_torus,
        is_hyperbolic: !is_torus,
        ell,
        km_form,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp(p: u64, q: u64) -> SlopePair {
        SlopePair::new(p, q).unwrap()
    }

    fn cf(v: &[u64]) -> ContinuedFraction {
        ContinuedFraction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn slope_validation() {
        assert_eq!(SlopePair::new(1, 1), Err(ArithError::PTooSmall(1)));
        assert!(matches!(
            SlopePair::new(5, 5),
            Err(ArithError::QOutOfRange { .. })
        ));
        assert!(matches!(
            SlopePair::new(5, 0),
            Err(ArithError::QOutOfRange { .. })
        ));
        assert_eq!(
            SlopePair::new(4, 2),
            Err(ArithError::NotCoprime { p: 4, q: 2, gcd: 2 })
        );
        assert!(SlopePair::new(2, 1).is_ok());
    }

    #[test]
    fn expansions_from_figures() {
        assert_eq!(minimized_expansion(sp(23, 13)).coefficients(), &[1, 1, 3, 3]);
        assert_eq!(minimized_expansion(sp(12, 5)).coefficients(), &[2, 2, 2]);
        assert_eq!(minimized_expansion(sp(5, 1)).coefficients(), &[5]);
        assert_eq!(minimized_expansion(sp(7, 3)).coefficients(), &[2, 3]);
    }

    #[test]
    fn evaluation() {
        assert_eq!(evaluate_cf(&cf(&[5])).unwrap(), sp(5, 1));
        assert_eq!(evaluate_cf(&cf(&[1, 1, 3, 3])).unwrap(), sp(23, 13));
        assert_eq!(evaluate_cf(&cf(&[2, 2, 2])).unwrap(), sp(12, 5));
        assert_eq!(evaluate_cf(&cf(&[2, 3])).unwrap(), sp(7, 3));
        assert_eq!(evaluate_cf(&cf(&[1])), Err(ArithError::NotASlope(1)));
    }

    #[test]
    fn trailing_one_is_normalized() {
        let c = cf(&[2, 2, 1]);
        assert_eq!(c.coefficients(), &[2, 3]);
        assert!(c.is_minimized());
        assert!(!cf(&[1]).is_minimized());
        assert_eq!(
            ContinuedFraction::new(vec![]),
            Err(ArithError::EmptyExpansion)
        );
        assert_eq!(
            ContinuedFraction::new(vec![2, 0]),
            Err(ArithError::NonPositiveCoefficient)
        );
    }

    #[test]
    fn overflow_is_reported() {
        let huge = cf(&[u64::MAX, 2]);
        assert_eq!(huge.value(), Err(ArithError::Overflow));
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell(sp(5, 2)), 2);
        for p in 2..30 {
            assert_eq!(ell(sp(p, 1)), 1);
        }
        assert_eq!(ell(sp(23, 13)), 3);
        assert_eq!(ell(sp(12, 5)), 3);
    }

    #[test]
    fn classify_examples() {
        assert!(sp(7, 3).is_equivalent(&sp(7, 2)));
        assert!(sp(11, 4).is_equivalent(&sp(11, 4)));

        let c = classify(sp(9, 4));
        assert_eq!(c.orbit, vec![2, 4, 5, 7]);
        assert_eq!(c.canonical, sp(9, 2));
        assert_eq!(c.km_form, Some(KmForm { k: 2, m: 4 }));
        assert!(c.is_knot && c.is_hyperbolic && !c.is_torus);

        let t = classify(sp(8, 7));
        assert!(t.is_torus && !t.is_knot);
        assert_eq!(t.ell, 1);
        assert_eq!(t.canonical, sp(8, 1));

        assert_eq!(classify(sp(5, 2)).km_form, Some(KmForm { k: 2, m: 2 }));
        assert_eq!(classify(sp(7, 3)).km_form, Some(KmForm { k: 2, m: 3 }));
        assert_eq!(classify(sp(12, 5)).km_form, None);
    }

    #[test]
    fn reversal_examples() {
        // [2,3] = 7/3, reversed [3,2] = 7/2.
        let rev = reversal_partner(&cf(&[2, 3])).unwrap();
        assert_eq!(rev, sp(7, 2));
        assert_eq!(reversal_partner(&cf(&[5])).unwrap(), sp(5, 1));
        let direct = evaluate_cf(&cf(&[3, 3, 1, 1])).unwrap();
        assert_eq!(reversal_partner(&cf(&[1, 1, 3, 3])).unwrap(), direct);
        assert_eq!(direct, sp(23, 7));
    }

    #[test]
    fn flip_rule() {
        for p in 2..=120u64 {
            for s in SlopePair::all_with_p(p) {
                let a = minimized_expansion(s);
                let b = minimized_expansion(sp(p, p - s.q()));
                let c = a.coefficients();
                if c[0] == 1 {
                    let mut expect = vec![c[1] + 1];
                    expect.extend_from_slice(&c[2..]);
                    assert_eq!(b.coefficients(), &expect[..], "{s}");
                } else if p > 2 {
                    assert_eq!(b.len(), a.len() + 1, "{s}");
                }
            }
        }
    }

    #[test]
    fn torus_iff_ell_one() {
        for p in 2..=150u64 {
            for s in SlopePair::all_with_p(p) {
                assert_eq!(classify(s).is_torus, ell(s) == 1, "{s}");
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip(p in 2u64..5000, q in 1u64..5000) {
            prop_assume!(q < p && p.gcd(&q) == 1);
            let s = sp(p, q);
            prop_assert_eq!(evaluate_cf(&minimized_expansion(s)).unwrap(), s);
        }

        #[test]
        fn reversal_congruence(p in 3u64..3000, q in 1u64..3000) {
            prop_assume!(q < p && p.gcd(&q) == 1);
            let s = sp(p, q);
            let cf = minimized_expansion(s);
            let partner = reversal_partner(&cf).unwrap();
            prop_assert_eq!(partner.p(), p);
            let k = cf.len() as u32;
            let target = if k % 2 == 1 { 1 } else { p - 1 };
            prop_assert_eq!((q as u128 * partner.q() as u128 % p as u128) as u64, target);
        }

        #[test]
        fn classify_constant_on_orbits(p in 2u64..2000, q in 1u64..2000) {
            prop_assume!(q < p && p.gcd(&q) == 1);
            let s = sp(p, q);
            let c = classify(s);
            for q2 in s.orbit() {
                let other = classify(sp(p, q2));
                prop_assert_eq!(&other, &c);
            }
        }
    }
}
