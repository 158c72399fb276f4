//! Integer matrices and their Smith normal form.
//!
//! Diagonalization uses row and column operations with the pivot chosen as
//! the entry of least absolute value. The diagonal is then brought into a
//! divisibility chain with `diag(a, b) ~ diag(gcd, lcm)`. Elimination first runs
//! on `i64` with checked arithmetic and restarts on `BigInt` if any step
//! would overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> IntegerMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntegerMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().cloned().map(Into::into).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.entries[i * self.cols + j] = v.into();
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut t = IntegerMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

trait Scalar: Clone + Zero + PartialEq {
    fn magnitude_lt(&self, other: &Self) -> bool;
    /// `x - q * y`, or `None` on overflow.
    fn sub_mul(x: &Self, q: &Self, y: &Self) -> Option<Self>;
    fn quotient(x: &Self, y: &Self) -> Option<Self>;
    fn into_big(self) -> BigInt;
}

impl Scalar for i64 {
    fn magnitude_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn sub_mul(x: &Self, q: &Self, y: &Self) -> Option<Self> {
        q.checked_mul(*y).and_then(|p| x.checked_sub(p))
    }
    fn quotient(x: &Self, y: &Self) -> Option<Self> {
        if *x == i64::MIN && *y == -1 {
            return None;
        }
        Some(x.div_floor(y))
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Scalar for BigInt {
    fn magnitude_lt(&self, other: &Self) -> bool {
        self.abs() < other.abs()
    }
    fn sub_mul(x: &Self, q: &Self, y: &Self) -> Option<Self> {
        Some(x - q * y)
    }
    fn quotient(x: &Self, y: &Self) -> Option<Self> {
        Some(x.div_floor(y))
    }
    fn into_big(self) -> BigInt {
        self
    }
}

struct Work<T> {
    rows: usize,
    cols: usize,
    a: Vec<T>,
}

impl<T: Scalar> Work<T> {
    fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            for j in 0..self.cols {
                self.a.swap(i * self.cols + j, k * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j != k {
            for i in 0..self.rows {
                self.a.swap(i * self.cols + j, i * self.cols + k);
            }
        }
    }

    /// row_i -= q * row_t, over columns `from..`.
    fn row_sub(&mut self, i: usize, t: usize, q: &T, from: usize) -> Option<()> {
        for j in from..self.cols {
            let y = self.at(t, j).clone();
            if !y.is_zero() {
                let idx = i * self.cols + j;
                self.a[idx] = T::sub_mul(&self.a[idx], q, &y)?;
            }
        }
        Some(())
    }

    fn col_sub(&mut self, j: usize, t: usize, q: &T, from: usize) -> Option<()> {
        for i in from..self.rows {
            let y = self.at(i, t).clone();
            if !y.is_zero() {
                let idx = i * self.cols + j;
                self.a[idx] = T::sub_mul(&self.a[idx], q, &y)?;
            }
        }
        Some(())
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.at(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.magnitude_lt(self.at(bi, bj))) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Diagonal entries after elimination, or `None` on overflow.
    fn diagonalize(mut self) -> Option<Vec<T>> {
        let n = self.rows.min(self.cols);
        let mut diag = Vec::with_capacity(n);
        for t in 0..n {
            let Some((pi, pj)) = self.smallest_in(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.at(t, t).clone();
                for i in t + 1..self.rows {
                    if !self.at(i, t).is_zero() {
                        let q = T::quotient(self.at(i, t), &pivot)?;
                        self.row_sub(i, t, &q, t)?;
                    }
                }
                for j in t + 1..self.cols {
                    if !self.at(t, j).is_zero() {
                        let q = T::quotient(self.at(t, j), &pivot)?;
                        self.col_sub(j, t, &q, t)?;
                    }
                }
                // Any remainder left in row/column t is smaller than the pivot.
                let mut smaller: Option<(usize, usize)> = None;
                for i in t + 1..self.rows {
                    if !self.at(i, t).is_zero()
                        && smaller.is_none_or(|(a, b)| self.at(i, t).magnitude_lt(self.at(a, b)))
                    {
                        smaller = Some((i, t));
                    }
                }
                for j in t + 1..self.cols {
                    if !self.at(t, j).is_zero()
                        && smaller.is_none_or(|(a, b)| self.at(t, j).magnitude_lt(self.at(a, b)))
                    {
                        smaller = Some((t, j));
                    }
                }
                match smaller {
                    None => break,
                    Some((i, j)) => {
                        self.swap_rows(t, i);
                        self.swap_cols(t, j);
                    }
                }
            }
            diag.push(self.at(t, t).clone());
        }
        Some(diag)
    }
}

fn eliminate<T: Scalar>(rows: usize, cols: usize, a: Vec<T>) -> Option<Vec<BigInt>> {
    Work { rows, cols, a }
        .diagonalize()
        .map(|d| d.into_iter().map(Scalar::into_big).collect())
}

/// Invariant factors `d_1 | d_2 | ...` padded with zeros to `min(rows, cols)`.
pub fn smith_normal_form(mat: &IntegerMatrix) -> Vec<BigInt> {
    let n = mat.rows.min(mat.cols);
    let diag = mat
        .to_i64()
        .and_then(|a| eliminate(mat.rows, mat.cols, a))
        .unwrap_or_else(|| {
            eliminate(mat.rows, mat.cols, mat.entries.clone()).expect("BigInt never overflows")
        });
    let mut nonzero: Vec<BigInt> = diag.into_iter().map(|d| d.abs()).filter(|d| !d.is_zero()).collect();
    for i in 0..nonzero.len() {
        for j in i + 1..nonzero.len() {
            let g = nonzero[i].gcd(&nonzero[j]);
            let l = nonzero[i].lcm(&nonzero[j]);
            nonzero[i] = g;
            nonzero[j] = l;
        }
    }
    nonzero.resize(n, BigInt::zero());
    nonzero
}

/// Rank over the rationals.
pub fn rank(mat: &IntegerMatrix) -> usize {
    smith_normal_form(mat).iter().filter(|d| !d.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(smith_normal_form(&IntegerMatrix::identity(3)), big(&[1, 1, 1]));
        let d = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_normal_form(&d), big(&[1, 6]));
        assert_eq!(smith_normal_form(&IntegerMatrix::zeros(2, 2)), big(&[0, 0]));
        let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(smith_normal_form(&m), big(&[2, 6, 12]));
    }

    #[test]
    fn rectangular_and_empty() {
        let m = IntegerMatrix::from_rows(&[vec![4, 6, 0]]);
        assert_eq!(smith_normal_form(&m), big(&[2]));
        assert_eq!(smith_normal_form(&IntegerMatrix::zeros(0, 3)), big(&[]));
        assert_eq!(rank(&IntegerMatrix::from_rows(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn big_entries_fall_back() {
        let huge = i64::MAX / 2;
        let m = IntegerMatrix::from_rows(&[vec![huge, 3], vec![huge - 1, huge]]);
        // det = huge^2 - 3(huge - 1), gcd of entries is 1.
        let h = BigInt::from(huge);
        let det = &h * &h - BigInt::from(3) * (&h - 1);
        assert_eq!(smith_normal_form(&m), vec![BigInt::from(1), det]);
    }

    /// Brute-force invariant factors of a 2x2 matrix: d1 = gcd of entries,
    /// d1 * d2 = |det|.
    fn oracle_2x2(a: i64, b: i64, c: i64, d: i64) -> Vec<BigInt> {
        let g = a.gcd(&b).gcd(&c).gcd(&d);
        let det = (a as i128 * d as i128 - b as i128 * c as i128).abs();
        if g == 0 {
            return big(&[0, 0]);
        }
        if det == 0 {
            return big(&[g, 0]);
        }
        vec![BigInt::from(g), BigInt::from(det / g as i128)]
    }

    fn unimodular(ops: &[(usize, usize, i64)], n: usize) -> IntegerMatrix {
        let mut u = IntegerMatrix::identity(n);
        for &(i, j, k) in ops {
            if i % n != j % n {
                let e = {
                    let mut e = IntegerMatrix::identity(n);
                    e.set(i % n, j % n, k);
                    e
                };
                u = e.mul(&u);
            }
        }
        u
    }

    proptest! {
        #[test]
        fn matches_2x2_oracle(a in -40i64..40, b in -40i64..40, c in -40i64..40, d in -40i64..40) {
            let m = IntegerMatrix::from_rows(&[vec![a, b], vec![c, d]]);
            prop_assert_eq!(smith_normal_form(&m), oracle_2x2(a, b, c, d));
        }

        #[test]
        fn invariant_under_unimodular_transforms(
            rows in proptest::collection::vec(proptest::collection::vec(-5i64..5, 4), 3),
            left in proptest::collection::vec((0usize..3, 0usize..3, -3i64..3), 0..5),
            right in proptest::collection::vec((0usize..4, 0usize..4, -3i64..3), 0..5),
        ) {
            let a = IntegerMatrix::from_rows(&rows);
            let u = unimodular(&left, 3);
            let v = unimodular(&right, 4);
            let b = u.mul(&a).mul(&v);
            prop_assert_eq!(smith_normal_form(&a), smith_normal_form(&b));
        }

        #[test]
        fn transpose_invariant(rows in proptest::collection::vec(proptest::collection::vec(-6i64..6, 5), 3)) {
            let a = IntegerMatrix::from_rows(&rows);
            let s = smith_normal_form(&a);
            let t = smith_normal_form(&a.transpose());
            prop_assert_eq!(s, t);
        }

        #[test]
        fn divisibility_chain(rows in proptest::collection::vec(proptest::collection::vec(-9i64..9, 4), 4)) {
            let s = smith_normal_form(&IntegerMatrix::from_rows(&rows));
            for w in s.windows(2) {
                if !w[1].is_zero() {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                } else if w[0].is_zero() {
                    prop_assert!(w[1].is_zero());
                }
            }
        }
    }
}
