//! Exact integer matrices: Smith normal form, determinants, inverses of
//! unimodular matrices and products.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn scalar(n: usize, k: i64) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(k);
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.as_ref().len());
        assert!(rows.iter().all(|x| x.as_ref().len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|x| x.as_ref().iter().map(|&v| BigInt::from(v))).collect(),
        }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|x| x.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.rows) && self.is_square()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Exact inverse; the matrix must have determinant ±1.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::Singular);
        }
        let det = self.determinant();
        if det.abs() != BigInt::one() {
            return Err(Error::Singular);
        }
        // Gauss-Jordan over the integers stays integral for unimodular input
        // when pivoting on unit entries is possible; fall back to adjugate.
        let n = self.rows;
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let c = minor.determinant();
                adj[(i, j)] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        for v in adj.data.iter_mut() {
            *v = &*v * &det;
        }
        Ok(adj)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows - 1, self.cols - 1);
        let mut r = 0;
        for i in 0..self.rows {
            if i == skip_row {
                continue;
            }
            let mut c = 0;
            for j in 0..self.cols {
                if j == skip_col {
                    continue;
                }
                m[(r, c)] = self[(i, j)].clone();
                c += 1;
            }
            r += 1;
        }
        m
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * &self[(i, j)]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] -= v;
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `P * M * Q = diag(divisors)` with `P`, `Q` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
}

/// Diagonal divisors `d_1 | d_2 | ...` (length `min(rows, cols)`), zeros last.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    smith(m, false).divisors
}

pub fn smith_with_transforms(m: &IntMatrix) -> SmithForm {
    smith(m, true)
}

fn smith(m: &IntMatrix, transforms: bool) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut p = transforms.then(|| IntMatrix::identity(r));
    let mut q = transforms.then(|| IntMatrix::identity(c));
    let k = r.min(c);
    for t in 0..k {
        // pivot: smallest nonzero absolute value in the remaining block
        let Some((pi, pj)) = min_abs(&a, t) else { break };
        a.swap_rows(t, pi);
        if let Some(p) = p.as_mut() {
            p.swap_rows(t, pi);
        }
        a.swap_cols(t, pj);
        if let Some(q) = q.as_mut() {
            q.swap_cols(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let quo = a[(i, t)].div_floor(&a[(t, t)]);
                a.row_axpy(i, t, &quo);
                if let Some(p) = p.as_mut() {
                    p.row_axpy(i, t, &quo);
                }
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let quo = a[(t, j)].div_floor(&a[(t, t)]);
                a.col_axpy(j, t, &quo);
                if let Some(q) = q.as_mut() {
                    q.col_axpy(j, t, &quo);
                }
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                // a smaller remainder appeared in row or column t
                let (pi, pj) = min_abs_cross(&a, t);
                a.swap_rows(t, pi);
                if let Some(p) = p.as_mut() {
                    p.swap_rows(t, pi);
                }
                a.swap_cols(t, pj);
                if let Some(q) = q.as_mut() {
                    q.swap_cols(t, pj);
                }
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    a.row_axpy(t, i, &minus_one);
                    if let Some(p) = p.as_mut() {
                        p.row_axpy(t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(p) = p.as_mut() {
                p.negate_row(t);
            }
        }
    }
    SmithForm {
        divisors: (0..k).map(|i| a[(i, i)].clone()).collect(),
        left: p,
        right: q,
    }
}

fn min_abs(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a[(i, j)].abs();
            if !v.is_zero() && best.as_ref().map_or(true, |(b, _, _)| v < *b) {
                best = Some((v, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn min_abs_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (a[(t, t)].abs(), t, t);
    for i in t + 1..a.rows {
        let v = a[(i, t)].abs();
        if !v.is_zero() && (best.0.is_zero() || v < best.0) {
            best = (v, i, t);
        }
    }
    for j in t + 1..a.cols {
        let v = a[(t, j)].abs();
        if !v.is_zero() && (best.0.is_zero() || v < best.0) {
            best = (v, t, j);
        }
    }
    (best.1, best.2)
}

/// Invariants of `Z^cols / rowspace(m)`: non-unit divisors, with a zero for
/// each free rank.
pub fn abelian_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut d = smith_normal_form(m);
    d.resize(m.cols, BigInt::zero());
    d.into_iter().filter(|v| !v.is_one()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_normal_form(&IntMatrix::from_rows(&[[2, 0], [0, 3]])), big(&[1, 6]));
        assert_eq!(smith_normal_form(&IntMatrix::zeros(6, 4)), big(&[0, 0, 0, 0]));
        assert_eq!(smith_normal_form(&IntMatrix::identity(3)), big(&[1, 1, 1]));
        assert_eq!(
            smith_normal_form(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]])),
            big(&[2, 6, 12])
        );
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16], [1, 1, 1]]);
        let s = smith_with_transforms(&m);
        let (p, q) = (s.left.unwrap(), s.right.unwrap());
        let d = &(&p * &m) * &q;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j { s.divisors[i].clone() } else { BigInt::zero() };
                assert_eq!(d[(i, j)], want);
            }
        }
        assert_eq!(p.determinant().abs(), BigInt::one());
        assert_eq!(q.determinant().abs(), BigInt::one());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = IntMatrix::from_rows(&[[0, 1, 0, -1], [-1, 0, -1, 0], [0, 0, 0, 1], [-1, -1, 0, 0]]);
        assert_eq!(a.determinant().abs(), BigInt::one());
        let inv = a.inverse_unimodular().unwrap();
        assert!((&a * &inv).is_identity());
        assert_eq!(IntMatrix::scalar(4, 3).determinant(), BigInt::from(81));
        assert!(IntMatrix::scalar(2, 2).inverse_unimodular().is_err());
    }

    #[test]
    fn invariants_of_finite_and_free_parts() {
        assert_eq!(abelian_invariants(&IntMatrix::from_rows(&[[2, 0, 0], [0, 3, 0]])), big(&[6, 0]));
        assert_eq!(abelian_invariants(&IntMatrix::zeros(0, 4)), big(&[0, 0, 0, 0]));
    }
}
