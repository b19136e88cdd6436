//! Dense integer matrices with exact arithmetic: determinants, leading
//! principal minors, Smith normal form, and rational linear solves.
//!
//! Everything here is `BigInt`/`BigRational` based; no floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (first mismatch at ({0}, {1}))")]
    NotSymmetric(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: matrix is {rows}x{cols}, vector has length {vec}")]
    ShapeMismatch { rows: usize, cols: usize, vec: usize },
}

/// Row-major dense matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        let data = rows.into_iter().flatten().map(BigInt::from).collect();
        IntMat { rows: nrows, cols: ncols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn symmetry_check(&self) -> Result<(), MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Err(MatrixError::NotSymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_tridiagonal(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let band = i.abs_diff(j) <= 1;
                if !band && !self[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| -a).collect();
        IntMat { rows: self.rows, cols: self.cols, data }
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

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(t, j)] * q;
            self[(i, j)] -= v;
        }
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, t)] * q;
            self[(i, j)] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn det(&self) -> Result<BigInt, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Leading principal minors det(M[..k, ..k]) for k = 1..=n.
    ///
    /// Tridiagonal matrices use the three-term continuant recurrence; the
    /// general case falls back to one Bareiss determinant per block.
    pub fn leading_principal_minors(&self) -> Result<Vec<BigInt>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if self.is_tridiagonal() {
            let mut minors = Vec::with_capacity(n);
            let mut prev2 = BigInt::one();
            let mut prev1 = BigInt::one();
            for k in 0..n {
                let mut d = &self[(k, k)] * &prev1;
                if k > 0 {
                    d -= &self[(k, k - 1)] * &self[(k - 1, k)] * &prev2;
                }
                minors.push(d.clone());
                prev2 = prev1;
                prev1 = d;
            }
            return Ok(minors);
        }
        (1..=n).map(|k| self.submatrix(k).det()).collect()
    }

    fn submatrix(&self, k: usize) -> IntMat {
        let mut m = IntMat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Solve `M x = v` exactly over the rationals. Returns `None` when `M`
    /// is singular. Tridiagonal systems take the O(n) elimination path.
    pub fn solve_rational(&self, v: &[BigInt]) -> Result<Option<Vec<BigRational>>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if v.len() != self.rows {
            return Err(MatrixError::ShapeMismatch {
                rows: self.rows,
                cols: self.cols,
                vec: v.len(),
            });
        }
        if self.is_tridiagonal() && self.nonsingular_tridiagonal() {
            return Ok(Some(self.solve_tridiagonal(v)));
        }
        Ok(self.solve_gaussian(v))
    }

    fn nonsingular_tridiagonal(&self) -> bool {
        // Pivot-free elimination needs every leading minor nonzero.
        self.leading_principal_minors()
            .map(|ms| ms.iter().all(|m| !m.is_zero()))
            .unwrap_or(false)
    }

    fn solve_tridiagonal(&self, v: &[BigInt]) -> Vec<BigRational> {
        let n = self.rows;
        let rat = |b: &BigInt| BigRational::from_integer(b.clone());
        let mut diag: Vec<BigRational> = (0..n).map(|i| rat(&self[(i, i)])).collect();
        let mut rhs: Vec<BigRational> = v.iter().map(rat).collect();
        for i in 1..n {
            let w = rat(&self[(i, i - 1)]) / diag[i - 1].clone();
            let upper = rat(&self[(i - 1, i)]);
            diag[i] = diag[i].clone() - w.clone() * upper;
            rhs[i] = rhs[i].clone() - w * rhs[i - 1].clone();
        }
        let mut x = vec![BigRational::zero(); n];
        x[n - 1] = rhs[n - 1].clone() / diag[n - 1].clone();
        for i in (0..n - 1).rev() {
            let upper = rat(&self[(i, i + 1)]);
            x[i] = (rhs[i].clone() - upper * x[i + 1].clone()) / diag[i].clone();
        }
        x
    }

    fn solve_gaussian(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let mut b: Vec<BigRational> =
            v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(k, p);
            b.swap(k, p);
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone() / a[k][k].clone();
                for j in k..n {
                    let v = a[k][j].clone() * f.clone();
                    a[i][j] -= v;
                }
                let v = b[k].clone() * f;
                b[i] -= v;
            }
        }
        let mut x = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut s = b[i].clone();
            for j in i + 1..n {
                s -= a[i][j].clone() * x[j].clone();
            }
            x[i] = s / a[i][i].clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::ShapeMismatch {
                rows: self.rows,
                cols: self.cols,
                vec: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Smith normal form `D = U M V` of a square matrix, tracking only the left
/// transform `U`. The diagonal is non-negative with `d_1 | d_2 | ... | d_n`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub left: IntMat,
}

/// Smith normal form with deterministic pivoting: smallest nonzero magnitude,
/// row-major tie-break.
pub fn smith_normal_form(m: &IntMat) -> Result<Smith, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    let mut a = m.clone();
    let mut u = IntMat::identity(n);

    for t in 0..n {
        loop {
            let Some((pi, pj)) = select_pivot(&a, t) else {
                break; // rest of the matrix is zero
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }

            let mut clean = true;
            for i in t + 1..n {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = div_round(&a[(i, t)], &a[(t, t)]);
                a.row_sub(i, t, &q);
                u.row_sub(i, t, &q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = div_round(&a[(t, j)], &a[(t, t)]);
                a.col_sub(j, t, &q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue; // a smaller pivot appeared; reselect
            }

            // Divisibility: fold any non-multiple into row t and re-run.
            let mut fixed = true;
            'scan: for i in t + 1..n {
                for j in t + 1..n {
                    if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                        let one = BigInt::one();
                        a.row_sub(t, i, &-&one);
                        u.row_sub(t, i, &-&one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }

    let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
    Ok(Smith { diag, left: u })
}

fn select_pivot(a: &IntMat, t: usize) -> Option<(usize, usize)> {
    let n = a.nrows();
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            match &best {
                Some((b, _, _)) if *b <= v => {}
                _ => best = Some((v, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Division rounded to nearest so remainders shrink below |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if BigInt::from(2) * r.abs() > b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> IntMat {
        IntMat::from_rows(rows)
    }

    #[test]
    fn det_small() {
        assert_eq!(m(vec![vec![-4]]).det().unwrap(), BigInt::from(-4));
        assert_eq!(
            m(vec![vec![-5, 1], vec![1, -2]]).det().unwrap(),
            BigInt::from(9)
        );
        assert_eq!(
            m(vec![vec![0, 1], vec![1, 0]]).det().unwrap(),
            BigInt::from(-1)
        );
    }

    #[test]
    fn det_with_zero_pivot() {
        let a = m(vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, 5, 0]]);
        // expansion: 0*(0-15) - 1*(0-12) + 2*(5-0) = 12 + 10 = 22
        assert_eq!(a.det().unwrap(), BigInt::from(22));
    }

    #[test]
    fn det_singular() {
        let a = m(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(a.det().unwrap(), BigInt::zero());
    }

    #[test]
    fn minors_tridiagonal_match_general() {
        let a = m(vec![
            vec![-5, 1, 0],
            vec![1, -2, 1],
            vec![0, 1, -3],
        ]);
        let fast = a.leading_principal_minors().unwrap();
        let slow: Vec<BigInt> = (1..=3).map(|k| a.submatrix(k).det().unwrap()).collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn solve_matches_tridiagonal_and_gaussian() {
        let a = m(vec![vec![-5, 1], vec![1, -2]]);
        let v = vec![BigInt::from(3), BigInt::from(0)];
        let x = a.solve_rational(&v).unwrap().unwrap();
        let forced = a.solve_gaussian(&v).unwrap();
        assert_eq!(x, forced);
        // check Q x = v
        let back: Vec<BigRational> = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| BigRational::from_integer(a[(i, j)].clone()) * x[j].clone())
                    .sum()
            })
            .collect();
        assert_eq!(back[0], BigRational::from_integer(BigInt::from(3)));
        assert_eq!(back[1], BigRational::zero());
    }

    #[test]
    fn smith_diag_matrix() {
        let s = smith_normal_form(&m(vec![vec![-4]])).unwrap();
        assert_eq!(s.diag, vec![BigInt::from(4)]);
    }

    #[test]
    fn smith_c31() {
        let s = smith_normal_form(&m(vec![vec![-5, 1], vec![1, -2]])).unwrap();
        assert_eq!(s.diag, vec![BigInt::one(), BigInt::from(9)]);
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = m(vec![vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.diag, vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn smith_left_transform_consistent() {
        // U a V = D with V unimodular means U a Z^n = D Z^n; check columns of
        // U*a generate the same lattice as diag by reducing them mod diag.
        let a = m(vec![vec![6, 4], vec![4, 8]]);
        let s = smith_normal_form(&a).unwrap();
        let ua_cols: Vec<Vec<BigInt>> = (0..2)
            .map(|j| {
                let col: Vec<BigInt> = (0..2).map(|i| a[(i, j)].clone()).collect();
                s.left.mul_vec(&col).unwrap()
            })
            .collect();
        for col in ua_cols {
            for (i, v) in col.iter().enumerate() {
                assert!((v % &s.diag[i]).is_zero(), "column not in D Z^n");
            }
        }
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(16)]);
    }
}
