//! Small dense matrices, sized for lattice work in dimension at most ten.
//!
//! Two layers: [`RMat`] over multiprecision reals for charts and Gram
//! matrices, and [`QMat`] over exact rationals for everything where the
//! answer must be exact (discriminants, basis inverses, independence ranks,
//! unimodularity certificates).

use rug::{Integer, Rational};

use crate::real::{Precision, Real};

/// Row-major matrix of [`Real`].
#[derive(Clone, Debug)]
pub struct RMat {
    rows: usize,
    cols: usize,
    a: Vec<Real>,
}

impl RMat {
    pub fn zero(prec: &Precision, rows: usize, cols: usize) -> Self {
        RMat { rows, cols, a: vec![prec.zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Real>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        RMat { rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose j-th column is `cols[j]`.
    pub fn from_cols(cols: &[Vec<Real>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r));
        let mut a = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                a.push(col[i].clone());
            }
        }
        RMat { rows: r, cols: c, a }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Real {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Real) {
        self.a[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<Real> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, prec: &Precision, v: &[Real]) -> Vec<Real> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = prec.zero();
                for j in 0..self.cols {
                    acc += self.at(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    /// Gram matrix `A^T A` of the columns.
    pub fn gram_of_cols(&self, prec: &Precision) -> RMat {
        let n = self.cols;
        let mut g = RMat::zero(prec, n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = prec.zero();
                for k in 0..self.rows {
                    acc += self.at(k, i) * self.at(k, j);
                }
                g.set(j, i, acc.clone());
                g.set(i, j, acc);
            }
        }
        g
    }

    /// Determinant by LU with partial pivoting. Square only.
    pub fn det(&self, prec: &Precision) -> Real {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = prec.one();
        for k in 0..n {
            let mut piv = k;
            for i in k + 1..n {
                if m.at(i, k).abs() > m.at(piv, k).abs() {
                    piv = i;
                }
            }
            if m.at(piv, k).is_zero() {
                return prec.zero();
            }
            if piv != k {
                for j in 0..n {
                    let t = m.at(k, j).clone();
                    m.set(k, j, m.at(piv, j).clone());
                    m.set(piv, j, t);
                }
                det = -det;
            }
            det = &det * m.at(k, k);
            for i in k + 1..n {
                let f = m.at(i, k) / m.at(k, k);
                for j in k..n {
                    let v = m.at(i, j) - &f * m.at(k, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Solve `self * x = b` (square, invertible) by LU with partial pivoting.
    pub fn solve(&self, prec: &Precision, b: &[Real]) -> Option<Vec<Real>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut m = self.clone();
        let mut rhs = b.to_vec();
        for k in 0..n {
            let mut piv = k;
            for i in k + 1..n {
                if m.at(i, k).abs() > m.at(piv, k).abs() {
                    piv = i;
                }
            }
            if m.at(piv, k).is_zero() {
                return None;
            }
            if piv != k {
                for j in 0..n {
                    let t = m.at(k, j).clone();
                    m.set(k, j, m.at(piv, j).clone());
                    m.set(piv, j, t);
                }
                rhs.swap(k, piv);
            }
            for i in k + 1..n {
                let f = m.at(i, k) / m.at(k, k);
                for j in k..n {
                    let v = m.at(i, j) - &f * m.at(k, j);
                    m.set(i, j, v);
                }
                let v = &rhs[i] - &f * &rhs[k];
                rhs[i] = v;
            }
        }
        let mut x = vec![prec.zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i].clone();
            for j in i + 1..n {
                acc -= m.at(i, j) * &x[j];
            }
            x[i] = &acc / m.at(i, i);
        }
        Some(x)
    }
}

/// Row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    a: Vec<Rational>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, a: vec![Rational::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        QMat { rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    pub fn from_integer_rows(rows: &[Vec<Integer>]) -> Self {
        QMat::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|z| Rational::from(z)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::new();
                for k in 0..self.cols {
                    acc += (self.at(i, k) * other.at(k, j)).complete();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for j in 0..self.cols {
                    acc += (self.at(i, j) * &v[j]).complete();
                }
                acc
            })
            .collect()
    }

    /// Exact determinant by Gaussian elimination. Square only.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::from(1);
        for k in 0..n {
            let piv = (k..n).find(|&i| *m.at(i, k) != 0);
            let piv = match piv {
                Some(p) => p,
                None => return Rational::new(),
            };
            if piv != k {
                for j in 0..n {
                    let t = m.at(k, j).clone();
                    m.set(k, j, m.at(piv, j).clone());
                    m.set(piv, j, t);
                }
                det = -det;
            }
            det *= m.at(k, k);
            for i in k + 1..n {
                let f = (m.at(i, k) / m.at(k, k)).complete();
                for j in k..n {
                    let v = m.at(i, j) - (&f * m.at(k, j)).complete();
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            let piv = (row..rows).find(|&i| *m.at(i, col) != 0);
            let piv = match piv {
                Some(p) => p,
                None => continue,
            };
            if piv != row {
                for j in 0..cols {
                    let t = m.at(row, j).clone();
                    m.set(row, j, m.at(piv, j).clone());
                    m.set(piv, j, t);
                }
            }
            for i in row + 1..rows {
                if *m.at(i, col) == 0 {
                    continue;
                }
                let f = (m.at(i, col) / m.at(row, col)).complete();
                for j in col..cols {
                    let v = m.at(i, j) - (&f * m.at(row, j)).complete();
                    m.set(i, j, v);
                }
            }
            rank += 1;
            row += 1;
            if row == rows {
                break;
            }
        }
        rank
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = QMat::identity(n);
        for k in 0..n {
            let piv = (k..n).find(|&i| *m.at(i, k) != 0)?;
            if piv != k {
                for j in 0..n {
                    let t = m.at(k, j).clone();
                    m.set(k, j, m.at(piv, j).clone());
                    m.set(piv, j, t);
                    let t = inv.at(k, j).clone();
                    inv.set(k, j, inv.at(piv, j).clone());
                    inv.set(piv, j, t);
                }
            }
            let d = m.at(k, k).clone();
            for j in 0..n {
                m.set(k, j, (m.at(k, j) / &d).complete());
                inv.set(k, j, (inv.at(k, j) / &d).complete());
            }
            for i in 0..n {
                if i == k || *m.at(i, k) == 0 {
                    continue;
                }
                let f = m.at(i, k).clone();
                for j in 0..n {
                    let v = m.at(i, j) - (&f * m.at(k, j)).complete();
                    m.set(i, j, v);
                    let v = inv.at(i, j) - (&f * inv.at(k, j)).complete();
                    inv.set(i, j, v);
                }
            }
        }
        Some(inv)
    }

    pub fn to_real(&self, prec: &Precision) -> RMat {
        let mut out = RMat::zero(prec, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, prec.rational(self.at(i, j)));
            }
        }
        out
    }
}

use rug::Complete;

/// Exact determinant of an integer matrix given as rows.
pub fn integer_det(rows: &[Vec<Integer>]) -> Integer {
    let d = QMat::from_integer_rows(rows).det();
    debug_assert_eq!(*d.denom(), 1);
    d.numer().clone()
}
