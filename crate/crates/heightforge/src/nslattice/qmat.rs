use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::Poly;

/// Dense exact rational matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        QMat { rows: r, cols: c, data }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        QMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }

    pub fn scale(&self, c: &BigRational) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, o: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        assert_eq!(self.cols, o.rows);
        let mut out = QMat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = a * o.at(k, j);
                    *out.at_mut(i, j) += v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for j in 0..self.cols {
                    acc += self.at(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.rows.min(self.cols) {
            acc += self.at(i, i);
        }
        acc
    }

    /// Induced 1-norm: max over columns of the absolute column sum.
    pub fn one_norm(&self) -> BigRational {
        let mut best = BigRational::zero();
        for j in 0..self.cols {
            let mut s = BigRational::zero();
            for i in 0..self.rows {
                s += self.at(i, j).abs();
            }
            if s > best {
                best = s;
            }
        }
        best
    }

    /// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier; monic,
    /// exact.
    pub fn charpoly(&self) -> Poly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut m = QMat::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let ck = -(am.trace() / BigRational::from_integer(k.into()));
            coeffs[n - k] = ck.clone();
            m = am;
            for i in 0..n {
                *m.at_mut(i, i) += &ck;
            }
        }
        Poly::from_rat_coeffs(coeffs)
    }

    /// Evaluate a rational polynomial at this (square) matrix.
    pub fn eval_poly(&self, p: &Poly) -> QMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let d = p.degree();
        let mut acc = QMat::zero(n, n);
        if d < 0 {
            return acc;
        }
        for e in (0..=d as usize).rev() {
            acc = self.mul(&acc);
            let c = match p.coeff(e) {
                crate::algebra::Scalar::Rat(r) => r,
                _ => panic!("matrix polynomials are rational"),
            };
            for i in 0..n {
                *acc.at_mut(i, i) += &c;
            }
        }
        acc
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    let a = self.at(p, j).clone();
                    let b = self.at(r, j).clone();
                    *self.at_mut(p, j) = b;
                    *self.at_mut(r, j) = a;
                }
            }
            let inv = self.at(r, c).recip();
            for j in 0..self.cols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.at(i, j) - &f * self.at(r, j);
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the kernel, as columns.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![BigRational::zero(); self.cols];
            v[f] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m.at(row, f).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Solve A x = b when A has full column rank and the system is
    /// consistent; None otherwise.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(self.rows, b.len());
        let mut aug = QMat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        if pivots.len() != self.cols {
            return None; // underdetermined
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = aug.at(row, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square invertible matrix; None when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = BigRational::one();
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut out = QMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Some(out)
    }

    /// Columns as vectors.
    pub fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.at(i, j).clone()).collect())
            .collect()
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<BigRational>>) -> QMat {
        let c = cols.len();
        let mut m = QMat::zero(rows, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn charpoly_companion() {
        // companion of x^2 - x - 1
        let m = QMat::from_int_rows(&[vec![0, 1], vec![1, 1]]);
        let p = m.charpoly();
        // x^2 - x - 1
        let expect = Poly::from_int_coeffs(crate::algebra::BaseField::Rationals, &[-1, -1, 1]);
        assert_eq!(p, expect);
    }

    #[test]
    fn kernel_and_inverse() {
        let m = QMat::from_int_rows(&[vec![1, 2], vec![2, 4]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![r(-2), r(1)]);
        let inv = QMat::from_int_rows(&[vec![0, 3], vec![2, 0]]).inverse().unwrap();
        assert_eq!(inv.mul(&QMat::from_int_rows(&[vec![0, 3], vec![2, 0]])), QMat::identity(2));
    }

    #[test]
    fn eval_poly_cayley_hamilton() {
        let m = QMat::from_int_rows(&[vec![1, 2], vec![3, -1]]);
        let chi = m.charpoly();
        let z = m.eval_poly(&chi);
        assert_eq!(z, QMat::zero(2, 2));
    }
}
