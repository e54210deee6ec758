//! Dense exact linear algebra over the rationals / Gaussian rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::cpoly::CPoly;
use crate::series::Scalar;

/// Row-major dense matrix of [`Scalar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors (all of length `n`).
    pub fn from_cols(n: usize, cols: &[Vec<Scalar>]) -> Mat {
        let mut m = Mat::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn diag(d: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_gaussian(&self) -> bool {
        self.data.iter().any(Scalar::is_gaussian)
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] = &m[(i, j)] + &(a * b);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self[(i, j)].is_zero() {
                        s = &s + &(&self[(i, j)] * x);
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn pow(&self, e: usize) -> Mat {
        let mut r = Mat::identity(self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        let mut m = Mat::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..o.cols {
                m[(i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            m[(i, j)] = &m[(i, j)] - &(&f * &m[(r, j)]);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Column basis of the null space, as a matrix with `cols` rows.
    pub fn nullspace(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(row, f)];
            }
            basis.push(v);
        }
        Mat::from_cols(self.cols, &basis)
    }

    /// A basis (as columns) of the column space, chosen among the columns.
    pub fn column_basis(&self) -> Mat {
        let (_, pivots) = self.rref();
        let cols: Vec<Vec<Scalar>> = pivots.iter().map(|&j| self.col(j)).collect();
        Mat::from_cols(self.rows, &cols)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hcat(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..2 * n).collect();
        Some(r.select(&idx, &right))
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut d = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                d = -d;
            }
            let piv = m[(c, c)].clone();
            d = &d * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    m[(i, j)] = &m[(i, j)] - &(&f * &m[(c, j)]);
                }
            }
        }
        d
    }

    /// Characteristic polynomial `det(X·I − M)` by the Faddeev–LeVerrier recurrence.
    pub fn charpoly(&self) -> CPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut mk = Mat::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&mk);
            for i in 0..n {
                next[(i, i)] = &next[(i, i)] + &coeffs[n - k + 1];
            }
            mk = next;
            let tr = self.mul(&mk).trace();
            coeffs[n - k] = -(&tr / &Scalar::from_int(k as i64));
        }
        CPoly::new(coeffs)
    }

    pub fn trace(&self) -> Scalar {
        let mut s = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            s = &s + &self[(i, i)];
        }
        s
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &CPoly) -> Mat {
        let n = self.rows;
        let mut acc = Mat::zeros(n, n);
        for c in p.coeffs.iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                acc[(i, i)] = &acc[(i, i)] + c;
            }
        }
        acc
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dimension of the intersection of two column spaces in the same ambient space.
pub fn intersection_dim(a: &Mat, b: &Mat) -> usize {
    a.rank() + b.rank() - a.hcat(b).rank()
}

/// Whether the column space of `a` is contained in that of `b`.
pub fn contained_in(a: &Mat, b: &Mat) -> bool {
    b.hcat(a).rank() == b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_companion() {
        // companion of X^3 - 2X + 5
        let m = Mat::from_int_rows(&[&[0, 0, -5], &[1, 0, 2], &[0, 1, 0]]);
        assert_eq!(m.charpoly(), CPoly::from_ints(&[5, -2, 0, 1]));
    }

    #[test]
    fn inverse_and_det() {
        let m = Mat::from_int_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), Scalar::one());
        assert_eq!(m.mul(&m.inverse().unwrap()), Mat::identity(2));
        assert!(Mat::from_int_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = Mat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let n = m.nullspace();
        assert_eq!(n.cols(), 2);
        assert!(m.mul(&n).is_zero());
    }
}
