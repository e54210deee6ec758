//! Matrices over the Laurent field `K = C((t))` with tracked precision.
//!
//! Elimination always pivots on an entry of minimal valuation, which keeps
//! precision loss bounded by the valuation of the determinant.

use crate::error::{precision, Result};
use crate::series::{Laurent, Scalar, TruncSeries, EXACT_PREC};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMat {
    rows: usize,
    cols: usize,
    data: Vec<Laurent>,
}

impl LMat {
    pub fn zeros(rows: usize, cols: usize) -> LMat {
        LMat { rows, cols, data: vec![Laurent::exact_zero(); rows * cols] }
    }

    /// Identity whose unit entries carry relative precision `rel`.
    pub fn identity(n: usize, rel: usize) -> LMat {
        let mut m = LMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Laurent::from_scalar(Scalar::one(), rel as i64));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Laurent) -> LMat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        LMat { rows, cols, data }
    }

    /// Entries taken from series; exactly-zero series become exact zeros when
    /// `exact` is set, otherwise `O(t^prec)`.
    pub fn from_series(rows: usize, cols: usize, f: impl Fn(usize, usize) -> TruncSeries, exact: bool) -> LMat {
        LMat::from_fn(rows, cols, |i, j| {
            let s = f(i, j);
            if exact && s.is_zero() {
                Laurent::exact_zero()
            } else {
                Laurent::from_series(&s)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Laurent {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Laurent) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> LMat {
        LMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &LMat) -> LMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        LMat::from_fn(self.rows, o.cols, |i, j| {
            let mut s = Laurent::exact_zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if a.is_exact_zero() {
                    continue;
                }
                if b.is_exact_zero() {
                    continue;
                }
                s = s.add(&a.mul(b));
            }
            s
        })
    }

    pub fn add(&self, o: &LMat) -> LMat {
        LMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &LMat) -> LMat {
        LMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    /// Multiplies every entry by `t^k`.
    pub fn shift_by(&self, k: i64) -> LMat {
        LMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).shift_by(k))
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> LMat {
        LMat::from_fn(rows.len(), cols.len(), |a, b| self.get(rows[a], cols[b]).clone())
    }

    /// Minimal valuation lower bound over all entries.
    pub fn min_val_bound(&self) -> i64 {
        self.data.iter().map(Laurent::val_bound).min().unwrap_or(EXACT_PREC)
    }

    /// Determinant; if elimination runs out of known-nonzero pivots the
    /// result is a zero known only to some absolute precision.
    pub fn det(&self) -> Laurent {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut acc: Option<Laurent> = None;
        let mut negate = false;
        for c in 0..n {
            let Some((pi, pj)) = m.min_pivot(c) else {
                let rest = (c..n)
                    .flat_map(|i| (c..n).map(move |j| (i, j)))
                    .map(|(i, j)| m.get(i, j).val_bound())
                    .min()
                    .unwrap_or(0);
                let before = acc.as_ref().map_or(0, Laurent::val_bound);
                let lower = before.saturating_add(rest.saturating_mul((n - c) as i64));
                return Laurent::zero(lower.min(EXACT_PREC));
            };
            if pi != c {
                m.swap_rows(pi, c);
                negate = !negate;
            }
            if pj != c {
                m.swap_cols(pj, c);
                negate = !negate;
            }
            let piv = m.get(c, c).clone();
            acc = Some(match acc {
                None => piv.clone(),
                Some(a) => a.mul(&piv),
            });
            m.eliminate_below(c, &piv);
        }
        let d = acc.unwrap_or_else(|| Laurent::from_scalar(Scalar::one(), 1));
        if negate {
            d.neg()
        } else {
            d
        }
    }

    fn min_pivot(&self, c: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in c..self.rows {
            for j in c..self.cols {
                if let Some(v) = self.get(i, j).val() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn eliminate_below(&mut self, c: usize, piv: &Laurent) {
        let inv = piv.inv().expect("pivot is known nonzero");
        for i in c + 1..self.rows {
            let e = self.get(i, c).clone();
            if e.is_exact_zero() {
                continue;
            }
            let f = e.mul(&inv);
            for j in c..self.cols {
                let r = self.get(c, j).clone();
                let v = self.get(i, j).sub(&f.mul(&r));
                self.set(i, j, v);
            }
            self.set(i, c, Laurent::exact_zero());
        }
    }

    /// Solves `self · X = rhs` for square `self`.
    pub fn solve(&self, rhs: &LMat) -> Result<LMat> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let k = rhs.cols;
        let mut m = LMat::from_fn(n, n + k, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - n).clone()
            }
        });
        let mut perm: Vec<usize> = (0..n).collect();
        for c in 0..n {
            let mut best: Option<(i64, usize, usize)> = None;
            for i in c..n {
                for j in c..n {
                    if let Some(v) = m.get(i, j).val() {
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return Err(precision("singular or under-resolved system over K"));
            };
            m.swap_rows(pi, c);
            if pj != c {
                m.swap_cols(pj, c);
                perm.swap(pj, c);
            }
            let piv = m.get(c, c).clone();
            m.eliminate_below(c, &piv);
        }
        // back substitution
        let mut x = LMat::zeros(n, k);
        for col in 0..k {
            let mut sol = vec![Laurent::exact_zero(); n];
            for i in (0..n).rev() {
                let mut s = m.get(i, n + col).clone();
                for (j, sj) in sol.iter().enumerate().skip(i + 1) {
                    let a = m.get(i, j);
                    if a.is_exact_zero() {
                        continue;
                    }
                    s = s.sub(&a.mul(sj));
                }
                sol[i] = s.div(m.get(i, i))?;
            }
            for (i, v) in sol.into_iter().enumerate() {
                x.set(perm[i], col, v);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self, rel: usize) -> Result<LMat> {
        self.solve(&LMat::identity(self.rows, rel))
    }

    /// Converts to series entries at precision at most `cap`, failing on a
    /// negative valuation.
    pub fn to_series(&self, cap: usize) -> Result<Vec<Vec<TruncSeries>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.val_bound() < 0 && e.val().is_some() {
                    return Err(crate::error::Error::NotIntegral { row: i, col: j });
                }
                row.push(e.to_series(cap)?);
            }
            out.push(row);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(cs: &[i64]) -> Laurent {
        Laurent::from_series(&TruncSeries::from_ints(cs))
    }

    #[test]
    fn det_of_diagonal() {
        let mut m = LMat::zeros(2, 2);
        m.set(0, 0, l(&[1, 0, 0, 0, 0, 0]));
        m.set(1, 1, l(&[0, 1, 0, 0, 0, 0]));
        let d = m.det();
        assert_eq!(d.val(), Some(1));
    }

    #[test]
    fn solve_roundtrip() {
        let m = LMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => l(&[0, 1, 0, 0, 0, 0, 0, 0]),
            (0, 1) => l(&[1, 0, 0, 0, 0, 0, 0, 0]),
            (1, 0) => l(&[1, 1, 0, 0, 0, 0, 0, 0]),
            _ => l(&[0, 0, 1, 0, 0, 0, 0, 0]),
        });
        let b = LMat::from_fn(2, 1, |i, _| if i == 0 { l(&[1, 0, 0, 0, 0, 0, 0, 0]) } else { l(&[0, 0, 0, 0, 0, 0, 0, 0]) });
        let x = m.solve(&b).unwrap();
        let r = m.mul(&x).sub(&b);
        for i in 0..2 {
            assert!(r.get(i, 0).val().is_none());
        }
    }
}
