//! Polynomials in one variable `X` over exact scalars.

use std::fmt;

use crate::series::Scalar;

/// Polynomial with constant-first coefficients.
///
/// The coefficient vector may carry vanished leading entries; its length
/// minus one is the formal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPoly {
    pub coeffs: Vec<Scalar>,
}

impl CPoly {
    pub fn new(coeffs: Vec<Scalar>) -> CPoly {
        CPoly { coeffs }
    }

    pub fn zero() -> CPoly {
        CPoly { coeffs: vec![] }
    }

    pub fn one() -> CPoly {
        CPoly { coeffs: vec![Scalar::one()] }
    }

    pub fn x() -> CPoly {
        CPoly { coeffs: vec![Scalar::zero(), Scalar::one()] }
    }

    pub fn from_ints(cs: &[i64]) -> CPoly {
        CPoly { coeffs: cs.iter().map(|&c| Scalar::from_int(c)).collect() }
    }

    /// Monic polynomial from its roots.
    pub fn from_roots(roots: &[Scalar]) -> CPoly {
        let mut p = CPoly::one();
        for r in roots {
            p = p.mul(&CPoly::new(vec![-r, Scalar::one()]));
        }
        p
    }

    pub fn formal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Degree after stripping vanished leading coefficients; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn trimmed(&self) -> CPoly {
        match self.degree() {
            Some(d) => CPoly { coeffs: self.coeffs[..=d].to_vec() },
            None => CPoly::zero(),
        }
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Scalar {
        self.degree().map(|d| self.coeffs[d].clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn monic(&self) -> CPoly {
        let t = self.trimmed();
        match t.coeffs.last().and_then(|c| c.inv()) {
            Some(inv) => t.scale(&inv),
            None => t,
        }
    }

    pub fn scale(&self, c: &Scalar) -> CPoly {
        CPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, o: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        CPoly { coeffs: (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect() }.trimmed()
    }

    pub fn sub(&self, o: &CPoly) -> CPoly {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn mul(&self, o: &CPoly) -> CPoly {
        let (a, b) = (self.trimmed(), o.trimmed());
        if a.is_zero() || b.is_zero() {
            return CPoly::zero();
        }
        let mut c = vec![Scalar::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        CPoly { coeffs: c }
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn divrem(&self, d: &CPoly) -> (CPoly, CPoly) {
        let d = d.trimmed();
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.trimmed().coeffs;
        if r.len() <= dd {
            return (CPoly::zero(), CPoly { coeffs: r }.trimmed());
        }
        let mut q = vec![Scalar::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            if !c.is_zero() {
                for j in 0..=dd {
                    r[i + j] = &r[i + j] - &(&c * &d.coeffs[j]);
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (CPoly { coeffs: q }.trimmed(), CPoly { coeffs: r }.trimmed())
    }

    pub fn rem(&self, d: &CPoly) -> CPoly {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both inputs vanish).
    pub fn gcd(&self, o: &CPoly) -> CPoly {
        let (mut a, mut b) = (self.trimmed(), o.trimmed());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> CPoly {
        CPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_int(i as i64))
                .collect(),
        }
        .trimmed()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(-X)`.
    pub fn reflect(&self) -> CPoly {
        CPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    pub fn is_gaussian(&self) -> bool {
        self.coeffs.iter().any(Scalar::is_gaussian)
    }

    /// Yun's square-free decomposition of a nonzero polynomial: monic
    /// `(factor, multiplicity)` pairs with non-constant factors, so that
    /// `p = lead · Π factor^multiplicity`.
    pub fn squarefree_decomposition(&self) -> Vec<(CPoly, usize)> {
        let p = self.monic();
        if p.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.divrem(&a0).0;
        let mut c = dp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})X")?,
                _ => write!(f, "({c})X^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let a = CPoly::from_ints(&[1, 2, 3, 4]);
        let b = CPoly::from_ints(&[1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn squarefree_decomposition_of_product() {
        let x1 = CPoly::from_ints(&[1, 1]);
        let x2 = CPoly::from_ints(&[-2, 1]);
        let p = x1.mul(&x1).mul(&x1).mul(&x2);
        let dec = p.squarefree_decomposition();
        assert_eq!(dec, vec![(x2, 1), (x1, 3)]);
    }

    #[test]
    fn gcd_is_monic() {
        let a = CPoly::from_ints(&[2, 2]).mul(&CPoly::from_ints(&[3, 1]));
        let b = CPoly::from_ints(&[4, 4]);
        assert_eq!(a.gcd(&b), CPoly::from_ints(&[1, 1]));
    }
}
