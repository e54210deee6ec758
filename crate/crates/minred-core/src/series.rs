//! Exact scalars and truncated power series in `t`.
//!
//! [`Scalar`] is an exact rational or Gaussian rational. [`TruncSeries`] is a
//! residue modulo `t^prec`; [`Laurent`] carries relative precision and is used
//! where linear algebra divides by non-units.

use std::cmp::{max, min};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{precision, Error, Result};

/// Exact rational number, stored inline while it fits in `i64`.
///
/// The representation is canonical: a value that fits in `Small` is never
/// stored as `Big`, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rat {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::Small(Ratio::from_integer(0))
    }

    pub fn one() -> Rat {
        Rat::Small(Ratio::from_integer(1))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat::from_big(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n/d` in lowest terms. Panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        Rat::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Rat::Small(Ratio::new_raw(n, d))
            }
            _ => Rat::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rat::Big(b) => (**b).clone(),
        }
    }

    fn small_or_big(
        &self,
        other: &Rat,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(r) = small(a, b) {
                if *r.numer() != i64::MIN && *r.denom() != i64::MIN {
                    return Rat::Small(r);
                }
            }
        }
        Rat::from_big(big(self.to_big(), other.to_big()))
    }

    pub fn add(&self, o: &Rat) -> Rat {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        self.small_or_big(o, |a, b| a.checked_add(b), |a, b| a + b)
    }

    pub fn sub(&self, o: &Rat) -> Rat {
        if o.is_zero() {
            return self.clone();
        }
        self.small_or_big(o, |a, b| a.checked_sub(b), |a, b| a - b)
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        if self.is_zero() || o.is_zero() {
            return Rat::zero();
        }
        self.small_or_big(o, |a, b| a.checked_mul(b), |a, b| a * b)
    }

    /// Quotient; panics on division by zero.
    pub fn div(&self, o: &Rat) -> Rat {
        assert!(!o.is_zero(), "division by zero");
        self.small_or_big(o, |a, b| a.checked_div(b), |a, b| a / b)
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(r) => Rat::Small(Ratio::new_raw(-*r.numer(), *r.denom())),
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(r) => r.numer().is_zero(),
            Rat::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rat::Small(r) => *r.numer() == 1 && *r.denom() == 1,
            Rat::Big(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(r) => *r.numer() < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(r) => *r.denom() == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    /// Exact square root if this is the square of a rational.
    pub fn sqrt(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let b = self.to_big();
        let n = b.numer().sqrt();
        let d = b.denom().sqrt();
        if &(&n * &n) == b.numer() && &(&d * &d) == b.denom() {
            Some(Rat::from_big(BigRational::new(n, d)))
        } else {
            None
        }
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        let b = self.to_big();
        (b.numer().clone(), b.denom().clone())
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.numer_denom();
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad rational '{s}'"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

/// Exact scalar: a rational, or a Gaussian rational `re + im·i`.
///
/// `im == None` marks a plain rational. Arithmetic mixing the two kinds
/// produces a Gaussian scalar even when the imaginary part cancels.
#[derive(Clone, Debug)]
pub struct Scalar {
    re: Rat,
    im: Option<Rat>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        if self.re != other.re {
            return false;
        }
        match (&self.im, &other.im) {
            (None, None) => true,
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (Some(a), Some(b)) => a == b,
        }
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { re: Rat::zero(), im: None }
    }

    pub fn one() -> Scalar {
        Scalar { re: Rat::one(), im: None }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar { re: Rat::from_int(n), im: None }
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar { re: Rat::new(n, d), im: None }
    }

    pub fn from_rat(r: Rat) -> Scalar {
        Scalar { re: r, im: None }
    }

    pub fn gaussian(re: Rat, im: Rat) -> Scalar {
        Scalar { re, im: Some(im) }
    }

    /// The imaginary unit.
    pub fn i() -> Scalar {
        Scalar::gaussian(Rat::zero(), Rat::one())
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im(&self) -> Rat {
        self.im.clone().unwrap_or_else(Rat::zero)
    }

    pub fn is_gaussian(&self) -> bool {
        self.im.is_some()
    }

    /// Same value, flagged as Gaussian.
    pub fn promote(&self) -> Scalar {
        Scalar { re: self.re.clone(), im: Some(self.im()) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.as_ref().is_none_or(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.as_ref().is_none_or(|x| x.is_zero())
    }

    /// True if the imaginary part is zero (regardless of the flag).
    pub fn is_real(&self) -> bool {
        self.im.as_ref().is_none_or(|x| x.is_zero())
    }

    pub fn conj(&self) -> Scalar {
        Scalar { re: self.re.clone(), im: self.im.as_ref().map(|x| x.neg()) }
    }

    /// `re² + im²`.
    pub fn norm(&self) -> Rat {
        let i = self.im();
        self.re.mul(&self.re).add(&i.mul(&i))
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match &self.im {
            None => Some(Scalar { re: Rat::one().div(&self.re), im: None }),
            Some(b) => {
                let n = self.norm();
                Some(Scalar { re: self.re.div(&n), im: Some(b.neg().div(&n)) })
            }
        }
    }

    /// A square root in the Gaussian rationals, if one exists.
    ///
    /// Rational inputs with a rational root return a rational; negative
    /// rationals return a purely imaginary Gaussian root.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.is_real() {
            let a = &self.re;
            if let Some(r) = a.sqrt() {
                return Some(Scalar { re: r, im: self.im.as_ref().map(|_| Rat::zero()) });
            }
            return a.neg().sqrt().map(|r| Scalar::gaussian(Rat::zero(), r));
        }
        let a = self.re.clone();
        let b = self.im();
        let s = self.norm().sqrt()?;
        let half = Rat::new(1, 2);
        let u = a.add(&s).mul(&half).sqrt()?;
        let v = b.div(&u.mul(&Rat::from_int(2)));
        Some(Scalar::gaussian(u, v))
    }

    pub fn pow(&self, e: usize) -> Scalar {
        let mut r = Scalar::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.im {
            None => write!(f, "{}", self.re),
            Some(b) => {
                if b.is_negative() {
                    write!(f, "{}-{}*i", self.re, b.neg())
                } else {
                    write!(f, "{}+{}*i", self.re, b)
                }
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p/q`, `p/q+r/s*i`, `p/q-r/s*i`, `r/s*i` and `i`.
    fn from_str(s: &str) -> Result<Scalar> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Scalar::from_rat(t.parse()?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // split body into real part and signed imaginary coefficient
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1".to_string(),
            "-" => "-1".to_string(),
            x => x.trim_start_matches('+').to_string(),
        };
        Ok(Scalar::gaussian(re.parse()?, im.parse()?))
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

fn im_op(a: &Option<Rat>, b: &Option<Rat>, f: impl Fn(&Rat, &Rat) -> Rat) -> Option<Rat> {
    match (a, b) {
        (None, None) => None,
        _ => Some(f(
            a.as_ref().unwrap_or(&Rat::zero()),
            b.as_ref().unwrap_or(&Rat::zero()),
        )),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: self.re.add(&o.re), im: im_op(&self.im, &o.im, |a, b| a.add(b)) }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: self.re.sub(&o.re), im: im_op(&self.im, &o.im, |a, b| a.sub(b)) }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (&self.im, &o.im) {
            (None, None) => Scalar { re: self.re.mul(&o.re), im: None },
            _ => {
                let (a, b) = (&self.re, self.im());
                let (c, d) = (&o.re, o.im());
                Scalar {
                    re: a.mul(c).sub(&b.mul(&d)),
                    im: Some(a.mul(&d).add(&b.mul(c))),
                }
            }
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        let inv = o.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: self.re.neg(), im: self.im.as_ref().map(|x| x.neg()) }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar { (&self).$f(&o) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: &Scalar) -> Scalar { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

/// Valuation of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(usize),
    /// All stored coefficients vanish; the true order is at least `prec`.
    AboveCutoff,
}

impl Val {
    pub fn finite(self) -> Option<usize> {
        match self {
            Val::Finite(v) => Some(v),
            Val::AboveCutoff => None,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::AboveCutoff => write!(f, "above-cutoff"),
        }
    }
}

/// A power series in `t` known modulo `t^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Scalar>,
}

/// Binary operation selector for [`ts_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// Negates the first operand; the second is ignored.
    Neg,
}

impl TruncSeries {
    pub fn zero(prec: usize) -> TruncSeries {
        TruncSeries { coeffs: vec![Scalar::zero(); prec] }
    }

    pub fn one(prec: usize) -> TruncSeries {
        TruncSeries::constant(Scalar::one(), prec)
    }

    pub fn constant(c: Scalar, prec: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(prec);
        if prec > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c·t^e` modulo `t^prec`.
    pub fn monomial(c: Scalar, e: usize, prec: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(prec);
        if e < prec {
            s.coeffs[e] = c;
        }
        s
    }

    /// Sum of `c·t^e` terms; exponents at or above `prec` are dropped.
    pub fn from_terms(terms: &[(usize, Scalar)], prec: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(prec);
        for (e, c) in terms {
            if *e < prec {
                s.coeffs[*e] = &s.coeffs[*e] + c;
            }
        }
        s
    }

    /// Builds from integer coefficients `c_0, c_1, ...`; length is the precision.
    pub fn from_ints(cs: &[i64]) -> TruncSeries {
        TruncSeries { coeffs: cs.iter().map(|&c| Scalar::from_int(c)).collect() }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> TruncSeries {
        TruncSeries { coeffs }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn val(&self) -> Val {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Val::Finite(i),
            None => Val::AboveCutoff,
        }
    }

    /// Lower bound for the valuation: the valuation, or `prec` if above cutoff.
    pub fn val_bound(&self) -> usize {
        self.val().finite().unwrap_or(self.prec())
    }

    pub fn coeff(&self, i: usize) -> Result<&Scalar> {
        self.coeffs
            .get(i)
            .ok_or_else(|| precision(format!("coefficient t^{i} requested at precision {}", self.prec())))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_gaussian(&self) -> bool {
        self.coeffs.iter().any(Scalar::is_gaussian)
    }

    pub fn truncate(&self, prec: usize) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs[..min(prec, self.prec())].to_vec() }
    }

    /// Extends with zero coefficients; used only for exactly known inputs.
    pub fn pad_to(&self, prec: usize) -> TruncSeries {
        let mut c = self.coeffs.clone();
        c.resize(max(prec, c.len()), Scalar::zero());
        TruncSeries { coeffs: c }
    }

    pub fn add(&self, o: &TruncSeries) -> TruncSeries {
        let p = min(self.prec(), o.prec());
        TruncSeries { coeffs: (0..p).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect() }
    }

    pub fn sub(&self, o: &TruncSeries) -> TruncSeries {
        let p = min(self.prec(), o.prec());
        TruncSeries { coeffs: (0..p).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect() }
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    fn convolve(&self, o: &TruncSeries, p: usize) -> TruncSeries {
        let big = |c: &[Scalar]| c.iter().take(p).any(|x| matches!(x.re, Rat::Big(_)));
        if big(&self.coeffs) || big(&o.coeffs) {
            if let (Some(a), Some(b)) = (over_common_denom(&self.coeffs, p), over_common_denom(&o.coeffs, p)) {
                return convolve_integral(a, b, p);
            }
        }
        let mut out = vec![Scalar::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate().take(p) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(p - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Product at precision `min(prec(a), prec(b))`.
    pub fn mul(&self, o: &TruncSeries) -> TruncSeries {
        self.convolve(o, min(self.prec(), o.prec()))
    }

    /// Product at the sharp precision `min(prec(a) + val(b), prec(b) + val(a))`.
    pub fn mul_sharp(&self, o: &TruncSeries) -> TruncSeries {
        let p = min(self.prec() + o.val_bound(), o.prec() + self.val_bound());
        self.pad_to(p).convolve(&o.pad_to(p), p)
    }

    /// Multiplies by `t^k`; precision grows by `k`.
    pub fn shift_up(&self, k: usize) -> TruncSeries {
        let mut c = vec![Scalar::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        TruncSeries { coeffs: c }
    }

    /// Divides by `t^k`; precision drops by `k`. Fails if a stored
    /// coefficient below `t^k` is nonzero.
    pub fn shift_down(&self, k: usize) -> Result<TruncSeries> {
        if k > self.prec() {
            return Err(precision(format!("division by t^{k} at precision {}", self.prec())));
        }
        if let Some(i) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::Precondition(format!("not divisible by t^{k}: nonzero t^{i} coefficient")));
        }
        Ok(TruncSeries { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Inverse of a unit by triangular solve.
    pub fn unit_inverse(&self) -> Result<TruncSeries> {
        let p = self.prec();
        if p == 0 {
            return Err(precision("inverse of a series with precision 0"));
        }
        let a0inv = self.coeffs[0].inv().ok_or(Error::NotAUnit)?;
        let mut b: Vec<Scalar> = Vec::with_capacity(p);
        b.push(a0inv.clone());
        for i in 1..p {
            let mut s = Scalar::zero();
            for j in 1..=i {
                if !self.coeffs[j].is_zero() {
                    s = &s + &(&self.coeffs[j] * &b[i - j]);
                }
            }
            b.push(-(&s * &a0inv));
        }
        Ok(TruncSeries { coeffs: b })
    }

    pub fn pow(&self, e: usize) -> TruncSeries {
        let mut r = TruncSeries::one(self.prec());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.prec())
    }
}

/// Applies `op` to `a` and `b` truncated to the common precision.
/// Numerators over a common denominator of the first `p` coefficients, for
/// series without Gaussian entries.
fn over_common_denom(cs: &[Scalar], p: usize) -> Option<(Vec<BigInt>, BigInt)> {
    if cs.iter().take(p).any(|c| c.im.is_some()) {
        return None;
    }
    let parts: Vec<(BigInt, BigInt)> = cs.iter().take(p).map(|c| c.re.numer_denom()).collect();
    let den = parts.iter().fold(BigInt::one(), |d, (_, q)| num_integer::Integer::lcm(&d, q));
    Some((parts.into_iter().map(|(n, q)| n * (&den / q)).collect(), den))
}

/// Convolution of integer vectors, normalizing each coefficient once.
fn convolve_integral(a: (Vec<BigInt>, BigInt), b: (Vec<BigInt>, BigInt), p: usize) -> TruncSeries {
    let mut out = vec![BigInt::zero(); p];
    for (i, x) in a.0.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.0.iter().enumerate().take(p - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    let den = a.1 * b.1;
    let coeffs = out
        .into_iter()
        .map(|n| if n.is_zero() { Scalar::zero() } else { Scalar::from_rat(Rat::from_big(BigRational::new(n, den.clone()))) })
        .collect();
    TruncSeries { coeffs }
}

pub fn ts_arith(a: &TruncSeries, b: &TruncSeries, op: ArithOp) -> TruncSeries {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Neg => a.neg(),
    }
}

pub fn ts_val(a: &TruncSeries) -> Val {
    a.val()
}

pub fn ts_coeff(a: &TruncSeries, i: usize) -> Result<Scalar> {
    a.coeff(i).cloned()
}

pub fn ts_unit_inverse(a: &TruncSeries) -> Result<TruncSeries> {
    a.unit_inverse()
}

/// Element of `K = C((t))` with relative precision:
/// `t^shift · (c_0 + c_1 t + ...) + O(t^(shift + len))`.
///
/// Normalized so that either `coeffs` is empty (the value is `O(t^shift)`)
/// or `coeffs[0] != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    shift: i64,
    coeffs: Vec<Scalar>,
}

/// Absolute precision standing in for "exact" in [`Laurent`] values.
pub const EXACT_PREC: i64 = 1 << 40;

impl Laurent {
    /// An exactly known zero.
    pub fn exact_zero() -> Laurent {
        Laurent { shift: EXACT_PREC, coeffs: Vec::new() }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.shift >= EXACT_PREC
    }

    /// The value `O(t^abs_prec)`.
    pub fn zero(abs_prec: i64) -> Laurent {
        Laurent { shift: abs_prec, coeffs: Vec::new() }
    }

    pub fn from_series(s: &TruncSeries) -> Laurent {
        match s.val() {
            Val::Finite(v) => Laurent { shift: v as i64, coeffs: s.coeffs[v..].to_vec() },
            Val::AboveCutoff => Laurent::zero(s.prec() as i64),
        }
    }

    pub fn from_scalar(c: Scalar, abs_prec: i64) -> Laurent {
        Laurent::from_parts(0, vec![c], abs_prec)
    }

    /// General constructor: `t^shift · Σ coeffs[j] t^j` known to absolute
    /// precision `abs_prec`.
    pub fn from_parts(shift: i64, coeffs: Vec<Scalar>, abs_prec: i64) -> Laurent {
        let len = (abs_prec - shift).max(0) as usize;
        let mut c = coeffs;
        c.resize(len, Scalar::zero());
        c.truncate(len);
        let mut l = Laurent { shift, coeffs: c };
        l.normalize(abs_prec);
        l
    }

    fn normalize(&mut self, abs_prec: i64) {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) => {}
            Some(i) => {
                self.coeffs.drain(..i);
                self.shift += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.shift = abs_prec;
            }
        }
    }

    pub fn abs_prec(&self) -> i64 {
        self.shift + self.coeffs.len() as i64
    }

    /// Valuation if the value is known to be nonzero.
    pub fn val(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.shift)
        }
    }

    /// Lower bound on the valuation.
    pub fn val_bound(&self) -> i64 {
        self.shift
    }

    pub fn is_known_zero_to(&self, e: i64) -> bool {
        self.shift >= e
    }

    pub fn coeff_at(&self, e: i64) -> Result<Scalar> {
        if e >= self.abs_prec() {
            return Err(precision(format!("coefficient t^{e} beyond precision {}", self.abs_prec())));
        }
        if e < self.shift {
            return Ok(Scalar::zero());
        }
        Ok(self.coeffs[(e - self.shift) as usize].clone())
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let ap = min(self.abs_prec(), o.abs_prec());
        let lo = min(self.shift, o.shift).min(ap);
        let mut c = vec![Scalar::zero(); (ap - lo) as usize];
        for (src, sh) in [(&self.coeffs, self.shift), (&o.coeffs, o.shift)] {
            for (j, x) in src.iter().enumerate() {
                let e = sh + j as i64;
                if e >= ap {
                    break;
                }
                let k = (e - lo) as usize;
                c[k] = &c[k] + x;
            }
        }
        let mut r = Laurent { shift: lo, coeffs: c };
        r.normalize(ap);
        r
    }

    pub fn neg(&self) -> Laurent {
        Laurent { shift: self.shift, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        match (self.val(), o.val()) {
            (None, None) => Laurent::zero((self.shift + o.shift).min(EXACT_PREC)),
            (None, Some(v)) => Laurent::zero((self.shift + v).min(EXACT_PREC)),
            (Some(v), None) => Laurent::zero((o.shift + v).min(EXACT_PREC)),
            (Some(_), Some(_)) => {
                let len = min(self.coeffs.len(), o.coeffs.len());
                let a = TruncSeries { coeffs: self.coeffs[..len].to_vec() };
                let b = TruncSeries { coeffs: o.coeffs[..len].to_vec() };
                let p = a.mul(&b);
                Laurent { shift: self.shift + o.shift, coeffs: p.coeffs }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Laurent {
        if c.is_zero() {
            return Laurent::exact_zero();
        }
        Laurent { shift: self.shift, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplies by `t^k` (any sign).
    pub fn shift_by(&self, k: i64) -> Laurent {
        Laurent { shift: self.shift + k, coeffs: self.coeffs.clone() }
    }

    pub fn inv(&self) -> Result<Laurent> {
        if self.coeffs.is_empty() {
            return Err(precision(format!("inverse of O(t^{})", self.shift)));
        }
        let body = TruncSeries { coeffs: self.coeffs.clone() }.unit_inverse()?;
        Ok(Laurent { shift: -self.shift, coeffs: body.coeffs })
    }

    pub fn div(&self, o: &Laurent) -> Result<Laurent> {
        Ok(self.mul(&o.inv()?))
    }

    /// Converts to a power series when the value is integral.
    ///
    /// `cap` bounds the returned precision.
    pub fn to_series(&self, cap: usize) -> Result<TruncSeries> {
        let ap = self.abs_prec();
        if self.coeffs.is_empty() {
            if ap < 0 {
                return Err(precision("integrality of a value known only modulo a negative power of t"));
            }
            return Ok(TruncSeries::zero(min(ap as usize, cap)));
        }
        if self.shift < 0 {
            return Err(Error::NotIntegral { row: 0, col: 0 });
        }
        let p = min(ap as usize, cap);
        let mut c = vec![Scalar::zero(); p];
        for (j, x) in self.coeffs.iter().enumerate() {
            let e = self.shift as usize + j;
            if e < p {
                c[e] = x.clone();
            }
        }
        Ok(TruncSeries { coeffs: c })
    }

    pub fn is_gaussian(&self) -> bool {
        self.coeffs.iter().any(Scalar::is_gaussian)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(cs: &[i64]) -> TruncSeries {
        TruncSeries::from_ints(cs)
    }

    #[test]
    fn difference_of_squares() {
        let a = s(&[1, 1, 0, 0]);
        let b = s(&[1, -1, 0, 0]);
        assert_eq!(ts_arith(&a, &b, ArithOp::Mul), s(&[1, 0, -1, 0]));
    }

    #[test]
    fn additive_inverse_and_identity() {
        let a = s(&[0, 1, 0]);
        assert!(ts_arith(&a, &a.neg(), ArithOp::Add).is_zero());
        let p = s(&[1, 2, 1]);
        assert_eq!(p.mul(&s(&[1, 0, 0])), p);
    }

    #[test]
    fn valuations() {
        assert_eq!(ts_val(&s(&[0, 0, 1, 1, 0, 0, 0, 0])), Val::Finite(2));
        assert_eq!(ts_val(&TruncSeries::zero(8)), Val::AboveCutoff);
        assert_eq!(ts_val(&s(&[3, 1])), Val::Finite(0));
    }

    #[test]
    fn coefficients() {
        let a = s(&[0, 2, 0, 5]);
        assert_eq!(ts_coeff(&a, 3).unwrap(), Scalar::from_int(5));
        assert_eq!(ts_coeff(&s(&[0, 2]), 0).unwrap(), Scalar::zero());
        assert!(matches!(ts_coeff(&s(&[1, 1]), 5), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn unit_inverse_examples() {
        assert_eq!(ts_unit_inverse(&s(&[1, -1, 0, 0])).unwrap(), s(&[1, 1, 1, 1]));
        let half = ts_unit_inverse(&s(&[2, 0, 0])).unwrap();
        assert_eq!(half.coeff(0).unwrap(), &Scalar::frac(1, 2));
        assert_eq!(ts_unit_inverse(&s(&[0, 1])), Err(Error::NotAUnit));
    }

    #[test]
    fn sharp_product_precision() {
        let a = s(&[0, 0, 1, 0]);
        let b = s(&[0, 0, 0, 1]);
        let p = a.mul_sharp(&b);
        assert_eq!(p.prec(), 6);
        assert_eq!(p.val(), Val::Finite(5));
        let c = s(&[0, 0, 1, 0, 0]);
        assert_eq!(c.mul_sharp(&s(&[1, 1, 0])).prec(), 5);
    }

    #[test]
    fn scalar_parse_roundtrip() {
        for text in ["3", "-1/2", "1/2+3/4*i", "0-1*i", "7/3-2*i"] {
            let x: Scalar = text.parse().unwrap();
            assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }
        let i: Scalar = "i".parse().unwrap();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        let z: Scalar = "2-i".parse().unwrap();
        assert_eq!(z, Scalar::gaussian(Rat::from_int(2), Rat::from_int(-1)));
    }

    #[test]
    fn gaussian_promotion_is_sticky() {
        let i = Scalar::i();
        let prod = &i * &i;
        assert!(prod.is_gaussian());
        assert_eq!(prod, Scalar::from_int(-1));
    }

    #[test]
    fn gaussian_square_roots() {
        let r = Scalar::from_int(-4).sqrt().unwrap();
        assert_eq!(&r * &r, Scalar::from_int(-4));
        let z: Scalar = "3+4*i".parse().unwrap();
        let w = z.sqrt().unwrap();
        assert_eq!(&w * &w, z);
        assert!(Scalar::from_int(2).sqrt().is_none());
        assert!(Scalar::i().sqrt().is_none());
    }

    #[test]
    fn small_big_boundary() {
        let big = Rat::from_int(i64::MAX);
        let sum = big.add(&big);
        assert!(matches!(sum, Rat::Big(_)));
        assert_eq!(sum.sub(&big), big);
        assert!(matches!(sum.sub(&big), Rat::Small(_)));
    }

    #[test]
    fn laurent_division() {
        let t = Laurent::from_series(&s(&[0, 1, 0, 0, 0]));
        let one = Laurent::from_series(&s(&[1, 0, 0, 0, 0]));
        let q = one.div(&t).unwrap();
        assert_eq!(q.val(), Some(-1));
        let back = q.mul(&t);
        assert_eq!(back.to_series(4).unwrap().coeff(0).unwrap(), &Scalar::one());
        assert!(q.to_series(4).is_err());
    }

    #[test]
    fn laurent_add_aligns() {
        let a = Laurent::from_parts(-1, vec![Scalar::one()], 3);
        let b = Laurent::from_parts(0, vec![Scalar::one(), Scalar::one()], 2);
        let c = a.add(&b);
        assert_eq!(c.abs_prec(), 2);
        assert_eq!(c.coeff_at(-1).unwrap(), Scalar::one());
        assert_eq!(c.coeff_at(0).unwrap(), Scalar::one());
    }
}
