//! Isotropic subspaces of quadratic spaces carrying a (anti-)self-adjoint
//! operator. Searches run over the rationals first, then the Gaussian
//! rationals; every returned subspace is verified exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::linalg::{intersection_dim, Mat};
use crate::series::{Rat, Scalar};

/// Attempts made by randomized searches before giving up.
pub const SEARCH_ATTEMPTS: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSpace {
    gram: Mat,
    nondegenerate: bool,
}

impl QuadSpace {
    pub fn new(gram: Mat) -> Result<QuadSpace> {
        if !gram.is_square() || gram != gram.transpose() {
            return Err(Error::Precondition("gram matrix must be square and symmetric".into()));
        }
        let nondegenerate = gram.rows() == 0 || !gram.det().is_zero();
        Ok(QuadSpace { gram, nondegenerate })
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        dot(u, &self.gram.mul_vec(v))
    }

    /// `Wᵀ·G·W` for a basis matrix `W`.
    pub fn restrict(&self, w: &Mat) -> Mat {
        w.transpose().mul(&self.gram).mul(w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjointSign {
    SelfAdjoint,
    AntiSelfAdjoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorOnQuad {
    mat: Mat,
    sign: AdjointSign,
}

impl OperatorOnQuad {
    /// Checks `G·M = ±Mᵀ·G` exactly.
    pub fn new(v: &QuadSpace, mat: Mat, sign: AdjointSign) -> Result<OperatorOnQuad> {
        if !mat.is_square() || mat.rows() != v.dim() {
            return Err(Error::Precondition("operator size does not match the space".into()));
        }
        let lhs = v.gram.mul(&mat);
        let rhs = mat.transpose().mul(&v.gram);
        let ok = match sign {
            AdjointSign::SelfAdjoint => lhs == rhs,
            AdjointSign::AntiSelfAdjoint => lhs == rhs.scale(&Scalar::from_int(-1)),
        };
        if !ok {
            return Err(Error::Precondition(format!("operator is not {sign:?} for the pairing")));
        }
        Ok(OperatorOnQuad { mat, sign })
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn sign(&self) -> AdjointSign {
        self.sign
    }

    /// Minimal polynomial equals characteristic polynomial, i.e.
    /// `I, M, …, M^(n−1)` are linearly independent.
    pub fn is_regular(&self) -> bool {
        let n = self.mat.rows();
        let mut pw = Mat::identity(n);
        let mut cols = Vec::with_capacity(n);
        for _ in 0..n {
            let mut flat = Vec::with_capacity(n * n);
            for i in 0..n {
                flat.extend(pw.row(i));
            }
            cols.push(flat);
            pw = pw.mul(&self.mat);
        }
        Mat::from_cols(n * n, &cols).rank() == n
    }
}

fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
}

fn axpy(a: &Scalar, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(xi, yi)| &(a * xi) + yi).collect()
}

fn scale_vec(a: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|xi| a * xi).collect()
}

fn is_zero_vec(x: &[Scalar]) -> bool {
    x.iter().all(Scalar::is_zero)
}

/// Monic `β` with `β² = α` over the coefficient field, by coefficient
/// recursion from the top.
pub fn poly_exact_sqrt(alpha: &CPoly) -> Option<CPoly> {
    let a = alpha.trimmed();
    let deg = a.degree()?;
    if deg % 2 == 1 || !a.leading().is_one() {
        return None;
    }
    let d = deg / 2;
    let mut b = vec![Scalar::zero(); d + 1];
    b[d] = Scalar::one();
    let half = Scalar::frac(1, 2);
    for j in (0..d).rev() {
        // coefficient of X^(d+j): 2·β_j + Σ β_x β_y over x, y > j
        let mut rest = Scalar::zero();
        for x in j + 1..=d {
            let y = d + j - x;
            if y > j && y <= d {
                rest = &rest + &(&b[x] * &b[y]);
            }
        }
        b[j] = &(&a.coeff(d + j) - &rest) * &half;
    }
    let beta = CPoly::new(b);
    (beta.mul(&beta) == a).then_some(beta)
}

/// Roots in the Gaussian rationals of a polynomial, with multiplicity, when
/// it splits there using rational roots, purely imaginary rational roots and
/// a final quadratic. `None` when the polynomial does not split this way.
pub fn roots_in_field(p: &CPoly) -> Option<Vec<Scalar>> {
    let mut rest = p.trimmed().monic();
    rest.degree()?;
    let mut roots = Vec::new();
    while rest.degree()? > 2 {
        let r = find_linear_root(&rest)?;
        rest = rest.divrem(&CPoly::new(vec![-&r, Scalar::one()])).0;
        roots.push(r);
    }
    match rest.degree()? {
        0 => {}
        1 => roots.push(-&rest.coeff(0)),
        _ => {
            let (b, c) = (rest.coeff(1), rest.coeff(0));
            let disc = &(&b * &b) - &(&Scalar::from_int(4) * &c);
            let s = disc.sqrt()?;
            let half = Scalar::frac(1, 2);
            roots.push(&(&(-&b) + &s) * &half);
            roots.push(&(&(-&b) - &s) * &half);
        }
    }
    Some(roots)
}

fn find_linear_root(p: &CPoly) -> Option<Scalar> {
    if p.coeff(0).is_zero() {
        return Some(Scalar::zero());
    }
    if let Some(r) = rational_root(p) {
        return Some(r);
    }
    // X = iY: p(iY) = q(Y); a rational root of both parts of q
    let n = p.formal_degree();
    let mut q = Vec::with_capacity(n + 1);
    let mut ipow = Scalar::one();
    for j in 0..=n {
        q.push(&p.coeff(j) * &ipow);
        ipow = &ipow * &Scalar::i();
    }
    let re = CPoly::new(q.iter().map(|c| Scalar::from_rat(c.re().clone())).collect());
    let im = CPoly::new(q.iter().map(|c| Scalar::from_rat(c.im())).collect());
    let g = if im.is_zero() {
        re
    } else if re.is_zero() {
        im
    } else {
        re.gcd(&im)
    };
    if g.degree().unwrap_or(0) == 0 {
        return None;
    }
    let y = rational_root(&g.monic())?;
    Some(&y * &Scalar::i())
}

/// A rational root by the rational root test, for rational polynomials with
/// moderately sized coefficients.
fn rational_root(p: &CPoly) -> Option<Scalar> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, ToPrimitive, Zero};
    if p.is_gaussian() && p.coeffs.iter().any(|c| !c.im().is_zero()) {
        return None;
    }
    let mut lcm = BigInt::from(1);
    for c in &p.coeffs {
        lcm = lcm.lcm(&c.re().numer_denom().1);
    }
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| {
            let (n, d) = c.re().numer_denom();
            n * (&lcm / d)
        })
        .collect();
    let lo = ints.iter().position(|c| !c.is_zero())?;
    let hi = ints.iter().rposition(|c| !c.is_zero())?;
    let c0 = ints[lo].abs().to_u64()?;
    let cn = ints[hi].abs().to_u64()?;
    const LIMIT: u64 = 1 << 40;
    if c0 > LIMIT || cn > LIMIT {
        return None;
    }
    for u in divisors(c0) {
        for v in divisors(cn) {
            for sgn in [1i64, -1] {
                let r = Scalar::from_rat(Rat::from_big(num_rational::BigRational::new(
                    BigInt::from(u) * sgn,
                    BigInt::from(v),
                )));
                if p.eval(&r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

fn require(phi: &OperatorOnQuad, v: &QuadSpace, sign: AdjointSign, even: bool) -> Result<()> {
    if phi.sign != sign {
        return Err(Error::Precondition(format!("operator must be {sign:?}")));
    }
    if phi.mat.rows() != v.dim() {
        return Err(Error::Precondition("operator size does not match the space".into()));
    }
    if even && v.dim() % 2 == 1 {
        return Err(Error::Precondition("dimension must be even".into()));
    }
    if !v.nondegenerate {
        return Err(Error::DegeneratePairing);
    }
    if !phi.is_regular() {
        return Err(Error::Precondition("operator is not regular".into()));
    }
    Ok(())
}

/// The isotropic `Φ`-stable `β(Φ)V` when `charpoly(Φ) = β²`; `None` when the
/// characteristic polynomial is not a square over the field.
pub fn stable_max_isotropic(v: &QuadSpace, phi: &OperatorOnQuad) -> Result<Option<Mat>> {
    require(phi, v, AdjointSign::SelfAdjoint, true)?;
    let Some(beta) = poly_exact_sqrt(&phi.mat.charpoly()) else {
        return Ok(None);
    };
    let w = phi.mat.eval_poly(&beta).column_basis();
    let claims = Claims { isotropic: true, stable: true, dim: Some(v.dim() / 2), ..Claims::default() };
    if !verify_subspace_claims(v, Some(phi), &w, &claims) {
        return Err(Error::DaggerViolated("β(Φ)V is not a stable maximal isotropic subspace".into()));
    }
    Ok(Some(w))
}

/// Candidate monic `β` with `charpoly = (−1)^e·β(X)·β(−X)`, `e = dim/2`.
fn anti_factor_candidates(alpha: &CPoly, e: usize) -> Result<Vec<CPoly>> {
    if alpha.coeffs.iter().enumerate().any(|(j, c)| j % 2 == 1 && !c.is_zero()) {
        return Ok(vec![]);
    }
    let one = Scalar::one();
    let mut out = Vec::new();
    match e {
        0 => out.push(CPoly::one()),
        1 => {
            if let Some(b) = (-&alpha.coeff(0)).sqrt() {
                out.push(CPoly::new(vec![b.clone(), one.clone()]));
                out.push(CPoly::new(vec![-&b, one.clone()]));
            }
        }
        2 => {
            let (a0, a2) = (alpha.coeff(0), alpha.coeff(2));
            if let Some(r) = a0.sqrt() {
                for b0 in [r.clone(), -&r] {
                    let s = &(&Scalar::from_int(2) * &b0) - &a2;
                    if let Some(b1) = s.sqrt() {
                        out.push(CPoly::new(vec![b0.clone(), b1.clone(), one.clone()]));
                        out.push(CPoly::new(vec![b0.clone(), -&b1, one.clone()]));
                    }
                }
            }
        }
        _ => {
            let Some(roots) = roots_in_field(alpha) else {
                return Err(Error::SearchExhausted(format!(
                    "β(X)β(−X) matching is limited to degree 2 unless the characteristic polynomial splits; got degree {}",
                    2 * e
                )));
            };
            // one root from every {r, −r} pair
            let mut pool = roots;
            let mut chosen = Vec::new();
            while let Some(r) = pool.pop() {
                let neg = -&r;
                let Some(pos) = pool.iter().position(|x| *x == neg) else {
                    return Ok(vec![]);
                };
                pool.remove(pos);
                chosen.push(r);
            }
            out.push(CPoly::from_roots(&chosen));
        }
    }
    Ok(out.into_iter().filter(|b| {
        let sign = if e % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
        b.mul(&reflect_x(b)).scale(&sign) == alpha.trimmed()
    }).collect())
}

/// `β(−X)`.
fn reflect_x(b: &CPoly) -> CPoly {
    CPoly::new(b.coeffs.iter().enumerate().map(|(j, c)| if j % 2 == 1 { -c } else { c.clone() }).collect())
}

/// The `Φ`-stable maximal isotropic `ker β(Φ)` for an anti-self-adjoint `Φ`
/// with `charpoly(Φ) = ±β(X)β(−X)`; `None` when no such `β` exists over the
/// field.
pub fn anti_stable_max_isotropic(v: &QuadSpace, phi: &OperatorOnQuad) -> Result<Option<Mat>> {
    require(phi, v, AdjointSign::AntiSelfAdjoint, true)?;
    let e = v.dim() / 2;
    let alpha = phi.mat.charpoly();
    let claims = Claims { isotropic: true, stable: true, dim: Some(e), ..Claims::default() };
    for beta in anti_factor_candidates(&alpha, e)? {
        let w = phi.mat.eval_poly(&beta).nullspace();
        if verify_subspace_claims(v, Some(phi), &w, &claims) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Eigenvalues and eigenvectors of a diagonalizable operator with distinct
/// eigenvalues in the field.
fn eigen_split(m: &Mat) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    let n = m.rows();
    let lams = roots_in_field(&m.charpoly())?;
    let mut vecs = Vec::with_capacity(n);
    for (i, l) in lams.iter().enumerate() {
        if lams[..i].contains(l) {
            return None;
        }
        let ker = m.sub(&Mat::identity(n).scale(l)).nullspace();
        if ker.cols() != 1 {
            return None;
        }
        vecs.push(ker.col(0));
    }
    Some((lams, vecs))
}

/// `1/∏_(j≠i)(λ_i − λ_j)`: the kernel of the Vandermonde moment map.
fn vandermonde_kernel(lams: &[Scalar]) -> Vec<Scalar> {
    lams.iter()
        .enumerate()
        .map(|(i, li)| {
            let p = lams.iter().enumerate().filter(|(j, _)| *j != i).fold(Scalar::one(), |acc, (_, lj)| &acc * &(li - lj));
            p.inv().expect("distinct eigenvalues")
        })
        .collect()
}

/// A vector `v = Σ x_i u_i` with prescribed `g(u_i,u_i)·x_i² ∝ y_i`,
/// normalized so that `x_0 = 1`.
fn vector_with_moments(v: &QuadSpace, vecs: &[Vec<Scalar>], y: &[Scalar]) -> Option<Vec<Scalar>> {
    let c: Vec<Scalar> = vecs.iter().map(|u| v.pair(u, u)).collect();
    if c.iter().any(Scalar::is_zero) || y.iter().any(Scalar::is_zero) {
        return None;
    }
    // κ chosen so that x_0 = 1
    let kappa = &c[0] / &y[0];
    let mut out = vec![Scalar::zero(); v.dim()];
    for i in 0..vecs.len() {
        let x = (&(&kappa * &y[i]) / &c[i]).sqrt()?;
        out = axpy(&x, &vecs[i], &out);
    }
    Some(out)
}

fn krylov(m: &Mat, v: &[Scalar], from: usize, to: usize) -> Mat {
    let mut cur = v.to_vec();
    for _ in 0..from {
        cur = m.mul_vec(&cur);
    }
    let mut cols = Vec::new();
    for _ in from..to {
        cols.push(cur.clone());
        cur = m.mul_vec(&cur);
    }
    Mat::from_cols(v.len(), &cols)
}

/// A maximal isotropic `W` with `codim_W(Φ(W) ∩ W) = 1`, as the Krylov space
/// of a vector whose moments vanish.
pub fn codim1_isotropic(v: &QuadSpace, phi: &OperatorOnQuad, seed: u64) -> Result<Mat> {
    require(phi, v, AdjointSign::SelfAdjoint, true)?;
    if poly_exact_sqrt(&phi.mat.charpoly()).is_some() {
        return Err(Error::Precondition("characteristic polynomial is a square".into()));
    }
    let n = v.dim() / 2;
    let claims = Claims { isotropic: true, dim: Some(n), codim_image: Some(1), ..Claims::default() };
    if let Some((lams, vecs)) = eigen_split(&phi.mat) {
        let w = vandermonde_kernel(&lams);
        if let Some(x) = vector_with_moments(v, &vecs, &w) {
            let basis = krylov(&phi.mat, &x, 0, n);
            if verify_subspace_claims(v, Some(phi), &basis, &claims) {
                return Ok(basis);
            }
        }
    }
    if v.dim() == 2 {
        // any non-eigen isotropic vector works in the plane
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = Mat::identity(2);
        for _ in 0..SEARCH_ATTEMPTS {
            if let Some(x) = isotropic_vector_in(v, &full, &mut rng) {
                let basis = Mat::from_cols(2, &[x]);
                if verify_subspace_claims(v, Some(phi), &basis, &claims) {
                    return Ok(basis);
                }
            }
        }
    }
    Err(Error::NotFoundInField(format!("codimension-one isotropic subspace (seed {seed})")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedVectors {
    /// Basis of the isotropic part, as columns.
    pub v0: Mat,
    pub plus: Vec<Scalar>,
    pub minus: Vec<Scalar>,
}

/// The triple `(V₀, v⁺, v⁻)` built from a cyclic vector `v`:
/// `V₀ = ⟨Φv, …, Φ^(n−1)v⟩` (`⟨Φv, …, Φ^n v⟩` for odd dimension),
/// `v⁺ ∝ v`, `v⁻ ∝ Φ^n v` (`Φ^(n+1) v`).
pub fn paired_vectors(v: &QuadSpace, phi: &OperatorOnQuad, parity: Parity) -> Result<PairedVectors> {
    require(phi, v, AdjointSign::SelfAdjoint, false)?;
    let d = v.dim();
    let expected = match parity {
        Parity::Even => d % 2 == 0,
        Parity::Odd => d % 2 == 1,
    };
    if !expected || d == 0 {
        return Err(Error::Precondition(format!("dimension {d} does not match {parity:?}")));
    }
    let (n, top) = match parity {
        Parity::Even => (d / 2, d / 2),
        Parity::Odd => (d / 2, d / 2 + 1),
    };
    let not_found = |why: &str| Error::NotFoundInField(format!("paired vectors ({parity:?}, dim {d}): {why}"));
    let (lams, vecs) = eigen_split(&phi.mat).ok_or_else(|| not_found("eigenvalues outside the field"))?;
    if lams.iter().any(Scalar::is_zero) {
        return Err(not_found("zero eigenvalue"));
    }
    // moments s_1, …, s_(2·top−1) (none when n = 0) of y_i = g(u_i,u_i)x_i² must vanish
    let conditions = if n == 0 { 0 } else { 2 * top - 1 };
    let ker = if conditions == 0 {
        Mat::identity(d)
    } else {
        let rows = (1..=conditions).map(|j| lams.iter().map(|l| l.pow(j)).collect()).collect();
        Mat::from_rows(rows).nullspace()
    };
    if ker.cols() == 0 {
        return Err(not_found("the moment conditions force v = 0"));
    }
    let y = ker.col(0);
    let x = vector_with_moments(v, &vecs, &y).ok_or_else(|| not_found("square roots outside the field"))?;
    let v0 = krylov(&phi.mat, &x, 1, top);
    let top_vec = krylov(&phi.mat, &x, top, top + 1).col(0);
    let normalize = |u: &[Scalar]| -> Option<Vec<Scalar>> {
        let s = v.pair(u, u).sqrt()?;
        Some(scale_vec(&s.inv()?, u))
    };
    let plus = normalize(&x).ok_or_else(|| not_found("g(v⁺, v⁺) is not a square"))?;
    let minus = normalize(&top_vec).ok_or_else(|| not_found("g(v⁻, v⁻) is not a square"))?;
    let out = PairedVectors { v0, plus, minus };
    if !check_paired(v, phi, &out, parity) {
        return Err(Error::DaggerViolated(format!("paired vectors ({parity:?}) failed verification")));
    }
    Ok(out)
}

fn check_paired(v: &QuadSpace, phi: &OperatorOnQuad, p: &PairedVectors, parity: Parity) -> bool {
    let d = v.dim();
    let orth = vec![p.plus.clone(), p.minus.clone()];
    let claims = Claims { isotropic: true, dim: Some(d / 2 - usize::from(parity == Parity::Even)), orthogonal_to: orth, ..Claims::default() };
    if !verify_subspace_claims(v, None, &p.v0, &claims) {
        return false;
    }
    if !v.pair(&p.plus, &p.plus).is_one() || !v.pair(&p.minus, &p.minus).is_one() {
        return false;
    }
    let n = d;
    let with = |u: &[Scalar]| p.v0.hcat(&Mat::from_cols(n, &[u.to_vec()]));
    let image = phi.mat.mul(&with(&p.plus));
    match parity {
        Parity::Even => {
            v.pair(&p.plus, &p.minus).is_zero() && {
                let rhs = with(&p.minus);
                image.rank() == rhs.rank() && intersection_dim(&image, &rhs) == rhs.rank()
            }
        }
        Parity::Odd => {
            intersection_dim(&p.v0, &image) == p.v0.cols() && {
                let rhs = with(&p.minus);
                let phi_v0 = phi.mat.mul(&p.v0);
                intersection_dim(&phi_v0, &rhs) == phi_v0.rank()
            }
        }
    }
}

fn random_scalar(rng: &mut ChaCha8Rng, gaussian: bool) -> Scalar {
    let re = Rat::from_int(rng.gen_range(-4..=4));
    if gaussian {
        Scalar::gaussian(re, Rat::from_int(rng.gen_range(-4..=4)))
    } else {
        Scalar::from_rat(re)
    }
}

/// One try at an isotropic vector in the column span of `basis`: restrict to
/// the line `x + c·y` and solve the quadratic in `c`.
fn isotropic_vector_in(v: &QuadSpace, basis: &Mat, rng: &mut ChaCha8Rng) -> Option<Vec<Scalar>> {
    let k = basis.cols();
    let gaussian = rng.gen_bool(0.5);
    let rand_vec = |rng: &mut ChaCha8Rng| {
        let coeffs: Vec<Scalar> = (0..k).map(|_| random_scalar(rng, gaussian)).collect();
        basis.mul_vec(&coeffs)
    };
    let x = rand_vec(rng);
    let y = rand_vec(rng);
    if is_zero_vec(&x) || is_zero_vec(&y) {
        return None;
    }
    let (qx, qy, bxy) = (v.pair(&x, &x), v.pair(&y, &y), v.pair(&x, &y));
    if qx.is_zero() {
        return Some(x);
    }
    if qy.is_zero() {
        return Some(y);
    }
    let disc = &(&bxy * &bxy) - &(&qx * &qy);
    let s = disc.sqrt()?;
    let c = &(&(-&bxy) + &s) / &qy;
    let out = axpy(&c, &y, &x);
    (!is_zero_vec(&out)).then_some(out)
}

/// A maximal isotropic subspace (dimension `⌊dim/2⌋`) of a nondegenerate
/// space, split off one hyperbolic plane at a time.
pub fn max_isotropic(v: &QuadSpace, seed: u64) -> Result<Mat> {
    if !v.nondegenerate {
        return Err(Error::DegeneratePairing);
    }
    let d = v.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<Vec<Scalar>> = Vec::new();
    let mut rest = Mat::identity(d);
    while rest.cols() >= 2 {
        let mut hit = None;
        for _ in 0..SEARCH_ATTEMPTS {
            if let Some(x) = isotropic_vector_in(v, &rest, &mut rng) {
                hit = Some(x);
                break;
            }
        }
        let Some(x) = hit else {
            return Err(Error::NotFoundInField(format!(
                "isotropic vector in a {}-dimensional subspace (seed {seed})",
                rest.cols()
            )));
        };
        // partner w in rest with g(x, w) ≠ 0, then pass to ⟨x, w⟩^⊥ ∩ rest
        let Some(w) = rest.columns().into_iter().find(|c| !v.pair(&x, c).is_zero()) else {
            return Err(Error::DegeneratePairing);
        };
        let pair = Mat::from_cols(d, &[x.clone(), w]);
        let cond = pair.transpose().mul(v.gram()).mul(&rest);
        let ker = cond.nullspace();
        rest = rest.mul(&ker);
        found.push(x);
    }
    let basis = Mat::from_cols(d, &found);
    let claims = Claims { isotropic: true, dim: Some(d / 2), ..Claims::default() };
    if !verify_subspace_claims(v, None, &basis, &claims) {
        return Err(Error::DaggerViolated("maximal isotropic search returned a bad basis".into()));
    }
    Ok(basis)
}

/// Conditions checked by [`verify_subspace_claims`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Claims {
    pub isotropic: bool,
    pub stable: bool,
    /// Required `codim_W(Φ(W) ∩ W)`.
    pub codim_image: Option<usize>,
    pub orthogonal_to: Vec<Vec<Scalar>>,
    pub dim: Option<usize>,
}

/// Exact post-hoc checks on the column span of `w`. Operator claims fail
/// when no operator is given.
pub fn verify_subspace_claims(v: &QuadSpace, phi: Option<&OperatorOnQuad>, w: &Mat, claims: &Claims) -> bool {
    if w.rows() != v.dim() {
        return false;
    }
    let rank = w.rank();
    if claims.dim.is_some_and(|d| d != rank) {
        return false;
    }
    if claims.isotropic && !v.restrict(w).is_zero() {
        return false;
    }
    for u in &claims.orthogonal_to {
        if !w.columns().iter().all(|c| v.pair(c, u).is_zero()) {
            return false;
        }
    }
    if claims.stable || claims.codim_image.is_some() {
        let Some(phi) = phi else { return false };
        let img = phi.mat.mul(w);
        let meet = intersection_dim(&img, w);
        if claims.stable && meet != img.rank() {
            return false;
        }
        if claims.codim_image.is_some_and(|c| rank - meet != c) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(rows: &[&[i64]]) -> QuadSpace {
        QuadSpace::new(Mat::from_int_rows(rows)).unwrap()
    }

    fn op(v: &QuadSpace, rows: &[&[i64]], sign: AdjointSign) -> OperatorOnQuad {
        OperatorOnQuad::new(v, Mat::from_int_rows(rows), sign).unwrap()
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(poly_exact_sqrt(&CPoly::from_ints(&[1, 2, 1])), Some(CPoly::from_ints(&[1, 1])));
        assert_eq!(poly_exact_sqrt(&CPoly::from_ints(&[1, 0, 2, 0, 1])), Some(CPoly::from_ints(&[1, 0, 1])));
        assert_eq!(poly_exact_sqrt(&CPoly::from_ints(&[1, 1, 1])), None);
    }

    #[test]
    fn stable_examples() {
        let v = space(&[&[0, 1], &[1, 0]]);
        let phi = op(&v, &[&[2, 0], &[0, 2]], AdjointSign::SelfAdjoint);
        assert!(matches!(stable_max_isotropic(&v, &phi), Err(Error::Precondition(_))));
        // self-adjoint for diag(1, −1), charpoly X² + 1
        let v = space(&[&[1, 0], &[0, -1]]);
        let phi = op(&v, &[&[0, -1], &[1, 0]], AdjointSign::SelfAdjoint);
        assert_eq!(stable_max_isotropic(&v, &phi).unwrap(), None);
        // Jordan blocks J(1, 2) ⊕ J(−1, 2) with antidiagonal grams
        let v = space(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let phi = op(&v, &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 1], &[0, 0, 0, -1]], AdjointSign::SelfAdjoint);
        let w = stable_max_isotropic(&v, &phi).unwrap().unwrap();
        assert_eq!(w.cols(), 2);
        assert_eq!(stable_max_isotropic(&v, &phi).unwrap().unwrap(), w);
    }

    #[test]
    fn anti_stable_examples() {
        let v = space(&[&[1, 0], &[0, 1]]);
        // Φ skew w.r.t. identity: charpoly X² + 1
        let phi = op(&v, &[&[0, -1], &[1, 0]], AdjointSign::AntiSelfAdjoint);
        let w = anti_stable_max_isotropic(&v, &phi).unwrap().unwrap();
        assert_eq!(w.cols(), 1);
        assert!(w.is_gaussian());
        // hyperbolic plane, Φ = diag(1, −1): charpoly X² − 1
        let v = space(&[&[0, 1], &[1, 0]]);
        let phi = op(&v, &[&[1, 0], &[0, -1]], AdjointSign::AntiSelfAdjoint);
        let w = anti_stable_max_isotropic(&v, &phi).unwrap().unwrap();
        assert_eq!(w.cols(), 1);
        assert!(!w.is_gaussian());
    }

    #[test]
    fn anti_factor_of_cyclotomic_quartic() {
        // X⁴ + X² + 1 = (X² + X + 1)(X² − X + 1) already over the rationals
        let c = anti_factor_candidates(&CPoly::from_ints(&[1, 0, 1, 0, 1]), 2).unwrap();
        assert!(c.contains(&CPoly::from_ints(&[1, 1, 1])));
    }

    #[test]
    fn codim1_examples() {
        let v = space(&[&[1, 0], &[0, 1]]);
        let phi = op(&v, &[&[1, 0], &[0, -1]], AdjointSign::SelfAdjoint);
        let w = codim1_isotropic(&v, &phi, 7).unwrap();
        let x = w.col(0);
        // (1, ±i)
        assert!(x[0].is_one() && (x[1] == Scalar::i() || x[1] == -Scalar::i()));
        // eigenvalues ±1, ±2 on hyperbolic planes; the second plane is scaled
        // by 2 so that the witness is Gaussian-rational
        let v = space(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, 2, 0]]);
        let phi = op(&v, &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, 2, 0]], AdjointSign::SelfAdjoint);
        let w = codim1_isotropic(&v, &phi, 1).unwrap();
        let claims = Claims { isotropic: true, dim: Some(2), codim_image: Some(1), ..Claims::default() };
        assert!(verify_subspace_claims(&v, Some(&phi), &w, &claims));
    }

    #[test]
    fn codim1_rejects_square() {
        let v = space(&[&[0, 1], &[1, 0]]);
        let phi = op(&v, &[&[1, 1], &[0, 1]], AdjointSign::SelfAdjoint);
        assert!(matches!(codim1_isotropic(&v, &phi, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn paired_vector_examples() {
        let v = space(&[&[1]]);
        let phi = op(&v, &[&[5]], AdjointSign::SelfAdjoint);
        let p = paired_vectors(&v, &phi, Parity::Odd).unwrap();
        assert_eq!((p.v0.cols(), p.plus.clone()), (0, vec![Scalar::one()]));
        // diag(1,2) with the identity gram needs √−2
        let v = space(&[&[1, 0], &[0, 1]]);
        let phi = op(&v, &[&[1, 0], &[0, 2]], AdjointSign::SelfAdjoint);
        assert!(matches!(paired_vectors(&v, &phi, Parity::Even), Err(Error::NotFoundInField(_))));
        let v = space(&[&[3, 0], &[0, 3]]);
        let phi = op(&v, &[&[1, 0], &[0, 4]], AdjointSign::SelfAdjoint);
        let p = paired_vectors(&v, &phi, Parity::Even).unwrap();
        assert!(v.pair(&p.plus, &p.minus).is_zero());
        // odd dimension 3 with distinct eigenvalues: the moment system is
        // the full Vandermonde system
        let v = space(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let phi = op(&v, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]], AdjointSign::SelfAdjoint);
        assert!(matches!(paired_vectors(&v, &phi, Parity::Odd), Err(Error::NotFoundInField(_))));
    }

    #[test]
    fn max_isotropic_examples() {
        let v = space(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, -2]]);
        assert_eq!(max_isotropic(&v, 3).unwrap().cols(), 2);
        let v = space(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(max_isotropic(&v, 3).unwrap().cols(), 1);
    }

    #[test]
    fn claims_trivia() {
        let v = space(&[&[1, 0], &[0, 1]]);
        assert!(verify_subspace_claims(&v, None, &Mat::zeros(2, 0), &Claims { isotropic: true, ..Claims::default() }));
        assert!(!verify_subspace_claims(&v, None, &Mat::identity(2), &Claims { isotropic: true, ..Claims::default() }));
    }

    #[test]
    fn roots_examples() {
        let r = roots_in_field(&CPoly::from_ints(&[4, 0, 5, 0, 1])).unwrap();
        assert_eq!(r.len(), 4);
        assert!(roots_in_field(&CPoly::from_ints(&[-2, 0, 1])).is_none());
        assert_eq!(roots_in_field(&CPoly::from_ints(&[1, 0, 1])).unwrap().len(), 2);
    }
}
