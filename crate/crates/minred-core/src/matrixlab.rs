//! Explicit realizations: companion matrices, diagonal conjugations, trace
//! pairings, quotient data, the lattices `E_W` and exact verification of the
//! reduction's Jordan type.

use serde::{Deserialize, Serialize};

use crate::cpoly::CPoly;
use crate::error::{precision, Error, Result};
use crate::isotropy::{
    anti_stable_max_isotropic, codim1_isotropic, max_isotropic, paired_vectors, stable_max_isotropic,
    verify_subspace_claims, AdjointSign, Claims, OperatorOnQuad, Parity, QuadSpace,
};
use crate::linalg::{intersection_dim, Mat};
use crate::lmat::LMat;
use crate::partitions::{balanced, Partition};
use crate::polyring::{newton_polygon, Family, GroupType, Segment, SeriesPoly};
use crate::series::{Scalar, TruncSeries};

/// Square matrix of truncated series sharing one precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    n: usize,
    entries: Vec<TruncSeries>,
}

impl SeriesMatrix {
    /// Entries are truncated to their common minimum precision.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> TruncSeries) -> SeriesMatrix {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        let p = entries.iter().map(TruncSeries::prec).min().unwrap_or(0);
        for e in &mut entries {
            if e.prec() > p {
                *e = e.truncate(p);
            }
        }
        SeriesMatrix { n, entries }
    }

    pub fn zeros(n: usize, prec: usize) -> SeriesMatrix {
        SeriesMatrix { n, entries: vec![TruncSeries::zero(prec); n * n] }
    }

    pub fn identity(n: usize, prec: usize) -> SeriesMatrix {
        SeriesMatrix::from_fn(n, |i, j| if i == j { TruncSeries::one(prec) } else { TruncSeries::zero(prec) })
    }

    /// A constant matrix at precision `prec`.
    pub fn from_mat(m: &Mat, prec: usize) -> SeriesMatrix {
        assert!(m.is_square());
        SeriesMatrix::from_fn(m.rows(), |i, j| TruncSeries::constant(m[(i, j)].clone(), prec))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn prec(&self) -> usize {
        self.entries.first().map_or(0, TruncSeries::prec)
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncSeries {
        &self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.n, o.n);
        let p = self.prec().min(o.prec());
        SeriesMatrix::from_fn(self.n, |i, j| {
            let mut acc = TruncSeries::zero(p);
            for k in 0..self.n {
                let (a, b) = (self.get(i, k), o.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn add(&self, o: &SeriesMatrix) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.n, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &SeriesMatrix) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.n, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    /// `self · M` for a constant matrix `M`.
    pub fn mul_mat(&self, m: &Mat) -> SeriesMatrix {
        self.mul(&SeriesMatrix::from_mat(m, self.prec()))
    }

    /// `M · self` for a constant matrix `M`.
    pub fn mat_mul(m: &Mat, s: &SeriesMatrix) -> SeriesMatrix {
        SeriesMatrix::from_mat(m, s.prec()).mul(s)
    }

    pub fn pow(&self, e: usize) -> SeriesMatrix {
        let mut r = SeriesMatrix::identity(self.n, self.prec());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Multiplies every entry by `t^k`.
    pub fn shift_up(&self, k: usize) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.n, |i, j| self.get(i, j).shift_up(k))
    }

    /// Matrix of `t^e` coefficients.
    pub fn coeff(&self, e: usize) -> Result<Mat> {
        let mut m = Mat::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.get(i, j).coeff(e)?.clone();
            }
        }
        Ok(m)
    }

    /// Reduction modulo `t`.
    pub fn reduce(&self) -> Result<Mat> {
        self.coeff(0)
    }

    pub fn block_diag(blocks: &[&SeriesMatrix]) -> SeriesMatrix {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let p = blocks.iter().map(|b| b.prec()).min().unwrap_or(0);
        let mut owner = Vec::with_capacity(n);
        for (bi, b) in blocks.iter().enumerate() {
            let off = owner.len();
            owner.extend((0..b.n).map(|r| (bi, off, r)));
        }
        SeriesMatrix::from_fn(n, |i, j| {
            let (bi, off, r) = owner[i];
            let (bj, _, _) = owner[j];
            if bi == bj {
                blocks[bi].get(r, j - off).clone()
            } else {
                TruncSeries::zero(p)
            }
        })
    }

    pub fn to_lmat(&self) -> LMat {
        LMat::from_series(self.n, self.n, |i, j| self.get(i, j).clone(), false)
    }

    /// Integral Laurent matrix as series, at precision at most `cap`.
    pub fn from_lmat(l: &LMat, cap: usize) -> Result<SeriesMatrix> {
        let rows = l.to_series(cap)?;
        Ok(SeriesMatrix::from_fn(l.rows(), |i, j| rows[i][j].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(TruncSeries::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub(&self.transpose()).is_zero()
    }

    pub fn is_skew(&self) -> bool {
        self.add(&self.transpose()).is_zero()
    }

    /// `t·self⁻¹`, required to be integral.
    pub fn t_inverse(&self) -> Result<SeriesMatrix> {
        let inv = self.to_lmat().inverse(self.prec())?.shift_by(1);
        SeriesMatrix::from_lmat(&inv, self.prec())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Skew,
}

/// An element `γ` together with a pairing for which it is anti-self-adjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedModule {
    pub gamma: SeriesMatrix,
    pub pairing: SeriesMatrix,
    pub symmetry: Symmetry,
}

impl PairedModule {
    /// Checks the symmetry tag and `g·γ + γᵀ·g = 0` within precision.
    pub fn new(gamma: SeriesMatrix, pairing: SeriesMatrix, symmetry: Symmetry) -> Result<PairedModule> {
        let sym_ok = match symmetry {
            Symmetry::Symmetric => pairing.is_symmetric(),
            Symmetry::Skew => pairing.is_skew(),
        };
        if !sym_ok {
            return Err(Error::InternalInvariantViolation(format!("pairing is not {symmetry:?}")));
        }
        let pm = PairedModule { gamma, pairing, symmetry };
        if !pm.is_anti_self_adjoint() {
            return Err(Error::InternalInvariantViolation("γ is not anti-self-adjoint for the pairing".into()));
        }
        Ok(pm)
    }

    pub fn is_anti_self_adjoint(&self) -> bool {
        let g = &self.pairing;
        g.mul(&self.gamma).add(&self.gamma.transpose().mul(g)).is_zero()
    }

    pub fn prec(&self) -> usize {
        self.gamma.prec().min(self.pairing.prec())
    }
}

/// Companion matrix: ones on the subdiagonal, `−a_(deg−i)` down the last column.
pub fn companion(f: &SeriesPoly) -> SeriesMatrix {
    let n = f.deg();
    let p = f.prec();
    SeriesMatrix::from_fn(n, |i, j| {
        if j == n - 1 {
            f.a(n - i).neg()
        } else if i == j + 1 {
            TruncSeries::one(p)
        } else {
            TruncSeries::zero(p)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpKind {
    TypeA,
    TypeCOrBD,
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Exponents of the diagonal conjugation `P = diag(t^p_j)`.
pub fn exponents(kind: ExpKind, deg: usize, m: usize) -> Result<Vec<usize>> {
    if m == 0 || deg == 0 {
        return Err(Error::Precondition("degree and slope height must be positive".into()));
    }
    match kind {
        ExpKind::TypeA => {
            let (k, l) = (deg / m, deg % m);
            let mut out = Vec::with_capacity(deg);
            for p in (l..m).rev() {
                out.extend(std::iter::repeat_n(p, k));
            }
            for p in (0..l).rev() {
                out.extend(std::iter::repeat_n(p, k + 1));
            }
            Ok(out)
        }
        ExpKind::TypeCOrBD => {
            if deg % 2 == 1 {
                return Err(Error::Precondition("degree must be even".into()));
            }
            Ok((1..=deg)
                .map(|j| if j <= deg / 2 { m - ceil_div(j * m, deg) } else { ceil_div((deg + 1 - j) * m, deg) - 1 })
                .collect())
        }
    }
}

fn run_lengths(exps: &[usize]) -> Partition {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < exps.len() {
        let j = (i..exps.len()).find(|&j| exps[j] != exps[i]).unwrap_or(exps.len());
        runs.push(j - i);
        i = j;
    }
    Partition::new(runs)
}

/// Type C exponents whose runs form `balanced(deg, m)`. The closed form is
/// used when its runs are balanced (always for even `m`); otherwise a
/// symmetric non-increasing sequence is searched for that keeps the
/// conjugated companion matrix and the scaled pairing integral.
pub fn c_exponents(deg: usize, m: usize) -> Result<Vec<usize>> {
    let closed = exponents(ExpKind::TypeCOrBD, deg, m)?;
    let want = balanced(deg, m);
    if run_lengths(&closed) == want {
        return Ok(closed);
    }
    let n = deg / 2;
    let fits = |p: &[usize]| -> bool {
        if run_lengths(p) != want {
            return false;
        }
        // last column of the companion matrix: nonzero entries at even index
        for i in 1..=deg {
            let idx = deg + 1 - i;
            if idx % 2 == 0 && p[i - 1] > p[deg - 1] + ceil_div(idx * m, deg) {
                return false;
            }
        }
        for j in 1..=deg {
            for i in (j..=deg).step_by(2) {
                if p[j - 1] > p[i - 1] + ceil_div((i - j) * m, deg) {
                    return false;
                }
            }
        }
        true
    };
    fn go(half: &mut Vec<usize>, n: usize, m: usize, out: &mut Option<Vec<usize>>, fits: &dyn Fn(&[usize]) -> bool) {
        if out.is_some() {
            return;
        }
        if half.len() == n {
            // the middle pair must not increase: p_n ≥ m−1−p_n
            if 2 * half[n - 1] + 1 < m {
                return;
            }
            let mut p = half.clone();
            p.extend(half.iter().rev().map(|&x| m - 1 - x));
            if fits(&p) {
                *out = Some(p);
            }
            return;
        }
        let top = half.last().copied().unwrap_or(m - 1);
        for v in (0..=top).rev() {
            half.push(v);
            go(half, n, m, out, fits);
            half.pop();
        }
    }
    let mut out = None;
    go(&mut Vec::new(), n, m, &mut out, &fits);
    out.ok_or_else(|| Error::SearchExhausted(format!("no type C exponents for degree {deg}, height {m}")))
}

/// 0-based positions `j` with `p_j > p_(j+1)`, taking `p_(deg+1) = −1`.
pub fn jump_set(exps: &[usize]) -> Vec<usize> {
    (0..exps.len()).filter(|&j| j + 1 == exps.len() || exps[j] > exps[j + 1]).collect()
}

/// `P⁻¹·γ·P` for `P = diag(t^exps)`.
pub fn conj_diag(gamma: &SeriesMatrix, exps: &[usize]) -> Result<SeriesMatrix> {
    let n = gamma.dim();
    assert_eq!(exps.len(), n);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let e = gamma.get(i, j);
            out.push(if exps[j] >= exps[i] {
                e.shift_up(exps[j] - exps[i])
            } else {
                shift_down_or(e, exps[i] - exps[j], i, j)?
            });
        }
    }
    Ok(SeriesMatrix::from_fn(n, |i, j| out[i * n + j].clone()))
}

fn shift_down_or(e: &TruncSeries, k: usize, i: usize, j: usize) -> Result<TruncSeries> {
    match e.shift_down(k) {
        Ok(s) => Ok(s),
        Err(Error::InsufficientPrecision(m)) => Err(Error::InsufficientPrecision(m)),
        Err(_) => Err(Error::NotIntegral { row: i + 1, col: j + 1 }),
    }
}

/// Partition from ranks of powers: the number of parts `≥ j` is
/// `rank(N^(j−1)) − rank(N^j)`.
pub fn jordan_type(n: &Mat) -> Result<Partition> {
    assert!(n.is_square());
    let d = n.rows();
    let mut ranks = vec![d];
    let mut pw = Mat::identity(d);
    for _ in 0..d {
        pw = pw.mul(n);
        let r = pw.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    if *ranks.last().unwrap() != 0 {
        return Err(Error::NotNilpotent);
    }
    let cols: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let count = cols.first().copied().unwrap_or(0);
    Ok(Partition::new((1..=count).map(|i| cols.iter().filter(|&&c| c >= i).count()).collect()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingKind {
    TypeC,
    TypeBD,
}

/// `c_j = Tr(λ^j / f′(λ))` for `0 ≤ j < count`, by Euler's recurrence:
/// `c_0 = … = c_(deg−2) = 0`, `c_(deg−1) = 1`, `c_j = −Σ_i a_i c_(j−i)`.
fn euler_traces(f: &SeriesPoly, count: usize) -> Vec<TruncSeries> {
    let d = f.deg();
    let p = f.prec();
    let mut c: Vec<TruncSeries> = Vec::with_capacity(count);
    for j in 0..count {
        let v = if j + 1 < d {
            TruncSeries::zero(p)
        } else if j + 1 == d {
            TruncSeries::one(p)
        } else {
            let mut s = TruncSeries::zero(p);
            for i in 1..=d {
                if !f.a(i).is_zero() && !c[j - i].is_zero() {
                    s = s.add(&f.a(i).mul(&c[j - i]));
                }
            }
            s.neg()
        };
        c.push(v);
    }
    c
}

/// Trace-form pairing on `O[λ]/(f)` in the monomial basis, with
/// `σ(λ) = −λ`.
pub fn trace_pairing(f: &SeriesPoly, kind: PairingKind) -> Result<SeriesMatrix> {
    let d = f.deg();
    if d % 2 == 1 || !f.is_self_dual() {
        return Err(Error::Precondition("trace pairing needs a self-dual polynomial of even degree".into()));
    }
    if f.prec() == 0 {
        return Err(precision("trace pairing at precision 0"));
    }
    let c = euler_traces(f, 2 * d + 1);
    let sign = |e: usize, s: &TruncSeries| if e % 2 == 1 { s.neg() } else { s.clone() };
    Ok(match kind {
        PairingKind::TypeC => SeriesMatrix::from_fn(d, |a, b| sign(b, &c[a + b])),
        PairingKind::TypeBD => SeriesMatrix::from_fn(d, |i, j| sign(j, &c[i + j + 1])),
    })
}

/// `Pᵀ·g·P / t^(m−1)` for `P = diag(t^exps)`.
pub fn scale_pairing(g: &SeriesMatrix, exps: &[usize], m: usize) -> Result<SeriesMatrix> {
    let n = g.dim();
    assert_eq!(exps.len(), n);
    let div = m.checked_sub(1).ok_or_else(|| Error::Precondition("m must be positive".into()))?;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let up = exps[i] + exps[j];
            let e = g.get(i, j);
            out.push(if up >= div { e.shift_up(up - div) } else { shift_down_or(e, div - up, i, j)? });
        }
    }
    Ok(SeriesMatrix::from_fn(n, |i, j| out[i * n + j].clone()))
}

/// Rows in `rows` are divisible by `t`, and dividing them by `t` leaves a
/// matrix invertible over `O`.
pub fn is_optimal(g: &SeriesMatrix, rows: &[usize]) -> bool {
    let n = g.dim();
    let mut divided = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let e = g.get(i, j);
            if rows.contains(&i) {
                match e.shift_down(1) {
                    Ok(s) => divided.push(s),
                    Err(_) => return false,
                }
            } else {
                divided.push(e.clone());
            }
        }
    }
    let d = SeriesMatrix::from_fn(n, |i, j| divided[i * n + j].clone());
    d.reduce().is_ok_and(|m| !m.det().is_zero())
}

/// Data of `Q = E^∨/E` for one single-slope factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub seg: Segment,
    /// 0-based positions of the jump set `I_P`.
    pub alpha_indices: Vec<usize>,
    /// Pairing on `Q`: `(t·g⁻¹)` on `I_P × I_P`, modulo `t`.
    pub g_q: Mat,
    /// Pairing on `Q^∨`: the `t`-coefficients of `g` on `I_P × I_P`.
    pub gq_inv: Mat,
    /// Operator on `Q^∨` induced by `γ^k/t` (only when `l = 0`).
    pub phi: Option<Mat>,
    pub gr_p: CPoly,
    /// Per basis vector: gap `k+1` (`true`) or `k`.
    pub upper: Vec<bool>,
    /// Positions `i` (0-based) with `m | (i+1)·l`.
    pub div: Vec<usize>,
    /// Positions with `m ∤ (i+1)·l` and `i+1 > m/2`.
    pub ndiv_upper: Vec<usize>,
}

/// `gr_P = Σ_s (a_(s·deg/g))_(s·m/g) X^(g−s)` over the lattice points of the
/// segment, `g = gcd(deg, m)`.
pub fn gr_p(f: &SeriesPoly, seg: &Segment) -> Result<CPoly> {
    let g = num_integer::gcd(seg.deg, seg.m);
    let mut c = vec![Scalar::zero(); g + 1];
    for s in 0..=g {
        c[g - s] = f.a(s * seg.deg / g).coeff(s * seg.m / g)?.clone();
    }
    Ok(CPoly::new(c))
}

pub fn quotient_data(pm: &PairedModule, f: &SeriesPoly, exps: &[usize], seg: &Segment) -> Result<QuotientData> {
    let idx = jump_set(exps);
    let m = idx.len();
    if m != seg.m {
        return Err(Error::InternalInvariantViolation(format!("jump set has {m} elements, expected {}", seg.m)));
    }
    let h = pm.pairing.t_inverse()?;
    let h0 = h.reduce()?;
    let g1 = pm.pairing.coeff(1)?;
    let g_q = h0.select(&idx, &idx);
    let gq_inv = g1.select(&idx, &idx);
    if g_q.mul(&gq_inv) != Mat::identity(m) {
        return Err(Error::InternalInvariantViolation("pairings on Q and Q^∨ are not inverse".into()));
    }
    let phi = if seg.l == 0 {
        let gk = pm.gamma.pow(seg.k);
        let jset: Vec<usize> = (0..exps.len()).filter(|j| !idx.contains(j)).collect();
        let c0 = gk.reduce()?;
        let c1 = gk.coeff(1)?;
        if !c0.select(&idx, &idx).is_zero() || !c0.select(&jset, &idx).is_zero() || !c1.select(&jset, &idx).is_zero()
        {
            return Err(Error::InternalInvariantViolation("γ^k/t does not induce an operator on Q".into()));
        }
        Some(c1.select(&idx, &idx))
    } else {
        None
    };
    let mut upper = Vec::with_capacity(m);
    let mut prev = 0;
    for &a in &idx {
        upper.push(a + 1 - prev == seg.k + 1);
        prev = a + 1;
    }
    let div: Vec<usize> = (0..m).filter(|i| ((i + 1) * seg.l) % seg.m == 0).collect();
    let ndiv_upper: Vec<usize> = (0..m).filter(|i| ((i + 1) * seg.l) % seg.m != 0 && 2 * (i + 1) > seg.m).collect();
    Ok(QuotientData { seg: *seg, alpha_indices: idx, g_q, gq_inv, phi, gr_p: gr_p(f, seg)?, upper, div, ndiv_upper })
}

/// The single segment of a single-slope polynomial.
pub fn single_segment(f: &SeriesPoly) -> Result<Segment> {
    let segs = newton_polygon(f)?.segments();
    match segs.as_slice() {
        [s] => Ok(*s),
        _ => Err(Error::Precondition(format!("expected a single-slope factor, found {} segments", segs.len()))),
    }
}

/// Slope factors of `f` at half its precision; a single-slope `f` is its own
/// factor.
pub fn slope_factors(f: &SeriesPoly) -> Result<Vec<SeriesPoly>> {
    match crate::polyring::slope_factorize(f, f.prec() / 2, true) {
        Ok(fz) => Ok(fz.factors),
        Err(Error::NotSplit) => Ok(vec![f.clone()]),
        Err(e) => Err(e),
    }
}

/// `f′` with `a′_j = a_j / t^(jα)` where `m = deg·α + s`.
pub fn rescale_high_slope(f: &SeriesPoly) -> Result<(SeriesPoly, usize, usize)> {
    let seg = single_segment(f)?;
    if seg.m <= seg.deg {
        return Err(Error::Precondition(format!("rescaling needs m > deg, got m = {} and deg = {}", seg.m, seg.deg)));
    }
    let (alpha, s) = (seg.m / seg.deg, seg.m % seg.deg);
    let mut cs = Vec::with_capacity(seg.deg + 1);
    for j in 0..=seg.deg {
        let a = f.a(j);
        if j * alpha > a.prec() {
            return Err(precision(format!("a_{j} is known only modulo t^{}", a.prec())));
        }
        cs.push(a.shift_down(j * alpha).map_err(|_| Error::InternalInvariantViolation(format!("a_{j} below the polygon")))?);
    }
    let fp = SeriesPoly::new(cs);
    if fp.prec() == 0 {
        return Err(precision("no precision left after rescaling"));
    }
    Ok((fp, alpha, s))
}

/// How `*W` is chosen for a standalone even factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WMode {
    /// `l = 0`: from `Φ` (anti-stable, stable or codimension one).
    EvenL0,
    /// `l ≠ 0`: maximal isotropic part of `Q^∨_div` plus `Q^∨_(>,ndiv)`.
    EvenLpos,
    /// Any maximal isotropic subspace.
    Lagrangian,
}

/// A chosen `*W ⊂ Q^∨` and its annihilator `W ⊂ Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub star_w: Mat,
    pub w: Mat,
    pub route: String,
}

fn basis_vectors(dim: usize, which: &[usize]) -> Mat {
    Mat::from_cols(dim, &which.iter().map(|&i| unit(dim, i)).collect::<Vec<_>>())
}

fn unit(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[i] = Scalar::one();
    v
}

/// Maximal isotropic subspace of the coordinate subspace `which`.
fn max_isotropic_in(gram: &Mat, which: &[usize], seed: u64) -> Result<Mat> {
    let b = basis_vectors(gram.rows(), which);
    let sub = QuadSpace::new(b.transpose().mul(gram).mul(&b))?;
    Ok(b.mul(&max_isotropic(&sub, seed)?))
}

fn annihilator(star: &Mat) -> Mat {
    if star.cols() == 0 {
        return Mat::identity(star.rows());
    }
    star.transpose().nullspace()
}

pub fn select_w(qd: &QuotientData, mode: WMode, seed: u64) -> Result<Selection> {
    let m = qd.alpha_indices.len();
    if m % 2 == 1 {
        return Err(Error::Precondition("standalone selection needs even dim Q".into()));
    }
    let space = QuadSpace::new(qd.gq_inv.clone())?;
    let (star_w, route) = match mode {
        WMode::EvenL0 => {
            let phi = qd.phi.clone().ok_or_else(|| Error::Precondition("Φ is defined only for l = 0".into()))?;
            if qd.seg.k % 2 == 1 {
                let op = OperatorOnQuad::new(&space, phi, AdjointSign::AntiSelfAdjoint)?;
                let w = anti_stable_max_isotropic(&space, &op)?
                    .ok_or_else(|| Error::NotFoundInField("no β(X)β(−X) factorization".into()))?;
                (w, "anti-stable".to_string())
            } else {
                let op = OperatorOnQuad::new(&space, phi, AdjointSign::SelfAdjoint)?;
                match stable_max_isotropic(&space, &op)? {
                    Some(w) => (w, "stable".to_string()),
                    None => (codim1_isotropic(&space, &op, seed)?, "codimension one".to_string()),
                }
            }
        }
        WMode::EvenLpos => {
            let div = max_isotropic_in(&qd.gq_inv, &qd.div, seed)?;
            let rest = basis_vectors(m, &qd.ndiv_upper);
            (div.hcat(&rest), "isotropic part of Q_div plus Q_(>,ndiv)".to_string())
        }
        WMode::Lagrangian => (max_isotropic(&space, seed)?, "any Lagrangian".to_string()),
    };
    let claims = Claims { isotropic: true, dim: Some(m / 2), ..Claims::default() };
    if !verify_subspace_claims(&space, None, &star_w, &claims) {
        return Err(Error::DaggerViolated(format!("{route}: *W is not maximal isotropic")));
    }
    Ok(Selection { w: annihilator(&star_w), star_w, route })
}

/// An odd endpoint of a glued pair: an isotropic part and a distinguished
/// non-isotropic vector orthogonal to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub part: Mat,
    pub v: Vec<Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndRole {
    First,
    Last,
}

/// Vector of `span(which)` orthogonal to `part` and not isotropic.
fn orthogonal_anisotropic(gram: &Mat, which: &[usize], part: &Mat) -> Option<Vec<Scalar>> {
    let b = basis_vectors(gram.rows(), which);
    let cond = part.transpose().mul(gram).mul(&b);
    let ker = if part.cols() == 0 { Mat::identity(which.len()) } else { cond.nullspace() };
    let cands = b.mul(&ker);
    let space = QuadSpace::new(gram.clone()).ok()?;
    let cols = cands.columns();
    for c in &cols {
        if !space.pair(c, c).is_zero() {
            return Some(c.clone());
        }
    }
    // sums of pairs of candidates
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let s: Vec<Scalar> = cols[i].iter().zip(&cols[j]).map(|(a, b)| a + b).collect();
            if !space.pair(&s, &s).is_zero() {
                return Some(s);
            }
        }
    }
    None
}

pub fn endpoint_split(qd: &QuotientData, role: EndRole, rescaled: bool, seed: u64) -> Result<Endpoint> {
    let m = qd.alpha_indices.len();
    let g = &qd.gq_inv;
    let all: Vec<usize> = (0..m).collect();
    if m == 1 {
        return Ok(Endpoint { part: Mat::zeros(1, 0), v: unit(1, 0) });
    }
    if rescaled {
        let part = max_isotropic_in(g, &all, seed)?;
        let v = orthogonal_anisotropic(g, &all, &part)
            .ok_or_else(|| Error::NotFoundInField("anisotropic vector orthogonal to the isotropic part".into()))?;
        return Ok(Endpoint { part, v });
    }
    if qd.seg.l != 0 {
        let div0 = max_isotropic_in(g, &qd.div, seed)?;
        let v = orthogonal_anisotropic(g, &qd.div, &div0)
            .ok_or_else(|| Error::NotFoundInField("anisotropic vector of Q_div".into()))?;
        let part = div0.hcat(&basis_vectors(m, &qd.ndiv_upper));
        return Ok(Endpoint { part, v });
    }
    let phi = qd.phi.clone().ok_or_else(|| Error::Precondition("Φ missing".into()))?;
    let space = QuadSpace::new(g.clone())?;
    let op = OperatorOnQuad::new(&space, phi, AdjointSign::SelfAdjoint)?;
    let pv = paired_vectors(&space, &op, Parity::Odd)?;
    let v = match role {
        EndRole::First => pv.plus,
        EndRole::Last => pv.minus,
    };
    Ok(Endpoint { part: pv.v0, v })
}

/// `ℰ_W`: the lattice `E + W̃` in dual coordinates, with `γ_W = P_W⁻¹·γᵀ·P_W`
/// and `g_W = P_Wᵀ·g⁻¹·P_W`.
pub fn build_e_w(pm: &PairedModule, idx: &[usize], w: &Mat) -> Result<PairedModule> {
    let n = pm.gamma.dim();
    let mq = idx.len();
    if w.rows() != mq {
        return Err(Error::Precondition("W must live in Q".into()));
    }
    let wdim = w.rank();
    // complete W to a basis of Q with coordinate vectors
    let mut cols = w.column_basis().columns();
    for i in 0..mq {
        let e = unit(mq, i);
        let cand = Mat::from_cols(mq, &[cols.clone(), vec![e.clone()]].concat());
        if cand.rank() > cols.len() {
            cols.push(e);
        }
    }
    let u = Mat::from_cols(mq, &cols);
    let mut ut = Mat::identity(n);
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            ut[(ia, ib)] = u[(a, b)].clone();
        }
    }
    let ut_inv = ut.inverse().ok_or_else(|| Error::InternalInvariantViolation("basis completion failed".into()))?;
    let mut e = vec![0usize; n];
    for (b, &ib) in idx.iter().enumerate() {
        if b >= wdim {
            e[ib] = 1;
        }
    }
    let a = SeriesMatrix::mat_mul(&ut_inv, &pm.gamma.transpose()).mul_mat(&ut);
    let gamma_w = conj_diag(&a, &e)?;
    let h = pm.pairing.t_inverse()?;
    let hh = SeriesMatrix::mat_mul(&ut.transpose(), &h).mul_mat(&ut);
    let g_w = scale_pairing(&hh, &e, 2)?;
    if g_w.prec() == 0 || gamma_w.prec() == 0 {
        return Err(precision("no precision left in ℰ_W"));
    }
    if g_w.reduce()?.det().is_zero() {
        return Err(Error::DegeneratePairing);
    }
    PairedModule::new(gamma_w, g_w, pm.symmetry)
}

/// Outcome of an explicit realization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub group: GroupType,
    pub expected: Partition,
    pub jordan_type: Partition,
    pub verified: bool,
    pub integral: bool,
    pub pairing_ok: bool,
    pub nondegenerate: bool,
    pub anti_self_adjoint: bool,
    pub very_even: bool,
    /// How each factor or glued group was realized.
    pub routes: Vec<String>,
    pub note: String,
}

/// One summand before `ℰ_W` is formed: `γ`, a pairing optimal for `idx`.
#[derive(Clone, Debug)]
struct Piece {
    gamma: SeriesMatrix,
    g: SeriesMatrix,
    idx: Vec<usize>,
    qd: Option<QuotientData>,
    seg: Option<Segment>,
    rescaled: bool,
}

impl Piece {
    fn qdim(&self) -> usize {
        self.idx.len()
    }

    fn gq_inv(&self) -> Result<Mat> {
        match &self.qd {
            Some(q) => Ok(q.gq_inv.clone()),
            None => Ok(self.g.coeff(1)?.select(&self.idx, &self.idx)),
        }
    }
}

/// `(γ, g)` for a single-slope self-dual factor with `m ≤ deg`.
fn bd_basic(f: &SeriesPoly, seg: &Segment) -> Result<(PairedModule, Vec<usize>)> {
    let exps = exponents(ExpKind::TypeCOrBD, seg.deg, seg.m)?;
    let gamma = conj_diag(&companion(f), &exps)?;
    let g0 = trace_pairing(f, PairingKind::TypeBD)?;
    let g = scale_pairing(&g0, &exps, seg.m)?;
    let pm = PairedModule::new(gamma, g, Symmetry::Symmetric)?;
    if !is_optimal(&pm.pairing, &jump_set(&exps)) {
        return Err(Error::InternalInvariantViolation("scaled pairing is not optimal on the jump set".into()));
    }
    Ok((pm, exps))
}

fn bd_piece(f: &SeriesPoly, seed: u64, routes: &mut Vec<String>) -> Result<Piece> {
    let seg = single_segment(f)?;
    if seg.m <= seg.deg {
        let (pm, exps) = bd_basic(f, &seg)?;
        let qd = quotient_data(&pm, f, &exps, &seg)?;
        return Ok(Piece { gamma: pm.gamma, g: pm.pairing, idx: qd.alpha_indices.clone(), qd: Some(qd), seg: Some(seg), rescaled: false });
    }
    let (fp, alpha, s) = rescale_high_slope(f)?;
    if s == 0 {
        let gamma = companion(&fp).shift_up(alpha);
        let g = trace_pairing(&fp, PairingKind::TypeBD)?;
        routes.push(format!("(deg {}, m {}): t^{alpha}·R(f′), unimodular trace pairing", seg.deg, seg.m));
        return Ok(Piece { gamma, g, idx: vec![], qd: None, seg: Some(seg), rescaled: true });
    }
    let segp = single_segment(&fp)?;
    let (pm, exps) = bd_basic(&fp, &segp)?;
    let qd = quotient_data(&pm, &fp, &exps, &segp)?;
    if s % 2 == 0 {
        let mode = if segp.l == 0 { WMode::EvenL0 } else { WMode::EvenLpos };
        let sel = select_w(&qd, mode, seed)?;
        let ew = build_e_w(&pm, &qd.alpha_indices, &sel.w)?;
        routes.push(format!("(deg {}, m {}): t^{alpha} times the {} lattice of f′", seg.deg, seg.m, sel.route));
        return Ok(Piece { gamma: ew.gamma.shift_up(alpha), g: ew.pairing, idx: vec![], qd: None, seg: Some(seg), rescaled: true });
    }
    Ok(Piece { gamma: pm.gamma.shift_up(alpha), g: pm.pairing, idx: qd.alpha_indices.clone(), qd: Some(qd), seg: Some(seg), rescaled: true })
}

fn summand(pairing: TruncSeries, optimal_row: bool) -> Piece {
    let p = pairing.prec();
    Piece {
        gamma: SeriesMatrix::zeros(1, p),
        g: SeriesMatrix::from_fn(1, |_, _| pairing.clone()),
        idx: if optimal_row { vec![0] } else { vec![] },
        qd: None,
        seg: None,
        rescaled: false,
    }
}

/// Which pieces are realized alone and which are glued.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Unit {
    Alone(usize),
    Glue { first: usize, middles: Vec<usize>, last: usize },
}

fn to_incomplete(e: Error) -> Error {
    match e {
        Error::NotFoundInField(m) | Error::SearchExhausted(m) | Error::DaggerViolated(m) => Error::SearchIncomplete(m),
        Error::Precondition(m) => Error::SearchIncomplete(format!("route unavailable: {m}")),
        other => other,
    }
}

/// Explicit realization of `expected` from slope factors, verified by exact
/// arithmetic. Type B factors are those of `χ/λ`.
pub fn verify_reduction(factors: &[SeriesPoly], g: GroupType, expected: &Partition) -> Result<VerificationReport> {
    verify_reduction_seeded(factors, g, expected, 0)
}

pub fn verify_reduction_seeded(
    factors: &[SeriesPoly],
    g: GroupType,
    expected: &Partition,
    seed: u64,
) -> Result<VerificationReport> {
    if factors.is_empty() {
        return Err(Error::Precondition("no factors".into()));
    }
    let mut fs: Vec<(Segment, SeriesPoly)> =
        factors.iter().map(|f| Ok((single_segment(f)?, f.clone()))).collect::<Result<_>>()?;
    fs.sort_by(|a, b| a.0.root_val().to_big().cmp(&b.0.root_val().to_big()));
    let mut rep = VerificationReport {
        group: g,
        expected: expected.clone(),
        jordan_type: Partition::empty(),
        verified: false,
        integral: true,
        pairing_ok: true,
        nondegenerate: true,
        anti_self_adjoint: true,
        very_even: false,
        routes: vec![],
        note: String::new(),
    };
    let (reduction, pm) = match g.family {
        Family::A => {
            let mut blocks = Vec::new();
            for (seg, f) in &fs {
                let exps = exponents(ExpKind::TypeA, seg.deg, seg.m)?;
                blocks.push(conj_diag(&companion(f), &exps)?);
                rep.routes.push(format!("(deg {}, m {}): P⁻¹R(f)P", seg.deg, seg.m));
            }
            let refs: Vec<&SeriesMatrix> = blocks.iter().collect();
            (SeriesMatrix::block_diag(&refs).reduce()?, None)
        }
        Family::C => {
            let mut gs = Vec::new();
            let mut ps = Vec::new();
            for (seg, f) in &fs {
                let exps = c_exponents(seg.deg, seg.m)?;
                let gamma = conj_diag(&companion(f), &exps)?;
                let pairing = scale_pairing(&trace_pairing(f, PairingKind::TypeC)?, &exps, seg.m)?;
                gs.push(gamma);
                ps.push(pairing);
                rep.routes.push(format!("(deg {}, m {}): P⁻¹R(f)P with Pᵀg̃P/t^(m−1)", seg.deg, seg.m));
            }
            let gr: Vec<&SeriesMatrix> = gs.iter().collect();
            let pr: Vec<&SeriesMatrix> = ps.iter().collect();
            let gamma = SeriesMatrix::block_diag(&gr);
            let pairing = SeriesMatrix::block_diag(&pr);
            rep.pairing_ok = pairing.is_skew();
            rep.nondegenerate = !pairing.reduce()?.det().is_zero();
            let pm = PairedModule { gamma, pairing, symmetry: Symmetry::Skew };
            rep.anti_self_adjoint = pm.is_anti_self_adjoint();
            (pm.gamma.reduce()?, Some(pm))
        }
        Family::B | Family::D => {
            let pm = realize_bd(&fs, g, seed, &mut rep).map_err(to_incomplete)?;
            rep.pairing_ok = pm.pairing.is_symmetric();
            rep.anti_self_adjoint = pm.is_anti_self_adjoint();
            (pm.gamma.reduce()?, Some(pm))
        }
    };
    let _ = pm;
    rep.jordan_type = jordan_type(&reduction)?;
    rep.very_even = g.family == Family::D && rep.jordan_type.all_even();
    rep.verified =
        rep.jordan_type == *expected && rep.integral && rep.pairing_ok && rep.nondegenerate && rep.anti_self_adjoint;
    if rep.jordan_type != *expected {
        return Err(Error::Mismatch { expected: expected.clone(), got: rep.jordan_type });
    }
    if !rep.verified {
        rep.note = "pairing checks failed".into();
        return Err(Error::InternalInvariantViolation(format!("realization failed its checks: {:?}", rep.routes)));
    }
    rep.note = "verified".into();
    Ok(rep)
}

fn realize_bd(
    fs: &[(Segment, SeriesPoly)],
    g: GroupType,
    seed: u64,
    rep: &mut VerificationReport,
) -> Result<PairedModule> {
    for w in fs.windows(2) {
        if w[0].0.k == w[1].0.k {
            return Err(Error::SearchIncomplete("adjacent segments share k; merged segments are not realized".into()));
        }
    }
    let mut pieces = Vec::with_capacity(fs.len() + 1);
    for (_, f) in fs {
        pieces.push(bd_piece(f, seed, &mut rep.routes)?);
    }
    let odd: Vec<usize> = (0..fs.len()).filter(|&i| fs[i].0.m % 2 == 1).collect();
    let p = pieces.iter().map(|x| x.g.prec()).min().unwrap_or(0);
    let mut units = Vec::new();
    let mut covered = vec![false; fs.len()];
    let mut pairs: Vec<(usize, Option<usize>)> = odd.chunks(2).map(|c| (c[0], c.get(1).copied())).collect();
    match (g.family, odd.len() % 2) {
        (Family::D, 1) => return Err(Error::Precondition("type D with an odd number of odd-m segments".into())),
        (Family::B, 0) => {
            pieces.push(summand(TruncSeries::one(p), false));
            rep.routes.push("summand (O, 0, 1)".into());
        }
        (Family::B, _) => {
            pieces.push(summand(TruncSeries::monomial(Scalar::one(), 1, p), true));
            rep.routes.push("summand (O, 0, t) glued to the last odd segment".into());
            let last = pairs.pop().expect("odd count").0;
            pairs.push((last, Some(pieces.len() - 1)));
        }
        _ => {}
    }
    for (a, b) in pairs {
        let b = b.expect("paired");
        let middles: Vec<usize> = (a + 1..b.min(fs.len())).filter(|&i| fs[i].0.m % 2 == 0).collect();
        for &i in [a, b].iter().chain(&middles) {
            if i < fs.len() {
                covered[i] = true;
            }
        }
        units.push(Unit::Glue { first: a, middles, last: b });
    }
    for (i, c) in covered.iter().enumerate() {
        if !c {
            units.push(Unit::Alone(i));
        }
    }
    // *W in the concatenated Q^∨
    let offsets: Vec<usize> = pieces
        .iter()
        .scan(0, |acc, x| {
            let o = *acc;
            *acc += x.qdim();
            Some(o)
        })
        .collect();
    let total: usize = pieces.iter().map(Piece::qdim).sum();
    let embed = |piece: usize, v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); total];
        for (j, x) in v.iter().enumerate() {
            out[offsets[piece] + j] = x.clone();
        }
        out
    };
    let mut star: Vec<Vec<Scalar>> = Vec::new();
    let mut glue_checks = Vec::new();
    for u in &units {
        match u {
            Unit::Alone(i) => {
                let piece = &pieces[*i];
                let Some(qd) = &piece.qd else { continue };
                let seg = piece.seg.expect("factor piece");
                let mode = if piece.rescaled {
                    WMode::Lagrangian
                } else if seg.l == 0 {
                    WMode::EvenL0
                } else {
                    WMode::EvenLpos
                };
                let sel = select_w(qd, mode, seed)?;
                rep.routes.push(format!("(deg {}, m {}): {}", seg.deg, seg.m, sel.route));
                star.extend(sel.star_w.columns().iter().map(|c| embed(*i, c)));
            }
            Unit::Glue { first, middles, last } => {
                let end = |i: usize, role| -> Result<Endpoint> {
                    let piece = &pieces[i];
                    match &piece.qd {
                        Some(qd) => endpoint_split(qd, role, piece.rescaled, seed),
                        None => Ok(Endpoint { part: Mat::zeros(1, 0), v: unit(1, 0) }),
                    }
                };
                let e1 = end(*first, EndRole::First)?;
                let er = end(*last, EndRole::Last)?;
                star.extend(e1.part.columns().iter().map(|c| embed(*first, c)));
                star.extend(er.part.columns().iter().map(|c| embed(*last, c)));
                // chain v⁺_first · v⁻_middle … v⁺_middle · v⁻_last
                let mut chain: Vec<(usize, Vec<Scalar>, Vec<Scalar>)> = Vec::new();
                for &mi in middles {
                    let piece = &pieces[mi];
                    let qd = piece.qd.as_ref().ok_or_else(|| Error::SearchIncomplete("unimodular middle segment".into()))?;
                    let phi = qd.phi.clone().ok_or_else(|| Error::SearchIncomplete("middle segment with l ≠ 0".into()))?;
                    let space = QuadSpace::new(qd.gq_inv.clone())?;
                    let op = OperatorOnQuad::new(&space, phi, AdjointSign::SelfAdjoint)?;
                    let pv = paired_vectors(&space, &op, Parity::Even)?;
                    star.extend(pv.v0.columns().iter().map(|c| embed(mi, c)));
                    chain.push((mi, pv.plus, pv.minus));
                }
                let mut links: Vec<(usize, Vec<Scalar>, usize, Vec<Scalar>)> = Vec::new();
                let mut prev = (*first, e1.v.clone());
                for (mi, plus, minus) in chain {
                    links.push((prev.0, prev.1.clone(), mi, minus));
                    prev = (mi, plus);
                }
                links.push((prev.0, prev.1, *last, er.v.clone()));
                for (i, vp, j, vm) in links {
                    let a = QuadSpace::new(pieces[i].gq_inv()?)?.pair(&vp, &vp);
                    let b = QuadSpace::new(pieces[j].gq_inv()?)?.pair(&vm, &vm);
                    let c = (&(-&a) / &b)
                        .sqrt()
                        .ok_or_else(|| Error::NotFoundInField(format!("glue coefficient √({}) ", &(-&a) / &b)))?;
                    let x: Vec<Scalar> = embed(i, &vp).iter().zip(embed(j, &vm)).map(|(p, q)| p + &(&c * &q)).collect();
                    star.push(x);
                }
                rep.routes.push(format!("glue of segments {first} and {last} with {} middle(s)", middles.len()));
                glue_checks.push(*last);
            }
        }
    }
    let gammas: Vec<&SeriesMatrix> = pieces.iter().map(|x| &x.gamma).collect();
    let pairings: Vec<&SeriesMatrix> = pieces.iter().map(|x| &x.g).collect();
    let gamma = SeriesMatrix::block_diag(&gammas);
    let pairing = SeriesMatrix::block_diag(&pairings);
    let mut idx = Vec::with_capacity(total);
    let mut base = 0;
    for piece in &pieces {
        idx.extend(piece.idx.iter().map(|i| i + base));
        base += piece.gamma.dim();
    }
    let star_w = Mat::from_cols(total, &star);
    let gram = block_gram(&pieces)?;
    let space = QuadSpace::new(gram)?;
    let claims = Claims { isotropic: true, dim: Some(total / 2), ..Claims::default() };
    if total % 2 == 1 || !verify_subspace_claims(&space, None, &star_w, &claims) {
        return Err(Error::DaggerViolated("assembled *W is not maximal isotropic".into()));
    }
    let w = annihilator(&star_w);
    for &r in &glue_checks {
        if pieces[r].rescaled {
            let coords: Vec<usize> = (offsets[r]..offsets[r] + pieces[r].qdim()).collect();
            let proj = w.select(&coords, &(0..w.cols()).collect::<Vec<_>>());
            let er = basis_vectors(total, &coords);
            let ok = proj.rank() == coords.len() && intersection_dim(&w, &er) == 0;
            rep.note = format!("projection of W onto the high-slope endpoint is onto with zero intersection: {ok}");
        }
    }
    let pm = PairedModule::new(gamma, pairing, Symmetry::Symmetric)?;
    let ew = build_e_w(&pm, &idx, &w)?;
    rep.nondegenerate = !ew.pairing.reduce()?.det().is_zero();
    Ok(ew)
}

fn block_gram(pieces: &[Piece]) -> Result<Mat> {
    let total: usize = pieces.iter().map(Piece::qdim).sum();
    let mut gram = Mat::zeros(total, total);
    let mut off = 0;
    for p in pieces {
        let g = p.gq_inv()?;
        for i in 0..p.qdim() {
            for j in 0..p.qdim() {
                gram[(off + i, off + j)] = g[(i, j)].clone();
            }
        }
        off += p.qdim();
    }
    Ok(gram)
}

/// The expected Jordan type of a type-A or type-C single-slope realization.
pub fn balanced_for(seg: &Segment) -> Partition {
    balanced(seg.deg, seg.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::regular_nilpotent;
    use crate::rtmin::compute;

    fn poly(deg: usize, terms: &[(usize, usize, i64)]) -> SeriesPoly {
        SeriesPoly::from_int_terms(deg, terms, 4 * deg + 2)
    }

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn gt(f: Family, n: usize) -> GroupType {
        GroupType::new(f, n).unwrap()
    }

    #[test]
    fn companion_examples() {
        let c = companion(&poly(2, &[(0, 1, 1)]));
        assert_eq!(c.get(0, 1), &TruncSeries::monomial(Scalar::from_int(-1), 1, 10));
        assert!(c.get(1, 0).coeff(0).unwrap().is_one());
        let f = poly(3, &[(0, 1, 1)]);
        let c = companion(&f);
        assert_eq!(c.get(0, 2), &TruncSeries::monomial(Scalar::from_int(-1), 1, 14));
        assert!(c.get(1, 2).is_zero() && c.get(2, 2).is_zero());
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(exponents(ExpKind::TypeA, 5, 2).unwrap(), vec![1, 1, 0, 0, 0]);
        assert_eq!(exponents(ExpKind::TypeCOrBD, 4, 2).unwrap(), vec![1, 1, 0, 0]);
        assert_eq!(c_exponents(8, 3).unwrap(), vec![2, 2, 2, 1, 1, 0, 0, 0]);
        for (deg, m) in [(8, 3), (12, 5), (10, 3), (6, 5), (12, 7)] {
            let e = c_exponents(deg, m).unwrap();
            assert_eq!(run_lengths(&e), balanced(deg, m), "({deg}, {m})");
        }
        let e = exponents(ExpKind::TypeCOrBD, 4, 3).unwrap();
        assert_eq!(e, vec![2, 1, 1, 0]);
        assert_eq!(jump_set(&e), vec![0, 2, 3]);
    }

    #[test]
    fn conj_examples() {
        let g = conj_diag(&companion(&poly(5, &[(0, 2, 1)])), &[1, 1, 0, 0, 0]).unwrap();
        let r = g.reduce().unwrap();
        let sub: Vec<bool> = (0..4).map(|i| r[(i + 1, i)].is_one()).collect();
        assert_eq!(sub, vec![true, false, true, true]);
        assert_eq!(jordan_type(&r).unwrap(), p(&[3, 2]));
        let c = companion(&poly(2, &[(0, 1, 1)]));
        assert_eq!(conj_diag(&c, &[0, 0]).unwrap(), c);
        let g = conj_diag(&c, &[1, 0]).unwrap();
        let r = g.reduce().unwrap();
        assert_eq!(r, Mat::from_int_rows(&[&[0, -1], &[0, 0]]));
        assert!(matches!(conj_diag(&c, &[0, 2]), Err(Error::NotIntegral { .. })));
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_type(&regular_nilpotent(5).pow(2)).unwrap(), p(&[3, 2]));
        assert_eq!(jordan_type(&Mat::zeros(3, 3)).unwrap(), p(&[1, 1, 1]));
        assert_eq!(jordan_type(&regular_nilpotent(7).pow(3)).unwrap(), p(&[3, 2, 2]));
        assert_eq!(jordan_type(&Mat::identity(2)), Err(Error::NotNilpotent));
    }

    #[test]
    fn trace_pairing_examples() {
        let f = poly(2, &[(0, 1, 1)]);
        let c = trace_pairing(&f, PairingKind::TypeC).unwrap();
        assert_eq!(c.reduce().unwrap(), Mat::from_int_rows(&[&[0, -1], &[1, 0]]));
        let bd = trace_pairing(&f, PairingKind::TypeBD).unwrap();
        assert_eq!(bd.reduce().unwrap(), Mat::from_int_rows(&[&[1, 0], &[0, 0]]));
        assert_eq!(bd.coeff(1).unwrap(), Mat::from_int_rows(&[&[0, 0], &[0, 1]]));
        let pm = PairedModule::new(companion(&f), bd.clone(), Symmetry::Symmetric);
        assert!(pm.is_ok());
        assert!(is_optimal(&bd, &[1]));
        let sq = SeriesMatrix::from_fn(2, |i, j| if i != j { TruncSeries::zero(10) } else if i == 0 { TruncSeries::one(10) } else { TruncSeries::monomial(Scalar::one(), 2, 10) });
        assert!(!is_optimal(&sq, &[1]));
        assert_eq!(scale_pairing(&bd, &[0, 0], 1).unwrap(), bd);
    }

    #[test]
    fn optimal_for_l0() {
        let f = poly(4, &[(2, 1, 1), (0, 2, 1)]);
        let seg = single_segment(&f).unwrap();
        let (pm, exps) = bd_basic(&f, &seg).unwrap();
        assert_eq!(jump_set(&exps), vec![1, 3]);
        let qd = quotient_data(&pm, &f, &exps, &seg).unwrap();
        assert_eq!(qd.gr_p, CPoly::from_ints(&[1, 1, 1]));
        let phi = qd.phi.clone().unwrap();
        assert_eq!(phi.charpoly(), qd.gr_p);
    }

    #[test]
    fn quotient_for_l1() {
        let f = poly(4, &[(0, 3, 1)]);
        let seg = single_segment(&f).unwrap();
        let (pm, exps) = bd_basic(&f, &seg).unwrap();
        let qd = quotient_data(&pm, &f, &exps, &seg).unwrap();
        assert_eq!(qd.alpha_indices, vec![0, 2, 3]);
        assert_eq!(qd.div, vec![2]);
        assert_eq!(qd.ndiv_upper, vec![1]);
    }

    #[test]
    fn rescale_examples() {
        let (fp, a, s) = rescale_high_slope(&poly(2, &[(0, 3, 1)])).unwrap();
        assert_eq!((a, s), (1, 1));
        assert_eq!(single_segment(&fp).unwrap().m, 1);
        let (_, a, s) = rescale_high_slope(&poly(2, &[(0, 4, 1)])).unwrap();
        assert_eq!((a, s), (2, 0));
        assert!(rescale_high_slope(&poly(4, &[(0, 4, 1)])).is_err());
    }

    fn check(g: GroupType, deg: usize, terms: &[(usize, usize, i64)], want: Option<&[usize]>) {
        let f = poly(deg, terms);
        let r = compute(&f, g).unwrap();
        if let Some(w) = want {
            assert_eq!(r.result, p(w));
        }
        let factors = slope_factors(&f).unwrap();
        match verify_reduction(&factors, g, &r.result) {
            Ok(rep) => assert!(rep.verified, "{rep:?}"),
            Err(e) => panic!("{g} {f}: expected {} but {e}", r.result),
        }
    }

    #[test]
    fn type_a_and_c_examples() {
        check(gt(Family::A, 5), 5, &[(0, 2, 1)], Some(&[3, 2]));
        check(gt(Family::A, 3), 3, &[(0, 1, 1)], Some(&[3]));
        check(gt(Family::C, 2), 4, &[(2, 1, 1), (0, 3, 1)], Some(&[2, 1, 1]));
        // odd heights where the closed-form exponents have unbalanced runs
        check(gt(Family::C, 4), 8, &[(0, 3, 1)], Some(&[3, 3, 2]));
        check(gt(Family::C, 4), 8, &[(6, 1, 2), (4, 2, 1), (0, 3, 3)], Some(&[3, 3, 2]));
        check(gt(Family::C, 6), 12, &[(0, 5, 1)], Some(&[3, 3, 2, 2, 2]));
    }

    #[test]
    fn d_fixtures() {
        let d = |n| gt(Family::D, n);
        check(d(2), 4, &[(2, 1, 1), (0, 2, 1)], Some(&[3, 1]));
        check(d(2), 4, &[(2, 1, 2), (0, 2, 1), (0, 3, 1)], Some(&[2, 2]));
        check(d(3), 6, &[(0, 2, 1)], Some(&[3, 3]));
        check(d(3), 6, &[(0, 4, 1)], None);
        check(d(3), 6, &[(2, 3, 2), (0, 4, 1)], None);
        check(d(4), 8, &[(0, 6, 1)], None);
        check(d(2), 4, &[(0, 8, 1)], None);
        check(d(3), 6, &[(2, 1, 1), (0, 2, 1)], Some(&[5, 1]));
    }

    #[test]
    fn d_fixtures_small_rank() {
        let d2 = gt(Family::D, 2);
        check(d2, 4, &[(2, 2, 1), (0, 4, 1)], None);
    }

    #[test]
    fn anti_stable_outside_field() {
        // Φ has characteristic polynomial X⁴ + 1, which is not β(X)β(−X) over Q(i)
        let f = poly(4, &[(0, 4, 1)]);
        let d2 = gt(Family::D, 2);
        let r = compute(&f, d2).unwrap();
        assert!(matches!(verify_reduction(&[f], d2, &r.result), Err(Error::SearchIncomplete(_))));
    }

    #[test]
    fn b_fixtures() {
        let b = |n| gt(Family::B, n);
        check(b(2), 4, &[(2, 1, 1), (0, 1, 1)], Some(&[5]));
        check(b(2), 4, &[(2, 2, 1), (0, 2, 1)], Some(&[3, 1, 1]));
        check(b(2), 4, &[(2, 1, 2), (0, 2, 1), (0, 5, 1)], Some(&[2, 2, 1]));
        check(b(1), 2, &[(0, 3, 1)], Some(&[1, 1, 1]));
        check(b(2), 4, &[(0, 3, 1)], None);
        check(b(1), 2, &[(0, 2, 1)], Some(&[1, 1, 1]));
    }
}
