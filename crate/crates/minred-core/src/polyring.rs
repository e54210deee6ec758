//! Monic polynomials in `λ` over truncated series: validation, Newton
//! polygons and slope factorization.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{precision, Error, Result};
use crate::lmat::LMat;
use crate::series::{Laurent, Rat, Scalar, TruncSeries, Val};

/// Classical family of the loop group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupType {
    pub family: Family,
    pub rank: usize,
}

impl GroupType {
    pub fn new(family: Family, rank: usize) -> Result<GroupType> {
        if rank == 0 {
            return Err(Error::Precondition("rank must be positive".into()));
        }
        if family == Family::D && rank < 2 {
            return Err(Error::Precondition("type D requires rank at least 2".into()));
        }
        Ok(GroupType { family, rank })
    }

    /// Degree of the characteristic polynomial (`det(λ-γ)/λ` for type B).
    pub fn char_degree(&self) -> usize {
        match self.family {
            Family::A => self.rank,
            _ => 2 * self.rank,
        }
    }

    /// Size of the partitions labelling nilpotent orbits.
    pub fn partition_size(&self) -> usize {
        match self.family {
            Family::A => self.rank,
            Family::B => 2 * self.rank + 1,
            Family::C | Family::D => 2 * self.rank,
        }
    }

    pub fn is_self_dual(&self) -> bool {
        self.family != Family::A
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// `λ^deg + a_1 λ^(deg-1) + ... + a_deg`, stored as `a_0 .. a_deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoly {
    coeffs: Vec<TruncSeries>,
}

impl SeriesPoly {
    /// Builds from `a_0 .. a_deg`, truncating all coefficients to the
    /// smallest precision present.
    pub fn new(coeffs: Vec<TruncSeries>) -> SeriesPoly {
        let p = coeffs.iter().map(TruncSeries::prec).min().unwrap_or(0);
        SeriesPoly { coeffs: coeffs.into_iter().map(|c| c.truncate(p)).collect() }
    }

    /// Builds from exactly known coefficients, padded to precision `prec`.
    pub fn exact(coeffs: Vec<TruncSeries>, prec: usize) -> SeriesPoly {
        SeriesPoly { coeffs: coeffs.into_iter().map(|c| c.pad_to(prec).truncate(prec)).collect() }
    }

    /// From sparse terms `(j, e, c)` meaning `c·t^e` in the coefficient of
    /// `λ^j`; the `λ^deg` coefficient is set to 1 unless given.
    pub fn from_terms(deg: usize, terms: &[(usize, usize, Scalar)], prec: usize) -> SeriesPoly {
        let mut cs = vec![TruncSeries::zero(prec); deg + 1];
        let mut lead_given = false;
        for (j, e, c) in terms {
            assert!(*j <= deg, "λ-power {j} exceeds degree {deg}");
            if *j == deg {
                lead_given = true;
            }
            let i = deg - j;
            cs[i] = cs[i].add(&TruncSeries::monomial(c.clone(), *e, prec));
        }
        if !lead_given {
            cs[0] = TruncSeries::one(prec);
        }
        SeriesPoly { coeffs: cs }
    }

    /// From integer terms `(λ-power, t-exponent, coefficient)`.
    pub fn from_int_terms(deg: usize, terms: &[(usize, usize, i64)], prec: usize) -> SeriesPoly {
        let t: Vec<(usize, usize, Scalar)> = terms.iter().map(|&(j, e, c)| (j, e, Scalar::from_int(c))).collect();
        SeriesPoly::from_terms(deg, &t, prec)
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn prec(&self) -> usize {
        self.coeffs.first().map_or(0, TruncSeries::prec)
    }

    /// `a_i`, the coefficient of `λ^(deg-i)`.
    pub fn a(&self, i: usize) -> &TruncSeries {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[TruncSeries] {
        &self.coeffs
    }

    /// Coefficient of `λ^j`.
    pub fn lambda_coeff(&self, j: usize) -> &TruncSeries {
        &self.coeffs[self.deg() - j]
    }

    pub fn truncate(&self, prec: usize) -> SeriesPoly {
        SeriesPoly { coeffs: self.coeffs.iter().map(|c| c.truncate(prec)).collect() }
    }

    /// Pads every coefficient with zeros, treating the input as exact.
    pub fn pad_to(&self, prec: usize) -> SeriesPoly {
        SeriesPoly { coeffs: self.coeffs.iter().map(|c| c.pad_to(prec)).collect() }
    }

    pub fn is_gaussian(&self) -> bool {
        self.coeffs.iter().any(TruncSeries::is_gaussian)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.first().is_some_and(|c| {
            c.coeff(0).is_ok_and(Scalar::is_one) && c.coeffs().iter().skip(1).all(Scalar::is_zero)
        })
    }

    /// Whether all odd-index coefficients vanish (within precision).
    pub fn is_self_dual(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| i % 2 == 0 || c.is_zero())
    }

    /// Product in `λ`; precision is the minimum of the operands.
    pub fn mul(&self, o: &SeriesPoly) -> SeriesPoly {
        let p = self.prec().min(o.prec());
        let n = self.deg() + o.deg();
        let mut cs = vec![TruncSeries::zero(p); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    cs[i + j] = cs[i + j].add(&a.mul(b));
                }
            }
        }
        SeriesPoly { coeffs: cs }
    }

    /// Constant-first `λ`-coefficients.
    pub fn lambda_coeffs(&self) -> Vec<TruncSeries> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Formal derivative in `λ`, constant-first.
    fn derivative_lambda(&self) -> Vec<TruncSeries> {
        let lc = self.lambda_coeffs();
        (1..lc.len()).map(|j| lc[j].scale(&Scalar::from_int(j as i64))).collect()
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.deg();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let j = d - i;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})λ")?,
                _ => write!(f, "({c})λ^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.prec())
    }
}

/// Outcome of one validation step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub reason: Option<String>,
}

/// Structured result of [`validate_char_poly`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub group: GroupType,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn summary(&self) -> String {
        match self.first_failure() {
            None => "all checks passed".into(),
            Some(c) => format!("{}: {}", c.name, c.reason.clone().unwrap_or_default()),
        }
    }

    fn push(&mut self, name: &str, result: std::result::Result<(), String>) -> bool {
        let passed = result.is_ok();
        self.checks.push(Check { name: name.into(), passed, reason: result.err() });
        passed
    }
}

/// Validates `p` as the characteristic polynomial of a topologically
/// nilpotent regular semisimple element of type `g`. Checks stop at the first
/// failure.
pub fn validate_char_poly(p: &SeriesPoly, g: GroupType) -> Result<ValidationReport> {
    let mut r = ValidationReport { group: g, checks: Vec::new() };
    let want = g.char_degree();
    if !r.push(
        "degree",
        if p.deg() == want { Ok(()) } else { Err(format!("degree {} but {} expected for {g}", p.deg(), want)) },
    ) {
        return Ok(r);
    }
    if p.prec() == 0 {
        return Err(precision("precision must be positive"));
    }
    if !r.push("monic", if p.is_monic() { Ok(()) } else { Err("leading coefficient is not 1".into()) }) {
        return Ok(r);
    }
    if g.is_self_dual() {
        let bad = (1..=p.deg()).step_by(2).find(|&i| !p.a(i).is_zero());
        if !r.push(
            "self-dual",
            match bad {
                None => Ok(()),
                Some(i) => Err(format!("not self-dual: coefficient of λ^{} is nonzero", p.deg() - i)),
            },
        ) {
            return Ok(r);
        }
    }
    let c = p.a(p.deg());
    let ct = match c.val() {
        Val::AboveCutoff => {
            return Err(precision(format!(
                "constant term vanishes modulo t^{}; its valuation cannot be certified",
                c.prec()
            )))
        }
        Val::Finite(0) => Err("constant term is a unit; element is not topologically nilpotent".to_string()),
        Val::Finite(_) => Ok(()),
    };
    if !r.push("constant-term", ct) {
        return Ok(r);
    }
    let nonnil = (1..p.deg()).find(|&i| p.a(i).coeff(0).is_ok_and(|x| !x.is_zero()));
    if !r.push(
        "topologically-nilpotent",
        match nonnil {
            None => Ok(()),
            Some(i) => Err(format!("coefficient of λ^{} has a nonzero constant term", p.deg() - i)),
        },
    ) {
        return Ok(r);
    }
    let res = discriminant_valuation(p)?;
    r.push("squarefree", Ok(()));
    let _ = res;
    if g.family == Family::D {
        let v = c.val().finite().unwrap();
        r.push(
            "pfaffian-parity",
            if v % 2 == 0 {
                Ok(())
            } else {
                Err(format!("constant-term valuation {v} is odd; it must be the square of a Pfaffian"))
            },
        );
    }
    Ok(r)
}

/// Valuation of `Res(p, dp/dλ)`, certified by escalating the working
/// precision up to that of `p`.
pub fn discriminant_valuation(p: &SeriesPoly) -> Result<i64> {
    let full = p.prec();
    let mut w = full.min(8);
    loop {
        let q = p.truncate(w);
        let d = resultant(&q.lambda_coeffs(), &q.derivative_lambda());
        if let Some(v) = d.val() {
            return Ok(v);
        }
        if w >= full {
            return Err(precision(format!(
                "resultant of p and p' vanishes modulo t^{}; squarefreeness cannot be certified",
                d.abs_prec()
            )));
        }
        w = (2 * w).min(full);
    }
}

/// Sylvester resultant of constant-first polynomials over `K`.
pub fn resultant(a: &[TruncSeries], b: &[TruncSeries]) -> Laurent {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return Laurent::from_scalar(Scalar::one(), 1);
    }
    // Rows 0..n: λ^i·a; rows n..n+m: λ^i·b; column j is the λ^(size-1-j) coefficient.
    let mat = LMat::from_fn(size, size, |r, c| {
        let (poly, shift, dg) = if r < n { (a, r, m) } else { (b, r - n, n) };
        let power = size - 1 - c;
        if power < shift || power - shift > dg {
            return Laurent::exact_zero();
        }
        let s = &poly[power - shift];
        if s.is_zero() {
            Laurent::zero(s.prec() as i64)
        } else {
            Laurent::from_series(s)
        }
    });
    mat.det()
}

/// `ord_t` of each coefficient `a_0 .. a_deg`.
pub fn ord_profile(p: &SeriesPoly) -> Vec<Val> {
    p.coeffs.iter().map(TruncSeries::val).collect()
}

/// Lower convex hull of `(i, ord a_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<(usize, usize)>,
}

/// One edge of a Newton polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    /// Width in coefficient index.
    pub deg: usize,
    /// Height in valuation.
    pub m: usize,
    pub k: usize,
    pub l: usize,
    /// Index of the left vertex.
    pub start: usize,
}

impl Segment {
    pub fn new(deg: usize, m: usize, start: usize) -> Segment {
        let (k, l) = deg.div_rem(&m);
        Segment { deg, m, k, l, start }
    }

    /// Common valuation `m/deg` of the roots.
    pub fn root_val(&self) -> Rat {
        Rat::new(self.m as i64, self.deg as i64)
    }
}

impl Polygon {
    pub fn segments(&self) -> Vec<Segment> {
        self.vertices.windows(2).map(|w| Segment::new(w[1].0 - w[0].0, w[1].1 - w[0].1, w[0].0)).collect()
    }

    /// Height of the hull above index `i` as the rational `num/den`.
    fn height_at(&self, i: usize) -> (i64, i64) {
        for w in self.vertices.windows(2) {
            let (x0, y0) = (w[0].0 as i64, w[0].1 as i64);
            let (x1, y1) = (w[1].0 as i64, w[1].1 as i64);
            let x = i as i64;
            if x >= x0 && x <= x1 {
                return (y0 * (x1 - x0) + (y1 - y0) * (x - x0), x1 - x0);
            }
        }
        let last = self.vertices.last().unwrap();
        (last.1 as i64, 1)
    }
}

/// Newton polygon over the finite-valuation points; fails if a vanished
/// window could hide a point below the hull.
pub fn newton_polygon(p: &SeriesPoly) -> Result<Polygon> {
    let prof = ord_profile(p);
    let deg = p.deg();
    if prof.first() != Some(&Val::Finite(0)) {
        return Err(Error::Precondition("leading coefficient must be a unit".into()));
    }
    let Val::Finite(_) = prof[deg] else {
        return Err(precision("constant term vanishes within the precision window"));
    };
    let pts: Vec<(usize, usize)> =
        prof.iter().enumerate().filter_map(|(i, v)| v.finite().map(|x| (i, x))).collect();
    let mut hull: Vec<(usize, usize)> = Vec::new();
    for &q in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b unless it lies strictly below segment a-q
            let cross = (b.0 as i64 - a.0 as i64) * (q.1 as i64 - a.1 as i64)
                - (b.1 as i64 - a.1 as i64) * (q.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let poly = Polygon { vertices: hull };
    for (i, v) in prof.iter().enumerate() {
        if *v == Val::AboveCutoff {
            let (num, den) = poly.height_at(i);
            if (p.a(i).prec() as i64) * den < num {
                return Err(precision(format!(
                    "coefficient a_{i} vanishes only modulo t^{}, below the hull height {num}/{den}",
                    p.a(i).prec()
                )));
            }
        }
    }
    Ok(poly)
}

/// Segments of `p`'s Newton polygon, in increasing root valuation.
pub fn segments(poly: &Polygon) -> Vec<Segment> {
    poly.segments()
}

/// Per-split precision bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    /// Polygon vertex index at which the tail was split off.
    pub vertex: usize,
    /// Valuation of the resultant of the initial factor pair.
    pub resultant_val: i64,
    /// Precision lost, `2·resultant_val`.
    pub loss: usize,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Monic factors in segment order.
    pub factors: Vec<SeriesPoly>,
    pub certified_prec: usize,
    pub splits: Vec<SplitRecord>,
}

impl Factorization {
    pub fn product(&self) -> SeriesPoly {
        let mut it = self.factors.iter();
        let first = it.next().expect("at least one factor").clone();
        it.fold(first, |acc, f| acc.mul(f))
    }
}

const MAX_LIFT_ITERATIONS: usize = 60;

/// Factors `p` into one monic factor per Newton-polygon segment with
/// `∏ f_i ≡ p mod t^target_prec`.
///
/// With `permissive` set, a single-segment input is returned unchanged
/// instead of raising [`Error::NotSplit`].
pub fn slope_factorize(p: &SeriesPoly, target_prec: usize, permissive: bool) -> Result<Factorization> {
    let poly = newton_polygon(p)?;
    let segs = poly.segments();
    if segs.len() < 2 {
        if !permissive {
            return Err(Error::NotSplit);
        }
        if target_prec > p.prec() {
            return Err(Error::PrecisionExhausted(format!(
                "target t^{target_prec} exceeds working precision {}",
                p.prec()
            )));
        }
        return Ok(Factorization { factors: vec![p.clone()], certified_prec: p.prec(), splits: vec![] });
    }
    let mut rest = p.clone();
    let mut tails: Vec<SeriesPoly> = Vec::new();
    let mut splits = Vec::new();
    for s in segs.iter().skip(1).rev() {
        let (f, g, rec) = split_at(&rest, s.start)?;
        splits.push(rec);
        tails.push(g);
        rest = f;
    }
    let mut factors = vec![rest];
    factors.extend(tails.into_iter().rev());
    let certified = factors.iter().map(SeriesPoly::prec).min().unwrap();
    if target_prec > certified {
        return Err(Error::PrecisionExhausted(format!(
            "certified precision t^{certified} is below the target t^{target_prec}"
        )));
    }
    let factors: Vec<SeriesPoly> = factors.iter().map(|f| f.truncate(certified)).collect();
    for (f, s) in factors.iter().zip(&segs) {
        let fp = newton_polygon(f)?;
        let fs = fp.segments();
        if fs.len() != 1 || fs[0].deg != s.deg || fs[0].m != s.m {
            return Err(Error::InternalInvariantViolation(format!("factor {f} is not single-slope with ({}, {})", s.deg, s.m)));
        }
    }
    let fact = Factorization { factors, certified_prec: certified, splits };
    let resid = p.truncate(certified);
    let prod = fact.product();
    if (0..=p.deg()).any(|i| !resid.a(i).sub(prod.a(i)).is_zero()) {
        return Err(Error::InternalInvariantViolation("factor product does not reproduce the input".into()));
    }
    Ok(fact)
}

/// Splits `p` as `F·G` with `deg F = i0`, where `i0` is a polygon vertex and
/// `G` carries the last segment. Both factors are returned at the certified
/// precision `N - 2·ord Res(F0, G0)`.
fn split_at(p: &SeriesPoly, i0: usize) -> Result<(SeriesPoly, SeriesPoly, SplitRecord)> {
    let n = p.prec();
    let deg = p.deg();
    let dg = deg - i0;
    let lead = Laurent::from_series(p.a(i0));
    let linv = lead.inv()?;
    let f0: Vec<TruncSeries> = (0..=i0).map(|j| p.a(j).clone()).collect();
    let mut g0: Vec<TruncSeries> = Vec::with_capacity(dg + 1);
    for j in i0..=deg {
        let q = Laurent::from_series(p.a(j)).mul(&linv);
        let s = q.to_series(n).map_err(|_| precision("tail coefficient is not integral"))?;
        g0.push(s.pad_to(n));
    }
    g0[0] = TruncSeries::one(n);
    let mut f = SeriesPoly { coeffs: f0 };
    let mut g = SeriesPoly { coeffs: g0 };
    let rv = resultant(&f.lambda_coeffs(), &g.lambda_coeffs())
        .val()
        .ok_or_else(|| precision("resultant of the initial factors vanishes within precision"))?;
    let loss = 2 * rv.max(0) as usize;
    if loss >= n {
        return Err(Error::PrecisionExhausted(format!("split at vertex {i0} loses {loss} of {n} digits")));
    }
    let target = n - loss;
    let mut iterations = 0;
    // Terms of F and G beyond the next attainable error order are not yet
    // correct, so each step runs at a precision that grows with the error.
    let mut work = n.min(loss + 4);
    loop {
        f = f.truncate(work).pad_to(work);
        g = g.truncate(work).pad_to(work);
        let prod = f.mul(&g);
        let e: Vec<TruncSeries> = (0..=deg).map(|i| p.a(i).truncate(work).sub(prod.a(i))).collect();
        let ord = e.iter().map(TruncSeries::val_bound).min().unwrap();
        if ord >= target {
            break;
        }
        if iterations == MAX_LIFT_ITERATIONS {
            return Err(Error::PrecisionExhausted(format!(
                "lift at vertex {i0} stalled at t^{ord} after {iterations} steps"
            )));
        }
        iterations += 1;
        if ord < work {
            let (df, dgc) = hensel_step(&f, &g, &e, work)?;
            for (j, d) in df.into_iter().enumerate() {
                f.coeffs[i0 - j] = f.coeffs[i0 - j].add(&d);
            }
            for (j, d) in dgc.into_iter().enumerate() {
                g.coeffs[dg - j] = g.coeffs[dg - j].add(&d);
            }
        }
        work = n.min(work.max(2 * ord + loss + 4));
    }
    let rec = SplitRecord { vertex: i0, resultant_val: rv, loss, iterations };
    Ok((f.truncate(target), g.truncate(target), rec))
}

/// Solves `F·ΔG + G·ΔF = E` with `deg ΔF < deg F`, `deg ΔG < deg G`.
/// Returns constant-first coefficient vectors padded to precision `n`.
fn hensel_step(
    f: &SeriesPoly,
    g: &SeriesPoly,
    e: &[TruncSeries],
    n: usize,
) -> Result<(Vec<TruncSeries>, Vec<TruncSeries>)> {
    let df = f.deg();
    let dgg = g.deg();
    let size = df + dgg;
    let fl = f.lambda_coeffs();
    let gl = g.lambda_coeffs();
    let el: Vec<TruncSeries> = e.iter().rev().cloned().collect();
    let entry = |s: &TruncSeries| if s.is_zero() { Laurent::exact_zero() } else { Laurent::from_series(s) };
    // unknowns: ΔG_0..ΔG_{dgg-1}, then ΔF_0..ΔF_{df-1}; equation r is the λ^r coefficient
    let mat = LMat::from_fn(size, size, |r, c| {
        let (poly, shift) = if c < dgg { (&fl, c) } else { (&gl, c - dgg) };
        if r < shift || r - shift >= poly.len() {
            return Laurent::exact_zero();
        }
        entry(&poly[r - shift])
    });
    let rhs = LMat::from_fn(size, 1, |r, _| entry(&el[r]));
    let x = mat.solve(&rhs)?;
    let conv = |i: usize| -> Result<TruncSeries> {
        let v = x.get(i, 0);
        if v.is_exact_zero() {
            return Ok(TruncSeries::zero(n));
        }
        v.to_series(n).map(|s| s.pad_to(n)).map_err(|_| precision("Hensel correction is not integral"))
    };
    let dgv = (0..dgg).map(conv).collect::<Result<Vec<_>>>()?;
    let dfv = (dgg..size).map(conv).collect::<Result<Vec<_>>>()?;
    Ok((dfv, dgv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(deg: usize, terms: &[(usize, usize, i64)], prec: usize) -> SeriesPoly {
        SeriesPoly::from_int_terms(deg, terms, prec)
    }

    #[test]
    fn validation_examples() {
        let c1 = GroupType::new(Family::C, 1).unwrap();
        assert!(validate_char_poly(&poly(2, &[(0, 1, 1)], 10), c1).unwrap().passed());
        let d2 = GroupType::new(Family::D, 2).unwrap();
        let r = validate_char_poly(&poly(4, &[(2, 1, 1), (0, 3, 1)], 18), d2).unwrap();
        assert!(!r.passed());
        assert!(r.summary().contains("odd"));
        let c2 = GroupType::new(Family::C, 2).unwrap();
        let r = validate_char_poly(&poly(4, &[(3, 0, 1), (0, 1, 1)], 18), c2).unwrap();
        assert!(r.summary().contains("not self-dual"));
    }

    #[test]
    fn polygon_examples() {
        let p = newton_polygon(&poly(4, &[(2, 1, 1), (0, 3, 1)], 18)).unwrap();
        assert_eq!(p.vertices, vec![(0, 0), (2, 1), (4, 3)]);
        let s = p.segments();
        assert_eq!((s[0].deg, s[0].m, s[0].k, s[0].l), (2, 1, 2, 0));
        assert_eq!((s[1].deg, s[1].m, s[1].k, s[1].l), (2, 2, 1, 0));
        let p = newton_polygon(&poly(5, &[(0, 2, 1)], 22)).unwrap();
        assert_eq!(p.vertices, vec![(0, 0), (5, 2)]);
        let s = p.segments();
        assert_eq!((s[0].k, s[0].l), (2, 1));
        let p = newton_polygon(&poly(4, &[(2, 2, 1), (0, 2, 1)], 18)).unwrap();
        assert_eq!(p.vertices, vec![(0, 0), (4, 2)]);
    }

    #[test]
    fn hidden_point_needs_precision() {
        // a_2 known only mod t^1 but the hull passes at height 2 there
        let mut cs = poly(4, &[(0, 4, 1)], 8).coeffs().to_vec();
        cs[2] = TruncSeries::zero(1);
        let p = SeriesPoly { coeffs: cs };
        assert!(matches!(newton_polygon(&p), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn factor_quadratic_in_lambda_squared() {
        let p = poly(4, &[(2, 1, 1), (0, 3, 1)], 18);
        let fz = slope_factorize(&p, 4, false).unwrap();
        let f1 = &fz.factors[0];
        let f2 = &fz.factors[1];
        let c = |s: &TruncSeries| (0..4).map(|i| s.coeff(i).unwrap().clone()).collect::<Vec<_>>();
        let ints = |v: &[i64]| v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>();
        // f1·f2 must have λ²-coefficient t, so the t^3 terms cancel
        assert_eq!(c(f1.a(2)), ints(&[0, 1, -1, -1]));
        assert_eq!(c(f2.a(2)), ints(&[0, 0, 1, 1]));
        assert!(f1.is_self_dual() && f2.is_self_dual());
    }

    #[test]
    fn single_segment_is_not_split() {
        let p = poly(5, &[(0, 2, 1)], 22);
        assert_eq!(slope_factorize(&p, 10, false), Err(Error::NotSplit));
        assert_eq!(slope_factorize(&p, 10, true).unwrap().factors, vec![p]);
    }

    #[test]
    fn ord_profile_example() {
        let p = poly(2, &[(0, 1, 1)], 6);
        assert_eq!(ord_profile(&p), vec![Val::Finite(0), Val::AboveCutoff, Val::Finite(1)]);
    }
}
