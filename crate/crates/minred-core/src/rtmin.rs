//! Minimal reduction partitions from the Newton polygon: balanced
//! collections for types A and C, and the modification rules for D and B.

use serde::{Deserialize, Serialize};

use crate::admissibility::{blocks_of, gr_poly, is_square_in_cx, Block};
use crate::error::{Error, Result};
use crate::partitions::{balanced, is_valid_for, re_concat, Partition};
use crate::polyring::{newton_polygon, validate_char_poly, Family, GroupType, Segment, SeriesPoly};

/// How a segment's partition was altered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modification {
    GainsBox,
    LosesBox,
    Split,
    Absorb,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentData {
    pub deg: usize,
    pub m: usize,
    pub k: usize,
    pub l: usize,
    /// Balanced partition before modification.
    pub balanced: Partition,
    /// Partition after the rules ran.
    pub d: Partition,
    /// Set for segments strictly inside a pair of odd-m segments.
    pub exempt: bool,
    pub modified: Option<Modification>,
}

impl SegmentData {
    pub fn from_segment(s: &Segment) -> SegmentData {
        let b = balanced(s.deg, s.m);
        SegmentData { deg: s.deg, m: s.m, k: s.k, l: s.l, balanced: b.clone(), d: b, exempt: false, modified: None }
    }
}

/// One rule application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleFiring {
    pub rule: String,
    pub segments: Vec<usize>,
    /// `(preceding_boxes, preceding_parts)` of the tested block, if any.
    pub block_offset: Option<(usize, usize)>,
    /// The graded polynomial tested, if any.
    pub gr: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub group: GroupType,
    pub segments: Vec<SegmentData>,
    pub d_a: Partition,
    pub result: Partition,
    pub very_even: bool,
    pub rule_trace: Vec<RuleFiring>,
    pub precision_used: usize,
}

/// Deliberate corruptions of the rule table, for harness sanity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mutation {
    /// Never split a non-square even segment.
    NoSplit,
    /// Leave odd-m pairs unmodified.
    NoPairing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RtOptions {
    pub mutation: Option<Mutation>,
}

fn segment_data(f: &SeriesPoly) -> Result<Vec<SegmentData>> {
    Ok(newton_polygon(f)?.segments().iter().map(SegmentData::from_segment).collect())
}

fn firing(rule: &str, segs: Vec<usize>) -> RuleFiring {
    RuleFiring { rule: rule.into(), segments: segs, block_offset: None, gr: None }
}

fn balanced_report(f: &SeriesPoly, g: GroupType, rule: &str) -> Result<ReductionReport> {
    let segs = segment_data(f)?;
    let result = re_concat(segs.iter().map(|s| &s.d));
    let trace = (0..segs.len()).map(|i| firing(rule, vec![i])).collect();
    Ok(ReductionReport {
        group: g,
        segments: segs,
        d_a: result.clone(),
        result,
        very_even: false,
        rule_trace: trace,
        precision_used: f.prec(),
    })
}

pub fn rt_min_a(f: &SeriesPoly, g: GroupType) -> Result<ReductionReport> {
    balanced_report(f, g, "A")
}

pub fn rt_min_c(f: &SeriesPoly, g: GroupType) -> Result<ReductionReport> {
    let r = balanced_report(f, g, "C")?;
    if !is_valid_for(&r.result, g) {
        return Err(Error::InternalInvariantViolation(format!("{} is not a type C partition", r.result)));
    }
    Ok(r)
}

/// Merges adjacent segments with equal `k` whose concatenated parts are out
/// of order, i.e. the first has a part `k` and the second a part `k + 1`.
pub fn normalize_segments(segs: &[SegmentData]) -> Vec<SegmentData> {
    let mut out: Vec<SegmentData> = Vec::new();
    for s in segs {
        match out.last_mut() {
            Some(prev) if prev.k == s.k && prev.l < prev.m && s.l > 0 => {
                let (deg, m, l, k) = (prev.deg + s.deg, prev.m + s.m, prev.l + s.l, s.k);
                let mut parts = vec![k + 1; l];
                parts.extend(std::iter::repeat_n(k, m - l));
                let d = Partition::new(parts);
                *prev = SegmentData { deg, m, k, l, balanced: d.clone(), d, exempt: false, modified: None };
            }
            _ => out.push(s.clone()),
        }
    }
    out
}

fn parts_of(k: usize, high: usize, low: usize) -> Vec<usize> {
    let mut v = vec![k + 1; high];
    v.extend(std::iter::repeat_n(k, low));
    v
}

/// `[(k+1)^(l+1), k^(m-l-1)]`.
fn gain_box(s: &SegmentData) -> Partition {
    Partition::new(parts_of(s.k, s.l + 1, s.m - s.l - 1))
}

/// `[(k+1)^(l-1), k^(m-l+1)]`, or `[k^(m-1), k-1]` when `l = 0`.
fn lose_box(s: &SegmentData) -> Partition {
    if s.l > 0 {
        Partition::new(parts_of(s.k, s.l - 1, s.m - s.l + 1))
    } else {
        let mut v = vec![s.k; s.m - 1];
        v.push(s.k - 1);
        Partition::new(v)
    }
}

/// Runs the type D rules on `segs[range]`, using block offsets in `d_a`.
fn d_rules(
    segs: &mut [SegmentData],
    range: std::ops::Range<usize>,
    d_a: &Partition,
    f: &SeriesPoly,
    opts: RtOptions,
    trace: &mut Vec<RuleFiring>,
) -> Result<()> {
    let mut i = range.start;
    while i < range.end {
        let s = segs[i].clone();
        if s.m % 2 == 1 {
            let r = (i + 1..range.end).find(|&j| segs[j].m % 2 == 1).ok_or(Error::UnpairedOddSegment)?;
            if opts.mutation != Some(Mutation::NoPairing) {
                segs[i].d = gain_box(&segs[i]);
                segs[i].modified = Some(Modification::GainsBox);
                segs[r].d = lose_box(&segs[r]);
                segs[r].modified = Some(Modification::LosesBox);
            }
            for seg in segs.iter_mut().take(r).skip(i + 1) {
                seg.exempt = true;
            }
            trace.push(firing("D2", (i..=r).collect()));
            i = r + 1;
            continue;
        }
        if s.l != 0 || s.k % 2 == 1 {
            trace.push(firing("D1.1", vec![i]));
        } else {
            // the segment's own run [k^m], at its global offsets in d_A
            let preceding_boxes: usize = segs[..i].iter().map(|x| x.deg).sum();
            let preceding_parts: usize = segs[..i].iter().map(|x| x.balanced.len()).sum();
            let block = Block { start: preceding_parts + 1, len: s.m, part: s.k, preceding_boxes, preceding_parts };
            if !blocks_of(d_a).iter().any(|b| b.part == s.k && b.preceding_boxes <= preceding_boxes) {
                return Err(Error::InternalInvariantViolation(format!("no run of part {} in {d_a}", s.k)));
            }
            let gr = gr_poly(&block, f)?;
            let mut fr = firing("", vec![i]);
            fr.block_offset = Some((block.preceding_boxes, block.preceding_parts));
            fr.gr = Some(gr.to_string());
            if is_square_in_cx(&gr) {
                fr.rule = "D1.2.1".into();
            } else {
                fr.rule = "D1.2.2".into();
                if opts.mutation != Some(Mutation::NoSplit) {
                    let mut v = vec![s.k + 1];
                    v.extend(std::iter::repeat_n(s.k, s.m - 2));
                    v.push(s.k - 1);
                    segs[i].d = Partition::new(v);
                    segs[i].modified = Some(Modification::Split);
                }
            }
            trace.push(fr);
        }
        i += 1;
    }
    Ok(())
}

fn assemble(
    g: GroupType,
    segs: Vec<SegmentData>,
    d_a: Partition,
    extra: Option<Partition>,
    trace: Vec<RuleFiring>,
    prec: usize,
) -> Result<ReductionReport> {
    let mut all: Vec<&Partition> = segs.iter().map(|s| &s.d).collect();
    if let Some(e) = extra.as_ref() {
        all.push(e);
    }
    let result = re_concat(all);
    let very_even = g.family == Family::D && result.all_even();
    if !is_valid_for(&result, g) {
        return Err(Error::InternalInvariantViolation(format!("{result} is not valid for {g}")));
    }
    Ok(ReductionReport { group: g, segments: segs, d_a, result, very_even, rule_trace: trace, precision_used: prec })
}

pub fn rt_min_d(f: &SeriesPoly, g: GroupType) -> Result<ReductionReport> {
    rt_min_d_with(f, g, RtOptions::default())
}

pub fn rt_min_d_with(f: &SeriesPoly, g: GroupType, opts: RtOptions) -> Result<ReductionReport> {
    let mut segs = normalize_segments(&segment_data(f)?);
    let d_a = re_concat(segs.iter().map(|s| &s.balanced));
    let mut trace = Vec::new();
    let n = segs.len();
    d_rules(&mut segs, 0..n, &d_a, f, opts, &mut trace)?;
    assemble(g, segs, d_a, None, trace, f.prec())
}

pub fn rt_min_b(f: &SeriesPoly, g: GroupType) -> Result<ReductionReport> {
    rt_min_b_with(f, g, RtOptions::default())
}

pub fn rt_min_b_with(f: &SeriesPoly, g: GroupType, opts: RtOptions) -> Result<ReductionReport> {
    let mut segs = normalize_segments(&segment_data(f)?);
    let d_a_seg = re_concat(segs.iter().map(|s| &s.balanced));
    let d_a = re_concat([&d_a_seg, &Partition::new(vec![1])]);
    let m_total: usize = segs.iter().map(|s| s.m).sum();
    let mut trace = Vec::new();
    let n = segs.len();
    if m_total % 2 == 0 {
        d_rules(&mut segs, 0..n, &d_a_seg, f, opts, &mut trace)?;
        trace.push(firing("B1", vec![]));
        assemble(g, segs, d_a, Some(Partition::new(vec![1])), trace, f.prec())
    } else {
        let r = (0..n).rev().find(|&j| segs[j].m % 2 == 1).ok_or(Error::UnpairedOddSegment)?;
        d_rules(&mut segs, 0..r, &d_a_seg, f, opts, &mut trace)?;
        segs[r].d = gain_box(&segs[r]);
        segs[r].modified = Some(Modification::Absorb);
        trace.push(firing("B2", vec![r]));
        assemble(g, segs, d_a, None, trace, f.prec())
    }
}

/// Validates `f` for `g` and dispatches to the family's pipeline.
pub fn compute(f: &SeriesPoly, g: GroupType) -> Result<ReductionReport> {
    compute_with(f, g, RtOptions::default())
}

pub fn compute_with(f: &SeriesPoly, g: GroupType, opts: RtOptions) -> Result<ReductionReport> {
    let v = validate_char_poly(f, g)?;
    if !v.passed() {
        return Err(Error::ValidationFailed(Box::new(v)));
    }
    match g.family {
        Family::A => rt_min_a(f, g),
        Family::C => rt_min_c(f, g),
        Family::D => rt_min_d_with(f, g, opts),
        Family::B => rt_min_b_with(f, g, opts),
    }
}

/// The partition `d_A` against which minimality is measured (with the
/// extra part 1 for type B).
pub fn d_a_of(f: &SeriesPoly, g: GroupType) -> Result<Partition> {
    let segs = segment_data(f)?;
    let d = re_concat(segs.iter().map(|s| &s.balanced));
    Ok(if g.family == Family::B { re_concat([&d, &Partition::new(vec![1])]) } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn g(f: Family, n: usize) -> GroupType {
        GroupType::new(f, n).unwrap()
    }

    fn poly(deg: usize, terms: &[(usize, usize, i64)]) -> SeriesPoly {
        SeriesPoly::from_int_terms(deg, terms, 4 * deg + 2)
    }

    #[test]
    fn type_a_examples() {
        assert_eq!(compute(&poly(5, &[(0, 2, 1)]), g(Family::A, 5)).unwrap().result, p(&[3, 2]));
        assert_eq!(compute(&poly(4, &[(2, 1, 1), (0, 3, 1)]), g(Family::A, 4)).unwrap().result, p(&[2, 1, 1]));
        assert_eq!(compute(&poly(3, &[(1, 1, 1), (0, 1, 1)]), g(Family::A, 3)).unwrap().result, p(&[3]));
    }

    #[test]
    fn type_c_examples() {
        assert_eq!(compute(&poly(4, &[(2, 1, 1), (0, 3, 1)]), g(Family::C, 2)).unwrap().result, p(&[2, 1, 1]));
        assert_eq!(compute(&poly(2, &[(0, 1, 1)]), g(Family::C, 1)).unwrap().result, p(&[2]));
        assert_eq!(compute(&poly(4, &[(0, 2, 1)]), g(Family::C, 2)).unwrap().result, p(&[2, 2]));
    }

    fn sd(deg: usize, m: usize, k: usize, l: usize) -> SegmentData {
        let b = balanced(deg, m);
        assert_eq!((k, l), (deg / m, deg % m));
        SegmentData { deg, m, k, l, balanced: b.clone(), d: b, exempt: false, modified: None }
    }

    #[test]
    fn normalize_examples() {
        let n = normalize_segments(&[sd(5, 2, 2, 1), sd(7, 3, 2, 1)]);
        assert_eq!(n.len(), 1);
        assert_eq!((n[0].deg, n[0].m, n[0].k, n[0].l), (12, 5, 2, 2));
        assert_eq!(n[0].d, p(&[3, 3, 2, 2, 2]));
        // [4,3,3] then [3,3] is already in order
        assert_eq!(normalize_segments(&[sd(10, 3, 3, 1), sd(6, 2, 3, 0)]).len(), 2);
        assert_eq!(normalize_segments(&[sd(4, 1, 4, 0), sd(2, 1, 2, 0)]).len(), 2);
        assert_eq!(normalize_segments(&[sd(4, 1, 4, 0)]).len(), 1);
    }

    #[test]
    fn type_d_examples() {
        let r = compute(&poly(4, &[(2, 1, 1), (0, 2, 1)]), g(Family::D, 2)).unwrap();
        assert_eq!((r.d_a.clone(), r.result.clone()), (p(&[2, 2]), p(&[3, 1])));
        assert_eq!(r.rule_trace[0].rule, "D1.2.2");
        let r = compute(&poly(4, &[(2, 1, 2), (0, 2, 1), (0, 3, 1)]), g(Family::D, 2)).unwrap();
        assert_eq!(r.result, p(&[2, 2]));
        assert!(r.very_even);
        assert_eq!(r.rule_trace[0].rule, "D1.2.1");
        // segments (4,1) and (2,1): λ^6 + tλ^2 + t^2
        let r = compute(&poly(6, &[(2, 1, 1), (0, 2, 1)]), g(Family::D, 3)).unwrap();
        assert_eq!((r.d_a.clone(), r.result.clone()), (p(&[4, 2]), p(&[5, 1])));
    }

    #[test]
    fn type_b_examples() {
        let r = compute(&poly(4, &[(2, 1, 1), (0, 1, 1)]), g(Family::B, 2)).unwrap();
        assert_eq!((r.d_a.clone(), r.result.clone()), (p(&[4, 1]), p(&[5])));
        let r = compute(&poly(4, &[(2, 2, 1), (0, 2, 1)]), g(Family::B, 2)).unwrap();
        assert_eq!(r.result, p(&[3, 1, 1]));
        let r = compute(&poly(4, &[(2, 1, 2), (0, 2, 1), (0, 5, 1)]), g(Family::B, 2)).unwrap();
        assert_eq!(r.result, p(&[2, 2, 1]));
    }

    #[test]
    fn square_test_uses_the_segment_run() {
        // d_A = [2,2,2,1,1,1,1]: the run of 2s spans two segments, but only
        // the first segment's [2,2] is tested, and X^2 - 2X + 1 is a square
        let f = SeriesPoly::from_int_terms(10, &[(8, 1, -2), (6, 2, 1), (2, 5, -3), (0, 8, -2)], 42);
        let r = compute(&f, g(Family::D, 5)).unwrap();
        assert_eq!(r.d_a, p(&[2, 2, 2, 1, 1, 1, 1]));
        assert_eq!(r.rule_trace[0].rule, "D1.2.1");
        assert_eq!(r.result, p(&[2, 2, 2, 2, 1, 1]));
    }

    #[test]
    fn validation_failure_is_reported() {
        let e = compute(&poly(4, &[(2, 1, 1), (0, 3, 1)]), g(Family::D, 2)).unwrap_err();
        assert!(matches!(e, Error::ValidationFailed(_)));
    }
}
