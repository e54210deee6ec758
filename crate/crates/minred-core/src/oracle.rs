//! Brute-force cross-checks: exhaustive minimal admissible partitions and
//! the Jordan type of powers of a regular nilpotent.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::admissibility::{is_admissible_with, Alignment};
use crate::error::{Error, Result};
use crate::job::{JobSpec, PolySpec};
use crate::linalg::Mat;
use crate::matrixlab::{jordan_type, slope_factors, verify_reduction};
use crate::partitions::{balanced, dominates, enumerate, minimal_elements, Partition, DEFAULT_MAX_BOXES};
use crate::polyring::{Family, GroupType, SeriesPoly};
use crate::rtmin::{compute_with, d_a_of, RtOptions};
use crate::series::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub d_a: Partition,
    pub candidates_examined: usize,
    pub minimal_set: Vec<Partition>,
    pub unique: bool,
}

/// Enumerates all type-valid partitions dominating `d_A`, keeps the
/// admissible ones and returns their minimal elements.
pub fn brute_min_admissible(f: &SeriesPoly, g: GroupType) -> Result<OracleResult> {
    brute_min_admissible_with(f, g, DEFAULT_MAX_BOXES, Alignment::OddStart)
}

pub fn brute_min_admissible_with(
    f: &SeriesPoly,
    g: GroupType,
    bound: usize,
    align: Alignment,
) -> Result<OracleResult> {
    if !matches!(g.family, Family::B | Family::D) {
        return Err(Error::Precondition("the admissibility oracle applies to types B and D".into()));
    }
    let d_a = d_a_of(f, g)?;
    let all = enumerate(g.partition_size(), g, usize::MAX, bound)?;
    let mut pool = Vec::new();
    for c in &all {
        if dominates(c, &d_a)? && is_admissible_with(c, f, g, align)? {
            pool.push(c.clone());
        }
    }
    let minimal_set = minimal_elements(&pool)?;
    let unique = minimal_set.len() == 1;
    Ok(OracleResult { d_a, candidates_examined: all.len(), minimal_set, unique })
}

/// Regular nilpotent Jordan block of size `n` (ones on the subdiagonal).
pub fn regular_nilpotent(n: usize) -> Mat {
    let mut j = Mat::zeros(n, n);
    for i in 1..n {
        j[(i, i - 1)] = Scalar::one();
    }
    j
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerCheckReport {
    pub cases: usize,
    /// `(n, m, observed)` for every disagreement.
    pub counterexamples: Vec<(usize, usize, Partition)>,
}

/// Checks `jordan_type(J^m) = balanced(n, m)` for `1 ≤ m ≤ n ≤ n_max`.
pub fn power_jordan_check(n_max: usize) -> Result<PowerCheckReport> {
    if n_max > 40 {
        return Err(Error::Precondition("n_max is limited to 40".into()));
    }
    let mut cases = 0;
    let mut counterexamples = Vec::new();
    for n in 1..=n_max {
        let j = regular_nilpotent(n);
        let mut pw = Mat::identity(n);
        for m in 1..=n {
            pw = pw.mul(&j);
            let got = jordan_type(&pw)?;
            cases += 1;
            if got != balanced(n, m) {
                counterexamples.push((n, m, got));
            }
        }
    }
    Ok(PowerCheckReport { cases, counterexamples })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub agree: bool,
    pub algorithm: Option<Partition>,
    /// Oracle minimal set (B/D) or realized Jordan type (A/C).
    pub reference: Vec<Partition>,
    pub note: String,
    /// Where the counterexample was written, if anywhere.
    pub quarantined: Option<PathBuf>,
}

#[derive(Clone, Debug, Default)]
pub struct CrosscheckOptions {
    pub rt: RtOptions,
    pub align: Alignment,
    pub bound: Option<usize>,
    /// Directory receiving counterexample fixtures.
    pub quarantine: Option<PathBuf>,
}

/// Compares the algorithm with the oracle (B/D) or with the explicit
/// realization (A/C). Disagreement is a result, not an error.
pub fn crosscheck(f: &SeriesPoly, g: GroupType, opts: &CrosscheckOptions) -> Verdict {
    let alg = compute_with(f, g, opts.rt);
    let mut v = match (&alg, g.family) {
        (Err(e), _) => Verdict {
            agree: false,
            algorithm: None,
            reference: vec![],
            note: format!("algorithm failed: {e}"),
            quarantined: None,
        },
        (Ok(r), Family::B | Family::D) => {
            let bound = opts.bound.unwrap_or(DEFAULT_MAX_BOXES);
            match brute_min_admissible_with(f, g, bound, opts.align) {
                Ok(o) => {
                    let agree = o.unique && o.minimal_set[0] == r.result;
                    let note = if !o.unique {
                        format!("oracle minimal set is not a singleton: {:?}", o.minimal_set)
                    } else if agree {
                        "agree".into()
                    } else {
                        format!("algorithm {} vs oracle {}", r.result, o.minimal_set[0])
                    };
                    Verdict { agree, algorithm: Some(r.result.clone()), reference: o.minimal_set, note, quarantined: None }
                }
                Err(e) => Verdict {
                    agree: false,
                    algorithm: Some(r.result.clone()),
                    reference: vec![],
                    note: format!("oracle failed: {e}"),
                    quarantined: None,
                },
            }
        }
        (Ok(r), Family::A | Family::C) => {
            let factors = match slope_factors(f) {
                Ok(fs) => fs,
                Err(e) => {
                    return Verdict {
                        agree: false,
                        algorithm: Some(r.result.clone()),
                        reference: vec![],
                        note: format!("factorization failed: {e}"),
                        quarantined: None,
                    }
                }
            };
            match verify_reduction(&factors, g, &r.result) {
                Ok(rep) => Verdict {
                    agree: rep.verified,
                    algorithm: Some(r.result.clone()),
                    reference: vec![rep.jordan_type.clone()],
                    note: if rep.verified { "agree".into() } else { rep.note.clone() },
                    quarantined: None,
                },
                Err(Error::Mismatch { got, .. }) => Verdict {
                    agree: false,
                    algorithm: Some(r.result.clone()),
                    note: format!("algorithm {} vs realized {got}", r.result),
                    reference: vec![got],
                    quarantined: None,
                },
                Err(e) => Verdict {
                    agree: false,
                    algorithm: Some(r.result.clone()),
                    reference: vec![],
                    note: format!("realization failed: {e}"),
                    quarantined: None,
                },
            }
        }
    };
    if !v.agree {
        if let Some(dir) = &opts.quarantine {
            v.quarantined = quarantine(dir, f, g).ok();
        }
    }
    v
}

/// Writes `f` as a job file under `dir`, named by a content hash.
pub fn quarantine(dir: &Path, f: &SeriesPoly, g: GroupType) -> std::io::Result<PathBuf> {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    fs::create_dir_all(dir)?;
    let mut job = JobSpec::new(g, PolySpec::from_series_poly(f));
    job.precision = Some(f.prec());
    job.oracle = true;
    let text = job.to_json();
    let mut h = DefaultHasher::new();
    text.hash(&mut h);
    let path = dir.join(format!("{}-{:016x}.json", g, h.finish()));
    fs::write(&path, text + "\n")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn poly(deg: usize, terms: &[(usize, usize, i64)]) -> SeriesPoly {
        SeriesPoly::from_int_terms(deg, terms, 4 * deg + 2)
    }

    #[test]
    fn oracle_examples() {
        let d2 = GroupType::new(Family::D, 2).unwrap();
        let o = brute_min_admissible(&poly(4, &[(2, 1, 1), (0, 2, 1)]), d2).unwrap();
        assert_eq!((o.minimal_set.clone(), o.unique), (vec![p(&[3, 1])], true));
        let o = brute_min_admissible(&poly(4, &[(2, 1, 2), (0, 2, 1), (0, 3, 1)]), d2).unwrap();
        assert_eq!(o.minimal_set, vec![p(&[2, 2])]);
        let b2 = GroupType::new(Family::B, 2).unwrap();
        let o = brute_min_admissible(&poly(4, &[(2, 1, 1), (0, 1, 1)]), b2).unwrap();
        assert_eq!(o.minimal_set, vec![p(&[5])]);
    }

    #[test]
    fn power_check_small() {
        let r = power_jordan_check(8).unwrap();
        assert_eq!(r.cases, 36);
        assert!(r.counterexamples.is_empty());
    }
}
