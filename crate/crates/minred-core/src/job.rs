//! JSON job descriptions shared by the CLI and the oracle's quarantine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{GroupType, SeriesPoly};
use crate::series::{Scalar, TruncSeries};

pub const SCHEMA: &str = "minred/1";

/// Sparse polynomial: `λ`-power to a list of `[t-exponent, scalar]` terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolySpec {
    pub terms: BTreeMap<usize, Vec<(usize, Scalar)>>,
}

impl PolySpec {
    pub fn degree(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Builds the series polynomial at precision `prec`; terms at or beyond
    /// the precision are dropped.
    pub fn to_series_poly(&self, prec: usize) -> SeriesPoly {
        let deg = self.degree();
        let mut cs = vec![TruncSeries::zero(prec); deg + 1];
        for (&j, terms) in &self.terms {
            let i = deg - j;
            for (e, c) in terms {
                cs[i] = cs[i].add(&TruncSeries::monomial(c.clone(), *e, prec));
            }
        }
        SeriesPoly::new(cs)
    }

    /// Nonzero stored terms of `p`.
    pub fn from_series_poly(p: &SeriesPoly) -> PolySpec {
        let deg = p.deg();
        let mut terms = BTreeMap::new();
        for j in 0..=deg {
            let c = p.lambda_coeff(j);
            let v: Vec<(usize, Scalar)> =
                c.coeffs().iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(e, x)| (e, x.clone())).collect();
            if !v.is_empty() || j == deg {
                terms.insert(j, v);
            }
        }
        PolySpec { terms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub group: GroupType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<PolySpec>>,
    #[serde(default)]
    pub verify: bool,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub strict_admissibility: bool,
    #[serde(default)]
    pub seed: u64,
}

impl JobSpec {
    pub fn new(group: GroupType, polynomial: PolySpec) -> JobSpec {
        JobSpec {
            group,
            precision: None,
            polynomial: Some(polynomial),
            factors: None,
            verify: false,
            oracle: false,
            strict_admissibility: false,
            seed: 0,
        }
    }

    pub fn degree(&self) -> usize {
        match (&self.polynomial, &self.factors) {
            (Some(p), _) => p.degree(),
            (None, Some(fs)) => fs.iter().map(PolySpec::degree).sum(),
            _ => 0,
        }
    }

    /// Working precision: explicit, else `4·deg + 2`.
    pub fn working_precision(&self) -> usize {
        self.precision.unwrap_or(4 * self.degree() + 2)
    }

    /// Checks that exactly one input form is present.
    pub fn check(&self) -> Result<()> {
        match (&self.polynomial, &self.factors) {
            (Some(_), None) => Ok(()),
            (None, Some(f)) if !f.is_empty() => Ok(()),
            (Some(_), Some(_)) => Err(Error::Parse("give either \"polynomial\" or \"factors\", not both".into())),
            _ => Err(Error::Parse("missing \"polynomial\" or \"factors\"".into())),
        }
    }

    /// Input factors (a single one for a whole polynomial) at the working precision.
    pub fn input_factors(&self) -> Result<Vec<SeriesPoly>> {
        self.check()?;
        let prec = self.working_precision();
        Ok(match (&self.polynomial, &self.factors) {
            (Some(p), _) => vec![p.to_series_poly(prec)],
            (_, Some(fs)) => fs.iter().map(|f| f.to_series_poly(prec)).collect(),
            _ => unreachable!(),
        })
    }

    /// The characteristic polynomial: the input or the product of factors.
    pub fn char_poly(&self) -> Result<SeriesPoly> {
        let fs = self.input_factors()?;
        let mut it = fs.into_iter();
        let first = it.next().expect("checked nonempty");
        Ok(it.fold(first, |a, b| a.mul(&b)))
    }

    pub fn from_json(text: &str) -> std::result::Result<JobSpec, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Family;

    #[test]
    fn parse_and_roundtrip() {
        let text = r#"{"group":{"family":"D","rank":2},
            "polynomial":{"4":[[0,"1"]],"2":[[1,"1"]],"0":[[2,"1"]]}}"#;
        let job = JobSpec::from_json(text).unwrap();
        assert_eq!(job.group, GroupType::new(Family::D, 2).unwrap());
        assert_eq!(job.working_precision(), 18);
        let p = job.char_poly().unwrap();
        assert_eq!(p, SeriesPoly::from_int_terms(4, &[(2, 1, 1), (0, 2, 1)], 18));
        assert_eq!(JobSpec::from_json(&job.to_json()).unwrap(), job);
    }

    #[test]
    fn series_poly_roundtrip() {
        let p = SeriesPoly::from_int_terms(4, &[(2, 1, 2), (0, 2, 1), (0, 5, -3)], 18);
        assert_eq!(PolySpec::from_series_poly(&p).to_series_poly(18), p);
    }

    #[test]
    fn both_forms_rejected() {
        let text = r#"{"group":{"family":"A","rank":1},"polynomial":{"1":[[0,"1"]]},"factors":[{"1":[[0,"1"]]}]}"#;
        assert!(JobSpec::from_json(text).unwrap().check().is_err());
    }
}
