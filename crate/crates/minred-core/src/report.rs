//! Machine-readable outcomes of the `compute` and `factor` commands.

use serde_json::{json, Value};

use crate::admissibility::Alignment;
use crate::error::Error;
use crate::job::{JobSpec, PolySpec, SCHEMA};
use crate::matrixlab::{single_segment, slope_factors, verify_reduction_seeded};
use crate::oracle::{crosscheck, CrosscheckOptions};
use crate::polyring::{slope_factorize, validate_char_poly, SeriesPoly};
use crate::rtmin::compute as rt_compute;

pub const EXIT_OK: i32 = 0;
/// Errors outside the documented classes.
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;

/// Exit code, JSON document and a one-line human summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit: i32,
    pub json: Value,
    pub summary: String,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Oracle enumeration bound in boxes.
    pub oracle_bound: Option<usize>,
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::ValidationFailed(_) | Error::Parse(_) | Error::Precondition(_) | Error::NotSplit => EXIT_VALIDATION,
        Error::InsufficientPrecision(_) | Error::PrecisionExhausted(_) => EXIT_PRECISION,
        Error::Mismatch { .. } | Error::SearchIncomplete(_) => EXIT_MISMATCH,
        _ => EXIT_OTHER,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match exit_code_for(e) {
        EXIT_VALIDATION => "validation",
        EXIT_PRECISION => "precision",
        EXIT_MISMATCH => "verification",
        _ => "internal",
    }
}

/// Failure document for `command`.
pub fn error_outcome(command: &str, e: &Error) -> Outcome {
    let exit = exit_code_for(e);
    let json = json!({
        "schema": SCHEMA,
        "command": command,
        "status": "error",
        "error": { "kind": error_kind(e), "message": e.to_string() },
        "exit_code": exit,
    });
    Outcome { exit, json, summary: format!("{command} failed ({}): {e}", error_kind(e)) }
}

fn checked_poly(job: &JobSpec) -> Result<(SeriesPoly, Vec<SeriesPoly>), Error> {
    let factors = job.input_factors()?;
    if job.factors.is_some() {
        for (i, f) in factors.iter().enumerate() {
            single_segment(f).map_err(|_| Error::Precondition(format!("factor {i} is not single-slope")))?;
        }
    }
    Ok((job.char_poly()?, factors))
}

pub fn compute(job: &JobSpec, opts: &RunOptions) -> Outcome {
    let (f, factors) = match checked_poly(job) {
        Ok(x) => x,
        Err(e) => return error_outcome("compute", &e),
    };
    let g = job.group;
    let rep = match rt_compute(&f, g) {
        Ok(r) => r,
        Err(e) => return error_outcome("compute", &e),
    };
    let mut exit = EXIT_OK;
    let mut status = "ok";
    let mut summary = format!("{g}: {} (d_A {})", rep.result, rep.d_a);
    if rep.very_even {
        summary.push_str(", very even");
    }
    let mut doc = json!({
        "schema": SCHEMA,
        "command": "compute",
        "group": g,
        "precision": f.prec(),
        "seed": job.seed,
        "report": rep,
    });
    if job.verify {
        let fs = if job.factors.is_some() { Ok(factors) } else { slope_factors(&f) };
        let section = match fs.and_then(|fs| verify_reduction_seeded(&fs, g, &rep.result, job.seed)) {
            Ok(v) => {
                summary.push_str("; verified");
                let mut s = serde_json::to_value(&v).expect("report serializes");
                s["status"] = json!("verified");
                s
            }
            Err(Error::Mismatch { expected, got }) => {
                exit = EXIT_MISMATCH;
                status = "mismatch";
                summary.push_str(&format!("; realized {got} instead"));
                json!({ "status": "mismatch", "expected": expected, "jordan_type": got })
            }
            Err(e) => {
                exit = exit_code_for(&e).max(EXIT_MISMATCH);
                status = "verification_failed";
                summary.push_str(&format!("; verification failed: {e}"));
                json!({ "status": "failed", "message": e.to_string() })
            }
        };
        doc["verification"] = section;
    }
    if job.oracle {
        let copts = CrosscheckOptions {
            align: if job.strict_admissibility { Alignment::Strict } else { Alignment::OddStart },
            bound: opts.oracle_bound,
            ..CrosscheckOptions::default()
        };
        let v = crosscheck(&f, g, &copts);
        if !v.agree {
            if exit == EXIT_OK {
                exit = EXIT_ORACLE;
            }
            if status == "ok" {
                status = "oracle_disagreement";
            }
        }
        summary.push_str(&format!("; oracle: {}", v.note));
        doc["oracle"] = serde_json::to_value(&v).expect("verdict serializes");
    }
    doc["status"] = json!(status);
    doc["exit_code"] = json!(exit);
    Outcome { exit, json: doc, summary }
}

pub fn factor(job: &JobSpec) -> Outcome {
    let (f, _) = match checked_poly(job) {
        Ok(x) => x,
        Err(e) => return error_outcome("factor", &e),
    };
    if f.a(f.deg()).is_zero() {
        let e = Error::Precondition("constant term is zero".into());
        return error_outcome("factor", &e);
    }
    if let Ok(v) = validate_char_poly(&f, job.group) {
        if let Some(c) = v.first_failure().filter(|c| c.name == "monic") {
            return error_outcome("factor", &Error::Precondition(c.reason.clone().unwrap_or_default()));
        }
    }
    let target = f.prec() / 2;
    let fz = match slope_factorize(&f, target, true) {
        Ok(x) => x,
        Err(e) => return error_outcome("factor", &e),
    };
    let product_check = {
        let p = fz.product();
        (0..=f.deg()).all(|i| p.a(i).truncate(target).sub(&f.a(i).truncate(target)).is_zero())
    };
    let factors: Vec<Value> = fz
        .factors
        .iter()
        .map(|h| {
            let seg = single_segment(h).ok();
            json!({ "polynomial": PolySpec::from_series_poly(h), "segment": seg, "precision": h.prec() })
        })
        .collect();
    let note = if fz.factors.len() == 1 { "nothing to split".to_string() } else { format!("{} factors", fz.factors.len()) };
    let exit = if product_check { EXIT_OK } else { EXIT_OTHER };
    let json = json!({
        "schema": SCHEMA,
        "command": "factor",
        "group": job.group,
        "precision": f.prec(),
        "target_precision": target,
        "certified_precision": fz.certified_prec,
        "factors": factors,
        "splits": fz.splits,
        "product_check": product_check,
        "note": note,
        "status": if product_check { "ok" } else { "error" },
        "exit_code": exit,
    });
    Outcome { exit, json, summary: format!("{note}; certified modulo t^{}", fz.certified_prec) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str) -> JobSpec {
        JobSpec::from_json(text).unwrap()
    }

    #[test]
    fn so4_compute() {
        let j = job(r#"{"group":{"family":"D","rank":2},"polynomial":{"4":[[0,"1"]],"2":[[1,"1"]],"0":[[2,"1"]]},"verify":true,"oracle":true}"#);
        let o = compute(&j, &RunOptions::default());
        assert_eq!(o.exit, EXIT_OK, "{}", o.json);
        assert_eq!(o.json["report"]["result"], json!([3, 1]));
        assert_eq!(o.json["verification"]["status"], json!("verified"));
        assert_eq!(o.json["schema"], json!("minred/1"));
    }

    #[test]
    fn not_self_dual() {
        let j = job(r#"{"group":{"family":"C","rank":2},"polynomial":{"4":[[0,"1"]],"3":[[1,"1"]],"0":[[2,"1"]]}}"#);
        let o = compute(&j, &RunOptions::default());
        assert_eq!(o.exit, EXIT_VALIDATION);
        assert!(o.json["error"]["message"].as_str().unwrap().contains("not self-dual"));
    }

    #[test]
    fn precision_too_small() {
        let j = job(r#"{"group":{"family":"A","rank":8},"precision":2,"polynomial":{"8":[[0,"1"]],"0":[[3,"1"]]}}"#);
        assert_eq!(compute(&j, &RunOptions::default()).exit, EXIT_PRECISION);
    }

    #[test]
    fn factor_examples() {
        let j = job(r#"{"group":{"family":"C","rank":2},"polynomial":{"4":[[0,"1"]],"2":[[1,"1"]],"0":[[3,"1"]]}}"#);
        let o = factor(&j);
        assert_eq!(o.exit, EXIT_OK, "{}", o.json);
        assert_eq!(o.json["factors"].as_array().unwrap().len(), 2);
        assert_eq!(o.json["product_check"], json!(true));
        let j = job(r#"{"group":{"family":"A","rank":2},"polynomial":{"2":[[0,"1"]],"0":[[1,"1"]]}}"#);
        assert_eq!(factor(&j).json["note"], json!("nothing to split"));
        let j = job(r#"{"group":{"family":"A","rank":2},"polynomial":{"2":[[0,"1"]],"1":[[1,"1"]]}}"#);
        assert_eq!(factor(&j).exit, EXIT_VALIDATION);
    }
}
