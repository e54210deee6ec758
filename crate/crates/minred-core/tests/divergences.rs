//! Cases where the strict alignment reading of the admissibility rule
//! disagrees with brute force, while the default reading agrees.

use minred_core::admissibility::Alignment;
use minred_core::job::JobSpec;
use minred_core::oracle::{crosscheck, CrosscheckOptions};
use minred_core::rtmin;

fn load(name: &str) -> JobSpec {
    let path = format!("{}/tests/divergences/{name}", env!("CARGO_MANIFEST_DIR"));
    JobSpec::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn strict_alignment_disagrees_with_the_oracle() {
    for (name, expected) in [("b3_strict.json", vec![3, 2, 2]), ("b5_strict.json", vec![3, 2, 2, 2, 2])] {
        let job = load(name);
        let f = job.char_poly().unwrap();
        let r = rtmin::compute(&f, job.group).unwrap();
        assert_eq!(r.result.parts(), &expected[..], "{name}");

        let default = crosscheck(&f, job.group, &CrosscheckOptions::default());
        assert!(default.agree, "{name}: {}", default.note);
        let strict = CrosscheckOptions { align: Alignment::Strict, ..CrosscheckOptions::default() };
        let v = crosscheck(&f, job.group, &strict);
        assert!(!v.agree, "{name}: {}", v.note);
    }
}
