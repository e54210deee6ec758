use minred_core::cpoly::CPoly;
use minred_core::gen::{shapes, Gen};
use minred_core::isotropy::poly_exact_sqrt;
use minred_core::job::{JobSpec, PolySpec};
use minred_core::partitions::{balanced, dominates, is_valid_for, re_concat, PartitionIter};
use minred_core::polyring::{newton_polygon, validate_char_poly, Family, GroupType};
use minred_core::report::{compute, RunOptions};
use minred_core::rtmin;
use minred_core::{Partition, Scalar, TruncSeries};
use proptest::prelude::*;

fn series(cs: &[i64], prec: usize) -> TruncSeries {
    let terms: Vec<(usize, Scalar)> = cs.iter().enumerate().map(|(i, &c)| (i, Scalar::from_int(c))).collect();
    TruncSeries::from_terms(&terms, prec)
}

fn small_ints(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn balanced_is_least_with_few_parts(n in 1usize..12, m in 1usize..8) {
        let b = balanced(n, m);
        prop_assert_eq!(b.size(), n);
        prop_assert!(b.len() <= m);
        prop_assert!(b.parts()[0] - b.parts()[b.len() - 1] <= 1);
        for d in PartitionIter::new(n).filter(|d| d.len() <= m) {
            prop_assert!(dominates(&d, &b).unwrap());
        }
    }

    #[test]
    fn dominance_is_a_partial_order(n in 1usize..10, i in 0usize..40, j in 0usize..40) {
        let all: Vec<Partition> = PartitionIter::new(n).collect();
        let (a, b) = (&all[i % all.len()], &all[j % all.len()]);
        prop_assert!(dominates(a, a).unwrap());
        if dominates(a, b).unwrap() && dominates(b, a).unwrap() {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn re_concat_adds_sizes(a in prop::collection::vec(1usize..6, 0..5), b in prop::collection::vec(1usize..6, 0..5)) {
        let (pa, pb) = (Partition::new(a), Partition::new(b));
        let c = re_concat([&pa, &pb]);
        prop_assert_eq!(c.size(), pa.size() + pb.size());
        prop_assert_eq!(c.len(), pa.len() + pb.len());
    }

    #[test]
    fn series_ring_laws(a in small_ints(6), b in small_ints(6), c in small_ints(6)) {
        let (a, b, c) = (series(&a, 6), series(&b, 6), series(&c, 6));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
    }

    #[test]
    fn unit_inverse_inverts(u in 1i64..5, rest in small_ints(7)) {
        let mut cs = vec![u];
        cs.extend(rest);
        let a = series(&cs, 8);
        let inv = a.unit_inverse().unwrap();
        prop_assert_eq!(a.mul(&inv), TruncSeries::one(8));
    }

    #[test]
    fn exact_sqrt_recovers_monic_roots(mut h in small_ints(4)) {
        h.push(1);
        let h = CPoly::from_ints(&h);
        prop_assert_eq!(poly_exact_sqrt(&h.mul(&h)), Some(h));
    }

    #[test]
    fn generated_polygons_and_reductions(seed in 0u64..10_000, fam in 0usize..4, pick in 0usize..64) {
        let family = [Family::A, Family::B, Family::C, Family::D][fam];
        let self_dual = family != Family::A;
        let deg = if self_dual { 6 } else { 5 };
        let all = shapes(deg, self_dual, 1);
        let shape = &all[pick % all.len()];
        let n = if self_dual { deg / 2 } else { deg };
        let g = GroupType::new(family, n).unwrap();
        let mut gen = Gen::new(seed);
        if let Some(f) = gen.valid(g, 50, |gen| gen.with_polygon(shape, &[], self_dual, 4 * deg + 2)) {
            let got: Vec<(usize, usize)> = newton_polygon(&f).unwrap().segments().iter().map(|s| (s.deg, s.m)).collect();
            prop_assert_eq!(&got, shape);
            prop_assert!(validate_char_poly(&f, g).unwrap().passed());
            let r = rtmin::compute(&f, g).unwrap();
            prop_assert!(is_valid_for(&r.result, g));
            let job = JobSpec::new(g, PolySpec::from_series_poly(&f));
            let back = JobSpec::from_json(&job.to_json()).unwrap();
            prop_assert_eq!(&back, &job);
            let a = compute(&back, &RunOptions::default());
            let b = compute(&job, &RunOptions::default());
            prop_assert_eq!(serde_json::to_string(&a.json).unwrap(), serde_json::to_string(&b.json).unwrap());
            prop_assert_eq!(&a.json["report"]["result"], &serde_json::to_value(&r.result).unwrap());
        }
    }
}
