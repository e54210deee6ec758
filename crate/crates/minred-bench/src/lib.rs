//! Fixed inputs shared by the benchmarks.

use minred_core::{Family, GroupType, SeriesPoly};

pub struct Case {
    pub name: &'static str,
    pub group: GroupType,
    pub poly: SeriesPoly,
}

fn case(name: &'static str, fam: Family, deg: usize, terms: &[(usize, usize, i64)], prec: usize) -> Case {
    let n = if fam == Family::A { deg } else { deg / 2 };
    let group = GroupType::new(fam, n).expect("valid group");
    Case { name, group, poly: SeriesPoly::from_int_terms(deg, terms, prec) }
}

/// Representative single- and multi-slope inputs across the families.
pub fn cases() -> Vec<Case> {
    vec![
        case("A5 single slope", Family::A, 5, &[(0, 2, 1)], 22),
        case("C2 two slopes", Family::C, 4, &[(2, 1, 1), (0, 3, 1)], 18),
        case("D2 split", Family::D, 4, &[(2, 1, 1), (0, 2, 1)], 18),
        case("D3 glue", Family::D, 6, &[(2, 1, 1), (0, 2, 1)], 26),
        case("D5 three slopes", Family::D, 10, &[(8, 1, 1), (6, 2, 2), (4, 3, -1), (2, 5, 1), (0, 8, 3)], 100),
    ]
}

/// Multi-slope product for the factorization benchmark.
pub fn factor_input() -> SeriesPoly {
    // the splits lose twice the resultant valuations, 52 digits in all
    let prec = 100;
    let parts = [
        SeriesPoly::from_int_terms(2, &[(1, 1, 1), (0, 1, 2)], prec),
        SeriesPoly::from_int_terms(3, &[(1, 3, 1), (0, 4, -1)], prec),
        SeriesPoly::from_int_terms(5, &[(2, 4, 2), (0, 6, 1)], prec),
    ];
    parts.iter().skip(1).fold(parts[0].clone(), |a, b| a.mul(b))
}
