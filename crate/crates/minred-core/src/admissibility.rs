//! Associated graded polynomials of partition blocks and the admissibility
//! predicate for orthogonal types.

use serde::{Deserialize, Serialize};

pub use crate::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::polyring::{GroupType, SeriesPoly};

/// A maximal run `d_start = ... = d_(start+len-1) = part`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// 1-based index of the first part of the run.
    pub start: usize,
    pub len: usize,
    pub part: usize,
    /// Sum of the parts before the run.
    pub preceding_boxes: usize,
    /// Number of parts before the run.
    pub preceding_parts: usize,
}

/// Which even-part runs carry the square condition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alignment {
    /// Runs whose 1-based start index is odd.
    #[default]
    OddStart,
    /// Every even-part run.
    Strict,
}

pub fn blocks_of(d: &Partition) -> Vec<Block> {
    let parts = d.parts();
    let mut out = Vec::new();
    let (mut i, mut boxes) = (0, 0);
    while i < parts.len() {
        let p = parts[i];
        let len = parts[i..].iter().take_while(|&&x| x == p).count();
        out.push(Block { start: i + 1, len, part: p, preceding_boxes: boxes, preceding_parts: i });
        boxes += p * len;
        i += len;
    }
    out
}

/// `Σ_α (a_(boxes + α·part))_(parts + α) X^(len - α)` for `α = 0..=len`.
pub fn gr_poly(b: &Block, f: &SeriesPoly) -> Result<CPoly> {
    let deg = f.deg();
    let mut coeffs = vec![crate::series::Scalar::zero(); b.len + 1];
    for alpha in 0..=b.len {
        let idx = b.preceding_boxes + alpha * b.part;
        if idx > deg {
            return Err(Error::IndexOutOfRange { index: idx, deg });
        }
        coeffs[b.len - alpha] = f.a(idx).coeff(b.preceding_parts + alpha)?.clone();
    }
    Ok(CPoly::new(coeffs))
}

/// Whether `p` is a constant times the square of a polynomial over `C`.
pub fn is_square_in_cx(p: &CPoly) -> bool {
    let t = p.trimmed();
    if t.degree().unwrap_or(0) == 0 {
        return true;
    }
    t.squarefree_decomposition().iter().all(|(_, mult)| mult % 2 == 0)
}

/// Per-block outcome used in reports and traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCheck {
    pub block: Block,
    pub gr: Option<CPoly>,
    pub square: bool,
}

/// Square tests on every constrained block. A coefficient index beyond the
/// degree makes the candidate inadmissible.
pub fn admissibility_checks(d: &Partition, f: &SeriesPoly, align: Alignment) -> Result<Vec<BlockCheck>> {
    let mut out = Vec::new();
    for b in blocks_of(d) {
        if b.part % 2 == 1 {
            continue;
        }
        if align == Alignment::OddStart && b.start % 2 == 0 {
            continue;
        }
        match gr_poly(&b, f) {
            Ok(gr) => {
                let square = is_square_in_cx(&gr);
                out.push(BlockCheck { block: b, gr: Some(gr), square });
            }
            Err(Error::IndexOutOfRange { .. }) => out.push(BlockCheck { block: b, gr: None, square: false }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn is_admissible(d: &Partition, f: &SeriesPoly, g: GroupType) -> Result<bool> {
    is_admissible_with(d, f, g, Alignment::OddStart)
}

pub fn is_admissible_with(d: &Partition, f: &SeriesPoly, _g: GroupType, align: Alignment) -> Result<bool> {
    Ok(admissibility_checks(d, f, align)?.iter().all(|c| c.square))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Family;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn d2() -> GroupType {
        GroupType::new(Family::D, 2).unwrap()
    }

    #[test]
    fn block_examples() {
        let b = blocks_of(&p(&[3, 2, 2]));
        assert_eq!(b[0], Block { start: 1, len: 1, part: 3, preceding_boxes: 0, preceding_parts: 0 });
        assert_eq!(b[1], Block { start: 2, len: 2, part: 2, preceding_boxes: 3, preceding_parts: 1 });
        assert_eq!(blocks_of(&p(&[2, 2])), vec![Block { start: 1, len: 2, part: 2, preceding_boxes: 0, preceding_parts: 0 }]);
        let b = blocks_of(&p(&[5, 1]));
        assert_eq!((b.len(), b[0].part, b[1].part), (2, 5, 1));
    }

    #[test]
    fn gr_examples() {
        let f = SeriesPoly::from_int_terms(4, &[(2, 1, 1), (0, 2, 1)], 18);
        let b = blocks_of(&p(&[2, 2]))[0];
        assert_eq!(gr_poly(&b, &f).unwrap(), CPoly::from_ints(&[1, 1, 1]));
        let f2 = SeriesPoly::from_int_terms(4, &[(2, 1, 2), (0, 2, 1), (0, 5, 1)], 18);
        assert_eq!(gr_poly(&b, &f2).unwrap(), CPoly::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn square_examples() {
        assert!(is_square_in_cx(&CPoly::from_ints(&[1, 2, 1])));
        assert!(!is_square_in_cx(&CPoly::from_ints(&[1, 1, 1])));
        assert!(is_square_in_cx(&CPoly::from_ints(&[1, -4, 4])));
        assert!(is_square_in_cx(&CPoly::zero()));
        assert!(is_square_in_cx(&CPoly::from_ints(&[3])));
        assert!(!is_square_in_cx(&CPoly::from_ints(&[0, 1])));
    }

    #[test]
    fn admissibility_examples() {
        let f = SeriesPoly::from_int_terms(4, &[(2, 1, 1), (0, 2, 1)], 18);
        assert!(is_admissible(&p(&[3, 1]), &f, d2()).unwrap());
        assert!(!is_admissible(&p(&[2, 2]), &f, d2()).unwrap());
        let f2 = SeriesPoly::from_int_terms(4, &[(2, 1, 2), (0, 2, 1), (0, 5, 1)], 18);
        assert!(is_admissible(&p(&[2, 2]), &f2, d2()).unwrap());
    }
}
