//! Seeded random polynomials with prescribed Newton polygons.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cpoly::CPoly;
use crate::partitions::{Partition, PartitionIter};
use crate::polyring::{validate_char_poly, GroupType, SeriesPoly};
use crate::series::{Rat, Scalar, TruncSeries};

/// How coefficients on a segment's line are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineMode {
    Random,
    /// The lattice coefficients form `c·h(X)²`, so the graded polynomial is
    /// a square. Needs `l = 0` and `m` even.
    Square,
}

pub struct Gen {
    rng: ChaCha8Rng,
    /// Probability of a term at each valuation strictly above the polygon.
    pub density: f64,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), density: 0.15 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Nonzero integer in `[-3, 3]`.
    pub fn unit(&mut self) -> Scalar {
        let v = *[-3i64, -2, -1, 1, 2, 3].choose(&mut self.rng).expect("nonempty");
        Scalar::from_int(v)
    }

    /// Integer in `[-3, 3]`, zero a third of the time.
    pub fn small(&mut self) -> Scalar {
        if self.rng.gen_bool(1.0 / 3.0) {
            Scalar::zero()
        } else {
            self.unit()
        }
    }

    fn tail(&mut self, from: usize, prec: usize) -> Vec<(usize, Scalar)> {
        let mut out = Vec::new();
        for e in from..prec {
            if self.rng.gen_bool(self.density) {
                out.push((e, self.unit()));
            }
        }
        out
    }

    /// Monic polynomial whose polygon has the given `(width, height)`
    /// segments, which must have strictly increasing slopes. Self-dual inputs
    /// use even widths and only even-index coefficients.
    pub fn with_polygon(&mut self, shape: &[(usize, usize)], modes: &[LineMode], self_dual: bool, prec: usize) -> SeriesPoly {
        let deg: usize = shape.iter().map(|s| s.0).sum();
        let mut line: Vec<Option<Scalar>> = vec![None; deg + 1];
        // minimal admissible valuation at each index
        let mut floor = vec![0usize; deg + 1];
        line[0] = Some(Scalar::one());
        let (mut j0, mut v0) = (0usize, 0usize);
        for (si, &(w, m)) in shape.iter().enumerate() {
            let mode = modes.get(si).copied().unwrap_or(LineMode::Random);
            let square = mode == LineMode::Square && w % m == 0 && m % 2 == 0 && (!self_dual || (w / m) % 2 == 0);
            let sq = if square {
                let c0 = line[j0].clone().expect("vertex set");
                let mut h = vec![self.unit()];
                h.extend((1..m / 2).map(|_| self.small()));
                h.push(Scalar::one());
                let h = CPoly::new(h);
                Some(h.mul(&h).scale(&c0))
            } else {
                None
            };
            for j in j0 + 1..=j0 + w {
                let num = (j - j0) * m;
                floor[j] = v0 + num.div_ceil(w);
                if num % w != 0 || (self_dual && j % 2 == 1) {
                    continue;
                }
                line[j] = Some(match &sq {
                    Some(p) => p.coeff(m - num / w),
                    None if j == j0 + w => self.unit(),
                    None => self.small(),
                });
            }
            j0 += w;
            v0 += m;
        }
        let mut cs = Vec::with_capacity(deg + 1);
        cs.push(TruncSeries::one(prec));
        for j in 1..=deg {
            if self_dual && j % 2 == 1 {
                cs.push(TruncSeries::zero(prec));
                continue;
            }
            let mut terms = Vec::new();
            let mut from = floor[j];
            if let Some(c) = &line[j] {
                terms.push((floor[j], c.clone()));
                from += 1;
            }
            terms.extend(self.tail(from, prec));
            cs.push(TruncSeries::from_terms(&terms, prec));
        }
        SeriesPoly::new(cs)
    }

    pub fn single_slope(&mut self, deg: usize, m: usize, self_dual: bool, prec: usize) -> SeriesPoly {
        self.with_polygon(&[(deg, m)], &[LineMode::Random], self_dual, prec)
    }

    /// Draws until the polynomial validates for `g`, up to `tries` times.
    pub fn valid(&mut self, g: GroupType, tries: usize, mut draw: impl FnMut(&mut Gen) -> SeriesPoly) -> Option<SeriesPoly> {
        for _ in 0..tries {
            let f = draw(self);
            if validate_char_poly(&f, g).is_ok_and(|r| r.passed()) {
                return Some(f);
            }
        }
        None
    }

    /// A uniformly chosen partition of `n`.
    pub fn partition(&mut self, n: usize) -> Partition {
        let all: Vec<Partition> = PartitionIter::new(n).collect();
        all.choose(&mut self.rng).expect("n has partitions").clone()
    }

    /// Random rational with small numerator and denominator.
    pub fn rational(&mut self) -> Scalar {
        let n = self.rng.gen_range(-5i64..=5);
        let d = self.rng.gen_range(1i64..=4);
        Scalar::from_rat(Rat::new(n, d))
    }
}

/// All polygon shapes of total width `deg`: widths (even when `self_dual`),
/// heights up to `width + extra`, strictly increasing slopes.
pub fn shapes(deg: usize, self_dual: bool, extra: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(
        rest: usize,
        step: usize,
        extra: usize,
        last: Option<(usize, usize)>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for w in (step..=rest).step_by(step) {
            for m in 1..=w + extra {
                // slope m/w must exceed the previous one
                if let Some((pw, pm)) = last {
                    if m * pw <= pm * w {
                        continue;
                    }
                }
                cur.push((w, m));
                go(rest - w, step, extra, Some((w, m)), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(deg, if self_dual { 2 } else { 1 }, extra, None, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{newton_polygon, Family};

    #[test]
    fn polygon_is_respected() {
        let mut g = Gen::new(7);
        for shape in shapes(6, true, 2) {
            let f = g.with_polygon(&shape, &[], true, 26);
            let segs = newton_polygon(&f).unwrap().segments();
            let got: Vec<(usize, usize)> = segs.iter().map(|s| (s.deg, s.m)).collect();
            assert_eq!(got, shape);
            assert!(f.is_self_dual());
        }
    }

    #[test]
    fn square_mode_gives_square_gr() {
        let mut g = Gen::new(3);
        let f = g.with_polygon(&[(4, 2)], &[LineMode::Square], true, 18);
        let gr = CPoly::new((0..=2).map(|a| f.a(2 * a).coeff(a).unwrap().clone()).rev().collect());
        assert!(crate::admissibility::is_square_in_cx(&gr));
    }

    #[test]
    fn shape_counts() {
        assert_eq!(shapes(2, true, 0), vec![vec![(2, 1)], vec![(2, 2)]]);
        assert!(shapes(4, false, 1).contains(&vec![(1, 1), (3, 4)]));
    }

    #[test]
    fn valid_draws_validate() {
        let mut g = Gen::new(11);
        let d3 = GroupType::new(Family::D, 3).unwrap();
        let f = g.valid(d3, 50, |g| g.with_polygon(&[(2, 1), (4, 3)], &[], true, 26)).unwrap();
        assert!(validate_char_poly(&f, d3).unwrap().passed());
    }
}
