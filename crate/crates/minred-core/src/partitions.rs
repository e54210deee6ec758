//! Integer partitions: balanced partitions, dominance, parity classes and
//! enumeration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{Family, GroupType};

/// Default cap on the number of boxes for exhaustive enumeration.
pub const DEFAULT_MAX_BOXES: usize = 30;

/// Non-increasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl From<Vec<usize>> for Partition {
    fn from(v: Vec<usize>) -> Self {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl Partition {
    /// Sorts non-increasingly and drops zero parts.
    pub fn new(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: vec![] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, part: usize) -> usize {
        self.parts.iter().filter(|&&x| x == part).count()
    }

    pub fn all_even(&self) -> bool {
        self.parts.iter().all(|x| x % 2 == 0)
    }

    fn prefix_sums(&self, len: usize) -> Vec<usize> {
        let mut acc = 0;
        (0..len)
            .map(|i| {
                acc += self.parts.get(i).copied().unwrap_or(0);
                acc
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// `[(k+1)^l, k^(m-l)]` where `n = m·k + l`, zero parts dropped.
pub fn balanced(n: usize, m: usize) -> Partition {
    assert!(m >= 1, "m must be positive");
    let (k, l) = (n / m, n % m);
    let mut parts = vec![k + 1; l];
    parts.extend(std::iter::repeat_n(k, m - l));
    Partition::new(parts)
}

/// Dominance order: every prefix sum of `a` is at least that of `b`.
pub fn dominates(a: &Partition, b: &Partition) -> Result<bool> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size(), b.size()));
    }
    let n = a.len().max(b.len());
    Ok(a.prefix_sums(n).iter().zip(b.prefix_sums(n)).all(|(x, y)| *x >= y))
}

/// Parity condition of the family, ignoring the total size.
pub fn parity_ok(d: &Partition, family: Family) -> bool {
    let bad_parity = match family {
        Family::A => return true,
        Family::C => 1,
        Family::B | Family::D => 0,
    };
    let mut i = 0;
    while i < d.parts.len() {
        let p = d.parts[i];
        let j = d.parts[i..].iter().take_while(|&&x| x == p).count();
        if p % 2 == bad_parity && j % 2 == 1 {
            return false;
        }
        i += j;
    }
    true
}

/// Whether `d` labels a nilpotent orbit for `g` (size and parity).
pub fn is_valid_for(d: &Partition, g: GroupType) -> bool {
    d.size() == g.partition_size() && parity_ok(d, g.family)
}

/// Multiset union of parts, sorted non-increasingly.
pub fn re_concat<'a>(list: impl IntoIterator<Item = &'a Partition>) -> Partition {
    Partition::new(list.into_iter().flat_map(|p| p.parts.iter().copied()).collect())
}

/// All partitions of `n` in reverse-lexicographic order.
#[derive(Clone, Debug)]
pub struct PartitionIter {
    next: Option<Vec<usize>>,
}

impl PartitionIter {
    pub fn new(n: usize) -> PartitionIter {
        PartitionIter { next: Some(if n == 0 { vec![] } else { vec![n] }) }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        // successor: find the rightmost part > 1, decrement it, and refill
        // the remainder greedily with parts no larger than it
        let mut v = cur.clone();
        let mut rem = 0;
        while let Some(&1) = v.last() {
            v.pop();
            rem += 1;
        }
        if let Some(last) = v.pop() {
            let q = last - 1;
            rem += 1;
            v.push(q);
            while rem > 0 {
                let x = q.min(rem);
                v.push(x);
                rem -= x;
            }
            self.next = Some(v);
        }
        Some(Partition { parts: cur })
    }
}

/// Partitions of `n` satisfying the parity rule of `g`'s family with at most
/// `max_parts` parts, in reverse-lexicographic order.
pub fn enumerate(n: usize, g: GroupType, max_parts: usize, bound: usize) -> Result<Vec<Partition>> {
    if n > bound {
        return Err(Error::BoundExceeded { size: n, bound });
    }
    Ok(PartitionIter::new(n).filter(|d| d.len() <= max_parts && parity_ok(d, g.family)).collect())
}

/// Elements that do not strictly dominate any other element.
pub fn minimal_elements(set: &[Partition]) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for (i, a) in set.iter().enumerate() {
        let mut minimal = true;
        for (j, b) in set.iter().enumerate() {
            if i != j && a != b && dominates(a, b)? {
                minimal = false;
                break;
            }
        }
        if minimal && !out.contains(a) {
            out.push(a.clone());
        }
    }
    Ok(out)
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

    #[test]
    fn balanced_examples() {
        assert_eq!(balanced(7, 3), p(&[3, 2, 2]));
        assert_eq!(balanced(6, 4), p(&[2, 2, 1, 1]));
        assert_eq!(balanced(5, 7), p(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&p(&[3, 1]), &p(&[2, 2])).unwrap());
        assert!(!dominates(&p(&[3, 3]), &p(&[4, 2])).unwrap());
        assert!(dominates(&p(&[2, 2]), &p(&[2, 2])).unwrap());
        assert_eq!(dominates(&p(&[2]), &p(&[1])), Err(Error::SizeMismatch(2, 1)));
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid_for(&p(&[2, 1, 1]), g(Family::C, 2)));
        assert!(!is_valid_for(&p(&[2, 1, 1]), g(Family::D, 2)));
        assert!(is_valid_for(&p(&[5]), g(Family::B, 2)));
    }

    #[test]
    fn re_concat_examples() {
        assert_eq!(re_concat(&[p(&[2]), p(&[1, 1])]), p(&[2, 1, 1]));
        assert_eq!(re_concat(&[p(&[3]), p(&[3])]), p(&[3, 3]));
        assert_eq!(re_concat(&[p(&[]), p(&[4])]), p(&[4]));
    }

    #[test]
    fn enumerate_examples() {
        let d = enumerate(4, g(Family::D, 2), usize::MAX, 30).unwrap();
        assert_eq!(d, vec![p(&[3, 1]), p(&[2, 2]), p(&[1, 1, 1, 1])]);
        let a = enumerate(3, g(Family::A, 3), usize::MAX, 30).unwrap();
        assert_eq!(a, vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        let b = enumerate(5, g(Family::B, 2), usize::MAX, 30).unwrap();
        assert_eq!(b, vec![p(&[5]), p(&[3, 1, 1]), p(&[2, 2, 1]), p(&[1, 1, 1, 1, 1])]);
        assert!(matches!(enumerate(31, g(Family::A, 31), 40, 30), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn minimal_examples() {
        assert_eq!(minimal_elements(&[p(&[3, 1]), p(&[2, 2]), p(&[4])]).unwrap(), vec![p(&[2, 2])]);
        let both = minimal_elements(&[p(&[3, 1, 1]), p(&[2, 2, 2])]);
        assert!(both.is_err());
        let both = minimal_elements(&[p(&[3, 1, 1, 1]), p(&[2, 2, 2])]).unwrap();
        assert_eq!(both.len(), 2);
        assert_eq!(minimal_elements(&[p(&[2, 2])]).unwrap(), vec![p(&[2, 2])]);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|n| PartitionIter::new(n).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }
}
