//! `ℓ`-subsets of `{1..n}` in dictionary order.

use std::fmt;

use crate::error::{Error, Result};
use crate::transformation::MAX_N;

/// An `ℓ`-subset of `{1..n}`; `members` is strictly increasing and 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    n: usize,
    members: Vec<usize>,
}

impl SubsetIndex {
    pub fn new(n: usize, members: &[usize]) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::UnsupportedSize(n));
        }
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != members.len() {
            return Err(Error::DimensionMismatch { expected: members.len(), actual: sorted.len() });
        }
        if let Some(&bad) = sorted.iter().find(|&&m| m == 0 || m > n) {
            let position = members.iter().position(|&m| m == bad).unwrap() + 1;
            return Err(Error::OutOfRange { position, value: bad, n });
        }
        Ok(Self { n, members: sorted })
    }

    pub(crate) fn from_mask(n: usize, mask: u32) -> Self {
        Self { n, members: mask_members(mask) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// 1-based position in dictionary order within its level.
    pub fn position(&self) -> usize {
        subset_position(self)
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// 1-based dictionary-order position of `subset`.
pub fn subset_position(subset: &SubsetIndex) -> usize {
    position_of_members(subset.n, &subset.members)
}

fn position_of_members(n: usize, members: &[usize]) -> usize {
    let level = members.len();
    let mut pos = 0;
    let mut prev = 0;
    for (i, &c) in members.iter().enumerate() {
        // count subsets whose i-th member is smaller than c, given the prefix
        for j in prev + 1..c {
            pos += binomial(n - j, level - i - 1);
        }
        prev = c;
    }
    pos + 1
}

/// Inverse of [`subset_position`].
pub fn subset_unrank(position: usize, n: usize, level: usize) -> Result<SubsetIndex> {
    if level > n {
        return Err(Error::LevelOutOfRange { level, n });
    }
    let count = binomial(n, level);
    if position == 0 || position > count {
        return Err(Error::PositionOutOfRange { position, count });
    }
    let mut rest = position - 1;
    let mut members = Vec::with_capacity(level);
    let mut next = 1;
    for i in 0..level {
        loop {
            let block = binomial(n - next, level - i - 1);
            if rest < block {
                break;
            }
            rest -= block;
            next += 1;
        }
        members.push(next);
        next += 1;
    }
    Ok(SubsetIndex { n, members })
}

pub(crate) fn mask_members(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

/// The subsets of one level, with a mask → position lookup.
#[derive(Debug, Clone)]
pub struct Layer {
    n: usize,
    level: usize,
    masks: Vec<u32>,
    index: std::collections::HashMap<u32, usize>,
}

impl Layer {
    pub fn new(n: usize, level: usize) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::UnsupportedSize(n));
        }
        if level > n {
            return Err(Error::LevelOutOfRange { level, n });
        }
        let masks: Vec<u32> =
            itertools::Itertools::combinations(0..n, level).map(|c| c.iter().fold(0u32, |m, &i| m | 1 << i)).collect();
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(Self { n, level, masks, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub(crate) fn masks(&self) -> &[u32] {
        &self.masks
    }

    /// 0-based row index of a mask in this layer.
    pub(crate) fn index_of(&self, mask: u32) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn subset(&self, idx: usize) -> SubsetIndex {
        SubsetIndex::from_mask(self.n, self.masks[idx])
    }

    pub fn subsets(&self) -> impl Iterator<Item = SubsetIndex> + '_ {
        self.masks.iter().map(move |&m| SubsetIndex::from_mask(self.n, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_two_listing_for_six_points() {
        let listing = [
            [1, 2],
            [1, 3],
            [1, 4],
            [1, 5],
            [1, 6],
            [2, 3],
            [2, 4],
            [2, 5],
            [2, 6],
            [3, 4],
            [3, 5],
            [3, 6],
            [4, 5],
            [4, 6],
            [5, 6],
        ];
        for (i, pair) in listing.iter().enumerate() {
            let s = SubsetIndex::new(6, pair).unwrap();
            assert_eq!(s.position(), i + 1);
        }
        assert_eq!(SubsetIndex::new(6, &[2, 6]).unwrap().position(), 9);
    }

    #[test]
    fn four_subset_position_by_enumeration() {
        let target = SubsetIndex::new(6, &[1, 3, 4, 6]).unwrap();
        let enumerated =
            itertools::Itertools::combinations(1..=6usize, 4).position(|c| c == target.members()).unwrap() + 1;
        assert_eq!(enumerated, 8);
        assert_eq!(target.position(), 8);
    }

    #[test]
    fn round_trip_exhaustive_up_to_eight() {
        for n in 0..=8 {
            for level in 0..=n {
                let layer = Layer::new(n, level).unwrap();
                assert_eq!(layer.len(), binomial(n, level));
                for (i, s) in layer.subsets().enumerate() {
                    assert_eq!(s.position(), i + 1);
                    assert_eq!(subset_unrank(i + 1, n, level).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn unrank_errors() {
        assert_eq!(subset_unrank(16, 6, 2), Err(Error::PositionOutOfRange { position: 16, count: 15 }));
        assert!(subset_unrank(0, 6, 2).is_err());
        assert!(subset_unrank(1, 3, 4).is_err());
        assert!(SubsetIndex::new(4, &[1, 5]).is_err());
        assert!(SubsetIndex::new(4, &[2, 2]).is_err());
    }
}
