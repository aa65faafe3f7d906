//! Total functions on `{1, …, n}` in one-line notation.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest supported ground set; subsets are stored as `u32` bit masks.
pub const MAX_N: usize = 32;

/// A function `f: {1..n} -> {1..n}`.
///
/// Images are held 0-based internally; every public constructor and accessor
/// speaks 1-based labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Vec<u8>,
}

/// Preimage blocks of a transformation, 1-based, each block sorted and the
/// blocks ordered by their least element.
pub type Partition = Vec<Vec<usize>>;

impl Transformation {
    /// Builds `f` from `[f(1), …, f(n)]`.
    pub fn from_oneline(images: &[usize], n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::UnsupportedSize(n));
        }
        if images.len() != n {
            return Err(Error::LengthMismatch { expected: n, actual: images.len() });
        }
        let mut out = Vec::with_capacity(n);
        for (i, &v) in images.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::OutOfRange { position: i + 1, value: v, n });
            }
            out.push((v - 1) as u8);
        }
        Ok(Self { images: out })
    }

    /// Parses a digit string such as `"2344"`; only for `n ≤ 9`.
    pub fn from_digits(s: &str) -> Result<Self> {
        let images: Vec<usize> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_digit(10).map(|d| d as usize).unwrap_or(usize::MAX))
            .collect();
        if let Some(pos) = images.iter().position(|&v| v == usize::MAX) {
            return Err(Error::OutOfRange { position: pos + 1, value: 0, n: images.len() });
        }
        Self::from_oneline(&images, images.len())
    }

    pub(crate) fn from_zero_based(images: Vec<u8>) -> Self {
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n as u8).collect() }
    }

    pub fn constant(n: usize, value: usize) -> Self {
        Self { images: vec![(value - 1) as u8; n] }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `f(i)` for a 1-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub(crate) fn apply0(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// One-line notation, 1-based.
    pub fn oneline(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    /// Image of a bit mask of points (bit `i` is point `i + 1`).
    pub(crate) fn image_mask(&self, mask: u32) -> u32 {
        let mut out = 0u32;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out |= 1 << self.images[i];
            m &= m - 1;
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.image_set().len()
    }

    pub fn image_set(&self) -> BTreeSet<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    /// Image as a sorted list.
    pub fn image(&self) -> Vec<usize> {
        self.image_set().into_iter().collect()
    }

    pub fn partition(&self) -> Partition {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            let v = v as usize;
            if slot[v] == usize::MAX {
                slot[v] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[v]].push(i + 1);
        }
        // first-seen order is already ordered by least element
        blocks
    }

    pub fn is_idempotent(&self) -> bool {
        self.images.iter().all(|&v| self.images[v as usize] == v)
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.n()
    }

    /// Points `i` with `f(i) = i`.
    pub fn fixed_points(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.apply(i) == i).collect()
    }

    /// 0/1 matrix with `F[i][f(i)] = 1`.
    pub fn matrix(&self) -> Matrix {
        let n = self.n();
        let mut m = Matrix::zeros(n, n);
        for (i, &v) in self.images.iter().enumerate() {
            m.set(i, v as usize, crate::rational::one());
        }
        m
    }
}

/// `h = g ∘ f`: apply `f` first, then `g`. Matrices multiply in the same
/// order, `H = F·G`.
pub fn compose(f: &Transformation, g: &Transformation) -> Result<Transformation> {
    if f.n() != g.n() {
        return Err(Error::SizeMismatch { left: f.n(), right: g.n() });
    }
    Ok(compose_unchecked(f, g))
}

pub(crate) fn compose_unchecked(f: &Transformation, g: &Transformation) -> Transformation {
    Transformation { images: f.images.iter().map(|&v| g.images[v as usize]).collect() }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() > 9 { "," } else { "" };
        let body: Vec<String> = self.oneline().iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", body.join(sep))
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Every function on `{1..n}`, in lexicographic order of one-line notation.
pub fn all_functions(n: usize) -> impl Iterator<Item = Transformation> {
    let total = (n as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut images = vec![0u8; n];
        for slot in images.iter_mut().rev() {
            *slot = (code % n as u64) as u8;
            code /= n as u64;
        }
        Transformation { images }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Transformation {
        Transformation::from_digits(s).unwrap()
    }

    #[test]
    fn oneline_construction() {
        let f = Transformation::from_oneline(&[2, 3, 4, 4], 4).unwrap();
        assert_eq!(f.apply(1), 2);
        assert_eq!(f.apply(4), 4);
        assert_eq!(Transformation::from_oneline(&[1, 2, 3], 3).unwrap(), Transformation::identity(3));
        let b = Transformation::from_oneline(&[2, 4, 5, 6, 3, 1], 6).unwrap();
        assert_eq!(b, t("245631"));
        assert_eq!(b.to_string(), "[245631]");
    }

    #[test]
    fn oneline_errors() {
        assert_eq!(Transformation::from_oneline(&[1, 5, 2], 3), Err(Error::OutOfRange { position: 2, value: 5, n: 3 }));
        assert_eq!(Transformation::from_oneline(&[1, 2], 3), Err(Error::LengthMismatch { expected: 3, actual: 2 }));
        assert!(Transformation::from_oneline(&[0, 1], 2).is_err());
    }

    #[test]
    fn composition_applies_left_factor_first() {
        // r then b, evaluated pointwise: r = [451314], b = [245631]
        // 1->4->6, 2->5->3, 3->1->2, 4->3->5, 5->1->2, 6->4->6
        let h = compose(&t("451314"), &t("245631")).unwrap();
        assert_eq!(h, t("632526"));
        let f = t("2344");
        assert_eq!(compose(&Transformation::identity(4), &f).unwrap(), f);
        assert!(compose(&f, &t("123")).is_err());
    }

    #[test]
    fn rank_image_partition() {
        let f = t("2344");
        assert_eq!(f.rank(), 3);
        assert_eq!(f.image(), vec![2, 3, 4]);
        assert_eq!(f.partition(), vec![vec![1], vec![2], vec![3, 4]]);

        let e = t("113434");
        assert!(e.is_idempotent());
        assert_eq!(e.image(), vec![1, 3, 4]);
        assert_eq!(e.partition(), vec![vec![1, 2], vec![3, 5], vec![4, 6]]);

        let id = Transformation::identity(5);
        assert_eq!(id.rank(), 5);
        assert!(id.partition().iter().all(|b| b.len() == 1));
    }

    #[test]
    fn composition_is_associative_on_n3() {
        let all: Vec<_> = all_functions(3).collect();
        assert_eq!(all.len(), 27);
        for f in &all {
            for g in &all {
                let fg = compose(f, g).unwrap();
                assert!(fg.rank() <= f.rank().min(g.rank()));
                for h in &all {
                    assert_eq!(compose(&fg, h).unwrap(), compose(f, &compose(g, h).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn matrix_of_composition_is_product_on_n4() {
        let all: Vec<_> = all_functions(4).collect();
        for f in all.iter().step_by(3) {
            for g in all.iter().step_by(5) {
                let h = compose(f, g).unwrap();
                assert_eq!(h.matrix(), f.matrix().mul(&g.matrix()));
            }
        }
    }
}
