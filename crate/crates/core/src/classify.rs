//! Two-color systems whose kernel has rank `n - 1`: the splitting
//! constructions that produce them from a pair of permutations, and a
//! classifier that recognises the two possible shapes.

use num_traits::{Signed, Zero};

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::fields::{Field, FieldKind};
use crate::hierarchy::inclusion_inverse;
use crate::rational::{self, Rational};
use crate::semigroup::ColorSystem;
use crate::subset::{Layer, SubsetIndex};
use crate::transformation::Transformation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitCase {
    /// The doubleton pair is joined by an edge `2 → 1`.
    A,
    /// No edge inside the doubleton pair; both its vertices are equally likely.
    B,
}

fn check_precursor(r: &Transformation, b: &Transformation) -> Result<()> {
    if r.n() != b.n() {
        return Err(Error::SizeMismatch { left: r.n(), right: b.n() });
    }
    for (i, c) in [r, b].into_iter().enumerate() {
        if !c.is_permutation() {
            return Err(Error::NotPermutation(i + 1));
        }
    }
    Ok(())
}

/// Shift labels up by one and give the new vertex 1 the images of old vertex 1.
fn duplicate_first(c: &Transformation) -> Vec<usize> {
    let shifted: Vec<usize> = c.oneline().iter().map(|v| v + 1).collect();
    std::iter::once(shifted[0]).chain(shifted).collect()
}

fn build(red: Vec<usize>, blue: Vec<usize>) -> Result<ColorSystem> {
    let n = red.len();
    ColorSystem::new(vec![Transformation::from_oneline(&red, n)?, Transformation::from_oneline(&blue, n)?])
}

/// Case a: vertex 1 is the only looped vertex of `r + b`. After duplicating
/// vertex 1 the loop is rewired into the 2-cycle `1 ↔ 2`.
pub fn split_with_loop(r: &Transformation, b: &Transformation) -> Result<ColorSystem> {
    check_precursor(r, b)?;
    let loops: Vec<(usize, usize)> =
        [r, b].iter().enumerate().flat_map(|(c, t)| t.fixed_points().into_iter().map(move |v| (c, v))).collect();
    if !loops.iter().any(|&(_, v)| v == 1) {
        return Err(Error::NoLoopAtVertexOne);
    }
    if loops.len() > 1 {
        return Err(Error::MultipleLoops);
    }
    let mut colors = [duplicate_first(r), duplicate_first(b)];
    colors[loops[0].0][1] = 1;
    let [red, blue] = colors;
    build(red, blue)
}

/// Case b: `r + b` has no loop. After duplicating vertex 1 the first `2` in
/// the blue row becomes a `1`.
pub fn split_no_loop(r: &Transformation, b: &Transformation) -> Result<ColorSystem> {
    check_precursor(r, b)?;
    if !r.fixed_points().is_empty() || !b.fixed_points().is_empty() {
        return Err(Error::HasLoop);
    }
    let red = duplicate_first(r);
    let mut blue = duplicate_first(b);
    let first_two = blue.iter().position(|&v| v == 2).expect("a permutation hits every label");
    blue[first_two] = 1;
    build(red, blue)
}

/// Normalized `π (E^(n-1,1))^{-1}`, the top-level field forced by `π` when
/// the kernel has rank `n - 1`.
pub fn updown_beta(pi: &Field, rank: usize) -> Result<Field> {
    let n = pi.n;
    if n < 2 || rank + 1 != n {
        return Err(Error::RankMismatch { rank, expected: n.saturating_sub(1) });
    }
    let inverse = inclusion_inverse(1, n)?.transpose();
    let raw = inverse.left_apply(&pi.values);
    if raw.iter().any(Signed::is_negative) {
        return Err(Error::RankMismatch { rank, expected: n - 1 });
    }
    Field::from_raw(n - 1, n, FieldKind::Pi, raw)
}

/// Predicted and observed invariants of a rank `n - 1` two-color system, all
/// expressed in the renumbered labels where the doubleton pair is `{1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub case: SplitCase,
    pub n: usize,
    /// `relabel[v - 1]` is the new label of original vertex `v`.
    pub relabel: Vec<usize>,
    /// The doubleton block in original labels, ordered as new `1`, new `2`.
    pub doubleton: [usize; 2],
    pub q: Rational,
    /// Largest in-degree counting parallel edges.
    pub max_in_degree: usize,
    /// Largest number of distinct in-neighbours of a vertex.
    pub max_in_neighbours: usize,
    pub right_group: bool,
    pub predicted_pi: Vec<Rational>,
    pub observed_pi: Vec<Rational>,
    /// Over the `(n-1)`-subsets in dictionary order.
    pub predicted_beta: Vec<Rational>,
    pub observed_beta: Vec<Rational>,
    pub updown_beta: Vec<Rational>,
    pub predicted_ranges: [Vec<usize>; 2],
    pub observed_ranges: Vec<Vec<usize>>,
    pub predicted_u2: Vec<Rational>,
    pub observed_u2: Vec<Rational>,
}

impl ClassificationReport {
    /// Every prediction agrees with the computed structure.
    pub fn is_consistent(&self) -> bool {
        let support: Vec<Vec<usize>> = Layer::new(self.n, self.n - 1)
            .map(|layer| {
                layer
                    .subsets()
                    .zip(&self.observed_beta)
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(s, _)| s.members().to_vec())
                    .collect()
            })
            .unwrap_or_default();
        self.max_in_neighbours <= 3
            && self.right_group
            && self.predicted_pi == self.observed_pi
            && self.predicted_beta == self.observed_beta
            && self.updown_beta == self.observed_beta
            && support == self.predicted_ranges.to_vec()
            && self.predicted_u2 == self.observed_u2
    }
}

fn relabeled(cs: &ColorSystem, relabel: &[usize]) -> Result<ColorSystem> {
    let n = cs.n();
    let mut colors = Vec::with_capacity(cs.d());
    for c in cs.colors() {
        let mut images = vec![0; n];
        for v in 1..=n {
            images[relabel[v - 1] - 1] = relabel[c.apply(v) - 1];
        }
        colors.push(Transformation::from_oneline(&images, n)?);
    }
    ColorSystem::with_weights(colors, cs.weights().to_vec())
}

fn max_in_neighbours(cs: &ColorSystem) -> usize {
    let mut sources = vec![std::collections::BTreeSet::new(); cs.n()];
    for c in cs.colors() {
        for v in 1..=cs.n() {
            sources[c.apply(v) - 1].insert(v);
        }
    }
    sources.iter().map(|s| s.len()).max().unwrap_or(0)
}

fn in_degrees(cs: &ColorSystem) -> Vec<usize> {
    let mut deg = vec![0; cs.n()];
    for c in cs.colors() {
        for v in 1..=cs.n() {
            deg[c.apply(v) - 1] += 1;
        }
    }
    deg
}

/// Classifies a two-color system whose kernel has rank `n - 1`.
pub fn classify_rank_n_minus_1(cs: &ColorSystem) -> Result<ClassificationReport> {
    if cs.d() != 2 {
        return Err(Error::ColorCount { expected: 2, actual: cs.d() });
    }
    let n = cs.n();
    let original = Analysis::new(cs.clone())?;
    if original.rank() + 1 != n {
        return Err(Error::NotRankNMinusOne { rank: original.rank(), expected: n - 1 });
    }
    let doubleton = original.kernel.partitions()[0]
        .iter()
        .find(|block| block.len() == 2)
        .cloned()
        .ok_or(Error::NotRankNMinusOne { rank: original.rank(), expected: n - 1 })?;
    let (a, b) = (doubleton[0], doubleton[1]);
    let edge = |from: usize, to: usize| cs.colors().iter().any(|c| c.apply(from) == to);
    let degrees = in_degrees(cs);
    let case = if edge(a, b) || edge(b, a) { SplitCase::A } else { SplitCase::B };
    let (first, second) = if degrees[b - 1] < degrees[a - 1] { (b, a) } else { (a, b) };

    let mut relabel = vec![0; n];
    relabel[first - 1] = 1;
    relabel[second - 1] = 2;
    let mut next = 3;
    for v in 1..=n {
        if v != first && v != second {
            relabel[v - 1] = next;
            next += 1;
        }
    }
    let renamed = Analysis::new(relabeled(cs, &relabel)?)?;

    let share = rational::ratio(1, n as i64 - 1);
    let q = match case {
        SplitCase::A => rational::ratio(2, 3) * &share,
        SplitCase::B => rational::ratio(1, 2) * &share,
    };
    let mut predicted_pi = vec![share.clone(); n];
    predicted_pi[0] = &share - &q;
    predicted_pi[1] = q.clone();

    let tops = Layer::new(n, n - 1)?;
    let mut predicted_beta = vec![Rational::zero(); tops.len()];
    let total = &share;
    predicted_beta[tops.len() - 2] = (&share - &q) / total;
    predicted_beta[tops.len() - 1] = &q / total;
    let predicted_ranges = [std::iter::once(1).chain(3..=n).collect::<Vec<_>>(), (2..=n).collect::<Vec<_>>()];

    let mut observed_beta = vec![Rational::zero(); tops.len()];
    for (y, range) in renamed.kernel.ranges().iter().enumerate() {
        let pos = SubsetIndex::new(n, range)?.position();
        observed_beta[pos - 1] = renamed.factorization.beta[y].clone();
    }

    let pi = renamed.stationary()?;
    let mut predicted_u2 = vec![rational::one(); n * (n - 1) / 2];
    predicted_u2[0] = Rational::zero();

    Ok(ClassificationReport {
        case,
        n,
        relabel,
        doubleton: [first, second],
        q,
        max_in_degree: degrees.into_iter().max().unwrap_or(0),
        max_in_neighbours: max_in_neighbours(cs),
        right_group: renamed.kernel.structural_right_group(),
        updown_beta: updown_beta(&pi, renamed.rank())?.values,
        observed_pi: pi.values,
        predicted_pi,
        predicted_beta,
        observed_beta,
        predicted_ranges,
        observed_ranges: renamed.kernel.ranges().to_vec(),
        observed_u2: renamed.u2()?.values,
        predicted_u2,
    })
}
