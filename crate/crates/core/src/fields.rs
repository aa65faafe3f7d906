//! Stationary distribution, the `π_ℓ` and `u_ℓ` fields with their descent
//! hierarchies, and the consequences of Friedman's theorem: block masses,
//! rank detection and the right-group test.

use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hierarchy::{inclusion_operator, weighted_inclusion};
use crate::kernel::KernelStructure;
use crate::matrix::Matrix;
use crate::projection::ProjectionMatrix;
use crate::rational::{self, Rational};
use crate::semigroup::ColorSystem;
use crate::subset::{binomial, Layer};
use crate::transformation::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// Row vector, normalized to total mass one.
    Pi,
    /// Column vector, scaled so the largest entry is one.
    U,
}

/// A vector over the `ℓ`-subsets, kept both as computed (`raw`) and under
/// the normalization of its kind (`values`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub level: usize,
    pub n: usize,
    pub kind: FieldKind,
    pub raw: Vec<Rational>,
    pub values: Vec<Rational>,
}

impl Field {
    pub fn from_raw(level: usize, n: usize, kind: FieldKind, raw: Vec<Rational>) -> Result<Self> {
        let expected = binomial(n, level);
        if raw.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: raw.len() });
        }
        let scale = match kind {
            FieldKind::Pi => rational::sum(&raw),
            FieldKind::U => raw.iter().max().cloned().unwrap_or_else(Rational::zero),
        };
        let values = if scale.is_zero() { raw.clone() } else { raw.iter().map(|v| v / &scale).collect() };
        Ok(Self { level, n, kind, raw, values })
    }
}

fn reachable(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Period of a strongly connected digraph: the gcd of `dist(u) + 1 - dist(v)`
/// over all edges `u → v`, with breadth-first distances from one vertex.
fn period(adj: &[Vec<usize>], dist: &[Option<usize>]) -> usize {
    let mut g = 0usize;
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            let diff = (dist[u].unwrap() as i64 + 1 - dist[v].unwrap() as i64).unsigned_abs() as usize;
            g = g.gcd(&diff);
        }
    }
    g
}

/// Checks irreducibility and aperiodicity of the color digraph.
pub fn check_ergodic(cs: &ColorSystem) -> Result<()> {
    let forward = cs.successors();
    let mut backward = vec![Vec::new(); cs.n()];
    for (u, succ) in forward.iter().enumerate() {
        for &v in succ {
            backward[v].push(u);
        }
    }
    let dist = reachable(&forward, 0);
    if dist.iter().any(Option::is_none) || reachable(&backward, 0).iter().any(Option::is_none) {
        return Err(Error::NotIrreducible);
    }
    match period(&forward, &dist) {
        1 => Ok(()),
        p => Err(Error::NotAperiodic { period: p }),
    }
}

/// The invariant distribution `π` of the averaged color matrix.
pub fn stationary(cs: &ColorSystem) -> Result<Field> {
    check_ergodic(cs)?;
    let n = cs.n();
    let a = cs.adjacency();
    let mut m = Matrix::zeros(n + 1, n);
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { Rational::one() } else { Rational::zero() };
            // row i of (A^T - I)
            m.set(i, j, a.get(j, i) - id);
        }
        m.set(n, i, Rational::one());
    }
    let mut rhs = vec![Rational::zero(); n + 1];
    rhs[n] = Rational::one();
    let pi = m.solve_unique(&rhs)?;
    Field::from_raw(1, n, FieldKind::Pi, pi)
}

fn check_field_level(omega: &ProjectionMatrix, n: usize, rank: usize) -> Result<()> {
    if omega.level == 0 || omega.level > rank {
        return Err(Error::LevelOutOfRange { level: omega.level, n });
    }
    Ok(())
}

/// `π_ℓ = 1 · Ω_ℓ`, the column sums of the level projection.
pub fn pi_field(omega: &ProjectionMatrix, n: usize, rank: usize) -> Result<Field> {
    check_field_level(omega, n, rank)?;
    Field::from_raw(omega.level, n, FieldKind::Pi, omega.matrix.column_sums())
}

/// `u_ℓ = Ω_ℓ 1`: entry `I` is the `α`-probability that `I` is split by the
/// kernel partition.
pub fn u_field(omega: &ProjectionMatrix, n: usize, rank: usize) -> Result<Field> {
    check_field_level(omega, n, rank)?;
    Field::from_raw(omega.level, n, FieldKind::U, omega.matrix.row_sums())
}

/// `π_ℓ(I) = Σ_{J ⊃ I} π_{ℓ+1}(J)`, applied to the raw vector.
pub fn pi_descend(field: &Field) -> Result<Field> {
    if field.level < 2 {
        return Err(Error::LevelOutOfRange { level: field.level, n: field.n });
    }
    let down = inclusion_operator(field.level, field.level - 1, field.n)?.matrix;
    if down.rows() != field.raw.len() {
        return Err(Error::DimensionMismatch { expected: down.rows(), actual: field.raw.len() });
    }
    Field::from_raw(field.level - 1, field.n, FieldKind::Pi, down.left_apply(&field.raw))
}

/// `u_ℓ(I) = Σ_{i ∉ I} p_i u_{ℓ+1}(I ∪ {i})`, applied to the raw vector.
pub fn u_descend(field: &Field, pi: &Field) -> Result<Field> {
    if field.level < 2 {
        return Err(Error::LevelOutOfRange { level: field.level, n: field.n });
    }
    if pi.values.len() != field.n {
        return Err(Error::DimensionMismatch { expected: field.n, actual: pi.values.len() });
    }
    let up = weighted_inclusion(&pi.values, field.level - 1, field.level)?.matrix;
    if up.cols() != field.raw.len() {
        return Err(Error::DimensionMismatch { expected: up.cols(), actual: field.raw.len() });
    }
    Field::from_raw(field.level - 1, field.n, FieldKind::U, up.right_apply(&field.raw))
}

/// The factor relating one `u`-descent step to the exact `Ω_ℓ 1`:
/// descending `Ω_{ℓ+1} 1` gives `(r - ℓ)/r · Ω_ℓ 1`.
pub fn u_descent_multiplier(level: usize, rank: usize) -> Rational {
    rational::ratio(rank as i64 - level as i64, rank as i64)
}

/// Symmetric `n × n` matrix of pair-splitting probabilities, zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMatrix {
    pub n: usize,
    pub matrix: Matrix,
}

pub fn split_matrix(u2: &Field) -> Result<SplitMatrix> {
    if u2.level != 2 {
        return Err(Error::LevelOutOfRange { level: u2.level, n: u2.n });
    }
    let n = u2.n;
    let layer = Layer::new(n, 2)?;
    let mut m = Matrix::zeros(n, n);
    for (idx, &mask) in layer.masks().iter().enumerate() {
        let i = mask.trailing_zeros() as usize;
        let j = 31 - mask.leading_zeros() as usize;
        m.set(i, j, u2.values[idx].clone());
        m.set(j, i, u2.values[idx].clone());
    }
    Ok(SplitMatrix { n, matrix: m })
}

/// `⟨K K^T⟩ = J - û₂`: entry `(i, j)` is the probability that `i` and `j`
/// land in one block.
pub fn kk_average(u2: &Field) -> Result<Matrix> {
    let split = split_matrix(u2)?;
    Ok(&Matrix::ones(u2.n, u2.n) - &split.matrix)
}

/// Outcome of rank detection: the rank and the constant witness `π(J - û₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankWitness {
    pub rank: usize,
    pub witness: Vec<Rational>,
}

/// Reads the kernel rank off `π (J - û₂) = (1/r) 1`.
pub fn detect_rank(pi: &Field, u2: &Field) -> Result<RankWitness> {
    if pi.values.len() != u2.n {
        return Err(Error::DimensionMismatch { expected: u2.n, actual: pi.values.len() });
    }
    let witness = kk_average(u2)?.left_apply(&pi.values);
    let c = witness.first().cloned().ok_or(Error::NotConstant)?;
    if witness.iter().any(|v| *v != c) || !c.is_positive() {
        return Err(Error::NotConstant);
    }
    let inv = c.recip();
    if !inv.is_integer() {
        return Err(Error::NotConstant);
    }
    let rank = usize::try_from(inv.to_integer()).map_err(|_| Error::NotConstant)?;
    Ok(RankWitness { rank, witness })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightGroupReport {
    pub is_right_group: bool,
    /// Blocks read off the zero pattern of `u₂`, when it is 0/1 valued.
    pub partition: Option<Partition>,
}

/// The kernel is a right group exactly when `u₂` takes only the values 0
/// and 1; the blocks are then the classes of never-split pairs.
pub fn right_group_test(u2: &Field) -> Result<RightGroupReport> {
    let split = split_matrix(u2)?;
    let zero_one = u2.values.iter().all(|v| v.is_zero() || v.is_one());
    if !zero_one {
        return Ok(RightGroupReport { is_right_group: false, partition: None });
    }
    let n = u2.n;
    let mut block_of = vec![usize::MAX; n];
    let mut blocks: Partition = Vec::new();
    for start in 0..n {
        if block_of[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut members = vec![start];
        block_of[start] = id;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for (w, slot) in block_of.iter_mut().enumerate() {
                if w != v && *slot == usize::MAX && split.matrix.get(v, w).is_zero() {
                    *slot = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        blocks.push(members.into_iter().map(|v| v + 1).collect());
    }
    Ok(RightGroupReport { is_right_group: true, partition: Some(blocks) })
}

/// Violations of `π(B) = 1/r` for kernel blocks and of `πk = (1/r)ρ(k)` for
/// kernel elements. Both lists are empty when the theorem holds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FriedmanReport {
    pub rank: usize,
    /// `(partition index, block)` pairs with the wrong mass.
    pub block_violations: Vec<(usize, Vec<usize>)>,
    /// Kernel positions where `πk ≠ (1/r)ρ(k)`.
    pub element_violations: Vec<usize>,
}

impl FriedmanReport {
    pub fn is_clean(&self) -> bool {
        self.block_violations.is_empty() && self.element_violations.is_empty()
    }
}

pub fn friedman_check(pi: &Field, ks: &KernelStructure) -> Result<FriedmanReport> {
    let n = ks.n();
    if pi.values.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: pi.values.len() });
    }
    let target = rational::ratio(1, ks.rank() as i64);
    let mut report = FriedmanReport { rank: ks.rank(), ..Default::default() };
    for (x, partition) in ks.partitions().iter().enumerate() {
        for block in partition {
            let mass = rational::sum(block.iter().map(|&i| &pi.values[i - 1]));
            if mass != target {
                report.block_violations.push((x, block.clone()));
            }
        }
    }
    for (p, k) in ks.elements().iter().enumerate() {
        let mut pushed = vec![Rational::zero(); n];
        for i in 0..n {
            pushed[k.apply(i + 1) - 1] += &pi.values[i];
        }
        let range = k.image_set();
        let ok = (0..n).all(|j| {
            let expected = if range.contains(&(j + 1)) { target.clone() } else { Rational::zero() };
            pushed[j] == expected
        });
        if !ok {
            report.element_violations.push(p);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, vec_of, vec_over};

    fn thirds(v: &[i64]) -> Vec<Rational> {
        vec_over(v, 3)
    }

    #[test]
    fn stationary_of_six_point_example() {
        let cs = ColorSystem::from_digits(&["451314", "245631"]).unwrap();
        assert_eq!(stationary(&cs).unwrap().values, vec_over(&[6, 3, 5, 6, 4, 3], 27));
        let cs = ColorSystem::from_digits(&["311644", "544123"]).unwrap();
        assert_eq!(stationary(&cs).unwrap().values, vec_over(&[4, 1, 3, 4, 2, 2], 16));
    }

    #[test]
    fn stationary_rejects_bad_chains() {
        let cs = ColorSystem::from_digits(&["2341"]).unwrap();
        assert_eq!(stationary(&cs).unwrap_err(), Error::NotAperiodic { period: 4 });
        let cs = ColorSystem::from_digits(&["1234"]).unwrap();
        assert_eq!(stationary(&cs).unwrap_err(), Error::NotIrreducible);
        let cs = ColorSystem::from_digits(&["2341", "4123"]).unwrap();
        assert_eq!(stationary(&cs).unwrap_err(), Error::NotAperiodic { period: 2 });
        let cs = ColorSystem::from_digits(&["2341", "1234"]).unwrap();
        assert_eq!(stationary(&cs).unwrap().values, vec_over(&[1, 1, 1, 1], 4));
    }

    #[test]
    fn descent_from_unscaled_top_level() {
        let raw = vec_of(&[0, 0, 0, 0, 4, 0, 0, 2, 0, 0, 0, 0, 1, 0, 0, 2, 0, 0, 0, 0]);
        let pi3 = Field::from_raw(3, 6, FieldKind::Pi, raw).unwrap();
        let pi2 = pi_descend(&pi3).unwrap();
        assert_eq!(pi2.raw, vec_of(&[0, 4, 6, 2, 0, 1, 0, 2, 3, 4, 0, 1, 2, 0, 2]));
        let pi1 = pi_descend(&pi2).unwrap();
        assert_eq!(pi1.raw, vec_of(&[12, 6, 10, 12, 8, 6]));
        assert_eq!(pi1.values, vec_over(&[6, 3, 5, 6, 4, 3], 27));

        let u3 =
            Field::from_raw(3, 6, FieldKind::U, vec_of(&[2, 0, 2, 0, 3, 0, 1, 3, 0, 1, 1, 0, 3, 1, 0, 3, 0, 2, 0, 2]))
                .unwrap();
        let u2 = u_descend(&u3, &pi1).unwrap();
        assert_eq!(u2.raw[0], ratio(2, 3));
        assert_eq!(u2.values, thirds(&[2, 3, 3, 3, 1, 3, 1, 3, 3, 3, 0, 3, 3, 2, 3]));
        let u1 = u_descend(&u2, &pi1).unwrap();
        assert_eq!(u1.values, vec_of(&[1; 6]));
        assert_eq!(u1.raw, vec![ratio(2, 3); 6]);
    }

    #[test]
    fn uniform_descent_of_all_ones() {
        let pi = Field::from_raw(1, 5, FieldKind::Pi, vec_of(&[1; 5])).unwrap();
        let top = Field::from_raw(3, 5, FieldKind::U, vec_of(&[1; 10])).unwrap();
        let down = u_descend(&top, &pi).unwrap();
        assert_eq!(down.values, vec_of(&[1; 10]));
    }

    #[test]
    fn right_group_partition_from_zero_pattern() {
        let u2 = Field::from_raw(2, 6, FieldKind::U, vec_of(&[1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0])).unwrap();
        let report = right_group_test(&u2).unwrap();
        assert!(report.is_right_group);
        assert_eq!(report.partition.unwrap(), vec![vec![1], vec![2, 3], vec![4], vec![5, 6]]);
        let pi = Field::from_raw(1, 6, FieldKind::Pi, vec_of(&[4, 1, 3, 4, 2, 2])).unwrap();
        let rank = detect_rank(&pi, &u2).unwrap();
        assert_eq!(rank.rank, 4);
        assert_eq!(rank.witness, vec![ratio(1, 4); 6]);
    }

    #[test]
    fn non_constant_witness_is_an_error() {
        let u2 = Field::from_raw(2, 3, FieldKind::U, vec_of(&[0, 1, 1])).unwrap();
        let pi = Field::from_raw(1, 3, FieldKind::Pi, vec_of(&[1, 1, 1])).unwrap();
        assert_eq!(detect_rank(&pi, &u2).unwrap_err(), Error::NotConstant);
        assert_eq!(kk_average(&u2).unwrap().get(0, 0), &int(1));
    }
}
