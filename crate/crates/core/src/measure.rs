//! Probability measures on a generated semigroup, convolution, the limit
//! measure of the random walk and its `α × Haar × β` factorization.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::KernelStructure;
use crate::matrix::Matrix;
use crate::rational::{self, Rational};
use crate::semigroup::{ColorSystem, SemigroupTable};
use crate::transformation::compose_unchecked;

/// A measure stored densely over the elements of a [`SemigroupTable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureOnSemigroup {
    weights: Vec<Rational>,
}

impl MeasureOnSemigroup {
    /// Validates nonnegativity and total mass one.
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(Signed::is_negative) || !rational::sum(&weights).is_one() {
            return Err(Error::InvalidWeights);
        }
        Ok(Self { weights })
    }

    pub fn point_mass(len: usize, at: usize) -> Self {
        let mut weights = vec![Rational::zero(); len];
        weights[at] = Rational::one();
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Element indices carrying positive weight, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| !self.weights[i].is_zero()).collect()
    }

    pub fn total_mass(&self) -> Rational {
        rational::sum(&self.weights)
    }

    /// Largest absolute weight difference, as a float.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.weights.iter().zip(&other.weights).map(|(a, b)| rational::to_f64(&(a - b).abs())).fold(0.0, f64::max)
    }
}

/// The step distribution of the walk: weight `w_i` on color `i`.
pub fn generator_measure(cs: &ColorSystem, st: &SemigroupTable) -> MeasureOnSemigroup {
    let mut weights = vec![Rational::zero(); st.len()];
    for (&g, w) in st.generators().iter().zip(cs.weights()) {
        weights[g] += w;
    }
    MeasureOnSemigroup { weights }
}

/// `(μ₁ * μ₂)(w) = Σ_{w₁w₂ = w} μ₁(w₁) μ₂(w₂)`.
pub fn convolve(a: &MeasureOnSemigroup, b: &MeasureOnSemigroup, st: &SemigroupTable) -> Result<MeasureOnSemigroup> {
    if a.len() != st.len() || b.len() != st.len() {
        return Err(Error::DimensionMismatch { expected: st.len(), actual: a.len().min(b.len()) });
    }
    let mut weights = vec![Rational::zero(); st.len()];
    let right = b.support();
    for i in a.support() {
        for &j in &right {
            weights[st.product(i, j)] += &a.weights[i] * &b.weights[j];
        }
    }
    Ok(MeasureOnSemigroup { weights })
}

/// `μ^(m)` for `m ≥ 1`, by repeated right steps.
pub fn convolution_power(cs: &ColorSystem, st: &SemigroupTable, m: usize) -> MeasureOnSemigroup {
    let mut cur = generator_measure(cs, st);
    for _ in 1..m {
        cur = step(&cur, cs, st);
    }
    cur
}

fn step(mu: &MeasureOnSemigroup, cs: &ColorSystem, st: &SemigroupTable) -> MeasureOnSemigroup {
    let mut next = vec![Rational::zero(); st.len()];
    for i in mu.support() {
        for (g, w) in cs.weights().iter().enumerate() {
            next[st.right_mul_generator(i, g)] += &mu.weights[i] * w;
        }
    }
    MeasureOnSemigroup { weights: next }
}

/// Stationary distribution of a finite chain given by `(from, to, weight)`
/// edges; errors unless it is unique.
fn unique_stationary(size: usize, edges: &[(usize, usize, Rational)]) -> Result<Vec<Rational>> {
    // rows: (P^T - I) π = 0 and Σ π = 1
    let mut m = Matrix::zeros(size + 1, size);
    for i in 0..size {
        m.set(i, i, -Rational::one());
    }
    for (from, to, w) in edges {
        let v = m.get(*to, *from) + w;
        m.set(*to, *from, v);
    }
    for j in 0..size {
        m.set(size, j, Rational::one());
    }
    let mut rhs = vec![Rational::zero(); size + 1];
    rhs[size] = Rational::one();
    m.solve_unique(&rhs)
}

/// The limit measure `λ` of the Cesàro averages of `μ^(m)`.
///
/// The partition marginal `α` is the unique stationary law of the chain
/// `x ↦ partition(c · k)` and the range marginal `β` that of
/// `y ↦ range(k · c)`; `λ(k) = α(x)β(y)/|G|` on the kernel. The result is
/// then checked exactly against `λ = μ*λ = λ*μ`.
pub fn limit_measure_exact(cs: &ColorSystem, st: &SemigroupTable, ks: &KernelStructure) -> Result<MeasureOnSemigroup> {
    let (alpha, beta) = marginal_chains(cs, ks)?;
    let order = Rational::from_integer(BigInt::from(ks.group_order()));
    let mut weights = vec![Rational::zero(); st.len()];
    for p in 0..ks.len() {
        let (x, y) = ks.cell_of(p);
        weights[ks.table_index(p)] = &alpha[x] * &beta[y] / &order;
    }
    let lambda = MeasureOnSemigroup { weights };
    if !is_bi_invariant(&lambda, cs, st, ks) {
        return Err(Error::SingularSystem);
    }
    Ok(lambda)
}

fn marginal_chains(cs: &ColorSystem, ks: &KernelStructure) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let mut left_edges = Vec::new();
    let mut right_edges = Vec::new();
    for (x, _) in ks.partitions().iter().enumerate() {
        let k = ks.x_idempotent(x);
        for (c, w) in cs.colors().iter().zip(cs.weights()) {
            let to = ks.cell_of(position(ks, &compose_unchecked(c, k))?).0;
            left_edges.push((x, to, w.clone()));
        }
    }
    for (y, _) in ks.ranges().iter().enumerate() {
        let k = ks.y_idempotent(y);
        for (c, w) in cs.colors().iter().zip(cs.weights()) {
            let to = ks.cell_of(position(ks, &compose_unchecked(k, c))?).1;
            right_edges.push((y, to, w.clone()));
        }
    }
    let alpha = unique_stationary(ks.partitions().len(), &left_edges)?;
    let beta = unique_stationary(ks.ranges().len(), &right_edges)?;
    Ok((alpha, beta))
}

fn position(ks: &KernelStructure, t: &crate::transformation::Transformation) -> Result<usize> {
    ks.position(t).ok_or(Error::NotInKernel)
}

/// Exact check of `λ = μ*λ` and `λ = λ*μ` with `μ` the generator measure.
pub fn is_bi_invariant(
    lambda: &MeasureOnSemigroup,
    cs: &ColorSystem,
    st: &SemigroupTable,
    ks: &KernelStructure,
) -> bool {
    let mut left = vec![Rational::zero(); st.len()];
    let mut right = vec![Rational::zero(); st.len()];
    for p in 0..ks.len() {
        let i = ks.table_index(p);
        let v = &lambda.weights[i];
        if v.is_zero() {
            continue;
        }
        for (g, w) in cs.weights().iter().enumerate() {
            let c = st.generators()[g];
            left[st.product(c, i)] += v * w;
            right[st.right_mul_generator(i, g)] += v * w;
        }
    }
    left == lambda.weights && right == lambda.weights
}

/// Solves `{λ = μ*λ, λ = λ*μ, Σλ = 1}` directly over all kernel elements.
/// Dense and cubic in `|K|`; intended as an independent check on small
/// kernels.
pub fn limit_measure_direct(cs: &ColorSystem, st: &SemigroupTable, ks: &KernelStructure) -> Result<MeasureOnSemigroup> {
    let size = ks.len();
    let mut m = Matrix::zeros(2 * size + 1, size);
    for p in 0..size {
        m.set(p, p, -Rational::one());
        m.set(size + p, p, -Rational::one());
        m.set(2 * size, p, Rational::one());
    }
    for (p, k) in ks.elements().iter().enumerate() {
        for (c, w) in cs.colors().iter().zip(cs.weights()) {
            let left = position(ks, &compose_unchecked(c, k))?;
            let right = position(ks, &compose_unchecked(k, c))?;
            let v = m.get(left, p) + w;
            m.set(left, p, v);
            let v = m.get(size + right, p) + w;
            m.set(size + right, p, v);
        }
    }
    let mut rhs = vec![Rational::zero(); 2 * size + 1];
    rhs[2 * size] = Rational::one();
    let solution = m.solve_unique(&rhs)?;
    let mut weights = vec![Rational::zero(); st.len()];
    for (p, v) in solution.into_iter().enumerate() {
        weights[ks.table_index(p)] = v;
    }
    Ok(MeasureOnSemigroup { weights })
}

/// `α` over partitions, `β` over ranges and the order of the local groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitFactorization {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub group_order: usize,
}

/// Marginals of `λ` with exact product-form and within-cell uniformity
/// checks.
pub fn factorize_lambda(lambda: &MeasureOnSemigroup, ks: &KernelStructure) -> Result<LimitFactorization> {
    let kernel_mass = rational::sum((0..ks.len()).map(|p| lambda.weight(ks.table_index(p))));
    if !kernel_mass.is_one() {
        return Err(Error::NotInKernel);
    }
    let mut alpha = vec![Rational::zero(); ks.partitions().len()];
    let mut beta = vec![Rational::zero(); ks.ranges().len()];
    for p in 0..ks.len() {
        let (x, y) = ks.cell_of(p);
        let v = lambda.weight(ks.table_index(p));
        alpha[x] += v;
        beta[y] += v;
    }
    let order = Rational::from_integer(BigInt::from(ks.group_order()));
    for p in 0..ks.len() {
        let (x, y) = ks.cell_of(p);
        if *lambda.weight(ks.table_index(p)) != &alpha[x] * &beta[y] / &order {
            return Err(Error::NotProductForm { element: ks.table_index(p) });
        }
    }
    Ok(LimitFactorization { alpha, beta, group_order: ks.group_order() })
}

/// Exact running Cesàro averages `(1/N) Σ_{m ≤ N} μ^(m)`.
///
/// All arithmetic is carried on integers scaled by `D^m`, where `D` is the
/// common denominator of the color weights; an average is only turned into
/// rationals when requested.
pub struct CesaroAverager<'a> {
    st: &'a SemigroupTable,
    numerators: Vec<BigInt>,
    denominator: BigInt,
    current: Vec<BigInt>,
    total: Vec<BigInt>,
    steps: usize,
}

impl<'a> CesaroAverager<'a> {
    pub fn new(cs: &ColorSystem, st: &'a SemigroupTable) -> Self {
        let denominator = cs.weights().iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let numerators = cs.weights().iter().map(|w| w.numer() * (&denominator / w.denom())).collect();
        let mut current = vec![BigInt::zero(); st.len()];
        for (&g, a) in st.generators().iter().zip(&numerators) {
            current[g] += a;
        }
        let total = current.clone();
        Self { st, numerators, denominator, current, total, steps: 1 }
    }

    /// Number of terms accumulated so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn advance(&mut self) {
        let mut next = vec![BigInt::zero(); self.st.len()];
        for (i, v) in self.current.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (g, a) in self.numerators.iter().enumerate() {
                next[self.st.right_mul_generator(i, g)] += v * a;
            }
        }
        for t in &mut self.total {
            *t *= &self.denominator;
        }
        for (t, c) in self.total.iter_mut().zip(&next) {
            *t += c;
        }
        self.current = next;
        self.steps += 1;
    }

    pub fn average(&self) -> MeasureOnSemigroup {
        let scale = BigInt::from(self.steps) * num_traits::pow(self.denominator.clone(), self.steps);
        let weights = self.total.iter().map(|t| Rational::new(t.clone(), scale.clone())).collect();
        MeasureOnSemigroup { weights }
    }
}

/// `(1/N) Σ_{m=1..N} μ^(m)`.
pub fn cesaro_partial(cs: &ColorSystem, st: &SemigroupTable, steps: usize) -> Result<MeasureOnSemigroup> {
    if steps == 0 {
        return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
    }
    let mut avg = CesaroAverager::new(cs, st);
    while avg.steps() < steps {
        avg.advance();
    }
    Ok(avg.average())
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroCheckpoint {
    pub steps: usize,
    pub sup_distance: f64,
    pub non_kernel_mass: Rational,
}

/// Sup-norm distance to `limit` and mass off the kernel at each requested
/// number of steps (ascending).
pub fn cesaro_table(
    cs: &ColorSystem,
    st: &SemigroupTable,
    ks: &KernelStructure,
    limit: &MeasureOnSemigroup,
    checkpoints: &[usize],
) -> Vec<CesaroCheckpoint> {
    let in_kernel: HashMap<usize, ()> = (0..ks.len()).map(|p| (ks.table_index(p), ())).collect();
    let mut avg = CesaroAverager::new(cs, st);
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        while avg.steps() < n.max(1) {
            avg.advance();
        }
        let m = avg.average();
        let non_kernel_mass =
            rational::sum(m.weights().iter().enumerate().filter(|(i, _)| !in_kernel.contains_key(i)).map(|(_, v)| v));
        rows.push(CesaroCheckpoint { steps: avg.steps(), sup_distance: m.sup_distance(limit), non_kernel_mass });
    }
    rows
}

/// First `N` at which the Cesàro average is within `tolerance` of `limit`
/// in sup norm, searching up to `max_steps`.
pub fn cesaro_crossing(
    cs: &ColorSystem,
    st: &SemigroupTable,
    limit: &MeasureOnSemigroup,
    tolerance: f64,
    max_steps: usize,
) -> Option<usize> {
    let mut avg = CesaroAverager::new(cs, st);
    loop {
        if avg.average().sup_distance(limit) <= tolerance {
            return Some(avg.steps());
        }
        if avg.steps() >= max_steps {
            return None;
        }
        avg.advance();
    }
}
