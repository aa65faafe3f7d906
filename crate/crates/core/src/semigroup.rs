//! Color systems and breadth-first generation of the semigroup they span.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{self, Rational};
use crate::transformation::{compose_unchecked, Transformation};

pub const DEFAULT_CAP: usize = 200_000;

/// `d` colors on `n` vertices with a probability weight on each color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorSystem {
    n: usize,
    colors: Vec<Transformation>,
    weights: Vec<Rational>,
}

impl ColorSystem {
    /// Uniform weights `1/d`.
    pub fn new(colors: Vec<Transformation>) -> Result<Self> {
        let d = colors.len() as i64;
        let weights = vec![rational::ratio(1, d.max(1)); colors.len()];
        Self::with_weights(colors, weights)
    }

    pub fn with_weights(colors: Vec<Transformation>, weights: Vec<Rational>) -> Result<Self> {
        let Some(first) = colors.first() else {
            return Err(Error::NoColors);
        };
        let n = first.n();
        if let Some(bad) = colors.iter().find(|c| c.n() != n) {
            return Err(Error::SizeMismatch { left: n, right: bad.n() });
        }
        if weights.len() != colors.len() {
            return Err(Error::DimensionMismatch { expected: colors.len(), actual: weights.len() });
        }
        if weights.iter().any(|w| !w.is_positive()) || !rational::sum(&weights).is_one() {
            return Err(Error::InvalidWeights);
        }
        Ok(Self { n, colors, weights })
    }

    /// Convenience constructor from digit strings such as `"451314"`.
    pub fn from_digits(colors: &[&str]) -> Result<Self> {
        let colors = colors.iter().map(|s| Transformation::from_digits(s)).collect::<Result<_>>()?;
        Self::new(colors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[Transformation] {
        &self.colors
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `A = Σ w_i C_i`, a stochastic matrix.
    pub fn adjacency(&self) -> Matrix {
        let mut a = Matrix::zeros(self.n, self.n);
        for (c, w) in self.colors.iter().zip(&self.weights) {
            for i in 0..self.n {
                let j = c.apply0(i);
                let v = a.get(i, j) + w;
                a.set(i, j, v);
            }
        }
        a
    }

    /// Out-neighbour lists of the underlying digraph, 0-based.
    pub(crate) fn successors(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| self.colors.iter().map(|c| c.apply0(i)).collect()).collect()
    }
}

/// The finite semigroup `S(C_1, …, C_d)`.
///
/// Elements are numbered in breadth-first discovery order from the
/// generators, extending words on the right with generator index as the
/// tie-break, so every element carries one shortest word.
#[derive(Debug, Clone)]
pub struct SemigroupTable {
    n: usize,
    elements: Vec<Transformation>,
    index: HashMap<Transformation, usize>,
    words: Vec<Vec<usize>>,
    generators: Vec<usize>,
    right: Vec<Vec<usize>>,
}

/// Breadth-first closure of the colors under composition.
pub fn generate_semigroup(cs: &ColorSystem, cap: usize) -> Result<SemigroupTable> {
    let mut elements: Vec<Transformation> = Vec::new();
    let mut index: HashMap<Transformation, usize> = HashMap::new();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut generators = Vec::with_capacity(cs.d());
    let mut queue = VecDeque::new();

    for (g, c) in cs.colors().iter().enumerate() {
        let id = *index.entry(c.clone()).or_insert_with(|| {
            elements.push(c.clone());
            words.push(vec![g]);
            queue.push_back(elements.len() - 1);
            elements.len() - 1
        });
        generators.push(id);
    }
    if elements.len() > cap {
        return Err(Error::ExplosionGuard { cap });
    }

    let mut right: Vec<Vec<usize>> = Vec::new();
    while let Some(w) = queue.pop_front() {
        let mut row = Vec::with_capacity(cs.d());
        for (g, c) in cs.colors().iter().enumerate() {
            let prod = compose_unchecked(&elements[w], c);
            let id = match index.get(&prod) {
                Some(&id) => id,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::ExplosionGuard { cap });
                    }
                    let id = elements.len();
                    let mut word = words[w].clone();
                    word.push(g);
                    index.insert(prod.clone(), id);
                    elements.push(prod);
                    words.push(word);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        debug_assert_eq!(right.len(), w);
        right.push(row);
    }

    Ok(SemigroupTable { n: cs.n(), elements, index, words, generators, right })
}

impl SemigroupTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Transformation {
        &self.elements[i]
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Shortest word over generator indices (0-based) for element `i`.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    /// Element index of each color, in color order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// `element(i) · color(g)`.
    pub fn right_mul_generator(&self, i: usize, g: usize) -> usize {
        self.right[i][g]
    }

    /// Index of `element(i) · element(j)` (apply `i` first).
    pub fn product(&self, i: usize, j: usize) -> usize {
        let p = compose_unchecked(&self.elements[i], &self.elements[j]);
        self.index[&p]
    }

    /// Checks that every pairwise product lies in the table. Quadratic.
    pub fn verify_closure(&self) -> bool {
        self.elements.iter().all(|a| self.elements.iter().all(|b| self.index.contains_key(&compose_unchecked(a, b))))
    }

    pub fn min_rank(&self) -> usize {
        self.elements.iter().map(Transformation::rank).min().unwrap_or(0)
    }
}

/// Whether every row of `a` sums to one and every entry is nonnegative.
pub fn is_stochastic(a: &Matrix) -> bool {
    a.entries().iter().all(|v| !v.is_negative()) && a.row_sums().iter().all(One::is_one)
}
