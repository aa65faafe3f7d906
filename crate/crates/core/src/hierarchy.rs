//! Induced action of functions on `ℓ`-subsets, inclusion and exclusion
//! operators between levels, and descent of left eigenvectors.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{self, Rational};
use crate::subset::{binomial, Layer, SubsetIndex};
use crate::transformation::{compose, Transformation};

/// Induced matrix of a function on one level.
///
/// When `augmented` is set, one extra row and column for the collapsed state
/// is appended last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMatrix {
    pub n: usize,
    pub level: usize,
    pub augmented: bool,
    pub matrix: Matrix,
}

impl LevelMatrix {
    /// Index of the collapsed state, when present.
    pub fn collapsed_index(&self) -> Option<usize> {
        self.augmented.then(|| self.matrix.rows() - 1)
    }
}

/// `E^(from,to)`, `Ē^(from,to)` or a weighted inclusion, rows indexed by
/// `from`-subsets and columns by `to`-subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionOperator {
    pub n: usize,
    pub from: usize,
    pub to: usize,
    pub matrix: Matrix,
}

fn check_level(n: usize, level: usize, min: usize) -> Result<()> {
    if level < min || level > n {
        return Err(Error::LevelOutOfRange { level, n });
    }
    Ok(())
}

/// `F^(ℓ)`: entry `(I, J)` is 1 iff `f(I) = J` has `ℓ` elements.
pub fn level_matrix(f: &Transformation, level: usize) -> Result<LevelMatrix> {
    let n = f.n();
    check_level(n, level, 1)?;
    let layer = Layer::new(n, level)?;
    let mut m = Matrix::zeros(layer.len(), layer.len());
    for (i, &mask) in layer.masks().iter().enumerate() {
        if let Some(j) = layer.index_of(f.image_mask(mask)) {
            m.set(i, j, Rational::one());
        }
    }
    Ok(LevelMatrix { n, level, augmented: false, matrix: m })
}

/// Independent route to `F^(ℓ)`: entry `(I, J)` is the permanent of the
/// submatrix of `F` with rows `I` and columns `J`.
pub fn level_matrix_via_permanents(f: &Transformation, level: usize) -> Result<LevelMatrix> {
    let n = f.n();
    check_level(n, level, 1)?;
    let layer = Layer::new(n, level)?;
    let subsets: Vec<SubsetIndex> = layer.subsets().collect();
    let m = Matrix::from_fn(layer.len(), layer.len(), |i, j| {
        let rows = subsets[i].members();
        let cols = subsets[j].members();
        let sub: Vec<Vec<i64>> =
            rows.iter().map(|&r| cols.iter().map(|&c| i64::from(f.apply(r) == c)).collect()).collect();
        rational::int(permanent(&sub))
    });
    Ok(LevelMatrix { n, level, augmented: false, matrix: m })
}

/// Ryser's inclusion–exclusion formula.
pub fn permanent(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0i64;
    for cols in 1u32..(1 << n) {
        let prod: i64 =
            a.iter().map(|row| (0..n).filter(|&j| cols & (1 << j) != 0).map(|j| row[j]).sum::<i64>()).product();
        let sign = if (n - cols.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
        total += sign * prod;
    }
    total
}

/// `Ḟ^(ℓ)`: the level matrix with the collapsed state adjoined, which is
/// binary stochastic.
pub fn augmented_level_matrix(f: &Transformation, level: usize) -> Result<LevelMatrix> {
    let n = f.n();
    check_level(n, level, 1)?;
    let layer = Layer::new(n, level)?;
    let collapsed = layer.len();
    let mut m = Matrix::zeros(collapsed + 1, collapsed + 1);
    for (i, &mask) in layer.masks().iter().enumerate() {
        let j = layer.index_of(f.image_mask(mask)).unwrap_or(collapsed);
        m.set(i, j, Rational::one());
    }
    m.set(collapsed, collapsed, Rational::one());
    Ok(LevelMatrix { n, level, augmented: true, matrix: m })
}

/// The augmented level action as a function on `C(n, ℓ) + 1` points, the
/// last point being the collapsed state.
pub fn level_action(f: &Transformation, level: usize) -> Result<Transformation> {
    let n = f.n();
    check_level(n, level, 1)?;
    let layer = Layer::new(n, level)?;
    let collapsed = layer.len();
    if collapsed + 1 > u8::MAX as usize + 1 {
        return Err(Error::UnsupportedSize(n));
    }
    let mut images: Vec<u8> =
        layer.masks().iter().map(|&mask| layer.index_of(f.image_mask(mask)).unwrap_or(collapsed) as u8).collect();
    images.push(collapsed as u8);
    Ok(Transformation::from_zero_based(images))
}

/// Whether `(FG)^(ℓ) = F^(ℓ) G^(ℓ)`.
pub fn homomorphism_check(f: &Transformation, g: &Transformation, level: usize) -> Result<bool> {
    let h = compose(f, g)?;
    let lhs = level_matrix(&h, level)?.matrix;
    let rhs = level_matrix(f, level)?.matrix.mul(&level_matrix(g, level)?.matrix);
    Ok(lhs == rhs)
}

fn relation_operator(from: usize, to: usize, n: usize, rel: impl Fn(u32, u32) -> bool) -> Result<InclusionOperator> {
    check_level(n, from, 0)?;
    check_level(n, to, 0)?;
    let rows = Layer::new(n, from)?;
    let cols = Layer::new(n, to)?;
    let matrix = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        if rel(rows.masks()[i], cols.masks()[j]) {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    Ok(InclusionOperator { n, from, to, matrix })
}

/// `E^(ℓ,m)`: entry 1 when one index set contains the other. Level 0 is the
/// single empty set.
pub fn inclusion_operator(from: usize, to: usize, n: usize) -> Result<InclusionOperator> {
    relation_operator(from, to, n, |a, b| if from <= to { a & b == a } else { a & b == b })
}

/// `Ē^(ℓ,m)`: entry 1 when the index sets are disjoint.
pub fn exclusion_operator(from: usize, to: usize, n: usize) -> Result<InclusionOperator> {
    relation_operator(from, to, n, |a, b| a & b == 0)
}

/// Rows `I` that are `f`-preserved but where `E^(ℓ,ℓ-1) F^(ℓ-1)` and
/// `F^(ℓ) E^(ℓ,ℓ-1)` differ. Always empty.
pub fn local_commuting_check(f: &Transformation, level: usize) -> Result<Vec<SubsetIndex>> {
    let n = f.n();
    check_level(n, level, 2)?;
    let (lhs, rhs) = local_commuting_sides(f, level)?;
    let layer = Layer::new(n, level)?;
    Ok((0..layer.len())
        .filter(|&i| {
            let mask = layer.masks()[i];
            f.image_mask(mask).count_ones() as usize == level && lhs.row(i) != rhs.row(i)
        })
        .map(|i| layer.subset(i))
        .collect())
}

/// The two sides `(E^(ℓ,ℓ-1) F^(ℓ-1), F^(ℓ) E^(ℓ,ℓ-1))` of the local
/// commuting relation. For `ℓ = 2` the left factor is the plain matrix of `f`.
pub fn local_commuting_sides(f: &Transformation, level: usize) -> Result<(Matrix, Matrix)> {
    let n = f.n();
    check_level(n, level, 2)?;
    let down = inclusion_operator(level, level - 1, n)?.matrix;
    let lower = level_matrix(f, level - 1)?.matrix;
    let upper = level_matrix(f, level)?.matrix;
    Ok((down.mul(&lower), upper.mul(&down)))
}

/// Checks `E^(b,b-1) ⋯ E^(a+1,a) = (b-a)! E^(b,a)`.
pub fn factorial_composition_check(a: usize, b: usize, n: usize) -> Result<bool> {
    if a >= b {
        return Err(Error::LevelOutOfRange { level: a, n });
    }
    check_level(n, b, 1)?;
    let mut chain = inclusion_operator(b, b - 1, n)?.matrix;
    for level in (a + 1..b).rev() {
        chain = chain.mul(&inclusion_operator(level, level - 1, n)?.matrix);
    }
    let factorial: i64 = (1..=(b - a) as i64).product();
    let direct = inclusion_operator(b, a, n)?.matrix.scale(&rational::int(factorial));
    Ok(chain == direct)
}

/// The alternating-sum formula
/// `Σ_i (-1)^i C(n-i-ℓ, ℓ-i)^{-1} Ē^(n-ℓ,i) E^(i,ℓ)` for `(E^(ℓ,n-ℓ))^{-1}`.
pub fn inclusion_inverse_formula(level: usize, n: usize) -> Result<Matrix> {
    if level == 0 || 2 * level > n {
        return Err(Error::LevelOutOfRange { level, n });
    }
    let size = binomial(n, level);
    let mut total = Matrix::zeros(size, size);
    for i in 0..=level {
        let coeff = rational::ratio(if i % 2 == 0 { 1 } else { -1 }, binomial(n - i - level, level - i) as i64);
        let excl = exclusion_operator(n - level, i, n)?.matrix;
        let incl = inclusion_operator(i, level, n)?.matrix;
        total = &total + &excl.mul(&incl).scale(&coeff);
    }
    Ok(total)
}

/// `(E^(ℓ,n-ℓ))^{-1}` via the alternating sum, verified by multiplication;
/// falls back to Gauss–Jordan inversion if the check ever fails.
pub fn inclusion_inverse(level: usize, n: usize) -> Result<Matrix> {
    let candidate = inclusion_inverse_formula(level, n)?;
    let e = inclusion_operator(level, n - level, n)?.matrix;
    if e.mul(&candidate) == Matrix::identity(e.rows()) {
        Ok(candidate)
    } else {
        e.inverse()
    }
}

/// Checks `E^(1,n-1) = J - I'` and `(E^(1,n-1))^{-1} = J/(n-1) - I'`.
pub fn special_inverse_check(n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::LevelOutOfRange { level: 1, n });
    }
    let e = inclusion_operator(1, n - 1, n)?.matrix;
    let j = Matrix::ones(n, n);
    let anti = Matrix::antidiagonal(n);
    let expected_inv = &j.scale(&rational::ratio(1, n as i64 - 1)) - &anti;
    Ok(e == &j - &anti && e.mul(&expected_inv) == Matrix::identity(n) && expected_inv.mul(&e) == Matrix::identity(n))
}

fn compatible_with(v: &[Rational], f: &Transformation, layer: &Layer) -> bool {
    v.iter()
        .zip(layer.masks())
        .all(|(x, &mask)| x.is_zero() || f.image_mask(mask).count_ones() as usize == layer.level())
}

/// `v · E^(ℓ,ℓ-1)`, after checking that `v` is supported on sets preserved
/// by every function in `colors`. Pass an empty slice to skip the check.
pub fn descend_left_eigenvector(
    v: &[Rational],
    n: usize,
    level: usize,
    colors: &[Transformation],
) -> Result<Vec<Rational>> {
    check_level(n, level, 2)?;
    let layer = Layer::new(n, level)?;
    if v.len() != layer.len() {
        return Err(Error::DimensionMismatch { expected: layer.len(), actual: v.len() });
    }
    for (c, f) in colors.iter().enumerate() {
        if f.n() != n {
            return Err(Error::SizeMismatch { left: n, right: f.n() });
        }
        if !compatible_with(v, f, &layer) {
            return Err(Error::NotCompatible { color: c + 1 });
        }
    }
    Ok(inclusion_operator(level, level - 1, n)?.matrix.left_apply(v))
}

/// `Π^(ℓ,m)`: entry `(I, J)` is `Π_{j ∈ J∖I} p_j` when `I ⊆ J`.
pub fn weighted_inclusion(p: &[Rational], from: usize, to: usize) -> Result<InclusionOperator> {
    let n = p.len();
    check_level(n, from, 0)?;
    check_level(n, to, 0)?;
    if from > to {
        return Err(Error::LevelOutOfRange { level: from, n });
    }
    let rows = Layer::new(n, from)?;
    let cols = Layer::new(n, to)?;
    let matrix = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        let (a, b) = (rows.masks()[i], cols.masks()[j]);
        if a & b != a {
            return Rational::zero();
        }
        let extra = b & !a;
        (0..n).filter(|k| extra & (1 << k) != 0).fold(Rational::one(), |acc, k| acc * &p[k])
    });
    Ok(InclusionOperator { n, from, to, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn t(s: &str) -> Transformation {
        Transformation::from_digits(s).unwrap()
    }

    #[test]
    fn level_two_of_2344() {
        let f2 = level_matrix(&t("2344"), 2).unwrap().matrix;
        let expected = Matrix::from_int_rows(&[
            &[0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0, 0],
        ]);
        assert_eq!(f2, expected);
        assert!(level_matrix(&t("2344"), 4).unwrap().matrix.is_zero());
        assert!(level_matrix(&t("2344"), 5).is_err());
        assert!(level_matrix(&t("2344"), 0).is_err());
    }

    #[test]
    fn identity_levels_are_identities() {
        let id = Transformation::identity(5);
        for level in 1..=5 {
            let m = level_matrix(&id, level).unwrap().matrix;
            assert_eq!(m, Matrix::identity(binomial(5, level)));
        }
    }

    #[test]
    fn permanent_entry() {
        // rows {1,2}, columns {2,3} of the matrix of [2344]
        assert_eq!(permanent(&[vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(permanent(&[vec![1, 1], vec![1, 1]]), 2);
        assert_eq!(permanent(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]), 6);
        let oracle = level_matrix_via_permanents(&t("2344"), 2).unwrap();
        assert_eq!(oracle.matrix.get(0, 3), &int(1));
        assert!(oracle.matrix.row(5).iter().all(Zero::is_zero));
    }

    #[test]
    fn augmented_2344() {
        let m = augmented_level_matrix(&t("2344"), 2).unwrap();
        assert_eq!(m.collapsed_index(), Some(6));
        let expected = Matrix::from_int_rows(&[
            &[0, 0, 0, 1, 0, 0, 0],
            &[0, 0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0, 0, 1],
        ]);
        assert_eq!(m.matrix, expected);
    }

    #[test]
    fn augmented_permutation_is_block_diagonal() {
        let p = t("31524");
        for level in 1..=5 {
            let m = augmented_level_matrix(&p, level).unwrap().matrix;
            let last = m.rows() - 1;
            assert_eq!(m.get(last, last), &int(1));
            for i in 0..last {
                assert!(m.get(i, last).is_zero());
                assert!(m.get(last, i).is_zero());
            }
            assert_eq!(m.rank(), m.rows());
        }
    }

    #[test]
    fn e21_for_four_points() {
        let e = inclusion_operator(2, 1, 4).unwrap().matrix;
        let expected = Matrix::from_int_rows(&[
            &[1, 1, 0, 0],
            &[1, 0, 1, 0],
            &[1, 0, 0, 1],
            &[0, 1, 1, 0],
            &[0, 1, 0, 1],
            &[0, 0, 1, 1],
        ]);
        assert_eq!(e, expected);
        assert_eq!(inclusion_operator(1, 2, 4).unwrap().matrix, expected.transpose());
        assert!(e.row_sums().iter().all(|s| *s == int(2)));
    }

    #[test]
    fn exclusion_beyond_n_is_zero() {
        assert!(exclusion_operator(3, 2, 4).unwrap().matrix.is_zero());
        assert!(!exclusion_operator(2, 2, 4).unwrap().matrix.is_zero());
    }

    #[test]
    fn local_commuting_for_2344() {
        let f = t("2344");
        assert!(local_commuting_check(&f, 2).unwrap().is_empty());
        let (lhs, rhs) = local_commuting_sides(&f, 2).unwrap();
        // only the collapsing row {3,4} differs: 2 on the left, 0 on the right
        for i in 0..5 {
            assert_eq!(lhs.row(i), rhs.row(i));
        }
        assert_eq!(lhs.row(5), &rational::vec_of(&[0, 0, 0, 2])[..]);
        assert!(rhs.row(5).iter().all(Zero::is_zero));
        assert!(local_commuting_check(&Transformation::identity(4), 3).unwrap().is_empty());
    }

    #[test]
    fn factorial_chain() {
        assert!(factorial_composition_check(1, 4, 5).unwrap());
        assert!(factorial_composition_check(2, 3, 5).unwrap());
        for n in 2..=6 {
            for b in 2..=n {
                for a in 1..b {
                    assert!(factorial_composition_check(a, b, n).unwrap(), "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn inverse_for_four_and_five_points() {
        let third = ratio(1, 3);
        let m = inclusion_inverse(1, 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { ratio(-2, 3) } else { third.clone() };
                assert_eq!(m.get(i, j), &want);
            }
        }
        let m = inclusion_inverse_formula(1, 5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i + j == 4 { ratio(-3, 4) } else { ratio(1, 4) };
                assert_eq!(m.get(i, j), &want);
            }
        }
    }

    #[test]
    fn alternating_formula_matches_exact_inverse() {
        for n in 2..=8 {
            for level in 1..=n / 2 {
                let e = inclusion_operator(level, n - level, n).unwrap().matrix;
                let formula = inclusion_inverse_formula(level, n).unwrap();
                assert_eq!(e.mul(&formula), Matrix::identity(e.rows()), "n={n} l={level}");
                if n <= 6 {
                    assert_eq!(formula, e.inverse().unwrap());
                }
            }
        }
    }

    #[test]
    fn special_inverse_identities() {
        for n in 2..=8 {
            assert!(special_inverse_check(n).unwrap());
        }
        assert_eq!(inclusion_operator(1, 1, 2).unwrap().matrix, Matrix::identity(2));
        assert!(special_inverse_check(1).is_err());
    }

    #[test]
    fn descend_zero_and_incompatible() {
        let zero = vec![Rational::zero(); 6];
        assert_eq!(descend_left_eigenvector(&zero, 4, 2, &[t("2344")]).unwrap(), vec![Rational::zero(); 4]);
        // support on {3,4}, which [2344] collapses
        let mut v = zero.clone();
        v[5] = int(1);
        assert_eq!(descend_left_eigenvector(&v, 4, 2, &[t("2344")]), Err(Error::NotCompatible { color: 1 }));
        assert!(descend_left_eigenvector(&v, 4, 2, &[]).is_ok());
        assert!(descend_left_eigenvector(&v[..3], 4, 2, &[]).is_err());
    }

    #[test]
    fn descent_preserves_eigenvalue_for_a_permutation() {
        let p = t("25143");
        for level in 2..=5 {
            let f = level_matrix(&p, level).unwrap().matrix;
            // left eigenvectors for eigenvalue 1 of a permutation matrix: orbit indicators
            let eye = Matrix::identity(f.rows());
            for v in (&f - &eye).left_nullspace() {
                let down = descend_left_eigenvector(&v, 5, level, std::slice::from_ref(&p)).unwrap();
                let lower = level_matrix(&p, level - 1).unwrap().matrix;
                assert_eq!(lower.left_apply(&down), down);
            }
        }
    }

    #[test]
    fn weighted_inclusion_shapes() {
        let p: Vec<Rational> = (1..=5).map(|i| ratio(i, 15)).collect();
        let pi12 = weighted_inclusion(&p, 1, 2).unwrap().matrix;
        // row 1: p2 p3 p4 p5 then zeros; row 3 has p1 at column {1,3}
        assert_eq!(pi12.row(0)[..4], p[1..5]);
        assert!(pi12.row(0)[4..].iter().all(Zero::is_zero));
        assert_eq!(pi12.get(2, 1), &p[0]);
        assert_eq!(pi12.get(2, 4), &p[1]);

        let chain = pi12
            .mul(&weighted_inclusion(&p, 2, 3).unwrap().matrix)
            .mul(&weighted_inclusion(&p, 3, 4).unwrap().matrix)
            .scale(&ratio(1, 6));
        let direct = weighted_inclusion(&p, 1, 4).unwrap().matrix;
        assert_eq!(chain, direct);
        assert_eq!(direct.get(0, 0), &(&p[1] * &p[2] * &p[3]));
        assert!(direct.get(0, 4).is_zero());

        let uniform = vec![ratio(1, 5); 5];
        let w = weighted_inclusion(&uniform, 1, 3).unwrap().matrix;
        let e = inclusion_operator(1, 3, 5).unwrap().matrix.scale(&ratio(1, 25));
        assert_eq!(w, e);
        assert!(weighted_inclusion(&p, 3, 1).is_err());
    }
}
