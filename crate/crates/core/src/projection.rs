//! Averaged level matrices `A_ℓ`, their kernel projections `Ω_ℓ`, exact
//! eigenprojections and a floating-point Abel cross-check.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hierarchy::level_matrix;
use crate::kernel::KernelStructure;
use crate::matrix::Matrix;
use crate::measure::MeasureOnSemigroup;
use crate::rational::{self, Rational};
use crate::semigroup::ColorSystem;
use crate::subset::Layer;

/// An idempotent matrix on the `ℓ`-subsets. `level` is 0 when the
/// projection was computed from an arbitrary matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionMatrix {
    pub level: usize,
    pub matrix: Matrix,
}

impl ProjectionMatrix {
    pub fn is_idempotent(&self) -> bool {
        self.matrix.mul(&self.matrix) == self.matrix
    }

    /// `AΩ = ΩA = Ω² = Ω`.
    pub fn satisfies_projection_identities(&self, a: &Matrix) -> bool {
        let o = &self.matrix;
        a.mul(o) == *o && o.mul(a) == *o && self.is_idempotent()
    }
}

/// `A_ℓ = Σ w_i C_i^(ℓ)`.
pub fn a_level(cs: &ColorSystem, level: usize) -> Result<Matrix> {
    let mut total: Option<Matrix> = None;
    for (c, w) in cs.colors().iter().zip(cs.weights()) {
        let term = level_matrix(c, level)?.matrix.scale(w);
        total = Some(match total {
            Some(t) => &t + &term,
            None => term,
        });
    }
    total.ok_or(Error::NoColors)
}

/// `Ω_ℓ = Σ_k λ(k) K^(ℓ)`, the `λ`-average of the kernel's level matrices.
pub fn omega_level(ks: &KernelStructure, lambda: &MeasureOnSemigroup, level: usize) -> Result<ProjectionMatrix> {
    let n = ks.n();
    if level == 0 || level > n {
        return Err(Error::LevelOutOfRange { level, n });
    }
    let layer = Layer::new(n, level)?;
    let mut m = Matrix::zeros(layer.len(), layer.len());
    if level <= ks.rank() {
        for (p, k) in ks.elements().iter().enumerate() {
            let w = lambda.weight(ks.table_index(p));
            if w.is_zero() {
                continue;
            }
            for (i, &mask) in layer.masks().iter().enumerate() {
                if let Some(j) = layer.index_of(k.image_mask(mask)) {
                    let v = m.get(i, j) + w;
                    m.set(i, j, v);
                }
            }
        }
    }
    Ok(ProjectionMatrix { level, matrix: m })
}

fn is_substochastic(p: &Matrix) -> bool {
    p.is_square() && p.entries().iter().all(|v| !v.is_negative()) && p.row_sums().iter().all(|s| *s <= Rational::one())
}

/// Exact projection onto the fixed vectors of `P`: `Ω = R (L R)^{-1} L`
/// where the columns of `R` span right fixed vectors and the rows of `L`
/// span left fixed vectors. The zero matrix when `P` fixes nothing.
pub fn eigenprojection(p: &Matrix) -> Result<ProjectionMatrix> {
    if !is_substochastic(p) {
        return Err(Error::NotSubstochastic);
    }
    let n = p.rows();
    let defect = &Matrix::identity(n) - p;
    let right = defect.nullspace();
    let left = defect.left_nullspace();
    if right.is_empty() {
        return Ok(ProjectionMatrix { level: 0, matrix: Matrix::zeros(n, n) });
    }
    let r = Matrix::from_rows(right).transpose();
    let l = Matrix::from_rows(left);
    let middle = l.mul(&r).inverse()?;
    Ok(ProjectionMatrix { level: 0, matrix: r.mul(&middle).mul(&l) })
}

/// `Q(s) = (1 - s)(I - sP)^{-1}` in floating point.
pub fn abel_numeric(p: &Matrix, s: f64) -> Result<DMatrix<f64>> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::NearSingular { s });
    }
    let n = p.rows();
    let pf = to_float(p);
    let system = DMatrix::<f64>::identity(n, n) - pf * s;
    let inverse = system.try_inverse().ok_or(Error::NearSingular { s })?;
    let q = inverse * (1.0 - s);
    if q.iter().any(|v| !v.is_finite()) {
        return Err(Error::NearSingular { s });
    }
    Ok(q)
}

pub fn to_float(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| rational::to_f64(m.get(i, j)))
}

/// Largest entrywise deviation between a float matrix and an exact one.
pub fn max_error(numeric: &DMatrix<f64>, exact: &Matrix) -> f64 {
    numeric.iter().zip(to_float(exact).iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// `(s, ‖Q(s) − Ω‖_max)` for each `s`.
pub fn abel_table(p: &Matrix, omega: &Matrix, values: &[f64]) -> Result<Vec<(f64, f64)>> {
    values.iter().map(|&s| Ok((s, max_error(&abel_numeric(p, s)?, omega)))).collect()
}
