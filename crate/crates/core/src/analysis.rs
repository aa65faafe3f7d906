//! One-stop bundle of the exact analysis of a color system.

use crate::error::Result;
use crate::fields::{self, Field, FieldKind, FriedmanReport, RankWitness, RightGroupReport, SplitMatrix};
use crate::kernel::{kernel_of, KernelStructure};
use crate::matrix::Matrix;
use crate::measure::{factorize_lambda, limit_measure_exact, LimitFactorization, MeasureOnSemigroup};
use crate::projection::{self, ProjectionMatrix};
use crate::semigroup::{generate_semigroup, ColorSystem, SemigroupTable, DEFAULT_CAP};

/// A color system together with its semigroup, kernel and limit measure.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub system: ColorSystem,
    pub semigroup: SemigroupTable,
    pub kernel: KernelStructure,
    pub lambda: MeasureOnSemigroup,
    pub factorization: LimitFactorization,
}

impl Analysis {
    pub fn new(system: ColorSystem) -> Result<Self> {
        Self::with_cap(system, DEFAULT_CAP)
    }

    pub fn with_cap(system: ColorSystem, cap: usize) -> Result<Self> {
        let semigroup = generate_semigroup(&system, cap)?;
        let kernel = kernel_of(&semigroup)?;
        let lambda = limit_measure_exact(&system, &semigroup, &kernel)?;
        let factorization = factorize_lambda(&lambda, &kernel)?;
        Ok(Self { system, semigroup, kernel, lambda, factorization })
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    pub fn rank(&self) -> usize {
        self.kernel.rank()
    }

    pub fn a_level(&self, level: usize) -> Result<Matrix> {
        projection::a_level(&self.system, level)
    }

    pub fn omega(&self, level: usize) -> Result<ProjectionMatrix> {
        projection::omega_level(&self.kernel, &self.lambda, level)
    }

    pub fn stationary(&self) -> Result<Field> {
        fields::stationary(&self.system)
    }

    pub fn pi_field(&self, level: usize) -> Result<Field> {
        fields::pi_field(&self.omega(level)?, self.n(), self.rank())
    }

    pub fn u_field(&self, level: usize) -> Result<Field> {
        fields::u_field(&self.omega(level)?, self.n(), self.rank())
    }

    /// Pair-splitting probabilities; all zero when the kernel has rank one.
    pub fn u2(&self) -> Result<Field> {
        Field::from_raw(2, self.n(), FieldKind::U, self.omega(2)?.matrix.row_sums())
    }

    pub fn split_matrix(&self) -> Result<SplitMatrix> {
        fields::split_matrix(&self.u2()?)
    }

    pub fn detect_rank(&self) -> Result<RankWitness> {
        fields::detect_rank(&self.stationary()?, &self.u2()?)
    }

    pub fn right_group(&self) -> Result<RightGroupReport> {
        fields::right_group_test(&self.u2()?)
    }

    pub fn friedman(&self) -> Result<FriedmanReport> {
        fields::friedman_check(&self.stationary()?, &self.kernel)
    }
}
