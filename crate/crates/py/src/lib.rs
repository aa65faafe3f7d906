//! Python bindings. Exact values cross the boundary as `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use semihier::classify::{classify_rank_n_minus_1, SplitCase};
use semihier::hierarchy;
use semihier::rational;
use semihier::semigroup::DEFAULT_CAP;
use semihier::transformation::compose;
use semihier::{Matrix, Rational};

fn value_error(e: semihier::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((rational::to_pq(q),))
}

fn fractions<'py>(py: Python<'py>, v: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    v.iter().map(|q| fraction(py, q)).collect()
}

fn fraction_rows<'py>(py: Python<'py>, m: &Matrix) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    m.to_rows().iter().map(|r| fractions(py, r)).collect()
}

/// Accepts `Fraction`, `int` or a `"p/q"` string; floats are rejected.
fn rational_from(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?;
    rational::parse(text.to_str()?).map_err(value_error)
}

/// A function on `{1, ..., n}` given by its list of images.
#[pyclass(frozen, eq, hash, skip_from_py_object, module = "pysemihier")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Transformation {
    inner: semihier::Transformation,
}

#[pymethods]
impl Transformation {
    #[new]
    fn new(images: Vec<usize>) -> PyResult<Self> {
        let n = images.len();
        semihier::Transformation::from_oneline(&images, n).map(|inner| Self { inner }).map_err(value_error)
    }

    #[staticmethod]
    fn from_digits(label: &str) -> PyResult<Self> {
        semihier::Transformation::from_digits(label).map(|inner| Self { inner }).map_err(value_error)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn images(&self) -> Vec<usize> {
        self.inner.oneline()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn partition(&self) -> Vec<Vec<usize>> {
        self.inner.partition()
    }

    /// The function that applies `self` first and `other` second.
    fn then(&self, other: &Transformation) -> PyResult<Transformation> {
        compose(&self.inner, &other.inner).map(|inner| Self { inner }).map_err(value_error)
    }

    #[pyo3(signature = (level, augmented = false))]
    fn level_matrix<'py>(
        &self,
        py: Python<'py>,
        level: usize,
        augmented: bool,
    ) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        let m = if augmented {
            hierarchy::augmented_level_matrix(&self.inner, level)
        } else {
            hierarchy::level_matrix(&self.inner, level)
        }
        .map_err(value_error)?;
        fraction_rows(py, &m.matrix)
    }

    fn __repr__(&self) -> String {
        format!("Transformation({:?})", self.inner.oneline())
    }
}

/// A random walk driven by weighted colors.
#[pyclass(frozen, skip_from_py_object, module = "pysemihier")]
#[derive(Clone)]
struct ColorSystem {
    inner: semihier::ColorSystem,
}

#[pymethods]
impl ColorSystem {
    #[new]
    #[pyo3(signature = (colors, weights = None))]
    fn new(colors: Vec<Vec<usize>>, weights: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let colors = colors
            .iter()
            .map(|c| semihier::Transformation::from_oneline(c, c.len()))
            .collect::<semihier::Result<Vec<_>>>()
            .map_err(value_error)?;
        let inner = match weights {
            None => semihier::ColorSystem::new(colors),
            Some(ws) => {
                let ws = ws.iter().map(rational_from).collect::<PyResult<Vec<_>>>()?;
                semihier::ColorSystem::with_weights(colors, ws)
            }
        }
        .map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn colors(&self) -> Vec<Vec<usize>> {
        self.inner.colors().iter().map(|c| c.oneline()).collect()
    }

    #[getter]
    fn weights<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, self.inner.weights())
    }

    fn __repr__(&self) -> String {
        format!("ColorSystem({:?})", self.colors())
    }
}

/// Semigroup, kernel, limit measure and invariant fields of a color system.
#[pyclass(frozen, module = "pysemihier")]
struct Analysis {
    inner: semihier::Analysis,
}

#[pymethods]
impl Analysis {
    #[new]
    #[pyo3(signature = (system, cap = DEFAULT_CAP))]
    fn new(system: &ColorSystem, cap: usize) -> PyResult<Self> {
        semihier::Analysis::with_cap(system.inner.clone(), cap).map(|inner| Self { inner }).map_err(value_error)
    }

    #[getter]
    fn semigroup_size(&self) -> usize {
        self.inner.semigroup.len()
    }

    #[getter]
    fn kernel_size(&self) -> usize {
        self.inner.kernel.len()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn group_order(&self) -> usize {
        self.inner.kernel.group_order()
    }

    #[getter]
    fn partitions(&self) -> Vec<Vec<Vec<usize>>> {
        self.inner.kernel.partitions().to_vec()
    }

    #[getter]
    fn ranges(&self) -> Vec<Vec<usize>> {
        self.inner.kernel.ranges().to_vec()
    }

    /// Idempotents indexed by partition, then range.
    fn idempotent_table(&self) -> Vec<Vec<Vec<usize>>> {
        let ks = &self.inner.kernel;
        (0..ks.partitions().len())
            .map(|x| (0..ks.ranges().len()).map(|y| ks.idempotent(x, y).oneline()).collect())
            .collect()
    }

    fn kernel_elements(&self) -> Vec<Vec<usize>> {
        self.inner.kernel.elements().iter().map(|k| k.oneline()).collect()
    }

    #[getter]
    fn alpha<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.inner.factorization.alpha)
    }

    #[getter]
    fn beta<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.inner.factorization.beta)
    }

    /// Limit measure weights of the kernel elements, keyed by image tuple.
    fn limit_measure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let ks = &self.inner.kernel;
        let out = PyDict::new(py);
        for (p, k) in ks.elements().iter().enumerate() {
            let key = pyo3::types::PyTuple::new(py, k.oneline())?;
            out.set_item(key, fraction(py, self.inner.lambda.weight(ks.table_index(p)))?)?;
        }
        Ok(out)
    }

    fn stationary<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.inner.stationary().map_err(value_error)?.values)
    }

    fn omega<'py>(&self, py: Python<'py>, level: usize) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        fraction_rows(py, &self.inner.omega(level).map_err(value_error)?.matrix)
    }

    /// Normalized stationary field at a level (sums to one).
    fn pi_field<'py>(&self, py: Python<'py>, level: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.inner.pi_field(level).map_err(value_error)?.values)
    }

    /// Normalized splitting field at a level (maximum one).
    fn u_field<'py>(&self, py: Python<'py>, level: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.inner.u_field(level).map_err(value_error)?.values)
    }

    fn split_matrix<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        fraction_rows(py, &self.inner.split_matrix().map_err(value_error)?.matrix)
    }

    /// `(rank, witness)` with the witness constant at `1/rank`.
    fn detect_rank<'py>(&self, py: Python<'py>) -> PyResult<(usize, Vec<Bound<'py, PyAny>>)> {
        let w = self.inner.detect_rank().map_err(value_error)?;
        Ok((w.rank, fractions(py, &w.witness)?))
    }

    /// `(is_right_group, partition or None)`.
    fn right_group(&self) -> PyResult<(bool, Option<Vec<Vec<usize>>>)> {
        let r = self.inner.right_group().map_err(value_error)?;
        Ok((r.is_right_group, r.partition))
    }

    fn friedman_holds(&self) -> PyResult<bool> {
        Ok(self.inner.friedman().map_err(value_error)?.is_clean())
    }
}

fn pair(r: &Transformation, b: &Transformation) -> (semihier::Transformation, semihier::Transformation) {
    (r.inner.clone(), b.inner.clone())
}

#[pyfunction]
fn inclusion_operator<'py>(
    py: Python<'py>,
    from_level: usize,
    to_level: usize,
    n: usize,
) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    fraction_rows(py, &hierarchy::inclusion_operator(from_level, to_level, n).map_err(value_error)?.matrix)
}

#[pyfunction]
fn inclusion_inverse<'py>(py: Python<'py>, level: usize, n: usize) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    fraction_rows(py, &hierarchy::inclusion_inverse(level, n).map_err(value_error)?)
}

#[pyfunction]
fn split_with_loop(r: &Transformation, b: &Transformation) -> PyResult<ColorSystem> {
    let (r, b) = pair(r, b);
    semihier::classify::split_with_loop(&r, &b).map(|inner| ColorSystem { inner }).map_err(value_error)
}

#[pyfunction]
fn split_no_loop(r: &Transformation, b: &Transformation) -> PyResult<ColorSystem> {
    let (r, b) = pair(r, b);
    semihier::classify::split_no_loop(&r, &b).map(|inner| ColorSystem { inner }).map_err(value_error)
}

/// Classification of a two-color rank `n - 1` system as a dictionary.
#[pyfunction]
fn classify<'py>(py: Python<'py>, system: &ColorSystem) -> PyResult<Bound<'py, PyDict>> {
    let report = classify_rank_n_minus_1(&system.inner).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("case", if report.case == SplitCase::A { "a" } else { "b" })?;
    out.set_item("doubleton", report.doubleton.to_vec())?;
    out.set_item("relabel", report.relabel.clone())?;
    out.set_item("q", fraction(py, &report.q)?)?;
    out.set_item("right_group", report.right_group)?;
    out.set_item("consistent", report.is_consistent())?;
    out.set_item("pi", fractions(py, &report.observed_pi)?)?;
    out.set_item("beta", fractions(py, &report.observed_beta)?)?;
    out.set_item("ranges", report.observed_ranges.clone())?;
    out.set_item("u2", fractions(py, &report.observed_u2)?)?;
    Ok(out)
}

#[pymodule]
fn pysemihier(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Transformation>()?;
    m.add_class::<ColorSystem>()?;
    m.add_class::<Analysis>()?;
    m.add_function(wrap_pyfunction!(inclusion_operator, m)?)?;
    m.add_function(wrap_pyfunction!(inclusion_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(split_with_loop, m)?)?;
    m.add_function(wrap_pyfunction!(split_no_loop, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    Ok(())
}
