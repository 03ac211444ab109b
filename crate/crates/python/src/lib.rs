//! Python bindings for the flagcap library: channels, flagged extensions,
//! degradability checks, and the capacity bound curves.

use num_complex::Complex;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use flagcap::channel::{
    coherent_information, q1_maximize, InputStrategy, KrausChannel,
};
use flagcap::flagged::{
    build_flagged, check_degradability, degrading_residual, unitary_mixture_spec, FlaggedSpec,
};
use flagcap::operators::{ComplexMatrix, DensityMatrix};
use flagcap::zoo;

type C64 = Complex<f64>;

fn err_py(e: flagcap::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_rows(rows: &[Vec<C64>]) -> PyResult<ComplexMatrix> {
    let height = rows.len();
    if height == 0 {
        return Err(PyValueError::new_err("matrix needs at least one row"));
    }
    let width = rows[0].len();
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(PyValueError::new_err("matrix rows must be nonempty and equal length"));
    }
    Ok(ComplexMatrix::from_rows(rows))
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect()).collect()
}

fn curves_to_py(curves: Vec<zoo::BoundCurve>) -> Vec<(String, Vec<(f64, f64)>)> {
    curves.into_iter().map(|c| (c.label().to_string(), c.samples().to_vec())).collect()
}

/// A completely positive trace-preserving map given by Kraus operators.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Channel {
    inner: KrausChannel,
}

#[pymethods]
impl Channel {
    /// Build a channel from a list of Kraus matrices (nested complex lists).
    #[new]
    #[pyo3(signature = (kraus, tol = 1e-9))]
    fn new(kraus: Vec<Vec<Vec<C64>>>, tol: f64) -> PyResult<Self> {
        let mats = kraus.iter().map(|k| matrix_from_rows(k)).collect::<PyResult<Vec<_>>>()?;
        KrausChannel::with_tolerance(mats, tol).map(|inner| Self { inner }).map_err(err_py)
    }

    /// Depolarizing channel on a d-level system with error probability p.
    #[staticmethod]
    fn depolarizing(d: u32, p: f64) -> PyResult<Self> {
        zoo::depolarizing(d, p).map(|inner| Self { inner }).map_err(err_py)
    }

    /// Qubit channel with independent bit- and phase-flip probability p.
    #[staticmethod]
    fn bb84(p: f64) -> PyResult<Self> {
        zoo::bb84(p).map(|inner| Self { inner }).map_err(err_py)
    }

    /// Amplitude damping with decay probability y.
    #[staticmethod]
    fn amplitude_damping(y: f64) -> PyResult<Self> {
        zoo::amplitude_damping(y).map(|inner| Self { inner }).map_err(err_py)
    }

    /// Generalized amplitude damping with decay y and thermal mixing n.
    #[staticmethod]
    fn gad(y: f64, n: f64) -> PyResult<Self> {
        let params = zoo::GadParams::new(y, n).map_err(err_py)?;
        zoo::gad(&params).map(|inner| Self { inner }).map_err(err_py)
    }

    #[getter]
    fn dim_in(&self) -> usize {
        self.inner.dim_in()
    }

    #[getter]
    fn dim_out(&self) -> usize {
        self.inner.dim_out()
    }

    #[getter]
    fn kraus_count(&self) -> usize {
        self.inner.kraus_count()
    }

    /// Kraus operators as nested complex lists.
    fn kraus(&self) -> Vec<Vec<Vec<C64>>> {
        self.inner.kraus().iter().map(matrix_to_rows).collect()
    }

    /// Deviation of ΣK†K from the identity.
    fn cptp_residual(&self) -> f64 {
        self.inner.cptp_residual()
    }

    /// Choi matrix as a nested complex list.
    fn choi(&self) -> Vec<Vec<C64>> {
        matrix_to_rows(self.inner.choi().mat())
    }

    /// Apply the channel to a matrix (nested complex lists).
    fn apply(&self, rho: Vec<Vec<C64>>) -> PyResult<Vec<Vec<C64>>> {
        let m = matrix_from_rows(&rho)?;
        self.inner.apply_matrix(&m).map(|out| matrix_to_rows(&out)).map_err(err_py)
    }

    /// The complementary channel into the environment.
    fn complementary(&self) -> Self {
        Self { inner: self.inner.complementary() }
    }

    /// Coherent information at the given input state, in bits.
    fn coherent_information(&self, rho: Vec<Vec<C64>>) -> PyResult<f64> {
        let m = matrix_from_rows(&rho)?;
        let state = DensityMatrix::new(m, 1e-9).map_err(err_py)?;
        coherent_information(&self.inner, &state).map_err(err_py)
    }

    /// Maximized single-letter coherent information. Strategies:
    /// "maximally-mixed" (fixed input), "diagonal" (one-parameter search),
    /// "full-qubit" (Bloch-vector search, qubit channels only).
    #[pyo3(signature = (strategy = "diagonal"))]
    fn q1_lower(&self, strategy: &str) -> PyResult<f64> {
        let strategy = match strategy {
            "maximally-mixed" => InputStrategy::MaximallyMixed,
            "diagonal" => InputStrategy::Diagonal,
            "full-qubit" => InputStrategy::FullQubit,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown strategy {other:?}; use \"maximally-mixed\", \"diagonal\", or \"full-qubit\""
                )))
            }
        };
        q1_maximize(&self.inner, strategy).map_err(err_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Channel(dim_in={}, dim_out={}, kraus_count={})",
            self.inner.dim_in(),
            self.inner.dim_out(),
            self.inner.kraus_count()
        )
    }
}

/// A flagged extension: component channels with weights, plus flag states
/// appended to the output to mark which component acted.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct FlaggedExtension {
    inner: FlaggedSpec,
}

#[pymethods]
impl FlaggedExtension {
    /// Build from (weight, channel) pairs and one flag vector per component.
    #[new]
    fn new(components: Vec<(f64, Channel)>, flags: Vec<Vec<C64>>) -> PyResult<Self> {
        let comps = components.into_iter().map(|(w, ch)| (w, ch.inner)).collect();
        FlaggedSpec::new(comps, flags).map(|inner| Self { inner }).map_err(err_py)
    }

    /// The bound-minimizing depolarizing extension at (d, p), with its bound.
    #[staticmethod]
    fn depolarizing_optimal(d: u32, p: f64) -> PyResult<(Self, f64)> {
        zoo::dep_optimal_spec(d, p).map(|(inner, v)| (Self { inner }, v)).map_err(err_py)
    }

    /// The bound-minimizing BB84 extension at p, with its bound.
    #[staticmethod]
    fn bb84_optimal(p: f64) -> PyResult<(Self, f64)> {
        zoo::bb84_optimal_spec(p).map(|(inner, v)| (Self { inner }, v)).map_err(err_py)
    }

    /// The bound-minimizing extension of half-mixing damping at y, with its bound.
    #[staticmethod]
    fn gad_half_optimal(y: f64) -> PyResult<(Self, f64)> {
        zoo::gad_half_optimal_spec(y).map(|(inner, v)| (Self { inner }, v)).map_err(err_py)
    }

    /// Two-component mixture of the identity (weight u) with another channel,
    /// using the overlap flags that keep the extension degradable.
    #[staticmethod]
    fn unitary_mixture(u: f64, channel: Channel) -> PyResult<Self> {
        unitary_mixture_spec(u, &channel.inner).map(|inner| Self { inner }).map_err(err_py)
    }

    #[getter]
    fn component_count(&self) -> usize {
        self.inner.component_count()
    }

    #[getter]
    fn flag_dim(&self) -> usize {
        self.inner.flag_dim()
    }

    #[getter]
    fn dim_in(&self) -> usize {
        self.inner.dim_in()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn flags(&self) -> Vec<Vec<C64>> {
        self.inner.flags().to_vec()
    }

    /// The flagged channel itself: ρ ↦ Σ p_i Λ_i(ρ) ⊗ |φ_i⟩⟨φ_i|.
    fn build(&self) -> PyResult<Channel> {
        build_flagged(&self.inner).map(|inner| Channel { inner }).map_err(err_py)
    }

    /// The plain (unflagged) mixture of the components.
    fn mixture(&self) -> Channel {
        Channel { inner: self.inner.mixture() }
    }

    /// Whether the sufficient degradability condition holds, with its residual.
    #[pyo3(signature = (tol = 1e-9))]
    fn check_degradability(&self, tol: f64) -> PyResult<(bool, f64)> {
        check_degradability(&self.inner, tol).map_err(err_py)
    }

    /// Choi distance between the degraded flagged channel and its complement.
    fn degrading_residual(&self) -> PyResult<f64> {
        degrading_residual(&self.inner).map_err(err_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "FlaggedExtension(components={}, flag_dim={}, dim_in={})",
            self.inner.component_count(),
            self.inner.flag_dim(),
            self.inner.dim_in()
        )
    }
}

/// Analytic cloning-based upper bound for the depolarizing channel.
#[pyfunction]
fn no_cloning_bound(d: u32, p: f64) -> f64 {
    zoo::no_cloning_bound(d, p)
}

/// Quantum capacity of amplitude damping with decay y (zero for y ≥ 1/2).
#[pyfunction]
fn ad_capacity(y: f64) -> f64 {
    zoo::ad_capacity(y)
}

/// Best depolarizing upper bound from the one-parameter flag family.
#[pyfunction]
fn dep_fmin_bound(d: u32, p: f64) -> PyResult<f64> {
    zoo::dep_fmin_bound(d, p).map_err(err_py)
}

/// Best BB84 upper bound from the three-parameter flag family.
#[pyfunction]
fn bb84_fmin_bound(p: f64) -> PyResult<f64> {
    zoo::bb84_fmin_bound(p).map_err(err_py)
}

/// BB84 bound at the fixed reference flags (a, b, c) = (1, 1, 0).
#[pyfunction]
fn bb84_at_110(p: f64) -> PyResult<f64> {
    zoo::bb84_at_110(p).map_err(err_py)
}

/// Upper bound for half-mixing generalized amplitude damping at decay y.
#[pyfunction]
fn gad_fmin_half(y: f64) -> PyResult<f64> {
    zoo::gad_fmin_half(y).map_err(err_py)
}

/// Convex-combination upper bound for generalized amplitude damping.
#[pyfunction]
fn gad_conv_bound(y: f64, n: f64) -> PyResult<f64> {
    zoo::gad_conv_bound(y, n).map_err(err_py)
}

/// Depolarizing bound curves on a grid: list of (label, [(p, bits)]).
#[pyfunction]
fn dep_pipeline(d: u32, grid: Vec<f64>) -> PyResult<Vec<(String, Vec<(f64, f64)>)>> {
    zoo::dep_pipeline(d, &grid).map(curves_to_py).map_err(err_py)
}

/// BB84 bound curves on a grid: list of (label, [(p, bits)]).
#[pyfunction]
fn bb84_pipeline(grid: Vec<f64>) -> PyResult<Vec<(String, Vec<(f64, f64)>)>> {
    zoo::bb84_pipeline(&grid).map(curves_to_py).map_err(err_py)
}

/// Generalized-amplitude-damping bound curves at thermal mixing n on a grid
/// of decay probabilities: list of (label, [(y, bits)]).
#[pyfunction]
fn gad_pipeline(n: f64, grid: Vec<f64>) -> PyResult<Vec<(String, Vec<(f64, f64)>)>> {
    zoo::gad_pipeline(n, &grid).map(curves_to_py).map_err(err_py)
}

#[pymodule]
fn flagcap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Channel>()?;
    m.add_class::<FlaggedExtension>()?;
    m.add_function(wrap_pyfunction!(no_cloning_bound, m)?)?;
    m.add_function(wrap_pyfunction!(ad_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(dep_fmin_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bb84_fmin_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bb84_at_110, m)?)?;
    m.add_function(wrap_pyfunction!(gad_fmin_half, m)?)?;
    m.add_function(wrap_pyfunction!(gad_conv_bound, m)?)?;
    m.add_function(wrap_pyfunction!(dep_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(bb84_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(gad_pipeline, m)?)?;
    Ok(())
}
