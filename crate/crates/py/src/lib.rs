//! Python bindings. Configs cross the boundary as JSON text, reports come
//! back as dicts.

use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qcool::sim::{NoiseModel, NoisePlacement, ProbVector};
use qcool::thermo::{EnergyGap, Temperature};
use qcool::unitary::{CoolingUnitary as CoreUnitary, StateLabel};
use qcool::{ExcitationProbability, MethodConfig};

fn err(e: qcool::Error) -> PyErr {
    if e.is_resource_limit() {
        PyMemoryError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn prob(p: f64) -> PyResult<ExcitationProbability> {
    ExcitationProbability::new(p).map_err(err)
}

fn config(text: &str) -> PyResult<MethodConfig> {
    MethodConfig::from_json(text).map_err(err)
}

fn gap(freq_ghz: f64) -> PyResult<EnergyGap> {
    EnergyGap::from_ghz(freq_ghz).map_err(err)
}

fn vector(entries: Vec<f64>) -> PyResult<ProbVector> {
    let n = entries.len().trailing_zeros() as usize;
    ProbVector::new(n, entries).map_err(err)
}

fn placement(name: &str) -> PyResult<NoisePlacement> {
    match name {
        "per_gate" => Ok(NoisePlacement::PerGate),
        "per_layer" => Ok(NoisePlacement::PerLayer),
        other => Err(PyValueError::new_err(format!(
            "unknown placement {other:?}"
        ))),
    }
}

fn to_py_json<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Permutation unitary on `n_qubits` qubits.
#[pyclass(module = "pyqcool", frozen)]
struct CoolingUnitary {
    inner: CoreUnitary,
}

#[pymethods]
impl CoolingUnitary {
    /// Cycles of bitstrings or integer indices, e.g. `[["011", "100"]]`.
    #[new]
    fn new(cycles: Vec<Vec<Bound<'_, PyAny>>>, n_qubits: usize) -> PyResult<Self> {
        let labels = cycles
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| match x.extract::<u64>() {
                        Ok(i) => Ok(StateLabel::Index(i)),
                        Err(_) => x.extract::<String>().map(StateLabel::Bits),
                    })
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = CoreUnitary::from_cycles(&labels, n_qubits).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn identity(n_qubits: usize) -> PyResult<Self> {
        Ok(Self {
            inner: CoreUnitary::identity(n_qubits).map_err(err)?,
        })
    }

    /// Built-in protocol: "ppa", "mirror" or "minimal_work".
    #[staticmethod]
    fn protocol(name: &str, n_qubits: usize) -> PyResult<Self> {
        let kind = qcool::ProtocolKind::from_name(name).map_err(err)?;
        Ok(Self {
            inner: kind.unitary(n_qubits).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_mapping(mapping: Vec<usize>, n_qubits: usize) -> PyResult<Self> {
        Ok(Self {
            inner: CoreUnitary::from_mapping(&mapping, n_qubits).map_err(err)?,
        })
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    /// `mapping()[src]` is the destination of basis state `src`.
    fn mapping(&self) -> Vec<usize> {
        self.inner.mapping()
    }

    fn cycles(&self) -> Vec<Vec<String>> {
        self.inner.cycle_labels()
    }

    fn apply(&self, probabilities: Vec<f64>) -> PyResult<Vec<f64>> {
        let v = vector(probabilities)?;
        Ok(self
            .inner
            .apply_to_prob_vector(&v)
            .map_err(err)?
            .into_entries())
    }

    /// `self @ other`: `other` acts first.
    fn compose(&self, other: &CoolingUnitary) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.compose(&other.inner).map_err(err)?,
        })
    }

    fn __matmul__(&self, other: &CoolingUnitary) -> PyResult<Self> {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        Self {
            inner: self.inner.inverse(),
        }
    }

    fn memory_footprint(&self) -> usize {
        self.inner.memory_footprint()
    }

    fn to_dense(&self) -> PyResult<Vec<Vec<(f64, f64)>>> {
        let dense = self.inner.to_dense().map_err(err)?;
        Ok(dense
            .rows()
            .map(|row| row.iter().map(|z| (z.re, z.im)).collect())
            .collect())
    }

    fn work_cost(&self, probabilities: Vec<f64>) -> PyResult<f64> {
        let v = vector(probabilities)?;
        qcool::work_cost(&self.inner, &v, EnergyGap::unit()).map_err(err)
    }

    fn circuit(&self) -> PyResult<Circuit> {
        Ok(Circuit {
            inner: qcool::synthesize_circuit(&self.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "CoolingUnitary(n_qubits={}, cycles={})",
            self.inner.n_qubits(),
            self.inner.cycles().len()
        )
    }
}

type InstructionTuple = (Option<usize>, Vec<(usize, bool)>);

/// Multi-controlled-NOT circuit with optional reset layers.
#[pyclass(module = "pyqcool", frozen)]
struct Circuit {
    inner: qcool::Circuit,
}

#[pymethods]
impl Circuit {
    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_qasm(&self) -> String {
        qcool::export_qasm(&self.inner)
    }

    fn gate_count<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py_json(py, &qcool::gate_count(&self.inner))
    }

    fn simplify(&self) -> Self {
        Self {
            inner: qcool::simplify(&self.inner),
        }
    }

    /// Gates as `(target, [(control, polarity), ...])`; resets as `(None, qubits)`.
    fn instructions(&self) -> Vec<InstructionTuple> {
        self.inner
            .instructions()
            .iter()
            .map(|i| match i {
                qcool::Instruction::McNot(g) => (Some(g.target()), g.controls().to_vec()),
                qcool::Instruction::Reset(r) => {
                    (None, r.qubits().iter().map(|&q| (q, true)).collect())
                }
            })
            .collect()
    }

    #[pyo3(signature = (probabilities, noise=0.0, bath_p=0.0, placement="per_gate"))]
    fn simulate(
        &self,
        probabilities: Vec<f64>,
        noise: f64,
        bath_p: f64,
        placement: &str,
    ) -> PyResult<Vec<f64>> {
        let v = vector(probabilities)?;
        let model = NoiseModel::new(noise, self::placement(placement)?).map_err(err)?;
        let out = qcool::simulate(&self.inner, &v, model, prob(bath_p)?).map_err(err)?;
        Ok(out.into_entries())
    }
}

#[pyfunction]
fn probability_from_temperature(temp_mk: f64, freq_ghz: f64) -> PyResult<f64> {
    let t = Temperature::from_millikelvin(temp_mk).map_err(err)?;
    Ok(qcool::probability_from_temperature(t, gap(freq_ghz)?).value())
}

/// Millikelvin; infinite for `p >= 1/2`.
#[pyfunction]
fn temperature_from_probability(p: f64, freq_ghz: f64) -> PyResult<f64> {
    Ok(qcool::thermo::reported_temperature(prob(p)?, gap(freq_ghz)?).millikelvin())
}

#[pyfunction]
fn thermal_vector(probabilities: Vec<f64>) -> PyResult<Vec<f64>> {
    let spec = qcool::ThermalSpec::new(probabilities).map_err(err)?;
    Ok(qcool::thermal_product_vector(&spec)
        .map_err(err)?
        .into_entries())
}

#[pyfunction]
fn dynamic_final_p(p: f64, n: usize) -> PyResult<f64> {
    Ok(qcool::dynamic_final_p(prob(p)?, n).map_err(err)?.value())
}

#[pyfunction]
fn sub_optimal_final_p(p: f64, cluster_size: usize, rounds: usize) -> PyResult<f64> {
    Ok(qcool::sub_optimal_final_p(prob(p)?, cluster_size, rounds)
        .map_err(err)?
        .value())
}

#[pyfunction]
fn semi_open_final_p(p: f64, cluster_sizes: Vec<usize>) -> PyResult<f64> {
    Ok(qcool::semi_open_final_p(prob(p)?, &cluster_sizes)
        .map_err(err)?
        .value())
}

#[pyfunction]
fn hbac_final_p(
    p: f64,
    cluster_size: usize,
    rounds: usize,
    reset_qubits: Vec<usize>,
) -> PyResult<f64> {
    Ok(
        qcool::hbac_final_p(prob(p)?, cluster_size, rounds, &reset_qubits)
            .map_err(err)?
            .value(),
    )
}

/// Final population for a JSON method config.
#[pyfunction]
fn final_p(config_json: &str, p: f64) -> PyResult<f64> {
    Ok(qcool::final_p(&config(config_json)?, prob(p)?)
        .map_err(err)?
        .value())
}

#[pyfunction]
#[pyo3(signature = (config_json, p=0.1))]
fn build_circuit(config_json: &str, p: f64) -> PyResult<Circuit> {
    let built = qcool::build_circuit(&config(config_json)?, prob(p)?).map_err(err)?;
    Ok(Circuit {
        inner: built.circuit,
    })
}

#[pyfunction]
#[pyo3(signature = (config_json, p, noise, placement="per_gate"))]
fn simulate_method(config_json: &str, p: f64, noise: f64, placement: &str) -> PyResult<f64> {
    let model = NoiseModel::new(noise, self::placement(placement)?).map_err(err)?;
    Ok(
        qcool::simulate_method(&config(config_json)?, prob(p)?, model)
            .map_err(err)?
            .value(),
    )
}

/// Report dict: temperatures in kelvin (None when infinite), work in gap units.
#[pyfunction]
fn analyze<'py>(
    py: Python<'py>,
    config_json: &str,
    temp_mk: f64,
    freq_ghz: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let t = Temperature::from_millikelvin(temp_mk).map_err(err)?;
    let report = qcool::report(&config(config_json)?, t, gap(freq_ghz)?).map_err(err)?;
    let dict = to_py_json(py, &report)?.cast_into::<PyDict>()?;
    dict.set_item("qasm", qcool::export_qasm(&report.circuit))?;
    Ok(dict)
}

#[pymodule]
fn pyqcool(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CoolingUnitary>()?;
    m.add_class::<Circuit>()?;
    m.add_function(wrap_pyfunction!(probability_from_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(temperature_from_probability, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_vector, m)?)?;
    m.add_function(wrap_pyfunction!(dynamic_final_p, m)?)?;
    m.add_function(wrap_pyfunction!(sub_optimal_final_p, m)?)?;
    m.add_function(wrap_pyfunction!(semi_open_final_p, m)?)?;
    m.add_function(wrap_pyfunction!(hbac_final_p, m)?)?;
    m.add_function(wrap_pyfunction!(final_p, m)?)?;
    m.add_function(wrap_pyfunction!(build_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_method, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    Ok(())
}
