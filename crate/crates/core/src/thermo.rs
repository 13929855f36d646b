//! Temperature and excitation-probability conversions for two-level systems,
//! and the product thermal distribution of a register.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::ProbVector;

/// Planck constant, J·s (CODATA 2018, exact).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Default largest register for which a full probability vector is built.
pub const DEFAULT_VECTOR_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyUnits {
    /// SI joules; temperatures are in kelvin.
    Joules,
    /// The gap itself is the unit and `k_B = 1`, so temperatures are in
    /// units of the gap as well.
    Natural,
}

/// Energy splitting of a single qubit, shared by every qubit in a register.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGap {
    value: f64,
    units: EnergyUnits,
}

impl EnergyGap {
    pub fn from_joules(joules: f64) -> Result<Self> {
        if !(joules.is_finite() && joules > 0.0) {
            return Err(Error::InvalidEnergyGap(joules));
        }
        Ok(Self {
            value: joules,
            units: EnergyUnits::Joules,
        })
    }

    /// Gap `h·f` of a qubit with resonant frequency `ghz`.
    pub fn from_ghz(ghz: f64) -> Result<Self> {
        if !(ghz.is_finite() && ghz > 0.0) {
            return Err(Error::InvalidEnergyGap(ghz));
        }
        Self::from_joules(PLANCK * ghz * 1e9)
    }

    /// The dimensionless gap `ħω = 1`, with `k_B = 1`.
    pub fn unit() -> Self {
        Self {
            value: 1.0,
            units: EnergyUnits::Natural,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn units(&self) -> EnergyUnits {
        self.units
    }

    fn boltzmann(&self) -> f64 {
        match self.units {
            EnergyUnits::Joules => BOLTZMANN,
            EnergyUnits::Natural => 1.0,
        }
    }

    /// `E / (k_B T)`; infinite at `T = 0`, zero at `T = ∞`.
    pub fn beta_energy(&self, t: Temperature) -> f64 {
        self.value / (self.boltzmann() * t.kelvin())
    }
}

/// A nonnegative temperature, possibly infinite. Interpreted in kelvin for a
/// gap in joules, in gap units for [`EnergyGap::unit`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Temperature(f64);

impl Temperature {
    pub fn from_kelvin(kelvin: f64) -> Result<Self> {
        if kelvin.is_nan() || kelvin < 0.0 {
            return Err(Error::InvalidTemperature(kelvin));
        }
        Ok(Self(kelvin))
    }

    pub fn from_millikelvin(mk: f64) -> Result<Self> {
        Self::from_kelvin(mk * 1e-3)
    }

    pub const fn zero() -> Self {
        Self(0.0)
    }

    pub const fn infinite() -> Self {
        Self(f64::INFINITY)
    }

    pub fn kelvin(&self) -> f64 {
        self.0
    }

    pub fn millikelvin(&self) -> f64 {
        self.0 * 1e3
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }
}

/// Population of the `|1⟩` level of a qubit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ExcitationProbability(f64);

impl ExcitationProbability {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::InvalidProbability(p))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ExcitationProbability {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<ExcitationProbability> for f64 {
    fn from(p: ExcitationProbability) -> f64 {
        p.0
    }
}

/// Per-qubit excitation probabilities of a product thermal state, qubit 0 first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalSpec {
    per_qubit: Vec<ExcitationProbability>,
}

impl ThermalSpec {
    pub fn new(per_qubit: Vec<f64>) -> Result<Self> {
        if per_qubit.is_empty() {
            return Err(Error::InvalidConfig(
                "thermal spec needs at least one qubit".into(),
            ));
        }
        let per_qubit = per_qubit
            .into_iter()
            .map(ExcitationProbability::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { per_qubit })
    }

    /// `n_qubits` identical qubits at excitation probability `p`.
    pub fn homogeneous(p: f64, n_qubits: usize) -> Result<Self> {
        Self::new(vec![p; n_qubits])
    }

    pub fn n_qubits(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_qubit.iter().map(|p| p.0)
    }

    pub fn get(&self, qubit: usize) -> f64 {
        self.per_qubit[qubit].0
    }
}

/// Gibbs population of the excited level: `1 / (1 + exp(E / k_B T))`.
pub fn probability_from_temperature(t: Temperature, gap: EnergyGap) -> ExcitationProbability {
    if t.kelvin() == 0.0 {
        return ExcitationProbability(0.0);
    }
    if t.is_infinite() {
        return ExcitationProbability(0.5);
    }
    let x = gap.beta_energy(t);
    // exp(-x) / (1 + exp(-x)) keeps full relative precision when x is large
    let e = (-x).exp();
    ExcitationProbability(e / (1.0 + e))
}

/// Inverse of [`probability_from_temperature`].
pub fn temperature_from_probability(
    p: ExcitationProbability,
    gap: EnergyGap,
) -> Result<Temperature> {
    let p = p.value();
    if p == 0.0 {
        return Ok(Temperature::zero());
    }
    if p == 0.5 {
        return Err(Error::InfiniteTemperature);
    }
    if p > 0.5 {
        return Err(Error::PopulationInversion(p));
    }
    // ln((1-p)/p) = ln1p(-p) - ln(p), accurate for tiny p
    let log_ratio = (-p).ln_1p() - p.ln();
    Ok(Temperature(gap.value() / (gap.boltzmann() * log_ratio)))
}

/// Temperature for reporting: any `p ≥ 1/2` is shown as infinite instead of
/// failing, so noisy sweeps keep going.
pub fn reported_temperature(p: ExcitationProbability, gap: EnergyGap) -> Temperature {
    temperature_from_probability(p, gap).unwrap_or(Temperature::infinite())
}

/// Product distribution of `spec` over all `2^n` basis states.
pub fn thermal_product_vector(spec: &ThermalSpec) -> Result<ProbVector> {
    thermal_product_vector_with_cap(spec, DEFAULT_VECTOR_CAP)
}

pub fn thermal_product_vector_with_cap(spec: &ThermalSpec, cap: usize) -> Result<ProbVector> {
    let n = spec.n_qubits();
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "probability vector",
            requested: n,
            cap,
        });
    }
    // Doubling, most significant qubit first: new index = (old << 1) | bit.
    let mut entries = vec![1.0];
    for p in spec.probabilities() {
        entries = entries
            .iter()
            .flat_map(|&v| [v * (1.0 - p), v * p])
            .collect();
    }
    Ok(ProbVector::from_entries_unchecked(n, entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz5() -> EnergyGap {
        EnergyGap::from_ghz(5.0).unwrap()
    }

    #[test]
    fn infinite_temperature_is_half() {
        let p = probability_from_temperature(Temperature::infinite(), ghz5());
        assert_eq!(p.value(), 0.5);
        assert_eq!(
            probability_from_temperature(Temperature::zero(), ghz5()).value(),
            0.0
        );
    }

    #[test]
    fn ln3_gives_quarter() {
        let gap = EnergyGap::unit();
        let t = Temperature::from_kelvin(1.0 / 3f64.ln()).unwrap();
        let p = probability_from_temperature(t, gap).value();
        assert!((p - 0.25).abs() < 1e-15);
        let back =
            temperature_from_probability(ExcitationProbability::new(0.25).unwrap(), gap).unwrap();
        assert!((back.kelvin() - 1.0 / 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn fifty_millikelvin_at_five_ghz() {
        // high-precision evaluation with CODATA constants: 0.0081687014704167470
        let p = probability_from_temperature(Temperature::from_millikelvin(50.0).unwrap(), ghz5());
        assert!((p.value() - 0.008_168_701_470_416_747).abs() < 1e-15);
    }

    #[test]
    fn inverse_errors() {
        let gap = ghz5();
        let half = ExcitationProbability::new(0.5).unwrap();
        assert_eq!(
            temperature_from_probability(half, gap),
            Err(Error::InfiniteTemperature)
        );
        let inv = ExcitationProbability::new(0.7).unwrap();
        assert!(matches!(
            temperature_from_probability(inv, gap),
            Err(Error::PopulationInversion(_))
        ));
        let zero = ExcitationProbability::new(0.0).unwrap();
        assert_eq!(
            temperature_from_probability(zero, gap).unwrap().kelvin(),
            0.0
        );
        assert!(reported_temperature(half, gap).is_infinite());
        assert!(reported_temperature(inv, gap).is_infinite());
    }

    #[test]
    fn roundtrip_twelve_digits() {
        let gap = ghz5();
        for kelvin in [1e-3, 50e-3, 1.0] {
            let t = Temperature::from_kelvin(kelvin).unwrap();
            let back =
                temperature_from_probability(probability_from_temperature(t, gap), gap).unwrap();
            assert!(
                ((back.kelvin() - kelvin) / kelvin).abs() < 1e-12,
                "{kelvin}"
            );
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ExcitationProbability::new(1.5).is_err());
        assert!(ExcitationProbability::new(f64::NAN).is_err());
        assert!(Temperature::from_kelvin(-1.0).is_err());
        assert!(EnergyGap::from_ghz(0.0).is_err());
        assert!(ThermalSpec::new(vec![]).is_err());
    }

    #[test]
    fn product_vectors() {
        let v = thermal_product_vector(&ThermalSpec::new(vec![0.1]).unwrap()).unwrap();
        assert_eq!(v.entries(), &[0.9, 0.1]);
        let v = thermal_product_vector(&ThermalSpec::homogeneous(0.1, 2).unwrap()).unwrap();
        let expect = [0.81, 0.09, 0.09, 0.01];
        for (a, b) in v.entries().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let v = thermal_product_vector(&ThermalSpec::new(vec![0.028, 0.1, 0.1]).unwrap()).unwrap();
        assert!((v.entries()[0] - 0.972 * 0.81).abs() < 1e-15);
        // qubit 0 is the most significant bit
        assert!((v.entries()[0b100] - 0.028 * 0.81).abs() < 1e-15);
        assert!((v.entries()[0b001] - 0.972 * 0.09).abs() < 1e-15);
    }

    #[test]
    fn product_vector_cap() {
        let spec = ThermalSpec::homogeneous(0.1, 5).unwrap();
        let err = thermal_product_vector_with_cap(&spec, 4).unwrap_err();
        assert!(err.is_resource_limit());
    }
}
