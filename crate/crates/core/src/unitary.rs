//! Cooling unitaries: generalized permutation matrices stored as cycle lists
//! plus a compressed-sparse-row layout with one nonzero per row.
//!
//! Row index is the destination state and column index the source state, so
//! `U[dest][src]` holds the phase of the map `src → dest`.

use std::collections::HashSet;
use std::fmt;

use num_complex::{Complex32, Complex64};
use serde::{Deserialize, Serialize};

use crate::basis::to_bitstring;
use crate::error::{Error, Result};
use crate::sim::ProbVector;

/// Default largest register for explicit dense conversion.
pub const DEFAULT_DENSE_CAP: usize = 12;

/// Largest register a [`CoolingUnitary`] may address (32-bit CSR indices).
pub const MAX_UNITARY_QUBITS: usize = 30;

const PHASE_TOLERANCE: f64 = 1e-6;

/// A basis state given either as a bitstring (qubit 0 first) or as an index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateLabel {
    Index(u64),
    Bits(String),
}

impl From<&str> for StateLabel {
    fn from(s: &str) -> Self {
        StateLabel::Bits(s.to_owned())
    }
}

impl From<u64> for StateLabel {
    fn from(i: u64) -> Self {
        StateLabel::Index(i)
    }
}

impl From<usize> for StateLabel {
    fn from(i: usize) -> Self {
        StateLabel::Index(i as u64)
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Index(i) => write!(f, "{i}"),
            StateLabel::Bits(s) => write!(f, "\"{s}\""),
        }
    }
}

/// Resolves a label to its basis index on an `n_qubits` register.
pub fn parse_state_label(label: &StateLabel, n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 || n_qubits > MAX_UNITARY_QUBITS {
        return Err(Error::InvalidConfig(format!(
            "register size {n_qubits} outside 1..={MAX_UNITARY_QUBITS}"
        )));
    }
    match label {
        StateLabel::Index(i) => {
            if *i >= 1u64 << n_qubits {
                Err(Error::IndexOutOfRange {
                    index: *i,
                    n_qubits,
                })
            } else {
                Ok(*i as usize)
            }
        }
        StateLabel::Bits(s) => {
            let invalid = || Error::InvalidLabel {
                label: s.clone(),
                n_qubits,
            };
            if s.len() != n_qubits {
                return Err(invalid());
            }
            s.bytes().try_fold(0usize, |acc, b| match b {
                b'0' => Ok(acc << 1),
                b'1' => Ok((acc << 1) | 1),
                _ => Err(invalid()),
            })
        }
    }
}

/// A cyclic permutation `i_1 → i_2 → … → i_m → i_1` of distinct basis states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    pub fn new(states: Vec<usize>, n_qubits: usize) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::DegenerateCycle(format!(
                "cycle {states:?} has fewer than two states"
            )));
        }
        let dim = 1usize << n_qubits;
        let mut seen = HashSet::with_capacity(states.len());
        for &s in &states {
            if s >= dim {
                return Err(Error::IndexOutOfRange {
                    index: s as u64,
                    n_qubits,
                });
            }
            if !seen.insert(s) {
                return Err(Error::DegenerateCycle(format!(
                    "state {} repeated within cycle {states:?}",
                    to_bitstring(s, n_qubits)
                )));
            }
        }
        Ok(Self(states))
    }

    pub fn states(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Precision of the stored nonzero values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValuePrecision {
    /// 8-byte complex (two `f32`).
    #[default]
    Complex64,
    /// 4-byte real; only for unitaries whose phases are all `±1`.
    Real32,
}

#[derive(Debug, Clone, PartialEq)]
enum CsrValues {
    Complex(Vec<Complex32>),
    Real(Vec<f32>),
}

impl CsrValues {
    fn get(&self, row: usize) -> Complex64 {
        match self {
            CsrValues::Complex(v) => Complex64::new(f64::from(v[row].re), f64::from(v[row].im)),
            CsrValues::Real(v) => Complex64::new(f64::from(v[row]), 0.0),
        }
    }

    fn bytes(&self) -> usize {
        match self {
            CsrValues::Complex(v) => v.len() * std::mem::size_of::<Complex32>(),
            CsrValues::Real(v) => v.len() * std::mem::size_of::<f32>(),
        }
    }
}

/// CSR storage of a generalized permutation matrix.
#[derive(Debug, Clone, PartialEq)]
struct Csr {
    values: CsrValues,
    col_indices: Vec<u32>,
    row_offsets: Vec<u32>,
}

impl Csr {
    fn from_sources(sources: Vec<u32>, phases: Option<Vec<Complex32>>) -> Self {
        let dim = sources.len();
        let values =
            CsrValues::Complex(phases.unwrap_or_else(|| vec![Complex32::new(1.0, 0.0); dim]));
        Self {
            values,
            col_indices: sources,
            row_offsets: (0..=dim as u32).collect(),
        }
    }
}

/// A generalized permutation matrix on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct CoolingUnitary {
    n_qubits: usize,
    cycles: Vec<Cycle>,
    csr: Csr,
}

impl CoolingUnitary {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_index_cycles(Vec::new(), n_qubits)
    }

    /// Builds a unitary from cycles of labels, mixing strings and integers freely.
    pub fn from_cycles(cycles: &[Vec<StateLabel>], n_qubits: usize) -> Result<Self> {
        let cycles = cycles
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| parse_state_label(l, n_qubits))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_index_cycles(cycles, n_qubits)
    }

    pub fn from_index_cycles(cycles: Vec<Vec<usize>>, n_qubits: usize) -> Result<Self> {
        Self::build(cycles, n_qubits, None)
    }

    /// Like [`from_index_cycles`](Self::from_index_cycles) with an explicit
    /// unit-modulus phase for every row (destination state).
    pub fn from_cycles_with_phases(
        cycles: Vec<Vec<usize>>,
        n_qubits: usize,
        phases: Vec<Complex64>,
    ) -> Result<Self> {
        Self::build(cycles, n_qubits, Some(phases))
    }

    fn build(
        cycles: Vec<Vec<usize>>,
        n_qubits: usize,
        phases: Option<Vec<Complex64>>,
    ) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        let cycles = cycles
            .into_iter()
            .map(|c| Cycle::new(c, n_qubits))
            .collect::<Result<Vec<_>>>()?;

        let mut sources: Vec<u32> = (0..dim as u32).collect();
        let mut touched = vec![false; dim];
        for cycle in &cycles {
            for &s in cycle.states() {
                if std::mem::replace(&mut touched[s], true) {
                    return Err(Error::OverlappingCycles(s));
                }
            }
            let st = cycle.states();
            for (k, &src) in st.iter().enumerate() {
                let dest = st[(k + 1) % st.len()];
                sources[dest] = src as u32;
            }
        }

        let phases = match phases {
            None => None,
            Some(ph) => {
                if ph.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: ph.len(),
                    });
                }
                if let Some(bad) = ph.iter().find(|z| (z.norm() - 1.0).abs() > PHASE_TOLERANCE) {
                    return Err(Error::InvalidConfig(format!(
                        "phase {bad} does not have unit modulus"
                    )));
                }
                Some(
                    ph.iter()
                        .map(|z| Complex32::new(z.re as f32, z.im as f32))
                        .collect(),
                )
            }
        };

        Ok(Self {
            n_qubits,
            cycles,
            csr: Csr::from_sources(sources, phases),
        })
    }

    /// Builds a phase-free unitary from `mapping[src] = dest`; cycles are the
    /// canonical decomposition (each starts at its smallest state, ordered by
    /// that state).
    pub fn from_mapping(mapping: &[usize], n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if mapping.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: mapping.len(),
            });
        }
        let mut sources = vec![u32::MAX; dim];
        for (src, &dest) in mapping.iter().enumerate() {
            if dest >= dim || sources[dest] != u32::MAX {
                return Err(Error::InvalidConfig(format!(
                    "mapping is not a permutation (destination {dest})"
                )));
            }
            sources[dest] = src as u32;
        }
        Ok(Self {
            n_qubits,
            cycles: canonical_cycles(mapping),
            csr: Csr::from_sources(sources, None),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Cycles as constructed. For unitaries derived from other unitaries
    /// (compose, inverse, mapping) these are the canonical decomposition.
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Source state feeding row `dest`.
    pub fn source(&self, dest: usize) -> usize {
        self.csr.col_indices[dest] as usize
    }

    /// `mapping()[src]` is the destination of basis state `src`.
    pub fn mapping(&self) -> Vec<usize> {
        let mut map = vec![0; self.dim()];
        for (dest, &src) in self.csr.col_indices.iter().enumerate() {
            map[src as usize] = dest;
        }
        map
    }

    /// Phase stored in row `dest`.
    pub fn phase(&self, dest: usize) -> Complex64 {
        self.csr.values.get(dest)
    }

    pub fn is_phase_free(&self) -> bool {
        (0..self.dim()).all(|r| self.phase(r) == Complex64::new(1.0, 0.0))
    }

    pub fn is_identity(&self) -> bool {
        self.csr
            .col_indices
            .iter()
            .enumerate()
            .all(|(d, &s)| d == s as usize)
            && self.is_phase_free()
    }

    pub fn precision(&self) -> ValuePrecision {
        match self.csr.values {
            CsrValues::Complex(_) => ValuePrecision::Complex64,
            CsrValues::Real(_) => ValuePrecision::Real32,
        }
    }

    /// Re-stores the values at `precision`. Real storage needs all phases `±1`.
    pub fn with_precision(mut self, precision: ValuePrecision) -> Result<Self> {
        let dim = self.dim();
        self.csr.values = match precision {
            ValuePrecision::Complex64 => CsrValues::Complex(
                (0..dim)
                    .map(|r| {
                        let z = self.phase(r);
                        Complex32::new(z.re as f32, z.im as f32)
                    })
                    .collect(),
            ),
            ValuePrecision::Real32 => {
                let mut vals = Vec::with_capacity(dim);
                for r in 0..dim {
                    let z = self.phase(r);
                    if z.im != 0.0 || (z.re != 1.0 && z.re != -1.0) {
                        return Err(Error::InvalidConfig(format!(
                            "phase {z} cannot be stored as a real value"
                        )));
                    }
                    vals.push(z.re as f32);
                }
                CsrValues::Real(vals)
            }
        };
        Ok(self)
    }

    /// Diagonal of `U ρ U†` for diagonal `ρ`; phases cancel.
    pub fn apply_to_prob_vector(&self, v: &ProbVector) -> Result<ProbVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: v.len(),
            });
        }
        let src = v.entries();
        let entries = self
            .csr
            .col_indices
            .iter()
            .map(|&s| src[s as usize])
            .collect();
        Ok(ProbVector::from_entries_unchecked(self.n_qubits, entries))
    }

    /// Matrix product `self · other` in `O(2^n)`.
    pub fn compose(&self, other: &CoolingUnitary) -> Result<CoolingUnitary> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        // (A·B)[d][s] = A[d][m] · B[m][s] with m = colA[d], s = colB[m]
        let dim = self.dim();
        let mut sources = Vec::with_capacity(dim);
        let mut phases = Vec::with_capacity(dim);
        let mut phase_free = true;
        for d in 0..dim {
            let m = self.csr.col_indices[d] as usize;
            sources.push(other.csr.col_indices[m]);
            let z = self.phase(d) * other.phase(m);
            phase_free &= z == Complex64::new(1.0, 0.0);
            phases.push(Complex32::new(z.re as f32, z.im as f32));
        }
        Ok(self.derived(sources, (!phase_free).then_some(phases)))
    }

    pub fn inverse(&self) -> CoolingUnitary {
        // (U†)[s][d] = conj(U[d][s])
        let dim = self.dim();
        let mut sources = vec![0u32; dim];
        let mut phases = vec![Complex32::new(1.0, 0.0); dim];
        for d in 0..dim {
            let s = self.csr.col_indices[d] as usize;
            sources[s] = d as u32;
            let z = self.phase(d).conj();
            phases[s] = Complex32::new(z.re as f32, z.im as f32);
        }
        let phases = (!self.is_phase_free()).then_some(phases);
        self.derived(sources, phases)
    }

    fn derived(&self, sources: Vec<u32>, phases: Option<Vec<Complex32>>) -> CoolingUnitary {
        let mut mapping = vec![0usize; sources.len()];
        for (d, &s) in sources.iter().enumerate() {
            mapping[s as usize] = d;
        }
        let out = CoolingUnitary {
            n_qubits: self.n_qubits,
            cycles: canonical_cycles(&mapping),
            csr: Csr::from_sources(sources, phases),
        };
        if self.precision() == ValuePrecision::Real32 {
            // products of ±1 stay real
            out.clone()
                .with_precision(ValuePrecision::Real32)
                .unwrap_or(out)
        } else {
            out
        }
    }

    /// Explicit `2^n × 2^n` matrix.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        self.to_dense_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn to_dense_with_cap(&self, cap: usize) -> Result<DenseMatrix> {
        if self.n_qubits > cap {
            return Err(Error::ResourceLimit {
                what: "dense unitary",
                requested: self.n_qubits,
                cap,
            });
        }
        let dim = self.dim();
        let mut m = DenseMatrix::zeros(dim);
        for d in 0..dim {
            m.set(d, self.source(d), self.phase(d));
        }
        Ok(m)
    }

    /// Bytes held by the sparse layout: values, column indices, row offsets.
    pub fn memory_footprint(&self) -> usize {
        self.csr.values.bytes()
            + self.csr.col_indices.len() * std::mem::size_of::<u32>()
            + self.csr.row_offsets.len() * std::mem::size_of::<u32>()
    }

    /// Cycles written as bitstrings, for display and serialization.
    pub fn cycle_labels(&self) -> Vec<Vec<String>> {
        self.cycles
            .iter()
            .map(|c| {
                c.states()
                    .iter()
                    .map(|&s| to_bitstring(s, self.n_qubits))
                    .collect()
            })
            .collect()
    }
}

/// Bytes of an explicit `2^n × 2^n` array of 4-byte reals.
pub fn dense_footprint(n_qubits: usize) -> u64 {
    4 * (1u64 << (2 * n_qubits))
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidConfig(
            "register needs at least one qubit".into(),
        ));
    }
    if n_qubits > MAX_UNITARY_QUBITS {
        return Err(Error::ResourceLimit {
            what: "cooling unitary",
            requested: n_qubits,
            cap: MAX_UNITARY_QUBITS,
        });
    }
    Ok(())
}

/// Canonical cycle decomposition of `mapping[src] = dest`.
pub(crate) fn canonical_cycles(mapping: &[usize]) -> Vec<Cycle> {
    let mut seen = vec![false; mapping.len()];
    let mut cycles = Vec::new();
    for start in 0..mapping.len() {
        if seen[start] || mapping[start] == start {
            continue;
        }
        let mut states = Vec::new();
        let mut s = start;
        while !seen[s] {
            seen[s] = true;
            states.push(s);
            s = mapping[s];
        }
        cycles.push(Cycle(states));
    }
    cycles
}

/// Cycle list file: `{"n": 3, "cycles": [["000", "001", "100"], [0, 1]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleFile {
    pub n: usize,
    pub cycles: Vec<Vec<StateLabel>>,
}

impl CycleFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_unitary(&self) -> Result<CoolingUnitary> {
        CoolingUnitary::from_cycles(&self.cycles, self.n)
    }
}

impl From<&CoolingUnitary> for CycleFile {
    fn from(u: &CoolingUnitary) -> Self {
        CycleFile {
            n: u.n_qubits(),
            cycles: u
                .cycles()
                .iter()
                .map(|c| c.states().iter().map(|&s| StateLabel::from(s)).collect())
                .collect(),
        }
    }
}

/// Row-major explicit matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, z: Complex64) {
        self.data[row * self.dim + col] = z;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    /// Plain `O(dim³)` product.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim, "dense dimension mismatch");
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(items: &[&str]) -> Vec<StateLabel> {
        items.iter().map(|&s| StateLabel::from(s)).collect()
    }

    #[test]
    fn parses_labels() {
        assert_eq!(parse_state_label(&"101".into(), 3).unwrap(), 5);
        assert_eq!(parse_state_label(&"000".into(), 3).unwrap(), 0);
        assert_eq!(parse_state_label(&StateLabel::Index(7), 3).unwrap(), 7);
        assert!(matches!(
            parse_state_label(&StateLabel::Index(8), 3),
            Err(Error::IndexOutOfRange { index: 8, .. })
        ));
        assert!(matches!(
            parse_state_label(&"10".into(), 3),
            Err(Error::InvalidLabel { .. })
        ));
        assert!(matches!(
            parse_state_label(&"1a1".into(), 3),
            Err(Error::InvalidLabel { .. })
        ));
    }

    #[test]
    fn mixed_label_forms_agree() {
        let a = CoolingUnitary::from_cycles(&[labels(&["000", "001", "100"])], 3).unwrap();
        let b = CoolingUnitary::from_cycles(
            &[vec![
                StateLabel::Index(0),
                StateLabel::Index(1),
                "100".into(),
            ]],
            3,
        )
        .unwrap();
        assert_eq!(a.mapping(), b.mapping());
        assert_eq!(a.mapping(), vec![1, 4, 2, 3, 0, 5, 6, 7]);
    }

    #[test]
    fn empty_cycles_is_identity() {
        let u = CoolingUnitary::from_cycles(&[], 2).unwrap();
        assert!(u.is_identity());
        assert!(u.cycles().is_empty());
    }

    #[test]
    fn rejects_overlap_and_repeats() {
        let err = CoolingUnitary::from_cycles(&[labels(&["00", "01"]), labels(&["01", "11"])], 2)
            .unwrap_err();
        assert_eq!(err, Error::OverlappingCycles(1));
        let err = CoolingUnitary::from_cycles(&[labels(&["00", "01", "00"])], 2).unwrap_err();
        assert!(matches!(err, Error::DegenerateCycle(_)));
        let err = CoolingUnitary::from_cycles(&[labels(&["00"])], 2).unwrap_err();
        assert!(matches!(err, Error::DegenerateCycle(_)));
    }

    #[test]
    fn applies_swap_and_cycle() {
        let v = ProbVector::new(
            3,
            vec![0.729, 0.081, 0.081, 0.009, 0.081, 0.009, 0.009, 0.001],
        )
        .unwrap();
        let swap = CoolingUnitary::from_index_cycles(vec![vec![3, 4]], 3).unwrap();
        let out = swap.apply_to_prob_vector(&v).unwrap();
        assert_eq!(
            out.entries(),
            &[0.729, 0.081, 0.081, 0.081, 0.009, 0.009, 0.009, 0.001]
        );

        let cyc = CoolingUnitary::from_index_cycles(vec![vec![0, 1, 4]], 3).unwrap();
        let e0 = ProbVector::basis_state(3, 0).unwrap();
        let out = cyc.apply_to_prob_vector(&e0).unwrap();
        assert_eq!(out.entries()[1], 1.0);

        let wrong = ProbVector::basis_state(2, 0).unwrap();
        assert!(matches!(
            swap.apply_to_prob_vector(&wrong),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compose_inverse_and_involution() {
        let cyc = CoolingUnitary::from_index_cycles(vec![vec![0, 1, 4]], 3).unwrap();
        assert!(cyc.compose(&cyc.inverse()).unwrap().is_identity());
        let swap = CoolingUnitary::from_index_cycles(vec![vec![3, 4]], 3).unwrap();
        assert!(swap.compose(&swap).unwrap().is_identity());
        let other = CoolingUnitary::identity(2).unwrap();
        assert!(swap.compose(&other).is_err());
    }

    #[test]
    fn dense_small_cases() {
        let id = CoolingUnitary::identity(1).unwrap().to_dense().unwrap();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(
            id.rows().collect::<Vec<_>>(),
            vec![&[one, zero][..], &[zero, one][..]]
        );
        let x = CoolingUnitary::from_index_cycles(vec![vec![0, 1]], 1)
            .unwrap()
            .to_dense()
            .unwrap();
        assert_eq!(
            x.rows().collect::<Vec<_>>(),
            vec![&[zero, one][..], &[one, zero][..]]
        );
        let big = CoolingUnitary::identity(5).unwrap();
        assert!(big.to_dense_with_cap(4).unwrap_err().is_resource_limit());
    }

    #[test]
    fn phases_survive_compose_and_inverse() {
        let i = Complex64::new(0.0, 1.0);
        let mut phases = vec![Complex64::new(1.0, 0.0); 4];
        phases[1] = i;
        let u = CoolingUnitary::from_cycles_with_phases(vec![vec![0, 1]], 2, phases).unwrap();
        assert!(!u.is_phase_free());
        assert!(u.compose(&u.inverse()).unwrap().is_identity());
        assert!(u.clone().with_precision(ValuePrecision::Real32).is_err());
        let bad = vec![Complex64::new(2.0, 0.0); 4];
        assert!(CoolingUnitary::from_cycles_with_phases(vec![], 2, bad).is_err());
    }

    #[test]
    fn footprint_layout() {
        let u = CoolingUnitary::identity(8).unwrap();
        // 256 complex values (8 B) + 256 column indices + 257 row offsets (4 B)
        assert_eq!(u.memory_footprint(), 256 * 8 + 256 * 4 + 257 * 4);
        let r = u.with_precision(ValuePrecision::Real32).unwrap();
        assert_eq!(r.memory_footprint(), 3076);
        assert_eq!(dense_footprint(8), 262_144);
        assert_eq!(dense_footprint(14), 1_073_741_824);
    }

    #[test]
    fn cycle_file_roundtrip() {
        let f =
            CycleFile::from_json(r#"{"n": 3, "cycles": [["000", "001", "100"], [3, 6]]}"#).unwrap();
        let u = f.to_unitary().unwrap();
        assert_eq!(u.cycles().len(), 2);
        let back = CycleFile::from(&u).to_unitary().unwrap();
        assert_eq!(back.mapping(), u.mapping());
        assert!(CycleFile::from_json(r#"{"n": 3, "cycles": [], "extra": 1}"#).is_err());
        assert!(CycleFile::from_json(r#"{"n": 3, "cycles": [[true, 1]]}"#).is_err());
    }

    #[test]
    fn from_mapping_canonical() {
        let u = CoolingUnitary::from_mapping(&[1, 4, 2, 3, 0, 5, 6, 7], 3).unwrap();
        assert_eq!(u.cycles()[0].states(), &[0, 1, 4]);
        assert!(CoolingUnitary::from_mapping(&[0, 0], 1).is_err());
    }
}
