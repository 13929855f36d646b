//! Exact simulation of diagonal density matrices.
//!
//! Multi-controlled-NOT gates permute basis states, depolarizing noise mixes
//! populations toward uniform, and thermal resets replace qubit marginals.
//! All three keep a diagonal state diagonal, so only the `2^N` populations
//! are tracked.

use serde::{Deserialize, Serialize};

use crate::basis::{qubit_mask, qubits_mask, submasks};
use crate::error::{Error, Result};
use crate::synth::{Circuit, Instruction, McNot};
use crate::thermo::ExcitationProbability;

const SUM_TOLERANCE: f64 = 1e-9;

/// Diagonal of a register's density matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbVector {
    n_qubits: usize,
    entries: Vec<f64>,
}

impl ProbVector {
    /// Validates length `2^n`, finite nonnegative entries and unit sum.
    pub fn new(n_qubits: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != 1usize << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidVector(format!(
                "entry {bad} is not a probability"
            )));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidVector(format!("entries sum to {sum}")));
        }
        Ok(Self { n_qubits, entries })
    }

    pub(crate) fn from_entries_unchecked(n_qubits: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), 1 << n_qubits);
        Self { n_qubits, entries }
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                index: index as u64,
                n_qubits,
            });
        }
        let mut entries = vec![0.0; dim];
        entries[index] = 1.0;
        Ok(Self { n_qubits, entries })
    }

    pub fn uniform(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            n_qubits,
            entries: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    fn mask_of(&self, qubits: &[usize]) -> Result<usize> {
        if qubits.is_empty() {
            return Err(Error::EmptyQubitSet);
        }
        for &q in qubits {
            self.check_qubit(q)?;
        }
        Ok(qubits_mask(qubits, self.n_qubits))
    }

    /// Probability that `qubit` is in `|1⟩`.
    pub fn marginal(&self, qubit: usize) -> Result<ExcitationProbability> {
        self.check_qubit(qubit)?;
        let mask = qubit_mask(qubit, self.n_qubits);
        let p: f64 = self
            .entries
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, v)| v)
            .sum();
        ExcitationProbability::new(p.clamp(0.0, 1.0))
    }

    /// Swaps the populations of every pair of states that the gate exchanges.
    pub fn apply_mcnot(&mut self, gate: &McNot) -> Result<()> {
        self.check_qubit(gate.target())?;
        let n = self.n_qubits;
        let mut ctrl_mask = 0;
        let mut ctrl_value = 0;
        for &(q, polarity) in gate.controls() {
            self.check_qubit(q)?;
            let m = qubit_mask(q, n);
            ctrl_mask |= m;
            if polarity {
                ctrl_value |= m;
            }
        }
        let t = qubit_mask(gate.target(), n);
        for i in 0..self.entries.len() {
            if i & t == 0 && i & ctrl_mask == ctrl_value {
                self.entries.swap(i, i | t);
            }
        }
        Ok(())
    }

    /// Depolarizing channel on `qubits` with probability `p`:
    /// `v ← (1-p)·v + p·(marginal of the rest ⊗ uniform on qubits)`.
    pub fn depolarize(&mut self, qubits: &[usize], p: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let mask = self.mask_of(qubits)?;
        if p == 0.0 {
            return Ok(());
        }
        let block = (mask.count_ones() as f64).exp2();
        for base in 0..self.entries.len() {
            if base & mask != 0 {
                continue;
            }
            let total: f64 = submasks(mask).map(|s| self.entries[base | s]).sum();
            let mixed = p * total / block;
            for s in submasks(mask) {
                let e = &mut self.entries[base | s];
                *e = (1.0 - p) * *e + mixed;
            }
        }
        Ok(())
    }

    /// Re-thermalizes `qubits` at `bath`: keeps the joint marginal of the
    /// other qubits and tensors in fresh uncorrelated thermal qubits.
    pub fn reset_qubits(&mut self, qubits: &[usize], bath: ExcitationProbability) -> Result<()> {
        let mask = self.mask_of(qubits)?;
        let bp = bath.value();
        let n = self.n_qubits;
        let fresh: Vec<(usize, f64)> = submasks(mask)
            .map(|s| {
                let w = (0..n)
                    .map(|q| qubit_mask(q, n))
                    .filter(|m| mask & m != 0)
                    .fold(1.0, |acc, m| acc * if s & m != 0 { bp } else { 1.0 - bp });
                (s, w)
            })
            .collect();
        for base in 0..self.entries.len() {
            if base & mask != 0 {
                continue;
            }
            let kept: f64 = fresh.iter().map(|&(s, _)| self.entries[base | s]).sum();
            for &(s, w) in &fresh {
                self.entries[base | s] = kept * w;
            }
        }
        Ok(())
    }
}

/// Where depolarizing noise is inserted during simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoisePlacement {
    /// After every gate, one depolarizing channel on the gate's touched qubits.
    #[default]
    PerGate,
    /// Gates are packed greedily into layers of disjoint gates; after each
    /// layer every qubit of the register is depolarized independently.
    PerLayer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    p: f64,
    #[serde(default)]
    placement: NoisePlacement,
}

impl NoiseModel {
    pub fn new(p: f64, placement: NoisePlacement) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self { p, placement })
    }

    pub fn per_gate(p: f64) -> Result<Self> {
        Self::new(p, NoisePlacement::PerGate)
    }

    pub fn noiseless() -> Self {
        Self {
            p: 0.0,
            placement: NoisePlacement::PerGate,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn placement(&self) -> NoisePlacement {
        self.placement
    }
}

/// Runs `circuit` on `initial`. Resets re-thermalize at `bath` and carry no noise.
pub fn simulate(
    circuit: &Circuit,
    initial: &ProbVector,
    noise: NoiseModel,
    bath: ExcitationProbability,
) -> Result<ProbVector> {
    if initial.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << circuit.n_qubits(),
            actual: initial.len(),
        });
    }
    let mut v = initial.clone();
    let n = circuit.n_qubits();
    let all: Vec<usize> = (0..n).collect();
    let mut layer_mask = 0usize;

    let flush = |v: &mut ProbVector, layer_mask: &mut usize| -> Result<()> {
        if *layer_mask != 0 && noise.p > 0.0 {
            for &q in &all {
                v.depolarize(&[q], noise.p)?;
            }
        }
        *layer_mask = 0;
        Ok(())
    };

    for instr in circuit.instructions() {
        match instr {
            Instruction::McNot(g) => match noise.placement {
                NoisePlacement::PerGate => {
                    v.apply_mcnot(g)?;
                    if noise.p > 0.0 {
                        v.depolarize(&g.qubits(), noise.p)?;
                    }
                }
                NoisePlacement::PerLayer => {
                    let m = qubits_mask(&g.qubits(), n);
                    if layer_mask & m != 0 {
                        flush(&mut v, &mut layer_mask)?;
                    }
                    v.apply_mcnot(g)?;
                    layer_mask |= m;
                }
            },
            Instruction::Reset(r) => {
                if noise.placement == NoisePlacement::PerLayer {
                    flush(&mut v, &mut layer_mask)?;
                }
                v.reset_qubits(r.qubits(), bath)?;
            }
        }
    }
    if noise.placement == NoisePlacement::PerLayer {
        flush(&mut v, &mut layer_mask)?;
    }
    Ok(v)
}
