//! Gray-code synthesis of phase-free cooling unitaries into circuits of
//! multi-controlled-NOT gates, plus gate counting and text export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::basis::{bit, qubit_mask};
use crate::error::{Error, Result};
use crate::unitary::{CoolingUnitary, Cycle};

/// An X on `target` conditioned on each control qubit being in the given
/// state (`true` = closed control on `|1⟩`, `false` = open control on `|0⟩`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct McNot {
    target: usize,
    controls: Vec<(usize, bool)>,
}

impl McNot {
    pub fn new(target: usize, mut controls: Vec<(usize, bool)>) -> Result<Self> {
        controls.sort_unstable();
        if controls.iter().any(|&(q, _)| q == target) {
            return Err(Error::InvalidGate(format!(
                "target qubit {target} is also a control"
            )));
        }
        if controls.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidGate("control qubits must be distinct".into()));
        }
        Ok(Self { target, controls })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Controls sorted by qubit index.
    pub fn controls(&self) -> &[(usize, bool)] {
        &self.controls
    }

    /// Every qubit the gate acts on, ascending.
    pub fn qubits(&self) -> Vec<usize> {
        let mut q: Vec<usize> = self.controls.iter().map(|&(q, _)| q).collect();
        q.push(self.target);
        q.sort_unstable();
        q
    }

    /// Image of basis state `index` on an `n_qubits` register.
    pub fn apply_to_index(&self, index: usize, n_qubits: usize) -> usize {
        let fires = self
            .controls
            .iter()
            .all(|&(q, pol)| bit(index, q, n_qubits) == pol);
        if fires {
            index ^ qubit_mask(self.target, n_qubits)
        } else {
            index
        }
    }

    fn max_qubit(&self) -> usize {
        self.controls
            .iter()
            .map(|&(q, _)| q)
            .chain(std::iter::once(self.target))
            .max()
            .unwrap_or(self.target)
    }

    fn relabeled(&self, map: &[usize]) -> Result<Self> {
        McNot::new(
            map[self.target],
            self.controls.iter().map(|&(q, p)| (map[q], p)).collect(),
        )
    }
}

/// Re-thermalization of a set of qubits with the bath.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ResetInstr {
    qubits: Vec<usize>,
}

impl ResetInstr {
    pub fn new(mut qubits: Vec<usize>) -> Result<Self> {
        if qubits.is_empty() {
            return Err(Error::EmptyQubitSet);
        }
        qubits.sort_unstable();
        qubits.dedup();
        Ok(Self { qubits })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Instruction {
    McNot(McNot),
    Reset(ResetInstr),
}

/// Ordered instruction list on a register of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circuit {
    n_qubits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            instructions: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn gates(&self) -> impl Iterator<Item = &McNot> {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::McNot(g) => Some(g),
            Instruction::Reset(_) => None,
        })
    }

    pub fn push(&mut self, instr: Instruction) -> Result<()> {
        let max = match &instr {
            Instruction::McNot(g) => g.max_qubit(),
            Instruction::Reset(r) => *r.qubits.last().expect("reset is nonempty"),
        };
        if max >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: max,
                n_qubits: self.n_qubits,
            });
        }
        self.instructions.push(instr);
        Ok(())
    }

    pub fn push_gate(&mut self, gate: McNot) -> Result<()> {
        self.push(Instruction::McNot(gate))
    }

    pub fn push_reset(&mut self, qubits: Vec<usize>) -> Result<()> {
        self.push(Instruction::Reset(ResetInstr::new(qubits)?))
    }

    /// Appends `other`, sending its qubit `q` to `map[q]` in this circuit.
    pub fn append_relabeled(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        if map.len() != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: other.n_qubits,
                actual: map.len(),
            });
        }
        for instr in &other.instructions {
            let mapped = match instr {
                Instruction::McNot(g) => Instruction::McNot(g.relabeled(map)?),
                Instruction::Reset(r) => {
                    Instruction::Reset(ResetInstr::new(r.qubits.iter().map(|&q| map[q]).collect())?)
                }
            };
            self.push(mapped)?;
        }
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        let identity: Vec<usize> = (0..other.n_qubits).collect();
        self.append_relabeled(other, &identity)
    }

    /// Basis-state image of `index` under the gates (resets are skipped).
    pub fn apply_to_index(&self, index: usize) -> usize {
        self.gates()
            .fold(index, |s, g| g.apply_to_index(s, self.n_qubits))
    }

    /// `mapping[src] = dest` for the whole gate sequence.
    pub fn induced_mapping(&self) -> Vec<usize> {
        (0..1usize << self.n_qubits)
            .map(|s| self.apply_to_index(s))
            .collect()
    }
}

/// Basis states walked from one transposition endpoint to the other, one bit
/// flip per step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrayPath(Vec<usize>);

impl GrayPath {
    pub fn states(&self) -> &[usize] {
        &self.0
    }

    /// Number of bit flips along the path.
    pub fn distance(&self) -> usize {
        self.0.len() - 1
    }
}

fn check_pair(x: usize, y: usize, n_qubits: usize) -> Result<()> {
    for s in [x, y] {
        if s >= 1usize << n_qubits {
            return Err(Error::IndexOutOfRange {
                index: s as u64,
                n_qubits,
            });
        }
    }
    if x == y {
        return Err(Error::IdenticalStates(x));
    }
    Ok(())
}

/// Path from `x` to `y` flipping the differing bits from qubit 0 (most
/// significant) downward.
pub fn gray_path(x: usize, y: usize, n_qubits: usize) -> Result<GrayPath> {
    check_pair(x, y, n_qubits)?;
    let diff = x ^ y;
    let mut states = vec![x];
    let mut cur = x;
    for q in 0..n_qubits {
        let m = qubit_mask(q, n_qubits);
        if diff & m != 0 {
            cur ^= m;
            states.push(cur);
        }
    }
    Ok(GrayPath(states))
}

/// Gate swapping the adjacent states `from` and `from ^ mask(target)`:
/// target is the flipped bit and every other qubit is a control matching `from`.
fn adjacent_swap(from: usize, to: usize, n_qubits: usize) -> McNot {
    let flipped = (0..n_qubits)
        .find(|&q| (from ^ to) == qubit_mask(q, n_qubits))
        .expect("gray path steps differ in one bit");
    let controls = (0..n_qubits)
        .filter(|&q| q != flipped)
        .map(|q| (q, bit(from, q, n_qubits)))
        .collect();
    McNot {
        target: flipped,
        controls,
    }
}

/// `2d − 1` gates realizing the transposition `x ↔ y`: a ladder along the
/// Gray path to its penultimate state, the central swap, then the ladder
/// reversed.
pub fn transposition_circuit(x: usize, y: usize, n_qubits: usize) -> Result<Circuit> {
    let path = gray_path(x, y, n_qubits)?;
    let st = path.states();
    let d = path.distance();
    let ladder: Vec<McNot> = (0..d - 1)
        .map(|k| adjacent_swap(st[k], st[k + 1], n_qubits))
        .collect();
    let mut circuit = Circuit::new(n_qubits);
    circuit.instructions.extend(
        ladder
            .iter()
            .cloned()
            .chain(std::iter::once(adjacent_swap(st[d - 1], st[d], n_qubits)))
            .chain(ladder.iter().rev().cloned())
            .map(Instruction::McNot),
    );
    Ok(circuit)
}

/// Circuit for `i_1 → i_2 → … → i_m → i_1`: transpositions `(i_1 i_2)`,
/// `(i_1 i_3)`, …, `(i_1 i_m)` in circuit order.
pub fn cycle_circuit(cycle: &Cycle, n_qubits: usize) -> Result<Circuit> {
    let st = cycle.states();
    let mut circuit = Circuit::new(n_qubits);
    for &other in &st[1..] {
        let t = transposition_circuit(st[0], other, n_qubits)?;
        circuit.instructions.extend(t.instructions);
    }
    Ok(circuit)
}

/// Concatenated cycle circuits of a phase-free unitary.
pub fn synthesize_circuit(unitary: &CoolingUnitary) -> Result<Circuit> {
    if !unitary.is_phase_free() {
        return Err(Error::PhaseBearing);
    }
    let n = unitary.n_qubits();
    let mut circuit = Circuit::new(n);
    for cycle in unitary.cycles() {
        circuit
            .instructions
            .extend(cycle_circuit(cycle, n)?.instructions);
    }
    Ok(circuit)
}

/// Multi-controlled-NOT counts grouped by number of controls.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GateCount {
    pub by_controls: BTreeMap<usize, usize>,
    pub total: usize,
    pub resets: usize,
}

impl std::fmt::Display for GateCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} multi-controlled-NOT gates", self.total)?;
        let parts: Vec<String> = self
            .by_controls
            .iter()
            .map(|(k, c)| format!("{c}×{k}-control"))
            .collect();
        if !parts.is_empty() {
            write!(f, " ({})", parts.join(", "))?;
        }
        if self.resets > 0 {
            write!(f, ", {} reset layers", self.resets)?;
        }
        Ok(())
    }
}

pub fn gate_count(circuit: &Circuit) -> GateCount {
    let mut count = GateCount::default();
    for instr in circuit.instructions() {
        match instr {
            Instruction::McNot(g) => {
                *count.by_controls.entry(g.controls.len()).or_default() += 1;
                count.total += 1;
            }
            Instruction::Reset(_) => count.resets += 1,
        }
    }
    count
}

/// Drops adjacent identical gates, which cancel since every gate is
/// self-inverse. Resets are barriers.
pub fn simplify(circuit: &Circuit) -> Circuit {
    let mut out: Vec<Instruction> = Vec::with_capacity(circuit.len());
    for instr in circuit.instructions() {
        match (instr, out.last()) {
            (Instruction::McNot(g), Some(Instruction::McNot(prev))) if g == prev => {
                out.pop();
            }
            _ => out.push(instr.clone()),
        }
    }
    Circuit {
        n_qubits: circuit.n_qubits,
        instructions: out,
    }
}

/// Marker comment emitted before every thermal reset.
pub const THERMAL_RESET_PRAGMA: &str = "// @thermal_reset";

/// OpenQASM 3 listing of the circuit.
///
/// Open controls are written by conjugating the control qubit with `x`.
/// Each thermal reset is a `// @thermal_reset q[i]` comment followed by a
/// standard `reset q[i];`. The comment is metadata: it marks contact with the
/// bath, which hardware with identical qubits cannot perform between rounds.
pub fn export_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    let _ = writeln!(out, "qubit[{}] q;", circuit.n_qubits);
    for instr in circuit.instructions() {
        match instr {
            Instruction::McNot(g) => {
                let open: Vec<usize> = g
                    .controls
                    .iter()
                    .filter(|&&(_, pol)| !pol)
                    .map(|&(q, _)| q)
                    .collect();
                for q in &open {
                    let _ = writeln!(out, "x q[{q}];");
                }
                let mut operands: Vec<String> =
                    g.controls.iter().map(|(q, _)| format!("q[{q}]")).collect();
                operands.push(format!("q[{}]", g.target));
                let op = match g.controls.len() {
                    0 => "x".to_owned(),
                    1 => "cx".to_owned(),
                    2 => "ccx".to_owned(),
                    k => format!("ctrl({k}) @ x"),
                };
                let _ = writeln!(out, "{op} {};", operands.join(", "));
                for q in &open {
                    let _ = writeln!(out, "x q[{q}];");
                }
            }
            Instruction::Reset(r) => {
                for q in r.qubits() {
                    let _ = writeln!(out, "{THERMAL_RESET_PRAGMA} q[{q}]");
                    let _ = writeln!(out, "reset q[{q}];");
                }
            }
        }
    }
    out
}
