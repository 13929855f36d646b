//! Maximal-cooling permutations.
//!
//! Every protocol here leaves the `2^{n-1}` most probable basis states of a
//! thermal register in the half where qubit 0 (the target) is `|0⟩`. They
//! differ in which other states they move, which changes circuit size and
//! work cost but not the final target population.

use serde::{Deserialize, Serialize};

use crate::basis::{bit, hamming_weight, qubit_mask};
use crate::error::{Error, Result};
use crate::sim::ProbVector;
use crate::thermo::{ThermalSpec, DEFAULT_VECTOR_CAP};
use crate::unitary::{CoolingUnitary, CycleFile};

/// Protocol used to build a dynamic-cooling unitary.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    /// Partner-pairing: full descending sort of the populations.
    Ppa,
    /// Swap each state with its bitwise complement when that moves the
    /// lower-weight one into the target-0 half.
    Mirror,
    /// Maximal cooling at the least energy cost.
    #[default]
    MinimalWork,
    /// User-supplied cycles.
    Custom(CycleFile),
}

impl ProtocolKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::Ppa => "ppa",
            ProtocolKind::Mirror => "mirror",
            ProtocolKind::MinimalWork => "minimal_work",
            ProtocolKind::Custom(_) => "custom",
        }
    }

    /// Parses a built-in protocol name.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "ppa" | "partner_pairing" => Ok(ProtocolKind::Ppa),
            "mirror" => Ok(ProtocolKind::Mirror),
            "minimal_work" | "min_work" | "minimum_work" => Ok(ProtocolKind::MinimalWork),
            other => Err(Error::InvalidConfig(format!("unknown protocol {other:?}"))),
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, ProtocolKind::Custom(_))
    }

    /// Unitary on an `n_qubits` cluster.
    pub fn unitary(&self, n_qubits: usize) -> Result<CoolingUnitary> {
        match self {
            ProtocolKind::Ppa => ppa(n_qubits),
            ProtocolKind::Mirror => mirror_protocol(n_qubits),
            ProtocolKind::MinimalWork => minimal_work_protocol(n_qubits),
            ProtocolKind::Custom(file) => {
                if file.n != n_qubits {
                    return Err(Error::InvalidConfig(format!(
                        "custom cycles are for {} qubits but the cluster has {n_qubits}",
                        file.n
                    )));
                }
                file.to_unitary()
            }
        }
    }
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidConfig(
            "register needs at least one qubit".into(),
        ));
    }
    if n_qubits > DEFAULT_VECTOR_CAP {
        return Err(Error::ResourceLimit {
            what: "protocol permutation",
            requested: n_qubits,
            cap: DEFAULT_VECTOR_CAP,
        });
    }
    Ok(())
}

/// Basis states of a homogeneous register with `p < 1/2`, most probable
/// first: ascending Hamming weight, ties by ascending index.
pub fn weight_order(n_qubits: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..1usize << n_qubits).collect();
    order.sort_by_key(|&s| (hamming_weight(s), s));
    order
}

/// Basis states of the product state `spec`, most probable first, ties by
/// ascending index.
///
/// States whose probabilities are products of the same factors compare as
/// exactly equal, regardless of which qubits carry them.
pub fn thermal_order(spec: &ThermalSpec) -> Result<Vec<usize>> {
    let n = spec.n_qubits();
    check_size(n)?;
    // group qubits sharing a probability; a state's probability depends only
    // on how many excited qubits it has in each group
    let mut groups: Vec<(f64, usize)> = Vec::new();
    let mut group_of = Vec::with_capacity(n);
    for p in spec.probabilities() {
        let g = match groups.iter().position(|&(q, _)| q == p) {
            Some(g) => g,
            None => {
                groups.push((p, 0));
                groups.len() - 1
            }
        };
        groups[g].1 += 1;
        group_of.push(g);
    }
    let probs: Vec<f64> = (0..1usize << n)
        .map(|s| {
            let mut excited = vec![0i32; groups.len()];
            for (q, &g) in group_of.iter().enumerate() {
                if bit(s, q, n) {
                    excited[g] += 1;
                }
            }
            groups
                .iter()
                .zip(&excited)
                .map(|(&(p, size), &k)| p.powi(k) * (1.0 - p).powi(size as i32 - k))
                .product()
        })
        .collect();
    Ok(order_by_probability(&probs))
}

fn order_by_probability(probs: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
    order
}

/// Unitary sending the state of rank `k` in `order` to index `k`.
fn sorting_unitary(order: &[usize], n_qubits: usize) -> Result<CoolingUnitary> {
    let mut mapping = vec![0; order.len()];
    for (rank, &state) in order.iter().enumerate() {
        mapping[state] = rank;
    }
    CoolingUnitary::from_mapping(&mapping, n_qubits)
}

/// Partner-pairing algorithm: sorts the homogeneous thermal populations in
/// descending order into index order. The target is qubit 0.
pub fn ppa(n_qubits: usize) -> Result<CoolingUnitary> {
    check_size(n_qubits)?;
    sorting_unitary(&weight_order(n_qubits), n_qubits)
}

/// Swaps `j` (target-1 half) with its complement whenever the complement is
/// heavier, i.e. less probable.
pub fn mirror_protocol(n_qubits: usize) -> Result<CoolingUnitary> {
    check_size(n_qubits)?;
    let dim = 1usize << n_qubits;
    let half = dim / 2;
    let cycles = (half..dim)
        .filter(|&j| hamming_weight(j) < hamming_weight(dim - 1 - j))
        .map(|j| vec![dim - 1 - j, j])
        .collect();
    CoolingUnitary::from_index_cycles(cycles, n_qubits)
}

/// Maximal cooling with the least work `Σ_j E_j (p'_j − p_j)`, `E_j ∝ weight(j)`.
///
/// The target-0 half must end up holding the `2^{n-1}` largest populations.
/// Within each half the received populations are placed in descending order
/// onto states of ascending energy, which minimizes the energy of the result
/// (rearrangement inequality). States already holding the population class
/// they should hold stay put; the rest are matched in ascending index order.
/// For homogeneous `p < 1/2` the population class of a state is its weight,
/// so the permutation does not depend on `p`.
pub fn minimal_work_protocol(n_qubits: usize) -> Result<CoolingUnitary> {
    check_size(n_qubits)?;
    let dim = 1usize << n_qubits;
    let half = dim / 2;
    let ranked = weight_order(n_qubits);
    let class = |s: usize| hamming_weight(s) as usize;

    // class each position should end up holding
    let mut wanted = vec![0usize; dim];
    let halves = [(0..half), (half..dim)];
    for (h, range) in halves.into_iter().enumerate() {
        let mut positions: Vec<usize> = range.collect();
        positions.sort_by_key(|&s| (class(s), s));
        let incoming = &ranked[h * half..(h + 1) * half];
        for (&pos, &src) in positions.iter().zip(incoming) {
            wanted[pos] = class(src);
        }
    }

    let mut mapping: Vec<usize> = (0..dim).collect();
    for c in 0..=n_qubits {
        let sources: Vec<usize> = (0..dim)
            .filter(|&s| class(s) == c && wanted[s] != c)
            .collect();
        let dests: Vec<usize> = (0..dim)
            .filter(|&s| wanted[s] == c && class(s) != c)
            .collect();
        debug_assert_eq!(sources.len(), dests.len());
        for (s, d) in sources.into_iter().zip(dests) {
            mapping[s] = d;
        }
    }
    CoolingUnitary::from_mapping(&mapping, n_qubits)
}

/// Full descending sort of the product distribution `spec`, with `target`
/// treated as the most significant qubit. Returned in the original qubit order.
pub fn heterogeneous_max_cooling(spec: &ThermalSpec, target: usize) -> Result<CoolingUnitary> {
    let n = spec.n_qubits();
    if target >= n {
        return Err(Error::QubitOutOfRange {
            qubit: target,
            n_qubits: n,
        });
    }
    if let Some(p) = spec.probabilities().find(|&p| p >= 0.5) {
        return Err(Error::InvalidProbability(p));
    }
    // relabeled qubit j is original qubit order[j]
    let order: Vec<usize> = std::iter::once(target)
        .chain((0..n).filter(|&q| q != target))
        .collect();
    let relabeled = ThermalSpec::new(order.iter().map(|&q| spec.get(q)).collect())?;
    let ranked = thermal_order(&relabeled)?;

    let to_original = |rel: usize| -> usize {
        order.iter().enumerate().fold(0, |acc, (j, &q)| {
            if bit(rel, j, n) {
                acc | qubit_mask(q, n)
            } else {
                acc
            }
        })
    };
    let mut mapping = vec![0; 1 << n];
    for (rank, &state) in ranked.iter().enumerate() {
        mapping[to_original(state)] = to_original(rank);
    }
    CoolingUnitary::from_mapping(&mapping, n)
}

/// Full descending sort of an arbitrary population vector into index order.
pub fn sorting_cooling(v: &ProbVector) -> Result<CoolingUnitary> {
    sorting_unitary(&order_by_probability(v.entries()), v.n_qubits())
}
