//! The four cooling methods: final target population, work cost, circuit
//! assembly and the combined report.
//!
//! Inside every cluster the target is qubit 0. Register layouts:
//! * dynamic: one cluster of `n` qubits.
//! * sub-optimal: `n^r` qubits; round `k` clusters are `n` consecutive
//!   survivors among the multiples of `n^{k-1}`, each cooling its first qubit,
//!   so the final target is qubit 0.
//! * HBAC: one cluster of `n` qubits, reset layer between rounds.
//! * semi-open: qubit 0 is the target; round `i` pairs it with the next
//!   `n_i - 1` unused qubits.

use serde::{Deserialize, Serialize};

use crate::basis::hamming_weight;
use crate::error::{Error, Result};
use crate::protocols::{heterogeneous_max_cooling, sorting_cooling, ProtocolKind};
use crate::sim::{simulate, NoiseModel, ProbVector};
use crate::synth::{gate_count, synthesize_circuit, Circuit, GateCount};
use crate::thermo::{
    probability_from_temperature, reported_temperature, thermal_product_vector, EnergyGap,
    EnergyUnits, ExcitationProbability, Temperature, ThermalSpec, DEFAULT_VECTOR_CAP,
};
use crate::unitary::CoolingUnitary;

/// Largest register a method circuit may span.
pub const MAX_TOTAL_QUBITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum MethodConfig {
    Dynamic {
        n: usize,
        #[serde(default)]
        protocol: ProtocolKind,
    },
    SubOptimal {
        cluster_size: usize,
        rounds: usize,
        #[serde(default)]
        protocol: ProtocolKind,
    },
    Hbac {
        cluster_size: usize,
        rounds: usize,
        reset_qubits: Vec<usize>,
        #[serde(default)]
        protocol: ProtocolKind,
        /// Re-derive a sorting unitary against the evolved state each round
        /// instead of repeating the round-1 unitary.
        #[serde(default)]
        resort: bool,
    },
    SemiOpen {
        cluster_sizes: Vec<usize>,
        #[serde(default)]
        protocol: ProtocolKind,
    },
}

impl MethodConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: MethodConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let check_protocol = |protocol: &ProtocolKind, n: usize| -> Result<()> {
            if let ProtocolKind::Custom(file) = protocol {
                if file.n != n {
                    return bad(format!(
                        "custom cycles are for {} qubits but the cluster has {n}",
                        file.n
                    ));
                }
                file.to_unitary()?;
            }
            Ok(())
        };
        match self {
            MethodConfig::Dynamic { n, protocol } => {
                if *n < 2 {
                    return bad(format!("dynamic cooling needs n >= 2, got {n}"));
                }
                if *n > DEFAULT_VECTOR_CAP {
                    return Err(Error::ResourceLimit {
                        what: "dynamic cooling cluster",
                        requested: *n,
                        cap: DEFAULT_VECTOR_CAP,
                    });
                }
                check_protocol(protocol, *n)
            }
            MethodConfig::SubOptimal {
                cluster_size,
                rounds,
                protocol,
            } => {
                if *cluster_size < 2 || *rounds < 1 {
                    return bad(format!(
                        "sub-optimal cooling needs cluster_size >= 2 and rounds >= 1, got {cluster_size} and {rounds}"
                    ));
                }
                if self.total_qubits_checked().is_none() {
                    return Err(Error::ResourceLimit {
                        what: "sub-optimal register",
                        requested: usize::MAX,
                        cap: MAX_TOTAL_QUBITS,
                    });
                }
                check_protocol(protocol, *cluster_size)
            }
            MethodConfig::Hbac {
                cluster_size,
                rounds,
                reset_qubits,
                protocol,
                ..
            } => {
                if *cluster_size < 2 || *rounds < 1 {
                    return bad(format!(
                        "HBAC needs cluster_size >= 2 and rounds >= 1, got {cluster_size} and {rounds}"
                    ));
                }
                if *cluster_size > DEFAULT_VECTOR_CAP {
                    return Err(Error::ResourceLimit {
                        what: "HBAC cluster",
                        requested: *cluster_size,
                        cap: DEFAULT_VECTOR_CAP,
                    });
                }
                if reset_qubits.is_empty() {
                    return bad("HBAC needs at least one reset qubit".into());
                }
                if reset_qubits.contains(&0) {
                    return bad("the target (qubit 0) cannot be a reset qubit".into());
                }
                if let Some(q) = reset_qubits.iter().find(|&&q| q >= *cluster_size) {
                    return bad(format!(
                        "reset qubit {q} outside the {cluster_size}-qubit cluster"
                    ));
                }
                check_protocol(protocol, *cluster_size)
            }
            MethodConfig::SemiOpen {
                cluster_sizes,
                protocol,
            } => {
                if cluster_sizes.is_empty() {
                    return bad("semi-open cooling needs at least one round".into());
                }
                if let Some(n) = cluster_sizes.iter().find(|&&n| n < 2) {
                    return bad(format!("semi-open cluster sizes must be >= 2, got {n}"));
                }
                if let Some(&n) = cluster_sizes.iter().find(|&&n| n > DEFAULT_VECTOR_CAP) {
                    return Err(Error::ResourceLimit {
                        what: "semi-open cluster",
                        requested: n,
                        cap: DEFAULT_VECTOR_CAP,
                    });
                }
                if self.total_qubits_checked().is_none() {
                    return Err(Error::ResourceLimit {
                        what: "semi-open register",
                        requested: usize::MAX,
                        cap: MAX_TOTAL_QUBITS,
                    });
                }
                check_protocol(protocol, cluster_sizes[0])
            }
        }
    }

    fn total_qubits_checked(&self) -> Option<usize> {
        let total = match self {
            MethodConfig::Dynamic { n, .. } => Some(*n),
            MethodConfig::SubOptimal {
                cluster_size,
                rounds,
                ..
            } => u32::try_from(*rounds)
                .ok()
                .and_then(|r| cluster_size.checked_pow(r)),
            MethodConfig::Hbac { cluster_size, .. } => Some(*cluster_size),
            MethodConfig::SemiOpen { cluster_sizes, .. } => cluster_sizes
                .iter()
                .try_fold(1usize, |acc, n| acc.checked_add(n.saturating_sub(1))),
        }?;
        (total <= MAX_TOTAL_QUBITS).then_some(total)
    }

    /// Qubits used by the whole method.
    pub fn total_qubits(&self) -> usize {
        self.total_qubits_checked().unwrap_or(usize::MAX)
    }

    /// True when the circuit itself depends on the initial population, so
    /// generating it needs a temperature.
    pub fn needs_temperature(&self) -> bool {
        match self {
            MethodConfig::SemiOpen { cluster_sizes, .. } => cluster_sizes.len() > 1,
            MethodConfig::Hbac { resort, rounds, .. } => *resort && *rounds > 1,
            _ => false,
        }
    }

    pub fn protocol(&self) -> &ProtocolKind {
        match self {
            MethodConfig::Dynamic { protocol, .. }
            | MethodConfig::SubOptimal { protocol, .. }
            | MethodConfig::Hbac { protocol, .. }
            | MethodConfig::SemiOpen { protocol, .. } => protocol,
        }
    }

    /// Same method with a different protocol.
    pub fn with_protocol(mut self, new: ProtocolKind) -> Self {
        match &mut self {
            MethodConfig::Dynamic { protocol, .. }
            | MethodConfig::SubOptimal { protocol, .. }
            | MethodConfig::Hbac { protocol, .. }
            | MethodConfig::SemiOpen { protocol, .. } => *protocol = new,
        }
        self
    }

    /// Short human-readable label, e.g. `dynamic(n=9,minimal_work)`.
    pub fn label(&self) -> String {
        match self {
            MethodConfig::Dynamic { n, protocol } => format!("dynamic(n={n},{})", protocol.name()),
            MethodConfig::SubOptimal {
                cluster_size,
                rounds,
                protocol,
            } => format!(
                "sub_optimal(n={cluster_size},r={rounds},{})",
                protocol.name()
            ),
            MethodConfig::Hbac {
                cluster_size,
                rounds,
                reset_qubits,
                protocol,
                resort,
            } => {
                let resets: Vec<String> = reset_qubits.iter().map(usize::to_string).collect();
                format!(
                    "hbac(n={cluster_size},r={rounds},reset={},{}{})",
                    resets.join("+"),
                    protocol.name(),
                    if *resort { ",resort" } else { "" }
                )
            }
            MethodConfig::SemiOpen {
                cluster_sizes,
                protocol,
            } => {
                let sizes: Vec<String> = cluster_sizes.iter().map(usize::to_string).collect();
                format!("semi_open(n={},{})", sizes.join("+"), protocol.name())
            }
        }
    }
}

fn check_p(p: ExcitationProbability) -> Result<f64> {
    let p = p.value();
    if p > 0.5 {
        return Err(Error::InvalidProbability(p));
    }
    Ok(p)
}

fn prob(p: f64) -> ExcitationProbability {
    ExcitationProbability::new(p.clamp(0.0, 1.0)).expect("clamped")
}

/// Sum of the `count` smallest entries, added smallest first.
fn sum_smallest(mut values: Vec<f64>, count: usize) -> f64 {
    values.sort_by(f64::total_cmp);
    values[..count].iter().sum()
}

/// Target population after maximal dynamic cooling of `n` qubits at `p`:
/// the sum of the `2^{n-1}` smallest thermal populations (equivalently one
/// minus the largest half).
pub fn dynamic_final_p(p: ExcitationProbability, n: usize) -> Result<ExcitationProbability> {
    let p = check_p(p)?;
    if n == 0 || n > 62 {
        return Err(Error::InvalidConfig(format!(
            "register size {n} outside 1..=62"
        )));
    }
    // the smallest populations are the heaviest states; walk weight classes down
    let n32 = n as u32;
    let mut remaining = (1u64 << (n - 1)) as f64;
    let mut total = 0.0;
    for w in (0..=n32).rev() {
        if remaining <= 0.0 {
            break;
        }
        let take = crate::basis::binomial(n32, w).min(remaining);
        total += take * p.powi(w as i32) * (1.0 - p).powi((n32 - w) as i32);
        remaining -= take;
    }
    Ok(prob(total))
}

/// `rounds` nested rounds of dynamic cooling on clusters of `cluster_size`.
pub fn sub_optimal_final_p(
    p: ExcitationProbability,
    cluster_size: usize,
    rounds: usize,
) -> Result<ExcitationProbability> {
    if cluster_size < 2 || rounds < 1 {
        return Err(Error::InvalidConfig(
            "sub-optimal cooling needs cluster_size >= 2 and rounds >= 1".into(),
        ));
    }
    (0..rounds).try_fold(p, |acc, _| dynamic_final_p(acc, cluster_size))
}

/// Best target population reachable from a product state `spec` with the
/// target at qubit 0: the sum of the `2^{n-1}` smallest joint probabilities.
pub fn max_cooled_target_p(spec: &ThermalSpec) -> Result<ExcitationProbability> {
    let v = thermal_product_vector(spec)?;
    let half = v.len() / 2;
    Ok(prob(sum_smallest(v.into_entries(), half)))
}

/// Semi-open cooling: round 1 is dynamic cooling on `cluster_sizes[0]`
/// qubits; round `i` re-cools the target with `cluster_sizes[i] - 1` fresh
/// qubits at `p`.
pub fn semi_open_final_p(
    p: ExcitationProbability,
    cluster_sizes: &[usize],
) -> Result<ExcitationProbability> {
    let (&first, rest) = cluster_sizes
        .split_first()
        .ok_or_else(|| Error::InvalidConfig("semi-open cooling needs at least one round".into()))?;
    if cluster_sizes.iter().any(|&n| n < 2) {
        return Err(Error::InvalidConfig(
            "semi-open cluster sizes must be >= 2".into(),
        ));
    }
    let bath = check_p(p)?;
    let mut target = dynamic_final_p(p, first)?;
    for &n in rest {
        let spec = semi_open_spec(target.value(), bath, n)?;
        target = max_cooled_target_p(&spec)?;
    }
    Ok(target)
}

fn semi_open_spec(target: f64, bath: f64, n: usize) -> Result<ThermalSpec> {
    let mut per_qubit = vec![bath; n];
    per_qubit[0] = target;
    ThermalSpec::new(per_qubit)
}

/// HBAC with the minimal-work cluster unitary repeated every round and
/// `reset_qubits` re-thermalized at `p` between rounds.
pub fn hbac_final_p(
    p: ExcitationProbability,
    cluster_size: usize,
    rounds: usize,
    reset_qubits: &[usize],
) -> Result<ExcitationProbability> {
    let cfg = MethodConfig::Hbac {
        cluster_size,
        rounds,
        reset_qubits: reset_qubits.to_vec(),
        protocol: ProtocolKind::MinimalWork,
        resort: false,
    };
    final_p(&cfg, p)
}

/// One cooling unitary applied to a cluster together with the cluster
/// state just before it.
struct AppliedStep {
    unitary: CoolingUnitary,
    before: ProbVector,
    /// Identical copies applied in parallel to independent clusters.
    copies: usize,
}

struct HbacRun {
    steps: Vec<AppliedStep>,
    final_vector: ProbVector,
}

fn run_hbac(
    p: f64,
    cluster_size: usize,
    rounds: usize,
    reset_qubits: &[usize],
    protocol: &ProtocolKind,
    resort: bool,
) -> Result<HbacRun> {
    let bath = prob(p);
    let fixed = protocol.unitary(cluster_size)?;
    let mut v = thermal_product_vector(&ThermalSpec::homogeneous(p, cluster_size)?)?;
    let mut steps = Vec::with_capacity(rounds);
    for round in 0..rounds {
        if round > 0 {
            v.reset_qubits(reset_qubits, bath)?;
        }
        let unitary = if resort && round > 0 {
            sorting_cooling(&v)?
        } else {
            fixed.clone()
        };
        let next = unitary.apply_to_prob_vector(&v)?;
        steps.push(AppliedStep {
            unitary,
            before: std::mem::replace(&mut v, next),
            copies: 1,
        });
    }
    Ok(HbacRun {
        steps,
        final_vector: v,
    })
}

/// Target population after one round of `protocol` on `n` qubits at `p`.
fn cluster_final_p(
    protocol: &ProtocolKind,
    p: ExcitationProbability,
    n: usize,
) -> Result<ExcitationProbability> {
    if protocol.is_builtin() {
        return dynamic_final_p(p, n);
    }
    let u = protocol.unitary(n)?;
    let v = thermal_product_vector(&ThermalSpec::homogeneous(p.value(), n)?)?;
    u.apply_to_prob_vector(&v)?.marginal(0)
}

/// Target population for any configuration.
pub fn final_p(config: &MethodConfig, p: ExcitationProbability) -> Result<ExcitationProbability> {
    config.validate()?;
    let bath = check_p(p)?;
    match config {
        MethodConfig::Dynamic { n, protocol } => cluster_final_p(protocol, p, *n),
        MethodConfig::SubOptimal {
            cluster_size,
            rounds,
            protocol,
        } => (0..*rounds).try_fold(p, |acc, _| cluster_final_p(protocol, acc, *cluster_size)),
        MethodConfig::Hbac {
            cluster_size,
            rounds,
            reset_qubits,
            protocol,
            resort,
        } => {
            let run = run_hbac(
                bath,
                *cluster_size,
                *rounds,
                reset_qubits,
                protocol,
                *resort,
            )?;
            run.final_vector.marginal(0)
        }
        MethodConfig::SemiOpen {
            cluster_sizes,
            protocol,
        } => {
            let mut target = cluster_final_p(protocol, p, cluster_sizes[0])?;
            for &n in &cluster_sizes[1..] {
                target = max_cooled_target_p(&semi_open_spec(target.value(), bath, n)?)?;
            }
            Ok(target)
        }
    }
}

/// `W = Σ_j E_j (v'_j − v_j)` with `E_j = gap · weight(j)` and `v' = U v`.
/// In the gap's units: joules, or multiples of the gap for [`EnergyGap::unit`].
pub fn work_cost(unitary: &CoolingUnitary, v: &ProbVector, gap: EnergyGap) -> Result<f64> {
    let after = unitary.apply_to_prob_vector(v)?;
    let w: f64 = after
        .entries()
        .iter()
        .zip(v.entries())
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(j, (a, b))| f64::from(hamming_weight(j)) * (a - b))
        .sum();
    Ok(gap.value() * w)
}

/// Every cooling unitary of the method, with the state of its cluster just
/// before it is applied.
fn applied_steps(config: &MethodConfig, p: f64) -> Result<Vec<AppliedStep>> {
    let homogeneous = |q: f64, n: usize| thermal_product_vector(&ThermalSpec::homogeneous(q, n)?);
    match config {
        MethodConfig::Dynamic { n, protocol } => Ok(vec![AppliedStep {
            unitary: protocol.unitary(*n)?,
            before: homogeneous(p, *n)?,
            copies: 1,
        }]),
        MethodConfig::SubOptimal {
            cluster_size: n,
            rounds,
            protocol,
        } => {
            let unitary = protocol.unitary(*n)?;
            let mut q = prob(p);
            let mut steps = Vec::with_capacity(*rounds);
            for k in 1..=*rounds {
                steps.push(AppliedStep {
                    unitary: unitary.clone(),
                    before: homogeneous(q.value(), *n)?,
                    copies: n.pow((rounds - k) as u32),
                });
                q = cluster_final_p(protocol, q, *n)?;
            }
            Ok(steps)
        }
        MethodConfig::Hbac {
            cluster_size,
            rounds,
            reset_qubits,
            protocol,
            resort,
        } => Ok(run_hbac(p, *cluster_size, *rounds, reset_qubits, protocol, *resort)?.steps),
        MethodConfig::SemiOpen {
            cluster_sizes,
            protocol,
        } => {
            let first = cluster_sizes[0];
            let mut steps = vec![AppliedStep {
                unitary: protocol.unitary(first)?,
                before: homogeneous(p, first)?,
                copies: 1,
            }];
            let mut target = cluster_final_p(protocol, prob(p), first)?;
            for &n in &cluster_sizes[1..] {
                let spec = semi_open_spec(target.value(), p, n)?;
                let unitary = heterogeneous_max_cooling(&spec, 0)?;
                let before = thermal_product_vector(&spec)?;
                target = unitary.apply_to_prob_vector(&before)?.marginal(0)?;
                steps.push(AppliedStep {
                    unitary,
                    before,
                    copies: 1,
                });
            }
            Ok(steps)
        }
    }
}

/// Work summed over every cooling unitary in the method, each evaluated on
/// the state its cluster holds just before it.
pub fn total_work_cost(
    config: &MethodConfig,
    p: ExcitationProbability,
    gap: EnergyGap,
) -> Result<f64> {
    config.validate()?;
    let p = check_p(p)?;
    applied_steps(config, p)?
        .iter()
        .map(|s| Ok(s.copies as f64 * work_cost(&s.unitary, &s.before, gap)?))
        .sum()
}

/// A contiguous run of gates applying one cluster unitary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitBlock {
    /// 1-based cooling round.
    pub round: usize,
    /// Register qubits of the cluster; the first is its target.
    pub qubits: Vec<usize>,
    /// Instruction index range `[start, end)` in the circuit.
    pub start: usize,
    pub end: usize,
}

/// Full method circuit plus its block structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodCircuit {
    pub circuit: Circuit,
    pub blocks: Vec<CircuitBlock>,
}

impl MethodCircuit {
    fn push_block(&mut self, round: usize, cluster: &Circuit, qubits: Vec<usize>) -> Result<()> {
        let start = self.circuit.len();
        self.circuit.append_relabeled(cluster, &qubits)?;
        self.blocks.push(CircuitBlock {
            round,
            qubits,
            start,
            end: self.circuit.len(),
        });
        Ok(())
    }
}

/// Assembles the circuit for `config`. `p` is the initial (bath) excitation
/// probability; it only matters where a round's unitary depends on the
/// populations (semi-open rounds after the first, HBAC with re-sorting).
pub fn build_circuit(config: &MethodConfig, p: ExcitationProbability) -> Result<MethodCircuit> {
    config.validate()?;
    let p = check_p(p)?;
    let total = config.total_qubits();
    let mut out = MethodCircuit {
        circuit: Circuit::new(total),
        blocks: Vec::new(),
    };
    match config {
        MethodConfig::Dynamic { n, protocol } => {
            let cluster = synthesize_circuit(&protocol.unitary(*n)?)?;
            out.push_block(1, &cluster, (0..*n).collect())?;
        }
        MethodConfig::SubOptimal {
            cluster_size: n,
            rounds,
            protocol,
        } => {
            let cluster = synthesize_circuit(&protocol.unitary(*n)?)?;
            for k in 1..=*rounds {
                let stride = n.pow((k - 1) as u32);
                let span = stride * n;
                for base in (0..total).step_by(span) {
                    let qubits = (0..*n).map(|j| base + j * stride).collect();
                    out.push_block(k, &cluster, qubits)?;
                }
            }
        }
        MethodConfig::Hbac {
            cluster_size,
            rounds,
            reset_qubits,
            protocol,
            resort,
        } => {
            let run = run_hbac(p, *cluster_size, *rounds, reset_qubits, protocol, *resort)?;
            for (k, step) in run.steps.iter().enumerate() {
                if k > 0 {
                    out.circuit.push_reset(reset_qubits.clone())?;
                }
                let cluster = synthesize_circuit(&step.unitary)?;
                out.push_block(k + 1, &cluster, (0..*cluster_size).collect())?;
            }
        }
        MethodConfig::SemiOpen { cluster_sizes, .. } => {
            let steps = applied_steps(config, p)?;
            let mut next_fresh = 1;
            for (i, (step, &n)) in steps.iter().zip(cluster_sizes).enumerate() {
                let cluster = synthesize_circuit(&step.unitary)?;
                let qubits: Vec<usize> = std::iter::once(0)
                    .chain(next_fresh..next_fresh + n - 1)
                    .collect();
                next_fresh += n - 1;
                out.push_block(i + 1, &cluster, qubits)?;
            }
        }
    }
    Ok(out)
}

/// Target population after simulating the method circuit from the thermal
/// state at `p`, with depolarizing `noise` and resets to the bath at `p`.
pub fn simulate_method(
    config: &MethodConfig,
    p: ExcitationProbability,
    noise: NoiseModel,
) -> Result<ExcitationProbability> {
    let built = build_circuit(config, p)?;
    let n = built.circuit.n_qubits();
    let initial = thermal_product_vector(&ThermalSpec::homogeneous(p.value(), n)?)?;
    let out = simulate(&built.circuit, &initial, noise, p)?;
    out.marginal(0)
}

/// Summary of a method at one initial temperature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingReport {
    pub method: String,
    pub total_qubits: usize,
    pub initial_p1: f64,
    pub initial_temperature: Temperature,
    pub final_p1: f64,
    pub final_temperature: Temperature,
    /// Work in units of the energy gap.
    pub work: f64,
    /// Work in joules, when the gap is given in joules.
    pub work_joules: Option<f64>,
    pub gate_counts: GateCount,
    #[serde(skip)]
    pub circuit: Circuit,
    pub warnings: Vec<String>,
}

/// Report at initial temperature `t`; `t` must be positive and finite.
pub fn report(config: &MethodConfig, t: Temperature, gap: EnergyGap) -> Result<CoolingReport> {
    if !(t.kelvin() > 0.0 && t.kelvin().is_finite()) {
        return Err(Error::InvalidTemperature(t.kelvin()));
    }
    let p = probability_from_temperature(t, gap);
    report_from_p(config, p, gap)
}

/// Report starting from an initial excitation probability.
pub fn report_from_p(
    config: &MethodConfig,
    p: ExcitationProbability,
    gap: EnergyGap,
) -> Result<CoolingReport> {
    config.validate()?;
    check_p(p)?;
    let final_p1 = final_p(config, p)?;
    let work_gap_units = total_work_cost(config, p, EnergyGap::unit())?;
    let built = build_circuit(config, p)?;
    let mut warnings = Vec::new();
    if final_p1.value() >= 0.5 {
        warnings
            .push("final excitation probability >= 1/2; temperature reported as infinite".into());
    }
    Ok(CoolingReport {
        method: config.label(),
        total_qubits: config.total_qubits(),
        initial_p1: p.value(),
        initial_temperature: reported_temperature(p, gap),
        final_p1: final_p1.value(),
        final_temperature: reported_temperature(final_p1, gap),
        work: work_gap_units,
        work_joules: (gap.units() == EnergyUnits::Joules).then(|| work_gap_units * gap.value()),
        gate_counts: gate_count(&built.circuit),
        circuit: built.circuit,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::CycleFile;

    fn p(x: f64) -> ExcitationProbability {
        ExcitationProbability::new(x).unwrap()
    }

    #[test]
    fn dynamic_small_cases() {
        assert!((dynamic_final_p(p(0.1), 2).unwrap().value() - 0.1).abs() < 1e-15);
        assert!((dynamic_final_p(p(0.1), 3).unwrap().value() - 0.028).abs() < 1e-15);
        assert_eq!(dynamic_final_p(p(0.1), 1).unwrap().value(), 0.1);
        assert!(dynamic_final_p(p(0.6), 3).is_err());
    }

    #[test]
    fn sub_optimal_recursion() {
        let one = sub_optimal_final_p(p(0.1), 3, 1).unwrap();
        assert_eq!(one, dynamic_final_p(p(0.1), 3).unwrap());
        // 0.028² (3 − 0.056)
        let two = sub_optimal_final_p(p(0.1), 3, 2).unwrap().value();
        assert!((two - 0.002_308_096).abs() < 1e-15);
        assert!(sub_optimal_final_p(p(0.1), 1, 2).is_err());
    }

    #[test]
    fn semi_open_rounds() {
        assert!((semi_open_final_p(p(0.1), &[3]).unwrap().value() - 0.028).abs() < 1e-15);
        assert!((semi_open_final_p(p(0.1), &[3, 3]).unwrap().value() - 0.01504).abs() < 1e-15);
        let four = semi_open_final_p(p(0.1), &[3, 3, 3, 3]).unwrap().value();
        assert!((four - 0.012_287_296).abs() < 1e-15);
        assert!(semi_open_final_p(p(0.1), &[]).is_err());
    }

    #[test]
    fn hbac_rounds() {
        let one = hbac_final_p(p(0.1), 3, 1, &[1, 2]).unwrap().value();
        assert!((one - 0.028).abs() < 1e-15);
        let two = hbac_final_p(p(0.1), 3, 2, &[1, 2]).unwrap().value();
        assert!((two - 0.01504).abs() < 1e-15);
        let limit = hbac_final_p(p(0.1), 3, 200, &[1, 2]).unwrap().value();
        assert!((limit - 0.01 / 0.82).abs() < 1e-12);
    }

    #[test]
    fn work_examples() {
        let v = thermal_product_vector(&ThermalSpec::homogeneous(0.1, 3).unwrap()).unwrap();
        let swap = CoolingUnitary::from_index_cycles(vec![vec![3, 4]], 3).unwrap();
        let w = work_cost(&swap, &v, EnergyGap::unit()).unwrap();
        assert!((w - 0.072).abs() < 1e-15);
        let id = CoolingUnitary::identity(3).unwrap();
        assert_eq!(work_cost(&id, &v, EnergyGap::unit()).unwrap(), 0.0);
        let u = ProbVector::uniform(3);
        assert_eq!(work_cost(&swap, &u, EnergyGap::unit()).unwrap(), 0.0);
    }

    #[test]
    fn total_work_sub_optimal() {
        let cfg = MethodConfig::SubOptimal {
            cluster_size: 3,
            rounds: 2,
            protocol: ProtocolKind::MinimalWork,
        };
        // round 2 swap moves a·b² against b·a² with b = 0.028, a = 0.972
        let (a, b) = (0.972f64, 0.028f64);
        let round2 = 2.0 * (b * a * a - a * b * b) + (a * b * b - b * a * a);
        let want = 3.0 * 0.072 + round2;
        let got = total_work_cost(&cfg, p(0.1), EnergyGap::unit()).unwrap();
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }

    #[test]
    fn identity_custom_protocol() {
        let cfg = MethodConfig::Dynamic {
            n: 3,
            protocol: ProtocolKind::Custom(CycleFile {
                n: 3,
                cycles: vec![],
            }),
        };
        let r = report_from_p(&cfg, p(0.1), EnergyGap::unit()).unwrap();
        assert!((r.final_p1 - 0.1).abs() < 1e-15);
        assert_eq!(r.work, 0.0);
        assert_eq!(r.gate_counts.total, 0);
    }

    #[test]
    fn config_validation() {
        let bad = [
            r#"{"method": "dynamic", "n": 1}"#,
            r#"{"method": "sub_optimal", "cluster_size": 1, "rounds": 2}"#,
            r#"{"method": "hbac", "cluster_size": 3, "rounds": 2, "reset_qubits": [0]}"#,
            r#"{"method": "hbac", "cluster_size": 3, "rounds": 2, "reset_qubits": []}"#,
            r#"{"method": "hbac", "cluster_size": 3, "rounds": 2, "reset_qubits": [3]}"#,
            r#"{"method": "semi_open", "cluster_sizes": [3, 1]}"#,
            r#"{"method": "semi_open", "cluster_sizes": []}"#,
            r#"{"method": "dynamic", "n": 3, "bogus": 1}"#,
            r#"{"method": "teleport"}"#,
            r#"{"method": "dynamic", "n": 3, "protocol": {"custom": {"n": 2, "cycles": []}}}"#,
            r#"{"method": "sub_optimal", "cluster_size": 3, "rounds": 60}"#,
        ];
        for text in bad {
            assert!(MethodConfig::from_json(text).is_err(), "{text}");
        }
        let ok = MethodConfig::from_json(
            r#"{"method": "semi_open", "cluster_sizes": [3, 3], "protocol": "mirror"}"#,
        )
        .unwrap();
        assert_eq!(ok.total_qubits(), 5);
        assert_eq!(ok.label(), "semi_open(n=3+3,mirror)");
    }

    #[test]
    fn circuit_layouts() {
        let sub = MethodConfig::SubOptimal {
            cluster_size: 3,
            rounds: 2,
            protocol: ProtocolKind::MinimalWork,
        };
        let built = build_circuit(&sub, p(0.1)).unwrap();
        assert_eq!(built.circuit.n_qubits(), 9);
        let rounds: Vec<usize> = built.blocks.iter().map(|b| b.round).collect();
        assert_eq!(rounds, vec![1, 1, 1, 2]);
        assert_eq!(built.blocks[3].qubits, vec![0, 3, 6]);

        let hbac = MethodConfig::Hbac {
            cluster_size: 3,
            rounds: 2,
            reset_qubits: vec![1, 2],
            protocol: ProtocolKind::MinimalWork,
            resort: false,
        };
        let built = build_circuit(&hbac, p(0.1)).unwrap();
        let count = gate_count(&built.circuit);
        assert_eq!((count.total, count.resets), (10, 1));

        let semi = MethodConfig::SemiOpen {
            cluster_sizes: vec![3, 3],
            protocol: ProtocolKind::MinimalWork,
        };
        let built = build_circuit(&semi, p(0.1)).unwrap();
        assert_eq!(built.blocks[0].qubits, vec![0, 1, 2]);
        assert_eq!(built.blocks[1].qubits, vec![0, 3, 4]);
    }

    #[test]
    fn reports() {
        let dyn3 = MethodConfig::Dynamic {
            n: 3,
            protocol: ProtocolKind::MinimalWork,
        };
        let r = report_from_p(&dyn3, p(0.1), EnergyGap::unit()).unwrap();
        assert!((r.final_p1 - 0.028).abs() < 1e-15);
        assert!((r.work - 0.072).abs() < 1e-15);
        assert_eq!((r.gate_counts.total, r.total_qubits), (5, 3));

        let dyn2 = MethodConfig::Dynamic {
            n: 2,
            protocol: ProtocolKind::MinimalWork,
        };
        let gap = EnergyGap::from_ghz(5.0).unwrap();
        let t = Temperature::from_millikelvin(50.0).unwrap();
        let r = report(&dyn2, t, gap).unwrap();
        assert_eq!(r.final_p1, r.initial_p1);
        assert_eq!((r.work, r.gate_counts.total), (0.0, 0));
        assert!(
            ((r.final_temperature.kelvin() - 0.05) / 0.05).abs() < 1e-12,
            "{:?}",
            r.final_temperature
        );
        assert!(report(&dyn2, Temperature::zero(), gap).is_err());
    }
}
