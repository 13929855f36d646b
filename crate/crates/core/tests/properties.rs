use proptest::prelude::*;
use qcool::protocols::{minimal_work_protocol, mirror_protocol, ppa, sorting_cooling};
use qcool::sim::{simulate, NoiseModel, NoisePlacement, ProbVector};
use qcool::synth::{simplify, synthesize_circuit};
use qcool::thermo::{thermal_product_vector, EnergyGap, ExcitationProbability, ThermalSpec};
use qcool::unitary::CoolingUnitary;
use qcool::{dynamic_final_p, hbac_final_p, heterogeneous_max_cooling, work_cost};

fn prob(p: f64) -> ExcitationProbability {
    ExcitationProbability::new(p).unwrap()
}

/// A register size and a permutation of its basis states.
fn permutation(max_n: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (1..=max_n).prop_flat_map(|n| {
        let states: Vec<usize> = (0..1usize << n).collect();
        (Just(n), Just(states).prop_shuffle())
    })
}

fn vector(n: usize) -> impl Strategy<Value = ProbVector> {
    prop::collection::vec(1e-6f64..1.0, 1usize << n).prop_map(move |raw| {
        let total: f64 = raw.iter().sum();
        ProbVector::new(n, raw.iter().map(|x| x / total).collect()).unwrap()
    })
}

fn assert_conserved(v: &ProbVector) {
    assert!((v.sum() - 1.0).abs() < 1e-12, "sum {}", v.sum());
    assert!(v.entries().iter().all(|&x| x >= 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthesized_circuit_reproduces_permutation((n, map) in permutation(6)) {
        let u = CoolingUnitary::from_mapping(&map, n).unwrap();
        let circuit = synthesize_circuit(&u).unwrap();
        prop_assert_eq!(circuit.induced_mapping(), map.clone());
        prop_assert_eq!(simplify(&circuit).induced_mapping(), map);
    }

    #[test]
    fn compose_matches_dense_product(
        (n, a) in permutation(4),
        seed in any::<u64>(),
    ) {
        let shuffle = |shift: u64| -> Vec<usize> {
            let mut m: Vec<usize> = (0..1usize << n).collect();
            let mut s = seed.wrapping_add(shift) | 1;
            for i in (1..m.len()).rev() {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                m.swap(i, (s % (i as u64 + 1)) as usize);
            }
            m
        };
        let ua = CoolingUnitary::from_mapping(&a, n).unwrap();
        let ub = CoolingUnitary::from_mapping(&shuffle(1), n).unwrap();
        let uc = CoolingUnitary::from_mapping(&shuffle(2), n).unwrap();
        let ab = ua.compose(&ub).unwrap();
        prop_assert_eq!(ab.to_dense().unwrap(), ua.to_dense().unwrap().matmul(&ub.to_dense().unwrap()));
        let left = ab.compose(&uc).unwrap();
        let right = ua.compose(&ub.compose(&uc).unwrap()).unwrap();
        prop_assert_eq!(left.mapping(), right.mapping());
        prop_assert!(ua.compose(&ua.inverse()).unwrap().is_identity());
    }

    #[test]
    fn one_nonzero_per_row_and_column((n, map) in permutation(4)) {
        let dense = CoolingUnitary::from_mapping(&map, n).unwrap().to_dense().unwrap();
        let dim = dense.dim();
        for r in 0..dim {
            let row = (0..dim).filter(|&c| dense.get(r, c).norm() > 0.0).count();
            let col = (0..dim).filter(|&c| dense.get(c, r).norm() > 0.0).count();
            prop_assert_eq!((row, col), (1, 1));
        }
    }

    #[test]
    fn operations_conserve_probability(
        v in (1usize..=5).prop_flat_map(vector),
        noise in 0.0f64..=1.0,
        bath in 0.0f64..=0.5,
        q in any::<prop::sample::Index>(),
    ) {
        let n = v.n_qubits();
        let q = q.index(n);
        let mut w = v.clone();
        w.depolarize(&[q], noise).unwrap();
        assert_conserved(&w);
        w.reset_qubits(&[q], prob(bath)).unwrap();
        assert_conserved(&w);
        let sorted = sorting_cooling(&v).unwrap();
        let out = sorted.apply_to_prob_vector(&v).unwrap();
        assert_conserved(&out);
        let circuit = synthesize_circuit(&sorted).unwrap();
        for placement in [NoisePlacement::PerGate, NoisePlacement::PerLayer] {
            let noisy = simulate(&circuit, &v, NoiseModel::new(noise, placement).unwrap(), prob(bath)).unwrap();
            assert_conserved(&noisy);
        }
    }

    #[test]
    fn depolarize_commutes_with_complement_permutations(
        v in (2usize..=5).prop_flat_map(vector),
        noise in 0.0f64..=1.0,
        q in any::<prop::sample::Index>(),
        flip in any::<prop::sample::Index>(),
    ) {
        // permutation: NOT on one qubit outside the depolarized set, controlled
        // on nothing, realized as an index map
        let n = v.n_qubits();
        let q = q.index(n);
        let others: Vec<usize> = (0..n).filter(|&x| x != q).collect();
        let f = others[flip.index(others.len())];
        let mask = 1usize << (n - 1 - f);
        let map: Vec<usize> = (0..1usize << n).map(|j| j ^ mask).collect();
        let u = CoolingUnitary::from_mapping(&map, n).unwrap();

        let mut a = u.apply_to_prob_vector(&v).unwrap();
        a.depolarize(&[q], noise).unwrap();
        let mut b = v.clone();
        b.depolarize(&[q], noise).unwrap();
        let b = u.apply_to_prob_vector(&b).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries()) {
            prop_assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn protocols_agree_and_cost_work(n in 2usize..=7, p in 0.001f64..0.499) {
        let v = thermal_product_vector(&ThermalSpec::homogeneous(p, n).unwrap()).unwrap();
        let want = dynamic_final_p(prob(p), n).unwrap().value();
        let mut works = Vec::new();
        for u in [ppa(n).unwrap(), mirror_protocol(n).unwrap(), minimal_work_protocol(n).unwrap()] {
            let got = u.apply_to_prob_vector(&v).unwrap().marginal(0).unwrap().value();
            prop_assert!((got - want).abs() < 1e-12);
            works.push(work_cost(&u, &v, EnergyGap::unit()).unwrap());
        }
        prop_assert!(works.iter().all(|&w| w >= -1e-15));
        prop_assert!(works[2] <= works[0] + 1e-15 && works[2] <= works[1] + 1e-15);
    }

    #[test]
    fn heterogeneous_cooling_is_maximal(ps in prop::collection::vec(0.001f64..0.499, 2..=6)) {
        let spec = ThermalSpec::new(ps.clone()).unwrap();
        let v = thermal_product_vector(&spec).unwrap();
        let u = heterogeneous_max_cooling(&spec, 0).unwrap();
        let got = u.apply_to_prob_vector(&v).unwrap().marginal(0).unwrap().value();
        let mut sorted = v.entries().to_vec();
        sorted.sort_by(f64::total_cmp);
        let want: f64 = sorted[..sorted.len() / 2].iter().sum();
        prop_assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn hbac_cools_monotonically(p in 0.01f64..0.45, rounds in 1usize..12) {
        let now = hbac_final_p(prob(p), 3, rounds, &[1, 2]).unwrap().value();
        let next = hbac_final_p(prob(p), 3, rounds + 1, &[1, 2]).unwrap().value();
        prop_assert!(next <= now + 1e-15);
        prop_assert!(next >= p * p / ((1.0 - p).powi(2) + p * p) - 1e-15);
    }
}

#[test]
fn minimal_work_beats_every_maximal_cooling_permutation_at_three_qubits() {
    // all 8! permutations; keep those reaching the cooling optimum
    let p = 0.1;
    let v = thermal_product_vector(&ThermalSpec::homogeneous(p, 3).unwrap()).unwrap();
    let best_p = dynamic_final_p(prob(p), 3).unwrap().value();
    let minimal = work_cost(&minimal_work_protocol(3).unwrap(), &v, EnergyGap::unit()).unwrap();
    let mut perm: Vec<usize> = (0..8).collect();
    let mut seen = 0;
    let mut c = [0usize; 8];
    let mut visit = |perm: &[usize]| {
        let u = CoolingUnitary::from_mapping(perm, 3).unwrap();
        let out = u.apply_to_prob_vector(&v).unwrap();
        if (out.marginal(0).unwrap().value() - best_p).abs() < 1e-15 {
            seen += 1;
            let w = work_cost(&u, &v, EnergyGap::unit()).unwrap();
            assert!(minimal <= w + 1e-15, "{perm:?} costs {w} < {minimal}");
        }
    };
    visit(&perm);
    let mut i = 0;
    while i < 8 {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            perm.swap(j, i);
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    assert_eq!(seen, 576);
}

#[test]
fn low_temperature_scaling() {
    let p0 = 1.0 / (1.0 + 20f64.exp());
    let t0 = 1.0 / 20.0;
    for n in [3usize, 5, 7] {
        let p = dynamic_final_p(prob(p0), n).unwrap().value();
        let t = 1.0 / ((1.0 - p) / p).ln();
        let ratio = t / t0;
        assert!(
            (ratio / (2.0 / (n as f64 + 1.0)) - 1.0).abs() < 0.05,
            "n={n} ratio {ratio}"
        );
    }
}
