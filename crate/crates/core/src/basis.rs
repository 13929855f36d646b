//! Bit conventions shared by every module.
//!
//! Qubit `0` is the most significant bit of a basis index, so the state
//! string `"101"` on three qubits is index 5 and puts qubit 0 and qubit 2 in
//! `|1⟩`. Qubit 0 is also the cooling target inside any cluster.

/// Bit mask selecting `qubit` inside an `n_qubits`-bit basis index.
#[inline]
pub fn qubit_mask(qubit: usize, n_qubits: usize) -> usize {
    debug_assert!(qubit < n_qubits);
    1usize << (n_qubits - 1 - qubit)
}

/// Value (0 or 1) of `qubit` in basis state `index`.
#[inline]
pub fn bit(index: usize, qubit: usize, n_qubits: usize) -> bool {
    index & qubit_mask(qubit, n_qubits) != 0
}

#[inline]
pub fn hamming_weight(index: usize) -> u32 {
    index.count_ones()
}

/// Formats `index` as an `n_qubits`-character binary string, qubit 0 first.
pub fn to_bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if bit(index, q, n_qubits) { '1' } else { '0' })
        .collect()
}

/// Combined mask of a set of qubits.
pub fn qubits_mask(qubits: &[usize], n_qubits: usize) -> usize {
    qubits.iter().fold(0, |m, &q| m | qubit_mask(q, n_qubits))
}

/// Iterates over every submask of `mask`, including 0 and `mask` itself.
pub fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

/// Binomial coefficient as `f64`; exact for the register sizes used here.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}
