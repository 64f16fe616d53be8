//! Dense statevector storage, the gate kernel, exact probabilities and
//! seeded shot sampling.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::bits::index_to_label;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{gate_matrix, GateKind};

/// Largest register the dense simulator will allocate (2^24 amplitudes, 256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Largest register for which [`circuit_unitary`] builds the full matrix.
pub const MAX_UNITARY_QUBITS: usize = 10;

/// Normalization drift past this is reported as an internal error.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0⟩` on `num_qubits` qubits.
    pub fn new_zero_state(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, 0)
    }

    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_register_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::param(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps caller-supplied amplitudes. The length must be a power of two
    /// and the vector normalized within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::param(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_register_size(num_qubits)?;
        let state = StateVector {
            num_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::param(format!(
                "state is not normalized (norm² = {norm})"
            )));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Sum of `|amplitude|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn check_norm(&self) -> Result<()> {
        let drift = (self.norm_sqr() - 1.0).abs();
        if drift > NORM_DRIFT_TOL {
            return Err(Error::Internal(format!("normalization drift {drift:e}")));
        }
        Ok(())
    }

    /// Applies `kind` to `target` on every basis state whose `controls` bits are all 1.
    pub fn apply_gate(&mut self, kind: GateKind, controls: &[usize], target: usize) -> Result<()> {
        check_indices(self.num_qubits, controls, target)?;
        let m = gate_matrix(kind)?;
        let control_mask = controls.iter().fold(0usize, |mask, &c| mask | (1 << c));
        let target_bit = 1usize << target;
        let low_mask = target_bit - 1;
        let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
        let diagonal = kind.is_diagonal();

        // Enumerate indices with the target bit clear by inserting a zero at `target`.
        for k in 0..self.amplitudes.len() / 2 {
            let i = ((k & !low_mask) << 1) | (k & low_mask);
            if i & control_mask != control_mask {
                continue;
            }
            let j = i | target_bit;
            if diagonal {
                self.amplitudes[i] *= m00;
                self.amplitudes[j] *= m11;
            } else {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = m00 * a0 + m01 * a1;
                self.amplitudes[j] = m10 * a0 + m11 * a1;
            }
        }
        Ok(())
    }

    /// `|amplitude|²` per basis index.
    pub fn probability_vector(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Outcome distribution over qubits `0..measured`, summing out the rest.
    pub fn marginal_probabilities(&self, measured: usize) -> Result<Vec<f64>> {
        if measured == 0 || measured > self.num_qubits {
            return Err(Error::param(format!(
                "cannot measure {measured} of {} qubits",
                self.num_qubits
            )));
        }
        let mask = (1usize << measured) - 1;
        let mut out = vec![0.0; 1 << measured];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[i & mask] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Full-register probabilities keyed by outcome string.
    pub fn probabilities(&self) -> BTreeMap<String, f64> {
        label_map(&self.probability_vector(), self.num_qubits)
    }

    /// Draws `shots` outcomes over the whole register.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        self.sample_register(self.num_qubits, shots, seed)
    }

    /// Draws `shots` outcomes over qubits `0..measured`.
    pub fn sample_register(&self, measured: usize, shots: u64, seed: u64) -> Result<Histogram> {
        let probs = self.marginal_probabilities(measured)?;
        Histogram::from_distribution(&probs, measured, shots, seed)
    }
}

fn check_register_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::size("register needs at least one qubit"));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::size(format!(
            "{num_qubits} qubits exceeds the dense-simulator limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub(crate) fn check_indices(num_qubits: usize, controls: &[usize], target: usize) -> Result<()> {
    if target >= num_qubits {
        return Err(Error::param(format!(
            "target {target} out of range for {num_qubits} qubits"
        )));
    }
    for (i, &c) in controls.iter().enumerate() {
        if c >= num_qubits {
            return Err(Error::param(format!(
                "control {c} out of range for {num_qubits} qubits"
            )));
        }
        if c == target {
            return Err(Error::param(format!(
                "qubit {c} is both control and target"
            )));
        }
        if controls[..i].contains(&c) {
            return Err(Error::param(format!("duplicate control {c}")));
        }
    }
    Ok(())
}

/// Probability vector keyed by outcome string.
pub fn label_map(probs: &[f64], width: usize) -> BTreeMap<String, f64> {
    probs
        .iter()
        .enumerate()
        .map(|(i, &p)| (index_to_label(i, width), p))
        .collect()
}

/// Sampled counts plus the exact distribution they were drawn from.
///
/// Outcomes are drawn by inverse-CDF lookup of a uniform double in `[0, 1)`
/// built from the top 53 bits of a xoshiro256** stream seeded through
/// SplitMix64 (`Xoshiro256StarStar::seed_from_u64`). The same
/// `(distribution, shots, seed)` always yields the same counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub shots: u64,
    pub seed: u64,
    /// Drawn outcomes only; zero counts are omitted.
    pub counts: BTreeMap<String, u64>,
    /// Every outcome of the measured register.
    pub exact_probabilities: BTreeMap<String, f64>,
}

impl Histogram {
    pub fn from_distribution(probs: &[f64], width: usize, shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::param("shots must be at least 1"));
        }
        if probs.len() != 1usize << width {
            return Err(Error::param(format!(
                "distribution of length {} does not match {width} measured qubits",
                probs.len()
            )));
        }
        let cumulative: Vec<f64> = probs
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().unwrap_or(&0.0);
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param(format!("distribution sums to {total}, not 1")));
        }
        // Last outcome with nonzero mass absorbs rounding past the final cumulative value.
        let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);

        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let mut tally = vec![0u64; probs.len()];
        for _ in 0..shots {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * total;
            let idx = cumulative.partition_point(|&c| c <= u).min(last_nonzero);
            tally[idx] += 1;
        }
        let counts = tally
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| (index_to_label(i, width), n))
            .collect();
        Ok(Histogram {
            shots,
            seed,
            counts,
            exact_probabilities: label_map(probs, width),
        })
    }

    pub fn count(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }
}

/// Dense `2^q × 2^q` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    data: Vec<Complex64>,
}

impl Unitary {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    /// Max entrywise deviation of `U†U` from the identity is within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let dot: Complex64 = (0..n).map(|r| self.get(r, i).conj() * self.get(r, j)).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                (dot - expected).norm() <= tol
            })
        })
    }

    pub fn approx_eq(&self, other: &Unitary, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Full unitary of `circuit`, one basis column at a time. Verification-scale only.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Unitary> {
    let q = circuit.total_qubits();
    if q > MAX_UNITARY_QUBITS {
        return Err(Error::size(format!(
            "circuit_unitary supports at most {MAX_UNITARY_QUBITS} qubits, got {q}"
        )));
    }
    let dim = 1usize << q;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let out = circuit.run(Some(StateVector::basis_state(q, col)?))?;
        for (row, amp) in out.amplitudes().iter().enumerate() {
            data[row * dim + col] = *amp;
        }
    }
    Ok(Unitary { dim, data })
}
