//! Oracle, diffusion and full Grover circuit builders, rotation-count
//! selectors and the phase-detection diagnostic.
//!
//! Every oracle here is first built for the all-ones state and then
//! retargeted to an arbitrary pattern by conjugating the zero bits of the
//! pattern with X gates.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::bits::{index_to_label, label_to_index};
use crate::circuit::{Circuit, GateOp};
use crate::error::{Error, Result};

/// Upper bound on ops in a generated Grover circuit.
pub const MAX_CIRCUIT_OPS: usize = 2_000_000;

/// Widest register [`build_cnz`] decomposes.
pub const MAX_CNZ_QUBITS: usize = 10;

/// Marked bit string, qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    bits: Vec<bool>,
}

impl Pattern {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::param("pattern must have at least one bit"));
        }
        Ok(Pattern { bits })
    }

    /// The `n`-bit all-ones pattern.
    pub fn all_ones(n: usize) -> Result<Self> {
        Self::new(vec![true; n])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Amplitude index of the pattern's basis state.
    pub fn index(&self) -> Option<usize> {
        label_to_index(&self.to_string())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::param(format!(
                    "pattern may only contain 0 and 1, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Pattern::new(bits)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleStyle {
    /// Ancilla-free multi-controlled Z from a controlled-phase ladder.
    #[serde(rename = "cnz")]
    CnZ,
    /// Toffoli compute ladder into ancillas, one cZ, then uncompute.
    #[serde(rename = "v")]
    VOracle,
}

impl OracleStyle {
    pub fn ancillas(&self, n: usize) -> usize {
        match self {
            OracleStyle::CnZ => 0,
            OracleStyle::VOracle => n.saturating_sub(2),
        }
    }
}

impl FromStr for OracleStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "v" | "v-oracle" | "voracle" => Ok(OracleStyle::VOracle),
            "cnz" => Ok(OracleStyle::CnZ),
            other => Err(Error::param(format!("unknown oracle style {other:?}"))),
        }
    }
}

impl fmt::Display for OracleStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleStyle::CnZ => "cnz",
            OracleStyle::VOracle => "v",
        })
    }
}

/// Phase flip on `|1...1⟩` of `n` qubits with no ancillas.
///
/// Uses the parity expansion
/// `x_0 x_1 ... x_{k-1} = 2^{1-k} Σ_{S≠∅} (-1)^{|S|-1} ⊕_{i∈S} x_i`
/// over the `k = n - 1` controls: each subset parity is accumulated into
/// its highest member with CNOTs (walked in Gray-code order), and a
/// `cu1(±π/2^{k-1})` from that qubit onto the target contributes the term.
pub fn build_cnz(n: usize) -> Result<Circuit> {
    if !(2..=MAX_CNZ_QUBITS).contains(&n) {
        return Err(Error::param(format!(
            "C^kZ oracle supports 2..={MAX_CNZ_QUBITS} qubits, got {n}"
        )));
    }
    let controls = n - 1;
    let target = n - 1;
    let lambda = PI / 2f64.powi(controls as i32 - 1);
    let mut circuit = Circuit::new(n, 0);

    for top in 0..controls {
        for step in 0u64..(1 << top) {
            if step > 0 {
                let flipped = step.trailing_zeros() as usize;
                circuit.append(GateOp::cx(flipped, top))?;
            }
            let gray = step ^ (step >> 1);
            let subset_size = 1 + gray.count_ones();
            let sign = if subset_size % 2 == 1 { 1.0 } else { -1.0 };
            circuit.append(GateOp::cu1(sign * lambda, top, target))?;
        }
        if top > 0 {
            // The walk ends on the single-bit code for `top - 1`.
            circuit.append(GateOp::cx(top - 1, top))?;
        }
    }
    Ok(circuit)
}

/// Phase flip on `|1...1⟩` of `n` search qubits using `n - 2` ancillas.
///
/// Toffoli(q0, q1 → a0), then Toffoli(q_{k+1}, a_{k-1} → a_k) for
/// `k = 1..n-3`, a cZ from the last ancilla onto `q_{n-1}`, then the
/// ladder in reverse. For `n = 2` this is a bare cZ.
pub fn build_v_oracle(n: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::param(format!(
            "V-Oracle needs at least 2 qubits, got {n}"
        )));
    }
    let ancillas = n - 2;
    let mut circuit = Circuit::new(n, ancillas);
    if n == 2 {
        circuit.append(GateOp::cz(0, 1))?;
        return Ok(circuit);
    }
    let ancilla = |k: usize| n + k;
    let mut ladder = vec![GateOp::toffoli(0, 1, ancilla(0))];
    for k in 1..ancillas {
        ladder.push(GateOp::toffoli(k + 1, ancilla(k - 1), ancilla(k)));
    }
    for op in &ladder {
        circuit.append(op.clone())?;
    }
    circuit.append(GateOp::cz(ancilla(ancillas - 1), n - 1))?;
    for op in ladder.into_iter().rev() {
        circuit.append(op)?;
    }
    Ok(circuit)
}

/// All-ones oracle for `n` search qubits in the given style. A single
/// qubit gets a bare Z in either style.
pub fn all_ones_oracle(n: usize, style: OracleStyle) -> Result<Circuit> {
    match (n, style) {
        (0, _) => Err(Error::param("oracle needs at least one qubit")),
        (1, _) => {
            let mut c = Circuit::new(1, 0);
            c.append(GateOp::z(0))?;
            Ok(c)
        }
        (_, OracleStyle::CnZ) => build_cnz(n),
        (_, OracleStyle::VOracle) => build_v_oracle(n),
    }
}

/// Retargets an all-ones oracle to `pattern` by X-conjugating its zero bits.
pub fn mark_pattern(core: &Circuit, pattern: &Pattern) -> Result<Circuit> {
    if core.search_qubits() != pattern.len() {
        return Err(Error::param(format!(
            "pattern has {} bits but the oracle acts on {} search qubits",
            pattern.len(),
            core.search_qubits()
        )));
    }
    let flips: Vec<GateOp> = zero_bits(pattern).map(GateOp::x).collect();
    let mut circuit = Circuit::new(core.search_qubits(), core.ancilla_qubits());
    for op in flips.iter().chain(core.ops()).chain(&flips) {
        circuit.append(op.clone())?;
    }
    Ok(circuit)
}

fn zero_bits(pattern: &Pattern) -> impl Iterator<Item = usize> + '_ {
    pattern
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| !b)
        .map(|(q, _)| q)
}

fn one_bits(pattern: &Pattern) -> impl Iterator<Item = usize> + '_ {
    pattern
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(q, _)| q)
}

fn layer(n: usize, gate: fn(usize) -> GateOp) -> impl Iterator<Item = GateOp> {
    (0..n).map(gate)
}

/// H·X layers, the all-ones oracle, then X·H layers. Grouped as
/// `diffusion`, `oracle`, `diffusion`.
///
/// Maps search amplitudes `a_i` to `-(2μ - a_i)`: the circuit realizes
/// `I - 2|s⟩⟨s|`, the negative of inversion about the mean.
pub fn build_diffusion(n: usize, style: OracleStyle) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::param("diffusion needs at least one qubit"));
    }
    let core = all_ones_oracle(n, style)?;
    let mut circuit = Circuit::new(n, core.ancilla_qubits());
    append_diffusion(&mut circuit, n, &core)?;
    Ok(circuit)
}

fn append_diffusion(circuit: &mut Circuit, n: usize, core: &Circuit) -> Result<()> {
    circuit.append_group("diffusion", layer(n, GateOp::h).chain(layer(n, GateOp::x)))?;
    circuit.append_group("oracle", core.ops().iter().cloned())?;
    circuit.append_group("diffusion", layer(n, GateOp::x).chain(layer(n, GateOp::h)))?;
    Ok(())
}

/// One rotation: the marked oracle (group `oracle`) followed by the
/// diffusion (groups `diffusion`, `oracle`, `diffusion`).
pub fn build_rotation(pattern: &Pattern, style: OracleStyle) -> Result<Circuit> {
    let n = pattern.len();
    let core = all_ones_oracle(n, style)?;
    let marked = mark_pattern(&core, pattern)?;
    let mut circuit = Circuit::new(n, core.ancilla_qubits());
    circuit.append_group("oracle", marked.ops().iter().cloned())?;
    append_diffusion(&mut circuit, n, &core)?;
    Ok(circuit)
}

/// H layer on the search register.
pub fn build_init(n: usize, ancillas: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(n, ancillas);
    circuit.append_group("init", layer(n, GateOp::h))?;
    Ok(circuit)
}

pub(crate) fn check_op_budget(per_rotation: usize, rotations: usize, n: usize) -> Result<()> {
    let estimate = per_rotation.saturating_mul(rotations).saturating_add(n);
    if estimate > MAX_CIRCUIT_OPS {
        return Err(Error::size(format!(
            "{rotations} rotations on {n} qubits needs {estimate} ops (limit {MAX_CIRCUIT_OPS})"
        )));
    }
    Ok(())
}

/// H layer, then `rotations` × (marked oracle, diffusion).
///
/// Group sequence: `init`, then per rotation `oracle`, `diffusion`,
/// `oracle`, `diffusion` (the diffusion's inner all-ones oracle is its own
/// group). Ancillas are shared by every oracle instance.
pub fn build_grover(pattern: &Pattern, rotations: usize, style: OracleStyle) -> Result<Circuit> {
    if rotations == 0 {
        return Err(Error::param("rotations must be at least 1"));
    }
    let n = pattern.len();
    let rotation = build_rotation(pattern, style)?;
    check_op_budget(rotation.len(), rotations, n)?;

    let mut circuit = build_init(n, rotation.ancilla_qubits())?;
    for _ in 0..rotations {
        circuit.extend(&rotation)?;
    }
    Ok(circuit)
}

/// `ceil(0.8165 · √(2^n))`: rotations guaranteeing success probability ≥ 2/3
/// under the one-amplitude-unit-per-rotation argument.
pub fn bqp_rotations(n: u32) -> u64 {
    (0.8165 * 2f64.powi(n as i32).sqrt()).ceil() as u64
}

/// Rotation count in `1..=bqp_rotations(n) + 2` with the highest analytic
/// success probability; ties go to the smaller count.
pub fn optimal_rotations(n: u32) -> u64 {
    let limit = bqp_rotations(n) + 2;
    let mut best = (1, f64::NEG_INFINITY);
    for state in analytic::trajectory(n).skip(1).take(limit as usize) {
        let p = state.marked_probability();
        if p > best.1 + 1e-12 {
            best = (state.k, p);
        }
    }
    best.0
}

/// H layer, marked oracle, H layer, then X on every qubit whose pattern bit
/// is 1. Barriers separate the four stages.
pub fn build_phase_check(pattern: &Pattern, style: OracleStyle) -> Result<Circuit> {
    let core = all_ones_oracle(pattern.len(), style)?;
    build_phase_check_with(pattern, Some(&mark_pattern(&core, pattern)?))
}

/// As [`build_phase_check`] with a caller-supplied oracle; `None` leaves the
/// oracle slot empty.
pub fn build_phase_check_with(pattern: &Pattern, oracle: Option<&Circuit>) -> Result<Circuit> {
    let n = pattern.len();
    let ancillas = oracle.map_or(0, Circuit::ancilla_qubits);
    if let Some(o) = oracle {
        if o.search_qubits() != n {
            return Err(Error::param(format!(
                "oracle acts on {} search qubits, pattern has {n}",
                o.search_qubits()
            )));
        }
    }
    let mut circuit = Circuit::new(n, ancillas);
    circuit.append_group("init", layer(n, GateOp::h))?;
    circuit.barrier("oracle");
    if let Some(o) = oracle {
        circuit.append_group("oracle", o.ops().iter().cloned())?;
    }
    circuit.barrier("hadamard");
    circuit.append_group("hadamard", layer(n, GateOp::h))?;
    circuit.barrier("select");
    let flips: Vec<GateOp> = one_bits(pattern).map(GateOp::x).collect();
    if !flips.is_empty() {
        circuit.append_group("select", flips)?;
    }
    Ok(circuit)
}

/// Phase-check factor by which the tower must exceed every other outcome.
pub const TOWER_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVerdict {
    pub detected: bool,
    pub modal: String,
    pub modal_probability: f64,
    pub runner_up_probability: f64,
}

/// Reads a phase-check distribution over the search register.
///
/// A phase flip is detected when the pattern is the modal outcome, it is at
/// least [`TOWER_FACTOR`] times as likely as any other outcome, and some
/// other outcome has nonzero probability. A single certain outcome means
/// the two H layers cancelled, i.e. nothing flipped a phase.
pub fn phase_verdict(probs: &[f64], pattern: &Pattern) -> PhaseVerdict {
    let width = pattern.len();
    let mut modal = 0usize;
    for (i, &p) in probs.iter().enumerate() {
        if p > probs[modal] {
            modal = i;
        }
    }
    let modal_probability = probs.get(modal).copied().unwrap_or(0.0);
    let runner_up_probability = probs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != modal)
        .map(|(_, &p)| p)
        .fold(0.0, f64::max);
    let detected = Some(modal) == pattern.index()
        && runner_up_probability > 1e-12
        && modal_probability >= TOWER_FACTOR * runner_up_probability;
    PhaseVerdict {
        detected,
        modal: index_to_label(modal, width),
        modal_probability,
        runner_up_probability,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::{circuit_unitary, StateVector};
    use num_complex::Complex64;

    fn pattern(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    fn assert_phase_flip_only(circuit: &Circuit, marked: usize) {
        let u = circuit_unitary(circuit).unwrap();
        for col in 0..u.dim() {
            for row in 0..u.dim() {
                let expected = match (row == col, col == marked) {
                    (false, _) => 0.0,
                    (true, true) => -1.0,
                    (true, false) => 1.0,
                };
                assert!(
                    (u.get(row, col) - Complex64::new(expected, 0.0)).norm() < 1e-9,
                    "entry ({row},{col}) = {}",
                    u.get(row, col)
                );
            }
        }
    }

    #[test]
    fn pattern_parsing() {
        assert_eq!(pattern("01110").to_string(), "01110");
        assert_eq!(pattern("01110").index(), Some(0b01110));
        assert_eq!(pattern("10").index(), Some(1));
        assert!("".parse::<Pattern>().is_err());
        assert!("01a".parse::<Pattern>().is_err());
        assert!(" 01".parse::<Pattern>().is_err());
    }

    #[test]
    fn style_parsing() {
        assert_eq!("v".parse::<OracleStyle>().unwrap(), OracleStyle::VOracle);
        assert_eq!("CNZ".parse::<OracleStyle>().unwrap(), OracleStyle::CnZ);
        assert!("none".parse::<OracleStyle>().is_err());
    }

    #[test]
    fn cnz_two_qubits_is_cz() {
        assert_phase_flip_only(&build_cnz(2).unwrap(), 0b11);
    }

    #[test]
    fn cnz_three_and_five_qubits() {
        assert_phase_flip_only(&build_cnz(3).unwrap(), 0b111);
        assert_phase_flip_only(&build_cnz(5).unwrap(), 0b11111);
    }

    #[test]
    fn cnz_gate_set() {
        for n in 2..=MAX_CNZ_QUBITS {
            let c = build_cnz(n).unwrap();
            assert!(c.ops().iter().all(|op| op.controls.len() <= 2));
            assert_eq!(c.ancilla_qubits(), 0);
        }
        assert!(build_cnz(1).is_err());
        assert!(build_cnz(11).is_err());
    }

    #[test]
    fn cnz_ten_qubits_on_sample_inputs() {
        let c = build_cnz(10).unwrap();
        for input in [0usize, 1, 0x1ff, 0x2ff, 0x3fe, 0x3ff, 0x155] {
            let out = c
                .run(Some(StateVector::basis_state(10, input).unwrap()))
                .unwrap();
            let sign = if input == 0x3ff { -1.0 } else { 1.0 };
            assert!((out.amplitude(input) - Complex64::new(sign, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn v_oracle_counts() {
        let s = build_v_oracle(5).unwrap().stats();
        assert_eq!((s.toffoli(), s.cz(), s.ancilla_qubits), (6, 1, 3));
        let s = build_v_oracle(6).unwrap().stats();
        assert_eq!((s.toffoli(), s.cz(), s.ancilla_qubits), (8, 1, 4));
        let s = build_v_oracle(2).unwrap().stats();
        assert_eq!((s.toffoli(), s.cz(), s.ancilla_qubits), (0, 1, 0));
        assert!(build_v_oracle(1).is_err());
    }

    #[test]
    fn v_oracle_three_qubits_on_clean_ancilla() {
        let u = circuit_unitary(&build_v_oracle(3).unwrap()).unwrap();
        for x in 0..8usize {
            let sign = if x == 7 { -1.0 } else { 1.0 };
            let col = u.column(x);
            for (row, amp) in col.iter().enumerate() {
                let expected = if row == x { sign } else { 0.0 };
                assert!((amp - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn v_oracle_is_palindrome_and_involution() {
        for n in 3..=6 {
            let c = build_v_oracle(n).unwrap();
            let ops = c.ops();
            assert!(ops.iter().eq(ops.iter().rev()));
            let mut twice = c.clone();
            for op in c.ops() {
                twice.append(op.clone()).unwrap();
            }
            let u = circuit_unitary(&twice).unwrap();
            for i in 0..u.dim() {
                assert!((u.get(i, i) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn marking_adds_x_on_zero_bits() {
        let core = build_v_oracle(5).unwrap();
        assert_eq!(
            mark_pattern(&core, &pattern("11111")).unwrap().len(),
            core.len()
        );
        let marked = mark_pattern(&core, &pattern("01110")).unwrap();
        assert_eq!(marked.len(), core.len() + 4);
        let head: Vec<_> = marked.ops()[..2].iter().map(|op| op.target).collect();
        let tail: Vec<_> = marked.ops()[marked.len() - 2..]
            .iter()
            .map(|op| op.target)
            .collect();
        assert_eq!(head, vec![0, 4]);
        assert_eq!(tail, vec![0, 4]);
        assert!(mark_pattern(&core, &pattern("0110")).is_err());
    }

    #[test]
    fn marked_010_flips_only_010() {
        let p = pattern("010");
        for style in [OracleStyle::CnZ, OracleStyle::VOracle] {
            let c = mark_pattern(&all_ones_oracle(3, style).unwrap(), &p).unwrap();
            let u = circuit_unitary(&c).unwrap();
            for x in 0..8usize {
                let sign = if x == p.index().unwrap() { -1.0 } else { 1.0 };
                assert!((u.get(x, x) - Complex64::new(sign, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn diffusion_fixes_uniform_state() {
        for style in [OracleStyle::CnZ, OracleStyle::VOracle] {
            let d = build_diffusion(4, style).unwrap();
            let mut uniform = Circuit::new(4, d.ancilla_qubits());
            for q in 0..4 {
                uniform.append(GateOp::h(q)).unwrap();
            }
            let before = uniform.run(None).unwrap();
            let after = d.run(Some(before.clone())).unwrap();
            for (a, b) in after.amplitudes().iter().zip(before.amplitudes()) {
                assert!((a + b).norm() < 1e-12, "expected global sign -1");
            }
        }
    }

    #[test]
    fn diffusion_after_first_oracle_five_qubits() {
        let n = 5;
        let d = build_diffusion(n, OracleStyle::VOracle).unwrap();
        let q = d.total_qubits();
        let amp = 1.0 / 32f64.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << q];
        for (i, slot) in amps.iter_mut().enumerate().take(32) {
            *slot = Complex64::new(if i == 31 { -amp } else { amp }, 0.0);
        }
        let out = d
            .run(Some(StateVector::from_amplitudes(amps).unwrap()))
            .unwrap();
        assert!((out.amplitude(31).norm() - 0.50824).abs() < 5e-5);
    }

    #[test]
    fn diffusion_groups() {
        let d = build_diffusion(3, OracleStyle::VOracle).unwrap();
        assert_eq!(
            d.group_names().collect::<Vec<_>>(),
            ["diffusion", "oracle", "diffusion"]
        );
        assert!(build_diffusion(0, OracleStyle::CnZ).is_err());
    }

    #[test]
    fn grover_groups_repeat_oracle_twice_per_rotation() {
        let c = build_grover(&pattern("11111"), 4, OracleStyle::VOracle).unwrap();
        assert_eq!(c.group_names().filter(|&g| g == "oracle").count(), 8);
        assert_eq!(c.ancilla_qubits(), 3);
        assert!(build_grover(&pattern("11"), 0, OracleStyle::CnZ).is_err());
        assert!(matches!(
            build_grover(&pattern("11"), usize::MAX, OracleStyle::CnZ),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn grover_small_cases() {
        let p = build_grover(&pattern("11"), 1, OracleStyle::VOracle)
            .unwrap()
            .run(None)
            .unwrap()
            .probability_vector();
        assert!((p[0b11] - 1.0).abs() < 1e-12);

        let p = build_grover(&pattern("1"), 1, OracleStyle::VOracle)
            .unwrap()
            .run(None)
            .unwrap()
            .probability_vector();
        assert!((p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pattern_choice_does_not_change_success() {
        let run = |p: &str| {
            let pat = pattern(p);
            let s = build_grover(&pat, 3, OracleStyle::VOracle)
                .unwrap()
                .run(None)
                .unwrap();
            s.marginal_probabilities(5).unwrap()[pat.index().unwrap()]
        };
        assert!((run("01110") - run("11111")).abs() < 1e-12);
    }

    #[test]
    fn rotation_selectors() {
        assert_eq!(bqp_rotations(5), 5);
        assert_eq!(bqp_rotations(2), 2);
        assert_eq!(bqp_rotations(6), 7);
        assert_eq!(optimal_rotations(5), 4);
        assert_eq!(optimal_rotations(6), 6);
        assert_eq!(optimal_rotations(2), 1);
    }

    #[test]
    fn phase_check_010() {
        let p = pattern("010");
        let c = build_phase_check(&p, OracleStyle::VOracle).unwrap();
        let probs = c.run(None).unwrap().marginal_probabilities(3).unwrap();
        let v = phase_verdict(&probs, &p);
        assert!(v.detected, "{v:?}");
        assert_eq!(v.modal, "010");
        assert!((v.modal_probability - 0.5625).abs() < 1e-12);
        assert_eq!(c.barriers().len(), 3);
    }

    #[test]
    fn phase_check_000_has_no_select_layer() {
        let p = pattern("000");
        let c = build_phase_check(&p, OracleStyle::CnZ).unwrap();
        assert!(!c.group_names().any(|g| g == "select"));
        let probs = c.run(None).unwrap().probability_vector();
        assert!(phase_verdict(&probs, &p).detected);
        let all = build_phase_check(&pattern("111"), OracleStyle::CnZ).unwrap();
        let select = all.groups().iter().find(|g| g.name == "select").unwrap();
        assert_eq!(select.range.len(), 3);
    }

    #[test]
    fn phase_check_identity_oracle_not_detected() {
        let p = pattern("000");
        let c = build_phase_check_with(&p, None).unwrap();
        let probs = c.run(None).unwrap().probability_vector();
        assert!((probs[0] - 1.0).abs() < 1e-12);
        let v = phase_verdict(&probs, &p);
        assert!(!v.detected);
        assert_eq!(v.modal, "000");
    }

    #[test]
    fn phase_check_miswired_oracle_not_detected() {
        // Flips both |010⟩ and |110⟩: the tower drops to the height of its neighbours.
        let p = pattern("010");
        let core = build_v_oracle(3).unwrap();
        let mut wrong = mark_pattern(&core, &p).unwrap();
        wrong
            .extend(&mark_pattern(&core, &pattern("110")).unwrap())
            .unwrap();
        let c = build_phase_check_with(&p, Some(&wrong)).unwrap();
        let probs = c.run(None).unwrap().marginal_probabilities(3).unwrap();
        assert!(!phase_verdict(&probs, &p).detected);

        // Z on one qubit flips half the states; H·Z·H is a bit flip, a certain outcome.
        let mut half = Circuit::new(3, 0);
        half.append(GateOp::z(0)).unwrap();
        let c = build_phase_check_with(&p, Some(&half)).unwrap();
        let probs = c.run(None).unwrap().probability_vector();
        assert!(!phase_verdict(&probs, &p).detected);
    }
}
