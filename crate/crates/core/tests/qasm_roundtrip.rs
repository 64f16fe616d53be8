//! Re-simulates exported QASM with a small standalone interpreter.

use grover_core::grover::{build_grover, OracleStyle, Pattern};
use num_complex::Complex64;

type Matrix = [[Complex64; 2]; 2];

struct Program {
    qubits: usize,
    measured: usize,
    ops: Vec<(Matrix, Vec<usize>, usize)>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phase(theta: f64) -> Matrix {
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, theta)],
    ]
}

fn parse_qubit(token: &str) -> usize {
    let inner = token
        .trim()
        .strip_prefix("q[")
        .and_then(|t| t.strip_suffix(']'));
    inner.expect("qubit operand").parse().expect("qubit index")
}

fn parse(text: &str) -> Program {
    let mut program = Program {
        qubits: 0,
        measured: 0,
        ops: Vec::new(),
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let stmt = line.strip_suffix(';').expect("statement terminator");
        if stmt == "OPENQASM 2.0" || stmt == "include \"qelib1.inc\"" {
            continue;
        }
        let (head, operands) = stmt.split_once(' ').expect("operands");
        if head == "qreg" {
            program.qubits = operands
                .trim_start_matches("q[")
                .trim_end_matches(']')
                .parse()
                .unwrap();
            continue;
        }
        if head == "creg" || head == "measure" {
            if head == "measure" {
                program.measured += 1;
            }
            continue;
        }
        let (name, angle) = match head.split_once('(') {
            Some((n, rest)) => (n, Some(rest.trim_end_matches(')').parse::<f64>().unwrap())),
            None => (head, None),
        };
        let wires: Vec<usize> = operands.split(',').map(parse_qubit).collect();
        let (target, controls) = wires.split_last().unwrap();
        let matrix = match (name, angle) {
            ("h", None) => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
            ("x" | "cx" | "ccx", None) => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            ("z" | "cz", None) => phase(std::f64::consts::PI),
            ("t", None) => phase(std::f64::consts::FRAC_PI_4),
            ("tdg", None) => phase(-std::f64::consts::FRAC_PI_4),
            ("u1" | "cu1", Some(theta)) => phase(theta),
            other => panic!("unexpected gate {other:?}"),
        };
        let expected_controls = match name {
            "cx" | "cz" | "cu1" => 1,
            "ccx" => 2,
            _ => 0,
        };
        assert_eq!(controls.len(), expected_controls, "{line}");
        program.ops.push((matrix, controls.to_vec(), *target));
    }
    program
}

fn simulate(program: &Program) -> Vec<f64> {
    let mut amps = vec![c(0.0, 0.0); 1 << program.qubits];
    amps[0] = c(1.0, 0.0);
    for (m, controls, target) in &program.ops {
        let bit = 1usize << target;
        for i in 0..amps.len() {
            if i & bit != 0 || controls.iter().any(|&q| i >> q & 1 == 0) {
                continue;
            }
            let (a0, a1) = (amps[i], amps[i | bit]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
    let mut probs = vec![0.0; 1 << program.measured];
    for (i, a) in amps.iter().enumerate() {
        probs[i & ((1 << program.measured) - 1)] += a.norm_sqr();
    }
    probs
}

fn round_trip(bits: &str, rotations: usize, style: OracleStyle) {
    let pattern: Pattern = bits.parse().unwrap();
    let circuit = build_grover(&pattern, rotations, style).unwrap();
    let program = parse(&circuit.export_qasm().unwrap());
    assert_eq!(program.qubits, circuit.total_qubits());
    assert_eq!(program.measured, pattern.len());
    assert_eq!(program.ops.len(), circuit.ops().len());

    let replayed = simulate(&program);
    let direct = circuit
        .run(None)
        .unwrap()
        .marginal_probabilities(pattern.len())
        .unwrap();
    for (i, (r, d)) in replayed.iter().zip(&direct).enumerate() {
        assert!((r - d).abs() < 1e-6, "{bits} state {i}: {r} vs {d}");
    }
}

#[test]
fn five_qubit_v_oracle_search() {
    round_trip("11111", 4, OracleStyle::VOracle);
    round_trip("01110", 4, OracleStyle::VOracle);
}

#[test]
fn cnz_search() {
    round_trip("0110", 3, OracleStyle::CnZ);
    round_trip("10110", 2, OracleStyle::CnZ);
}

#[test]
fn small_registers() {
    round_trip("1", 1, OracleStyle::VOracle);
    round_trip("01", 1, OracleStyle::VOracle);
    round_trip("010", 2, OracleStyle::CnZ);
}
