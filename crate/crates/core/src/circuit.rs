//! Circuit IR: an ordered op list over a search register followed by an
//! ancilla register, with flat named groups and OpenQASM 2.0 export.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateKind;
use crate::statevector::{check_indices, StateVector};

/// One gate application. `controls` empty means an uncontrolled gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub controls: Vec<usize>,
    pub target: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GateOp {
    pub fn new(kind: GateKind, controls: Vec<usize>, target: usize) -> Self {
        GateOp {
            kind,
            controls,
            target,
            label: None,
        }
    }

    pub fn h(target: usize) -> Self {
        Self::new(GateKind::H, vec![], target)
    }

    pub fn x(target: usize) -> Self {
        Self::new(GateKind::X, vec![], target)
    }

    pub fn z(target: usize) -> Self {
        Self::new(GateKind::Z, vec![], target)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::new(GateKind::X, vec![control], target)
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Self::new(GateKind::X, vec![c0, c1], target)
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self::new(GateKind::Z, vec![control], target)
    }

    pub fn cu1(theta: f64, control: usize, target: usize) -> Self {
        Self::new(GateKind::U1(theta), vec![control], target)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn inverse(&self) -> Self {
        GateOp {
            kind: self.kind.inverse(),
            ..self.clone()
        }
    }

    /// Gate name with control arity folded in: `cx`, `ccx`, `cz`, `c3z`, ...
    pub fn name(&self) -> String {
        controlled_name(self.kind.name(), self.controls.len())
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        state.apply_gate(self.kind, &self.controls, self.target)
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        if let Some(theta) = self.kind.angle() {
            write!(f, "({theta})")?;
        }
        let qubits: Vec<String> = self
            .controls
            .iter()
            .chain(std::iter::once(&self.target))
            .map(|q| q.to_string())
            .collect();
        write!(f, " [{}]", qubits.join(","))
    }
}

fn controlled_name(base: &str, arity: usize) -> String {
    match arity {
        0 => base.to_string(),
        1 => format!("c{base}"),
        2 => format!("cc{base}"),
        k => format!("c{k}{base}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub name: String,
    pub range: Range<usize>,
}

/// Zero-op annotation placed before the op at `position`. Not simulated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Barrier {
    pub position: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    search_qubits: usize,
    ancilla_qubits: usize,
    ops: Vec<GateOp>,
    groups: Vec<Group>,
    barriers: Vec<Barrier>,
}

impl Circuit {
    /// Search qubits take indices `0..search`, ancillas `search..search + ancilla`.
    pub fn new(search_qubits: usize, ancilla_qubits: usize) -> Self {
        Circuit {
            search_qubits,
            ancilla_qubits,
            ops: Vec::new(),
            groups: Vec::new(),
            barriers: Vec::new(),
        }
    }

    pub fn search_qubits(&self) -> usize {
        self.search_qubits
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.ancilla_qubits
    }

    pub fn total_qubits(&self) -> usize {
        self.search_qubits + self.ancilla_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn barriers(&self) -> &[Barrier] {
        &self.barriers
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Names of the groups in op order.
    pub fn group_names(&self) -> impl Iterator<Item = &str> {
        self.groups.iter().map(|g| g.name.as_str())
    }

    fn validate(&self, op: &GateOp) -> Result<()> {
        op.kind.validate()?;
        check_indices(self.total_qubits(), &op.controls, op.target)
    }

    pub fn append(&mut self, op: GateOp) -> Result<&mut Self> {
        self.validate(&op)?;
        self.ops.push(op);
        Ok(self)
    }

    /// Appends `ops` and records them as one group. All ops are validated
    /// before any is appended.
    pub fn append_group(
        &mut self,
        name: impl Into<String>,
        ops: impl IntoIterator<Item = GateOp>,
    ) -> Result<&mut Self> {
        let ops: Vec<GateOp> = ops.into_iter().collect();
        for op in &ops {
            self.validate(op)?;
        }
        let start = self.ops.len();
        self.ops.extend(ops);
        self.groups.push(Group {
            name: name.into(),
            range: start..self.ops.len(),
        });
        Ok(self)
    }

    /// Appends `other`'s ops, groups and barriers. Register sizes must match.
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        if (other.search_qubits, other.ancilla_qubits) != (self.search_qubits, self.ancilla_qubits)
        {
            return Err(Error::param(format!(
                "cannot extend a {}+{} qubit circuit with a {}+{} qubit one",
                self.search_qubits, self.ancilla_qubits, other.search_qubits, other.ancilla_qubits
            )));
        }
        let offset = self.ops.len();
        self.ops.extend(other.ops.iter().cloned());
        self.groups.extend(other.groups.iter().map(|g| Group {
            name: g.name.clone(),
            range: g.range.start + offset..g.range.end + offset,
        }));
        self.barriers.extend(other.barriers.iter().map(|b| Barrier {
            position: b.position + offset,
            label: b.label.clone(),
        }));
        Ok(self)
    }

    pub fn barrier(&mut self, label: impl Into<String>) -> &mut Self {
        self.barriers.push(Barrier {
            position: self.ops.len(),
            label: label.into(),
        });
        self
    }

    /// Applies every op in order to `initial`, or to `|0...0⟩` when `None`.
    pub fn run(&self, initial: Option<StateVector>) -> Result<StateVector> {
        let mut state = match initial {
            Some(s) if s.num_qubits() != self.total_qubits() => {
                return Err(Error::param(format!(
                    "initial state has {} qubits, circuit needs {}",
                    s.num_qubits(),
                    self.total_qubits()
                )))
            }
            Some(s) => s,
            None => StateVector::new_zero_state(self.total_qubits())?,
        };
        for op in &self.ops {
            op.apply(&mut state)?;
        }
        state.check_norm()?;
        Ok(state)
    }

    /// Op-wise inverse in reverse order. Groups and barriers are dropped.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
            ..Circuit::new(self.search_qubits, self.ancilla_qubits)
        }
    }

    pub fn stats(&self) -> CircuitStats {
        let mut by_gate = BTreeMap::new();
        for op in &self.ops {
            *by_gate.entry(op.name()).or_insert(0) += 1;
        }
        CircuitStats {
            by_gate,
            total_ops: self.ops.len(),
            ancilla_qubits: self.ancilla_qubits,
        }
    }

    /// OpenQASM 2.0 text. Ops with more than two controls, or controlled
    /// forms outside `cx`/`cz`/`ccx`/`cu1`/`crz`, are rejected.
    pub fn export_qasm(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.total_qubits());
        let _ = writeln!(out, "creg c[{}];", self.search_qubits);

        let mut groups = self.groups.iter().peekable();
        for (index, op) in self.ops.iter().enumerate() {
            while let Some(g) = groups.next_if(|g| g.range.start == index) {
                if !g.range.is_empty() {
                    let _ = writeln!(out, "// group {}", g.name);
                }
            }
            let line = qasm_line(op).ok_or_else(|| Error::Export {
                index,
                op: op.to_string(),
            })?;
            out.push_str(&line);
            out.push('\n');
        }
        for q in 0..self.search_qubits {
            let _ = writeln!(out, "measure q[{q}] -> c[{q}];");
        }
        Ok(out)
    }
}

fn qasm_line(op: &GateOp) -> Option<String> {
    let name = match (op.kind, op.controls.len()) {
        (_, 0) => op.kind.name().to_string(),
        (GateKind::X, 1) => "cx".into(),
        (GateKind::X, 2) => "ccx".into(),
        (GateKind::Z, 1) => "cz".into(),
        (GateKind::U1(_), 1) => "cu1".into(),
        (GateKind::Rz(_), 1) => "crz".into(),
        _ => return None,
    };
    let args: Vec<String> = op
        .controls
        .iter()
        .chain(std::iter::once(&op.target))
        .map(|q| format!("q[{q}]"))
        .collect();
    let params = op
        .kind
        .angle()
        .map(|theta| format!("({})", format_angle(theta)))
        .unwrap_or_default();
    Some(format!("{name}{params} {};", args.join(",")))
}

/// Decimal rendering with 17 significant digits.
pub fn format_angle(theta: f64) -> String {
    if theta == 0.0 {
        return "0.0".into();
    }
    let magnitude = theta.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).max(1) as usize;
    format!("{theta:.decimals$}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    /// Occurrences keyed by [`GateOp::name`].
    pub by_gate: BTreeMap<String, usize>,
    pub total_ops: usize,
    pub ancilla_qubits: usize,
}

impl CircuitStats {
    pub fn count(&self, name: &str) -> usize {
        self.by_gate.get(name).copied().unwrap_or(0)
    }

    pub fn toffoli(&self) -> usize {
        self.count("ccx")
    }

    pub fn cz(&self) -> usize {
        self.count("cz")
    }
}
