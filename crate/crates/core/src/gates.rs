//! Primitive single-qubit gates and their 2×2 matrices.
//!
//! Controlled forms are not separate kinds: a [`GateKind`] applied with a
//! non-empty control list acts on the target only when every control is 1
//! (see [`crate::statevector::StateVector::apply_gate`]).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entrywise tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Z,
    T,
    Tdg,
    /// Phase gate `diag(1, e^{iθ})`.
    U1(f64),
    /// `diag(e^{-iθ/2}, e^{iθ/2})`.
    Rz(f64),
}

impl GateKind {
    /// Lower-case OpenQASM base name (`h`, `tdg`, `u1`, ...).
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::U1(_) => "u1",
            GateKind::Rz(_) => "rz",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::U1(theta) | GateKind::Rz(theta) => Some(theta),
            _ => None,
        }
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::U1(theta) => GateKind::U1(-theta),
            GateKind::Rz(theta) => GateKind::Rz(-theta),
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.angle() {
            Some(theta) if !theta.is_finite() => Err(Error::param(format!(
                "{} angle must be finite, got {theta}",
                self.name()
            ))),
            _ => Ok(()),
        }
    }

    /// True when the matrix is diagonal; the kernel skips the pair swap for these.
    pub fn is_diagonal(&self) -> bool {
        !matches!(self, GateKind::H | GateKind::X)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.angle() {
            Some(theta) => write!(f, "{}({theta})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateMatrix(pub [[Complex64; 2]; 2]);

impl GateMatrix {
    pub const IDENTITY: GateMatrix = GateMatrix([
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ]);

    pub fn diag(d0: Complex64, d1: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        GateMatrix([[d0, zero], [zero, d1]])
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        GateMatrix([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn mul(&self, rhs: &GateMatrix) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        GateMatrix(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.0;
        out.iter_mut().flatten().for_each(|c| *c *= factor);
        GateMatrix(out)
    }

    pub fn approx_eq(&self, other: &GateMatrix, tol: f64) -> bool {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .mul(self)
            .approx_eq(&GateMatrix::IDENTITY, tol)
    }
}

/// Standard matrix for `kind`.
pub fn gate_matrix(kind: GateKind) -> Result<GateMatrix> {
    kind.validate()?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let m = match kind {
        GateKind::H => {
            let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
            GateMatrix([[s, s], [s, -s]])
        }
        GateKind::X => GateMatrix([[zero, one], [one, zero]]),
        GateKind::Z => GateMatrix::diag(one, -one),
        GateKind::T => GateMatrix::diag(one, Complex64::from_polar(1.0, FRAC_PI_4)),
        GateKind::Tdg => GateMatrix::diag(one, Complex64::from_polar(1.0, -FRAC_PI_4)),
        GateKind::U1(theta) => GateMatrix::diag(one, Complex64::from_polar(1.0, theta)),
        GateKind::Rz(theta) => GateMatrix::diag(
            Complex64::from_polar(1.0, -theta / 2.0),
            Complex64::from_polar(1.0, theta / 2.0),
        ),
    };
    Ok(m)
}
