use serde::{Deserialize, Serialize};

use crate::linalg::{kron, pauli, CMatrix};

/// Coefficients of `A = s·I + x·σ_x + y·σ_y + z·σ_z` on one qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QubitCoeffs {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl QubitCoeffs {
    pub const fn new(s: f64, x: f64, y: f64, z: f64) -> Self {
        Self { s, x, y, z }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    /// Matrix in the standard Pauli basis.
    pub fn matrix(&self) -> CMatrix {
        self.matrix_with(&[pauli::x(), pauli::y(), pauli::z()])
    }

    /// Matrix against an arbitrary set of Pauli operators `[σ_x, σ_y, σ_z]`.
    pub fn matrix_with(&self, paulis: &[CMatrix; 3]) -> CMatrix {
        let mut m = CMatrix::identity(2) * self.s;
        m += &(&paulis[0] * self.x);
        m += &(&paulis[1] * self.y);
        m += &(&paulis[2] * self.z);
        m
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "s" => Some(self.s),
            "x" => Some(self.x),
            "y" => Some(self.y),
            "z" => Some(self.z),
            _ => None,
        }
    }

    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "s" => &mut self.s,
            "x" => &mut self.x,
            "y" => &mut self.y,
            "z" => &mut self.z,
            _ => return false,
        };
        *slot = value;
        true
    }
}

/// Where an observable's Pauli coefficients came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum CoeffRecord {
    Qubit(QubitCoeffs),
    /// `A^a ⊗ A^b`; a missing factor is the identity.
    Bipartite {
        a: Option<QubitCoeffs>,
        b: Option<QubitCoeffs>,
    },
}

/// A Hermitian matrix, optionally with the Pauli coefficients that generated it.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
    coeffs: Option<CoeffRecord>,
}

impl Observable {
    pub fn from_matrix(matrix: CMatrix) -> Self {
        Self { matrix, coeffs: None }
    }

    pub fn qubit(coeffs: QubitCoeffs) -> Self {
        Self { matrix: coeffs.matrix(), coeffs: Some(CoeffRecord::Qubit(coeffs)) }
    }

    /// Kronecker composition of two single-qubit observables, each against its own
    /// Pauli set.
    pub fn bipartite(
        a: Option<QubitCoeffs>,
        b: Option<QubitCoeffs>,
        paulis_a: &[CMatrix; 3],
        paulis_b: &[CMatrix; 3],
    ) -> Self {
        let ma = a.map_or_else(|| CMatrix::identity(2), |c| c.matrix_with(paulis_a));
        let mb = b.map_or_else(|| CMatrix::identity(2), |c| c.matrix_with(paulis_b));
        Self { matrix: kron(&ma, &mb), coeffs: Some(CoeffRecord::Bipartite { a, b }) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn coeffs(&self) -> Option<&CoeffRecord> {
        self.coeffs.as_ref()
    }

    /// `α·A + β·I`; the coefficient record is dropped.
    pub fn affine(&self, alpha: f64, beta: f64) -> Self {
        let n = self.matrix.dim();
        Self::from_matrix(&self.matrix * alpha + CMatrix::identity(n) * beta)
    }

    /// `A + B`; the coefficient record is dropped.
    pub fn plus(&self, other: &CMatrix) -> Self {
        Self::from_matrix(&self.matrix + other)
    }
}
