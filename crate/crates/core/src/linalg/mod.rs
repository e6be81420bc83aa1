//! Dense complex linear algebra for the small (2x2, 4x4) matrices that carry
//! states, observables and Hamiltonians.

mod eigen;
mod matrix;

pub use eigen::{eig_hermitian, EigenSystem, CLUSTER_TOL};
pub use matrix::{CMatrix, HERMITIAN_TOL};
pub use num_complex::Complex64 as C64;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod pauli {
    //! Single-qubit operators in the standard basis (`σ_z = diag(1, -1)`).
    use super::{CMatrix, C64};

    pub fn identity() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> CMatrix {
        let i = C64::new(0.0, 1.0);
        CMatrix::from_vec(2, vec![C64::new(0.0, 0.0), -i, i, C64::new(0.0, 0.0)]).unwrap()
    }

    pub fn z() -> CMatrix {
        CMatrix::diag(&[1.0, -1.0])
    }

    /// `|1><0|` in index order.
    pub fn lower() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 0.0, 1.0, 0.0])
    }
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keep {
    A,
    B,
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (da, db) = (a.dim(), b.dim());
    CMatrix::from_fn(da * db, |j, k| a[(j / db, k / db)] * b[(j % db, k % db)])
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

pub fn partial_trace(m: &CMatrix, dims: (usize, usize), keep: Keep) -> Result<CMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot split dimension {} as {da}x{db}",
            m.dim()
        )));
    }
    let out = match keep {
        Keep::A => CMatrix::from_fn(da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Keep::B => CMatrix::from_fn(db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()),
    };
    Ok(out)
}

fn check_same_dim(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// `[A, B] = AB - BA`
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_same_dim(a, b)?;
    Ok(a.matmul(b) - b.matmul(a))
}

/// `{A, B} = AB + BA`
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_same_dim(a, b)?;
    Ok(a.matmul(b) + b.matmul(a))
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `exp(-iHt)` through the eigendecomposition of `H`.
pub fn unitary(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = eig_hermitian(h)?;
    Ok(eig.map_values(|x| C64::from_polar(1.0, -x * t)))
}

/// `U ρ0 U†` with `U = exp(-iHt)`. The result is re-symmetrized.
pub fn evolve_unitary(h: &CMatrix, rho0: &CMatrix, t: f64) -> Result<CMatrix> {
    check_same_dim(h, rho0)?;
    if t == 0.0 {
        h.ensure_hermitian()?;
        return Ok(rho0.hermitian_part());
    }
    let u = unitary(h, t)?;
    Ok(u.matmul(rho0).matmul(&u.dagger()).hermitian_part())
}

/// `exp(-iHt)` together with its directional derivative along `dH`.
///
/// In the eigenbasis of `H` the derivative is the divided difference
/// `(e^{-iλ_j t} - e^{-iλ_k t}) / (λ_j - λ_k)` times `(V† dH V)_{jk}`, written in a
/// sinc form that stays accurate for close or equal eigenvalues.
pub fn unitary_with_derivative(h: &CMatrix, dh: &CMatrix, t: f64) -> Result<(CMatrix, CMatrix)> {
    check_same_dim(h, dh)?;
    dh.ensure_hermitian()?;
    let eig = eig_hermitian(h)?;
    let n = h.dim();
    let dh_eig = eig.to_eigenbasis(dh);
    let lam = &eig.values;
    let divided = CMatrix::from_fn(n, |j, k| {
        let mean = 0.5 * (lam[j] + lam[k]);
        let x = 0.5 * (lam[j] - lam[k]) * t;
        let factor = C64::new(0.0, -t) * C64::from_polar(1.0, -mean * t) * sinc(x);
        factor * dh_eig[(j, k)]
    });
    let u = eig.map_values(|x| C64::from_polar(1.0, -x * t));
    Ok((u, eig.from_eigenbasis(&divided)))
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}
