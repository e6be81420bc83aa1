use crate::error::Result;
use crate::linalg::{eig_hermitian, frobenius_norm, CMatrix, EigenSystem, C64, CLUSTER_TOL};

use super::Observable;

/// Orthonormal (Frobenius) Hermitian basis of `{M : [L, M] = 0}`.
///
/// For each eigenvalue cluster of `L` with eigenvectors `v_i`, the basis holds
/// `|v_i⟩⟨v_i|`, `(|v_i⟩⟨v_j| + |v_j⟩⟨v_i|)/√2` and `i(|v_i⟩⟨v_j| - |v_j⟩⟨v_i|)/√2`
/// for `i < j`, i.e. `k²` elements for a cluster of size `k`.
pub fn commutant_basis(l: &CMatrix) -> Result<Vec<CMatrix>> {
    let eig = eig_hermitian(l)?;
    let mut basis = Vec::new();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for cluster in eig.clusters(CLUSTER_TOL) {
        for i in cluster.clone() {
            let vi = eig.vector(i);
            basis.push(CMatrix::outer(&vi, &vi));
            for j in (i + 1)..cluster.end {
                let vj = eig.vector(j);
                let ij = CMatrix::outer(&vi, &vj);
                let ji = CMatrix::outer(&vj, &vi);
                basis.push((&ij + &ji) * half);
                basis.push((ij - ji) * C64::new(0.0, half));
            }
        }
    }
    Ok(basis)
}

/// Nearest commutant element of `L` to `A` and its Frobenius distance `D`.
pub fn min_distance(observable: &Observable, l: &CMatrix) -> Result<(f64, CMatrix)> {
    let a = observable.matrix();
    a.ensure_hermitian()?;
    let eig = eig_hermitian(l)?;
    Ok(pinch(a, &eig, CLUSTER_TOL))
}

/// Pinching of `a` by the spectral clusters of `eig`: entries of `V† A V` that couple
/// distinct clusters are zeroed. Returns the discarded Frobenius mass and the
/// pinched matrix.
pub fn pinch(a: &CMatrix, eig: &EigenSystem, tol: f64) -> (f64, CMatrix) {
    let clusters = eig.clusters(tol);
    let mut label = vec![0usize; eig.dim()];
    for (c, range) in clusters.iter().enumerate() {
        for k in range.clone() {
            label[k] = c;
        }
    }
    let rotated = eig.to_eigenbasis(a);
    let mut removed = CMatrix::zeros(a.dim());
    let kept = CMatrix::from_fn(a.dim(), |j, k| {
        if label[j] == label[k] {
            rotated[(j, k)]
        } else {
            removed[(j, k)] = rotated[(j, k)];
            C64::new(0.0, 0.0)
        }
    });
    let nearest = eig.from_eigenbasis(&kept).hermitian_part();
    (frobenius_norm(&removed), nearest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::QubitCoeffs;
    use crate::linalg::{commutator, pauli};

    #[test]
    fn nondegenerate_qubit_has_two_generators() {
        let basis = commutant_basis(&pauli::z()).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis[0].max_abs_diff(&CMatrix::diag(&[0.0, 1.0])) < 1e-15);
        assert!(basis[1].max_abs_diff(&CMatrix::diag(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn identity_commutant_is_everything() {
        let basis = commutant_basis(&CMatrix::identity(2)).unwrap();
        assert_eq!(basis.len(), 4);
        for b in &basis {
            assert!(b.is_hermitian(1e-15));
            assert!((frobenius_norm(b) - 1.0).abs() < 1e-14);
            assert!(frobenius_norm(&commutator(&CMatrix::identity(2), b).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn distance_examples() {
        let (d, m) = min_distance(&Observable::from_matrix(pauli::z()), &pauli::z()).unwrap();
        assert!(d < 1e-15 && m.max_abs_diff(&pauli::z()) < 1e-15);

        let (d, m) = min_distance(&Observable::qubit(QubitCoeffs::new(0.0, 1.0, 0.0, 0.0)), &pauli::z()).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15 && m.max_abs() < 1e-15);

        let a = Observable::qubit(QubitCoeffs::new(0.0, 1.0, 0.0, 0.5));
        let (d, m) = min_distance(&a, &pauli::z()).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert!(m.max_abs_diff(&(pauli::z() * 0.5)) < 1e-15);
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let a = Observable::from_matrix(CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(min_distance(&a, &pauli::z()).is_err());
    }
}
