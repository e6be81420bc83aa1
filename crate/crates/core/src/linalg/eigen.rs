//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Output is canonicalized so that downstream constructions (commutant bases,
//! pinching) are reproducible: eigenvalues ascend, eigenvectors inside a
//! degenerate cluster are re-orthonormalized in index order, and every
//! eigenvector has its first largest-magnitude component real and non-negative.

use std::ops::Range;

use num_complex::Complex64 as C64;

use super::matrix::CMatrix;
use crate::error::Result;

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const CLUSTER_TOL: f64 = 1e-9;

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: CMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `|v_k><v_k|`
    pub fn projector(&self, k: usize) -> CMatrix {
        let v = self.vector(k);
        CMatrix::outer(&v, &v)
    }

    /// `V · diag(f(λ)) · V†`
    pub fn map_values(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let v = &self.vectors;
        let fs: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        CMatrix::from_fn(n, |j, k| (0..n).map(|l| v[(j, l)] * fs[l] * v[(k, l)].conj()).sum())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_values(|x| C64::new(x, 0.0))
    }

    /// `V† M V`
    pub fn to_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        self.vectors.dagger().matmul(m).matmul(&self.vectors)
    }

    /// `V M V†`
    pub fn from_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        self.vectors.matmul(m).matmul(&self.vectors.dagger())
    }

    /// Index ranges of eigenvalue clusters, chaining neighbours whose gap is below `tol`.
    pub fn clusters(&self, tol: f64) -> Vec<Range<usize>> {
        cluster_ranges(&self.values, tol)
    }
}

pub(crate) fn cluster_ranges(sorted: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=sorted.len() {
        if k == sorted.len() || sorted[k] - sorted[k - 1] >= tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

pub fn eig_hermitian(m: &CMatrix) -> Result<EigenSystem> {
    m.ensure_hermitian()?;
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = frobenius(&a).max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) < OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMatrix::from_fn(n, |j, k| v[(j, order[k])]);

    for cluster in cluster_ranges(&values, CLUSTER_TOL) {
        if cluster.len() > 1 {
            gram_schmidt(&mut vectors, cluster);
        }
    }
    for k in 0..n {
        fix_phase(&mut vectors, k);
    }

    Ok(EigenSystem { values, vectors })
}

fn frobenius(a: &CMatrix) -> f64 {
    a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                s += a[(j, k)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Zeroes `a[p][q]` with the unitary `G = diag(1, u*) · R(c, s)` on the (p, q) plane,
/// where `u` is the phase of `a[p][q]`, and accumulates `V ← V G`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let mag = b.norm();
    if mag == 0.0 {
        return;
    }
    let u = b / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.dim();

    // A ← A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * u.conj() * s;
        a[(k, q)] = akp * s + akq * u.conj() * c;
    }
    // A ← G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * u * s;
        a[(q, k)] = apk * s + aqk * u * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * u.conj() * s;
        v[(k, q)] = vkp * s + vkq * u.conj() * c;
    }
}

fn gram_schmidt(vectors: &mut CMatrix, cols: Range<usize>) {
    let n = vectors.dim();
    for k in cols.clone() {
        for prev in cols.start..k {
            let overlap: C64 = (0..n).map(|j| vectors[(j, prev)].conj() * vectors[(j, k)]).sum();
            for j in 0..n {
                let d = vectors[(j, prev)] * overlap;
                vectors[(j, k)] -= d;
            }
        }
        let norm = (0..n).map(|j| vectors[(j, k)].norm_sqr()).sum::<f64>().sqrt();
        for j in 0..n {
            vectors[(j, k)] /= norm;
        }
    }
}

fn fix_phase(vectors: &mut CMatrix, k: usize) {
    let n = vectors.dim();
    let max = (0..n).map(|j| vectors[(j, k)].norm()).fold(0.0, f64::max);
    let Some(lead) = (0..n).find(|&j| vectors[(j, k)].norm() >= max - 1e-12) else {
        return;
    };
    let z = vectors[(lead, k)];
    let phase = z.conj() / z.norm();
    for j in 0..n {
        vectors[(j, k)] *= phase;
    }
    vectors[(lead, k)] = C64::new(vectors[(lead, k)].norm(), 0.0);
}
