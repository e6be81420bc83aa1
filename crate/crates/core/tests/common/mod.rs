//! Independent reference computations. Nothing here goes through the crate's
//! eigensolver or evolution code: matrices are plain nested vectors and the
//! exponential is a scaled-and-squared Taylor series.
#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type Dense = Vec<Vec<C>>;

pub fn zeros(n: usize) -> Dense {
    vec![vec![C::new(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> Dense {
    let mut m = zeros(n);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = C::new(1.0, 0.0);
    }
    m
}

pub fn real(rows: &[&[f64]]) -> Dense {
    rows.iter().map(|r| r.iter().map(|&x| C::new(x, 0.0)).collect()).collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn scale(a: &Dense, s: C) -> Dense {
    a.iter().map(|r| r.iter().map(|&x| x * s).collect()).collect()
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn norm1(a: &Dense) -> f64 {
    (0..a.len()).map(|j| a.iter().map(|r| r[j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(a)` by scaling to norm ≤ 1/2, a 30-term Taylor series, and squaring back.
pub fn expm(a: &Dense) -> Dense {
    let n = a.len();
    let mut squarings = 0;
    let mut norm = norm1(a);
    while norm > 0.5 {
        norm /= 2.0;
        squarings += 1;
    }
    let x = scale(a, C::new(0.5f64.powi(squarings), 0.0));
    let mut term = eye(n);
    let mut sum = eye(n);
    for k in 1..=30 {
        term = scale(&matmul(&term, &x), C::new(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

pub fn mul_vec(a: &Dense, v: &[C]) -> Vec<C> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `U = exp(-i(H + θG)t)` and `∂U/∂θ` from the block exponential
/// `exp([[X, E], [0, X]]) = [[e^X, L(X, E)], [0, e^X]]` with `X = -iHt`, `E = -iGt`.
pub fn van_loan(h: &Dense, g: &Dense, t: f64) -> (Dense, Dense) {
    let n = h.len();
    let minus_it = C::new(0.0, -t);
    let mut block = zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            block[i][j] = h[i][j] * minus_it;
            block[n + i][n + j] = h[i][j] * minus_it;
            block[i][n + j] = g[i][j] * minus_it;
        }
    }
    let e = expm(&block);
    let u = (0..n).map(|i| e[i][..n].to_vec()).collect();
    let du = (0..n).map(|i| e[i][n..].to_vec()).collect();
    (u, du)
}

pub fn inner(u: &[C], v: &[C]) -> C {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `4(⟨∂ψ|∂ψ⟩ - |⟨ψ|∂ψ⟩|²)`
pub fn pure_state_qfi(psi: &[C], dpsi: &[C]) -> f64 {
    4.0 * (inner(dpsi, dpsi).re - inner(psi, dpsi).norm_sqr())
}

pub fn projector(psi: &[C]) -> Dense {
    psi.iter().map(|a| psi.iter().map(|b| a * b.conj()).collect()).collect()
}

pub fn max_diff(a: &Dense, entries: &[C]) -> f64 {
    a.iter().flatten().zip(entries).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `(ω/2)σ_z + Fσ_x` with `σ_z = diag(1, -1)`.
pub fn driven_qubit_h(omega: f64, drive: f64) -> Dense {
    real(&[&[omega / 2.0, drive], &[drive, -omega / 2.0]])
}

/// The four-level Hamiltonian in its explicit matrix form, `a = ω_l/2`, `b = Ω₁/2`.
pub fn bipartite_h(omega_l: f64, rabi: f64, g: f64) -> Dense {
    let (a, b) = (omega_l / 2.0, rabi / 2.0);
    real(&[&[-a, g, b, 0.0], &[g, a, 0.0, b], &[b, 0.0, -a, -g], &[0.0, b, -g, a]])
}

/// Evolved state vector and its derivative under `H(θ) = H0 + θG`.
pub fn evolve_pure(h: &Dense, g: &Dense, psi0: &[C], t: f64) -> (Vec<C>, Vec<C>) {
    let (u, du) = van_loan(h, g, t);
    (mul_vec(&u, psi0), mul_vec(&du, psi0))
}

pub fn driven_qubit_pure(omega: f64, drive: f64, phi: f64, t: f64) -> (Vec<C>, Vec<C>) {
    let g = real(&[&[0.5, 0.0], &[0.0, -0.5]]);
    let psi0 = [C::new(phi.sin(), 0.0), C::new(phi.cos(), 0.0)];
    evolve_pure(&driven_qubit_h(omega, drive), &g, &psi0, t)
}

pub fn bipartite_pure(omega_l: f64, rabi: f64, g: f64, phi1: f64, phi2: f64, t: f64) -> (Vec<C>, Vec<C>) {
    let gen = real(&[&[-0.5, 0.0, 0.0, 0.0], &[0.0, 0.5, 0.0, 0.0], &[0.0, 0.0, -0.5, 0.0], &[0.0, 0.0, 0.0, 0.5]]);
    let (e, n) = ([phi2.sin(), phi2.cos()], [phi1.cos(), phi1.sin()]);
    let psi0: Vec<C> = e.iter().flat_map(|a| n.iter().map(move |b| C::new(a * b, 0.0))).collect();
    evolve_pure(&bipartite_h(omega_l, rabi, g), &gen, &psi0, t)
}

/// Characteristic polynomial coefficients `c[0..=n]` of a real matrix (`c[n] = 1`)
/// by the Faddeev-LeVerrier recursion.
pub fn char_poly(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = vec![vec![0.0; n]; n];
    for k in 1..=n {
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * m[l][j]).sum::<f64>();
            }
            next[i][i] += c[n - k + 1];
        }
        m = next;
        let am_trace: f64 = (0..n).map(|i| (0..n).map(|l| a[i][l] * m[l][i]).sum::<f64>()).sum();
        c[n - k] = -am_trace / k as f64;
    }
    c
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Simple real roots of a polynomial in `[-r, r]`: sign changes on a fine grid,
/// refined by bisection.
pub fn real_roots(c: &[f64], r: f64) -> Vec<f64> {
    let steps = 40_000;
    let mut roots = Vec::new();
    let mut x0 = -r;
    let mut f0 = poly_eval(c, x0);
    for k in 1..=steps {
        let x1 = -r + 2.0 * r * k as f64 / steps as f64;
        let f1 = poly_eval(c, x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi) = (x0, x1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if poly_eval(c, lo) * poly_eval(c, mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}
