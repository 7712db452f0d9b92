#![allow(dead_code)]

use rand::Rng;
use superswitch_core::linalg::{CMatrix, C64};
use superswitch_core::pauli::{pauli_basis, DensityMatrix, Dim, PauliChannel};

pub use superswitch_core::verify::random_channel;

/// `GG†/tr(GG†)` for a complex Gaussian-like `G`; full rank almost surely.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> DensityMatrix {
    let n = dim.size();
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        }
    }
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).expect("valid state")
}

/// Random pure qubit state with Bloch vector on the sphere.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [
            2.0 * rng.random::<f64>() - 1.0,
            2.0 * rng.random::<f64>() - 1.0,
            2.0 * rng.random::<f64>() - 1.0,
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// `Σ_i p_i P_i ρ P_i` evaluated with explicit matrices.
pub fn apply_by_matrices(ch: &PauliChannel, rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(rho.dim());
    for (p, op) in ch.probs().iter().zip(pauli_basis(ch.dim())) {
        out = &out + &op.sandwich(rho).scale_real(*p);
    }
    out
}

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Eigenvalues of a 2×2 Hermitian matrix from the characteristic polynomial.
pub fn eigenvalues_2x2(m: &CMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)].norm();
    let mid = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    [mid - r, mid + r]
}
