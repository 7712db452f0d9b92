//! Brute-force Kraus-level evaluation of switch branches and Pauli-vector
//! tomography. Slow; used to cross-check the table-based update rules.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{pauli_basis, DensityMatrix, Dim, PauliChannel, PauliTable};
use crate::switch::Sign;

/// Kraus operators `√p_i P_i` of a Pauli channel, zero terms omitted.
pub fn kraus_operators(ch: &PauliChannel) -> Vec<CMatrix> {
    pauli_basis(ch.dim())
        .iter()
        .zip(ch.probs())
        .filter(|(_, p)| **p > 0.0)
        .map(|(m, p)| m.scale_real(p.sqrt()))
        .collect()
}

fn bracket(a: &CMatrix, b: &CMatrix, s: Sign) -> CMatrix {
    let ab = a * b;
    let ba = b * a;
    match s {
        Sign::Plus => &ab + &ba,
        Sign::Minus => &ab - &ba,
    }
}

/// `(1/4) Σ_ij [E_i, F_j]_s ρ [E_i, F_j]_s†`, with `+` the anticommutator.
pub fn switch_term(e: &PauliChannel, f: &PauliChannel, s: Sign, rho: &CMatrix) -> Result<CMatrix> {
    same_dim(e, f)?;
    let ke = kraus_operators(e);
    let kf = kraus_operators(f);
    let mut out = CMatrix::zeros(rho.dim());
    for a in &ke {
        for b in &kf {
            out = &out + &bracket(a, b, s).sandwich(rho);
        }
    }
    Ok(out.scale_real(0.25))
}

/// `(1/64) Σ_ijkl [[E_i, F_j]_{s1}, [E'_k, F'_l]_{s2}]_s ρ (…)†`.
pub fn first_order_term(leaves: [&PauliChannel; 4], labels: [Sign; 3], rho: &CMatrix) -> Result<CMatrix> {
    for l in &leaves[1..] {
        same_dim(leaves[0], l)?;
    }
    let inner = |a: &PauliChannel, b: &PauliChannel, s: Sign| -> Vec<CMatrix> {
        let ka = kraus_operators(a);
        let kb = kraus_operators(b);
        let mut out = Vec::with_capacity(ka.len() * kb.len());
        for x in &ka {
            for y in &kb {
                out.push(bracket(x, y, s));
            }
        }
        out
    };
    let left = inner(leaves[0], leaves[1], labels[0]);
    let right = inner(leaves[2], leaves[3], labels[1]);
    let mut out = CMatrix::zeros(rho.dim());
    for a in &left {
        for b in &right {
            out = &out + &bracket(a, b, labels[2]).sandwich(rho);
        }
    }
    Ok(out.scale_real(1.0 / 64.0))
}

fn same_dim(a: &PauliChannel, b: &PauliChannel) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim().size(),
            right: b.dim().size(),
        });
    }
    Ok(())
}

/// The states `(I ± P_k)/d` for every non-identity Pauli `P_k`, plus `I/d`.
/// Their span contains every Hermitian matrix.
pub fn tomography_states(dim: Dim) -> Vec<DensityMatrix> {
    let d = dim.size() as f64;
    let id = CMatrix::identity(dim.size());
    let mut out = vec![DensityMatrix::maximally_mixed(dim)];
    for p in &pauli_basis(dim)[1..] {
        for sign in [1.0, -1.0] {
            let m = (&id + &p.scale_real(sign)).scale_real(1.0 / d);
            out.push(DensityMatrix::new(m).expect("Pauli eigenprojector state"));
        }
    }
    out
}

/// Recovers the (unnormalized) Pauli vector of a linear map that is known
/// to be Pauli-diagonal, from its action on [`tomography_states`].
///
/// Uses `λ_k = tr(P_k M(P_k))/d` with `M(P_k) = (d/2)(M(ρ₊) − M(ρ₋))`, then
/// `p_i = (1/d²) Σ_k s_ik λ_k` where `s_ik = ±1` for commuting or
/// anticommuting pairs.
pub fn pauli_vector_from_action<F>(dim: Dim, mut map: F) -> Result<Vec<f64>>
where
    F: FnMut(&DensityMatrix) -> Result<CMatrix>,
{
    let basis = pauli_basis(dim);
    let table = PauliTable::for_dim(dim);
    let d = dim.size() as f64;
    let n = dim.basis_len();
    let states = tomography_states(dim);
    let mut lambda = vec![0.0; n];
    lambda[0] = map(&states[0])?.trace().re;
    for k in 1..n {
        let plus = map(&states[2 * k - 1])?;
        let minus = map(&states[2 * k])?;
        let image = (&plus - &minus).scale_real(d / 2.0);
        lambda[k] = (&basis[k] * &image).trace().re / d;
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|k| if table.commutes(i, k) { lambda[k] } else { -lambda[k] })
                .sum::<f64>()
                / (d * d)
        })
        .collect())
}
