//! Pauli channels, qubit and two-qubit states, Bloch vectors and ensembles.
//!
//! A Pauli channel is stored as its probability vector over the Pauli
//! (tensor-)basis. For one qubit the index order is `[I, X, Y, Z]`; for two
//! qubits index `4a + b` is `P_a ⊗ P_b`, i.e. `II, IX, IY, IZ, XI, …, ZZ`.
//! Composition and the switch update rules only need the group product and
//! commutation tables below; matrices are built only to act on states.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

/// Tolerance below zero that is treated as roundoff and clamped.
pub const CLAMP_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of a probability vector's sum from one.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Hilbert-space dimension of the systems the engine supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    /// One qubit.
    Two,
    /// Two qubits.
    Four,
}

impl Dim {
    pub fn from_size(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dim::Two),
            4 => Ok(Dim::Four),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    /// Matrix size `d`.
    pub const fn size(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Four => 4,
        }
    }

    /// Number of Pauli basis elements, `d²`.
    pub const fn basis_len(self) -> usize {
        match self {
            Dim::Two => 4,
            Dim::Four => 16,
        }
    }

    pub const fn qubits(self) -> usize {
        match self {
            Dim::Two => 1,
            Dim::Four => 2,
        }
    }
}

// Single-qubit Pauli index <-> (x, z) symplectic bits.
const fn xz(i: usize) -> (usize, usize) {
    match i {
        0 => (0, 0),
        1 => (1, 0),
        2 => (1, 1),
        _ => (0, 1),
    }
}

const fn from_xz(x: usize, z: usize) -> usize {
    match (x, z) {
        (0, 0) => 0,
        (1, 0) => 1,
        (1, 1) => 2,
        _ => 3,
    }
}

const fn single_product(i: usize, j: usize) -> usize {
    let (xi, zi) = xz(i);
    let (xj, zj) = xz(j);
    from_xz(xi ^ xj, zi ^ zj)
}

const fn single_anticommutes(i: usize, j: usize) -> bool {
    let (xi, zi) = xz(i);
    let (xj, zj) = xz(j);
    (xi * zj + zi * xj) % 2 == 1
}

/// Group product (phases dropped) and commutation relation for a basis.
pub struct PauliTable {
    len: usize,
    product: [[u8; 16]; 16],
    commutes: [[bool; 16]; 16],
}

impl PauliTable {
    const fn build(dim: Dim) -> Self {
        let len = dim.basis_len();
        let mut product = [[0u8; 16]; 16];
        let mut commutes = [[false; 16]; 16];
        let mut i = 0;
        while i < len {
            let mut j = 0;
            while j < len {
                match dim {
                    Dim::Two => {
                        product[i][j] = single_product(i, j) as u8;
                        commutes[i][j] = !single_anticommutes(i, j);
                    }
                    Dim::Four => {
                        let (a, b) = (i / 4, i % 4);
                        let (c, d) = (j / 4, j % 4);
                        product[i][j] = (4 * single_product(a, c) + single_product(b, d)) as u8;
                        commutes[i][j] = single_anticommutes(a, c) == single_anticommutes(b, d);
                    }
                }
                j += 1;
            }
            i += 1;
        }
        Self { len, product, commutes }
    }

    pub fn for_dim(dim: Dim) -> &'static PauliTable {
        match dim {
            Dim::Two => &TABLE_D2,
            Dim::Four => &TABLE_D4,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index of `P_i P_j` up to phase.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.product[i][j] as usize
    }

    #[inline]
    pub fn commutes(&self, i: usize, j: usize) -> bool {
        self.commutes[i][j]
    }
}

static TABLE_D2: PauliTable = PauliTable::build(Dim::Two);
static TABLE_D4: PauliTable = PauliTable::build(Dim::Four);

fn single_qubit_paulis() -> [CMatrix; 4] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        CMatrix::identity(2),
        CMatrix::from_rows(&[&[z, o], &[o, z]]),
        CMatrix::from_rows(&[&[z, -i], &[i, z]]),
        CMatrix::from_rows(&[&[o, z], &[z, -o]]),
    ]
}

/// Pauli basis matrices in canonical index order.
pub fn pauli_basis(dim: Dim) -> &'static [CMatrix] {
    static D2: OnceLock<Vec<CMatrix>> = OnceLock::new();
    static D4: OnceLock<Vec<CMatrix>> = OnceLock::new();
    match dim {
        Dim::Two => D2.get_or_init(|| single_qubit_paulis().to_vec()),
        Dim::Four => D4.get_or_init(|| {
            let p = single_qubit_paulis();
            let mut out = Vec::with_capacity(16);
            for a in &p {
                for b in &p {
                    out.push(a.kron(b));
                }
            }
            out
        }),
    }
}

/// A Pauli channel `ρ ↦ Σ_i p_i P_i ρ P_i†`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliChannel {
    dim: Dim,
    probs: [f64; 16],
}

impl PauliChannel {
    /// Validates and builds a channel. Entries in `[-1e-12, 0)` are clamped
    /// to zero; anything more negative, or a sum off by more than `1e-12`,
    /// is rejected.
    pub fn new(dim: Dim, probs: &[f64]) -> Result<Self> {
        if probs.len() != dim.basis_len() {
            return Err(Error::InvalidProbabilities(format!(
                "expected {} entries for dimension {}, got {}",
                dim.basis_len(),
                dim.size(),
                probs.len()
            )));
        }
        let mut out = [0.0; 16];
        for (k, &p) in probs.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidProbabilities(format!("entry {k} is not finite")));
            }
            if p < -CLAMP_TOLERANCE {
                return Err(Error::InvalidProbabilities(format!("entry {k} = {p} is negative")));
            }
            out[k] = p.max(0.0);
        }
        let sum: f64 = out.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!("entries sum to {sum}, not 1")));
        }
        Ok(Self { dim, probs: out })
    }

    /// Builds from a vector already known to be a probability vector up to
    /// roundoff (used inside the update rules).
    pub(crate) fn from_raw(dim: Dim, probs: [f64; 16]) -> Self {
        let mut probs = probs;
        for p in probs.iter_mut() {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        Self { dim, probs }
    }

    pub fn identity(dim: Dim) -> Self {
        let mut probs = [0.0; 16];
        probs[0] = 1.0;
        Self { dim, probs }
    }

    /// Maps every state to `I/d`.
    pub fn completely_depolarizing(dim: Dim) -> Self {
        let n = dim.basis_len();
        let mut probs = [0.0; 16];
        for p in probs.iter_mut().take(n) {
            *p = 1.0 / n as f64;
        }
        Self { dim, probs }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs[..self.dim.basis_len()]
    }

    pub(crate) fn raw(&self) -> &[f64; 16] {
        &self.probs
    }

    pub fn identity_weight(&self) -> f64 {
        self.probs[0]
    }

    /// Largest entrywise difference. Panics on mismatched dimensions.
    pub fn max_abs_diff(&self, other: &PauliChannel) -> f64 {
        assert_eq!(self.dim, other.dim, "channel dimensions must agree");
        self.probs()
            .iter()
            .zip(other.probs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &PauliChannel, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Applies the channel to a state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dims(self.dim, rho.dim)?;
        let basis = pauli_basis(self.dim);
        let mut out = CMatrix::zeros(self.dim.size());
        for (p, op) in self.probs().iter().zip(basis) {
            if *p == 0.0 {
                continue;
            }
            out = &out + &op.sandwich(&rho.matrix).scale_real(*p);
        }
        Ok(DensityMatrix {
            dim: self.dim,
            matrix: out,
        })
    }

    /// Channel `self ∘ other`. Pauli channels commute, so the order only
    /// matters for readability.
    pub fn compose(&self, other: &PauliChannel) -> Result<PauliChannel> {
        check_dims(self.dim, other.dim)?;
        let table = PauliTable::for_dim(self.dim);
        let n = table.len();
        let mut out = [0.0; 16];
        for i in 0..n {
            let a = self.probs[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..n {
                out[table.product(i, j)] += a * other.probs[j];
            }
        }
        Ok(Self::from_raw(self.dim, out))
    }

    /// `2^k`-fold or general `n`-fold sequential application.
    pub fn power(&self, n: usize) -> PauliChannel {
        let mut acc = PauliChannel::identity(self.dim);
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base).expect("same dimension");
            }
            base = base.compose(&base).expect("same dimension");
            k >>= 1;
        }
        acc
    }

    /// Convex combination `Σ w_k E_k / Σ w_k`.
    pub fn mixture(parts: &[(f64, PauliChannel)]) -> Result<PauliChannel> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let dim = first.1.dim;
        let mut total = 0.0;
        let mut out = [0.0; 16];
        for (w, ch) in parts {
            check_dims(dim, ch.dim)?;
            if *w < 0.0 {
                return Err(Error::InvalidArgument(format!("negative mixture weight {w}")));
            }
            total += w;
            for (o, p) in out.iter_mut().zip(ch.probs.iter()) {
                *o += w * p;
            }
        }
        if total <= 0.0 {
            return Err(Error::InvalidArgument("mixture weights sum to zero".into()));
        }
        for o in out.iter_mut() {
            *o /= total;
        }
        Ok(Self::from_raw(dim, out))
    }

    /// Per-axis scaling of the Bloch vector; qubit channels only.
    ///
    /// A Pauli channel maps `r ↦ (λ_x r_x, λ_y r_y, λ_z r_z)`.
    pub fn bloch_scaling(&self) -> Result<[f64; 3]> {
        if self.dim != Dim::Two {
            return Err(Error::Unsupported("Bloch scaling is defined for qubit channels".into()));
        }
        let [i, x, y, z] = [self.probs[0], self.probs[1], self.probs[2], self.probs[3]];
        Ok([i + x - y - z, i - x + y - z, i - x - y + z])
    }

    /// Applies a qubit channel directly to a Bloch vector.
    pub fn apply_bloch(&self, b: &BlochVector) -> Result<BlochVector> {
        let s = self.bloch_scaling()?;
        Ok(BlochVector([s[0] * b.0[0], s[1] * b.0[1], s[2] * b.0[2]]))
    }
}

fn check_dims(a: Dim, b: Dim) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            left: a.size(),
            right: b.size(),
        });
    }
    Ok(())
}

fn check_interval(name: &'static str, value: f64, lo: f64, hi: f64, interval: &'static str) -> Result<()> {
    if !(value.is_finite() && value >= lo && value <= hi) {
        return Err(Error::Domain { name, value, interval });
    }
    Ok(())
}

/// Qubit depolarizing channel `(1 - p)ρ + p I/2`, `p ∈ [0, 4/3]`.
pub fn depolarizing(p: f64) -> Result<PauliChannel> {
    check_interval("p", p, 0.0, 4.0 / 3.0, "[0, 4/3]")?;
    let b = p / 4.0;
    let mut probs = [0.0; 16];
    probs[0] = 1.0 - 3.0 * b;
    probs[1] = b;
    probs[2] = b;
    probs[3] = b;
    Ok(PauliChannel::from_raw(Dim::Two, probs))
}

/// `(1 - p)ρ + p YρY`, `p ∈ [0, 1]`.
pub fn bit_phase_flip(p: f64) -> Result<PauliChannel> {
    check_interval("p", p, 0.0, 1.0, "[0, 1]")?;
    PauliChannel::new(Dim::Two, &[1.0 - p, 0.0, p, 0.0])
}

/// `(1 - p - q)ρ + p YρY + q ZρZ` with `p, q ≥ 0`, `p + q ≤ 1`.
pub fn q_channel(p: f64, q: f64) -> Result<PauliChannel> {
    check_interval("p", p, 0.0, 1.0, "[0, 1] with p + q <= 1")?;
    check_interval("q", q, 0.0, 1.0, "[0, 1] with p + q <= 1")?;
    if p + q > 1.0 + SUM_TOLERANCE {
        return Err(Error::Domain {
            name: "p + q",
            value: p + q,
            interval: "[0, 1]",
        });
    }
    PauliChannel::new(Dim::Two, &[(1.0 - p - q).max(0.0), 0.0, p, q])
}

/// One-parameter slice `Q_{1/3 + t, 1/2 - t}` of the Y/Z channel family,
/// feasible for `t ∈ [-1/3, 1/2]`.
pub fn q_tilde(t: f64) -> Result<PauliChannel> {
    check_interval("p", t, -1.0 / 3.0, 0.5, "[-1/3, 1/2]")?;
    q_channel((1.0 / 3.0 + t).max(0.0), (0.5 - t).max(0.0))
}

/// Single-qubit Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        let b = BlochVector(r);
        if !r.iter().all(|x| x.is_finite()) || b.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain {
                name: "|r|",
                value: b.norm(),
                interval: "[0, 1]",
            });
        }
        Ok(b)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> [f64; 3] {
        [self.0[0] * s, self.0[1] * s, self.0[2] * s]
    }
}

/// Density matrix of one or two qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: Dim,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = Dim::from_size(matrix.dim())?;
        let defect = matrix.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::InvalidState(format!("trace is {tr}, not 1")));
        }
        let min = crate::linalg::hermitian_eigenvalues(&matrix)?[0];
        if min < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { dim, matrix })
    }

    /// `|ψ><ψ|` for a (not necessarily normalized) vector.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v: Vec<C64> = amplitudes.iter().map(|a| a / norm).collect();
        Self::new(CMatrix::projector(&v))
    }

    /// Computational basis state `|k>`.
    pub fn basis(dim: Dim, k: usize) -> Self {
        let mut m = CMatrix::zeros(dim.size());
        m[(k, k)] = C64::new(1.0, 0.0);
        Self { dim, matrix: m }
    }

    pub fn maximally_mixed(dim: Dim) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim.size()).scale_real(1.0 / dim.size() as f64),
        }
    }

    /// Qubit state `(I + r·σ)/2`.
    pub fn from_bloch(b: &BlochVector) -> Self {
        let basis = pauli_basis(Dim::Two);
        let mut m = CMatrix::identity(2);
        for k in 0..3 {
            m = &m + &basis[k + 1].scale_real(b.0[k]);
        }
        Self {
            dim: Dim::Two,
            matrix: m.scale_real(0.5),
        }
    }

    /// Bloch vector `r_k = tr(ρ σ_k)`; qubit states only.
    pub fn bloch(&self) -> Result<BlochVector> {
        if self.dim != Dim::Two {
            return Err(Error::Unsupported("Bloch vectors are defined for qubits".into()));
        }
        let basis = pauli_basis(Dim::Two);
        let mut r = [0.0; 3];
        for (k, rk) in r.iter_mut().enumerate() {
            *rk = (&basis[k + 1] * &self.matrix).trace().re;
        }
        Ok(BlochVector(r))
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.dim != Dim::Two || other.dim != Dim::Two {
            return Err(Error::Unsupported("tensor products are built from qubit states".into()));
        }
        Ok(DensityMatrix {
            dim: Dim::Four,
            matrix: self.matrix.kron(&other.matrix),
        })
    }
}

/// Free-function form of [`DensityMatrix::bloch`].
pub fn bloch_of(rho: &DensityMatrix) -> Result<BlochVector> {
    rho.bloch()
}

/// Validated inverse of [`bloch_of`].
pub fn state_of(b: &BlochVector) -> Result<DensityMatrix> {
    let b = BlochVector::new(b.0)?;
    Ok(DensityMatrix::from_bloch(&b))
}

/// Free-function form of [`PauliChannel::apply`].
pub fn apply_channel(ch: &PauliChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

/// Free-function form of [`PauliChannel::compose`].
pub fn compose(first: &PauliChannel, second: &PauliChannel) -> Result<PauliChannel> {
    first.compose(second)
}

/// Prior probabilities paired with states of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    priors: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(priors: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if priors.len() != states.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} priors for {} states",
                priors.len(),
                states.len()
            )));
        }
        if states.len() < 2 {
            return Err(Error::InvalidEnsemble("need at least two states".into()));
        }
        if priors.iter().any(|&q| q.is_nan() || q < 0.0) {
            return Err(Error::InvalidEnsemble("priors must be nonnegative".into()));
        }
        let sum: f64 = priors.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!("priors sum to {sum}")));
        }
        let dim = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim.size(),
                right: bad.dim().size(),
            });
        }
        Ok(Self { priors, states })
    }

    /// Equal priors over the given states.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len().max(1);
        Self::new(vec![1.0 / n as f64; states.len()], states)
    }

    /// `{1/2, |0><0|}, {1/2, |1><1|}`.
    pub fn orthogonal_qubit_pair() -> Self {
        Self {
            priors: vec![0.5, 0.5],
            states: vec![DensityMatrix::basis(Dim::Two, 0), DensityMatrix::basis(Dim::Two, 1)],
        }
    }

    /// Equal-prior BB84 states `|0>, |1>, |+>, |->`.
    pub fn bb84() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [C64::new(s, 0.0), C64::new(s, 0.0)];
        let minus = [C64::new(s, 0.0), C64::new(-s, 0.0)];
        Self {
            priors: vec![0.25; 4],
            states: vec![
                DensityMatrix::basis(Dim::Two, 0),
                DensityMatrix::basis(Dim::Two, 1),
                DensityMatrix::pure(&plus).expect("normalized"),
                DensityMatrix::pure(&minus).expect("normalized"),
            ],
        }
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> Dim {
        self.states[0].dim()
    }

    /// The ensemble received after every state passes through `ch`.
    pub fn through(&self, ch: &PauliChannel) -> Result<Ensemble> {
        let states = self.states.iter().map(|s| ch.apply(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            priors: self.priors.clone(),
            states,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_probs(ch: &PauliChannel, expected: &[f64]) {
        assert_eq!(ch.probs().len(), expected.len());
        for (a, b) in ch.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{:?} vs {:?}", ch.probs(), expected);
        }
    }

    #[test]
    fn depolarizing_examples() {
        assert_probs(&depolarizing(0.0).unwrap(), &[1.0, 0.0, 0.0, 0.0]);
        let third = 1.0 / 3.0;
        assert_probs(&depolarizing(4.0 / 3.0).unwrap(), &[0.0, third, third, third]);
        assert_probs(&depolarizing(1.0).unwrap(), &[0.25; 4]);
    }

    #[test]
    fn depolarizing_rejects_out_of_range() {
        let err = depolarizing(1.5).unwrap_err();
        assert!(err.to_string().contains("[0, 4/3]"), "{err}");
        assert!(depolarizing(-0.1).is_err());
        assert!(depolarizing(f64::NAN).is_err());
    }

    #[test]
    fn bit_phase_flip_examples() {
        assert_probs(&bit_phase_flip(0.0).unwrap(), &[1.0, 0.0, 0.0, 0.0]);
        assert_probs(&bit_phase_flip(0.5).unwrap(), &[0.5, 0.0, 0.5, 0.0]);
        assert_probs(&bit_phase_flip(0.3).unwrap(), &[0.7, 0.0, 0.3, 0.0]);
        assert!(bit_phase_flip(1.01).is_err());
    }

    #[test]
    fn q_channel_examples() {
        assert_probs(&q_channel(0.0, 0.0).unwrap(), &[1.0, 0.0, 0.0, 0.0]);
        assert_probs(&q_channel(0.2, 0.3).unwrap(), &[0.5, 0.0, 0.2, 0.3]);
        assert_probs(&q_tilde(0.0).unwrap(), &[1.0 / 6.0, 0.0, 1.0 / 3.0, 0.5]);
        assert!(q_channel(0.6, 0.6).is_err());
        assert!(q_channel(-0.1, 0.2).is_err());
    }

    #[test]
    fn new_clamps_tiny_negatives_and_rejects_large_ones() {
        let ch = PauliChannel::new(Dim::Two, &[1.0 + 5e-13, -5e-13, 0.0, 0.0]).unwrap();
        assert_eq!(ch.probs()[1], 0.0);
        assert!(PauliChannel::new(Dim::Two, &[1.1, -0.1, 0.0, 0.0]).is_err());
        assert!(PauliChannel::new(Dim::Two, &[0.5, 0.0, 0.0, 0.0]).is_err());
        assert!(PauliChannel::new(Dim::Four, &[0.25; 4]).is_err());
    }

    #[test]
    fn identity_and_completely_depolarizing_action() {
        let rho = DensityMatrix::from_bloch(&BlochVector([0.3, -0.2, 0.5]));
        let out = PauliChannel::identity(Dim::Two).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let mixed = PauliChannel::completely_depolarizing(Dim::Two).apply(&rho).unwrap();
        assert!(
            mixed
                .matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(Dim::Two).matrix())
                < 1e-15
        );
    }

    #[test]
    fn depolarizing_on_ground_state() {
        let p = 0.6;
        let out = depolarizing(p)
            .unwrap()
            .apply(&DensityMatrix::basis(Dim::Two, 0))
            .unwrap();
        let expected = CMatrix::from_real_diagonal(&[1.0 - p / 2.0, p / 2.0]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn compose_rejects_dimension_mismatch() {
        let a = PauliChannel::identity(Dim::Two);
        let b = PauliChannel::identity(Dim::Four);
        assert!(matches!(a.compose(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.apply(&DensityMatrix::basis(Dim::Four, 0)).is_err());
    }

    #[test]
    fn bloch_examples() {
        let b = bloch_of(&DensityMatrix::basis(Dim::Two, 0)).unwrap();
        assert_eq!(b.0, [0.0, 0.0, 1.0]);
        let b = bloch_of(&DensityMatrix::maximally_mixed(Dim::Two)).unwrap();
        assert_eq!(b.0, [0.0, 0.0, 0.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let b = bloch_of(&plus).unwrap();
        assert!((b.0[0] - 1.0).abs() < 1e-15 && b.0[1].abs() < 1e-15 && b.0[2].abs() < 1e-15);
        assert!(state_of(&BlochVector([0.0, 0.8, 0.7])).is_err());
    }

    #[test]
    fn table_matches_matrices() {
        for dim in [Dim::Two, Dim::Four] {
            let basis = pauli_basis(dim);
            let table = PauliTable::for_dim(dim);
            for i in 0..dim.basis_len() {
                for j in 0..dim.basis_len() {
                    let prod = &basis[i] * &basis[j];
                    let k = table.product(i, j);
                    // prod = phase * P_k, phase in {±1, ±i}
                    let phase = (&basis[k] * &prod).trace() / dim.size() as f64;
                    assert!((phase.norm() - 1.0).abs() < 1e-12);
                    let commutator = &prod - &(&basis[j] * &basis[i]);
                    let commute = commutator.frobenius_norm() < 1e-12;
                    assert_eq!(commute, table.commutes(i, j), "dim {dim:?} pair ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn ensemble_validation() {
        let s = DensityMatrix::basis(Dim::Two, 0);
        assert!(Ensemble::new(vec![1.0], vec![s.clone()]).is_err());
        assert!(Ensemble::new(vec![0.6, 0.6], vec![s.clone(), s.clone()]).is_err());
        assert!(Ensemble::new(vec![0.5, 0.5], vec![s.clone(), DensityMatrix::basis(Dim::Four, 0)]).is_err());
        assert!(Ensemble::new(vec![0.3, 0.7], vec![s.clone(), s]).is_ok());
    }

    #[test]
    fn density_matrix_validation() {
        let bad = CMatrix::from_real_diagonal(&[1.2, -0.2]);
        assert!(DensityMatrix::new(bad).is_err());
        let bad_trace = CMatrix::from_real_diagonal(&[0.5, 0.4]);
        assert!(DensityMatrix::new(bad_trace).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
    }
}
