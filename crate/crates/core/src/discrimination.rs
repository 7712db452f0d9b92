//! Minimum-error discrimination of quantum states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, CMatrix, C64};
use crate::pauli::{BlochVector, Dim, Ensemble, PauliChannel};
use crate::switch::BranchDistribution;

/// Tolerance used when validating POVM elements.
pub const POVM_TOLERANCE: f64 = 1e-10;
/// Allowed negativity of the smallest eigenvalue in [`check_optimality`].
pub const OPTIMALITY_TOLERANCE: f64 = 1e-9;

/// A positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<CMatrix>,
}

impl Povm {
    /// Validates Hermiticity, positivity and completeness within `1e-10`.
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let n = first.dim();
        Dim::from_size(n)?;
        let mut sum = CMatrix::zeros(n);
        for (k, e) in elements.iter().enumerate() {
            if e.dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: e.dim(),
                });
            }
            let defect = e.hermiticity_defect();
            if defect > POVM_TOLERANCE {
                return Err(Error::InvalidPovm(format!(
                    "element {k} is not Hermitian (defect {defect:.3e})"
                )));
            }
            let min = hermitian_eigenvalues(&e.hermitian_part())?[0];
            if min < -POVM_TOLERANCE {
                return Err(Error::InvalidPovm(format!(
                    "element {k} has negative eigenvalue {min:.3e}"
                )));
            }
            sum = &sum + e;
        }
        let gap = sum.max_abs_diff(&CMatrix::identity(n));
        if gap > POVM_TOLERANCE {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {gap:.3e}"
            )));
        }
        Ok(Self { elements })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: Dim) -> Self {
        let n = dim.size();
        let elements = (0..n)
            .map(|k| {
                let mut d = vec![0.0; n];
                d[k] = 1.0;
                CMatrix::from_real_diagonal(&d)
            })
            .collect();
        Self { elements }
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// Negates every element's Bloch vector, `Π ↦ tr(Π)I − Π`; qubits only.
    pub fn bloch_flipped(&self) -> Result<Povm> {
        if self.dim() != 2 {
            return Err(Error::Unsupported(
                "the flipped measurement is defined for qubits".into(),
            ));
        }
        let id = CMatrix::identity(2);
        let elements = self.elements.iter().map(|e| &id.scale(e.trace()) - e).collect();
        Ok(Self { elements })
    }
}

/// How a guessing probability was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Helstrom,
    ClosedFormDepolarization,
    PerBranchOptimal,
    FixedPovm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GuessingResult {
    pub value: f64,
    pub strategy: Strategy,
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

/// `q₁ρ₁ − q₂ρ₂`.
pub fn helstrom_operator(e: &Ensemble) -> Result<CMatrix> {
    require_pair(e)?;
    let (q, s) = (e.priors(), e.states());
    Ok(&s[0].matrix().scale_real(q[0]) - &s[1].matrix().scale_real(q[1]))
}

fn require_pair(e: &Ensemble) -> Result<()> {
    if e.len() != 2 {
        return Err(Error::Unsupported(format!(
            "two-state discrimination needs exactly two states, got {}",
            e.len()
        )));
    }
    Ok(())
}

/// Helstrom value from priors and Bloch vectors of a qubit pair.
pub fn helstrom_bloch(q1: f64, r1: &[f64; 3], q2: f64, r2: &[f64; 3]) -> f64 {
    let v: f64 = (0..3)
        .map(|k| {
            let d = q1 * r1[k] - q2 * r2[k];
            d * d
        })
        .sum::<f64>()
        .sqrt();
    0.5 + 0.5 * (q1 - q2).abs().max(v)
}

/// Optimal success probability `1/2 + ‖q₁ρ₁ − q₂ρ₂‖₁/2` for two states.
pub fn helstrom_two(e: &Ensemble) -> Result<GuessingResult> {
    require_pair(e)?;
    let (q, s) = (e.priors(), e.states());
    let value = if s[0].matrix().max_abs_diff(s[1].matrix()) == 0.0 {
        q[0].max(q[1])
    } else if e.dim() == Dim::Two {
        let r1 = s[0].bloch()?;
        let r2 = s[1].bloch()?;
        helstrom_bloch(q[0], &r1.0, q[1], &r2.0)
    } else {
        0.5 + 0.5 * trace_norm_hermitian(&helstrom_operator(e)?)?
    };
    Ok(GuessingResult {
        value,
        strategy: Strategy::Helstrom,
    })
}

/// Measurement attaining the Helstrom bound: the projector onto the
/// positive part of `q₁ρ₁ − q₂ρ₂` and its complement.
pub fn helstrom_measurement(e: &Ensemble) -> Result<Povm> {
    let op = helstrom_operator(e)?;
    let n = op.dim();
    let eig = hermitian_eigen(&op)?;
    let mut pi1 = CMatrix::zeros(n);
    let mut positive = 0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda > 1e-14 {
            pi1 = &pi1 + &CMatrix::projector(&eig.vector(k));
            positive += 1;
        }
    }
    if positive == 0 && e.priors()[0] >= e.priors()[1] && eig.values.iter().all(|l| l.abs() <= 1e-14) {
        pi1 = CMatrix::identity(n);
    }
    let pi1 = pi1.hermitian_part();
    let pi2 = &CMatrix::identity(n) - &pi1;
    Ok(Povm {
        elements: vec![pi1, pi2],
    })
}

/// `Σ_i q_i tr(Π_i ρ_i)` for a fixed measurement.
pub fn guessing_with_povm(e: &Ensemble, povm: &Povm) -> Result<GuessingResult> {
    check_counts(e, povm)?;
    let value = e
        .priors()
        .iter()
        .zip(e.states())
        .zip(povm.elements())
        .map(|((q, rho), pi)| q * (pi * rho.matrix()).trace().re)
        .sum();
    Ok(GuessingResult {
        value,
        strategy: Strategy::FixedPovm,
    })
}

fn check_counts(e: &Ensemble, povm: &Povm) -> Result<()> {
    if povm.len() != e.len() {
        return Err(Error::InvalidPovm(format!(
            "{} elements for {} states",
            povm.len(),
            e.len()
        )));
    }
    if povm.dim() != e.dim().size() {
        return Err(Error::DimensionMismatch {
            left: povm.dim(),
            right: e.dim().size(),
        });
    }
    Ok(())
}

/// Checks `Σ_i q_iρ_iΠ_i − q_jρ_j ⪰ 0` for every `j`.
///
/// A non-Hermitian `Σ_i q_iρ_iΠ_i` already rules out optimality.
pub fn check_optimality(e: &Ensemble, povm: &Povm) -> Result<bool> {
    check_counts(e, povm)?;
    let n = povm.dim();
    let mut l = CMatrix::zeros(n);
    for ((q, rho), pi) in e.priors().iter().zip(e.states()).zip(povm.elements()) {
        l = &l + &(rho.matrix() * pi).scale_real(*q);
    }
    if l.hermiticity_defect() > OPTIMALITY_TOLERANCE {
        return Ok(false);
    }
    let l = l.hermitian_part();
    for (q, rho) in e.priors().iter().zip(e.states()) {
        let diff = &l - &rho.matrix().scale_real(*q);
        if hermitian_eigenvalues(&diff)?[0] < -OPTIMALITY_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Guessing probability after a qubit depolarizing channel `D_p`, for an
/// equal-prior `n`-state ensemble with noiseless optimum `pg`.
///
/// With `known_range` the measurement is flipped for `p > 1`; otherwise the
/// original measurement is kept on the whole range.
pub fn depolarization_guessing_closed_form(pg: f64, p: f64, n: usize, known_range: bool) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("ensemble size must be at least 1".into()));
    }
    let inv = 1.0 / n as f64;
    if !(pg >= inv - 1e-12 && pg <= 1.0 + 1e-12) {
        return Err(Error::Domain {
            name: "P_g",
            value: pg,
            interval: "[1/n, 1]",
        });
    }
    if !(p.is_finite() && (0.0..=4.0 / 3.0).contains(&p)) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            interval: "[0, 4/3]",
        });
    }
    Ok(if known_range && p > 1.0 {
        (p - 1.0) * pg + (2.0 - p) * inv
    } else {
        (1.0 - p) * pg + p * inv
    })
}

/// Helstrom value for `n` parallel copies of depolarized `|0>` vs `|1>`.
pub fn multicopy_orthogonal_depolarization(p: f64, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("number of copies must be at least 1".into()));
    }
    if !(p.is_finite() && (0.0..=4.0 / 3.0).contains(&p)) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            interval: "[0, 4/3]",
        });
    }
    let a = p / 2.0;
    let b = 1.0 - p / 2.0;
    let mut binom = 1.0;
    let mut total = 0.0;
    for k in 0..=n {
        let ki = k as i32;
        let ni = n as i32;
        total += binom * (a.powi(ki) * b.powi(ni - ki) - a.powi(ni - ki) * b.powi(ki)).abs();
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    Ok(0.5 + 0.25 * total)
}

/// Average of per-branch Helstrom values, `Σ_b w_b P_g(E_b(Ω))`.
pub fn protocol_guessing(branches: &BranchDistribution, e: &Ensemble) -> Result<GuessingResult> {
    require_pair(e)?;
    let total = branches.total_weight();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("branch weights sum to {total}, not 1")));
    }
    if branches.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            left: branches.dim().size(),
            right: e.dim().size(),
        });
    }
    let value = if e.dim() == Dim::Two {
        let q = e.priors();
        let r1 = e.states()[0].bloch()?;
        let r2 = e.states()[1].bloch()?;
        let mut acc = 0.0;
        for b in branches.branches() {
            if b.weight == 0.0 {
                continue;
            }
            acc += b.weight * bloch_pair_after(&b.channel, q, &r1, &r2)?;
        }
        acc
    } else {
        let mut acc = 0.0;
        for b in branches.branches() {
            if b.weight == 0.0 {
                continue;
            }
            acc += b.weight * helstrom_two(&e.through(&b.channel)?)?.value;
        }
        acc
    };
    Ok(GuessingResult {
        value,
        strategy: Strategy::PerBranchOptimal,
    })
}

fn bloch_pair_after(ch: &PauliChannel, q: &[f64], r1: &BlochVector, r2: &BlochVector) -> Result<f64> {
    let a = ch.apply_bloch(r1)?;
    let b = ch.apply_bloch(r2)?;
    Ok(helstrom_bloch(q[0], &a.0, q[1], &b.0))
}

/// Helstrom value of a two-state ensemble after one application of `ch`.
pub fn channel_guessing(ch: &PauliChannel, e: &Ensemble) -> Result<GuessingResult> {
    require_pair(e)?;
    if e.dim() == Dim::Two && ch.dim() == Dim::Two {
        let q = e.priors();
        let r1 = e.states()[0].bloch()?;
        let r2 = e.states()[1].bloch()?;
        return Ok(GuessingResult {
            value: bloch_pair_after(ch, q, &r1, &r2)?,
            strategy: Strategy::Helstrom,
        });
    }
    helstrom_two(&e.through(ch)?)
}

/// The four-outcome family `{α|0><0|, α|1><1|, (1−α)|+><+|, (1−α)|−><−|}`.
pub fn bb84_family_povm(alpha: f64) -> Result<Povm> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain {
            name: "alpha",
            value: alpha,
            interval: "[0, 1]",
        });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [C64::new(s, 0.0), C64::new(s, 0.0)];
    let minus = [C64::new(s, 0.0), C64::new(-s, 0.0)];
    Povm::new(vec![
        CMatrix::from_real_diagonal(&[alpha, 0.0]),
        CMatrix::from_real_diagonal(&[0.0, alpha]),
        CMatrix::projector(&plus).scale_real(1.0 - alpha),
        CMatrix::projector(&minus).scale_real(1.0 - alpha),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{depolarizing, DensityMatrix};

    fn zero_plus() -> Ensemble {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        Ensemble::uniform(vec![DensityMatrix::basis(Dim::Two, 0), plus]).unwrap()
    }

    #[test]
    fn helstrom_examples() {
        let e = Ensemble::orthogonal_qubit_pair();
        assert_eq!(helstrom_two(&e).unwrap().value, 1.0);
        let s = DensityMatrix::basis(Dim::Two, 0);
        let same = Ensemble::uniform(vec![s.clone(), s]).unwrap();
        assert_eq!(helstrom_two(&same).unwrap().value, 0.5);
        let expected = 0.5 + 2f64.sqrt() / 4.0;
        assert!((helstrom_two(&zero_plus()).unwrap().value - expected).abs() < 1e-15);
        assert!(helstrom_two(&Ensemble::bb84()).is_err());
    }

    #[test]
    fn helstrom_bloch_agrees_with_eigenvalues() {
        let e = zero_plus();
        let via_eig = 0.5 + 0.5 * trace_norm_hermitian(&helstrom_operator(&e).unwrap()).unwrap();
        assert!((via_eig - helstrom_two(&e).unwrap().value).abs() < 1e-13);
    }

    #[test]
    fn trace_norm_examples() {
        assert_eq!(trace_norm_hermitian(&CMatrix::zeros(2)).unwrap(), 0.0);
        let m = CMatrix::from_real_diagonal(&[0.75, -0.25]);
        assert!((trace_norm_hermitian(&m).unwrap() - 1.0).abs() < 1e-15);
        let mut bad = CMatrix::zeros(2);
        bad[(0, 1)] = C64::new(1.0, 0.0);
        assert!(trace_norm_hermitian(&bad).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(depolarization_guessing_closed_form(1.0, 0.0, 2, true).unwrap(), 1.0);
        assert_eq!(depolarization_guessing_closed_form(1.0, 1.0, 2, true).unwrap(), 0.5);
        let v = depolarization_guessing_closed_form(1.0, 4.0 / 3.0, 2, true).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        let blind = depolarization_guessing_closed_form(1.0, 4.0 / 3.0, 2, false).unwrap();
        assert!(blind < 0.5);
        assert!(depolarization_guessing_closed_form(0.3, 0.5, 2, true).is_err());
        assert!(depolarization_guessing_closed_form(1.0, 1.5, 2, true).is_err());
    }

    #[test]
    fn closed_form_matches_helstrom_at_four_thirds() {
        let ch = depolarizing(4.0 / 3.0).unwrap();
        let out = Ensemble::orthogonal_qubit_pair().through(&ch).unwrap();
        assert!((helstrom_two(&out).unwrap().value - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn multicopy_examples() {
        assert_eq!(multicopy_orthogonal_depolarization(0.0, 1).unwrap(), 1.0);
        for n in 1..8 {
            assert!((multicopy_orthogonal_depolarization(1.0, n).unwrap() - 0.5).abs() < 1e-15);
        }
        assert!(multicopy_orthogonal_depolarization(0.5, 0).is_err());
    }

    #[test]
    fn optimality_examples() {
        let e = Ensemble::orthogonal_qubit_pair();
        let povm = Povm::computational(Dim::Two);
        assert!(check_optimality(&e, &povm).unwrap());
        let swapped = Povm::new(vec![povm.elements()[1].clone(), povm.elements()[0].clone()]).unwrap();
        assert!(!check_optimality(&e, &swapped).unwrap());
        let bb84 = Ensemble::bb84();
        let m = bb84_family_povm(0.5).unwrap();
        assert!(check_optimality(&bb84, &m).unwrap());
        assert!((guessing_with_povm(&bb84, &m).unwrap().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn helstrom_measurement_attains_bound() {
        let e = zero_plus();
        let m = helstrom_measurement(&e).unwrap();
        let v = guessing_with_povm(&e, &m).unwrap().value;
        assert!((v - helstrom_two(&e).unwrap().value).abs() < 1e-12);
        assert!(check_optimality(&e, &m).unwrap());
    }

    #[test]
    fn povm_validation() {
        assert!(Povm::new(vec![CMatrix::from_real_diagonal(&[1.0, 0.5])]).is_err());
        assert!(Povm::new(vec![
            CMatrix::from_real_diagonal(&[1.5, 0.0]),
            CMatrix::from_real_diagonal(&[-0.5, 1.0]),
        ])
        .is_err());
        assert!(Povm::new(vec![]).is_err());
    }

    #[test]
    fn flipped_povm_relabels_orthogonal_pair() {
        let flipped = Povm::computational(Dim::Two).bloch_flipped().unwrap();
        assert!(flipped.elements()[0].max_abs_diff(&CMatrix::from_real_diagonal(&[0.0, 1.0])) < 1e-15);
        assert!(Povm::computational(Dim::Four).bloch_flipped().is_err());
    }
}
