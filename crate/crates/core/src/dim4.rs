//! Two-qubit Pauli channels and ensembles.
//!
//! Computational basis order is `|00>, |01>, |10>, |11>`; the first qubit is
//! the most significant tensor factor.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::pauli::{depolarizing, DensityMatrix, Dim, Ensemble, PauliChannel};

/// Highest superswitch order evaluated for two-qubit channels unless
/// overridden.
pub const DEFAULT_ORDER_CAP: usize = 2;

/// Two-qubit depolarizing channel, `s ∈ [0, 16/15]`.
pub fn depolarizing_d4(s: f64) -> Result<PauliChannel> {
    if !(s.is_finite() && (0.0..=16.0 / 15.0).contains(&s)) {
        return Err(Error::Domain {
            name: "s",
            value: s,
            interval: "[0, 16/15]",
        });
    }
    let mut probs = [s / 16.0; 16];
    probs[0] = 1.0 - 15.0 * s / 16.0;
    PauliChannel::new(Dim::Four, &probs)
}

/// `D_p ⊗ D_q`.
pub fn delta(p: f64, q: f64) -> Result<PauliChannel> {
    let a = depolarizing(p)?;
    let b = depolarizing(q)?;
    let mut probs = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            probs[4 * i + j] = a.probs()[i] * b.probs()[j];
        }
    }
    PauliChannel::new(Dim::Four, &probs)
}

/// The correlated two-qubit channel `W_{p,q}` with `p, q ≥ 0`, `p + q ≤ 1`.
pub fn w_channel(p: f64, q: f64) -> Result<PauliChannel> {
    for (name, v) in [("p", p), ("q", q)] {
        if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
            return Err(Error::Domain {
                name,
                value: v,
                interval: "[0, 1] with p + q <= 1",
            });
        }
    }
    if p + q > 1.0 + 1e-12 {
        return Err(Error::Domain {
            name: "p + q",
            value: p + q,
            interval: "[0, 1]",
        });
    }
    let r = (1.0 - p - q).max(0.0);
    let probs = [
        r * r,
        0.0,
        r * q,
        r * p,
        0.0,
        0.0,
        0.0,
        0.0,
        p * r,
        0.0,
        p * q,
        p * p,
        q * r,
        0.0,
        q * q,
        p * q,
    ];
    PauliChannel::new(Dim::Four, &probs)
}

/// Named two-qubit ensembles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedEnsemble {
    /// `|00>` and `|11>`.
    Omega1,
    /// `Φ₊` and `Φ₋`.
    Omega2,
    /// `|00>` and `Φ₋`.
    Omega3,
}

impl NamedEnsemble {
    pub const ALL: [NamedEnsemble; 3] = [NamedEnsemble::Omega1, NamedEnsemble::Omega2, NamedEnsemble::Omega3];

    pub fn name(self) -> &'static str {
        match self {
            NamedEnsemble::Omega1 => "omega1",
            NamedEnsemble::Omega2 => "omega2",
            NamedEnsemble::Omega3 => "omega3",
        }
    }

    /// Equal-prior ensemble for the tag.
    pub fn build(self) -> Ensemble {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ket = |a: [f64; 4]| -> DensityMatrix {
            let v: Vec<C64> = a.iter().map(|&x| C64::new(x, 0.0)).collect();
            DensityMatrix::pure(&v).expect("normalized ket")
        };
        let zz = ket([1.0, 0.0, 0.0, 0.0]);
        let oo = ket([0.0, 0.0, 0.0, 1.0]);
        let phi_plus = ket([s, 0.0, 0.0, s]);
        let phi_minus = ket([s, 0.0, 0.0, -s]);
        let states = match self {
            NamedEnsemble::Omega1 => vec![zz, oo],
            NamedEnsemble::Omega2 => vec![phi_plus, phi_minus],
            NamedEnsemble::Omega3 => vec![zz, phi_minus],
        };
        Ensemble::uniform(states).expect("two equal-dimension states")
    }
}

impl fmt::Display for NamedEnsemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedEnsemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "omega1" | "ω1" | "o1" => Ok(NamedEnsemble::Omega1),
            "omega2" | "ω2" | "o2" => Ok(NamedEnsemble::Omega2),
            "omega3" | "ω3" | "o3" => Ok(NamedEnsemble::Omega3),
            other => Err(Error::InvalidArgument(format!(
                "unknown two-qubit ensemble '{other}'; expected omega1, omega2 or omega3"
            ))),
        }
    }
}

/// Builds a named ensemble from its tag.
pub fn make_ensemble(tag: &str) -> Result<Ensemble> {
    Ok(tag.parse::<NamedEnsemble>()?.build())
}
