//! Cross-checks of the engine against closed forms and brute-force Kraus
//! evaluation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{sweep, Axis, ChannelFamily, EngineLimits, ParameterGrid, Protocol};
use crate::discrimination::protocol_guessing;
use crate::error::Result;
use crate::kraus::{pauli_vector_from_action, switch_term};
use crate::pauli::{depolarizing, Dim, Ensemble, PauliChannel};
use crate::reference;
use crate::switch::{switch_pair, update_both, Sign, UpdateTerm};

/// Result of one check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn new(name: &str, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
        }
    }
}

/// A Pauli channel drawn uniformly from the probability simplex.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, dim: Dim) -> PauliChannel {
    let n = dim.basis_len();
    let mut v = vec![0.0; n];
    for x in v.iter_mut() {
        let u: f64 = rng.random();
        *x = -(1.0 - u).ln();
    }
    let s: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= s;
    }
    let mut probs = [0.0; 16];
    probs[..n].copy_from_slice(&v);
    PauliChannel::from_raw(dim, probs)
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn depolarizing_curve(orders: &[usize], points: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let grid = ParameterGrid::single(Axis::new("p", 0.0, 4.0 / 3.0, points)?);
    let protocols: Vec<Protocol> = orders.iter().map(|&k| Protocol::Superswitch(k)).collect();
    let t = sweep(
        &ChannelFamily::Depolarizing2,
        &protocols,
        &Ensemble::orthogonal_qubit_pair(),
        &grid,
        &EngineLimits::default(),
    )?;
    let p = t.parameter("p").expect("p column");
    let cols = protocols
        .iter()
        .map(|pr| t.column(&pr.name()).expect("column"))
        .collect();
    Ok((p, cols))
}

/// Switch guessing of the depolarized orthogonal pair against its closed form.
pub fn check_switch_closed_form() -> Result<CheckOutcome> {
    let (p, cols) = depolarizing_curve(&[0], 200)?;
    let expected: Vec<f64> = p.iter().map(|&x| reference::switch_depolarization(1.0, x, 2)).collect();
    Ok(CheckOutcome::new(
        "switch closed form (depolarizing, 200 points)",
        max_gap(&cols[0], &expected),
        1e-10,
    ))
}

/// Orders 0–2 against the explicit polynomials.
pub fn check_polynomials() -> Result<CheckOutcome> {
    let (p, cols) = depolarizing_curve(&[0, 1, 2], 50)?;
    let f: [fn(f64) -> f64; 3] = [
        reference::switch_orthogonal,
        reference::first_order_orthogonal,
        reference::second_order_orthogonal,
    ];
    let mut err: f64 = 0.0;
    for (col, poly) in cols.iter().zip(f) {
        let expected: Vec<f64> = p.iter().map(|&x| poly(x)).collect();
        err = err.max(max_gap(col, &expected));
    }
    Ok(CheckOutcome::new(
        "superswitch orders 0-2 vs polynomials (50 points)",
        err,
        1e-9,
    ))
}

/// Largest gap between the table-based update rule and the Kraus-level
/// anticommutator/commutator sums for one channel pair.
pub fn update_rule_gap(a: &PauliChannel, b: &PauliChannel) -> Result<f64> {
    let (plus, minus) = update_both(a, b)?;
    let mut err: f64 = 0.0;
    for (term, sign) in [(plus, Sign::Plus), (minus, Sign::Minus)] {
        let brute = pauli_vector_from_action(a.dim(), |r| switch_term(a, b, sign, r.matrix()))?;
        err = err.max(max_gap(&unnormalized(&term, a.dim()), &brute));
    }
    Ok(err)
}

pub(crate) fn unnormalized(term: &UpdateTerm, dim: Dim) -> Vec<f64> {
    match term.channel {
        Some(ch) => ch.probs().iter().map(|p| p * term.weight).collect(),
        None => vec![0.0; dim.basis_len()],
    }
}

/// Update rules against Kraus-level evaluation on random channel pairs.
pub fn check_update_rule(pairs_d2: usize, pairs_d4: usize, seed: u64) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut err: f64 = 0.0;
    for (dim, count) in [(Dim::Two, pairs_d2), (Dim::Four, pairs_d4)] {
        for _ in 0..count {
            let a = random_channel(&mut rng, dim);
            let b = random_channel(&mut rng, dim);
            err = err.max(update_rule_gap(&a, &b)?);
        }
    }
    Ok(CheckOutcome::new(
        &format!("update rule vs Kraus evaluation ({pairs_d2} qubit, {pairs_d4} two-qubit pairs)"),
        err,
        1e-10,
    ))
}

/// Switch of `D_{4/3}` with itself gives guessing 7/9.
pub fn check_four_thirds() -> Result<CheckOutcome> {
    let d = depolarizing(4.0 / 3.0)?;
    let g = protocol_guessing(&switch_pair(&d, &d)?, &Ensemble::orthogonal_qubit_pair())?.value;
    Ok(CheckOutcome::new(
        "switch of D_4/3 guesses 7/9",
        (g - 7.0 / 9.0).abs(),
        1e-12,
    ))
}

/// The full suite run by the `verify` command.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_switch_closed_form()?,
        check_polynomials()?,
        check_four_thirds()?,
        check_update_rule(100, 20, 11)?,
    ])
}
