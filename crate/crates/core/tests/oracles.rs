//! Worked examples checked against independent brute-force evaluations and
//! known closed forms. Frozen constants were produced by the oracle in
//! the same test and are asserted for both the oracle and the engine.

mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superswitch_core::analysis::{limiting_guessing, superswitch_sequence};
use superswitch_core::dim4::{delta, make_ensemble};
use superswitch_core::discrimination::{
    helstrom_operator, helstrom_two, multicopy_orthogonal_depolarization, protocol_guessing, trace_norm_hermitian,
};
use superswitch_core::kraus::{first_order_term, pauli_vector_from_action};
use superswitch_core::linalg::{CMatrix, C64};
use superswitch_core::pauli::{depolarizing, DensityMatrix, Dim, Ensemble, PauliChannel};
use superswitch_core::reference;
use superswitch_core::switch::{
    correlated_first_order_labeled, d_star, first_order, stationary_triples, superswitch, switch_pair, Branch,
    BranchDistribution, Sign, DEFAULT_MAX_BRANCHES,
};
use superswitch_core::verify::update_rule_gap;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn sequential_oracle(first: &PauliChannel, second: &PauliChannel) -> Vec<f64> {
    pauli_vector_from_action(first.dim(), |r| {
        let mid = DensityMatrix::new(apply_by_matrices(second, r.matrix()).hermitian_part())?;
        Ok(apply_by_matrices(first, mid.matrix()))
    })
    .unwrap()
}

#[test]
fn compose_four_thirds_twice() {
    const FROZEN: [f64; 4] = [1.0 / 3.0, 2.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0];
    let d = depolarizing(4.0 / 3.0).unwrap();
    assert!(max_gap(&sequential_oracle(&d, &d), &FROZEN) < 1e-14);
    assert!(max_gap(d.compose(&d).unwrap().probs(), &FROZEN) < 1e-15);
}

#[test]
fn compose_bit_flips() {
    // p + q - 2pq at p = 0.2, q = 0.3.
    const FROZEN: [f64; 4] = [0.62, 0.38, 0.0, 0.0];
    let a = PauliChannel::new(Dim::Two, &[0.8, 0.2, 0.0, 0.0]).unwrap();
    let b = PauliChannel::new(Dim::Two, &[0.7, 0.3, 0.0, 0.0]).unwrap();
    assert!(max_gap(&sequential_oracle(&a, &b), &FROZEN) < 1e-14);
    assert!(max_gap(a.compose(&b).unwrap().probs(), &FROZEN) < 1e-15);
}

#[test]
fn compose_identity_is_neutral() {
    let e = PauliChannel::new(Dim::Two, &[0.1, 0.2, 0.3, 0.4]).unwrap();
    let id = PauliChannel::identity(Dim::Two);
    assert!(id.compose(&e).unwrap().approx_eq(&e, 0.0));
}

#[test]
fn helstrom_zero_versus_plus() {
    const FROZEN: f64 = 0.853_553_390_593_273_7;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
    let e = Ensemble::uniform(vec![DensityMatrix::basis(Dim::Two, 0), plus]).unwrap();
    let eig = eigenvalues_2x2(&helstrom_operator(&e).unwrap());
    let oracle = 0.5 + 0.5 * (eig[0].abs() + eig[1].abs());
    assert!(close(oracle, FROZEN, 1e-15));
    assert!(close(helstrom_two(&e).unwrap().value, FROZEN, 1e-15));
}

#[test]
fn omega2_helstrom_operator_trace_norm() {
    let e = make_ensemble("omega2").unwrap();
    let op = helstrom_operator(&e).unwrap();
    // (Φ₊ − Φ₋)/2 = (|00><11| + |11><00|)/2, eigenvalues ±1/2 and 0, 0.
    let mut expected = CMatrix::zeros(4);
    expected[(0, 3)] = C64::new(0.5, 0.0);
    expected[(3, 0)] = C64::new(0.5, 0.0);
    assert!(op.max_abs_diff(&expected) < 1e-15);
    assert!(close(trace_norm_hermitian(&op).unwrap(), 1.0, 1e-13));
}

#[test]
fn omega3_helstrom() {
    // Equal-prior pure pair: (1 + sqrt(1 - |<ψ|φ>|²))/2 with overlap 1/√2.
    const FROZEN: f64 = 0.853_553_390_593_273_7;
    let oracle = 0.5 * (1.0 + (1.0f64 - 0.5).sqrt());
    assert!(close(oracle, FROZEN, 1e-15));
    let v = helstrom_two(&make_ensemble("omega3").unwrap()).unwrap().value;
    assert!(close(v, FROZEN, 1e-12));
}

fn multicopy_oracle(p: f64, n: usize) -> f64 {
    let d = depolarizing(p).unwrap();
    let r0 = d.apply(&DensityMatrix::basis(Dim::Two, 0)).unwrap().matrix().clone();
    let r1 = d.apply(&DensityMatrix::basis(Dim::Two, 1)).unwrap().matrix().clone();
    let (mut a, mut b) = (r0.clone(), r1.clone());
    for _ in 1..n {
        a = a.kron(&r0);
        b = b.kron(&r1);
    }
    let op = (&a - &b).scale_real(0.5);
    0.5 + 0.5 * trace_norm_hermitian(&op).unwrap()
}

#[test]
fn multicopy_three_copies() {
    const FROZEN: f64 = 0.84375;
    assert!(close(multicopy_oracle(0.5, 3), FROZEN, 1e-12));
    assert!(close(
        multicopy_orthogonal_depolarization(0.5, 3).unwrap(),
        FROZEN,
        1e-15
    ));
}

#[test]
fn delta_equals_tensor_of_depolarizing() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for &(p, q) in &[(0.3, 0.9), (1.2, 0.1), (0.0, 4.0 / 3.0)] {
        let dp = depolarizing(p).unwrap();
        let dq = depolarizing(q).unwrap();
        let basis = superswitch_core::pauli::pauli_basis(Dim::Two);
        for _ in 0..5 {
            let rho = random_state(&mut rng, Dim::Four);
            let mut oracle = CMatrix::zeros(4);
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let w = dp.probs()[i] * dq.probs()[j];
                    oracle = &oracle + &a.kron(b).sandwich(rho.matrix()).scale_real(w);
                }
            }
            let out = delta(p, q).unwrap().apply(&rho).unwrap();
            assert!(out.matrix().max_abs_diff(&oracle) < 1e-14);
        }
    }
}

#[test]
fn two_qubit_update_rule_matches_kraus() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..3 {
        let a = random_channel(&mut rng, Dim::Four);
        let b = random_channel(&mut rng, Dim::Four);
        assert!(update_rule_gap(&a, &b).unwrap() < 1e-12);
    }
}

#[test]
fn first_order_branches_match_kraus() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let leaves: Vec<PauliChannel> = (0..4).map(|_| random_channel(&mut rng, Dim::Two)).collect();
    let branches = first_order(&leaves[0], &leaves[1], &leaves[2], &leaves[3]).unwrap();
    for b in &branches {
        let brute = pauli_vector_from_action(Dim::Two, |r| {
            first_order_term([&leaves[0], &leaves[1], &leaves[2], &leaves[3]], b.labels, r.matrix())
        })
        .unwrap();
        let engine: Vec<f64> = match b.channel {
            Some(ch) => ch.probs().iter().map(|p| p * b.weight).collect(),
            None => vec![0.0; 4],
        };
        assert!(max_gap(&engine, &brute) < 1e-13, "branch {}", b.label());
    }
}

#[test]
fn depolarizing_switch_branches() {
    for &p in &[0.2, 0.7, 1.0, 1.3] {
        let d = depolarizing(p).unwrap();
        let dist = switch_pair(&d, &d).unwrap();
        let pt = 4.0 * (4.0 - 3.0 * p) * p / (8.0 - 3.0 * p * p);
        assert!(close(
            dist.weight_of(&depolarizing(pt).unwrap(), 1e-14),
            1.0 - 3.0 * p * p / 8.0,
            1e-14
        ));
        assert!(close(
            dist.weight_of(&depolarizing(4.0 / 3.0).unwrap(), 1e-14),
            3.0 * p * p / 8.0,
            1e-14
        ));
    }
    let d1 = depolarizing(1.0).unwrap();
    let dist = superswitch(&d1, 0, DEFAULT_MAX_BRANCHES).unwrap();
    assert!(close(
        dist.weight_of(&depolarizing(0.8).unwrap(), 1e-14),
        5.0 / 8.0,
        1e-15
    ));
    assert!(close(
        dist.weight_of(&depolarizing(4.0 / 3.0).unwrap(), 1e-14),
        3.0 / 8.0,
        1e-15
    ));
}

#[test]
fn order_one_depolarizing_distribution() {
    for &p in &[0.3, 0.6, 0.9, 1.2] {
        let dist = superswitch(&depolarizing(p).unwrap(), 1, DEFAULT_MAX_BRANCHES).unwrap();
        let (r_ppp, r_mpp, r_mmp) = reference::first_order_weights(p);
        let id = PauliChannel::identity(Dim::Two);
        assert!(close(dist.weight_of(&id, 1e-12), r_mmp, 1e-14));
        assert!(close(
            dist.weight_of(&depolarizing(reference::eta1(p)).unwrap(), 1e-12),
            r_ppp,
            1e-14
        ));
        assert!(close(
            dist.weight_of(&depolarizing(reference::eta2(p)).unwrap(), 1e-12),
            2.0 * r_mpp,
            1e-14
        ));
        let rest = 1.0 - r_ppp - 2.0 * r_mpp - r_mmp;
        assert!(close(
            dist.weight_of(&depolarizing(4.0 / 3.0).unwrap(), 1e-12),
            rest,
            1e-14
        ));
    }
}

#[test]
fn protocol_guessing_examples() {
    let pair = Ensemble::orthogonal_qubit_pair();
    let id = PauliChannel::identity(Dim::Two);
    assert_eq!(
        protocol_guessing(&BranchDistribution::single(id), &pair).unwrap().value,
        1.0
    );
    let d43 = depolarizing(4.0 / 3.0).unwrap();
    let mix = BranchDistribution::new(
        vec![
            Branch {
                weight: 1.0 / 3.0,
                channel: id,
            },
            Branch {
                weight: 2.0 / 3.0,
                channel: d43,
            },
        ],
        0,
    )
    .unwrap();
    assert!(close(protocol_guessing(&mix, &pair).unwrap().value, 7.0 / 9.0, 1e-12));
    let d1 = depolarizing(1.0).unwrap();
    let v = protocol_guessing(&switch_pair(&d1, &d1).unwrap(), &pair).unwrap().value;
    assert!(close(v, 0.625, 1e-15));
}

#[test]
fn reference_sequences() {
    let pair = Ensemble::orthogonal_qubit_pair();
    let star = superswitch_sequence(&d_star(), 4, &pair).unwrap();
    for (v, e) in star.iter().zip([0.601, 0.619, 0.631, 0.636, 0.639]) {
        assert!(close(*v, e, 5e-4), "{star:?}");
    }
    let four = superswitch_sequence(&depolarizing(4.0 / 3.0).unwrap(), 2, &pair).unwrap();
    assert!(close(four[0], 7.0 / 9.0, 1e-12));
    for (v, e) in four.iter().zip([0.778, 0.753, 0.75004]) {
        assert!(close(*v, e, 5e-4), "{four:?}");
    }
    assert!(superswitch_sequence(&PauliChannel::identity(Dim::Two), 5, &pair)
        .unwrap()
        .iter()
        .all(|v| *v == 1.0));
}

#[test]
fn reference_limits() {
    let pair = Ensemble::orthogonal_qubit_pair();
    let [id, star, four] = stationary_triples();
    assert!(close(
        limiting_guessing(star, &pair).unwrap(),
        (6.0 + 3f64.sqrt()) / 12.0,
        1e-12
    ));
    assert!(close(limiting_guessing(four, &pair).unwrap(), 0.75, 1e-12));
    assert_eq!(limiting_guessing(id, &pair).unwrap(), 1.0);
}

#[test]
fn correlated_grouping_by_parity() {
    let p = 0.4;
    let d = depolarizing(p).unwrap();
    let general = first_order(&d, &d, &d, &d).unwrap();
    let corr = correlated_first_order_labeled(&d, &d, &d, &d).unwrap();
    for c in &corr {
        let w: f64 = general
            .iter()
            .filter(|b| b.labels[2] == c.outer && b.labels[0].times(b.labels[1]) == c.parity)
            .map(|b| b.weight)
            .sum();
        assert!(close(c.weight, w, 1e-15));
    }
    let pp = corr
        .iter()
        .find(|c| c.parity == Sign::Plus && c.outer == Sign::Plus)
        .unwrap();
    let (r_ppp, _, r_mmp) = reference::first_order_weights(p);
    assert!(close(pp.weight, r_ppp + r_mmp, 1e-14));
}
