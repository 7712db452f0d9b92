//! Closed-form guessing probabilities for the depolarizing family and the
//! orthogonal qubit pair, used to cross-check the engine.

/// Quantum switch of two `D_p` for an equal-prior `n`-state ensemble with
/// noiseless optimum `pg`.
pub fn switch_depolarization(pg: f64, p: f64, n: usize) -> f64 {
    let n = n as f64;
    let q_minus = 3.0 * p * p / 8.0;
    let pt = 4.0 * (4.0 - 3.0 * p) * p / (8.0 - 3.0 * p * p);
    (1.0 - q_minus) * ((1.0 - pt) * pg + pt / n) + q_minus * (pg / 3.0 + 2.0 / (3.0 * n))
}

/// Switch guessing for the orthogonal pair, `1 − p + 5p²/8`.
pub fn switch_orthogonal(p: f64) -> f64 {
    1.0 - p + 5.0 * p * p / 8.0
}

/// First-order superswitch guessing for the orthogonal pair.
pub fn first_order_orthogonal(p: f64) -> f64 {
    let p2 = p * p;
    let p3 = p2 * p;
    let p4 = p3 * p;
    1.0 - 2.0 * p + 29.0 * p2 / 8.0 - 23.0 * p3 / 8.0
        + 55.0 * p4 / 64.0
        + p2 * (3.0 * p * (5.0 * p - 8.0) + 8.0).abs() / 64.0
}

/// Second-order superswitch guessing for the orthogonal pair.
pub fn second_order_orthogonal(p: f64) -> f64 {
    let pw = |k: i32| p.powi(k);
    let a = (3.0 * p * (3.0 * p * (p * (19.0 * p - 64.0) + 80.0) - 128.0) + 64.0).abs();
    let b =
        (9.0 * p * (p * (p * (3.0 * p * (p * (71.0 * p - 360.0) + 760.0) - 2560.0) + 1600.0) - 512.0) + 512.0).abs();
    let c = (6.0 * p * (5.0 * p - 8.0) + 16.0).abs();
    1.0 - 4.0 * p + 67.0 * pw(2) / 4.0 - 159.0 * pw(3) / 4.0 + 1897.0 * pw(4) / 32.0 - 457.0 * pw(5) / 8.0
        + 4457.0 * pw(6) / 128.0
        - 1573.0 * pw(7) / 128.0
        + 1975.0 * pw(8) / 1024.0
        + pw(2) * b / 2048.0
        + pw(2) * a / 128.0
        - pw(3) * a / 128.0
        + pw(4) * a / 512.0
        + 3.0 * pw(6) * c / 4096.0
}

/// Depolarizing parameter of the `+++` first-order branch of `D_p`.
pub fn eta1(p: f64) -> f64 {
    let p2 = p * p;
    let p3 = p2 * p;
    let p4 = p3 * p;
    1.0 - (99.0 * p4 - 336.0 * p3 + 432.0 * p2 - 256.0 * p + 64.0) / (-45.0 * p4 + 144.0 * p3 - 144.0 * p2 + 64.0)
}

/// Depolarizing parameter of the `−++` and `+−+` first-order branches.
pub fn eta2(p: f64) -> f64 {
    1.0 - (-15.0 * p * p + 24.0 * p - 8.0) / (9.0 * p * p - 24.0 * p + 24.0)
}

/// Weights `(r₊₊₊, r₋₊₊ = r₊₋₊, r₋₋₊)` of the first-order branches of `D_p`.
pub fn first_order_weights(p: f64) -> (f64, f64, f64) {
    let p2 = p * p;
    let p3 = p2 * p;
    let p4 = p3 * p;
    (
        1.0 - 9.0 / 64.0 * (5.0 * p4 - 16.0 * p3 + 16.0 * p2),
        3.0 / 64.0 * (3.0 * p4 - 8.0 * p3 + 8.0 * p2),
        3.0 * p4 / 64.0,
    )
}

/// Limit of the superswitch sequence for `D⋆`, `(6 + √3)/12`.
pub fn d_star_limit() -> f64 {
    (6.0 + 3f64.sqrt()) / 12.0
}

/// Limit of the superswitch sequence for `D_{4/3}`.
pub const FOUR_THIRDS_LIMIT: f64 = 0.75;
