//! The quantum switch and its higher-order generalizations over Pauli
//! channels.
//!
//! Measuring every control qubit in the `|±>` basis splits the output into
//! branches. For two Pauli channels with vectors `r` and `v`, the `+`
//! (anticommutator) branch collects `r_i v_j` on `P_i P_j` whenever `P_i`
//! and `P_j` commute and the `−` (commutator) branch collects it whenever
//! they anticommute. The branch weight is the collected mass and the branch
//! channel is the normalized vector.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{depolarizing, Dim, PauliChannel, PauliTable};

/// Branches lighter than this are dropped.
pub const ZERO_WEIGHT: f64 = 1e-14;
/// Channels equal entrywise within this tolerance are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of a branch distribution's total weight from one.
pub const WEIGHT_TOLERANCE: f64 = 1e-10;
/// Default bound on the number of candidate branches at one order.
pub const DEFAULT_MAX_BRANCHES: usize = 1_000_000;

/// Outcome of measuring one control qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// One weighted channel of a branch distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Branch {
    pub weight: f64,
    pub channel: PauliChannel,
}

/// Weighted channels obtained after measuring all control qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchDistribution {
    branches: Vec<Branch>,
    order: usize,
}

impl BranchDistribution {
    /// Validates a list of branches, dropping negligible weights and merging
    /// identical channels.
    pub fn new(branches: Vec<Branch>, order: usize) -> Result<Self> {
        let dim = branches
            .first()
            .map(|b| b.channel.dim())
            .ok_or_else(|| Error::InvalidArgument("empty branch distribution".into()))?;
        for b in &branches {
            if b.channel.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim.size(),
                    right: b.channel.dim().size(),
                });
            }
            if !(b.weight >= 0.0 && b.weight.is_finite()) {
                return Err(Error::InvalidArgument(format!("invalid branch weight {}", b.weight)));
            }
        }
        let total: f64 = branches.iter().map(|b| b.weight).sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidArgument(format!("branch weights sum to {total}, not 1")));
        }
        Ok(Self::from_candidates(branches, order))
    }

    /// A single branch carrying all the weight.
    pub fn single(channel: PauliChannel) -> Self {
        Self {
            branches: vec![Branch { weight: 1.0, channel }],
            order: 0,
        }
    }

    pub(crate) fn from_candidates(candidates: Vec<Branch>, order: usize) -> Self {
        Self {
            branches: merge_branches(candidates),
            order,
        }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn dim(&self) -> Dim {
        self.branches[0].channel.dim()
    }

    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).sum()
    }

    /// The channel seen when the control outcomes are discarded.
    pub fn average_channel(&self) -> PauliChannel {
        let n = self.dim().basis_len();
        let mut out = [0.0; 16];
        for b in &self.branches {
            for (o, p) in out.iter_mut().zip(b.channel.probs()).take(n) {
                *o += b.weight * p;
            }
        }
        PauliChannel::from_raw(self.dim(), out)
    }

    /// Weight of the branch whose channel matches `ch` within `tol`.
    pub fn weight_of(&self, ch: &PauliChannel, tol: f64) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.channel.approx_eq(ch, tol))
            .map(|b| b.weight)
            .sum()
    }
}

/// Sorts and merges channels that agree entrywise within
/// [`MERGE_TOLERANCE`], dropping weights below [`ZERO_WEIGHT`]. The first
/// member of each cluster in sorted order is its representative and weights
/// are accumulated in sorted order, so the result does not depend on the
/// input order of exact duplicates.
fn merge_branches(mut candidates: Vec<Branch>) -> Vec<Branch> {
    candidates.retain(|b| b.weight >= ZERO_WEIGHT);
    candidates.sort_by(|a, b| {
        let pa = a.channel.probs();
        let pb = b.channel.probs();
        pa.iter()
            .zip(pb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.weight.total_cmp(&b.weight))
    });
    let mut merged: Vec<Branch> = Vec::new();
    for cand in candidates {
        let lead = cand.channel.probs()[0];
        let mut target = None;
        for (k, m) in merged.iter().enumerate().rev() {
            if m.channel.probs()[0] < lead - MERGE_TOLERANCE {
                break;
            }
            if m.channel.approx_eq(&cand.channel, MERGE_TOLERANCE) {
                target = Some(k);
                break;
            }
        }
        match target {
            Some(k) => merged[k].weight += cand.weight,
            None => merged.push(cand),
        }
    }
    merged
}

/// One branch of a single switch; `channel` is `None` when the weight is
/// negligible and the normalized channel is undefined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateTerm {
    pub weight: f64,
    pub channel: Option<PauliChannel>,
}

impl UpdateTerm {
    fn from_unnormalized(dim: Dim, v: [f64; 16]) -> Self {
        let weight: f64 = v.iter().sum();
        if weight < ZERO_WEIGHT {
            return Self {
                weight: 0.0,
                channel: None,
            };
        }
        let mut probs = [0.0; 16];
        for (p, x) in probs.iter_mut().zip(v) {
            *p = x / weight;
        }
        Self {
            weight,
            channel: Some(PauliChannel::from_raw(dim, probs)),
        }
    }
}

/// Unnormalized anticommutator and commutator vectors.
fn update_parts(r1: &PauliChannel, r2: &PauliChannel) -> Result<(Dim, [f64; 16], [f64; 16])> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch {
            left: r1.dim().size(),
            right: r2.dim().size(),
        });
    }
    let dim = r1.dim();
    let table = PauliTable::for_dim(dim);
    let n = table.len();
    let (a, b) = (&r1.raw()[..n], &r2.raw()[..n]);
    let mut acom = [0.0; 16];
    let mut com = [0.0; 16];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let w = ai * bj;
            let k = table.product(i, j);
            if table.commutes(i, j) {
                acom[k] += w;
            } else {
                com[k] += w;
            }
        }
    }
    Ok((dim, acom, com))
}

/// The `+` branch of the switch of two Pauli channels.
pub fn update_acom(r1: &PauliChannel, r2: &PauliChannel) -> Result<UpdateTerm> {
    let (dim, acom, _) = update_parts(r1, r2)?;
    Ok(UpdateTerm::from_unnormalized(dim, acom))
}

/// The `−` branch of the switch of two Pauli channels.
pub fn update_com(r1: &PauliChannel, r2: &PauliChannel) -> Result<UpdateTerm> {
    let (dim, _, com) = update_parts(r1, r2)?;
    Ok(UpdateTerm::from_unnormalized(dim, com))
}

/// Both switch branches, `(+, −)`.
pub fn update_both(r1: &PauliChannel, r2: &PauliChannel) -> Result<(UpdateTerm, UpdateTerm)> {
    let (dim, acom, com) = update_parts(r1, r2)?;
    Ok((
        UpdateTerm::from_unnormalized(dim, acom),
        UpdateTerm::from_unnormalized(dim, com),
    ))
}

fn push_term(out: &mut Vec<Branch>, scale: f64, term: UpdateTerm) {
    if let Some(channel) = term.channel {
        out.push(Branch {
            weight: scale * term.weight,
            channel,
        });
    }
}

/// The quantum switch of `E` and `F` with a `|+>` control.
pub fn switch_pair(e: &PauliChannel, f: &PauliChannel) -> Result<BranchDistribution> {
    let (plus, minus) = update_both(e, f)?;
    let mut out = Vec::with_capacity(2);
    push_term(&mut out, 1.0, plus);
    push_term(&mut out, 1.0, minus);
    Ok(BranchDistribution::from_candidates(out, 0))
}

/// A first-order branch labeled by the inner outcomes `s1`, `s2` and the
/// outer outcome `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabeledBranch {
    pub labels: [Sign; 3],
    pub weight: f64,
    pub channel: Option<PauliChannel>,
}

impl LabeledBranch {
    pub fn label(&self) -> String {
        self.labels.iter().map(|s| s.symbol()).collect()
    }
}

const FIRST_ORDER_LABELS: [[Sign; 3]; 8] = {
    use Sign::{Minus as M, Plus as P};
    [
        [P, P, P],
        [M, P, P],
        [P, M, P],
        [M, M, P],
        [P, P, M],
        [M, P, M],
        [P, M, M],
        [M, M, M],
    ]
};

/// All eight branches of the first-order superswitch: the inner switches act
/// on `(e, f)` and `(e2, f2)`, and the outer switch acts on their outputs.
pub fn first_order(
    e: &PauliChannel,
    f: &PauliChannel,
    e2: &PauliChannel,
    f2: &PauliChannel,
) -> Result<Vec<LabeledBranch>> {
    let inner1 = update_both(e, f)?;
    let inner2 = update_both(e2, f2)?;
    let pick = |s: Sign, pair: &(UpdateTerm, UpdateTerm)| match s {
        Sign::Plus => pair.0,
        Sign::Minus => pair.1,
    };
    FIRST_ORDER_LABELS
        .iter()
        .map(|&labels| {
            let a = pick(labels[0], &inner1);
            let b = pick(labels[1], &inner2);
            let (weight, channel) = match (a.channel, b.channel) {
                (Some(ca), Some(cb)) => {
                    let outer = update_both(&ca, &cb)?;
                    let t = pick(labels[2], &outer);
                    let w = a.weight * b.weight * t.weight;
                    if w < ZERO_WEIGHT {
                        (0.0, None)
                    } else {
                        (w, t.channel)
                    }
                }
                _ => (0.0, None),
            };
            Ok(LabeledBranch {
                labels,
                weight,
                channel,
            })
        })
        .collect()
}

/// First-order branches of arbitrary leaf channels as a merged distribution.
pub fn first_order_distribution(
    e: &PauliChannel,
    f: &PauliChannel,
    e2: &PauliChannel,
    f2: &PauliChannel,
) -> Result<BranchDistribution> {
    let cands = first_order(e, f, e2, f2)?
        .into_iter()
        .filter_map(|b| {
            b.channel.map(|channel| Branch {
                weight: b.weight,
                channel,
            })
        })
        .collect();
    Ok(BranchDistribution::from_candidates(cands, 1))
}

fn next_order(prev: &BranchDistribution, max_branches: usize) -> Result<BranchDistribution> {
    let n = prev.len();
    let count = 2 * n * n;
    if count > max_branches {
        return Err(Error::TooManyBranches {
            count,
            limit: max_branches,
        });
    }
    let branches = prev.branches();
    let parts: Vec<Result<Vec<Branch>>> = branches
        .par_iter()
        .map(|b1| {
            let mut out = Vec::with_capacity(2 * n);
            for b2 in branches {
                let (plus, minus) = update_both(&b1.channel, &b2.channel)?;
                let w = b1.weight * b2.weight;
                push_term(&mut out, w, plus);
                push_term(&mut out, w, minus);
            }
            Ok(out)
        })
        .collect();
    let mut cands = Vec::with_capacity(count);
    for p in parts {
        cands.extend(p?);
    }
    Ok(BranchDistribution::from_candidates(cands, prev.order + 1))
}

/// The order-`order` superswitch with every leaf channel equal to `e`.
///
/// Order 0 is the quantum switch; order `n` switches two independent copies
/// of order `n − 1`.
pub fn superswitch(e: &PauliChannel, order: usize, max_branches: usize) -> Result<BranchDistribution> {
    let mut dist = switch_pair(e, e)?;
    for _ in 0..order {
        dist = next_order(&dist, max_branches)?;
    }
    Ok(dist)
}

/// Distributions for every order `0..=max_order`.
pub fn superswitch_orders(e: &PauliChannel, max_order: usize, max_branches: usize) -> Result<Vec<BranchDistribution>> {
    let mut out = Vec::with_capacity(max_order + 1);
    out.push(switch_pair(e, e)?);
    for _ in 0..max_order {
        let next = next_order(out.last().expect("nonempty"), max_branches)?;
        out.push(next);
    }
    Ok(out)
}

/// A branch of the correlated first-order switch, labeled by the parity
/// `x = s1·s2` of the inner outcomes and the outer outcome `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelatedBranch {
    pub parity: Sign,
    pub outer: Sign,
    pub weight: f64,
    pub channel: Option<PauliChannel>,
}

/// The four correlated branches, each the weight-proportional mixture of
/// the first-order branches sharing its parity and outer outcome.
pub fn correlated_first_order_labeled(
    e: &PauliChannel,
    f: &PauliChannel,
    e2: &PauliChannel,
    f2: &PauliChannel,
) -> Result<Vec<CorrelatedBranch>> {
    let general = first_order(e, f, e2, f2)?;
    let dim = e.dim();
    let mut out = Vec::with_capacity(4);
    for outer in [Sign::Plus, Sign::Minus] {
        for parity in [Sign::Plus, Sign::Minus] {
            let mut weight = 0.0;
            let mut acc = [0.0; 16];
            for b in &general {
                if b.labels[2] != outer || b.labels[0].times(b.labels[1]) != parity {
                    continue;
                }
                if let Some(ch) = b.channel {
                    weight += b.weight;
                    for (a, p) in acc.iter_mut().zip(ch.raw()) {
                        *a += b.weight * p;
                    }
                }
            }
            let channel = if weight < ZERO_WEIGHT {
                weight = 0.0;
                None
            } else {
                for a in acc.iter_mut() {
                    *a /= weight;
                }
                Some(PauliChannel::from_raw(dim, acc))
            };
            out.push(CorrelatedBranch {
                parity,
                outer,
                weight,
                channel,
            });
        }
    }
    Ok(out)
}

/// The correlated first-order switch with every leaf channel equal to `e`.
pub fn correlated_first_order(e: &PauliChannel) -> Result<BranchDistribution> {
    let cands = correlated_first_order_labeled(e, e, e, e)?
        .into_iter()
        .filter_map(|b| {
            b.channel.map(|channel| Branch {
                weight: b.weight,
                channel,
            })
        })
        .collect();
    Ok(BranchDistribution::from_candidates(cands, 1))
}

/// `β⋆ = (3 − √3)/6`, the off-identity Pauli weight of the self-mapped
/// depolarizing channel `D⋆`.
pub fn beta_star() -> f64 {
    (3.0 - 3f64.sqrt()) / 6.0
}

/// `p⋆ = 2(1 − 1/√3)`, so that `D⋆ = D_{p⋆}`.
pub fn p_star() -> f64 {
    2.0 * (1.0 - 1.0 / 3f64.sqrt())
}

/// The self-mapped depolarizing channel `D⋆`.
pub fn d_star() -> PauliChannel {
    depolarizing(p_star()).expect("p⋆ lies in range")
}

/// Weights `(α, β, γ)` of `D⋆`, `D_{4/3}` and the identity in a branch
/// distribution built only from those three channels.
pub type Triple = [f64; 3];

/// One step of the recurrence for a mixture of `D⋆`, `D_{4/3}` and `Id`.
pub fn recurrence_step(t: Triple) -> Triple {
    let [a, b, g] = t;
    let bs = beta_star();
    let c = 6.0 * bs * bs;
    let d = 2.0 * bs;
    [
        a * a * (1.0 - c) + 2.0 * a * b * (1.0 - d) + 2.0 * a * g,
        a * a * c + 2.0 * a * b * d + 2.0 / 3.0 * b * b + 2.0 * b * g,
        b * b / 3.0 + g * g,
    ]
}

/// Largest componentwise change under one recurrence step.
pub fn fixed_point_residual(t: Triple) -> f64 {
    let n = recurrence_step(t);
    (0..3).map(|k| (n[k] - t[k]).abs()).fold(0.0, f64::max)
}

fn check_simplex(t: Triple) -> Result<()> {
    let sum: f64 = t.iter().sum();
    if t.iter().any(|x| !(x.is_finite() && *x >= -1e-12)) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "({}, {}, {}) is not a probability triple",
            t[0], t[1], t[2]
        )));
    }
    Ok(())
}

/// Iterates the recurrence, returning the initial triple and `steps`
/// successors.
pub fn fixed_point_recurrence(alpha0: f64, beta0: f64, gamma0: f64, steps: usize) -> Result<Vec<Triple>> {
    let t0 = [alpha0, beta0, gamma0];
    check_simplex(t0)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(t0);
    for _ in 0..steps {
        let next = recurrence_step(*out.last().expect("nonempty"));
        out.push(next);
    }
    Ok(out)
}

/// Weights of `D⋆`, `D_{4/3}`, `Id` produced by the switch of `D⋆` with itself.
pub fn d_star_initial_triple() -> Triple {
    let bs = beta_star();
    let c = 6.0 * bs * bs;
    [1.0 - c, c, 0.0]
}

/// The fixed points of the recurrence inside the simplex.
pub fn stationary_triples() -> [Triple; 3] {
    let s3 = 3f64.sqrt();
    [[0.0, 0.0, 1.0], [0.5, s3 / 4.0, (2.0 - s3) / 4.0], [0.0, 0.75, 0.25]]
}
