//! Parameter sweeps, superswitch sequences and Monte Carlo volume estimates
//! over the qubit Pauli-channel tetrahedron.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dim4::{delta, depolarizing_d4, w_channel, DEFAULT_ORDER_CAP};
use crate::discrimination::{
    channel_guessing, guessing_with_povm, helstrom_measurement, multicopy_orthogonal_depolarization, protocol_guessing,
};
use crate::error::{Error, Result};
use crate::pauli::{bit_phase_flip, depolarizing, q_channel, q_tilde, Dim, Ensemble, PauliChannel};
use crate::switch::{
    d_star, fixed_point_residual, superswitch_orders, BranchDistribution, Triple, DEFAULT_MAX_BRANCHES,
};

/// Highest qubit superswitch order evaluated unless overridden.
pub const QUBIT_ORDER_CAP: usize = 10;
/// Strict-dominance margin for region predicates.
pub const DOMINANCE_MARGIN: f64 = 1e-12;
/// Minimum number of Monte Carlo samples.
pub const MIN_SAMPLES: usize = 10_000;
/// Accepted samples per deterministic RNG stream.
pub const BATCH_SIZE: usize = 10_000;
/// Volume of the tetrahedron `{p₁, p₂, p₃ ≥ 0, p₁ + p₂ + p₃ ≤ 1}`.
pub const TETRAHEDRON_VOLUME: f64 = 1.0 / 6.0;
/// Name of the generator recorded in every [`RegionEstimate`].
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed), stream = batch index";

/// Default order cap for a dimension.
pub fn order_cap(dim: Dim) -> usize {
    match dim {
        Dim::Two => QUBIT_ORDER_CAP,
        Dim::Four => DEFAULT_ORDER_CAP,
    }
}

/// Parameterized channel constructors.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelFamily {
    /// Qubit depolarizing `D_p`.
    Depolarizing2,
    /// Bit-phase flip with probability `p`.
    BitPhase,
    /// `Q_{p,q}`.
    Q,
    /// `Q_{1/3 + p, 1/2 − p}`.
    QTilde,
    /// General qubit Pauli channel `[1 − p1 − p2 − p3, p1, p2, p3]`.
    Pauli,
    /// A fixed channel with no parameters.
    Fixed(PauliChannel),
    /// Two-qubit depolarizing `D_s`.
    Depolarizing4,
    /// `D_p ⊗ D_q`.
    Delta,
    /// `W_{p,q}`.
    W,
}

impl ChannelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelFamily::Depolarizing2 => "depolarizing2",
            ChannelFamily::BitPhase => "bitphase",
            ChannelFamily::Q => "q",
            ChannelFamily::QTilde => "qtilde",
            ChannelFamily::Pauli => "pauli",
            ChannelFamily::Fixed(_) => "fixed",
            ChannelFamily::Depolarizing4 => "depolarizing4",
            ChannelFamily::Delta => "delta",
            ChannelFamily::W => "w",
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            ChannelFamily::Depolarizing2 | ChannelFamily::BitPhase | ChannelFamily::QTilde => &["p"],
            ChannelFamily::Q | ChannelFamily::Delta | ChannelFamily::W => &["p", "q"],
            ChannelFamily::Pauli => &["p1", "p2", "p3"],
            ChannelFamily::Fixed(_) => &[],
            ChannelFamily::Depolarizing4 => &["s"],
        }
    }

    pub fn dim(&self) -> Dim {
        match self {
            ChannelFamily::Depolarizing4 | ChannelFamily::Delta | ChannelFamily::W => Dim::Four,
            ChannelFamily::Fixed(ch) => ch.dim(),
            _ => Dim::Two,
        }
    }

    /// Builds the channel at `params`, given in [`Self::param_names`] order.
    pub fn build(&self, params: &[f64]) -> Result<PauliChannel> {
        let names = self.param_names();
        if params.len() != names.len() {
            return Err(Error::InvalidArgument(format!(
                "family {} takes {} parameter(s) ({}), got {}",
                self.name(),
                names.len(),
                names.join(", "),
                params.len()
            )));
        }
        match self {
            ChannelFamily::Depolarizing2 => depolarizing(params[0]),
            ChannelFamily::BitPhase => bit_phase_flip(params[0]),
            ChannelFamily::Q => q_channel(params[0], params[1]),
            ChannelFamily::QTilde => q_tilde(params[0]),
            ChannelFamily::Pauli => {
                let [a, b, c] = [params[0], params[1], params[2]];
                if [a, b, c].iter().any(|x| x.is_nan() || *x < 0.0) || a + b + c > 1.0 + 1e-12 {
                    return Err(Error::Domain {
                        name: "p1 + p2 + p3",
                        value: a + b + c,
                        interval: "[0, 1] with every p_k >= 0",
                    });
                }
                PauliChannel::new(Dim::Two, &[(1.0 - a - b - c).max(0.0), a, b, c])
            }
            ChannelFamily::Fixed(ch) => Ok(*ch),
            ChannelFamily::Depolarizing4 => depolarizing_d4(params[0]),
            ChannelFamily::Delta => delta(params[0], params[1]),
            ChannelFamily::W => w_channel(params[0], params[1]),
        }
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "depolarizing2" | "depolarizing" => Ok(ChannelFamily::Depolarizing2),
            "bitphase" | "bit_phase_flip" => Ok(ChannelFamily::BitPhase),
            "q" => Ok(ChannelFamily::Q),
            "qtilde" => Ok(ChannelFamily::QTilde),
            "pauli" => Ok(ChannelFamily::Pauli),
            "depolarizing4" => Ok(ChannelFamily::Depolarizing4),
            "delta" => Ok(ChannelFamily::Delta),
            "w" => Ok(ChannelFamily::W),
            other => Err(Error::InvalidArgument(format!(
                "unknown channel family '{other}'; expected depolarizing2, bitphase, q, qtilde, pauli, depolarizing4, delta or w"
            ))),
        }
    }
}

/// One grid axis: `points` evenly spaced values from `start` to `stop`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, start: f64, stop: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidArgument("a grid axis needs at least 2 points".into()));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        Ok(Self {
            name: name.into(),
            start,
            stop,
            points,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|k| {
                if k == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / n as f64
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// Parses `name:start:stop:points`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "grid axis '{s}' must look like name:start:stop:points"
            )));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("'{t}' is not a number in grid axis '{s}'")))
        };
        let points = parts[3]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("'{}' is not a point count", parts[3])))?;
        Axis::new(parts[0].trim(), num(parts[1])?, num(parts[2])?, points)
    }
}

/// Cartesian product of axes; the first axis varies slowest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterGrid {
    pub axes: Vec<Axis>,
}

impl ParameterGrid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidArgument("grid has no axes".into()));
        }
        Ok(Self { axes })
    }

    pub fn single(axis: Axis) -> Self {
        Self { axes: vec![axis] }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> Vec<String> {
        self.axes.iter().map(|a| a.name.clone()).collect()
    }

    /// All grid points in row-major order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &self.axes {
            let values = axis.values();
            let mut next = Vec::with_capacity(out.len() * values.len());
            for prefix in &out {
                for v in &values {
                    let mut p = prefix.clone();
                    p.push(*v);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    /// Reorders axes to match `names`, failing on missing or extra axes.
    fn aligned_to(&self, names: &[&str]) -> Result<ParameterGrid> {
        let mut axes = Vec::with_capacity(names.len());
        for n in names {
            let axis = self
                .axes
                .iter()
                .find(|a| a.name == *n)
                .ok_or_else(|| Error::InvalidArgument(format!("grid is missing parameter '{n}'")))?;
            axes.push(axis.clone());
        }
        if let Some(extra) = self.axes.iter().find(|a| !names.contains(&a.name.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "grid parameter '{}' is not used by this family (expects {})",
                extra.name,
                names.join(", ")
            )));
        }
        Ok(ParameterGrid { axes })
    }
}

/// A guessing strategy evaluated at each grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    /// One use of the channel with the optimal measurement.
    Channel,
    /// Superswitch of the given order; order 0 is the quantum switch.
    Superswitch(usize),
    /// One use of the channel measured with the noiseless optimal POVM.
    BlindPovm,
    /// As [`Protocol::BlindPovm`] with every Bloch vector of the POVM negated.
    FlippedPovm,
    /// `n` parallel copies of the depolarized orthogonal pair.
    Multicopy(usize),
}

impl Protocol {
    pub fn name(&self) -> String {
        match self {
            Protocol::Channel => "channel".into(),
            Protocol::Superswitch(0) => "switch".into(),
            Protocol::Superswitch(k) => format!("ss{k}"),
            Protocol::BlindPovm => "blind_povm".into(),
            Protocol::FlippedPovm => "flipped_povm".into(),
            Protocol::Multicopy(n) => format!("multicopy{n}"),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidArgument(format!("unknown protocol '{s}'"));
        match t.as_str() {
            "channel" => return Ok(Protocol::Channel),
            "switch" => return Ok(Protocol::Superswitch(0)),
            "blind_povm" | "blind" => return Ok(Protocol::BlindPovm),
            "flipped_povm" | "flipped" => return Ok(Protocol::FlippedPovm),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("ss") {
            return rest.parse().map(Protocol::Superswitch).map_err(|_| bad());
        }
        if let Some(rest) = t.strip_prefix("multicopy") {
            let rest = rest.trim_start_matches('(').trim_end_matches(')');
            let n: usize = rest.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(Error::InvalidArgument("multicopy needs at least one copy".into()));
            }
            return Ok(Protocol::Multicopy(n));
        }
        Err(bad())
    }
}

/// Limits applied while evaluating superswitches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineLimits {
    pub max_branches: usize,
    /// Overrides the per-dimension order cap when set.
    pub order_cap: Option<usize>,
}

impl Default for EngineLimits {
    fn default() -> Self {
        Self {
            max_branches: DEFAULT_MAX_BRANCHES,
            order_cap: None,
        }
    }
}

impl EngineLimits {
    fn cap(&self, dim: Dim) -> usize {
        self.order_cap.unwrap_or_else(|| order_cap(dim))
    }

    fn check_order(&self, dim: Dim, order: usize) -> Result<()> {
        let cap = self.cap(dim);
        if order > cap {
            return Err(Error::OrderCap { order, cap });
        }
        Ok(())
    }
}

/// One sweep row: parameter values and one guessing value per protocol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub params: Vec<f64>,
    pub values: Vec<f64>,
}

/// Guessing values over a parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub family: String,
    pub parameter_names: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    /// Grid points outside the family's legal domain.
    pub skipped: usize,
}

impl SweepTable {
    /// Values of a named column in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[k]).collect())
    }

    /// Values of a named parameter in row order.
    pub fn parameter(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.parameter_names.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.params[k]).collect())
    }
}

fn is_orthogonal_pure_pair(e: &Ensemble) -> bool {
    if e.len() != 2 || e.dim() != Dim::Two || (e.priors()[0] - 0.5).abs() > 1e-12 {
        return false;
    }
    match (e.states()[0].bloch(), e.states()[1].bloch()) {
        (Ok(a), Ok(b)) => (a.norm() - 1.0).abs() < 1e-9 && (0..3).all(|k| (a.0[k] + b.0[k]).abs() < 1e-9),
        _ => false,
    }
}

fn validate_protocols(
    family: &ChannelFamily,
    protocols: &[Protocol],
    ensemble: &Ensemble,
    limits: &EngineLimits,
) -> Result<()> {
    if protocols.is_empty() {
        return Err(Error::InvalidArgument("no protocols requested".into()));
    }
    let dim = family.dim();
    if ensemble.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim.size(),
            right: ensemble.dim().size(),
        });
    }
    for p in protocols {
        match p {
            Protocol::Superswitch(k) => limits.check_order(dim, *k)?,
            Protocol::FlippedPovm if dim != Dim::Two => {
                return Err(Error::Unsupported("flipped_povm is defined for qubit channels".into()))
            }
            Protocol::Multicopy(_) if *family != ChannelFamily::Depolarizing2 || !is_orthogonal_pure_pair(ensemble) => {
                return Err(Error::Unsupported(
                    "multicopy applies to the depolarizing2 family with an equal-prior orthogonal pure pair".into(),
                ));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Evaluates `protocols` at every grid point. Points outside the family's
/// domain are skipped and counted.
pub fn sweep(
    family: &ChannelFamily,
    protocols: &[Protocol],
    ensemble: &Ensemble,
    grid: &ParameterGrid,
    limits: &EngineLimits,
) -> Result<SweepTable> {
    validate_protocols(family, protocols, ensemble, limits)?;
    let grid = grid.aligned_to(family.param_names())?;
    let max_order = protocols
        .iter()
        .filter_map(|p| match p {
            Protocol::Superswitch(k) => Some(*k),
            _ => None,
        })
        .max();
    let needs_povm = protocols
        .iter()
        .any(|p| matches!(p, Protocol::BlindPovm | Protocol::FlippedPovm));
    let blind = if needs_povm {
        Some(helstrom_measurement(ensemble)?)
    } else {
        None
    };
    let flipped = match (&blind, protocols.contains(&Protocol::FlippedPovm)) {
        (Some(b), true) => Some(b.bloch_flipped()?),
        _ => None,
    };

    let rows: Vec<Result<Option<SweepRow>>> = grid
        .points()
        .into_par_iter()
        .map(|params| {
            let ch = match family.build(&params) {
                Ok(ch) => ch,
                Err(Error::Domain { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let dists = match max_order {
                Some(k) => superswitch_orders(&ch, k, limits.max_branches)?,
                None => Vec::new(),
            };
            let mut values = Vec::with_capacity(protocols.len());
            for p in protocols {
                let v = match p {
                    Protocol::Channel => channel_guessing(&ch, ensemble)?.value,
                    Protocol::Superswitch(k) => protocol_guessing(&dists[*k], ensemble)?.value,
                    Protocol::BlindPovm => {
                        guessing_with_povm(&ensemble.through(&ch)?, blind.as_ref().expect("built"))?.value
                    }
                    Protocol::FlippedPovm => {
                        guessing_with_povm(&ensemble.through(&ch)?, flipped.as_ref().expect("built"))?.value
                    }
                    Protocol::Multicopy(n) => multicopy_orthogonal_depolarization(params[0], *n)?,
                };
                values.push(v);
            }
            Ok(Some(SweepRow { params, values }))
        })
        .collect();

    let mut out = Vec::with_capacity(rows.len());
    let mut skipped = 0;
    for r in rows {
        match r? {
            Some(row) => out.push(row),
            None => skipped += 1,
        }
    }
    Ok(SweepTable {
        family: family.name().into(),
        parameter_names: grid.names(),
        columns: protocols.iter().map(|p| p.name()).collect(),
        rows: out,
        skipped,
    })
}

/// `P_g` of the superswitch of `e` at orders `0..=max_order`.
pub fn superswitch_sequence(e: &PauliChannel, max_order: usize, ensemble: &Ensemble) -> Result<Vec<f64>> {
    superswitch_sequence_with(e, max_order, ensemble, &EngineLimits::default())
}

pub fn superswitch_sequence_with(
    e: &PauliChannel,
    max_order: usize,
    ensemble: &Ensemble,
    limits: &EngineLimits,
) -> Result<Vec<f64>> {
    limits.check_order(e.dim(), max_order)?;
    superswitch_orders(e, max_order, limits.max_branches)?
        .iter()
        .map(|d| protocol_guessing(d, ensemble).map(|g| g.value))
        .collect()
}

/// Guessing of the mixture `α D⋆ + β D_{4/3} + γ Id` that a stationary
/// triple describes, with the optimal measurement per branch.
pub fn limiting_guessing(triple: Triple, ensemble: &Ensemble) -> Result<f64> {
    let residual = fixed_point_residual(triple);
    if residual.is_nan() || residual >= 1e-9 {
        return Err(Error::NotFixedPoint(residual));
    }
    let channels = [
        d_star(),
        depolarizing(4.0 / 3.0).expect("in range"),
        PauliChannel::identity(Dim::Two),
    ];
    let mut acc = 0.0;
    for (w, ch) in triple.iter().zip(channels) {
        if *w > 0.0 {
            acc += w * channel_guessing(&ch, ensemble)?.value;
        }
    }
    Ok(acc)
}

/// Protocols compared by region predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Contender {
    Channel,
    Switch,
    Ss1,
    Ss2,
}

impl Contender {
    fn index(self) -> usize {
        match self {
            Contender::Channel => 0,
            Contender::Switch => 1,
            Contender::Ss1 => 2,
            Contender::Ss2 => 3,
        }
    }

    /// Superswitch order needed to evaluate this contender.
    fn order(self) -> Option<usize> {
        match self {
            Contender::Channel => None,
            Contender::Switch => Some(0),
            Contender::Ss1 => Some(1),
            Contender::Ss2 => Some(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Contender::Channel => "channel",
            Contender::Switch => "switch",
            Contender::Ss1 => "ss1",
            Contender::Ss2 => "ss2",
        }
    }
}

impl FromStr for Contender {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "channel" => Ok(Contender::Channel),
            "switch" | "ss0" => Ok(Contender::Switch),
            "ss1" => Ok(Contender::Ss1),
            "ss2" => Ok(Contender::Ss2),
            other => Err(Error::InvalidArgument(format!(
                "unknown contender '{other}'; expected channel, switch, ss1 or ss2"
            ))),
        }
    }
}

/// Condition on the guessing values of a sampled channel.
#[derive(Clone, Debug, PartialEq)]
pub enum RegionPredicate {
    Never,
    /// `winner` beats every rival by more than [`DOMINANCE_MARGIN`].
    Dominates {
        winner: Contender,
        rivals: Vec<Contender>,
    },
}

impl RegionPredicate {
    /// Named predicates accepted by [`FromStr`], besides `winner>rival,…`.
    pub const PRESETS: [&'static str; 8] = [
        "never",
        "switch_gt_channel",
        "ss1_improvement",
        "ss2_improvement",
        "switch_dominates_all",
        "ss1_dominates_all",
        "ss2_dominates_all",
        "channel_dominates_all",
    ];

    pub fn dominates(winner: Contender, rivals: &[Contender]) -> Self {
        RegionPredicate::Dominates {
            winner,
            rivals: rivals.to_vec(),
        }
    }

    fn all_but(winner: Contender) -> Self {
        let rivals = [Contender::Channel, Contender::Switch, Contender::Ss1, Contender::Ss2]
            .into_iter()
            .filter(|c| *c != winner)
            .collect();
        RegionPredicate::Dominates { winner, rivals }
    }

    pub fn describe(&self) -> String {
        match self {
            RegionPredicate::Never => "never".into(),
            RegionPredicate::Dominates { winner, rivals } => format!(
                "{}>{}",
                winner.name(),
                rivals.iter().map(|r| r.name()).collect::<Vec<_>>().join(",")
            ),
        }
    }

    fn max_order(&self) -> Option<usize> {
        match self {
            RegionPredicate::Never => None,
            RegionPredicate::Dominates { winner, rivals } => {
                std::iter::once(winner).chain(rivals).filter_map(|c| c.order()).max()
            }
        }
    }

    fn holds(&self, values: &[f64; 4]) -> bool {
        match self {
            RegionPredicate::Never => false,
            RegionPredicate::Dominates { winner, rivals } => {
                let w = values[winner.index()];
                rivals.iter().all(|r| w > values[r.index()] + DOMINANCE_MARGIN)
            }
        }
    }
}

impl FromStr for RegionPredicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Contender::*;
        let t = s.trim().to_ascii_lowercase();
        Ok(match t.as_str() {
            "never" | "false" => RegionPredicate::Never,
            "switch_gt_channel" => RegionPredicate::dominates(Switch, &[Channel]),
            "ss1_improvement" => RegionPredicate::dominates(Ss1, &[Channel, Switch]),
            "ss2_improvement" => RegionPredicate::dominates(Ss2, &[Channel, Switch, Ss1]),
            "switch_dominates_all" => RegionPredicate::all_but(Switch),
            "ss1_dominates_all" => RegionPredicate::all_but(Ss1),
            "ss2_dominates_all" => RegionPredicate::all_but(Ss2),
            "channel_dominates_all" => RegionPredicate::all_but(Channel),
            _ => {
                let (w, r) = t.split_once('>').ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "unknown predicate '{s}'; use one of {} or winner>rival[,rival...]",
                        Self::PRESETS.join(", ")
                    ))
                })?;
                let winner: Contender = w.parse()?;
                let rivals = r.split(',').map(str::parse).collect::<Result<Vec<Contender>>>()?;
                if rivals.is_empty() || rivals.contains(&winner) {
                    return Err(Error::InvalidArgument(format!(
                        "predicate '{s}' compares a protocol with itself"
                    )));
                }
                RegionPredicate::Dominates { winner, rivals }
            }
        })
    }
}

/// Monte Carlo estimate of a region's volume inside the tetrahedron.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionEstimate {
    pub predicate: String,
    pub volume: f64,
    pub ratio_to_tetrahedron: f64,
    pub samples: usize,
    pub hits: usize,
    pub seed: u64,
    pub standard_error: f64,
    pub rng: String,
}

impl RegionEstimate {
    fn from_counts(predicate: &RegionPredicate, hits: usize, samples: usize, seed: u64) -> Self {
        let ratio = hits as f64 / samples as f64;
        Self {
            predicate: predicate.describe(),
            volume: ratio * TETRAHEDRON_VOLUME,
            ratio_to_tetrahedron: ratio,
            samples,
            hits,
            seed,
            standard_error: (ratio * (1.0 - ratio) / samples as f64).sqrt() * TETRAHEDRON_VOLUME,
            rng: RNG_NAME.into(),
        }
    }
}

/// Uniform points `(p₁, p₂, p₃)` of the tetrahedron for one batch, by
/// rejection from the unit cube.
fn batch_points(seed: u64, batch: usize, count: usize) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: [f64; 3] = [rng.random(), rng.random(), rng.random()];
        if p[0] + p[1] + p[2] <= 1.0 {
            out.push(p);
        }
    }
    out
}

/// Guessing values `[channel, switch, ss1, ss2]` of the orthogonal pair
/// after the channel `[1 − Σp, p₁, p₂, p₃]`; entries above `max_order` are
/// left at zero.
pub fn contender_values(p: [f64; 3], max_order: Option<usize>, ensemble: &Ensemble) -> Result<[f64; 4]> {
    let ch = PauliChannel::new(Dim::Two, &[(1.0 - p[0] - p[1] - p[2]).max(0.0), p[0], p[1], p[2]])?;
    let mut out = [0.0; 4];
    out[0] = channel_guessing(&ch, ensemble)?.value;
    if let Some(k) = max_order {
        for (order, dist) in superswitch_orders(&ch, k, DEFAULT_MAX_BRANCHES)?.iter().enumerate() {
            out[order + 1] = protocol_guessing(dist, ensemble)?.value;
        }
    }
    Ok(out)
}

fn batches(samples: usize) -> Vec<(usize, usize)> {
    let n = samples.div_ceil(BATCH_SIZE);
    (0..n).map(|b| (b, BATCH_SIZE.min(samples - b * BATCH_SIZE))).collect()
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    Ok(())
}

/// Estimates several regions from one shared sample set. `samples` counts
/// accepted tetrahedron points; batches of [`BATCH_SIZE`] use independent
/// streams and are reduced in batch order.
pub fn region_volumes(predicates: &[RegionPredicate], samples: usize, seed: u64) -> Result<Vec<RegionEstimate>> {
    check_samples(samples)?;
    let ensemble = Ensemble::orthogonal_qubit_pair();
    let max_order = predicates.iter().filter_map(|p| p.max_order()).max();
    let counts: Vec<Result<Vec<usize>>> = batches(samples)
        .into_par_iter()
        .map(|(b, n)| {
            let mut hits = vec![0usize; predicates.len()];
            if predicates.iter().all(|p| *p == RegionPredicate::Never) {
                return Ok(hits);
            }
            for p in batch_points(seed, b, n) {
                let v = contender_values(p, max_order, &ensemble)?;
                for (h, pred) in hits.iter_mut().zip(predicates) {
                    if pred.holds(&v) {
                        *h += 1;
                    }
                }
            }
            Ok(hits)
        })
        .collect();
    let mut total = vec![0usize; predicates.len()];
    for c in counts {
        for (t, h) in total.iter_mut().zip(c?) {
            *t += h;
        }
    }
    Ok(predicates
        .iter()
        .zip(total)
        .map(|(p, h)| RegionEstimate::from_counts(p, h, samples, seed))
        .collect())
}

pub fn region_volume(predicate: &RegionPredicate, samples: usize, seed: u64) -> Result<RegionEstimate> {
    Ok(region_volumes(std::slice::from_ref(predicate), samples, seed)?.remove(0))
}

/// The sampled points satisfying `predicate`, in sampling order.
pub fn region_points(predicate: &RegionPredicate, samples: usize, seed: u64) -> Result<Vec<[f64; 3]>> {
    check_samples(samples)?;
    let ensemble = Ensemble::orthogonal_qubit_pair();
    let max_order = predicate.max_order();
    let parts: Vec<Result<Vec<[f64; 3]>>> = batches(samples)
        .into_par_iter()
        .map(|(b, n)| {
            let mut out = Vec::new();
            if *predicate == RegionPredicate::Never {
                return Ok(out);
            }
            for p in batch_points(seed, b, n) {
                if predicate.holds(&contender_values(p, max_order, &ensemble)?) {
                    out.push(p);
                }
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Protocol guessing of a whole distribution list, one value per entry.
pub fn guessing_per_order(dists: &[BranchDistribution], ensemble: &Ensemble) -> Result<Vec<f64>> {
    dists
        .iter()
        .map(|d| protocol_guessing(d, ensemble).map(|g| g.value))
        .collect()
}

/// Formats `x` with at most 12 significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float");
    let a = rounded.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("valid float")
}
