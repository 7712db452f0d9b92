//! `superswitch`: CSV/JSON artifacts for guessing curves, region volumes,
//! superswitch sequences and the closed-form cross-checks.

mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};
use superswitch_core::analysis::{region_points, superswitch_sequence_with};
use superswitch_core::verify;
use superswitch_core::{
    region_volumes, sweep, Axis, ChannelFamily, Dim, EngineLimits, Ensemble, Error, ParameterGrid, PauliChannel,
    Protocol, RegionPredicate,
};

use output::{csv_text, emit, json_text, num, rounded, table_csv, table_json, Format};

#[derive(Parser)]
#[command(
    name = "superswitch",
    version,
    about = "State discrimination through switched Pauli channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Guessing probability over a parameter grid.
    Curve(CurveArgs),
    /// Monte Carlo volume of a region of qubit Pauli channels.
    Region(RegionArgs),
    /// Guessing probability per superswitch order for one channel.
    Sequence(SequenceArgs),
    /// Switch against n parallel copies of the depolarized orthogonal pair.
    Multicopy(MulticopyArgs),
    /// Runs the closed-form cross-checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Limits {
    /// Largest branch set a superswitch order may generate.
    #[arg(long, default_value_t = superswitch_core::switch::DEFAULT_MAX_BRANCHES)]
    max_branches: usize,
    /// Overrides the per-dimension superswitch order cap.
    #[arg(long)]
    order_cap: Option<usize>,
}

impl Limits {
    fn engine(&self) -> EngineLimits {
        EngineLimits {
            max_branches: self.max_branches,
            order_cap: self.order_cap,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Output format; csv by default except for region.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    /// depolarizing2, bitphase, q, qtilde, pauli, depolarizing4, delta or w.
    #[arg(long)]
    family: String,
    /// Superswitch orders, e.g. "0,1,2" or "0..2"; 0 is the quantum switch.
    #[arg(long, default_value = "0")]
    orders: String,
    /// name:start:stop:points, one per family parameter.
    #[arg(long = "grid", required = true)]
    grids: Vec<String>,
    /// pair, bb84, omega1..omega3 or bloch:[q@]x,y,z;...
    #[arg(long)]
    ensemble: Option<String>,
    /// Extra columns placed before the orders: channel, blind_povm,
    /// flipped_povm, multicopyN, or none.
    #[arg(long, default_value = "channel")]
    extra: String,
    #[command(flatten)]
    limits: Limits,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RegionArgs {
    /// Preset name or winner>rival[,rival...]; repeat for several regions.
    #[arg(long = "predicate", required = true)]
    predicates: Vec<String>,
    /// Accepted tetrahedron samples.
    #[arg(long, default_value_t = 2_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Writes the sampled points inside the first region as CSV.
    #[arg(long)]
    points_out: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SequenceArgs {
    /// Channel family, or omit and give --vector.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    p3: Option<f64>,
    /// Explicit Pauli vector with 4 or 16 entries.
    #[arg(long, conflicts_with = "family")]
    vector: Option<String>,
    #[arg(long, default_value = "0..2")]
    orders: String,
    #[arg(long)]
    ensemble: Option<String>,
    #[command(flatten)]
    limits: Limits,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MulticopyArgs {
    #[arg(long, default_value = "p:0:1.3333333333333333:200")]
    grid: String,
    /// Largest number of copies.
    #[arg(long, default_value_t = 10)]
    copies: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn default_ensemble(tag: Option<&str>, dim: Dim) -> Result<(Ensemble, String)> {
    let tag = match (tag, dim) {
        (Some(t), _) => t.to_string(),
        (None, Dim::Two) => "pair".into(),
        (None, Dim::Four) => "omega1".into(),
    };
    Ok((parse::ensemble(&tag)?, tag))
}

fn curve(a: &CurveArgs) -> Result<()> {
    let family: ChannelFamily = a.family.parse()?;
    let axes = a
        .grids
        .iter()
        .map(|g| g.parse::<Axis>())
        .collect::<Result<Vec<_>, _>>()?;
    let grid = ParameterGrid::new(axes)?;
    let (ensemble, tag) = default_ensemble(a.ensemble.as_deref(), family.dim())?;
    let mut protocols: Vec<Protocol> = Vec::new();
    if !a.extra.trim().eq_ignore_ascii_case("none") {
        for t in a.extra.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let p: Protocol = t.parse()?;
            if matches!(p, Protocol::Superswitch(_)) {
                bail!("use --orders for superswitch columns");
            }
            protocols.push(p);
        }
    }
    protocols.extend(parse::orders(&a.orders)?.into_iter().map(Protocol::Superswitch));
    let table = sweep(&family, &protocols, &ensemble, &grid, &a.limits.engine())?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => table_csv(&table),
        Format::Json => json_text(&table_json(&table, &tag))?,
    };
    emit(&text, a.output.out.as_deref())
}

fn region(a: &RegionArgs) -> Result<()> {
    let preds = a
        .predicates
        .iter()
        .map(|p| p.parse::<RegionPredicate>())
        .collect::<Result<Vec<_>, _>>()?;
    let estimates = region_volumes(&preds, a.samples, a.seed)?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let v = if estimates.len() == 1 {
                rounded(&estimates[0])?
            } else {
                rounded(&estimates)?
            };
            json_text(&v)?
        }
        Format::Csv => {
            let header: Vec<String> = [
                "predicate",
                "volume",
                "ratio_to_tetrahedron",
                "standard_error",
                "hits",
                "samples",
                "seed",
            ]
            .map(String::from)
            .to_vec();
            let mut s = header.join(",");
            s.push('\n');
            for e in &estimates {
                let nums: Vec<String> = [e.volume, e.ratio_to_tetrahedron, e.standard_error]
                    .iter()
                    .map(|x| output::num_text(*x))
                    .collect();
                s.push_str(&format!(
                    "\"{}\",{},{},{},{}\n",
                    e.predicate,
                    nums.join(","),
                    e.hits,
                    e.samples,
                    e.seed
                ));
            }
            s
        }
    };
    emit(&text, a.output.out.as_deref())?;
    if let Some(path) = &a.points_out {
        let pts = region_points(&preds[0], a.samples, a.seed)?;
        let header = ["p1", "p2", "p3"].map(String::from);
        emit(&csv_text(&header, pts.iter().map(|p| p.to_vec())), Some(path))?;
    }
    Ok(())
}

/// Channel, family label and named parameter values.
type SequenceChannel = (PauliChannel, String, Vec<(String, f64)>);

fn sequence_channel(a: &SequenceArgs) -> Result<SequenceChannel> {
    if let Some(v) = &a.vector {
        let ch = parse::pauli_vector(v)?;
        let params = ch
            .probs()
            .iter()
            .enumerate()
            .map(|(k, x)| (format!("r{k}"), *x))
            .collect();
        return Ok((ch, "vector".into(), params));
    }
    let Some(name) = &a.family else {
        bail!("give --family or --vector");
    };
    let family: ChannelFamily = name.parse()?;
    let given = [
        ("p", a.p),
        ("q", a.q),
        ("s", a.s),
        ("p1", a.p1),
        ("p2", a.p2),
        ("p3", a.p3),
    ];
    let mut params = Vec::new();
    for n in family.param_names() {
        let v = given.iter().find(|(g, _)| g == n).and_then(|(_, v)| *v);
        match v {
            Some(v) => params.push((n.to_string(), v)),
            None => bail!("family {} needs --{n}", family.name()),
        }
    }
    if let Some((g, _)) = given
        .iter()
        .find(|(g, v)| v.is_some() && !family.param_names().contains(g))
    {
        bail!("family {} does not take --{g}", family.name());
    }
    let values: Vec<f64> = params.iter().map(|p| p.1).collect();
    Ok((family.build(&values)?, family.name().into(), params))
}

fn sequence(a: &SequenceArgs) -> Result<()> {
    let (ch, family, params) = sequence_channel(a)?;
    let (ensemble, tag) = default_ensemble(a.ensemble.as_deref(), ch.dim())?;
    let orders = parse::orders(&a.orders)?;
    let max = *orders.last().expect("nonempty");
    let all = superswitch_sequence_with(&ch, max, &ensemble, &a.limits.engine())?;
    let values: Vec<f64> = orders.iter().map(|k| all[*k]).collect();
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_text(
            &["order".into(), "value".into()],
            orders.iter().zip(&values).map(|(k, v)| vec![*k as f64, *v]),
        ),
        Format::Json => {
            let mut p = Map::new();
            for (k, v) in &params {
                p.insert(k.clone(), num(*v));
            }
            let mut m = Map::new();
            m.insert("family".into(), Value::String(family));
            m.insert("parameters".into(), Value::Object(p));
            m.insert("ensemble".into(), Value::String(tag));
            m.insert("orders".into(), serde_json::json!(orders));
            m.insert("values".into(), Value::Array(values.iter().map(|v| num(*v)).collect()));
            json_text(&Value::Object(m))?
        }
    };
    emit(&text, a.output.out.as_deref())
}

fn multicopy(a: &MulticopyArgs) -> Result<()> {
    if a.copies == 0 {
        bail!("--copies must be at least 1");
    }
    let grid = ParameterGrid::single(a.grid.parse()?);
    let mut protocols = vec![Protocol::Superswitch(0)];
    protocols.extend((1..=a.copies).map(Protocol::Multicopy));
    let table = sweep(
        &ChannelFamily::Depolarizing2,
        &protocols,
        &Ensemble::orthogonal_qubit_pair(),
        &grid,
        &EngineLimits::default(),
    )?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => table_csv(&table),
        Format::Json => json_text(&table_json(&table, "pair"))?,
    };
    emit(&text, a.output.out.as_deref())
}

/// Returns whether every check passed.
fn run_verify(a: &VerifyArgs) -> Result<bool> {
    let checks = verify::run_all()?;
    let passed = checks.iter().all(|c| c.passed);
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("check,status,max_error,tolerance\n");
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!(
                    "{},{status},{},{}\n",
                    c.name,
                    output::num_text(c.max_error),
                    output::num_text(c.tolerance)
                ));
            }
            s
        }
        Format::Json => json_text(&rounded(&checks)?)?,
    };
    emit(&text, None)?;
    Ok(passed)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let resource = err
        .chain()
        .any(|e| e.downcast_ref::<Error>().is_some_and(Error::is_resource));
    if resource {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Curve(a) => curve(a).map(|_| true),
        Command::Region(a) => region(a).map(|_| true),
        Command::Sequence(a) => sequence(a).map(|_| true),
        Command::Multicopy(a) => multicopy(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
