//! Flag value parsers.

use anyhow::{bail, Context, Result};
use superswitch_core::dim4::NamedEnsemble;
use superswitch_core::{BlochVector, DensityMatrix, Dim, Ensemble, PauliChannel};

/// Parses `"0,1,2"`, `"0..2"` or a mix such as `"0..2,4"`.
pub fn orders(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().with_context(|| format!("bad order range '{part}'"))?;
            let b: usize = b
                .trim()
                .trim_start_matches('=')
                .parse()
                .with_context(|| format!("bad order range '{part}'"))?;
            if b < a {
                bail!("order range '{part}' is empty");
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().with_context(|| format!("bad order '{part}'"))?);
        }
    }
    if out.is_empty() {
        bail!("no orders given");
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Comma-separated reals.
pub fn reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("'{t}' is not a number"))
        })
        .collect()
}

/// A Pauli vector of length 4 or 16.
pub fn pauli_vector(s: &str) -> Result<PauliChannel> {
    let v = reals(s)?;
    let dim = match v.len() {
        4 => Dim::Two,
        16 => Dim::Four,
        n => bail!("a Pauli vector has 4 or 16 entries, got {n}"),
    };
    Ok(PauliChannel::new(dim, &v)?)
}

/// Ensemble tags: `pair`, `bb84`, `omega1`..`omega3`, or
/// `bloch:[q@]x,y,z;[q@]x,y,z;...` with equal priors when none are given.
pub fn ensemble(s: &str) -> Result<Ensemble> {
    let t = s.trim();
    match t.to_ascii_lowercase().as_str() {
        "pair" | "orthogonal" => return Ok(Ensemble::orthogonal_qubit_pair()),
        "bb84" => return Ok(Ensemble::bb84()),
        _ => {}
    }
    if let Some(rest) = t.strip_prefix("bloch:") {
        let mut priors = Vec::new();
        let mut states = Vec::new();
        for item in rest.split(';').map(str::trim).filter(|i| !i.is_empty()) {
            let (q, r) = match item.split_once('@') {
                Some((q, r)) => (
                    Some(
                        q.trim()
                            .parse::<f64>()
                            .with_context(|| format!("bad prior in '{item}'"))?,
                    ),
                    r,
                ),
                None => (None, item),
            };
            let r = reals(r)?;
            if r.len() != 3 {
                bail!("Bloch vector '{item}' needs three components");
            }
            priors.push(q);
            states.push(DensityMatrix::from_bloch(&BlochVector::new([r[0], r[1], r[2]])?));
        }
        let n = states.len();
        let priors: Vec<f64> = if priors.iter().all(Option::is_none) {
            vec![1.0 / n.max(1) as f64; n]
        } else if priors.iter().all(Option::is_some) {
            priors.into_iter().flatten().collect()
        } else {
            bail!("give a prior for every Bloch vector or for none");
        };
        return Ok(Ensemble::new(priors, states)?);
    }
    let named: NamedEnsemble = t.parse()?;
    Ok(named.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_lists() {
        assert_eq!(orders("0..2").unwrap(), vec![0, 1, 2]);
        assert_eq!(orders("3,0..1").unwrap(), vec![0, 1, 3]);
        assert_eq!(orders("0..=1").unwrap(), vec![0, 1]);
        assert!(orders("2..1").is_err());
        assert!(orders("").is_err());
    }

    #[test]
    fn ensembles() {
        assert_eq!(ensemble("pair").unwrap().len(), 2);
        assert_eq!(ensemble("bb84").unwrap().len(), 4);
        assert_eq!(ensemble("omega2").unwrap().dim(), Dim::Four);
        let e = ensemble("bloch:0.3@0,0,1;0.7@1,0,0").unwrap();
        assert_eq!(e.priors(), &[0.3, 0.7]);
        assert!(ensemble("bloch:0,0,1;0.5@1,0,0").is_err());
        assert!(ensemble("nonsense").is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(pauli_vector("0.7,0.1,0.1,0.1").unwrap().dim(), Dim::Two);
        assert!(pauli_vector("0.5,0.5").is_err());
    }
}
