//! Parameter grids: `start:step:stop` ranges or comma lists.

use anyhow::{bail, Context};

/// Parses `a:h:b` (inclusive, values `a + i h` rounded to the step's
/// decimals) or `v1,v2,...`.
pub fn parse_grid(s: &str) -> anyhow::Result<Vec<f64>> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("range `{s}` must look like start:step:stop");
        }
        let num = |t: &str| -> anyhow::Result<f64> {
            t.trim()
                .parse()
                .with_context(|| format!("bad number `{t}` in `{s}`"))
        };
        let (a, h, b) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(h > 0.0) || !(b >= a) {
            bail!("range `{s}` needs step > 0 and stop >= start");
        }
        let count = ((b - a) / h + 1e-9).floor() as usize + 1;
        if count > 10_000_000 {
            bail!("range `{s}` has too many points");
        }
        let plain = !parts.iter().any(|t| t.contains(['e', 'E']));
        let decimals = [parts[0], parts[1]]
            .iter()
            .map(|t| t.trim().split_once('.').map_or(0, |(_, f)| f.len()))
            .max()
            .unwrap_or(0);
        // Index-based values, snapped to the nearest decimal of the inputs'
        // precision so that `0:0.01:1` yields exactly `0.37` and so on.
        Ok((0..count)
            .map(|i| {
                let v = a + i as f64 * h;
                let v = if plain {
                    format!("{v:.decimals$}").parse().unwrap_or(v)
                } else {
                    v
                };
                v.min(b)
            })
            .collect())
    } else {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad number `{t}`"))
            })
            .collect::<anyhow::Result<Vec<_>>>()
            .and_then(|v| {
                if v.is_empty() {
                    bail!("empty grid `{s}`")
                } else {
                    Ok(v)
                }
            })
    }
}

/// Checks that every value lies in `[0, 1]`.
pub fn unit_grid(name: &str, s: &str) -> anyhow::Result<Vec<f64>> {
    let v = parse_grid(s)?;
    if let Some(x) = v.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        bail!("{name} value {x} outside [0, 1]");
    }
    Ok(v)
}

/// `a,b` pair.
pub fn parse_pair(s: &str) -> anyhow::Result<(f64, f64)> {
    let v = parse_grid(s)?;
    match v.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => bail!("expected `alpha,beta`, got `{s}`"),
    }
}
