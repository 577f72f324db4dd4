// SPDX-License-Identifier: Apache-2.0

//! `start:stop[:step]` grids with inclusive endpoints.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A grid as written in a flag or config file: the text form or an
/// explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Text(String),
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let g = GridSpec::Text(s.trim().to_string());
        g.values()?;
        Ok(g)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::Text(s) => write!(f, "{s}"),
            GridSpec::List(v) => write!(f, "{v:?}"),
        }
    }
}

fn number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("'{s}' is not a finite number"))
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            GridSpec::List(v) => {
                if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                    return Err("grid list must be non-empty and finite".into());
                }
                Ok(v.clone())
            }
            GridSpec::Text(s) => parse_grid(s),
        }
    }

    /// Values that must be non-negative integers (lengths, sites).
    pub fn integers(&self) -> Result<Vec<usize>, String> {
        self.values()?
            .into_iter()
            .map(|x| {
                if x >= 0.0 && x.fract() == 0.0 {
                    Ok(x as usize)
                } else {
                    Err(format!("grid value {x} is not a non-negative integer"))
                }
            })
            .collect()
    }
}

/// `a` → `[a]`; `a:b` → step 1; `a:b:s` → `a, a+s, …, b`. The stop value must
/// lie on the grid. Comma-separated segments are concatenated.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let mut out = vec![];
    for seg in s.split(',') {
        out.extend(parse_segment(seg)?);
    }
    Ok(out)
}

fn parse_segment(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let (start, stop, step) = match parts.as_slice() {
        [a] => return Ok(vec![number(a)?]),
        [a, b] => (number(a)?, number(b)?, 1.0),
        [a, b, c] => (number(a)?, number(b)?, number(c)?),
        _ => return Err(format!("grid '{s}' is not start:stop[:step]")),
    };
    if step <= 0.0 {
        return Err(format!("grid '{s}': step must be positive"));
    }
    if stop < start {
        return Err(format!("grid '{s}': stop below start"));
    }
    let span = (stop - start) / step;
    let n = span.round();
    if (span - n).abs() > 1e-6 * n.max(1.0) {
        return Err(format!("grid '{s}': stop is not start + k*step"));
    }
    let n = n as usize;
    Ok((0..=n)
        .map(|i| if i == n { stop } else { start + step * i as f64 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_endpoints() {
        assert_eq!(parse_grid("11:15").unwrap(), vec![11.0, 12.0, 13.0, 14.0, 15.0]);
        let g = parse_grid("0:1.5:0.1").unwrap();
        assert_eq!(g.len(), 16);
        assert_eq!(g[15], 1.5);
        assert!((g[3] - 0.3).abs() < 1e-15);
        assert_eq!(parse_grid("0.66").unwrap(), vec![0.66]);
        assert_eq!(parse_grid("0.66,2:4").unwrap(), vec![0.66, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        for s in ["", "1,", "1:2:3:4", "0:1:0", "2:1", "0:1:0.3", "a:b", "0:inf"] {
            assert!(parse_grid(s).is_err(), "{s}");
        }
    }

    #[test]
    fn integer_grids() {
        assert_eq!(GridSpec::Text("11:21:2".into()).integers().unwrap(), vec![11, 13, 15, 17, 19, 21]);
        assert!(GridSpec::Text("1:2:0.5".into()).integers().is_err());
        assert_eq!(GridSpec::List(vec![21.0, 51.0]).integers().unwrap(), vec![21, 51]);
    }
}
