use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The weight `R` in `R(N(c)/X)`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub enum SmoothWeight {
    /// `exp(−1/(t−1) − 1/(2−t))` on `(1, 2)`.
    #[default]
    BumpDefault,
    /// Indicator of `t ≤ 1`, i.e. `N(c) ≤ X`.
    Sharp,
    /// Piecewise-linear interpolation of `(t, R(t))` samples, zero outside.
    Tabulated(Vec<(f64, f64)>),
}

impl SmoothWeight {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            SmoothWeight::BumpDefault => {
                if t <= 1.0 || t >= 2.0 {
                    0.0
                } else {
                    (-1.0 / (t - 1.0) - 1.0 / (2.0 - t)).exp()
                }
            }
            SmoothWeight::Sharp => {
                if t > 0.0 && t <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            SmoothWeight::Tabulated(s) => {
                let Some(j) = s.windows(2).position(|w| w[0].0 <= t && t <= w[1].0) else {
                    return 0.0;
                };
                let ((t0, y0), (t1, y1)) = (s[j], s[j + 1]);
                if t1 == t0 {
                    y0
                } else {
                    y0 + (y1 - y0) * (t - t0) / (t1 - t0)
                }
            }
        }
    }

    /// Closed interval containing the support of `R`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            SmoothWeight::BumpDefault => (1.0, 2.0),
            SmoothWeight::Sharp => (0.0, 1.0),
            SmoothWeight::Tabulated(s) => match (s.first(), s.last()) {
                (Some(a), Some(b)) => (a.0, b.0),
                _ => (0.0, 0.0),
            },
        }
    }

    /// Integer norm range `[lo, hi]` on which `R(n/x)` can be nonzero.
    pub fn norm_range(&self, x: f64) -> (u128, u128) {
        let (a, b) = self.support();
        let lo = (a * x).floor().max(1.0) as u128;
        let hi = (b * x).ceil().max(0.0) as u128;
        (lo, hi)
    }
}

impl fmt::Display for SmoothWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothWeight::BumpDefault => f.write_str("bump"),
            SmoothWeight::Sharp => f.write_str("sharp"),
            SmoothWeight::Tabulated(s) => write!(f, "tabulated({} samples)", s.len()),
        }
    }
}

impl FromStr for SmoothWeight {
    type Err = String;

    /// `bump`, `sharp`, or `table:t0=y0,t1=y1,...` with increasing `t`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "bump" | "default" => Ok(SmoothWeight::BumpDefault),
            "sharp" => Ok(SmoothWeight::Sharp),
            other => {
                let body = other.strip_prefix("table:").ok_or_else(|| format!("unknown weight '{other}'"))?;
                let mut pts = Vec::new();
                for item in body.split(',') {
                    let (t, y) = item.split_once('=').ok_or_else(|| format!("bad sample '{item}'"))?;
                    let t: f64 = t.trim().parse().map_err(|e| format!("bad t in '{item}': {e}"))?;
                    let y: f64 = y.trim().parse().map_err(|e| format!("bad value in '{item}': {e}"))?;
                    pts.push((t, y));
                }
                if pts.len() < 2 || pts.windows(2).any(|w| w[1].0 < w[0].0) {
                    return Err("tabulated weight needs at least two increasing samples".into());
                }
                Ok(SmoothWeight::Tabulated(pts))
            }
        }
    }
}
