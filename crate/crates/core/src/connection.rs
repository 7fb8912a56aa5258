//! Piecewise-constant connection functions.
//!
//! Band `k` covers distances in `(r_{k-1}, r_k]` with `r_0 = 0`; distance 0
//! falls in the first band and anything past the last radius gets
//! probability 0.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subintervals of the midpoint rule used by [`discretize`].
pub const MIDPOINT_SUBINTERVALS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BandList", into = "BandList")]
pub struct ConnectionFunction {
    radii: Vec<f64>,
    probs: Vec<f64>,
}

impl ConnectionFunction {
    pub fn new(radii: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.len() != probs.len() {
            return Err(Error::invalid(format!(
                "connection function needs matching non-empty radii and probabilities ({} vs {})",
                radii.len(),
                probs.len()
            )));
        }
        if !(radii[0] > 0.0) || radii.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("radii must be positive and strictly increasing"));
        }
        if radii.iter().any(|r| !r.is_finite()) {
            return Err(Error::invalid("radii must be finite"));
        }
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::invalid("probabilities must lie in [0, 1]"));
        }
        Ok(ConnectionFunction { radii, probs })
    }

    pub fn from_bands(bands: &[(f64, f64)]) -> Result<Self> {
        let (radii, probs) = bands.iter().copied().unzip();
        Self::new(radii, probs)
    }

    /// Single band `[0, r]` with probability `p`.
    pub fn threshold(r: f64, p: f64) -> Result<Self> {
        Self::new(vec![r], vec![p])
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_bands(&self) -> usize {
        self.radii.len()
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    /// `(r_lo, r_hi, p)` for band `k` (0-based).
    pub fn band(&self, k: usize) -> (f64, f64, f64) {
        let lo = if k == 0 { 0.0 } else { self.radii[k - 1] };
        (lo, self.radii[k], self.probs[k])
    }

    /// 0-based band containing `d`, or `None` beyond the support.
    pub fn band_index(&self, d: f64) -> Option<usize> {
        let k = self.radii.partition_point(|&r| r < d);
        (k < self.radii.len()).then_some(k)
    }

    pub fn eval(&self, d: f64) -> Result<f64> {
        if !(d >= 0.0) {
            return Err(Error::invalid(format!("distance must be >= 0, got {d}")));
        }
        Ok(self.band_index(d).map_or(0.0, |k| self.probs[k]))
    }

    pub fn preset(name: &str) -> Result<Self> {
        name.parse::<Preset>().map(Preset::function)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_toml(&text)
    }

    /// Parses `bands = [[r, p], ...]`.
    pub fn parse_toml(text: &str) -> Result<Self> {
        let list: BandList = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::try_from(list).map_err(Error::Config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&BandList::from(self.clone())).expect("band list serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct BandList {
    bands: Vec<(f64, f64)>,
}

impl TryFrom<BandList> for ConnectionFunction {
    type Error = String;
    fn try_from(list: BandList) -> std::result::Result<Self, String> {
        ConnectionFunction::from_bands(&list.bands).map_err(|e| e.to_string())
    }
}

impl From<ConnectionFunction> for BandList {
    fn from(cf: ConnectionFunction) -> Self {
        BandList { bands: cf.radii.into_iter().zip(cf.probs).collect() }
    }
}

/// The four France scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Preset {
    /// Unrestricted travel.
    U,
    /// Soft restrictions: all travel open at limited capacity.
    S,
    /// Hard lockdown: long-distance travel mostly cancelled.
    C,
    /// Local-only: no travel beyond 0.3.
    I,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::U, Preset::S, Preset::C, Preset::I];

    pub fn bands(self) -> &'static [(f64, f64)] {
        match self {
            Preset::U => &[(0.15, 1.0), (0.3, 0.05), (1.0, 0.03), (3.0, 0.02), (10.0, 0.01)],
            Preset::S => &[(0.15, 1.0), (0.3, 0.1), (1.0, 0.05), (3.0, 0.01), (10.0, 0.005)],
            Preset::C => &[(0.15, 1.0), (0.3, 0.05), (1.0, 0.003), (3.0, 0.002), (10.0, 0.001)],
            Preset::I => &[(0.3, 1.0)],
        }
    }

    pub fn function(self) -> ConnectionFunction {
        ConnectionFunction::from_bands(self.bands()).expect("preset bands are valid")
    }

    /// True when every band probability is 0 or 1, so the graph is not random.
    pub fn is_deterministic(self) -> bool {
        self.bands().iter().all(|&(_, p)| p == 0.0 || p == 1.0)
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::U => "U",
            Preset::S => "S",
            Preset::C => "C",
            Preset::I => "I",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" | "u" => Ok(Preset::U),
            "S" | "s" => Ok(Preset::S),
            "C" | "c" => Ok(Preset::C),
            "I" | "i" => Ok(Preset::I),
            other => Err(Error::invalid(format!("unknown preset {other:?} (expected U, S, C or I)"))),
        }
    }
}

/// Closed-form distance → probability curves that can be discretized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContinuousForm {
    Constant { value: f64 },
    /// `intercept + slope * r`
    Affine { intercept: f64, slope: f64 },
    /// `exp(-rate * r)`
    Exponential { rate: f64 },
    /// `exp(-(r - mean)^2 / (2 var)) / sqrt(2 pi var)`
    Gaussian { mean: f64, variance: f64 },
}

impl ContinuousForm {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            ContinuousForm::Constant { value } => value,
            ContinuousForm::Affine { intercept, slope } => intercept + slope * r,
            ContinuousForm::Exponential { rate } => (-rate * r).exp(),
            ContinuousForm::Gaussian { mean, variance } => {
                (-(r - mean).powi(2) / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
            }
        }
    }
}

/// Step-function approximation of `f`: band `k` covers `[kh, (k+1)h)` and
/// takes the mean value of `f` over it (midpoint rule with
/// [`MIDPOINT_SUBINTERVALS`] pieces). Bands continue until `r_max` is covered.
pub fn discretize<F: Fn(f64) -> f64>(f: F, h: f64, r_max: f64) -> Result<ConnectionFunction> {
    if !(h > 0.0) {
        return Err(Error::invalid("step size h must be positive"));
    }
    if !(r_max > 0.0) {
        return Err(Error::invalid("r_max must be positive"));
    }
    let m = ((r_max / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let sub = h / MIDPOINT_SUBINTERVALS as f64;
    let mut radii = Vec::with_capacity(m);
    let mut probs = Vec::with_capacity(m);
    for k in 0..m {
        let a = k as f64 * h;
        let mut sum = 0.0;
        for s in 0..MIDPOINT_SUBINTERVALS {
            let v = f(a + (s as f64 + 0.5) * sub);
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(Error::invalid(format!("function value {v} at r = {} is outside [0, 1]", a + (s as f64 + 0.5) * sub)));
            }
            sum += v;
        }
        radii.push((k + 1) as f64 * h);
        probs.push((sum / MIDPOINT_SUBINTERVALS as f64).clamp(0.0, 1.0));
    }
    ConnectionFunction::new(radii, probs)
}

/// Diagonal of the 8 × 8 square used by the uniform experiments.
pub fn square_diagonal() -> f64 {
    8.0 * 2f64.sqrt()
}

/// The five curves of the uniform-square experiment, in order: constant 0.5,
/// constant 1, affine `1 - r / (8√2)`, `exp(-r)` and a Gaussian bump centred
/// at √32.
pub fn uniform_square_forms() -> [ContinuousForm; 5] {
    let diag = square_diagonal();
    [
        ContinuousForm::Constant { value: 0.5 },
        ContinuousForm::Constant { value: 1.0 },
        ContinuousForm::Affine { intercept: 1.0, slope: -1.0 / diag },
        ContinuousForm::Exponential { rate: 1.0 },
        ContinuousForm::Gaussian { mean: 32f64.sqrt(), variance: 8.0 },
    ]
}

/// [`uniform_square_forms`] discretized with 100 bands over `[0, 8√2]`.
pub fn section51_functions() -> [ConnectionFunction; 5] {
    let diag = square_diagonal();
    let h = diag / 100.0;
    uniform_square_forms().map(|form| discretize(|r| form.eval(r), h, diag).expect("valid curve"))
}
