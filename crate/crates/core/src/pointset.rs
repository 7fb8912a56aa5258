//! Vertex sets: uniform squares, regular grids, Gaussian city mixtures and the
//! composite France model.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::derive_seed;

/// Spread used for a city when its config entry does not give one.
pub const DEFAULT_CITY_STDDEV: f64 = 0.25;

const MAX_RESAMPLE_ATTEMPTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        distance(*self, *other)
    }
}

/// Euclidean distance.
pub fn distance(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// An ordered, immutable set of points inside a `width × height` box.
/// Vertex `i` of every graph built on the set is `points()[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    bbox: (f64, f64),
    label: String,
}

impl PointSet {
    /// Builds a point set, checking that every point is finite and inside the box.
    pub fn new(points: Vec<Point>, bbox: (f64, f64), label: impl Into<String>) -> Result<Self> {
        let (w, h) = bbox;
        if !(w > 0.0 && h > 0.0 && w.is_finite() && h.is_finite()) {
            return Err(Error::invalid(format!("bounding box must be positive, got {w} x {h}")));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(Error::invalid(format!("point {i} has non-finite coordinates")));
            }
            if p.x < 0.0 || p.x > w || p.y < 0.0 || p.y > h {
                return Err(Error::invalid(format!(
                    "point {i} ({}, {}) lies outside the {w} x {h} box",
                    p.x, p.y
                )));
            }
        }
        Ok(PointSet { points, bbox, label: label.into() })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bbox(&self) -> (f64, f64) {
        self.bbox
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn diagonal(&self) -> f64 {
        self.bbox.0.hypot(self.bbox.1)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(self.points[i], self.points[j])
    }

    /// Index of the point closest to `target`; lowest index wins ties.
    pub fn nearest(&self, target: Point) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in self.points.iter().enumerate() {
            let d = distance(*p, target);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Concatenates two sets sharing the same box; `self` keeps the low indices.
    pub fn concat(mut self, other: PointSet, label: impl Into<String>) -> Result<Self> {
        if self.bbox != other.bbox {
            return Err(Error::invalid("cannot concatenate point sets with different boxes"));
        }
        self.points.extend(other.points);
        self.label = label.into();
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CitySpec {
    pub name: String,
    pub center: Point,
    pub weight: f64,
    pub stddev: f64,
}

impl CitySpec {
    pub fn new(name: impl Into<String>, center: Point, weight: f64, stddev: f64) -> Result<Self> {
        let city = CitySpec { name: name.into(), center, weight, stddev };
        city.validate()?;
        Ok(city)
    }

    fn validate(&self) -> Result<()> {
        if !(self.weight >= 0.0 && self.weight.is_finite()) {
            return Err(Error::Config(format!("city {}: weight must be >= 0", self.name)));
        }
        if !(self.stddev > 0.0 && self.stddev.is_finite()) {
            return Err(Error::Config(format!("city {}: stddev must be > 0", self.name)));
        }
        if !(self.center.x.is_finite() && self.center.y.is_finite()) {
            return Err(Error::Config(format!("city {}: center must be finite", self.name)));
        }
        Ok(())
    }
}

#[derive(Deserialize, Serialize)]
struct CityFile {
    city: Vec<CityEntry>,
}

#[derive(Deserialize, Serialize)]
struct CityEntry {
    name: String,
    cx: f64,
    cy: f64,
    weight: f64,
    #[serde(default)]
    stddev: Option<f64>,
}

/// Parses a city list written as TOML `[[city]]` tables with keys
/// `name`, `cx`, `cy`, `weight` and optional `stddev`.
pub fn parse_cities(text: &str) -> Result<Vec<CitySpec>> {
    let file: CityFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    file.city
        .into_iter()
        .map(|c| {
            CitySpec::new(
                c.name,
                Point::new(c.cx, c.cy),
                c.weight,
                c.stddev.unwrap_or(DEFAULT_CITY_STDDEV),
            )
            .map_err(|e| match e {
                Error::InvalidArgument(m) => Error::Config(m),
                other => other,
            })
        })
        .collect()
}

pub fn load_cities(path: &Path) -> Result<Vec<CitySpec>> {
    let text = std::fs::read_to_string(path)?;
    parse_cities(&text)
}

pub fn cities_to_toml(cities: &[CitySpec]) -> String {
    let file = CityFile {
        city: cities
            .iter()
            .map(|c| CityEntry {
                name: c.name.clone(),
                cx: c.center.x,
                cy: c.center.y,
                weight: c.weight,
                stddev: Some(c.stddev),
            })
            .collect(),
    };
    toml::to_string(&file).expect("city list serializes")
}

/// `n` i.i.d. uniform points on `[0, width] × [0, height]`.
pub fn sample_uniform(n: usize, width: f64, height: f64, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("sample_uniform needs n >= 1"));
    }
    if !(width > 0.0 && height > 0.0) {
        return Err(Error::invalid("sample_uniform needs positive width and height"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| Point::new(rng.random::<f64>() * width, rng.random::<f64>() * height))
        .collect();
    PointSet::new(points, (width, height), "uniform")
}

/// Regular `nx × ny` mesh with cell-centred points, so the spacing is
/// exactly `width / nx` horizontally and `height / ny` vertically.
/// Points are ordered row by row (x fastest).
pub fn make_grid(nx: usize, ny: usize, width: f64, height: f64) -> Result<PointSet> {
    if nx < 2 || ny < 2 {
        return Err(Error::invalid("make_grid needs nx, ny >= 2"));
    }
    if !(width > 0.0 && height > 0.0) {
        return Err(Error::invalid("make_grid needs positive width and height"));
    }
    let dx = width / nx as f64;
    let dy = height / ny as f64;
    let mut points = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            points.push(Point::new((i as f64 + 0.5) * dx, (j as f64 + 0.5) * dy));
        }
    }
    PointSet::new(points, (width, height), "grid")
}

/// Splits `n` proportionally to `weights` by the largest-remainder method.
/// Remainder ties go to the earlier entry.
pub fn largest_remainder(weights: &[f64], n: usize) -> Result<Vec<usize>> {
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(Error::invalid("weights must be finite and nonnegative"));
    }
    if total <= 0.0 {
        return Err(Error::invalid("at least one weight must be positive"));
    }
    let quotas: Vec<f64> = weights.iter().map(|w| n as f64 * w / total).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    // Float rounding can only push the floor sum off by a unit at the extremes.
    let mut remaining = n.saturating_sub(assigned);
    let mut order: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if remaining == 0 {
            break;
        }
        counts[i] += 1;
        remaining -= 1;
    }
    let mut excess = counts.iter().sum::<usize>().saturating_sub(n);
    for c in counts.iter_mut().rev() {
        while excess > 0 && *c > 0 {
            *c -= 1;
            excess -= 1;
        }
    }
    Ok(counts)
}

/// `n` points drawn from a mixture of isotropic normals, one per city, with
/// per-city counts fixed by [`largest_remainder`]. Draws outside the box are
/// rejected and redrawn. Each city uses its own stream derived from `seed`.
pub fn sample_city_mixture(
    cities: &[CitySpec],
    n: usize,
    bbox: (f64, f64),
    seed: u64,
) -> Result<PointSet> {
    if cities.is_empty() {
        return Err(Error::invalid("need at least one city"));
    }
    for c in cities {
        c.validate()?;
    }
    let weights: Vec<f64> = cities.iter().map(|c| c.weight).collect();
    let counts = largest_remainder(&weights, n)?;
    let (w, h) = bbox;
    let mut points = Vec::with_capacity(n);
    for (ci, (city, &count)) in cities.iter().zip(&counts).enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[ci as u64]));
        let normal = Normal::new(0.0, city.stddev).expect("validated stddev");
        for _ in 0..count {
            let mut attempts = 0;
            loop {
                let p = Point::new(
                    city.center.x + normal.sample(&mut rng),
                    city.center.y + normal.sample(&mut rng),
                );
                if (0.0..=w).contains(&p.x) && (0.0..=h).contains(&p.y) {
                    points.push(p);
                    break;
                }
                attempts += 1;
                if attempts >= MAX_RESAMPLE_ATTEMPTS {
                    return Err(Error::Config(format!(
                        "city {} is too far outside the {w} x {h} box to sample",
                        city.name
                    )));
                }
            }
        }
    }
    PointSet::new(points, bbox, "cities")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FranceParams {
    pub grid_nx: usize,
    pub grid_ny: usize,
    pub total_n: usize,
    pub bbox: (f64, f64),
}

impl Default for FranceParams {
    fn default() -> Self {
        FranceParams { grid_nx: 60, grid_ny: 60, total_n: 6000, bbox: (8.0, 8.0) }
    }
}

/// Grid points first, then `total_n - grid_nx * grid_ny` city points.
pub fn france_model(cities: &[CitySpec], params: &FranceParams, seed: u64) -> Result<PointSet> {
    let grid_size = params.grid_nx * params.grid_ny;
    if params.total_n <= grid_size {
        return Err(Error::invalid(format!(
            "total_n = {} must exceed the grid size {grid_size}",
            params.total_n
        )));
    }
    let (w, h) = params.bbox;
    let grid = make_grid(params.grid_nx, params.grid_ny, w, h)?;
    let cities = sample_city_mixture(cities, params.total_n - grid_size, params.bbox, seed)?;
    grid.concat(cities, "france")
}
