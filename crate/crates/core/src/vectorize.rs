//! Fixed-length vectorizations of finite persistence diagrams.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;
use crate::util::{fmt_f64, sha256_hex};

/// Evenly spaced samples `t_min, ..., t_max` (both ends included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorizeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub resolution: usize,
}

impl VectorizeGrid {
    pub fn new(t_min: f64, t_max: f64, resolution: usize) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(Error::Config(format!("grid needs t_min < t_max, got [{}, {}]", t_min, t_max)));
        }
        if resolution < 2 {
            return Err(Error::Config("grid resolution must be >= 2".into()));
        }
        Ok(VectorizeGrid {
            t_min,
            t_max,
            resolution,
        })
    }

    /// `[min birth, max death]` over a collection, widened by 0.5 on each side
    /// when degenerate.
    pub fn covering(diagrams: &[PersistenceDiagram], resolution: usize) -> Result<Self> {
        let (lo, hi) = diagrams
            .iter()
            .flat_map(|d| d.finite.iter())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(b, d)| (lo.min(b), hi.max(d)));
        if !lo.is_finite() {
            return Self::new(0.0, 1.0, resolution);
        }
        if lo < hi {
            Self::new(lo, hi, resolution)
        } else {
            Self::new(lo - 0.5, hi + 0.5, resolution)
        }
    }

    pub fn samples(&self) -> Vec<f64> {
        let step = (self.t_max - self.t_min) / (self.resolution - 1) as f64;
        (0..self.resolution)
            .map(|i| {
                if i + 1 == self.resolution {
                    self.t_max
                } else {
                    self.t_min + i as f64 * step
                }
            })
            .collect()
    }
}

/// Persistence image parameters. The surface is sampled at pixel centers of
/// the `[x_min, x_max] x [y_min, y_max]` box in (birth, persistence) space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageParams {
    pub nx: usize,
    pub ny: usize,
    pub sigma: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    /// Persistence normalizing the linear weight. `None` uses the diagram's own
    /// maximum; fix it when images of several diagrams must be additive.
    pub max_persistence: Option<f64>,
}

impl ImageParams {
    fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Config("image resolution must be >= 1".into()));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::Config(format!("sigma must be > 0, got {}", self.sigma)));
        }
        if !(self.x_min < self.x_max && self.y_min < self.y_max) {
            return Err(Error::Config("image bounds must be non-empty".into()));
        }
        if let Some(m) = self.max_persistence {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::Config("max_persistence must be > 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Betti,
    Landscape,
    Image,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Betti => "betti",
            Scheme::Landscape => "landscape",
            Scheme::Image => "image",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "betti" => Ok(Scheme::Betti),
            "landscape" => Ok(Scheme::Landscape),
            "image" => Ok(Scheme::Image),
            other => Err(Error::Config(format!("unknown vectorization scheme `{}`", other))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VectorizeParams {
    Betti(VectorizeGrid),
    Landscape { levels: usize, grid: VectorizeGrid },
    Image(ImageParams),
}

impl VectorizeParams {
    pub fn scheme(&self) -> Scheme {
        match self {
            VectorizeParams::Betti(_) => Scheme::Betti,
            VectorizeParams::Landscape { .. } => Scheme::Landscape,
            VectorizeParams::Image(_) => Scheme::Image,
        }
    }

    pub fn output_len(&self) -> usize {
        match self {
            VectorizeParams::Betti(g) => g.resolution,
            VectorizeParams::Landscape { levels, grid } => levels * grid.resolution,
            VectorizeParams::Image(p) => p.nx * p.ny,
        }
    }

    fn describe(&self) -> String {
        let grid = |g: &VectorizeGrid| format!("{},{},{}", fmt_f64(g.t_min), fmt_f64(g.t_max), g.resolution);
        match self {
            VectorizeParams::Betti(g) => format!("betti:{}", grid(g)),
            VectorizeParams::Landscape { levels, grid: g } => format!("landscape:{}:{}", levels, grid(g)),
            VectorizeParams::Image(p) => format!(
                "image:{},{}:{}:{},{},{},{}:{}",
                p.nx,
                p.ny,
                fmt_f64(p.sigma),
                fmt_f64(p.x_min),
                fmt_f64(p.x_max),
                fmt_f64(p.y_min),
                fmt_f64(p.y_max),
                p.max_persistence.map(fmt_f64).unwrap_or_else(|| "auto".into())
            ),
        }
    }

    /// Short stable hash identifying the parameters.
    pub fn params_hash(&self) -> String {
        sha256_hex(self.describe().as_bytes())[..16].to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub params: VectorizeParams,
}

impl FeatureVector {
    pub fn scheme(&self) -> Scheme {
        self.params.scheme()
    }

    /// `label,scheme,params-hash,values...`
    pub fn to_csv_row(&self, label: &str) -> String {
        let mut row = format!("{},{},{}", label, self.scheme(), self.params.params_hash());
        for v in &self.values {
            row.push(',');
            row.push_str(&fmt_f64(*v));
        }
        row
    }
}

fn require_finite(d: &PersistenceDiagram) -> Result<()> {
    if d.is_finite() {
        Ok(())
    } else {
        Err(Error::InfinitePoint {
            count: d.essential.len(),
        })
    }
}

/// Number of pairs alive at each `t`, with `b <= t < d`.
pub fn betti_counts(d: &PersistenceDiagram, samples: &[f64]) -> Vec<f64> {
    samples
        .iter()
        .map(|&t| d.finite.iter().filter(|&&(b, dd)| b <= t && t < dd).count() as f64)
        .collect()
}

pub fn betti_curve(d: &PersistenceDiagram, grid: &VectorizeGrid) -> Result<FeatureVector> {
    require_finite(d)?;
    Ok(FeatureVector {
        values: betti_counts(d, &grid.samples()),
        params: VectorizeParams::Betti(*grid),
    })
}

/// Landscape levels `λ_1..λ_levels` at each sample, level-major.
pub fn landscape_values(d: &PersistenceDiagram, levels: usize, samples: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; levels * samples.len()];
    let mut tents = Vec::with_capacity(d.finite.len());
    for (s, &t) in samples.iter().enumerate() {
        tents.clear();
        tents.extend(
            d.finite
                .iter()
                .map(|&(b, dd)| (t - b).min(dd - t).max(0.0))
                .filter(|&h| h > 0.0),
        );
        tents.sort_by(|a, b| b.total_cmp(a));
        for (k, &h) in tents.iter().take(levels).enumerate() {
            out[k * samples.len() + s] = h;
        }
    }
    out
}

pub fn landscape(d: &PersistenceDiagram, levels: usize, grid: &VectorizeGrid) -> Result<FeatureVector> {
    require_finite(d)?;
    if levels == 0 {
        return Err(Error::Config("landscape needs at least one level".into()));
    }
    Ok(FeatureVector {
        values: landscape_values(d, levels, &grid.samples()),
        params: VectorizeParams::Landscape { levels, grid: *grid },
    })
}

/// Gaussian-smoothed, persistence-weighted surface in (birth, persistence)
/// coordinates, evaluated at pixel centers. Pixels are row-major in the
/// persistence axis: index `iy * nx + ix`.
pub fn persistence_image(d: &PersistenceDiagram, params: &ImageParams) -> Result<FeatureVector> {
    require_finite(d)?;
    params.validate()?;
    let max_p = params
        .max_persistence
        .unwrap_or_else(|| d.finite.iter().map(|(b, dd)| dd - b).fold(0.0, f64::max));
    let mut values = vec![0.0; params.nx * params.ny];
    if max_p > 0.0 {
        let dx = (params.x_max - params.x_min) / params.nx as f64;
        let dy = (params.y_max - params.y_min) / params.ny as f64;
        let two_s2 = 2.0 * params.sigma * params.sigma;
        let norm = 1.0 / (std::f64::consts::PI * two_s2);
        for &(b, dd) in &d.finite {
            let p = dd - b;
            let w = p / max_p;
            if w == 0.0 {
                continue;
            }
            for iy in 0..params.ny {
                let y = params.y_min + (iy as f64 + 0.5) * dy;
                for ix in 0..params.nx {
                    let x = params.x_min + (ix as f64 + 0.5) * dx;
                    let r2 = (x - b).powi(2) + (y - p).powi(2);
                    values[iy * params.nx + ix] += w * norm * (-r2 / two_s2).exp();
                }
            }
        }
    }
    Ok(FeatureVector {
        values,
        params: VectorizeParams::Image(*params),
    })
}

pub fn vectorize(d: &PersistenceDiagram, params: &VectorizeParams) -> Result<FeatureVector> {
    match params {
        VectorizeParams::Betti(g) => betti_curve(d, g),
        VectorizeParams::Landscape { levels, grid } => landscape(d, *levels, grid),
        VectorizeParams::Image(p) => persistence_image(d, p),
    }
}
