use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::PointSet;
use crate::error::{Error, Result};

/// Isotropic 2-D Gaussian blobs, `n_per_blob` points each, labelled by blob
/// index. Deterministic for a fixed seed.
pub fn gen_blobs(
    n_per_blob: usize,
    centers: &[[f64; 2]],
    stddevs: &[f64],
    seed: u64,
) -> Result<PointSet> {
    if centers.len() != stddevs.len() {
        return Err(Error::InvalidParam(format!(
            "{} centers but {} stddevs",
            centers.len(),
            stddevs.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n_per_blob * centers.len());
    let mut labels = Vec::with_capacity(n_per_blob * centers.len());
    for (blob, (c, &sd)) in centers.iter().zip(stddevs).enumerate() {
        let noise =
            Normal::new(0.0, sd).map_err(|e| Error::InvalidParam(format!("stddev {sd}: {e}")))?;
        for _ in 0..n_per_blob {
            points.push(vec![
                c[0] + noise.sample(&mut rng),
                c[1] + noise.sample(&mut rng),
            ]);
            labels.push(blob as i64);
        }
    }
    PointSet::new(points, Some(labels))
}

/// Two interleaved half circles. The upper crescent is the upper unit
/// half-circle around the origin (label 0); the lower one is the lower unit
/// half-circle around (1, 0.5) (label 1). `n/2` points go to the upper
/// crescent, evenly spaced in angle, before Gaussian noise is added.
pub fn gen_half_moons(n: usize, noise: f64, seed: u64) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let jitter =
        Normal::new(0.0, noise).map_err(|e| Error::InvalidParam(format!("noise {noise}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_upper = n / 2;
    let n_lower = n - n_upper;
    let angle = |k: usize, m: usize| {
        if m == 1 {
            PI / 2.0
        } else {
            PI * k as f64 / (m - 1) as f64
        }
    };

    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for k in 0..n_upper {
        let t = angle(k, n_upper);
        points.push(vec![t.cos(), t.sin()]);
        labels.push(0);
    }
    for k in 0..n_lower {
        let t = angle(k, n_lower);
        points.push(vec![1.0 - t.cos(), 0.5 - t.sin()]);
        labels.push(1);
    }
    if noise > 0.0 {
        for p in &mut points {
            for v in p.iter_mut() {
                *v += jitter.sample(&mut rng);
            }
        }
    }
    PointSet::new(points, Some(labels))
}

/// A named synthetic data set, written `name:key=value;key=value`, e.g.
/// `half-moons:n=800;noise=0.05` or
/// `blobs:n=100;centers=0,0|10,10;stddevs=0.5|1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Blobs {
        n_per_blob: usize,
        centers: Vec<[f64; 2]>,
        stddevs: Vec<f64>,
    },
    HalfMoons {
        n: usize,
        noise: f64,
    },
}

pub const GENERATORS: [&str; 2] = ["blobs", "half-moons"];

impl Generator {
    pub fn default_for(name: &str) -> Result<Self> {
        match name {
            "blobs" => Ok(Generator::Blobs {
                n_per_blob: 100,
                centers: vec![[0.0, 0.0], [10.0, 0.0]],
                stddevs: vec![0.5, 1.0],
            }),
            "half-moons" => Ok(Generator::HalfMoons {
                n: 800,
                noise: 0.05,
            }),
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }

    pub fn generate(&self, seed: u64) -> Result<PointSet> {
        match self {
            Generator::Blobs {
                n_per_blob,
                centers,
                stddevs,
            } => gen_blobs(*n_per_blob, centers, stddevs, seed),
            Generator::HalfMoons { n, noise } => gen_half_moons(*n, *noise, seed),
        }
    }

    /// Overrides one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidParam(format!("bad {what} `{value}`"));
        match (self, key) {
            (Generator::Blobs { n_per_blob, .. }, "n") => {
                *n_per_blob = value.parse().map_err(|_| bad("n"))?
            }
            (Generator::Blobs { centers, .. }, "centers") => {
                *centers = value
                    .split('|')
                    .map(|c| {
                        let xy: Vec<f64> = c
                            .split(',')
                            .map(|v| v.trim().parse::<f64>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|_| bad("centers"))?;
                        <[f64; 2]>::try_from(xy).map_err(|_| bad("centers"))
                    })
                    .collect::<Result<_>>()?
            }
            (Generator::Blobs { stddevs, .. }, "stddevs") => {
                *stddevs = value
                    .split('|')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("stddevs"))?
            }
            (Generator::HalfMoons { n, .. }, "n") => *n = value.parse().map_err(|_| bad("n"))?,
            (Generator::HalfMoons { noise, .. }, "noise") => {
                *noise = value.parse().map_err(|_| bad("noise"))?
            }
            (_, k) => {
                return Err(Error::InvalidParam(format!(
                    "unknown generator setting `{k}`"
                )))
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut g = Generator::default_for(name.trim())?;
        for kv in rest.split(';').filter(|kv| !kv.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidParam(format!("expected key=value, got `{kv}`")))?;
            g.set(k.trim(), v.trim())?;
        }
        Ok(g)
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::Blobs {
                n_per_blob,
                centers,
                stddevs,
            } => {
                let c: Vec<String> = centers
                    .iter()
                    .map(|c| format!("{:?},{:?}", c[0], c[1]))
                    .collect();
                let sd: Vec<String> = stddevs.iter().map(|v| format!("{v:?}")).collect();
                write!(
                    f,
                    "blobs:n={n_per_blob};centers={};stddevs={}",
                    c.join("|"),
                    sd.join("|")
                )
            }
            Generator::HalfMoons { n, noise } => write!(f, "half-moons:n={n};noise={noise:?}"),
        }
    }
}
