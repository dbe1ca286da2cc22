//! Synthetic approval profiles: impartial culture, resampling and Euclidean.
//!
//! Every sampler draws from a `ChaCha8Rng` seeded with `seed_from_u64`, so a
//! configuration always yields the same profile. Draw order: shared
//! randomness first (central ballot, candidate positions), then voters in
//! order, candidates in order within a voter.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::election::{BallotClass, Profile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    ImpartialCulture { p: f64 },
    Resampling { p: f64, phi: f64 },
    Euclidean { dim: usize, radius: f64 },
}

impl Model {
    pub fn name(&self) -> String {
        match self {
            Model::ImpartialCulture { p } => format!("ic(p={p})"),
            Model::Resampling { p, phi } => format!("resampling(p={p},phi={phi})"),
            Model::Euclidean { dim, radius } => format!("euclidean(d={dim},r={radius})"),
        }
    }

    /// Accepts `ic:<p>`, `resampling:<p>:<phi>` and `euclidean:<d>:<r>`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidParams(format!("bad number {s:?} in model {text:?}")))
        };
        let model = match parts.as_slice() {
            ["ic", p] => Model::ImpartialCulture { p: num(p)? },
            ["resampling", p, phi] => Model::Resampling {
                p: num(p)?,
                phi: num(phi)?,
            },
            ["euclidean", d, r] => Model::Euclidean {
                dim: d
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("bad dimension {d:?}")))?,
                radius: num(r)?,
            },
            _ => return Err(Error::InvalidParams(format!("unknown model {text:?}"))),
        };
        Ok(model)
    }

    fn check(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!(
                    "{name} must lie in [0,1], got {v}"
                )))
            }
        };
        match *self {
            Model::ImpartialCulture { p } => unit("p", p),
            Model::Resampling { p, phi } => unit("p", p).and(unit("phi", phi)),
            Model::Euclidean { dim, radius } => {
                if !(dim == 1 || dim == 2) {
                    return Err(Error::InvalidParams(format!(
                        "dimension must be 1 or 2, got {dim}"
                    )));
                }
                if radius.is_nan() || radius <= 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "radius must be positive, got {radius}"
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub model: Model,
    pub voters: usize,
    pub candidates: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(model: Model, voters: usize, candidates: usize, seed: u64) -> Result<Self> {
        let config = Self {
            model,
            voters,
            candidates,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.voters == 0 || self.candidates == 0 {
            return Err(Error::InvalidParams("need n >= 1 and m >= 1".into()));
        }
        self.model.check()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Samples a unit-weight profile, one class per voter.
pub fn sample(config: &SamplerConfig) -> Result<Profile> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (n, m) = (config.voters, config.candidates);
    let ballots: Vec<Vec<usize>> = match config.model {
        Model::ImpartialCulture { p } => (0..n).map(|_| draw_ic(&mut rng, m, p)).collect(),
        Model::Resampling { p, phi } => {
            let central = central_ballot(&mut rng, m, p);
            (0..n)
                .map(|_| {
                    (0..m)
                        .filter(|&c| {
                            if rng.random::<f64>() < phi {
                                rng.random::<f64>() < p
                            } else {
                                central[c]
                            }
                        })
                        .collect()
                })
                .collect()
        }
        Model::Euclidean { dim, radius } => {
            let cands: Vec<Vec<f64>> = (0..m).map(|_| point(&mut rng, dim)).collect();
            (0..n)
                .map(|_| {
                    let v = point(&mut rng, dim);
                    (0..m)
                        .filter(|&c| {
                            let d2: f64 = v
                                .iter()
                                .zip(&cands[c])
                                .map(|(a, b)| (a - b) * (a - b))
                                .sum();
                            d2.sqrt() < radius
                        })
                        .collect()
                })
                .collect()
        }
    };
    let classes = ballots
        .into_iter()
        .map(|a| BallotClass::new(a, 1))
        .collect();
    Profile::with_default_names(m, classes)
}

pub fn sample_ic(config: &SamplerConfig) -> Result<Profile> {
    expect_model(
        config,
        matches!(config.model, Model::ImpartialCulture { .. }),
    )?;
    sample(config)
}

pub fn sample_resampling(config: &SamplerConfig) -> Result<Profile> {
    expect_model(config, matches!(config.model, Model::Resampling { .. }))?;
    sample(config)
}

pub fn sample_euclidean(config: &SamplerConfig) -> Result<Profile> {
    expect_model(config, matches!(config.model, Model::Euclidean { .. }))?;
    sample(config)
}

fn expect_model(config: &SamplerConfig, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "unexpected model {}",
            config.model.name()
        )))
    }
}

fn draw_ic(rng: &mut ChaCha8Rng, m: usize, p: f64) -> Vec<usize> {
    (0..m).filter(|_| rng.random::<f64>() < p).collect()
}

/// Size of the central ballot, `⌊pm⌋`, robust to `0.2 * 20 = 3.9999…`.
pub fn central_size(p: f64, m: usize) -> usize {
    ((p * m as f64) + 1e-9).floor().min(m as f64) as usize
}

fn central_ballot(rng: &mut ChaCha8Rng, m: usize, p: f64) -> Vec<bool> {
    let mut central = vec![false; m];
    for c in index::sample(rng, m, central_size(p, m)) {
        central[c] = true;
    }
    central
}

fn point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random::<f64>()).collect()
}
