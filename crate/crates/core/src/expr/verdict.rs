//! Zero testing: symbolic first, then deterministic sampling.

use serde::Serialize;

use super::{Point4, ScalarExpr};
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x9E37_79B9_7F4A_7C15;
pub const DEFAULT_SAMPLES: usize = 64;
const MAX_ATTEMPTS: usize = 1024;
const MIN_VALID: usize = 16;
const REL_TOL: f64 = 1e-9;

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}

/// Where and how densely the sampler draws points.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Per-coordinate sampling interval, in the order x1, x2, x3, y.
    pub bounds: [(f64, f64); 4],
    /// Points with `|coordinate| <= min_abs` are rejected.
    pub min_abs: [f64; 4],
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            bounds: [(-2.0, 2.0); 4],
            min_abs: [0.0; 4],
        }
    }
}

impl SampleConfig {
    /// Defaults overridden by `P4_SEED` and `P4_SAMPLES` when set.
    pub fn from_env() -> Self {
        let mut cfg = SampleConfig::default();
        if let Some(seed) = std::env::var("P4_SEED").ok().and_then(|s| parse_seed(&s)) {
            cfg.seed = seed;
        }
        if let Some(n) = std::env::var("P4_SAMPLES")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|n| *n > 0)
        {
            cfg.samples = n;
        }
        cfg
    }

    pub fn with_bounds(mut self, var: usize, lo: f64, hi: f64) -> Self {
        self.bounds[var] = (lo, hi);
        self
    }

    pub fn with_min_abs(mut self, var: usize, min_abs: f64) -> Self {
        self.min_abs[var] = min_abs;
        self
    }

    /// Candidate points in draw order, before any rejection by evaluation.
    pub fn candidates(&self) -> impl Iterator<Item = Point4> + '_ {
        let mut rng = SplitMix64::new(self.seed);
        std::iter::from_fn(move || {
            let mut c = [0.0; 4];
            for (i, slot) in c.iter_mut().enumerate() {
                let (lo, hi) = self.bounds[i];
                *slot = rng.uniform(lo, hi);
            }
            Some(Point4::from_coords(c))
        })
        .take(MAX_ATTEMPTS)
    }

    fn admissible(&self, p: &Point4) -> bool {
        p.coords()
            .iter()
            .zip(self.min_abs)
            .all(|(c, m)| m <= 0.0 || c.abs() > m)
    }

    /// The first `samples` admissible candidates.
    pub fn points(&self) -> Vec<Point4> {
        self.candidates()
            .filter(|p| self.admissible(p))
            .take(self.samples)
            .collect()
    }
}

fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16).ok(),
        None => s.parse().ok(),
    }
}

/// Outcome of a zero test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroVerdict {
    SymbolicZero,
    /// `max_abs` is the largest residual relative to its evaluation scale.
    SampledZero { samples: usize, max_abs: f64 },
    #[serde(rename = "nonzero")]
    NonZero { witness: [f64; 4], value: f64 },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ZeroVerdict::SymbolicZero)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ZeroVerdict::SymbolicZero => "symbolic_zero",
            ZeroVerdict::SampledZero { .. } => "sampled_zero",
            ZeroVerdict::NonZero { .. } => "nonzero",
        }
    }

    pub fn witness(&self) -> Option<Point4> {
        match self {
            ZeroVerdict::NonZero { witness, .. } => Some(Point4::from_coords(*witness)),
            _ => None,
        }
    }
}

fn tolerance(scale: f64) -> f64 {
    REL_TOL * scale.max(1.0)
}

/// Decide whether `e` vanishes identically.
pub fn zero_verdict(e: &ScalarExpr, cfg: &SampleConfig) -> Result<ZeroVerdict> {
    if e.is_zero_literal() || e.constant_value().is_some_and(|c| num_traits::Zero::is_zero(&c))
    {
        return Ok(ZeroVerdict::SymbolicZero);
    }
    let mut valid = 0;
    let mut attempts = 0;
    let mut worst = 0.0f64;
    for p in cfg.candidates() {
        attempts += 1;
        if !cfg.admissible(&p) {
            continue;
        }
        let Ok((v, scale)) = e.eval_scaled(&p) else {
            continue;
        };
        valid += 1;
        if v.abs() > tolerance(scale) {
            return Ok(ZeroVerdict::NonZero {
                witness: p.coords(),
                value: v,
            });
        }
        worst = worst.max(v.abs() / scale.max(1.0));
        if valid == cfg.samples {
            break;
        }
    }
    if valid < MIN_VALID.min(cfg.samples) {
        return Err(Error::SamplerExhausted { valid, attempts });
    }
    Ok(ZeroVerdict::SampledZero {
        samples: valid,
        max_abs: worst,
    })
}

/// Combine verdicts of several components: the first nonzero wins, symbolic
/// only if every component is symbolic.
pub fn combine_verdicts<I: IntoIterator<Item = ZeroVerdict>>(verdicts: I) -> ZeroVerdict {
    let mut out = ZeroVerdict::SymbolicZero;
    for v in verdicts {
        match (&out, v) {
            (_, nz @ ZeroVerdict::NonZero { .. }) => return nz,
            (ZeroVerdict::SymbolicZero, v) => out = v,
            (
                ZeroVerdict::SampledZero { samples, max_abs },
                ZeroVerdict::SampledZero {
                    samples: s2,
                    max_abs: m2,
                },
            ) => {
                out = ZeroVerdict::SampledZero {
                    samples: (*samples).min(s2),
                    max_abs: max_abs.max(m2),
                }
            }
            _ => {}
        }
    }
    out
}

/// Verdict for a list of expressions that must all vanish.
pub fn zero_verdict_all<'a, I>(exprs: I, cfg: &SampleConfig) -> Result<ZeroVerdict>
where
    I: IntoIterator<Item = &'a ScalarExpr>,
{
    let mut verdicts = Vec::new();
    for e in exprs {
        let v = zero_verdict(e, cfg)?;
        let stop = !v.is_zero();
        verdicts.push(v);
        if stop {
            break;
        }
    }
    Ok(combine_verdicts(verdicts))
}

/// First sample at which `e` vanishes (within tolerance) or cannot be
/// evaluated; `None` when `e` is nonvanishing on every sample.
pub fn first_vanishing_sample(e: &ScalarExpr, cfg: &SampleConfig) -> Option<Point4> {
    for p in cfg.points() {
        match e.eval_scaled(&p) {
            Ok((v, scale)) if v.abs() > tolerance(scale) => {}
            _ => return Some(p),
        }
    }
    None
}
