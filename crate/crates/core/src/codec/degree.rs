//! Output-node degree distributions for LT encoding.

use std::fmt;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance on the total probability mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Coefficients of the hard-decision-optimized output degree law
/// `Ω(x) = 0.00466x + 0.55545x² + 0.09743x³ + 0.17506x⁵ + 0.03774x⁸
///        + 0.08202x¹⁴ + 0.01775x³³ + 0.02989x¹⁰⁰`.
pub const IMPLANT_OMEGA: [(usize, f64); 8] = [
    (1, 0.00466),
    (2, 0.55545),
    (3, 0.09743),
    (5, 0.17506),
    (8, 0.03774),
    (14, 0.08202),
    (33, 0.01775),
    (100, 0.02989),
];

/// A probability law over output-node degrees.
///
/// Degrees are strictly increasing and every probability lies in `(0, 1]`.
/// The cumulative table is kept alongside so sampling is one uniform draw
/// plus a binary search.
#[derive(Clone, PartialEq)]
pub struct DegreeDistribution {
    entries: Vec<(usize, f64)>,
    cumulative: Vec<f64>,
}

impl DegreeDistribution {
    pub fn new(entries: Vec<(usize, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDistribution("no entries".into()));
        }
        let mut prev = 0usize;
        for &(degree, prob) in &entries {
            if degree == 0 {
                return Err(Error::InvalidDistribution("degree 0 is not allowed".into()));
            }
            if degree <= prev {
                return Err(Error::InvalidDistribution(format!(
                    "degrees must be strictly increasing ({degree} after {prev})"
                )));
            }
            if !(prob > 0.0 && prob <= 1.0) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {prob} for degree {degree} is outside (0, 1]"
                )));
            }
            prev = degree;
        }
        let mut acc = 0.0;
        let cumulative: Vec<f64> = entries
            .iter()
            .map(|&(_, p)| {
                acc += p;
                acc
            })
            .collect();
        if (acc - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {acc}, expected 1"
            )));
        }
        Ok(Self {
            entries,
            cumulative,
        })
    }

    /// The implant degree law with its eight published coefficients.
    pub fn implant() -> Self {
        Self::new(IMPLANT_OMEGA.to_vec()).expect("published coefficients form a distribution")
    }

    /// Point mass on a single degree.
    pub fn constant(degree: usize) -> Result<Self> {
        Self::new(vec![(degree, 1.0)])
    }

    /// Parses a two-column `degree probability` text file. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(d), Some(p), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::Parse(format!(
                    "line {}: expected `degree probability`",
                    lineno + 1
                )));
            };
            let degree = d
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("line {}: degree: {e}", lineno + 1)))?;
            let prob = p
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: probability: {e}", lineno + 1)))?;
            entries.push((degree, prob));
        }
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn max_degree(&self) -> usize {
        self.entries.last().map(|e| e.0).unwrap_or(0)
    }

    /// Probability of a given degree (0 when absent).
    pub fn probability(&self, degree: usize) -> f64 {
        self.entries
            .iter()
            .find(|e| e.0 == degree)
            .map(|e| e.1)
            .unwrap_or(0.0)
    }

    /// Mean output degree `Ω'(1)`.
    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|&(d, p)| d as f64 * p).sum()
    }

    /// Moves the mass of every degree above `k` onto degree `k`, so the law
    /// stays well defined for blocks shorter than its largest degree.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("k", "block length must be at least 1"));
        }
        if self.max_degree() <= k {
            return Ok(self.clone());
        }
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(self.entries.len());
        let mut overflow = 0.0;
        for &(d, p) in &self.entries {
            if d < k {
                entries.push((d, p));
            } else {
                overflow += p;
            }
        }
        entries.push((k, overflow));
        Self::new(entries)
    }

    /// Draws one degree: a single uniform variate is mapped through the
    /// cumulative table.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let idx = self.cumulative.partition_point(|&c| c <= u);
        // u can land above the last cumulative value when the mass is 1 - ε.
        self.entries[idx.min(self.entries.len() - 1)].0
    }
}

impl fmt::Debug for DegreeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(d, p)| (d, p)))
            .finish()
    }
}

impl rand::distr::Distribution<usize> for DegreeDistribution {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        DegreeDistribution::sample(self, rng)
    }
}
