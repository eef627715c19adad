//! The job description shared by every subcommand. It can be read from a
//! JSON file and overridden piecemeal by flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quospec::abelian::TorusSampler;
use quospec::group::{GroupSpec, QuotientSpec};
use quospec::ring::{parse_element, parse_matrix, GroupRingMatrix};
use quospec::spectra::{DEFAULT_SVD_TOL, DEFAULT_ZERO_TOL};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::Config(format!("unknown format {other:?}"))),
        }
    }
}

/// One level of a quotient chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainLevel {
    /// One modulus per free generator.
    Abelian { moduli: Vec<u64> },
    /// `H3(Z/p^level)`.
    Heisenberg { p: u64, level: u32 },
}

impl ChainLevel {
    pub fn quotient(&self, group: &GroupSpec) -> Result<QuotientSpec, CliError> {
        match (self, group) {
            (ChainLevel::Abelian { moduli }, GroupSpec::Abelian(spec)) => {
                Ok(QuotientSpec::abelian(spec.clone(), moduli.clone())?)
            }
            (ChainLevel::Heisenberg { p, level }, GroupSpec::Heisenberg(_)) => {
                Ok(QuotientSpec::heisenberg(*p, *level)?)
            }
            (level, group) => Err(CliError::Config(format!("chain level {level} does not fit the group {group}"))),
        }
    }
}

impl fmt::Display for ChainLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainLevel::Abelian { moduli } => {
                let parts: Vec<String> = moduli.iter().map(u64::to_string).collect();
                write!(f, "{}", parts.join("x"))
            }
            ChainLevel::Heisenberg { p, level } => write!(f, "{p}^{level}"),
        }
    }
}

/// Comma-separated levels: `5,25,125` for `Z`, `4x6,8x12` for `Z^2` and
/// `3^1,3^2` for the Heisenberg chain `H3(Z/p^level)`.
pub fn parse_chain(text: &str) -> Result<Vec<ChainLevel>, CliError> {
    let bad = |item: &str| CliError::Config(format!("cannot parse chain level {item:?}"));
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            if let Some((p, level)) = item.split_once('^') {
                Ok(ChainLevel::Heisenberg {
                    p: p.trim().parse().map_err(|_| bad(item))?,
                    level: level.trim().parse().map_err(|_| bad(item))?,
                })
            } else {
                let moduli = item
                    .split('x')
                    .map(|m| m.trim().parse().map_err(|_| bad(item)))
                    .collect::<Result<_, _>>()?;
                Ok(ChainLevel::Abelian { moduli })
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Eigenvalues of modulus at most `tau` count as zero.
    pub tau: f64,
    /// Relative singular-value cutoff for numerical rank.
    pub tau_svd: f64,
    /// Power `K` in `rank(M^K)`. Defaults to the exponent of the quotient
    /// for Heisenberg chains and to the matrix size for abelian ones.
    pub rank_power: Option<u32>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tau: DEFAULT_ZERO_TOL,
            tau_svd: DEFAULT_SVD_TOL,
            rank_power: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub group: String,
    pub element: Option<String>,
    pub matrix: Option<String>,
    pub chain: Vec<ChainLevel>,
    pub sampler: TorusSampler,
    pub degree: usize,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

impl Default for JobConfig {
    fn default() -> Self {
        Self {
            group: "Z".into(),
            element: None,
            matrix: None,
            chain: Vec::new(),
            sampler: TorusSampler::UniformGrid { points_per_axis: 512 },
            degree: 6,
            tolerances: Tolerances::default(),
            out: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json, Format::Svg],
            threads: None,
            seed: None,
        }
    }
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn group_spec(&self) -> Result<GroupSpec, CliError> {
        Ok(self.group.parse()?)
    }

    /// The matrix `A`; a lone element becomes a `1 x 1` matrix.
    pub fn matrix(&self) -> Result<GroupRingMatrix, CliError> {
        let group = self.group_spec()?;
        match (&self.matrix, &self.element) {
            (Some(m), None) => Ok(parse_matrix(m, &group).map_err(quospec::Error::from)?),
            (None, Some(e)) => Ok(GroupRingMatrix::from_element(
                parse_element(e, &group).map_err(quospec::Error::from)?,
            )),
            (Some(_), Some(_)) => Err(CliError::Config("give either an element or a matrix, not both".into())),
            (None, None) => Err(CliError::Config("an element or a matrix is required".into())),
        }
    }

    pub fn quotients(&self) -> Result<Vec<QuotientSpec>, CliError> {
        let group = self.group_spec()?;
        self.chain.iter().map(|level| level.quotient(&group)).collect()
    }

    /// The sampler with the seed override applied.
    pub fn effective_sampler(&self) -> TorusSampler {
        match (&self.sampler, self.seed) {
            (TorusSampler::MonteCarlo { count, .. }, Some(seed)) => TorusSampler::MonteCarlo { count: *count, seed },
            (s, _) => s.clone(),
        }
    }

    pub fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_text() {
        assert_eq!(
            parse_chain("5, 25,125").unwrap(),
            vec![
                ChainLevel::Abelian { moduli: vec![5] },
                ChainLevel::Abelian { moduli: vec![25] },
                ChainLevel::Abelian { moduli: vec![125] },
            ]
        );
        assert_eq!(
            parse_chain("3^1,3^2").unwrap(),
            vec![ChainLevel::Heisenberg { p: 3, level: 1 }, ChainLevel::Heisenberg { p: 3, level: 2 }]
        );
        assert_eq!(parse_chain("4x6").unwrap(), vec![ChainLevel::Abelian { moduli: vec![4, 6] }]);
        assert!(parse_chain("five").is_err());
        for text in ["4x6", "3^2", "7"] {
            assert_eq!(parse_chain(text).unwrap()[0].to_string(), text);
        }
    }

    #[test]
    fn partial_config_fills_defaults() {
        let cfg = JobConfig::from_json(r#"{"element": "g", "chain": [{"kind": "abelian", "moduli": [8]}]}"#).unwrap();
        assert_eq!(cfg.group, "Z");
        assert_eq!(cfg.degree, 6);
        assert_eq!(cfg.quotients().unwrap()[0].order(), 8);
        assert!(JobConfig::from_json(r#"{"elemnt": "g"}"#).is_err());
    }

    #[test]
    fn mismatched_chain_is_a_config_error() {
        let cfg = JobConfig {
            group: "H3".into(),
            chain: vec![ChainLevel::Abelian { moduli: vec![5] }],
            ..Default::default()
        };
        assert!(matches!(cfg.quotients(), Err(CliError::Config(_))));
    }

    #[test]
    fn seed_overrides_monte_carlo_only() {
        let mut cfg = JobConfig {
            sampler: TorusSampler::MonteCarlo { count: 10, seed: 1 },
            seed: Some(9),
            ..Default::default()
        };
        assert_eq!(cfg.effective_sampler(), TorusSampler::MonteCarlo { count: 10, seed: 9 });
        cfg.sampler = TorusSampler::UniformGrid { points_per_axis: 4 };
        assert_eq!(cfg.effective_sampler(), cfg.sampler);
    }
}
