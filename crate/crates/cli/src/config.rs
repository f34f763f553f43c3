use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use frachardy::suite::{SuiteConfig, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Parameters shared by every subcommand. Anything left unset on the command
/// line falls back to the `--config` file, then to the subcommand default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,

    /// JSON file with a RunConfig; command-line flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Print the merged config as JSON and exit.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub dump_config: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Box side length.
    #[arg(long = "length", visible_alias = "L", global = true)]
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Inner (sequence) exponent of Besov and Triebel-Lizorkin norms.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus_size: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_tol: Option<f64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_tol: Option<f64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_tol: Option<f64>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// HLF1 field file.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<PathBuf>,
    /// Norm kind: lq, weighted, sobolev, besov, triebel-lizorkin.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    /// Suite: hardy, schur, stein-weiss, chain, all.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    /// Fraction of the Nyquist frequency covered by dyadic levels.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,

    /// Sweep axis: s, q or n.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
    /// Explicit sweep points, comma separated.
    #[arg(long, value_delimiter = ',', global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<f64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

macro_rules! fill {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    /// Fills unset fields from `file`.
    pub fn merged_with(mut self, file: &RunConfig) -> RunConfig {
        let dst = &mut self;
        fill!(dst, file; command, d, n, length, s, q, r, lambda, p, alpha, beta, seed,
              corpus_size, spectral_tol, quadrature_tol, exact_tol, output, format,
              field, kind, suite, identity, budget, coverage, axis, values, from, to, step);
        self
    }

    pub fn tolerances(&self) -> Tolerances {
        let t = Tolerances::default();
        Tolerances {
            spectral: self.spectral_tol.unwrap_or(t.spectral),
            quadrature: self.quadrature_tol.unwrap_or(t.quadrature),
            exact: self.exact_tol.unwrap_or(t.exact),
        }
    }

    pub fn suite_config(&self) -> SuiteConfig {
        let base = SuiteConfig::default();
        SuiteConfig {
            d: self.d.unwrap_or(base.d),
            n: self.n.unwrap_or(base.n),
            length: self.length.unwrap_or(base.length),
            s: self.s.unwrap_or(base.s),
            q: self.q.unwrap_or(base.q),
            seed: self.seed.unwrap_or(base.seed),
            corpus_size: self.corpus_size.unwrap_or(base.corpus_size),
            tolerances: self.tolerances(),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = RunConfig {
            command: Some("verify".into()),
            d: Some(2),
            length: Some(12.5),
            s: Some(0.4),
            values: Some(vec![0.2, 0.4]),
            format: Some(Format::Csv),
            suite: Some("chain".into()),
            ..RunConfig::default()
        };
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert!(text.contains("\"L\": 12.5"));
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn flags_win_over_file() {
        let file = RunConfig {
            d: Some(2),
            q: Some(3.0),
            ..RunConfig::default()
        };
        let cli = RunConfig {
            d: Some(1),
            ..RunConfig::default()
        };
        let m = cli.merged_with(&file);
        assert_eq!((m.d, m.q), (Some(1), Some(3.0)));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>("{\"dd\": 3}").is_err());
    }
}
