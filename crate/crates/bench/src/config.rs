//! Run options shared by the command line and TOML config files.
//!
//! A config file uses the flag names as keys (`beta-preset = "fista"`).
//! Anything given on the command line wins over the file.

use std::path::{Path, PathBuf};

use clap::Args;
use l0box_core::BetaStrategy;
use serde::{Deserialize, Deserializer};

use crate::generate::{ExampleId, ExperimentSpec, SolverSettings};
use crate::BenchError;

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunOptions {
    /// Example family: 41, 42 or 43.
    #[arg(long)]
    #[serde(default, deserialize_with = "str_or_int")]
    pub example: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Smoothing decay exponent (sfiht/siht only).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Noise scale of the observations.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// sfiht, siht, fiht or iht.
    #[arg(long)]
    pub solver: Option<String>,
    /// generic, seqconv, fista or paper-default.
    #[arg(long)]
    pub beta_preset: Option<String>,
    /// Skip the zero-extrapolation baseline run.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub no_baseline: Option<bool>,
    /// Use the large problem sizes instead of the desk-scale ones.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub full_scale: Option<bool>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn str_or_int<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        I(i64),
        F(f64),
    }
    Ok(Some(match Raw::deserialize(d)? {
        Raw::S(s) => s,
        Raw::I(i) => i.to_string(),
        Raw::F(f) => f.to_string(),
    }))
}

impl RunOptions {
    pub fn from_toml_str(text: &str) -> Result<Self, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, BenchError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `self` win; the rest come from `file`.
    pub fn over(self, file: RunOptions) -> RunOptions {
        RunOptions {
            example: self.example.or(file.example),
            m: self.m.or(file.m),
            n: self.n.or(file.n),
            s: self.s.or(file.s),
            seed: self.seed.or(file.seed),
            lambda: self.lambda.or(file.lambda),
            epsilon: self.epsilon.or(file.epsilon),
            sigma: self.sigma.or(file.sigma),
            noise: self.noise.or(file.noise),
            max_iter: self.max_iter.or(file.max_iter),
            solver: self.solver.or(file.solver),
            beta_preset: self.beta_preset.or(file.beta_preset),
            no_baseline: self.no_baseline.or(file.no_baseline),
            full_scale: self.full_scale.or(file.full_scale),
            out: self.out.or(file.out),
        }
    }

    /// Builds the experiment, starting from the example's preset.
    pub fn to_spec(&self) -> Result<ExperimentSpec, BenchError> {
        let cfg_err = |m: String| BenchError::Config(m);
        let example: ExampleId = self
            .example
            .as_deref()
            .ok_or_else(|| cfg_err("--example is required".into()))?
            .parse()?;
        let seed = self.seed.unwrap_or(0);
        let (dm, dn, ds) = if self.full_scale.unwrap_or(false) {
            example.full_size()
        } else {
            example.desk_size()
        };
        let (m, n, s) = (
            self.m.unwrap_or(dm),
            self.n.unwrap_or(dn),
            self.s.unwrap_or(ds),
        );
        let mut spec = ExperimentSpec::sized(example, m, n, s, seed);
        if let Some(l) = self.lambda {
            spec.lambda = l;
        }
        if let Some(a) = self.noise {
            spec.noise_scale = a;
        }
        spec.baseline = !self.no_baseline.unwrap_or(false);

        let preset = self.beta_preset.as_deref().unwrap_or("paper-default");
        let solver = self.solver.as_deref();
        match &mut spec.solver {
            SolverSettings::Smoothed(c) => {
                c.beta_strategy = match preset {
                    "paper-default" => c.beta_strategy,
                    "generic" => BetaStrategy::GenericCap,
                    "seqconv" => BetaStrategy::SequenceConvergent { alpha: 4.0 },
                    "fista" => BetaStrategy::FistaLike,
                    other => return Err(cfg_err(format!("unknown beta preset '{other}'"))),
                };
                if let Some(e) = self.epsilon {
                    c.epsilon = e;
                }
                if let Some(sg) = self.sigma {
                    c.sigma = sg;
                }
                if let Some(k) = self.max_iter {
                    c.max_iter = k;
                }
                match solver {
                    None | Some("sfiht") => {}
                    Some("siht") => spec.solver = spec.solver.baseline(),
                    Some(other) => {
                        return Err(cfg_err(format!(
                            "solver '{other}' does not fit example {example}"
                        )))
                    }
                }
            }
            SolverSettings::Smooth(c) => {
                match preset {
                    "paper-default" | "seqconv" => {}
                    other => {
                        return Err(cfg_err(format!(
                            "beta preset '{other}' is not available for fiht"
                        )))
                    }
                }
                if self.sigma.is_some() {
                    return Err(cfg_err("--sigma only applies to sfiht/siht".into()));
                }
                if let Some(e) = self.epsilon {
                    c.epsilon = e;
                }
                if let Some(k) = self.max_iter {
                    c.max_iter = k;
                }
                match solver {
                    None | Some("fiht") => {}
                    Some("iht") => spec.solver = spec.solver.baseline(),
                    Some(other) => {
                        return Err(cfg_err(format!(
                            "solver '{other}' does not fit example {example}"
                        )))
                    }
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_cli() {
        let file = RunOptions::from_toml_str(
            "example = 42\nseed = 7\nlambda = 0.01\nbeta-preset = \"generic\"\n",
        )
        .unwrap();
        let cli = RunOptions {
            seed: Some(9),
            ..Default::default()
        };
        let merged = cli.over(file);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.lambda, Some(0.01));
        let spec = merged.to_spec().unwrap();
        assert_eq!(spec.example, ExampleId::Censored42);
        match spec.solver {
            SolverSettings::Smoothed(c) => {
                assert_eq!(c.beta_strategy, BetaStrategy::GenericCap);
                assert_eq!(c.x0.as_ref().map(|v| v.len()), Some(40));
            }
            _ => panic!("wrong solver kind"),
        }
    }

    #[test]
    fn rejects_bad_combinations() {
        assert!(RunOptions::from_toml_str("colour = 1").is_err());
        let base = RunOptions {
            example: Some("43".into()),
            ..Default::default()
        };
        assert!(base.to_spec().is_ok());
        for bad in [
            RunOptions {
                solver: Some("sfiht".into()),
                ..base.clone()
            },
            RunOptions {
                sigma: Some(0.5),
                ..base.clone()
            },
            RunOptions {
                beta_preset: Some("fista".into()),
                ..base.clone()
            },
            RunOptions {
                m: Some(400),
                ..base.clone()
            },
            RunOptions {
                example: None,
                ..base.clone()
            },
        ] {
            assert!(bad.to_spec().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn baseline_solver_names() {
        let o = RunOptions {
            example: Some("41".into()),
            solver: Some("siht".into()),
            ..Default::default()
        };
        assert_eq!(o.to_spec().unwrap().solver.name(), "siht");
        let o = RunOptions {
            example: Some("43".into()),
            solver: Some("iht".into()),
            ..Default::default()
        };
        assert_eq!(o.to_spec().unwrap().solver.name(), "iht");
    }
}
