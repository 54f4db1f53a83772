// SPDX-License-Identifier: MIT OR Apache-2.0

//! Run configuration: a JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use dietbench_core::afford::{QuintileOptions, RankVariable, WeightUnit};
use dietbench_core::model::YearMonth;
use dietbench_core::{CohdOptions, InputPaths};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputSpec {
    /// Directory holding files under their conventional names.
    dir: Option<PathBuf>,
    prices: Option<PathBuf>,
    items: Option<PathBuf>,
    composition: Option<PathBuf>,
    guidelines: Option<PathBuf>,
    nutrient_refs: Option<PathBuf>,
    ae_factors: Option<PathBuf>,
    households: Option<PathBuf>,
    members: Option<PathBuf>,
    consumption: Option<PathBuf>,
    regions: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct OptionSpec {
    include_discretionary: bool,
    fallback_parent_region: bool,
    quintile_rank: RankVariable,
    quintile_weight: WeightUnit,
    period: Option<String>,
}

impl Default for OptionSpec {
    fn default() -> Self {
        OptionSpec {
            include_discretionary: true,
            fallback_parent_region: false,
            quintile_rank: RankVariable::default(),
            quintile_weight: WeightUnit::default(),
            period: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    inputs: InputSpec,
    #[serde(default)]
    options: OptionSpec,
    output_dir: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub no_discretionary: bool,
    pub fallback_region: bool,
    pub quintile_rank: Option<RankVariable>,
    pub quintile_weight: Option<WeightUnit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunOptions {
    pub cohd: CohdOptions,
    pub quintiles: QuintileOptions,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub inputs: InputPaths,
    pub options: RunOptions,
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Reads `path` and applies `overrides`. Relative paths in the file are
    /// resolved against the file's directory.
    pub fn load(path: &Path, overrides: &Overrides) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let file: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_file(file, base, overrides)
    }

    fn from_file(file: ConfigFile, base: &Path, overrides: &Overrides) -> Result<RunConfig, CliError> {
        let spec = file.inputs;
        let dir = spec.dir.map(|d| base.join(d));
        let defaults = dir.as_deref().map(InputPaths::in_dir);
        let pick = |given: Option<PathBuf>, name: &str, default: Option<&PathBuf>| -> Result<PathBuf, CliError> {
            match (given, default) {
                (Some(p), _) => Ok(base.join(p)),
                (None, Some(d)) => Ok(d.clone()),
                (None, None) => Err(CliError::Config(format!("inputs.{name} is not set and inputs.dir is absent"))),
            }
        };
        let d = defaults.as_ref();
        let inputs = InputPaths {
            prices: pick(spec.prices, "prices", d.map(|d| &d.prices))?,
            items: pick(spec.items, "items", d.map(|d| &d.items))?,
            composition: pick(spec.composition, "composition", d.map(|d| &d.composition))?,
            guidelines: pick(spec.guidelines, "guidelines", d.map(|d| &d.guidelines))?,
            nutrient_refs: pick(spec.nutrient_refs, "nutrient_refs", d.map(|d| &d.nutrient_refs))?,
            ae_factors: pick(spec.ae_factors, "ae_factors", d.map(|d| &d.ae_factors))?,
            households: pick(spec.households, "households", d.map(|d| &d.households))?,
            members: pick(spec.members, "members", d.map(|d| &d.members))?,
            consumption: pick(spec.consumption, "consumption", d.map(|d| &d.consumption))?,
            regions: pick(spec.regions, "regions", d.map(|d| &d.regions))?,
        };

        let o = file.options;
        let period = o
            .period
            .map(|p| p.parse::<YearMonth>().map_err(|e| CliError::Config(format!("options.period '{p}': {e}"))))
            .transpose()?;
        let options = RunOptions {
            cohd: CohdOptions {
                include_discretionary: o.include_discretionary && !overrides.no_discretionary,
                fallback_parent_region: o.fallback_parent_region || overrides.fallback_region,
                period,
            },
            quintiles: QuintileOptions {
                rank: overrides.quintile_rank.unwrap_or(o.quintile_rank),
                weight: overrides.quintile_weight.unwrap_or(o.quintile_weight),
            },
        };
        let output_dir = match (&overrides.out, file.output_dir) {
            (Some(out), _) => out.clone(),
            (None, Some(d)) => base.join(d),
            (None, None) => base.join("out"),
        };
        Ok(RunConfig { inputs, options, output_dir })
    }

    /// Fails with an I/O error naming the first input that does not exist.
    pub fn check_inputs(&self) -> Result<(), CliError> {
        for (_, p) in self.inputs.entries() {
            if !p.is_file() {
                return Err(CliError::Io {
                    path: p.to_path_buf(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "input file not found"),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str, o: &Overrides) -> Result<RunConfig, CliError> {
        let file: ConfigFile = serde_json::from_str(json).unwrap();
        RunConfig::from_file(file, Path::new("/data"), o)
    }

    #[test]
    fn dir_defaults_and_relative_paths() {
        let c = parse(r#"{"inputs":{"dir":"in","prices":"p/x.csv"}}"#, &Overrides::default()).unwrap();
        assert_eq!(c.inputs.prices, PathBuf::from("/data/p/x.csv"));
        assert_eq!(c.inputs.items, PathBuf::from("/data/in/items.csv"));
        assert_eq!(c.output_dir, PathBuf::from("/data/out"));
        assert!(c.options.cohd.include_discretionary);
        assert_eq!(c.options.quintiles, QuintileOptions::default());
    }

    #[test]
    fn flags_win() {
        let o = Overrides {
            out: Some("elsewhere".into()),
            no_discretionary: true,
            fallback_region: true,
            quintile_rank: Some(RankVariable::PerAe),
            quintile_weight: Some(WeightUnit::Households),
        };
        let c = parse(
            r#"{"inputs":{"dir":"."},"options":{"quintile_rank":"percapita","period":"2022-03"},"output_dir":"o"}"#,
            &o,
        )
        .unwrap();
        assert_eq!(c.output_dir, PathBuf::from("elsewhere"));
        assert!(!c.options.cohd.include_discretionary);
        assert!(c.options.cohd.fallback_parent_region);
        assert_eq!(c.options.quintiles.rank, RankVariable::PerAe);
        assert_eq!(c.options.quintiles.weight, WeightUnit::Households);
        assert_eq!(c.options.cohd.period.unwrap().to_string(), "2022-03");
    }

    #[test]
    fn missing_input_is_config_error() {
        let e = parse(r#"{"inputs":{"prices":"p.csv"}}"#, &Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let e = parse(r#"{"inputs":{"dir":"."},"options":{"period":"March"}}"#, &Overrides::default()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
