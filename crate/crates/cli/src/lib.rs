// SPDX-License-Identifier: MIT OR Apache-2.0

//! Batch pipeline behind the `dietbench` command.
//!
//! Each `cmd_*` function loads and validates the inputs named by a
//! [`RunConfig`], computes what it needs in process, and writes its CSV
//! tables to the output directory. Only fatal validation issues abort.

pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;

use dietbench_core::adequacy::{
    adequacy_distributions, energy_adjust, group_energy_by_panel, item_energy_shares, score_diet, AdequacyScores,
    AdjustedDiet,
};
use dietbench_core::afford::{
    affordability_by_region, affordability_records, assign_quintiles, descriptive_table, panel_assignment,
    quintile_entries, spending_decomposition, AffordCoverage, AffordabilityRecord, Panel, PanelAssignment,
};
use dietbench_core::cohd::{least_cost_item_shares, summarize_costs};
use dietbench_core::ingest::{IngestError, Severity};
use dietbench_core::model::{DietBasket, YearMonth, REFERENCE_KCAL};
use dietbench_core::par::with_threads;
use dietbench_core::{cohd_all, validate, Dataset, Execution, ValidationReport};
use serde::Serialize;
use thiserror::Error;

pub use config::{Overrides, RunConfig, RunOptions};
use output::{write_file, write_table, Written};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{stage}: {count} fatal validation issue(s); first: {first}")]
    Validation { stage: &'static str, count: usize, first: String },
}

impl CliError {
    /// Process exit status: 1 validation, 2 I/O, 3 configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 1,
            CliError::Io { .. } => 2,
            CliError::Config(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Cohd,
    Afford,
    Adequacy,
    Run,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cohd => "cohd",
            Command::Afford => "afford",
            Command::Adequacy => "adequacy",
            Command::Run => "run",
        }
    }
}

/// Files written by one command, keyed by file name.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub written: BTreeMap<String, Written>,
    pub report: ValidationReport,
    pub notes: Vec<String>,
}

/// Runs `command` on a pool capped at `threads` workers (ambient pool when `None`).
pub fn execute(command: Command, config: &RunConfig, threads: Option<usize>) -> Result<Outcome, CliError> {
    with_threads(threads, || match command {
        Command::Validate => cmd_validate(config),
        Command::Cohd => cmd_cohd(config),
        Command::Afford => cmd_afford(config),
        Command::Adequacy => cmd_adequacy(config),
        Command::Run => cmd_run(config),
    })
}

struct Loaded {
    dataset: Option<Dataset>,
    report: ValidationReport,
}

fn load(config: &RunConfig) -> Result<Loaded, CliError> {
    config.check_inputs()?;
    let mut report = ValidationReport::default();
    match Dataset::load(&config.inputs, &mut report) {
        Ok(ds) => {
            report.merge(validate(&ds));
            Ok(Loaded { dataset: Some(ds), report })
        }
        Err(IngestError::Io { path, source }) => Err(CliError::Io { path, source }),
        Err(IngestError::Fatal(_)) => Ok(Loaded { dataset: None, report }),
    }
}

fn prepare_out(config: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&config.output_dir)
        .map_err(|source| CliError::Io { path: config.output_dir.clone(), source })
}

fn write_report(config: &RunConfig, report: &ValidationReport, out: &mut Outcome) -> Result<(), CliError> {
    let mut json = serde_json::to_vec_pretty(report).expect("report serializes");
    json.push(b'\n');
    let sha256 = write_file(&config.output_dir, "validation_report.json", &json)?;
    out.written.insert("validation_report.json".into(), Written { sha256, rows: report.issues.len() });
    Ok(())
}

/// Loads, validates, writes the report, and hands back a usable dataset.
fn checked(config: &RunConfig, stage: &'static str, out: &mut Outcome) -> Result<Dataset, CliError> {
    let loaded = load(config)?;
    prepare_out(config)?;
    write_report(config, &loaded.report, out)?;
    out.report = loaded.report;
    let fatal: Vec<_> = out.report.issues.iter().filter(|i| i.severity == Severity::Fatal).collect();
    match (loaded.dataset, fatal.first()) {
        (Some(ds), None) => Ok(ds),
        (_, first) => Err(CliError::Validation {
            stage,
            count: fatal.len().max(1),
            first: first.map(|i| i.to_string()).unwrap_or_else(|| "input could not be loaded".into()),
        }),
    }
}

fn put(out: &mut Outcome, config: &RunConfig, name: &str, table: &output::Table) -> Result<(), CliError> {
    let w = write_table(&config.output_dir, name, table)?;
    out.written.insert(name.to_string(), w);
    Ok(())
}

/// Writes validation_report.json; fails with exit status 1 on fatal issues.
pub fn cmd_validate(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    checked(config, "validate", &mut out)?;
    Ok(out)
}

struct CohdStage {
    period: Option<YearMonth>,
    baskets: BTreeMap<String, DietBasket>,
}

fn cohd_stage(ds: &Dataset, options: &RunOptions) -> CohdStage {
    CohdStage {
        period: options.cohd.period.or_else(|| ds.default_period()),
        baskets: cohd_all(ds, &options.cohd, Execution::Parallel),
    }
}

fn write_cohd(config: &RunConfig, ds: &Dataset, stage: &CohdStage, out: &mut Outcome) -> Result<(), CliError> {
    let summary = summarize_costs(&stage.baskets, &ds.households, &ds.region_names);
    if !summary.gaps.is_empty() {
        out.notes.push(format!(
            "{} household(s) at locations without a complete basket are left out of cost summaries",
            summary.gaps.len()
        ));
    }
    put(
        out,
        config,
        "cohd_by_location.csv",
        &output::cohd_by_location(&stage.baskets, &ds.location_regions(), stage.period),
    )?;
    put(out, config, "cohd_summary.csv", &output::cohd_summary(&summary))
}

/// Writes cohd_by_location.csv and cohd_summary.csv.
pub fn cmd_cohd(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let ds = checked(config, "cohd", &mut out)?;
    let stage = cohd_stage(&ds, &config.options);
    write_cohd(config, &ds, &stage, &mut out)?;
    Ok(out)
}

struct DietStage {
    diets: BTreeMap<String, AdjustedDiet>,
    exclusions: Vec<(String, String)>,
}

fn diet_stage(ds: &Dataset) -> DietStage {
    let results =
        Execution::Parallel.map(&ds.households, |h| energy_adjust(h, &ds.catalog, &ds.ae_table, REFERENCE_KCAL));
    let mut diets = BTreeMap::new();
    let mut exclusions = Vec::new();
    for (h, r) in ds.households.iter().zip(results) {
        match r {
            Ok(d) => {
                diets.insert(h.household_id.clone(), d);
            }
            Err(e) => exclusions.push((h.household_id.clone(), e.to_string())),
        }
    }
    DietStage { diets, exclusions }
}

struct AffordStage {
    records: Vec<AffordabilityRecord>,
    coverage: AffordCoverage,
    panels: PanelAssignment,
}

fn afford_stage(ds: &Dataset, options: &RunOptions, cohd: &CohdStage, diets: &DietStage) -> AffordStage {
    let entries = quintile_entries(&ds.households, &ds.catalog, &ds.ae_table, options.quintiles);
    let quintiles = assign_quintiles(&entries);
    let (records, coverage) =
        affordability_records(&ds.households, &ds.catalog, &diets.diets, &cohd.baskets, &quintiles);
    let panels = panel_assignment(&records, &quintiles);
    AffordStage { records, coverage, panels }
}

fn write_afford(
    config: &RunConfig,
    ds: &Dataset,
    cohd: &CohdStage,
    diets: &DietStage,
    stage: &AffordStage,
    out: &mut Outcome,
) -> Result<(), CliError> {
    let weight = config.options.quintiles.weight;
    let mut excluded: Vec<(String, String)> = stage
        .coverage
        .incomplete_basket
        .iter()
        .map(|id| (id.clone(), "no complete least-cost basket at household location".to_string()))
        .chain(stage.coverage.no_diet.iter().map(|id| (id.clone(), "no energy-adjusted diet".to_string())))
        .collect();
    excluded.sort();
    if !excluded.is_empty() {
        out.notes.push(format!("{} household(s) left out of affordability statistics", excluded.len()));
    }
    put(out, config, "affordability_by_household.csv", &output::affordability_by_household(&stage.records))?;
    put(
        out,
        config,
        "affordability_by_region.csv",
        &output::affordability_by_region(&affordability_by_region(
            &stage.records,
            &ds.households,
            &ds.region_names,
            weight,
        )),
    )?;
    put(out, config, "affordability_exclusions.csv", &output::exclusions(&excluded))?;
    put(out, config, "table2.csv", &output::table2(&descriptive_table(&stage.records, &ds.households, weight)))?;
    let fig3 =
        spending_decomposition(&stage.records, &ds.households, &diets.diets, &cohd.baskets, &stage.panels, weight);
    put(out, config, "figure3.csv", &output::figure3(&fig3))
}

/// Writes the affordability tables, Table 2 and the spending decomposition.
pub fn cmd_afford(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let ds = checked(config, "afford", &mut out)?;
    let cohd = cohd_stage(&ds, &config.options);
    let diets = diet_stage(&ds);
    let stage = afford_stage(&ds, &config.options, &cohd, &diets);
    write_afford(config, &ds, &cohd, &diets, &stage, &mut out)?;
    Ok(out)
}

fn write_adequacy(
    config: &RunConfig,
    ds: &Dataset,
    cohd: &CohdStage,
    diets: &DietStage,
    panels: &PanelAssignment,
    out: &mut Outcome,
) -> Result<(), CliError> {
    let weight = config.options.quintiles.weight;
    let mut exclusions = diets.exclusions.clone();
    let mut scores: Vec<AdequacyScores> = Vec::with_capacity(diets.diets.len());
    let mut scored: Vec<&AdjustedDiet> = Vec::with_capacity(diets.diets.len());
    for d in diets.diets.values() {
        match score_diet(d, &ds.catalog, &ds.nutrient_refs, &ds.guideline) {
            Ok(s) => {
                scores.push(s);
                scored.push(d);
            }
            Err(e) => exclusions.push((d.household_id.clone(), e.to_string())),
        }
    }
    exclusions.sort();
    let weights: Vec<f64> =
        scored.iter().map(|d| ds.household(&d.household_id).map(|h| weight.weight(h)).unwrap_or(0.0)).collect();

    put(
        out,
        config,
        "adequacy_by_household.csv",
        &output::adequacy_by_household(&scores, &diets.diets, &ds.households),
    )?;
    let dist = adequacy_distributions(&scores, panels, &weights);
    if !dist.empty_panels.is_empty() {
        let names: Vec<String> = dist.empty_panels.iter().map(Panel::label).collect();
        out.notes.push(format!("empty adequacy panels: {}", names.join(", ")));
    }
    put(out, config, "adequacy_distributions.csv", &output::adequacy_distributions(&dist))?;
    put(
        out,
        config,
        "figure4.csv",
        &output::figure4(&group_energy_by_panel(&scored, panels, &weights, &ds.guideline)),
    )?;

    let least_cost = least_cost_item_shares(&cohd.baskets, &ds.households);
    let mut panel_shares = Vec::new();
    for panel in Panel::all() {
        let (d, w): (Vec<&AdjustedDiet>, Vec<f64>) = scored
            .iter()
            .zip(&weights)
            .filter(|(d, _)| panels.panels_of(&d.household_id).contains(&panel))
            .map(|(d, w)| (*d, *w))
            .unzip();
        if !d.is_empty() {
            panel_shares.push((panel.label(), item_energy_shares(&d, &w)));
        }
    }
    put(out, config, "item_shares.csv", &output::item_shares(&least_cost, &panel_shares))?;
    put(out, config, "adequacy_exclusions.csv", &output::exclusions(&exclusions))
}

/// Writes per-household adequacy scores, their panel distributions, group
/// energy by panel, item shares and the exclusion list.
pub fn cmd_adequacy(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let ds = checked(config, "adequacy", &mut out)?;
    let cohd = cohd_stage(&ds, &config.options);
    let diets = diet_stage(&ds);
    let afford = afford_stage(&ds, &config.options, &cohd, &diets);
    write_adequacy(config, &ds, &cohd, &diets, &afford.panels, &mut out)?;
    Ok(out)
}

#[derive(Debug, Serialize)]
struct InputEntry {
    path: String,
    sha256: String,
    rows_read: u64,
    rows_rejected: u64,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    timestamp: u64,
    options: &'a RunOptions,
    period: Option<String>,
    inputs: BTreeMap<&'static str, InputEntry>,
    outputs: &'a BTreeMap<String, Written>,
    warnings: Vec<String>,
    notes: &'a [String],
}

/// Every stage in turn, then run_manifest.json.
pub fn cmd_run(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let ds = checked(config, "run", &mut out)?;
    let cohd = cohd_stage(&ds, &config.options);
    write_cohd(config, &ds, &cohd, &mut out)?;
    let diets = diet_stage(&ds);
    let afford = afford_stage(&ds, &config.options, &cohd, &diets);
    write_afford(config, &ds, &cohd, &diets, &afford, &mut out)?;
    write_adequacy(config, &ds, &cohd, &diets, &afford.panels, &mut out)?;

    let mut inputs = BTreeMap::new();
    for (name, path) in config.inputs.entries() {
        let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        let stats = out.report.inputs.get(name).copied().unwrap_or_default();
        inputs.insert(
            name,
            InputEntry {
                path: path.display().to_string(),
                sha256: output::sha256_hex(&bytes),
                rows_read: stats.rows_read,
                rows_rejected: stats.rows_rejected,
            },
        );
    }
    let timestamp =
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = Manifest {
        tool: "dietbench",
        version: env!("CARGO_PKG_VERSION"),
        timestamp,
        options: &config.options,
        period: cohd.period.map(|p| p.to_string()),
        inputs,
        outputs: &out.written,
        warnings: out.report.issues.iter().filter(|i| i.severity == Severity::Warning).map(|i| i.to_string()).collect(),
        notes: &out.notes,
    };
    let mut json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    json.push(b'\n');
    write_file(&config.output_dir, "run_manifest.json", &json)?;
    Ok(out)
}
