// SPDX-License-Identifier: MIT OR Apache-2.0

//! Loading, normalizing and cross-checking the input datasets.
//!
//! Every loader reports recoverable problems as warnings in a
//! [`ValidationReport`] and returns [`IngestError::Fatal`] when the file
//! cannot be used at all. All outputs are sorted by id so identical bytes
//! always give an identical [`Dataset`].

mod loaders;
mod report;
mod table;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use loaders::{
    composition_columns, load_ae_factors, load_composition, load_guidelines, load_households, load_items,
    load_nutrient_refs, load_prices, load_regions, write_composition, AE_COLUMNS, CONSUMPTION_COLUMNS,
    GUIDELINE_COLUMNS, HOUSEHOLD_COLUMNS, ITEM_COLUMNS, MEMBER_COLUMNS, NUTRIENT_REF_COLUMNS, PRICE_COLUMNS,
    REGION_COLUMNS, RURAL_COLUMN, TOTAL_EXPENDITURE_COLUMN,
};
pub use report::{FileStats, Issue, LocationCoverage, Severity, ValidationReport};

use crate::model::{
    AeFactorTable, FoodCatalog, FoodGroup, GuidelineSet, Household, NutrientReferenceSet, PriceObservation, YearMonth,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Fatal(Issue),
}

/// Locations of the ten input files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputPaths {
    pub prices: PathBuf,
    pub items: PathBuf,
    pub composition: PathBuf,
    pub guidelines: PathBuf,
    pub nutrient_refs: PathBuf,
    pub ae_factors: PathBuf,
    pub households: PathBuf,
    pub members: PathBuf,
    pub consumption: PathBuf,
    pub regions: PathBuf,
}

impl InputPaths {
    /// Conventional file names inside one directory.
    pub fn in_dir(dir: &Path) -> Self {
        InputPaths {
            prices: dir.join("prices.csv"),
            items: dir.join("items.csv"),
            composition: dir.join("composition.csv"),
            guidelines: dir.join("guidelines.csv"),
            nutrient_refs: dir.join("nutrient_refs.csv"),
            ae_factors: dir.join("ae_factors.csv"),
            households: dir.join("households.csv"),
            members: dir.join("members.csv"),
            consumption: dir.join("consumption.csv"),
            regions: dir.join("regions.csv"),
        }
    }

    /// `(name, path)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, &Path); 10] {
        [
            ("prices", &self.prices),
            ("items", &self.items),
            ("composition", &self.composition),
            ("guidelines", &self.guidelines),
            ("nutrient_refs", &self.nutrient_refs),
            ("ae_factors", &self.ae_factors),
            ("households", &self.households),
            ("members", &self.members),
            ("consumption", &self.consumption),
            ("regions", &self.regions),
        ]
    }
}

/// A matched, analysis-ready dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub catalog: FoodCatalog,
    pub guideline: GuidelineSet,
    pub nutrient_refs: NutrientReferenceSet,
    pub ae_table: AeFactorTable,
    /// Sorted by (location, item, period).
    pub prices: Vec<PriceObservation>,
    /// Sorted by household id.
    pub households: Vec<Household>,
    pub region_names: BTreeMap<String, String>,
}

impl Dataset {
    /// Loads all ten inputs. I/O errors stop immediately; otherwise every
    /// file is read so the report lists all fatal issues at once.
    pub fn load(paths: &InputPaths, report: &mut ValidationReport) -> Result<Dataset, IngestError> {
        fn keep<T>(r: Result<T, IngestError>, first: &mut Option<IngestError>) -> Result<Option<T>, IngestError> {
            match r {
                Ok(v) => Ok(Some(v)),
                Err(e @ IngestError::Io { .. }) => Err(e),
                Err(e) => {
                    first.get_or_insert(e);
                    Ok(None)
                }
            }
        }
        let mut first = None;
        let items = keep(load_items(&paths.items, report), &mut first)?;
        let compositions = keep(load_composition(&paths.composition, report), &mut first)?;
        let guideline = keep(load_guidelines(&paths.guidelines, report), &mut first)?;
        let nutrient_refs = keep(load_nutrient_refs(&paths.nutrient_refs, report), &mut first)?;
        let ae_table = keep(load_ae_factors(&paths.ae_factors, report), &mut first)?;
        let prices = keep(load_prices(&paths.prices, report), &mut first)?;
        let households =
            keep(load_households(&paths.households, &paths.members, &paths.consumption, report), &mut first)?;
        let regions = keep(load_regions(&paths.regions, report), &mut first)?;
        if let Some(e) = first {
            return Err(e);
        }
        // all Some once no loader failed
        Ok(Dataset {
            catalog: FoodCatalog { items: items.unwrap(), compositions: compositions.unwrap() },
            guideline: guideline.unwrap(),
            nutrient_refs: nutrient_refs.unwrap(),
            ae_table: ae_table.unwrap(),
            prices: prices.unwrap(),
            households: households.unwrap(),
            region_names: regions.unwrap(),
        })
    }

    /// Distinct price periods, ascending.
    pub fn periods(&self) -> Vec<YearMonth> {
        let set: BTreeSet<YearMonth> = self.prices.iter().map(|p| p.period).collect();
        set.into_iter().collect()
    }

    /// The period used when none is requested: the most recent one.
    pub fn default_period(&self) -> Option<YearMonth> {
        self.prices.iter().map(|p| p.period).max()
    }

    /// Distinct priced locations, sorted.
    pub fn locations(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.prices.iter().map(|p| p.location_id.as_str()).collect();
        set.into_iter().map(str::to_string).collect()
    }

    /// Region of each location, taken from the household roster. A location
    /// whose households disagree maps to the lexicographically first region.
    pub fn location_regions(&self) -> BTreeMap<String, String> {
        let mut out: BTreeMap<String, String> = BTreeMap::new();
        for h in &self.households {
            out.entry(h.location_id.clone())
                .and_modify(|r| {
                    if h.region_id < *r {
                        *r = h.region_id.clone();
                    }
                })
                .or_insert_with(|| h.region_id.clone());
        }
        out
    }

    pub fn household(&self, id: &str) -> Option<&Household> {
        self.households.binary_search_by(|h| h.household_id.as_str().cmp(id)).ok().map(|i| &self.households[i])
    }
}

/// Cross-references ids, composition keys and locations, and classifies
/// every priced location by which guideline groups it can satisfy.
pub fn validate(dataset: &Dataset) -> ValidationReport {
    let mut report = ValidationReport::default();
    let catalog = &dataset.catalog;
    let mut unmatched = BTreeSet::new();

    for item in catalog.items.values() {
        if item.group == FoodGroup::Excluded {
            continue;
        }
        match catalog.compositions.get(&item.composition_key) {
            None => {
                report.fatal(
                    "items.csv",
                    None,
                    format!("item '{}' references absent composition_key '{}'", item.item_id, item.composition_key),
                );
                unmatched.insert(item.item_id.clone());
            }
            Some(c) if item.group.is_costed() && c.energy_density.is_zero() => {
                report.warn(
                    "composition.csv",
                    None,
                    format!("item '{}' has zero energy and cannot be priced per kcal", item.item_id),
                );
            }
            Some(_) => {}
        }
    }

    let priced_unknown: BTreeSet<&str> =
        dataset.prices.iter().filter(|p| !catalog.items.contains_key(&p.item_id)).map(|p| p.item_id.as_str()).collect();
    for id in priced_unknown {
        report.fatal("prices.csv", None, format!("price for unknown item '{id}'"));
        unmatched.insert(id.to_string());
    }
    let consumed_unknown: BTreeSet<&str> = dataset
        .households
        .iter()
        .flat_map(|h| h.records.iter())
        .filter(|r| !catalog.items.contains_key(&r.item_id))
        .map(|r| r.item_id.as_str())
        .collect();
    for id in consumed_unknown {
        report.fatal("consumption.csv", None, format!("consumption of unknown item '{id}'"));
        unmatched.insert(id.to_string());
    }

    let periods = dataset.periods();
    let period = dataset.default_period();
    if periods.len() > 1 {
        if let Some(p) = period {
            report.warn(
                "prices.csv",
                None,
                format!("{} price periods present; analyses default to {p}", periods.len()),
            );
        }
    }

    let priced_locations: BTreeSet<String> = dataset.locations().into_iter().collect();
    let mut hh_locations = BTreeSet::new();
    for h in &dataset.households {
        if hh_locations.insert(h.location_id.as_str()) && !priced_locations.contains(&h.location_id) {
            report.warn("households.csv", None, format!("location '{}' has households but no prices", h.location_id));
        }
        if !dataset.region_names.contains_key(&h.region_id) {
            report.warn(
                "households.csv",
                None,
                format!("household '{}' has unlabelled region '{}'", h.household_id, h.region_id),
            );
        }
    }

    if let Some(period) = period {
        for location in &priced_locations {
            let mut counts: BTreeMap<FoodGroup, usize> = BTreeMap::new();
            for p in dataset.prices.iter().filter(|p| &p.location_id == location && p.period == period) {
                let Some(item) = catalog.item(&p.item_id) else { continue };
                let convertible =
                    catalog.composition_of(&p.item_id).is_some_and(|c| c.energy_density > rust_decimal::Decimal::ZERO);
                if item.group.is_costed() && convertible {
                    *counts.entry(item.group).or_default() += 1;
                }
            }
            let mut unsatisfiable = Vec::new();
            for (group, target) in dataset.guideline.targets() {
                if target.energy_kcal.is_zero() {
                    continue;
                }
                let have = counts.get(group).copied().unwrap_or(0);
                if have < target.item_count as usize {
                    report.warn(
                        "prices.csv",
                        None,
                        format!(
                            "group {group} unsatisfiable at location '{location}' ({have} of {} items priced)",
                            target.item_count
                        ),
                    );
                    unsatisfiable.push(*group);
                }
            }
            report.locations.push(LocationCoverage { location_id: location.clone(), unsatisfiable });
        }
    }
    report.unmatched_items = unmatched.into_iter().collect();
    report
}
