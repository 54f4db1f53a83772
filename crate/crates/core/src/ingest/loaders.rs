// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rust_decimal::Decimal;

use super::report::ValidationReport;
use super::table::{Row, Table};
use super::IngestError;
use crate::model::{
    AeBand, AeFactorTable, CompositionRecord, ConsumptionRecord, FoodGroup, FoodItem, GroupTarget, GuidelineSet,
    Household, Member, NutrientId, NutrientReferenceSet, NutrientVector, PriceObservation, Sex, YearMonth,
};
use crate::money::{Money, UnitPrice};

pub const PRICE_COLUMNS: [&str; 6] = ["item_id", "location_id", "year", "month", "price", "unit"];
pub const ITEM_COLUMNS: [&str; 4] = ["item_id", "name", "group", "composition_key"];
pub const GUIDELINE_COLUMNS: [&str; 3] = ["group", "energy_kcal", "item_count"];
pub const NUTRIENT_REF_COLUMNS: [&str; 3] = ["nutrient", "reference_value", "unit"];
pub const AE_COLUMNS: [&str; 4] = ["sex", "age_min", "age_max", "factor"];
pub const HOUSEHOLD_COLUMNS: [&str; 5] = ["household_id", "location_id", "region_id", "weight", "period_days"];
pub const MEMBER_COLUMNS: [&str; 3] = ["household_id", "age_years", "sex"];
pub const CONSUMPTION_COLUMNS: [&str; 4] = ["household_id", "item_id", "quantity_g", "expenditure"];
pub const REGION_COLUMNS: [&str; 2] = ["region_id", "label"];

/// Optional `households.csv` columns.
pub const TOTAL_EXPENDITURE_COLUMN: &str = "total_expenditure";
pub const RURAL_COLUMN: &str = "rural";

pub fn composition_columns() -> Vec<&'static str> {
    let mut cols = vec!["composition_key", "energy_kcal_100g", "edible_fraction"];
    cols.extend(NutrientId::ALL.iter().map(|n| n.composition_column()));
    cols
}

fn parse_decimal(s: &str) -> Option<Decimal> {
    Decimal::from_str(s).or_else(|_| Decimal::from_scientific(s)).ok()
}

fn parse_f64(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn remember(slot: &mut Option<IngestError>, err: IngestError) {
    if slot.is_none() {
        *slot = Some(err);
    }
}

fn finish<T>(value: T, failed: Option<IngestError>) -> Result<T, IngestError> {
    match failed {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Loads `prices.csv`, normalizing every price to currency per gram.
///
/// Rows with an unparseable or non-positive price, or an unknown unit, are
/// rejected with a warning. When the same item is priced more than once at
/// a location in a month the lowest price is kept.
pub fn load_prices(path: &Path, report: &mut ValidationReport) -> Result<Vec<PriceObservation>, IngestError> {
    let mut t = Table::open(path, &PRICE_COLUMNS, report)?;
    let rows = t.rows(report);
    let mut kept: BTreeMap<(String, String, YearMonth), (UnitPrice, u64)> = BTreeMap::new();
    for row in rows {
        let item_id = row.get(&t, "item_id");
        let location_id = row.get(&t, "location_id");
        if item_id.is_empty() || location_id.is_empty() {
            t.reject(report, row.line, "blank item_id or location_id");
            continue;
        }
        let period = match (row.get(&t, "year").parse::<i32>(), row.get(&t, "month").parse::<u8>()) {
            (Ok(year), Ok(month)) if (1..=12).contains(&month) => YearMonth { year, month },
            _ => {
                t.reject(report, row.line, "unparseable year/month");
                continue;
            }
        };
        let raw = row.get(&t, "price");
        let Some(price) = parse_decimal(raw) else {
            t.reject(report, row.line, format!("unparseable price '{raw}'"));
            continue;
        };
        if price <= Decimal::ZERO {
            t.reject(report, row.line, format!("non-positive price {price}"));
            continue;
        }
        let per_gram = match row.get(&t, "unit").to_ascii_lowercase().as_str() {
            "g" => price,
            "kg" => price / Decimal::from(1000),
            other => {
                t.reject(report, row.line, format!("unknown unit '{other}' (expected g or kg)"));
                continue;
            }
        };
        let per_gram = UnitPrice::new(per_gram);
        match kept.entry((location_id.to_string(), item_id.to_string(), period)) {
            Entry::Vacant(v) => {
                v.insert((per_gram, row.line));
            }
            Entry::Occupied(mut o) => {
                let (prev, prev_line) = *o.get();
                let dropped = if per_gram < prev {
                    o.insert((per_gram, row.line));
                    prev_line
                } else {
                    row.line
                };
                t.reject(
                    report,
                    dropped,
                    format!("duplicate price for item '{item_id}' at '{location_id}' in {period}; kept the lower"),
                );
            }
        }
    }
    Ok(kept
        .into_iter()
        .map(|((location_id, item_id, period), (price_per_gram, _))| PriceObservation {
            item_id,
            location_id,
            period,
            price_per_gram,
        })
        .collect())
}

/// Loads `items.csv`.
pub fn load_items(path: &Path, report: &mut ValidationReport) -> Result<BTreeMap<String, FoodItem>, IngestError> {
    let mut t = Table::open(path, &ITEM_COLUMNS, report)?;
    let mut items: BTreeMap<String, (FoodItem, u64)> = BTreeMap::new();
    let mut failed = None;
    for row in t.rows(report) {
        let item_id = row.get(&t, "item_id").to_string();
        if item_id.is_empty() {
            t.reject(report, row.line, "blank item_id");
            continue;
        }
        let group = match FoodGroup::from_str(row.get(&t, "group")) {
            Ok(g) => g,
            Err(e) => {
                let err = t.fatal(report, row.line, format!("item '{item_id}': {e}"));
                remember(&mut failed, err);
                continue;
            }
        };
        let item = FoodItem {
            item_id: item_id.clone(),
            name: row.get(&t, "name").to_string(),
            group,
            composition_key: row.get(&t, "composition_key").to_string(),
        };
        if let Some((_, first)) = items.get(&item_id) {
            let msg = format!("duplicate item_id '{item_id}' (first at line {first})");
            let err = t.fatal(report, row.line, msg);
            remember(&mut failed, err);
            continue;
        }
        items.insert(item_id, (item, row.line));
    }
    finish(items.into_iter().map(|(k, (v, _))| (k, v)).collect(), failed)
}

/// Loads `composition.csv`.
///
/// A blank edible fraction defaults to 1 and a blank nutrient cell to 0,
/// each with a warning. Duplicate keys and negative energy are fatal.
pub fn load_composition(
    path: &Path,
    report: &mut ValidationReport,
) -> Result<BTreeMap<String, CompositionRecord>, IngestError> {
    let columns = composition_columns();
    let mut t = Table::open(path, &columns, report)?;
    let mut out: BTreeMap<String, (CompositionRecord, u64)> = BTreeMap::new();
    let mut failed = None;
    'rows: for row in t.rows(report) {
        let key = row.get(&t, "composition_key").to_string();
        if key.is_empty() {
            t.reject(report, row.line, "blank composition_key");
            continue;
        }
        if let Some((_, first)) = out.get(&key) {
            let msg = format!("duplicate composition_key '{key}' at lines {first} and {}", row.line);
            let err = t.fatal(report, row.line, msg);
            remember(&mut failed, err);
            continue;
        }
        let raw_energy = row.get(&t, "energy_kcal_100g");
        let Some(energy) = parse_decimal(raw_energy) else {
            t.reject(report, row.line, format!("'{key}': unparseable energy '{raw_energy}'"));
            continue;
        };
        if energy < Decimal::ZERO {
            let err = t.fatal(report, row.line, format!("'{key}': negative energy {energy}"));
            remember(&mut failed, err);
            continue;
        }
        let raw_edible = row.get(&t, "edible_fraction");
        let edible = if raw_edible.is_empty() {
            report.warn(&t.file, Some(row.line), format!("'{key}': blank edible_fraction, using 1.0"));
            Decimal::ONE
        } else {
            match parse_decimal(raw_edible) {
                Some(v) if v > Decimal::ZERO && v <= Decimal::ONE => v,
                Some(v) => {
                    let msg = format!("'{key}': edible_fraction {v} outside (0, 1]");
                    let err = t.fatal(report, row.line, msg);
                    remember(&mut failed, err);
                    continue;
                }
                None => {
                    t.reject(report, row.line, format!("'{key}': unparseable edible_fraction"));
                    continue;
                }
            }
        };
        let mut nutrients = NutrientVector::default();
        for n in NutrientId::ALL {
            let col = n.composition_column();
            let raw = row.get(&t, col);
            if raw.is_empty() {
                report.warn(&t.file, Some(row.line), format!("'{key}': blank {col}, using 0"));
                continue;
            }
            match parse_f64(raw) {
                Some(v) if v >= 0.0 => nutrients.set(n, v),
                _ => {
                    t.reject(report, row.line, format!("'{key}': invalid {col} '{raw}'"));
                    continue 'rows;
                }
            }
        }
        let rec = CompositionRecord {
            composition_key: key.clone(),
            energy_density: energy,
            edible_fraction: edible,
            nutrients,
        };
        out.insert(key, (rec, row.line));
    }
    finish(out.into_iter().map(|(k, (v, _))| (k, v)).collect(), failed)
}

/// Writes composition records in the `composition.csv` schema.
pub fn write_composition<'a, W: Write>(
    writer: W,
    records: impl IntoIterator<Item = &'a CompositionRecord>,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(composition_columns())?;
    for r in records {
        let mut fields = vec![r.composition_key.clone(), r.energy_density.to_string(), r.edible_fraction.to_string()];
        fields.extend(r.nutrients.0.iter().map(|v| v.to_string()));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// Loads `guidelines.csv` (one row per guided group plus a `TOTAL` row).
pub fn load_guidelines(path: &Path, report: &mut ValidationReport) -> Result<GuidelineSet, IngestError> {
    let mut t = Table::open(path, &GUIDELINE_COLUMNS, report)?;
    let mut targets = BTreeMap::new();
    let mut total = None;
    let mut failed = None;
    for row in t.rows(report) {
        let name = row.get(&t, "group");
        let raw_energy = row.get(&t, "energy_kcal");
        let Some(energy) = parse_decimal(raw_energy) else {
            let err = t.fatal(report, row.line, format!("unparseable energy_kcal '{raw_energy}'"));
            remember(&mut failed, err);
            continue;
        };
        if name.eq_ignore_ascii_case("TOTAL") {
            total = Some(energy);
            continue;
        }
        let group = match FoodGroup::from_str(name) {
            Ok(g) => g,
            Err(e) => {
                let err = t.fatal(report, row.line, e.to_string());
                remember(&mut failed, err);
                continue;
            }
        };
        let raw_count = row.get(&t, "item_count");
        let item_count = if raw_count.is_empty() { Some(0) } else { raw_count.parse::<u32>().ok() };
        let Some(item_count) = item_count else {
            let err = t.fatal(report, row.line, format!("unparseable item_count '{raw_count}'"));
            remember(&mut failed, err);
            continue;
        };
        if !group.is_costed() {
            if energy.is_zero() {
                continue;
            }
            let err = t.fatal(report, row.line, format!("group {group} cannot carry an energy target"));
            remember(&mut failed, err);
            continue;
        }
        if targets.insert(group, GroupTarget { energy_kcal: energy, item_count }).is_some() {
            let err = t.fatal(report, row.line, format!("duplicate row for {group}"));
            remember(&mut failed, err);
        }
    }
    if let Some(e) = failed {
        return Err(e);
    }
    let Some(total) = total else {
        return Err(IngestError::Fatal(report.fatal(&t.file, None, "missing TOTAL row")));
    };
    GuidelineSet::new(targets, total).map_err(|e| IngestError::Fatal(report.fatal(&t.file, None, e.to_string())))
}

/// Loads `nutrient_refs.csv`; all fourteen nutrients must be present and positive.
pub fn load_nutrient_refs(path: &Path, report: &mut ValidationReport) -> Result<NutrientReferenceSet, IngestError> {
    let mut t = Table::open(path, &NUTRIENT_REF_COLUMNS, report)?;
    let mut values: BTreeMap<NutrientId, f64> = BTreeMap::new();
    let mut failed = None;
    for row in t.rows(report) {
        let n = match NutrientId::from_str(row.get(&t, "nutrient")) {
            Ok(n) => n,
            Err(e) => {
                t.reject(report, row.line, e.to_string());
                continue;
            }
        };
        let raw = row.get(&t, "reference_value");
        match parse_f64(raw) {
            Some(v) if v > 0.0 => {
                if values.insert(n, v).is_some() {
                    let err = t.fatal(report, row.line, format!("duplicate reference for {n}"));
                    remember(&mut failed, err);
                }
            }
            _ => {
                let err = t.fatal(report, row.line, format!("reference for {n} must be positive, got '{raw}'"));
                remember(&mut failed, err);
                continue;
            }
        }
        let unit = row.get(&t, "unit");
        if !unit.is_empty() && !unit.eq_ignore_ascii_case(n.unit()) {
            report.warn(
                &t.file,
                Some(row.line),
                format!("{n} unit '{unit}' differs from composition unit '{}'", n.unit()),
            );
        }
    }
    for n in NutrientId::ALL {
        if !values.contains_key(&n) {
            let err = IngestError::Fatal(report.fatal(&t.file, None, format!("missing nutrient {n}")));
            remember(&mut failed, err);
        }
    }
    if let Some(e) = failed {
        return Err(e);
    }
    let mut vec = NutrientVector::default();
    for (n, v) in values {
        vec.set(n, v);
    }
    NutrientReferenceSet::new(vec).map_err(|e| IngestError::Fatal(report.fatal(&t.file, None, e.to_string())))
}

/// Loads `ae_factors.csv`. A blank `age_max` makes the band open-ended.
pub fn load_ae_factors(path: &Path, report: &mut ValidationReport) -> Result<AeFactorTable, IngestError> {
    let mut t = Table::open(path, &AE_COLUMNS, report)?;
    let mut bands = Vec::new();
    let mut failed = None;
    for row in t.rows(report) {
        let sex = Sex::from_str(row.get(&t, "sex"));
        let age_min = row.get(&t, "age_min").parse::<u32>();
        let raw_max = row.get(&t, "age_max");
        let age_max = match raw_max.to_ascii_lowercase().as_str() {
            "" | "inf" | "+" => Ok(None),
            s => s.parse::<u32>().map(Some),
        };
        let factor = parse_f64(row.get(&t, "factor"));
        match (sex, age_min, age_max, factor) {
            (Ok(sex), Ok(age_min), Ok(age_max), Some(factor)) => bands.push(AeBand { sex, age_min, age_max, factor }),
            _ => {
                let err = t.fatal(report, row.line, "unparseable adult-equivalent band");
                remember(&mut failed, err);
            }
        }
    }
    if let Some(e) = failed {
        return Err(e);
    }
    let table = AeFactorTable::new(bands)
        .and_then(|tbl| tbl.check_partition().map(|_| tbl))
        .map_err(|e| IngestError::Fatal(report.fatal(&t.file, None, e.to_string())))?;
    Ok(table)
}

/// Loads `regions.csv`.
pub fn load_regions(path: &Path, report: &mut ValidationReport) -> Result<BTreeMap<String, String>, IngestError> {
    let mut t = Table::open(path, &REGION_COLUMNS, report)?;
    let mut out = BTreeMap::new();
    let mut failed = None;
    for row in t.rows(report) {
        let id = row.get(&t, "region_id").to_string();
        if id.is_empty() {
            t.reject(report, row.line, "blank region_id");
            continue;
        }
        if out.insert(id.clone(), row.get(&t, "label").to_string()).is_some() {
            let err = t.fatal(report, row.line, format!("duplicate region_id '{id}'"));
            remember(&mut failed, err);
        }
    }
    finish(out, failed)
}

fn parse_roster_row(t: &Table, row: &Row) -> Result<Household, String> {
    let household_id = row.get(t, "household_id");
    if household_id.is_empty() {
        return Err("blank household_id".into());
    }
    let weight = parse_f64(row.get(t, "weight"))
        .filter(|w| *w > 0.0)
        .ok_or_else(|| format!("household '{household_id}': weight must be positive"))?;
    let period_days = row
        .get(t, "period_days")
        .parse::<u32>()
        .ok()
        .filter(|d| *d > 0)
        .ok_or_else(|| format!("household '{household_id}': period_days must be a positive integer"))?;
    let total_expenditure = if t.has_column(TOTAL_EXPENDITURE_COLUMN) {
        let raw = row.get(t, TOTAL_EXPENDITURE_COLUMN);
        if raw.is_empty() {
            None
        } else {
            let v = parse_decimal(raw)
                .filter(|v| *v >= Decimal::ZERO)
                .ok_or_else(|| format!("household '{household_id}': invalid total_expenditure '{raw}'"))?;
            Some(Money::new(v))
        }
    } else {
        None
    };
    let rural = if t.has_column(RURAL_COLUMN) {
        match row.get(t, RURAL_COLUMN).to_ascii_lowercase().as_str() {
            "" => None,
            "1" | "true" | "yes" => Some(true),
            "0" | "false" | "no" => Some(false),
            other => return Err(format!("household '{household_id}': invalid rural flag '{other}'")),
        }
    } else {
        None
    };
    Ok(Household {
        household_id: household_id.to_string(),
        location_id: row.get(t, "location_id").to_string(),
        region_id: row.get(t, "region_id").to_string(),
        sampling_weight: weight,
        members: Vec::new(),
        records: Vec::new(),
        period_days,
        total_expenditure,
        rural,
    })
}

/// Loads the household roster, members and consumption records.
///
/// Member or consumption rows naming an unknown household are dropped with
/// a warning; a household left without members is fatal.
pub fn load_households(
    households_path: &Path,
    members_path: &Path,
    consumption_path: &Path,
    report: &mut ValidationReport,
) -> Result<Vec<Household>, IngestError> {
    let mut failed = None;
    let mut roster: BTreeMap<String, Household> = BTreeMap::new();
    let mut ht = Table::open(households_path, &HOUSEHOLD_COLUMNS, report)?;
    for row in ht.rows(report) {
        match parse_roster_row(&ht, &row) {
            Ok(h) => match roster.entry(h.household_id.clone()) {
                std::collections::btree_map::Entry::Occupied(e) => {
                    let msg = format!("duplicate household_id '{}'", e.key());
                    let err = ht.fatal(report, row.line, msg);
                    remember(&mut failed, err);
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(h);
                }
            },
            Err(msg) => {
                let err = ht.fatal(report, row.line, msg);
                remember(&mut failed, err);
            }
        }
    }

    let mut mt = Table::open(members_path, &MEMBER_COLUMNS, report)?;
    for row in mt.rows(report) {
        let id = row.get(&mt, "household_id");
        let Some(h) = roster.get_mut(id) else {
            mt.reject(report, row.line, format!("member of unknown household '{id}'"));
            continue;
        };
        match (row.get(&mt, "age_years").parse::<u32>(), Sex::from_str(row.get(&mt, "sex"))) {
            (Ok(age), Ok(sex)) => h.members.push(Member::new(age, sex)),
            _ => mt.reject(report, row.line, "unparseable age_years or sex"),
        }
    }

    let mut ct = Table::open(consumption_path, &CONSUMPTION_COLUMNS, report)?;
    for row in ct.rows(report) {
        let id = row.get(&ct, "household_id");
        let Some(h) = roster.get_mut(id) else {
            ct.reject(report, row.line, format!("consumption for unknown household '{id}'"));
            continue;
        };
        let item_id = row.get(&ct, "item_id");
        let quantity = parse_f64(row.get(&ct, "quantity_g"));
        let expenditure = parse_decimal(row.get(&ct, "expenditure"));
        match (quantity, expenditure) {
            (Some(q), Some(e)) if q >= 0.0 && e >= Decimal::ZERO => {
                if q == 0.0 && e.is_zero() {
                    ct.reject(report, row.line, "quantity and expenditure both zero");
                    continue;
                }
                if item_id.is_empty() {
                    ct.reject(report, row.line, "blank item_id");
                    continue;
                }
                h.records.push(ConsumptionRecord {
                    item_id: item_id.to_string(),
                    quantity_g: q,
                    expenditure: Money::new(e),
                });
            }
            _ => ct.reject(report, row.line, "invalid quantity_g or expenditure"),
        }
    }

    for h in roster.values_mut() {
        if h.members.is_empty() {
            let err = IngestError::Fatal(report.fatal(
                &ht.file,
                None,
                format!("household '{}' has no members", h.household_id),
            ));
            remember(&mut failed, err);
        }
        h.records.sort_by(|a, b| {
            a.item_id
                .cmp(&b.item_id)
                .then(a.quantity_g.total_cmp(&b.quantity_g))
                .then(a.expenditure.cmp(&b.expenditure))
        });
        h.members.sort_by_key(|m| (m.age_years, m.sex));
    }
    finish(roster.into_values().collect(), failed)
}
