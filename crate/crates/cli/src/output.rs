// SPDX-License-Identifier: MIT OR Apache-2.0

//! Plot-ready CSV tables. Rows are sorted by their leading id columns and
//! floats carry six decimals so output bytes are stable.

use std::collections::BTreeMap;
use std::path::Path;

use dietbench_core::adequacy::{AdequacyScores, AdjustedDiet, DistributionTable, GroupEnergyRow, ItemShares};
use dietbench_core::afford::{AffordabilityRecord, RegionAffordRow, SpendingRow, Table2Row};
use dietbench_core::cohd::CohdSummary;
use dietbench_core::model::{DietBasket, FoodGroup, Household, NutrientId, YearMonth};
use dietbench_core::Money;
use sha2::{Digest, Sha256};

use crate::CliError;

/// An in-memory CSV table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|s| s.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        // writing to a Vec cannot fail
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// Record of one file written.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Written {
    pub sha256: String,
    pub rows: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<String, CliError> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|source| CliError::Io { path, source })?;
    Ok(sha256_hex(bytes))
}

pub fn write_table(dir: &Path, name: &str, table: &Table) -> Result<Written, CliError> {
    let sha256 = write_file(dir, name, &table.to_bytes())?;
    Ok(Written { sha256, rows: table.rows.len() })
}

pub fn f6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

pub fn money(m: Money) -> String {
    format!("{:.6}", m.value())
}

fn opt<T, F: Fn(T) -> String>(v: Option<T>, f: F) -> String {
    v.map(f).unwrap_or_default()
}

fn join_groups(gs: &[FoodGroup]) -> String {
    gs.iter().map(|g| g.as_str()).collect::<Vec<_>>().join(";")
}

pub fn cohd_by_location(
    baskets: &BTreeMap<String, DietBasket>,
    location_regions: &BTreeMap<String, String>,
    period: Option<YearMonth>,
) -> Table {
    let mut header = vec!["location_id".to_string(), "region_id".into(), "period".into()];
    header.extend(FoodGroup::GUIDED.iter().map(|g| g.as_str().to_string()));
    header.extend(["total_cost", "complete", "missing_groups", "borrowed_groups"].map(String::from));
    let mut t = Table::new(&header);
    for (loc, b) in baskets {
        let mut row =
            vec![loc.clone(), location_regions.get(loc).cloned().unwrap_or_default(), opt(period, |p| p.to_string())];
        row.extend(FoodGroup::GUIDED.iter().map(|g| opt(b.group_cost(*g), money)));
        row.push(if b.complete { money(b.total_cost) } else { String::new() });
        row.push(b.complete.to_string());
        row.push(join_groups(&b.missing_groups));
        row.push(join_groups(&b.borrowed_groups));
        t.push(row);
    }
    t
}

pub fn cohd_summary(summary: &CohdSummary) -> Table {
    let mut header: Vec<String> =
        ["region_id", "label", "households", "persons", "mean_cost", "min_cost", "max_cost"].map(String::from).to_vec();
    header.extend(FoodGroup::GUIDED.iter().map(|g| format!("mean_{}", g.as_str())));
    let mut t = Table::new(&header);
    for r in summary.regions.iter().chain(summary.national.iter()) {
        let mut row = vec![
            r.region_id.clone(),
            r.label.clone(),
            r.households.to_string(),
            f6(r.persons),
            f6(r.mean_cost),
            f6(r.min_cost),
            f6(r.max_cost),
        ];
        row.extend(FoodGroup::GUIDED.iter().map(|g| opt(r.group_means.get(g).copied(), f6)));
        t.push(row);
    }
    t
}

pub fn affordability_by_household(records: &[AffordabilityRecord]) -> Table {
    let with_share = records.iter().any(|r| r.food_share.is_some());
    let mut header: Vec<&str> =
        vec!["household_id", "location_id", "region_id", "spending_per_ae_day", "cohd", "can_afford", "quintile"];
    if with_share {
        header.push("food_share");
    }
    let mut t = Table::new(&header);
    for r in records {
        let mut row = vec![
            r.household_id.clone(),
            r.location_id.clone(),
            r.region_id.clone(),
            money(r.spending_per_ae_day),
            money(r.local_cohd),
            r.can_afford.to_string(),
            opt(r.quintile, |q| q.to_string()),
        ];
        if with_share {
            row.push(opt(r.food_share, f6));
        }
        t.push(row);
    }
    t
}

pub fn affordability_by_region(rows: &[RegionAffordRow]) -> Table {
    let mut t =
        Table::new(&["region_id", "label", "households", "weight", "unaffordable_pct", "mean_spending", "mean_cohd"]);
    for r in rows {
        t.push(vec![
            r.region_id.clone(),
            r.label.clone(),
            r.households.to_string(),
            f6(r.weight),
            f6(r.unaffordable_pct),
            f6(r.mean_spending),
            f6(r.mean_cohd),
        ]);
    }
    t
}

/// Rural and food-share columns appear only when the roster carries them.
pub fn table2(rows: &[Table2Row]) -> Table {
    let rural = rows.iter().any(|r| r.rural.is_some());
    let food = rows.iter().any(|r| r.food_share.is_some());
    let mut header = vec!["quintile", "households", "persons", "person_share_pct", "hh_size_mean", "hh_size_sd"];
    if rural {
        header.extend(["rural_mean", "rural_sd"]);
    }
    if food {
        header.extend(["food_share_pct_mean", "food_share_pct_sd"]);
    }
    header.extend(["unaffordable_pct_mean", "unaffordable_pct_sd"]);
    let mut t = Table::new(&header);
    for r in rows {
        let mut row = vec![
            r.label.clone(),
            r.households.to_string(),
            f6(r.persons),
            f6(r.person_share),
            f6(r.household_size.mean),
            f6(r.household_size.sd),
        ];
        if rural {
            row.push(opt(r.rural.map(|m| m.mean), f6));
            row.push(opt(r.rural.map(|m| m.sd), f6));
        }
        if food {
            row.push(opt(r.food_share.map(|m| m.mean), f6));
            row.push(opt(r.food_share.map(|m| m.sd), f6));
        }
        row.push(f6(r.unaffordable.mean));
        row.push(f6(r.unaffordable.sd));
        t.push(row);
    }
    t
}

pub fn figure3(rows: &[SpendingRow]) -> Table {
    let mut t = Table::new(&["panel", "group", "spending"]);
    for r in rows {
        t.push(vec![r.column.clone(), r.group.clone(), f6(r.spending)]);
    }
    t
}

pub fn adequacy_by_household(
    scores: &[AdequacyScores],
    diets: &BTreeMap<String, AdjustedDiet>,
    households: &[Household],
) -> Table {
    let by_id: BTreeMap<&str, &Household> = households.iter().map(|h| (h.household_id.as_str(), h)).collect();
    let mut header: Vec<String> =
        ["household_id", "location_id", "region_id", "adult_equivalents", "adjustment_factor"]
            .map(String::from)
            .to_vec();
    header.extend(NutrientId::ALL.iter().map(|n| format!("nar_{}", n.as_str())));
    header.push("mna".into());
    header.extend(FoodGroup::RECOMMENDED.iter().map(|g| format!("fga_{}", g.as_str())));
    header.extend(["mfga", "discretionary_kcal", "mixed_dish_kcal"].map(String::from));
    let mut t = Table::new(&header);
    for s in scores {
        let (Some(d), Some(h)) = (diets.get(&s.household_id), by_id.get(s.household_id.as_str())) else {
            continue;
        };
        let mut row = vec![
            s.household_id.clone(),
            h.location_id.clone(),
            h.region_id.clone(),
            f6(d.adult_equivalents),
            f6(d.adjustment_factor),
        ];
        row.extend(NutrientId::ALL.iter().map(|n| f6(s.nutrients.nar.get(*n))));
        row.push(f6(s.mna()));
        row.extend(FoodGroup::RECOMMENDED.iter().map(|g| f6(s.groups.adequacy[g])));
        row.push(f6(s.mfga()));
        row.push(f6(s.groups.discretionary_kcal));
        row.push(f6(s.groups.mixed_dish_kcal));
        t.push(row);
    }
    t
}

pub fn adequacy_distributions(table: &DistributionTable) -> Table {
    let mut t = Table::new(&[
        "panel",
        "kind",
        "indicator",
        "households",
        "weight",
        "p25",
        "median",
        "p75",
        "mean",
        "capped_median",
        "capped_mean",
    ]);
    for r in &table.rows {
        t.push(vec![
            r.panel.label(),
            r.indicator.kind().into(),
            r.indicator.label(),
            r.households.to_string(),
            f6(r.weight),
            f6(r.p25),
            f6(r.median),
            f6(r.p75),
            f6(r.mean),
            f6(r.capped_median),
            f6(r.capped_mean),
        ]);
    }
    t
}

pub fn figure4(rows: &[GroupEnergyRow]) -> Table {
    let mut t = Table::new(&["panel", "group", "mean_kcal", "reference_kcal"]);
    for r in rows {
        t.push(vec![r.panel.label(), r.group.to_string(), f6(r.mean_kcal), f6(r.reference_kcal)]);
    }
    t
}

/// Item energy shares within groups: the least-cost baskets first, then
/// reported diets per panel.
pub fn item_shares(least_cost: &BTreeMap<FoodGroup, BTreeMap<String, f64>>, panels: &[(String, ItemShares)]) -> Table {
    let mut t = Table::new(&["panel", "group", "item_id", "share"]);
    for (g, items) in least_cost {
        for (id, s) in items {
            t.push(vec!["least_cost".into(), g.to_string(), id.clone(), f6(*s)]);
        }
    }
    for (label, shares) in panels {
        for (g, items) in &shares.shares {
            for (id, s) in items {
                t.push(vec![label.clone(), g.to_string(), id.clone(), f6(*s)]);
            }
        }
    }
    t
}

pub fn exclusions(rows: &[(String, String)]) -> Table {
    let mut t = Table::new(&["household_id", "reason"]);
    for (id, reason) in rows {
        t.push(vec![id.clone(), reason.clone()]);
    }
    t
}
