// SPDX-License-Identifier: MIT OR Apache-2.0

//! Affordability of the local least-cost diet, expenditure quintiles, and
//! the weighted tables built on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rust_decimal::prelude::FromPrimitive;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::adequacy::AdjustedDiet;
use crate::model::{adult_equivalents, AeFactorTable, DietBasket, FoodCatalog, FoodGroup, Household};
use crate::money::Money;
use crate::stats::{weighted_mean, weighted_sd};

/// A population subgroup used in reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Panel {
    All,
    CannotAfford,
    Quintile(u8),
}

impl Panel {
    pub fn all() -> Vec<Panel> {
        let mut v = vec![Panel::All, Panel::CannotAfford];
        v.extend((1..=5).map(Panel::Quintile));
        v
    }

    pub fn label(&self) -> String {
        match self {
            Panel::All => "all".into(),
            Panel::CannotAfford => "cannot_afford".into(),
            Panel::Quintile(q) => format!("q{q}"),
        }
    }
}

impl fmt::Display for Panel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Which panels each household belongs to.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PanelAssignment {
    pub quintiles: BTreeMap<String, u8>,
    pub unaffordable: BTreeSet<String>,
}

impl PanelAssignment {
    pub fn panels_of(&self, household_id: &str) -> Vec<Panel> {
        let mut v = vec![Panel::All];
        if self.unaffordable.contains(household_id) {
            v.push(Panel::CannotAfford);
        }
        if let Some(q) = self.quintiles.get(household_id) {
            v.push(Panel::Quintile(*q));
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankVariable {
    /// Expenditure per household member.
    #[default]
    PerCapita,
    /// Expenditure per adult equivalent.
    PerAe,
}

impl FromStr for RankVariable {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "percapita" => Ok(RankVariable::PerCapita),
            "perae" => Ok(RankVariable::PerAe),
            other => Err(format!("unknown quintile rank '{other}' (percapita|perae)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightUnit {
    /// Sampling weight times household size.
    #[default]
    Persons,
    /// Sampling weight alone.
    Households,
}

impl WeightUnit {
    pub fn weight(self, h: &Household) -> f64 {
        match self {
            WeightUnit::Persons => h.person_weight(),
            WeightUnit::Households => h.sampling_weight,
        }
    }
}

impl FromStr for WeightUnit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "persons" => Ok(WeightUnit::Persons),
            "households" => Ok(WeightUnit::Households),
            other => Err(format!("unknown quintile weight '{other}' (persons|households)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuintileOptions {
    pub rank: RankVariable,
    pub weight: WeightUnit,
}

/// Energy-adjusted food spending per adult equivalent per day.
///
/// Only records that made it into the adjusted diet count, so excluded
/// items carry no spending.
pub fn spending_per_ae(household: &Household, diet: &AdjustedDiet) -> Money {
    let kept: BTreeSet<&str> = diet.items.iter().map(|i| i.item_id.as_str()).collect();
    let spent: Money =
        household.records.iter().filter(|r| kept.contains(r.item_id.as_str())).map(|r| r.expenditure).sum();
    let ae = Decimal::from_f64(diet.adult_equivalents).unwrap_or(Decimal::ONE);
    let f = Decimal::from_f64(diet.adjustment_factor).unwrap_or(Decimal::ONE);
    Money::new(spent.value() / Decimal::from(household.period_days) / ae * f)
}

/// A household can afford the diet unless its cost exceeds food spending.
pub fn classify(spending: Money, cohd: Money) -> bool {
    spending >= cohd
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuintileEntry {
    pub household_id: String,
    pub value: f64,
    pub weight: f64,
}

/// Cuts the weighted distribution of `value` at 20/40/60/80 %.
///
/// Entries are ranked by value, ties by household id. A household falls in
/// the quintile containing its cumulative weight (upper end inclusive).
pub fn assign_quintiles(entries: &[QuintileEntry]) -> BTreeMap<String, u8> {
    let mut sorted: Vec<&QuintileEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.value.total_cmp(&b.value).then_with(|| a.household_id.cmp(&b.household_id)));
    let total: f64 = sorted.iter().map(|e| e.weight).sum();
    let mut out = BTreeMap::new();
    let mut cum = 0.0;
    for e in sorted {
        cum += e.weight;
        let frac = cum / total;
        let above = [0.2, 0.4, 0.6, 0.8].iter().filter(|c| frac > *c + 1e-9).count();
        out.insert(e.household_id.clone(), (above + 1) as u8);
    }
    out
}

/// Food expenditure per recall period over non-excluded items.
pub fn food_expenditure(household: &Household, catalog: &FoodCatalog) -> Money {
    household
        .records
        .iter()
        .filter(|r| catalog.item(&r.item_id).is_some_and(|i| i.group != FoodGroup::Excluded))
        .map(|r| r.expenditure)
        .sum()
}

/// Ranking inputs for every household whose ranking variable is defined.
///
/// Total expenditure is used when surveyed, food expenditure otherwise.
pub fn quintile_entries(
    households: &[Household],
    catalog: &FoodCatalog,
    ae_table: &AeFactorTable,
    options: QuintileOptions,
) -> Vec<QuintileEntry> {
    households
        .iter()
        .filter_map(|h| {
            let spent = h.total_expenditure.unwrap_or_else(|| food_expenditure(h, catalog));
            let per_day = spent.to_f64() / h.period_days as f64;
            let denom = match options.rank {
                RankVariable::PerCapita => h.size() as f64,
                RankVariable::PerAe => adult_equivalents(&h.members, ae_table).ok()?,
            };
            Some(QuintileEntry {
                household_id: h.household_id.clone(),
                value: per_day / denom,
                weight: options.weight.weight(h),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffordabilityRecord {
    pub household_id: String,
    pub location_id: String,
    pub region_id: String,
    pub spending_per_ae_day: Money,
    pub local_cohd: Money,
    pub can_afford: bool,
    pub quintile: Option<u8>,
    /// Share of total expenditure spent on food, when total expenditure is surveyed.
    pub food_share: Option<f64>,
    pub zero_spending: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AffordCoverage {
    /// Households whose location lacks a complete basket.
    pub incomplete_basket: Vec<String>,
    /// Households without an energy-adjusted diet.
    pub no_diet: Vec<String>,
}

/// Classifies every household that has both a diet and a complete local basket.
pub fn affordability_records(
    households: &[Household],
    catalog: &FoodCatalog,
    diets: &BTreeMap<String, AdjustedDiet>,
    baskets: &BTreeMap<String, DietBasket>,
    quintiles: &BTreeMap<String, u8>,
) -> (Vec<AffordabilityRecord>, AffordCoverage) {
    let mut records = Vec::new();
    let mut coverage = AffordCoverage::default();
    for h in households {
        let Some(diet) = diets.get(&h.household_id) else {
            coverage.no_diet.push(h.household_id.clone());
            continue;
        };
        let Some(basket) = baskets.get(&h.location_id).filter(|b| b.complete) else {
            coverage.incomplete_basket.push(h.household_id.clone());
            continue;
        };
        let spending = spending_per_ae(h, diet);
        let food_share =
            h.total_expenditure.filter(|t| !t.is_zero()).map(|t| food_expenditure(h, catalog).to_f64() / t.to_f64());
        records.push(AffordabilityRecord {
            household_id: h.household_id.clone(),
            location_id: h.location_id.clone(),
            region_id: h.region_id.clone(),
            spending_per_ae_day: spending,
            local_cohd: basket.total_cost,
            can_afford: classify(spending, basket.total_cost),
            quintile: quintiles.get(&h.household_id).copied(),
            food_share,
            zero_spending: spending.is_zero(),
        });
    }
    (records, coverage)
}

pub fn panel_assignment(records: &[AffordabilityRecord], quintiles: &BTreeMap<String, u8>) -> PanelAssignment {
    PanelAssignment {
        quintiles: quintiles.clone(),
        unaffordable: records.iter().filter(|r| !r.can_afford).map(|r| r.household_id.clone()).collect(),
    }
}

/// Weighted mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

fn mean_sd(values: &[(f64, f64)]) -> Option<MeanSd> {
    Some(MeanSd { mean: weighted_mean(values)?, sd: weighted_sd(values)? })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    /// `q1`..`q5` or `total`.
    pub label: String,
    pub households: usize,
    pub persons: f64,
    /// Percent of all persons.
    pub person_share: f64,
    pub household_size: MeanSd,
    pub rural: Option<MeanSd>,
    /// Percent.
    pub food_share: Option<MeanSd>,
    /// Percent unable to afford.
    pub unaffordable: MeanSd,
}

/// Descriptive statistics by expenditure quintile and in total.
///
/// Statistics use the quintile weighting unit; `persons` always reports
/// sampling weight times household size.
pub fn descriptive_table(
    records: &[AffordabilityRecord],
    households: &[Household],
    weight: WeightUnit,
) -> Vec<Table2Row> {
    let by_id: BTreeMap<&str, &Household> = households.iter().map(|h| (h.household_id.as_str(), h)).collect();
    let rows: Vec<(&AffordabilityRecord, &Household)> = records
        .iter()
        .filter(|r| r.quintile.is_some())
        .filter_map(|r| by_id.get(r.household_id.as_str()).map(|h| (r, *h)))
        .collect();
    let total_persons: f64 = rows.iter().map(|(_, h)| h.person_weight()).sum();
    let mut out = Vec::new();
    let groups: Vec<(String, Option<u8>)> =
        (1..=5).map(|q| (format!("q{q}"), Some(q))).chain(std::iter::once(("total".to_string(), None))).collect();
    for (label, q) in groups {
        let sel: Vec<&(&AffordabilityRecord, &Household)> =
            rows.iter().filter(|(r, _)| q.is_none() || r.quintile == q).collect();
        if sel.is_empty() {
            continue;
        }
        let w = |h: &Household| weight.weight(h);
        let persons: f64 = sel.iter().map(|(_, h)| h.person_weight()).sum();
        let size: Vec<(f64, f64)> = sel.iter().map(|(_, h)| (h.size() as f64, w(h))).collect();
        let rural: Vec<(f64, f64)> =
            sel.iter().filter_map(|(_, h)| h.rural.map(|r| (if r { 1.0 } else { 0.0 }, w(h)))).collect();
        let food: Vec<(f64, f64)> = sel.iter().filter_map(|(r, h)| r.food_share.map(|s| (100.0 * s, w(h)))).collect();
        let unable: Vec<(f64, f64)> = sel.iter().map(|(r, h)| (if r.can_afford { 0.0 } else { 100.0 }, w(h))).collect();
        out.push(Table2Row {
            label,
            households: sel.len(),
            persons,
            person_share: 100.0 * persons / total_persons,
            household_size: mean_sd(&size).unwrap_or(MeanSd { mean: 0.0, sd: 0.0 }),
            rural: mean_sd(&rural),
            food_share: mean_sd(&food),
            unaffordable: mean_sd(&unable).unwrap_or(MeanSd { mean: 0.0, sd: 0.0 }),
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionAffordRow {
    pub region_id: String,
    pub label: String,
    pub households: usize,
    pub weight: f64,
    /// Percent unable to afford.
    pub unaffordable_pct: f64,
    pub mean_spending: f64,
    pub mean_cohd: f64,
}

/// Weighted share unable to afford, per region.
pub fn affordability_by_region(
    records: &[AffordabilityRecord],
    households: &[Household],
    region_names: &BTreeMap<String, String>,
    weight: WeightUnit,
) -> Vec<RegionAffordRow> {
    let by_id: BTreeMap<&str, &Household> = households.iter().map(|h| (h.household_id.as_str(), h)).collect();
    let mut groups: BTreeMap<&str, Vec<(&AffordabilityRecord, f64)>> = BTreeMap::new();
    for r in records {
        if let Some(h) = by_id.get(r.household_id.as_str()) {
            groups.entry(r.region_id.as_str()).or_default().push((r, weight.weight(h)));
        }
    }
    groups
        .into_iter()
        .map(|(region, rs)| {
            let unable: Vec<(f64, f64)> =
                rs.iter().map(|(r, w)| (if r.can_afford { 0.0 } else { 100.0 }, *w)).collect();
            let spend: Vec<(f64, f64)> = rs.iter().map(|(r, w)| (r.spending_per_ae_day.to_f64(), *w)).collect();
            let cohd: Vec<(f64, f64)> = rs.iter().map(|(r, w)| (r.local_cohd.to_f64(), *w)).collect();
            RegionAffordRow {
                region_id: region.to_string(),
                label: region_names.get(region).cloned().unwrap_or_else(|| region.to_string()),
                households: rs.len(),
                weight: rs.iter().map(|(_, w)| w).sum(),
                unaffordable_pct: weighted_mean(&unable).unwrap_or(0.0),
                mean_spending: weighted_mean(&spend).unwrap_or(0.0),
                mean_cohd: weighted_mean(&cohd).unwrap_or(0.0),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpendingRow {
    /// `least_cost` or a panel label.
    pub column: String,
    /// A group name or `Total`.
    pub group: String,
    /// Weighted mean currency per adult equivalent per day.
    pub spending: f64,
}

/// Weighted mean energy-adjusted spending per group and panel, preceded by
/// the least-cost benchmark (weighted mean basket group cost).
pub fn spending_decomposition(
    records: &[AffordabilityRecord],
    households: &[Household],
    diets: &BTreeMap<String, AdjustedDiet>,
    baskets: &BTreeMap<String, DietBasket>,
    panels: &PanelAssignment,
    weight: WeightUnit,
) -> Vec<SpendingRow> {
    let by_id: BTreeMap<&str, &Household> = households.iter().map(|h| (h.household_id.as_str(), h)).collect();
    let rows: Vec<(&AffordabilityRecord, &AdjustedDiet, f64)> = records
        .iter()
        .filter_map(|r| {
            let h = by_id.get(r.household_id.as_str())?;
            let d = diets.get(&r.household_id)?;
            Some((r, d, weight.weight(h)))
        })
        .collect();
    let mut out = Vec::new();
    if rows.is_empty() {
        return out;
    }

    let mut bench_groups: Vec<FoodGroup> = Vec::new();
    for (r, _, _) in &rows {
        if let Some(b) = baskets.get(&r.location_id) {
            for g in b.group_costs.keys() {
                if !bench_groups.contains(g) {
                    bench_groups.push(*g);
                }
            }
        }
    }
    bench_groups.sort();
    for g in &bench_groups {
        let v: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|(r, _, w)| {
                baskets.get(&r.location_id).map(|b| (b.group_cost(*g).map(|m| m.to_f64()).unwrap_or(0.0), *w))
            })
            .collect();
        if let Some(m) = weighted_mean(&v) {
            out.push(SpendingRow { column: "least_cost".into(), group: g.to_string(), spending: m });
        }
    }
    let totals: Vec<(f64, f64)> = rows.iter().map(|(r, _, w)| (r.local_cohd.to_f64(), *w)).collect();
    if let Some(m) = weighted_mean(&totals) {
        out.push(SpendingRow { column: "least_cost".into(), group: "Total".into(), spending: m });
    }

    for panel in Panel::all() {
        let sel: Vec<&(&AffordabilityRecord, &AdjustedDiet, f64)> =
            rows.iter().filter(|(r, _, _)| panels.panels_of(&r.household_id).contains(&panel)).collect();
        if sel.is_empty() {
            continue;
        }
        for g in FoodGroup::CONSUMED {
            let v: Vec<(f64, f64)> = sel
                .iter()
                .map(|(_, d, w)| (d.items.iter().filter(|i| i.group == g).map(|i| i.spending).sum(), *w))
                .collect();
            if let Some(m) = weighted_mean(&v) {
                out.push(SpendingRow { column: panel.label(), group: g.to_string(), spending: m });
            }
        }
        let v: Vec<(f64, f64)> = sel.iter().map(|(_, d, w)| (d.items.iter().map(|i| i.spending).sum(), *w)).collect();
        if let Some(m) = weighted_mean(&v) {
            out.push(SpendingRow { column: panel.label(), group: "Total".into(), spending: m });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adequacy::AdjustedItem;
    use crate::model::{ConsumptionRecord, Member, Sex};

    fn hh(id: &str, members: usize, weight: f64, spent: i64, days: u32) -> Household {
        Household {
            household_id: id.into(),
            location_id: "L".into(),
            region_id: "R".into(),
            sampling_weight: weight,
            members: vec![Member::new(30, Sex::Female); members],
            records: vec![ConsumptionRecord {
                item_id: "rice".into(),
                quantity_g: 1.0,
                expenditure: Money::new(Decimal::from(spent)),
            }],
            period_days: days,
            total_expenditure: None,
            rural: None,
        }
    }

    fn diet(id: &str, ae: f64, f: f64) -> AdjustedDiet {
        AdjustedDiet {
            household_id: id.into(),
            adult_equivalents: ae,
            items: vec![AdjustedItem {
                item_id: "rice".into(),
                group: FoodGroup::StarchyStaples,
                energy_kcal: 2330.0,
                edible_grams: 0.0,
                purchased_grams: 0.0,
                spending: 0.0,
            }],
            group_energy: BTreeMap::new(),
            total_energy: 2330.0,
            reported_energy: 2330.0 / f,
            adjustment_factor: f,
        }
    }

    #[test]
    fn spending_per_ae_cases() {
        let h = hh("a", 1, 1.0, 70, 7);
        assert_eq!(spending_per_ae(&h, &diet("a", 1.0, 1.0)), Money::new(Decimal::from(10)));
        assert_eq!(spending_per_ae(&h, &diet("a", 1.0, 0.5)), Money::new(Decimal::from(5)));
        // 175 / 7 / 2.5 * 1.2 = 12
        let h = hh("b", 3, 1.0, 175, 7);
        assert_eq!(spending_per_ae(&h, &diet("b", 2.5, 1.2)), Money::new(Decimal::from(12)));
    }

    #[test]
    fn classification_boundary() {
        let cohd = Money::new(Decimal::from(10_503));
        assert!(!classify(Money::new(Decimal::from(9_000)), cohd));
        assert!(classify(cohd, cohd));
        assert!(classify(Money::new(Decimal::from(12_000)), cohd));
    }

    fn entry(id: &str, value: f64, weight: f64) -> QuintileEntry {
        QuintileEntry { household_id: id.into(), value, weight }
    }

    #[test]
    fn five_equal_households() {
        let e: Vec<_> = (0..5).map(|i| entry(&format!("h{i}"), (5 - i) as f64, 1.0)).collect();
        let q = assign_quintiles(&e);
        assert_eq!(q["h4"], 1);
        assert_eq!(q["h0"], 5);
        let distinct: BTreeSet<u8> = q.values().copied().collect();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn identical_values_split_by_id() {
        let e: Vec<_> = (0..10).map(|i| entry(&format!("h{i:02}"), 3.0, 1.0)).collect();
        let q = assign_quintiles(&e);
        for i in 0..10 {
            assert_eq!(q[&format!("h{i:02}")], (i / 2 + 1) as u8);
        }
    }

    #[test]
    fn skewed_weights() {
        // cumulative fractions: a .1, b .5, c .55, d .9, e 1.0
        let e = [
            entry("a", 1.0, 2.0),
            entry("b", 2.0, 8.0),
            entry("c", 3.0, 1.0),
            entry("d", 4.0, 7.0),
            entry("e", 5.0, 2.0),
        ];
        let q = assign_quintiles(&e);
        assert_eq!([q["a"], q["b"], q["c"], q["d"], q["e"]], [1, 3, 3, 5, 5]);
    }

    fn rec(id: &str, loc: &str, q: u8, can_afford: bool) -> AffordabilityRecord {
        AffordabilityRecord {
            household_id: id.into(),
            location_id: loc.into(),
            region_id: "R".into(),
            spending_per_ae_day: Money::ZERO,
            local_cohd: Money::new(Decimal::from(10)),
            can_afford,
            quintile: Some(q),
            food_share: None,
            zero_spending: true,
        }
    }

    /// Two households per quintile with varied sizes and weights.
    fn panel(afford: impl Fn(usize) -> bool) -> (Vec<AffordabilityRecord>, Vec<Household>) {
        let hs: Vec<Household> = (0..10).map(|i| hh(&format!("h{i}"), 1 + i % 4, 1.0 + i as f64, 0, 7)).collect();
        let rs = (0..10).map(|i| rec(&format!("h{i}"), "L", (i / 2 + 1) as u8, afford(i))).collect();
        (rs, hs)
    }

    #[test]
    fn table2_extremes_and_partition() {
        for (afford, want) in [(false, 100.0), (true, 0.0)] {
            let (rs, hs) = panel(|_| afford);
            let t = descriptive_table(&rs, &hs, WeightUnit::Persons);
            assert_eq!(t.len(), 6);
            for row in &t {
                assert_eq!(row.unaffordable, MeanSd { mean: want, sd: 0.0 });
            }
            let shares: f64 = t[..5].iter().map(|r| r.person_share).sum();
            assert!((shares - 100.0).abs() < 1e-9);
            assert!(t[5].rural.is_none() && t[5].food_share.is_none());
        }
    }

    #[test]
    fn national_share_is_person_weighted_mean_of_quintiles() {
        let (rs, hs) = panel(|i| i % 3 != 0);
        let t = descriptive_table(&rs, &hs, WeightUnit::Persons);
        let persons: f64 = t[..5].iter().map(|r| r.persons).sum();
        let pooled: f64 = t[..5].iter().map(|r| r.unaffordable.mean * r.persons).sum::<f64>() / persons;
        assert!((t[5].unaffordable.mean - pooled).abs() < 1e-9);
        // unable: h0 (1 x 1), h3 (4 x 4), h6 (3 x 7), h9 (2 x 10) = 58 of 129 persons
        assert_eq!(t[5].persons, 129.0);
        assert!((t[5].unaffordable.mean - 100.0 * 58.0 / 129.0).abs() < 1e-9);
    }

    fn basket(loc: &str, staples: i64, fruit: i64) -> DietBasket {
        let group_costs: BTreeMap<FoodGroup, Money> = [
            (FoodGroup::StarchyStaples, Money::new(Decimal::from(staples))),
            (FoodGroup::Fruits, Money::new(Decimal::from(fruit))),
        ]
        .into();
        DietBasket {
            location_id: loc.into(),
            total_cost: group_costs.values().sum(),
            group_costs,
            selected: BTreeMap::new(),
            complete: true,
            missing_groups: Vec::new(),
            borrowed_groups: Vec::new(),
        }
    }

    fn spending_diet(id: &str, spend: &[(FoodGroup, f64)]) -> AdjustedDiet {
        let mut d = diet(id, 1.0, 1.0);
        d.items = spend
            .iter()
            .enumerate()
            .map(|(i, (g, s))| AdjustedItem {
                item_id: format!("i{i}"),
                group: *g,
                energy_kcal: 1.0,
                edible_grams: 0.0,
                purchased_grams: 0.0,
                spending: *s,
            })
            .collect();
        d
    }

    #[test]
    fn decomposition_adds_up_and_benchmark_is_weighted_mean() {
        let hs = [hh("a", 1, 1.0, 0, 1), hh("b", 1, 3.0, 0, 1)];
        let baskets: BTreeMap<String, DietBasket> =
            [("LA".to_string(), basket("LA", 10, 2)), ("LB".to_string(), basket("LB", 30, 6))].into();
        let mut rs = [rec("a", "LA", 1, true), rec("b", "LB", 2, false)];
        for r in &mut rs {
            r.local_cohd = baskets[&r.location_id].total_cost;
        }
        let diets: BTreeMap<String, AdjustedDiet> = [
            (
                "a".to_string(),
                spending_diet(
                    "a",
                    &[(FoodGroup::StarchyStaples, 4.0), (FoodGroup::MixedDishes, 6.5), (FoodGroup::Fruits, 1.5)],
                ),
            ),
            ("b".to_string(), spending_diet("b", &[(FoodGroup::StarchyStaples, 8.0)])),
        ]
        .into();
        let mut panels = panel_assignment(&rs, &BTreeMap::new());
        panels.quintiles = [("a".to_string(), 1), ("b".to_string(), 2)].into();
        let rows = spending_decomposition(&rs, &hs, &diets, &baskets, &panels, WeightUnit::Households);
        let get = |c: &str, g: &str| rows.iter().find(|r| r.column == c && r.group == g).unwrap().spending;

        // (10 * 1 + 30 * 3) / 4 and (2 * 1 + 6 * 3) / 4
        assert_eq!(get("least_cost", "StarchyStaples"), 25.0);
        assert_eq!(get("least_cost", "Fruits"), 5.0);
        assert_eq!(get("least_cost", "Total"), 30.0);

        for column in ["q1", "all", "cannot_afford"] {
            let parts: f64 = rows.iter().filter(|r| r.column == column && r.group != "Total").map(|r| r.spending).sum();
            assert!((parts - get(column, "Total")).abs() < 1e-12, "{column}");
        }
        assert_eq!(get("q1", "Total"), 12.0);
        assert_eq!(get("cannot_afford", "StarchyStaples"), 8.0);
    }
}
