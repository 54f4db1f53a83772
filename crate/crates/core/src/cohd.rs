// SPDX-License-Identifier: MIT OR Apache-2.0

//! Least-cost healthy diet at every location.
//!
//! Within each guideline group the energy target is split equally among the
//! group's `k` required items. Group cost is then `target / k` times the sum
//! of the chosen items' kcal prices, which is minimized by taking the `k`
//! cheapest items; no general LP is needed.

use std::collections::{BTreeMap, BTreeSet};

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Dataset;
use crate::model::{
    price_per_kcal, DietBasket, FoodGroup, GuidelineSet, Household, PriceObservation, SelectedItem, YearMonth,
};
use crate::money::{Money, UnitPrice};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohdOptions {
    pub include_discretionary: bool,
    /// Fill a group that cannot be satisfied locally from the pooled
    /// (lowest per item) prices of the other locations in the same region.
    pub fallback_parent_region: bool,
    /// Price period to use; the latest period in the data when `None`.
    pub period: Option<YearMonth>,
}

impl Default for CohdOptions {
    fn default() -> Self {
        CohdOptions { include_discretionary: true, fallback_parent_region: false, period: None }
    }
}

impl CohdOptions {
    pub fn groups(&self) -> Vec<FoodGroup> {
        FoodGroup::GUIDED.into_iter().filter(|g| self.include_discretionary || *g != FoodGroup::Discretionary).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PricedItem {
    pub item_id: String,
    pub kcal_price: UnitPrice,
}

/// Items priced at one location, per group, cheapest first.
///
/// Ties on price are broken by item id, so the order is total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationPriceTable {
    pub location_id: String,
    groups: BTreeMap<FoodGroup, Vec<PricedItem>>,
}

impl LocationPriceTable {
    pub fn new(
        location_id: impl Into<String>,
        entries: impl IntoIterator<Item = (FoodGroup, String, UnitPrice)>,
    ) -> Self {
        let mut groups: BTreeMap<FoodGroup, BTreeMap<String, UnitPrice>> = BTreeMap::new();
        for (group, item_id, price) in entries {
            groups.entry(group).or_default().entry(item_id).and_modify(|p| *p = (*p).min(price)).or_insert(price);
        }
        let groups = groups
            .into_iter()
            .map(|(g, items)| {
                let mut v: Vec<PricedItem> =
                    items.into_iter().map(|(item_id, kcal_price)| PricedItem { item_id, kcal_price }).collect();
                v.sort_by(|a, b| a.kcal_price.cmp(&b.kcal_price).then_with(|| a.item_id.cmp(&b.item_id)));
                (g, v)
            })
            .collect();
        LocationPriceTable { location_id: location_id.into(), groups }
    }

    /// Prices at `location_id` in `period`, converted to cost per kcal.
    /// Items that cannot be converted (no composition, zero energy) are skipped.
    pub fn from_dataset(dataset: &Dataset, location_id: &str, period: YearMonth) -> Self {
        Self::pooled(dataset, std::slice::from_ref(&location_id.to_string()), location_id, period)
    }

    /// Lowest price per item across `locations`.
    pub fn pooled(dataset: &Dataset, locations: &[String], label: &str, period: YearMonth) -> Self {
        let wanted: BTreeSet<&str> = locations.iter().map(String::as_str).collect();
        let obs = dataset.prices.iter().filter(|p| p.period == period && wanted.contains(p.location_id.as_str()));
        Self::from_observations(dataset, obs, label)
    }

    /// Converts observations to cost per kcal, skipping items that are not
    /// costed or cannot be converted (no composition, zero energy).
    pub fn from_observations<'a>(
        dataset: &Dataset,
        observations: impl IntoIterator<Item = &'a PriceObservation>,
        label: &str,
    ) -> Self {
        let entries = observations.into_iter().filter_map(|p| {
            let item = dataset.catalog.item(&p.item_id)?;
            if !item.group.is_costed() {
                return None;
            }
            let comp = dataset.catalog.composition_of(&p.item_id)?;
            let price = price_per_kcal(p, comp).ok()?;
            Some((item.group, p.item_id.clone(), price))
        });
        Self::new(label, entries)
    }

    pub fn items(&self, group: FoodGroup) -> &[PricedItem] {
        self.groups.get(&group).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Scales every price by `factor`.
    pub fn scaled(&self, factor: Decimal) -> Self {
        let entries = self
            .groups
            .iter()
            .flat_map(|(g, items)| items.iter().map(move |i| (*g, i.item_id.clone(), i.kcal_price * factor)));
        Self::new(self.location_id.clone(), entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("group {group} needs {required} priced items but only {available} are available")]
pub struct Insufficient {
    pub group: FoodGroup,
    pub available: usize,
    pub required: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSelection {
    pub group: FoodGroup,
    pub items: Vec<SelectedItem>,
    /// Currency per day.
    pub cost: Money,
}

/// Group cost of buying `target_kcal` split equally across `prices`.
pub fn equal_split_cost(target_kcal: Decimal, prices: &[UnitPrice]) -> Money {
    if prices.is_empty() {
        return Money::ZERO;
    }
    let sum: UnitPrice = prices.iter().copied().sum();
    Money::new(target_kcal * sum.value() / Decimal::from(prices.len() as u64))
}

/// Picks the `k` cheapest items of `group` and prices the group's energy
/// target split equally among them.
pub fn least_cost_selection(
    table: &LocationPriceTable,
    group: FoodGroup,
    guideline: &GuidelineSet,
) -> Result<GroupSelection, Insufficient> {
    let Some(target) = guideline.target(group) else {
        return Ok(GroupSelection { group, items: Vec::new(), cost: Money::ZERO });
    };
    let k = target.item_count as usize;
    if k == 0 || target.energy_kcal.is_zero() {
        return Ok(GroupSelection { group, items: Vec::new(), cost: Money::ZERO });
    }
    let available = table.items(group);
    if available.len() < k {
        return Err(Insufficient { group, available: available.len(), required: k });
    }
    let chosen = &available[..k];
    let per_item_kcal = target.energy_kcal / Decimal::from(k as u64);
    let items = chosen
        .iter()
        .map(|p| SelectedItem {
            item_id: p.item_id.clone(),
            energy_share: 1.0 / k as f64,
            kcal_price: p.kcal_price,
            cost: p.kcal_price.cost_of(per_item_kcal),
        })
        .collect();
    let prices: Vec<UnitPrice> = chosen.iter().map(|p| p.kcal_price).collect();
    Ok(GroupSelection { group, items, cost: equal_split_cost(target.energy_kcal, &prices) })
}

/// Builds a basket from a price table, optionally falling back to a pooled
/// table for groups the local table cannot satisfy.
pub fn solve_basket(
    table: &LocationPriceTable,
    fallback: Option<&LocationPriceTable>,
    guideline: &GuidelineSet,
    options: &CohdOptions,
) -> DietBasket {
    let mut basket = DietBasket {
        location_id: table.location_id.clone(),
        group_costs: BTreeMap::new(),
        selected: BTreeMap::new(),
        total_cost: Money::ZERO,
        complete: true,
        missing_groups: Vec::new(),
        borrowed_groups: Vec::new(),
    };
    for group in options.groups() {
        let outcome = match least_cost_selection(table, group, guideline) {
            Ok(sel) => Some(sel),
            Err(_) => match fallback.map(|f| least_cost_selection(f, group, guideline)) {
                Some(Ok(sel)) => {
                    basket.borrowed_groups.push(group);
                    Some(sel)
                }
                _ => None,
            },
        };
        match outcome {
            Some(sel) => {
                basket.group_costs.insert(group, sel.cost);
                basket.selected.insert(group, sel.items);
            }
            None => {
                basket.complete = false;
                basket.missing_groups.push(group);
            }
        }
    }
    basket.total_cost = basket.group_costs.values().sum();
    basket
}

/// Shared per-run state: period, prices indexed by location, and region pooling.
struct CohdContext<'a> {
    dataset: &'a Dataset,
    options: &'a CohdOptions,
    by_location: BTreeMap<&'a str, Vec<&'a PriceObservation>>,
    location_regions: BTreeMap<String, String>,
    region_locations: BTreeMap<String, Vec<String>>,
}

impl<'a> CohdContext<'a> {
    fn new(dataset: &'a Dataset, options: &'a CohdOptions) -> Self {
        let period = options.period.or_else(|| dataset.default_period());
        let mut by_location: BTreeMap<&str, Vec<&PriceObservation>> = BTreeMap::new();
        for p in dataset.prices.iter().filter(|p| Some(p.period) == period) {
            by_location.entry(p.location_id.as_str()).or_default().push(p);
        }
        let location_regions = dataset.location_regions();
        let mut region_locations: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let priced: BTreeSet<String> = dataset.locations().into_iter().collect();
        for (loc, region) in &location_regions {
            if priced.contains(loc) {
                region_locations.entry(region.clone()).or_default().push(loc.clone());
            }
        }
        CohdContext { dataset, options, by_location, location_regions, region_locations }
    }

    fn table(&self, locations: &[String], label: &str) -> LocationPriceTable {
        let obs = locations.iter().filter_map(|l| self.by_location.get(l.as_str())).flatten().copied();
        LocationPriceTable::from_observations(self.dataset, obs, label)
    }

    fn basket(&self, location_id: &str) -> DietBasket {
        let table = self.table(std::slice::from_ref(&location_id.to_string()), location_id);
        let fallback = if self.options.fallback_parent_region {
            self.location_regions
                .get(location_id)
                .and_then(|r| self.region_locations.get(r))
                .map(|locs| self.table(locs, location_id))
        } else {
            None
        };
        solve_basket(&table, fallback.as_ref(), &self.dataset.guideline, self.options)
    }
}

/// Least-cost healthy diet at one location.
pub fn cohd_location(dataset: &Dataset, location_id: &str, options: &CohdOptions) -> DietBasket {
    CohdContext::new(dataset, options).basket(location_id)
}

/// One basket per priced location, keyed and ordered by location id.
pub fn cohd_all(dataset: &Dataset, options: &CohdOptions, exec: Execution) -> BTreeMap<String, DietBasket> {
    let ctx = CohdContext::new(dataset, options);
    let locations: Vec<String> = ctx.by_location.keys().map(|l| l.to_string()).collect();
    let baskets = exec.map(&locations, |loc: &String| ctx.basket(loc));
    locations.into_iter().zip(baskets).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCostRow {
    pub region_id: String,
    pub label: String,
    pub households: usize,
    /// Sum of sampling weight times members.
    pub persons: f64,
    pub mean_cost: f64,
    pub min_cost: f64,
    pub max_cost: f64,
    /// Person-weighted mean cost of each included group.
    pub group_means: BTreeMap<FoodGroup, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohdSummary {
    pub regions: Vec<RegionCostRow>,
    pub national: Option<RegionCostRow>,
    /// Households whose location has no complete basket.
    pub gaps: Vec<String>,
}

#[derive(Default)]
struct CostAccumulator {
    households: usize,
    weight: f64,
    total: f64,
    min: f64,
    max: f64,
    groups: BTreeMap<FoodGroup, f64>,
}

impl CostAccumulator {
    fn add(&mut self, w: f64, basket: &DietBasket) {
        let cost = basket.total_cost.to_f64();
        if self.households == 0 {
            self.min = cost;
            self.max = cost;
        } else {
            self.min = self.min.min(cost);
            self.max = self.max.max(cost);
        }
        self.households += 1;
        self.weight += w;
        self.total += w * cost;
        for (g, c) in &basket.group_costs {
            *self.groups.entry(*g).or_default() += w * c.to_f64();
        }
    }

    fn row(&self, region_id: &str, label: &str) -> RegionCostRow {
        RegionCostRow {
            region_id: region_id.to_string(),
            label: label.to_string(),
            households: self.households,
            persons: self.weight,
            mean_cost: self.total / self.weight,
            min_cost: self.min,
            max_cost: self.max,
            group_means: self.groups.iter().map(|(g, s)| (*g, s / self.weight)).collect(),
        }
    }
}

/// Person-weighted cost of the healthy diet per region and nationally.
///
/// Households at locations without a complete basket are listed in `gaps`
/// and left out of every mean.
pub fn summarize_costs(
    baskets: &BTreeMap<String, DietBasket>,
    households: &[Household],
    region_names: &BTreeMap<String, String>,
) -> CohdSummary {
    let mut regions: BTreeMap<&str, CostAccumulator> = BTreeMap::new();
    let mut national = CostAccumulator::default();
    let mut gaps = Vec::new();
    for h in households {
        match baskets.get(&h.location_id) {
            Some(b) if b.complete => {
                let w = h.person_weight();
                regions.entry(h.region_id.as_str()).or_default().add(w, b);
                national.add(w, b);
            }
            _ => gaps.push(h.household_id.clone()),
        }
    }
    CohdSummary {
        regions: regions
            .iter()
            .map(|(id, acc)| {
                let label = region_names.get(*id).map(String::as_str).unwrap_or(id);
                acc.row(id, label)
            })
            .collect(),
        national: (national.households > 0).then(|| national.row("NATIONAL", "National")),
        gaps,
    }
}

/// Weighted mean energy share of each item within each group of the
/// least-cost baskets, weighting each basket by the persons it serves.
pub fn least_cost_item_shares(
    baskets: &BTreeMap<String, DietBasket>,
    households: &[Household],
) -> BTreeMap<FoodGroup, BTreeMap<String, f64>> {
    let mut sums: BTreeMap<FoodGroup, BTreeMap<String, f64>> = BTreeMap::new();
    let mut weights: BTreeMap<FoodGroup, f64> = BTreeMap::new();
    for h in households {
        let Some(b) = baskets.get(&h.location_id).filter(|b| b.complete) else { continue };
        let w = h.person_weight();
        for (g, items) in &b.selected {
            if items.is_empty() {
                continue;
            }
            *weights.entry(*g).or_default() += w;
            let slot = sums.entry(*g).or_default();
            for it in items {
                *slot.entry(it.item_id.clone()).or_default() += w * it.energy_share;
            }
        }
    }
    sums.into_iter()
        .map(|(g, items)| {
            let total = weights[&g];
            (g, items.into_iter().map(|(id, s)| (id, s / total)).collect())
        })
        .collect()
}
