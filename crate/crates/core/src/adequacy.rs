// SPDX-License-Identifier: MIT OR Apache-2.0

//! Energy adjustment of reported diets and nutrient / food-group adequacy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::afford::{Panel, PanelAssignment};
use crate::model::{
    adult_equivalents, AeFactorTable, FoodCatalog, FoodGroup, GuidelineSet, Household, ModelError, NutrientId,
    NutrientReferenceSet, NutrientVector,
};
use crate::stats::{weighted_mean, weighted_quantile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdjustError {
    #[error("household '{household_id}' reports no energy")]
    ZeroEnergy { household_id: String },
    #[error("item '{item_id}' has no item or composition record")]
    UnknownItem { item_id: String },
    #[error("household '{household_id}': {source}")]
    Model {
        household_id: String,
        #[source]
        source: ModelError,
    },
}

/// One item of an energy-adjusted diet, per adult equivalent per day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustedItem {
    pub item_id: String,
    pub group: FoodGroup,
    pub energy_kcal: f64,
    pub edible_grams: f64,
    pub purchased_grams: f64,
    /// Energy-adjusted spending.
    pub spending: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustedDiet {
    pub household_id: String,
    pub adult_equivalents: f64,
    /// Sorted by item id.
    pub items: Vec<AdjustedItem>,
    pub group_energy: BTreeMap<FoodGroup, f64>,
    pub total_energy: f64,
    /// Reported energy per adult equivalent per day, before adjustment.
    pub reported_energy: f64,
    pub adjustment_factor: f64,
}

impl AdjustedDiet {
    pub fn group_energy(&self, group: FoodGroup) -> f64 {
        self.group_energy.get(&group).copied().unwrap_or(0.0)
    }

    pub fn energy_shares(&self) -> Vec<f64> {
        self.items.iter().map(|i| i.energy_kcal / self.total_energy).collect()
    }

    fn from_items(
        household_id: String,
        adult_equivalents: f64,
        mut items: Vec<AdjustedItem>,
        reference_kcal: f64,
    ) -> Result<Self, AdjustError> {
        let reported: f64 = items.iter().map(|i| i.energy_kcal).sum();
        if !(reported > 0.0 && reported.is_finite()) {
            return Err(AdjustError::ZeroEnergy { household_id });
        }
        let f = reference_kcal / reported;
        for it in &mut items {
            it.energy_kcal *= f;
            it.edible_grams *= f;
            it.purchased_grams *= f;
            it.spending *= f;
        }
        let mut group_energy: BTreeMap<FoodGroup, f64> = BTreeMap::new();
        for it in &items {
            *group_energy.entry(it.group).or_default() += it.energy_kcal;
        }
        let total_energy = items.iter().map(|i| i.energy_kcal).sum();
        Ok(AdjustedDiet {
            household_id,
            adult_equivalents,
            items,
            group_energy,
            total_energy,
            reported_energy: reported,
            adjustment_factor: f,
        })
    }

    /// Adjusts this diet again to `reference_kcal`. On an adjusted diet the
    /// new factor is 1 up to rounding.
    pub fn readjust(&self, reference_kcal: f64) -> Result<AdjustedDiet, AdjustError> {
        AdjustedDiet::from_items(self.household_id.clone(), self.adult_equivalents, self.items.clone(), reference_kcal)
    }
}

/// Scales a household's reported diet so that energy per adult equivalent
/// equals `reference_kcal`, preserving item ratios.
///
/// Excluded items take no part. Spending is scaled by the same factor.
pub fn energy_adjust(
    household: &Household,
    catalog: &FoodCatalog,
    ae_table: &AeFactorTable,
    reference_kcal: f64,
) -> Result<AdjustedDiet, AdjustError> {
    let ae = adult_equivalents(&household.members, ae_table)
        .map_err(|source| AdjustError::Model { household_id: household.household_id.clone(), source })?;
    let days = household.period_days as f64;
    let mut by_item: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    for r in &household.records {
        let e = by_item.entry(r.item_id.as_str()).or_default();
        e.0 += r.quantity_g;
        e.1 += r.expenditure.to_f64();
    }
    let mut items = Vec::with_capacity(by_item.len());
    for (item_id, (grams, spent)) in by_item {
        let item = catalog.item(item_id).ok_or_else(|| AdjustError::UnknownItem { item_id: item_id.to_string() })?;
        if item.group == FoodGroup::Excluded {
            continue;
        }
        let comp =
            catalog.composition_of(item_id).ok_or_else(|| AdjustError::UnknownItem { item_id: item_id.to_string() })?;
        let purchased = grams / days / ae;
        let edible = purchased * comp.edible_fraction_f64();
        items.push(AdjustedItem {
            item_id: item_id.to_string(),
            group: item.group,
            energy_kcal: edible * comp.energy_density_f64() / 100.0,
            edible_grams: edible,
            purchased_grams: purchased,
            spending: spent / days / ae,
        });
    }
    AdjustedDiet::from_items(household.household_id.clone(), ae, items, reference_kcal)
}

/// Daily nutrient intake per adult equivalent.
pub fn nutrient_totals(diet: &AdjustedDiet, catalog: &FoodCatalog) -> Result<NutrientVector, AdjustError> {
    let mut out = NutrientVector::default();
    for it in &diet.items {
        let comp = catalog
            .composition_of(&it.item_id)
            .ok_or_else(|| AdjustError::UnknownItem { item_id: it.item_id.clone() })?;
        out.add_scaled(&comp.nutrients, it.edible_grams / 100.0);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NutrientScores {
    /// Intake over reference, uncapped.
    pub ratios: NutrientVector,
    /// Ratios capped at 1.
    pub nar: NutrientVector,
    pub mna: f64,
}

pub fn score_nutrients(totals: &NutrientVector, refs: &NutrientReferenceSet) -> NutrientScores {
    let mut ratios = NutrientVector::default();
    let mut nar = NutrientVector::default();
    for n in NutrientId::ALL {
        let r = totals.get(n) / refs.get(n);
        ratios.set(n, r);
        nar.set(n, r.min(1.0));
    }
    let mna = nar.0.iter().sum::<f64>() / NutrientId::COUNT as f64;
    NutrientScores { ratios, nar, mna }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupScores {
    /// Group energy over target for the six recommended groups, uncapped.
    pub ratios: BTreeMap<FoodGroup, f64>,
    pub adequacy: BTreeMap<FoodGroup, f64>,
    pub mfga: f64,
    pub discretionary_kcal: f64,
    pub mixed_dish_kcal: f64,
}

pub fn score_food_groups(diet: &AdjustedDiet, guideline: &GuidelineSet) -> GroupScores {
    let mut ratios = BTreeMap::new();
    let mut adequacy = BTreeMap::new();
    for g in FoodGroup::RECOMMENDED {
        let target = guideline.energy_target_f64(g);
        let r = if target > 0.0 { diet.group_energy(g) / target } else { 1.0 };
        ratios.insert(g, r);
        adequacy.insert(g, r.min(1.0));
    }
    let mfga = adequacy.values().sum::<f64>() / FoodGroup::RECOMMENDED.len() as f64;
    GroupScores {
        ratios,
        adequacy,
        mfga,
        discretionary_kcal: diet.group_energy(FoodGroup::Discretionary),
        mixed_dish_kcal: diet.group_energy(FoodGroup::MixedDishes),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdequacyScores {
    pub household_id: String,
    pub nutrients: NutrientScores,
    pub groups: GroupScores,
}

impl AdequacyScores {
    pub fn mna(&self) -> f64 {
        self.nutrients.mna
    }

    pub fn mfga(&self) -> f64 {
        self.groups.mfga
    }
}

pub fn score_diet(
    diet: &AdjustedDiet,
    catalog: &FoodCatalog,
    refs: &NutrientReferenceSet,
    guideline: &GuidelineSet,
) -> Result<AdequacyScores, AdjustError> {
    let totals = nutrient_totals(diet, catalog)?;
    Ok(AdequacyScores {
        household_id: diet.household_id.clone(),
        nutrients: score_nutrients(&totals, refs),
        groups: score_food_groups(diet, guideline),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ItemShares {
    pub shares: BTreeMap<FoodGroup, BTreeMap<String, f64>>,
    /// Groups with no energy in any diet.
    pub omitted: Vec<FoodGroup>,
}

/// Weighted mean, across diets, of each item's share of its group's energy.
///
/// A diet contributes to a group only when it has energy in that group, so
/// the shares in every reported group sum to 1.
pub fn item_energy_shares(diets: &[&AdjustedDiet], weights: &[f64]) -> ItemShares {
    let mut sums: BTreeMap<FoodGroup, BTreeMap<String, f64>> = BTreeMap::new();
    let mut group_weight: BTreeMap<FoodGroup, f64> = BTreeMap::new();
    for (diet, &w) in diets.iter().zip(weights) {
        for (g, &e) in &diet.group_energy {
            if e <= 0.0 {
                continue;
            }
            *group_weight.entry(*g).or_default() += w;
            let slot = sums.entry(*g).or_default();
            for it in diet.items.iter().filter(|i| i.group == *g && i.energy_kcal > 0.0) {
                *slot.entry(it.item_id.clone()).or_default() += w * it.energy_kcal / e;
            }
        }
    }
    let mut out = ItemShares::default();
    for g in FoodGroup::CONSUMED {
        match (sums.remove(&g), group_weight.get(&g)) {
            (Some(items), Some(&total)) if total > 0.0 => {
                out.shares.insert(g, items.into_iter().map(|(k, v)| (k, v / total)).collect());
            }
            _ => out.omitted.push(g),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Indicator {
    Nutrient(NutrientId),
    Group(FoodGroup),
    Mna,
    Mfga,
}

impl Indicator {
    pub fn all() -> Vec<Indicator> {
        let mut v: Vec<Indicator> = NutrientId::ALL.into_iter().map(Indicator::Nutrient).collect();
        v.extend(FoodGroup::RECOMMENDED.into_iter().map(Indicator::Group));
        v.push(Indicator::Mna);
        v.push(Indicator::Mfga);
        v
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Indicator::Nutrient(_) => "nutrient",
            Indicator::Group(_) => "food_group",
            Indicator::Mna | Indicator::Mfga => "index",
        }
    }

    pub fn label(&self) -> String {
        match self {
            Indicator::Nutrient(n) => n.to_string(),
            Indicator::Group(g) => g.to_string(),
            Indicator::Mna => "MNA".into(),
            Indicator::Mfga => "MFGA".into(),
        }
    }

    /// `(uncapped, capped)` value for one household.
    pub fn values(&self, s: &AdequacyScores) -> (f64, f64) {
        match self {
            Indicator::Nutrient(n) => (s.nutrients.ratios.get(*n), s.nutrients.nar.get(*n)),
            Indicator::Group(g) => (s.groups.ratios[g], s.groups.adequacy[g]),
            Indicator::Mna => (s.mna(), s.mna()),
            Indicator::Mfga => (s.mfga(), s.mfga()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub panel: Panel,
    pub indicator: Indicator,
    pub households: usize,
    pub weight: f64,
    pub p25: f64,
    pub median: f64,
    pub p75: f64,
    pub mean: f64,
    pub capped_median: f64,
    pub capped_mean: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub rows: Vec<DistributionRow>,
    /// Panels with no households.
    pub empty_panels: Vec<Panel>,
}

/// Weighted quartiles and means of every indicator within each panel.
pub fn adequacy_distributions(
    scores: &[AdequacyScores],
    panels: &PanelAssignment,
    weights: &[f64],
) -> DistributionTable {
    let mut members: BTreeMap<Panel, Vec<usize>> = Panel::all().into_iter().map(|p| (p, Vec::new())).collect();
    for (i, s) in scores.iter().enumerate() {
        for p in panels.panels_of(&s.household_id) {
            members.entry(p).or_default().push(i);
        }
    }
    let mut table = DistributionTable::default();
    for (panel, idx) in members {
        if idx.is_empty() {
            table.empty_panels.push(panel);
            continue;
        }
        for ind in Indicator::all() {
            let raw: Vec<(f64, f64)> = idx.iter().map(|&i| (ind.values(&scores[i]).0, weights[i])).collect();
            let capped: Vec<(f64, f64)> = idx.iter().map(|&i| (ind.values(&scores[i]).1, weights[i])).collect();
            let (Some(median), Some(mean)) = (weighted_quantile(&raw, 0.5), weighted_mean(&raw)) else {
                continue;
            };
            table.rows.push(DistributionRow {
                panel,
                indicator: ind,
                households: idx.len(),
                weight: raw.iter().map(|(_, w)| w).sum(),
                p25: weighted_quantile(&raw, 0.25).unwrap_or(median),
                median,
                p75: weighted_quantile(&raw, 0.75).unwrap_or(median),
                mean,
                capped_median: weighted_quantile(&capped, 0.5).unwrap_or(median),
                capped_mean: weighted_mean(&capped).unwrap_or(mean),
            });
        }
    }
    table
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEnergyRow {
    pub panel: Panel,
    pub group: FoodGroup,
    /// Weighted mean energy-adjusted kcal per adult equivalent per day.
    pub mean_kcal: f64,
    /// Guideline target (zero for mixed dishes).
    pub reference_kcal: f64,
}

/// Weighted mean consumed energy per group and panel, beside the guideline.
pub fn group_energy_by_panel(
    diets: &[&AdjustedDiet],
    panels: &PanelAssignment,
    weights: &[f64],
    guideline: &GuidelineSet,
) -> Vec<GroupEnergyRow> {
    let mut rows = Vec::new();
    for panel in Panel::all() {
        let idx: Vec<usize> = diets
            .iter()
            .enumerate()
            .filter(|(_, d)| panels.panels_of(&d.household_id).contains(&panel))
            .map(|(i, _)| i)
            .collect();
        if idx.is_empty() {
            continue;
        }
        for g in FoodGroup::CONSUMED {
            let v: Vec<(f64, f64)> = idx.iter().map(|&i| (diets[i].group_energy(g), weights[i])).collect();
            if let Some(mean_kcal) = weighted_mean(&v) {
                rows.push(GroupEnergyRow {
                    panel,
                    group: g,
                    mean_kcal,
                    reference_kcal: guideline.energy_target_f64(g),
                });
            }
        }
    }
    rows
}
