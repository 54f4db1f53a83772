// SPDX-License-Identifier: MIT OR Apache-2.0

//! Domain types shared across the crate, plus adult-equivalent counting and
//! price-per-kilocalorie conversion.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::money::{Money, UnitPrice};

/// Energy requirement of the reference adult (kcal/day).
pub const REFERENCE_KCAL: f64 = 2330.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("roster is empty")]
    EmptyRoster,
    #[error("member {index} (age {age}, {sex}) has no adult-equivalent factor")]
    UnresolvedMember { index: usize, age: u32, sex: Sex },
    #[error("composition '{key}' has non-positive energy density; item cannot be priced per kcal")]
    NotConvertible { key: String },
    #[error("composition '{key}' has edible fraction {value} outside (0, 1]")]
    BadEdibleFraction { key: String, value: Decimal },
    #[error("invalid adult-equivalent table: {0}")]
    AeTable(String),
    #[error("invalid guideline set: {0}")]
    Guideline(String),
    #[error("unknown {kind} '{value}'")]
    Unknown { kind: &'static str, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FoodGroup {
    StarchyStaples,
    OilsFats,
    Fruits,
    Vegetables,
    LegumesNutsSeeds,
    AnimalSourceFoods,
    Discretionary,
    MixedDishes,
    Excluded,
}

impl FoodGroup {
    pub const ALL: [FoodGroup; 9] = [
        FoodGroup::StarchyStaples,
        FoodGroup::OilsFats,
        FoodGroup::Fruits,
        FoodGroup::Vegetables,
        FoodGroup::LegumesNutsSeeds,
        FoodGroup::AnimalSourceFoods,
        FoodGroup::Discretionary,
        FoodGroup::MixedDishes,
        FoodGroup::Excluded,
    ];

    /// The six groups a healthy diet requires.
    pub const RECOMMENDED: [FoodGroup; 6] = [
        FoodGroup::StarchyStaples,
        FoodGroup::OilsFats,
        FoodGroup::Fruits,
        FoodGroup::Vegetables,
        FoodGroup::LegumesNutsSeeds,
        FoodGroup::AnimalSourceFoods,
    ];

    /// Groups carrying a guideline energy target.
    pub const GUIDED: [FoodGroup; 7] = [
        FoodGroup::StarchyStaples,
        FoodGroup::OilsFats,
        FoodGroup::Fruits,
        FoodGroup::Vegetables,
        FoodGroup::LegumesNutsSeeds,
        FoodGroup::AnimalSourceFoods,
        FoodGroup::Discretionary,
    ];

    /// Groups whose items count toward reported energy and nutrients.
    pub const CONSUMED: [FoodGroup; 8] = [
        FoodGroup::StarchyStaples,
        FoodGroup::OilsFats,
        FoodGroup::Fruits,
        FoodGroup::Vegetables,
        FoodGroup::LegumesNutsSeeds,
        FoodGroup::AnimalSourceFoods,
        FoodGroup::Discretionary,
        FoodGroup::MixedDishes,
    ];

    pub fn is_recommended(self) -> bool {
        Self::RECOMMENDED.contains(&self)
    }

    /// Whether the group can be priced into a least-cost basket at all.
    pub fn is_costed(self) -> bool {
        Self::GUIDED.contains(&self)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FoodGroup::StarchyStaples => "StarchyStaples",
            FoodGroup::OilsFats => "OilsFats",
            FoodGroup::Fruits => "Fruits",
            FoodGroup::Vegetables => "Vegetables",
            FoodGroup::LegumesNutsSeeds => "LegumesNutsSeeds",
            FoodGroup::AnimalSourceFoods => "AnimalSourceFoods",
            FoodGroup::Discretionary => "Discretionary",
            FoodGroup::MixedDishes => "MixedDishes",
            FoodGroup::Excluded => "Excluded",
        }
    }
}

impl fmt::Display for FoodGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FoodGroup {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        FoodGroup::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ModelError::Unknown { kind: "food group", value: s.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NutrientId {
    Calcium,
    Iron,
    Zinc,
    Thiamin,
    Riboflavin,
    Niacin,
    VitaminB6,
    VitaminB12,
    VitaminC,
    Folate,
    VitaminA,
    Protein,
    Lipids,
    Carbohydrate,
}

impl NutrientId {
    pub const COUNT: usize = 14;

    pub const ALL: [NutrientId; 14] = [
        NutrientId::Calcium,
        NutrientId::Iron,
        NutrientId::Zinc,
        NutrientId::Thiamin,
        NutrientId::Riboflavin,
        NutrientId::Niacin,
        NutrientId::VitaminB6,
        NutrientId::VitaminB12,
        NutrientId::VitaminC,
        NutrientId::Folate,
        NutrientId::VitaminA,
        NutrientId::Protein,
        NutrientId::Lipids,
        NutrientId::Carbohydrate,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_micronutrient(self) -> bool {
        !matches!(self, NutrientId::Protein | NutrientId::Lipids | NutrientId::Carbohydrate)
    }

    /// Identifier used in `nutrient_refs.csv` and report columns.
    pub fn as_str(self) -> &'static str {
        match self {
            NutrientId::Calcium => "calcium",
            NutrientId::Iron => "iron",
            NutrientId::Zinc => "zinc",
            NutrientId::Thiamin => "thiamin",
            NutrientId::Riboflavin => "riboflavin",
            NutrientId::Niacin => "niacin",
            NutrientId::VitaminB6 => "vitaminB6",
            NutrientId::VitaminB12 => "vitaminB12",
            NutrientId::VitaminC => "vitaminC",
            NutrientId::Folate => "folate",
            NutrientId::VitaminA => "vitaminA",
            NutrientId::Protein => "protein",
            NutrientId::Lipids => "lipids",
            NutrientId::Carbohydrate => "carbohydrate",
        }
    }

    /// Column name in `composition.csv`.
    pub fn composition_column(self) -> &'static str {
        match self {
            NutrientId::Calcium => "calcium_mg",
            NutrientId::Iron => "iron_mg",
            NutrientId::Zinc => "zinc_mg",
            NutrientId::Thiamin => "thiamin_mg",
            NutrientId::Riboflavin => "riboflavin_mg",
            NutrientId::Niacin => "niacin_mg",
            NutrientId::VitaminB6 => "vitb6_mg",
            NutrientId::VitaminB12 => "vitb12_ug",
            NutrientId::VitaminC => "vitc_mg",
            NutrientId::Folate => "folate_ug",
            NutrientId::VitaminA => "vita_ug_rae",
            NutrientId::Protein => "protein_g",
            NutrientId::Lipids => "lipids_g",
            NutrientId::Carbohydrate => "carbohydrate_g",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            NutrientId::VitaminB12 | NutrientId::Folate | NutrientId::VitaminA => "ug",
            NutrientId::Protein | NutrientId::Lipids | NutrientId::Carbohydrate => "g",
            _ => "mg",
        }
    }
}

impl fmt::Display for NutrientId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NutrientId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        NutrientId::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ModelError::Unknown { kind: "nutrient", value: s.to_string() })
    }
}

/// One value per [`NutrientId`], indexed by the enum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NutrientVector(pub [f64; NutrientId::COUNT]);

impl NutrientVector {
    pub fn get(&self, n: NutrientId) -> f64 {
        self.0[n.index()]
    }

    pub fn set(&mut self, n: NutrientId, value: f64) {
        self.0[n.index()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (NutrientId, f64)> + '_ {
        NutrientId::ALL.into_iter().map(|n| (n, self.0[n.index()]))
    }

    /// `self += other * factor`
    pub fn add_scaled(&mut self, other: &NutrientVector, factor: f64) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += b * factor;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoodItem {
    pub item_id: String,
    pub name: String,
    pub group: FoodGroup,
    pub composition_key: String,
}

/// Energy, edible fraction and nutrient densities per 100 g edible portion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionRecord {
    pub composition_key: String,
    /// kcal per 100 g edible portion.
    pub energy_density: Decimal,
    pub edible_fraction: Decimal,
    pub nutrients: NutrientVector,
}

impl CompositionRecord {
    pub fn energy_density_f64(&self) -> f64 {
        self.energy_density.to_f64().unwrap_or(0.0)
    }

    pub fn edible_fraction_f64(&self) -> f64 {
        self.edible_fraction.to_f64().unwrap_or(0.0)
    }

    /// Edible kilocalories in one gram as purchased.
    pub fn kcal_per_gram_purchased(&self) -> f64 {
        self.edible_fraction_f64() * self.energy_density_f64() / 100.0
    }
}

/// Items and their composition records, keyed for lookup.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FoodCatalog {
    pub items: BTreeMap<String, FoodItem>,
    pub compositions: BTreeMap<String, CompositionRecord>,
}

impl FoodCatalog {
    pub fn item(&self, item_id: &str) -> Option<&FoodItem> {
        self.items.get(item_id)
    }

    pub fn composition_of(&self, item_id: &str) -> Option<&CompositionRecord> {
        self.items.get(item_id).and_then(|i| self.compositions.get(&i.composition_key))
    }

    /// Items outside the `Excluded` group.
    pub fn usable_items(&self) -> impl Iterator<Item = &FoodItem> {
        self.items.values().filter(|i| i.group != FoodGroup::Excluded)
    }
}

/// Reference daily intakes of the reference adult, same units as composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NutrientReferenceSet(NutrientVector);

impl NutrientReferenceSet {
    pub fn new(values: NutrientVector) -> Result<Self, ModelError> {
        if let Some((n, v)) = values.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(ModelError::Unknown { kind: "positive reference for nutrient", value: format!("{n}={v}") });
        }
        Ok(NutrientReferenceSet(values))
    }

    pub fn get(&self, n: NutrientId) -> f64 {
        self.0.get(n)
    }

    pub fn values(&self) -> &NutrientVector {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTarget {
    /// kcal/day
    pub energy_kcal: Decimal,
    pub item_count: u32,
}

/// Per-group energy targets and item counts of a food-based guideline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuidelineSet {
    targets: BTreeMap<FoodGroup, GroupTarget>,
    total_energy: Decimal,
}

impl GuidelineSet {
    /// Tolerance on the target-sum identity, kcal.
    pub const SUM_TOLERANCE: Decimal = Decimal::from_parts(5, 0, 0, false, 1);

    pub fn new(targets: BTreeMap<FoodGroup, GroupTarget>, total_energy: Decimal) -> Result<Self, ModelError> {
        for g in FoodGroup::GUIDED {
            let Some(t) = targets.get(&g) else {
                return Err(ModelError::Guideline(format!("missing group {g}")));
            };
            if t.energy_kcal < Decimal::ZERO {
                return Err(ModelError::Guideline(format!("negative target for {g}")));
            }
            if t.energy_kcal > Decimal::ZERO && t.item_count == 0 {
                return Err(ModelError::Guideline(format!("group {g} has a positive target but item_count 0")));
            }
        }
        if let Some(g) = targets.keys().find(|g| !g.is_costed()) {
            return Err(ModelError::Guideline(format!("group {g} cannot carry a target")));
        }
        let sum: Decimal = targets.values().map(|t| t.energy_kcal).sum();
        if (sum - total_energy).abs() > Self::SUM_TOLERANCE {
            return Err(ModelError::Guideline(format!(
                "group targets sum to {sum} kcal but total is {total_energy} kcal"
            )));
        }
        Ok(GuidelineSet { targets, total_energy })
    }

    /// The seven-group targets from the national guideline (2330 kcal/day).
    pub fn reference() -> Self {
        let rows = [
            (FoodGroup::StarchyStaples, 1256, 2),
            (FoodGroup::OilsFats, 275, 1),
            (FoodGroup::Fruits, 138, 2),
            (FoodGroup::Vegetables, 97, 3),
            (FoodGroup::LegumesNutsSeeds, 265, 1),
            (FoodGroup::AnimalSourceFoods, 199, 2),
            (FoodGroup::Discretionary, 100, 1),
        ];
        let targets = rows
            .into_iter()
            .map(|(g, e, k)| (g, GroupTarget { energy_kcal: Decimal::from(e), item_count: k }))
            .collect();
        GuidelineSet::new(targets, Decimal::from(2330)).expect("reference guideline is consistent")
    }

    pub fn target(&self, group: FoodGroup) -> Option<&GroupTarget> {
        self.targets.get(&group)
    }

    pub fn energy_target_f64(&self, group: FoodGroup) -> f64 {
        self.targets.get(&group).and_then(|t| t.energy_kcal.to_f64()).unwrap_or(0.0)
    }

    pub fn total_energy(&self) -> Decimal {
        self.total_energy
    }

    pub fn total_energy_f64(&self) -> f64 {
        self.total_energy.to_f64().unwrap_or(REFERENCE_KCAL)
    }

    pub fn targets(&self) -> &BTreeMap<FoodGroup, GroupTarget> {
        &self.targets
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct YearMonth {
    pub year: i32,
    pub month: u8,
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::Unknown { kind: "year-month", value: s.to_string() };
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        let year = y.parse().map_err(|_| bad())?;
        let month: u8 = m.parse().map_err(|_| bad())?;
        if !(1..=12).contains(&month) {
            return Err(bad());
        }
        Ok(YearMonth { year, month })
    }
}

/// One item's retail price at one location in one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceObservation {
    pub item_id: String,
    pub location_id: String,
    pub period: YearMonth,
    /// Currency per gram as purchased.
    pub price_per_gram: UnitPrice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sex {
    Female,
    Male,
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sex::Female => "female",
            Sex::Male => "male",
        })
    }
}

impl FromStr for Sex {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" | "female" => Ok(Sex::Female),
            "m" | "male" => Ok(Sex::Male),
            other => Err(ModelError::Unknown { kind: "sex", value: other.to_string() }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub age_years: u32,
    pub sex: Sex,
}

impl Member {
    pub fn new(age_years: u32, sex: Sex) -> Self {
        Member { age_years, sex }
    }
}

/// Inclusive age band; `age_max = None` is open-ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeBand {
    pub sex: Sex,
    pub age_min: u32,
    pub age_max: Option<u32>,
    pub factor: f64,
}

impl AeBand {
    fn contains(&self, age: u32) -> bool {
        age >= self.age_min && self.age_max.is_none_or(|m| age <= m)
    }
}

/// Energy requirement of each (age, sex) relative to the reference adult.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AeFactorTable {
    bands: Vec<AeBand>,
}

impl AeFactorTable {
    /// Builds a table, rejecting non-positive factors and overlapping bands.
    ///
    /// Coverage of all ages is checked separately by [`Self::check_partition`].
    pub fn new(mut bands: Vec<AeBand>) -> Result<Self, ModelError> {
        for b in &bands {
            if !(b.factor > 0.0 && b.factor.is_finite()) {
                return Err(ModelError::AeTable(format!(
                    "factor {} for {} {}.. is not positive",
                    b.factor, b.sex, b.age_min
                )));
            }
            if b.age_max.is_some_and(|m| m < b.age_min) {
                return Err(ModelError::AeTable(format!("band {} {}..{:?} is empty", b.sex, b.age_min, b.age_max)));
            }
        }
        bands.sort_by_key(|b| (b.sex, b.age_min));
        for pair in bands.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a.sex == b.sex && a.age_max.is_none_or(|m| m >= b.age_min) {
                return Err(ModelError::AeTable(format!(
                    "bands for {} starting at {} and {} overlap",
                    a.sex, a.age_min, b.age_min
                )));
            }
        }
        Ok(AeFactorTable { bands })
    }

    /// Checks that bands partition `[0, inf)` for both sexes and that the
    /// reference cell (female, 30) equals 1.
    pub fn check_partition(&self) -> Result<(), ModelError> {
        for sex in [Sex::Female, Sex::Male] {
            let mut next = 0u32;
            let mut open = false;
            for b in self.bands.iter().filter(|b| b.sex == sex) {
                if b.age_min != next {
                    return Err(ModelError::AeTable(format!(
                        "{sex} ages {next}..{} are not covered",
                        b.age_min.saturating_sub(1)
                    )));
                }
                match b.age_max {
                    Some(m) => next = m + 1,
                    None => {
                        open = true;
                        break;
                    }
                }
            }
            if !open {
                return Err(ModelError::AeTable(format!("{sex} ages from {next} upward are not covered")));
            }
        }
        match self.factor(30, Sex::Female) {
            Some(f) if (f - 1.0).abs() <= 1e-12 => Ok(()),
            Some(f) => Err(ModelError::AeTable(format!("reference cell (female, 30) is {f}, expected 1"))),
            None => Err(ModelError::AeTable("reference cell (female, 30) missing".into())),
        }
    }

    pub fn factor(&self, age: u32, sex: Sex) -> Option<f64> {
        self.bands.iter().find(|b| b.sex == sex && b.contains(age)).map(|b| b.factor)
    }

    pub fn bands(&self) -> &[AeBand] {
        &self.bands
    }
}

/// One item consumed by a household over its recall period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsumptionRecord {
    pub item_id: String,
    /// Grams as purchased per recall period.
    pub quantity_g: f64,
    /// Currency per recall period.
    pub expenditure: Money,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Household {
    pub household_id: String,
    pub location_id: String,
    pub region_id: String,
    pub sampling_weight: f64,
    pub members: Vec<Member>,
    pub records: Vec<ConsumptionRecord>,
    /// Length of the recall period the records cover.
    pub period_days: u32,
    /// Total (food and non-food) expenditure per recall period, when surveyed.
    pub total_expenditure: Option<Money>,
    pub rural: Option<bool>,
}

impl Household {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Sampling weight times member count.
    pub fn person_weight(&self) -> f64 {
        self.sampling_weight * self.members.len() as f64
    }
}

/// One item chosen into a least-cost group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedItem {
    pub item_id: String,
    /// Share of the group's energy target supplied by this item.
    pub energy_share: f64,
    pub kcal_price: UnitPrice,
    pub cost: Money,
}

/// A solved least-cost diet at one location (currency per day).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DietBasket {
    pub location_id: String,
    pub group_costs: BTreeMap<FoodGroup, Money>,
    pub selected: BTreeMap<FoodGroup, Vec<SelectedItem>>,
    pub total_cost: Money,
    /// All included groups satisfiable.
    pub complete: bool,
    pub missing_groups: Vec<FoodGroup>,
    /// Groups filled from the parent region's pooled prices.
    pub borrowed_groups: Vec<FoodGroup>,
}

impl DietBasket {
    pub fn group_cost(&self, group: FoodGroup) -> Option<Money> {
        self.group_costs.get(&group).copied()
    }

    pub fn selected_ids(&self, group: FoodGroup) -> Vec<&str> {
        self.selected.get(&group).map(|v| v.iter().map(|s| s.item_id.as_str()).collect()).unwrap_or_default()
    }
}

/// Sum of adult-equivalent factors over a roster.
pub fn adult_equivalents(members: &[Member], table: &AeFactorTable) -> Result<f64, ModelError> {
    if members.is_empty() {
        return Err(ModelError::EmptyRoster);
    }
    members
        .iter()
        .enumerate()
        .map(|(index, m)| {
            table.factor(m.age_years, m.sex).ok_or(ModelError::UnresolvedMember { index, age: m.age_years, sex: m.sex })
        })
        .sum()
}

/// Cost of one edible kilocalorie, accounting for inedible waste.
pub fn price_per_kcal(obs: &PriceObservation, comp: &CompositionRecord) -> Result<UnitPrice, ModelError> {
    if comp.energy_density <= Decimal::ZERO {
        return Err(ModelError::NotConvertible { key: comp.composition_key.clone() });
    }
    if comp.edible_fraction <= Decimal::ZERO || comp.edible_fraction > Decimal::ONE {
        return Err(ModelError::BadEdibleFraction { key: comp.composition_key.clone(), value: comp.edible_fraction });
    }
    let kcal_per_gram = comp.edible_fraction * comp.energy_density / Decimal::ONE_HUNDRED;
    Ok(UnitPrice::new(obs.price_per_gram.value() / kcal_per_gram))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fixture_ae_table() -> AeFactorTable {
        AeFactorTable::new(vec![
            AeBand { sex: Sex::Female, age_min: 0, age_max: Some(9), factor: 0.6 },
            AeBand { sex: Sex::Female, age_min: 10, age_max: Some(17), factor: 0.9 },
            AeBand { sex: Sex::Female, age_min: 18, age_max: Some(59), factor: 1.0 },
            AeBand { sex: Sex::Female, age_min: 60, age_max: None, factor: 0.8 },
            AeBand { sex: Sex::Male, age_min: 0, age_max: Some(9), factor: 0.65 },
            AeBand { sex: Sex::Male, age_min: 10, age_max: Some(17), factor: 0.7 },
            AeBand { sex: Sex::Male, age_min: 18, age_max: None, factor: 1.2 },
        ])
        .unwrap()
    }

    fn comp(energy: &str, edible: &str) -> CompositionRecord {
        CompositionRecord {
            composition_key: "c".into(),
            energy_density: energy.parse().unwrap(),
            edible_fraction: edible.parse().unwrap(),
            nutrients: NutrientVector::default(),
        }
    }

    fn per_kg(price: i64) -> PriceObservation {
        PriceObservation {
            item_id: "i".into(),
            location_id: "l".into(),
            period: YearMonth { year: 2023, month: 3 },
            price_per_gram: UnitPrice::new(Decimal::from(price) / Decimal::from(1000)),
        }
    }

    #[test]
    fn group_partition() {
        assert_eq!(FoodGroup::RECOMMENDED.len(), 6);
        assert!(FoodGroup::ALL[..6].iter().all(|g| g.is_recommended()));
        assert!(!FoodGroup::Discretionary.is_recommended());
        assert!(FoodGroup::Discretionary.is_costed());
        assert!(!FoodGroup::MixedDishes.is_costed());
        assert!(!FoodGroup::Excluded.is_costed());
        assert_eq!("vegetables".parse::<FoodGroup>().unwrap(), FoodGroup::Vegetables);
    }

    #[test]
    fn eleven_micro_three_macro() {
        let micro = NutrientId::ALL.iter().filter(|n| n.is_micronutrient()).count();
        assert_eq!(micro, 11);
        assert_eq!(NutrientId::ALL.len() - micro, 3);
        for (i, n) in NutrientId::ALL.iter().enumerate() {
            assert_eq!(n.index(), i);
        }
    }

    #[test]
    fn reference_guideline() {
        let g = GuidelineSet::reference();
        assert_eq!(g.total_energy(), Decimal::from(2330));
        assert_eq!(g.target(FoodGroup::Vegetables).unwrap().item_count, 3);
        assert_eq!(g.energy_target_f64(FoodGroup::StarchyStaples), 1256.0);
    }

    #[test]
    fn guideline_sum_mismatch_rejected() {
        let mut t = GuidelineSet::reference().targets().clone();
        t.get_mut(&FoodGroup::Fruits).unwrap().energy_kcal = Decimal::from(200);
        let err = GuidelineSet::new(t, Decimal::from(2330)).unwrap_err();
        assert!(err.to_string().contains("2392"), "{err}");
    }

    #[test]
    fn ae_reference_woman() {
        let t = fixture_ae_table();
        t.check_partition().unwrap();
        let f30 = Member::new(30, Sex::Female);
        assert_eq!(adult_equivalents(&[f30], &t).unwrap(), 1.0);
        assert_eq!(adult_equivalents(&[f30, f30], &t).unwrap(), 2.0);
    }

    #[test]
    fn ae_fixture_roster() {
        let t = fixture_ae_table();
        let roster = [Member::new(30, Sex::Female), Member::new(10, Sex::Male), Member::new(65, Sex::Female)];
        // 1.0 + 0.7 + 0.8
        assert!((adult_equivalents(&roster, &t).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn ae_unresolvable_member_named() {
        let t = AeFactorTable::new(vec![AeBand { sex: Sex::Female, age_min: 18, age_max: None, factor: 1.0 }]).unwrap();
        let err = adult_equivalents(&[Member::new(30, Sex::Female), Member::new(4, Sex::Male)], &t).unwrap_err();
        assert_eq!(err, ModelError::UnresolvedMember { index: 1, age: 4, sex: Sex::Male });
        assert!(t.check_partition().is_err());
        assert_eq!(adult_equivalents(&[], &t).unwrap_err(), ModelError::EmptyRoster);
    }

    #[test]
    fn ae_overlap_and_gap_detected() {
        let overlap = AeFactorTable::new(vec![
            AeBand { sex: Sex::Male, age_min: 0, age_max: Some(20), factor: 1.0 },
            AeBand { sex: Sex::Male, age_min: 20, age_max: None, factor: 1.0 },
        ]);
        assert!(overlap.is_err());
        let gap = AeFactorTable::new(vec![
            AeBand { sex: Sex::Female, age_min: 0, age_max: Some(10), factor: 1.0 },
            AeBand { sex: Sex::Female, age_min: 12, age_max: None, factor: 1.0 },
            AeBand { sex: Sex::Male, age_min: 0, age_max: None, factor: 1.0 },
        ])
        .unwrap();
        assert!(gap.check_partition().unwrap_err().to_string().contains("11"));
    }

    #[test]
    fn price_per_kcal_unit_identity() {
        let p = price_per_kcal(&per_kg(12_000), &comp("100", "1.0")).unwrap();
        assert_eq!(p.value(), Decimal::from(12));
    }

    #[test]
    fn price_per_kcal_with_waste() {
        let p = price_per_kcal(&per_kg(12_000), &comp("360", "0.87")).unwrap();
        // 12000 / (0.87 * 3600)
        assert!((p.to_f64() - 12000.0 / (0.87 * 3600.0)).abs() < 1e-9);
        assert_eq!(p.to_string(), "3.831417624521");
    }

    #[test]
    fn halving_edible_fraction_doubles_price() {
        let full = price_per_kcal(&per_kg(9_000), &comp("250", "0.8")).unwrap();
        let half = price_per_kcal(&per_kg(9_000), &comp("250", "0.4")).unwrap();
        assert_eq!(half.value(), full.value() * Decimal::TWO);
    }

    #[test]
    fn zero_energy_not_convertible() {
        let err = price_per_kcal(&per_kg(1_000), &comp("0", "1")).unwrap_err();
        assert!(matches!(err, ModelError::NotConvertible { .. }));
    }
}
