// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::BTreeMap;

use dietbench_core::adequacy::{
    energy_adjust, score_diet, score_food_groups, score_nutrients, AdjustedDiet, AdjustedItem,
};
use dietbench_core::model::{
    AeBand, AeFactorTable, CompositionRecord, ConsumptionRecord, FoodCatalog, FoodGroup, FoodItem, GuidelineSet,
    Household, Member, NutrientId, NutrientReferenceSet, NutrientVector, Sex, REFERENCE_KCAL,
};
use dietbench_core::Money;
use proptest::prelude::*;
use rust_decimal::prelude::FromPrimitive;
use rust_decimal::Decimal;

const REFS: [f64; 14] = [1000.0, 18.0, 8.0, 1.1, 1.1, 14.0, 1.3, 2.4, 75.0, 400.0, 700.0, 60.0, 65.0, 360.0];

fn refs() -> NutrientReferenceSet {
    NutrientReferenceSet::new(NutrientVector(REFS)).unwrap()
}

fn ae_table() -> AeFactorTable {
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

/// Three items per consumed group plus one excluded item, with varied
/// densities and edible fractions.
fn catalog() -> FoodCatalog {
    let mut c = FoodCatalog::default();
    let groups = FoodGroup::CONSUMED.into_iter().chain([FoodGroup::Excluded]);
    for (gi, g) in groups.enumerate() {
        for j in 0..3 {
            let id = format!("{}_{j}", g.as_str());
            let kcal = 20 + ((gi * 97 + j * 131) % 600) as i64;
            let ef = Decimal::new(60 + ((gi * 7 + j * 13) % 41) as i64, 2);
            let mut n = NutrientVector::default();
            for (k, nid) in NutrientId::ALL.into_iter().enumerate() {
                n.set(nid, REFS[k] * ((gi + j + k) % 5) as f64 / 40.0);
            }
            c.items.insert(
                id.clone(),
                FoodItem { item_id: id.clone(), name: id.clone(), group: g, composition_key: id.clone() },
            );
            c.compositions.insert(
                id.clone(),
                CompositionRecord {
                    composition_key: id,
                    energy_density: Decimal::from(kcal),
                    edible_fraction: ef,
                    nutrients: n,
                },
            );
        }
    }
    c
}

fn household() -> impl Strategy<Value = Household> {
    let member =
        (0u32..90, any::<bool>()).prop_map(|(age, f)| Member::new(age, if f { Sex::Female } else { Sex::Male }));
    let catalog = catalog();
    let ids: Vec<String> = catalog.items.keys().cloned().collect();
    let record = (prop::sample::select(ids), 1u32..5000, 0u32..100_000).prop_map(|(item_id, q, e)| ConsumptionRecord {
        item_id,
        quantity_g: q as f64,
        expenditure: Money::new(Decimal::from(e)),
    });
    (prop::collection::vec(member, 1..7), prop::collection::vec(record, 1..20), 1u32..31).prop_map(
        |(members, records, period_days)| Household {
            household_id: "H".into(),
            location_id: "L".into(),
            region_id: "R".into(),
            sampling_weight: 1.0,
            members,
            records,
            period_days,
            total_expenditure: None,
            rural: None,
        },
    )
}

/// Reported kcal per item straight from the records, for share checks.
fn raw_energy(h: &Household, c: &FoodCatalog) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for r in &h.records {
        if c.item(&r.item_id).unwrap().group == FoodGroup::Excluded {
            continue;
        }
        let comp = c.composition_of(&r.item_id).unwrap();
        *out.entry(r.item_id.clone()).or_insert(0.0) += r.quantity_g * comp.kcal_per_gram_purchased();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn adjustment_hits_reference_and_keeps_shares(h in household()) {
        let c = catalog();
        let raw = raw_energy(&h, &c);
        let raw_total: f64 = raw.values().sum();
        match energy_adjust(&h, &c, &ae_table(), REFERENCE_KCAL) {
            Err(_) => prop_assert!(raw_total == 0.0),
            Ok(d) => {
                prop_assert!((d.total_energy - REFERENCE_KCAL).abs() <= 1e-6);
                for it in &d.items {
                    let before = raw[&it.item_id] / raw_total;
                    let after = it.energy_kcal / d.total_energy;
                    prop_assert!((after - before).abs() <= 1e-9 * before.max(f64::MIN_POSITIVE), "{} vs {}", after, before);
                }
                let again = d.readjust(REFERENCE_KCAL).unwrap();
                prop_assert!((again.adjustment_factor - 1.0).abs() <= 1e-12);
                for (a, b) in d.items.iter().zip(&again.items) {
                    prop_assert!((a.energy_kcal - b.energy_kcal).abs() <= 1e-9 * a.energy_kcal.max(1.0));
                }
            }
        }
    }

    #[test]
    fn scores_are_bounded(h in household()) {
        let c = catalog();
        if let Ok(d) = energy_adjust(&h, &c, &ae_table(), REFERENCE_KCAL) {
            let s = score_diet(&d, &c, &refs(), &GuidelineSet::reference()).unwrap();
            for (_, v) in s.nutrients.nar.iter() {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            for v in s.groups.adequacy.values() {
                prop_assert!((0.0..=1.0).contains(v));
            }
            prop_assert!((0.0..=1.0).contains(&s.mna()));
            prop_assert!((0.0..=1.0).contains(&s.mfga()));
        }
    }

    /// Scoring is monotone in intake at a fixed adjustment.
    #[test]
    fn adding_intake_never_lowers_scores(
        base in prop::collection::vec(0.0f64..3000.0, 14),
        extra in prop::collection::vec(0.0f64..3000.0, 14),
        energy in prop::collection::vec(0.0f64..1500.0, 8),
        add_kcal in 0.0f64..1500.0,
        group in prop::sample::select(FoodGroup::CONSUMED.to_vec()),
    ) {
        let refs = refs();
        let mut totals = NutrientVector::default();
        let mut more = NutrientVector::default();
        for (i, n) in NutrientId::ALL.into_iter().enumerate() {
            totals.set(n, base[i]);
            more.set(n, base[i] + extra[i]);
        }
        prop_assert!(score_nutrients(&more, &refs).mna >= score_nutrients(&totals, &refs).mna);

        let guideline = GuidelineSet::reference();
        let mut items: Vec<AdjustedItem> = FoodGroup::CONSUMED
            .into_iter()
            .zip(&energy)
            .map(|(g, e)| item(g, *e))
            .collect();
        let before = score_food_groups(&diet(items.clone()), &guideline).mfga;
        items.push(item(group, add_kcal));
        let after = score_food_groups(&diet(items), &guideline).mfga;
        prop_assert!(after >= before);
    }
}

fn item(group: FoodGroup, kcal: f64) -> AdjustedItem {
    AdjustedItem {
        item_id: format!("{}_{kcal}", group.as_str()),
        group,
        energy_kcal: kcal,
        edible_grams: 0.0,
        purchased_grams: 0.0,
        spending: 0.0,
    }
}

fn diet(items: Vec<AdjustedItem>) -> AdjustedDiet {
    let mut group_energy = BTreeMap::new();
    for it in &items {
        *group_energy.entry(it.group).or_insert(0.0) += it.energy_kcal;
    }
    let total = items.iter().map(|i| i.energy_kcal).sum();
    AdjustedDiet {
        household_id: "H".into(),
        adult_equivalents: 1.0,
        items,
        group_energy,
        total_energy: total,
        reported_energy: total,
        adjustment_factor: 1.0,
    }
}

/// One adult woman eating each group's target exactly, with one 100 g item
/// carrying every reference nutrient.
#[test]
fn benchmark_diet_scores_one() {
    let guideline = GuidelineSet::reference();
    let mut c = FoodCatalog::default();
    let mut records = Vec::new();
    for g in FoodGroup::GUIDED {
        let target = guideline.energy_target_f64(g);
        let id = g.as_str().to_string();
        let carrier = g == FoodGroup::Vegetables;
        let (kcal, grams, nutrients) = if carrier {
            (Decimal::from_f64(target).unwrap(), 100.0, NutrientVector(REFS))
        } else {
            (Decimal::from(100), target, NutrientVector::default())
        };
        c.items.insert(
            id.clone(),
            FoodItem { item_id: id.clone(), name: id.clone(), group: g, composition_key: id.clone() },
        );
        c.compositions.insert(
            id.clone(),
            CompositionRecord {
                composition_key: id.clone(),
                energy_density: kcal,
                edible_fraction: Decimal::ONE,
                nutrients,
            },
        );
        records.push(ConsumptionRecord { item_id: id, quantity_g: grams, expenditure: Money::ZERO });
    }
    let h = Household {
        household_id: "bench".into(),
        location_id: "L".into(),
        region_id: "R".into(),
        sampling_weight: 1.0,
        members: vec![Member::new(30, Sex::Female)],
        records,
        period_days: 1,
        total_expenditure: None,
        rural: None,
    };
    let d = energy_adjust(&h, &c, &ae_table(), REFERENCE_KCAL).unwrap();
    assert_eq!(d.adjustment_factor, 1.0);
    let s = score_diet(&d, &c, &refs(), &guideline).unwrap();
    assert_eq!(s.mna(), 1.0);
    assert_eq!(s.mfga(), 1.0);
}
