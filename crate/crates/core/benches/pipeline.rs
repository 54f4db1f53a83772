// SPDX-License-Identifier: MIT OR Apache-2.0

//! Sequential against rayon-backed execution for the two wide loops:
//! per-location costing and per-household scoring.

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dietbench_core::adequacy::{energy_adjust, score_diet};
use dietbench_core::model::{
    AeBand, AeFactorTable, CompositionRecord, ConsumptionRecord, FoodCatalog, FoodGroup, FoodItem, GuidelineSet,
    Household, Member, NutrientReferenceSet, NutrientVector, PriceObservation, Sex, YearMonth, REFERENCE_KCAL,
};
use dietbench_core::{cohd_all, CohdOptions, Dataset, Execution, Money, UnitPrice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

const ITEMS_PER_GROUP: usize = 12;

fn dataset(locations: usize, households: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut catalog = FoodCatalog::default();
    for g in FoodGroup::CONSUMED {
        for j in 0..ITEMS_PER_GROUP {
            let id = format!("{}_{j:02}", g.as_str());
            let mut n = NutrientVector::default();
            for v in n.0.iter_mut() {
                *v = rng.gen_range(0.0..50.0);
            }
            catalog.items.insert(
                id.clone(),
                FoodItem { item_id: id.clone(), name: id.clone(), group: g, composition_key: id.clone() },
            );
            catalog.compositions.insert(
                id.clone(),
                CompositionRecord {
                    composition_key: id,
                    energy_density: Decimal::from(rng.gen_range(20..800)),
                    edible_fraction: Decimal::new(rng.gen_range(50..=100), 2),
                    nutrients: n,
                },
            );
        }
    }
    let ids: Vec<String> = catalog.items.keys().cloned().collect();
    let period = YearMonth { year: 2022, month: 3 };
    let mut prices = Vec::new();
    for l in 0..locations {
        for id in &ids {
            prices.push(PriceObservation {
                item_id: id.clone(),
                location_id: format!("L{l:05}"),
                period,
                price_per_gram: UnitPrice::new(Decimal::new(rng.gen_range(1_000..60_000), 3)),
            });
        }
    }
    let hs = (0..households)
        .map(|i| Household {
            household_id: format!("H{i:07}"),
            location_id: format!("L{:05}", i % locations),
            region_id: "R".into(),
            sampling_weight: 1.0,
            members: (0..rng.gen_range(1..7)).map(|_| Member::new(rng.gen_range(0..80), Sex::Female)).collect(),
            records: (0..20)
                .map(|_| ConsumptionRecord {
                    item_id: ids[rng.gen_range(0..ids.len())].clone(),
                    quantity_g: rng.gen_range(10.0..3000.0),
                    expenditure: Money::new(Decimal::from(rng.gen_range(100..50_000))),
                })
                .collect(),
            period_days: 7,
            total_expenditure: None,
            rural: None,
        })
        .collect();
    Dataset {
        catalog,
        guideline: GuidelineSet::reference(),
        nutrient_refs: NutrientReferenceSet::new(NutrientVector([100.0; 14])).unwrap(),
        ae_table: AeFactorTable::new(vec![
            AeBand { sex: Sex::Female, age_min: 0, age_max: None, factor: 1.0 },
            AeBand { sex: Sex::Male, age_min: 0, age_max: None, factor: 1.2 },
        ])
        .unwrap(),
        prices,
        households: hs,
        region_names: BTreeMap::new(),
    }
}

fn bench_cohd(c: &mut Criterion) {
    let ds = dataset(2_000, 10);
    let options = CohdOptions::default();
    let mut group = c.benchmark_group("cohd_all");
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| cohd_all(&ds, &options, exec))
        });
    }
    group.finish();
}

fn bench_households(c: &mut Criterion) {
    let ds = dataset(50, 20_000);
    let mut group = c.benchmark_group("adjust_and_score");
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| {
                exec.map(&ds.households, |h| {
                    let d = energy_adjust(h, &ds.catalog, &ds.ae_table, REFERENCE_KCAL).ok()?;
                    score_diet(&d, &ds.catalog, &ds.nutrient_refs, &ds.guideline).ok()
                })
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_cohd, bench_households
}
criterion_main!(benches);
