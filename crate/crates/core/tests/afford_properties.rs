// SPDX-License-Identifier: MIT OR Apache-2.0

use std::collections::BTreeMap;

use dietbench_core::adequacy::{AdjustedDiet, AdjustedItem};
use dietbench_core::afford::{assign_quintiles, classify, spending_per_ae, QuintileEntry};
use dietbench_core::model::{ConsumptionRecord, FoodGroup, Household, Member, Sex};
use dietbench_core::Money;
use proptest::prelude::*;
use rust_decimal::Decimal;

fn household(spent: &[u32], members: usize, days: u32) -> Household {
    Household {
        household_id: "H".into(),
        location_id: "L".into(),
        region_id: "R".into(),
        sampling_weight: 1.0,
        members: vec![Member::new(30, Sex::Female); members],
        records: spent
            .iter()
            .enumerate()
            .map(|(i, e)| ConsumptionRecord {
                item_id: format!("i{i}"),
                quantity_g: 100.0,
                expenditure: Money::new(Decimal::from(*e)),
            })
            .collect(),
        period_days: days,
        total_expenditure: None,
        rural: None,
    }
}

fn diet(n: usize, ae: f64, f: f64) -> AdjustedDiet {
    AdjustedDiet {
        household_id: "H".into(),
        adult_equivalents: ae,
        items: (0..n)
            .map(|i| AdjustedItem {
                item_id: format!("i{i}"),
                group: FoodGroup::StarchyStaples,
                energy_kcal: 1.0,
                edible_grams: 1.0,
                purchased_grams: 1.0,
                spending: 0.0,
            })
            .collect(),
        group_energy: BTreeMap::new(),
        total_energy: n as f64,
        reported_energy: n as f64 / f,
        adjustment_factor: f,
    }
}

fn entries() -> impl Strategy<Value = Vec<QuintileEntry>> {
    prop::collection::vec((0u32..50, 1u32..1000), 1..60).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (value, w))| QuintileEntry {
                household_id: format!("h{i:03}"),
                value: value as f64,
                weight: w as f64,
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn more_spending_never_becomes_unaffordable(
        spent in prop::collection::vec(0u32..200_000, 1..10),
        bump_at in any::<prop::sample::Index>(),
        bump in 0u32..100_000,
        members in 1usize..7,
        days in 1u32..31,
        f in 0.3f64..3.0,
        cohd in 1u32..60_000,
    ) {
        let cohd = Money::new(Decimal::from(cohd));
        let d = diet(spent.len(), members as f64, f);
        let before = spending_per_ae(&household(&spent, members, days), &d);
        let mut more = spent.clone();
        more[bump_at.index(spent.len())] += bump;
        let after = spending_per_ae(&household(&more, members, days), &d);
        prop_assert!(after >= before);
        prop_assert!(!(classify(before, cohd) && !classify(after, cohd)));
    }

    #[test]
    fn quintiles_ignore_row_order_and_weight_scale(e in entries(), seed in any::<u64>(), scale in 1u32..1000) {
        let base = assign_quintiles(&e);
        let mut shuffled = e.clone();
        // deterministic permutation from the seed
        shuffled.sort_by_key(|x| x.household_id.bytes().fold(seed, |h, b| h.rotate_left(5) ^ b as u64));
        prop_assert_eq!(&base, &assign_quintiles(&shuffled));
        let scaled: Vec<QuintileEntry> =
            e.iter().map(|x| QuintileEntry { weight: x.weight * scale as f64 / 7.0, ..x.clone() }).collect();
        prop_assert_eq!(&base, &assign_quintiles(&scaled));
    }

    #[test]
    fn quintile_shares_partition(e in entries()) {
        let q = assign_quintiles(&e);
        prop_assert_eq!(q.len(), e.len());
        let total: f64 = e.iter().map(|x| x.weight).sum();
        let mut shares = [0.0f64; 5];
        for x in &e {
            let k = q[&x.household_id];
            prop_assert!((1..=5).contains(&k));
            shares[k as usize - 1] += x.weight / total;
        }
        prop_assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        // higher value never sits in a lower quintile
        for a in &e {
            for b in &e {
                if a.value < b.value {
                    prop_assert!(q[&a.household_id] <= q[&b.household_id]);
                }
            }
        }
    }
}
