// SPDX-License-Identifier: MIT OR Apache-2.0

//! Least-cost selection against exhaustive enumeration, plus the price
//! identities the selection rule must satisfy.

use dietbench_core::cohd::{solve_basket, LocationPriceTable};
use dietbench_core::model::{FoodGroup, GuidelineSet};
use dietbench_core::{CohdOptions, Money, UnitPrice};
use proptest::prelude::*;
use rust_decimal::{Decimal, RoundingStrategy};

type Entry = (FoodGroup, String, UnitPrice);

fn micro(v: u32) -> UnitPrice {
    UnitPrice::new(Decimal::new(v as i64, 6))
}

/// Up to 12 items per group, at least the guideline count, with frequent ties.
fn location() -> impl Strategy<Value = Vec<Entry>> {
    let guideline = GuidelineSet::reference();
    let groups: Vec<BoxedStrategy<Vec<Entry>>> = FoodGroup::GUIDED
        .into_iter()
        .map(|g| {
            let k = guideline.target(g).unwrap().item_count as usize;
            let price = prop_oneof![(1u32..=40).prop_map(|x| x * 25_000), 1u32..=2_000_000];
            prop::collection::vec(price, k..=12)
                .prop_map(move |ps| {
                    ps.into_iter().enumerate().map(|(i, p)| (g, format!("{}_{i:02}", g.as_str()), micro(p))).collect()
                })
                .boxed()
        })
        .collect();
    groups.prop_map(|v| v.into_iter().flatten().collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimum over every size-k subset of T * sum(p) / k, rounded to currency.
fn brute_force_group(prices: &[Decimal], target: Decimal, k: usize) -> Decimal {
    subsets(prices.len(), k)
        .into_iter()
        .map(|s| target * s.iter().map(|&i| prices[i]).sum::<Decimal>() / Decimal::from(k as u64))
        .min()
        .unwrap()
        .round_dp_with_strategy(6, RoundingStrategy::MidpointNearestEven)
}

fn brute_force_total(entries: &[Entry], guideline: &GuidelineSet, options: &CohdOptions) -> Decimal {
    options
        .groups()
        .into_iter()
        .map(|g| {
            let t = guideline.target(g).unwrap();
            let prices: Vec<Decimal> = entries.iter().filter(|e| e.0 == g).map(|e| e.2.value()).collect();
            brute_force_group(&prices, t.energy_kcal, t.item_count as usize)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_order_matches_enumeration(entries in location(), discretionary in any::<bool>()) {
        let guideline = GuidelineSet::reference();
        let options = CohdOptions { include_discretionary: discretionary, ..CohdOptions::default() };
        let table = LocationPriceTable::new("L", entries.clone());
        let basket = solve_basket(&table, None, &guideline, &options);
        prop_assert!(basket.complete);
        prop_assert_eq!(basket.total_cost.value(), brute_force_total(&entries, &guideline, &options));
    }

    #[test]
    fn adding_an_item_never_raises_cost(
        entries in location(),
        group in prop::sample::select(FoodGroup::GUIDED.to_vec()),
        price in 1u32..=2_000_000,
    ) {
        let guideline = GuidelineSet::reference();
        let options = CohdOptions::default();
        let before = solve_basket(&LocationPriceTable::new("L", entries.clone()), None, &guideline, &options);
        let mut more = entries;
        more.push((group, "zz_new".into(), micro(price)));
        let after = solve_basket(&LocationPriceTable::new("L", more), None, &guideline, &options);
        prop_assert!(after.total_cost <= before.total_cost);
    }

    #[test]
    fn scaling_prices_scales_cost(entries in location(), c in prop::sample::select(vec!["0.5", "2", "10"])) {
        let guideline = GuidelineSet::reference();
        let options = CohdOptions::default();
        let c: Decimal = c.parse().unwrap();
        let table = LocationPriceTable::new("L", entries);
        let base = solve_basket(&table, None, &guideline, &options);
        let scaled = solve_basket(&table.scaled(c), None, &guideline, &options);
        for g in options.groups() {
            prop_assert_eq!(base.selected_ids(g), scaled.selected_ids(g));
        }
        // each group cost is rounded to 1e-6 before and after scaling
        let slack = Decimal::new(5, 7) * (c + Decimal::ONE) * Decimal::from(7);
        let diff = (scaled.total_cost.value() - base.total_cost.value() * c).abs();
        prop_assert!(diff <= slack, "diff {} exceeds {}", diff, slack);
    }

    #[test]
    fn uniform_price_identity(p in 1u32..=5_000_000) {
        let guideline = GuidelineSet::reference();
        let price = micro(p);
        let entries: Vec<Entry> = FoodGroup::GUIDED
            .into_iter()
            .flat_map(|g| (0..4).map(move |i| (g, format!("{}_{i}", g.as_str()), price)))
            .collect();
        let table = LocationPriceTable::new("L", entries);
        let with = solve_basket(&table, None, &guideline, &CohdOptions::default());
        let without = solve_basket(
            &table,
            None,
            &guideline,
            &CohdOptions { include_discretionary: false, ..CohdOptions::default() },
        );
        let rel = |got: Money, kcal: i64| {
            let want = Decimal::from(kcal) * price.value();
            ((got.value() - want) / want).abs()
        };
        prop_assert!(rel(with.total_cost, 2330) <= Decimal::new(1, 9));
        prop_assert!(rel(without.total_cost, 2230) <= Decimal::new(1, 9));
    }
}

#[test]
fn enumeration_helper_counts() {
    assert_eq!(subsets(12, 3).len(), 220);
    assert_eq!(subsets(5, 1).len(), 5);
    assert_eq!(
        brute_force_group(&[Decimal::from(3), Decimal::from(1), Decimal::from(2)], Decimal::from(10), 2),
        Decimal::from(15)
    );
}
