#!/usr/bin/env python3
"""Generate the bundled synthetic fixture under fixtures/basic.

Deterministic: rerunning rewrites identical bytes.
"""
import csv
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures" / "basic"

NUTRIENTS = [
    ("calcium", "calcium_mg", "mg", 1000),
    ("iron", "iron_mg", "mg", 18),
    ("zinc", "zinc_mg", "mg", 8),
    ("thiamin", "thiamin_mg", "mg", 1.1),
    ("riboflavin", "riboflavin_mg", "mg", 1.1),
    ("niacin", "niacin_mg", "mg", 14),
    ("vitaminB6", "vitb6_mg", "mg", 1.3),
    ("vitaminB12", "vitb12_ug", "ug", 2.4),
    ("vitaminC", "vitc_mg", "mg", 75),
    ("folate", "folate_ug", "ug", 400),
    ("vitaminA", "vita_ug_rae", "ug", 700),
    ("protein", "protein_g", "g", 60),
    ("lipids", "lipids_g", "g", 65),
    ("carbohydrate", "carbohydrate_g", "g", 360),
]

# item, group, kcal/100g, edible fraction, 14 nutrients per 100 g edible, price per kg
ITEMS = [
    ("rice", "StarchyStaples", 360, 1.0, [6, 0.8, 1.1, 0.07, 0.05, 1.6, 0.15, 0, 0, 8, 0, 6.8, 0.7, 79], 12000),
    ("maize", "StarchyStaples", 365, 1.0, [7, 2.7, 2.2, 0.39, 0.2, 3.6, 0.62, 0, 0, 19, 11, 9.4, 4.7, 74], 9000),
    ("cassava", "StarchyStaples", 160, 0.8, [16, 0.3, 0.3, 0.09, 0.05, 0.9, 0.09, 0, 20, 27, 1, 1.4, 0.3, 38], 5000),
    ("wheat_flour", "StarchyStaples", 364, 1.0, [15, 1.2, 0.7, 0.12, 0.04, 1.3, 0.04, 0, 0, 26, 0, 10.3, 1.0, 76], 11000),
    ("sweet_potato", "StarchyStaples", 86, 0.85, [30, 0.6, 0.3, 0.08, 0.06, 0.6, 0.21, 0, 2.4, 11, 709, 1.6, 0.1, 20], 8000),
    ("palm_oil", "OilsFats", 884, 1.0, [0, 0.01, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 100, 0], 15000),
    ("coconut_oil", "OilsFats", 862, 1.0, [1, 0.05, 0.02, 0, 0, 0, 0, 0, 0, 0, 0, 0, 99, 0], 22000),
    ("margarine", "OilsFats", 717, 1.0, [3, 0, 0, 0.01, 0.04, 0.02, 0.01, 0.1, 0, 1, 819, 0.2, 80, 0.7], 30000),
    ("banana", "Fruits", 89, 0.65, [5, 0.26, 0.15, 0.03, 0.07, 0.67, 0.37, 0, 8.7, 20, 3, 1.1, 0.3, 23], 14000),
    ("papaya", "Fruits", 43, 0.7, [20, 0.25, 0.08, 0.02, 0.03, 0.36, 0.04, 0, 61, 37, 47, 0.5, 0.3, 11], 9000),
    ("orange", "Fruits", 47, 0.73, [40, 0.1, 0.07, 0.09, 0.04, 0.28, 0.06, 0, 53, 30, 11, 0.9, 0.1, 12], 25000),
    ("mango", "Fruits", 60, 0.7, [11, 0.16, 0.09, 0.03, 0.04, 0.67, 0.12, 0, 36, 43, 54, 0.8, 0.4, 15], 20000),
    ("spinach", "Vegetables", 23, 0.72, [99, 2.7, 0.5, 0.08, 0.19, 0.72, 0.2, 0, 28, 194, 469, 2.9, 0.4, 3.6], 10000),
    ("kale", "Vegetables", 49, 0.6, [150, 1.5, 0.4, 0.11, 0.13, 1.0, 0.27, 0, 120, 141, 500, 4.3, 0.9, 8.8], 12000),
    ("carrot", "Vegetables", 41, 0.88, [33, 0.3, 0.24, 0.07, 0.06, 0.98, 0.14, 0, 5.9, 19, 835, 0.9, 0.2, 9.6], 13000),
    ("cabbage", "Vegetables", 25, 0.8, [40, 0.47, 0.18, 0.06, 0.04, 0.23, 0.12, 0, 36, 43, 5, 1.3, 0.1, 5.8], 7000),
    ("tomato", "Vegetables", 18, 0.95, [10, 0.27, 0.17, 0.04, 0.02, 0.59, 0.08, 0, 14, 15, 42, 0.9, 0.2, 3.9], 11000),
    ("tofu", "LegumesNutsSeeds", 76, 1.0, [350, 5.4, 0.8, 0.08, 0.05, 0.2, 0.05, 0, 0.1, 15, 0, 8.1, 4.8, 1.9], 16000),
    ("tempeh", "LegumesNutsSeeds", 192, 1.0, [111, 2.7, 1.1, 0.08, 0.36, 2.6, 0.22, 0.1, 0, 24, 0, 20.3, 10.8, 7.6], 18000),
    ("peanuts", "LegumesNutsSeeds", 567, 0.7, [92, 4.6, 3.3, 0.64, 0.14, 12.1, 0.35, 0, 0, 240, 0, 25.8, 49.2, 16.1], 28000),
    ("mung_beans", "LegumesNutsSeeds", 347, 1.0, [132, 6.7, 2.7, 0.62, 0.23, 2.3, 0.38, 0, 4.8, 625, 6, 23.9, 1.2, 62.6], 24000),
    ("egg", "AnimalSourceFoods", 143, 0.88, [56, 1.8, 1.3, 0.04, 0.46, 0.08, 0.17, 0.9, 0, 47, 160, 12.6, 9.5, 0.7], 28000),
    ("chicken", "AnimalSourceFoods", 215, 0.7, [11, 0.9, 1.3, 0.06, 0.12, 6.8, 0.35, 0.3, 0, 6, 41, 18.6, 15.1, 0], 38000),
    ("milk", "AnimalSourceFoods", 61, 1.0, [113, 0.03, 0.37, 0.05, 0.17, 0.09, 0.04, 0.45, 0, 5, 46, 3.2, 3.3, 4.8], 20000),
    ("anchovy", "AnimalSourceFoods", 131, 0.8, [147, 3.3, 1.7, 0.06, 0.26, 14, 0.14, 0.6, 0, 9, 15, 20.4, 4.8, 0], 45000),
    ("tilapia", "AnimalSourceFoods", 96, 0.55, [10, 0.6, 0.3, 0.04, 0.06, 3.9, 0.16, 1.6, 0, 24, 0, 20.1, 1.7, 0], 32000),
    ("sweet_biscuit", "Discretionary", 480, 1.0, [30, 2.0, 0.5, 0.2, 0.2, 2.5, 0.05, 0, 0, 20, 0, 6.5, 20, 70], 40000),
    ("instant_noodle", "Discretionary", 440, 1.0, [20, 4.0, 0.6, 0.7, 0.4, 5.5, 0.05, 0, 0, 60, 0, 9.5, 17, 63], 30000),
    ("chips", "Discretionary", 536, 1.0, [24, 1.6, 0.7, 0.08, 0.2, 4.2, 0.6, 0, 10, 45, 0, 7, 35, 53], 60000),
    ("fried_rice_dish", "MixedDishes", 170, 1.0, [20, 1.0, 0.7, 0.08, 0.06, 1.9, 0.1, 0.1, 2, 15, 40, 5.0, 6.0, 24], 35000),
    ("chicken_soup", "MixedDishes", 60, 1.0, [15, 0.6, 0.4, 0.03, 0.05, 1.5, 0.08, 0.1, 3, 8, 60, 4.0, 2.5, 4], 25000),
    ("tea", "Excluded", 1, 1.0, [0] * 14, 90000),
    ("coffee", "Excluded", 2, 1.0, [0] * 14, 110000),
    ("bottled_water", "Excluded", 0, 1.0, [0] * 14, 3000),
    ("cigarettes", "Excluded", None, None, None, 400000),
]

GUIDELINES = [
    ("StarchyStaples", 1256, 2),
    ("OilsFats", 275, 1),
    ("Fruits", 138, 2),
    ("Vegetables", 97, 3),
    ("LegumesNutsSeeds", 265, 1),
    ("AnimalSourceFoods", 199, 2),
    ("Discretionary", 100, 1),
]

AE_FACTORS = [
    ("F", 0, 3, 0.45), ("F", 4, 9, 0.65), ("F", 10, 17, 0.9), ("F", 18, 29, 1.0), ("F", 30, 59, 1.0), ("F", 60, "", 0.85),
    ("M", 0, 3, 0.5), ("M", 4, 9, 0.7), ("M", 10, 17, 1.1), ("M", 18, 29, 1.25), ("M", 30, 59, 1.2), ("M", 60, "", 0.95),
]

REGIONS = [("R1", "Coastal North"), ("R2", "Highlands"), ("R3", "Eastern Islands")]
LOCATIONS = [("L01", "R1", 1.00), ("L02", "R1", 1.08), ("L03", "R2", 0.92), ("L04", "R2", 1.15), ("L05", "R3", 1.25), ("L06", "R3", 1.40)]


def write(name, header, rows):
    with open(OUT / name, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def fmt(x):
    return f"{x:g}" if isinstance(x, float) else str(x)


def main():
    rng = random.Random(20220301)
    OUT.mkdir(parents=True, exist_ok=True)

    write("items.csv", ["item_id", "name", "group", "composition_key"],
          [(i, i.replace("_", " ").title(), g, f"C_{i}") for i, g, *_ in ITEMS])
    comp_header = ["composition_key", "energy_kcal_100g", "edible_fraction"] + [c for _, c, _, _ in NUTRIENTS]
    write("composition.csv", comp_header,
          [[f"C_{i}", kcal, fmt(ef)] + [fmt(float(v)) for v in nut]
           for i, _, kcal, ef, nut, _ in ITEMS if kcal is not None])
    write("guidelines.csv", ["group", "energy_kcal", "item_count"],
          GUIDELINES + [("TOTAL", sum(e for _, e, _ in GUIDELINES), "")])
    write("nutrient_refs.csv", ["nutrient", "reference_value", "unit"],
          [(n, fmt(float(v)), u) for n, _, u, v in NUTRIENTS])
    write("ae_factors.csv", ["sex", "age_min", "age_max", "factor"], AE_FACTORS)
    write("regions.csv", ["region_id", "label"], REGIONS)

    # prices: every location prices every costed item, with local noise
    local_price = {}
    prices = []
    for loc, _, level in LOCATIONS:
        for item, group, kcal, _, _, base in ITEMS:
            if group in ("MixedDishes",) or (group == "Excluded" and rng.random() < 0.5):
                continue
            per_kg = round(base * level * rng.uniform(0.8, 1.25), -1)
            local_price[(loc, item)] = per_kg / 1000
            if rng.random() < 0.25:
                prices.append((item, loc, 2022, 3, fmt(round(per_kg / 1000, 4)), "g"))
                local_price[(loc, item)] = round(per_kg / 1000, 4)
            else:
                prices.append((item, loc, 2022, 3, int(per_kg), "kg"))
    prices.sort(key=lambda r: (r[1], r[0]))
    write("prices.csv", ["item_id", "location_id", "year", "month", "price", "unit"], prices)

    households, members, consumption = [], [], []
    by_group = {}
    for item, group, *_ in ITEMS:
        by_group.setdefault(group, []).append(item)
    for n in range(1, 26):
        hid = f"H{n:03d}"
        loc, region, _ = LOCATIONS[(n - 1) % len(LOCATIONS)]
        size = rng.randint(1, 6)
        ages = [rng.randint(25, 55)] + [rng.choice([rng.randint(0, 17), rng.randint(18, 75)]) for _ in range(size - 1)]
        for a in ages:
            members.append((hid, a, rng.choice("FM")))
        wealth = rng.uniform(0.35, 2.2)
        days = 7
        chosen = ["rice", "palm_oil"] + rng.sample(by_group["StarchyStaples"][1:], 1)
        for g, k in (("Vegetables", 2), ("Fruits", 1), ("LegumesNutsSeeds", 1), ("AnimalSourceFoods", 1), ("Discretionary", 1)):
            if wealth > 0.6 or rng.random() < 0.5:
                chosen += rng.sample(by_group[g], k)
        if wealth > 1.0:
            chosen += rng.sample(by_group["AnimalSourceFoods"], 2) + rng.sample(by_group["Fruits"], 1)
        if rng.random() < 0.4:
            chosen.append(rng.choice(by_group["MixedDishes"]))
        chosen += rng.sample(by_group["Excluded"], rng.randint(0, 2))
        food_total = 0
        for item in sorted(set(chosen)):
            group = next(g for i, g, *_ in ITEMS if i == item)
            base_g = {"StarchyStaples": 2400, "OilsFats": 220, "Fruits": 500, "Vegetables": 600, "LegumesNutsSeeds": 350,
                      "AnimalSourceFoods": 300, "Discretionary": 150, "MixedDishes": 400, "Excluded": 100}[group]
            grams = round(base_g * len(ages) / 2.5 * rng.uniform(0.5, 1.3) * (wealth if group != "StarchyStaples" else 1))
            unit_price = local_price.get((loc, item), next(p for i, *_, p in ITEMS if i == item) / 1000)
            spent = round(grams * unit_price * rng.uniform(1.0, 1.6))
            food_total += spent if group != "Excluded" else 0
            consumption.append((hid, item, grams, spent))
        total = round(food_total / rng.uniform(0.45, 0.7), -2)
        households.append((hid, loc, region, rng.randint(40, 400), days, int(total), int(rng.random() < 0.55)))
    write("households.csv", ["household_id", "location_id", "region_id", "weight", "period_days", "total_expenditure", "rural"], households)
    write("members.csv", ["household_id", "age_years", "sex"], members)
    write("consumption.csv", ["household_id", "item_id", "quantity_g", "expenditure"], consumption)

    (OUT / "config.json").write_text(json.dumps({
        "inputs": {"dir": "."},
        "options": {
            "include_discretionary": True,
            "fallback_parent_region": False,
            "quintile_rank": "percapita",
            "quintile_weight": "persons",
        },
        "output_dir": "out",
    }, indent=2) + "\n")


if __name__ == "__main__":
    main()
