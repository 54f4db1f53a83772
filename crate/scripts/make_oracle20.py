#!/usr/bin/env python3
"""Generate fixtures/oracle20: prices for 20 locations over the basic
fixture's catalogue, plus least-cost totals found by exhaustive search.

The oracle shares no code with the Rust crates. It enumerates every size-k
subset per group in decimal arithmetic, using the same rounding rules
(rates to 12 places, money to 6, half-even).
"""
import csv
import json
import random
from decimal import Decimal, ROUND_HALF_EVEN, getcontext
from itertools import combinations
from pathlib import Path

getcontext().prec = 28

ROOT = Path(__file__).resolve().parent.parent
BASIC = ROOT / "fixtures" / "basic"
OUT = ROOT / "fixtures" / "oracle20"
COSTED = ["StarchyStaples", "OilsFats", "Fruits", "Vegetables", "LegumesNutsSeeds", "AnimalSourceFoods", "Discretionary"]


def read(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def main():
    rng = random.Random(20)
    items = read(BASIC / "items.csv")
    comp = {r["composition_key"]: r for r in read(BASIC / "composition.csv")}
    targets = {r["group"]: (Decimal(r["energy_kcal"]), int(r["item_count"]))
               for r in read(BASIC / "guidelines.csv") if r["group"] != "TOTAL"}
    by_group = {g: [i for i in items if i["group"] == g] for g in COSTED}

    prices = []
    for n in range(1, 21):
        loc = f"L{n:02d}"
        grid = rng.random() < 0.5
        for g in COSTED:
            members = by_group[g]
            k = targets[g][1]
            # keep at least k items, sometimes drop the rest
            keep = members if rng.random() < 0.6 else rng.sample(members, rng.randint(k, len(members)))
            for it in keep:
                per_kg = rng.randrange(3, 61) * 1000 if grid else rng.randint(3000, 60000)
                prices.append((it["item_id"], loc, per_kg))
    prices.sort()
    with open(OUT / "prices.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["item_id", "location_id", "year", "month", "price", "unit"])
        for item_id, loc, per_kg in prices:
            w.writerow([item_id, loc, 2022, 3, per_kg, "kg"])

    group_of = {i["item_id"]: i["group"] for i in items}
    key_of = {i["item_id"]: i["composition_key"] for i in items}
    rates = {}
    for item_id, loc, per_kg in prices:
        c = comp[key_of[item_id]]
        ef = Decimal(c["edible_fraction"] or "1")
        kcal_per_g = ef * Decimal(c["energy_kcal_100g"]) / 100
        rate = (Decimal(per_kg) / 1000 / kcal_per_g).quantize(Decimal("1e-12"), ROUND_HALF_EVEN)
        rates.setdefault(loc, {}).setdefault(group_of[item_id], []).append(rate)

    rows = []
    for loc in sorted(rates):
        total = Decimal(0)
        for g in COSTED:
            t, k = targets[g]
            best = min(t * sum(s) / k for s in combinations(rates[loc][g], k))
            total += best.quantize(Decimal("1e-6"), ROUND_HALF_EVEN)
        rows.append((loc, f"{total:.6f}"))
    with open(OUT / "golden" / "cohd_totals.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["location_id", "total_cost"])
        w.writerows(rows)

    shared = ["items", "composition", "guidelines", "nutrient_refs", "ae_factors",
              "households", "members", "consumption", "regions"]
    config = {"inputs": {"prices": "prices.csv", **{k: f"../basic/{k}.csv" for k in shared}},
              "options": {"include_discretionary": True}, "output_dir": "out"}
    (OUT / "config.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
