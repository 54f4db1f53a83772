#!/usr/bin/env python3
"""Independent Table 2 oracle for fixtures/basic.

Recomputes the least-cost diet, energy adjustment, affordability and
person-weighted quintile statistics from the raw CSVs with pandas, and
writes fixtures/basic/golden/table2.csv. Shares no code with the Rust crates.
"""
from decimal import Decimal, getcontext
from pathlib import Path
import sys

import numpy as np
import pandas as pd

getcontext().prec = 40
ROOT = Path(__file__).resolve().parent.parent
FIX = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "fixtures" / "basic"
REF_KCAL = 2330.0


def read(name):
    return pd.read_csv(FIX / name, dtype=str, keep_default_na=False)


items = read("items.csv")
comp = read("composition.csv").set_index("composition_key")
guide = read("guidelines.csv")
ae = read("ae_factors.csv")
hh = read("households.csv")
mem = read("members.csv")
cons = read("consumption.csv")
prices = read("prices.csv")

group_of = dict(zip(items.item_id, items.group))
key_of = dict(zip(items.item_id, items.composition_key))


def kcal_per_g(item):
    c = comp.loc[key_of[item]]
    return Decimal(c.energy_kcal_100g) * Decimal(c.edible_fraction) / 100


# least-cost diet per location
prices["ppg"] = [Decimal(p) / (1000 if u == "kg" else 1) for p, u in zip(prices.price, prices.unit)]
cohd = {}
for loc, rows in prices.groupby("location_id"):
    total = Decimal(0)
    for _, g in guide[guide.group != "TOTAL"].iterrows():
        k = int(g.item_count)
        cands = []
        for _, r in rows[rows.item_id.map(group_of) == g.group].iterrows():
            e = kcal_per_g(r.item_id)
            if e > 0:
                cands.append((r.ppg / e, r.item_id))
        cands.sort()
        chosen = cands[:k]
        total += Decimal(g.energy_kcal) * sum(c for c, _ in chosen) / k
    cohd[loc] = total


def factor(age, sex):
    for _, b in ae[ae.sex.str.upper() == sex.upper()].iterrows():
        hi = int(b.age_max) if b.age_max not in ("", "inf", "+") else 10**9
        if int(b.age_min) <= age <= hi:
            return float(b.factor)
    raise ValueError((age, sex))


mem["f"] = [factor(int(a), s) for a, s in zip(mem.age_years, mem.sex)]
ae_of = mem.groupby("household_id").f.sum()
size_of = mem.groupby("household_id").size()

cons = cons[cons.item_id.map(group_of) != "Excluded"].copy()
cons["kcal"] = [float(Decimal(q) * kcal_per_g(i)) for q, i in zip(cons.quantity_g, cons.item_id)]
cons["exp"] = cons.expenditure.map(Decimal)

rows = []
for _, h in hh.iterrows():
    hid = h.household_id
    c = cons[cons.household_id == hid]
    days = int(h.period_days)
    aeq = ae_of[hid]
    energy = c.kcal.sum() / days / aeq
    f = REF_KCAL / energy
    food = sum(c.exp, Decimal(0))
    spend = food / days / Decimal(repr(float(aeq))) * Decimal(repr(float(f)))
    n = int(size_of[hid])
    total_exp = float(h.total_expenditure)
    rows.append(dict(
        household_id=hid,
        size=n,
        person_weight=float(h.weight) * n,
        rank=total_exp / days / n,
        rural=float(h.rural),
        food_share=100 * float(food) / total_exp,
        unable=100.0 if spend < cohd[h.location_id] else 0.0,
    ))
df = pd.DataFrame(rows).sort_values(["rank", "household_id"]).reset_index(drop=True)

frac = df.person_weight.cumsum() / df.person_weight.sum()
df["q"] = 1 + sum((frac > c + 1e-9).astype(int) for c in (0.2, 0.4, 0.6, 0.8))


def msd(x, w):
    m = np.average(x, weights=w)
    return m, np.sqrt(np.average((x - m) ** 2, weights=w))


out = []
total_persons = df.person_weight.sum()
for label, sel in [(f"q{q}", df[df.q == q]) for q in range(1, 6)] + [("total", df)]:
    w = sel.person_weight
    row = [label, len(sel), w.sum(), 100 * w.sum() / total_persons]
    for col in ("size", "rural", "food_share", "unable"):
        row += list(msd(sel[col], w))
    out.append(row)

cols = ["quintile", "households", "persons", "person_share_pct", "hh_size_mean", "hh_size_sd", "rural_mean", "rural_sd",
        "food_share_pct_mean", "food_share_pct_sd", "unaffordable_pct_mean", "unaffordable_pct_sd"]
(FIX / "golden").mkdir(exist_ok=True)
pd.DataFrame(out, columns=cols).to_csv(FIX / "golden" / "table2.csv", index=False, float_format="%.9f")
print(pd.DataFrame(out, columns=cols).to_string())
