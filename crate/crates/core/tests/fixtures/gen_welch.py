"""Regenerates welch.json with scipy as the reference implementation.

    python3 gen_welch.py > welch.json
"""
import json

import numpy as np
from scipy import stats


def welch_df(a, b):
    va, vb = np.var(a, ddof=1) / len(a), np.var(b, ddof=1) / len(b)
    return (va + vb) ** 2 / (va**2 / (len(a) - 1) + vb**2 / (len(b) - 1))


def main():
    rng = np.random.default_rng(20240611)
    cases = []
    # Binary outcomes at the study's scale (120 vs 60 case-solves).
    for pa, pb in [(0.7, 0.98), (0.31, 0.57), (0.43, 0.45), (0.25, 0.02), (0.58, 0.82)]:
        a = (rng.random(120) < pa).astype(float)
        b = (rng.random(60) < pb).astype(float)
        cases.append((a, b))
    # Integer totals out of 22.
    for _ in range(10):
        na, nb = rng.integers(2, 80, size=2)
        a = np.clip(np.round(rng.normal(15.4, 3.0, na)), 0, 22)
        b = np.clip(np.round(rng.normal(rng.uniform(14, 18), rng.uniform(1, 5), nb)), 0, 22)
        cases.append((a, b))
    # Continuous samples with unequal sizes and variances.
    while len(cases) < 50:
        na, nb = rng.integers(2, 200, size=2)
        a = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 10), na)
        b = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 10), nb)
        cases.append((np.round(a, 6), np.round(b, 6)))

    out = []
    for a, b in cases:
        r = stats.ttest_ind(a, b, equal_var=False)
        out.append({
            "a": a.tolist(),
            "b": b.tolist(),
            "t": float(r.statistic),
            "df": float(welch_df(a, b)),
            "p": float(r.pvalue),
        })
    print(json.dumps(out))


if __name__ == "__main__":
    main()
