"""Regenerates ratio_lp.inc: LP maxima of sum_{i<=K} b_i subject to
sum_{i<=L} b_i <= c, b_1 >= 0 and 0 <= b_i <= alpha * b_{i-1}."""

import itertools

import numpy as np
from scipy.optimize import linprog

alphas = [1.05, 1.2, 1.5, 1.71, 2.0, 2.2, 2.5, 2.8, 3.0, 1.3]
shapes = [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3), (5, 2), (5, 4), (6, 3), (2, 2), (6, 1)]
cs = [0.5, 1.0, 2.0, 3.7, 0.1, 1.5, 5.0, 0.8, 2.5, 10.0]

rows = []
for k, (alpha, (K, L)) in enumerate(itertools.product(alphas, shapes)):
    c = cs[k % len(cs)]
    A, b = [], []
    A.append([1.0 if i < L else 0.0 for i in range(K)])
    b.append(c)
    for i in range(1, K):
        row = [0.0] * K
        row[i] = 1.0
        row[i - 1] = -alpha
        A.append(row)
        b.append(0.0)
    res = linprog(-np.ones(K), A_ub=A, b_ub=b, bounds=[(0, None)] * K, method="highs")
    assert res.status == 0
    rows.append((alpha, K, L, c, -res.fun))

with open("ratio_lp.inc", "w") as f:
    for alpha, K, L, c, v in rows:
        f.write(f"{{{alpha!r}, {K}, {L}, {c!r}, {v:.12e}}},\n")
print(len(rows))
