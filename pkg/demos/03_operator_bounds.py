"""Operator-level view of the quantum bound.

For +/-1 observables the squared CHSH operator is 4 plus a product of
commutators, which caps the expectation at 2*sqrt(2). Contractions only
make the gap positive.
"""
import numpy as np

from boxlab import operator_algebra as oa

cfg = oa.optimal_qubit_config()
s = cfg["signed"]
print("optimal qubit value:", oa.tsirelson_check(s["A0"], s["A1"], s["B0"], s["B1"], cfg["state"]))

rng = np.random.default_rng(1)
worst_id, worst_psd = 0.0, np.inf
for _ in range(200):
    rep = oa.landau_check(*(oa.random_involution(3, rng) for _ in range(4)))
    worst_id = max(worst_id, rep.identity_residual)
    rep = oa.landau_check(*(oa.random_contraction(3, rng) for _ in range(4)))
    worst_psd = min(worst_psd, rep.psd_margin)
print(f"largest identity residual (involutions): {worst_id:.2e}")
print(f"smallest PSD margin (contractions)     : {worst_psd:.3f}")

zo = cfg["zero_one"]
box = oa.box_from_quantum(cfg["state"], [zo["A0"], zo["A1"]], [zo["B0"], zo["B1"]])
print("Born-rule box P(a=b | x, y):")
print(np.round(box.p[:, :, 0, 0] + box.p[:, :, 1, 1], 4))
