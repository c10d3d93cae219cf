"""Boxes, marginals and the CHSH value.

Builds the PR box, the uniform box, a deterministic strategy and a box in
which Bob's output copies Alice's input, then reports what each one does.
"""
import numpy as np

from boxlab import box_model as bm

boxes = {
    "PR": bm.pr_box(),
    "uniform": bm.uniform_box(),
    "deterministic 00/00": bm.deterministic_box((0, 0), (0, 0)),
    "b = x (signaling)": bm.signaling_box(),
}

for name, box in boxes.items():
    ok, witness = bm.is_nonsignaling(box)
    print(f"{name:22s} CHSH = {bm.chsh(box):+.3f}   non-signaling: {ok}"
          + ("" if ok else f" ({len(witness)} violating marginals)"))

# mixing PR noise with uniform noise scales the CHSH value linearly
for w in np.linspace(0, 1, 5):
    mixed = bm.mix([boxes["PR"], boxes["uniform"]], [w, 1 - w])
    print(f"  {w:.2f} PR + {1 - w:.2f} uniform -> CHSH {bm.chsh(mixed):.2f}")

print("\nPR marginals P(a=0 | x):", [bm.marginal_a(boxes["PR"], 0, x) for x in (0, 1)])
