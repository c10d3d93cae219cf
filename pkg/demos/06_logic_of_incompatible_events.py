"""Distributivity fails once incompatible measurements enter a proposition.

Phi  = (a/0) and [(0/1) or (1/1)]      has probability 1/2,
Phi' = [(a/0) and (0/1)] or [(a/0) and (1/1)]   has none,
because each disjunct asks for Alice's outputs on both inputs in one round.
"""
from boxlab import box_model as bm
from boxlab import event_logic as el

print(el.distributivity_counterexample(bm.pr_box()).render())

for text in ("and(A:0=0@1, B:1=1@1)", "or(A:1=0@2, A:1=1@2)", "and(A:0=0@1, A:1=0@1)",
             "and(A:0=0@1, B:0=0@2)"):
    print(f"P[{text}] = {el.probability(el.parse(text), bm.pr_box())}")
