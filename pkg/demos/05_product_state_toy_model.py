"""An angle-indexed correlation table that no product state can produce.

The model assigns +1 at 45 degrees and -1 at 135 degrees. If the joint
state were a product, each correlation would factor into one number per
party, and the sign pattern (+, +, +, -) forbids that.
"""
from boxlab import toy_model as tm

report = tm.paper_inconsistency_report()
print(report.render())

print("\nThe same solver on other tables:")
for t in ([[0.5, 0.25], [1.0, 0.5]], [[0, 0], [1, -1]], [[0, 1], [1, 0]]):
    res = tm.separable_feasibility(t)
    print(f"  {t} -> {res.verdict}" + (f" u={res.u} v={res.v}" if res.verdict == "Feasible" else
                                       f" ({res.test})"))
