"""Monte Carlo play and the statistics that check a transcript."""
from boxlab import box_model as bm
from boxlab import game_sim as gs
from boxlab import operator_algebra as oa

pr = gs.play(bm.pr_box(), 100_000, seed=0)
est = gs.estimate_correlators(pr)
print(f"PR box: estimated CHSH {est.chsh} +/- {est.chsh_std_error}")
rep = gs.signaling_test(pr)
print("  signaling test rejects:", rep.reject, " smallest p:", round(rep.min_p_value, 3))
print("  lag-1 checks within 4 sigma:", gs.independence_test(pr).within(4))

sig = gs.play(bm.signaling_box(), 10_000, seed=0)
print(f"b = x box: signaling test p = {gs.signaling_test(sig).min_p_value:.1e}")

cfg = oa.optimal_qubit_config()
zo = cfg["zero_one"]
qbox = oa.box_from_quantum(cfg["state"], [zo["A0"], zo["A1"]], [zo["B0"], zo["B1"]])
q = gs.estimate_correlators(gs.play(qbox, 200_000, seed=1))
print(f"quantum box: CHSH {q.chsh:.4f} +/- {q.chsh_std_error:.4f}")
