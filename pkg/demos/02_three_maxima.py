"""The three CHSH ceilings: local 2, quantum 2*sqrt(2), non-signaling 4."""
import numpy as np

from boxlab import chsh_optimizer as co

classical = co.classical_max()
print(f"local strategies     : {classical.value}  (witness fa={classical.witness['fa']}, "
      f"fb={classical.witness['fb']})")

quantum = co.seesaw_quantum_max(dim=2, restarts=5, seed=0)
print(f"quantum seesaw       : {quantum.value:.12f}  vs 2*sqrt(2) = {2 * np.sqrt(2):.12f}")
print(f"  sweeps used        : {quantum.iterations}")

ns = co.nonsignaling_max()
print(f"non-signaling LP     : {ns.extra['exact_value']} (exact), witness is the PR box:")
print(ns.witness["box"].p.reshape(4, 4))

# the identity start never moves: every local update keeps value 2
stuck = co.seesaw_quantum_max(dim=2, restarts=1, init="identity", seed=0)
print(f"seesaw from A = B = I: {stuck.value}  stationary={stuck.extra['stationary']}")
