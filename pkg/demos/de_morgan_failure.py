"""Why only the six self-dual interpretations keep De Morgan's laws.

Walks through the counterexample on MO2 for I(->3, *5), then sweeps all
36 interpretations and prints which ones satisfy both bounded-quantifier
De Morgan laws.
"""

from qsetlab import interp as ip
from qsetlab.corpus import demorgan_matrix
from qsetlab.oml_core import build_mo

L = build_mo(2)
print("MO2 elements:", " ".join(L.labels))

rep = ip.takeuti_counterexample(L)
print()
print("Take u = P~ and phi(x) = !(x in Q~) with P, Q =", L.label(rep.P), L.label(rep.Q))
print("Under the Sasaki arrow paired with plain meet:")
print("  [[E x in u . !phi]]  =", L.label(rep.exists_side))
print("  [[!(A x in u . phi)]] =", L.label(rep.forall_side))
print("The two sides should agree classically; here they do not.")

interps = ip.all_standard(L)
laws, witness = demorgan_matrix(L, interps, budget=300, seed=1)
ok = [it.name for i, it in enumerate(interps) if laws["M5"][i] and laws["M6"][i]]
print()
print("Interpretations keeping both laws over the sample:", ", ".join(ok))
print("Self-dual ones:", ", ".join(it.name for it in interps if it.self_dual))
bad = next(it.name for it in interps if it.name not in ok)
print(f"For example {bad} fails at:", witness.get((bad, "M5")) or witness.get((bad, "M6")))
