"""The transfer principle on a small example.

A ZFC theorem evaluated on quantum sets is bounded below by the
commutator of its arguments' supports. With commuting supports it is
exactly 1; with noncommuting ones it can drop, but never below the bound.
"""

from qsetlab import interp as ip
from qsetlab.oml_core import direct_product, build_boolean, build_mo
from qsetlab.quniverse import check_embed, p_tilde, to_literal

L = direct_product(build_boolean(1), build_mo(2))
theorem = "x1 in x3 <-> ((x1 in x3 & x1 in x2) | (x1 in x3 & !(x1 in x2)))"
print("theorem:", theorem)

cases = [
    ("commuting supports", [check_embed(L, 0), p_tilde(L, "(1,a)"), p_tilde(L, "(0,a')")]),
    ("noncommuting supports", [check_embed(L, 0), p_tilde(L, "(1,b)"), p_tilde(L, "(1,a)")]),
]
for title, args in cases:
    print()
    print(title + ":")
    for k, u in enumerate(args, 1):
        print(f"  x{k} = {to_literal(u)}")
    for name in ("3,3", "0,5", "4,1"):
        r = ip.transfer_check(ip.parse_interp_id(L, name), theorem, args)
        print(f"  I({name}): value {L.label(r.lhs):6} commutator {L.label(r.bound):6} "
              f"{'holds' if r else 'VIOLATED'}")

print()
print("Non-normal interpretations (join as conjunction, constant-1 arrow) break it:")
for it, f, args, r in ip.non_normal_transfer_failure(build_boolean(2)):
    print(f"  {it.name}: {f}  value {r.lattice.label(r.lhs)} < bound {r.lattice.label(r.bound)}")
