"""
The synthesis semigroup U(S, T, f)
==================================

Glue S x T x S below S and check the three-level structure over a chain.
"""

from finsemi import semigroup as sg
from finsemi import synthesis as sy
from finsemi.green import green

C2 = sg.cyclic_group(2)
U = sy.synthesis_U(C2, C2, [0, 1])
print("|U(C2, C2, f)| =", len(U), " idempotents:", [U.names[e] for e in U.idempotents])
print("Green class counts:", green(U).class_counts())

report = sy.sl_witness(3, C2, [0, 1, 0, 1])
for key in ("size_U", "J_classes_of_K", "maximal_subgroups", "subgroups_isomorphic_to_G", "passed"):
    print(f"{key:>28}: {report[key]}")
