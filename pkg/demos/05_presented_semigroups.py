"""
The semigroups S_k and S_k(p)
=============================

Canonical forms, identities they satisfy, and the separation of two
sequences of words inside one finite S_k.
"""

from finsemi import omega as om
from finsemi import sk
from finsemi.green import green

for w in ["aaa", "aba", "aabbaabbaa", "abba"]:
    print(f"normalize({w}, 2) = {sk.normalize(w, 2)}")

for k in (1, 2, 3):
    S = sk.build(k)
    print(f"|S_{k}| = {len(S):3d}  Knast: {om.knast_check(S).holds}  J-classes: {green(S).J.count}")

for k, p in [(2, 2), (3, 3)]:
    S = sk.build(k, sk.SKP, p=p)
    law = om.catalog("max-k3", k=k, p=p)
    print(f"|S_{k}({p})| = {len(S)}  {law.name}: {om.check_elementwise(S, law).holds}")

r = sk.separation_check((1, 2, 3, 4, 5), (1, 2, 4, 5, 6))
print("separation:", r["k"], r["images"], "matches closed forms:", r["matches_closed_forms"])

m = sk.malcev_witness_check(2)
print("Mal'cev witness for R_2:", m["passed"], {k: v["size"] for k, v in m["fibres"].items()})
