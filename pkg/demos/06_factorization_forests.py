"""
Factorization forests
=====================

Build a Ramseyan factorization forest for a word under a morphism into a
small semigroup, verify it independently, and watch the height stay small.
"""

import random

from finsemi import forest as fo
from finsemi import semigroup as sg

C2 = sg.cyclic_group(2)
f = fo.build_forest({"a": 1}, C2, "aaaaaa")
print(fo.forest_json(f, C2))

rng = random.Random(1)
worst = 0
for _ in range(200):
    S = sg.random_semigroup(rng, 8)
    img = {c: rng.randrange(len(S)) for c in "ab"}
    w = "".join(rng.choice("ab") for _ in range(rng.randint(1, 200)))
    forest = fo.build_forest(img, S, w)
    assert fo.verify_ramseyan(forest, img, S)[0]
    worst = max(worst, forest.height / len(S))
print("largest height / |S| over 200 random instances:", round(worst, 2))

# both readings of the kernel generating set in a nilpotent example
N = sg.monogenic(3)
print(fo.nilpotent_kernel_generators(N, N, [0, 1, 2], [0], 3))
