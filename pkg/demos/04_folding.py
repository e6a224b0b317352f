"""
Stallings folding
=================

Fold the flower of the three square-free words phi^n(a), phi^n(b), phi^n(c).
The folded graphs have 2, 4, 8, ... vertices; the result does not depend on
the order in which folds are applied.
"""

import random

from finsemi import graphs as gr
from finsemi.words import SQUARE_FREE

for n in range(1, 7):
    print(n, gr.lambda_graph(n).num_vertices)

flower = gr.flower([SQUARE_FREE.iterate(c, 3) for c in "abc"])
ref = gr.stallings_fold(flower)
same = all(gr.isomorphic(gr.stallings_fold(flower, random.Random(s)), ref) for s in range(20))
print("flower vertices:", flower.num_vertices, "-> folded:", ref.num_vertices, " order-independent:", same)
print(gr.lambda_graph(1).to_dot())
