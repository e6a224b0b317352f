"""
Lifting words and a growing binary tree
=======================================

Every element of one level lifts to two different elements of the next,
so the number of distinct elements doubles with each level.
"""

from finsemi import graphs as gr

L = gr.lifting_words(1, "a")
print("u =", L.u)
print("v =", L.v)

for d in range(6):
    r = gr.tree_witness(0, d)
    print(f"depth {d}: distinct {[lv['distinct'] for lv in r['levels']]}  ok={r['ok']}")

# mu^n(aaa) still acts on Gamma_n but is empty on Gamma_(n+1)
for n in range(5):
    print(gr.cube_check(n))
