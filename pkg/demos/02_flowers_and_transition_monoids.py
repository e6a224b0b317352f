"""
Flower graphs and their transition monoids
==========================================

Each letter acts on the vertices of a flower graph as a partial injection.
The monoid these actions generate is small, aperiodic and inverse.
"""

from finsemi import graphs as gr
from finsemi import omega as om
from finsemi import semigroup as sg
from finsemi.green import green
from finsemi.words import mu

g = gr.gamma(1)
print(g.to_dot())

T1, maps = gr.transition_monoid(g)
print("|T(Gamma_1)| =", len(T1), T1.meta["breakdown"])
print("aperiodic:", sg.is_aperiodic(T1), " inverse:", sg.is_inverse(T1))
print("Green class counts:", green(T1).class_counts())

# the two Thue-Morse words of length 2^(n+1) fix the basepoint of Gamma_n and nothing else
for n in range(4):
    G = gr.gamma(n)
    print(n, gr.act(G, mu("a", n + 1)).describe(G.names), "|", gr.act(G, mu("b", n + 1)).describe(G.names))

# the tower M_0 <- M_1 <- M_2 of restriction maps
tower = gr.build_Mn(2)
print("sizes:", [len(M) for M in tower.monoids])
print("restrictions:", gr.check_tower(tower))
for M in tower.monoids:
    print(" x^4 = x^3:", om.check_elementwise(M, om.catalog("x4=x3")).holds,
          " 1 <= x^3:", om.check_law(M, om.catalog("1<=xn", n=3)).holds)
