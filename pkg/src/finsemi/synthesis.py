"""The synthesis semigroup U(S, T, f) and the semilattice witness built from it.

Elements are ``S`` followed by the triples ``(s1, t, s2)`` of ``S x T x S``;
products follow

    s (s1, t, s2)            = (s s1, t, s2)
    (s1, t, s2) s            = (s1, t, s2 s)
    (s1, t, s2)(s1', t', s2') = (s1, t f(s2 s1') t', s2')
"""

from __future__ import annotations

import numpy as np

from . import semigroup as sg
from .green import green
from .semigroup import FiniteSemigroup


class WitnessFailed(RuntimeError):
    def __init__(self, stage, detail=""):
        super().__init__(f"witness failed at {stage}" + (f": {detail}" if detail else ""))
        self.stage = stage


def synthesis_U(S: FiniteSemigroup, T: FiniteSemigroup, f, budget: int = 10 ** 8,
                verify: bool = True) -> FiniteSemigroup:
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (len(S),) or f.min() < 0 or f.max() >= len(T):
        raise ValueError("f must map every element of S into T")
    n, m = len(S), len(T)
    size = n + n * m * n
    if verify and size ** 3 > budget:
        raise sg.ClosureBudgetExceeded(budget)
    A, B = S.table, T.table

    def idx(s1, t, s2):
        return n + (s1 * m + t) * n + s2

    s1, t, s2 = np.meshgrid(np.arange(n), np.arange(m), np.arange(n), indexing="ij")
    s1, t, s2 = s1.reshape(-1), t.reshape(-1), s2.reshape(-1)  # triple k has index n + k
    table = np.empty((size, size), dtype=np.int64)
    table[:n, :n] = A
    # s * (s1, t, s2)
    table[:n, n:] = idx(A[:, s1], t[None, :], s2[None, :])
    # (s1, t, s2) * s
    table[n:, :n] = idx(s1[:, None], t[:, None], A[s2[:, None], np.arange(n)[None, :]])
    # (s1, t, s2) * (s1', t', s2')
    mid = f[A[s2[:, None], s1[None, :]]]
    table[n:, n:] = idx(s1[:, None], B[B[t[:, None], mid], t[None, :]], s2[None, :])
    names = list(S.names) + [f"({S.names[a]},{T.names[b]},{S.names[c]})" for a, b, c in zip(s1, t, s2)]
    U = FiniteSemigroup(table, names=names, meta={"S": n, "T": m, "kernel": list(range(n, size))})
    if verify:
        w = sg.check_associative(U.table)
        if w is not None:
            raise sg.NonAssociative(*w)
    return U


def capped_addition(m: int) -> FiniteSemigroup:
    """``{0..m}`` under ``min(i + j, m)``: a finite stand-in for the compactified naturals."""
    return FiniteSemigroup([[min(i + j, m) for j in range(m + 1)] for i in range(m + 1)],
                           names=[str(i) for i in range(m)] + ["inf"], identity=0)


def sl_witness(m: int, G: FiniteSemigroup, f, phi=None) -> dict:
    """Build ``U(M_m, G, f)`` and verify the three-level structure over the chain ``0 < 1 < 2``.

    ``phi`` overrides the map onto the chain (used for negative controls).
    """
    if not sg.is_group(G):
        raise ValueError("G must be a group")
    M = capped_addition(m)
    U = synthesis_U(M, G, f)
    chain = sg.chain_semilattice(3)
    n = len(M)
    K = list(range(n, len(U)))
    if phi is None:
        phi = [2] + [1] * (n - 1) + [0] * len(K)
    phi = list(phi)
    report = {"m": m, "size_M": n, "size_G": len(G), "size_U": len(U), "modeling": "capped addition"}
    w = sg.hom_violation(U, chain, phi)
    if w is not None:
        raise WitnessFailed("homomorphism", f"phi(xy) != phi(x)phi(y) at {U.names[w[0]]}, {U.names[w[1]]}")
    if set(phi) != {0, 1, 2}:
        raise WitnessFailed("onto", "phi misses a level of the chain")
    if sg.hom_preimage(phi, [2]) != [0]:
        raise WitnessFailed("top", "preimage of 2 is not the identity alone")
    if sg.hom_preimage(phi, [1]) != list(range(1, n)):
        raise WitnessFailed("middle", "preimage of 1 is not the nonzero part of M")
    bottom = sg.hom_preimage(phi, [0])
    if bottom != K:
        raise WitnessFailed("bottom", "preimage of 0 is not S x T x S")
    if sg.is_ideal(U, K) is not None:
        raise WitnessFailed("ideal", "K is not an ideal")
    Ksub, emb = sg.subsemigroup(U, K)
    GK = green(Ksub, orders=False)
    GU = green(U, orders=False)
    report["J_classes_of_K"] = GK.J.count
    report["J_classes_of_K_in_U"] = len({int(GU.J.labels[x]) for x in K})
    if GK.J.count != 1 or report["J_classes_of_K_in_U"] != 1:
        raise WitnessFailed("J-class", f"K has {GK.J.count} J-classes")
    subgroups = GK.maximal_subgroups(Ksub)
    verdicts = []
    for H in subgroups:
        Hs, _ = sg.subsemigroup(Ksub, H)
        verdicts.append(sg.find_isomorphism(Hs, G) is not None)
    report["maximal_subgroups"] = len(subgroups)
    report["subgroups_isomorphic_to_G"] = verdicts
    if not all(verdicts):
        raise WitnessFailed("subgroups", "a maximal subgroup of K is not isomorphic to G")
    report["idempotents_U"] = [U.names[e] for e in U.idempotents]
    report["passed"] = True
    return report
