"""Green's relations of a finite semigroup.

Principal one-sided ideals are read off the Cayley graphs over a generating
set: ``t`` lies in ``sS^1`` iff ``t`` is reachable from ``s`` in the right
Cayley graph.  Classes are strongly connected components.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .semigroup import FiniteSemigroup


@dataclass(frozen=True)
class Relation:
    """A Green relation: class id per element plus the quasi-order on classes.

    ``below[i, j]`` is True when class ``i`` lies below class ``j``.
    """
    labels: np.ndarray
    below: np.ndarray | None = None

    @property
    def classes(self) -> list:
        out = {}
        for x, c in enumerate(self.labels.tolist()):
            out.setdefault(c, []).append(x)
        return [out[c] for c in sorted(out)]

    @property
    def count(self) -> int:
        return int(self.labels.max()) + 1

    def related(self, s, t) -> bool:
        return self.labels[s] == self.labels[t]

    def leq(self, s, t) -> bool:
        return bool(self.below[self.labels[s], self.labels[t]])


@dataclass(frozen=True)
class GreenData:
    R: Relation
    L: Relation
    J: Relation
    H: Relation
    D: Relation
    regular: dict = field(default_factory=dict)  # D-class id -> bool

    def class_counts(self) -> dict:
        return {k: getattr(self, k).count for k in "RLJHD"}

    def maximal_subgroups(self, S: FiniteSemigroup) -> list:
        """H-classes containing an idempotent."""
        E = set(S.idempotents)
        return [c for c in self.H.classes if E.intersection(c)]


def _scc(edges_src, edges_dst, n):
    g = csr_matrix((np.ones(len(edges_src), dtype=np.int8), (edges_src, edges_dst)), shape=(n, n))
    _, labels = connected_components(g, directed=True, connection="strong")
    return g, _canonical(labels)


def _canonical(labels):
    # renumber classes by first occurrence so output is deterministic
    mapping = {}
    out = np.empty_like(labels)
    for i, c in enumerate(labels.tolist()):
        out[i] = mapping.setdefault(c, len(mapping))
    return out


def _class_order(g, labels):
    """Reflexive-transitive reachability between classes: below[i, j] iff i <= j."""
    k = int(labels.max()) + 1
    coo = g.tocoo()
    up = np.zeros((k, k), dtype=bool)  # up[i, j]: class j reachable from class i
    up[labels[coo.row], labels[coo.col]] = True
    np.fill_diagonal(up, True)
    # Warshall on booleans; class counts stay small at desk scale
    for m in range(k):
        up |= up[:, [m]] & up[[m], :]
    # x in the ideal of s  <=>  x reachable from s  <=>  class(x) <= class(s)
    return up.T.copy()


def _edges(S: FiniteSemigroup, side: str):
    gens = list(S.generating_set())
    n = len(S)
    src = np.repeat(np.arange(n), len(gens))
    if side == "right":
        dst = S.table[:, gens].reshape(-1)
    else:
        dst = S.table[gens, :].T.reshape(-1)
    return src, dst


def _meet(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _canonical(np.unique(np.stack([a, b], axis=1), axis=0, return_inverse=True)[1].reshape(-1))


def _join(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = len(a)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for labels in (a, b):
        first = {}
        for x, c in enumerate(labels.tolist()):
            if c in first:
                ra, rb = find(x), find(first[c])
                if ra != rb:
                    parent[ra] = rb
            else:
                first[c] = x
    return _canonical(np.array([find(x) for x in range(n)]))


def green(S: FiniteSemigroup, orders: bool = True) -> GreenData:
    n = len(S)
    rs, rd = _edges(S, "right")
    ls, ld = _edges(S, "left")
    gR, R = _scc(rs, rd, n)
    gL, L = _scc(ls, ld, n)
    gJ, J = _scc(np.concatenate([rs, ls]), np.concatenate([rd, ld]), n)
    H = _meet(R, L)
    D = _join(R, L)
    below = {}
    if orders:
        below["R"] = _class_order(gR, R)
        below["L"] = _class_order(gL, L)
        below["J"] = _class_order(gJ, J)
        # H-order: below in both R and L
        hrep = [c[0] for c in Relation(H).classes]
        hr = below["R"][np.ix_(R[hrep], R[hrep])]
        hl = below["L"][np.ix_(L[hrep], L[hrep])]
        below["H"] = hr & hl
    E = set(S.idempotents)
    regular = {}
    for x in range(n):
        d = int(D[x])
        regular[d] = regular.get(d, False) or x in E
    return GreenData(
        R=Relation(R, below.get("R")),
        L=Relation(L, below.get("L")),
        J=Relation(J, below.get("J")),
        H=Relation(H, below.get("H")),
        D=Relation(D),
        regular=regular,
    )


def d_equals_j(G: GreenData) -> bool:
    return bool(np.array_equal(G.D.labels, G.J.labels))


def h_trivial(G: GreenData) -> bool:
    return G.H.count == len(G.H.labels)


def ideal_members(S: FiniteSemigroup, s: int, side: str = "two") -> set:
    """Brute-force principal ideal ``S^1 s S^1`` (or one-sided); an independent oracle."""
    T = S.table
    row = {s} | set(T[s, :].tolist())
    col = {s} | set(T[:, s].tolist())
    if side == "right":
        return row
    if side == "left":
        return col
    out = set(col)
    for x in col:
        out |= set(T[x, :].tolist())
    return out
