"""Labeled digraphs, partial-map actions, transition monoids, and folding.

Words act on the right and compose left to right: ``p . (uv) = (p . u) . v``.
A partial map on ``V`` vertices is a tuple of length ``V`` whose entries are
vertex indices or ``-1`` for "undefined".
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import semigroup as sg
from .semigroup import FiniteSemigroup
from .words import mu, other, SQUARE_FREE

UNDEF = -1


class GraphError(ValueError):
    pass


class NotDeterministic(GraphError):
    pass


class NotAPrefix(GraphError):
    pass


class LiftFailed(GraphError):
    pass


# ---------------------------------------------------------------------------
# partial maps


@dataclass(frozen=True)
class PartialMap:
    images: tuple

    @classmethod
    def identity(cls, n: int) -> "PartialMap":
        return cls(tuple(range(n)))

    @classmethod
    def empty(cls, n: int) -> "PartialMap":
        return cls((UNDEF,) * n)

    @classmethod
    def from_pairs(cls, pairs, n: int) -> "PartialMap":
        img = [UNDEF] * n
        for p, q in pairs:
            if img[p] not in (UNDEF, q):
                raise GraphError(f"vertex {p} mapped twice")
            img[p] = q
        return cls(tuple(img))

    def __len__(self):
        return len(self.images)

    def then(self, other: "PartialMap") -> "PartialMap":
        """Apply ``self`` first, then ``other``."""
        o = other.images
        return PartialMap(tuple(UNDEF if q == UNDEF else o[q] for q in self.images))

    def __call__(self, p: int) -> int:
        return self.images[p]

    @property
    def graph(self) -> frozenset:
        return frozenset((p, q) for p, q in enumerate(self.images) if q != UNDEF)

    @property
    def domain(self) -> tuple:
        return tuple(p for p, q in enumerate(self.images) if q != UNDEF)

    @property
    def is_empty(self) -> bool:
        return all(q == UNDEF for q in self.images)

    @property
    def is_injective(self) -> bool:
        img = [q for q in self.images if q != UNDEF]
        return len(img) == len(set(img))

    @property
    def is_partial_identity(self) -> bool:
        return all(q in (UNDEF, p) for p, q in enumerate(self.images))

    def contains(self, other: "PartialMap") -> bool:
        """Graph containment ``self ⊇ other``."""
        return all(q == UNDEF or self.images[p] == q for p, q in enumerate(other.images))

    def restrict(self, vertices) -> "PartialMap":
        """Restriction to ``vertices`` (re-indexed in the given order); images must stay inside."""
        pos = {v: i for i, v in enumerate(vertices)}
        out = []
        for v in vertices:
            q = self.images[v]
            if q == UNDEF:
                out.append(UNDEF)
            elif q in pos:
                out.append(pos[q])
            else:
                raise GraphError(f"vertex {v} leaves the restricted set")
        return PartialMap(tuple(out))

    def describe(self, names) -> str:
        if self.is_empty:
            return "{}"
        return "{" + ", ".join(f"{names[p]}->{names[q]}" for p, q in sorted(self.graph)) + "}"


# ---------------------------------------------------------------------------
# digraphs


@dataclass(frozen=True)
class LabeledDigraph:
    names: tuple
    edges: tuple  # sorted tuple of (src, label, dst)
    basepoints: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        n = len(self.names)
        for s, _, d in self.edges:
            if not (0 <= s < n and 0 <= d < n):
                raise GraphError("edge endpoint out of range")

    @classmethod
    def make(cls, names, edges, basepoints=None):
        return cls(tuple(names), tuple(sorted(set(edges))), dict(basepoints or {}))

    @property
    def num_vertices(self) -> int:
        return len(self.names)

    @property
    def alphabet(self) -> str:
        return "".join(sorted({lab for _, lab, _ in self.edges}))

    @property
    def deterministic(self) -> bool:
        keys = [(s, lab) for s, lab, _ in self.edges]
        return len(keys) == len(set(keys))

    @property
    def codeterministic(self) -> bool:
        keys = [(d, lab) for _, lab, d in self.edges]
        return len(keys) == len(set(keys))

    @property
    def base(self) -> int:
        return next(iter(self.basepoints.values()), 0)

    def letter_map(self, letter: str) -> PartialMap:
        if not self.deterministic:
            raise NotDeterministic("two edges share a source and a label")
        img = [UNDEF] * self.num_vertices
        for s, lab, d in self.edges:
            if lab == letter:
                img[s] = d
        return PartialMap(tuple(img))

    def letter_maps(self, alphabet: str | None = None) -> dict:
        return {c: self.letter_map(c) for c in (alphabet or self.alphabet)}

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.names),
            "edges": [[self.names[s], lab, self.names[d]] for s, lab, d in self.edges],
            "basepoints": {k: self.names[v] for k, v in self.basepoints.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledDigraph":
        names = list(d["vertices"])
        pos = {v: i for i, v in enumerate(names)}
        edges = [(pos[s], lab, pos[t]) for s, lab, t in d["edges"]]
        return cls.make(names, edges, {k: pos[v] for k, v in d.get("basepoints", {}).items()})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def to_dot(self, title: str = "G") -> str:
        lines = [f"digraph {title} {{", "  rankdir=LR;"]
        base = set(self.basepoints.values())
        for i, name in enumerate(self.names):
            shape = "doublecircle" if i in base else "circle"
            lines.append(f'  v{i} [label="{name}", shape={shape}];')
        for s, lab, d in self.edges:
            lines.append(f'  v{s} -> v{d} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines)


def flower(words, base_name: str = "q0") -> LabeledDigraph:
    """Petals spelling each word, all beginnings and ends glued at one vertex."""
    words = list(words)
    if not words or any(not w for w in words):
        raise GraphError("flower needs nonempty words")
    names = [base_name]
    edges = []
    for i, w in enumerate(words):
        prev = 0
        for j, c in enumerate(w):
            if j == len(w) - 1:
                nxt = 0
            else:
                names.append(f"{base_name}.{w[:j + 1]}" if len(words) <= 1 or _unique_prefix(words, i, j)
                             else f"{base_name}.{i}:{w[:j + 1]}")
                nxt = len(names) - 1
            edges.append((prev, c, nxt))
            prev = nxt
    return LabeledDigraph.make(names, edges, {"base": 0})


def _unique_prefix(words, i, j):
    pre = words[i][:j + 1]
    return all(not (k != i and len(w) > j + 1 and w[:j + 1] == pre) for k, w in enumerate(words))


def gamma(n: int) -> LabeledDigraph:
    """The flower digraph of ``mu^n(a)`` and ``mu^n(b)`` with basepoint ``0_n``."""
    return flower([mu("a", n), mu("b", n)], base_name=f"0_{n}")


def disjoint_union(graphs) -> tuple[LabeledDigraph, list]:
    names, edges, offsets, bases = [], [], [], {}
    for i, g in enumerate(graphs):
        off = len(names)
        offsets.append(off)
        names.extend(g.names)
        edges.extend((s + off, lab, d + off) for s, lab, d in g.edges)
        for k, v in g.basepoints.items():
            bases[f"{k}{i}" if k == "base" else k] = v + off
    return LabeledDigraph.make(names, edges, bases), offsets


def act(g: LabeledDigraph, w: str) -> PartialMap:
    maps = g.letter_maps()
    out = PartialMap.identity(g.num_vertices)
    for c in w:
        m = maps.get(c)
        out = out.then(m) if m is not None else PartialMap.empty(g.num_vertices)
    return out


def path_word(g: LabeledDigraph, target: int, source: int | None = None) -> str:
    """Label of a shortest directed path (BFS, edges in sorted order)."""
    source = g.base if source is None else source
    prev = {source: None}
    q = deque([source])
    out = {}
    for s, lab, d in g.edges:
        out.setdefault(s, []).append((lab, d))
    while q:
        x = q.popleft()
        if x == target:
            break
        for lab, d in out.get(x, []):
            if d not in prev:
                prev[d] = (x, lab)
                q.append(d)
    if target not in prev:
        raise GraphError("target unreachable")
    word = []
    x = target
    while prev[x] is not None:
        x, lab = prev[x]
        word.append(lab)
    return "".join(reversed(word))


# ---------------------------------------------------------------------------
# transition monoids


def containment_order(maps) -> frozenset:
    """Pairs ``(s, t)`` with ``s <= t`` iff graph(s) ⊇ graph(t)."""
    M = np.array([m.images for m in maps], dtype=np.int64)
    # sup[s, t]: every defined point of t agrees with s
    agree = (M[None, :, :] == UNDEF) | (M[None, :, :] == M[:, None, :])
    sup = agree.all(axis=2)
    s, t = np.nonzero(sup)
    return frozenset((int(a), int(b)) for a, b in zip(s, t) if a != b)


def transition_monoid(g: LabeledDigraph, alphabet: str | None = None,
                      budget: int = sg.DEFAULT_BUDGET) -> tuple[FiniteSemigroup, list]:
    """Monoid of partial maps generated by the letter actions (identity adjoined)."""
    alphabet = alphabet or g.alphabet
    maps = [g.letter_map(c) for c in alphabet]
    ident = PartialMap.identity(g.num_vertices)

    def label(v, w):
        return "".join(alphabet[i] for i in w) or "1"

    S, values = sg.closure(maps, PartialMap.then, identity=ident, names=label, budget=budget,
                           meta={"alphabet": alphabet})
    empty = PartialMap.empty(g.num_vertices)
    S.meta["breakdown"] = {
        "identity": True,
        "empty_map": empty in values,
        "other": len(values) - 1 - (empty in values),
        "total": len(values),
    }
    S.meta["maps"] = values
    ordered = FiniteSemigroup(S.table, S.names, S.generators, S.identity,
                              order=containment_order(values), meta=S.meta)
    return ordered, values


def is_partial_identity(m: PartialMap) -> bool:
    return m.is_partial_identity


def power_partial_identity_check(S: FiniteSemigroup, k: int = 3) -> dict:
    """``1 <= x^k`` through the criterion "x^k is a partial identity"."""
    maps = S.meta["maps"]
    bad = []
    for x in range(len(S)):
        p = x
        for _ in range(k - 1):
            p = S.mul(p, x)
        if not maps[p].is_partial_identity:
            bad.append(x)
    return {"holds": not bad, "violations": bad}


@dataclass
class Tower:
    """``M_0 .. M_n`` with restriction maps ``phi[i]: M_{i+1} -> M_i``."""
    monoids: list
    maps: list
    levels: list  # vertex lists of each Gamma_i inside the disjoint union of M_n
    phi: list

    @property
    def top(self) -> FiniteSemigroup:
        return self.monoids[-1]


def build_Mn(n: int, budget: int = sg.DEFAULT_BUDGET) -> Tower:
    monoids, values, levels, phis = [], [], [], []
    for m in range(n + 1):
        g, offsets = disjoint_union([gamma(i) for i in range(m + 1)])
        M, vals = transition_monoid(g, "ab", budget=budget)
        monoids.append(M)
        values.append(vals)
        levels.append([list(range(offsets[i], offsets[i] + gamma(i).num_vertices)) for i in range(m + 1)])
    for m in range(n):
        lower = [v for lvl in levels[m + 1][: m + 1] for v in lvl]
        index = {v: i for i, v in enumerate(values[m])}
        phis.append([index[x.restrict(lower)] for x in values[m + 1]])
    return Tower(monoids, values, levels, phis)


def check_tower(T: Tower) -> list:
    """For each restriction map: (is homomorphism, is onto, identity preserved)."""
    out = []
    for m, f in enumerate(T.phi):
        src, dst = T.monoids[m + 1], T.monoids[m]
        out.append({
            "level": m,
            "homomorphism": sg.hom_check(src, dst, f),
            "onto": set(f) == set(range(len(dst))),
            "identity": f[src.identity] == dst.identity,
        })
    return out


def subdirect_check(T: Tower) -> bool:
    """``M_n`` embeds into the product of the ``T(Gamma_i)``: an element is determined by its levels."""
    top = T.maps[-1]
    seen = set()
    for x in top:
        key = tuple(x.restrict(lvl) for lvl in T.levels[-1])
        seen.add(key)
    return len(seen) == len(top)


# ---------------------------------------------------------------------------
# the graph homomorphisms between flower digraphs and lifting


def graph_hom_gamma(n: int) -> dict:
    """Vertex map ``Gamma_{n+1} -> Gamma_n`` sending ``0_{n+1} . w`` to ``0_n . w``."""
    G1, G0 = gamma(n + 1), gamma(n)
    f = []
    for q in range(G1.num_vertices):
        w = path_word(G1, q)
        img = act(G0, w)(G0.base)
        if img == UNDEF:
            raise GraphError(f"path {w!r} undefined in the smaller graph")
        f.append(img)
    edge_set = set(G0.edges)
    edges_ok = all((f[s], lab, f[d]) in edge_set for s, lab, d in G1.edges)
    fibre = sorted(q for q in range(G1.num_vertices) if f[q] == G0.base)
    expected = sorted({G1.base, act(G1, mu("a", n))(G1.base), act(G1, mu("b", n))(G1.base)} - {UNDEF})
    return {"map": f, "edges_ok": edges_ok, "fibre": fibre, "fibre_expected": expected,
            "fibre_ok": fibre == expected}


def intertwines(n: int, words) -> bool:
    """``gamma(q . w) = gamma(q) . w`` whenever the left side is defined."""
    f = graph_hom_gamma(n)["map"]
    G1, G0 = gamma(n + 1), gamma(n)
    for w in words:
        a1, a0 = act(G1, w), act(G0, w)
        for q in range(G1.num_vertices):
            if a1(q) != UNDEF and a0(f[q]) != f[a1(q)]:
                return False
    return True


@dataclass(frozen=True)
class Lift:
    n: int
    w: str
    u: str
    v: str
    target: int


def lifting_words(n: int, w: str) -> Lift:
    """Two words acting on ``Gamma_n`` as ``{0_n -> 0_n . w}`` but distinctly on ``Gamma_{n+1}``."""
    pa, pb = mu("a", n), mu("b", n)
    if pa.startswith(w):
        c = "a"
    elif pb.startswith(w):
        c = "b"
    else:
        raise NotAPrefix(f"{w!r} is not a prefix of mu^{n}(a) or mu^{n}(b)")
    d = other(c)
    head = mu("a", n + 2)
    u = head + w
    v = head + mu(d, n) + w
    G, H = gamma(n), gamma(n + 1)
    p = act(G, w)(G.base)
    want = PartialMap.from_pairs([(G.base, p)], G.num_vertices)
    au, av = act(G, u), act(G, v)
    if au != want or av != want:
        raise LiftFailed(f"actions on Gamma_{n} differ from {{0 -> {G.names[p]}}}")
    bu, bv = act(H, u), act(H, v)
    if bu == bv or bu.domain != (H.base,) or bv.domain != (H.base,):
        raise LiftFailed(f"actions on Gamma_{n + 1} are not distinct with domain {{0_{n + 1}}}")
    return Lift(n, w, u, v, p)


def _levels_action(word: str, top: int) -> tuple:
    return tuple(act(gamma(i), word) for i in range(top + 1))


def tree_witness(base: int, depth: int) -> dict:
    """Grow a binary tree of words by repeated lifting from the partial identity at ``0_base``.

    Each node is a word; its element in ``M_m`` is the tuple of its actions on
    ``Gamma_0 .. Gamma_m``.  Returns, per level, the number of distinct elements
    and whether every child restricts to its parent.
    """
    start = mu("a", base + 1)
    nodes = [start]
    levels = []
    G = gamma(base)
    first = act(G, start)
    if first != PartialMap.from_pairs([(G.base, G.base)], G.num_vertices):
        raise LiftFailed("base word does not act as the identity at the basepoint only")
    levels.append({"level": base, "nodes": 1, "distinct": 1, "compatible": True})
    for step in range(depth):
        m = base + step
        Gm1 = gamma(m + 1)
        children, parents = [], []
        for word in nodes:
            p = act(gamma(m), word)(gamma(m).base)
            w = path_word(gamma(m), p)
            L = lifting_words(m, w)
            children += [L.u, L.v]
            parents += [word, word]
        compatible = all(_levels_action(c, m) == _levels_action(par, m)
                         for c, par in zip(children, parents))
        acts = [act(Gm1, c) for c in children]
        distinct = len({_levels_action(c, m + 1) for c in children})
        levels.append({
            "level": m + 1,
            "nodes": len(children),
            "distinct": distinct,
            "distinct_top": len(set(acts)),
            "compatible": compatible,
        })
        nodes = children
    return {"base": base, "depth": depth, "levels": levels,
            "final_count": levels[-1]["distinct"], "words": nodes,
            "ok": all(lv["distinct"] >= 2 ** i and lv["compatible"] for i, lv in enumerate(levels))}


def cube_check(n: int) -> dict:
    """Whether ``mu^n(a^3)`` acts nonemptily on ``Gamma_n`` and emptily on ``Gamma_{n+1}``."""
    w = mu("aaa", n)
    a0, a1 = act(gamma(n), w), act(gamma(n + 1), w)
    return {"n": n, "nonempty_on_n": not a0.is_empty, "empty_on_n+1": a1.is_empty}


# ---------------------------------------------------------------------------
# Stallings folding


def stallings_fold(g: LabeledDigraph, rng: random.Random | None = None) -> LabeledDigraph:
    """Merge vertices until every letter acts as a partial bijection.

    With ``rng`` the violating pair to merge next is chosen at random;
    otherwise the smallest one is taken.
    """
    n = g.num_vertices
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = set(g.edges)
    while True:
        edges = {(find(s), lab, find(d)) for s, lab, d in edges}
        clash = []
        out, inn = {}, {}
        for s, lab, d in sorted(edges):
            if (s, lab) in out and out[(s, lab)] != d:
                clash.append((out[(s, lab)], d))
            out.setdefault((s, lab), d)
            if (d, lab) in inn and inn[(d, lab)] != s:
                clash.append((inn[(d, lab)], s))
            inn.setdefault((d, lab), s)
        if not clash:
            break
        x, y = rng.choice(clash) if rng else clash[0]
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    roots = sorted({find(v) for v in range(n)})
    pos = {r: i for i, r in enumerate(roots)}
    folded = LabeledDigraph.make(
        [g.names[r] for r in roots],
        [(pos[s], lab, pos[d]) for s, lab, d in edges],
        {k: pos[find(v)] for k, v in g.basepoints.items()},
    )
    return canonical(folded)


def lambda_graph(n: int) -> LabeledDigraph:
    return stallings_fold(flower([SQUARE_FREE.iterate(c, n) for c in "abc"]))


def canonical_order(g: LabeledDigraph) -> list:
    """Vertex order by breadth-first search from the basepoint, label-sorted, both directions."""
    nbrs = {}
    for s, lab, d in g.edges:
        nbrs.setdefault(s, []).append((0, lab, d))
        nbrs.setdefault(d, []).append((1, lab, s))
    seen = [g.base]
    mark = {g.base}
    q = deque(seen)
    while q:
        x = q.popleft()
        for _, _, y in sorted(nbrs.get(x, [])):
            if y not in mark:
                mark.add(y)
                seen.append(y)
                q.append(y)
    seen += [v for v in range(g.num_vertices) if v not in mark]
    return seen


def canonical(g: LabeledDigraph) -> LabeledDigraph:
    order = canonical_order(g)
    pos = {v: i for i, v in enumerate(order)}
    return LabeledDigraph.make(
        [g.names[v] for v in order],
        [(pos[s], lab, pos[d]) for s, lab, d in g.edges],
        {k: pos[v] for k, v in g.basepoints.items()},
    )


def isomorphic(g: LabeledDigraph, h: LabeledDigraph) -> bool:
    """Basepointed isomorphism via canonical labeling (exact for folded, connected graphs)."""
    if g.num_vertices != h.num_vertices or len(g.edges) != len(h.edges):
        return False
    return canonical(g).edges == canonical(h).edges


def load_graph(path) -> LabeledDigraph:
    with open(path) as fh:
        return LabeledDigraph.from_dict(json.load(fh))
