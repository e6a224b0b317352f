"""Ramseyan factorization forests and finite generation checks.

The builder recurses on J-classes.  A word whose value lies in the J-class
``J`` is cut greedily into units, each the shortest piece whose value falls
into ``J``; the units form a *smooth* sequence (every infix product stays in
``J``).  A smooth sequence is split at the cuts carrying one group H-class as
label, and the pieces between such cuts have values in that group, where a
prefix-product argument yields Ramseyan nodes.  Each J-class on a chain costs
at most ``2 + 5|J|`` levels, so the height stays below ``7|S|``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import semigroup as sg
from .green import green
from .semigroup import FiniteSemigroup


class ForestError(RuntimeError):
    pass


@dataclass(frozen=True)
class Node:
    start: int
    end: int  # exclusive
    value: int
    children: tuple = ()

    @property
    def degree(self) -> int:
        return len(self.children)

    @property
    def height(self) -> int:
        return 0 if not self.children else 1 + max(c.height for c in self.children)


@dataclass
class FactorizationForest:
    word: str
    images: dict
    root: Node
    semigroup_size: int

    @property
    def height(self) -> int:
        return self.root.height

    def nodes(self):
        stack = [self.root]
        while stack:
            x = stack.pop()
            yield x
            stack.extend(reversed(x.children))

    def d(self, start: int, end: int) -> tuple:
        """Children (as words) of the node covering ``word[start:end]``."""
        for x in self.nodes():
            if (x.start, x.end) == (start, end):
                return tuple(self.word[c.start:c.end] for c in x.children)
        raise KeyError((start, end))

    def to_dict(self, S: FiniteSemigroup | None = None) -> dict:
        def enc(x):
            return {
                "word": self.word[x.start:x.end],
                "image": S.names[x.value] if S is not None else x.value,
                "children": [enc(c) for c in x.children],
            }

        return {"word": self.word, "height": self.height, "bound": 9 * self.semigroup_size,
                "root": enc(self.root)}


class _Builder:
    def __init__(self, S: FiniteSemigroup, images: dict, word: str):
        self.S = S
        self.T = S.table
        self.G = green(S, orders=False)
        self.values = [int(images[c]) for c in word]
        self.E = set(S.idempotents)

    def mul(self, a, b):
        return int(self.T[a, b])

    def node(self, children) -> Node:
        children = tuple(children)
        if len(children) == 1:
            return children[0]
        v = children[0].value
        for c in children[1:]:
            v = self.mul(v, c.value)
        return Node(children[0].start, children[-1].end, v, children)

    def binary(self, parts) -> Node:
        """Left-nested binary combination of at most two or three parts."""
        parts = [p for p in parts if p is not None]
        acc = parts[0]
        for p in parts[1:]:
            acc = self.node([acc, p])
        return acc

    def leaf(self, i) -> Node:
        return Node(i, i + 1, self.values[i])

    def flat(self, seq) -> Node | None:
        """One Ramseyan node when all parts share an idempotent value."""
        if len(seq) >= 3 and seq[0].value in self.E and all(x.value == seq[0].value for x in seq):
            return Node(seq[0].start, seq[-1].end, seq[0].value, tuple(seq))
        return None

    # -- words ------------------------------------------------------------
    def word(self, i, j) -> Node:
        if j - i == 1:
            return self.leaf(i)
        easy = self.flat([self.leaf(k) for k in range(i, j)])
        if easy is not None:
            return easy
        J = self.G.J.labels
        v = self.values[i]
        for k in range(i + 1, j):
            v = self.mul(v, self.values[k])
        target = J[v]
        units = []
        start = i
        p = None
        for k in range(i, j):
            p = self.values[k] if p is None else self.mul(p, self.values[k])
            if J[p] == target:
                head = self.word(start, k) if k > start else None
                units.append(self.binary([head, self.leaf(k)]))
                start = k + 1
                p = None
        rest = self.word(start, j) if start < j else None
        return self.binary([self.smooth(units), rest])

    # -- smooth sequences -------------------------------------------------
    def label(self, left: Node, right: Node):
        L, R = self.G.L.labels, self.G.R.labels
        return int(L[left.value]), int(R[right.value])

    def smooth(self, seq) -> Node:
        if len(seq) == 1:
            return seq[0]
        easy = self.flat(seq)
        if easy is not None:
            return easy
        lab = self.label(seq[0], seq[1])
        cuts = [c for c in range(1, len(seq)) if self.label(seq[c - 1], seq[c]) == lab]
        head = self.smooth(seq[:cuts[0]])
        tail = self.smooth(seq[cuts[-1]:])
        groups = [self.smooth(seq[a:b]) for a, b in zip(cuts, cuts[1:])]
        if not groups:
            return self.binary([head, tail])
        e = self.group_identity(lab)
        return self.binary([head, self.group(groups, e), tail])

    def group_identity(self, lab) -> int:
        L, R = self.G.L.labels, self.G.R.labels
        for x in self.E:
            if (int(L[x]), int(R[x])) == lab:
                return x
        raise ForestError("cut label is not a group H-class")

    # -- sequences in a group ---------------------------------------------
    def group(self, seq, sigma) -> Node:
        """``sigma`` is the prefix value before ``seq`` (the group identity at top level)."""
        if len(seq) == 1:
            return seq[0]
        easy = self.flat(seq)
        if easy is not None:
            return easy
        q = [sigma]
        for x in seq:
            q.append(self.mul(q[-1], x.value))
        v = q[1]
        hits = [k for k in range(1, len(seq) + 1) if q[k] == v]
        blocks = [self.group(seq[a:b], v) for a, b in zip(hits, hits[1:])]
        tail = self.group(seq[hits[-1]:], v) if hits[-1] < len(seq) else None
        ram = None
        if blocks:
            ram = Node(blocks[0].start, blocks[-1].end, blocks[0].value, tuple(blocks)) \
                if len(blocks) >= 3 else self.binary(blocks)
            if len(blocks) >= 3 and blocks[0].value not in self.E:
                raise ForestError("Ramseyan block value is not idempotent")
        return self.binary([seq[0], ram, tail])


def build_forest(images: dict, S: FiniteSemigroup, w: str) -> FactorizationForest:
    """A Ramseyan factorization forest for ``w`` under the letter images."""
    if not w:
        raise ForestError("word must be nonempty")
    b = _Builder(S, images, w)
    root = b.word(0, len(w))
    return FactorizationForest(w, dict(images), root, len(S))


def verify_ramseyan(forest: FactorizationForest, images: dict, S: FiniteSemigroup) -> tuple:
    """Independent check; returns ``(ok, first violation or None)``.

    Node values are recomputed from the word rather than trusted.
    """
    w = forest.word
    T = S.table
    E = set(S.idempotents)

    def value(i, j):
        v = int(images[w[i]])
        for k in range(i + 1, j):
            v = int(T[v, int(images[w[k]])])
        return v

    def check(x):
        if x.end - x.start < 1:
            return f"empty node at {x.start}"
        if not x.children:
            if x.end - x.start != 1:
                return f"leaf {w[x.start:x.end]!r} is not a letter"
            return None
        if x.degree == 1:
            return f"unary node at {w[x.start:x.end]!r}"
        if x.children[0].start != x.start or x.children[-1].end != x.end or any(
                a.end != b.start for a, b in zip(x.children, x.children[1:])):
            return f"children of {w[x.start:x.end]!r} do not concatenate to it"
        if x.degree >= 3:
            vals = {value(c.start, c.end) for c in x.children}
            v = value(x.start, x.end)
            if len(vals) != 1 or v not in vals or v not in E:
                return f"node {w[x.start:x.end]!r} of degree {x.degree} is not Ramseyan"
        for c in x.children:
            msg = check(c)
            if msg:
                return msg
        return None

    msg = check(forest.root)
    if msg is None and forest.root.height > 9 * len(S):
        msg = f"height {forest.root.height} exceeds {9 * len(S)}"
    return msg is None, msg


def forest_json(forest: FactorizationForest, S: FiniteSemigroup) -> str:
    ok, msg = verify_ramseyan(forest, forest.images, S)
    d = forest.to_dict(S)
    d["verified"] = ok
    d["violation"] = msg
    return json.dumps(d)


# ---------------------------------------------------------------------------
# generation checks


def idempotent_generation_check(S: FiniteSemigroup, T: FiniteSemigroup, phi, A) -> dict:
    """Does ``A`` together with ``phi^{-1}(E(T))`` generate ``S``?"""
    sg.require_hom(S, T, phi)
    pre = sg.hom_preimage(phi, T.idempotents)
    gens = sorted(set(int(a) for a in A) | set(pre))
    got = set(sg.generated_by(S, gens))
    return {"generators": gens, "preimage_of_idempotents": pre,
            "generates": len(got) == len(S)}


def powers_of_set(S: FiniteSemigroup, A, upto: int) -> list:
    """``[A^1, ..., A^upto]`` as element sets."""
    T = S.table
    cur = set(int(a) for a in A)
    out = [frozenset(cur)]
    for _ in range(upto - 1):
        cur = {int(T[x, a]) for x in cur for a in A}
        out.append(frozenset(cur))
    return out


def nilpotent_kernel_generators(S: FiniteSemigroup, N: FiniteSemigroup, phi, A, n: int) -> dict:
    """Both readings of the candidate generating set of ``phi^{-1}(0)``.

    ``literal`` removes ``phi^{-1}(0)`` from the short powers of ``A``;
    ``corrected`` keeps only the short products already in ``phi^{-1}(0)``.
    """
    if N.zero is None:
        raise ValueError("target has no zero")
    sg.require_hom(S, N, phi)
    if not _nilpotent_of_index(N, n):
        raise ValueError(f"products of length {n} in the target are not all zero")
    if set(sg.generated_by(S, A)) != set(range(len(S))):
        raise ValueError("A does not generate S")
    kernel = set(sg.hom_preimage(phi, [N.zero]))
    P = powers_of_set(S, A, 2 * n - 1)
    long = set().union(*P[n - 1:2 * n - 1]) if n >= 1 else set()
    short = set().union(*P[: n - 1]) if n > 1 else set()
    out = {"kernel": sorted(kernel), "n": n}
    for name, B in (("literal", long | (short - kernel)), ("corrected", long | (short & kernel))):
        gen = set(sg.generated_by(S, B)) if B else set()
        out[name] = {
            "B": sorted(B),
            "inside_kernel": B <= kernel,
            "closure": sorted(gen),
            "generates_kernel": gen == kernel,
        }
    return out


def _nilpotent_of_index(N: FiniteSemigroup, n: int) -> bool:
    prods = set(range(len(N)))
    for _ in range(n - 1):
        prods = set(np.unique(N.table[sorted(prods), :]).tolist())
    return prods == {N.zero}
