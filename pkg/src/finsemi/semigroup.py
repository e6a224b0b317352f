"""Finite semigroups given by multiplication tables.

Elements are the integers ``0..n-1``; ``names`` only matter for display and
serialization.  Tables are read-only ``numpy`` arrays so instances can be
shared freely.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

DEFAULT_BUDGET = 500_000


class SemigroupError(ValueError):
    pass


class NonAssociative(SemigroupError):
    def __init__(self, a, b, c):
        super().__init__(f"(ab)c != a(bc) at a={a}, b={b}, c={c}")
        self.witness = (a, b, c)


class GeneratorsNotGenerating(SemigroupError):
    pass


class OrderNotStable(SemigroupError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class ClosureBudgetExceeded(SemigroupError):
    def __init__(self, limit):
        super().__init__(f"closure exceeded {limit} elements")
        self.limit = limit


class NotClosed(SemigroupError):
    def __init__(self, a, b):
        super().__init__(f"product of {a} and {b} leaves the subset")
        self.witness = (a, b)


class NotIdeal(SemigroupError):
    def __init__(self, a, b):
        super().__init__(f"product of {a} and {b} leaves the ideal")
        self.witness = (a, b)


class NotHomomorphism(SemigroupError):
    def __init__(self, a, b):
        super().__init__(f"f(ab) != f(a)f(b) at a={a}, b={b}")
        self.witness = (a, b)


class FiniteSemigroup:
    """A finite semigroup, optionally a monoid and optionally ordered.

    ``order`` is a set of pairs ``(s, t)`` meaning ``s <= t``; reflexive pairs
    may be omitted.
    """

    def __init__(self, table, names=None, generators=None, identity=None,
                 order=None, meta=None):
        tab = np.array(table, dtype=np.int64)
        if tab.ndim != 2 or tab.shape[0] != tab.shape[1]:
            raise SemigroupError("table must be square")
        n = tab.shape[0]
        if n == 0:
            raise SemigroupError("empty semigroup")
        if tab.min() < 0 or tab.max() >= n:
            raise SemigroupError("table entries out of range")
        tab.setflags(write=False)
        self.table = tab
        self.names = tuple(str(x) for x in names) if names is not None else tuple(str(i) for i in range(n))
        if len(self.names) != n:
            raise SemigroupError("names/table size mismatch")
        self.generators = tuple(int(g) for g in generators) if generators is not None else None
        self.identity = int(identity) if identity is not None else None
        self.order = frozenset((int(a), int(b)) for a, b in order if a != b) if order is not None else None
        self.meta = dict(meta or {})

    def __len__(self):
        return self.table.shape[0]

    def __repr__(self):
        return f"FiniteSemigroup(n={len(self)}, monoid={self.identity is not None})"

    def __eq__(self, other):
        if not isinstance(other, FiniteSemigroup):
            return NotImplemented
        return (np.array_equal(self.table, other.table) and self.names == other.names
                and self.generators == other.generators and self.identity == other.identity
                and self.order == other.order)

    __hash__ = None

    @property
    def size(self):
        return len(self)

    def mul(self, a, b):
        return int(self.table[a, b])

    def product_of(self, elements: Iterable[int]) -> int:
        it = iter(elements)
        acc = next(it)
        for x in it:
            acc = self.table[acc, x]
        return int(acc)

    def index(self, name: str) -> int:
        return self.names.index(name)

    @cached_property
    def idempotents(self) -> tuple:
        d = self.table[np.arange(len(self)), np.arange(len(self))]
        return tuple(int(i) for i in np.flatnonzero(d == np.arange(len(self))))

    @cached_property
    def omega(self) -> np.ndarray:
        """``omega[s]`` is the idempotent power of ``s``."""
        n = len(self)
        idx = np.arange(n)
        res = np.full(n, -1, dtype=np.int64)
        p = idx.copy()
        # some power s^m with m <= n is idempotent
        for _ in range(n):
            hit = (res < 0) & (self.table[p, p] == p)
            res[hit] = p[hit]
            if (res >= 0).all():
                break
            p = self.table[p, idx]
        res.setflags(write=False)
        return res

    @cached_property
    def zero(self):
        n = len(self)
        z = self.product_of(range(n))
        if (self.table[z, :] == z).all() and (self.table[:, z] == z).all():
            return z
        return None

    @cached_property
    def leq(self) -> np.ndarray:
        """Boolean matrix of the partial order (identity if unordered)."""
        m = np.eye(len(self), dtype=bool)
        if self.order:
            a, b = zip(*self.order)
            m[list(a), list(b)] = True
        m.setflags(write=False)
        return m

    def generating_set(self) -> tuple:
        return self.generators if self.generators is not None else tuple(range(len(self)))


# ---------------------------------------------------------------------------
# validation


def check_associative(table) -> tuple | None:
    tab = np.asarray(table)
    n = tab.shape[0]
    # (ab)c vs a(bc) for each a: rows indexed by b, columns by c
    for a in range(n):
        left = tab[tab[a, :], :]
        right = tab[a, tab]
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = bad[0]
            return a, int(b), int(c)
    return None


def validate(S: FiniteSemigroup) -> None:
    witness = check_associative(S.table)
    if witness is not None:
        raise NonAssociative(*witness)
    if S.generators is not None:
        # a monoid is generated as a monoid: the identity is the empty product
        reached = set(generated_by(S, S.generators)) if S.generators else set()
        if S.identity is not None:
            reached.add(S.identity)
        if len(reached) != len(S):
            raise GeneratorsNotGenerating("generators do not generate the table")
    if S.identity is not None:
        e = S.identity
        idx = np.arange(len(S))
        if not ((S.table[e, :] == idx).all() and (S.table[:, e] == idx).all()):
            raise SemigroupError(f"element {e} is not a two-sided identity")
    if S.order:
        leq = S.leq
        closure = _transitive_closure(leq)
        if not np.array_equal(closure, leq):
            raise OrderNotStable("order is not transitive")
        anti = leq & leq.T
        np.fill_diagonal(anti, False)
        if anti.any():
            a, b = np.argwhere(anti)[0]
            raise OrderNotStable("order is not antisymmetric", (int(a), int(b)))
        # with transitivity, compatibility with one-sided multiplication suffices
        for a, b in sorted(S.order):
            bad = np.flatnonzero(~leq[S.table[a, :], S.table[b, :]] | ~leq[S.table[:, a], S.table[:, b]])
            if len(bad):
                raise OrderNotStable("order is not stable", (a, b, int(bad[0])))


def _transitive_closure(m: np.ndarray) -> np.ndarray:
    r = m.copy()
    n = r.shape[0]
    for k in range(n):
        r |= r[:, [k]] & r[[k], :]
    return r


# ---------------------------------------------------------------------------
# construction


def closure(seeds: Sequence, compose: Callable, *, identity=None, key: Callable[[object], Hashable] | None = None,
            names: Callable[[object, tuple], str] | None = None, budget: int = DEFAULT_BUDGET,
            meta=None) -> tuple[FiniteSemigroup, list]:
    """Breadth-first closure of ``seeds`` under an associative ``compose``.

    If ``identity`` is given the result is a monoid with the identity value as
    element 0 (the empty product).  Returns the semigroup and the list of
    element values in discovery order.  Element ``i`` of the semigroup also
    gets a representative word over the seeds in ``meta['words']``.
    """
    key = key or (lambda v: v)
    values = []
    words = []
    index = {}

    def add(v, w):
        k = key(v)
        if k in index:
            return index[k], False
        if len(values) >= budget:
            raise ClosureBudgetExceeded(budget)
        index[k] = len(values)
        values.append(v)
        words.append(w)
        return index[k], True

    if identity is not None:
        add(identity, ())
    gens = []
    queue = deque()
    for i, s in enumerate(seeds):
        j, new = add(s, (i,))
        gens.append(j)
        if new:
            queue.append(j)
    # right Cayley graph: right[x][i] = x * seed_i
    right = {}
    if identity is not None:
        right[0] = list(gens)
    while queue:
        x = queue.popleft()
        row = []
        for i, s in enumerate(seeds):
            j, new = add(compose(values[x], s), words[x] + (i,))
            row.append(j)
            if new:
                queue.append(j)
        right[x] = row
    n = len(values)
    R = np.array([right[x] for x in range(n)], dtype=np.int64).reshape(n, len(seeds))
    table = _table_from_right_cayley(R, words)
    label = names or (lambda v, w: _word_name(w))
    info = dict(meta or {})
    info.setdefault("words", words)
    info.setdefault("convention", "monoid" if identity is not None else "semigroup")
    S = FiniteSemigroup(table, names=[label(v, w) for v, w in zip(values, words)],
                        generators=gens, identity=0 if identity is not None else None, meta=info)
    return S, values


def _word_name(w):
    return "1" if not w else "".join(chr(ord("a") + i) if i < 26 else f"g{i}" for i in w)


def _table_from_right_cayley(R, words):
    # column j of the table is built from the column of its BFS parent:
    # x * (p s) = (x p) s.
    n = R.shape[0]
    table = np.empty((n, n), dtype=np.int64)
    pos = {w: j for j, w in enumerate(words)}
    for j in sorted(range(n), key=lambda j: len(words[j])):
        w = words[j]
        if len(w) == 0:
            table[:, j] = np.arange(n)
        elif len(w) == 1:
            table[:, j] = R[:, w[0]]
        else:
            p = pos[w[:-1]]
            table[:, j] = R[table[:, p], w[-1]]
    return table


def from_function(elements: Sequence, op: Callable, names=None, **kw) -> FiniteSemigroup:
    idx = {e: i for i, e in enumerate(elements)}
    table = [[idx[op(x, y)] for y in elements] for x in elements]
    return FiniteSemigroup(table, names=names or [str(e) for e in elements], **kw)


def cyclic_group(n: int) -> FiniteSemigroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    names = ["1"] + [f"g^{i}" if i > 1 else "g" for i in range(1, n)]
    return FiniteSemigroup(table, names=names, generators=[1 % n], identity=0)


def left_zero(names=("a", "b")) -> FiniteSemigroup:
    n = len(names)
    return FiniteSemigroup([[i] * n for i in range(n)], names=names, generators=range(n))


def trivial() -> FiniteSemigroup:
    return FiniteSemigroup([[0]], names=["1"], generators=[0], identity=0)


def monogenic(index: int, period: int = 1) -> FiniteSemigroup:
    """``<a | a^(index+period) = a^index>`` with elements ``a, a^2, ...``."""
    n = index + period - 1

    def red(e):
        while e > n:
            e -= period
        return e

    table = [[red(i + j) - 1 for j in range(1, n + 1)] for i in range(1, n + 1)]
    names = ["a" if i == 1 else f"a^{i}" for i in range(1, n + 1)]
    return FiniteSemigroup(table, names=names, generators=[0])


def chain_semilattice(n: int) -> FiniteSemigroup:
    """Meet-semilattice ``0 <= 1 <= ... <= n-1``."""
    return FiniteSemigroup([[min(i, j) for j in range(n)] for i in range(n)],
                           identity=n - 1 if n else None)


def transformation_semigroup(maps, budget: int = DEFAULT_BUDGET) -> FiniteSemigroup:
    """Semigroup generated by full transformations (tuples), composed left to right."""
    def then(f, g):
        return tuple(g[x] for x in f)

    S, values = closure([tuple(m) for m in maps], then, budget=budget)
    S.meta["maps"] = values
    return S


def random_semigroup(rng, max_size: int = 8, degree: int = 3, ngens: int = 2,
                     tries: int = 1000) -> FiniteSemigroup:
    """A random transformation semigroup with at most ``max_size`` elements."""
    for _ in range(tries):
        maps = [tuple(rng.randrange(degree) for _ in range(degree)) for _ in range(ngens)]
        S = transformation_semigroup(maps)
        if len(S) <= max_size:
            return S
    raise SemigroupError(f"no random semigroup of size <= {max_size} found")


def adjoin_identity(S: FiniteSemigroup) -> FiniteSemigroup:
    n = len(S)
    t = np.empty((n + 1, n + 1), dtype=np.int64)
    t[:n, :n] = S.table
    t[n, :] = np.arange(n + 1)
    t[:, n] = np.arange(n + 1)
    gens = None if S.generators is None else S.generators + (n,)
    return FiniteSemigroup(t, names=S.names + ("1",), generators=gens, identity=n, meta=S.meta)


# ---------------------------------------------------------------------------
# subsets, products, quotients, homomorphisms


def generated_by(S: FiniteSemigroup, gens: Iterable[int]) -> list:
    """Elements of the subsemigroup generated by ``gens``, in BFS order."""
    gens = sorted(set(int(g) for g in gens))
    seen = dict.fromkeys(gens)
    queue = deque(gens)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = int(S.table[x, g])
            if y not in seen:
                seen[y] = None
                queue.append(y)
    return list(seen)


def subsemigroup(S: FiniteSemigroup, subset: Iterable[int]) -> tuple[FiniteSemigroup, list]:
    """Restrict ``S`` to a multiplicatively closed subset.

    Returns the new semigroup and the embedding (new index -> old index).
    """
    elems = sorted(set(int(x) for x in subset))
    pos = {x: i for i, x in enumerate(elems)}
    sub = S.table[np.ix_(elems, elems)]
    for i, j in zip(*np.nonzero(~np.isin(sub, elems))):
        raise NotClosed(elems[i], elems[j])
    table = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub)
    ident = pos.get(S.identity) if S.identity is not None else None
    order = None
    if S.order is not None:
        order = [(pos[a], pos[b]) for a, b in S.order if a in pos and b in pos]
    T = FiniteSemigroup(table, names=[S.names[x] for x in elems], identity=ident, order=order)
    return T, elems


def product(S: FiniteSemigroup, T: FiniteSemigroup) -> FiniteSemigroup:
    """Direct product, element ``(s, t)`` at index ``s * |T| + t``."""
    n, m = len(S), len(T)
    s = np.repeat(np.arange(n), m)
    t = np.tile(np.arange(m), n)
    table = S.table[s[:, None], s[None, :]] * m + T.table[t[:, None], t[None, :]]
    names = [f"({a},{b})" for a in S.names for b in T.names]
    ident = None
    if S.identity is not None and T.identity is not None:
        ident = S.identity * m + T.identity
    order = None
    if S.order is not None or T.order is not None:
        ls, lt = S.leq, T.leq
        order = [(i, j) for i in range(n * m) for j in range(n * m)
                 if i != j and ls[s[i], s[j]] and lt[t[i], t[j]]]
    return FiniteSemigroup(table, names=names, identity=ident, order=order)


def is_ideal(S: FiniteSemigroup, ideal: Iterable[int]) -> tuple | None:
    """Return a witness pair if ``ideal`` is not a two-sided ideal."""
    I = sorted(set(int(x) for x in ideal))
    mask = np.zeros(len(S), dtype=bool)
    mask[I] = True
    left = S.table[:, I]
    right = S.table[I, :]
    bad = np.argwhere(~mask[left])
    if len(bad):
        return int(bad[0][0]), I[bad[0][1]]
    bad = np.argwhere(~mask[right])
    if len(bad):
        return I[bad[0][0]], int(bad[0][1])
    return None


def rees_quotient(S: FiniteSemigroup, ideal: Iterable[int]) -> tuple[FiniteSemigroup, list]:
    """Collapse a two-sided ideal to a zero; returns ``(S/I, projection)``."""
    I = set(int(x) for x in ideal)
    if not I:
        raise NotIdeal(None, None)
    w = is_ideal(S, I)
    if w is not None:
        raise NotIdeal(*w)
    keep = [x for x in range(len(S)) if x not in I]
    z = len(keep)
    proj = [0] * len(S)
    for i, x in enumerate(keep):
        proj[x] = i
    for x in I:
        proj[x] = z
    pr = np.array(proj)
    table = np.full((z + 1, z + 1), z, dtype=np.int64)
    if keep:
        table[:z, :z] = pr[S.table[np.ix_(keep, keep)]]
    ident = proj[S.identity] if S.identity is not None and S.identity not in I else None
    Q = FiniteSemigroup(table, names=[S.names[x] for x in keep] + ["0"], identity=ident)
    return Q, proj


def hom_violation(S: FiniteSemigroup, T: FiniteSemigroup, f) -> tuple | None:
    f = np.asarray(f)
    bad = np.argwhere(f[S.table] != T.table[f[:, None], f[None, :]])
    if len(bad):
        return int(bad[0][0]), int(bad[0][1])
    return None


def hom_check(S: FiniteSemigroup, T: FiniteSemigroup, f) -> bool:
    """True iff ``f`` (a sequence indexed by elements of ``S``) is a homomorphism."""
    return hom_violation(S, T, f) is None


def require_hom(S, T, f):
    w = hom_violation(S, T, f)
    if w is not None:
        raise NotHomomorphism(*w)


def hom_image(f, subset=None) -> set:
    f = list(f)
    return {f[x] for x in (range(len(f)) if subset is None else subset)}


def hom_preimage(f, targets) -> list:
    targets = set(targets)
    return [x for x, y in enumerate(f) if y in targets]


def extend_to_hom(S: FiniteSemigroup, T: FiniteSemigroup, gen_images: dict) -> list | None:
    """Extend a map on generators of ``S`` to a homomorphism, or return None."""
    gens = S.generating_set()
    f = {int(g): int(gen_images[g]) for g in gens}
    queue = deque(gens)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = int(S.table[x, g])
            v = int(T.table[f[x], f[g]])
            if y in f:
                if f[y] != v:
                    return None
            else:
                f[y] = v
                queue.append(y)
    if len(f) != len(S):
        return None
    out = [f[x] for x in range(len(S))]
    return out if hom_check(S, T, out) else None


def find_isomorphism(S: FiniteSemigroup, T: FiniteSemigroup) -> list | None:
    """Brute-force search for an isomorphism ``S -> T`` over generator images."""
    if len(S) != len(T) or len(S.idempotents) != len(T.idempotents):
        return None
    gens = minimal_generators(S)
    # cheap invariants to prune candidate images
    def sig(U, x):
        return (bool(U.table[x, x] == x), int(U.omega[x] == x), _cyclic_size(U, x))

    tsig = {}
    for y in range(len(T)):
        tsig.setdefault(sig(T, y), []).append(y)
    cands = [tsig.get(sig(S, g), []) for g in gens]
    Sg = FiniteSemigroup(S.table, generators=gens)
    for images in itertools.product(*cands):
        if len(set(images)) != len(images):
            continue
        f = extend_to_hom(Sg, T, dict(zip(gens, images)))
        if f is not None and len(set(f)) == len(T):
            return f
    return None


def _cyclic_size(S, x):
    seen = set()
    y = x
    while y not in seen:
        seen.add(y)
        y = int(S.table[y, x])
    return len(seen)


def minimal_generators(S: FiniteSemigroup) -> tuple:
    """A small (greedy) generating set: elements outside ``S^2`` first."""
    n = len(S)
    sq = set(np.unique(S.table).tolist())
    gens = [x for x in range(n) if x not in sq]
    have = set(generated_by(S, gens)) if gens else set()
    # then greedily add J-maximal-ish elements by index order
    for x in range(n):
        if len(have) == n:
            break
        if x not in have:
            gens.append(x)
            have = set(generated_by(S, gens))
    return tuple(gens)


def is_subsemigroup_closed(S: FiniteSemigroup, subset) -> bool:
    s = sorted(set(subset))
    return bool(np.isin(S.table[np.ix_(s, s)], s).all())


# ---------------------------------------------------------------------------
# predicates


def is_aperiodic(S: FiniteSemigroup) -> bool:
    # x^(n+1) = x^n with n = |S| for every x
    n = len(S)
    idx = np.arange(n)
    p = idx.copy()
    for _ in range(n - 1):
        p = S.table[p, idx]
    return bool((S.table[p, idx] == p).all())


def is_regular_element(S: FiniteSemigroup, s: int) -> bool:
    return bool((S.table[S.table[s, :], s] == s).any())


def is_inverse(S: FiniteSemigroup) -> bool:
    E = list(S.idempotents)
    sub = S.table[np.ix_(E, E)]
    if not np.array_equal(sub, sub.T):
        return False
    return all(is_regular_element(S, s) for s in range(len(S)))


def is_group(S: FiniteSemigroup) -> bool:
    if len(S.idempotents) != 1:
        return False
    # a finite semigroup is a group iff it is left and right simple: every row
    # and column is a permutation
    n = len(S)
    return all(len(set(S.table[i].tolist())) == n for i in range(n)) and \
        all(len(set(S.table[:, i].tolist())) == n for i in range(n))


def is_nilpotent(S: FiniteSemigroup) -> bool:
    z = S.zero
    if z is None:
        return False
    # products of length n are all zero iff S^n = {0}
    level = set(range(len(S)))
    allx = np.arange(len(S))
    for _ in range(len(S) - 1):
        level = set(np.unique(S.table[np.ix_(sorted(level), allx)]).tolist())
    return level == {z}


def predicates(S: FiniteSemigroup) -> dict:
    return {
        "is_aperiodic": is_aperiodic(S),
        "is_inverse": is_inverse(S),
        "is_group": is_group(S),
        "idempotents": list(S.idempotents),
        "is_nilpotent": is_nilpotent(S),
        "has_zero": S.zero is not None,
    }


def omega_power(S: FiniteSemigroup, s: int) -> int:
    return int(S.omega[s])


# ---------------------------------------------------------------------------
# JSON


def to_dict(S: FiniteSemigroup) -> dict:
    d = {"elements": list(S.names), "table": S.table.tolist()}
    if S.generators is not None:
        d["generators"] = list(S.generators)
    if S.identity is not None:
        d["identity"] = S.identity
    if S.order is not None:
        d["order"] = [list(p) for p in sorted(S.order)]
    return d


def from_dict(d: dict) -> FiniteSemigroup:
    S = FiniteSemigroup(d["table"], names=d["elements"], generators=d.get("generators"),
                        identity=d.get("identity"), order=d.get("order"))
    validate(S)
    return S


def dumps(S: FiniteSemigroup) -> str:
    return json.dumps(to_dict(S))


def loads(text: str) -> FiniteSemigroup:
    return from_dict(json.loads(text))


def load(path) -> FiniteSemigroup:
    with open(path) as fh:
        return from_dict(json.load(fh))
