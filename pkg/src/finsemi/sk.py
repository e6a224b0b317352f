"""The two-generator semigroups ``S_k`` and ``S_k(p)`` and their relatives.

``S_k`` is presented by::

    a^(k+1) = a^k,  b^(k+1) = b^k,  a^k b^k a^k = a^k,  b^k a^k b^k = b^k,
    a^n b^n a = b^n a^n b = 0   (n < k)

and ``S_k(p)`` by::

    a^2 = 0,  b^(k+1) = b^k,  b^k (a b^k)^p = b^k,  b^n a b^n a = 0   (n < k)

Normalization runs on the run-length (exponent) representation: letters are
appended one at a time to an already reduced prefix, and since every rule is
local to the last two or ``p + 1`` blocks only the tail needs inspecting.
:func:`rewrite_randomly` is a separate string rewriting engine used as a
confluence oracle.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from itertools import product as _product
from typing import Callable, Sequence

import numpy as np

from . import semigroup as sg
from .semigroup import FiniteSemigroup

SK = "Sk"
SKP = "Skp"


class WitnessFailed(Exception):
    def __init__(self, stage, detail=""):
        super().__init__(f"witness failed at {stage}: {detail}" if detail else f"witness failed at {stage}")
        self.stage = stage


class NotStabilized(Exception):
    def __init__(self, limit):
        super().__init__(f"images did not stabilize within {limit} terms")
        self.limit = limit


@dataclass(frozen=True)
class CanonicalWord:
    """Normal form of an element of ``S_k`` or ``S_k(p)``; ``word is None`` is zero."""
    variant: str
    k: int
    p: int | None
    word: str | None

    @property
    def is_zero(self) -> bool:
        return self.word is None

    @property
    def gammas(self) -> tuple:
        """Exponents ``g0, g1, ...`` of ``a^g0 b^g1 a^g2 ...`` (Sk), ending on a ``b`` slot."""
        if self.word is None or self.variant != SK:
            raise ValueError("gammas only exist for nonzero Sk elements")
        runs = _runs(self.word)
        g = [] if runs[0][0] == "a" else [0]
        g += [e for _, e in runs]
        if len(g) % 2:
            g.append(0)
        return tuple(g)

    @property
    def betas(self) -> tuple:
        """Exponents ``b0..bl`` of ``b^b0 a b^b1 a ... a b^bl`` (Skp)."""
        if self.word is None or self.variant != SKP:
            raise ValueError("betas only exist for nonzero Skp elements")
        return tuple(len(part) for part in self.word.split("a"))

    def __str__(self):
        if self.word is None:
            return "0"
        if self.variant == SK:
            return " ".join(f"{c}^{e}" for c, e in _runs(self.word))
        out = []
        for c, e in _runs(self.word):
            if c == "a":
                out.extend(["a"] * e)
            else:
                out.append(f"b^{e}")
        return " ".join(out)

    def __repr__(self):
        return f"<{self.variant} k={self.k}{'' if self.p is None else f' p={self.p}'}: {self}>"


def _runs(w: str) -> list:
    return [(m.group(0)[0], len(m.group(0))) for m in re.finditer(r"a+|b+", w)]


def _check_params(k, variant, p):
    if variant == SK:
        if k < 1:
            raise ValueError("Sk needs k >= 1")
    elif variant == SKP:
        if k < 2 or p is None or p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError("Skp needs k >= 2 and p prime")
    else:
        raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# normalization


def _normalize_sk(word: str, k: int) -> str | None:
    blocks: list = []  # [letter, exponent]
    for c in word:
        if blocks and blocks[-1][0] == c:
            if blocks[-1][1] < k:
                blocks[-1][1] += 1
        else:
            blocks.append([c, 1])
            # x^n y^n x = 0 for n < k: the finished middle block is short
            # and not longer than the one before it
            if len(blocks) >= 3 and blocks[-2][1] < k and blocks[-3][1] >= blocks[-2][1]:
                return None
        if len(blocks) >= 3 and blocks[-1][1] == blocks[-2][1] == blocks[-3][1] == k:
            del blocks[-2:]
    return "".join(c * e for c, e in blocks)


def _normalize_skp(word: str, k: int, p: int) -> str | None:
    betas: list = []
    for c in word:
        if not betas:
            betas = [0, 0] if c == "a" else [1]
            continue
        if c == "b":
            if betas[-1] < k:
                betas[-1] += 1
                if betas[-1] == k and len(betas) >= p + 1 and all(x == k for x in betas[-p - 1:]):
                    del betas[-p:]
        else:
            # aa = 0 and b^n a b^n a = 0 for n < k
            if len(betas) >= 2 and betas[-1] < k and betas[-2] >= betas[-1]:
                return None
            betas.append(0)
    return "a".join("b" * x for x in betas)


def normalize(word: str, k: int, variant: str = SK, p: int | None = None) -> CanonicalWord:
    _check_params(k, variant, p)
    if not word:
        raise ValueError("empty word")
    if set(word) - {"a", "b"}:
        raise ValueError(f"word over {{a,b}} expected, got {word!r}")
    if variant == SK:
        w = _normalize_sk(word, k)
    else:
        w = _normalize_skp(word, k, p)
    return CanonicalWord(variant, k, p if variant == SKP else None, w)


def multiply(u: CanonicalWord, v: CanonicalWord) -> CanonicalWord:
    if u.is_zero or v.is_zero:
        return CanonicalWord(u.variant, u.k, u.p, None)
    return normalize(u.word + v.word, u.k, u.variant, u.p)


def zero(k, variant=SK, p=None) -> CanonicalWord:
    return CanonicalWord(variant, k, p if variant == SKP else None, None)


# ---------------------------------------------------------------------------
# independent string rewriting (confluence oracle)


def rules(k: int, variant: str = SK, p: int | None = None) -> list:
    """Oriented rules ``(lhs, rhs)``; ``rhs is None`` means the word is zero."""
    if variant == SK:
        out = [("a" * (k + 1), "a" * k), ("b" * (k + 1), "b" * k),
               ("a" * k + "b" * k + "a" * k, "a" * k), ("b" * k + "a" * k + "b" * k, "b" * k)]
        for n in range(1, k):
            out.append(("a" * n + "b" * n + "a", None))
            out.append(("b" * n + "a" * n + "b", None))
        return out
    out = [("aa", None), ("b" * (k + 1), "b" * k), ("b" * k + ("a" + "b" * k) * p, "b" * k)]
    for n in range(1, k):
        out.append(("b" * n + "a" + "b" * n + "a", None))
    return out


def rewrite_randomly(word: str, k: int, variant: str = SK, p: int | None = None,
                     rng: random.Random | None = None) -> str | None:
    """Rewrite to an irreducible word choosing rule and position at random."""
    rng = rng or random.Random()
    rs = rules(k, variant, p)
    while True:
        matches = []
        for lhs, rhs in rs:
            start = word.find(lhs)
            while start >= 0:
                matches.append((start, lhs, rhs))
                start = word.find(lhs, start + 1)
        if not matches:
            return word
        start, lhs, rhs = rng.choice(matches)
        if rhs is None:
            return None
        word = word[:start] + rhs + word[start + len(lhs):]


# ---------------------------------------------------------------------------
# canonical forms by enumeration


def _prec(i, j, k):
    return i < j or i == j == k


def is_canonical(cw: CanonicalWord) -> bool:
    """Check the normal-form constraints directly on the exponent sequence."""
    if cw.is_zero:
        return True
    k = cw.k
    if cw.variant == SK:
        g = cw.gammas
        last = len(g) - 1  # index 2l+1
        if any(x < 0 or x > k for x in g):
            return False
        if any(x == 0 for x in g[1:last]):
            return False
        if sum(1 for x in g if x == k) > 2:
            return False
        for i in range(0, last - 2):  # 0 <= i < 2l-1
            if not _prec(g[i], g[i + 1], k):
                return False
        if g[last] != 0 and last >= 2 and not _prec(g[last - 2], g[last - 1], k):
            return False
        return True
    b = cw.betas
    l = len(b) - 1
    if any(x < 0 or x > k for x in b):
        return False
    if any(x == 0 for x in b[1:l]):
        return False
    if l == 0 and b[0] == 0:
        return False
    if sum(1 for x in b if x == k) > cw.p:
        return False
    return all(_prec(b[i], b[i + 1], k) for i in range(0, l - 1))


def enumerate_canonical(k: int, variant: str = SK, p: int | None = None) -> list:
    """All nonzero normal forms, generated from the exponent constraints."""
    _check_params(k, variant, p)
    out = []
    if variant == SK:
        # nonzero blocks e_0..e_m alternating letters, first letter a or b
        def grow(seq):
            if seq:
                yield seq
            if len(seq) >= 2 and not _prec(seq[-2], seq[-1], k):
                return  # a further block would create a zero
            for e in range(1, k + 1):
                cand = seq + [e]
                if cand.count(k) > 2:
                    continue
                yield from grow(cand)

        for first in "ab":
            for seq in grow([]):
                letters = [first if i % 2 == 0 else ("b" if first == "a" else "a") for i in range(len(seq))]
                out.append("".join(c * e for c, e in zip(letters, seq)))
    else:
        def grow_b(seq, budget_l):
            # seq: betas b0..b_l with b_l still open
            yield seq
            if len(seq) - 1 >= budget_l:
                return
            if len(seq) >= 2 and not _prec(seq[-2], seq[-1], k):
                return
            if len(seq) >= 2 and seq[-1] == 0:
                return
            for e in range(0, k + 1):
                cand = seq + [e]
                if cand.count(k) > p:
                    continue
                yield from grow_b(cand, budget_l)

        for b0 in range(0, k + 1):
            for seq in grow_b([b0], k + p):
                if len(seq) == 1 and seq[0] == 0:
                    continue
                out.append("a".join("b" * x for x in seq))
    words = [CanonicalWord(variant, k, p if variant == SKP else None, w) for w in out]
    words = [w for w in words if is_canonical(w)]
    return sorted(set(words), key=lambda w: (len(w.word), w.word))


# ---------------------------------------------------------------------------
# builders


def _semigroup_from_words(words: list, k, variant, p, meta) -> FiniteSemigroup:
    elems = list(words) + [zero(k, variant, p)]
    idx = {w: i for i, w in enumerate(elems)}
    n = len(elems)
    z = n - 1
    table = np.full((n, n), z, dtype=np.int64)
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            table[i, j] = idx[multiply(u, v)]
    gens = [idx[w] for w in elems if not w.is_zero and len(w.word) == 1]
    S = FiniteSemigroup(table, names=[str(w) for w in elems], meta=dict(meta, elements=elems))
    if gens and len(sg.generated_by(S, gens)) == n:
        S = FiniteSemigroup(table, names=S.names, generators=gens, meta=S.meta)
    return S


def build(k: int, variant: str = SK, which: str = "S", p: int | None = None,
          budget: int = sg.DEFAULT_BUDGET) -> FiniteSemigroup:
    """``S_k``/``S_k(p)`` (``which='S'``), ``T_k``/``T_k(p)`` (``'T'``) or ``R_k`` (``'R'``)."""
    _check_params(k, variant, p)
    words = enumerate_canonical(k, variant, p)
    if len(words) + 1 > budget:
        raise sg.ClosureBudgetExceeded(budget)
    meta = {"k": k, "variant": variant, "p": p, "which": which}
    if which == "S":
        return _semigroup_from_words(words, k, variant, p, meta)
    if which == "T":
        if variant == SK:
            keep = [w for w in words if w.word[0] == "a"]
        else:
            keep = [w for w in words if w.word.count("a") % p == 0]
        return _semigroup_from_words(keep, k, variant, p, meta)
    if which == "R":
        return build_R(k, variant, p, budget=budget)
    raise ValueError(f"unknown part {which!r}")


def _second_factor(variant, p):
    if variant == SK:
        return sg.left_zero(("a", "b"))
    return sg.cyclic_group(p)


def build_R(k: int, variant: str = SK, p: int | None = None, generators=None,
            budget: int = sg.DEFAULT_BUDGET) -> FiniteSemigroup:
    """Subsemigroup of ``S x Q`` generated by the given pairs of names.

    ``Q`` is the left-zero semigroup on ``{a, b}`` for ``Sk`` and the cyclic
    group of order ``p`` for ``Skp``.  Default generators are ``(a,a),(b,b)``
    and ``(a,g),(b,1)`` respectively.
    """
    S = build(k, variant, "S", p)
    Q = _second_factor(variant, p)
    if generators is None:
        generators = [("a", "a"), ("b", "b")] if variant == SK else [("a", "g"), ("b", "1")]
    P = sg.product(S, Q)
    m = len(Q)
    gens = [S.index(_name_of(x, k, variant, p)) * m + Q.index(y) for x, y in generators]
    elems = sg.generated_by(P, gens)
    if len(elems) > budget:
        raise sg.ClosureBudgetExceeded(budget)
    R, emb = sg.subsemigroup(P, elems)
    pos = {x: i for i, x in enumerate(emb)}
    proj1 = [x // m for x in emb]
    proj2 = [x % m for x in emb]
    return FiniteSemigroup(R.table, names=R.names, generators=[pos[g] for g in dict.fromkeys(gens)],
                           meta={"k": k, "variant": variant, "p": p, "which": "R", "factors": (S, Q),
                                 "proj1": proj1, "proj2": proj2})


def _name_of(word, k, variant, p):
    return str(normalize(word, k, variant, p))


def swap_letters(w: str) -> str:
    return w.translate(str.maketrans("ab", "ba"))


def malcev_witness_check(k: int, variant: str = SK, p: int | None = None, generators=None) -> dict:
    """Verify the finite witness that ``R_k`` lies in the Mal'cev product.

    Raises :class:`WitnessFailed` naming the first failing stage; returns a
    report of the checks otherwise.
    """
    R = build_R(k, variant, p, generators=generators)
    S, Q = R.meta["factors"]
    pi1, pi2 = R.meta["proj1"], R.meta["proj2"]
    report = {"k": k, "variant": variant, "p": p, "size_R": len(R), "size_S": len(S)}
    if set(pi1) != set(range(len(S))):
        raise WitnessFailed("projection-1", "not onto S")
    if set(pi2) != set(range(len(Q))):
        raise WitnessFailed("projection-2", "not onto the second factor")
    if not sg.hom_check(R, S, pi1) or not sg.hom_check(R, Q, pi2):
        raise WitnessFailed("projection-hom")
    report["projections_onto"] = True
    report["S_image_of_R"] = True

    T = build(k, variant, "T", p)
    Tidx = {w: i for i, w in enumerate(T.meta["elements"])}
    Selems = S.meta["elements"]
    fibres = {}
    for e in Q.idempotents:
        members = [x for x in range(len(R)) if pi2[x] == e]
        if not sg.is_subsemigroup_closed(R, members):
            raise WitnessFailed("fibre-closed", Q.names[e])
        F, emb = sg.subsemigroup(R, members)
        # natural candidate: forget the second coordinate, swapping letters on
        # the b-fibre of the left-zero case
        swap = variant == SK and Q.names[e] == "b"
        cand = []
        for x in emb:
            w = Selems[pi1[x]]
            if not w.is_zero and swap:
                w = CanonicalWord(w.variant, w.k, w.p, swap_letters(w.word))
            cand.append(Tidx.get(w, -1))
        iso = None
        if -1 not in cand and len(set(cand)) == len(T) == len(F) and sg.hom_check(F, T, cand):
            iso = cand
        elif len(F) == len(T):
            iso = sg.find_isomorphism(F, T)
        if iso is None:
            raise WitnessFailed("fibre-isomorphism", Q.names[e])
        fibres[Q.names[e]] = {"size": len(F), "isomorphism": iso}
    report["fibres"] = fibres
    report["size_T"] = len(T)
    report["passed"] = True
    return report


# ---------------------------------------------------------------------------
# separating sequences


def as_sequence(s) -> Callable[[int], int]:
    """1-based sequence access; a finite prefix is continued by steps of +1."""
    if callable(s):
        return s
    s = list(s)
    if not s:
        raise ValueError("empty sequence")

    def f(i):
        return s[i - 1] if i <= len(s) else s[-1] + (i - len(s))

    return f


def _check_increasing(f, upto):
    vals = [f(i) for i in range(1, upto + 1)]
    if vals[0] < 1 or any(x >= y for x, y in zip(vals, vals[1:])):
        raise ValueError("sequence must be strictly increasing positive integers")


def separating_sequence(s, variant: str = SK, m: int = 1, p: int | None = None) -> list:
    """The words ``w_1..w_m`` built from an increasing sequence ``s``."""
    if m <= 0:
        return []
    f = as_sequence(s)
    if not callable(s) and len(list(s)) < (2 * m if variant == SK else p * m):
        # a short finite prefix is not extended silently here
        raise ValueError("sequence too short for the requested number of terms")
    out = []
    w = ""
    for i in range(1, m + 1):
        if variant == SK:
            w += "a" * f(2 * i - 1) + "b" * f(2 * i)
        else:
            w += "".join("a" + "b" * (p * f(p * (i - 1) + r)) for r in range(1, p + 1))
        out.append(w)
    return out


def _terms(f, variant, p, count):
    return separating_sequence(f, variant, count, p)


def separation_check(s, t, variant: str = SK, p: int | None = None, limit: int = 40,
                     stable: int = 3) -> dict:
    """Separate the limits of two sequences in a single ``S_k`` / ``S_k(p)``.

    ``s`` and ``t`` are callables or finite prefixes (continued by +1).
    """
    fs, ft = as_sequence(s), as_sequence(t)
    horizon = 4 * limit * (p or 1)
    _check_increasing(fs, horizon)
    _check_increasing(ft, horizon)
    j = next((i for i in range(1, horizon + 1) if fs(i) != ft(i)), None)
    if j is None:
        raise ValueError("sequences agree on the inspected range; they must differ")
    swapped = fs(j) > ft(j)
    if swapped:
        fs, ft = ft, fs
    sj = fs(j)
    if variant == SK:
        k = sj + 1
        pp = None
    else:
        k = p * (sj + 1)
        pp = p
    ws = _terms(fs, variant, pp, limit)
    wt = _terms(ft, variant, pp, limit)
    img_s = [normalize(w, k, variant, pp) for w in ws]
    img_t = [normalize(w, k, variant, pp) for w in wt]
    for imgs in (img_s, img_t):
        if len(set(imgs[-stable:])) != 1:
            raise NotStabilized(limit)
    first_stable = [_stable_from(img_s), _stable_from(img_t)]
    expected = closed_forms(fs, j, k, variant, pp, limit)
    res = {
        "j": j,
        "k": k,
        "variant": variant,
        "p": pp,
        "swapped": swapped,
        "images": (str(img_s[-1]), str(img_t[-1])),
        "stable_from": first_stable,
        "closed_forms": (str(expected[0]), str(expected[1])),
        "matches_closed_forms": img_s[-1] == expected[0] and img_t[-1] == expected[1],
        "separated": img_s[-1] != img_t[-1],
    }
    return res


def _stable_from(imgs):
    i = len(imgs) - 1
    while i > 0 and imgs[i - 1] == imgs[-1]:
        i -= 1
    return i + 1


def closed_forms(fs, j, k, variant, p=None, term=None) -> tuple:
    """Limit images predicted for ``s`` (smaller at ``j``) and for ``t``.

    Only the prefix of ``s`` up to ``j`` enters; ``t`` agrees with it before
    ``j`` and is at least ``s_j + 1`` from ``j`` on.
    """
    if variant == SK:
        pre = "".join(("a" if i % 2 else "b") * fs(i) for i in range(1, j))
        if j % 2 == 0:
            ws = pre + "b" * fs(j) + "a" * k + "b" * k
            wt = pre + "b" * k
        else:
            ws = pre + "a" * fs(j) + "b" * k
            wt = pre + "a" * k + "b" * k
        return normalize(ws, k), normalize(wt, k)
    pre = "".join("a" + "b" * (p * fs(i)) for i in range(1, j))
    # number of (a b^k) blocks after position j in the term w_i is p*i - j
    i = term
    m = p * i - j
    ell = 1 + (m - 1) % p
    ws = pre + "a" + "b" * (p * fs(j)) + ("a" + "b" * k) * ell
    wt = pre + ("a" + "b" * k) * (ell + 1)
    return normalize(ws, k, SKP, p), normalize(wt, k, SKP, p)


# ---------------------------------------------------------------------------
# word invariants


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    __str__ = __repr__


INF = _Infinity()


@dataclass(frozen=True)
class WordInvariants:
    flat: dict
    sharp: dict
    minfactors: dict


def minimal_subwords(words) -> frozenset:
    """Minimal elements of a finite set under the scattered-subword order."""
    from .words import is_subword

    ws = sorted(set(words), key=len)
    out = []
    for w in ws:
        if not any(is_subword(m, w) for m in out):
            out.append(w)
    return frozenset(out)


def bridging_factors(u: str, x: str, y: str) -> set:
    """All ``w`` avoiding ``x`` and ``y`` with ``x w y`` a factor of ``u``."""
    out = set()
    for i, c in enumerate(u):
        if c != x:
            continue
        for j in range(i + 1, len(u)):
            if u[j] == y:
                out.add(u[i + 1:j])
                break
            if u[j] == x:
                break
    return out


def invariants(u: str, alphabet: str | None = None) -> WordInvariants:
    if not u:
        raise ValueError("nonempty word expected")
    alphabet = alphabet or "".join(sorted(set(u)))
    flat, sharp, mins = {}, {}, {}
    for x in alphabet:
        first = u.find(x)
        last = u.rfind(x)
        for y in alphabet:
            if x != y:
                if first < 0:
                    flat[x, y] = sharp[x, y] = INF
                else:
                    flat[x, y] = u[:first].count(y)
                    sharp[x, y] = u[last + 1:].count(y)
            mins[x, y] = minimal_subwords(bridging_factors(u, x, y))
    return WordInvariants(flat, sharp, mins)


def contains_cubes(u: str, alphabet: str) -> bool:
    return all(u.count(x) >= 3 for x in alphabet)


def agree(u: str, v: str, alphabet: str | None = None) -> bool:
    """Hypotheses (cubes as subwords, equal first/last-occurrence counts, equal minimal bridges)."""
    alphabet = alphabet or "".join(sorted(set(u) | set(v)))
    if not (contains_cubes(u, alphabet) and contains_cubes(v, alphabet)):
        return False
    iu, iv = invariants(u, alphabet), invariants(v, alphabet)
    return iu == iv


def evaluate_word(S: FiniteSemigroup, word: str, images: np.ndarray, letters: str) -> np.ndarray:
    """Evaluate ``word`` under many letter assignments at once.

    ``images[r, i]`` is the image of ``letters[i]`` in assignment ``r``.
    """
    col = {c: i for i, c in enumerate(letters)}
    acc = images[:, col[word[0]]].copy()
    for c in word[1:]:
        acc = S.table[acc, images[:, col[c]]]
    return acc


def evidence_check(u: str, v: str, k_max: int = 5, alphabet: str | None = None) -> dict:
    """Finite evidence only: compare ``u`` and ``v`` in ``T_k`` for ``k = 2..k_max``.

    Every assignment of the letters to elements of ``T_k`` is tried.
    """
    alphabet = alphabet or "".join(sorted(set(u) | set(v)))
    report = {"agree": agree(u, v, alphabet), "kind": "finite evidence", "per_k": {}}
    if not report["agree"]:
        return report
    for k in range(2, k_max + 1):
        T = build(k, SK, "T")
        n = len(T)
        combos = np.array(list(_product(range(n), repeat=len(alphabet))), dtype=np.int64)
        eu = evaluate_word(T, u, combos, alphabet)
        ev = evaluate_word(T, v, combos, alphabet)
        bad = np.flatnonzero(eu != ev)
        report["per_k"][k] = {
            "size": n,
            "coincide": len(bad) == 0,
            "witness": None if not len(bad) else [T.names[x] for x in combos[bad[0]]],
        }
    report["coincide"] = all(r["coincide"] for r in report["per_k"].values())
    return report
