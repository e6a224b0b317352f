"""Omega-terms, laws, and exhaustive law checking on finite semigroups."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as _product
from math import prod

import numpy as np

from .semigroup import FiniteSemigroup


class TermError(ValueError):
    pass


class UnboundVariable(TermError):
    pass


class NoIdentity(TermError):
    pass


class NoZero(TermError):
    pass


class OrderMissing(TermError):
    pass


class BudgetExceeded(TermError):
    pass


class LawSyntaxError(TermError):
    def __init__(self, msg, position):
        super().__init__(f"{msg} at position {position}")
        self.position = position


# ---------------------------------------------------------------------------
# terms


class Term:
    def __mul__(self, other):
        return concat(self, other)

    def omega(self):
        return Omega(self)

    def __pow__(self, n):
        if n < 1:
            raise TermError("powers must be positive")
        return concat(*([self] * n))


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Concat(Term):
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise TermError("Concat needs at least two factors")

    def __str__(self):
        # runs of a repeated variable print as integer powers
        out, i = [], 0
        while i < len(self.parts):
            j = i
            while j < len(self.parts) and self.parts[j] == self.parts[i]:
                j += 1
            p = self.parts[i]
            if j - i > 1 and isinstance(p, Var):
                out.append(f"{p}^{j - i}")
            else:
                out.extend(_atom(q) for q in self.parts[i:j])
            i = j
        return " ".join(out)


@dataclass(frozen=True)
class Omega(Term):
    body: Term

    def __str__(self):
        return f"{_atom(self.body)}^w"


@dataclass(frozen=True)
class _One(Term):
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class _Zero(Term):
    def __str__(self):
        return "0"


One = _One()
Zero = _Zero()


def _atom(t):
    return f"({t})" if isinstance(t, Concat) else str(t)


def concat(*terms) -> Term:
    flat = []
    for t in terms:
        if isinstance(t, Concat):
            flat.extend(t.parts)
        else:
            flat.append(t)
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


def variables(t: Term) -> list:
    out = {}

    def walk(u):
        if isinstance(u, Var):
            out.setdefault(u.name)
        elif isinstance(u, Concat):
            for p in u.parts:
                walk(p)
        elif isinstance(u, Omega):
            walk(u.body)

    walk(t)
    return list(out)


def omega_only_variables(t: Term) -> set:
    """Variables whose every occurrence is exactly ``Omega(Var(v))``."""
    bare, wrapped = set(), set()

    def walk(u):
        if isinstance(u, Var):
            bare.add(u.name)
        elif isinstance(u, Concat):
            for p in u.parts:
                walk(p)
        elif isinstance(u, Omega):
            if isinstance(u.body, Var):
                wrapped.add(u.body.name)
            else:
                walk(u.body)

    walk(t)
    return wrapped - bare


def substitute(t: Term, mapping: dict) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Concat):
        return concat(*(substitute(p, mapping) for p in t.parts))
    if isinstance(t, Omega):
        return Omega(substitute(t.body, mapping))
    return t


def evaluate(t: Term, assignment: dict, S: FiniteSemigroup):
    """Evaluate a term; assignment values may be ints or equal-shape int arrays."""
    if isinstance(t, Var):
        try:
            return assignment[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Concat):
        acc = evaluate(t.parts[0], assignment, S)
        for p in t.parts[1:]:
            acc = S.table[acc, evaluate(p, assignment, S)]
        return acc
    if isinstance(t, Omega):
        return S.omega[evaluate(t.body, assignment, S)]
    if t is One or isinstance(t, _One):
        if S.identity is None:
            raise NoIdentity("term uses 1 but the semigroup has no identity")
        return S.identity
    if isinstance(t, _Zero):
        if S.zero is None:
            raise NoZero("term uses 0 but the semigroup has no zero")
        return S.zero
    raise TermError(f"not a term: {t!r}")


def eval_term(t: Term, assignment: dict, S: FiniteSemigroup) -> int:
    return int(evaluate(t, assignment, S))


# ---------------------------------------------------------------------------
# laws


@dataclass(frozen=True)
class Law:
    lhs: Term
    rhs: Term
    kind: str = "="  # "=" or "<="
    name: str | None = None

    @property
    def variables(self) -> list:
        return list(dict.fromkeys(variables(self.lhs) + variables(self.rhs)))

    def __str__(self):
        return f"{self.lhs} {self.kind} {self.rhs}"

    def same_as(self, other: "Law") -> bool:
        return (self.lhs, self.rhs, self.kind) == (other.lhs, other.rhs, other.kind)


@dataclass
class LawResult:
    holds: bool
    witness: dict | None = None
    checked: int = 0

    def __bool__(self):
        return self.holds


def _restrictable(law):
    # a variable may range over E(S) iff it never occurs bare on either side
    cand = set(law.variables)
    for side in (law.lhs, law.rhs):
        bare = set(variables(side)) - omega_only_variables(side)
        cand -= bare
    return cand


def check_law(S: FiniteSemigroup, law: Law, strategy: str = "exhaustive",
              budget: int = 10 ** 9, chunk: int = 1 << 20) -> LawResult:
    """Exhaustively check a law; the witness is the lexicographically least violation.

    ``strategy='restricted'`` lets variables that occur only as ``v^w`` range
    over the idempotents instead of all of ``S``.
    """
    if law.kind not in ("=", "<="):
        raise TermError(f"unknown law kind {law.kind!r}")
    if law.kind == "<=" and S.order is None:
        raise OrderMissing("inequality on an unordered semigroup")
    if strategy == "restricted":
        restricted = _restrictable(law)
    elif strategy == "exhaustive":
        restricted = set()
    else:
        raise TermError(f"unknown strategy {strategy!r}")
    names = law.variables
    E = np.array(S.idempotents, dtype=np.int64)
    full = np.arange(len(S), dtype=np.int64)
    doms = [E if v in restricted else full for v in names]
    total = prod(len(d) for d in doms)
    if total > budget:
        raise BudgetExceeded(f"{total} assignments exceed budget {budget}")
    if not names:
        lhs, rhs = evaluate(law.lhs, {}, S), evaluate(law.rhs, {}, S)
        ok = lhs == rhs if law.kind == "=" else S.leq[lhs, rhs]
        return LawResult(bool(ok), None if ok else {}, 1)
    # split variables into an outer (looped) prefix and a vectorized suffix
    split = len(names)
    inner = 1
    while split > 0 and inner * len(doms[split - 1]) <= chunk:
        split -= 1
        inner *= len(doms[split])
    inner_doms = doms[split:]
    grids = np.meshgrid(*inner_doms, indexing="ij") if inner_doms else []
    inner_cols = [g.reshape(-1) for g in grids]
    checked = 0
    for outer in _product(*(d.tolist() for d in doms[:split])):
        assignment = dict(zip(names[:split], outer))
        assignment.update(zip(names[split:], inner_cols))
        lhs = evaluate(law.lhs, assignment, S)
        rhs = evaluate(law.rhs, assignment, S)
        size = max(len(c) for c in inner_cols) if inner_cols else 1
        lhs = np.broadcast_to(lhs, (size,))
        rhs = np.broadcast_to(rhs, (size,))
        ok = lhs == rhs if law.kind == "=" else S.leq[lhs, rhs]
        checked += size
        if not ok.all():
            i = int(np.flatnonzero(~ok)[0])
            w = dict(zip(names[:split], (int(x) for x in outer)))
            w.update((n, int(c[i])) for n, c in zip(names[split:], inner_cols))
            return LawResult(False, w, checked)
    return LawResult(True, None, checked)


def check_elementwise(S: FiniteSemigroup, law: Law) -> LawResult:
    """One-variable laws checked element by element (no vectorization)."""
    if len(law.variables) != 1:
        raise TermError("element-wise check needs a one-variable law")
    (v,) = law.variables
    for s in range(len(S)):
        a = eval_term(law.lhs, {v: s}, S)
        b = eval_term(law.rhs, {v: s}, S)
        ok = a == b if law.kind == "=" else bool(S.leq[a, b])
        if not ok:
            return LawResult(False, {v: s}, s + 1)
    return LawResult(True, None, len(S))


def witness_names(S: FiniteSemigroup, witness: dict | None) -> dict | None:
    if witness is None:
        return None
    return {k: S.names[v] for k, v in witness.items()}


# ---------------------------------------------------------------------------
# Knast's identity


def knast_check(S: FiniteSemigroup) -> LawResult:
    """``(exfye)^w x f t (ezfte)^w = (exfye)^w (ezfte)^w`` for e, f in E(S).

    For fixed ``e, f, x`` the left factor ranges over the set of values
    ``(exfye)^w`` as ``y`` varies, and for fixed ``t`` the right factor over
    ``(ezfte)^w`` as ``z`` varies; each pair of such values is checked once.
    """
    T = S.table
    om = S.omega
    n = len(S)
    allx = np.arange(n)
    checked = 0
    for e in S.idempotents:
        for f in S.idempotents:
            # alpha[x, y] = (e x f y e)^w ; beta[z, t] = (e z f t e)^w
            ex = T[e, allx]
            exf = T[ex, f]
            core = T[exf[:, None], allx[None, :]]
            alpha = om[T[core, e]]
            beta = alpha  # same formula with (z, t) in place of (x, y)
            # mask[t, b]: b occurs as beta[z, t] for some z
            mask = np.zeros((n, n), dtype=bool)
            mask[np.repeat(allx, n), beta.T.reshape(-1)] = True
            ts, bs = np.nonzero(mask)
            for x in range(n):
                avals = np.unique(alpha[x])
                mid = T[T[x, f], ts]  # x f t for each (t, b) pair
                lhs = T[T[avals[:, None], mid[None, :]], bs[None, :]]
                rhs = T[avals[:, None], bs[None, :]]
                checked += lhs.size
                bad = np.argwhere(lhs != rhs)
                if len(bad):
                    ai, pi = bad[0]
                    a, t, b = int(avals[ai]), int(ts[pi]), int(bs[pi])
                    y = int(np.flatnonzero(alpha[x] == a)[0])
                    z = int(np.flatnonzero(beta[:, t] == b)[0])
                    return LawResult(False, {"e": e, "f": f, "x": x, "y": y, "z": z, "t": t}, checked)
    return LawResult(True, None, checked)


# ---------------------------------------------------------------------------
# parsing


_TOKEN = re.compile(r"\s*(?:(<=)|(=)|(\()|(\))|(\*)|\^(w|\d+)|([A-Za-z][0-9]*)|([01]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise LawSyntaxError(f"unexpected {text[pos:].strip()[:1]!r}", pos)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        kinds = ("le", "eq", "lp", "rp", "star", "pow", "var", "const")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                out.append((kind, val, start))
                break
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.n = len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.n)

    def take(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            raise LawSyntaxError(f"expected {kind}, got {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def product(self):
        parts = [self.factor()]
        while self.peek()[0] in ("lp", "var", "const", "star"):
            if self.peek()[0] == "star":
                self.i += 1
            parts.append(self.factor())
        return concat(*parts)

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "lp":
            self.i += 1
            t = self.product()
            self.take("rp")
        elif kind == "var":
            self.i += 1
            t = Var(val)
        elif kind == "const":
            self.i += 1
            t = One if val == "1" else Zero
        else:
            raise LawSyntaxError(f"unexpected {val!r}", pos)
        while self.peek()[0] == "pow":
            _, val, pos = self.take("pow")
            if val == "w":
                t = Omega(t)
            else:
                if int(val) < 1:
                    raise LawSyntaxError("exponent must be positive", pos)
                t = concat(*([t] * int(val)))
        return t


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.product()
    if p.i != len(p.toks):
        raise LawSyntaxError("trailing input", p.peek()[2])
    return t


def parse_law(text: str, name: str | None = None) -> Law:
    p = _Parser(text)
    lhs = p.product()
    kind, val, pos = p.peek()
    if kind not in ("eq", "le"):
        raise LawSyntaxError("expected '=' or '<='", pos)
    p.i += 1
    rhs = p.product()
    if p.i != len(p.toks):
        raise LawSyntaxError("trailing input", p.peek()[2])
    return Law(lhs, rhs, "=" if kind == "eq" else "<=", name)


def read_laws(text: str) -> list:
    """One law per line; ``#`` starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_law(line))
    return out


# ---------------------------------------------------------------------------
# catalog


def _x(n, name="x"):
    return Var(name) ** n


def knast() -> Law:
    e, f = Omega(Var("u")), Omega(Var("v"))
    x, y, z, t = (Var(c) for c in "xyzt")
    left = Omega(concat(e, x, f, y, e))
    right = Omega(concat(e, z, f, t, e))
    return Law(concat(left, x, f, t, right), concat(left, right), "=", "knast")


def catalog(name: str | None = None, *, k: int = 2, p: int = 2, n: int = 3):
    """Named laws; without a name, a dict of all entries at the given parameters."""
    x, y = Var("x"), Var("y")
    m = max(k, 3)
    entries = {
        "knast": knast,
        "x4=x3": lambda: Law(_x(4), _x(3), "=", "x4=x3"),
        "omega+p": lambda: Law(concat(Omega(x), _x(p)), Omega(x), "=", f"x^(w+{p})=x^w"),
        "max-k3": lambda: Law(_x(m + p), _x(m), "=", f"x^{m + p}=x^{m}"),
        "bg-conj": lambda: Law(Omega(concat(x, _x(n, "y"))), Omega(concat(_x(n, "y"), x)), "=",
                               f"(xy^{n})^w=(y^{n}x)^w"),
        "bg-period": lambda: Law(concat(Omega(x), _x(n)), Omega(x), "=", f"x^(w+{n})=x^w"),
        "1<=xn": lambda: Law(One, _x(n), "<=", f"1<=x^{n}"),
        "idempotent": lambda: Law(_x(2), x, "=", "x^2=x"),
        "commutative": lambda: Law(concat(x, y), concat(y, x), "=", "xy=yx"),
        "nilpotent": lambda: Law(Omega(x), Zero, "=", "x^w=0"),
        "nilpotent-n": lambda: Law(concat(*(Var(f"x{i}") for i in range(1, n + 1))), Zero, "=",
                                   f"x1...x{n}=0"),
        "K": lambda: Law(concat(Omega(x), y), Omega(x), "=", "x^w y=x^w"),
        "IE": lambda: Law(Omega(x), Omega(y), "=", "x^w=y^w"),
        "G": lambda: Law(Omega(x), One, "=", "x^w=1"),
    }
    if name is None:
        return {key: make() for key, make in entries.items()}
    if name not in entries:
        raise KeyError(f"unknown law {name!r}; known: {', '.join(entries)}")
    return entries[name]()


SEMILATTICE = ("idempotent", "commutative")


def resolve_law(spec: str, **params) -> Law:
    """A catalog name or a law expression."""
    try:
        return catalog(spec, **params)
    except KeyError:
        return parse_law(spec)
