"""Acceptance suite: fourteen criteria, one pass/fail line each.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
Every criterion is checked by the library routine and, where one exists, by
an independent second route.
"""

from __future__ import annotations

import itertools
import random
import sys
import time

import pytest

from finsemi import forest as fo
from finsemi import graphs as gr
from finsemi import omega as om
from finsemi import semigroup as sg
from finsemi import sk
from finsemi import synthesis as sy
from finsemi.green import d_equals_j, green
from finsemi.words import THUE_MORSE, has_overlap, missing_factors, mu

SEED = 20240601

# tables built while checking criteria 1-13 are collected here for criterion 14
BUILT: dict = {}
TOWER: list = []


def _keep(name, S):
    BUILT[name] = S
    return S


# ---------------------------------------------------------------------------
# criteria; each returns (ok, detail)


def crit_1():
    T1, maps = gr.transition_monoid(gr.gamma(1))
    _keep("T(Gamma_1)", T1)
    bd = T1.meta["breakdown"]
    aperiodic = sg.is_aperiodic(T1)
    inverse = sg.is_inverse(T1)
    # second route: partial bijections closed under inversion, and x^4 = x^3 on the maps
    inv_closed = all(m.is_injective for m in maps) and all(
        gr.PartialMap.from_pairs([(y, x) for x, y in m.graph], len(m)) in set(maps) for m in maps)
    power_ok = all(m.then(m).then(m).then(m) == m.then(m).then(m) for m in maps)
    ok = len(T1) == 15 and aperiodic and inverse and inv_closed and power_ok
    return ok, (f"|T1|={len(T1)} (identity={bd['identity']}, empty map={bd['empty_map']}, "
                f"others={bd['other']}), aperiodic={aperiodic}, inverse={inverse}")


def crit_2():
    tower = gr.build_Mn(2)
    law = om.catalog("x4=x3")
    sizes, ok = [], True
    for n, M in enumerate(tower.monoids):
        _keep(f"M_{n}", M)
        sizes.append(len(M))
        ok &= om.check_elementwise(M, law).holds
        # second route: raw partial-map powers
        ok &= all(m.then(m).then(m).then(m) == m.then(m).then(m) for m in M.meta["maps"])
    return ok, f"|M_n|={sizes} for n=0..2"


def crit_3():
    tower = TOWER[0] if TOWER else gr.build_Mn(2)
    ok = True
    for M in tower.monoids:
        ok &= gr.power_partial_identity_check(M, 3)["holds"]
        ok &= om.check_law(M, om.catalog("1<=xn", n=3)).holds
        # the criterion itself, directly on the maps
        ok &= all(m.then(m).then(m).is_partial_identity for m in M.meta["maps"])
    return ok, "1<=x^3 on M_0..M_2 by partial identities and by the order"


def crit_4():
    times, ok = [], True
    for k in (1, 2, 3):
        S = _keep(f"S_{k}", sk.build(k, sk.SK))
        t0 = time.perf_counter()
        ok &= om.knast_check(S).holds
        times.append(time.perf_counter() - t0)
        if k <= 2:
            ok &= om.check_law(S, om.knast(), "restricted").holds
    return ok and times[-1] < 300, f"S_1..S_3; k=3 took {times[-1]:.2f}s"


def crit_5():
    ok, sizes = True, []
    for k, p in itertools.product((2, 3), (2, 3)):
        S = _keep(f"S_{k}({p})", sk.build(k, sk.SKP, p=p))
        sizes.append(len(S))
        ok &= om.check_elementwise(S, om.catalog("max-k3", k=k, p=p)).holds
        # second route: rewriting of the word powers
        m = max(k, 3)
        for w in sk.enumerate_canonical(k, sk.SKP, p):
            if w.word is not None:
                ok &= sk.normalize(w.word * (m + p), k, sk.SKP, p) == sk.normalize(w.word * m, k, sk.SKP, p)
    return ok, f"(k,p) in {{2,3}}x{{2,3}}, sizes {sizes}"


def crit_6():
    ok = True
    tower = gr.build_Mn(2)
    TOWER.append(tower)
    for n in range(5):
        g = gr.gamma(n)
        want = gr.PartialMap.from_pairs([(g.base, g.base)], g.num_vertices)
        for c in "ab":
            ok &= gr.act(g, mu(c, n + 1)) == want
    # second route: products in the transition monoid tables agree for both words
    for n in range(3):
        M = tower.monoids[n]
        ea = M.product_of([M.generators["ab".index(c)] for c in mu("a", n + 1)])
        eb = M.product_of([M.generators["ab".index(c)] for c in mu("b", n + 1)])
        ok &= ea == eb
    return ok, "mu^(n+1)(a), mu^(n+1)(b) act as the identity at 0_n only, n=0..4"


def crit_7():
    t0 = time.perf_counter()
    counts, ok = [], True
    for d in range(5):
        r = gr.tree_witness(0, d)
        ok &= r["ok"] and r["final_count"] >= 2 ** d
        # second route: compare the actions of the final words directly on Gamma_0..Gamma_d
        actions = {tuple(gr.act(gr.gamma(i), w) for i in range(d + 1)) for w in r["words"]}
        ok &= len(actions) >= 2 ** d
        counts.append(len(actions))
    el = time.perf_counter() - t0
    return ok and el < 300, f"distinct counts {counts} for d=0..4 in {el:.2f}s"


def crit_8():
    counts = [gr.lambda_graph(n).num_vertices for n in range(1, 6)]
    folded = all(gr.lambda_graph(n).deterministic and gr.lambda_graph(n).codeterministic
                 for n in range(1, 6))
    return counts == [2, 4, 8, 16, 32] and folded, f"vertex counts {counts}"


def crit_9():
    rng = random.Random(SEED)
    t0 = time.perf_counter()
    bad, worst = 0, 0.0
    for _ in range(500):
        S = sg.random_semigroup(rng, 8, degree=rng.choice([2, 3, 4]), ngens=rng.choice([1, 2, 3]))
        letters = "abcd"[: rng.randint(1, 4)]
        img = {c: rng.randrange(len(S)) for c in letters}
        w = "".join(rng.choice(letters) for _ in range(rng.randint(1, 200)))
        f = fo.build_forest(img, S, w)
        ok, _ = fo.verify_ramseyan(f, img, S)
        bad += (not ok) or f.height > 9 * len(S)
        worst = max(worst, f.height / len(S))
    el = time.perf_counter() - t0
    return bad == 0 and el < 120, f"{bad} violations, max height/|S| = {worst:.2f}, {el:.1f}s"


def _overlap_brute(w):
    # an overlap is a factor of length 2p+1 with period p
    n = len(w)
    return any(all(w[i + q] == w[i + q + p] for q in range(p + 1))
               for p in range(1, n // 2 + 1) for i in range(n - 2 * p))


def crit_10():
    words = [THUE_MORSE.iterate("a", n) for n in range(11)]
    lengths = all(len(w) == 2 ** n for n, w in enumerate(words))
    free = all(not has_overlap(w) for w in words)
    brute = all(not _overlap_brute(w) for w in words[:8])
    missing = missing_factors(words[10], "ab", 3)
    brute_missing = {"".join(t) for L in (1, 2, 3) for t in itertools.product("ab", repeat=L)} - {
        words[10][i:i + L] for L in (1, 2, 3) for i in range(len(words[10]) - L + 1)}
    ok = lengths and free and brute and missing == {"aaa", "bbb"} == brute_missing
    return ok, f"overlap-free n<=10, missing factors {sorted(missing)}"


def crit_11():
    s, t = (1, 2, 3, 4, 5), (1, 2, 4, 5, 6)
    r = sk.separation_check(s, t)
    ok = r["k"] == 4 and r["separated"] and r["matches_closed_forms"]
    # second route: evaluate late sequence terms by the multiplication table of S_4
    S4 = _keep("S_4", sk.build(4, sk.SK))
    gen = {c: S4.index(str(sk.normalize(c, 4))) for c in "ab"}
    imgs = []
    for seq in (s, t):
        w = sk.separating_sequence(sk.as_sequence(seq), sk.SK, 30)[-1]
        imgs.append(S4.names[S4.product_of([gen[c] for c in w])])
    ok &= tuple(imgs) == tuple(r["images"])
    return ok, f"k={r['k']}, images {r['images'][0]} vs {r['images'][1]}"


def crit_12():
    ok, sizes = True, []
    for variant, p in ((sk.SK, None), (sk.SKP, 2)):
        r = sk.malcev_witness_check(2, variant, p)
        ok &= r["passed"]
        sizes.append((r["size_R"], r["size_S"], r["size_T"]))
        _keep(f"R_2[{variant},{p}]", sk.build_R(2, variant, p))
    return ok, f"(|R|,|S|,|T|) = {sizes}"


def crit_13():
    C2 = sg.cyclic_group(2)
    f = [i % 2 for i in range(4)]
    r = sy.sl_witness(3, C2, f)
    U = _keep("U(M_3,C_2,f)", sy.synthesis_U(sy.capped_addition(3), C2, f))
    ok = r["passed"] and r["J_classes_of_K"] == 1 and all(r["subgroups_isomorphic_to_G"])
    ok &= len(U) == r["size_U"]
    return ok, f"|U|={r['size_U']}, K one J-class, {r['maximal_subgroups']} maximal subgroups = C_2"


def _random_term(rng, vars_, depth=3):
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        return om.Var(rng.choice(vars_))
    if roll < 0.5:
        return om.Omega(_random_term(rng, vars_, depth - 1))
    return om.concat(*(_random_term(rng, vars_, depth - 1) for _ in range(rng.randint(2, 3))))


def _random_restriction(rng):
    """A random transformation semigroup and its restriction to an invariant subset."""
    while True:
        d = rng.randint(3, 5)
        maps = [tuple(rng.randrange(d) for _ in range(d)) for _ in range(rng.randint(1, 3))]
        S = sg.transformation_semigroup(maps)
        if len(S) > 200:
            continue
        orbit = {rng.randrange(d)}
        while True:
            nxt = orbit | {m[x] for m in maps for x in orbit}
            if nxt == orbit:
                break
            orbit = nxt
        pts = sorted(orbit)
        pos = {x: i for i, x in enumerate(pts)}
        T = sg.transformation_semigroup([tuple(pos[m[x]] for x in pts) for m in maps])
        index = {v: i for i, v in enumerate(T.meta["maps"])}
        h = [index[tuple(pos[v[x]] for x in pts)] for v in S.meta["maps"]]
        return S, T, h


def crit_14():
    rng = random.Random(SEED)
    report = {}
    # associativity and D=J on every built table
    tables = dict(BUILT)
    for k in (1, 2, 3):
        tables.setdefault(f"S_{k}", sk.build(k, sk.SK))
        tables[f"T_{k}"] = sk.build(k, sk.SK, "T")
    tables.setdefault("M_2", gr.build_Mn(2).top)
    report["assoc"] = sum(sg.check_associative(S.table) is not None for S in tables.values())
    report["DJ"] = sum(not d_equals_j(green(S)) for S in tables.values())
    # confluence of rewriting under random orders
    bad = 0
    for i in range(100):
        variant, p = rng.choice(((sk.SK, None), (sk.SKP, 2), (sk.SKP, 3)))
        k = rng.choice((1, 2, 3) if variant == sk.SK else (2, 3))
        w = "".join(rng.choice("ab") for _ in range(rng.randint(1, 25)))
        want = sk.normalize(w, k, variant, p).word
        bad += sk.rewrite_randomly(w, k, variant, p, random.Random(i)) != want
    report["confluence"] = bad
    # multiplicativity on all canonical pairs, against the rewriting oracle
    bad = 0
    for k in (1, 2, 3):
        elems = [w for w in sk.enumerate_canonical(k) if w.word is not None]
        for u, v in itertools.product(elems, elems):
            prod = sk.multiply(u, v)
            bad += prod.word != sk.rewrite_randomly(u.word + v.word, k, rng=rng)
            bad += prod != sk.normalize(u.word + v.word, k)
    report["multiplicativity"] = bad
    # evaluation commutes with homomorphisms
    bad = 0
    for _ in range(100):
        S, T, h = _random_restriction(rng)
        if sg.hom_violation(S, T, h) is not None:
            bad += 1
            continue
        for _ in range(5):
            t = _random_term(rng, "xyz")
            asg = {v: rng.randrange(len(S)) for v in "xyz"}
            img = {v: h[a] for v, a in asg.items()}
            bad += h[om.eval_term(t, asg, S)] != om.eval_term(t, img, T)
    report["eval-hom"] = bad
    ok = all(v == 0 for v in report.values())
    return ok, f"counterexamples {report} over {len(tables)} tables"


CRITERIA = [
    (1, "T1 has 15 elements, aperiodic and inverse", crit_1, 1.0),
    (2, "x^4 = x^3 in M_0..M_2", crit_2, 60.0),
    (3, "1 <= x^3 in M_0..M_2", crit_3, None),
    (4, "Knast identity in S_1..S_3", crit_4, 300.0),
    (5, "x^(max(k,3)+p) = x^max(k,3) in S_k(p)", crit_5, None),
    (6, "PTM words act alike on Gamma_n", crit_6, None),
    (7, "binary tree witness", crit_7, 300.0),
    (8, "folded square-free flowers", crit_8, None),
    (9, "Ramseyan factorization forests", crit_9, 120.0),
    (10, "Prouhet-Thue-Morse facts", crit_10, None),
    (11, "separation in S_4", crit_11, None),
    (12, "Mal'cev witnesses", crit_12, None),
    (13, "synthesis semilattice witness", crit_13, None),
    (14, "property suites", crit_14, None),
]


def run_criterion(num, title, fn, limit):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as e:  # a crash is a failure of the criterion
        ok, detail = False, f"{type(e).__name__}: {e}"
    el = time.perf_counter() - t0
    if limit is not None and el >= limit:
        ok, detail = False, f"{detail}; took {el:.2f}s, limit {limit}s"
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} -- {detail} ({el:.2f}s)"
    return ok, line


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, limit, capsys):
    ok, line = run_criterion(num, title, fn, limit)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
