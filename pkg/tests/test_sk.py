import random

import pytest

from finsemi import omega as om
from finsemi import semigroup as sg
from finsemi import sk
from finsemi.green import d_equals_j, green
from finsemi.sk import SK, SKP

CASES = [(1, SK, None), (2, SK, None), (3, SK, None), (2, SKP, 2), (3, SKP, 2), (2, SKP, 3), (3, SKP, 3)]


def test_normalize_examples():
    for k in (1, 2, 3):
        assert sk.normalize("a" * (k + 1), k).word == "a" * k
    assert sk.normalize("aba", 2).is_zero
    assert sk.normalize("aabbaabbaa", 2).word == "aa"
    assert sk.normalize("aa", 3, SKP, 2).is_zero


def test_canonical_word_printing():
    assert str(sk.normalize("aabba", 2)) == "a^2 b^2 a^1"
    assert str(sk.normalize("bbabb", 2, SKP, 2)) == "b^2 a b^2"
    assert str(sk.normalize("aba", 2)) == "0"


def test_params():
    with pytest.raises(ValueError):
        sk.normalize("ab", 2, SKP, 4)
    with pytest.raises(ValueError):
        sk.normalize("ab", 0)


@pytest.mark.parametrize("k,variant,p", CASES)
def test_enumeration_matches_closure_and_constraints(k, variant, p):
    S = sk.build(k, variant, p=p)
    sg.validate(S)
    words = sk.enumerate_canonical(k, variant, p)
    assert len(S) == len(words) + 1
    assert all(sk.is_canonical(w) for w in words)
    # a semigroup with zero: a, b and 0 generate everything
    a, b = S.index(str(sk.normalize("a", k, variant, p))), S.index(str(sk.normalize("b", k, variant, p)))
    assert len(sg.generated_by(S, [a, b, S.zero])) == len(S)


@pytest.mark.parametrize("k,variant,p", CASES)
def test_confluence_random_orders(k, variant, p, rng):
    for _ in range(150):
        w = "".join(rng.choice("ab") for _ in range(rng.randint(1, 40)))
        assert sk.rewrite_randomly(w, k, variant, p, rng) == sk.normalize(w, k, variant, p).word


def test_sizes():
    sizes = {(k, v, p): len(sk.build(k, v, p=p)) for k, v, p in CASES}
    tsizes = {(k, v, p): len(sk.build(k, v, "T", p=p)) for k, v, p in CASES}
    assert sizes[(1, SK, None)] == 5 and tsizes[(1, SK, None)] == 3
    assert sizes[(2, SK, None)] == 21 and tsizes[(2, SK, None)] == 11


def test_T_subsemigroups():
    S = sk.build(2, SK)
    T = sk.build(2, SK, "T")
    sg.validate(T)
    for name in T.names:
        assert name == "0" or name.startswith("a")
    Tp = sk.build(2, SKP, "T", p=2)
    for name in Tp.names:
        assert name == "0" or name.count("a") % 2 == 0


def test_zero_absorbing():
    for k, v, p in CASES:
        S = sk.build(k, v, p=p)
        z = S.zero
        assert z is not None and S.names[z] == "0"


def test_aperiodic_and_knast():
    for k in (1, 2, 3):
        S = sk.build(k, SK)
        assert sg.is_aperiodic(S)
        assert om.knast_check(S).holds


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("p", [2, 3])
def test_skp_power_identity(k, p):
    S = sk.build(k, SKP, p=p)
    m = max(k, 3)
    assert om.check_law(S, om.catalog("max-k3", k=k, p=p)).holds
    # and not with a smaller period
    if p > 1:
        assert not om.check_law(S, om.parse_law(f"x^{m + 1} = x^{m}")).holds


@pytest.mark.parametrize("k,p", [(2, 2), (3, 2), (2, 3)])
def test_skp_power_shape(k, p):
    for cw in sk.enumerate_canonical(k, SKP, p):
        betas = cw.betas
        ell = len(betas) - 1
        if ell == 0 or sk.normalize(cw.word * 3, k, SKP, p).is_zero:
            continue
        for m in (3, 4, 5):
            expect = "b" * betas[0] + ("a" + "b" * k) * (m * ell - 1) + "a" + "b" * betas[-1]
            assert sk.normalize(cw.word * m, k, SKP, p) == sk.normalize(expect, k, SKP, p)


def test_skp_extra_constraint_is_not_needed():
    # b^2 a b is reducible by no rule, yet has beta_0 = 2 >= beta_1 = 1
    w = sk.normalize("bbab", 2, SKP, 2)
    assert w.word == "bbab"
    assert all(sk.normalize(w.word, 2, SKP, 2).word == sk.rewrite_randomly(w.word, 2, SKP, 2, random.Random(i))
               for i in range(20))


def test_malcev_witness():
    assert sk.malcev_witness_check(2, SK)["passed"]
    assert sk.malcev_witness_check(2, SKP, 2)["passed"]
    with pytest.raises(sk.WitnessFailed):
        sk.malcev_witness_check(2, SK, generators=[("a", "b"), ("b", "b")])


def test_projection_is_homomorphism():
    R = sk.build_R(2, SK)
    S = sk.build(2, SK)
    assert sg.hom_check(R, S, R.meta["proj1"])


def test_separating_sequence():
    assert sk.separating_sequence((1, 2, 3, 4), SK, 2) == ["abb", "abbaaabbbb"]
    assert sk.separating_sequence((1, 2), SKP, 1, p=2) == ["abbabbbb"]
    assert sk.separating_sequence((1, 2, 3), SK, 0) == []


def test_separation():
    r = sk.separation_check((1, 2, 3, 4, 5), (1, 2, 4, 5, 6))
    assert r["separated"] and r["k"] == 4 and r["matches_closed_forms"]
    assert r["images"] == ("a^1 b^2 a^3 b^4", "a^1 b^2 a^4 b^4")
    with pytest.raises(ValueError):
        sk.separation_check((1, 2, 3), (1, 2, 3))
    r = sk.separation_check((1, 2, 3), (2, 3, 4), SKP, 2)
    assert r["j"] == 1 and r["separated"] and r["matches_closed_forms"]


def test_separation_random_pairs(rng):
    for _ in range(15):
        s = sorted(rng.sample(range(1, 9), 5))
        t = sorted(rng.sample(range(1, 9), 5))
        if s == t:
            continue
        r = sk.separation_check(s, t)
        assert r["separated"] and r["matches_closed_forms"]


def test_invariants_examples():
    inv = sk.invariants("baab")
    assert inv.flat["a", "b"] == 1
    assert sk.invariants("abba").minfactors["a", "a"] == frozenset({"bb"})
    assert sk.invariants("aab").minfactors["a", "b"] == frozenset({""})
    assert sk.invariants("aaa", "ab").flat["b", "a"] is sk.INF


def test_minfactors_antichains_and_agree(rng):
    from finsemi.words import is_subword
    for _ in range(50):
        u = "".join(rng.choice("abc") for _ in range(rng.randint(1, 25)))
        inv = sk.invariants(u, "abc")
        for S in inv.minfactors.values():
            for x in S:
                for y in S:
                    assert x == y or not is_subword(x, y)
        assert sk.agree(u, u, "abc") == sk.contains_cubes(u, "abc")


def test_evidence_check():
    u = "aaabbbab" * 2
    rep = sk.evidence_check(u, u, k_max=3)
    assert rep["agree"] and rep["coincide"] and rep["kind"] == "finite evidence"
    rep = sk.evidence_check("aaabbb", "bbbaaa", k_max=3)
    assert not rep["agree"]


def test_builders_d_equals_j():
    for k, v, p in CASES:
        assert d_equals_j(green(sk.build(k, v, p=p)))
