import json

import numpy as np
import pytest

from finsemi import semigroup as sg
from finsemi.green import green


def test_trivial_and_left_zero_validate():
    sg.validate(sg.FiniteSemigroup([[0]]))
    sg.validate(sg.left_zero(["a", "b"]))


def test_planted_nonassociative_table():
    table = [[1, 0], [0, 0]]
    with pytest.raises(sg.NonAssociative) as e:
        sg.validate(sg.FiniteSemigroup(table))
    a, b, c = e.value.witness
    T = np.array(table)
    assert T[T[a, b], c] != T[a, T[b, c]]


def test_generators_must_generate():
    with pytest.raises(sg.GeneratorsNotGenerating):
        sg.validate(sg.FiniteSemigroup(sg.cyclic_group(3).table, generators=[0]))


def test_unstable_order_rejected():
    # in C2, 1 <= g would force g <= g^2 = 1
    with pytest.raises(sg.OrderNotStable):
        sg.validate(sg.FiniteSemigroup(sg.cyclic_group(2).table, order=[(0, 1)]))


def test_closure_single_idempotent_seed():
    S, vals = sg.closure([0], lambda x, y: 0)
    assert len(S) == 1 and vals == [0]


def test_closure_cyclic_group_from_generators():
    S, vals = sg.closure([1, 1], lambda x, y: (x + y) % 2)
    assert len(S) == 2
    sg.validate(S)


def test_closure_budget():
    with pytest.raises(sg.ClosureBudgetExceeded):
        sg.closure([1], lambda x, y: (x + y) % 100, budget=10)


def test_omega_power():
    C3 = sg.cyclic_group(3)
    assert sg.omega_power(C3, 1) == C3.identity
    N = sg.monogenic(4, 1)
    for s in range(len(N)):
        e = sg.omega_power(N, s)
        assert N.mul(e, e) == e
    S = sg.left_zero(["a", "b"])
    assert sg.omega_power(S, 1) == 1


def test_omega_unique_idempotent_in_cyclic_subsemigroup(rng):
    for _ in range(30):
        S = sg.random_semigroup(rng, 12)
        for s in range(len(S)):
            powers = {s}
            x = s
            for _ in range(len(S)):
                x = S.mul(x, s)
                powers.add(x)
            idem = [p for p in powers if S.mul(p, p) == p]
            assert idem == [S.omega[s]]


def test_predicates_examples(T1):
    C2 = sg.cyclic_group(2)
    assert not sg.is_aperiodic(C2)
    assert sg.is_aperiodic(T1) and sg.is_inverse(T1)
    assert not sg.is_inverse(sg.left_zero(["a", "b"]))
    p = sg.predicates(sg.monogenic(3))
    assert p["is_nilpotent"] and p["has_zero"]


def test_aperiodic_iff_h_trivial(rng):
    for _ in range(40):
        S = sg.random_semigroup(rng, 20, degree=4)
        G = green(S)
        assert sg.is_aperiodic(S) == (G.H.count == len(S))


def test_rees_quotient():
    N = sg.monogenic(3)  # a, a^2, a^3 with a^4 = a^3
    Q, proj = sg.rees_quotient(N, [2])
    assert len(Q) == 3
    a, a2 = proj[0], proj[1]
    assert Q.mul(a, a2) == Q.zero
    z = Q.zero
    assert all(Q.mul(z, x) == z == Q.mul(x, z) for x in range(len(Q)))


def test_rees_quotient_requires_ideal():
    with pytest.raises(sg.NotIdeal):
        sg.rees_quotient(sg.monogenic(3), [0])


def test_rees_size_law(rng):
    for _ in range(20):
        S = sg.random_semigroup(rng, 15)
        G = green(S)
        # the principal ideal of any element is an ideal
        x = rng.randrange(len(S))
        from finsemi.green import ideal_members
        I = ideal_members(S, x)
        Q, _ = sg.rees_quotient(S, I)
        sg.validate(Q)
        assert len(Q) == len(S) - len(I) + 1


def test_product_and_subsemigroup():
    P = sg.product(sg.trivial(), sg.trivial())
    assert len(P) == 1
    S = sg.cyclic_group(4)
    sub, emb = sg.subsemigroup(S, [0, 2])
    assert len(sub) == 2
    with pytest.raises(sg.NotClosed):
        sg.subsemigroup(S, [1])


def test_hom_check_and_violation():
    C4, C2 = sg.cyclic_group(4), sg.cyclic_group(2)
    assert sg.hom_check(C4, C2, [0, 1, 0, 1])
    assert not sg.hom_check(C4, C2, [0, 1, 1, 1])
    with pytest.raises(sg.NotHomomorphism):
        sg.require_hom(C4, C2, [0, 1, 1, 1])


def test_find_isomorphism():
    C3 = sg.cyclic_group(3)
    perm = np.array([2, 0, 1])
    inv = np.argsort(perm)
    Z = sg.FiniteSemigroup(inv[C3.table[np.ix_(perm, perm)]])
    f = sg.find_isomorphism(Z, C3)
    assert f is not None and sg.hom_check(Z, C3, f)
    assert sg.find_isomorphism(sg.cyclic_group(4), sg.product(sg.cyclic_group(2), sg.cyclic_group(2))) is None


def test_json_round_trip(T1):
    text = sg.dumps(T1)
    back = sg.loads(text)
    assert back == T1
    assert json.loads(text)["elements"][0] == "1"


def test_json_import_validates():
    bad = {"elements": ["x", "y"], "table": [[1, 0], [0, 0]]}
    with pytest.raises(sg.NonAssociative):
        sg.from_dict(bad)
