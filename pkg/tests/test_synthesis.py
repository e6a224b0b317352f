import pytest

from finsemi import semigroup as sg
from finsemi import synthesis as sy


def test_trivial_inputs_give_two_element_semilattice():
    U = sy.synthesis_U(sg.trivial(), sg.trivial(), [0])
    assert len(U) == 2
    assert all(U.mul(x, x) == x and U.mul(x, y) == U.mul(y, x) for x in range(2) for y in range(2))


def test_size_law(rng):
    for _ in range(10):
        S = sg.random_semigroup(rng, 4)
        T = sg.random_semigroup(rng, 3)
        f = [rng.randrange(len(T)) for _ in range(len(S))]
        U = sy.synthesis_U(S, T, f)  # associativity is verified inside
        assert len(U) == len(S) + len(S) ** 2 * len(T)
        # S is a subsemigroup and the triples form an ideal
        n = len(S)
        assert (U.table[:n, :n] == S.table).all()
        assert sg.is_ideal(U, range(n, len(U))) is None


def test_c2_c2():
    C2 = sg.cyclic_group(2)
    for f in ([0, 0], [0, 1], [1, 0], [1, 1]):
        U = sy.synthesis_U(C2, C2, f)
        assert len(U) == 10 and sg.check_associative(U.table) is None
        assert len(U.idempotents) >= 1


def test_sl_witness():
    C2 = sg.cyclic_group(2)
    r = sy.sl_witness(3, C2, [i % 2 for i in range(4)])
    assert r["passed"] and r["J_classes_of_K"] == 1 and all(r["subgroups_isomorphic_to_G"])
    assert sy.sl_witness(1, sg.trivial(), [0, 0])["passed"]


def test_sl_witness_other_groups():
    C3 = sg.cyclic_group(3)
    assert sy.sl_witness(2, C3, [0, 1, 2])["passed"]


def test_sl_witness_negative_control():
    C2 = sg.cyclic_group(2)
    phi = [1, 2, 1, 1] + [0] * 32
    with pytest.raises(sy.WitnessFailed) as e:
        sy.sl_witness(3, C2, [0, 1, 0, 1], phi=phi)
    assert e.value.stage == "homomorphism"


def test_bad_map_rejected():
    with pytest.raises(ValueError):
        sy.synthesis_U(sg.trivial(), sg.trivial(), [1])
