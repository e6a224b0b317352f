import pytest

from finsemi import forest as fo
from finsemi import semigroup as sg
from finsemi import sk
from finsemi.forest import FactorizationForest, Node


def test_single_letter_is_leaf():
    f = fo.build_forest({"a": 0}, sg.trivial(), "a")
    assert f.height == 0
    assert fo.verify_ramseyan(f, {"a": 0}, sg.trivial()) == (True, None)


def test_constant_idempotent_gives_one_node():
    f = fo.build_forest({"a": 0}, sg.trivial(), "a" * 8)
    assert f.height == 1 and f.root.degree == 8


def test_cyclic_group():
    C2 = sg.cyclic_group(2)
    f = fo.build_forest({"a": 1}, C2, "a" * 6)
    ok, msg = fo.verify_ramseyan(f, {"a": 1}, C2)
    assert ok and f.height <= 18


def test_concatenation_law_and_d():
    S = sk.build(2, sk.SK)
    img = {"a": S.index("a^1"), "b": S.index("b^1")}
    w = "aabbaabbabab"
    f = fo.build_forest(img, S, w)
    for x in f.nodes():
        if x.children:
            assert "".join(f.d(x.start, x.end)) == w[x.start:x.end]
            assert all(c.height < x.height for c in x.children)


def test_verifier_catches_bad_ramseyan_node():
    C2 = sg.cyclic_group(2)
    leaves = tuple(Node(i, i + 1, 1) for i in range(3))
    bad = FactorizationForest("aaa", {"a": 1}, Node(0, 3, 1, leaves), 2)
    ok, msg = fo.verify_ramseyan(bad, {"a": 1}, C2)
    assert not ok and "Ramseyan" in msg


def test_verifier_catches_broken_concatenation():
    T = sg.trivial()
    bad = FactorizationForest("aaa", {"a": 0}, Node(0, 3, 0, (Node(0, 1, 0), Node(2, 3, 0))), 1)
    assert not fo.verify_ramseyan(bad, {"a": 0}, T)[0]


def test_random_instances(rng):
    for _ in range(150):
        S = sg.random_semigroup(rng, 8, degree=rng.choice([2, 3, 4]), ngens=rng.choice([1, 2, 3]))
        letters = "abcd"[: rng.randint(1, 4)]
        img = {c: rng.randrange(len(S)) for c in letters}
        w = "".join(rng.choice(letters) for _ in range(rng.randint(1, 200)))
        f = fo.build_forest(img, S, w)
        ok, msg = fo.verify_ramseyan(f, img, S)
        assert ok, msg
        assert f.height <= 9 * len(S)


def test_deterministic():
    S = sg.cyclic_group(3)
    a = fo.build_forest({"a": 1, "b": 2}, S, "abbaab" * 5)
    b = fo.build_forest({"a": 1, "b": 2}, S, "abbaab" * 5)
    assert a.root == b.root


def test_empty_word_rejected():
    with pytest.raises(fo.ForestError):
        fo.build_forest({"a": 0}, sg.trivial(), "")


def test_idempotent_generation():
    S = sk.build(2, sk.SK)
    ident = list(range(len(S)))
    gens = list(range(len(S)))
    assert fo.idempotent_generation_check(S, S, ident, gens)["generates"]
    R = sk.build_R(2, sk.SK)
    LZ = sg.left_zero(["a", "b"])
    assert fo.idempotent_generation_check(R, LZ, R.meta["proj2"], R.generators)["generates"]
    assert fo.idempotent_generation_check(S, sg.trivial(), [0] * len(S), gens)["generates"]


def test_nilpotent_kernel_generators():
    N = sg.monogenic(3)  # x, x^2, x^3 = 0
    r = fo.nilpotent_kernel_generators(N, N, [0, 1, 2], [0], 3)
    assert r["kernel"] == [2]
    assert r["corrected"]["generates_kernel"] and r["corrected"]["inside_kernel"]
    assert not r["literal"]["inside_kernel"] and not r["literal"]["generates_kernel"]


def test_nilpotent_kernel_degenerate_index():
    S = sg.monogenic(2)
    r = fo.nilpotent_kernel_generators(S, sg.FiniteSemigroup([[0]]), [0, 0], [0], 1)
    assert r["literal"]["B"] == [0] == r["corrected"]["B"]
    assert r["literal"]["generates_kernel"] == r["corrected"]["generates_kernel"] is True


def test_forest_json():
    import json
    C2 = sg.cyclic_group(2)
    f = fo.build_forest({"a": 1}, C2, "aaaa")
    d = json.loads(fo.forest_json(f, C2))
    assert d["verified"] and d["root"]["word"] == "aaaa"
