import pytest

from coxlab.system import CoxeterSystem


@pytest.fixture(scope="session")
def d_inf():
    return CoxeterSystem.universal(["a", "b"])


@pytest.fixture(scope="session")
def u3():
    return CoxeterSystem.universal(["a", "b", "c"])


@pytest.fixture(scope="session")
def u4():
    return CoxeterSystem.universal(["a", "b", "c", "d"])


@pytest.fixture(scope="session")
def p3():
    # right-angled path: a-b and b-c commute, a-c free
    return CoxeterSystem.right_angled_from_graph(
        ("a", "b", "c"), [("a", "b"), ("b", "c")])


@pytest.fixture(scope="session")
def p4():
    return CoxeterSystem.right_angled_from_graph(
        ("a", "b", "c", "d"), [("a", "b"), ("b", "c"), ("c", "d")])


@pytest.fixture(scope="session")
def c4():
    return CoxeterSystem.right_angled_from_graph(
        ("a", "b", "c", "d"), [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


@pytest.fixture(scope="session")
def c5():
    return CoxeterSystem.right_angled_from_graph(
        ("a", "b", "c", "d", "e"),
        [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")])


@pytest.fixture(scope="session")
def d8():
    return CoxeterSystem.from_pairs(("a", "b"), {("a", "b"): 4})


@pytest.fixture(scope="session")
def m7_triangle():
    # one odd label merges two abelianization classes
    return CoxeterSystem.from_pairs(
        ("a", "b", "c"), {("a", "b"): 7, ("a", "c"): 2, ("b", "c"): 2})


@pytest.fixture(scope="session")
def m4_triangle():
    return CoxeterSystem.from_pairs(
        ("a", "b", "c"), {("a", "b"): 4, ("a", "c"): 4, ("b", "c"): 4})


@pytest.fixture(scope="session")
def a2_affine():
    return CoxeterSystem.from_pairs(
        ("a", "b", "c"), {("a", "b"): 3, ("a", "c"): 3, ("b", "c"): 3})
