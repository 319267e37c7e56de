import math

import pytest
from hypothesis import given, settings, strategies as st

from coxlab.words import (GroupElement, SearchBudgetExceeded, ball, centralizer,
                          conjugacy_class_closure, cyclic_reduce, cyclic_root,
                          element_order, generator, identity, is_clique,
                          is_reflection, link, min_conjugate_length, normalize,
                          parse_word, render_word, support)

import bfs_oracle


def norm(sys, text):
    return normalize(sys, text)


# -- normal forms vs the naive oracle ----------------------------------------

@pytest.mark.parametrize("fix", ["d_inf", "u3", "p3", "c4"])
def test_normal_form_matches_rewrite_closure(fix, request):
    sys = request.getfixturevalue(fix)
    for w in bfs_oracle.words_up_to(sys.rank, 4):
        assert normalize(sys, w).word == bfs_oracle.canon(sys, w)


def test_general_labels_match_oracle(d8, m7_triangle):
    for sys, depth in ((d8, 5), (m7_triangle, 4)):
        for w in bfs_oracle.words_up_to(sys.rank, depth):
            got = normalize(sys, w).word
            want = bfs_oracle.canon(sys, w)
            assert (len(got), got) == (len(want), want)


@settings(max_examples=60, deadline=None)
@given(w=st.lists(st.integers(0, 2), max_size=9))
def test_p3_normalize_agrees_on_random_words(p3, w):
    assert normalize(p3, bytes(w)).word == bfs_oracle.canon(p3, bytes(w))


def test_ball_sizes_match_oracle(u3, c4, d8):
    for sys, radius in ((u3, 4), (c4, 4), (d8, 6)):
        words, spheres = bfs_oracle.ball_words(sys, radius)
        elements, got_spheres = ball(sys, radius)
        assert len(elements) == len(words)
        assert list(got_spheres) == list(spheres)


def test_universal_sphere_formula(u3):
    _, spheres = ball(u3, 6)
    assert list(spheres) == [1] + [3 * 2 ** (r - 1) for r in range(1, 7)]


def test_d8_is_finite(d8):
    elements, spheres = ball(d8, 10)
    assert len(elements) == 8
    assert spheres[-1] == 0


# -- orders -------------------------------------------------------------------

def test_orders_racg(u3, c4):
    assert element_order(identity(u3)) == 1
    assert element_order(norm(u3, "a")) == 2
    assert element_order(norm(u3, "ab")) == math.inf
    assert element_order(norm(c4, "ab")) == 2      # commuting pair
    assert element_order(norm(c4, "ac")) == math.inf


def test_orders_general(d8, m7_triangle):
    assert element_order(norm(d8, "ab")) == 4
    assert element_order(norm(d8, "abab")) == 2
    assert element_order(norm(m7_triangle, "ab")) == 7
    assert element_order(norm(m7_triangle, "bc")) == 2


def test_order_cutoff_returns_none(m7_triangle):
    assert element_order(norm(m7_triangle, "ab"), cutoff=3) is None


# -- cyclic reduction and roots ----------------------------------------------

@settings(max_examples=80, deadline=None)
@given(w=st.lists(st.integers(0, 2), min_size=0, max_size=8))
def test_cyclic_reduce_reassembles(u3, w):
    x = normalize(u3, bytes(w))
    h, core = cyclic_reduce(x)
    assert h * core * h.inverse() == x
    # the core cannot be shortened by conjugating with its outer letter
    if not core.is_identity():
        s = GroupElement(u3, core.word[:1])
        assert (s * core * s).length >= core.length


def test_cyclic_root_powers(u3):
    g = norm(u3, "ab") ** 6
    dec = cyclic_root(g)
    assert dec.root ** dec.exponent == dec.core
    assert dec.exponent == 6
    assert dec.root == norm(u3, "ab")


def test_cyclic_root_of_primitive(u3):
    dec = cyclic_root(norm(u3, "abac"))
    assert dec.exponent == 1


def test_cyclic_root_with_commutation(c5):
    g = norm(c5, "ac") ** 4        # a,c non-adjacent on the 5-cycle
    dec = cyclic_root(g)
    assert dec.exponent == 4
    assert dec.root == norm(c5, "ac")


def test_cyclic_root_refuses_reducible(c4, p3):
    for sys in (c4, p3):
        with pytest.raises(ValueError):
            cyclic_root(normalize(sys, "ac"))


def test_support_and_link(c5):
    x = norm(c5, "ab")
    assert support(x) == {0, 1}
    # common neighbours of a and b in the 5-cycle: none
    assert link(x) == frozenset()
    assert link(norm(c5, "a")) == {1, 4}


def test_is_clique(c4):
    assert is_clique(c4, {0, 1})
    assert not is_clique(c4, {0, 2})


# -- reflections and conjugacy -------------------------------------------------

def test_is_reflection(u3):
    assert is_reflection(norm(u3, "aba"))
    assert not is_reflection(norm(u3, "ab"))
    assert not is_reflection(norm(u3, "abc"))


def test_min_conjugate_length(u3):
    assert min_conjugate_length(norm(u3, "aba")) == 1
    assert min_conjugate_length(norm(u3, "ab")) == 2


def test_class_closure_d_inf(d_inf):
    x = norm(d_inf, "ab")
    members, complete = conjugacy_class_closure(x, max_length=4, budget=10_000)
    assert complete
    assert sorted(render_word(d_inf, w) for w in members) == ["ab", "ba"]
    for w, h in members.items():
        assert h * x * h.inverse() == GroupElement(d_inf, w)


# -- centralizers --------------------------------------------------------------

def brute_centralizer(sys, g, radius):
    elements, _ = ball(sys, radius)
    return {h for h in elements if h * g == g * h}


@pytest.mark.parametrize("fix,word", [
    ("u3", "ab"), ("u3", "aba"), ("u3", "abc"),
    ("p4", "abc"), ("p4", "ac"), ("p4", "b"),
    ("c5", "ac"), ("c5", "abcd"),
])
def test_centralizer_matches_brute_force(fix, word, request):
    sys = request.getfixturevalue(fix)
    g = norm(sys, word)
    desc = centralizer(g)
    assert brute_centralizer(sys, g, 5) == set(desc.enumerate_ball(5))


def test_centralizer_pure_factors(p4):
    # abc = b x (ac): one involution factor, one infinite factor
    desc = centralizer(norm(p4, "abc"))
    assert desc.order == math.inf
    assert desc.clique == (1,)
    assert [render_word(p4, r.word) for r in desc.roots] == ["ac"]


def test_centralizer_requires_irreducible(p3):
    with pytest.raises(ValueError):
        centralizer(norm(p3, "a"))


# -- element arithmetic ---------------------------------------------------------

def test_parse_and_render(u3, m7_triangle):
    assert render_word(u3, parse_word(u3, "a b a")) == "aba"
    assert parse_word(u3, "e") == b""
    assert parse_word(u3, "aba") == bytes([0, 1, 0])
    assert parse_word(m7_triangle, "a c") == bytes([0, 2])
    with pytest.raises(ValueError):
        parse_word(u3, "q")


def test_pow_and_inverse(u3):
    g = norm(u3, "ab")
    assert g ** 0 == identity(u3)
    assert g ** 3 == g * g * g
    assert g ** -2 == (g.inverse()) ** 2
    assert (g * g.inverse()).is_identity()


def test_sort_key_orders_by_length(u3):
    xs = [norm(u3, w) for w in ("ba", "a", "abc", "e")]
    xs.sort(key=lambda g: g.sort_key())
    assert [render_word(u3, g.word) for g in xs] == ["e", "a", "ba", "abc"]
