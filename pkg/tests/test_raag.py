import pytest
from hypothesis import given, settings, strategies as st

from coxlab.raag import (Raag, RaagElement, RaagError, beta_embed,
                         coset_index, gamma_plus, kernel_and_cosets, theta,
                         verify_embedding, _partner_names)


@pytest.fixture(scope="session")
def free2():
    return Raag(("x", "y"))


@pytest.fixture(scope="session")
def path3():
    return Raag(("x", "y", "z"), [("x", "y"), ("y", "z")])


# -- normal forms -----------------------------------------------------------------

def test_generators_and_identity(free2):
    x = free2.generator("x")
    assert (x * x.inverse()).is_identity
    assert free2.identity().syllables == ()
    assert free2.generator("x", 3).syllables == ((0, 3),)


def test_syllable_merging(free2):
    x, y = free2.generator("x"), free2.generator("y")
    w = x * x * y * y.inverse() * x
    assert w.syllables == ((0, 3),)


def test_commuting_merge(path3):
    # y x y with xy = yx collapses the y syllables around x
    x, y = path3.generator("x"), path3.generator("y")
    assert (y * x * y).syllables == (y * y * x).syllables


def test_normal_form_confluence(path3):
    # assemble one element along two different bracketings
    x, y, z = (path3.generator(nm) for nm in "xyz")
    lhs = (z * x) * y
    rhs = z * (x * y)
    assert lhs == rhs
    # and the historically awkward pair: c.a.b vs b.c.a style orderings
    w1 = z * x * y * x.inverse()
    w2 = (z * x) * (y * x.inverse())
    assert w1 == w2


def test_element_equality_and_hash(free2):
    x, y = free2.generator("x"), free2.generator("y")
    assert x * y != y * x                  # no edge: free group
    assert hash(x * x) == hash(free2.generator("x", 2))


@settings(max_examples=60, deadline=None)
@given(w=st.lists(st.tuples(st.integers(0, 2), st.sampled_from((-2, -1, 1, 2))),
                  max_size=8))
def test_normal_form_is_stable_under_renormalizing(path3, w):
    g = path3.element(w)
    again = path3.element(g.syllables)
    assert g == again
    assert (g * g.inverse()).is_identity


@settings(max_examples=40, deadline=None)
@given(w=st.lists(st.tuples(st.integers(0, 2), st.sampled_from((-1, 1))),
                  max_size=6))
def test_normal_form_matches_embedding(path3, w):
    # the Coxeter image is itself a normal form: equal images, equal elements
    gp = gamma_plus(path3)
    g = path3.element(w)
    img = beta_embed(gp, g)
    assert (g == path3.identity()) == img.is_identity()


# -- the doubled graph ---------------------------------------------------------------

def test_gamma_plus_shape(path3):
    gp = gamma_plus(path3)
    sys = gp.system
    assert sys.rank == 6
    assert sys.names == ("x", "y", "z", "X", "Y", "Z")
    n = path3.rank
    for i in range(n):
        # vertex misses exactly its own partner
        assert not sys.comm[gp.s_letters[i], gp.r_letters[i]]
        for j in range(n):
            if i != j:
                assert sys.comm[gp.s_letters[i], gp.r_letters[j]]
                assert sys.comm[gp.r_letters[i], gp.r_letters[j]]
    # original edges survive, non-edges stay missing
    assert sys.comm[0, 1] and sys.comm[1, 2]
    assert not sys.comm[0, 2]


def test_partner_naming():
    assert _partner_names(("x", "y")) == ["X", "Y"]
    assert _partner_names(("s1", "s2")) == ["s1'", "s2'"]
    assert _partner_names(("a", "A")) == ["a'", "A'"]
    with pytest.raises(RaagError):
        _partner_names(("a", "a'", "A"))


def test_theta_parity(path3):
    gp = gamma_plus(path3)
    assert theta(gp, b"") == (0, 0, 0)
    assert theta(gp, bytes([0])) == (1, 0, 0)
    assert theta(gp, bytes([3])) == (1, 0, 0)     # the partner counts too
    assert theta(gp, bytes([3, 0])) == (0, 0, 0)  # g_x lands in the kernel


def test_beta_image_in_kernel(path3):
    from coxlab.words import generator
    gp = gamma_plus(path3)
    g = path3.element([(0, 2), (1, -1), (2, 1)])
    rep = kernel_and_cosets(gp, beta_embed(gp, g))
    assert rep.in_kernel
    assert rep.label == (0, 0, 0)
    bad = kernel_and_cosets(gp, generator(gp.system, "x"))
    assert not bad.in_kernel
    assert bad.label == (1, 0, 0)


def test_coset_index(free2, path3):
    for graph in (free2, path3):
        gp = gamma_plus(graph)
        rep = coset_index(gp, radius=4)
        assert rep.complete
        assert rep.index == rep.expected == 2 ** graph.rank
        assert bool(rep)


def test_embedding_report(path3):
    gp = gamma_plus(path3)
    rep = verify_embedding(gp, max_len=4, pair_len=4)
    assert bool(rep)
    assert rep.injective and rep.kernel_parity_ok and rep.commutation_ok
    assert rep.words_checked > 100
    assert rep.homomorphism_pairs > 0


def test_embedding_free_group(free2):
    gp = gamma_plus(free2)
    rep = verify_embedding(gp, max_len=5, pair_len=4)
    assert bool(rep)


def test_beta_rejects_foreign_elements(free2, path3):
    gp = gamma_plus(path3)
    with pytest.raises(RaagError):
        beta_embed(gp, free2.generator("x"))


def test_raag_rejects_bad_graphs():
    with pytest.raises(RaagError):
        Raag(("x", "x"))
    with pytest.raises(RaagError):
        Raag(("x", "y"), [("x", "x")])
