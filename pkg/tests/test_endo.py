import pytest

from coxlab.endo import (Endo, F2LinearMap, abelianized_plus_matrix, all_cliques,
                         alpha_p, alpha_p_determinant, classify,
                         complexity_matrix, enumerate_clique_maps,
                         enumerate_sims, identity_endo, int_det, parse_endo,
                         partial_conjugation, plus_basis, plus_coordinates,
                         sim_check, star_complement_components)
from coxlab.system import CoxeterSystem
from coxlab.words import normalize


def test_parse_endo_and_apply(u3):
    e = parse_endo(u3, "map b = aba")
    assert e.apply(normalize(u3, "bc")) == normalize(u3, "abac")
    assert e.apply(normalize(u3, "e")).is_identity()


def test_compose_order(u3):
    # compose(self, other) applies other first
    alpha = parse_endo(u3, "map b = aba")
    beta = parse_endo(u3, "map c = bcb")
    both = alpha.compose(beta)
    x = normalize(u3, "c")
    assert both.apply(x) == alpha.apply(beta.apply(x))
    assert both.apply(x) == normalize(u3, "aba c aba".replace(" ", ""))


def test_identity_endo(u3):
    e = identity_endo(u3)
    assert e.is_identity_map()
    assert not parse_endo(u3, "map b = aba").is_identity_map()


# -- membership checks ---------------------------------------------------------

def test_sim_check_accepts(u3):
    rep = sim_check(u3, ["a", "aba", "c"])
    assert rep.is_sim and rep.reason is None
    assert rep.endo.kind == "automorphism"
    rep = sim_check(u3, ["a", "b", "cacac"])
    assert rep.is_sim
    assert rep.endo.kind == "sim-proper"


def test_sim_check_wrong_class(u3):
    rep = sim_check(u3, ["a", "bab", "c"])   # bab is a conjugate of a
    assert not rep.is_sim
    assert "not conjugate" in rep.reason


def test_sim_check_wrong_order(c5):
    # dad is a fine conjugate of a, but its product with b is no longer
    # an involution (d and b do not commute on the 5-cycle)
    from coxlab.words import generator
    images = [normalize(c5, "dad")] + [generator(c5, nm) for nm in "bcde"]
    rep = sim_check(c5, images)
    assert not rep.is_sim
    assert "need 2" in rep.reason


def test_sim_check_inconclusive_cutoff(m7_triangle):
    # structural shortcuts only exist for right angles; here the order of
    # the image pair falls to power iteration, which the cutoff truncates
    rep = sim_check(m7_triangle, ["bab", "b", "c"], order_cutoff=3)
    assert not rep.is_sim
    assert "inconclusive" in rep.reason
    assert sim_check(m7_triangle, ["bab", "b", "c"]).is_sim


def test_sim_check_general_labels(d8):
    rep = sim_check(d8, ["bab", "b"])
    assert rep.is_sim
    rep = sim_check(d8, ["a", "a"])
    assert not rep.is_sim


# -- classification --------------------------------------------------------------

def test_classify_automorphism_with_inverse(u3):
    e = parse_endo(u3, "map b = aba")
    cls = classify(e)
    assert cls.kind == "automorphism"
    inv = cls.inverse
    for w in ("a", "b", "c", "abc", "bcba"):
        x = normalize(u3, w)
        assert inv.apply(e.apply(x)) == x
        assert e.apply(inv.apply(x)) == x


def test_classify_proper(u3):
    e = Endo(u3, [normalize(u3, w) for w in ("a", "b", "cacac")])
    cls = classify(e)
    assert cls.kind == "sim-proper"
    assert cls.inverse is None
    assert cls.missing_generator == "c"


def test_alpha_p_is_proper(u3):
    cls = classify(alpha_p(u3, 3))
    assert cls.kind == "sim-proper"
    assert cls.missing_generator == "c"


def test_alpha_p_rejects_bad_p(u3):
    for p in (2, 4, 1):
        with pytest.raises(ValueError):
            alpha_p(u3, p)


# -- complexity ------------------------------------------------------------------

def test_complexity_identity_is_zero(u3):
    cm = complexity_matrix(identity_endo(u3))
    assert cm.entries == ((0, 0, 0), (0, 0, 0), (0, 0, 0))
    assert cm.total() == 0


def test_complexity_alpha3(u3):
    cm = complexity_matrix(alpha_p(u3, 3))
    assert cm.entries == ((0, 0, 2), (0, 0, 2), (2, 2, 0))
    assert cm[0, 2] == 2
    assert cm.dominates(complexity_matrix(identity_endo(u3)))
    assert not complexity_matrix(identity_endo(u3)).dominates(cm)


def test_complexity_grows_under_composition(u3):
    alpha = alpha_p(u3, 3)
    beta = parse_endo(u3, "map c = bcb")
    assert sim_check(u3, beta.images).is_sim
    da = complexity_matrix(alpha)
    both = alpha.compose(beta)
    assert complexity_matrix(both).dominates(da)


# -- partial conjugations ---------------------------------------------------------

def test_star_complement_components(c5, u3):
    # removing the closed star of a letter from the 5-cycle leaves a path
    comps = star_complement_components(c5, 0)
    assert comps == [frozenset({2, 3})]
    assert star_complement_components(u3, 0) == [frozenset({1}), frozenset({2})]


def test_partial_conjugation(u3):
    e = partial_conjugation(u3, "a", {"b"})
    assert e.apply(normalize(u3, "b")) == normalize(u3, "aba")
    assert e.apply(normalize(u3, "c")) == normalize(u3, "c")
    assert classify(e).kind == "automorphism"


def test_partial_conjugation_chunk_validation(c5):
    # {2,3} is one component; its proper subsets are not unions of components
    with pytest.raises(ValueError):
        partial_conjugation(c5, 0, {2})
    e = partial_conjugation(c5, 0, {2, 3})
    assert e.apply(normalize(c5, "c")) == normalize(c5, "aca")


# -- GF(2) clique maps -------------------------------------------------------------

def test_all_cliques(u3, c4):
    assert sorted(all_cliques(u3)) == [1, 2, 4]          # singletons only
    masks = set(all_cliques(c4))
    assert 0b0011 in masks and 0b0101 not in masks       # ab edge, ac non-edge


def test_f2_map_basics():
    cycle = F2LinearMap(3, (0b010, 0b100, 0b001))
    assert cycle.is_permutation
    assert cycle.apply_mask(0b011) == 0b110
    twice = cycle.compose(cycle)
    assert twice.columns == (0b100, 0b001, 0b010)
    assert not F2LinearMap(2, (0b11, 0b11)).is_permutation


def test_clique_maps_universal_are_permutations(u3):
    maps = enumerate_clique_maps(u3)
    assert len(maps) == 6
    assert all(m.is_permutation for m in maps)


def test_clique_maps_square_graph(c4):
    # symmetries of the 4-cycle: the dihedral group of order 8
    maps = enumerate_clique_maps(c4)
    assert len(maps) == 8
    assert all(m.is_permutation for m in maps)


# -- doubled coordinates and determinants -------------------------------------------

def test_plus_coordinates(u3):
    assert plus_coordinates(normalize(u3, "ab")) == [(1, 1)]
    assert plus_coordinates(normalize(u3, "ba")) == [(1, -1)]
    assert plus_coordinates(normalize(u3, "bc")) == [(1, -1), (2, 1)]
    assert plus_coordinates(normalize(u3, "e")) == []
    with pytest.raises(ValueError):
        plus_coordinates(normalize(u3, "a"))


def test_plus_basis(u3):
    assert [str(y) for y in plus_basis(u3)] == ["ab", "ac"]


def test_abelianized_matrix_identity(u3):
    assert abelianized_plus_matrix(identity_endo(u3)) == ((1, 0), (0, 1))


def test_int_det():
    assert int_det([[2, 0], [0, 3]]) == 6
    assert int_det([[0, 1], [1, 0]]) == -1
    assert int_det([[1, 2], [2, 4]]) == 0


@pytest.mark.parametrize("rank,p", [(2, 3), (3, 3), (3, 5), (4, 7)])
def test_alpha_p_determinant(rank, p):
    sys = CoxeterSystem.universal(tuple("abcd"[:rank]))
    assert alpha_p_determinant(sys, p) == p


# -- enumeration ----------------------------------------------------------------------

def test_enumerate_sims_depth1(d_inf):
    sims = enumerate_sims(d_inf, 1)
    assert len(sims) == 4
    kinds = sorted(s.kind for s in sims)
    assert kinds == ["automorphism", "automorphism", "automorphism", "sim-proper"]
    proper = enumerate_sims(d_inf, 1, proper_only=True)
    assert len(proper) == 1
    imgs = {str(g) for g in proper[0].images}
    assert imgs == {"aba", "bab"}
