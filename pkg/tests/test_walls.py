import math

import pytest

from coxlab.words import GroupElement, ball, element_order, identity, normalize
from coxlab.walls import (canonical_generators, conjugating_element,
                          core_letter, enumerate_domain, enumerate_reflections,
                          fold, halfspace_sign, is_geometric_set,
                          is_reflection_element, min_coset_rep,
                          nearest_chamber, on_wall, reflection_parts, side_of,
                          star_letters, subgroup_contains,
                          subgroup_elements_in_ball, wall_chambers,
                          wall_distance, wall_distance_matrix)


def norm(sys, text):
    return normalize(sys, text)


def test_star_letters(c4, u3):
    assert star_letters(c4, 0) == (0, 1, 3)
    assert star_letters(u3, 0) == (0,)


def test_reflection_parts_roundtrip(d_inf, u3, c5):
    for sys, word in ((d_inf, "aba"), (d_inf, "babab"),
                      (u3, "abcba"), (c5, "acdca")):
        t = norm(sys, word)
        h, s = reflection_parts(t)
        assert h * GroupElement(sys, bytes([s])) * h.inverse() == t
        # h is the distinguished coset rep: right mult by star letters lengthens
        assert min_coset_rep(h, star_letters(sys, s)) == h


def test_reflection_parts_rejects_non_reflections(u3):
    assert not is_reflection_element(norm(u3, "ab"))
    with pytest.raises(ValueError):
        reflection_parts(norm(u3, "ab"))


def test_nearest_chamber_and_core(u3):
    t = norm(u3, "aba")
    assert nearest_chamber(t) == norm(u3, "a")
    assert core_letter(t) == 1


def test_wall_chambers(d_inf):
    a = norm(d_inf, "a")
    assert wall_chambers(a, 1) == [identity(d_inf), a]
    aba = norm(d_inf, "aba")
    got = wall_chambers(aba, 2)
    assert got == [norm(d_inf, "a"), norm(d_inf, "ab")]
    for w in got:
        assert on_wall(aba, w)


def test_enumerate_reflections_counts(d8, u3):
    # dihedral of order 8 has exactly four reflections
    refs = enumerate_reflections(d8, 3)
    assert sorted(str(t) for t in refs) == ["a", "aba", "b", "bab"]
    # universal rank 3: 3 * |sphere(r)| conjugates at each odd length
    refs = enumerate_reflections(u3, 3)
    assert len(refs) == 3 + 3 * 2  # letters + s t s with s != t
    assert all(is_reflection_element(t) for t in refs)


def test_side_of_flips_across_wall(d_inf):
    a = norm(d_inf, "a")
    assert side_of(a, identity(d_inf)) == 1
    assert side_of(a, a) == -1
    assert side_of(a, norm(d_inf, "ba")) == 1
    assert side_of(a, norm(d_inf, "ab")) == -1


def test_wall_distance_adjacent_walls(d_inf):
    a, b = norm(d_inf, "a"), norm(d_inf, "b")
    aba = norm(d_inf, "aba")
    bab = norm(d_inf, "bab")
    # wall(aba) touches chamber a, which also touches wall(a)
    assert wall_distance(a, aba) == 0
    assert wall_distance(a, b) == 0
    assert wall_distance(a, bab) == 1
    assert wall_distance(aba, bab) == 2


def test_wall_distance_matrix_symmetric(u3):
    refs = [norm(u3, w) for w in ("a", "bab", "cabac")]
    m = wall_distance_matrix(refs)
    for i in range(3):
        assert m[i][i] == 0
        for j in range(3):
            assert m[i][j] == m[j][i]
            assert m[i][j] == wall_distance(refs[i], refs[j])


def test_geometric_set_detection(d_inf):
    a, b = norm(d_inf, "a"), norm(d_inf, "b")
    aba = norm(d_inf, "aba")
    good = is_geometric_set([a, b])
    assert good
    assert good.failing_triple is None
    bad = is_geometric_set([a, b, aba])
    assert not bad
    t, u, v = bad.failing_triple
    # the two partner walls really do straddle wall(t)
    assert halfspace_sign(t, u) != halfspace_sign(t, v)


def test_geometric_set_commuting_pairs_ignored(c4):
    # adjacent letters commute, so no constraint applies
    refs = [norm(c4, w) for w in ("a", "b")]
    assert element_order(refs[0] * refs[1]) == 2
    assert is_geometric_set(refs)


def test_fold_membership(d_inf):
    a = norm(d_inf, "a")
    bab = norm(d_inf, "bab")
    refs = [a, bab]
    ab = norm(d_inf, "ab")
    assert subgroup_contains(refs, ab * ab)
    assert not subgroup_contains(refs, ab)
    assert fold(refs, ab) == norm(d_inf, "b")
    # index two: exactly half of each even sphere
    members = subgroup_elements_in_ball(refs, 4)
    assert sorted(str(x) for x in members) == ["a", "abab", "bab", "baba", "e"]


def test_enumerate_domain(d_inf):
    refs = [norm(d_inf, "a"), norm(d_inf, "bab")]
    dom = enumerate_domain(refs, 3)
    assert sorted(str(x) for x in dom) == ["b", "e"]


def test_canonical_generators_descend(d_inf):
    a, b = norm(d_inf, "a"), norm(d_inf, "b")
    rep = canonical_generators([a, b, norm(d_inf, "aba")])
    assert rep.generators == (a, b)
    assert rep.ok
    assert rep.validation.geometric and rep.validation.domain_unique
    assert len(rep.steps) >= 1
    # expressions recover each generator from the original set
    for g, expr in zip(rep.generators, rep.expressions):
        prod = identity(d_inf)
        for i in expr:
            prod = prod * rep.originals[i]
        assert prod == g


def test_canonical_generators_proper_subgroup(d_inf):
    a = norm(d_inf, "a")
    deep = norm(d_inf, "ba") * a * norm(d_inf, "ba").inverse()
    rep = canonical_generators([a, deep])
    assert rep.ok
    assert {str(g) for g in rep.generators} == {"a", "bab"}


def test_canonical_generators_base_chamber(u3):
    c = norm(u3, "ab")
    refs = [c * norm(u3, w) * c.inverse() for w in ("a", "bab")]
    rep = canonical_generators(refs, base_chamber=c)
    assert rep.ok
    assert {str(g) for g in rep.generators} == \
        {str(c * norm(u3, "a") * c.inverse()), str(c * norm(u3, "bab") * c.inverse())}


def test_conjugating_element(d_inf, u3):
    a, b = norm(d_inf, "a"), norm(d_inf, "b")
    u = conjugating_element([a], [norm(d_inf, "bab")], radius=3)
    assert u == b
    assert conjugating_element([a], [norm(d_inf, "ab")], radius=3) is None
    # pairs, and a restricted search
    u = conjugating_element([a, b], [b, a], radius=4)
    assert u is not None
    assert {str(u * t * u.inverse()) for t in (a, b)} == {"a", "b"}
    got = conjugating_element([norm(u3, "a")], [norm(u3, "bab")], radius=3,
                              within=[norm(u3, "b")])
    assert got == norm(u3, "b")


def test_conjugating_element_size_mismatch(d_inf):
    a, b = norm(d_inf, "a"), norm(d_inf, "b")
    assert conjugating_element([a], [a, b], radius=2) is None


def test_random_geometric_invariance(u3, c5):
    # canonical generators of a geometric set are the set itself
    for sys, words in ((u3, ("a", "bab")), (c5, ("a", "c"))):
        refs = [norm(sys, w) for w in words]
        assert is_geometric_set(refs)
        rep = canonical_generators(refs)
        assert rep.generators == tuple(sorted(refs, key=lambda g: g.sort_key()))
        assert rep.steps == []
