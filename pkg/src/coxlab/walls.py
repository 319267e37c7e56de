"""Reflection and wall geometry for right-angled systems.

A reflection is any conjugate h s h^-1 of a generator.  Its wall is the
fixed hyperplane in the Davis complex; chambers correspond to group
elements.  The chambers touching the wall of t form the coset
h_t * <star(s_t)>, where star(s) is s together with everything commuting
with it.  That single fact drives everything here: nearest chambers and
wall-to-wall distances reduce to distinguished (double) coset
representatives inside standard parabolics, which greedy length descent
finds exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .system import CoxeterSystem
from .words import (
    GroupElement,
    ball,
    cyclic_reduce,
    element_order,
    identity,
)


# ---------------------------------------------------------------------------
# star parabolics and distinguished coset representatives

def star_letters(sys: CoxeterSystem, s: int) -> tuple:
    """s together with all letters commuting with it."""
    out = [s]
    for j in range(sys.rank):
        if j != s and sys.comm[s, j]:
            out.append(j)
    return tuple(sorted(out))


def min_coset_rep(x: GroupElement, right_letters) -> GroupElement:
    """Minimal element of x * <right_letters> by greedy right descent."""
    sys = x.system
    gens = [GroupElement(sys, bytes([p])) for p in right_letters]
    improved = True
    while improved:
        improved = False
        for p in gens:
            y = x * p
            if y.length < x.length:
                x = y
                improved = True
                break
    return x


def min_double_coset_rep(x: GroupElement, left_letters, right_letters) -> GroupElement:
    """Minimal element of <left_letters> * x * <right_letters>.

    Parabolic double cosets have a unique minimal element and it is the
    unique one without descents on either side, so greedy descent is exact.
    """
    sys = x.system
    left = [GroupElement(sys, bytes([p])) for p in left_letters]
    right = [GroupElement(sys, bytes([p])) for p in right_letters]
    improved = True
    while improved:
        improved = False
        for p in left:
            y = p * x
            if y.length < x.length:
                x = y
                improved = True
                break
        if improved:
            continue
        for q in right:
            y = x * q
            if y.length < x.length:
                x = y
                improved = True
                break
    return x


# ---------------------------------------------------------------------------
# reflections

def reflection_parts(t: GroupElement):
    """(h, s) with t = h s h^-1, h the minimal chamber touching the wall."""
    sys = t.system
    if not sys.right_angled:
        raise ValueError("wall geometry is implemented for right-angled systems")
    h, core = cyclic_reduce(t)
    if core.length != 1:
        raise ValueError(f"not a reflection: {t}")
    s = core.word[0]
    h = min_coset_rep(h, star_letters(sys, s))
    return h, s


def is_reflection_element(t: GroupElement) -> bool:
    _, core = cyclic_reduce(t)
    return core.length == 1


def core_letter(t: GroupElement) -> int:
    return reflection_parts(t)[1]


def nearest_chamber(t: GroupElement) -> GroupElement:
    """The unique minimal-length chamber whose closure meets the wall of t."""
    return reflection_parts(t)[0]


def wall_chambers(t: GroupElement, radius: int):
    """All chambers of length <= radius touching the wall of t."""
    sys = t.system
    h, s = reflection_parts(t)
    from .words import _parabolic_ball
    out = []
    for v in _parabolic_ball(sys, star_letters(sys, s), radius + h.length):
        y = h * GroupElement(sys, v)
        if y.length <= radius:
            out.append(y)
    return sorted(out, key=lambda g: g.sort_key())


def enumerate_reflections(sys: CoxeterSystem, max_length: int):
    """All reflections of word length <= max_length, exactly."""
    conj_radius = (max_length - 1) // 2
    seen = set()
    out = []
    elements, _ = ball(sys, conj_radius)
    for h in elements:
        hinv = h.inverse()
        for i in range(sys.rank):
            t = h * GroupElement(sys, bytes([i])) * hinv
            if t.length <= max_length and t.word not in seen:
                seen.add(t.word)
                out.append(t)
    return sorted(out, key=lambda g: g.sort_key())


# ---------------------------------------------------------------------------
# sides, half-spaces, distances

def side_of(t: GroupElement, w: GroupElement) -> int:
    """+1 when w sits on the identity side of the wall of t, else -1.

    Multiplying by a reflection flips length parity, so there is no tie.
    """
    return 1 if (t * w).length > w.length else -1


def on_wall(t: GroupElement, w: GroupElement) -> bool:
    """Whether the chamber w touches the wall of t (w^-1 t w is a letter)."""
    return (w.inverse() * t * w).length == 1


def halfspace_sign(t: GroupElement, u: GroupElement) -> int:
    """Side of wall(t) seen from the chamber nearest to wall(u)."""
    return side_of(t, nearest_chamber(u))


def wall_distance(t: GroupElement, u: GroupElement) -> int:
    """Gallery distance between the chamber sets of the two walls.

    Equals the length of the distinguished representative of the double
    coset <star(s_t)> h_t^-1 h_u <star(s_u)>.
    """
    sys = t.system
    ht, st = reflection_parts(t)
    hu, su = reflection_parts(u)
    x = ht.inverse() * hu
    rep = min_double_coset_rep(x, star_letters(sys, st), star_letters(sys, su))
    return rep.length


def wall_distance_matrix(refs):
    refs = list(refs)
    n = len(refs)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = wall_distance(refs[i], refs[j])
            out[i][j] = d
            out[j][i] = d
    return out


# ---------------------------------------------------------------------------
# geometric sets of reflections

@dataclass(frozen=True)
class GeometricReport:
    is_geometric: bool
    failing_triple: tuple | None   # (t, u, v) with H(t,u) != H(t,v)
    chosen_roots: tuple | None     # per reflection: common side, or None

    def __bool__(self):
        return self.is_geometric


def is_geometric_set(refs) -> GeometricReport:
    """A set is geometric when, from each member t, every other wall at
    infinite dihedral distance from t lies on one common side of wall(t).

    On success the report records, per member, the side of its wall holding
    all those partner walls (None when t has no infinite-order partner).
    """
    refs = list(refs)
    roots = []
    for t in refs:
        plus = None
        minus = None
        for u in refs:
            if u == t:
                continue
            if element_order(t * u) != math.inf:
                continue
            if halfspace_sign(t, u) == 1:
                if minus is not None:
                    return GeometricReport(False, (t, minus, u), None)
                plus = u
            else:
                if plus is not None:
                    return GeometricReport(False, (t, plus, u), None)
                minus = u
    for t in refs:
        sign = None
        for u in refs:
            if u != t and element_order(t * u) == math.inf:
                sign = halfspace_sign(t, u)
                break
        roots.append(sign)
    return GeometricReport(True, None, tuple(roots))


# ---------------------------------------------------------------------------
# folding: membership and cosets for reflection subgroups

def fold(refs, x: GroupElement) -> GroupElement:
    """Greedy length descent of the coset <refs> x.

    When refs is the canonical (geometric) generating set of its subgroup,
    the result is the unique minimal coset representative, and membership
    is 'folds to the identity'.
    """
    improved = True
    while improved:
        improved = False
        for t in refs:
            y = t * x
            if y.length < x.length:
                x = y
                improved = True
                break
    return x


def subgroup_contains(refs, x: GroupElement) -> bool:
    return fold(refs, x).is_identity()


def coset_representative(refs, x: GroupElement) -> GroupElement:
    return fold(refs, x)


def enumerate_domain(refs, radius: int):
    """Chambers in the ball lying on the identity side of every wall."""
    refs = list(refs)
    if not refs:
        raise ValueError("need at least one reflection")
    sys = refs[0].system
    elements, _ = ball(sys, radius)
    return [x for x in elements if all(side_of(t, x) == 1 for t in refs)]


# ---------------------------------------------------------------------------
# canonical generating sets by depth descent

def _depth(t: GroupElement) -> int:
    return (t.length - 1) // 2


@dataclass(frozen=True)
class ValidationFlags:
    geometric: bool
    two_way: bool
    domain_unique: bool

    @property
    def ok(self) -> bool:
        return self.geometric and self.two_way and self.domain_unique


@dataclass
class CanonicalGeneratorsReport:
    originals: tuple
    generators: tuple
    expressions: tuple         # per generator, product of original reflections
    steps: list                # (replaced, conjugator, replacement)
    validation: ValidationFlags | None

    @property
    def ok(self) -> bool:
        return self.validation is None or self.validation.ok


def _improvement_candidates(current, exprs):
    """Yield (r, conj_elements, conj_expr, r2) with depth(r2) < depth(r)."""
    for r in current:
        dr = _depth(r)
        if dr == 0:
            continue
        others = [t for t in current if t != r]
        # single conjugators first
        for t in others:
            r2 = t * r * t
            if _depth(r2) < dr:
                yield r, (t,), exprs[t.word], r2
        for t1 in others:
            for t2 in others:
                if t1 == t2:
                    continue
                c = t1 * t2
                r2 = c * r * c.inverse()
                if _depth(r2) < dr:
                    yield r, (t1, t2), exprs[t1.word] + exprs[t2.word], r2


def canonical_generators(refs, validate: bool = True,
                         domain_radius: int | None = None,
                         base_chamber: GroupElement | None = None) -> CanonicalGeneratorsReport:
    """Descend a finite reflection set to the canonical generating set of
    its reflection subgroup: repeatedly conjugate a deepest member by other
    members (or pairs of them) whenever that strictly reduces its depth
    (= distance from the base chamber to the wall).  The total depth drops
    every round, so this terminates; the fixed point is validated
    geometrically unless validate=False.

    A base chamber other than the identity shifts the whole computation by
    that chamber: descend the set conjugated to the identity viewpoint,
    then shift back.
    """
    if base_chamber is not None and not base_chamber.is_identity():
        c = base_chamber
        cinv = c.inverse()
        moved = [cinv * t * c for t in refs]
        rep = canonical_generators(moved, validate=validate,
                                   domain_radius=domain_radius)
        back = tuple(c * g * cinv for g in rep.generators)
        originals_back = tuple(c * t * cinv for t in rep.originals)
        return CanonicalGeneratorsReport(
            originals_back, back, rep.expressions, rep.steps, rep.validation)
    refs = sorted(set(refs), key=lambda g: g.sort_key())
    if not refs:
        raise ValueError("need at least one reflection")
    for t in refs:
        if not is_reflection_element(t):
            raise ValueError(f"not a reflection: {t}")
    originals = tuple(refs)
    exprs = {t.word: (i,) for i, t in enumerate(originals)}
    current = list(refs)
    steps = []
    while True:
        best = None
        for r, conj, cexpr, r2 in _improvement_candidates(current, exprs):
            key = (-_depth(r), r.word, _depth(r2), r2.word)
            if best is None or key < best[0]:
                best = (key, r, conj, cexpr, r2)
        if best is None:
            break
        _, r, conj, cexpr, r2 = best
        new_expr = cexpr + exprs[r.word] + tuple(reversed(cexpr))
        current.remove(r)
        if r2 not in current:
            current.append(r2)
            exprs[r2.word] = new_expr
        steps.append((r, conj, r2))
        current.sort(key=lambda g: g.sort_key())
    gens = tuple(sorted(current, key=lambda g: g.sort_key()))
    expressions = tuple(exprs[g.word] for g in gens)
    validation = None
    if validate:
        geo = is_geometric_set(gens).is_geometric
        two_way = all(subgroup_contains(gens, r) for r in originals)
        for g, expr in zip(gens, expressions):
            prod = identity(g.system)
            for i in expr:
                prod = prod * originals[i]
            two_way = two_way and (prod == g)
        if domain_radius is None:
            domain_radius = max(3, max(g.length for g in gens) + 1)
        sys = gens[0].system
        elements, _ = ball(sys, domain_radius)
        in_domain_and_subgroup = [
            x for x in elements
            if all(side_of(t, x) == 1 for t in gens) and subgroup_contains(gens, x)
        ]
        domain_unique = (len(in_domain_and_subgroup) == 1
                         and in_domain_and_subgroup[0].is_identity())
        validation = ValidationFlags(geo, two_way, domain_unique)
    return CanonicalGeneratorsReport(originals, gens, expressions, steps, validation)


def subgroup_elements_in_ball(refs, radius: int):
    """Members of <refs> of length <= radius (refs canonical/geometric)."""
    refs = list(refs)
    sys = refs[0].system
    elements, _ = ball(sys, radius)
    return [x for x in elements if fold(refs, x).is_identity()]


def conjugating_element(set_a, set_b, radius: int,
                        within=None) -> GroupElement | None:
    """Search for u with u * set_a * u^-1 = set_b as sets.

    `within` restricts candidates to a reflection subgroup (given by its
    canonical generators); by default candidates range over the whole ball.
    Returns the first witness in length-lex order, or None when the ball
    is exhausted.
    """
    set_a = list(set_a)
    target = {t.word for t in set_b}
    if len(set_a) != len(target):
        return None
    sys = set_a[0].system
    if within is not None:
        candidates = subgroup_elements_in_ball(within, radius)
    else:
        candidates, _ = ball(sys, radius)
    for u in candidates:
        uinv = u.inverse()
        if {(u * t * uinv).word for t in set_a} == target:
            return u
    return None
