"""Concrete lattice-by-finite models of the irreducible affine types.

An :class:`AffineGroup` is Z^d acted on by a finite matrix group W0;
elements are pairs (v, q) multiplying by (v1, q1)(v2, q2) =
(v1 + theta(q1) v2, q1 q2).  Built-in models for the two desk types ship
with validated generator images; everything else goes through the custom
constructor, which re-verifies the group axioms, the homomorphism law,
integer invertibility, and the declared Coxeter relations.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .system import CoxeterSystem
from .words import ball as word_ball
from .words import parse_word


class AffineModelError(ValueError):
    pass


def _mat_mul(A, B):
    d = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(d))
                       for j in range(d)) for i in range(d))


def _mat_vec(A, v):
    d = len(A)
    return tuple(sum(A[i][k] * v[k] for k in range(d)) for i in range(d))


def _identity_matrix(d):
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def _int_det(A) -> int:
    d = len(A)
    if d == 1:
        return A[0][0]
    total = 0
    for perm in itertools.permutations(range(d)):
        sign = 1
        for i in range(d):
            for j in range(i + 1, d):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(d):
            term *= A[i][perm[i]]
        total += term
    return total


@dataclass(frozen=True)
class AffineElement:
    group: "AffineGroup"
    v: tuple
    q: int

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        g = self.group
        if other.group is not g:
            raise AffineModelError("elements from different models")
        theta = g.theta[self.q]
        vec = tuple(a + b for a, b in zip(self.v, _mat_vec(theta, other.v)))
        return AffineElement(g, vec, g.table[self.q][other.q])

    def inverse(self) -> "AffineElement":
        g = self.group
        qi = g.inv[self.q]
        return AffineElement(g, tuple(-x for x in _mat_vec(g.theta[qi], self.v)), qi)

    def __pow__(self, k: int) -> "AffineElement":
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.group.identity()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    @property
    def is_identity(self) -> bool:
        return self.q == 0 and not any(self.v)

    def key(self):
        return (self.v, self.q)

    def __repr__(self):
        return f"({list(self.v)}, q{self.q})"

    def __hash__(self):
        return hash((self.v, self.q))

    def __eq__(self, other):
        return (isinstance(other, AffineElement) and self.v == other.v
                and self.q == other.q and self.group is other.group)


class AffineGroup:
    """Validated semidirect model tied to a Coxeter system for word input."""

    def __init__(self, system: CoxeterSystem, d: int, table, theta, images,
                 label: str = "custom"):
        self.system = system
        self.d = d
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.theta = tuple(
            tuple(tuple(int(x) for x in row) for row in M) for M in theta)
        self.label = label
        self.order0 = len(self.table)
        self._validate_group_table()
        self.inv = tuple(self.table[q].index(0) for q in range(self.order0))
        self._validate_theta()
        self.images = {}
        for name, (vec, q) in images.items():
            if name not in system.index:
                raise AffineModelError("image for unknown generator %r" % name)
            self.images[name] = AffineElement(self, tuple(int(x) for x in vec),
                                              int(q))
        if len(self.images) != system.rank:
            raise AffineModelError("need an image for every generator")
        self.sign = tuple(_int_det(self.theta[q]) for q in range(self.order0))
        self._validate_relations()

    # -- validation ---------------------------------------------------------

    def _validate_group_table(self):
        n = self.order0
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise AffineModelError("multiplication table rows must permute")
        if any(self.table[0][j] != j or self.table[j][0] != j for j in range(n)):
            raise AffineModelError("index 0 must be the identity")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise AffineModelError("table is not associative")
        for a in range(n):
            if 0 not in self.table[a]:
                raise AffineModelError("element %d has no inverse" % a)

    def _validate_theta(self):
        n = self.order0
        if len(self.theta) != n:
            raise AffineModelError("need one matrix per finite-part element")
        if self.theta[0] != _identity_matrix(self.d):
            raise AffineModelError("theta must send the identity to I")
        for q in range(n):
            if _int_det(self.theta[q]) not in (1, -1):
                raise AffineModelError(
                    "theta(q%d) is not invertible over the integers" % q)
            for r in range(n):
                if _mat_mul(self.theta[q], self.theta[r]) != self.theta[self.table[q][r]]:
                    raise AffineModelError("theta is not a homomorphism")

    def _validate_relations(self):
        sysm = self.system
        e = self.identity()
        for name in sysm.names:
            g = self.images[name]
            if (g * g) != e:
                raise AffineModelError("image of %s is not an involution" % name)
        for i in range(sysm.rank):
            for j in range(i + 1, sysm.rank):
                m = sysm.pair_order(i, j)
                if m is math.inf:
                    continue
                g = self.images[sysm.names[i]] * self.images[sysm.names[j]]
                if (g ** int(m)) != e:
                    raise AffineModelError(
                        "relation (%s%s)^%d fails in the model"
                        % (sysm.names[i], sysm.names[j], m))

    # -- basic API ------------------------------------------------------------

    def identity(self) -> AffineElement:
        return AffineElement(self, (0,) * self.d, 0)

    def translation(self, vec) -> AffineElement:
        return AffineElement(self, tuple(int(x) for x in vec), 0)

    def from_word(self, text) -> AffineElement:
        word = text if isinstance(text, (bytes, bytearray)) else \
            parse_word(self.system, text)
        acc = self.identity()
        for s in word:
            acc = acc * self.images[self.system.names[s]]
        return acc

    def __repr__(self):
        return f"AffineGroup({self.label}, d={self.d}, |W0|={self.order0})"


def _closure_table(mats):
    """Index the group generated by the given matrices; 0 is the identity."""
    d = len(mats[0])
    elems = [_identity_matrix(d)]
    index = {elems[0]: 0}
    frontier = [elems[0]]
    while frontier:
        nxt = []
        for M in frontier:
            for g in mats:
                P = _mat_mul(M, g)
                if P not in index:
                    index[P] = len(elems)
                    elems.append(P)
                    nxt.append(P)
                    if len(elems) > 2000:
                        raise AffineModelError("finite part failed to close")
        frontier = nxt
    n = len(elems)
    table = [[index[_mat_mul(elems[a], elems[b])] for b in range(n)]
             for a in range(n)]
    return elems, table


def build_affine(kind: str) -> AffineGroup:
    """Standard lattice realizations of the two desk types."""
    kind = kind.strip().lower().replace("~", "")
    if kind in ("a1", "ã1"):
        system = CoxeterSystem.universal(["a", "b"])
        table = [[0, 1], [1, 0]]
        theta = [_identity_matrix(1), ((-1,),)]
        images = {"a": ((0,), 1), "b": ((1,), 1)}
        return AffineGroup(system, 1, table, theta, images, label="A1~")
    if kind in ("a2", "ã2"):
        system = CoxeterSystem.from_pairs(
            ("a", "b", "c"), {("a", "b"): 3, ("a", "c"): 3, ("b", "c"): 3})
        m1 = ((-1, 1), (0, 1))      # reflection in the first simple root
        m2 = ((1, 0), (1, -1))      # reflection in the second
        m0 = ((0, -1), (-1, 0))     # reflection in the highest root
        elems, table = _closure_table([m1, m2])
        if len(elems) != 6:
            raise AffineModelError("point group of A2~ should have order 6")
        idx = {M: k for k, M in enumerate(elems)}
        images = {"a": ((0, 0), idx[m1]),
                  "b": ((0, 0), idx[m2]),
                  "c": ((1, 1), idx[m0])}
        return AffineGroup(system, 2, table, elems, images, label="A2~")
    raise AffineModelError("unknown built-in type %r" % kind)


def build_custom(system: CoxeterSystem, d: int, table, theta, images) -> AffineGroup:
    return AffineGroup(system, d, table, theta, images)


# ---------------------------------------------------------------------------
# sign character

@dataclass
class SignReport:
    sign: int
    in_kernel: bool


def epsilon(g: AffineElement) -> int:
    """The sign character: -1 on every generator image, so det of the
    linear part on anything reached by words."""
    return g.group.sign[g.q]


def epsilon_and_kernel(g) -> SignReport:
    s = epsilon(g)
    return SignReport(s, s == 1)


def kernel_index(group: AffineGroup, radius: int = 6):
    """Count cosets of ker(epsilon) among the model images of B_radius."""
    elements, _ = word_ball(group.system, radius)
    reps: list[AffineElement] = []
    for w in elements:
        g = group.from_word(w.word)
        if not any(epsilon(r.inverse() * g) == 1 for r in reps):
            reps.append(g)
    return len(reps), reps


# ---------------------------------------------------------------------------
# reflection length

@dataclass
class ReflectionLengthResult:
    value: int | None
    found: bool
    translation_bound: int
    reflections: int
    depth_cap: int
    note: str | None = None


def model_reflections(group: AffineGroup, translation_bound: int):
    """Involutions (v, q) whose linear part fixes a hyperplane; v runs over
    the -1 eigenlattice box of the given radius."""
    out = []
    d = group.d
    for q in range(1, group.order0):
        if group.table[q][q] != 0:
            continue
        theta = group.theta[q]
        fixed_rank = _rank_int([[theta[i][j] - (1 if i == j else 0)
                                 for j in range(d)] for i in range(d)])
        if fixed_rank != 1:
            continue
        for vec in itertools.product(range(-translation_bound,
                                           translation_bound + 1), repeat=d):
            if _mat_vec(theta, vec) == tuple(-x for x in vec):
                out.append(AffineElement(group, tuple(vec), q))
    return out


def _rank_int(rows) -> int:
    from fractions import Fraction
    m = [[Fraction(x) for x in row] for row in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for col in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def reflection_distance_map(group: AffineGroup, translation_bound: int,
                            depth_cap: int = 5):
    """BFS distances from the identity in the reflection generating set."""
    refl = model_reflections(group, translation_bound)
    dist = {group.identity(): 0}
    frontier = [group.identity()]
    for depth in range(1, depth_cap + 1):
        nxt = []
        for g in frontier:
            for r in refl:
                h = g * r
                if h not in dist:
                    dist[h] = depth
                    nxt.append(h)
        frontier = nxt
    return dist, len(refl)


def affine_reflection_length(g: AffineElement, translation_bound: int,
                             depth_cap: int = 5) -> ReflectionLengthResult:
    group = g.group
    if g.is_identity:
        return ReflectionLengthResult(0, True, translation_bound, 0, depth_cap)
    refl = model_reflections(group, translation_bound)
    seen = {group.identity()}
    frontier = [group.identity()]
    for depth in range(1, depth_cap + 1):
        nxt = []
        for h in frontier:
            for r in refl:
                p = h * r
                if p == g:
                    return ReflectionLengthResult(depth, True,
                                                  translation_bound,
                                                  len(refl), depth_cap)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return ReflectionLengthResult(
        None, False, translation_bound, len(refl), depth_cap,
        note="not reached; try a larger translation bound or depth cap")


@dataclass
class LengthProfile:
    radius: int
    translation_bound: int
    per_element: dict
    max_length: int
    stabilized: bool           # same max on the previous ball


def reflection_length_profile(group: AffineGroup, radius: int = 8,
                              translation_bound: int | None = None,
                              depth_cap: int = 5) -> LengthProfile:
    """Reflection lengths of every model image of B_radius, with the
    boundedness evidence the desk can give: the max stops moving."""
    if translation_bound is None:
        translation_bound = radius + 1
    elements, spheres = word_ball(group.system, radius)
    dist, _ = reflection_distance_map(group, translation_bound, depth_cap)
    per = {}
    prev_cut = sum(spheres[:-1])
    max_prev = 0
    max_all = 0
    for k, w in enumerate(elements):
        g = group.from_word(w.word)
        if g not in dist:
            raise AffineModelError(
                "reflection search bounds too small for %r" % (g,))
        per[w.word] = dist[g]
        max_all = max(max_all, dist[g])
        if k < prev_cut:
            max_prev = max(max_prev, dist[g])
    return LengthProfile(radius, translation_bound, per, max_all,
                         stabilized=(max_all == max_prev))


def involution_generation_check(group: AffineGroup, radius: int = 6,
                                translation_bound: int | None = None) -> bool:
    """Every element of the word ball is a bounded product of reflections;
    the finite shadow of the reflections generating everything."""
    profile = reflection_length_profile(group, radius, translation_bound)
    return all(v <= profile.max_length for v in profile.per_element.values())


# ---------------------------------------------------------------------------
# interpretation into the integers

@dataclass
class InterpretationReport:
    group: AffineGroup
    code_length: int
    parameters: int
    roundtrip_checked: int
    pairs_checked: int
    ok: bool


def encode(g: AffineElement):
    """Integer code: lattice coordinates followed by the finite-part tag."""
    return g.v + (g.q,)


def decode(group: AffineGroup, code) -> AffineElement:
    *vec, q = code
    return AffineElement(group, tuple(int(x) for x in vec), int(q))


def code_multiply(group: AffineGroup, a, b):
    """Multiplication on codes using only the parameter matrices: the tag
    of the left factor selects the matrix block, c_i = a_i + sum_j
    theta[tag]_ij b_j, and the tag table finishes the job."""
    d = group.d
    qa, qb = a[d], b[d]
    theta = group.theta[qa]
    vec = tuple(a[i] + sum(theta[i][j] * b[j] for j in range(d))
                for i in range(d))
    return vec + (group.table[qa][qb],)


def interpret_in_Z(group: AffineGroup, radius: int = 6, pairs: int = 500,
                   seed: int = 0) -> InterpretationReport:
    elements, _ = word_ball(group.system, radius)
    models = [group.from_word(w.word) for w in elements]
    checked = 0
    for g in models:
        if decode(group, encode(g)) != g:
            return InterpretationReport(group, group.d + 1, 0, checked, 0, False)
        checked += 1
    rng = random.Random(seed)
    span = 10
    done = 0
    for _ in range(pairs):
        x = AffineElement(group,
                          tuple(rng.randint(-span, span) for _ in range(group.d)),
                          rng.randrange(group.order0))
        y = AffineElement(group,
                          tuple(rng.randint(-span, span) for _ in range(group.d)),
                          rng.randrange(group.order0))
        if code_multiply(group, encode(x), encode(y)) != encode(x * y):
            return InterpretationReport(group, group.d + 1, 0, checked, done, False)
        done += 1
    params = group.order0 * group.d * group.d + group.order0 * group.order0
    return InterpretationReport(group, group.d + 1, params, checked, done, True)
