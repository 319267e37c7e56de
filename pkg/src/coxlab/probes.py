"""Desk-scale probes for definability and stability phenomena.

Each probe has a *structural* decision procedure (exact on its stated
scope) and, where it matters, a bounded brute-force twin used only for
cross-validation.  Bounded results carry the radius they were computed
at; structural results do not need one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .system import CoxeterSystem
from .words import (
    GroupElement,
    ball,
    conjugacy_class_closure,
    cyclic_reduce,
    cyclic_root,
    element_order,
    generators,
    identity,
    is_reflection,
    normalize,
    support,
)
from .walls import core_letter
from .endo import (
    Endo,
    F2LinearMap,
    _mask_rank,
    _require_universal,
    classify,
    complexity_matrix,
    enumerate_sims,
    plus_coordinates,
)


class ProbeScopeError(ValueError):
    """The probe's structural preconditions do not hold for this input."""


class ProbeVerificationError(RuntimeError):
    """A constructed certificate failed re-verification."""


def _as_element(sys: CoxeterSystem, x) -> GroupElement:
    return x if isinstance(x, GroupElement) else normalize(sys, x)


# ---------------------------------------------------------------------------
# basis-likeness of involution tuples

@dataclass
class PhiGammaReport:
    satisfied: bool
    failing_clause: str | None      # "involution" | "pattern" | "independence"
    witness: tuple | None
    linear_map: F2LinearMap | None  # letter -> clique core, as GF(2) columns
    basis_words: tuple | None       # the induced clique-word basis

    def __bool__(self):
        return self.satisfied


def phi_gamma_check(sys: CoxeterSystem, elements) -> PhiGammaReport:
    """Structural test: does the tuple behave like a reflection basis?

    Involutions whose commutation pattern reproduces the graph and whose
    conjugacy data (clique cores) are independent over GF(2).  A positive
    answer comes with the induced graph self-map and the clique-word
    basis it generates.
    """
    if not sys.right_angled:
        raise ProbeScopeError("basis-likeness probe needs a right-angled system")
    xs = [_as_element(sys, x) for x in elements]
    n = sys.rank
    if len(xs) != n:
        raise ProbeScopeError("need exactly one element per generator")

    masks = []
    for i, x in enumerate(xs):
        if element_order(x) != 2:
            return PhiGammaReport(False, "involution", (i,), None, None)
        _, core = cyclic_reduce(x)
        mask = 0
        for s in support(core):
            mask |= 1 << s
        masks.append(mask)

    for i in range(n):
        for j in range(i + 1, n):
            if xs[i] == xs[j]:
                return PhiGammaReport(False, "pattern", (i, j), None, None)
            commute = (xs[i] * xs[j]) == (xs[j] * xs[i])
            if commute != bool(sys.comm[i][j]):
                return PhiGammaReport(False, "pattern", (i, j), None, None)

    if _mask_rank(masks) < n:
        return PhiGammaReport(False, "independence", tuple(masks), None, None)

    lm = F2LinearMap(n, tuple(masks))
    basis = []
    for i, mask in enumerate(masks):
        letters = [s for s in range(n) if mask >> s & 1]
        basis.append(GroupElement(sys, bytes(letters)))
    # the map must land in the graph's clique-map monoid; with the three
    # clauses established this is forced, so a failure here is a bug
    for i in range(n):
        for j in range(i + 1, n):
            if sys.comm[i][j]:
                merged = masks[i] | masks[j]
                for a in range(n):
                    if not merged >> a & 1:
                        continue
                    for b in range(a + 1, n):
                        if merged >> b & 1 and not sys.comm[a][b]:
                            raise ProbeVerificationError(
                                "clique preservation failed on edge "
                                f"({sys.names[i]},{sys.names[j]})")
    for i in range(n):
        for j in range(i + 1, n):
            want = 2 if sys.comm[i][j] else math.inf
            got = element_order(basis[i] * basis[j])
            if got != want:
                raise ProbeVerificationError(
                    f"induced basis has wrong order on pair ({i},{j})")
    return PhiGammaReport(True, None, None, lm, tuple(basis))


def phi_gamma_bounded(sys: CoxeterSystem, elements, radius: int,
                      _memo: dict | None = None) -> bool:
    """Bounded-quantifier reading of the same clauses: the final clause's
    existential block ranges over B_radius, evaluated by set saturation
    instead of nested loops."""
    if not sys.right_angled:
        raise ProbeScopeError("basis-likeness probe needs a right-angled system")
    xs = [_as_element(sys, x) for x in elements]
    n = sys.rank
    if len(xs) != n:
        raise ProbeScopeError("need exactly one element per generator")
    for x in xs:
        if x.is_identity() or not (x * x).is_identity():
            return False
    for i in range(n):
        for j in range(i + 1, n):
            if xs[i] == xs[j]:
                return False
            commute = (xs[i] * xs[j]) == (xs[j] * xs[i])
            if commute != bool(sys.comm[i][j]):
                return False

    memo = _memo if _memo is not None else {}
    dom, _ = ball(sys, radius)

    def conjugates(x: GroupElement) -> frozenset:
        key = ("conj", radius, x.word)
        got = memo.get(key)
        if got is None:
            got = frozenset((y.inverse() * x * y) for y in dom)
            memo[key] = got
        return got

    conj_sets = [conjugates(x) for x in xs]
    for ell in range(n):
        rest = [j for j in range(n) if j != ell]
        key = ("prod", radius) + tuple(xs[j].word for j in rest)
        prods = memo.get(key)
        if prods is None:
            prods = {identity(sys)}
            for j in rest:
                nxt = set(prods)
                for p in prods:
                    for c in conj_sets[j]:
                        nxt.add(p * c)
                prods = nxt
            memo[key] = prods
        if conj_sets[ell] & prods:
            return False
    return True


# ---------------------------------------------------------------------------
# reflection recognition

@dataclass
class PsiReport:
    value: bool
    element: GroupElement

    def __bool__(self):
        return self.value


def psi_reflection_check(x: GroupElement) -> PsiReport:
    """Structural answer to the involution-recognition sentence.

    Only valid when no closed star swallows another: on such systems the
    sentence picks out exactly the reflections, so we answer with the
    conjugation test and refuse anything else.
    """
    sys = x.system
    if not sys.right_angled:
        raise ProbeScopeError("reflection recognition needs a right-angled system")
    rep = sys.star_report()
    if not rep.star_property:
        raise ProbeScopeError(
            "closed star of %s contained in closed star of %s; "
            "recognition sentence not valid here" % rep.witness)
    return PsiReport(is_reflection(x) if not x.is_identity() else False, x)


def psi_bounded(x: GroupElement, radius: int) -> bool:
    """Same sentence with every quantifier relativized to B_radius."""
    sys = x.system
    dom, _ = ball(sys, radius)
    if x.is_identity() or not (x * x).is_identity():
        return False
    invol = [w for w in dom if not w.is_identity() and (w * w).is_identity()]
    comm_x = [z for z in invol if (z * x) == (x * z)]
    for y in invol:
        if y == x:
            continue
        if all((z * y) == (y * z) for z in comm_x):
            return False
    return True


# ---------------------------------------------------------------------------
# finite continuations

@dataclass
class FCReport:
    element: GroupElement
    radius: int
    elements: tuple
    pieces: int        # how many conjugate spherical parabolics were met

    def words(self):
        return tuple(e.word for e in self.elements)


def maximal_spherical_subsets(sys: CoxeterSystem):
    got = sys._cache.get("maxsph")
    if got is not None:
        return got
    n = sys.rank
    spherical = []
    for mask in range(1, 1 << n):
        letters = tuple(i for i in range(n) if mask >> i & 1)
        if sys.is_spherical_subset(letters):
            spherical.append(frozenset(letters))
    maximal = [J for J in spherical
               if not any(J < K for K in spherical)]
    got = tuple(tuple(sorted(J)) for J in maximal)
    sys._cache["maxsph"] = got
    return got


def spherical_subgroup_elements(sys: CoxeterSystem, letters, cap: int = 20000):
    key = ("sphsub", tuple(sorted(letters)))
    got = sys._cache.get(key)
    if got is not None:
        return got
    gens = [GroupElement(sys, bytes([s])) for s in sorted(letters)]
    seen = {identity(sys)}
    queue = list(seen)
    while queue:
        w = queue.pop()
        for g in gens:
            z = w * g
            if z not in seen:
                if len(seen) >= cap:
                    raise ProbeScopeError("parabolic is not desk-sized")
                seen.add(z)
                queue.append(z)
    got = tuple(sorted(seen, key=lambda e: e.sort_key()))
    sys._cache[key] = got
    return got


def finite_continuation(x: GroupElement, radius: int = 4) -> FCReport:
    """Intersection of all conjugates of maximal spherical parabolics that
    contain x, with conjugators drawn from B_radius.  An over-approximation
    of the true object, labeled by the radius."""
    sys = x.system
    order = element_order(x)
    if order is None or order is math.inf:
        raise ProbeScopeError("finite continuations need finite-order elements")
    dom, _ = ball(sys, radius)
    maxJ = maximal_spherical_subsets(sys)
    running = None
    pieces = 0
    for u in dom:
        ui = u.inverse()
        y = ui * x * u
        sup = support(y)
        for J in maxJ:
            if not sup <= set(J):
                continue
            members = frozenset(u * p * ui
                                for p in spherical_subgroup_elements(sys, J))
            pieces += 1
            running = members if running is None else (running & members)
    elements = () if running is None else tuple(
        sorted(running, key=lambda e: e.sort_key()))
    return FCReport(x, radius, elements, pieces)


# ---------------------------------------------------------------------------
# commutation domains

@dataclass
class DomainReport:
    kind: str                      # "witness" | "certified-negative" | "exhausted"
    witness: GroupElement | None
    reason: str | None
    radius: int

    def __bool__(self):
        return self.kind == "witness"


def domain_check(x: GroupElement, y: GroupElement, radius: int = 4,
                 class_margin: int = 2, class_budget: int = 200_000) -> DomainReport:
    """Search for g with [x, y^g] != e; certify the negative when the
    structure rules every g out."""
    sys = x.system
    if y.system is not sys and y.system != sys:
        raise ProbeScopeError("elements live in different systems")
    if x.is_identity() or y.is_identity():
        raise ProbeScopeError("identity has empty commutation content")

    comps = sys.delta_components()
    comp_of = {}
    for k, comp in enumerate(comps):
        for s in comp:
            comp_of[s] = k
    cx = {comp_of[s] for s in support(x)}
    cy = {comp_of[s] for s in support(y)}
    if not (cx & cy):
        return DomainReport(
            "certified-negative", None,
            "supports lie in disjoint diagram components, which commute "
            "elementwise and are stable under conjugation", radius)

    dom, _ = ball(sys, radius)
    for g in dom:
        yg = y.conjugate_by(g.inverse())      # g^-1 y g
        if (x * yg) != (yg * x):
            return DomainReport("witness", g, None, radius)

    try:
        seen, complete = conjugacy_class_closure(
            y, max_length=y.length + class_margin, budget=class_budget)
    except Exception:
        seen, complete = {}, False
    if complete:
        for word, h in seen.items():
            m = GroupElement(sys, word)       # m = h y h^-1 = y^(h^-1)
            if (x * m) != (m * x):
                return DomainReport("witness", h.inverse(),
                                    "found through class closure, outside "
                                    "the search ball", radius)
        return DomainReport(
            "certified-negative", None,
            "conjugacy class of y exhausted (%d members), all commuting "
            "with x" % len(seen), radius)
    return DomainReport("exhausted", None,
                        "no witness in B_%d; class not exhausted" % radius,
                        radius)


# ---------------------------------------------------------------------------
# rigidity at an element

@dataclass
class RigidityReport:
    element: GroupElement
    complexity_cap: int
    depth_cap: int
    total_enumerated: int
    kept: int                      # sims surviving the complexity filter
    proper_fixing: tuple
    autos_fixing: int

    @property
    def rigid(self) -> bool:
        return not self.proper_fixing


def rigidity_check(h: GroupElement, complexity_cap: int,
                   depth_cap: int | None = None) -> RigidityReport:
    """Enumerate self-similarities whose complexity entries stay at or
    under the cap and report the proper ones fixing h."""
    sys = h.system
    if not sys.right_angled:
        raise ProbeScopeError("rigidity probe needs a right-angled system")
    rep = sys.star_report()
    if not rep.star_property:
        raise ProbeScopeError(
            "closed star of %s contained in closed star of %s" % rep.witness)
    if depth_cap is None:
        # a complexity entry of c needs walls at most c+1 chambers deep
        depth_cap = complexity_cap + 1
    if depth_cap > 12:
        raise ProbeScopeError("enumeration cap exceeded: depth %d" % depth_cap)
    sims = enumerate_sims(sys, depth_cap)
    kept = []
    for alpha in sims:
        cm = complexity_matrix(alpha)
        worst = max((cm[i, j] for i in range(sys.rank)
                     for j in range(i + 1, sys.rank)), default=0)
        if worst <= complexity_cap:
            kept.append(alpha)
    proper = tuple(a for a in kept
                   if a.kind == "sim-proper" and a.apply(h) == h)
    autos = sum(1 for a in kept
                if a.kind == "automorphism" and a.apply(h) == h)
    return RigidityReport(h, complexity_cap, depth_cap, len(sims),
                          len(kept), proper, autos)


# ---------------------------------------------------------------------------
# unsuperstability trees

@dataclass(frozen=True)
class PoolEntry:
    index: int
    exponents: tuple               # (p, q): the element is u^p v^q
    element: GroupElement


@dataclass
class TreeWitness:
    system: CoxeterSystem
    n: int
    depth: int
    branching: int
    basis: tuple                   # free generators (u, v) of the even subgroup
    pool: tuple                    # PoolEntry per index
    nodes: dict                    # eta -> GroupElement, |eta| in 1..depth+1
    purity_radius: int
    pair_radius: int
    clause_e_checked: int
    clause_f_sets: dict            # eta -> tuple of surviving pool indices

    @property
    def max_branch_overlap(self) -> int:
        return max((len(v) for v in self.clause_f_sets.values()), default=0)

    @property
    def ok(self) -> bool:
        return all(len(v) <= 1 for v in self.clause_f_sets.values())


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _nth_root(g: GroupElement, n: int):
    """The unique z with z^n = g in a right-angled irreducible system, for
    odd n; None when no root exists."""
    if g.is_identity():
        return identity(g.system)
    order = element_order(g)
    if order == 2:
        return g                            # z^n = z for involutions, n odd
    dec = cyclic_root(g)
    if dec.exponent % n:
        return None
    r = dec.root ** (dec.exponent // n)
    return dec.conjugator * r * dec.conjugator.inverse()


def _w_eval(z: GroupElement, ys, n: int) -> GroupElement:
    """w_0(z) = z and each further stage wraps: prepend a coefficient to the
    n-th power of the inner value."""
    acc = z
    for y in reversed(list(ys)):
        acc = y * (acc ** n)
    return acc


def _phi_decide(b: GroupElement, ys, n: int):
    """Decide the stage-|ys| membership condition for b exactly, returning
    the (unique) inner seed z, or None.

    Peels one coefficient per stage and extracts an n-th root; root
    uniqueness for odd n makes the procedure complete.  The side conditions
    (no stage value is torsion on the way down) collapse to being nonidentity.
    """
    if b.is_identity():
        return None
    acc = b
    for y in ys:
        root = _nth_root(y.inverse() * acc, n)
        if root is None or root.is_identity():
            return None
        acc = root
    return acc


def _abelianized_pair(h: GroupElement):
    """Exponent sums of an even-length element in the doubled letters."""
    v = {}
    for idx, e in plus_coordinates(h):
        v[idx] = v.get(idx, 0) + e
    return (v.get(1, 0), v.get(2, 0))


def unsuperstability_tree(sys: CoxeterSystem, n: int = 5, depth: int = 2,
                          branching: int = 3, purity_radius: int = 5,
                          pair_radius: int = 4) -> TreeWitness:
    """Materialize a finite fragment of the branching witness family.

    The ambient free subgroup is the even-length subgroup (free of rank 2
    on u = s0 s1, v = s0 s2).  Pool elements are positive words u^p v^q
    with pairwise distinct exponent pairs mod n; both hypotheses on the
    pool are certified structurally and re-verified by bounded search
    before any node is built.
    """
    _require_universal(sys)
    if sys.rank != 3:
        raise ProbeScopeError("tree construction is calibrated for rank 3")
    if not _is_prime(n) or n < 3:
        raise ProbeScopeError("stage exponent must be an odd prime "
                              "(it must clear the even-subgroup index and "
                              "every finite subgroup order)")
    if depth < 1 or branching < 2:
        raise ProbeScopeError("need depth >= 1 and branching >= 2")
    pool_size = branching * (depth + 1)
    if pool_size > n * n - 1:
        raise ProbeScopeError(
            "pool of %d exceeds the %d distinct nonzero exponent pairs "
            "mod %d" % (pool_size, n * n - 1, n))

    u = normalize(sys, bytes([0, 1]))
    v = normalize(sys, bytes([0, 2]))

    pool = []
    pairs = [(p, q) for p in range(n) for q in range(n)][1:]
    for idx in range(pool_size):
        p, q = pairs[idx]
        pool.append(PoolEntry(idx, (p, q), (u ** p) * (v ** q)))
    pool = tuple(pool)

    # pool hypothesis 1: differences are never products of two n-th powers.
    # Certificate: images in Z^2 stay distinct mod n, while any x^n y^n
    # lands in n Z^2.  Re-verified by exhausting pairs from the ball.
    for i in range(pool_size):
        for j in range(pool_size):
            if i == j:
                continue
            d1 = [(a - b) % n for a, b in zip(pool[j].exponents,
                                              pool[i].exponents)]
            if d1 == [0, 0]:
                raise ProbeVerificationError(
                    "difference certificate failed on pool pair "
                    f"({i},{j}): exponents collide mod {n}")
    dom, _ = ball(sys, pair_radius)
    even_ball = [g for g in dom if g.length % 2 == 0]
    power_products = set()
    npow = {g: g ** n for g in even_ball}
    for g1 in even_ball:
        for g2 in even_ball:
            power_products.add(npow[g1] * npow[g2])
    for i in range(pool_size):
        for j in range(pool_size):
            if i != j:
                diff = pool[i].element.inverse() * pool[j].element
                if diff in power_products:
                    raise ProbeVerificationError(
                        "bounded search found a two-power product equal to "
                        f"a pool difference ({i},{j})")

    # pool hypothesis 2: index sequences never multiply to the identity.
    # Certificate: positive words in (u, v) are nonempty reduced words of
    # the free subgroup.  Spot-checked on all products of length <= 3.
    for entry in pool:
        if entry.element.is_identity():
            raise ProbeVerificationError("pool entry %d is trivial" % entry.index)
    els = [entry.element for entry in pool]
    layer = [identity(sys)]
    for _ in range(3):
        layer = [w * a for w in layer for a in els]
        if any(w.is_identity() for w in layer):
            raise ProbeVerificationError("a pool product collapsed to e")

    # n-th power map over the ball: purity and root-count spot check
    pured, _ = ball(sys, purity_radius)
    buckets = {}
    for g in pured:
        h = g ** n
        buckets.setdefault(h, []).append(g)
        if h.length % 2 == 0 and g.length % 2 != 0:
            raise ProbeVerificationError(
                "purity spot check failed: odd element with even n-th power")
    for h, gs in buckets.items():
        if not h.is_identity() and h.length % 2 == 0 and len(gs) > 1:
            raise ProbeVerificationError(
                "root-count spot check failed at %r" % (h,))

    # nodes: b_eta for increasing sequences, children take the next
    # `branching` indices
    nodes = {}
    frontier = [()]
    for _ in range(depth + 1):
        nxt = []
        for nu in frontier:
            start = nu[-1] + 1 if nu else 0
            for i in range(start, min(start + branching, pool_size)):
                eta = nu + (i,)
                ys = [pool[k].element for k in eta[:-1]]
                nodes[eta] = _w_eval(pool[eta[-1]].element, ys, n)
                nxt.append(eta)
        frontier = nxt

    # clause (e): every prefix stage accepts the node, constructively
    checked = 0
    for eta, b in nodes.items():
        m = len(eta) - 1
        for cut in range(m + 1):
            ys_prefix = [pool[k].element for k in eta[:cut]]
            inner = _w_eval(pool[eta[-1]].element,
                            [pool[k].element for k in eta[cut:-1]], n)
            if _w_eval(inner, ys_prefix, n) != b:
                raise ProbeVerificationError(
                    "stage decomposition failed at node %r cut %d" % (eta, cut))
            z = _phi_decide(b, ys_prefix, n)
            if z is None or z != inner:
                raise ProbeVerificationError(
                    "stage membership failed at node %r cut %d" % (eta, cut))
            checked += 1

    # clause (f): siblings almost never share a node, m(n) = 1 form
    clause_f = {}
    for eta, b in nodes.items():
        if len(eta) < 2:
            continue
        nu = eta[:-2]
        prefix = [pool[k].element for k in nu]
        hits = []
        for entry in pool:
            if _phi_decide(b, prefix + [entry.element], n) is not None:
                hits.append(entry.index)
        clause_f[eta] = tuple(hits)
        if len(hits) > 1:
            raise ProbeVerificationError(
                "branch overlap at node %r: stages %r all accept" % (eta, hits))

    return TreeWitness(sys, n, depth, branching, (u, v), pool, nodes,
                       purity_radius, pair_radius, checked, clause_f)


# ---------------------------------------------------------------------------
# basis recognition in even 2-spherical systems

@dataclass
class Delta2Report:
    ok: bool
    clause: str | None
    detail: str | None

    def __bool__(self):
        return self.ok


def delta_2spherical_check(sys: CoxeterSystem, elements) -> Delta2Report:
    """Reflection-and-orders test for candidate tuples, on the scope where
    it characterizes bases: irreducible, every pair spherical, all labels
    even, and not of affine type."""
    if not sys.is_irreducible():
        raise ProbeScopeError("scope: irreducible systems only")
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            m = sys.pair_order(i, j)
            if m is math.inf:
                raise ProbeScopeError("scope: every pair must be spherical")
            if m % 2 == 1:
                raise ProbeScopeError("scope: labels must be even")
    kinds = [c.kind for c in sys.classify().components]
    if kinds == ["affine"]:
        raise ProbeScopeError("scope: affine systems excluded")
    xs = [_as_element(sys, x) for x in elements]
    if len(xs) != sys.rank:
        raise ProbeScopeError("need exactly one element per generator")
    for i, x in enumerate(xs):
        if not is_reflection(x):
            return Delta2Report(False, "reflection",
                                "entry %d is not a reflection" % i)
    cutoff = 4 * sys.max_finite_label()
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            got = element_order(xs[i] * xs[j], cutoff=cutoff)
            want = sys.pair_order(i, j)
            if got != want:
                # None = no power hit e within the cutoff; since every
                # matrix label sits below the cutoff, the mismatch stands
                shown = got if got is not None else "beyond cutoff %d" % cutoff
                return Delta2Report(
                    False, "orders",
                    "pair (%d,%d) has order %s, expected %s"
                    % (i, j, shown, want))
    return Delta2Report(True, None, None)
