"""Self-similar endomorphisms: membership, composition, complexity,
partial conjugations, clique-preserving linear maps, and the determinant
obstruction on universal systems.

A self-similarity sends each generator to a conjugate of itself while
preserving all pairwise product orders.  In even systems these maps are
injective, an automorphism exactly when the images generate everything,
and each one carries a complexity matrix: pairwise wall distances of the
canonical generating set of the image subgroup.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _iproduct

from .system import CoxeterSystem, INF_CODE
from .words import (
    GroupElement,
    element_order,
    general_reflection_core,
    generators,
    identity,
    normalize,
)
from .walls import (
    canonical_generators,
    core_letter,
    enumerate_reflections,
    is_reflection_element,
    subgroup_contains,
    wall_distance,
)


# ---------------------------------------------------------------------------
# endomorphisms given by generator images

class Endo:
    __slots__ = ("system", "images", "kind")

    def __init__(self, system: CoxeterSystem, images, kind: str = "unknown"):
        images = tuple(images)
        if len(images) != system.rank:
            raise ValueError("one image per generator required")
        self.system = system
        self.images = images
        self.kind = kind

    def apply(self, x: GroupElement) -> GroupElement:
        out = identity(self.system)
        for s in x.word:
            out = out * self.images[s]
        return out

    def compose(self, other: "Endo") -> "Endo":
        """self after other (apply `other` first)."""
        if self.system.key != other.system.key:
            raise ValueError("system mismatch")
        images = tuple(self.apply(im) for im in other.images)
        return Endo(self.system, images, "unknown")

    def is_identity_map(self) -> bool:
        return all(im.word == bytes([i]) for i, im in enumerate(self.images))

    def __eq__(self, other):
        return (isinstance(other, Endo)
                and self.system.key == other.system.key
                and self.images == other.images)

    def __hash__(self):
        return hash(tuple(im.word for im in self.images))

    def __repr__(self):
        body = ", ".join(f"{self.system.names[i]}->{im}"
                         for i, im in enumerate(self.images))
        return f"Endo[{self.kind}]({body})"


def identity_endo(sys: CoxeterSystem) -> Endo:
    return Endo(sys, generators(sys), "automorphism")


def parse_endo(sys: CoxeterSystem, text: str) -> Endo:
    """Lines `map <generator> = <word>`; unmapped generators stay fixed."""
    images = list(generators(sys))
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split(None, 1)
        if parts[0] != "map" or "=" not in parts[1]:
            raise ValueError(f"bad endo line: {ln!r}")
        name, word = (p.strip() for p in parts[1].split("=", 1))
        if name not in sys.index:
            raise ValueError(f"unknown generator {name!r}")
        images[sys.index[name]] = normalize(sys, word)
    return Endo(sys, images)


# ---------------------------------------------------------------------------
# sim membership

@dataclass
class SimReport:
    endo: Endo
    is_sim: bool
    reason: str | None          # failing condition, or inconclusive note


def _image_in_own_class(sys: CoxeterSystem, s: int, im: GroupElement) -> bool:
    if sys.right_angled:
        return is_reflection_element(im) and core_letter(im) == s
    # general systems: reduce to a core letter, then compare letter classes
    # (letters are conjugate exactly when an odd-label path joins them)
    core = general_reflection_core(im)
    if core is None:
        return False
    ab = sys.abelianization()
    return ab.class_of[core] == ab.class_of[s]


def sim_check(sys: CoxeterSystem, images, order_cutoff: int | None = None) -> SimReport:
    """Verify both membership conditions: each image conjugate to its own
    generator, and all pairwise product orders preserved."""
    if isinstance(images, str):
        endo = parse_endo(sys, images)
    elif isinstance(images, Endo):
        endo = images
    else:
        endo = Endo(sys, [im if isinstance(im, GroupElement) else normalize(sys, im)
                          for im in images])
    for i, im in enumerate(endo.images):
        if not _image_in_own_class(sys, i, im):
            endo.kind = "unknown"
            return SimReport(endo, False,
                             f"image of {sys.names[i]} not conjugate to it")
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            want = sys.pair_order(i, j)
            got = element_order(endo.images[i] * endo.images[j],
                                cutoff=order_cutoff)
            if got is None:
                # cutoff exhausted without hitting the identity; certifies
                # neither the finite nor the infinite case
                endo.kind = "unknown"
                return SimReport(endo, False,
                                 f"order of image pair ({sys.names[i]},{sys.names[j]}) "
                                 "inconclusive at cutoff")
            if got != want:
                endo.kind = "unknown"
                return SimReport(endo, False,
                                 f"o(images of {sys.names[i]},{sys.names[j]}) = {got}, "
                                 f"need {want}")
    endo.kind = "sim"
    if sys.right_angled:
        cls = classify(endo)
        endo.kind = cls.kind
    return SimReport(endo, True, None)


# ---------------------------------------------------------------------------
# automorphism vs proper, with constructive inverse

@dataclass
class Classification:
    kind: str                       # "automorphism" | "sim-proper"
    inverse: Endo | None
    missing_generator: str | None


def _fold_with_path(refs, x: GroupElement):
    path = []
    improved = True
    while improved:
        improved = False
        for k, t in enumerate(refs):
            y = t * x
            if y.length < x.length:
                x = y
                path.append(k)
                improved = True
                break
    return x, path


def classify(endo: Endo) -> Classification:
    """Automorphism iff every generator folds into the image subgroup; the
    fold paths assemble a two-sided inverse."""
    sys = endo.system
    if not sys.right_angled:
        raise ValueError("classification needs a right-angled system")
    rep = canonical_generators(set(endo.images), validate=False)
    image_source = {}
    for i, im in enumerate(endo.images):
        image_source[im.word] = i
    inverse_images = []
    for i in range(sys.rank):
        s = GroupElement(sys, bytes([i]))
        folded, path = _fold_with_path(rep.generators, s)
        if not folded.is_identity():
            endo.kind = "sim-proper"
            return Classification("sim-proper", None, sys.names[i])
        # s = d_{k1} ... d_{km}; expand each canonical generator through the
        # originals and map back to source letters
        letters = []
        for k in path:
            for oi in rep.expressions[k]:
                letters.append(image_source[rep.originals[oi].word])
        inverse_images.append(normalize(sys, bytes(letters)))
    inv = Endo(sys, inverse_images, "automorphism")
    ok = all((endo.apply(inv.images[i])).word == bytes([i])
             and (inv.apply(endo.images[i])).word == bytes([i])
             for i in range(sys.rank))
    if not ok:
        raise RuntimeError("inverse certificate failed to verify")
    endo.kind = "automorphism"
    return Classification("automorphism", inv, None)


# ---------------------------------------------------------------------------
# complexity matrices

@dataclass
class ComplexityMatrix:
    entries: tuple                # rank x rank, symmetric, zero diagonal
    matched: tuple                # canonical generator matched to each letter

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def total(self) -> int:
        return sum(sum(row) for row in self.entries)

    def dominates(self, other: "ComplexityMatrix") -> bool:
        n = len(self.entries)
        return all(self.entries[i][j] >= other.entries[i][j]
                   for i in range(n) for j in range(n))

    def __eq__(self, other):
        return isinstance(other, ComplexityMatrix) and self.entries == other.entries

    def __repr__(self):
        return f"ComplexityMatrix({self.entries})"


def complexity_matrix(endo: Endo) -> ComplexityMatrix:
    """Geometrize the image set, match members to letters by conjugacy
    class (core letter: unique per class in even systems), and record the
    pairwise wall distances."""
    sys = endo.system
    if not sys.right_angled:
        raise ValueError("complexity needs an even (right-angled) system")
    rep = canonical_generators(set(endo.images), validate=False)
    by_core = {}
    for g in rep.generators:
        c = core_letter(g)
        if c in by_core:
            raise ValueError("two canonical generators share a class")
        by_core[c] = g
    if sorted(by_core) != list(range(sys.rank)):
        raise ValueError("canonical set does not cover every class")
    matched = tuple(by_core[i] for i in range(sys.rank))
    n = sys.rank
    entries = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            dij = wall_distance(matched[i], matched[j])
            entries[i][j] = dij
            entries[j][i] = dij
    return ComplexityMatrix(tuple(tuple(r) for r in entries), matched)


# ---------------------------------------------------------------------------
# partial conjugations

def closed_star(sys: CoxeterSystem, s: int) -> frozenset:
    return frozenset([s]) | frozenset(
        int(j) for j in range(sys.rank) if j != s and sys.comm[s, j])


def star_complement_components(sys: CoxeterSystem, s: int):
    """Connected components of the commutation graph minus the closed star."""
    removed = closed_star(sys, s)
    rest = [v for v in range(sys.rank) if v not in removed]
    seen = set()
    comps = []
    for v in rest:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            w = stack.pop()
            for u in rest:
                if u not in comp and sys.comm[w, u]:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def partial_conjugation(sys: CoxeterSystem, s, chunk) -> Endo:
    """Conjugate a union of components of the star complement by s."""
    if isinstance(s, str):
        s = sys.index[s]
    chunk = frozenset(sys.index[v] if isinstance(v, str) else v for v in chunk)
    comps = star_complement_components(sys, s)
    covered = set()
    for comp in comps:
        if comp & chunk:
            if not comp <= chunk:
                raise ValueError("chunk must be a union of components")
            covered |= comp
    if covered != chunk:
        raise ValueError("chunk must be a union of components")
    sref = GroupElement(sys, bytes([s]))
    images = []
    for t in range(sys.rank):
        g = GroupElement(sys, bytes([t]))
        images.append(sref * g * sref if t in chunk else g)
    return Endo(sys, images, "automorphism")


# ---------------------------------------------------------------------------
# invertible clique-preserving maps over GF(2)

@dataclass(frozen=True)
class F2LinearMap:
    rank: int
    columns: tuple              # columns[i] = bitmask image of basis vector i

    def apply_mask(self, mask: int) -> int:
        out = 0
        i = 0
        m = mask
        while m:
            if m & 1:
                out ^= self.columns[i]
            i += 1
            m >>= 1
        return out

    @property
    def is_permutation(self) -> bool:
        return (sorted(self.columns) == sorted(1 << i for i in range(self.rank)))

    def compose(self, other: "F2LinearMap") -> "F2LinearMap":
        return F2LinearMap(self.rank,
                           tuple(self.apply_mask(c) for c in other.columns))


def _mask_rank(masks) -> int:
    basis = []
    for m in masks:
        for b in basis:
            m = min(m, m ^ b)
        if m:
            basis.append(m)
    return len(basis)


def all_cliques(sys: CoxeterSystem):
    """Nonempty cliques of the commutation graph, as bitmasks."""
    out = []
    n = sys.rank
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        ok = all(sys.comm[a, b] for ai, a in enumerate(members)
                 for b in members[ai + 1:])
        if ok:
            out.append(mask)
    return out

def _is_clique_mask(sys, mask) -> bool:
    members = [i for i in range(sys.rank) if mask >> i & 1]
    return all(sys.comm[a, b] for ai, a in enumerate(members)
               for b in members[ai + 1:])


def enumerate_clique_maps(sys: CoxeterSystem, rank_cap: int = 6):
    """All invertible GF(2) maps sending every clique to a clique."""
    if not sys.right_angled:
        raise ValueError("clique maps need a right-angled system")
    n = sys.rank
    if n > rank_cap:
        raise ValueError(f"rank {n} above enumeration cap {rank_cap}")
    cliques = all_cliques(sys)
    out = []

    def extend(cols):
        i = len(cols)
        if i == n:
            f = F2LinearMap(n, tuple(cols))
            if all(_is_clique_mask(sys, f.apply_mask(c)) for c in cliques):
                out.append(f)
            return
        for cand in cliques:
            newcols = cols + [cand]
            if _mask_rank(newcols) != i + 1:
                continue
            # prune: cliques fully inside the assigned prefix must stay cliques
            good = True
            for c in cliques:
                if c >> (i + 1):
                    continue
                img = 0
                m = c
                k = 0
                while m:
                    if m & 1:
                        img ^= newcols[k]
                    k += 1
                    m >>= 1
                if not _is_clique_mask(sys, img):
                    good = False
                    break
            if good:
                extend(newcols)

    extend([])
    return out


# ---------------------------------------------------------------------------
# even-length coordinates on universal systems and the determinant map

def _require_universal(sys: CoxeterSystem):
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            if sys.mat[i, j] != INF_CODE:
                raise ValueError("needs a universal system (all labels infinite)")


def plus_coordinates(x: GroupElement):
    """Write an even-length element of a universal system as a free word in
    the doubled letters y_i = (first generator)(generator i), i >= 1.

    Returns a list of (index, exponent) syllables, freely reduced.
    """
    sys = x.system
    _require_universal(sys)
    if x.length % 2 != 0:
        raise ValueError("even-length elements only")
    raw = []
    w = x.word
    for k in range(0, len(w), 2):
        a, b = w[k], w[k + 1]
        if a != 0:
            raw.append((a, -1))
        if b != 0:
            raw.append((b, 1))
    out = []
    for idx, e in raw:
        if out and out[-1][0] == idx:
            merged = out[-1][1] + e
            out.pop()
            if merged:
                out.append((idx, merged))
        else:
            out.append((idx, e))
    return out


def plus_basis(sys: CoxeterSystem):
    """The elements y_i = s_0 s_i, i = 1..rank-1."""
    _require_universal(sys)
    return [normalize(sys, bytes([0, i])) for i in range(1, sys.rank)]


def abelianized_plus_matrix(endo: Endo):
    """Integer matrix of the induced map on the even-length subgroup,
    after killing commutators: column i = exponent sums of the image of
    y_i in the y-coordinates."""
    sys = endo.system
    _require_universal(sys)
    n = sys.rank - 1
    cols = []
    for i in range(1, sys.rank):
        img = endo.apply(normalize(sys, bytes([0, i])))
        col = [0] * n
        for idx, e in plus_coordinates(img):
            col[idx - 1] += e
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def int_det(M) -> int:
    n = len(M)
    rows = [[Fraction(v) for v in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = None
        for r in range(c, n):
            if rows[r][c] != 0:
                piv = r
                break
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for r in range(c + 1, n):
            if rows[r][c] != 0:
                f = rows[r][c] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    assert det.denominator == 1
    return int(det)


def alpha_p(sys: CoxeterSystem, p: int) -> Endo:
    """The proper self-similarity fixing all letters but the last, which it
    sends to the alternating last-first word of length 2p - 1."""
    _require_universal(sys)
    if sys.rank < 2:
        raise ValueError("rank at least 2 required")
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    n = sys.rank - 1
    letters = []
    for k in range(2 * p - 1):
        letters.append(n if k % 2 == 0 else 0)
    images = list(generators(sys))
    images[n] = normalize(sys, bytes(letters))
    return Endo(sys, images, "sim-proper")


def alpha_p_determinant(sys: CoxeterSystem, p: int) -> int:
    return int_det(abelianized_plus_matrix(alpha_p(sys, p)))


# ---------------------------------------------------------------------------
# sim enumeration (desk scale)

def enumerate_sims(sys: CoxeterSystem, depth_cap: int,
                   proper_only: bool = False):
    """All self-similarities whose images have conjugator depth at most
    depth_cap.  Exhaustive within that depth window."""
    if not sys.right_angled:
        raise ValueError("enumeration needs a right-angled system")
    refl = enumerate_reflections(sys, 2 * depth_cap + 1)
    by_core = {s: [] for s in range(sys.rank)}
    for t in refl:
        by_core[core_letter(t)].append(t)
    out = []
    for combo in _iproduct(*(by_core[s] for s in range(sys.rank))):
        rep = sim_check(sys, list(combo))
        if not rep.is_sim:
            continue
        if proper_only and rep.endo.kind != "sim-proper":
            continue
        out.append(rep.endo)
    return out
