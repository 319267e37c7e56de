"""Exact linear representation for right-angled systems.

The bilinear form takes values 1 (equal letters), 0 (commuting) and -1
(infinite label), so every generator acts by an integer matrix on the root
basis and word images stay exact.  The rank of M - I over the rationals
gives the codimension of the fixed space, a lower bound for reflection
length; bounded products of reflections give an upper bound, and the two
frequently meet because reflection length and word length share parity.
"""
from __future__ import annotations

from fractions import Fraction
from dataclasses import dataclass

from .system import CoxeterSystem, INF_CODE
from .words import GroupElement, ball, identity, is_reflection
from .walls import enumerate_reflections


def bilinear_form(sys: CoxeterSystem):
    """Gram matrix of the root basis: 1 / 0 / -1 entries."""
    if not sys.right_angled:
        raise ValueError("the exact form needs a right-angled system")
    n = sys.rank
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                B[i][j] = 1
            elif sys.mat[i, j] == 2:
                B[i][j] = 0
            else:
                B[i][j] = -1
    return B


def generator_matrices(sys: CoxeterSystem):
    """Integer matrix of each generator acting on the root basis."""
    B = bilinear_form(sys)
    n = sys.rank
    mats = []
    for s in range(n):
        M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for j in range(n):
            M[s][j] -= 2 * B[s][j]
        mats.append(tuple(tuple(row) for row in M))
    return mats


def _matmul(A, Bm):
    n = len(A)
    return tuple(
        tuple(sum(A[i][k] * Bm[k][j] for k in range(n)) for j in range(n))
        for i in range(n))


def representation_matrix(x: GroupElement):
    sys = x.system
    mats = sys._cache.get("linrep")
    if mats is None:
        mats = generator_matrices(sys)
        sys._cache["linrep"] = mats
    n = sys.rank
    M = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    for s in x.word:
        M = _matmul(M, mats[s])
    return M


def rational_rank(M) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    rows = [[Fraction(v) for v in row] for row in M]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    rank = 0
    col = 0
    for col in range(m):
        piv = None
        for r in range(rank, n):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        for r in range(n):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / pv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == n:
            break
    return rank


def fixed_space_codim(x: GroupElement) -> int:
    M = representation_matrix(x)
    n = len(M)
    D = [[M[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    return rational_rank(D)


@dataclass(frozen=True)
class ReflectionLengthBounds:
    lower: int
    upper: int | None       # None: no factorization found within the caps
    exact: bool
    codim: int
    search_cap: int          # longest reflection word admitted in the search

    def __str__(self):
        if self.exact:
            return f"reflection length = {self.lower}"
        hi = "?" if self.upper is None else str(self.upper)
        return f"reflection length in [{self.lower}, {hi}]"


def reflection_length_bounds(x: GroupElement,
                             search_cap: int | None = None) -> ReflectionLengthBounds:
    """Sandwich the reflection length of x.

    Lower bound: codimension of the fixed space, bumped by one when its
    parity disagrees with word length (both lengths share parity).  Upper
    bound: search products of up to four reflections of word length at most
    search_cap (default len(x) + 2), meeting in the middle for the k = 4
    stage.
    """
    sys = x.system
    if x.is_identity():
        return ReflectionLengthBounds(0, 0, True, 0, 0)
    codim = fixed_space_codim(x)
    lower = codim
    if (lower - x.length) % 2 != 0:
        lower += 1
    if search_cap is None:
        search_cap = x.length + 2
    if is_reflection(x):
        return ReflectionLengthBounds(1, 1, lower <= 1, codim, search_cap)
    refs = enumerate_reflections(sys, search_cap)
    upper = None
    for r in refs:
        if is_reflection(r * x):
            upper = 2
            break
    if upper is None:
        pair_words = set()
        for r1 in refs:
            for r2 in refs:
                if r1 != r2:
                    pair_words.add((r1 * r2).word)
        for r in refs:
            if (r * x).word in pair_words:
                upper = 3
                break
        if upper is None:
            xw = x
            for w1 in pair_words:
                p = GroupElement(sys, w1)
                if (p.inverse() * xw).word in pair_words:
                    upper = 4
                    break
    exact = upper is not None and lower == upper
    return ReflectionLengthBounds(lower, upper, exact, codim, search_cap)


def exact_reflection_length_spherical(x: GroupElement, size_cap: int = 20000) -> int:
    """Exact reflection length when the whole group is finite: breadth-first
    layers of the Cayley graph over the full reflection set."""
    sys = x.system
    report = sys.classify()
    if not all(c.kind == "spherical" for c in report.components):
        raise ValueError("exact enumeration needs a spherical system")
    elements = _all_elements(sys, size_cap)
    refl = [g for g in elements
            if not g.is_identity() and _is_refl_finite(g, elements)]
    if x.is_identity():
        return 0
    layer = {identity(sys).word}
    seen = set(layer)
    dist = 0
    target = x.word
    while target not in seen:
        dist += 1
        nxt = set()
        for w in layer:
            g = GroupElement(sys, w)
            for t in refl:
                v = (g * t).word
                if v not in seen:
                    seen.add(v)
                    nxt.add(v)
        if not nxt:
            raise ValueError("element outside the generated group?")
        layer = nxt
    return dist


def _all_elements(sys: CoxeterSystem, size_cap: int):
    out = [identity(sys)]
    seen = {b""}
    frontier = [identity(sys)]
    gens = [GroupElement(sys, bytes([i])) for i in range(sys.rank)]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                v = w * s
                if v.word not in seen:
                    seen.add(v.word)
                    nxt.append(v)
                    if len(seen) > size_cap:
                        raise ValueError("group too large for enumeration")
        out.extend(nxt)
        frontier = nxt
    return out


def _is_refl_finite(g: GroupElement, elements) -> bool:
    # in a finite group: reflections are the conjugates of generators
    sys = g.system
    if (g * g).is_identity() is False:
        return False
    for h in elements:
        hg = h.inverse() * g * h
        if hg.length == 1:
            return True
    return False
