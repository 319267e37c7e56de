"""Right-angled Artin groups sitting inside right-angled Coxeter groups.

The doubled-graph construction: each vertex of the source graph gets a
partner, partners form a clique, and a vertex misses exactly its own
partner.  The parity map onto (Z/2)^I kills the products g_i = r_i s_i,
and those products generate a normal, finite-index copy of the Artin
group; the desk verifies the homomorphism law, injectivity on bounded
balls, and the exact coset count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .system import CoxeterSystem
from .words import GroupElement, ball, normalize


class RaagError(ValueError):
    pass


class Raag:
    """A right-angled Artin group presented by a finite simple graph."""

    def __init__(self, names, edges=()):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise RaagError("vertex names must be distinct")
        self.index = {nm: i for i, nm in enumerate(self.names)}
        n = len(self.names)
        comm = np.zeros((n, n), dtype=bool)
        self.edges = []
        for a, b in edges:
            i, j = self.index[a], self.index[b]
            if i == j:
                raise RaagError("no loops in a simple graph")
            comm[i, j] = comm[j, i] = True
            self.edges.append((min(i, j), max(i, j)))
        self.comm = comm
        self.rank = n

    def generator(self, name, exp: int = 1) -> "RaagElement":
        return RaagElement(self, ((self.index[name], exp),))

    def identity(self) -> "RaagElement":
        return RaagElement(self, ())

    def element(self, syllables) -> "RaagElement":
        return RaagElement(self, tuple(
            (self.index[g] if isinstance(g, str) else int(g), int(e))
            for g, e in syllables))

    def __repr__(self):
        return f"Raag({list(self.names)}, edges={len(self.edges)})"


def _normal_syllables(comm, syllables):
    """Reduce, then emit the lexicographically least linearization.

    Reduction merges same-generator syllables whenever everything between
    them commutes with that generator; a reduced sequence is unique up to
    shuffles, so greedily emitting the least available syllable gives a
    canonical form (adjacent swaps cannot unlock new merges afterwards)."""
    syls = [[g, e] for g, e in syllables if e]
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(syls):
            if syls[k][1] == 0:
                syls.pop(k)
                changed = True
                continue
            g = syls[k][0]
            m = k + 1
            while m < len(syls) and comm[syls[m][0], g]:
                m += 1
            if m < len(syls) and syls[m][0] == g:
                syls[k][1] += syls.pop(m)[1]
                changed = True
                continue
            k += 1
    out = []
    while syls:
        best = None
        for k, (g, _) in enumerate(syls):
            if all(comm[g, syls[m][0]] for m in range(k)):
                if best is None or g < syls[best][0]:
                    best = k
        out.append(tuple(syls.pop(best)))
    return tuple(out)


class RaagElement:
    __slots__ = ("group", "syllables")

    def __init__(self, group: Raag, syllables):
        self.group = group
        self.syllables = _normal_syllables(group.comm, syllables)

    def __mul__(self, other: "RaagElement") -> "RaagElement":
        if other.group is not self.group:
            raise RaagError("elements of different groups")
        return RaagElement(self.group, self.syllables + other.syllables)

    def inverse(self) -> "RaagElement":
        return RaagElement(self.group,
                           tuple((g, -e) for g, e in reversed(self.syllables)))

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def __eq__(self, other):
        return (isinstance(other, RaagElement)
                and self.group is other.group
                and self.syllables == other.syllables)

    def __hash__(self):
        return hash(self.syllables)

    def __repr__(self):
        if not self.syllables:
            return "e"
        bits = []
        for g, e in self.syllables:
            nm = self.group.names[g]
            bits.append(nm if e == 1 else "%s^%d" % (nm, e))
        return "*".join(bits)


# ---------------------------------------------------------------------------
# the doubled graph

@dataclass
class GammaPlus:
    raag: Raag
    system: CoxeterSystem
    s_letters: tuple       # letter index of each vertex generator
    r_letters: tuple       # letter index of each partner generator

    @property
    def rank(self) -> int:
        return self.raag.rank


def _partner_names(names):
    taken = set(names)
    out = []
    for nm in names:
        cand = nm.upper()
        if len(nm) != 1 or not nm.islower() or cand in taken:
            cand = nm + "'"
        if cand in taken:
            raise RaagError("cannot derive a fresh partner name for %r" % nm)
        taken.add(cand)
        out.append(cand)
    return out


def gamma_plus(graph: Raag) -> GammaPlus:
    """Double the graph: partners are a clique, each vertex is adjacent to
    every partner except its own, and the original graph survives."""
    n = graph.rank
    r_names = _partner_names(graph.names)
    names = list(graph.names) + r_names
    edges = []
    for i, j in graph.edges:
        edges.append((names[i], names[j]))
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((r_names[i], r_names[j]))
    for i in range(n):
        for j in range(n):
            if i != j:
                edges.append((names[i], r_names[j]))
    system = CoxeterSystem.right_angled_from_graph(names, edges)
    return GammaPlus(graph, system,
                     tuple(range(n)), tuple(range(n, 2 * n)))


# ---------------------------------------------------------------------------
# the parity map and the embedding

def theta(gp: GammaPlus, w) -> tuple:
    """Parity vector: coordinate i counts vertex i and its partner mod 2."""
    word = w.word if isinstance(w, GroupElement) else bytes(w)
    bits = [0] * gp.rank
    for letter in word:
        bits[letter % gp.rank] ^= 1
    return tuple(bits)


def beta_embed(gp: GammaPlus, g: RaagElement) -> GroupElement:
    """Substitute each Artin generator by partner-then-vertex and normalize."""
    if g.group is not gp.raag:
        raise RaagError("element does not live on the source graph")
    letters = bytearray()
    for idx, exp in g.syllables:
        r, s = gp.r_letters[idx], gp.s_letters[idx]
        chunk = bytes((r, s)) if exp > 0 else bytes((s, r))
        letters.extend(chunk * abs(exp))
    return normalize(gp.system, bytes(letters))


@dataclass
class CosetReport:
    in_kernel: bool
    label: tuple


def kernel_and_cosets(gp: GammaPlus, w: GroupElement) -> CosetReport:
    lab = theta(gp, w)
    return CosetReport(not any(lab), lab)


@dataclass
class IndexReport:
    index: int
    expected: int
    radius: int
    complete: bool
    representatives: dict

    def __bool__(self):
        return self.complete


def coset_index(gp: GammaPlus, radius: int = 5) -> IndexReport:
    """Enumerate parity classes over a ball; the count must hit 2^I and the
    class of a product must only depend on the classes of the factors."""
    elements, _ = ball(gp.system, radius)
    reps: dict = {}
    for w in elements:
        lab = theta(gp, w)
        reps.setdefault(lab, w)
    expected = 2 ** gp.rank
    for la, u in reps.items():
        for lb, v in reps.items():
            prod = theta(gp, u * v)
            want = tuple(x ^ y for x, y in zip(la, lb))
            if prod != want:
                raise RaagError("parity map failed to be a homomorphism")
    return IndexReport(len(reps), expected, radius,
                       len(reps) == expected, reps)


# ---------------------------------------------------------------------------
# desk verification of the embedding

@dataclass
class EmbedReport:
    graph: Raag
    words_checked: int
    max_len: int
    homomorphism_pairs: int
    injective: bool
    kernel_parity_ok: bool
    commutation_ok: bool

    def __bool__(self):
        return self.injective and self.kernel_parity_ok and self.commutation_ok


def _free_words(rank: int, max_len: int):
    """Freely reduced letter strings over g_i^{±1}, encoded as +-(i+1)."""
    frontier = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for i in range(rank):
                for sign in (1, -1):
                    letter = sign * (i + 1)
                    if w and w[-1] == -letter:
                        continue
                    nw = w + (letter,)
                    nxt.append(nw)
                    yield nw
        frontier = nxt


def verify_embedding(gp: GammaPlus, max_len: int = 6,
                     pair_len: int = 4) -> EmbedReport:
    raag = gp.raag
    seen: dict = {}
    injective = True
    kernel_ok = True
    checked = 0
    elems: list = []
    for letters in _free_words(raag.rank, max_len):
        g = RaagElement(raag, tuple((abs(l) - 1, 1 if l > 0 else -1)
                                    for l in letters))
        img = beta_embed(gp, g)
        checked += 1
        if any(theta(gp, img)):
            kernel_ok = False
        prev = seen.setdefault(img.word, g)
        if prev != g:
            injective = False
        if len(letters) <= pair_len // 2:
            elems.append(g)
    # identity only from the trivial normal form
    if seen.get(b"", raag.identity()) != raag.identity():
        injective = False
    pairs = 0
    for g in elems:
        for h in elems:
            if beta_embed(gp, g * h) != beta_embed(gp, g) * beta_embed(gp, h):
                raise RaagError("substitution failed the homomorphism law")
            pairs += 1
    comm_ok = True
    for i in range(raag.rank):
        for j in range(i + 1, raag.rank):
            gi = beta_embed(gp, raag.generator(raag.names[i]))
            gj = beta_embed(gp, raag.generator(raag.names[j]))
            commute = (gi * gj) == (gj * gi)
            if commute != bool(raag.comm[i, j]):
                comm_ok = False
    return EmbedReport(raag, checked, max_len, pairs,
                       injective, kernel_ok, comm_ok)
