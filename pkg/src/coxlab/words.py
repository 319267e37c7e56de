"""Word engine: canonical forms, orders, roots, centralizers, balls.

Right-angled systems get exact constant-time-per-letter rewriting through
the kernels module.  Everything else goes through the rewriting engine
``canonical_general`` based on exhaustive label-move orbits, which is exact
but budgeted: words whose orbit exceeds the budget raise
``SearchBudgetExceeded`` instead of guessing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .system import CoxeterSystem, INF_CODE


class SearchBudgetExceeded(RuntimeError):
    """A bounded search ran out of budget before certifying an answer."""


# --------------------------------------------------------------------------
# elements

class GroupElement:
    __slots__ = ("system", "word")

    def __init__(self, system: CoxeterSystem, word: bytes):
        # `word` must already be canonical; use normalize() for raw input
        self.system = system
        self.word = word

    @property
    def length(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return len(self.word) == 0

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        sys = self.system
        if sys.right_angled:
            return GroupElement(sys, sys.kernel.mult(self.word, other.word))
        return GroupElement(sys, canonical_general(sys, self.word + other.word))

    def inverse(self) -> "GroupElement":
        sys = self.system
        rev = self.word[::-1]
        if sys.right_angled:
            return GroupElement(sys, sys.kernel.normalize(rev))
        return GroupElement(sys, canonical_general(sys, rev))

    def conjugate_by(self, h: "GroupElement") -> "GroupElement":
        """h * self * h^-1."""
        return h * self * h.inverse()

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse() ** (-k)
        acc = GroupElement(self.system, b"")
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def sort_key(self):
        return (len(self.word), self.word)

    def __eq__(self, other):
        return (isinstance(other, GroupElement)
                and self.word == other.word
                and self.system.key == other.system.key)

    def __hash__(self):
        return hash((self.word, self.system.names))

    def __str__(self):
        return render_word(self.system, self.word)

    def __repr__(self):
        return f"<{render_word(self.system, self.word)}>"


def identity(sys: CoxeterSystem) -> GroupElement:
    return GroupElement(sys, b"")


def generator(sys: CoxeterSystem, name: str) -> GroupElement:
    return GroupElement(sys, bytes([sys.index[name]]))


def generators(sys: CoxeterSystem):
    return [GroupElement(sys, bytes([i])) for i in range(sys.rank)]


def parse_word(sys: CoxeterSystem, text: str) -> bytes:
    text = text.strip()
    if text in ("", "e", "1"):
        return b""
    tokens = text.split()
    if len(tokens) == 1 and tokens[0] not in sys.index:
        if all(len(nm) == 1 for nm in sys.names):
            tokens = list(tokens[0])
    letters = []
    for tok in tokens:
        if tok not in sys.index:
            raise ValueError(f"unknown generator '{tok}'")
        letters.append(sys.index[tok])
    return bytes(letters)


def render_word(sys: CoxeterSystem, word: bytes) -> str:
    if not word:
        return "e"
    if all(len(nm) == 1 for nm in sys.names):
        return "".join(sys.names[i] for i in word)
    return " ".join(sys.names[i] for i in word)


def normalize(sys: CoxeterSystem, word) -> GroupElement:
    """Canonical element from a raw word (letter indices, names, or text)."""
    if isinstance(word, str):
        word = parse_word(sys, word)
    elif word and isinstance(word[0] if not isinstance(word, (bytes, bytearray)) else 0, str):
        word = bytes(sys.index[nm] for nm in word)
    else:
        word = bytes(word)
    if sys.right_angled:
        return GroupElement(sys, sys.kernel.normalize(word))
    return GroupElement(sys, canonical_general(sys, word))


# ---------------------------------------------------------------------------
# general systems: exhaustive label-move rewriting

DEFAULT_ORBIT_BUDGET = 100_000


def _strike_adjacent_equal(word: bytes):
    for i in range(len(word) - 1):
        if word[i] == word[i + 1]:
            return word[:i] + word[i + 2:]
    return None


def _alternating(a: int, b: int, m: int) -> bytes:
    out = bytearray()
    for k in range(m):
        out.append(a if k % 2 == 0 else b)
    return bytes(out)


def _label_moves(sys: CoxeterSystem, word: bytes):
    mat = sys.mat
    n = len(word)
    for i in range(n - 1):
        s, t = word[i], word[i + 1]
        if s == t:
            continue
        m = int(mat[s, t])
        if m == INF_CODE or i + m > n:
            continue
        ok = True
        for k in range(m):
            want = s if k % 2 == 0 else t
            if word[i + k] != want:
                ok = False
                break
        if ok:
            yield word[:i] + _alternating(t, s, m) + word[i + m:]


def _orbit_until_strike(sys: CoxeterSystem, word: bytes, budget: int):
    """Explore the label-move orbit; return (orbit, shorter_word_or_None)."""
    hit = _strike_adjacent_equal(word)
    if hit is not None:
        return None, hit
    orbit = {word}
    frontier = [word]
    while frontier:
        u = frontier.pop()
        for v in _label_moves(sys, u):
            if v in orbit:
                continue
            hit = _strike_adjacent_equal(v)
            if hit is not None:
                return None, hit
            orbit.add(v)
            if len(orbit) > budget:
                raise SearchBudgetExceeded(
                    f"label-move orbit exceeded {budget} words")
            frontier.append(v)
    return orbit, None


def canonical_general(sys: CoxeterSystem, word, budget: int = DEFAULT_ORBIT_BUDGET) -> bytes:
    word = bytes(word)
    cache = sys._cache.setdefault("gcanon", {})
    found = cache.get(word)
    if found is not None:
        return found
    w = word
    while True:
        orbit, shorter = _orbit_until_strike(sys, w, budget)
        if shorter is None:
            break
        w = shorter
    result = min(orbit)
    cache[word] = result
    for u in orbit:
        cache[u] = result
    return result


def equals_general(sys: CoxeterSystem, word_a, word_b,
                   budget: int = DEFAULT_ORBIT_BUDGET) -> bool:
    """Word problem via exhaustive rewriting; exact within budget."""
    if isinstance(word_a, str):
        word_a = parse_word(sys, word_a)
    if isinstance(word_b, str):
        word_b = parse_word(sys, word_b)
    return canonical_general(sys, word_a, budget) == canonical_general(sys, word_b, budget)


# ----------------------------------------------------------------------------
# orders, supports, cyclic reduction

def support(x: GroupElement) -> frozenset:
    return frozenset(x.word)


def support_names(x: GroupElement) -> frozenset:
    return frozenset(x.system.names[i] for i in x.word)


def link(x: GroupElement) -> frozenset:
    """Generators adjacent (label 2) to every letter of the support."""
    sys = x.system
    if not sys.right_angled:
        raise ValueError("link needs a right-angled system")
    sp = support(x)
    if not sp:
        return frozenset(range(sys.rank))
    out = set(range(sys.rank))
    for s in sp:
        out &= set(int(j) for j in range(sys.rank) if sys.comm[s, j])
    return frozenset(out)


def is_clique(sys: CoxeterSystem, letters) -> bool:
    letters = sorted(set(letters))
    for a in range(len(letters)):
        for b in range(a + 1, len(letters)):
            if not sys.comm[letters[a], letters[b]]:
                return False
    return True


def cyclic_reduce(x: GroupElement):
    """Return (h, core) with x = h * core * h^-1 and core of minimal length
    reachable by single-letter conjugations (which is the conjugacy minimum
    in a right-angled system)."""
    sys = x.system
    if not sys.right_angled:
        raise ValueError("cyclic_reduce needs a right-angled system")
    h = identity(sys)
    core = x
    improved = True
    while improved:
        improved = False
        for i in range(sys.rank):
            s = GroupElement(sys, bytes([i]))
            y = s * core * s
            if y.length < core.length:
                core = y
                h = h * s
                improved = True
                break
    return h, core


def element_order(x: GroupElement, cutoff: int | None = None):
    """1, 2, a finite k, math.inf, or None when a budgeted search gave up."""
    sys = x.system
    if x.is_identity():
        return 1
    if sys.right_angled:
        _, core = cyclic_reduce(x)
        return 2 if is_clique(sys, support(core)) else math.inf
    if cutoff is None:
        cutoff = 2 * sys.max_finite_label()
    acc = x
    for k in range(2, cutoff + 1):
        acc = acc * x
        if acc.is_identity():
            return k
    return None


@dataclass(frozen=True)
class CyclicDecomposition:
    conjugator: GroupElement
    core: GroupElement
    root: GroupElement
    exponent: int


def _divisors_desc(n: int):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return sorted(out, reverse=True)


def _elements_of_length(sys: CoxeterSystem, letters, length: int):
    """Reduced elements of exactly the given length with support inside
    `letters` (a parabolic ball layer)."""
    letters = sorted(set(letters))
    layer = {b""}
    for _ in range(length):
        nxt = set()
        for w in layer:
            for s in letters:
                v = sys.kernel.mult(w, bytes([s]))
                if len(v) == len(w) + 1:
                    nxt.add(v)
        layer = nxt
    return layer


def cyclic_root(x: GroupElement) -> CyclicDecomposition:
    """x = h * root^n * h^-1 with n maximal; unique in irreducible systems."""
    sys = x.system
    if not sys.right_angled:
        raise ValueError("cyclic_root needs a right-angled system")
    if not sys.is_irreducible():
        raise ValueError("roots are only well-defined in irreducible systems")
    h, core = cyclic_reduce(x)
    if core.is_identity():
        return CyclicDecomposition(h, core, core, 1)
    if is_clique(sys, support(core)):
        return CyclicDecomposition(h, core, core, 1)
    n_len = core.length
    sup = sorted(support(core))
    edge_free = not any(sys.comm[i][j] for i in sup for j in sup if i < j)
    for n in _divisors_desc(n_len):
        if n == 1:
            break
        d = n_len // n
        if edge_free:
            # free-product supports: powers concatenate without cancellation,
            # so the root word must be the length-d prefix
            cand = GroupElement(sys, core.word[:d])
            if (cand ** n) == core:
                return CyclicDecomposition(h, core, cand, n)
            continue
        if d > 14:
            raise SearchBudgetExceeded(
                "root candidates of length %d are out of desk range" % d)
        for wd in _elements_of_length(sys, support(core), d):
            cand = GroupElement(sys, wd)
            if (cand ** n) == core:
                return CyclicDecomposition(h, core, cand, n)
    return CyclicDecomposition(h, core, core, 1)


def general_reflection_core(x: GroupElement):
    """Letter whose class contains x, or None when x is no reflection.

    Works in any system: a reflection of length > 1 always admits a
    strictly length-reducing single-letter conjugation (conjugate by the
    first letter of a palindromic reduced expression), so greedy descent
    reaches a letter exactly on reflections.
    """
    if x.length % 2 == 0:
        return None
    sys = x.system
    gens = generators(sys)
    while x.length > 1:
        for s in gens:
            y = s * x * s
            if y.length < x.length:
                x = y
                break
        else:
            return None
    return x.word[0]


def is_reflection(x: GroupElement) -> bool:
    if not x.system.right_angled:
        return general_reflection_core(x) is not None
    _, core = cyclic_reduce(x)
    return core.length == 1


def min_conjugate_length(x: GroupElement, budget: int = 50_000) -> int:
    """Minimal length in the conjugacy class, via closure under
    length-non-increasing single-generator conjugations (cyclic shifts)."""
    sys = x.system
    seen = {x.word}
    queue = [x]
    best = x.length
    gens = generators(sys)
    while queue:
        y = queue.pop()
        for s in gens:
            z = s * y * s
            if z.length <= y.length and z.word not in seen:
                seen.add(z.word)
                best = min(best, z.length)
                if len(seen) > budget:
                    raise SearchBudgetExceeded("conjugacy closure too large")
                queue.append(z)
    return best


def conjugacy_class_closure(x: GroupElement, max_length: int, budget: int = 200_000):
    """All class members of length <= max_length, with a completeness flag.

    complete=True means conjugation by every generator never leaves the
    collected set, i.e. the whole class was enumerated.
    """
    sys = x.system
    seen = {x.word: identity(sys)}
    queue = [x]
    complete = True
    gens = generators(sys)
    while queue:
        y = queue.pop()
        hy = seen[y.word]
        for s in gens:
            z = s * y * s
            if z.word in seen:
                continue
            if z.length > max_length:
                complete = False
                continue
            if len(seen) > budget:
                raise SearchBudgetExceeded("conjugacy closure too large")
            seen[z.word] = s * hy
            queue.append(z)
    return seen, complete


# -----------------------------------------------------------------------------
# centralizers (right-angled, irreducible)

@dataclass
class CentralizerDescription:
    element: GroupElement
    conjugator: GroupElement
    core: GroupElement
    order: object                 # 1, 2 or math.inf
    roots: tuple                  # maximal root of each infinite pure factor
    clique: tuple                 # single-letter (involution) pure factors
    link_letters: tuple
    generators: tuple

    def contains(self, y: GroupElement) -> bool:
        return self.element * y == y * self.element

    def enumerate_ball(self, radius: int):
        """Exactly the centralizer elements of length <= radius."""
        sys = self.element.system
        h = self.conjugator
        inner_bound = radius + 2 * h.length
        link_ball = _parabolic_ball(sys, self.link_letters, inner_bound)
        if self.order == 1:
            elements, _ = ball(sys, radius)
            return set(elements)
        sub = sorted(self.clique)
        subsets = [[]]
        for s in sub:
            subsets += [c + [s] for c in subsets]
        fronts = [GroupElement(sys, bytes(c)) for c in subsets]
        for r in self.roots:
            reach = inner_bound // max(1, r.length) + 1
            powers = [identity(sys)]
            p = r
            rinv = r.inverse()
            q = rinv
            for _ in range(reach):
                powers.append(p)
                powers.append(q)
                p = p * r
                q = q * rinv
            fronts = [f * w for f in fronts for w in powers
                      if (f * w).length <= inner_bound]
        out = set()
        hinv = h.inverse()
        for f in fronts:
            for v in link_ball:
                y = h * (f * GroupElement(sys, v)) * hinv
                if y.length <= radius:
                    out.add(y)
        return out


def _parabolic_ball(sys: CoxeterSystem, letters, radius: int):
    letters = sorted(set(letters))
    seen = {b""}
    frontier = [b""]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for s in letters:
                v = sys.kernel.mult(w, bytes([s]))
                if len(v) == len(w) + 1 and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def _pure_factors(core: GroupElement):
    """Split a cyclically reduced element along the components of the
    non-commutation graph induced on its support.  The factors pairwise
    commute and multiply back to the element in any order."""
    sys = core.system
    sup = sorted(support(core))
    parent = {s: s for s in sup}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for i in sup:
        for j in sup:
            if i < j and not sys.comm[i, j]:
                parent[find(i)] = find(j)
    groups: dict = {}
    for s in sup:
        groups.setdefault(find(s), []).append(s)
    comps = [frozenset(v) for v in groups.values()]
    words = {c: bytearray() for c in comps}
    for letter in core.word:
        for c in comps:
            if letter in c:
                words[c].append(letter)
                break
    return [(c, GroupElement(sys, bytes(words[c]))) for c in comps]


def centralizer(x: GroupElement) -> CentralizerDescription:
    """Pure-factor form of the centralizer: the core splits into commuting
    factors (one per non-commutation component of its support); each
    single-letter factor contributes an involution, each larger factor the
    cyclic group on its maximal root, and the common link comes along as a
    standard subgroup.  Everything is conjugated back by the reducer."""
    sys = x.system
    if not sys.right_angled:
        raise ValueError("centralizer description needs a right-angled system")
    if not sys.is_irreducible():
        raise ValueError("centralizer description needs an irreducible system")
    if x.is_identity():
        return CentralizerDescription(
            x, identity(sys), x, 1, (), (), tuple(range(sys.rank)),
            tuple(generators(sys)))
    h, core = cyclic_reduce(x)
    lk = tuple(sorted(link(core)))
    hinv = h.inverse()
    letters = []
    roots = []
    for comp, factor in _pure_factors(core):
        if len(comp) == 1:
            letters.extend(sorted(comp))
        else:
            roots.append(cyclic_root(factor).root)
    letters.sort()
    order = 2 if not roots else math.inf
    gens = tuple(h * r * hinv for r in roots) + tuple(
        h * GroupElement(sys, bytes([s])) * hinv for s in letters + list(lk))
    return CentralizerDescription(
        x, h, core, order, tuple(roots), tuple(letters), lk, gens)


# ------------------------------------------------------------------------------
# ball enumeration

def ball(sys: CoxeterSystem, radius: int):
    """(elements in BFS order, sphere sizes).  Cached per system."""
    cached = sys._cache.get("ball")
    if cached is not None and cached[2] >= radius:
        elements, spheres, _ = cached
        keep = sum(spheres[: radius + 1])
        return elements[:keep], spheres[: radius + 1]
    elements = [identity(sys)]
    spheres = [1]
    seen = {b""}
    frontier = [identity(sys)]
    gens = generators(sys)
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for s in gens:
                v = w * s
                if v.word not in seen:
                    seen.add(v.word)
                    nxt.append(v)
        nxt.sort(key=lambda g: g.word)
        elements.extend(nxt)
        spheres.append(len(nxt))
        frontier = nxt
    sys._cache["ball"] = (elements, spheres, radius)
    return elements, spheres
