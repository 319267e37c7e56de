"""Coxeter systems: matrices, the two graphs, parsing, classification.

A system is a finite generator list plus a symmetric matrix of pairwise
orders.  Infinity is stored internally as 0 (the usual computational
convention); ``pair_order`` returns ``math.inf`` instead so callers never see
the sentinel.

Two graphs live on the same vertex set and are easy to confuse, so both are
named explicitly and every caller picks one:

* ``gamma_adjacency``  -- edges where the label is finite (for right-angled
  systems this means label 2, i.e. the commuting graph);
* ``delta_adjacency``  -- edges where the label is >= 3 or infinite; its
  connected components are the irreducible factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

INF_CODE = 0  # matrix entry encoding an infinite label


class CoxFormatError(ValueError):
    """Raised on malformed .cox input or inconsistent matrix data."""


class CoxeterSystem:
    def __init__(self, names, matrix):
        names = tuple(str(n) for n in names)
        if len(set(names)) != len(names):
            raise CoxFormatError("duplicate generator names")
        if len(names) == 0:
            raise CoxFormatError("empty generator list")
        if len(names) > 255:
            raise CoxFormatError("rank cap is 255")
        mat = np.array(matrix, dtype=np.int64)
        n = len(names)
        if mat.shape != (n, n):
            raise CoxFormatError("matrix shape does not match generator count")
        if not np.array_equal(mat, mat.T):
            raise CoxFormatError("matrix is not symmetric")
        for i in range(n):
            if mat[i, i] != 1:
                raise CoxFormatError(f"m({names[i]},{names[i]}) must be 1")
            for j in range(n):
                if i != j and mat[i, j] == 1:
                    raise CoxFormatError(
                        f"m({names[i]},{names[j]}) = 1 is only allowed on the diagonal")
                if mat[i, j] < 0:
                    raise CoxFormatError("labels must be >= 1 (0 encodes infinity)")
        self.names = names
        self.mat = mat
        self.index = {nm: i for i, nm in enumerate(names)}
        self.rank = n
        self.comm = (mat == 2)
        off = ~np.eye(n, dtype=bool)
        self.gamma_adjacency = (mat != INF_CODE) & (mat >= 2) & off
        self.delta_adjacency = ((mat == INF_CODE) | (mat >= 3)) & off
        self.right_angled = bool(
            np.all((mat == 1) | (mat == 2) | (mat == INF_CODE)))
        self.kernel = kernels.kernel_for(self.comm)
        self.key = (names, mat.tobytes())
        self._cache: dict = {}

    # -- construction helpers ------------------------------------------------

    @classmethod
    def universal(cls, names_or_rank):
        """All labels infinite (free product of order-2 generators)."""
        if isinstance(names_or_rank, int):
            names = tuple(chr(ord("a") + i) for i in range(names_or_rank))
        else:
            names = tuple(names_or_rank)
        n = len(names)
        mat = np.full((n, n), INF_CODE, dtype=np.int64)
        np.fill_diagonal(mat, 1)
        return cls(names, mat)

    @classmethod
    def right_angled_from_graph(cls, names, edges):
        """Right-angled system: listed pairs get label 2, the rest infinity."""
        names = tuple(names)
        idx = {nm: i for i, nm in enumerate(names)}
        n = len(names)
        mat = np.full((n, n), INF_CODE, dtype=np.int64)
        np.fill_diagonal(mat, 1)
        for a, b in edges:
            i, j = idx[a], idx[b]
            if i == j:
                raise CoxFormatError("loop edge")
            mat[i, j] = mat[j, i] = 2
        return cls(names, mat)

    @classmethod
    def from_pairs(cls, names, orders):
        """orders: {(a, b): m} with m an int >= 2 or math.inf; default infinity."""
        names = tuple(names)
        idx = {nm: i for i, nm in enumerate(names)}
        n = len(names)
        mat = np.full((n, n), INF_CODE, dtype=np.int64)
        np.fill_diagonal(mat, 1)
        for (a, b), m in orders.items():
            i, j = idx[a], idx[b]
            code = INF_CODE if m == math.inf else int(m)
            mat[i, j] = mat[j, i] = code
        return cls(names, mat)

    # -- basic queries ---------------------------------------------------------

    def pair_order(self, i, j):
        v = int(self.mat[i, j])
        return math.inf if v == INF_CODE else v

    def max_finite_label(self) -> int:
        vals = [int(v) for v in self.mat.flat if v != INF_CODE]
        return max(vals)

    def gamma_neighbors(self, i) -> frozenset:
        return frozenset(int(j) for j in np.flatnonzero(self.gamma_adjacency[i]))

    def subsystem(self, indices) -> "CoxeterSystem":
        idx = sorted(indices)
        sub = self.mat[np.ix_(idx, idx)]
        return CoxeterSystem(tuple(self.names[i] for i in idx), sub)

    def is_spherical_subset(self, indices) -> bool:
        if not indices:
            return True
        rep = self.subsystem(indices).classify()
        return all(c.kind == "spherical" for c in rep.components)

    def __eq__(self, other):
        return isinstance(other, CoxeterSystem) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"CoxeterSystem({', '.join(self.names)})"

    # -- classification --------------------------------------------------------

    def delta_components(self):
        seen = [False] * self.rank
        comps = []
        for start in range(self.rank):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in np.flatnonzero(self.delta_adjacency[v]):
                    w = int(w)
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(tuple(sorted(comp)))
        return comps

    def classify(self) -> "ComponentReport":
        comps = []
        for comp in self.delta_components():
            kind, name = _classify_component(self, comp)
            comps.append(Component(tuple(self.names[i] for i in comp), kind, name))
        return ComponentReport(tuple(comps))

    def is_irreducible(self) -> bool:
        return len(self.delta_components()) == 1

    # -- abelianization ---------------------------------------------------------

    def abelianization(self) -> "AbelianizationMap":
        if "abel" not in self._cache:
            parent = list(range(self.rank))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for i in range(self.rank):
                for j in range(i + 1, self.rank):
                    v = int(self.mat[i, j])
                    if v != INF_CODE and v % 2 == 1:
                        parent[find(i)] = find(j)
            roots = sorted({find(i) for i in range(self.rank)})
            root_pos = {r: k for k, r in enumerate(roots)}
            class_of = tuple(root_pos[find(i)] for i in range(self.rank))
            classes = tuple(
                frozenset(i for i in range(self.rank) if class_of[i] == k)
                for k in range(len(roots)))
            self._cache["abel"] = AbelianizationMap(self, class_of, classes)
        return self._cache["abel"]

    # -- star predicates (right-angled only) -------------------------------------

    def star_report(self) -> "StarReport":
        if not self.right_angled:
            raise CoxFormatError("graph predicates need a right-angled system")
        n = self.rank
        nstar = [self.gamma_neighbors(i) | {i} for i in range(n)]
        prop, witness = True, None
        for i in range(n):
            for j in range(n):
                if i != j and nstar[i] <= nstar[j]:
                    prop, witness = False, (self.names[i], self.names[j])
                    break
            if not prop:
                break
        connected = True
        disc_witness = None
        for i in range(n):
            rest = [v for v in range(n) if v not in nstar[i]]
            if not _connected_in(self.gamma_adjacency, rest):
                connected = False
                disc_witness = self.names[i]
                break
        return StarReport(
            star_property=prop,
            star_connected=connected,
            witness=witness,
            disconnect_witness=disc_witness,
            closed_neighborhoods={
                self.names[i]: frozenset(self.names[v] for v in nstar[i])
                for i in range(n)},
        )

    # -- serialization -------------------------------------------------------------

    def serialize(self) -> str:
        lines = ["generators " + " ".join(self.names)]
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                v = int(self.mat[i, j])
                if v != INF_CODE:
                    lines.append(f"m {self.names[i]} {self.names[j]} {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "CoxeterSystem":
        names = None
        entries = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "generators":
                if names is not None:
                    raise CoxFormatError(f"line {lineno}: second generators line")
                if len(parts) < 2:
                    raise CoxFormatError(f"line {lineno}: empty generators line")
                names = tuple(parts[1:])
                if len(set(names)) != len(names):
                    raise CoxFormatError(f"line {lineno}: duplicate generator names")
            elif parts[0] == "m":
                if names is None:
                    raise CoxFormatError(f"line {lineno}: m before generators")
                if len(parts) != 4:
                    raise CoxFormatError(f"line {lineno}: expected 'm <a> <b> <k>'")
                a, b, val = parts[1], parts[2], parts[3]
                for nm in (a, b):
                    if nm not in names:
                        raise CoxFormatError(f"line {lineno}: unknown generator '{nm}'")
                if val in ("inf", "infinity", "oo"):
                    code = INF_CODE
                else:
                    try:
                        code = int(val)
                    except ValueError:
                        raise CoxFormatError(f"line {lineno}: bad label '{val}'") from None
                    if code < 1:
                        raise CoxFormatError(f"line {lineno}: label must be >= 1")
                pair = (a, b) if a <= b else (b, a)
                if pair in entries:
                    raise CoxFormatError(f"line {lineno}: duplicate m line for {a},{b}")
                entries[pair] = code
            else:
                raise CoxFormatError(f"line {lineno}: unknown directive '{parts[0]}'")
        if names is None:
            raise CoxFormatError("missing generators line")
        idx = {nm: i for i, nm in enumerate(names)}
        n = len(names)
        mat = np.full((n, n), INF_CODE, dtype=np.int64)
        np.fill_diagonal(mat, 1)
        for (a, b), code in entries.items():
            i, j = idx[a], idx[b]
            if i == j:
                if code != 1:
                    raise CoxFormatError(f"m({a},{a}) must be 1")
                continue
            if code == 1:
                raise CoxFormatError(f"m({a},{b}) = 1 is not allowed off the diagonal")
            mat[i, j] = mat[j, i] = code
        return cls(names, mat)


# ------------------------------------------------------------------------------
# report types

@dataclass(frozen=True)
class Component:
    members: tuple
    kind: str      # "spherical" | "affine" | "other"
    name: str | None


@dataclass(frozen=True)
class ComponentReport:
    components: tuple

    @property
    def kinds(self):
        return tuple(c.kind for c in self.components)

    def summary(self) -> str:
        return " x ".join(
            (c.name or "other") + f"[{','.join(c.members)}]" for c in self.components)


@dataclass(frozen=True)
class StarReport:
    star_property: bool
    star_connected: bool
    witness: tuple | None
    disconnect_witness: str | None
    closed_neighborhoods: dict


@dataclass
class AbelianizationMap:
    """Quotient onto (Z/2)^k, one coordinate per odd-label class of generators."""

    system: CoxeterSystem
    class_of: tuple
    classes: tuple = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.classes)

    def image(self, word) -> tuple:
        vec = [0] * self.rank
        for s in word:
            vec[self.class_of[s]] ^= 1
        return tuple(vec)


# -------------------------------------------------------------------------------
# component classification against the finite/affine tables

def _connected_in(adj, vertices) -> bool:
    if len(vertices) <= 1:
        return True
    vs = set(vertices)
    stack = [vertices[0]]
    seen = {vertices[0]}
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(adj[v]):
            w = int(w)
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def _edge_dict(sys: CoxeterSystem, comp):
    edges = {}
    for a in comp:
        for b in comp:
            if a < b and sys.delta_adjacency[a, b]:
                edges[(a, b)] = int(sys.mat[a, b])  # 0 encodes infinity
    return edges


def _path(labels):
    return {(i, i + 1): m for i, m in enumerate(labels)}


def _cycle(n, label=3):
    e = {(i, i + 1): label for i in range(n - 1)}
    e[(0, n - 1)] = label
    return e


def _fork_path(total, tail_label=None):
    # nodes 0,1 are the fork leaves attached to 2; path 2..total-1; optional
    # final edge label override
    e = {(0, 2): 3, (1, 2): 3}
    for i in range(2, total - 1):
        e[(i, i + 1)] = 3
    if tail_label is not None:
        e[(total - 2, total - 1)] = tail_label
    return e


def _double_fork(total):
    # D~ diagrams: central path 2..total-3 with two fork leaves on each end
    last = total - 3
    e = {(0, 2): 3, (1, 2): 3}
    for i in range(2, last):
        e[(i, i + 1)] = 3
    e[(min(total - 2, last), max(total - 2, last))] = 3
    e[(min(total - 1, last), max(total - 1, last))] = 3
    return e


def _branch(legs):
    # star-shaped tree: center 0, legs of given lengths, all labels 3
    e = {}
    nxt = 1
    for ln in legs:
        prev = 0
        for _ in range(ln):
            e[(min(prev, nxt), max(prev, nxt))] = 3
            prev = nxt
            nxt += 1
    return e


def _candidate_tables(n):
    """Yield (kind, name, edges) for every table diagram of rank n."""
    if n == 1:
        yield ("spherical", "A1", {})
        return
    if n == 2:
        # handled separately (single label)
        return
    yield ("spherical", f"A{n}", _path([3] * (n - 1)))
    yield ("spherical", f"B{n}", _path([3] * (n - 2) + [4]))
    if n >= 4:
        yield ("spherical", f"D{n}", _fork_path(n))
    if n == 6:
        yield ("spherical", "E6", _branch([1, 2, 2]))
    if n == 7:
        yield ("spherical", "E7", _branch([1, 2, 3]))
    if n == 8:
        yield ("spherical", "E8", _branch([1, 2, 4]))
    if n == 4:
        yield ("spherical", "F4", _path([3, 4, 3]))
    if n == 3:
        yield ("spherical", "H3", _path([5, 3]))
    if n == 4:
        yield ("spherical", "H4", _path([5, 3, 3]))
    # affine, rank n = number of nodes
    if n >= 3:
        yield ("affine", f"A~{n - 1}", _cycle(n))
        yield ("affine", f"C~{n - 1}", _path([4] + [3] * (n - 3) + [4]))
    if n == 3:
        yield ("affine", "G~2", _path([6, 3]))
    if n >= 4:
        yield ("affine", f"B~{n - 1}", _fork_path(n, tail_label=4))
    if n >= 5:
        yield ("affine", f"D~{n - 1}", _double_fork(n))
    if n == 7:
        yield ("affine", "E~6", _branch([2, 2, 2]))
    if n == 8:
        yield ("affine", "E~7", _branch([1, 3, 3]))
    if n == 9:
        yield ("affine", "E~8", _branch([1, 2, 5]))
    if n == 5:
        yield ("affine", "F~4", _path([3, 4, 3, 3]))


def _iso_labeled(edges_a, edges_b, n) -> bool:
    """Backtracking isomorphism test for small edge-labeled graphs on 0..n-1."""
    if len(edges_a) != len(edges_b):
        return False
    if sorted(edges_a.values()) != sorted(edges_b.values()):
        return False

    adj_a = [dict() for _ in range(n)]
    adj_b = [dict() for _ in range(n)]
    for (i, j), m in edges_a.items():
        adj_a[i][j] = m
        adj_a[j][i] = m
    for (i, j), m in edges_b.items():
        adj_b[i][j] = m
        adj_b[j][i] = m

    def sig(adj, v):
        return tuple(sorted(adj[v].values()))

    sigs_a = sorted(sig(adj_a, v) for v in range(n))
    sigs_b = sorted(sig(adj_b, v) for v in range(n))
    if sigs_a != sigs_b:
        return False
    if n > 9:
        order = sorted(range(n), key=lambda v: -len(adj_a[v]))
    else:
        order = list(range(n))

    assign = [-1] * n
    used = [False] * n

    def extend(pos):
        if pos == n:
            return True
        v = order[pos]
        for w in range(n):
            if used[w] or sig(adj_a, v) != sig(adj_b, w):
                continue
            ok = True
            for u, m in adj_a[v].items():
                if assign[u] != -1 and adj_b[w].get(assign[u]) != m:
                    ok = False
                    break
            if ok:
                for u in adj_b[w]:
                    pre = [x for x in range(n) if assign[x] == u]
                    if pre and adj_a[v].get(pre[0]) != adj_b[w][u]:
                        ok = False
                        break
            if ok:
                assign[v] = w
                used[w] = True
                if extend(pos + 1):
                    return True
                assign[v] = -1
                used[w] = False
        return False

    return extend(0)


def _classify_component(sys: CoxeterSystem, comp):
    n = len(comp)
    edges = _edge_dict(sys, comp)
    if n == 1:
        return ("spherical", "A1")
    if n == 2:
        m = list(edges.values())[0]
        if m == INF_CODE:
            return ("affine", "A~1")
        return ("spherical", {3: "A2", 4: "B2", 6: "G2"}.get(m, f"I2({m})"))
    if any(m == INF_CODE for m in edges.values()):
        return ("other", None)
    relabel = {v: k for k, v in enumerate(comp)}
    local = {(min(relabel[a], relabel[b]), max(relabel[a], relabel[b])): m
             for (a, b), m in edges.items()}
    for kind, name, table_edges in _candidate_tables(n):
        if _iso_labeled(local, table_edges, n):
            return (kind, name)
    return ("other", None)
