"""Rewriting kernels for right-angled normal forms.

Group elements are stored as ``bytes`` of generator indices.  ``comm`` is the
boolean commutation matrix: ``comm[i, j]`` iff generators i and j commute
(label 2) -- the diagonal is False since a generator never commutes with
itself for rewriting purposes (an adjacent equal pair cancels instead).

The canonical form of an element is the shortlex-least word among all its
reduced words, generator order taken from the defining system.  It is reached
in two stages:

  1. push letters one at a time onto a buffer, deleting a letter that equals
     the incoming one when only commuting letters separate them (this keeps
     the buffer reduced: the deletion condition for graph products of Z/2);
  2. greedily pull the least front-movable letter to each position
     (a letter is front-movable when everything before it commutes with it),
     which yields the shortlex-least word in the commutation class.

These two loops dominate ball enumeration and the brute-force oracles, so
they are JIT-compiled with numba when available.  Set ``COXLAB_NUMBA=0`` to
force the pure-Python fallback; ``benchmarks/bench_kernels.py`` measures the
difference on identical inputs.
"""
from __future__ import annotations

import os

import numpy as np


def numba_requested() -> bool:
    flag = os.environ.get("COXLAB_NUMBA", "").strip().lower()
    return flag not in ("0", "false", "off", "no")


# --------------------------------------------------------------------------
# pure-Python path (operates on Python lists of ints)

def _push_letter_py(buf: list, s: int, comm) -> None:
    # scan back over letters commuting with s; equal letter found -> cancel
    i = len(buf) - 1
    while i >= 0:
        c = buf[i]
        if c == s:
            del buf[i]
            return
        if not comm[c][s]:
            break
        i -= 1
    buf.append(s)


def _canonicalize_py(buf: list, comm) -> None:
    n = len(buf)
    for i in range(n):
        best = i
        bestval = buf[i]
        for j in range(i + 1, n):
            v = buf[j]
            if v < bestval:
                movable = True
                for k in range(i, j):
                    if not comm[buf[k]][v]:
                        movable = False
                        break
                if movable:
                    best = j
                    bestval = v
        if best != i:
            v = buf[best]
            for k in range(best, i, -1):
                buf[k] = buf[k - 1]
            buf[i] = v


# --------------------------------------------------------------------------
# numba path (operates on uint8 arrays; same algorithms)

def _push_letter_nb(buf, n, s, comm):
    i = n - 1
    while i >= 0:
        c = buf[i]
        if c == s:
            for j in range(i, n - 1):
                buf[j] = buf[j + 1]
            return n - 1
        if not comm[c, s]:
            break
        i -= 1
    buf[n] = s
    return n + 1


def _canonicalize_nb(buf, n, comm):
    for i in range(n):
        best = i
        bestval = buf[i]
        for j in range(i + 1, n):
            v = buf[j]
            if v < bestval:
                movable = True
                for k in range(i, j):
                    if not comm[buf[k], v]:
                        movable = False
                        break
                if movable:
                    best = j
                    bestval = v
        if best != i:
            v = buf[best]
            for k in range(best, i, -1):
                buf[k] = buf[k - 1]
            buf[i] = v


def _normalize_nb(letters, comm, out):
    n = 0
    for idx in range(letters.shape[0]):
        n = _push_letter_nb(out, n, letters[idx], comm)
    _canonicalize_nb(out, n, comm)
    return n


HAS_NUMBA = False
try:  # pragma: no cover - exercised indirectly
    if numba_requested():
        from numba import njit

        _push_letter_nb = njit(cache=True)(_push_letter_nb)
        _canonicalize_nb = njit(cache=True)(_canonicalize_nb)
        _normalize_nb = njit(cache=True)(_normalize_nb)
        HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


class PyKernel:
    """Reference implementation on Python lists."""

    name = "python"

    def __init__(self, comm_matrix: np.ndarray):
        self.comm = tuple(tuple(bool(v) for v in row) for row in comm_matrix)

    def normalize(self, letters) -> bytes:
        buf: list = []
        comm = self.comm
        for s in letters:
            _push_letter_py(buf, s, comm)
        _canonicalize_py(buf, comm)
        return bytes(buf)

    def mult(self, a: bytes, b: bytes) -> bytes:
        buf = list(a)
        comm = self.comm
        for s in b:
            _push_letter_py(buf, s, comm)
        _canonicalize_py(buf, comm)
        return bytes(buf)


class NumbaKernel:
    """JIT path; identical results to PyKernel on every input."""

    name = "numba"

    def __init__(self, comm_matrix: np.ndarray):
        self.comm = np.ascontiguousarray(comm_matrix, dtype=np.bool_)

    def normalize(self, letters) -> bytes:
        arr = np.frombuffer(bytes(letters), dtype=np.uint8)
        out = np.empty(arr.shape[0], dtype=np.uint8)
        n = _normalize_nb(arr, self.comm, out)
        return out[:n].tobytes()

    def mult(self, a: bytes, b: bytes) -> bytes:
        arr = np.frombuffer(a + b, dtype=np.uint8)
        out = np.empty(arr.shape[0], dtype=np.uint8)
        n = _normalize_nb(arr, self.comm, out)
        return out[:n].tobytes()


def kernel_for(comm_matrix: np.ndarray):
    if HAS_NUMBA:
        return NumbaKernel(comm_matrix)
    return PyKernel(comm_matrix)
