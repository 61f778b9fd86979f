"""Exact linear algebra over F_p.

Everything here works on numpy int64 matrices whose entries are reduced
mod p.  Sizes are desk scale (a few thousand rows/columns at most), so a
straightforward Gaussian elimination with vectorized row operations is
plenty.
"""

from __future__ import annotations

import numpy as np


def _inv_mod(x: int, p: int) -> int:
    return pow(int(x) % p, p - 2, p)


def as_matrix(rows, p: int) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return np.mod(a, p)


def rref(a: np.ndarray, p: int):
    """Row-reduce a copy of ``a`` mod p.  Returns (reduced matrix, pivot columns)."""
    m = np.mod(a.astype(np.int64), p).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * _inv_mod(m[r, c], p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    _, pivots = rref(a, p)
    return len(pivots)


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """One solution of a x = b mod p, or None if inconsistent.

    ``b`` may be a vector or a matrix of stacked right-hand columns.
    """
    a = np.mod(a.astype(np.int64), p)
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    aug = np.concatenate([a, np.mod(bb.astype(np.int64), p)], axis=1)
    red, pivots = rref(aug, p)
    n = a.shape[1]
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, bb.shape[1]), dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, n:]
    return x[:, 0] if vec else x


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel, one vector per row."""
    a = np.mod(a.astype(np.int64), p)
    n = a.shape[1]
    red, pivots = rref(a, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red[r, c]) % p
    return basis


def inv(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    x = solve(a, np.eye(n, dtype=np.int64), p)
    if x is None:
        raise ValueError("matrix is singular mod %d" % p)
    return x


def in_rowspace(rows: np.ndarray, v: np.ndarray, p: int) -> bool:
    if rows.size == 0:
        return not np.any(np.mod(v, p))
    return rank(np.vstack([rows, v]), p) == rank(rows, p)


class RowSpace:
    """Incrementally built row space mod p, kept in reduced form."""

    def __init__(self, ncols: int, p: int):
        self.p = p
        self.ncols = ncols
        self._buf = np.zeros((16, ncols), dtype=np.int64)
        self._n = 0
        self.pivots: list[int] = []

    @property
    def rows(self) -> np.ndarray:
        return self._buf[:self._n]

    def add(self, v) -> bool:
        """Reduce v against the space; add if independent.  Returns True if added."""
        p = self.p
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * _inv_mod(v[c], p)) % p
        rows = self.rows
        coeffs = rows[:, c]
        hit = np.nonzero(coeffs)[0]
        if hit.size:
            rows[hit] = (rows[hit] - np.outer(coeffs[hit], v)) % p
        if self._n == self._buf.shape[0]:
            self._buf = np.vstack([self._buf, np.zeros_like(self._buf)])
        self._buf[self._n] = v
        self._n += 1
        self.pivots.append(c)
        return True

    def reduce(self, v) -> np.ndarray:
        p = self.p
        v = np.mod(np.asarray(v, dtype=np.int64), p).copy()
        if self._n:
            coeffs = v[self.pivots]
            hit = np.nonzero(coeffs)[0]
            if hit.size:
                v = (v - coeffs[hit] @ self.rows[hit]) % p
        return v

    def contains(self, v) -> bool:
        return not np.any(self.reduce(v))

    @property
    def dim(self) -> int:
        return len(self.pivots)
