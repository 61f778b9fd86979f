"""Integer exchange-matrix layer.

Skew-symmetrizability, minimal skew-symmetrizer search, the divisibility
hypothesis, standard matrix mutation, and the 4x4 two-parameter family
generator with its (non-)primitivity metadata.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


@dataclass(frozen=True)
class ExchangeMatrix:
    rows: tuple  # tuple of tuples of ints

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @staticmethod
    def from_json(data) -> "ExchangeMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        rows = data["rows"]
        if len(rows) != data.get("n", len(rows)):
            raise ValueError("declared size does not match rows")
        return ExchangeMatrix(tuple(tuple(r) for r in rows))

    def __str__(self):
        return "\n".join(" ".join(f"{x:4d}" for x in r) for r in self.rows)


@dataclass(frozen=True)
class SkewSymmetrizer:
    diag: tuple  # positive ints

    def __post_init__(self):
        diag = tuple(int(d) for d in self.diag)
        if any(d <= 0 for d in diag):
            raise ValueError("skew-symmetrizer entries must be positive")
        object.__setattr__(self, "diag", diag)

    def symmetrizes(self, b: ExchangeMatrix) -> bool:
        n = b.n
        if len(self.diag) != n:
            return False
        d = self.diag
        return all(d[i] * b[i, j] == -d[j] * b[j, i]
                   for i in range(n) for j in range(n))


def is_sign_skew_symmetric(b: ExchangeMatrix) -> bool:
    n = b.n
    for i in range(n):
        for j in range(n):
            if (b[i, j] > 0) != (b[j, i] < 0):
                return False
    return True


def find_skew_symmetrizer(b: ExchangeMatrix):
    """Componentwise-minimal positive skew-symmetrizer, or None.

    Ratios d_i b_ij = -d_j b_ji are propagated along the nonzero pattern of
    each connected component; denominators are cleared by lcm and the
    component is scaled down to minimal positive integers.
    """
    n = b.n
    if not is_sign_skew_symmetric(b):
        return None
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        comp = [start]
        ratio = {start: Fraction(1)}
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(n):
                if b[i, j] == 0:
                    continue
                # d_i b_ij = -d_j b_ji  =>  d_j = d_i * (-b_ij / b_ji)
                r = ratio[i] * Fraction(-b[i, j], b[j, i])
                if r <= 0:
                    return None
                if j in ratio:
                    if ratio[j] != r:
                        return None
                else:
                    ratio[j] = r
                    comp.append(j)
                    queue.append(j)
        scale = lcm(*(ratio[j].denominator for j in comp))
        vals = [ratio[j].numerator * (scale // ratio[j].denominator) for j in comp]
        g = gcd(*vals)
        for j, v in zip(comp, vals):
            d[j] = v // g
    cand = SkewSymmetrizer(tuple(d))
    if not cand.symmetrizes(b):
        return None
    return cand


def check_divisibility(b: ExchangeMatrix, d: SkewSymmetrizer) -> bool:
    """True iff d_j divides b_ij for all i, j."""
    if not d.symmetrizes(b):
        raise ValueError("D is not a skew-symmetrizer of B")
    n = b.n
    return all(b[i, j] % d.diag[j] == 0 for i in range(n) for j in range(n))


def matrix_mutate(b: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Standard matrix mutation at vertex k (1-based)."""
    n = b.n
    if not 1 <= k <= n:
        raise IndexError(f"vertex {k} out of range 1..{n}")
    k -= 1
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-b[i, j])
            else:
                bik, bkj = b[i, k], b[k, j]
                sgn = (bik > 0) - (bik < 0)
                row.append(b[i, j] + sgn * max(0, bik * bkj))
        rows.append(tuple(row))
    return ExchangeMatrix(tuple(rows))


def family_matrix(a: int, b: int) -> ExchangeMatrix:
    """The 4x4 two-parameter family with rows [0,-a,0,b],[1,0,-1,0],[0,a,0,-b],[-1,0,1,0].

    Requires 0 < a < b, a not dividing b, and gcd(a, b) != 1.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if b % a == 0:
        raise ValueError(f"a must not divide b, got a={a}, b={b}")
    if gcd(a, b) == 1:
        raise ValueError(f"a and b must not be coprime, got a={a}, b={b}")
    return ExchangeMatrix((
        (0, -a, 0, b),
        (1, 0, -1, 0),
        (0, a, 0, -b),
        (-1, 0, 1, 0),
    ))


def is_strongly_primitive_proxy(b: ExchangeMatrix) -> bool:
    """Pairwise-coprimality of the minimal skew-symmetrizer diagonal.

    This is a proxy for strong primitivity; results are labeled as such in
    reports.
    """
    d = find_skew_symmetrizer(b)
    if d is None:
        raise ValueError("matrix is not skew-symmetrizable")
    diag = d.diag
    n = len(diag)
    return all(gcd(diag[i], diag[j]) == 1
               for i in range(n) for j in range(i + 1, n))
