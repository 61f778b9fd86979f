"""Arithmetic in F_p and its extensions F_{p^d}.

Vertices of a species carry the commutative division rings D_i = F_{p^{d_i}},
modeled on the power basis {1, x, ..., x^{d-1}} modulo a fixed monic
irreducible polynomial.  Elements are plain tuples of ints (length d,
entries reduced mod p); the ExtensionField object owns all operations and
the precomputed structure constants used by the series engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")


# -- dense polynomial helpers over F_p (coefficient lists, low degree first) --

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _poly_trim(a)
    return a


def _poly_powmod(a, e, m, p):
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _prime_factors(n: int):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def poly_is_irreducible(poly, p: int) -> bool:
    """Monic polynomial irreducibility over F_p (Rabin's test)."""
    d = len(poly) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    # x^(p^d) == x mod poly
    h = _poly_powmod(x, p ** d, poly, p)
    if _poly_sub(h, x, p):
        return False
    for q in _prime_factors(d):
        h = _poly_powmod(x, p ** (d // q), poly, p)
        g = _poly_gcd(list(poly), _poly_sub(h, x, p), p)
        if len(g) - 1 >= 1:
            return False
    return True


class ExtensionField:
    """F_{p^d} with power basis modulo a monic irreducible min_poly.

    ``min_poly`` is a tuple of d+1 coefficients, low degree first, monic.
    Elements are tuples of d ints mod p.
    """

    def __init__(self, p: int, degree: int, min_poly):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if degree < 1:
            raise ValueError("degree must be >= 1")
        if len(min_poly) != degree + 1 or min_poly[-1] != 1:
            raise ValueError("min_poly must be monic of the stated degree")
        if not poly_is_irreducible(list(min_poly), p):
            raise ValueError("min_poly is reducible")
        self.p = p
        self.degree = degree
        self.min_poly = tuple(c % p for c in min_poly)
        d = degree
        self.zero = (0,) * d
        self.one = tuple([1] + [0] * (d - 1)) if d > 0 else ()
        # structure constants: basis_i * basis_j expanded over the basis
        self._table = [[None] * d for _ in range(d)]
        for i in range(d):
            for j in range(d):
                prod = [0] * (i + j + 1)
                prod[i + j] = 1
                r = _poly_mod(prod, list(self.min_poly), p)
                self._table[i][j] = tuple(r + [0] * (d - len(r)))
        # coefficient-of-1 Gram matrix and its inverse (dual-basis solver)
        g = np.array([[self._table[i][j][0] for j in range(d)] for i in range(d)],
                     dtype=np.int64)
        self.gram = g
        self.gram_inv = linalg.inv(g, p)

    def __repr__(self):
        return f"ExtensionField(p={self.p}, degree={self.degree})"

    def __eq__(self, other):
        return (isinstance(other, ExtensionField)
                and self.p == other.p and self.min_poly == other.min_poly)

    def __hash__(self):
        return hash((self.p, self.min_poly))

    def basis(self, i: int):
        v = [0] * self.degree
        v[i] = 1
        return tuple(v)

    def from_int(self, c: int):
        v = [0] * self.degree
        v[0] = c % self.p
        return tuple(v)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def scale(self, c, a):
        p = self.p
        c %= p
        return tuple((c * x) % p for x in a)

    def mul(self, a, b):
        p, d = self.p, self.degree
        out = [0] * d
        tab = self._table
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        c = (ai * bj) % p
                        row = tab[i][j]
                        for k in range(d):
                            if row[k]:
                                out[k] = (out[k] + c * row[k]) % p
        return tuple(out)

    def basis_mul(self, i: int, j: int):
        """Structure-constant row for basis_i * basis_j."""
        return self._table[i][j]

    def pow(self, a, e: int):
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.p ** self.degree - 2)

    def dual_coefficient(self, s: int):
        """u_s in this field with coeff-of-1(u_s * basis_t) == delta_{s,t}.

        Used by mutation to factor dual-basis maps through a single dual arrow.
        """
        return tuple(int(c) for c in self.gram_inv[s])

    def coeff_of_one(self, a) -> int:
        return a[0]

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))


@dataclass(frozen=True)
class FieldElement:
    """Thin operator wrapper around the tuple representation."""
    field: ExtensionField
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.field.degree:
            raise ValueError("coefficient vector has the wrong length")
        object.__setattr__(self, "coeffs",
                           tuple(c % self.field.p for c in self.coeffs))

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("elements from different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.coeffs))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.coeffs, other.coeffs))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.coeffs))


@lru_cache(maxsize=None)
def make_extension(p: int, d: int) -> ExtensionField:
    """F_{p^d} with the first monic irreducible polynomial of degree d.

    Candidates x^d + c_{d-1}x^{d-1} + ... + c_0 are scanned in increasing
    order of the integer c_0 + c_1 p + ... (deterministic, so serialized
    sessions reproduce).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d < 1:
        raise ValueError("degree must be >= 1")
    for k in range(p ** d):
        coeffs = []
        kk = k
        for _ in range(d):
            coeffs.append(kk % p)
            kk //= p
        poly = coeffs + [1]
        if poly_is_irreducible(poly, p):
            return ExtensionField(p, d, tuple(poly))
    raise RuntimeError("unreachable: irreducible polynomial always exists")


def solve_linear(matrix, rhs, p: int):
    """Exact solution over F_p, or the string "inconsistent"."""
    a = linalg.as_matrix(matrix, p)
    b = np.mod(np.asarray(rhs, dtype=np.int64), p)
    if a.shape[0] != b.shape[0]:
        raise ValueError("dimension mismatch")
    x = linalg.solve(a, b, p)
    if x is None:
        return "inconsistent"
    return x
