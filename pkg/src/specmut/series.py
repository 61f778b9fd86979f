"""Truncated formal-series algebra over a species.

Elements are sparse maps from normal-form monomials to F_p coefficients.
A monomial is a tuple:

  degree 0:   ("e", vertex, t)          -- t indexes the power basis of D_vertex
  degree m:   (t1, a1, t2, ..., am, t_{m+1})
              ints at even positions (basis indices), arrow names at odd ones

Products merge boundary slots through the field structure constants and are
silently truncated above the carried order N.  The cyclic-derivative
calculus (derivation, derivative, dual-basis contractions, Jacobian
generators) lives here as well.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass

from .species import SpeciesSpec

E = "e"


# ---------------------------------------------------------------------------
# monomial helpers

def mon_degree(mon) -> int:
    return 0 if mon[0] == E else (len(mon) - 1) // 2


def mon_arrows(mon):
    return mon[1::2] if mon[0] != E else ()


def mon_source(sp: SpeciesSpec, mon) -> int:
    if mon[0] == E:
        return mon[1]
    return sp.arrow_by_name[mon[1]].source


def mon_target(sp: SpeciesSpec, mon) -> int:
    if mon[0] == E:
        return mon[1]
    return sp.arrow_by_name[mon[-2]].target


def mon_is_cyclic(sp: SpeciesSpec, mon) -> bool:
    return mon_degree(mon) >= 1 and mon_source(sp, mon) == mon_target(sp, mon)


def mon_is_composable(sp: SpeciesSpec, mon) -> bool:
    if mon[0] == E:
        return 1 <= mon[1] <= sp.n and 0 <= mon[2] < sp.degree_at(mon[1])
    arrows = [sp.arrow_by_name[a] for a in mon[1::2]]
    for a, b in zip(arrows, arrows[1:]):
        if a.target != b.source:
            return False
    verts = [arrows[0].source] + [a.target for a in arrows]
    slots = mon[0::2]
    return all(0 <= t < sp.degree_at(v) for t, v in zip(slots, verts))


# ---------------------------------------------------------------------------
# series elements

class SeriesElement:
    """Sparse truncated element of the series algebra over a species."""

    __slots__ = ("species", "trunc", "terms")

    def __init__(self, species: SpeciesSpec, trunc: int, terms=None):
        self.species = species
        self.trunc = trunc
        self.terms = {}
        if terms:
            p = species.p
            for mon, c in terms.items():
                c %= p
                if c and mon_degree(mon) <= trunc:
                    self.terms[mon] = c

    # constructors ------------------------------------------------------

    @staticmethod
    def zero(sp, n):
        return SeriesElement(sp, n)

    @staticmethod
    def unit(sp, n):
        return SeriesElement(sp, n, {(E, i, 0): 1 for i in range(1, sp.n + 1)})

    @staticmethod
    def idempotent(sp, n, i):
        return SeriesElement(sp, n, {(E, i, 0): 1})

    @staticmethod
    def scalar_at(sp, n, i, t_idx, coeff=1):
        return SeriesElement(sp, n, {(E, i, t_idx): coeff})

    @staticmethod
    def arrow(sp, n, name, coeff=1):
        if name not in sp.arrow_by_name:
            raise KeyError(f"unknown arrow {name}")
        return SeriesElement(sp, n, {(0, name, 0): coeff})

    @staticmethod
    def monomial(sp, n, mon, coeff=1):
        if not mon_is_composable(sp, mon):
            raise ValueError(f"monomial {mon} is not composable over this species")
        return SeriesElement(sp, n, {mon: coeff})

    # basics ------------------------------------------------------------

    def _check(self, other):
        if self.species is not other.species and not (
                self.species.same_shape(other.species)
                and self.species.arrows == other.species.arrows):
            raise ValueError("species mismatch")
        if self.trunc != other.trunc:
            raise ValueError("truncation order mismatch")

    def copy(self):
        out = SeriesElement(self.species, self.trunc)
        out.terms = dict(self.terms)
        return out

    def truncate(self, n):
        """Same element viewed at truncation order n, dropping higher terms."""
        return SeriesElement(self.species, n, self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, SeriesElement)
                and self.trunc == other.trunc and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        self._check(other)
        p = self.species.p
        out = dict(self.terms)
        for mon, c in other.terms.items():
            v = (out.get(mon, 0) + c) % p
            if v:
                out[mon] = v
            else:
                out.pop(mon, None)
        r = SeriesElement(self.species, self.trunc)
        r.terms = out
        return r

    def __neg__(self):
        p = self.species.p
        r = SeriesElement(self.species, self.trunc)
        r.terms = {m: (-c) % p for m, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        p = self.species.p
        c %= p
        r = SeriesElement(self.species, self.trunc)
        if c:
            r.terms = {m: (cc * c) % p for m, cc in self.terms.items()}
        return r

    def __mul__(self, other):
        self._check(other)
        return multiply(self, other)

    def degree_part(self, m: int) -> "SeriesElement":
        r = SeriesElement(self.species, self.trunc)
        r.terms = {mon: c for mon, c in self.terms.items() if mon_degree(mon) == m}
        return r

    def degree_range(self, lo: int, hi=None) -> "SeriesElement":
        hi = self.trunc if hi is None else hi
        r = SeriesElement(self.species, self.trunc)
        r.terms = {mon: c for mon, c in self.terms.items()
                   if lo <= mon_degree(mon) <= hi}
        return r

    def max_degree(self) -> int:
        return max((mon_degree(m) for m in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((mon_degree(m) for m in self.terms), default=-1)

    def term_count_by_degree(self) -> dict:
        out = {}
        for mon in self.terms:
            d = mon_degree(mon)
            out[d] = out.get(d, 0) + 1
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mon, c in sorted(self.terms.items(), key=lambda kv: (mon_degree(kv[0]), kv[0]))[:8]:
            bits.append(f"{c}*{_pretty_mon(self.species, mon)}")
        more = "" if len(self.terms) <= 8 else f" ... ({len(self.terms)} terms)"
        return " + ".join(bits) + more

    def to_json(self):
        return {
            "trunc": self.trunc,
            "terms": [{"monomial": list(m), "coeff": c}
                      for m, c in sorted(self.terms.items(),
                                         key=lambda kv: tuple(map(str, kv[0])))],
        }

    @staticmethod
    def from_json(sp, data):
        terms = {tuple(t["monomial"]): t["coeff"] for t in data["terms"]}
        return SeriesElement(sp, data["trunc"], terms)


def _pretty_mon(sp, mon):
    if mon[0] == E:
        return f"e{mon[1]}" if mon[2] == 0 else f"x{mon[1]}^{mon[2]}"
    bits = []
    verts = [mon_source(sp, mon)]
    for a in mon[1::2]:
        verts.append(sp.arrow_by_name[a].target)
    for idx, x in enumerate(mon):
        if idx % 2 == 1:
            bits.append(x)
        else:
            v = verts[idx // 2]
            if x:
                bits.append(f"x{v}^{x}" if x > 1 else f"x{v}")
    return ".".join(bits) if bits else "1"


# ---------------------------------------------------------------------------
# multiplication

def _mul_mon(sp, m1, m2, out, coeff, trunc, p):
    """Accumulate m1*m2 (scaled by coeff) into ``out``."""
    d1, d2 = mon_degree(m1), mon_degree(m2)
    if d1 + d2 > trunc:
        return
    if mon_target(sp, m1) != mon_source(sp, m2):
        return
    v = mon_target(sp, m1)
    f = sp.field_at(v)
    t_left = m1[2] if d1 == 0 else m1[-1]
    t_right = m2[2] if d2 == 0 else m2[0]
    row = f.basis_mul(t_left, t_right)
    for k, ck in enumerate(row):
        if not ck:
            continue
        c = (coeff * ck) % p
        if d1 == 0 and d2 == 0:
            mon = (E, v, k)
        elif d1 == 0:
            mon = (k,) + m2[1:]
        elif d2 == 0:
            mon = m1[:-1] + (k,)
        else:
            mon = m1[:-1] + (k,) + m2[1:]
        nv = (out.get(mon, 0) + c) % p
        if nv:
            out[mon] = nv
        else:
            out.pop(mon, None)


def multiply(f: SeriesElement, g: SeriesElement) -> SeriesElement:
    sp, trunc, p = f.species, f.trunc, f.species.p
    out = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            _mul_mon(sp, m1, m2, out, (c1 * c2) % p, trunc, p)
    r = SeriesElement(sp, trunc)
    r.terms = out
    return r


def cyclic_part(f: SeriesElement) -> SeriesElement:
    r = SeriesElement(f.species, f.trunc)
    r.terms = {m: c for m, c in f.terms.items()
               if mon_is_cyclic(f.species, m)}
    return r


# ---------------------------------------------------------------------------
# enumeration

def enumerate_paths(sp: SpeciesSpec, m: int, cyclic_only=False):
    """Composable arrow-name sequences of length m, in deterministic order."""
    if m == 0:
        return [()]
    paths = [[a] for a in sorted(sp.arrows, key=lambda x: x.name)]
    for _ in range(m - 1):
        nxt = []
        for path in paths:
            for a in sorted(sp.arrows_from(path[-1].target), key=lambda x: x.name):
                nxt.append(path + [a])
        paths = nxt
        if not paths:
            return []
    if cyclic_only:
        paths = [pt for pt in paths if pt[0].source == pt[-1].target]
    return [tuple(a.name for a in pt) for pt in paths]


def _path_monomials(sp, path):
    arrows = [sp.arrow_by_name[a] for a in path]
    verts = [arrows[0].source] + [a.target for a in arrows]
    ranges = [range(sp.degree_at(v)) for v in verts]
    for slots in itertools.product(*ranges):
        mon = [slots[0]]
        for a, t in zip(path, slots[1:]):
            mon.append(a)
            mon.append(t)
        yield tuple(mon)


def enumerate_monomials(sp: SpeciesSpec, m: int):
    """All degree-m normal-form monomials, deterministic order."""
    if m == 0:
        return [(E, i, t) for i in range(1, sp.n + 1)
                for t in range(sp.degree_at(i))]
    out = []
    for path in enumerate_paths(sp, m):
        out.extend(_path_monomials(sp, path))
    return out


def enumerate_BT(sp: SpeciesSpec, m: int):
    """The basis of the degree-m cyclic part (m >= 2)."""
    if m < 2:
        raise ValueError("cyclic basis starts at degree 2")
    out = []
    for path in enumerate_paths(sp, m, cyclic_only=True):
        out.extend(_path_monomials(sp, path))
    return out


def enumerate_BT_up_to(sp: SpeciesSpec, n: int):
    out = []
    for m in range(2, n + 1):
        out.extend(enumerate_BT(sp, m))
    return out


# ---------------------------------------------------------------------------
# cyclic derivation and derivative

def _letters(sp, mon):
    """Split a monomial into alternating scalar/arrow letters."""
    if mon[0] == E:
        return [(E, mon[1], mon[2])]
    arrows = [sp.arrow_by_name[a] for a in mon[1::2]]
    verts = [arrows[0].source] + [a.target for a in arrows]
    out = []
    for idx, x in enumerate(mon):
        if idx % 2 == 1:
            out.append(("a", x))
        else:
            out.append((E, verts[idx // 2], x))
    return out


def _word_to_series(sp, trunc, letters):
    acc = SeriesElement.unit(sp, trunc)
    for let in letters:
        if let[0] == E:
            nxt = SeriesElement.scalar_at(sp, trunc, let[1], let[2])
        else:
            nxt = SeriesElement.arrow(sp, trunc, let[1])
        acc = acc * nxt
    return acc


def cyclic_derivation(f: SeriesElement, g: SeriesElement) -> SeriesElement:
    """Definitional h(f)(g): split f with the derivation 1 x s - s x 1 on
    scalars and 1 x a on arrows, then close up cyclically around g.

    Slow reference implementation; the rotation-form derivative is checked
    against it.
    """
    f._check(g)
    sp, trunc = f.species, f.trunc
    total = SeriesElement.zero(sp, trunc)
    for mon, c in f.terms.items():
        letters = _letters(sp, mon)
        for r, let in enumerate(letters):
            prefix, suffix = letters[:r], letters[r + 1:]
            # Delta(letter) as [(sign, left-extra, right-extra)]
            if let[0] == E:
                parts = [(1, [], [let]), (-1, [let], [])]
            else:
                parts = [(1, [], [let])]
            for sign, lex, rex in parts:
                left = _word_to_series(sp, trunc, prefix + lex)
                right = _word_to_series(sp, trunc, rex + suffix)
                term = cyclic_part(right * g * left)
                total = total + term.scale(sign * c)
    return total


def _rotations(sp, mon):
    """Arrow-led rotations of a cyclic monomial, as (monomial, coeff) sums.

    Rotation r starts with arrow a_{r+1}, carries leading slot "1" and merges
    the boundary product t_{m+1} * t_1 through the structure constants.  This
    is the internal normal form used by the mutation machinery; the cyclic
    derivative uses the scalar-led convention (see cyclic_derivative).
    """
    m = mon_degree(mon)
    v = mon_source(sp, mon)
    f = sp.field_at(v)
    t1, tlast = mon[0], mon[-1]
    row = f.basis_mul(tlast, t1)
    body = mon[1:-1]  # a1 t2 a2 ... tm am  (length 2m-1)
    out = []
    for r in range(m):
        # arrows a_{r+1}..a_m then a_1..a_r ; merged slot sits after a_m
        head = body[2 * r:]          # a_{r+1} t_{r+2} ... a_m
        tail = body[:2 * r]          # a_1 t_2 ... a_r t_{r+1}
        terms = {}
        for k, ck in enumerate(row):
            if not ck:
                continue
            rotated = (0,) + tuple(head) + (k,) + tuple(tail)
            terms[rotated] = ck
        out.append(terms)
    return out


def _delta_rotations(sp, mon):
    """Scalar-led rotations realizing delta on one cyclic monomial.

    The Delta/u definition telescopes to m rotations, each cut just before a
    scalar slot: for x = t_1 a_1 t_2 ... a_m t_{m+1},

        delta(x) = sum_{r=2}^{m+1}  t_r a_r ... a_m (t_{m+1} t_1) a_1 ... a_{r-1} 1

    so every term starts with the scalar preceding an arrow and ends with the
    unit slot, with the boundary product merged at the seam.
    """
    m = mon_degree(mon)
    v = mon_source(sp, mon)
    f = sp.field_at(v)
    row = f.basis_mul(mon[-1], mon[0])
    body = mon[1:-1]  # a1 t2 a2 ... tm am  (length 2m-1)
    out = []
    for r in range(2, m + 2):
        terms = {}
        for k, ck in enumerate(row):
            if not ck:
                continue
            if r == m + 1:
                rotated = (k,) + tuple(body) + (0,)
            else:
                rotated = ((body[2 * r - 3],) + tuple(body[2 * r - 2:])
                           + (k,) + tuple(body[:2 * r - 3]) + (0,))
            terms[rotated] = ck
        out.append(terms)
    return out


def cyclic_derivative(f: SeriesElement) -> SeriesElement:
    """delta(f) = h(f)(1): sum of scalar-led rotations of each cyclic term."""
    sp, trunc, p = f.species, f.trunc, f.species.p
    out = {}
    for mon, c in f.terms.items():
        if not mon_is_cyclic(sp, mon):
            continue
        for terms in _delta_rotations(sp, mon):
            for rm, ck in terms.items():
                v = (out.get(rm, 0) + c * ck) % p
                if v:
                    out[rm] = v
                else:
                    out.pop(rm, None)
    r = SeriesElement(sp, trunc)
    r.terms = out
    return r


# ---------------------------------------------------------------------------
# dual-basis contraction

def validate_psi(sp: SpeciesSpec, psi: dict):
    """psi maps (basis index, arrow name) -> value tuple in D_{target}."""
    for (t, name), val in psi.items():
        if name not in sp.arrow_by_name:
            raise ValueError(f"psi references unknown arrow {name}")
        a = sp.arrow_by_name[name]
        if not 0 <= t < sp.degree_at(a.source):
            raise ValueError(f"psi slot {t} out of range for arrow {name}")
        if len(val) != sp.field_at(a.target).degree:
            raise ValueError(f"psi value for ({t},{name}) lives in the wrong field")


def dual_functional(sp: SpeciesSpec, s_idx: int, arrow_name: str) -> dict:
    """(s a)* on the right S-local basis: s a -> e_{target}, everything else -> 0."""
    a = sp.arrow_by_name[arrow_name]
    if not 0 <= s_idx < sp.degree_at(a.source):
        raise ValueError("basis index out of range")
    return {(s_idx, arrow_name): sp.field_at(a.target).one}


def psi_star(psi: dict, f: SeriesElement) -> SeriesElement:
    """Extension of a right-module map to the series algebra; drops degree by 1."""
    sp, trunc, p = f.species, f.trunc, f.species.p
    validate_psi(sp, psi)
    out = {}
    for mon, c in f.terms.items():
        d = mon_degree(mon)
        if d == 0:
            continue
        val = psi.get((mon[0], mon[1]))
        if val is None or not any(val):
            continue
        a = sp.arrow_by_name[mon[1]]
        fld = sp.field_at(a.target)
        # multiply psi(t1 a1) into the next slot
        nxt = mon[2]
        prod = fld.mul(val, fld.basis(nxt))
        for k, ck in enumerate(prod):
            if not ck:
                continue
            if d == 1:
                new = (E, a.target, k)
            else:
                new = (k,) + mon[3:]
            v = (out.get(new, 0) + c * ck) % p
            if v:
                out[new] = v
            else:
                out.pop(new, None)
    r = SeriesElement(sp, trunc)
    r.terms = out
    return r


def delta_psi(psi: dict, f: SeriesElement) -> SeriesElement:
    return psi_star(psi, cyclic_derivative(f))


def jacobian_generator(p_elem: SeriesElement, arrow_name: str) -> SeriesElement:
    """X_{a*}(P) = sum over s in L(source(a)) of delta_{(sa)*}(P) . s"""
    sp, trunc = p_elem.species, p_elem.trunc
    if arrow_name not in sp.arrow_by_name:
        raise KeyError(f"unknown arrow {arrow_name}")
    a = sp.arrow_by_name[arrow_name]
    delta = cyclic_derivative(p_elem)
    total = SeriesElement.zero(sp, trunc)
    for s in range(sp.degree_at(a.source)):
        part = psi_star(dual_functional(sp, s, arrow_name), delta)
        total = total + part * SeriesElement.scalar_at(sp, trunc, a.source, s)
    return total


def ideal_span_truncated(p_elem: SeriesElement, n: int):
    """Row space of R(P) truncated to degrees <= n.

    Returns (index, RowSpace): ``index`` maps each monomial of degree <= n to
    a column.  The span is grown to closure under one-letter multiplication
    on both sides.
    """
    import numpy as np
    from .linalg import RowSpace

    sp = p_elem.species
    p = sp.p
    mons = []
    for m in range(0, n + 1):
        mons.extend(enumerate_monomials(sp, m))
    index = {mon: i for i, mon in enumerate(mons)}

    def vec(se):
        v = np.zeros(len(index), dtype=np.int64)
        for mon, c in se.terms.items():
            if mon in index:
                v[index[mon]] = c
        return v

    gens = []
    for a in sp.arrows:
        g = jacobian_generator(p_elem, a.name).truncate(n)
        if not g.is_zero():
            gens.append(g)

    space = RowSpace(len(index), p)
    letters = [SeriesElement.scalar_at(sp, n, i, t)
               for i in range(1, sp.n + 1) for t in range(sp.degree_at(i))]
    letters += [SeriesElement.monomial(sp, n, (t, a.name, u))
                for a in sp.arrows
                for t in range(sp.degree_at(a.source))
                for u in range(sp.degree_at(a.target))]

    frontier = []
    for g in gens:
        if space.add(vec(g)):
            frontier.append(g)
    while frontier:
        nxt = []
        for g in frontier:
            for let in letters:
                for prod in (let * g, g * let):
                    if prod.is_zero():
                        continue
                    if space.add(vec(prod)):
                        nxt.append(prod)
        frontier = nxt
    return index, space


# ---------------------------------------------------------------------------
# potentials

class Potential(SeriesElement):
    """A cyclic series element with every term of degree >= 2."""

    def __init__(self, species, trunc, terms=None):
        super().__init__(species, trunc, terms)
        for mon in self.terms:
            if mon_degree(mon) < 2:
                raise ValueError("potential terms must have degree >= 2")
            if not mon_is_cyclic(species, mon):
                raise ValueError(f"potential term {mon} is not cyclic")

    @staticmethod
    def from_series(se: SeriesElement) -> "Potential":
        return Potential(se.species, se.trunc, se.terms)


def is_2acyclic(p_elem: SeriesElement) -> bool:
    """True iff the potential has no degree-2 term."""
    return all(mon_degree(m) != 2 for m in p_elem.terms)


def random_potential(sp: SpeciesSpec, n: int, seed: int,
                     support: str = "all") -> Potential:
    """Uniform F_p coefficients on the chosen cyclic support; deterministic per seed.

    support "all": every basis cycle of degree 2..n.
    support "cycles-only-min-degree": only the lowest cyclic degree present.
    """
    if n < 2:
        raise ValueError("truncation order must be >= 2")
    rng = random.Random(seed)
    mons = enumerate_BT_up_to(sp, n)
    if support == "cycles-only-min-degree" and mons:
        lowest = min(mon_degree(m) for m in mons)
        mons = [m for m in mons if mon_degree(m) == lowest]
    elif support != "all" and support != "cycles-only-min-degree":
        raise ValueError(f"unknown support policy {support!r}")
    if not mons:
        warnings.warn("species has no cycles up to the truncation order; "
                      "the random potential is zero")
        return Potential(sp, n)
    terms = {}
    for mon in mons:
        c = rng.randrange(sp.p)
        if c:
            terms[mon] = c
    return Potential(sp, n, terms)


@dataclass
class SpeciesWithPotential:
    species: SpeciesSpec
    potential: Potential
    trunc: int

    def __post_init__(self):
        if self.potential.trunc != self.trunc:
            raise ValueError("potential truncation differs from carried order")

    @staticmethod
    def build(sp, n, potential=None):
        pot = potential if potential is not None else Potential(sp, n)
        return SpeciesWithPotential(sp, pot, n)
