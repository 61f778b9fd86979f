"""Species realizations of skew-symmetrizable matrices.

A species here is a free construction: vertex i carries D_i = F_{p^{d_i}},
and for every positive entry b_ij the block e_i M e_j is the free
D_i-D_j-bimodule on n_ij = b_ij / d_j arrows.  Z-free generation holds by
construction, and all dimension counts are exact bookkeeping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exchange import ExchangeMatrix, SkewSymmetrizer, check_divisibility
from .fields import ExtensionField, make_extension

ORIGINAL = "original"
COMPOSITE = "composite"
DUAL_RIGHT = "dual_right"   # a* for an arrow a out of the mutated vertex
DUAL_LEFT = "dual_left"     # *b for an arrow b into the mutated vertex
REDUCED = "reduced"         # replacement arrow chosen by the splitting step


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int  # 1-based vertex index
    target: int
    copy: int = 0
    kind: str = ORIGINAL

    def __str__(self):
        return f"{self.name}:{self.source}->{self.target}"


class SpeciesSpec:
    """Vertices with field extensions, plus the arrow set spanning M_0."""

    def __init__(self, p: int, degrees, arrows):
        self.p = p
        self.degrees = tuple(int(d) for d in degrees)
        if any(d < 1 for d in self.degrees):
            raise ValueError("vertex degrees must be positive")
        self.n = len(self.degrees)
        self.fields = tuple(make_extension(p, d) for d in self.degrees)
        self.arrows = tuple(arrows)
        self.arrow_by_name = {}
        for a in self.arrows:
            if not (1 <= a.source <= self.n and 1 <= a.target <= self.n):
                raise ValueError(f"arrow {a} has a vertex outside 1..{self.n}")
            if a.source == a.target:
                raise ValueError(f"loop arrow {a} not allowed")
            if a.name in self.arrow_by_name:
                raise ValueError(f"duplicate arrow name {a.name}")
            self.arrow_by_name[a.name] = a

    def field_at(self, i: int) -> ExtensionField:
        return self.fields[i - 1]

    def degree_at(self, i: int) -> int:
        return self.degrees[i - 1]

    def arrows_from(self, i: int):
        return [a for a in self.arrows if a.source == i]

    def arrows_to(self, i: int):
        return [a for a in self.arrows if a.target == i]

    def arrows_between(self, i: int, j: int):
        return [a for a in self.arrows if a.source == i and a.target == j]

    def multiplicity(self, i: int, j: int) -> int:
        return len(self.arrows_between(i, j))

    def block_dim(self, i: int, j: int) -> int:
        """dim_F e_i M e_j = n_ij * d_i * d_j."""
        return self.multiplicity(i, j) * self.degree_at(i) * self.degree_at(j)

    def total_dim(self) -> int:
        return sum(self.degree_at(a.source) * self.degree_at(a.target)
                   for a in self.arrows)

    def same_shape(self, other: "SpeciesSpec") -> bool:
        return self.p == other.p and self.degrees == other.degrees

    def __repr__(self):
        return (f"SpeciesSpec(p={self.p}, degrees={self.degrees}, "
                f"arrows={len(self.arrows)})")

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "degrees": list(self.degrees),
            "min_polys": [list(f.min_poly) for f in self.fields],
            "arrows": [
                {"name": a.name, "source": a.source, "target": a.target,
                 "copy": a.copy, "kind": a.kind}
                for a in self.arrows
            ],
        }

    @staticmethod
    def from_json(data) -> "SpeciesSpec":
        if isinstance(data, str):
            data = json.loads(data)
        arrows = [Arrow(d["name"], d["source"], d["target"],
                        d.get("copy", 0), d.get("kind", ORIGINAL))
                  for d in data["arrows"]]
        return SpeciesSpec(data["p"], data["degrees"], arrows)

    def to_dot(self) -> str:
        """Valued-quiver DOT export; edges carry the pair (b_ij, -b_ji)."""
        b = dimension_matrix(self)
        lines = ["digraph species {"]
        for i in range(1, self.n + 1):
            lines.append(f'  v{i} [label="{i} (d={self.degree_at(i)})"];')
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                if self.multiplicity(i, j) > 0:
                    lines.append(
                        f'  v{i} -> v{j} [label="({b[i - 1, j - 1]},'
                        f'{-b[j - 1, i - 1]})"];')
        lines.append("}")
        return "\n".join(lines)


def realize(b: ExchangeMatrix, d: SkewSymmetrizer, p: int) -> SpeciesSpec:
    """Free species realization of B under the divisibility hypothesis."""
    if not check_divisibility(b, d):
        raise ValueError("divisibility hypothesis fails: some d_j does not divide b_ij")
    n = b.n
    arrows = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            bij = b[i - 1, j - 1]
            if bij > 0:
                mult = bij // d.diag[j - 1]
                for c in range(mult):
                    name = f"a{i}_{j}" if mult == 1 else f"a{i}_{j}_{c}"
                    arrows.append(Arrow(name, i, j, copy=c))
    return SpeciesSpec(p, d.diag, arrows)


def dimension_matrix(s: SpeciesSpec) -> ExchangeMatrix:
    """Recover B from the species: b_ij = n_ij d_j, b_ji = -n_ij d_i."""
    n = s.n
    rows = [[0] * n for _ in range(n)]
    for a in s.arrows:
        i, j = a.source - 1, a.target - 1
        rows[i][j] += s.degree_at(a.target)
        rows[j][i] -= s.degree_at(a.source)
    return ExchangeMatrix(tuple(tuple(r) for r in rows))


def _dual_intertwiner_exists(s: SpeciesSpec, i: int, j: int) -> bool:
    """Whether Hom_{F_i}(M_ij, F_i) ~= Hom_{F_j}(M_ij, F_j) as F_j-F_i-bimodules.

    Both duals are coordinatized over F on one functional per (arrow, basis
    slot, value slot).  The F_j and F_i actions become explicit matrices for
    the field generators; an isomorphism is an invertible solution X of the
    two intertwining equations, searched for by exact linear algebra plus
    random sampling of the solution space.
    """
    import numpy as np
    from . import linalg

    p = s.p
    fi, fj = s.field_at(i), s.field_at(j)
    di, dj = fi.degree, fj.degree
    arrows = s.arrows_between(i, j)
    nij = len(arrows)
    dim = nij * di * dj
    if dim == 0:
        return True

    # generator multiplication matrices: column t holds x * basis_t
    def gen_matrix(f):
        d = f.degree
        g = f.basis(1) if d > 1 else f.one
        m = np.zeros((d, d), dtype=np.int64)
        for t in range(d):
            col = f.mul(g, f.basis(t))
            for u in range(d):
                m[u, t] = col[u]
        return m

    gi, gj = gen_matrix(fi), gen_matrix(fj)
    idc = np.eye(nij, dtype=np.int64)
    idi = np.eye(di, dtype=np.int64)
    idj = np.eye(dj, dtype=np.int64)

    # Hom_{F_i}: coordinates (arrow, t in L(j), u in L(i)); y=x_j permutes t
    # by right multiplication, x=x_i multiplies the value slot u.
    al = np.kron(np.kron(idc, gj.T), idi) % p
    bl = np.kron(np.kron(idc, idj), gi) % p
    # Hom_{F_j}: coordinates (arrow, s in L(i), v in L(j)); y multiplies the
    # value slot v, x acts on s by left multiplication.
    ar = np.kron(np.kron(idc, idi), gj) % p
    br = np.kron(np.kron(idc, gi.T), idj) % p

    # X al = ar X  and  X bl = br X, vectorized over F_p
    eye = np.eye(dim, dtype=np.int64)
    eq1 = (np.kron(al.T, eye) - np.kron(eye, ar)) % p
    eq2 = (np.kron(bl.T, eye) - np.kron(eye, br)) % p
    sol = linalg.nullspace(np.vstack([eq1, eq2]), p)
    if sol.shape[0] == 0:
        return False
    rng = np.random.default_rng(12345)
    for _ in range(40):
        coeffs = rng.integers(0, p, size=sol.shape[0])
        x = np.mod(coeffs @ sol, p).reshape(dim, dim)
        if linalg.rank(x, p) == dim:
            return True
    return False


def verify_realization(s: SpeciesSpec, b: ExchangeMatrix) -> dict:
    """Check the four clauses of the species-realization definition.

    Returns a report dict; "ok" is True iff every clause passes.
    """
    n = b.n
    failures = []
    if s.n != n:
        return {"ok": False, "failures": ["vertex count mismatch"], "clauses": {}}

    # clause 1: a division ring at each vertex (by construction; record dims)
    clause1 = all(s.field_at(i).degree == s.degree_at(i) for i in range(1, n + 1))

    # clause 2: bimodule blocks exactly where b_ij > 0
    clause2 = True
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            has = s.multiplicity(i, j) > 0
            want = b[i - 1, j - 1] > 0
            if has != want:
                clause2 = False
                failures.append(f"clause2: block ({i},{j}) present={has}, expected={want}")

    # clause 4: both dimension counts
    clause4 = True
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            bij = b[i - 1, j - 1]
            if bij > 0:
                nij = s.multiplicity(i, j)
                dim_i = nij * s.degree_at(j)   # dim over F_i
                dim_j = nij * s.degree_at(i)   # dim over F_j
                if dim_i != bij or dim_j != -b[j - 1, i - 1]:
                    clause4 = False
                    failures.append(
                        f"clause4: block ({i},{j}) dims ({dim_i},{dim_j}) vs "
                        f"({bij},{-b[j - 1, i - 1]})")

    # clause 3: Hom_{F_i}(M_ij, F_i) and Hom_{F_j}(M_ij, F_j) are isomorphic
    # F_j-F_i-bimodules; decided by solving for an invertible intertwiner.
    clause3 = True
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if b[i - 1, j - 1] > 0 and s.multiplicity(i, j) > 0:
                if not _dual_intertwiner_exists(s, i, j):
                    clause3 = False
                    failures.append(f"clause3: no bimodule isomorphism at ({i},{j})")
    ok = clause1 and clause2 and clause3 and clause4
    return {
        "ok": ok,
        "clauses": {"1": clause1, "2": clause2, "3": clause3, "4": clause4},
        "failures": failures,
    }
