"""Premutation and reduced mutation of a species with potential.

Premutation at vertex k rebuilds the bimodule out of four blocks: arrows
avoiding k, composite arrows through k, and the two dual-arrow blocks.  The
dual-basis maps (sa)* and *(bt) are factored through a single dual arrow per
original arrow via coefficients solved from the coefficient-of-1 pairing of
D_k.

The splitting step extracts the degree-2 part of the premutated potential as
a bilinear pairing between opposite blocks, picks new arrows spanning the
radical (reduced part) and a complement (trivial part) as free sub-bimodules,
and then pushes every remaining term that touches a trivial arrow above the
truncation order by a unitriangular change of arrows.  All of this happens up
to cyclic equivalence, which is the invariance the derivative calculus
already grants.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .species import (
    Arrow, SpeciesSpec, dimension_matrix,
    COMPOSITE, DUAL_LEFT, DUAL_RIGHT, REDUCED,
)
from .series import (
    E, Potential, SeriesElement, SpeciesWithPotential,
    mon_degree, mon_source, mon_target, mon_is_cyclic, _rotations,
    is_2acyclic,
)


class SplitError(RuntimeError):
    """The degree-2 part cannot be split off as a free trivial sub-bimodule."""


# ---------------------------------------------------------------------------
# premutation of the bimodule

@dataclass
class MutatedBimodule:
    species: SpeciesSpec
    vertex: int
    composites: dict      # (b_name, t_idx, a_name) -> composite arrow name
    dual_right: dict      # a_name -> a* name   (a out of k)
    dual_left: dict       # b_name -> *b name   (b into k)
    kept: tuple           # names of untouched arrows

    def dimension_accounting(self, old: SpeciesSpec) -> dict:
        k = self.vertex
        dk = old.degree_at(k)
        dim_out = sum(dk * old.degree_at(a.target) for a in old.arrows_from(k))
        dim_in = sum(old.degree_at(b.source) * dk for b in old.arrows_to(k))
        dim_kept = sum(old.degree_at(a.source) * old.degree_at(a.target)
                       for a in old.arrows
                       if a.source != k and a.target != k)
        expected = dim_kept + dim_in * dim_out // dk + dim_out + dim_in
        return {"expected": expected, "actual": self.species.total_dim(),
                "ok": expected == self.species.total_dim()}


def premutate_bimodule(sp: SpeciesSpec, k: int) -> MutatedBimodule:
    if not 1 <= k <= sp.n:
        raise IndexError(f"vertex {k} out of range 1..{sp.n}")
    dk = sp.degree_at(k)
    ins = sorted(sp.arrows_to(k), key=lambda a: a.name)
    outs = sorted(sp.arrows_from(k), key=lambda a: a.name)
    arrows = [a for a in sp.arrows if a.source != k and a.target != k]
    kept = tuple(a.name for a in arrows)
    composites, dual_right, dual_left = {}, {}, {}
    for b in ins:
        for t in range(dk):
            for a in outs:
                name = f"[{b.name}|{t}|{a.name}]"
                composites[(b.name, t, a.name)] = name
                arrows.append(Arrow(name, b.source, a.target, copy=t, kind=COMPOSITE))
    for a in outs:
        name = f"{a.name}*"
        dual_right[a.name] = name
        arrows.append(Arrow(name, a.target, k, kind=DUAL_RIGHT))
    for b in ins:
        name = f"*{b.name}"
        dual_left[b.name] = name
        arrows.append(Arrow(name, k, b.source, kind=DUAL_LEFT))
    new_sp = SpeciesSpec(sp.p, sp.degrees, arrows)
    return MutatedBimodule(new_sp, k, composites, dual_right, dual_left, kept)


# ---------------------------------------------------------------------------
# cyclic equivalence

def _rotate_one(sp, mon):
    """Single-arrow rotation of a cyclic monomial, as a {monomial: coeff} dict."""
    return _rotations(sp, mon)[1 % mon_degree(mon)] if mon_degree(mon) > 1 \
        else _rotations(sp, mon)[0]


def _scalar_rotation(sp, mon):
    """Move the leading scalar slot around the cycle: t1 a1 ... -> a1 ... [t_{m+1} t1]."""
    return _rotations(sp, mon)[0]


def _perm_rotate(mon):
    """Arrow rotation of a leading-slot-0 monomial; a pure permutation of slots."""
    return (0,) + mon[3:] + mon[1:3]


def cyclic_reduce(se: SeriesElement) -> SeriesElement:
    """Canonical representative of ``se`` modulo cyclic equivalence.

    Every cyclic monomial is first normalized to leading slot 0 by merging
    the boundary product through the structure constants; on normalized
    monomials the arrow rotation is a permutation of finite order m <= trunc,
    so averaging over its orbit (m invertible mod p) projects onto a
    canonical representative of the rotation coinvariants.  Non-cyclic terms
    pass through untouched.
    """
    sp, p = se.species, se.species.p
    out = {}
    for mon, c in se.terms.items():
        if not mon_is_cyclic(sp, mon):
            out[mon] = (out.get(mon, 0) + c) % p
            continue
        # leading-slot normalization: N(x) = rotation 0
        for nm, ck in _scalar_rotation(sp, mon).items():
            coeff = (c * ck) % p
            orbit = [nm]
            cur = _perm_rotate(nm)
            while cur != nm:
                orbit.append(cur)
                cur = _perm_rotate(cur)
            share = (coeff * pow(len(orbit), p - 2, p)) % p
            if not share:
                continue
            for om in orbit:
                v = (out.get(om, 0) + share) % p
                if v:
                    out[om] = v
                else:
                    out.pop(om, None)
    r = SeriesElement(se.species, se.trunc)
    r.terms = {m: c for m, c in out.items() if c}
    return r


def cyclically_equivalent(f: SeriesElement, g: SeriesElement) -> bool:
    return cyclic_reduce(f - g).is_zero()


# ---------------------------------------------------------------------------
# substitutions

@dataclass
class ArrowSubstitution:
    """Map from arrow names to series over a target species.

    Arrows absent from ``mapping`` are sent to their same-named image.
    """
    target: SpeciesSpec
    mapping: dict

    def image(self, name: str, trunc: int) -> SeriesElement:
        if name in self.mapping:
            se = self.mapping[name]
            if se.trunc != trunc:
                out = SeriesElement(self.target, trunc, se.terms)
                return out
            return se
        return SeriesElement.arrow(self.target, trunc, name)

    def apply(self, se: SeriesElement) -> SeriesElement:
        sp_old = se.species
        trunc = se.trunc
        p = self.target.p
        cache = {}   # (arrow, slot) -> image * scalar, shared across terms

        def img(a, t, v):
            r = cache.get((a, t))
            if r is None:
                r = self.image(a, trunc) * SeriesElement.scalar_at(
                    self.target, trunc, v, t)
                cache[(a, t)] = r
            return r

        out = {}
        for mon, c in se.terms.items():
            if mon[0] == E:
                v = (out.get(mon, 0) + c) % p
                if v:
                    out[mon] = v
                else:
                    out.pop(mon, None)
                continue
            acc = SeriesElement.scalar_at(
                self.target, trunc, mon_source(sp_old, mon), mon[0])
            arrows = mon[1::2]
            slots = mon[2::2]
            verts = [sp_old.arrow_by_name[a].target for a in arrows]
            for a, t, v in zip(arrows, slots, verts):
                acc = acc * img(a, t, v)
                if acc.is_zero():
                    break
            for m2, c2 in acc.terms.items():
                v = (out.get(m2, 0) + c * c2) % p
                if v:
                    out[m2] = v
                else:
                    out.pop(m2, None)
        total = SeriesElement(self.target, trunc)
        total.terms = out
        return total

    def compose(self, later: "ArrowSubstitution") -> "ArrowSubstitution":
        """self followed by ``later`` (later is applied to self's images)."""
        mapping = {name: later.apply(img) for name, img in self.mapping.items()}
        for name, img in later.mapping.items():
            if name not in mapping:
                mapping[name] = img
        return ArrowSubstitution(later.target, mapping)

    def inverse(self, trunc: int) -> "ArrowSubstitution":
        """Truncated inverse, assuming an invertible degree-1 part.

        Solves the degree-1 change of basis exactly, then corrects higher
        degrees by fixed-point iteration.
        """
        sp = self.target
        p = sp.p
        # degree-1 part as a block change of basis on arrows
        names = [a.name for a in sp.arrows]
        idx = {n: i for i, n in enumerate(names)}
        # We invert on the full degree-1 monomial space blockwise.
        blocks = {}
        for a in sp.arrows:
            blocks.setdefault((a.source, a.target), []).append(a.name)
        inv_linear = {}
        for (i, j), blk in blocks.items():
            basis = [(s, n, t) for n in blk
                     for s in range(sp.degree_at(i))
                     for t in range(sp.degree_at(j))]
            bidx = {m: c for c, m in enumerate(basis)}
            mat = np.zeros((len(basis), len(basis)), dtype=np.int64)
            for col, (s, n, t) in enumerate(basis):
                img = SeriesElement.scalar_at(sp, trunc, i, s) * \
                    self.image(n, trunc) * SeriesElement.scalar_at(sp, trunc, j, t)
                for mon, c in img.degree_part(1).terms.items():
                    if mon in bidx:
                        mat[bidx[mon], col] = c
            minv = linalg.inv(mat, p)
            for n in blk:
                col = bidx[(0, n, 0)]
                terms = {}
                for rix, (s, n2, t) in enumerate(basis):
                    if minv[rix, col]:
                        terms[(s, n2, t)] = int(minv[rix, col])
                inv_linear[n] = SeriesElement(sp, trunc, {m: c for m, c in terms.items()})
        g = ArrowSubstitution(sp, inv_linear)
        # fixed-point correction: g <- g - ginv_lin(apply(self, g) - id)
        for _ in range(trunc):
            residual_ok = True
            new_map = {}
            for n in names:
                # current composite self then g
                comp = g.apply(self.image(n, trunc))
                target = SeriesElement.arrow(sp, trunc, n)
                resid = comp - target
                if resid.is_zero():
                    new_map[n] = g.image(n, trunc)
                    continue
                residual_ok = False
                # subtract the linear-inverse image of the residual
                corr = ArrowSubstitution(sp, inv_linear).apply(resid)
                new_map[n] = g.image(n, trunc) - corr
            g = ArrowSubstitution(sp, new_map)
            if residual_ok:
                break
        return g


# ---------------------------------------------------------------------------
# premutation of the potential

def _rotate_off_vertex(swp_pot: SeriesElement, k: int) -> SeriesElement:
    """Cyclically equivalent element with no term starting at vertex k."""
    sp = swp_pot.species
    p = sp.p
    out = {}
    for mon, c in swp_pot.terms.items():
        if mon_source(sp, mon) != k:
            bucket = {mon: 1}
        else:
            bucket = _rotate_one(sp, mon)
        for m2, c2 in bucket.items():
            if mon_source(sp, m2) == k:
                raise ValueError(f"cannot rotate term {mon} off vertex {k}")
            v = (out.get(m2, 0) + c * c2) % p
            if v:
                out[m2] = v
            else:
                out.pop(m2, None)
    r = SeriesElement(sp, swp_pot.trunc)
    r.terms = out
    return r


def premutate_potential(swp: SpeciesWithPotential, k: int):
    """(mutated bimodule, premutated potential).  [P] plus the dual correction."""
    sp, trunc = swp.species, swp.trunc
    p = sp.p
    mb = premutate_bimodule(sp, k)
    new_sp = mb.species
    dk = sp.degree_at(k)
    fk = sp.field_at(k)

    pot = _rotate_off_vertex(swp.potential, k)

    # [P]: collapse every passage through k into a composite arrow
    bracket = {}
    for mon, c in pot.terms.items():
        arrows = list(mon[1::2])
        slots = list(mon[0::2])     # t_1 ... t_{m+1}
        new_word = [slots[0]]
        i = 0
        ok = True
        while i < len(arrows):
            a = sp.arrow_by_name[arrows[i]]
            if a.target == k:
                if i + 1 >= len(arrows):
                    ok = False
                    break
                comp = mb.composites[(arrows[i], slots[i + 1], arrows[i + 1])]
                new_word.append(comp)
                new_word.append(slots[i + 2])
                i += 2
            else:
                new_word.append(arrows[i])
                new_word.append(slots[i + 1])
                i += 1
        if not ok:
            raise ValueError(f"term {mon} ends at the mutated vertex")
        new_mon = tuple(new_word)
        if mon_degree(new_mon) <= trunc:
            v = (bracket.get(new_mon, 0) + c) % p
            if v:
                bracket[new_mon] = v
            else:
                bracket.pop(new_mon, None)

    # correction: sum over s,t in L(k), a out of k, b into k of
    # [b (t s) a] . a* . (u_s v_t) . *b
    correction = {}
    ins = sorted(sp.arrows_to(k), key=lambda a: a.name)
    outs = sorted(sp.arrows_from(k), key=lambda a: a.name)
    for b in ins:
        for a in outs:
            for s in range(dk):
                u_s = fk.dual_coefficient(s)
                for t in range(dk):
                    v_t = fk.dual_coefficient(t)
                    ts = fk.basis_mul(t, s)
                    uv = fk.mul(u_s, v_t)
                    for tprime, c1 in enumerate(ts):
                        if not c1:
                            continue
                        comp = mb.composites[(b.name, tprime, a.name)]
                        for w, c2 in enumerate(uv):
                            if not c2:
                                continue
                            mon = (0, comp, 0, mb.dual_right[a.name], w,
                                   mb.dual_left[b.name], 0)
                            c = (c1 * c2) % p
                            v = (correction.get(mon, 0) + c) % p
                            if v:
                                correction[mon] = v
                            else:
                                correction.pop(mon, None)

    total = dict(bracket)
    for mon, c in correction.items():
        v = (total.get(mon, 0) + c) % p
        if v:
            total[mon] = v
        else:
            total.pop(mon, None)
    ptilde = SeriesElement(new_sp, trunc)
    ptilde.terms = total
    return mb, ptilde


# ---------------------------------------------------------------------------
# splitting: trivial + reduced decomposition

TRIVIAL = "trivial"


@dataclass
class SplitResult:
    full_species: SpeciesSpec          # kept + trivial + reduced arrows
    trivial_arrows: tuple
    trivial_rank: int                  # F-dimension of the trivial bimodule
    trivial_potential: SeriesElement   # degree-2 pairing on trivial arrows
    reduced: SpeciesWithPotential
    substitution: ArrowSubstitution    # premutated arrows -> full_species
    rounds: int


class _Block:
    """Coordinates and field actions on one arrow block e_i M e_j."""

    def __init__(self, sp, i, j):
        self.sp, self.i, self.j = sp, i, j
        self.di, self.dj = sp.degree_at(i), sp.degree_at(j)
        self.fi, self.fj = sp.field_at(i), sp.field_at(j)
        self.arrows = sorted(a.name for a in sp.arrows_between(i, j))
        self.basis = [(s, a, t) for a in self.arrows
                      for s in range(self.di) for t in range(self.dj)]
        self.index = {m: c for c, m in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.rankd = self.di * self.dj

    def act(self, s0, t0, vec):
        """basis_{s0} . v . basis_{t0} in block coordinates."""
        p = self.sp.p
        out = np.zeros(self.dim, dtype=np.int64)
        for idx in np.nonzero(vec)[0]:
            c = int(vec[idx])
            s, a, t = self.basis[idx]
            ls = self.fi.basis_mul(s0, s)
            rs = self.fj.basis_mul(t, t0)
            for w, cw in enumerate(ls):
                if not cw:
                    continue
                for u, cu in enumerate(rs):
                    if cu:
                        pos = self.index[(w, a, u)]
                        out[pos] = (out[pos] + c * cw * cu) % p
        return out

    def span_rows(self, vec):
        return np.array([self.act(s0, t0, vec)
                         for s0 in range(self.di) for t0 in range(self.dj)],
                        dtype=np.int64)


def _arrow_led_derivative(f):
    """Sum of arrow-led rotations: cyclically equivalent to cyclic_derivative.

    Every term starts with an arrow at unit slot, so the slot-0 dual
    functionals below see the whole pairing.  Used only for the trivial-part
    contraction, where any fixed representative of the rotation sum works.
    """
    sp, p = f.species, f.species.p
    out = {}
    for mon, c in f.terms.items():
        if not mon_is_cyclic(sp, mon):
            continue
        for terms in _rotations(sp, mon):
            for rm, ck in terms.items():
                v = (out.get(rm, 0) + c * ck) % p
                if v:
                    out[rm] = v
                else:
                    out.pop(rm, None)
    r = SeriesElement(sp, f.trunc)
    r.terms = out
    return r


def _contraction_span(sp, d_pot, from_block, into_block):
    """Image of the degree-2 derivative pairing inside ``into_block``.

    Contract the arrow-led derivative along every dual functional of the
    opposite block, then close the F-span under both field actions.  This is
    the canonical trivial sub-bimodule.
    """
    from .series import psi_star
    p = sp.p
    space = linalg.RowSpace(into_block.dim, p)
    fi = into_block.fi
    frontier = []
    for b in from_block.arrows:
        for w in range(into_block.di):
            psi = {(0, b): fi.basis(w)}
            res = psi_star(psi, d_pot)
            v = np.zeros(into_block.dim, dtype=np.int64)
            for mon, c in res.terms.items():
                key = (mon[0], mon[1], mon[2])
                if key in into_block.index:
                    v[into_block.index[key]] = c
            if space.add(v):
                frontier.append(v)
    while frontier:
        nxt = []
        for v in frontier:
            for s0 in range(into_block.di):
                for t0 in range(into_block.dj):
                    w = into_block.act(s0, t0, v)
                    if space.add(w):
                        nxt.append(w)
        frontier = nxt
    return space


def _greedy_free_generators(block, count, rng, base_rows=None, inside=None,
                            preferred=(), tries=500):
    """Pick ``count`` vectors whose field spans are free and jointly transverse.

    ``base_rows``: rows the spans must additionally be transverse to.
    ``inside``: optional row basis the candidates are drawn from.
    ``preferred``: vectors tried before random sampling; keeping old arrows
    as generators keeps the change of arrows sparse.
    """
    p = block.sp.p
    cur = linalg.RowSpace(block.dim, p)
    if base_rows is not None:
        for r in base_rows:
            cur.add(r)
    gens = []
    queue = list(preferred)
    for _ in range(count):
        found = False
        for _try in range(tries):
            if queue:
                v = np.asarray(queue.pop(0), dtype=np.int64)
            elif inside is not None:
                coeffs = [rng.randrange(p) for _ in range(len(inside))]
                v = np.mod(np.array(coeffs, dtype=np.int64) @ inside, p)
            else:
                v = np.array([rng.randrange(p) for _ in range(block.dim)],
                             dtype=np.int64)
            # span is free and transverse iff all d_i d_j action rows are
            # independent over what is already chosen
            tmp = linalg.RowSpace(block.dim, p)
            rows = block.span_rows(v)
            ok = all(tmp.add(cur.reduce(r)) for r in rows)
            if not ok:
                continue
            for r in rows:
                cur.add(r)
            gens.append(v)
            found = True
            break
        if not found:
            raise SplitError(
                f"no free generator in block ({block.i},{block.j}); the "
                "degree-2 part does not split off a free trivial summand")
    return gens


def _path_slot_monomials(sp, path):
    """All slot assignments over a fixed arrow-name path."""
    arrows = [sp.arrow_by_name[a] for a in path]
    verts = [arrows[0].source] + [a.target for a in arrows]
    import itertools
    for slots in itertools.product(*[range(sp.degree_at(v)) for v in verts]):
        mon = [slots[0]]
        for a, t in zip(path, slots[1:]):
            mon.append(a)
            mon.append(t)
        yield tuple(mon)


def _all_paths(sp, src, tgt, length):
    paths = [[a] for a in sorted(sp.arrows_from(src), key=lambda x: x.name)]
    for _ in range(length - 1):
        nxt = []
        for pt in paths:
            for a in sorted(sp.arrows_from(pt[-1].target), key=lambda x: x.name):
                nxt.append(pt + [a])
        paths = nxt
    return [tuple(a.name for a in pt) for pt in paths if pt[-1].target == tgt]


def _replacement_effect(sp, trunc, p2t, c0, w_mon):
    """Series obtained by replacing one occurrence of arrow c0 by w in the
    degree-2 trivial part, summed over occurrences and terms."""
    w_series = SeriesElement(sp, trunc, {w_mon: 1})
    total = SeriesElement.zero(sp, trunc)
    for mon, c in p2t.terms.items():
        arrows = mon[1::2]
        if c0 not in arrows:
            continue
        slots = mon[2::2]
        verts = [sp.arrow_by_name[a].target for a in arrows]
        src = mon_source(sp, mon)
        for pos in range(len(arrows)):
            if arrows[pos] != c0:
                continue
            acc = SeriesElement.scalar_at(sp, trunc, src, mon[0], c)
            for idx, (a, t, v) in enumerate(zip(arrows, slots, verts)):
                piece = w_series if idx == pos else \
                    SeriesElement.arrow(sp, trunc, a)
                acc = acc * piece
                acc = acc * SeriesElement.scalar_at(sp, trunc, v, t)
                if acc.is_zero():
                    break
            total = total + acc
    return total


def _candidate_cores(sp, mixed, trivial_set):
    """Arrow paths obtained by rotating each trivial occurrence to the end."""
    cores = set()
    for mon in mixed:
        arrows = mon[1::2]
        m = len(arrows)
        rots = _rotations(sp, mon)
        for q in range(1, m + 1):
            if arrows[q - 1] not in trivial_set:
                continue
            for rm in rots[q % m]:
                path = rm[1::2][:-1]
                if path:
                    # corrections may themselves pass through trivial arrows;
                    # their higher-order effects land strictly above degree g
                    cores.add(tuple(path))
    return cores


def _solve_round(sp, trunc, p2t, mixed, trivial_set, g, trivial_blocks):
    """Unitriangular corrections of the trivial arrows killing the mixed
    degree-g part.  Returns {trivial arrow: degree-(g-1) correction series}."""
    p = sp.p

    def build_unknowns(cores):
        unknowns = []
        for path in sorted(cores):
            src = sp.arrow_by_name[path[0]].source
            tgt = sp.arrow_by_name[path[-1]].target
            partners = [c0 for c0, (s, t) in trivial_blocks.items()
                        if (s, t) == (src, tgt)]
            if not partners:
                continue
            for w_mon in _path_slot_monomials(sp, path):
                for c0 in partners:
                    unknowns.append((c0, w_mon))
        return unknowns

    def attempt(unknowns):
        # everything is compared in canonical cyclic-reduced coordinates
        target = cyclic_reduce(SeriesElement(sp, trunc, dict(mixed)))
        columns = [cyclic_reduce(_replacement_effect(sp, trunc, p2t, c0, w))
                   for c0, w in unknowns]
        support = set(target.terms)
        for col in columns:
            support.update(col.terms)
        order = sorted(support)
        index = {m: i for i, m in enumerate(order)}

        def vec(se):
            v = np.zeros(len(order), dtype=np.int64)
            for mon, c in se.terms.items():
                v[index[mon]] = c
            return v

        amat = np.array([vec(col) for col in columns], dtype=np.int64).T \
            if columns else np.zeros((len(order), 0), dtype=np.int64)
        rhs = np.mod(-vec(target), p)
        return linalg.solve(amat, rhs, p)

    unknowns = build_unknowns(_candidate_cores(sp, mixed, trivial_set))
    x = attempt(unknowns) if unknowns else None
    if x is None:
        # widen to every path of the right shape
        cores = set()
        for c0, (src, tgt) in trivial_blocks.items():
            cores.update(_all_paths(sp, src, tgt, g - 1))
        unknowns = build_unknowns(cores)
        x = attempt(unknowns) if unknowns else None
    if x is None:
        raise SplitError(f"cannot eliminate mixed terms at degree {g}")
    corrections = {}
    for (c0, w_mon), coeff in zip(unknowns, x):
        if coeff:
            cur = corrections.setdefault(
                c0, SeriesElement.zero(sp, trunc))
            corrections[c0] = cur + SeriesElement(sp, trunc, {w_mon: int(coeff)})
    return corrections


def split(sp_pre: SpeciesSpec, ptilde: SeriesElement, seed: int = 0,
          tries: int = 500) -> SplitResult:
    """Decompose a premutated potential into trivial and reduced parts.

    Raises SplitError when the degree-2 part is not a free trivial
    sub-bimodule pairing -- the failure mode behind loss of 2-acyclicity.
    """
    p = sp_pre.p
    trunc = ptilde.trunc
    rng = random.Random(seed)
    pc = cyclic_reduce(ptilde)
    p2 = pc.degree_part(2)

    pairs = {}
    for mon, c in p2.terms.items():
        a1 = sp_pre.arrow_by_name[mon[1]]
        key = tuple(sorted(((a1.source, a1.target), (a1.target, a1.source))))
        pairs.setdefault(key, {})[mon] = c

    if not pairs:
        reduced = SpeciesWithPotential(
            sp_pre, Potential.from_series(pc), trunc)
        return SplitResult(sp_pre, (), 0, SeriesElement.zero(sp_pre, trunc),
                           reduced, ArrowSubstitution(sp_pre, {}), 0)

    processed_blocks = set()
    # (i, j) -> (block, [(name, kind, vector)])
    plans = {}
    taken = {a.name for a in sp_pre.arrows}
    trivial_rank = 0
    for key, terms in sorted(pairs.items()):
        # key is sorted; first entry has the smaller source
        (i, j) = key[0]
        pair_pot = SeriesElement(sp_pre, trunc, dict(terms))
        d_pot = _arrow_led_derivative(pair_pot)
        ub = _Block(sp_pre, i, j)
        vb = _Block(sp_pre, j, i)
        tu = _contraction_span(sp_pre, d_pot, vb, ub)
        tv = _contraction_span(sp_pre, d_pot, ub, vb)
        if tu.dim != tv.dim:
            raise SplitError(
                f"trivial parts of blocks ({i},{j}) and ({j},{i}) have "
                f"mismatched dimensions {tu.dim} vs {tv.dim}")
        for blk, tspace in ((ub, tu), (vb, tv)):
            if tspace.dim % blk.rankd:
                raise SplitError(
                    f"trivial part of block ({blk.i},{blk.j}) has dimension "
                    f"{tspace.dim}, not a multiple of d_i d_j = {blk.rankd}")
            n_triv = tspace.dim // blk.rankd
            n_red = (blk.dim - tspace.dim) // blk.rankd
            units = []
            for a in blk.arrows:
                e = np.zeros(blk.dim, dtype=np.int64)
                e[blk.index[(0, a, 0)]] = 1
                units.append(e)
            triv = _greedy_free_generators(
                blk, n_triv, rng, inside=tspace.rows, tries=tries,
                preferred=[e for e in units if tspace.contains(e)])
            red = _greedy_free_generators(
                blk, n_red, rng, base_rows=tspace.rows, tries=tries,
                preferred=units)
            gens = []
            for c, v in enumerate(triv):
                name = _fresh_name(taken, f"z{blk.i}_{blk.j}_{c}")
                taken.add(name)
                gens.append((name, TRIVIAL, v))
            for c, v in enumerate(red):
                name = _fresh_name(taken, f"r{blk.i}_{blk.j}_{c}")
                taken.add(name)
                gens.append((name, REDUCED, v))
            plans[(blk.i, blk.j)] = (blk, gens)
            processed_blocks.add((blk.i, blk.j))
            trivial_rank += tspace.dim

    kept = [a for a in sp_pre.arrows
            if (a.source, a.target) not in processed_blocks]
    new_arrows = list(kept)
    for (i, j), (blk, gens) in sorted(plans.items()):
        for c, (name, kind, _v) in enumerate(gens):
            new_arrows.append(Arrow(name, i, j, copy=c, kind=kind))
    full_sp = SpeciesSpec(p, sp_pre.degrees, new_arrows)
    trivial_set = {a.name for a in full_sp.arrows if a.kind == TRIVIAL}
    trivial_blocks = {a.name: (a.source, a.target)
                      for a in full_sp.arrows if a.kind == TRIVIAL}

    # linear change of arrows: express each old arrow in the new generators
    mapping = {}
    for (i, j), (blk, gens) in plans.items():
        amat = np.array(
            [blk.act(s, t, v) for name, kind, v in gens
             for s in range(blk.di) for t in range(blk.dj)],
            dtype=np.int64)
        row_labels = [(name, s, t) for name, kind, v in gens
                      for s in range(blk.di) for t in range(blk.dj)]
        rhs = np.zeros((blk.dim, len(blk.arrows)), dtype=np.int64)
        for col, a in enumerate(blk.arrows):
            rhs[blk.index[(0, a, 0)], col] = 1
        sol = linalg.solve(amat.T, rhs, p)
        if sol is None:
            raise SplitError(f"new generators do not span block ({i},{j})")
        for col, a in enumerate(blk.arrows):
            terms = {}
            for (name, s, t), coeff in zip(row_labels, sol[:, col]):
                if coeff:
                    terms[(s, name, t)] = int(coeff)
            mapping[a] = SeriesElement(full_sp, trunc, terms)
    subst = ArrowSubstitution(full_sp, mapping)

    p_cur = cyclic_reduce(subst.apply(pc))
    for mon in p_cur.degree_part(2).terms:
        if not all(a in trivial_set for a in mon[1::2]):
            raise SplitError(
                f"degree-2 term {mon} survives outside the trivial arrows")

    total_sub = subst
    rounds = 0
    for g in range(3, trunc + 1):
        mixed = {m: c for m, c in p_cur.terms.items()
                 if mon_degree(m) == g
                 and any(a in trivial_set for a in m[1::2])}
        if not mixed:
            continue
        rounds += 1
        p2t = p_cur.degree_part(2)
        corrections = _solve_round(full_sp, trunc, p2t, mixed, trivial_set,
                                   g, trivial_blocks)
        sub_u = ArrowSubstitution(full_sp, {
            c0: SeriesElement.arrow(full_sp, trunc, c0) + dser
            for c0, dser in corrections.items()})
        p_cur = cyclic_reduce(sub_u.apply(p_cur))
        total_sub = total_sub.compose(sub_u)
        still = [m for m in p_cur.terms
                 if mon_degree(m) == g
                 and any(a in trivial_set for a in m[1::2])]
        if still:
            raise SplitError(
                f"mixed terms persist at degree {g} after elimination")

    leftovers = [m for m in p_cur.terms
                 if mon_degree(m) > 2
                 and any(a in trivial_set for a in m[1::2])]
    if leftovers:
        raise SplitError("mixed trivial terms remain above degree 2")

    trivial_pot = p_cur.degree_part(2)
    reduced_terms = {m: c for m, c in p_cur.terms.items()
                     if mon_degree(m) > 2}
    reduced_sp = SpeciesSpec(
        p, sp_pre.degrees,
        [a for a in full_sp.arrows if a.kind != TRIVIAL])
    reduced_pot = Potential(reduced_sp, trunc, reduced_terms)
    reduced = SpeciesWithPotential(reduced_sp, reduced_pot, trunc)
    return SplitResult(full_sp, tuple(sorted(trivial_set)), trivial_rank,
                       trivial_pot, reduced, total_sub, rounds)


def _fresh_name(taken, stem):
    if stem not in taken:
        return stem
    c = 1
    while f"{stem}~{c}" in taken:
        c += 1
    return f"{stem}~{c}"


# ---------------------------------------------------------------------------
# full mutation

@dataclass
class MutationResult:
    vertex: int
    premutated: MutatedBimodule
    premutated_potential: SeriesElement
    split_ok: bool
    split_result: SplitResult | None
    result: SpeciesWithPotential
    matrix: "ExchangeMatrix"
    trivial_rank: int
    two_acyclic: bool
    failure: str = ""

    def to_json(self) -> dict:
        sp = self.result.species
        return {
            "vertex": self.vertex,
            "split_ok": self.split_ok,
            "two_acyclic": self.two_acyclic,
            "trivial_rank": self.trivial_rank,
            "failure": self.failure,
            "matrix": self.matrix.to_json(),
            "arrows": [{"name": a.name, "source": a.source,
                        "target": a.target, "kind": a.kind}
                       for a in sp.arrows],
            "potential_terms_by_degree":
                self.result.potential.term_count_by_degree(),
        }


def mutate(swp: SpeciesWithPotential, k: int, seed: int = 0) -> MutationResult:
    """Reduced mutation at vertex k: premutation followed by splitting."""
    from .species import dimension_matrix
    mb, ptilde = premutate_potential(swp, k)
    try:
        sr = split(mb.species, ptilde, seed=seed)
        result = sr.reduced
        ok, failure = True, ""
    except SplitError as err:
        sr = None
        pot = cyclic_reduce(ptilde)
        result = SpeciesWithPotential(
            mb.species, Potential.from_series(pot), ptilde.trunc)
        ok, failure = False, str(err)
    mat = dimension_matrix(result.species)
    two = ok and is_2acyclic(result.potential)
    return MutationResult(k, mb, ptilde, ok, sr, result, mat,
                          sr.trivial_rank if sr else 0, two, failure)
