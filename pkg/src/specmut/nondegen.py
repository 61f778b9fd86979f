"""Non-degeneracy search and truncated rigidity certification.

A potential is non-degenerate up to length L (and order N) when every
mutation sequence without immediate repeats keeps producing 2-acyclic reduced
outputs.  The search tries random potentials and walks the prefix tree of
sequences depth-first, so each prefix is mutated exactly once.

Rigidity is checked degreewise: the potential is rigid up to the truncation
order when every cyclic class lies in the Jacobian ideal plus commutators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .exchange import matrix_mutate
from .mutation import MutationResult, mutate
from .species import SpeciesSpec, dimension_matrix
from .series import (
    Potential, SeriesElement, SpeciesWithPotential,
    enumerate_monomials, ideal_span_truncated, mon_degree, mon_is_cyclic,
    random_potential,
)


# ---------------------------------------------------------------------------
# mutation sequences

@dataclass
class SequenceStep:
    vertex: int
    split_ok: bool
    two_acyclic: bool
    trivial_rank: int
    matrix: "ExchangeMatrix"
    matches_matrix_mutation: bool
    failure: str = ""


@dataclass
class SequenceReport:
    sequence: tuple
    ok: bool                    # every step split and stayed 2-acyclic
    steps: list
    final: SpeciesWithPotential | None
    mutations_performed: int

    def to_json(self) -> dict:
        return {
            "sequence": list(self.sequence),
            "ok": self.ok,
            "mutations_performed": self.mutations_performed,
            "steps": [
                {"vertex": s.vertex, "split_ok": s.split_ok,
                 "two_acyclic": s.two_acyclic,
                 "trivial_rank": s.trivial_rank,
                 "matrix": s.matrix.to_json(),
                 "matches_matrix_mutation": s.matches_matrix_mutation,
                 "failure": s.failure}
                for s in self.steps
            ],
        }


def check_sequence(swp: SpeciesWithPotential, sequence, seed: int = 0
                   ) -> SequenceReport:
    """Mutate along ``sequence`` (1-based vertices, no immediate repeats)."""
    sequence = tuple(int(k) for k in sequence)
    for a, b in zip(sequence, sequence[1:]):
        if a == b:
            raise ValueError("sequence repeats a vertex immediately")
    for k in sequence:
        if not 1 <= k <= swp.species.n:
            raise IndexError(f"vertex {k} out of range 1..{swp.species.n}")
    b_track = dimension_matrix(swp.species)
    cur = swp
    steps = []
    performed = 0
    ok = True
    for k in sequence:
        res = mutate(cur, k, seed=seed)
        performed += 1
        b_track = matrix_mutate(b_track, k)
        matches = res.two_acyclic and res.matrix.rows == b_track.rows
        steps.append(SequenceStep(k, res.split_ok, res.two_acyclic,
                                  res.trivial_rank, res.matrix, matches,
                                  res.failure))
        if not res.two_acyclic:
            ok = False
            break
        cur = res.result
    return SequenceReport(sequence, ok, steps, cur if ok else None, performed)


# ---------------------------------------------------------------------------
# non-degeneracy search

@dataclass
class SearchResult:
    found: bool
    matrix: "ExchangeMatrix"
    trunc: int
    max_len: int
    trials_used: int
    mutations_performed: int
    sequences_checked: int
    seed: int | None = None          # seed of the certified potential
    potential: Potential | None = None
    failing_sequence: tuple | None = None

    def certificate(self) -> dict:
        out = {
            "found": self.found,
            "matrix": self.matrix.to_json(),
            "trunc": self.trunc,
            "max_len": self.max_len,
            "trials_used": self.trials_used,
            "mutations_performed": self.mutations_performed,
            "sequences_checked": self.sequences_checked,
        }
        if self.found:
            out["seed"] = self.seed
            out["potential"] = self.potential.to_json()
        elif self.failing_sequence is not None:
            out["failing_sequence"] = list(self.failing_sequence)
        return out


def _dfs_all_sequences(swp, max_len, seed, counters, prefix=()):
    """True iff every extension of ``prefix`` up to max_len stays 2-acyclic."""
    if len(prefix) == max_len:
        return True, None
    last = prefix[-1] if prefix else None
    for k in range(1, swp.species.n + 1):
        if k == last:
            continue
        res = mutate(swp, k, seed=seed)
        counters["mutations"] += 1
        counters["sequences"] += 1
        if not res.two_acyclic:
            return False, prefix + (k,)
        ok, bad = _dfs_all_sequences(res.result, max_len, seed, counters,
                                     prefix + (k,))
        if not ok:
            return False, bad
    return True, None


def search_nondegenerate(sp: SpeciesSpec, trunc: int, max_len: int = 4,
                         trials: int = 20, seed: int = 0,
                         support: str = "all") -> SearchResult:
    """Randomized search for a potential non-degenerate up to length max_len.

    Deterministic for a fixed seed: trial t draws the random potential with
    seed ``seed + t``.
    """
    counters = {"mutations": 0, "sequences": 0}
    b = dimension_matrix(sp)
    last_fail = None
    for t in range(trials):
        pot = random_potential(sp, trunc, seed + t, support=support)
        swp = SpeciesWithPotential.build(sp, trunc, pot)
        ok, bad = _dfs_all_sequences(swp, max_len, seed + t, counters)
        if ok:
            return SearchResult(True, b, trunc, max_len, t + 1,
                                counters["mutations"], counters["sequences"],
                                seed=seed + t, potential=pot)
        last_fail = bad
    return SearchResult(False, b, trunc, max_len, trials,
                        counters["mutations"], counters["sequences"],
                        failing_sequence=last_fail)


# ---------------------------------------------------------------------------
# truncated rigidity

@dataclass
class DeformationReport:
    dims: dict          # degree -> dimension of surviving cyclic classes
    rigid: bool
    total: int

    def to_json(self) -> dict:
        return {"dims": {str(k): v for k, v in sorted(self.dims.items())},
                "rigid": self.rigid, "total": self.total}


def _commutator_rows(sp, n, index):
    """Commutators [letter, monomial] spanning [A, A] degreewise up to n.

    Single letters suffice: [uv, w] = [u, vw] + [v, wu], so commutators with
    degree-0 scalars and single arrows generate the whole commutator span.
    """
    p = sp.p
    letters = [SeriesElement.scalar_at(sp, n, i, t)
               for i in range(1, sp.n + 1) for t in range(sp.degree_at(i))]
    letters += [SeriesElement.monomial(sp, n, (t, a.name, u))
                for a in sp.arrows
                for t in range(sp.degree_at(a.source))
                for u in range(sp.degree_at(a.target))]
    mons = []
    for m in range(0, n + 1):
        mons.extend(enumerate_monomials(sp, m))
    rows = []
    for let in letters:
        for mon in mons:
            if mon_degree(mon) + let.max_degree() > n:
                continue
            y = SeriesElement(sp, n, {mon: 1})
            comm = let * y - y * let
            if comm.is_zero():
                continue
            v = np.zeros(len(index), dtype=np.int64)
            for m2, c in comm.terms.items():
                v[index[m2]] = c
            rows.append(v)
    return rows


def deformation_dim_truncated(swp: SpeciesWithPotential) -> DeformationReport:
    """Dimension of cyclic classes outside the Jacobian ideal, by degree.

    The potential is rigid up to the truncation order iff every degree
    contributes zero.
    """
    sp, n = swp.species, swp.trunc
    p = sp.p
    index, ideal = ideal_span_truncated(swp.potential, n)
    w = linalg.RowSpace(len(index), p)
    for row in ideal.rows:
        w.add(row)
    for row in _commutator_rows(sp, n, index):
        w.add(row)
    dims = {}
    for m in range(2, n + 1):
        base = w.dim
        added = 0
        probe = linalg.RowSpace(len(index), p)
        for row in w.rows:
            probe.add(row)
        for mon in index:
            if mon_degree(mon) == m and mon_is_cyclic(sp, mon):
                v = np.zeros(len(index), dtype=np.int64)
                v[index[mon]] = 1
                if probe.add(v):
                    added += 1
        dims[m] = added
    total = sum(dims.values())
    return DeformationReport(dims, total == 0, total)


def rigidity_transport_check(swp: SpeciesWithPotential, k: int,
                             seed: int = 0) -> dict:
    """Compare rigidity before and after one reduced mutation.

    Rigidity is preserved by mutation; a mismatch indicates a genuine
    degeneracy (or a split failure, which is reported as such).
    """
    before = deformation_dim_truncated(swp)
    res = mutate(swp, k, seed=seed)
    if not res.split_ok:
        return {"consistent": False, "split_ok": False,
                "before": before.to_json(), "after": None,
                "failure": res.failure}
    after = deformation_dim_truncated(res.result)
    return {"consistent": before.rigid == after.rigid,
            "split_ok": True,
            "before": before.to_json(),
            "after": after.to_json()}
