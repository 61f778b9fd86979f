"""Premutation and reduced mutation, checked against the classical quiver
fixture, dimension accounting, split round-trips and the matrix mutation
rule."""

import json
import random
from pathlib import Path

import pytest

from specmut.exchange import (
    ExchangeMatrix, family_matrix, find_skew_symmetrizer, matrix_mutate,
)
from specmut.species import Arrow, SpeciesSpec, dimension_matrix, realize
from specmut.series import (
    Potential, SeriesElement, SpeciesWithPotential, random_potential,
)
from specmut.mutation import (
    ArrowSubstitution, SplitError, cyclic_reduce, cyclically_equivalent,
    mutate, premutate_bimodule, premutate_potential, split,
)

N = 6
FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def quiver3():
    return SpeciesSpec(101, (1, 1, 1),
                       [Arrow("a", 1, 2), Arrow("b", 2, 3), Arrow("c", 3, 1)])


@pytest.fixture(scope="module")
def family46():
    b = family_matrix(4, 6)
    return realize(b, find_skew_symmetrizer(b), 101)


@pytest.fixture(scope="module")
def cycle121():
    b = ExchangeMatrix(((0, 2, -1), (-1, 0, 1), (1, -2, 0)))
    return realize(b, find_skew_symmetrizer(b), 101)


# -- classical quiver fixture -------------------------------------------

def test_quiver3_mutation_matches_fixture(quiver3):
    """mu_3 of the 3-cycle with P = abc: the hand-computed classical result."""
    with open(FIXTURES / "quiver3_mu3.json") as fh:
        expected = json.load(fh)
    sp = quiver3
    P = Potential(sp, N, {(0, "a", 0, "b", 0, "c", 0): 1})
    swp = SpeciesWithPotential(sp, P, N)
    _, ptilde = premutate_potential(swp, 3)
    got_terms = [{"monomial": list(m), "coeff": c}
                 for m, c in sorted(ptilde.terms.items())]
    assert got_terms == sorted(expected["premutated_terms"],
                               key=lambda t: t["monomial"])
    res = mutate(swp, 3, seed=0)
    assert res.to_json() == expected["result"]


# -- premutation --------------------------------------------------------

def test_premutation_dimension_accounting(quiver3, family46):
    for sp in (quiver3, family46):
        for k in range(1, sp.n + 1):
            mb = premutate_bimodule(sp, k)
            acct = mb.dimension_accounting(sp)
            assert acct["ok"], acct


def test_premutation_vertex_range(family46):
    with pytest.raises(IndexError):
        premutate_bimodule(family46, 5)


def test_premutated_potential_avoids_vertex(family46):
    sp = family46
    pot = random_potential(sp, N, seed=2)
    swp = SpeciesWithPotential.build(sp, N, pot)
    for k in range(1, 5):
        mb, ptilde = premutate_potential(swp, k)
        for mon in ptilde.terms:
            for name in mon[1::2]:
                a = mb.species.arrow_by_name[name]
            # no term passes through k with an old arrow pair
            verts = [mb.species.arrow_by_name[n].target for n in mon[1::2]]
            kinds = [mb.species.arrow_by_name[n].kind for n in mon[1::2]]
            for v, kind in zip(verts, kinds):
                if v == k:
                    assert kind == "dual_right"


# -- cyclic equivalence -------------------------------------------------

def test_cyclic_reduce_idempotent(family46):
    sp = family46
    pot = random_potential(sp, N, seed=4)
    r1 = cyclic_reduce(pot)
    assert cyclic_reduce(r1) == r1


def test_cyclic_reduce_merges_rotations(quiver3):
    sp = quiver3
    f = SeriesElement(sp, N, {(0, "a", 0, "b", 0, "c", 0): 5})
    g = SeriesElement(sp, N, {(0, "b", 0, "c", 0, "a", 0): 5})
    assert cyclically_equivalent(f, g)
    assert not cyclically_equivalent(f, g.scale(2))


def test_cyclic_products_commute_up_to_equivalence(family46):
    sp = family46
    rng = random.Random(7)
    arrows = [SeriesElement.arrow(sp, N, a.name) for a in sp.arrows]
    f = arrows[0] * arrows[3]       # 1->4->3
    g = arrows[2] * arrows[1]       # 3->2->1
    assert cyclically_equivalent(f * g, g * f)


# -- substitutions ------------------------------------------------------

def test_substitution_inverse_roundtrip(family46):
    sp = family46
    rng = random.Random(9)
    # unitriangular: a1_4 -> a1_4 + (a1_4 x a4_3 a3_2 a2_1 a1_4) style tail
    tail = SeriesElement.monomial(
        sp, N, (0, "a1_4", 2, "a4_3", 0, "a3_2", 0, "a2_1", 0, "a1_4", 0))
    sub = ArrowSubstitution(sp, {
        "a1_4": SeriesElement.arrow(sp, N, "a1_4") + tail.scale(17)})
    inv = sub.inverse(N)
    pot = random_potential(sp, N, seed=10)
    assert inv.apply(sub.apply(pot)) == SeriesElement(sp, N, pot.terms)
    assert sub.apply(inv.apply(pot)) == SeriesElement(sp, N, pot.terms)


def test_substitution_respects_products(family46):
    sp = family46
    a14 = SeriesElement.arrow(sp, N, "a1_4")
    a43 = SeriesElement.arrow(sp, N, "a4_3")
    sub = ArrowSubstitution(sp, {"a1_4": a14.scale(3)})
    assert sub.apply(a14 * a43) == (a14 * a43).scale(3)


# -- splitting ----------------------------------------------------------

def test_split_roundtrip_cyclic_equivalence(family46):
    """The change of arrows carries ptilde onto trivial + reduced parts."""
    sp = family46
    for seed, k in ((3, 1), (5, 2), (8, 4)):
        pot = random_potential(sp, N, seed=seed)
        swp = SpeciesWithPotential.build(sp, N, pot)
        mb, ptilde = premutate_potential(swp, k)
        sr = split(mb.species, ptilde, seed=0)
        img = sr.substitution.apply(ptilde)
        red = SeriesElement(sr.full_species, N, sr.reduced.potential.terms)
        assert cyclically_equivalent(img, red + sr.trivial_potential)
        # the reduced species carries no trivial arrow
        red_names = {a.name for a in sr.reduced.species.arrows}
        assert not red_names & set(sr.trivial_arrows)
        # trivial rank counts an even number of F-free generators
        assert sr.trivial_rank == len(sr.trivial_arrows)


def test_split_detects_unpaired_degree_two(quiver3):
    # degree-2 potential with no partner block: c pairs with nothing
    sp = SpeciesSpec(101, (1, 1), [Arrow("a", 1, 2), Arrow("b", 2, 1),
                                   Arrow("c", 1, 2)])
    pt = SeriesElement(sp, N, {(0, "a", 0, "b", 0): 1})
    sr = split(sp, pt, seed=0)
    assert set(sr.trivial_arrows) and sr.reduced.potential.is_zero()
    # a fully degenerate pairing must raise
    zero_pair = SeriesElement(sp, N, {})
    sr0 = split(sp, zero_pair, seed=0)
    assert sr0.trivial_rank == 0


# -- matrix compatibility (criterion: FZ rule + involution) -------------

def test_fifty_random_mutations_follow_matrix_rule(quiver3, family46,
                                                   cycle121):
    shapes = [(quiver3, dimension_matrix(quiver3)),
              (family46, family_matrix(4, 6)),
              (cycle121, ExchangeMatrix(((0, 2, -1), (-1, 0, 1), (1, -2, 0))))]
    rng = random.Random(0)
    checked = 0
    for rep in range(60):
        sp, b = shapes[rep % 3]
        pot = random_potential(sp, N, seed=rep)
        swp = SpeciesWithPotential.build(sp, N, pot)
        k = rng.randint(1, sp.n)
        res = mutate(swp, k, seed=rep)
        if not res.two_acyclic:
            continue
        assert res.matrix.rows == matrix_mutate(b, k).rows
        back = mutate(res.result, k, seed=rep)
        assert back.matrix.rows == b.rows
        checked += 1
    assert checked >= 50
