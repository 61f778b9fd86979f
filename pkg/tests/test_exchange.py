"""Exchange-matrix layer: symmetrizers, divisibility, mutation, family."""

import pytest

from specmut.exchange import (
    ExchangeMatrix, SkewSymmetrizer, check_divisibility, family_matrix,
    find_skew_symmetrizer, is_sign_skew_symmetric, is_strongly_primitive_proxy,
    matrix_mutate,
)


def _rand_skew_symmetrizable(rng, n, dmax=4, emax=3):
    """B = (e_ij d_j) with e skew-symmetric: divisibility holds by design."""
    d = [rng.randint(1, dmax) for _ in range(n)]
    e = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-emax, emax)
            e[i][j], e[j][i] = v, -v
    rows = tuple(tuple(e[i][j] * d[j] for j in range(n)) for i in range(n))
    return ExchangeMatrix(rows), tuple(d)


def test_family_matrix_values():
    b = family_matrix(4, 6)
    assert b.rows == ((0, -4, 0, 6), (1, 0, -1, 0),
                      (0, 4, 0, -6), (-1, 0, 1, 0))


@pytest.mark.parametrize("a,b", [(4, 6), (8, 12), (9, 15)])
def test_family_symmetrizer(a, b):
    m = family_matrix(a, b)
    d = find_skew_symmetrizer(m)
    assert d.diag == (1, a, 1, b)
    assert check_divisibility(m, d)
    assert not is_strongly_primitive_proxy(m)


@pytest.mark.parametrize("a,b,msg", [
    (0, 6, "positive"), (6, 4, "a < b"), (2, 6, "divide"), (4, 9, "coprime"),
])
def test_family_rejects_bad_parameters(a, b, msg):
    with pytest.raises(ValueError, match=msg):
        family_matrix(a, b)


def test_find_symmetrizer_minimal():
    b = ExchangeMatrix(((0, 2), (-1, 0)))
    d = find_skew_symmetrizer(b)
    assert d.diag == (1, 2)


def test_find_symmetrizer_rejects_non_skew():
    assert find_skew_symmetrizer(ExchangeMatrix(((0, 1), (1, 0)))) is None
    # sign-skew-symmetric but ratios inconsistent around a cycle
    b = ExchangeMatrix(((0, 1, -1), (-1, 0, 1), (2, -1, 0)))
    assert find_skew_symmetrizer(b) is None


def test_mutation_involutive_and_skew_preserving():
    import random
    rng = random.Random(5)
    for _ in range(30):
        b, d = _rand_skew_symmetrizable(rng, rng.randint(2, 5))
        sym = SkewSymmetrizer(d)
        assert sym.symmetrizes(b)
        k = rng.randint(1, b.n)
        bk = matrix_mutate(b, k)
        # involution
        assert matrix_mutate(bk, k).rows == b.rows
        # same symmetrizer works after mutation
        assert sym.symmetrizes(bk)
        # divisibility is preserved
        assert check_divisibility(b, sym) and check_divisibility(bk, sym)


def test_mutation_matches_known_example():
    # 3-cycle quiver mutated at 3 kills the 1->2 arrow
    b = ExchangeMatrix(((0, 1, -1), (-1, 0, 1), (1, -1, 0)))
    assert matrix_mutate(b, 3).rows == ((0, 0, 1), (0, 0, -1), (-1, 1, 0))


def test_matrix_json_roundtrip():
    b = family_matrix(4, 6)
    assert ExchangeMatrix.from_json(b.to_json()).rows == b.rows
    with pytest.raises(ValueError):
        ExchangeMatrix.from_json({"n": 3, "rows": [[0, 1], [-1, 0]]})


def test_sign_skew_symmetry():
    assert is_sign_skew_symmetric(family_matrix(4, 6))
    assert not is_sign_skew_symmetric(ExchangeMatrix(((0, 1), (1, 0))))


def test_out_of_range_vertex():
    with pytest.raises(IndexError):
        matrix_mutate(family_matrix(4, 6), 5)
