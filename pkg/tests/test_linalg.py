import math

import numpy as np
import pytest

from exceptions import InputError
from linalg import (as_matrix, enforce_chain, exgcd, inv_2x2_det1, normal_form, smith_decomposition, solve_linear,
                    subquotient)


@pytest.mark.parametrize("a,b", [(6, 4), (-4, 6), (0, 5), (7, 0), (12, 18), (5, 5)])
def test_exgcd(a, b):
    M = exgcd(a, b)
    g, zero = M @ np.array([a, b], dtype=object)
    assert zero == 0
    assert g == np.gcd(a, b)
    assert M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0] == 1
    assert (inv_2x2_det1(M) @ M == np.eye(2, dtype=object)).all()


def test_smith_decomposition_over_z():
    A = as_matrix([[2, 4], [6, 8]])
    nf = smith_decomposition(A)
    assert nf.diagonal() == [2, 4]
    assert nf.D[0, 1] == 0 and nf.D[1, 0] == 0
    assert (nf.S @ nf.D @ nf.T == A).all()
    assert (nf.Sinv @ A @ nf.Tinv == nf.D).all()


def test_smith_decomposition_skips_unrequested_inverses():
    nf = smith_decomposition(as_matrix([[0, 3], [0, 6]]), left=False, right=False, rhs=as_matrix([[3], [6]]))
    assert nf.S is None and nf.T is None
    assert nf.diagonal() == [3, 0]
    assert (nf.Sinv @ as_matrix([[3], [6]]) == nf.rhs).all()
    with pytest.raises(InputError):
        smith_decomposition(np.zeros((0, 2), dtype=object))


def test_normal_form_modulo_l():
    A = as_matrix([[2, 4], [6, 8]])
    nf = normal_form(A, modulus=12)
    assert nf.D[0, 1] == 0 and nf.D[1, 0] == 0
    assert ((nf.Sinv @ A @ nf.Tinv - nf.D) % 12 == 0).all()
    values, _ = enforce_chain(nf.diagonal(), modulus=12)
    assert [math.gcd(v, 12) for v in values] == [2, 4]


def test_enforce_chain():
    assert enforce_chain([4, 6])[0] == [2, 12]
    assert enforce_chain([0, 3])[0] == [3, 0]
    assert enforce_chain([1, 5, 1])[0] == [1, 1, 5]


def test_solve_linear_modular():
    x = solve_linear([[2]], [4], [6])
    assert (2 * x[0] - 4) % 6 == 0
    assert solve_linear([[2]], [1], [4]) is None


def test_solve_linear_over_z():
    x = solve_linear([[2, 0], [0, 3]], [4, 9], [0, 0])
    assert list(x) == [2, 3]
    assert solve_linear([[2]], [3], [0]) is None
    assert list(solve_linear([[2, 4], [6, 8]], [2, 2], [0, 0])) == [-1, 1]
    assert solve_linear([[2, 4]], [3], [0]) is None
    assert list(solve_linear(np.zeros((0, 2), dtype=object), [], [])) == [0, 0]


def test_solve_linear_mixed_rows():
    A = as_matrix([[1, 1], [1, 0]])
    x = solve_linear(A, [3, 2], [0, 5])
    assert x[0] + x[1] == 3
    assert (x[0] - 2) % 5 == 0


def test_integral_subquotient():
    sq = subquotient([[0, 0]], [0], [[2, 0], [0, 3]], [0, 0])
    assert sq.invariant_factors == [6]
    g = sq.generators[0]
    assert g[0] % 2 and g[1] % 3

    sq = subquotient([[1, -1]], [0], [[2], [2]], [0, 0])
    assert sq.invariant_factors == [2]
    assert [abs(v) for v in sq.generators[0]] == [1, 1]
