import random

from gmpy2 import mpq

from gelfand_lab.exact_core import (
    Gaussian,
    Matrix,
    Quadratic,
    TruncSeries,
    quad_roots,
    sparse_kernel,
    squarefree_decomposition,
)


def test_squarefree_decomposition():
    assert squarefree_decomposition(1) == (1, 1)
    assert squarefree_decomposition(12) == (2, 3)
    assert squarefree_decomposition(49) == (7, 1)
    assert squarefree_decomposition(360) == (6, 10)


def test_quadratic_arithmetic():
    a = Quadratic(mpq(1, 2), mpq(3), 5)
    b = Quadratic(mpq(-1), mpq(1, 3), 5)
    assert a + b == Quadratic(mpq(-1, 2), mpq(10, 3), 5)
    assert a * b == Quadratic(mpq(-1, 2) + 5 * mpq(1), mpq(1, 6) - mpq(3), 5)
    one = a * (1 / a)
    assert one == Quadratic(1, 0, 5)


def test_gaussian_arithmetic_and_conj():
    z = Gaussian(mpq(2), mpq(-3))
    assert z * z.conj() == Gaussian(mpq(13), mpq(0))
    assert (z / z) == Gaussian(mpq(1), mpq(0))
    assert z.conj().conj() == z
    # mixed scalars coerce from the right and the left
    assert 2 * z == z + z


def test_quad_roots_oracle():
    # v^2 - (5/2)v + 1 has roots 2 and 1/2
    r1, r2 = quad_roots(mpq(-5, 2), mpq(1))
    assert {r1, r2} == {mpq(2), mpq(1, 2)}
    # v^2 - 3v + 1 has roots (3 +- sqrt 5)/2
    r1, r2 = quad_roots(mpq(-3), mpq(1))
    for r in (r1, r2):
        assert r * r - 3 * r + 1 == Quadratic(0, 0, 5) or not bool(r * r - 3 * r + 1)


def test_series_inverse_oracle():
    # (1 + t)^-1 = 1 - t + t^2 mod t^3
    s = TruncSeries([mpq(1), mpq(1), mpq(0)], 3)
    assert s.invert().c == (mpq(1), mpq(-1), mpq(1))
    prod = s * s.invert()
    assert prod.c == (mpq(1), mpq(0), mpq(0))


def test_series_valuation_and_shift():
    z = TruncSeries.zero(4)
    assert z.val() == float("inf")
    t2 = TruncSeries.t_power(2, 4)
    assert t2.val() == 2
    assert t2.shift_down(2).val() == 0


def test_matrix_rank_rref_inverse():
    M = Matrix([[mpq(1), mpq(2)], [mpq(2), mpq(4)]])
    assert M.rank() == 1
    A = Matrix([[mpq(1), mpq(1)], [mpq(0), mpq(1)]])
    assert (A * A.inverse()) == Matrix.identity(2)
    assert A.is_nilpotent() is False
    N = Matrix([[mpq(0), mpq(5)], [mpq(0), mpq(0)]])
    assert N.is_nilpotent()


def test_sparse_kernel_exactness_fuzz():
    rng = random.Random(123)
    for _ in range(150):
        m, n = rng.randint(1, 6), rng.randint(1, 7)
        rows = [
            {j: mpq(rng.randint(-3, 3)) for j in range(n) if rng.random() < 0.6}
            for _ in range(m)
        ]
        ker = sparse_kernel(rows, n)
        for v in ker:
            for r in rows:
                assert not bool(sum(c * v[i] for i, c in r.items()))
        dense = Matrix([[rows[i].get(j, mpq(0)) for j in range(n)] for i in range(m)])
        assert len(ker) == n - dense.rank()


def test_sparse_kernel_full_reduction_regression():
    # rows engineered so a later pivot appears inside an earlier echelon row;
    # without full back-substitution the extracted kernel violates row 0
    rows = [
        {0: mpq(1), 1: mpq(1), 2: mpq(1)},
        {1: mpq(1), 2: mpq(2)},
    ]
    ker = sparse_kernel(rows, 3)
    assert len(ker) == 1
    v = ker[0]
    for r in rows:
        assert not bool(sum(c * v[i] for i, c in r.items()))
