from gmpy2 import mpq

from gelfand_lab.algebra_lab import (
    check_involution,
    complexification_check,
    crossed_product,
    gal_to_matrix_map,
    idempotent_conjugacy_check,
    invariant_subalgebra,
    lambda_to_a_mod_t_map,
    o_sigma_matrix,
    og_to_a_check,
    radical_basis,
    semisimple_quotient,
    subalgebra_on_span,
    truncated_order,
    verify_algebra_map,
)


def test_truncated_order_dimensions():
    # A and H are free of R-rank 9 over the rationals; O doubles (Gaussian
    # coefficients are stored as real pairs)
    for N in (1, 2, 3):
        assert truncated_order("A", N).dim == 9 * N
        assert truncated_order("H", N).dim == 9 * N
        assert truncated_order("O", N).dim == 18 * N


def test_radical_and_semisimple_quotients():
    A1 = truncated_order("A", 1)
    assert len(radical_basis(A1)) == 6
    ss, _ = semisimple_quotient(truncated_order("A", 2))
    assert ss.dim == 3  # C x R
    ssH, _ = semisimple_quotient(truncated_order("H", 2))
    assert ssH.dim == 5  # M2(R) x R


def test_A_quotient_contains_complex_unit():
    from gelfand_lab.repq import complex_unit_witness

    A = truncated_order("A", 2)
    ss, proj = semisimple_quotient(A)
    e_img, j_img = proj(A.basis_vector(0)), proj(A.basis_vector(2))
    block, _ = subalgebra_on_span(ss, [e_img, j_img], e_img)
    assert block.dim == 2
    assert complex_unit_witness(block) is not None


def test_lambda_to_a_mod_t():
    assert verify_algebra_map(lambda_to_a_mod_t_map()) == "ok"


def test_galois_crossed_product_is_matrix_pattern():
    assert verify_algebra_map(gal_to_matrix_map()) == "ok"


def test_invariants_isomorphic_to_A():
    for N in (2, 3, 4):
        assert og_to_a_check(N) == "ok"


def test_complexification():
    for N in (2, 3):
        assert complexification_check(N) == "ok"


def test_idempotent_conjugacy():
    assert idempotent_conjugacy_check(3) == "ok"


def test_crossed_product_dimension_and_involution():
    N = 3
    O = truncated_order("O", N)
    sigma = o_sigma_matrix(N)
    assert check_involution(O, sigma) == []
    B = crossed_product(O, sigma, check=False)
    assert B.dim == 2 * O.dim


def test_invariant_subalgebra_of_conjugation():
    # C as a 2-dimensional rational algebra with conjugation -> invariants R
    from gelfand_lab.algebra_lab import FinDimAlgebra
    from gelfand_lab.exact_core import Matrix

    C = FinDimAlgebra(
        2,
        [[{0: mpq(1)}, {1: mpq(1)}], [{1: mpq(1)}, {0: mpq(-1)}]],
        [mpq(1), mpq(0)],
    )
    sigma = Matrix([[mpq(1), mpq(0)], [mpq(0), mpq(-1)]])
    inv, _ = invariant_subalgebra(C, sigma)
    assert inv.dim == 1
