"""Acceptance gate: one test per acceptance criterion, each enforcing its
stated runtime budget.  Run with ``pytest -v tests/test_acceptance.py`` to get
one pass/fail line per criterion."""

import itertools
import random
import time

from gmpy2 import mpq

from gelfand_lab import hc_bridge, lattices, repq
from gelfand_lab.exact_core import Matrix, TruncSeries
from gelfand_lab.lattices import NormalForm


def _grid(max_kl=3, lams=(mpq(1), mpq(2), mpq(1, 2), mpq(-1))):
    for case in ("I.a", "I.b", "II.a", "II.b", "II.c-i", "II.c-ii", "II.d"):
        for k in range(max_kl + 1):
            for l in range(max_kl + 1):
                for lam in lams if case == "II.d" else (None,):
                    try:
                        yield NormalForm(case, k, l, lam)
                    except ValueError:
                        # out-of-range parameters, including |lambda| > 1 at
                        # l = 0 where only the canonical root is admissible
                        continue


def _coker(nf, N):
    n = max(N, 2 * nf.k + nf.l + 4)
    return lattices.cokernel(lattices.build_normal_map(nf, n))


def test_criterion_01_schurian_classification():
    start = time.time()
    objs = repq.schurian_objects()
    assert [repq.is_schurian(o) for o in objs] == ["yes"] * 6
    end_dims = []
    for o in objs:
        alg, _ = repq.end_algebra(o)
        end_dims.append(alg.dim)
        if alg.dim == 2:
            # End isomorphic to C: exhibit an element squaring to -1
            assert repq.complex_unit_witness(alg) is not None
    assert end_dims == [2, 1, 1, 1, 2, 2]
    for a, b in itertools.combinations(objs, 2):
        ok, certificate = repq.is_isomorphic(a, b)
        assert not ok and certificate
    assert time.time() - start < 1.0


def test_criterion_02_non_schurian_outside_small_dimension_vectors():
    start = time.time()
    small = {(1, 0), (0, 1), (1, 1), (1, 2)}
    checked = 0
    for nf in _grid(3, lams=(mpq(1, 2),)):
        M = _coker(nf, 8)
        if (M.u, M.v) in small:
            continue
        assert repq.is_schurian(M) == "no", nf
        checked += 1
    assert checked > 50
    assert time.time() - start < 30.0


def test_criterion_03_dimension_vector_formulas():
    start = time.time()
    count = 0
    for nf in _grid(3):
        M = _coker(nf, 16)
        assert repq.validate(M) == []
        assert (M.u, M.v) == lattices.dimension_vector_formula(nf), nf
        count += 1
    assert count >= 70
    assert time.time() - start < 120.0


def test_criterion_04_reduction_round_trips():
    start = time.time()
    rng = random.Random(0)
    for i in range(200):
        nf0 = lattices.random_normal_form(rng)
        phi = lattices.build_normal_map(nf0, 12)
        tw = (
            lattices.random_automorphism(phi.source, 12, rng)
            .then(phi)
            .then(lattices.random_automorphism(phi.target, 12, rng))
        )
        # reduce_to_normal_form re-verifies eta * phi * xi against the
        # canonical matrix exactly before returning
        nf1, eta, xi = lattices.reduce_to_normal_form(tw)
        assert nf1 == nf0, (i, nf0, nf1)
    assert time.time() - start < 300.0


def test_criterion_05_lambda_isomorphism_law():
    start = time.time()
    N = 8
    t = TruncSeries.t_power
    z = TruncSeries.zero(N)

    def pp(lam, l=0):
        X = Matrix([[t(1, N), z], [z, t(1 + l, N) * lam]])
        return lattices.cokernel(lattices.LatticeMap(("P",), ("P",), X, N))

    ok, cert = repq.is_isomorphic(pp(mpq(2)), pp(mpq(1, 2)))
    assert ok and cert is not None
    assert not repq.is_isomorphic(pp(mpq(2)), pp(mpq(3)))[0]
    assert not repq.is_isomorphic(pp(mpq(1), l=1), pp(mpq(2), l=1))[0]
    assert time.time() - start < 30.0


def test_criterion_06_pseudo_diagonalization():
    start = time.time()
    rng = random.Random(0)
    for _ in range(50):
        c = mpq(rng.randint(-8, 8), rng.randint(1, 5))
        d = mpq(0)
        while not bool(d):
            d = mpq(rng.randint(-8, 8), rng.randint(1, 5))
        # pseudo_diagonalize verifies eta (1 0; c d) xi = diag(1, lambda)
        # exactly before returning
        lam, eta, xi = lattices.pseudo_diagonalize(c, d)
        pi = lam * lam - ((d * d + c * c + 1) / d) * lam + 1
        assert not bool(pi)
    assert time.time() - start < 10.0


def test_criterion_07_algebra_isomorphisms():
    from gelfand_lab import algebra_lab

    start = time.time()
    assert algebra_lab.verify_algebra_map(algebra_lab.lambda_to_a_mod_t_map()) == "ok"
    for N in (2, 3, 4):
        assert algebra_lab.og_to_a_check(N) == "ok"
    assert algebra_lab.verify_algebra_map(algebra_lab.gal_to_matrix_map()) == "ok"
    for N in (2, 3):
        assert algebra_lab.complexification_check(N) == "ok"
    assert algebra_lab.idempotent_conjugacy_check(4) == "ok"
    assert time.time() - start < 40.0


def test_criterion_08_radical_structure():
    from gelfand_lab.algebra_lab import (
        semisimple_quotient,
        subalgebra_on_span,
        truncated_order,
    )

    start = time.time()
    A = truncated_order("A", 2)
    ss, proj = semisimple_quotient(A)
    assert ss.dim == 3
    e_img, j_img = proj(A.basis_vector(0)), proj(A.basis_vector(2))
    block, _ = subalgebra_on_span(ss, [e_img, j_img], e_img)
    assert repq.complex_unit_witness(block) is not None
    ssH, _ = semisimple_quotient(truncated_order("H", 2))
    assert ssH.dim == 5
    assert time.time() - start < 5.0


def test_criterion_09_duality():
    start = time.time()
    objs = repq.schurian_objects()
    duals = [repq.dual(o) for o in objs]
    for o, d in zip(objs, duals):
        assert d.dimension_vector() == o.dimension_vector()
        assert repq.is_isomorphic(repq.dual(d), o)[0]
    # the two length-two modules are exchanged
    assert repq.is_isomorphic(duals[2], objs[3])[0]
    assert repq.is_isomorphic(duals[3], objs[2])[0]
    rng = random.Random(0)
    for _ in range(20):
        nf = lattices.random_normal_form(rng)
        M = _coker(nf, 8)
        D = repq.dual(M)
        assert repq.validate(D) == []
        assert (D.u, D.v) == (M.u, M.v)
        assert repq.is_isomorphic(repq.dual(D), M)[0]
    assert time.time() - start < 30.0


def test_criterion_10_hc_bridge():
    start = time.time()
    rng = random.Random(0)
    for i in range(100):
        D = hc_bridge.random_hc_diagram(rng, real_only=(i % 3 == 0))
        # validate_hc includes the AB-vs-BA nilpotency agreement per edge
        assert hc_bridge.validate_hc(D) == []
        assert hc_bridge.conjugation_square_check(D) == "ok"
    topI = repq.top(_coker(NormalForm("I.a", 2), 8))
    topII = repq.top(_coker(NormalForm("II.b", 1, 2), 8))
    assert topI[0] == 0 and topI[1] > 0  # case I tops are T-isotypic
    assert topII[1] == 0 and topII[0] > 0  # case II tops are S-isotypic
    assert repq.top(repq.schurian_objects()[4]) == (0, 2)  # T + T
    assert time.time() - start < 60.0
