"""Command-line interface: verification suites, normal-form reduction,
object inspection, and the pairwise operations (dual, iso, hom, coker,
crossed products).

Exit codes: 0 success, 1 parse/usage error, 2 mathematical violation or
negative verdict, 3 truncation exhaustion ("raise N" did not converge).
"""

import argparse
import itertools
import json
import os
import random
import sys

from gmpy2 import mpq

from . import algebra_lab, hc_bridge, lattices, repq, serialize
from .exact_core import Matrix, TruncSeries
from .lattices import NormalForm, TruncationError
from .serialize import FormatError

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_VIOLATION = 2
EXIT_TRUNCATION = 3

_MAX_RETRIES = 4


def _default_n():
    env = os.environ.get("GELFAND_LAB_N")
    if env:
        try:
            return max(2, int(env))
        except ValueError:
            pass
    return 8


def _scalar_str(s):
    return json.dumps(serialize.scalar_to_json(s))


# ---------------------------------------------------------------------------
# verification suites


class Report:
    def __init__(self, suite, seed, N):
        self.suite, self.seed, self.N = suite, seed, N
        self.checks = []

    def add(self, check_id, ok, detail=""):
        self.checks.append((check_id, bool(ok), detail))

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.checks)

    def text(self):
        lines = [
            f"suite: {self.suite}",
            f"seed: {self.seed}",
            f"N: {self.N}",
        ]
        for cid, ok, detail in self.checks:
            line = f"{cid}: {'pass' if ok else 'FAIL'}"
            if detail and not ok:
                line += f" ({detail})"
            lines.append(line)
        lines.append(f"overall: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "N": self.N,
            "checks": [
                {"id": cid, "status": "pass" if ok else "fail", "detail": detail}
                for cid, ok, detail in self.checks
            ],
            "overall": "pass" if self.passed else "fail",
        }


def _suite_schurian(report, seed, N):
    objs = repq.schurian_objects()
    names = ["S", "T", "b1", "b2", "c1", "c2"]
    verdicts = [repq.is_schurian(o) for o in objs]
    report.add("schurian.verdicts", verdicts == ["yes"] * 6, str(verdicts))
    end_dims = [repq.end_algebra(o)[0].dim for o in objs]
    report.add("schurian.end-dims", end_dims == [2, 1, 1, 1, 2, 2], str(end_dims))
    for name, o, d in zip(names, objs, end_dims):
        if d == 2:
            alg, _ = repq.end_algebra(o)
            w = repq.complex_unit_witness(alg)
            report.add(f"schurian.end-complex-witness.{name}", w is not None)
    noniso = all(
        not repq.is_isomorphic(a, b)[0]
        for a, b in itertools.combinations(objs, 2)
    )
    report.add("schurian.15-pairs-non-isomorphic", noniso)
    duals = [repq.dual(o) for o in objs]
    ok = all(not repq.validate(d) for d in duals)
    pairing = (
        repq.is_isomorphic(duals[0], objs[0])[0]
        and repq.is_isomorphic(duals[1], objs[1])[0]
        and repq.is_isomorphic(duals[2], objs[3])[0]
        and repq.is_isomorphic(duals[3], objs[2])[0]
        and repq.is_isomorphic(duals[4], objs[5])[0]
        and repq.is_isomorphic(duals[5], objs[4])[0]
    )
    report.add("schurian.duality-involution", ok and pairing)
    tops = [repq.top(o) for o in objs]
    want = [(1, 0), (0, 1), (0, 1), (1, 0), (0, 2), (1, 0)]
    report.add("schurian.tops", tops == want, str(tops))


def _grid(max_kl=3):
    for case in ("I.a", "I.b", "II.a", "II.b", "II.c-i", "II.c-ii", "II.d"):
        for k in range(max_kl + 1):
            for l in range(max_kl + 1):
                lams = (None,)
                if case == "II.d":
                    lams = (
                        (mpq(1), mpq(1, 2), mpq(-1))
                        if l == 0
                        else (mpq(1), mpq(2), mpq(1, 2), mpq(-1))
                    )
                for lam in lams:
                    try:
                        yield NormalForm(case, k, l, lam)
                    except ValueError:
                        continue


def _coker_with_retry(nf, N):
    n = max(N, 2 * nf.k + nf.l + 4)
    for _ in range(_MAX_RETRIES):
        try:
            return lattices.cokernel(lattices.build_normal_map(nf, n))
        except TruncationError:
            n *= 2
    raise TruncationError(f"cokernel of {nf} did not converge by N = {n}")


def _suite_abscyclic(report, seed, N):
    ok_dim, bad = True, ""
    seen = {}
    for nf in _grid(3):
        M = _coker_with_retry(nf, N)
        want = lattices.dimension_vector_formula(nf)
        if (M.u, M.v) != want or repq.validate(M):
            ok_dim, bad = False, f"{nf}: got {(M.u, M.v)}, want {want}"
            break
        seen[(nf.case, nf.k, nf.l, str(nf.lam))] = M
    report.add("abscyclic.dimension-vectors", ok_dim, bad)

    ok_sch, bad = True, ""
    for key, M in seen.items():
        if (M.u, M.v) in ((1, 0), (0, 1), (1, 1), (1, 2)):
            continue
        if repq.is_schurian(M) != "no":
            ok_sch, bad = False, f"{key} unexpectedly Schurian"
            break
    report.add("abscyclic.non-schurian-outside-small-dims", ok_sch, bad)

    rng = random.Random(seed)
    ok_rt, bad = True, ""
    for i in range(50):
        nf0 = lattices.random_normal_form(rng)
        phi = lattices.build_normal_map(nf0, max(N, 12))
        tw = (
            lattices.random_automorphism(phi.source, phi.N, rng)
            .then(phi)
            .then(lattices.random_automorphism(phi.target, phi.N, rng))
        )
        nf1, eta, xi = lattices.reduce_to_normal_form(tw)
        if nf1 != nf0:
            ok_rt, bad = False, f"trial {i}: {nf0} -> {nf1}"
            break
    report.add("abscyclic.50-reduction-round-trips", ok_rt, bad)

    lam2 = _coker_with_retry(NormalForm("II.d", 1, 0, mpq(1, 2)), N)
    lam2b = lattices.cokernel(_pp_map(mpq(2), 0, 1, max(N, 8)))
    lam3 = lattices.cokernel(_pp_map(mpq(3), 0, 1, max(N, 8)))
    report.add(
        "abscyclic.lambda-inverse-isomorphism",
        repq.is_isomorphic(lam2, lam2b)[0],
    )
    report.add(
        "abscyclic.lambda-2-vs-3-non-isomorphic",
        not repq.is_isomorphic(lam2b, lam3)[0],
    )
    l1a = _coker_with_retry(NormalForm("II.d", 1, 1, mpq(1)), N)
    l1b = _coker_with_retry(NormalForm("II.d", 1, 1, mpq(2)), N)
    report.add(
        "abscyclic.lambda-distinct-at-l1",
        not repq.is_isomorphic(l1a, l1b)[0],
    )
    ci = _coker_with_retry(NormalForm("II.c-i", 1, 1), N)
    cii = _coker_with_retry(NormalForm("II.c-ii", 1, 1), N)
    report.add(
        "abscyclic.IIc-variants-non-isomorphic",
        not repq.is_isomorphic(ci, cii)[0],
    )

    rng = random.Random(seed + 1)
    ok_pd, bad = True, ""
    for i in range(50):
        c = mpq(rng.randint(-6, 6), rng.randint(1, 4))
        d = mpq(0)
        while not bool(d):
            d = mpq(rng.randint(-6, 6), rng.randint(1, 4))
        lam, eta, xi = lattices.pseudo_diagonalize(c, d)
        pi = lam * lam - ((d * d + c * c + 1) / d) * lam + 1
        if bool(pi):
            ok_pd, bad = False, f"trial {i}: pi(lambda) != 0"
            break
    report.add("abscyclic.50-pseudo-diagonalizations", ok_pd, bad)

    rng = random.Random(seed + 2)
    ok_dual, bad = True, ""
    for i in range(20):
        nf = lattices.random_normal_form(rng)
        M = _coker_with_retry(nf, N)
        D = repq.dual(M)
        if (
            repq.validate(D)
            or (D.u, D.v) != (M.u, M.v)
            or not repq.is_isomorphic(repq.dual(D), M)[0]
        ):
            ok_dual, bad = False, f"trial {i}: {nf}"
            break
    report.add("abscyclic.duality-on-20-cokernels", ok_dual, bad)


def _pp_map(lam, l, k, N):
    z = TruncSeries.zero(N)
    t = TruncSeries.t_power
    X = Matrix([[t(k, N), z], [z, t(k + l, N) * lam]])
    return lattices.LatticeMap(("P",), ("P",), X, N)


def _suite_algebra(report, seed, N):
    report.add(
        "algebra.lambda-to-A-mod-t",
        algebra_lab.verify_algebra_map(algebra_lab.lambda_to_a_mod_t_map()) == "ok",
    )
    for n in (2, 3, 4):
        report.add(f"algebra.invariants-to-A.N{n}", algebra_lab.og_to_a_check(n) == "ok")
    report.add(
        "algebra.galois-crossed-product-matrix-pattern",
        algebra_lab.verify_algebra_map(algebra_lab.gal_to_matrix_map()) == "ok",
    )
    for n in (2, 3):
        report.add(
            f"algebra.complexification.N{n}",
            algebra_lab.complexification_check(n) == "ok",
        )
    report.add(
        "algebra.idempotent-conjugacy",
        algebra_lab.idempotent_conjugacy_check(min(N, 4)) == "ok",
    )
    A = algebra_lab.truncated_order("A", 2)
    ss, proj = algebra_lab.semisimple_quotient(A)
    # generator layout: e is index 0, j is index 1, each with 2 t-shifts
    e_img, j_img = proj(A.basis_vector(0)), proj(A.basis_vector(2))
    block, _ = algebra_lab.subalgebra_on_span(ss, [e_img, j_img], e_img)
    okA = ss.dim == 3 and repq.complex_unit_witness(block) is not None
    report.add("algebra.A-semisimple-quotient-C-x-R", okA, f"dim {ss.dim}")
    H = algebra_lab.truncated_order("H", 2)
    ssH, _ = algebra_lab.semisimple_quotient(H)
    report.add("algebra.H-semisimple-quotient-dim-5", ssH.dim == 5, f"dim {ssH.dim}")


def _suite_hc(report, seed, N):
    rng = random.Random(seed)
    ok_sq, bad = True, ""
    for i in range(100):
        D = hc_bridge.random_hc_diagram(rng, real_only=(i % 3 == 0))
        if hc_bridge.validate_hc(D):
            ok_sq, bad = False, f"trial {i}: invalid seeded diagram"
            break
        res = hc_bridge.conjugation_square_check(D)
        if res != "ok":
            ok_sq, bad = False, f"trial {i}: {res}"
            break
    report.add("hc.100-conjugation-squares", ok_sq, bad)

    topI = repq.top(_coker_with_retry(NormalForm("I.a", 2), N))
    topII = repq.top(_coker_with_retry(NormalForm("II.b", 1, 2), N))
    report.add("hc.case-I-top-T", topI[0] == 0 and topI[1] > 0, str(topI))
    report.add("hc.case-II-top-S", topII[1] == 0 and topII[0] > 0, str(topII))
    c1 = repq.schurian_objects()[4]
    report.add("hc.example-top-T-squared", repq.top(c1) == (0, 2))


_SUITES = {
    "schurian": _suite_schurian,
    "abscyclic": _suite_abscyclic,
    "algebra": _suite_algebra,
    "hc": _suite_hc,
}


def cmd_verify(args):
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    report = Report(args.suite, args.seed, args.n_trunc)
    try:
        for name in names:
            _SUITES[name](report, args.seed, args.n_trunc)
    except TruncationError as exc:
        sys.stderr.write(f"truncation exhausted: {exc}\n")
        return EXIT_TRUNCATION
    sys.stdout.write(report.text())
    if args.out:
        serialize.dump(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_reduce(args):
    try:
        phi = serialize.lattice_map_from_json(serialize.load(args.file))
    except (FormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    code, result = _with_raised_N(phi, lattices.reduce_to_normal_form)
    if code != EXIT_OK:
        return code
    nf, eta, xi = result
    parts = [f"case={nf.case}", f"k={nf.k}", f"l={nf.l}"]
    if nf.lam is not None:
        parts.append(f"lambda={_scalar_str(nf.lam)}")
    sys.stdout.write(" ".join(parts) + "\n")
    if args.out:
        serialize.dump(serialize.normal_form_to_json(nf), args.out)
        base = args.out[:-5] if args.out.endswith(".json") else args.out
        serialize.dump(serialize.lattice_map_to_json(eta), base + ".eta.json")
        serialize.dump(serialize.lattice_map_to_json(xi), base + ".xi.json")
    return EXIT_OK


def _extend_map(phi, N):
    X = phi.X.map(lambda s: s.extend(N))
    return lattices.LatticeMap(phi.source, phi.target, X, N, check=False)


def _with_raised_N(phi, op):
    """Run op(phi), doubling the truncation when it is provably too small.

    Returns (exit code, result).  A guard-limited rational-iso verdict is
    retried with a larger N; a genuine non-isomorphism is a violation.
    """
    N = phi.N
    for _ in range(_MAX_RETRIES):
        verdict, info = lattices.rational_iso_check(phi)
        if verdict != "yes":
            if "guard" in str(info):
                N *= 2
                phi = _extend_map(phi, N)
                continue
            sys.stderr.write(f"not a certified rational isomorphism: {info}\n")
            return EXIT_VIOLATION, None
        try:
            return EXIT_OK, op(phi)
        except TruncationError:
            N *= 2
            phi = _extend_map(phi, N)
    sys.stderr.write(f"truncation exhausted at N = {N}\n")
    return EXIT_TRUNCATION, None


def cmd_inspect(args):
    try:
        M = serialize.repq_obj_from_json(serialize.load(args.file))
    except (FormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    a, b = repq.top(M)
    end_dim = len(repq.hom_basis(M, M))
    lines = [
        f"dimension vector: ({M.u}, {M.v})",
        "relations: ok",
        f"top: S^{a} + T^{b}",
        f"End dimension: {end_dim}",
        f"schurian: {repq.is_schurian(M)}",
        f"indecomposable: {repq.is_indecomposable(M)}",
        f"absolutely cyclic (simple top): {'yes' if a + b == 1 else 'no'}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_dual(args):
    try:
        M = serialize.repq_obj_from_json(serialize.load(args.file))
    except (FormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    D = repq.dual(M)
    doc = serialize.repq_obj_to_json(D)
    if args.out:
        serialize.dump(doc, args.out)
    else:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_iso(args):
    try:
        M = serialize.repq_obj_from_json(serialize.load(args.file))
        N = serialize.repq_obj_from_json(serialize.load(args.file2))
    except (FormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    verdict, detail = repq.is_isomorphic(M, N)
    sys.stdout.write(f"isomorphic: {'yes' if verdict else 'no'}\n")
    return EXIT_OK if verdict else EXIT_VIOLATION


def cmd_hom(args):
    try:
        M = serialize.repq_obj_from_json(serialize.load(args.file))
        N = serialize.repq_obj_from_json(serialize.load(args.file2))
    except (FormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    basis = repq.hom_basis(M, N)
    sys.stdout.write(f"hom dimension: {len(basis)}\n")
    return EXIT_OK


def cmd_coker(args):
    try:
        phi = serialize.lattice_map_from_json(serialize.load(args.file))
    except (FormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    code, M = _with_raised_N(phi, lattices.cokernel)
    if code != EXIT_OK:
        return code
    sys.stdout.write(f"dimension vector: ({M.u}, {M.v})\n")
    if args.out:
        serialize.dump(serialize.repq_obj_to_json(M), args.out)
    return EXIT_OK


def cmd_crossed(args):
    N = args.n_trunc
    report = Report("crossed", args.seed, N)
    O = algebra_lab.truncated_order("O", min(N, 4))
    sigma = algebra_lab.o_sigma_matrix(min(N, 4))
    errs = algebra_lab.check_involution(O, sigma)
    report.add("crossed.sigma-is-involution", not errs, "; ".join(errs))
    B = algebra_lab.crossed_product(O, sigma, check=False)
    report.add(
        "crossed.dimension-doubles", B.dim == 2 * O.dim, f"dim {B.dim}"
    )
    report.add(
        "crossed.galois-matrix-pattern",
        algebra_lab.verify_algebra_map(algebra_lab.gal_to_matrix_map()) == "ok",
    )
    for n in (2, 3):
        report.add(
            f"crossed.invariants-to-A.N{n}", algebra_lab.og_to_a_check(n) == "ok"
        )
    report.add(
        "crossed.idempotent-conjugacy",
        algebra_lab.idempotent_conjugacy_check(min(N, 4)) == "ok",
    )
    sys.stdout.write(report.text())
    if args.out:
        serialize.dump(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _add_common_flags(p, top_level):
    # flags are accepted both before and after the subcommand; the
    # subcommand copies use SUPPRESS so they never clobber values given
    # at the top level
    d = (lambda v: v) if top_level else (lambda v: argparse.SUPPRESS)
    p.add_argument(
        "--n-trunc",
        type=int,
        default=d(_default_n()),
        help="truncation order for series computations "
        "(default 8, or GELFAND_LAB_N)",
    )
    p.add_argument(
        "--seed", type=int, default=d(0), help="random seed (default 0)"
    )
    p.add_argument(
        "--field",
        choices=("Q", "sqrtD"),
        default=d("Q"),
        help="scalar field hint for reports (quadratic scalars are always "
        "accepted where the mathematics produces them)",
    )
    p.add_argument("--out", default=d(None), help="output file path (JSON)")


def build_parser():
    p = argparse.ArgumentParser(
        prog="gelfand-lab",
        description="Exact classification toolkit for representations of the "
        "real Gelfand order",
    )
    _add_common_flags(p, top_level=True)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help, positionals=()):
        sp = sub.add_parser(name, help=help)
        for pos in positionals:
            sp.add_argument(pos)
        _add_common_flags(sp, top_level=False)
        sp.set_defaults(func=func)
        return sp

    sp = add("verify", cmd_verify, "run a verification suite")
    sp.add_argument(
        "suite", choices=("schurian", "abscyclic", "algebra", "hc", "all")
    )
    add("reduce", cmd_reduce, "reduce a lattice map to normal form", ("file",))
    add("inspect", cmd_inspect, "report invariants of a quiver object", ("file",))
    add("dual", cmd_dual, "dualize a quiver object", ("file",))
    add("iso", cmd_iso, "decide isomorphism of two quiver objects",
        ("file", "file2"))
    add("hom", cmd_hom, "hom-space dimension between two objects",
        ("file", "file2"))
    add("coker", cmd_coker, "cokernel of a lattice map", ("file",))
    add("crossed", cmd_crossed, "crossed-product verification checks")

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TruncationError as exc:
        sys.stderr.write(f"truncation exhausted: {exc}\n")
        return EXIT_TRUNCATION


if __name__ == "__main__":
    sys.exit(main())
