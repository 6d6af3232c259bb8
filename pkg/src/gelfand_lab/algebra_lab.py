"""Finite-dimensional structure-constant algebras over exact scalars.

Provides the generic machinery (radical, center, quotients, corners, crossed
products with an involution, invariant subalgebras) and the concrete
truncated orders attached to the real Gelfand order: A/t^N, H/t^N, O/t^N, the
nine-dimensional algebra Lambda, and A mod t.  All claimed isomorphisms are
verified by explicit maps, never searched for.
"""

from __future__ import annotations

from gmpy2 import mpq

from .exact_core import Gaussian, Matrix, sparse_kernel

ASSOC_EXHAUSTIVE_LIMIT = 24
ASSOC_SAMPLES = 200


class FinDimAlgebra:
    """Associative unital algebra given by structure constants over Q.

    sc[i][j] is the expansion of (basis i)*(basis j): a dict {k: coeff} or a
    dense list.  The unit is a coordinate vector.
    """

    __slots__ = ("dim", "sc", "unit", "labels", "_ltrace")

    def __init__(self, dim, sc, unit, labels=None, check=True):
        self.dim = dim
        self.sc = [
            [_as_sparse(sc[i][j]) for j in range(dim)] for i in range(dim)
        ]
        self.unit = [mpq(u) if isinstance(u, int) else u for u in unit]
        self.labels = list(labels) if labels else [f"b{i}" for i in range(dim)]
        self._ltrace = None
        if check:
            errs = self.check_axioms()
            if errs:
                raise ValueError("algebra axioms fail: " + errs[0])

    # -- basic products ---------------------------------------------------

    def basis_product(self, i, j):
        return self.sc[i][j]

    def multiply(self, x, y):
        out = [mpq(0)] * self.dim
        for i, xi in enumerate(x):
            if not bool(xi):
                continue
            row = self.sc[i]
            for j, yj in enumerate(y):
                if not bool(yj):
                    continue
                c = xi * yj
                for k, v in row[j].items():
                    out[k] = out[k] + c * v
        return out

    def basis_vector(self, i):
        v = [mpq(0)] * self.dim
        v[i] = mpq(1)
        return v

    def left_mult_matrix(self, x):
        """Matrix of y -> x*y on the basis (columns are x * basis_j)."""
        cols = [self.multiply(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix([[cols[j][i] for j in range(self.dim)] for i in range(self.dim)])

    def left_trace(self, k):
        """Trace of left multiplication by basis element k (cached)."""
        if self._ltrace is None:
            self._ltrace = [
                sum((self.sc[i][j].get(j, mpq(0)) for j in range(self.dim)), mpq(0))
                for i in range(self.dim)
            ]
        return self._ltrace[k]

    # -- axioms ------------------------------------------------------------

    def check_axioms(self):
        errs = []
        for j in range(self.dim):
            ej = self.basis_vector(j)
            if self.multiply(self.unit, ej) != ej:
                errs.append(f"unit*b{j} != b{j}")
                break
            if self.multiply(ej, self.unit) != ej:
                errs.append(f"b{j}*unit != b{j}")
                break
        if self.dim <= ASSOC_EXHAUSTIVE_LIMIT:
            triples = (
                (i, j, k)
                for i in range(self.dim)
                for j in range(self.dim)
                for k in range(self.dim)
            )
        else:
            state = [self.dim * 1103515245 + 12345]

            def rnd():
                state[0] = (state[0] * 1103515245 + 12345) % (1 << 31)
                return state[0] % self.dim

            triples = ((rnd(), rnd(), rnd()) for _ in range(ASSOC_SAMPLES))
        for i, j, k in triples:
            lhs = self.multiply(
                _dense(self.sc[i][j], self.dim), self.basis_vector(k)
            )
            rhs = self.multiply(
                self.basis_vector(i), _dense(self.sc[j][k], self.dim)
            )
            if lhs != rhs:
                errs.append(f"(b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})")
                break
        return errs

    def __repr__(self):
        return f"FinDimAlgebra(dim={self.dim})"


def _as_sparse(entry):
    if isinstance(entry, dict):
        return {k: v for k, v in entry.items() if bool(v)}
    return {k: v for k, v in enumerate(entry) if bool(v)}


def _dense(d, n):
    out = [mpq(0)] * n
    for k, v in d.items():
        out[k] = v
    return out


# ---------------------------------------------------------------------------
# span bookkeeping


class SpanBasis:
    """Reduced-row-echelon basis of a subspace, with O(1) coordinates."""

    __slots__ = ("rows", "pivots", "n")

    def __init__(self, vectors, n):
        self.n = n
        self.rows = []
        self.pivots = []
        for v in vectors:
            self.add(v)

    def reduce(self, v):
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if bool(c):
                for k in range(self.n):
                    v[k] = v[k] - c * row[k]
        return v

    def add(self, v):
        """Insert v into the span; returns True if the dimension grew."""
        v = self.reduce(v)
        p = next((k for k in range(self.n) if bool(v[k])), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [x * inv for x in v]
        for row in self.rows:
            c = row[p]
            if bool(c):
                for k in range(self.n):
                    row[k] = row[k] - c * v[k]
        idx = next(
            (a for a, q in enumerate(self.pivots) if q > p), len(self.pivots)
        )
        self.rows.insert(idx, v)
        self.pivots.insert(idx, p)
        return True

    def contains(self, v):
        return not any(bool(x) for x in self.reduce(v))

    def coords(self, v, check=True):
        """Coordinates of v in this basis; None if v is outside the span."""
        c = [v[p] for p in self.pivots]
        if check:
            resid = list(v)
            for ci, row in zip(c, self.rows):
                if bool(ci):
                    for k in range(self.n):
                        resid[k] = resid[k] - ci * row[k]
            if any(bool(x) for x in resid):
                return None
        return c

    @property
    def dim(self):
        return len(self.rows)


# ---------------------------------------------------------------------------
# radical, center, quotients, subalgebras


def radical_basis(alg):
    """Basis of the Jacobson radical: kernel of the left-regular trace form.

    Valid in characteristic zero; the form G(i,j) = tr(L_{b_i b_j}) has the
    radical as its kernel.
    """
    n = alg.dim
    rows = []
    for j in range(n):
        row = {}
        for i in range(n):
            g = sum(
                (v * alg.left_trace(k) for k, v in alg.sc[i][j].items()), mpq(0)
            )
            if bool(g):
                row[i] = g
        rows.append(row)
    return sparse_kernel(rows, n)


def center_basis(alg):
    """Basis of the center: solutions of x*b_j = b_j*x for all j."""
    n = alg.dim
    rows = []
    for j in range(n):
        per_k = {}
        for i in range(n):
            for k, v in alg.sc[i][j].items():
                per_k.setdefault(k, {})[i] = per_k.setdefault(k, {}).get(i, mpq(0)) + v
            for k, v in alg.sc[j][i].items():
                per_k.setdefault(k, {})[i] = per_k.setdefault(k, {}).get(i, mpq(0)) - v
        for k, row in per_k.items():
            row = {i: c for i, c in row.items() if bool(c)}
            if row:
                rows.append(row)
    return sparse_kernel(rows, n)


def quotient_by_ideal(alg, ideal_vectors):
    """Quotient algebra A / I together with the projection map.

    Returns (quotient FinDimAlgebra, project function on coordinate vectors).
    """
    n = alg.dim
    span = SpanBasis(ideal_vectors, n)
    free = [k for k in range(n) if k not in span.pivots]
    pos = {k: a for a, k in enumerate(free)}

    def project(v):
        r = span.reduce(v)
        return [r[k] for k in free]

    m = len(free)
    sc = [
        [
            _as_sparse_from_pairs(
                project(alg.multiply(alg.basis_vector(free[a]), alg.basis_vector(free[b])))
            )
            for b in range(m)
        ]
        for a in range(m)
    ]
    unit = project(alg.unit)
    labels = [alg.labels[k] for k in free]
    q = FinDimAlgebra(m, sc, unit, labels=labels, check=True)
    return q, project


def _as_sparse_from_pairs(vec):
    return {k: v for k, v in enumerate(vec) if bool(v)}


def semisimple_quotient(alg):
    """(A/rad(A), projection)."""
    return quotient_by_ideal(alg, radical_basis(alg))


def subalgebra_on_span(alg, vectors, unit_vec):
    """Subalgebra on the span of the given vectors (must be closed).

    Returns (FinDimAlgebra, SpanBasis embedding).
    """
    span = SpanBasis(vectors, alg.dim)
    m = span.dim
    basis = [list(r) for r in span.rows]
    sc = []
    for a in range(m):
        row = []
        for b in range(m):
            prod = alg.multiply(basis[a], basis[b])
            c = span.coords(prod)
            if c is None:
                raise ValueError("span is not closed under multiplication")
            row.append(_as_sparse_from_pairs(c))
        sc.append(row)
    unit = span.coords(unit_vec)
    if unit is None:
        raise ValueError("designated unit lies outside the span")
    sub = FinDimAlgebra(m, sc, unit, check=True)
    return sub, span


def corner_algebra(alg, eps):
    """The corner eps*A*eps for an idempotent eps."""
    if alg.multiply(eps, eps) != list(eps):
        raise ValueError("corner element is not idempotent")
    vectors = [
        alg.multiply(eps, alg.multiply(alg.basis_vector(j), eps))
        for j in range(alg.dim)
    ]
    return subalgebra_on_span(alg, vectors, eps)


# ---------------------------------------------------------------------------
# involutions, crossed products, invariants


def _sparse_cols(sigma):
    n = sigma.rows
    return [
        {i: sigma.data[i][j] for i in range(n) if bool(sigma.data[i][j])}
        for j in range(n)
    ]


def _apply_sparse(cols, v, n):
    out = [mpq(0)] * n
    items = v.items() if isinstance(v, dict) else enumerate(v)
    for j, vj in items:
        if bool(vj):
            for i, c in cols[j].items():
                out[i] = out[i] + vj * c
    return out


def _mul_sparse(alg, a, b):
    """Product of two sparse (dict) vectors, returned dense."""
    out = [mpq(0)] * alg.dim
    for i, xi in a.items():
        row = alg.sc[i]
        for j, yj in b.items():
            c = xi * yj
            for k, v in row[j].items():
                out[k] = out[k] + c * v
    return out


def check_involution(alg, sigma):
    """Verify sigma (a dim x dim Matrix) is an algebra involution."""
    errs = []
    n = alg.dim
    if sigma * sigma != Matrix.identity(n):
        errs.append("sigma^2 != id")
    cols = _sparse_cols(sigma)
    if _apply_sparse(cols, alg.unit, n) != list(alg.unit):
        errs.append("sigma(1) != 1")
    sparse = [{k: v for k, v in col.items()} for col in cols]
    for i in range(n):
        for j in range(n):
            lhs = _apply_sparse(cols, alg.sc[i][j], n)
            rhs = _mul_sparse(alg, sparse[i], sparse[j])
            if lhs != rhs:
                errs.append(f"sigma not multiplicative at (b{i}, b{j})")
                return errs
    return errs


def crossed_product(alg, sigma, check=True):
    """The crossed product with the two-element group acting via sigma.

    Basis (b_i, g) for g in {0, 1}; product a[f]*b[g] = (a * sigma^f(b))[f+g].
    Index layout: (i, g) -> i + g*dim.
    """
    if check:
        errs = check_involution(alg, sigma)
        if errs:
            raise ValueError("not an involution: " + errs[0])
    n = alg.dim
    cols = [[sigma.data[i][j] for i in range(n)] for j in range(n)]
    sc = [[None] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        ei = alg.basis_vector(i)
        for j in range(n):
            plain = alg.sc[i][j]
            twisted = _as_sparse_from_pairs(alg.multiply(ei, cols[j]))
            for g in (0, 1):
                bj_img = plain if g == 0 else twisted
                for h in (0, 1):
                    out = {k + ((g + h) % 2) * n: v for k, v in bj_img.items()}
                    sc[i + g * n][j + h * n] = out
    unit = [mpq(0)] * (2 * n)
    for k, v in enumerate(alg.unit):
        unit[k] = v
    labels = [f"{l}[e]" for l in alg.labels] + [f"{l}[s]" for l in alg.labels]
    return FinDimAlgebra(2 * n, sc, unit, labels=labels, check=True)


def invariant_subalgebra(alg, sigma):
    """Fixed subalgebra of the involution; returns (algebra, embedding)."""
    n = alg.dim
    rows = []
    for i in range(n):
        row = {}
        for j in range(n):
            c = sigma.data[i][j] - (1 if i == j else 0)
            if bool(c):
                row[j] = mpq(c) if isinstance(c, int) else c
        rows.append(row)
    fixed = sparse_kernel(rows, n)
    return subalgebra_on_span(alg, fixed, list(alg.unit))


# ---------------------------------------------------------------------------
# the concrete orders


def _gi(re, im=0):
    return Gaussian(mpq(re), mpq(im))


def _e(i, j, scalar=1, complex_entries=False):
    """3x3 matrix with one nonzero entry (1-based indices)."""
    z = _gi(0) if complex_entries else mpq(0)
    rows = [[z] * 3 for _ in range(3)]
    rows[i - 1][j - 1] = _gi(scalar) if complex_entries else mpq(scalar)
    return Matrix(rows, 3, 3)


def _order_data(name):
    """(degrees, constant matrices, complex flag, unit indices).

    Each R-basis element of the order is t^degree * constant; the constants
    are linearly independent over the coefficient field.
    """
    if name == "A":
        consts = [
            _e(1, 1) + _e(2, 2),  # e
            _e(2, 1) - _e(1, 2),  # j
            _e(1, 1),  # t e11
            _e(1, 2),  # t e12
            _e(3, 1),  # x1
            _e(3, 2),  # x2
            _e(3, 3),  # f
            _e(1, 3),  # t e13 = y1
            _e(2, 3),  # t e23 = y2
        ]
        degs = [0, 0, 1, 1, 0, 0, 0, 1, 1]
        return degs, consts, False, {0: mpq(1), 6: mpq(1)}
    if name == "H":
        consts = [
            _e(1, 1), _e(1, 2), _e(2, 1), _e(2, 2),
            _e(3, 1), _e(3, 2), _e(3, 3),
            _e(1, 3), _e(2, 3),
        ]
        degs = [0, 0, 0, 0, 0, 0, 0, 1, 1]
        return degs, consts, False, {0: mpq(1), 3: mpq(1), 6: mpq(1)}
    if name == "O":
        g = lambda i, j: _e(i, j, complex_entries=True)
        consts = [
            g(1, 1), g(2, 2), g(3, 3), g(1, 3), g(2, 3),
            g(1, 2), g(2, 1), g(3, 1), g(3, 2),
        ]
        degs = [0, 0, 0, 0, 0, 1, 1, 1, 1]
        return degs, consts, True, {0: mpq(1), 1: mpq(1), 2: mpq(1)}
    if name == "Lambda":
        i = Gaussian(mpq(0), mpq(1))
        consts = [
            _e(1, 1, complex_entries=True) + _e(3, 3, complex_entries=True),
            (_e(3, 3, complex_entries=True) - _e(1, 1, complex_entries=True)).scale(i),
            _e(2, 1, complex_entries=True),
            _e(2, 1, complex_entries=True).scale(i),
            _e(3, 2, complex_entries=True),
            _e(3, 2, complex_entries=True).scale(i),
            _e(3, 1, complex_entries=True),
            _e(3, 1, complex_entries=True).scale(i),
            _e(2, 2, complex_entries=True),
        ]
        degs = [0] * 9
        return degs, consts, False, {0: mpq(1), 8: mpq(1)}
    raise ValueError(f"unknown order id: {name}")


def _vectorize(M, complex_entries):
    out = []
    for i in range(3):
        for j in range(3):
            x = M.data[i][j]
            if complex_entries or isinstance(x, Gaussian):
                g = x if isinstance(x, Gaussian) else Gaussian(mpq(x), mpq(0))
                out.extend((g.re, g.im))
            else:
                out.append(x)
    return out


O_LABELS = ["e-", "e+", "e*", "b-", "b+", "t e12", "t e21", "a-", "a+"]
A_LABELS = ["e", "j", "t e11", "t e12", "x1", "x2", "f", "y1", "y2"]


def truncated_order(name, N):
    """FinDimAlgebra for the order truncated at t^N (Lambda ignores N).

    Basis layout: index(r, m) = r*N + m for the m-th t-shift of the r-th
    generator; complex-coefficient orders double the generator list with the
    i-multiples (r and r+9).
    """
    if name == "A_mod_t":
        return truncated_order("A", 1)
    if name == "Lambda":
        N = 1
    if N < 1:
        raise ValueError("N must be at least 1")
    degs, consts, doubled, unit_map = _order_data(name)
    cplx = any(isinstance(M.data[0][0], Gaussian) for M in consts)
    if doubled:
        i = Gaussian(mpq(0), mpq(1))
        consts = consts + [M.scale(i) for M in consts]
        degs = degs + list(degs)
    nb = len(consts)
    D = Matrix(
        [
            [_vectorize(consts[r], cplx)[k] for r in range(nb)]
            for k in range(18 if cplx else 9)
        ]
    )
    table = []  # table[r][s] = list of (u, shift, coeff)
    for r in range(nb):
        for s in range(nb):
            prod = consts[r] * consts[s]
            vec = Matrix([[x] for x in _vectorize(prod, cplx)])
            sol = D.solve(vec)
            if sol is None:
                raise ArithmeticError(f"order {name} not closed at ({r},{s})")
            terms = []
            for u in range(nb):
                c = sol.data[u][0]
                if bool(c):
                    shift = degs[r] + degs[s] - degs[u]
                    if shift < 0:
                        raise ArithmeticError(
                            f"order {name}: negative t-shift at ({r},{s})"
                        )
                    terms.append((u, shift, c))
            table.append(terms)
    dim = nb * N
    sc = [[{} for _ in range(dim)] for _ in range(dim)]
    for r in range(nb):
        for s in range(nb):
            terms = table[r * nb + s]
            for m in range(N):
                for mp in range(N):
                    out = {}
                    for u, shift, c in terms:
                        mm = m + mp + shift
                        if mm < N:
                            out[u * N + mm] = out.get(u * N + mm, mpq(0)) + c
                    sc[r * N + m][s * N + mp] = out
    unit = [mpq(0)] * dim
    for r, c in unit_map.items():
        unit[r * N] = c
    base_labels = {"A": A_LABELS, "H": None, "O": O_LABELS, "Lambda": None}.get(name)
    labels = None
    if base_labels:
        full = base_labels + (["i*" + l for l in base_labels] if doubled else [])
        labels = [
            f"t^{m}*{full[r]}" if m else full[r]
            for r in range(nb)
            for m in range(N)
        ]
    return FinDimAlgebra(dim, sc, unit, labels=labels, check=True)


def o_sigma_matrix(N):
    """The involution on O/t^N: swap indices 1 <-> 2 and conjugate scalars."""
    perm = [1, 0, 2, 4, 3, 6, 5, 8, 7]  # index swap on the 9 generators
    dim = 18 * N
    rows = [[mpq(0)] * dim for _ in range(dim)]
    for r in range(9):
        for m in range(N):
            rows[perm[r] * N + m][r * N + m] = mpq(1)  # real part: straight swap
            rows[(perm[r] + 9) * N + m][(r + 9) * N + m] = mpq(-1)  # i-part: conjugate
    return Matrix(rows, dim, dim)


# ---------------------------------------------------------------------------
# algebra maps


class AlgebraMap:
    """Linear map between structure-constant algebras, as a matrix on bases."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix):
        if (matrix.rows, matrix.cols) != (target.dim, source.dim):
            raise ValueError("map matrix has wrong shape")
        self.source, self.target, self.matrix = source, target, matrix

    def apply(self, v):
        out = [mpq(0)] * self.target.dim
        for j, vj in enumerate(v):
            if bool(vj):
                for i in range(self.target.dim):
                    c = self.matrix.data[i][j]
                    if bool(c):
                        out[i] = out[i] + vj * c
        return out


def verify_algebra_map(f):
    """'ok' or a violation message: unit, multiplicativity, bijectivity."""
    src, tgt = f.source, f.target
    if f.apply(src.unit) != list(tgt.unit):
        return "violation: unit not preserved"
    images = [f.apply(src.basis_vector(j)) for j in range(src.dim)]
    for i in range(src.dim):
        for j in range(src.dim):
            lhs = f.apply(_dense(src.sc[i][j], src.dim))
            rhs = tgt.multiply(images[i], images[j])
            if lhs != rhs:
                return (
                    f"violation: f(b{i}*b{j}) != f(b{i})*f(b{j})"
                    f" ({src.labels[i]} * {src.labels[j]})"
                )
    if src.dim != tgt.dim or f.matrix.rank() != src.dim:
        return "violation: not bijective"
    return "ok"


def multiplicative_map_from_generators(src, tgt, pairs):
    """Extend generator pairs (src vector, tgt vector) to a linear map.

    Words in the generators are accumulated until they span the source; the
    resulting linear map is returned (multiplicativity is NOT assumed —
    callers must run verify_algebra_map, which also certifies that the word
    assignment was well defined).
    """
    span = SpanBasis([], src.dim)
    chosen = []  # (src vector, tgt vector)

    def try_add(sv, tv):
        if span.add(sv):
            chosen.append((sv, tv))
            return True
        return False

    try_add(list(src.unit), list(tgt.unit))
    frontier = [(list(s), list(t)) for s, t in pairs]
    for s, t in frontier:
        try_add(s, t)
    while span.dim < src.dim and frontier:
        new_frontier = []
        for gs, gt in pairs:
            for ws, wt in frontier:
                ps, pt = src.multiply(gs, ws), tgt.multiply(gt, wt)
                if try_add(ps, pt):
                    new_frontier.append((ps, pt))
                ps, pt = src.multiply(ws, gs), tgt.multiply(wt, gt)
                if try_add(ps, pt):
                    new_frontier.append((ps, pt))
        frontier = new_frontier
    if span.dim < src.dim:
        raise ArithmeticError(
            f"generators span only {span.dim} of {src.dim} dimensions"
        )
    # solve for the matrix: F * S = T with S columns the chosen source vectors
    S = Matrix([[c[0][i] for c in chosen] for i in range(src.dim)])
    T = Matrix([[c[1][i] for c in chosen] for i in range(tgt.dim)])
    Sinv = S.inverse()
    return AlgebraMap(src, tgt, T * Sinv)


# ---------------------------------------------------------------------------
# the paper-level verification routines (named by what they verify)


def lambda_to_a_mod_t_map():
    """The explicit isomorphism from Lambda onto A mod t.

    Basis bookkeeping: Lambda = [alpha_re, alpha_im, beta_re, beta_im,
    gamma_re, gamma_im, delta_re, delta_im, rho]; the images are, in order,
    e, j, t*e13, t*e23, e31, e32, e33 slots of the A-basis.
    """
    lam = truncated_order("Lambda", 1)
    a1 = truncated_order("A_mod_t", 1)
    # alpha -> diagonal rotation block, beta -> bottom row, gamma -> t-column,
    # delta -> t-part of the first column (t*e21 = t*e12 mod t*A)
    images = [0, 1, 4, 5, 7, 8, 2, 3, 6]  # Lambda basis r -> A basis index
    rows = [[mpq(0)] * 9 for _ in range(9)]
    for r, img in enumerate(images):
        rows[img][r] = mpq(1)
    return AlgebraMap(lam, a1, Matrix(rows, 9, 9))


def gal_to_matrix_map():
    """The crossed product of C (2-dim over Q) by conjugation, onto 2x2 matrices."""
    # C as a 2-dim algebra: basis {1, i}
    sc = [
        [{0: mpq(1)}, {1: mpq(1)}],
        [{1: mpq(1)}, {0: mpq(-1)}],
    ]
    Calg = FinDimAlgebra(2, sc, [mpq(1), mpq(0)], labels=["1", "i"])
    sigma = Matrix.from_int_rows([[1, 0], [0, -1]], 2, 2)
    B = crossed_product(Calg, sigma)
    # target: full 2x2 matrix algebra, basis E11, E12, E21, E22
    m2 = _matrix_pattern_algebra(2)
    # 1[e] -> I, i[e] -> rotation, 1[s] -> diag(1,-1), i[s] -> antidiag(−1? ...)
    images = {
        0: [1, 0, 0, 1],  # 1[e]
        1: [0, -1, 1, 0],  # i[e]
        2: [1, 0, 0, -1],  # 1[s]
        3: [0, 1, 1, 0],  # i[s] = i[e]*1[s]
    }
    rows = [[mpq(images[j][i]) for j in range(4)] for i in range(4)]
    return AlgebraMap(B, m2, Matrix(rows, 4, 4))


def _matrix_pattern_algebra(n):
    dim = n * n
    sc = [[{} for _ in range(dim)] for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j == k:
                        sc[i * n + j][k * n + l] = {i * n + l: mpq(1)}
    unit = [mpq(1) if i % (n + 1) == 0 else mpq(0) for i in range(dim)]
    labels = [f"E{i+1}{j+1}" for i in range(n) for j in range(n)]
    return FinDimAlgebra(dim, sc, unit, labels=labels)


def _o_vector(N, terms):
    """Vector in O/t^N coordinates from (generator index r, shift m, re, im)."""
    v = [mpq(0)] * (18 * N)
    for r, m, re, im in terms:
        if m < N:
            v[r * N + m] += mpq(re)
            v[(r + 9) * N + m] += mpq(im)
    return v


def _a_vector(N, terms):
    v = [mpq(0)] * (9 * N)
    for r, m, c in terms:
        if m < N:
            v[r * N + m] += mpq(c)
    return v


def og_to_a_map(N):
    """The isomorphism from the invariants of the involution on O/t^N onto A/t^N.

    Built by extending the generator assignment (e, j, f, x, x*j, y, -j*y map
    to the corresponding generators of A) over words; returns
    (AlgebraMap, invariants algebra, embedding SpanBasis).
    """
    ON = truncated_order("O", N)
    sigma = o_sigma_matrix(N)
    OG, emb = invariant_subalgebra(ON, sigma)
    # invariant generators in O coordinates (generator indices per O_LABELS)
    e_o = _o_vector(N, [(0, 0, 1, 0), (1, 0, 1, 0)])  # e- + e+
    j_o = _o_vector(N, [(1, 0, 0, 1), (0, 0, 0, -1)])  # i(e+ - e-)
    f_o = _o_vector(N, [(2, 0, 1, 0)])  # e*
    x_o = _o_vector(N, [(7, 0, 1, 0), (8, 0, 1, 0)])  # a- + a+ (valuation 1)
    y_o = _o_vector(N, [(3, 0, 1, 0), (4, 0, 1, 0)])  # b- + b+
    gens_o = {
        "e": emb.coords(e_o),
        "j": emb.coords(j_o),
        "f": emb.coords(f_o),
        "x": emb.coords(x_o),
        "y": emb.coords(y_o),
    }
    if any(v is None for v in gens_o.values()):
        raise ArithmeticError("an expected invariant is not fixed by the involution")
    gens_o["xj"] = OG.multiply(gens_o["x"], gens_o["j"])
    gens_o["mjy"] = [-c for c in OG.multiply(gens_o["j"], gens_o["y"])]
    AN = truncated_order("A", N)
    gens_a = {
        "e": _a_vector(N, [(0, 0, 1)]),
        "j": _a_vector(N, [(1, 0, -1)]),  # image of i(e+ - e-) is e12 - e21
        "f": _a_vector(N, [(6, 0, 1)]),
        "x": _a_vector(N, [(4, 0, 1)]),  # x1
        "xj": _a_vector(N, [(5, 0, 1)]),  # x2
        "y": _a_vector(N, [(7, 0, 1)]),  # y1
        "mjy": _a_vector(N, [(8, 0, 1)]),  # y2
    }
    pairs = [(gens_o[k], gens_a[k]) for k in ("e", "j", "f", "x", "xj", "y", "mjy")]
    return multiplicative_map_from_generators(OG, AN, pairs), OG, emb


def og_to_a_check(N):
    """'ok' or a violation message for the invariants-to-A isomorphism."""
    f, _, _ = og_to_a_map(N)
    return verify_algebra_map(f)


def idempotent_conjugacy_check(N):
    """Verify the idempotent pair inside the crossed product of O/t^N.

    Checks: e*^{+-} = (eps* +- i eps* [s])/2 are orthogonal idempotents
    summing to eps*, and [s] conjugates one into the other.  Also confirms
    the corner on e*^+ + e_+ has the dimension of A/t^N.  Returns 'ok' or a
    message.
    """
    ON = truncated_order("O", N)
    sigma = o_sigma_matrix(N)
    B = crossed_product(ON, sigma)
    n = ON.dim

    def lift(v, g):
        out = [mpq(0)] * (2 * n)
        for k, c in enumerate(v):
            out[k + g * n] = c
        return out

    eps_star = _o_vector(N, [(2, 0, 1, 0)])
    i_eps_star = _o_vector(N, [(2, 0, 0, 1)])
    half = mpq(1, 2)
    e_plus_idem = [
        a * half + b * half for a, b in zip(lift(eps_star, 0), lift(i_eps_star, 1))
    ]
    e_minus_idem = [
        a * half - b * half for a, b in zip(lift(eps_star, 0), lift(i_eps_star, 1))
    ]
    checks = [
        (B.multiply(e_plus_idem, e_plus_idem) == e_plus_idem, "e*+ idempotent"),
        (B.multiply(e_minus_idem, e_minus_idem) == e_minus_idem, "e*- idempotent"),
        (
            not any(bool(c) for c in B.multiply(e_plus_idem, e_minus_idem)),
            "e*+ . e*- = 0",
        ),
        (
            not any(bool(c) for c in B.multiply(e_minus_idem, e_plus_idem)),
            "e*- . e*+ = 0",
        ),
        (
            [a + b for a, b in zip(e_plus_idem, e_minus_idem)] == lift(eps_star, 0),
            "e*+ + e*- = eps*",
        ),
    ]
    s_elt = lift(list(ON.unit), 1)
    lhs = B.multiply(s_elt, e_plus_idem)
    rhs = B.multiply(e_minus_idem, s_elt)
    checks.append((lhs == rhs, "[s] e*+ = e*- [s]"))
    lhs = B.multiply(s_elt, e_minus_idem)
    rhs = B.multiply(e_plus_idem, s_elt)
    checks.append((lhs == rhs, "[s] e*- = e*+ [s]"))
    for ok, label in checks:
        if not ok:
            return f"violation: {label}"
    # corner dimension must match A/t^N
    e_plus_slot = lift(_o_vector(N, [(1, 0, 1, 0)]), 0)
    eps = [a + b for a, b in zip(e_plus_idem, e_plus_slot)]
    corner, _ = corner_algebra(B, eps)
    if corner.dim != 9 * N:
        return f"violation: corner dimension {corner.dim} != {9 * N}"
    return "ok"


def complexified_a(N):
    """The scalar extension of A/t^N by i, as a Q-algebra of twice the dimension.

    Basis layout: (A-basis k, 0) = k and (A-basis k, 1) = k + dim for the
    i-multiples.
    """
    A = truncated_order("A", N)
    n = A.dim
    sc = [[None] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            base = A.sc[i][j]
            for g in (0, 1):
                for h in (0, 1):
                    sign = -1 if (g and h) else 1
                    slot = (g + h) % 2
                    sc[i + g * n][j + h * n] = {
                        k + slot * n: (v if sign > 0 else -v)
                        for k, v in base.items()
                    }
    unit = list(A.unit) + [mpq(0)] * n
    labels = A.labels + ["i*" + l for l in A.labels]
    return FinDimAlgebra(2 * n, sc, unit, labels=labels, check=True), A


def complexification_check(N):
    """Verify that extending scalars of A/t^N by i gives exactly O/t^N."""
    CA, A = complexified_a(N)
    ON = truncated_order("O", N)
    n = A.dim

    def ca(terms_re, terms_im=()):
        v = _a_vector(N, list(terms_re)) + [mpq(0)] * n
        for r, m, c in terms_im:
            v[n + r * N + m] += mpq(c)
        return v

    pairs = [
        (ca([(4, 0, 1)]), _o_vector(N, [(7, 0, 1, 0), (8, 0, 1, 0)])),  # x1 -> a-+a+
        (
            ca([(5, 0, 1)]),
            _o_vector(N, [(8, 0, 0, 1), (7, 0, 0, -1)]),  # x2 -> x*j image
        ),
        (ca([(7, 0, 1)]), _o_vector(N, [(3, 0, 1, 0), (4, 0, 1, 0)])),  # y1 -> b-+b+
        (
            ca([(8, 0, 1)]),
            _o_vector(N, [(3, 0, 0, 1), (4, 0, 0, -1)]),  # y2 -> -j*y image
        ),
        (ca([(0, 0, 1)]), _o_vector(N, [(0, 0, 1, 0), (1, 0, 1, 0)])),  # e
        (
            ca([(1, 0, 1)]),
            _o_vector(N, [(1, 0, 0, -1), (0, 0, 0, 1)]),  # j -> i(e- - e+)
        ),
        (ca([(6, 0, 1)]), _o_vector(N, [(2, 0, 1, 0)])),  # f -> e*
        (
            ca([], [(0, 0, 1), (6, 0, 1)]),
            _o_vector(N, [(0, 0, 0, 1), (1, 0, 0, 1), (2, 0, 0, 1)]),  # i*1 -> i*1
        ),
    ]
    f = multiplicative_map_from_generators(CA, ON, pairs)
    return verify_algebra_map(f)
