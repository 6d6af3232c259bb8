"""Objects and morphisms of the linear-algebra category attached to the real
Gelfand order: validation, Hom/End computation, Schurian and indecomposability
tests, isomorphism testing, duality, module realization, and tops.

An object is a quadruple of matrices
    X1, X2 : U -> V   (shape v x u)   and   Y1, Y2 : V -> U   (shape u x v)
subject to  X1 Y1 = X2 Y2 nilpotent  and  X1 Y2 = 0 = X2 Y1.
A morphism (S, T1, T2) consists of S : V -> V' and the complex-linear map
T = (T1 -T2; T2 T1) on U + U, intertwining the structure maps.
"""

from __future__ import annotations

from gmpy2 import mpq

from .exact_core import Matrix, sparse_kernel, solve_linear


class RepQObj:
    """An object of the quiver-presentation category; immutable after init."""

    __slots__ = ("u", "v", "X1", "X2", "Y1", "Y2")

    def __init__(self, u, v, X1, X2, Y1, Y2, check=True):
        self.u, self.v = u, v
        self.X1, self.X2, self.Y1, self.Y2 = X1, X2, Y1, Y2
        for X in (X1, X2):
            if (X.rows, X.cols) != (v, u):
                raise ValueError("X maps must have shape v x u")
        for Y in (Y1, Y2):
            if (Y.rows, Y.cols) != (u, v):
                raise ValueError("Y maps must have shape u x v")
        if check:
            errs = validate(self)
            if errs:
                raise ValueError("defining relations fail: " + "; ".join(errs))

    @staticmethod
    def from_int(u, v, X1, X2, Y1, Y2, check=True):
        f = Matrix.from_int_rows
        return RepQObj(
            u, v, f(X1, v, u), f(X2, v, u), f(Y1, u, v), f(Y2, u, v), check=check
        )

    def dimension_vector(self):
        return (self.u, self.v)

    def __eq__(self, other):
        if not isinstance(other, RepQObj):
            return NotImplemented
        return (
            (self.u, self.v) == (other.u, other.v)
            and self.X1 == other.X1
            and self.X2 == other.X2
            and self.Y1 == other.Y1
            and self.Y2 == other.Y2
        )

    def __hash__(self):
        return hash((self.u, self.v, self.X1, self.X2, self.Y1, self.Y2))

    def __repr__(self):
        return f"RepQObj(u={self.u}, v={self.v})"


class RepQMor:
    """A morphism (S, T1, T2): source -> target."""

    __slots__ = ("source", "target", "S", "T1", "T2")

    def __init__(self, source, target, S, T1, T2, check=True):
        self.source, self.target = source, target
        self.S, self.T1, self.T2 = S, T1, T2
        if (S.rows, S.cols) != (target.v, source.v):
            raise ValueError("S must have shape v' x v")
        if (T1.rows, T1.cols) != (target.u, source.u) or (
            T2.rows,
            T2.cols,
        ) != (target.u, source.u):
            raise ValueError("T blocks must have shape u' x u")
        if check and not self.is_valid():
            raise ValueError("morphism does not intertwine the structure maps")

    def is_valid(self):
        M, N = self.source, self.target
        S, T1, T2 = self.S, self.T1, self.T2
        return (
            T1 * M.Y1 - T2 * M.Y2 == N.Y1 * S
            and T2 * M.Y1 + T1 * M.Y2 == N.Y2 * S
            and S * M.X1 == N.X1 * T1 - N.X2 * T2
            and S * M.X2 == N.X1 * T2 + N.X2 * T1
        )

    def compose(self, other):
        """self o other (apply other first)."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        return RepQMor(
            other.source,
            self.target,
            self.S * other.S,
            self.T1 * other.T1 - self.T2 * other.T2,
            self.T2 * other.T1 + self.T1 * other.T2,
            check=False,
        )

    def flatten(self):
        """All entries as one coordinate list (S, then T1, then T2)."""
        return self.S.entries() + self.T1.entries() + self.T2.entries()

    def is_invertible(self):
        if self.source.dimension_vector() != self.target.dimension_vector():
            return False
        T = self.T1.hstack(-self.T2).vstack(self.T2.hstack(self.T1))
        try:
            self.S.inverse()
            T.inverse()
        except ValueError:
            return False
        return True

    def scale(self, s):
        return RepQMor(
            self.source,
            self.target,
            self.S.scale(s),
            self.T1.scale(s),
            self.T2.scale(s),
            check=False,
        )

    def __add__(self, other):
        return RepQMor(
            self.source,
            self.target,
            self.S + other.S,
            self.T1 + other.T1,
            self.T2 + other.T2,
            check=False,
        )

    def __repr__(self):
        return f"RepQMor({self.source!r} -> {self.target!r})"


def identity_morphism(M):
    return RepQMor(
        M,
        M,
        Matrix.identity(M.v),
        Matrix.identity(M.u),
        Matrix.zero(M.u, M.u),
        check=False,
    )


def validate(M):
    """Return a list of violation messages (empty means the object is valid).

    The defining relations are X1*Y2 + X2*Y1 = 0 and X1*Y1 - X2*Y2 nilpotent.
    They characterize the quadruples whose realization is an honest module
    over the order: the first is the single composite relation imposed by
    the generators (x1*y2 = 0 after decomposing along the complex structure)
    and the second is the nilpotency of the central series parameter on the
    f-part.  Stronger conditions (the two products vanishing separately and
    the two diagonal composites agreeing) would exclude modules such as the
    cokernel of multiplication by t^2, whose classification dimension vector
    is (2,2): no real splitting of its e-part satisfies them, as a dimension
    count of the relevant kernels shows.  The signs here are the ones for
    which the intertwiner equations of RepQMor correspond exactly to module
    maps of the realizations.
    """
    errs = []
    A = M.X1 * M.Y2 + M.X2 * M.Y1
    if not A.is_zero():
        for i in range(M.v):
            for j in range(M.v):
                if bool(A.data[i][j]):
                    errs.append(f"X1*Y2 + X2*Y1 != 0 at entry ({i},{j})")
                    break
            else:
                continue
            break
    T = M.X1 * M.Y1 - M.X2 * M.Y2
    if not T.is_nilpotent():
        errs.append("X1*Y1 - X2*Y2 is not nilpotent")
    return errs


# ---------------------------------------------------------------------------
# Hom spaces


def _hom_system(M, N):
    """Sparse rows of the intertwiner system in unknowns (S, T1, T2).

    Unknown layout: S (v' x v) row-major, then T1 (u' x u), then T2 (u' x u).
    """
    u, v, u2, v2 = M.u, M.v, N.u, N.v
    nS, nT = v2 * v, u2 * u
    offT1, offT2 = nS, nS + nT

    def S_idx(i, j):
        return i * v + j

    def T1_idx(i, j):
        return offT1 + i * u + j

    def T2_idx(i, j):
        return offT2 + i * u + j

    rows = []

    def add(entries):
        row = {}
        for idx, coeff in entries:
            if bool(coeff):
                row[idx] = row.get(idx, mpq(0)) + coeff
        rows.append(row)

    # (1)  T1 Y1 - T2 Y2 - Y1' S = 0      (u' x v)
    # (2)  T2 Y1 + T1 Y2 - Y2' S = 0      (u' x v)
    for i in range(u2):
        for j in range(v):
            e1, e2 = [], []
            for k in range(u):
                e1.append((T1_idx(i, k), M.Y1.data[k][j]))
                e1.append((T2_idx(i, k), -M.Y2.data[k][j]))
                e2.append((T2_idx(i, k), M.Y1.data[k][j]))
                e2.append((T1_idx(i, k), M.Y2.data[k][j]))
            for k in range(v2):
                e1.append((S_idx(k, j), -N.Y1.data[i][k]))
                e2.append((S_idx(k, j), -N.Y2.data[i][k]))
            add(e1)
            add(e2)
    # (3)  S X1 - X1' T1 + X2' T2 = 0     (v' x u)
    # (4)  S X2 - X1' T2 - X2' T1 = 0     (v' x u)
    for i in range(v2):
        for j in range(u):
            e3, e4 = [], []
            for k in range(v):
                e3.append((S_idx(i, k), M.X1.data[k][j]))
                e4.append((S_idx(i, k), M.X2.data[k][j]))
            for k in range(u2):
                e3.append((T1_idx(k, j), -N.X1.data[i][k]))
                e3.append((T2_idx(k, j), N.X2.data[i][k]))
                e4.append((T2_idx(k, j), -N.X1.data[i][k]))
                e4.append((T1_idx(k, j), -N.X2.data[i][k]))
            add(e3)
            add(e4)
    return rows, nS + 2 * nT


def _vector_to_mor(M, N, vec):
    u, v, u2, v2 = M.u, M.v, N.u, N.v
    nS, nT = v2 * v, u2 * u
    S = Matrix([[vec[i * v + j] for j in range(v)] for i in range(v2)], v2, v)
    T1 = Matrix(
        [[vec[nS + i * u + j] for j in range(u)] for i in range(u2)], u2, u
    )
    T2 = Matrix(
        [[vec[nS + nT + i * u + j] for j in range(u)] for i in range(u2)], u2, u
    )
    return RepQMor(M, N, S, T1, T2, check=False)


def hom_basis(M, N):
    """Exact basis of Hom(M, N) as a list of morphisms."""
    rows, ncols = _hom_system(M, N)
    return [_vector_to_mor(M, N, vec) for vec in sparse_kernel(rows, ncols)]


def coordinates_in_hom(M, N, mor, basis=None):
    """Coordinates of mor in the given (or freshly computed) hom basis."""
    if basis is None:
        basis = hom_basis(M, N)
    if not basis:
        return None if any(bool(x) for x in mor.flatten()) else []
    A = Matrix([[b.flatten()[i] for b in basis] for i in range(len(mor.flatten()))])
    b = Matrix([[x] for x in mor.flatten()])
    x = A.solve(b)
    return None if x is None else [x.data[i][0] for i in range(len(basis))]


def end_algebra(M, basis=None):
    """End(M) as a structure-constant algebra on a hom basis.

    Returns (FinDimAlgebra, basis morphisms).
    """
    from .algebra_lab import FinDimAlgebra

    if basis is None:
        basis = hom_basis(M, M)
    n = len(basis)
    flat = [b.flatten() for b in basis]
    coord_matrix = Matrix([[flat[k][i] for k in range(n)] for i in range(len(flat[0]))]) if n else None
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            comp = basis[i].compose(basis[j])
            b = Matrix([[x] for x in comp.flatten()])
            x = coord_matrix.solve(b)
            if x is None:
                raise ArithmeticError("hom basis is not closed under composition")
            row.append([x.data[k][0] for k in range(n)])
        table.append(row)
    unit = coordinates_in_hom(M, M, identity_morphism(M), basis)
    if unit is None:
        raise ArithmeticError("identity not in End(M)")
    labels = [f"f{i}" for i in range(n)]
    return FinDimAlgebra(n, table, unit, labels=labels), basis


# ---------------------------------------------------------------------------
# direct sums, duality, realization


def direct_sum(M, N):
    bd = Matrix.block_diag
    return RepQObj(
        M.u + N.u,
        M.v + N.v,
        bd([M.X1, N.X1]),
        bd([M.X2, N.X2]),
        bd([M.Y1, N.Y1]),
        bd([M.Y2, N.Y2]),
        check=False,
    )


def dual(M):
    """The contravariant duality: transpose all four maps and swap X/Y roles."""
    return RepQObj(
        M.u,
        M.v,
        M.Y1.transpose(),
        M.Y2.transpose(),
        M.X1.transpose(),
        M.X2.transpose(),
        check=False,
    )


def dual_mor(f):
    """dual is contravariant: dual_mor(f): dual(target) -> dual(source)."""
    return RepQMor(
        dual(f.target),
        dual(f.source),
        f.S.transpose(),
        f.T1.transpose(),
        f.T2.transpose(),
        check=False,
    )


GENERATOR_NAMES = ("x1", "x2", "y1", "y2", "e", "j", "f")


def realize_as_module(M):
    """Action matrices of the seven algebra generators on U + U + V.

    Returns a dict name -> Matrix of size (2u+v) x (2u+v); all generator
    relations are verified.
    """
    u, v = M.u, M.v
    n = 2 * u + v
    z = Matrix.zero

    def block(r, c, B):
        out = z(n, n)
        offs = [0, u, 2 * u]
        for i in range(B.rows):
            for j in range(B.cols):
                out.data[offs[r] + i][offs[c] + j] = B.data[i][j]
        return out

    I_u = Matrix.identity(u)
    I_v = Matrix.identity(v)
    # The arrows (Y1;Y2): V -> U+U and (X1 X2): U+U -> V fix the actions of
    # y1 and x1; the identities j*y1 = y2 and x2*j = x1 in the algebra then
    # determine y2 and x2 (a single-block assignment cannot satisfy them).
    act = {
        "x1": block(2, 0, M.X1) - block(2, 1, M.X2),
        "x2": block(2, 0, M.X2) + block(2, 1, M.X1),
        "y1": block(0, 2, M.Y1) + block(1, 2, M.Y2),
        "y2": block(1, 2, M.Y1) - block(0, 2, M.Y2),
        "e": block(0, 0, I_u) + block(1, 1, I_u),
        "j": block(1, 0, I_u) - block(0, 1, I_u),
        "f": block(2, 2, I_v),
    }
    _check_realization(act, n)
    return act


def _check_realization(act, n):
    x1, x2, y1, y2, e, j, f = (act[g] for g in GENERATOR_NAMES)
    I = Matrix.identity(n)
    t = y1 * x1 + y2 * x2 + x1 * y1  # t*e11 + t*e22 + t*e33
    checks = [
        (x1 * y1 == x2 * y2, "x1*y1 == x2*y2"),
        ((x1 * y2).is_zero(), "x1*y2 == 0"),
        ((x2 * y1).is_zero(), "x2*y1 == 0"),
        (j * j == -e, "j^2 == -e"),
        (e + f == I, "e + f == 1"),
        (e * j == j and j * e == j, "e*j == j == j*e"),
        (j * y1 == y2, "j*y1 == y2"),
        (j * y2 == -y1, "j*y2 == -y1"),
        (x1 * j == -x2, "x1*j == -x2"),
        (x2 * j == x1, "x2*j == x1"),
        (f * x1 == x1 and x1 * e == x1, "f*x1*e == x1"),
        (f * x2 == x2 and x2 * e == x2, "f*x2*e == x2"),
        (e * y1 == y1 and y1 * f == y1, "e*y1*f == y1"),
        (e * y2 == y2 and y2 * f == y2, "e*y2*f == y2"),
        ((e * x1).is_zero() and (x1 * f).is_zero(), "e*x1 == 0 == x1*f"),
        ((f * y1).is_zero() and (y1 * e).is_zero(), "f*y1 == 0 == y1*e"),
        (t.is_nilpotent(), "t nilpotent"),
        (all(t * act[g] == act[g] * t for g in GENERATOR_NAMES), "t central"),
    ]
    for ok, label in checks:
        if not ok:
            raise ArithmeticError(f"realization relation failed: {label}")


# ---------------------------------------------------------------------------
# top


def _column_space_basis(vectors, n):
    """RREF-reduced basis of the span of the given length-n column lists."""
    if not vectors:
        return []
    R, pivots = Matrix(vectors).rref()
    return [list(R.data[i]) for i in range(len(pivots))]


def top(M):
    """Multiplicities (a, b) with top(M) = S^a + T^b.

    The radical of the algebra acts through the generators x1, x2, y1, y2;
    the top splits along the idempotents e and f.
    """
    act = realize_as_module(M)
    n = 2 * M.u + M.v
    # radical * M: span of x_i M + y_i M, saturated under all generators
    gens = [act[g] for g in GENERATOR_NAMES]
    seed = []
    for g in ("x1", "x2", "y1", "y2"):
        seed.extend(act[g].transpose().data)  # columns of g as row vectors
    basis = _column_space_basis(seed, n)
    changed = True
    while changed:
        changed = False
        current = list(basis)
        for g in gens:
            for w in current:
                gw = [
                    sum((g.data[i][k] * w[k] for k in range(n)), mpq(0))
                    for i in range(n)
                ]
                new_basis = _column_space_basis(basis + [gw], n)
                if len(new_basis) > len(basis):
                    basis = new_basis
                    changed = True
    # split J*M along e and f
    e, f = act["e"], act["f"]
    eW = _column_space_basis(
        [[sum((e.data[i][k] * w[k] for k in range(n)), mpq(0)) for i in range(n)] for w in basis],
        n,
    )
    fW = _column_space_basis(
        [[sum((f.data[i][k] * w[k] for k in range(n)), mpq(0)) for i in range(n)] for w in basis],
        n,
    )
    dim_e, dim_f = len(eW), len(fW)
    if dim_e % 2:
        raise ArithmeticError("e-part of the radical submodule has odd dimension")
    return ((2 * M.u - dim_e) // 2, M.v - dim_f)


# ---------------------------------------------------------------------------
# quadruple extraction from an abstract module


def _mat_cols(m):
    return [[m.data[i][j] for i in range(m.rows)] for j in range(m.cols)]


def _apply_mat(m, v):
    return [
        sum((m.data[i][k] * v[k] for k in range(m.cols) if bool(v[k])), mpq(0))
        for i in range(m.rows)
    ]


def _complex_extend(span, candidates, jm):
    """Greedily grow a j-stable span by pairs (v, jv); return chosen vectors."""
    chosen = []
    for v in candidates:
        if span.contains(v):
            continue
        span.add(v)
        span.add(_apply_mat(jm, v))
        chosen.append(list(v))
    return chosen


def module_to_quadruple(act, n):
    """Recover a defining quadruple from verified generator actions on Q^n.

    Returns (M, basis) with M a RepQObj and basis the list of column vectors
    identifying Q^n with U + U + V (U-part, its j-image, then the V-part).

    Any real form U of the e-part works: the defining relations of a valid
    quadruple are exactly the images of the algebra relations under the
    decomposition eW = U + jU, independent of the choice of U.
    """
    from .algebra_lab import SpanBasis

    e, f, j, x, y = act["e"], act["f"], act["j"], act["x1"], act["y1"]
    e_basis = _column_space_basis(_mat_cols(e), n)
    f_basis = _column_space_basis(_mat_cols(f), n)
    span = SpanBasis([], n)
    u_vectors = _complex_extend(span, e_basis, j)
    ju = [_apply_mat(j, v) for v in u_vectors]
    cols = u_vectors + ju + f_basis
    ud, vd = len(u_vectors), len(f_basis)
    if 2 * ud + vd != n:
        raise ArithmeticError("splitting does not decompose the module")
    P = Matrix([[cols[c][i] for c in range(n)] for i in range(n)])
    Pinv = P.inverse()
    ax = Pinv * x * P
    ay = Pinv * y * P
    X1 = Matrix([row[:ud] for row in ax.data[2 * ud :]], vd, ud)
    X2 = Matrix([[-c for c in row[ud : 2 * ud]] for row in ax.data[2 * ud :]], vd, ud)
    Y1 = Matrix([row[2 * ud :] for row in ay.data[:ud]], ud, vd)
    Y2 = Matrix([row[2 * ud :] for row in ay.data[ud : 2 * ud]], ud, vd)
    M = RepQObj(ud, vd, X1, X2, Y1, Y2)
    return M, cols


# ---------------------------------------------------------------------------
# six Schurian objects


def schurian_objects():
    """The six Schurian objects: S, T, the two length-two modules, the two
    length-three modules (in that order)."""
    g = RepQObj.from_int
    S = g(1, 0, [], [], [[]], [[]])
    T = g(0, 1, [[]], [[]], [], [])
    b1 = g(1, 1, [[0]], [[0]], [[1]], [[0]])
    b2 = g(1, 1, [[1]], [[0]], [[0]], [[0]])
    c1 = g(1, 2, [[0], [0]], [[0], [0]], [[1, 0]], [[0, 1]])
    c2 = g(1, 2, [[1], [0]], [[0], [1]], [[0, 0]], [[0, 0]])
    return [S, T, b1, b2, c1, c2]


# ---------------------------------------------------------------------------
# Schurian / indecomposability / isomorphism


def _division_algebra_verdict(alg):
    """'yes' | 'no' | 'indeterminate' for 'is this algebra a division algebra'.

    Exact for dim <= 2; for semisimple dim >= 3 searches for a central
    idempotent and falls back to 'indeterminate'.
    """
    from .algebra_lab import radical_basis

    if alg.dim == 0:
        return "no"
    rad = radical_basis(alg)
    if rad:
        return "no"
    return _semisimple_division_verdict(alg)


def _semisimple_division_verdict(alg):
    from gmpy2 import mpq as _q

    if alg.dim == 1:
        return "yes"
    if alg.dim == 2:
        # commutative; division iff the minimal polynomial of a non-scalar
        # element is irreducible (discriminant not a rational square)
        x = _non_scalar_element(alg)
        p, q = _monic_quadratic_min_poly(alg, x)
        disc = p * p - 4 * q
        return "no" if _is_rational_square(disc) else "yes"
    # dim >= 3 semisimple: hunt for a nontrivial central idempotent
    idem = _central_idempotent_search(alg)
    if idem is not None:
        return "no"
    return "indeterminate"


def _non_scalar_element(alg):
    for k in range(alg.dim):
        vec = [mpq(0)] * alg.dim
        vec[k] = mpq(1)
        if not _is_scalar(alg, vec):
            return vec
    raise ArithmeticError("algebra of dim >= 2 with only scalar basis elements")


def _is_scalar(alg, vec):
    A = Matrix([[alg.unit[i], vec[i]] for i in range(alg.dim)])
    return A.rank() <= 1


def _monic_quadratic_min_poly(alg, x):
    """(p, q) with x^2 + p x + q = 0 in a 2-dimensional algebra."""
    x2 = alg.multiply(x, x)
    A = Matrix([[alg.unit[i], x[i]] for i in range(alg.dim)])
    b = Matrix([[x2[i]] for i in range(alg.dim)])
    sol = A.solve(b)
    if sol is None:
        raise ArithmeticError("no quadratic relation in a 2-dim algebra")
    c0, c1 = sol.data[0][0], sol.data[1][0]
    return -c1, -c0


def _is_rational_square(x):
    x = mpq(x)
    if x < 0:
        return False
    if not bool(x):
        return True
    from .exact_core import squarefree_decomposition

    _, d = squarefree_decomposition(int(x.numerator * x.denominator))
    return d == 1


def complex_unit_witness(alg):
    """A vector w with w*w = -1 in a 2-dimensional algebra, or None.

    Solving (a + b*x)^2 = -1 against the minimal polynomial x^2 + p x + q
    gives a = b*p/2 and b^2 = 4/(4q - p^2); the witness exists over the
    rationals iff 4q - p^2 is a positive rational square.
    """
    from gmpy2 import isqrt

    if alg.dim != 2:
        return None
    x = _non_scalar_element(alg)
    p, q = _monic_quadratic_min_poly(alg, x)
    disc4 = 4 * q - p * p
    if disc4 <= 0 or not _is_rational_square(disc4):
        return None
    s = mpq(isqrt(disc4.numerator), isqrt(disc4.denominator))
    w = [(2 * x[i] + p * alg.unit[i]) / s for i in range(alg.dim)]
    minus_one = [-alg.unit[i] for i in range(alg.dim)]
    if alg.multiply(w, w) != minus_one:
        raise ArithmeticError("witness construction failed its own check")
    return w


def _central_idempotent_search(alg):
    """Try to exhibit a nontrivial idempotent in the center.

    Returns the idempotent vector or None.  Uses the minimal polynomial of a
    generic central element, with rational root search and quadratic
    discriminant tests (degrees up to 4 per the decision ladder).
    """
    from .algebra_lab import center_basis

    cb = center_basis(alg)
    # try each central basis element and small combinations
    candidates = list(cb)
    for i in range(len(cb)):
        for j in range(i + 1, len(cb)):
            candidates.append([a + 2 * b for a, b in zip(cb[i], cb[j])])
    for z in candidates:
        idem = _idempotent_from_element(alg, z)
        if idem is not None:
            return idem
    return None


def _idempotent_from_element(alg, z):
    """Factor the minimal polynomial of z; lift a rational root to an idempotent."""
    # minimal polynomial by linear algebra on powers of z
    powers = [list(alg.unit)]
    while True:
        nxt = alg.multiply(powers[-1], z)
        A = Matrix([[p[i] for p in powers] for i in range(alg.dim)])
        b = Matrix([[nxt[i]] for i in range(alg.dim)])
        sol = A.solve(b)
        if sol is not None:
            coeffs = [sol.data[k][0] for k in range(len(powers))]
            break
        powers.append(nxt)
        if len(powers) > 5:
            return None
    # z^d = sum coeffs[k] z^k ; min poly m(v) = v^d - sum coeffs v^k
    d = len(powers)
    if d <= 1:
        return None
    poly = [-c for c in coeffs] + [mpq(1)]  # degree d monic
    roots = _rational_roots(poly)
    for r in roots:
        # e = product over other roots? use Lagrange-style: split by (z - r)
        # try e = m_r(z)/m_r(r) with m_r = m / (v - r) when r is simple
        mr = _poly_divide_linear(poly, r)
        val = _poly_eval_scalar(mr, r)
        if not bool(val):
            continue
        e = _poly_eval_alg(alg, mr, z)
        e = [c / val for c in e]
        if alg.multiply(e, e) == e and e != list(alg.unit) and any(bool(c) for c in e):
            return e
    return None


def _rational_roots(poly):
    """Rational roots of a monic polynomial with rational coefficients."""
    # clear denominators: roots p/q with p | a0*den, q | lead
    from math import gcd

    den = 1
    for c in poly:
        den = den * mpq(c).denominator // gcd(den, int(mpq(c).denominator))
    ints = [int(mpq(c) * den) for c in poly]
    a0, lead = ints[0], ints[-1]
    if a0 == 0:
        roots = [mpq(0)]
        return roots + _rational_roots([mpq(c) for c in poly[1:]])
    roots = []
    for p in _divisors(abs(a0)):
        for q in _divisors(abs(lead)):
            for sgn in (1, -1):
                r = mpq(sgn * p, q)
                if not bool(_poly_eval_scalar(poly, r)):
                    if r not in roots:
                        roots.append(r)
    return roots


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _poly_eval_scalar(poly, x):
    acc = mpq(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _poly_divide_linear(poly, r):
    """poly / (v - r) for a root r (synthetic division, remainder dropped).

    Coefficients are constant-first; the quotient is returned the same way.
    """
    coeffs = list(reversed(poly))  # leading first
    res = [coeffs[0]]
    for c in coeffs[1:-1]:
        res.append(res[-1] * r + c)
    return list(reversed(res))  # constant first


def _poly_eval_alg(alg, poly, z):
    acc = [mpq(0)] * alg.dim
    for c in reversed(poly):
        acc = alg.multiply(acc, z)
        acc = [a + c * u for a, u in zip(acc, alg.unit)]
    return acc


def is_schurian(M):
    """'yes' iff End(M) is a division algebra; 'no' or 'indeterminate' else."""
    alg, _ = end_algebra(M)
    return _division_algebra_verdict(alg)


def is_indecomposable(M):
    """'yes' iff End(M)/rad is a division algebra (local endomorphism ring)."""
    from .algebra_lab import radical_basis, quotient_by_ideal

    alg, _ = end_algebra(M)
    rad = radical_basis(alg)
    if rad:
        alg, _ = quotient_by_ideal(alg, rad)
    return _semisimple_division_verdict(alg)


def is_isomorphic(M, N):
    """Decide isomorphism of two indecomposable objects.

    Returns (True, certificate RepQMor) or (False, reason string).
    Raises ValueError on decomposable input.
    """
    for obj, name in ((M, "first"), (N, "second")):
        verdict = is_indecomposable(obj)
        if verdict == "no":
            raise ValueError(
                f"{name} argument is decomposable: decompose before comparing"
            )
        if verdict == "indeterminate":
            raise ValueError(f"indecomposability of the {name} argument undecided")
    if M.dimension_vector() != N.dimension_vector():
        return (False, "dimension vectors differ")
    fwd = hom_basis(M, N)
    bwd = hom_basis(N, M)
    if not fwd or not bwd:
        return (False, "a Hom space vanishes")
    from .algebra_lab import radical_basis

    alg, ebasis = end_algebra(M)
    rad = radical_basis(alg)
    rad_matrix = (
        Matrix([[r[i] for r in rad] for i in range(alg.dim)]) if rad else None
    )
    for f in fwd:
        for g in bwd:
            comp = g.compose(f)  # in End(M)
            coords = coordinates_in_hom(M, M, comp, ebasis)
            if coords is None:
                raise ArithmeticError("composite escaped End(M)")
            vec = Matrix([[c] for c in coords])
            in_rad = (
                all(not bool(c) for c in coords)
                if rad_matrix is None
                else rad_matrix.solve(vec) is not None
            )
            if not in_rad:
                # g o f is a unit of the local ring End(M); f is invertible
                if not f.is_invertible():
                    raise ArithmeticError(
                        "unit composite but non-invertible candidate"
                    )
                return (True, f)
    return (False, "all composites lie in the radical of End(M)")
