"""Exact scalar arithmetic, truncated power series, and dense linear algebra.

Scalars are rationals (gmpy2.mpq), elements of a real quadratic extension
Q(sqrt(D)) (:class:`Quadratic`), or Gaussian elements a + b*i over either
(:class:`Gaussian`).  Series are truncated at a fixed order N per computation
context.  Matrices are dense and generic over any of these scalar types.
"""

from __future__ import annotations

from gmpy2 import mpq

INF = float("inf")


# ---------------------------------------------------------------------------
# scalars


def QQ(x):
    """Coerce x (int, str like "3/4", mpq) to an exact rational."""
    if isinstance(x, mpq().__class__):
        return x
    if isinstance(x, (int, str)):
        return mpq(x)
    if isinstance(x, Quadratic) and x.b == 0:
        return x.a
    raise TypeError(f"cannot coerce {x!r} to a rational")


def squarefree_decomposition(n):
    """Return (s, d) with n = s^2 * d, d squarefree, for a positive integer n."""
    s, d, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return s, d * n


class Quadratic:
    """Element a + b*sqrt(D) of a real quadratic field, D > 1 squarefree."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D):
        a, b = QQ(a), QQ(b)
        if not (isinstance(D, int) and D > 1):
            raise ValueError("D must be an integer > 1")
        _, d = squarefree_decomposition(D)
        if d != D:
            raise ValueError(f"D = {D} is not squarefree")
        self.a, self.b, self.D = a, b, D

    def _coerce(self, other):
        if isinstance(other, Quadratic):
            if other.b != 0 and self.b != 0 and other.D != self.D:
                raise ValueError("mixing distinct quadratic extensions")
            D = self.D if self.b != 0 else (other.D if other.b != 0 else self.D)
            return Quadratic(other.a, other.b, D)
        return Quadratic(QQ(other), 0, self.D)

    def __add__(self, other):
        o = self._coerce(other)
        return Quadratic(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return Quadratic(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return Quadratic(
            self.a * o.a + self.D * self.b * o.b, self.a * o.b + self.b * o.a, self.D
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.D * self.b * self.b
        if n == 0:
            if self.a == 0 and self.b == 0:
                raise ZeroDivisionError("quadratic zero has no inverse")
            raise ZeroDivisionError("norm zero (D a perfect square?)")
        return Quadratic(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def sign(self):
        """Sign of a + b*sqrt(D) as a real number, exactly."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with D b^2
        lhs, rhs = a * a, self.D * b * b
        if lhs == rhs:
            return 0
        bigger_is_a = lhs > rhs
        return (1 if a > 0 else -1) if bigger_is_a else (1 if b > 0 else -1)

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __repr__(self):
        return f"({self.a}+{self.b}*sqrt({self.D}))"


def scalar_zero_like(x):
    return x * 0


def scalar_inv(x):
    if isinstance(x, (Quadratic, Gaussian)):
        return x.inverse()
    return 1 / QQ(x)


def scalar_is_rational(x):
    return not isinstance(x, (Quadratic, Gaussian)) or (
        isinstance(x, Quadratic) and x.b == 0
    )


def scalar_abs_cmp_one(x):
    """Return -1, 0, 1 according to |x| <, =, > 1 for a real exact scalar."""
    if isinstance(x, Quadratic):
        s = x.sign()
        y = x if s >= 0 else -x
        return (y - 1).sign()
    x = QQ(x)
    y = x if x >= 0 else -x
    return (y > 1) - (y < 1)


class Gaussian:
    """Element a + b*i with real and imaginary parts in mpq or one Q(sqrt D)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if isinstance(re, Quadratic) else QQ(re)
        self.im = im if isinstance(im, Quadratic) else QQ(im)

    def _coerce(self, other):
        if isinstance(other, Gaussian):
            return other
        return Gaussian(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return Gaussian(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def conj(self):
        return Gaussian(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("gaussian zero has no inverse")
        c = self.conj()
        ninv = scalar_inv(n)
        return Gaussian(c.re * ninv, c.im * ninv)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"({self.re}+{self.im}i)"


def quad_roots(p, q):
    """Both roots of v^2 + p v + q = 0 for rational p, q with nonneg discriminant.

    Roots are rational when the discriminant is a square, else live in
    Q(sqrt(D)) with D the squarefree part of the discriminant.
    """
    p, q = QQ(p), QQ(q)
    disc = p * p - 4 * q
    if disc < 0:
        raise ValueError("negative discriminant: roots are not real")
    if disc == 0:
        return (-p / 2, -p / 2)
    num, den = disc.numerator, disc.denominator
    s, d = squarefree_decomposition(int(num * den))
    root = mpq(s, den)  # sqrt(disc) = root * sqrt(d)
    if d == 1:
        return ((-p + root) / 2, (-p - root) / 2)
    half = Quadratic(-p / 2, root / 2, d)
    return (half, Quadratic(-p / 2, -root / 2, d))


# ---------------------------------------------------------------------------
# scalar text format


def parse_scalar(text):
    """Parse "p/q" or "p/q+r/s*sqrt(D)" (also with leading/interior minus)."""
    text = text.strip().replace(" ", "")
    if "sqrt" not in text:
        return mpq(text)
    # split the additive part before the sqrt term
    head, _, tail = text.partition("*sqrt(")
    D = int(tail.rstrip(")"))
    # head = "a+b" or "a-b" or just "b" (pure sqrt multiple)
    cut = max(head.rfind("+", 1), head.rfind("-", 1))
    if cut <= 0:
        a, b = mpq(0), mpq(head)
    else:
        a, b = mpq(head[:cut]), mpq(head[cut] + head[cut + 1 :])
    return Quadratic(a, b, D)


def format_scalar(x):
    if isinstance(x, Quadratic):
        if x.b == 0:
            return str(x.a)
        return f"{x.a}+{x.b}*sqrt({x.D})" if x.b >= 0 else f"{x.a}-{-x.b}*sqrt({x.D})"
    return str(QQ(x))


# ---------------------------------------------------------------------------
# truncated power series


class TruncSeries:
    """Element of R/t^N R with R = k[[t]]; coefficients are exact scalars."""

    __slots__ = ("N", "c")

    def __init__(self, coeffs, N=None):
        if N is None:
            N = len(coeffs)
        coeffs = list(coeffs)[:N]
        coeffs += [mpq(0)] * (N - len(coeffs))
        self.N = N
        self.c = tuple(coeffs)

    @staticmethod
    def const(x, N):
        return TruncSeries([x], N)

    @staticmethod
    def zero(N):
        return TruncSeries([], N)

    @staticmethod
    def one(N):
        return TruncSeries([mpq(1)], N)

    @staticmethod
    def t_power(k, N):
        if k >= N:
            return TruncSeries([], N)
        return TruncSeries([mpq(0)] * k + [mpq(1)], N)

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            if other.N != self.N:
                raise ValueError("mixing truncation orders")
            return other
        return TruncSeries.const(other, self.N)

    def __add__(self, other):
        o = self._coerce(other)
        return TruncSeries([a + b for a, b in zip(self.c, o.c)], self.N)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-a for a in self.c], self.N)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries([a * other for a in self.c], self.N)
        o = self._coerce(other)
        N = self.N
        out = [mpq(0)] * N
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j in range(N - i):
                b = o.c[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(out, N)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return all(a == b for a, b in zip(self.c, o.c))

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(bool(a) for a in self.c)

    def val(self):
        """t-adic valuation; +inf when zero mod t^N."""
        for i, a in enumerate(self.c):
            if a:
                return i
        return INF

    def is_unit(self):
        return bool(self.c[0])

    def invert(self):
        """Multiplicative inverse mod t^N; input must be a unit."""
        if not self.is_unit():
            raise ZeroDivisionError("not a unit: constant term vanishes")
        N = self.N
        inv0 = scalar_inv(self.c[0])
        out = [inv0] + [mpq(0)] * (N - 1)
        for n in range(1, N):
            acc = scalar_zero_like(inv0)
            for i in range(1, n + 1):
                if self.c[i]:
                    acc = acc + self.c[i] * out[n - i]
            out[n] = -inv0 * acc
        return TruncSeries(out, N)

    def shift_down(self, k):
        """Divide by t^k, dropping precision to N (tail padded with zeros)."""
        if k == 0:
            return self
        if any(bool(a) for a in self.c[:k]):
            raise ValueError("not divisible by t^k")
        return TruncSeries(list(self.c[k:]), self.N)

    def truncate(self, M):
        return TruncSeries(list(self.c[:M]), M)

    def extend(self, M):
        return TruncSeries(list(self.c), M)

    def __repr__(self):
        terms = [f"{a}*t^{i}" for i, a in enumerate(self.c) if a]
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# dense matrices


class Matrix:
    """Dense rectangular matrix over any of the exact scalar types."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, rows=None, cols=None):
        data = [list(r) for r in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("ragged or mis-shaped matrix data")
        self.rows, self.cols, self.data = rows, cols, data

    @staticmethod
    def from_int_rows(data, rows=None, cols=None):
        return Matrix([[QQ(x) for x in r] for r in data], rows, cols)

    @staticmethod
    def zero(rows, cols, zero=None):
        z = mpq(0) if zero is None else zero
        return Matrix([[z for _ in range(cols)] for _ in range(rows)], rows, cols)

    @staticmethod
    def identity(n, one=None, zero=None):
        o = mpq(1) if one is None else one
        z = mpq(0) if zero is None else zero
        return Matrix([[o if i == j else z for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def map(self, f):
        return Matrix([[f(x) for x in r] for r in self.data], self.rows, self.cols)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return Matrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ],
            self.rows,
            self.cols,
        )

    def __sub__(self, other):
        return self + other.map(lambda x: -x)

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, s):
        return self.map(lambda x: x * s)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        od = other.data
        out = []
        for r in self.data:
            row = []
            for j in range(other.cols):
                acc = None
                for k, a in enumerate(r):
                    term = a * od[k][j]
                    acc = term if acc is None else acc + term
                if acc is None:  # zero-width product
                    acc = mpq(0)
                row.append(acc)
            out.append(row)
        return Matrix(out, self.rows, other.cols)

    def transpose(self):
        return Matrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols,
            self.rows,
        )

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(
            a == b for r1, r2 in zip(self.data, other.data) for a, b in zip(r1, r2)
        )

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.data))

    def is_zero(self):
        return all(not bool(x) for r in self.data for x in r)

    def entries(self):
        return [x for r in self.data for x in r]

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return Matrix([r1 + r2 for r1, r2 in zip(self.data, other.data)])

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("col mismatch in vstack")
        return Matrix(self.data + other.data)

    @staticmethod
    def block_diag(blocks):
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = Matrix.zero(rows, cols)
        i0 = j0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out.data[i0 + i][j0 + j] = b.data[i][j]
            i0 += b.rows
            j0 += b.cols
        return out

    def copy(self):
        return Matrix([list(r) for r in self.data], self.rows, self.cols)

    # --- field linear algebra ---------------------------------------------

    def rref(self):
        """Return (R, pivot_cols) with R the reduced row echelon form."""
        m = [list(r) for r in self.data]
        pivots = []
        pr = 0
        for pc in range(self.cols):
            found = None
            for i in range(pr, self.rows):
                if bool(m[i][pc]):
                    found = i
                    break
            if found is None:
                continue
            m[pr], m[found] = m[found], m[pr]
            inv = scalar_inv(m[pr][pc])
            m[pr] = [x * inv for x in m[pr]]
            for i in range(self.rows):
                if i != pr and bool(m[i][pc]):
                    f = m[i][pc]
                    m[i] = [a - f * b for a, b in zip(m[i], m[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.rows:
                break
        return Matrix(m, self.rows, self.cols), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis (list of column vectors as Matrix cols x 1) of the null space."""
        R, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for j in free:
            v = [mpq(0)] * self.cols
            v[j] = mpq(1)
            for i, pc in enumerate(pivots):
                v[pc] = -R.data[i][j]
            basis.append(Matrix([[x] for x in v], self.cols, 1))
        return basis

    def solve(self, b):
        """Solve self * x = b (b: rows x k). Return particular solution or None."""
        aug = self.hstack(b)
        R, pivots = aug.rref()
        for i in range(self.rows):
            if all(not bool(R.data[i][j]) for j in range(self.cols)) and any(
                bool(R.data[i][j]) for j in range(self.cols, aug.cols)
            ):
                return None
        x = Matrix.zero(self.cols, b.cols)
        for i, pc in enumerate(pivots):
            if pc >= self.cols:
                return None
            for j in range(b.cols):
                x.data[pc][j] = R.data[i][self.cols + j]
        return x

    def inverse(self):
        if self.rows != self.cols:
            raise ValueError("inverse of a nonsquare matrix")
        x = self.solve(Matrix.identity(self.rows))
        if x is None or not (self * x == Matrix.identity(self.rows)):
            raise ValueError("matrix is singular")
        return x

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a nonsquare matrix")
        m = [list(r) for r in self.data]
        n = self.rows
        det = mpq(1)
        for c in range(n):
            piv = None
            for i in range(c, n):
                if bool(m[i][c]):
                    piv = i
                    break
            if piv is None:
                return scalar_zero_like(det)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det = det * m[c][c]
            inv = scalar_inv(m[c][c])
            for i in range(c + 1, n):
                if bool(m[i][c]):
                    f = m[i][c] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return det

    def is_nilpotent(self):
        if self.rows != self.cols:
            raise ValueError("nilpotency of a nonsquare matrix")
        p = self
        for _ in range(max(self.rows, 1)):
            if p.is_zero():
                return True
            p = p * self
        return p.is_zero()

    def trace(self):
        if self.rows != self.cols:
            raise ValueError("trace of a nonsquare matrix")
        acc = mpq(0)
        for i in range(self.rows):
            acc = acc + self.data[i][i]
        return acc

    def __repr__(self):
        return "Matrix(" + "; ".join(
            " ".join(str(x) for x in r) for r in self.data
        ) + ")"


def solve_linear(A, B):
    """Particular solution of A x = B plus a kernel basis of A.

    Returns (x or None, kernel_basis).  Exact over the scalar field.
    """
    return A.solve(B), A.kernel_basis()


# ---------------------------------------------------------------------------
# sparse linear solver (for the large, very sparse intertwiner systems)


def sparse_kernel(rows, ncols):
    """Kernel basis of a sparse system.

    rows: iterable of dicts {col: coeff} (zero coeffs allowed), ncols unknowns.
    Returns a list of dense solution vectors (lists of scalars).
    """
    # Gauss-Jordan on dict rows, tracking pivot column per reduced row.
    # Invariant: an echelon row contains no pivot column other than its own,
    # so eliminating a pivot from an incoming row only introduces free
    # columns and one elimination pass suffices.
    echelon = {}  # pivot col -> dict row (with coeff 1 at pivot)
    for row in rows:
        row = {c: v for c, v in row.items() if bool(v)}
        for p in sorted(c for c in row if c in echelon):
            f = row.pop(p)
            for c, v in echelon[p].items():
                if c == p:
                    continue
                nv = row.get(c, 0) - f * v
                if bool(nv):
                    row[c] = nv
                else:
                    row.pop(c, None)
        if not row:
            continue
        p = min(row)
        inv = scalar_inv(row[p])
        row = {c: v * inv for c, v in row.items()}
        # back-substitute into existing rows to keep them fully reduced
        for er in echelon.values():
            if p in er:
                f = er.pop(p)
                for c, v in row.items():
                    if c == p:
                        continue
                    nv = er.get(c, 0) - f * v
                    if bool(nv):
                        er[c] = nv
                    else:
                        er.pop(c, None)
        echelon[p] = row
    pivots = set(echelon)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for j in free:
        v = [mpq(0)] * ncols
        v[j] = mpq(1)
        for p, er in echelon.items():
            if j in er:
                v[p] = -er[j]
        basis.append(v)
    return basis


def t_valuation(M):
    """Minimal valuation over the entries of a series matrix; +inf if zero."""
    v = INF
    for r in M.data:
        for x in r:
            xv = x.val()
            if xv < v:
                v = xv
    return v


def series_matrix(data, N):
    """Build a Matrix of TruncSeries from nested lists of coefficient lists,
    ints, or TruncSeries."""
    out = []
    for r in data:
        row = []
        for x in r:
            if isinstance(x, TruncSeries):
                row.append(x.extend(N) if x.N <= N else x.truncate(N))
            elif isinstance(x, (list, tuple)):
                row.append(TruncSeries([QQ_or_quad(c) for c in x], N))
            else:
                row.append(TruncSeries.const(QQ_or_quad(x), N))
        out.append(row)
    return Matrix(out)


def QQ_or_quad(x):
    if isinstance(x, (Quadratic, Gaussian)):
        return x
    return QQ(x)
