"""Weight diagrams for sl2 Harish-Chandra modules and the bridge to the
Gelfand quiver.

An ``HCDiagram`` is a finite even-graded chain of complex vector spaces
``M_{n_min}, M_{n_min+2}, ..., M_{n_max}`` with raising maps
``x_n: M_n -> M_{n+2}`` and lowering maps ``y_n: M_n -> M_{n-2}``
(zero outside the window).  Validity means the Casimir operator acts
nilpotently on every component; the restriction functor reads off the
central slice ``M_{-2} <-> M_0 <-> M_2`` as a nilpotent representation of
the Gelfand quiver, which in turn realizes as a module over the truncated
complex Gelfand order (generators eps_-, eps_+, eps_*, a_-, a_+, b_-, b_+).

Scalars are Gaussian rationals throughout.
"""

from gmpy2 import mpq

from .exact_core import Gaussian, Matrix

__all__ = [
    "HCDiagram",
    "GelfandRep",
    "GelfandMor",
    "validate_hc",
    "restrict_to_gelfand",
    "conjugate_gelfand",
    "conjugate_hc",
    "quiver_to_O_module",
    "sigma_sharp_twist",
    "conjugation_square_check",
    "transport_morphism",
    "random_hc_diagram",
]


def _g(re, im=0):
    return Gaussian(mpq(re), mpq(im))


_ZERO = _g(0)
_ONE = _g(1)


def _gzero(rows, cols):
    return Matrix.zero(rows, cols, zero=_ZERO)


def _gidentity(n):
    return Matrix.identity(n, one=_ONE, zero=_ZERO)


def _conj_matrix(M):
    return M.map(lambda s: s.conj() if isinstance(s, Gaussian) else s)


class HCDiagram:
    """Even-graded weight diagram with raising maps x and lowering maps y.

    ``dims[n]`` is dim M_n for even n in the window (missing keys mean 0);
    ``x[n]``: M_n -> M_{n+2} and ``y[n]``: M_n -> M_{n-2} are Gaussian
    matrices.  Maps whose source or target is zero-dimensional or out of
    the window may be omitted; they are normalized to zero matrices.
    """

    __slots__ = ("n_min", "n_max", "dims", "x", "y")

    def __init__(self, n_min, n_max, dims, x=None, y=None):
        if n_min % 2 or n_max % 2:
            raise ValueError("window bounds must be even")
        if n_min > n_max:
            raise ValueError("empty window")
        self.n_min, self.n_max = n_min, n_max
        self.dims = {}
        for n in range(n_min, n_max + 1, 2):
            d = int(dims.get(n, 0))
            if d < 0:
                raise ValueError("negative dimension")
            self.dims[n] = d
        for n, d in dims.items():
            if (n < n_min or n > n_max or n % 2) and d:
                raise ValueError(f"nonzero dimension at weight {n} outside window")
        self.x, self.y = {}, {}
        x = x or {}
        y = y or {}
        for n in self.weights():
            xm = x.get(n)
            tgt = self.dim(n + 2)
            if xm is None:
                xm = _gzero(tgt, self.dims[n])
            if (xm.rows, xm.cols) != (tgt, self.dims[n]):
                raise ValueError(f"x[{n}] has shape {(xm.rows, xm.cols)}, "
                                 f"expected {(tgt, self.dims[n])}")
            self.x[n] = xm
            ym = y.get(n)
            tgt = self.dim(n - 2)
            if ym is None:
                ym = _gzero(tgt, self.dims[n])
            if (ym.rows, ym.cols) != (tgt, self.dims[n]):
                raise ValueError(f"y[{n}] has shape {(ym.rows, ym.cols)}, "
                                 f"expected {(tgt, self.dims[n])}")
            self.y[n] = ym
        for n, m in (x or {}).items():
            if n not in self.x and not m.is_zero():
                raise ValueError(f"nonzero x-map at weight {n} outside window")
        for n, m in (y or {}).items():
            if n not in self.y and not m.is_zero():
                raise ValueError(f"nonzero y-map at weight {n} outside window")

    def weights(self):
        return range(self.n_min, self.n_max + 1, 2)

    def dim(self, n):
        return self.dims.get(n, 0)

    def xmap(self, n):
        """x_n: M_n -> M_{n+2} (zero matrix outside the window)."""
        return self.x.get(n, _gzero(self.dim(n + 2), self.dim(n)))

    def ymap(self, n):
        """y_n: M_n -> M_{n-2} (zero matrix outside the window)."""
        return self.y.get(n, _gzero(self.dim(n - 2), self.dim(n)))

    def __eq__(self, other):
        if not isinstance(other, HCDiagram):
            return NotImplemented
        ws = set(self.weights()) | set(other.weights())
        return all(
            self.dim(n) == other.dim(n)
            and self.xmap(n) == other.xmap(n)
            and self.ymap(n) == other.ymap(n)
            for n in ws
        )

    def __repr__(self):
        ds = ", ".join(f"{n}:{d}" for n, d in self.dims.items() if d)
        return f"HCDiagram[{self.n_min}..{self.n_max}; {ds or '0'}]"


def validate_hc(D):
    """Return a list of violation messages (empty means valid).

    The Casimir element c = h^2 - 2h + 4xy = h^2 + 2h + 4yx must act
    nilpotently on every component.  On a finite window the two expressions
    for c restrict differently (they differ by the scalar 4n on M_n, and the
    maps leaving the window are zero), so validity asks that on each M_n at
    least one of

        C1_n = (n^2 - 2n) id + 4 x_{n-2} y_n
        C2_n = (n^2 + 2n) id + 4 y_{n+2} x_n

    be nilpotent.  Additionally, for every edge the operators
    (n^2 - 2n) id + 4 x_{n-2} y_n on M_n and (n^2 - 2n) id + 4 y_n x_{n-2}
    on M_{n-2} (the same scalar with the two composition orders) must agree
    in nilpotency; AB and BA share nonzero eigenvalues, so a disagreement
    indicates corrupted data.
    """
    errs = []
    for n in D.weights():
        d = D.dim(n)
        if d == 0:
            continue
        I = _gidentity(d)
        c1 = I.scale(_g(n * n - 2 * n)) + (D.xmap(n - 2) * D.ymap(n)).scale(_g(4))
        c2 = I.scale(_g(n * n + 2 * n)) + (D.ymap(n + 2) * D.xmap(n)).scale(_g(4))
        if not (c1.is_nilpotent() or c2.is_nilpotent()):
            errs.append(f"Casimir is not nilpotent on M_{n}")
            continue
        dlo = D.dim(n - 2)
        if dlo:
            lo = _gidentity(dlo).scale(_g(n * n - 2 * n)) + (
                D.ymap(n) * D.xmap(n - 2)
            ).scale(_g(4))
            if c1.is_nilpotent() != lo.is_nilpotent():
                errs.append(
                    f"Casimir expressions disagree on the edge M_{n - 2} <-> M_{n}"
                )
    return errs


class GelfandRep:
    """Nilpotent representation of the Gelfand quiver over Gaussian rationals.

    Maps: a_minus: V_- -> V_*, a_plus: V_+ -> V_*, b_minus: V_* -> V_-,
    b_plus: V_* -> V_+; the relation a_- b_- = a_+ b_+ holds and the common
    composite is nilpotent on V_*.
    """

    __slots__ = ("dm", "ds", "dp", "a_minus", "a_plus", "b_minus", "b_plus")

    def __init__(self, dm, ds, dp, a_minus, a_plus, b_minus, b_plus, check=True):
        self.dm, self.ds, self.dp = dm, ds, dp
        self.a_minus, self.a_plus = a_minus, a_plus
        self.b_minus, self.b_plus = b_minus, b_plus
        for M, shape, name in (
            (a_minus, (ds, dm), "a_-"),
            (a_plus, (ds, dp), "a_+"),
            (b_minus, (dm, ds), "b_-"),
            (b_plus, (dp, ds), "b_+"),
        ):
            if (M.rows, M.cols) != shape:
                raise ValueError(f"{name} has shape {(M.rows, M.cols)}, "
                                 f"expected {shape}")
        if check:
            errs = self.violations()
            if errs:
                raise ArithmeticError("; ".join(errs))

    def violations(self):
        errs = []
        if self.a_minus * self.b_minus != self.a_plus * self.b_plus:
            errs.append("a_- b_- != a_+ b_+")
        elif not (self.a_minus * self.b_minus).is_nilpotent():
            errs.append("a_- b_- is not nilpotent")
        return errs

    def dimension_vector(self):
        return (self.dm, self.ds, self.dp)

    def core(self):
        """The common nilpotent composite a_- b_- = a_+ b_+ on V_*."""
        return self.a_minus * self.b_minus

    def __eq__(self, other):
        if not isinstance(other, GelfandRep):
            return NotImplemented
        return (
            self.dimension_vector() == other.dimension_vector()
            and self.a_minus == other.a_minus
            and self.a_plus == other.a_plus
            and self.b_minus == other.b_minus
            and self.b_plus == other.b_plus
        )

    def __repr__(self):
        return f"GelfandRep{self.dimension_vector()}"


class GelfandMor:
    """Morphism of Gelfand-quiver representations: (f_-, f_*, f_+)."""

    __slots__ = ("source", "target", "f_minus", "f_star", "f_plus")

    def __init__(self, source, target, f_minus, f_star, f_plus, check=True):
        self.source, self.target = source, target
        self.f_minus, self.f_star, self.f_plus = f_minus, f_star, f_plus
        if check and not self.is_valid():
            raise ArithmeticError("maps do not intertwine the quiver arrows")

    def is_valid(self):
        r, s = self.source, self.target
        return (
            self.f_star * r.a_minus == s.a_minus * self.f_minus
            and self.f_star * r.a_plus == s.a_plus * self.f_plus
            and self.f_minus * r.b_minus == s.b_minus * self.f_star
            and self.f_plus * r.b_plus == s.b_plus * self.f_star
        )


def restrict_to_gelfand(D):
    """Read the central slice M_{-2} <-> M_0 <-> M_2 as a GelfandRep.

    V_- = M_{-2}, V_* = M_0, V_+ = M_2 with a_- = x_{-2}, b_- = y_0,
    a_+ = y_2, b_+ = x_0.  Raises ArithmeticError when the slice does not
    satisfy the quiver relations (an input outside the principal block).
    """
    return GelfandRep(
        D.dim(-2),
        D.dim(0),
        D.dim(2),
        D.xmap(-2),
        D.ymap(2),
        D.ymap(0),
        D.xmap(0),
    )


def conjugate_gelfand(r):
    """The conjugation functor: swap +/- and conjugate every map entrywise."""
    return GelfandRep(
        r.dp,
        r.ds,
        r.dm,
        _conj_matrix(r.a_plus),
        _conj_matrix(r.a_minus),
        _conj_matrix(r.b_plus),
        _conj_matrix(r.b_minus),
        check=False,
    )


def conjugate_hc(D):
    """Conjugation on diagrams: negate the grading, exchange x and y, and
    conjugate all entries (x'_n = conj(y_{-n}), y'_n = conj(x_{-n})).

    This is the unique grading-negating recipe for which the square with
    restrict_to_gelfand and conjugate_gelfand commutes on the nose.
    """
    dims = {-n: d for n, d in D.dims.items()}
    x = {n: _conj_matrix(D.ymap(-n)) for n in range(-D.n_max, -D.n_min + 1, 2)}
    y = {n: _conj_matrix(D.xmap(-n)) for n in range(-D.n_max, -D.n_min + 1, 2)}
    return HCDiagram(-D.n_max, -D.n_min, dims, x, y)


O_GENERATORS = ("eps-", "eps+", "eps*", "a-", "a+", "b-", "b+", "t")

# index swap 1 <-> 2 of the order's matrix picture: eps_- <-> eps_+,
# a_- <-> a_+, b_- <-> b_+, t fixed (combined with entrywise conjugation)
_SIGMA_SWAP = {
    "eps-": "eps+",
    "eps+": "eps-",
    "eps*": "eps*",
    "a-": "a+",
    "a+": "a-",
    "b-": "b+",
    "b+": "b-",
    "t": "t",
}


def quiver_to_O_module(r, N):
    """Action matrices of the truncated complex order on V_- + V_+ + V_*.

    Block slots 1, 2, 3 carry V_-, V_+, V_*; the arrows act per the order
    identification a_- = t e31, a_+ = t e32, b_- = e13, b_+ = e23, so t acts
    as b_- a_- on V_-, b_+ a_+ on V_+ and the common composite on V_*.
    N must exceed the nilpotency index of that composite.

    Returns (act, dims) with act a dict over O_GENERATORS and dims the block
    dimension triple.
    """
    dm, dp, ds = r.dm, r.dp, r.ds
    n = dm + dp + ds
    offs = (0, dm, dm + dp)

    def block(slot_r, slot_c, B):
        out = _gzero(n, n)
        for i in range(B.rows):
            for j in range(B.cols):
                out.data[offs[slot_r] + i][offs[slot_c] + j] = B.data[i][j]
        return out

    act = {
        "eps-": block(0, 0, _gidentity(dm)),
        "eps+": block(1, 1, _gidentity(dp)),
        "eps*": block(2, 2, _gidentity(ds)),
        "a-": block(2, 0, r.a_minus),
        "a+": block(2, 1, r.a_plus),
        "b-": block(0, 2, r.b_minus),
        "b+": block(1, 2, r.b_plus),
        "t": block(0, 0, r.b_minus * r.a_minus)
        + block(1, 1, r.b_plus * r.a_plus)
        + block(2, 2, r.a_minus * r.b_minus),
    }
    _check_O_module(act, n, N)
    return act, (dm, dp, ds)


def _check_O_module(act, n, N):
    em, ep, es = act["eps-"], act["eps+"], act["eps*"]
    am, ap, bm, bp, t = act["a-"], act["a+"], act["b-"], act["b+"], act["t"]
    I = _gidentity(n)
    checks = [
        (em * em == em and ep * ep == ep and es * es == es, "idempotents"),
        ((em * ep).is_zero() and (em * es).is_zero() and (ep * es).is_zero()
         and (ep * em).is_zero() and (es * em).is_zero() and (es * ep).is_zero(),
         "orthogonality"),
        (em + ep + es == I, "idempotents sum to 1"),
        (es * am * em == am and es * ap * ep == ap, "a-arrows sit in eps* O eps_pm"),
        (em * bm * es == bm and ep * bp * es == bp, "b-arrows sit in eps_pm O eps*"),
        (am * bm == ap * bp, "a_- b_- == a_+ b_+"),
        (am * bm == t * es, "a_- b_- == t eps*"),
        (bm * am == t * em, "b_- a_- == t eps-"),
        (bp * ap == t * ep, "b_+ a_+ == t eps+"),
        # b_+ a_- and b_- a_+ are the off-diagonal generators t e21, t e12;
        # only the a_pm b_mp composites vanish in the order
        ((am * bp).is_zero() and (ap * bm).is_zero(), "a_-+ b_+- composites vanish"),
        (all(t * act[g] == act[g] * t for g in O_GENERATORS), "t central"),
    ]
    for ok, label in checks:
        if not ok:
            raise ArithmeticError(f"order relation failed: {label}")
    p = I
    for _ in range(N):
        p = p * t
    if not p.is_zero():
        raise ArithmeticError(f"t^{N} does not vanish: raise N")


def sigma_sharp_twist(act, dims):
    """Twist a module by the conjugate-linear order involution sigma.

    sigma swaps the two complex-conjugate slots of the order and conjugates
    scalars; the twisted module is the conjugate space with g acting through
    sigma(g).  In block coordinates: swap the V_- and V_+ blocks and replace
    act(g) by the entrywise conjugate of act(sigma(g)).
    """
    dm, dp, ds = dims
    n = dm + dp + ds
    perm = list(range(dm, dm + dp)) + list(range(dm)) + list(range(dm + dp, n))
    P = _gzero(n, n)
    for new, old in enumerate(perm):
        P.data[new][old] = _ONE
    Pt = P.transpose()
    out = {
        g: P * _conj_matrix(act[_SIGMA_SWAP[g]]) * Pt for g in O_GENERATORS
    }
    return out, (dp, dm, ds)


def conjugation_square_check(D, N=None):
    """Check the conjugation square commutes on the nose for the diagram D.

    Both paths around the square -- conjugate then restrict, restrict then
    conjugate -- must give equal matrices, and the induced order modules
    must agree under the sigma twist.  Returns "ok" or a mismatch report.
    """
    errs = validate_hc(D)
    if errs:
        return "invalid input: " + "; ".join(errs)
    r = restrict_to_gelfand(D)
    path1 = restrict_to_gelfand(conjugate_hc(D))
    path2 = conjugate_gelfand(r)
    if path1 != path2:
        return "restriction square does not commute"
    if N is None:
        idx, p = 1, r.core()
        while not p.is_zero():
            idx += 1
            p = p * r.core()
        N = idx + 1
    act, dims = quiver_to_O_module(r, N)
    act2, dims2 = quiver_to_O_module(path2, N)
    tw, dims_tw = sigma_sharp_twist(act, dims)
    if dims_tw != dims2:
        return "twisted module dimensions disagree"
    for g in O_GENERATORS:
        if tw[g] != act2[g]:
            return f"twisted module action of {g} disagrees"
    return "ok"


def transport_morphism(f, N):
    """Transport a GelfandMor to a map of the induced order modules.

    Returns (F, act_src, act_tgt): the block-diagonal matrix of
    (f_-, f_+, f_*) together with both module actions; F intertwines every
    generator action (checked).
    """
    src, _ = quiver_to_O_module(f.source, N)
    tgt, _ = quiver_to_O_module(f.target, N)
    r, s = f.source, f.target
    n_src = r.dm + r.dp + r.ds
    n_tgt = s.dm + s.dp + s.ds
    F = _gzero(n_tgt, n_src)
    blocks = (
        (0, 0, f.f_minus),
        (s.dm, r.dm, f.f_plus),
        (s.dm + s.dp, r.dm + r.dp, f.f_star),
    )
    for ro, co, B in blocks:
        for i in range(B.rows):
            for j in range(B.cols):
                F.data[ro + i][co + j] = B.data[i][j]
    for g in O_GENERATORS:
        if F * src[g] != tgt[g] * F:
            raise ArithmeticError(f"transported map fails to intertwine {g}")
    return F, src, tgt


def _random_gaussian(rng, real_only=False):
    re = mpq(rng.randint(-2, 2))
    im = mpq(0) if real_only else mpq(rng.randint(-2, 2))
    return Gaussian(re, im)


def _random_invertible(rng, d, real_only=False):
    if d == 0:
        return _gzero(0, 0)
    while True:
        M = Matrix(
            [[_random_gaussian(rng, real_only) for _ in range(d)] for _ in range(d)]
        )
        try:
            M.inverse()
            return M
        except (ArithmeticError, ValueError, ZeroDivisionError):
            continue


def random_hc_diagram(rng, real_only=False, max_dim=3):
    """Seeded diagram on the window -2..2 in the image of the restriction.

    Built from a strictly upper-triangular nilpotent core C on M_0 with
    a factorization x_{-2} y_0 = y_2 x_0 = C, then dressed by random
    invertible changes of basis on each component, so the central-slice
    relations hold exactly and validate_hc passes.
    """
    ds = rng.randint(0, max_dim)
    dm = rng.randint(ds, ds + 1)
    dp = rng.randint(ds, ds + 1)
    C = _gzero(ds, ds)
    for i in range(ds):
        for j in range(i + 1, ds):
            C.data[i][j] = _random_gaussian(rng, real_only)

    def arm(d_out):
        # a = [C | R] (ds x d_out), b = [I; 0] (d_out x ds): a b = C exactly
        a = _gzero(ds, d_out)
        b = _gzero(d_out, ds)
        for i in range(ds):
            for j in range(ds):
                a.data[i][j] = C.data[i][j]
            b.data[i][i] = _ONE
        for i in range(ds):
            for j in range(ds, d_out):
                a.data[i][j] = _random_gaussian(rng, real_only)
        G = _random_invertible(rng, d_out, real_only)
        return a * G, G.inverse() * b

    a_minus, b_minus = arm(dm)
    a_plus, b_plus = arm(dp)
    S = _random_invertible(rng, ds, real_only)
    Sinv = S.inverse()
    return HCDiagram(
        -2,
        2,
        {-2: dm, 0: ds, 2: dp},
        x={-2: S * a_minus, 0: b_plus * Sinv},
        y={0: b_minus * Sinv, 2: S * a_plus},
    )
