"""JSON (de)serialization for the library's value types.

Scalar encodings:
  - rational: string "3/4"
  - quadratic a + b*sqrt(D): {"a": "3/2", "b": "-1/2", "D": 5}
  - Gaussian re + im*i: two-element list ["re", "im"] of rational strings

File formats:
  - lattice map: {"source": ["L","Q"], "target": ["P"], "N": 8,
                  "entries": [[series, ...], ...]} with each series a list
                  of rational-string coefficients of t^0 .. t^(N-1)
                  (rows indexed by the source, columns by the target)
  - normal form: {"case": "II.d", "k": 1, "l": 0, "lambda": "1/2"}
  - quiver object: {"field": "Q" | "sqrtD", "u": 1, "v": 2,
                    "X1": [[..]], "X2": [[..]], "Y1": [[..]], "Y2": [[..]]}
  - algebra: {"dim": n, "labels": [...], "unit": [..],
              "sc": [[[..], ...], ...]} (structure constants, dense rows)
  - weight diagram: {"window": [n_min, n_max], "dims": {"0": 2},
                     "x": {"0": [[["re","im"], ...], ...]}, "y": {...}}
"""

import json

from gmpy2 import mpq

from .exact_core import Gaussian, Matrix, Quadratic, TruncSeries
from .hc_bridge import HCDiagram
from .lattices import SUMMAND_RANK, LatticeMap, NormalForm, rank_of
from .repq import RepQObj

__all__ = [
    "FormatError",
    "scalar_to_json",
    "scalar_from_json",
    "lattice_map_to_json",
    "lattice_map_from_json",
    "normal_form_to_json",
    "normal_form_from_json",
    "repq_obj_to_json",
    "repq_obj_from_json",
    "algebra_to_json",
    "algebra_from_json",
    "hc_diagram_to_json",
    "hc_diagram_from_json",
    "dump",
    "load",
]


class FormatError(ValueError):
    """Raised on malformed input documents."""


def scalar_to_json(s):
    if isinstance(s, Quadratic):
        return {"a": str(s.a), "b": str(s.b), "D": s.D}
    if isinstance(s, Gaussian):
        return [scalar_to_json(s.re), scalar_to_json(s.im)]
    return str(mpq(s))


def scalar_from_json(doc):
    try:
        if isinstance(doc, dict):
            return Quadratic(mpq(doc["a"]), mpq(doc["b"]), int(doc["D"]))
        if isinstance(doc, list):
            if len(doc) != 2:
                raise FormatError("a complex scalar needs exactly [re, im]")
            return Gaussian(scalar_from_json(doc[0]), scalar_from_json(doc[1]))
        return mpq(str(doc))
    except FormatError:
        raise
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise FormatError(f"bad scalar {doc!r}: {exc}") from exc


def _rational_matrix_to_json(M):
    return [[scalar_to_json(x) for x in row] for row in M.data]


def _matrix_from_json(doc, rows, cols, what):
    if not isinstance(doc, list) or len(doc) != rows:
        raise FormatError(f"{what}: expected {rows} rows")
    data = []
    for row in doc:
        if not isinstance(row, list) or len(row) != cols:
            raise FormatError(f"{what}: expected {cols} columns")
        data.append([scalar_from_json(x) for x in row])
    return Matrix(data, rows, cols)


# ---------------------------------------------------------------------------
# lattice maps


def lattice_map_to_json(phi):
    return {
        "source": list(phi.source),
        "target": list(phi.target),
        "N": phi.N,
        "entries": [
            [list(map(str, x.c)) for x in row] for row in phi.X.data
        ],
    }


def lattice_map_from_json(doc):
    try:
        source = tuple(doc["source"])
        target = tuple(doc["target"])
        N = int(doc["N"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"lattice map document: {exc}") from exc
    for s in source + target:
        if s not in SUMMAND_RANK:
            raise FormatError(f"unknown lattice summand {s!r}")
    if N < 1:
        raise FormatError("N must be >= 1")
    rs, rt = rank_of(source), rank_of(target)
    if not isinstance(entries, list) or len(entries) != rs:
        raise FormatError(f"entries: expected {rs} rows")
    data = []
    for row in entries:
        if not isinstance(row, list) or len(row) != rt:
            raise FormatError(f"entries: expected {rt} columns")
        out = []
        for series in row:
            if not isinstance(series, list) or len(series) > N:
                raise FormatError("series: expected <= N coefficients")
            try:
                coeffs = [mpq(str(c)) for c in series]
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(f"bad series coefficient: {exc}") from exc
            coeffs += [mpq(0)] * (N - len(coeffs))
            out.append(TruncSeries(coeffs, N))
        data.append(out)
    try:
        return LatticeMap(source, target, Matrix(data, rs, rt), N)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# ---------------------------------------------------------------------------
# normal forms


def normal_form_to_json(nf):
    doc = {"case": nf.case, "k": nf.k, "l": nf.l}
    if nf.lam is not None:
        doc["lambda"] = scalar_to_json(nf.lam)
    return doc


def normal_form_from_json(doc):
    try:
        lam = doc.get("lambda")
        return NormalForm(
            doc["case"],
            int(doc["k"]),
            int(doc.get("l", 0)),
            scalar_from_json(lam) if lam is not None else None,
        )
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"normal form document: {exc}") from exc


# ---------------------------------------------------------------------------
# quiver-presentation objects


def repq_obj_to_json(M):
    field = "sqrtD" if any(
        isinstance(x, Quadratic)
        for B in (M.X1, M.X2, M.Y1, M.Y2)
        for row in B.data
        for x in row
    ) else "Q"
    return {
        "field": field,
        "u": M.u,
        "v": M.v,
        "X1": _rational_matrix_to_json(M.X1),
        "X2": _rational_matrix_to_json(M.X2),
        "Y1": _rational_matrix_to_json(M.Y1),
        "Y2": _rational_matrix_to_json(M.Y2),
    }


def repq_obj_from_json(doc, check=True):
    try:
        u, v = int(doc["u"]), int(doc["v"])
        blocks = {
            name: _matrix_from_json(doc[name], *shape, what=name)
            for name, shape in (
                ("X1", (v, u)),
                ("X2", (v, u)),
                ("Y1", (u, v)),
                ("Y2", (u, v)),
            )
        }
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"quiver object document: {exc}") from exc
    try:
        return RepQObj(
            u, v, blocks["X1"], blocks["X2"], blocks["Y1"], blocks["Y2"],
            check=check,
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# ---------------------------------------------------------------------------
# structure-constant algebras


def algebra_to_json(alg):
    sc = [
        [
            [scalar_to_json(alg.sc[i][j].get(k, mpq(0))) for k in range(alg.dim)]
            for j in range(alg.dim)
        ]
        for i in range(alg.dim)
    ]
    return {
        "dim": alg.dim,
        "labels": list(alg.labels) if alg.labels else None,
        "unit": [scalar_to_json(u) for u in alg.unit],
        "sc": sc,
    }


def algebra_from_json(doc, check=True):
    from .algebra_lab import FinDimAlgebra

    try:
        dim = int(doc["dim"])
        unit = [scalar_from_json(x) for x in doc["unit"]]
        sc = [
            [
                {
                    k: s
                    for k, s in enumerate(
                        scalar_from_json(x) for x in doc["sc"][i][j]
                    )
                    if bool(s)
                }
                for j in range(dim)
            ]
            for i in range(dim)
        ]
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"algebra document: {exc}") from exc
    return FinDimAlgebra(dim, sc, unit, labels=doc.get("labels"), check=check)


# ---------------------------------------------------------------------------
# weight diagrams


def hc_diagram_to_json(D):
    return {
        "window": [D.n_min, D.n_max],
        "dims": {str(n): d for n, d in D.dims.items() if d},
        "x": {
            str(n): _rational_matrix_to_json(D.xmap(n))
            for n in D.weights()
            if not D.xmap(n).is_zero()
        },
        "y": {
            str(n): _rational_matrix_to_json(D.ymap(n))
            for n in D.weights()
            if not D.ymap(n).is_zero()
        },
    }


def _as_gaussian(s):
    return s if isinstance(s, Gaussian) else Gaussian(mpq(s))


def hc_diagram_from_json(doc):
    try:
        n_min, n_max = (int(b) for b in doc["window"])
        dims = {int(n): int(d) for n, d in doc.get("dims", {}).items()}
        dd = lambda n: dims.get(n, 0)
        x = {
            int(n): _matrix_from_json(
                m, dd(int(n) + 2), dd(int(n)), what=f"x[{n}]"
            ).map(_as_gaussian)
            for n, m in doc.get("x", {}).items()
        }
        y = {
            int(n): _matrix_from_json(
                m, dd(int(n) - 2), dd(int(n)), what=f"y[{n}]"
            ).map(_as_gaussian)
            for n, m in doc.get("y", {}).items()
        }
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"diagram document: {exc}") from exc
    try:
        return HCDiagram(n_min, n_max, dims, x, y)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# ---------------------------------------------------------------------------
# file helpers


def dump(doc, path):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc
