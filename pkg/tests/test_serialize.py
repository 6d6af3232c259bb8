import json
import random

import pytest
from gmpy2 import mpq

from gelfand_lab import serialize
from gelfand_lab.algebra_lab import truncated_order
from gelfand_lab.exact_core import Gaussian, Quadratic
from gelfand_lab.hc_bridge import random_hc_diagram, validate_hc
from gelfand_lab.lattices import (
    NormalForm,
    build_normal_map,
    random_automorphism,
    random_normal_form,
)
from gelfand_lab.repq import schurian_objects


def _rt(doc):
    return json.loads(json.dumps(doc))


def test_scalar_roundtrips():
    for s in (mpq(3, 4), mpq(-7), Quadratic(mpq(1, 2), mpq(-1, 3), 5),
              Gaussian(mpq(2), mpq(-5, 2))):
        assert serialize.scalar_from_json(_rt(serialize.scalar_to_json(s))) == s


def test_lattice_map_roundtrip_seeded():
    rng = random.Random(0)
    for _ in range(8):
        nf = random_normal_form(rng)
        phi = build_normal_map(nf, 8)
        phi = random_automorphism(phi.source, 8, rng).then(phi)
        doc = _rt(serialize.lattice_map_to_json(phi))
        assert serialize.lattice_map_from_json(doc) == phi


def test_normal_form_roundtrip():
    for nf in (
        NormalForm("I.a", 2),
        NormalForm("II.d", 1, 0, mpq(1, 2)),
        NormalForm("II.d", 2, 0, Quadratic(mpq(3, 2), mpq(-1, 2), 5)),
        NormalForm("II.c-ii", 0, 2),
    ):
        assert serialize.normal_form_from_json(_rt(serialize.normal_form_to_json(nf))) == nf


def test_repq_obj_roundtrip():
    for o in schurian_objects():
        assert serialize.repq_obj_from_json(_rt(serialize.repq_obj_to_json(o))) == o


def test_hc_diagram_roundtrip():
    for seed in range(3):
        D = random_hc_diagram(random.Random(seed))
        D2 = serialize.hc_diagram_from_json(_rt(serialize.hc_diagram_to_json(D)))
        assert D2 == D and validate_hc(D2) == []


def test_algebra_roundtrip():
    alg = truncated_order("A", 2)
    alg2 = serialize.algebra_from_json(_rt(serialize.algebra_to_json(alg)))
    assert (alg2.dim, alg2.sc, alg2.unit) == (alg.dim, alg.sc, alg.unit)


def test_malformed_documents_raise_format_error():
    bad_docs = [
        ({"case": "II.d", "k": 1, "l": 0, "lambda": "1/0"},
         serialize.normal_form_from_json),
        ({"case": "nope", "k": 1}, serialize.normal_form_from_json),
        ({"source": ["Q"], "target": ["Q"], "N": 4, "entries": [[["1/0"]]]},
         serialize.lattice_map_from_json),
        ({"source": ["Z"], "target": ["Q"], "N": 4, "entries": [[["1"]]]},
         serialize.lattice_map_from_json),
        ({"u": 1, "v": 1, "X1": [[{}]], "X2": [["0"]], "Y1": [["0"]],
          "Y2": [["0"]]}, serialize.repq_obj_from_json),
    ]
    for doc, parser in bad_docs:
        with pytest.raises(serialize.FormatError):
            parser(doc)


def test_invalid_relations_rejected_on_load():
    doc = {"field": "Q", "u": 1, "v": 1, "X1": [["1"]], "X2": [["1"]],
           "Y1": [["1"]], "Y2": [["1"]]}
    with pytest.raises(serialize.FormatError):
        serialize.repq_obj_from_json(doc)
