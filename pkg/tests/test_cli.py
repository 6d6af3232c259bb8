import json

from gmpy2 import mpq

from gelfand_lab import serialize
from gelfand_lab.cli import main
from gelfand_lab.exact_core import Matrix, TruncSeries
from gelfand_lab.lattices import LatticeMap
from gelfand_lab.repq import schurian_objects


def _write_pp_map(path, N=8):
    t = TruncSeries.t_power
    z = TruncSeries.zero(N)
    phi = LatticeMap(("P",), ("P",),
                     Matrix([[t(1, N), z], [z, t(1, N)]]), N)
    serialize.dump(serialize.lattice_map_to_json(phi), str(path))


def test_verify_schurian_passes(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main(["verify", "schurian", "--out", str(out)])
    text = capsys.readouterr().out
    assert code == 0
    assert "overall: pass" in text
    assert "seed: 0" in text and "N: 8" in text
    doc = json.loads(out.read_text())
    assert doc["overall"] == "pass"


def test_verify_reports_are_deterministic(capsys):
    main(["verify", "schurian"])
    first = capsys.readouterr().out
    main(["verify", "schurian"])
    second = capsys.readouterr().out
    assert first == second


def test_reduce_identity_matrix(capsys, tmp_path):
    f = tmp_path / "pp.json"
    _write_pp_map(f)
    out = tmp_path / "nf.json"
    code = main(["reduce", str(f), "--out", str(out)])
    text = capsys.readouterr().out
    assert code == 0
    assert "case=II.d k=1 l=0" in text and 'lambda="1"' in text
    assert json.loads(out.read_text())["case"] == "II.d"
    assert (tmp_path / "nf.eta.json").exists()
    assert (tmp_path / "nf.xi.json").exists()


def test_reduce_parse_error_exit_1(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(
        {"source": ["Q"], "target": ["Q"], "N": 4, "entries": [[["1/0"]]]}))
    assert main(["reduce", str(f)]) == 1


def test_reduce_non_iso_exit_2(capsys, tmp_path):
    f = tmp_path / "zero.json"
    f.write_text(json.dumps(
        {"source": ["Q"], "target": ["Q"], "N": 4, "entries": [[["0"]]]}))
    assert main(["reduce", str(f)]) == 2


def test_inspect_simple_object(capsys, tmp_path):
    f = tmp_path / "S.json"
    serialize.dump(serialize.repq_obj_to_json(schurian_objects()[0]), str(f))
    assert main(["inspect", str(f)]) == 0
    text = capsys.readouterr().out
    assert "dimension vector: (1, 0)" in text
    assert "schurian: yes" in text
    assert "End dimension: 2" in text


def test_inspect_example_module(capsys, tmp_path):
    f = tmp_path / "c1.json"
    serialize.dump(serialize.repq_obj_to_json(schurian_objects()[4]), str(f))
    main(["inspect", str(f)])
    text = capsys.readouterr().out
    assert "top: S^0 + T^2" in text
    assert "absolutely cyclic (simple top): no" in text


def test_iso_and_hom_commands(capsys, tmp_path):
    objs = schurian_objects()
    fa, fb = tmp_path / "a.json", tmp_path / "b.json"
    serialize.dump(serialize.repq_obj_to_json(objs[4]), str(fa))
    serialize.dump(serialize.repq_obj_to_json(objs[5]), str(fb))
    assert main(["iso", str(fa), str(fa)]) == 0
    assert main(["iso", str(fa), str(fb)]) == 2
    assert main(["hom", str(fa), str(fa)]) == 0
    out = capsys.readouterr().out
    assert "hom dimension: 2" in out


def test_coker_command(capsys, tmp_path):
    f = tmp_path / "pp.json"
    _write_pp_map(f)
    out = tmp_path / "M.json"
    assert main(["coker", str(f), "--out", str(out)]) == 0
    assert "dimension vector: (2, 2)" in capsys.readouterr().out
    M = serialize.repq_obj_from_json(json.loads(out.read_text()))
    assert (M.u, M.v) == (2, 2)


def test_dual_command(capsys, tmp_path):
    f = tmp_path / "c1.json"
    serialize.dump(serialize.repq_obj_to_json(schurian_objects()[4]), str(f))
    assert main(["dual", str(f)]) == 0
    doc = json.loads(capsys.readouterr().out)
    D = serialize.repq_obj_from_json(doc)
    assert (D.u, D.v) == (1, 2)
