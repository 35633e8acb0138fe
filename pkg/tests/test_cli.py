import io
import json
import subprocess
import sys

import pytest

from carnotpq import catalog
from carnotpq.cli import main, parse_form_spec
from carnotpq.documents import DocumentError, dumps, to_document
from carnotpq.lie import GradedMap
from carnotpq.linalg import Matrix
from carnotpq.pullback import sample_automorphisms


@pytest.fixture
def emit(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.json"
        path.write_text(dumps(to_document(catalog.get(name).build())))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--report", "json")
    return code, json.loads(out)


def test_catalog_emit_then_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "emit", "z5-k2")
    assert code == 0
    path = tmp_path / "z5.json"
    path.write_text(out)
    code, rep = run_json(capsys, "pq", "verify", str(path))
    assert code == 0 and rep["passed"] and rep["failed"] == []


def test_diag_n2_fails_distinct_lines(capsys, emit):
    code, rep = run_json(capsys, "pq", "verify", emit("diag-n2"))
    assert code == 1 and rep["failed"] == ["distinct_lines"]
    assert rep["witnesses"]["distinct_lines"]["factors"] == [0, 1]


def test_forms_suite_h1(capsys, emit):
    code, out, _ = run(capsys, "forms", "suite", emit("h1"))
    assert code == 0 and "passed: True" in out


def test_validate_and_classify(capsys, emit):
    code, rep = run_json(capsys, "validate", emit("diag-n3"))
    assert code == 0 and rep["valid"] and rep["nu"] == 10
    code, rep = run_json(capsys, "classify", emit("z5-k2"))
    assert code == 0 and rep["label"] == "product_quotient_candidate(R,5,1)"
    code, rep = run_json(capsys, "decompose", emit("h1-plus-q"))
    assert code == 1 and rep["status"] == "refuted"


def test_classify_with_witness_file(capsys, emit, tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"version": 1, "kind": "vectors", "d": 0, "n": 5, "vectors": [["1", "0", "0", "0", "0"]]}))
    code, rep = run_json(capsys, "classify", emit("h2"), "--witness", str(path))
    assert code == 0 and rep["verdict"] == "heisenberg"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"version": 1, "kind": "vectors", "d": 0, "n": 2, "vectors": [["1", "0"]]}))
    code, _, err = run(capsys, "classify", emit("h2"), "--witness", str(bad))
    assert code == 2 and "witness" in err


def test_pq_pipeline(capsys, emit):
    code, rep = run_json(capsys, "pq", "build", emit("z5-k2"))
    assert code == 0 and (rep["N"], rep["nu"]) == (13, 16)
    code, rep = run_json(capsys, "pq", "partition", emit("two-triples"))
    assert rep["partition"] == [[0, 1, 2], [3, 4, 5]] and len(rep["blocks"]) == 2
    code, rep = run_json(capsys, "pq", "normalize", emit("weighted-n3"))
    assert code == 0 and rep["psi_second_layer"] == ["2", "3", "1"]
    code, rep = run_json(capsys, "pq", "normalize", emit("z5-k2"))
    assert code == 1 and not rep["passed"]


def test_aut_commands(capsys, emit, tmp_path):
    p = catalog.get("diag-n3").build()
    phi = sample_automorphisms(p, 1, seed=2)[0]
    mpath = tmp_path / "phi.json"
    mpath.write_text(dumps(to_document(phi)))
    code, rep = run_json(capsys, "aut", "check", emit("diag-n3"), "--map", str(mpath))
    assert code == 0 and rep["automorphism"] and "lambda" in rep["lambda_s_p"]
    assert isinstance(rep["fixes_K_pointwise"], bool)
    singular = GradedMap.from_blocks([Matrix.zeros(6, 6), Matrix.zeros(3, 3)])
    mpath.write_text(dumps(to_document(singular)))
    code, rep = run_json(capsys, "aut", "check", emit("diag-n3"), "--map", str(mpath))
    assert code == 1 and not rep["automorphism"]
    code, rep = run_json(capsys, "aut", "orbits", emit("blocks-n4"))
    assert code == 0 and rep["orbits"] == [[0, 1], [2, 3]] and rep["block_dims"] == [1, 1]


def test_pullback_commands(capsys, emit):
    path = emit("diag-n3")
    code, rep = run_json(capsys, "pullback", "admissible", path, "--alpha", "omega_ij:0,1", "--beta", "ix_beta:0,2")
    assert code == 0 and rep["admissible"]
    code, rep = run_json(capsys, "pullback", "admissible", path, "--alpha", "omega", "--beta", "theta:0")
    assert code == 1 and not rep["degree_ok"]
    code, rep = run_json(capsys, "pullback", "identities", path, "--samples", "2")
    assert code == 0 and rep["case"] == "diagonal" and rep["key_wedge"]["rows"] == 108
    code, rep = run_json(capsys, "pullback", "identities", emit("z5-k2"), "--samples", "2")
    assert code == 0 and rep["case"] == "conformal" and len(rep["automorphisms"]) == 2
    code, rep = run_json(capsys, "pullback", "identities", emit("h2-diag-n2"), "--samples", "1")
    assert code == 0 and rep["case"] == "two-vector" and rep["kernel_dims"] == [5, 5]


def test_pullback_identities_with_supplied_map(capsys, emit, tmp_path):
    p = catalog.z5_k2()
    phi = sample_automorphisms(p, 1, seed=9)[0]
    mpath = tmp_path / "phi.json"
    mpath.write_text(dumps(to_document(phi)))
    code, rep = run_json(capsys, "pullback", "identities", emit("z5-k2"), "--aut", str(mpath))
    assert code == 0 and len(rep["automorphisms"]) == 1


def test_form_specs():
    p = catalog.get("diag-n3").build()
    for spec in ["omega", "gamma:1", "tau:0,2", "omega_ij:0,1", "beta:2", "ix_beta:0,2", "theta:0,1", "i_omega:0,1"]:
        assert parse_form_spec(spec, p) is not None
    z = catalog.z5_k2()
    parse_form_spec("iz_omega:1,0,0,0,0", z)
    parse_form_spec("ix_iz_omega:0;0,1,0,0,0", z)
    for bad in ["nonsense", "gamma:x", "tau:0"]:
        with pytest.raises(DocumentError):
            parse_form_spec(bad, p)
    with pytest.raises(DocumentError):
        parse_form_spec("gamma:0", catalog.get("h1").build())


def test_stdin_input(capsys, monkeypatch):
    doc = dumps(to_document(catalog.get("h2").build()))
    monkeypatch.setattr(sys, "stdin", io.StringIO(doc))
    code, rep = run_json(capsys, "validate", "-")
    assert code == 0 and rep["valid"]


def test_malformed_input_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{]")
    assert run(capsys, "validate", str(bad))[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "catalog", "emit", "missing")[0] == 2


def test_wrong_document_kind(capsys, emit):
    code, _, err = run(capsys, "pq", "verify", emit("h1"))
    assert code == 2 and "presentation" in err


def test_invalid_algebra_exit_one(capsys, tmp_path):
    doc = {"version": 1, "kind": "algebra", "d": 0, "name": "bad", "layers": [2, 2], "brackets": [[0, 1, 2, "1"]]}
    path = tmp_path / "a.json"
    path.write_text(json.dumps(doc))
    code, rep = run_json(capsys, "validate", str(path))
    assert code == 1 and rep["violations"]


def test_catalog_list_and_check(capsys):
    code, rep = run_json(capsys, "catalog", "list")
    assert code == 0 and len(rep["entries"]) == len(catalog.ENTRIES)
    code, rep = run_json(capsys, "catalog", "check", "diag-n2", "z4-pair13")
    assert code == 0 and rep["passed"]


def test_text_report_is_readable(capsys, emit):
    code, out, _ = run(capsys, "pq", "build", emit("diag-n3"))
    assert code == 0 and "N: 8" in out and "layers: [6, 2]" in out


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "carnotpq", "catalog", "emit", "h1"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["kind"] == "algebra"
