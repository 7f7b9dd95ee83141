import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from natdual.algebra import enumerate_homs
from natdual.catalog import catalog_get, duplicator_path
from natdual.cli import run
from natdual.io import (FormatError, algebra_from_json, algebra_to_json, load_json,
                        term_from_json_checked, validate)
from natdual.report import EXIT_CAP, EXIT_FAILED, EXIT_OK, EXIT_USAGE, parse_report, render_json


def _run(*argv):
    out = io.StringIO()
    code, rep = run(list(argv), out)
    return code, rep, out.getvalue()


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


PRIESTLEY = {"size": 2, "relations": {"leq": {"arity": 2, "tuples": [[0, 0], [0, 1], [1, 1]]}},
             "operations": {}, "over": "bounded_dl_2"}


# -- validation ---------------------------------------------------------------------------


def test_validate_algebra(tmp_path):
    p = _write(tmp_path, "two.json", algebra_to_json(catalog_get("bounded_dl_2").algebra))
    assert validate(p)["kind"] == "algebra"
    code, rep, _ = _run("alg", "validate", p)
    assert code == EXIT_OK and rep.verdicts["kind"] == "algebra"


def test_algebra_round_trip():
    A = catalog_get("db4").algebra
    B = algebra_from_json(json.loads(json.dumps(algebra_to_json(A))))
    assert B.size == A.size
    for op, _ in A.signature:
        assert np.array_equal(B.table(op), A.table(op))


def test_bad_table_entry_located(tmp_path):
    d = algebra_to_json(catalog_get("bounded_dl_2").algebra)
    d["tables"]["meet"][1][0] = 5
    with pytest.raises(FormatError) as ei:
        algebra_from_json(d)
    assert ei.value.path == "tables.meet[1][0]"
    code, rep, _ = _run("alg", "validate", _write(tmp_path, "bad.json", d))
    assert code == EXIT_USAGE and rep.witnesses["path"] == "tables.meet[1][0]"


def test_term_out_of_range_variable(tmp_path):
    t = {"op": "join", "args": [{"var": 0}, {"var": 2}], "arity": 2}
    with pytest.raises(FormatError):
        term_from_json_checked(t)
    code, rep, _ = _run("alg", "validate", _write(tmp_path, "t.json", t))
    assert code == EXIT_USAGE and rep.witnesses["path"] == "var"
    ok = dict(t, arity=3)
    assert str(term_from_json_checked(ok))


def test_mutated_ego_reports_compatibility(tmp_path):
    assert validate(_write(tmp_path, "p.json", PRIESTLEY))["compatible_with"] == "bounded_dl_2"
    bad = json.loads(json.dumps(PRIESTLEY))
    bad["relations"]["leq"]["tuples"].remove([0, 0])
    code, rep, _ = _run("alg", "validate", _write(tmp_path, "q.json", bad))
    assert code == EXIT_USAGE
    assert rep.verdicts["error"] == "CompatibilityError"
    assert "compatibility violation" in rep.witnesses["message"]
    assert "'leq'" in rep.witnesses["message"]


def test_invalid_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{nope")
    code, rep, _ = _run("alg", "validate", str(p))
    assert code == EXIT_USAGE


# -- the headline invocations ------------------------------------------------------------


def test_dup_check_gamma_db():
    code, rep, text = _run("dup", "check", "gamma_db.json", "bounded_dl_2")
    assert code == EXIT_OK
    assert {c: rep.verdicts[c] for c in "LMP"} == {"L": "HOLDS", "M": "HOLDS", "P": "HOLDS"}
    assert "OK" in text.splitlines()[0]


def test_dual_check_db4_subpowers():
    code, rep, _ = _run("dual", "check", "--ego", "transferred", "db4-subpowers")
    assert code == EXIT_OK


def test_split_three_element(data_dir):
    path = os.path.join(data_dir, "three_element.json")
    code, rep, _ = _run("dup", "split", "gamma_db.json", path, "--json")
    assert code == EXIT_FAILED
    assert rep.verdicts["code"] == "NOT_SEPARATED"
    a, b = rep.witnesses["elements"]
    # replay: no homomorphism into the duplicated generator tells a from b
    A = algebra_from_json(load_json(path))
    assert all(h.map[a] == h.map[b] for h in enumerate_homs(A, catalog_get("db4").algebra))


def test_duplicator_by_path():
    code, _, _ = _run("dup", "check", duplicator_path("gamma_db"), "bounded_dl_2")
    assert code == EXIT_OK


# -- reports ------------------------------------------------------------------------------


def test_json_reports_are_deterministic():
    argv = ["dual", "free", "2", "--over", "bounded_dl_2", "--json"]
    _, _, a = _run(*argv)
    _, _, b = _run(*argv)
    assert a == b and a.endswith("\n")


def test_report_round_trip():
    _, rep, text = _run("dup", "check", "gamma_db.json", "bounded_dl_2", "--json")
    back = parse_report(text)
    assert back == parse_report(render_json(back))
    assert render_json(back) == text


def test_cap_hit_exits_3():
    code, rep, _ = _run("alg", "hom", "bounded_dl_2", "bounded_dl_2", "--max-homs", "0")
    assert code == EXIT_CAP and rep.verdicts["status"] == "UNKNOWN"


def test_usage_errors_exit_2(capsys):
    assert _run("alg")[0] == EXIT_USAGE
    assert _run("dup", "check", "gamma_db.json", "no_such_key")[0] == EXIT_USAGE
    assert _run("dup", "check", "no_such_dup", "bounded_dl_2")[0] == EXIT_USAGE


def test_catalog_and_ockham_verbs():
    code, rep, _ = _run("catalog", "list")
    assert code == EXIT_OK
    code, rep, text = _run("ockham", "term", "--kind", "t", "--word", "e1e2")
    assert code == EXIT_OK and "f(g(x0))" in text


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "natdual.cli", "catalog", "get", "db4", "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verb"] == "catalog get"
