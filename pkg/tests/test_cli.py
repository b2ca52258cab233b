import io
import json
import subprocess
import sys

import pytest

from helpers import CORPUS

from softsession import cli
from softsession.cli import run_cli
from softsession.dynamics import NoWitness
from softsession.program import load, resolve, resolve_all


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


DUPSER = CORPUS / "dupser.sst"
SHOP = CORPUS / "shop.sst"


def test_check_dsll_rejects_dupser():
    code, out, _ = run("check", DUPSER, "--mode", "dsll")
    assert code == 1
    assert "reused-auxiliary on x1" in out and "(count 2)" in out


def test_check_dill_accepts_dupser():
    code, out, _ = run("check", DUPSER, "--mode", "dill")
    assert code == 0 and "dill (reference mode)" in out


def test_check_in_parallel_matches_sequential():
    seq = json.loads(run("check", SHOP, "--json")[1])
    par = json.loads(run("check", SHOP, "--json", "--jobs", "3")[1])
    assert seq == par


def test_measures_json():
    code, out, _ = run("measures", SHOP, "--def", "composed", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["weight"] >= rep["processSize"]


def test_analyze_composed():
    code, out, _ = run("analyze", SHOP, "--def", "composed", "--json")
    assert code == 0 and json.loads(out)["withinBounds"] is True


def test_analyze_dill_has_no_verdict():
    code, out, _ = run("analyze", CORPUS / "mulser.sst", "--def", "system")
    assert code == 0 and "no verdict (reference mode)" in out


def test_reduce_trace():
    code, out, _ = run("reduce", SHOP, "--def", "purchase", "--trace", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["steps"] == len(rep["trace"]) == 9
    assert rep["final"] == "0" and not rep["exhausted"]


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("SST_BUDGET", "3")
    rep = json.loads(run("reduce", SHOP, "--def", "purchase", "--json")[1])
    assert rep["steps"] == 3 and rep["exhausted"]
    monkeypatch.setenv("SST_BUDGET", "lots")
    assert run("reduce", SHOP, "--def", "purchase")[0] == 2


def test_kernel():
    code, out, _ = run("kernel", CORPUS / "kernel.sst", "--json")
    rep = json.loads(out)
    assert code == 0 and all(d["ok"] for d in rep["derivations"])


def test_kernel_rejection(tmp_path):
    f = tmp_path / "bad.sst"
    f.write_text("derivation bad = (1L y (1L y (1R x)))\n")
    code, out, _ = run("kernel", f)
    assert code == 1 and "rejected by the kernel" in out


def test_malformed_inputs(tmp_path):
    f = tmp_path / "bad.sst"
    f.write_text("process d gives x:1 = (0\n")
    code, _, err = run("check", f)
    assert code == 2 and "syntax error" in err
    assert run("check", tmp_path / "missing.sst")[0] == 2
    assert run("measures", SHOP, "--def", "nobody")[0] == 2
    assert run("frobnicate")[0] == 2


def test_internal_failure(monkeypatch):
    def boom(*args, **kwargs):
        raise NoWitness("stuck")

    monkeypatch.setattr(cli, "analyze", boom)
    code, _, err = run("analyze", SHOP, "--def", "composed")
    assert code == 3 and "internal invariant" in err


def test_rejected_definition_exit_code():
    code, out, _ = run("measures", DUPSER, "--def", "dupser0", "--mode", "dsll")
    assert code == 1 and "rejected" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "softsession", "check", str(DUPSER), "--mode", "dill"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0


def test_program_resolution():
    src = load(SHOP)
    assert all(r.ok for r in resolve_all(src))
    with pytest.raises(KeyError):
        resolve(src, "nobody")
