import json
import subprocess
import sys
from pathlib import Path

import pytest

from ordmoss.cli import main

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,code", [
    (["prove", CORPUS / "nabla_empty.seq"], 0),
    (["prove", CORPUS / "chain_product.seq"], 0),
    (["prove", CORPUS / "atoms_refuted.seq"], 1),
    (["lift", CORPUS / "product.rel"], 0),
    (["base", CORPUS / "lowerset.base"], 0),
    (["eval", CORPUS / "stream_a.model", "nabla (1, and())"], 0),
    (["eval", CORPUS / "stream_a.model", "nabla (1, and())", "--state", "s0"], 1),
    (["simulate", CORPUS / "stream_a.model", CORPUS / "stream_b.model"], 1),
    (["simulate", CORPUS / "stream_b.model", CORPUS / "stream_b.model"], 0),
    (["distinguish", CORPUS / "stream_a.model", CORPUS / "stream_b.model"], 0),
    (["distinguish", CORPUS / "stream_b.model", CORPUS / "stream_b.model"], 1),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_trace_of_nabla_empty(capsys):
    code, out, _ = run(capsys, "prove", CORPUS / "nabla_empty.seq", "--trace")
    assert code == 0
    assert "nabla-r" in out and "nabla-delta" in out


def test_prove_cross_checks_small_models(capsys):
    code, out, _ = run(capsys, "prove", CORPUS / "nabla_empty.seq", "--max-states", 2)
    assert code == 0 and "refuting it: 0" in out


def test_countermodel_output_is_a_model_file(capsys, tmp_path):
    code, out, _ = run(capsys, "prove", CORPUS / "atoms_refuted.seq")
    assert code == 1
    f = tmp_path / "cm.model"
    f.write_text(out)
    assert run(capsys, "eval", f, "p")[0] == 0
    assert run(capsys, "eval", f, "q")[0] == 1


def test_depth_comparison_of_streams(capsys):
    a, b = CORPUS / "stream_a.model", CORPUS / "stream_b.model"
    _, out, _ = run(capsys, "simulate", a, b, "--depth", 2)
    assert "depth 2: yes" in out and "not simulated" in out
    _, out, _ = run(capsys, "simulate", a, b, "--depth", 3)
    assert "depth 3: no" in out


def test_check_proof_accepts_and_rejects(capsys, tmp_path):
    code, out, _ = run(capsys, "prove", CORPUS / "chain_product.seq", "--json")
    assert code == 0
    doc = json.loads(out)
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"language": doc["language"], "proof": doc["proof"]}))
    assert run(capsys, "check-proof", good)[0] == 0

    # drop the premises of the first node that has any
    def strip(node):
        if node["premises"]:
            node["premises"] = []
            return True
        return any(strip(k) for k in node["premises"])

    proof = doc["proof"]
    assert strip(proof)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"language": doc["language"], "proof": proof}))
    code, out, _ = run(capsys, "check-proof", bad)
    assert code == 1 and out.startswith("invalid")


def test_json_output(capsys):
    code, out, _ = run(capsys, "distinguish", CORPUS / "stream_a.model", CORPUS / "stream_b.model", "--json")
    data = json.loads(out)
    assert code == 0 and data["depth"] == 3


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "prove", tmp_path / "missing.seq")[0] == 2
    bad = tmp_path / "bad.seq"
    bad.write_text("functor low(id\nsequent p => q\n")
    code, _, err = run(capsys, "prove", bad)
    assert code == 2 and "line" in err
    shape = tmp_path / "shape.seq"
    shape.write_text("functor low(id)\nsequent nabla (p, q) => p\n")
    assert run(capsys, "prove", shape)[0] == 3
    assert run(capsys, "eval", CORPUS / "stream_a.model", "p", "--state", "nowhere")[0] == 3
    assert run(capsys, "check-proof", bad)[0] == 2
    assert run(capsys, "no-such-command")[0] == 2


def test_functor_override(capsys):
    assert run(capsys, "prove", CORPUS / "atoms_refuted.seq", "--functor", "up(id)")[0] == 1


def test_ordered_exponent_gap_is_reported(capsys, tmp_path):
    f = tmp_path / "exp.seq"
    f.write_text("poset Two { elems: 0, 1; leq: 0 < 1 }\nfunctor id ^ Two\n"
                 "poset At { elems: p; leq: }\natoms At\n"
                 "sequent delta [0: and(p), 1: and(p)] => nabla [0: p, 1: p]\n")
    code, _, err = run(capsys, "prove", f)
    assert code == 3 and "countermodel" in err


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "ordmoss", "prove", str(CORPUS / "nabla_empty.seq")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("provable")
