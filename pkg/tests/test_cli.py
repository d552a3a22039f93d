import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from dmt.cli import EXHAUSTED, INPUT_ERROR, OK, REJECTED, main
from dmt.theories import load_axioms
from dmt.theoryfile import load_theory

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([*argv, "--format", "records"])
    out = capsys.readouterr().out
    records = [json.loads(line) for line in out.splitlines() if line.strip()]
    return code, records


def one(capsys, *argv):
    code, records = run(capsys, *argv)
    assert len(records) == 1, records
    return code, records[0]


# --- normalize / whnf / congruent --------------------------------------------


def test_normalize_examples(capsys):
    code, rec = one(capsys, "normalize", "-t", "arith", "2+2=4")
    assert (code, rec["status"], rec["result"]) == (OK, "normal", "true")
    assert rec["steps"] <= 10
    code, rec = one(capsys, "normalize", "-t", "arith", "0")
    assert (code, rec["result"], rec["steps"]) == (OK, "0", 0)


def test_normalize_loop_exhausts(capsys):
    code, rec = one(capsys, "normalize", "-t", "loopPQ", "P", "--fuel", "300")
    assert (code, rec["status"]) == (EXHAUSTED, "fuel-exhausted")


def test_normalize_term_with_variables(capsys):
    code, rec = one(capsys, "normalize", "-t", "arith", "S(x) + 1")
    assert rec["result"] == "S(x + 1)"


def test_whnf_exposes_head(capsys):
    code, rec = one(capsys, "whnf", "-t", "subset", "sub(a, b)", "--const", "a,b")
    assert code == OK and rec["result"].startswith("forall z.")


def test_congruent_exit_codes(capsys):
    code, rec = one(capsys, "congruent", "-t", "arith", "2 + 2", "4")
    assert (code, rec["congruent"]) == (OK, True)
    code, rec = one(capsys, "congruent", "-t", "arith", "2 + 2", "3")
    assert (code, rec["congruent"]) == (REJECTED, False)


def test_merged_theories(capsys):
    code, rec = one(capsys, "normalize", "-t", "arith", "-t", "subset", "sub(x, y) & 1 + 1 = 2")
    assert code == OK
    assert rec["result"] == "(forall z. in(z, x) => in(z, y)) & true"


def test_duplicate_rule_names_are_input_errors(capsys):
    code, rec = one(capsys, "normalize", "-t", "arith", "-t", "arith", "0")
    assert (code, rec["status"]) == (INPUT_ERROR, "input-error")
    assert "duplicate" in rec["message"]


def test_theory_file_and_bad_inputs(tmp_path, capsys):
    f = tmp_path / "mini.dmt"
    f.write_text("theory mini\nfun a 0\nfun b 0\nfun f 1\nrule fa : f(a) --> b\n")
    code, rec = one(capsys, "normalize", "-t", str(f), "f(f(a))")
    assert (code, rec["result"]) == (OK, "f(b)")
    assert one(capsys, "normalize", "-t", "nope", "0")[0] == INPUT_ERROR
    assert one(capsys, "normalize", "-t", "arith", "S(0, 0)")[0] == INPUT_ERROR
    assert one(capsys, "normalize", "-t", "arith", "(0 +")[0] == INPUT_ERROR


def test_unknown_flag_is_input_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["normalize", "--bogus", "0"])
    assert info.value.code == INPUT_ERROR
    capsys.readouterr()


# --- check / reduce ------------------------------------------------------------


def test_check_examples(capsys):
    code, rec = one(capsys, "check", str(DATA / "subset_refl.dmp"), "-t", "subset", "--goal", "sub(s, s)")
    assert (code, rec["status"], rec["last_rule"], rec["redexes"]) == (OK, "accepted", "∀-intro", 0)
    code, rec = one(capsys, "check", str(DATA / "top_intro.dmp"), "-t", "arith", "--goal", "2+2=4")
    assert (code, rec["status"], rec["last_rule"]) == (OK, "accepted", "⊤-intro")


def test_check_rejects_wrong_goal_with_location(capsys):
    code, rec = one(capsys, "check", str(DATA / "subset_refl.dmp"), "-t", "subset", "--goal", "sub(s, t)")
    assert (code, rec["status"]) == (REJECTED, "rejected")
    assert rec["reason"] and "path" in rec


def test_check_with_hypothesis(tmp_path, capsys):
    f = tmp_path / "hyp.dmp"
    f.write_text("(axiom h)")
    code, rec = one(capsys, "check", str(f), "-t", "arith", "--hyp", "h:1 + 1 = 2", "--goal", "2 = 2")
    assert code == OK
    code, rec = one(capsys, "check", str(f), "-t", "arith", "--hyp", "h 1 = 1", "--goal", "1 = 1")
    assert code == INPUT_ERROR


def test_reduce_detour(capsys):
    code, rec = one(capsys, "reduce", str(DATA / "detour_arith.dmp"), "-t", "arith", "--goal", "2+2=4")
    assert (code, rec["status"], rec["contractions"], rec["last_rule"]) == (OK, "normal", 1, "⊤-intro")
    assert rec["proof"] == "(top_intro)"


def test_reduce_loop_exhausts(capsys):
    code, rec = one(capsys, "reduce", str(DATA / "loop_q.dmp"), "-t", "loopPQ", "--goal", "Q", "--fuel", "50")
    assert (code, rec["status"]) == (EXHAUSTED, "fuel-exhausted")
    assert all(p == rec["trace"][0] for p in rec["trace"])


def test_missing_proof_file(capsys):
    assert one(capsys, "check", str(DATA / "missing.dmp"), "--goal", "true")[0] == INPUT_ERROR


# --- prove / clausify ----------------------------------------------------------


def test_prove_refutes_union_goal(capsys):
    code, rec = one(capsys, "prove", str(DATA / "union_goal.dmc"), "-t", "union_polarized")
    assert (code, rec["status"]) == (OK, "refutation")
    assert rec["generated"] <= 10
    assert rec["trace"][-1]["clause"] == "[]"
    assert {s["kind"] for s in rec["trace"]} == {"input", "goal", "resolvent"}
    assert ["1", "ow:cupp1"] in [s["parents"] for s in rec["trace"]]


def test_prove_trivial_and_saturated(capsys):
    code, rec = one(capsys, "prove", str(DATA / "pq.dmc"))
    assert (code, rec["status"]) == (OK, "refutation")
    code, rec = one(capsys, "prove", str(DATA / "p_only.dmc"))
    assert (code, rec["status"]) == (REJECTED, "saturated")


def test_prove_resource_out(tmp_path, capsys):
    f = tmp_path / "grow.dmc"
    f.write_text("fun f 1\nconst a\npred p 1\npred q 0\nclause +p(a)\nclause -p(x) | +p(f(x))\nclause -q\n")
    code, rec = one(capsys, "prove", str(f), "--max-clauses", "20")
    assert (code, rec["status"]) == (EXHAUSTED, "resource-out")


def test_prove_several_problems_in_parallel(capsys):
    files = [str(DATA / n) for n in ("pq.dmc", "p_only.dmc", "union_goal.dmc")]
    code, recs = run(capsys, "prove", *files, "-t", "union_polarized", "--jobs", "2")
    assert [r["status"] for r in recs] == ["refutation", "saturated", "refutation"]
    assert code == REJECTED
    code, serial = run(capsys, "prove", *files, "-t", "union_polarized")
    assert serial == recs


def test_clausify_examples(capsys):
    code, rec = one(capsys, "clausify", "p | q")
    assert rec["clauses"] == ["[+p, +q]"]
    code, rec = one(capsys, "clausify", "p & q")
    assert rec["clauses"] == ["[+p]", "[+q]"]
    code, rec = one(capsys, "clausify", "~p")
    assert rec["clauses"] == ["[-p]"]


# --- orient / validate ---------------------------------------------------------


def test_orient_writes_theory_and_residual(tmp_path, capsys):
    code, rec = one(capsys, "orient", str(DATA / "arith_axioms.dma"), "-o", str(tmp_path))
    assert code == OK and rec["rules"] == ["plus0", "plusS"] and rec["residual"] == []
    theory = load_theory(tmp_path / "arith.dmt")
    assert [r.name for r in theory.rules] == ["plus0", "plusS"]
    assert load_axioms(tmp_path / "arith_residual.dma").axioms == ()


def test_orient_triangles(capsys):
    code, rec = one(capsys, "orient", str(DATA / "triangles.dma"))
    assert rec["rules"] == ["equi:-"]


def test_orient_subset(capsys):
    code, rec = one(capsys, "orient", str(DATA / "subset_axiom.dma"))
    assert rec["rules"] == ["subdef"]


def test_validate(tmp_path, capsys):
    code, rec = one(capsys, "validate", "-t", "union_polarized")
    assert (code, rec["status"], rec["rules"]) == (OK, "ok", 3)
    bad = tmp_path / "bad.dmt"
    bad.write_text("theory bad\npred p 1\npred q 1\nrule r : p(x) --> q(y)\n")
    code, rec = one(capsys, "validate", "-t", str(bad))
    assert (code, rec["status"]) == (REJECTED, "invalid")
    assert any("y not in LHS" in v for v in rec["violations"])


def test_prove_rejects_non_clausal_polarized_rules(tmp_path, capsys):
    f = tmp_path / "nc.dmt"
    f.write_text("theory nc\npred p 0\npred q 0\npred r 0\nrule pq : p -->- q => r\n")
    code, rec = one(capsys, "prove", str(DATA / "pq.dmc"), "-t", str(f))
    assert code == INPUT_ERROR


# --- human output and the installed script ------------------------------------


def test_human_output(capsys):
    assert main(["check", str(DATA / "subset_refl.dmp"), "-t", "subset", "--goal", "sub(s, s)"]) == OK
    assert capsys.readouterr().out.strip() == "accepted; last rule: ∀-intro"
    assert main(["normalize", "-t", "arith", "2+2=4"]) == OK
    assert capsys.readouterr().out.splitlines()[0] == "true"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dmt.cli", "normalize", "-t", "loopPQ", "P", "--fuel", "100"],
                          capture_output=True, text=True)
    assert proc.returncode == EXHAUSTED


@pytest.mark.skipif(shutil.which("dmt") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["dmt", "normalize", "-t", "arith", "2+2=4", "--format", "records"],
                          capture_output=True, text=True)
    assert proc.returncode == OK
    assert json.loads(proc.stdout)["result"] == "true"
