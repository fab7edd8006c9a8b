import io
import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardytree import ParseError, canonical_form, random_weighted_tree
from hardytree.cli import SCHEMA, format_tree_file, main, parse_tree_file

CHAIN2 = "p=2 q=2\n0 - 1 1\n1 0 1 1\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.tree"
    path.write_text(CHAIN2)
    return str(path)


# ------------------------------------------------------------- parsing --


def test_parse_examples():
    wt, e = parse_tree_file(CHAIN2)
    assert wt.n == 2 and wt.tree.parent == (-1, 0) and (e.p, e.q) == (2, 2)
    wt, e = parse_tree_file("p=1 q=inf\n0 - 2 3\n")
    assert wt.n == 1 and (e.p, e.q) == (1, math.inf)
    wt, e = parse_tree_file("# comment\n\np=3/2 q=3  # trailing\n1 0 1 2\n0 - 1 1\n")
    assert e.p_exact == pytest.approx(1.5) and wt.u.tolist() == [1, 1]


@pytest.mark.parametrize("text, line, fragment", [
    ("0 - 1 1\n", 1, "missing header"),
    ("p=2 r=2\n0 - 1 1\n", 1, "expected header"),
    ("p=2\n0 - 1 1\n", 1, "missing 'q='"),
    ("p=0.5 q=2\n0 - 1 1\n", 1, "exponent"),
    ("p=2 q=2\n0 - 1\n", 2, "fields"),
    ("p=2 q=2\nx - 1 1\n", 2, "vertex id"),
    ("p=2 q=2\n0 - 1 abc\n", 2, "w"),
    ("p=2 q=2\n0 - 1 -1\n", 2, "w"),
    ("p=2 q=2\n0 - 1 1\n0 - 1 1\n", 3, "duplicate"),
    ("p=2 q=2\n0 - 1 1\n2 0 1 1\n", 3, "missing"),
    ("p=2 q=2\n0 - 1 1\n1 - 1 1\n", 3, "one root"),
    ("p=2 q=2\n0 - 1 1\n1 1 1 1\n", 3, "own parent"),
])
def test_parse_errors_report_line(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_tree_file(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_parse_cycle():
    with pytest.raises(ParseError, match="cycle"):
        parse_tree_file("p=2 q=2\n0 - 1 1\n1 2 1 1\n2 1 1 1\n")


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 15), st.integers(0, 2 ** 32 - 1),
       st.sampled_from([("2", "2"), ("3/2", "inf"), ("1", "3")]))
def test_round_trip(n, seed, e):
    wt = random_weighted_tree(np.random.default_rng(seed), n)
    back, e2 = parse_tree_file(format_tree_file(wt, e, comment="round trip"))
    assert canonical_form(back.tree, back.u.tolist(), back.w.tolist()) == \
        canonical_form(wt.tree, wt.u.tolist(), wt.w.tolist())
    assert format_tree_file(back, e2) == format_tree_file(wt, e)


# ------------------------------------------------------------ commands --


def test_norm_single_vertex(tmp_path, capsys):
    path = tmp_path / "one.tree"
    path.write_text("p=2 q=2\n0 - 2 3\n")
    code, rep = run_json(capsys, "norm", "--input", str(path))
    assert code == 0 and rep["schema"] == SCHEMA
    assert rep["quantities"]["norm"]["value"] == pytest.approx(6)


def test_bounds_chain(chain_file, capsys):
    code, rep = run_json(capsys, "bounds", "--input", chain_file)
    q = rep["quantities"]
    assert code == 0
    assert q["norm"]["value"] == pytest.approx((1 + math.sqrt(5)) / 2)
    for key in ("sup_product", "path_lb", "cut_sup"):
        assert q[key]["value"] == pytest.approx(math.sqrt(2))
    assert "norm/cut_sup" in q
    assert set(rep) >= {"inputs", "quantities", "witnesses", "seeds", "tolerances", "warnings"}


def test_bounds_refuses_cuts_for_p_greater_than_q(chain_file, capsys):
    code, rep = run_json(capsys, "bounds", "--input", chain_file, "--p", "3", "--q", "2")
    assert code == 0 and "cut_sup" not in rep["quantities"]
    assert any("p <= q" in w for w in rep["warnings"])


def test_cuts_command(chain_file, capsys):
    code, rep = run_json(capsys, "cuts", "--input", chain_file, "--oracle-beta")
    assert rep["quantities"]["count"]["value"] == 2
    for row in rep["data"]["cuts"]:
        assert row["beta"] == pytest.approx(row["beta_oracle"], rel=1e-8)


def test_check_t1(chain_file, capsys):
    code, rep = run_json(capsys, "check-t1", "--input", chain_file)
    assert rep["quantities"]["K"]["value"] == 1
    assert rep["quantities"]["lambda"]["value"] == pytest.approx(1 / math.sqrt(2))


def test_reduce_and_split(tmp_path, capsys):
    path = tmp_path / "star.tree"
    path.write_text("p=2 q=2\n0 - 1 1\n1 0 1 1\n2 0 1 1\n")
    code, rep = run_json(capsys, "split", "--input", str(path), "--xi", "0", "--partition", "1|2")
    q = rep["quantities"]
    assert code == 0 and len(rep["data"]["components"]) == 2
    assert q["norm_split"]["value"] >= q["norm"]["value"] - 1e-9
    code, rep = run_json(capsys, "reduce", "--input", str(path), "--levels", "0")
    assert rep["quantities"]["norm_reduced"]["value"] == pytest.approx(3.0)


def test_chainify_anchor(capsys):
    code, rep = run_json(capsys, "chainify", "--branching", "2")
    q = rep["quantities"]
    assert code == 0
    assert rep["data"]["u_hat"] == pytest.approx([1, 2 ** -0.5])
    assert rep["data"]["w_hat"] == pytest.approx([1, 2 ** 0.5])
    assert q["hat_norm"]["value"] == pytest.approx(math.sqrt(2 + math.sqrt(3)))
    assert q["tree_norm"]["value"] == pytest.approx(q["hat_norm"]["value"])


def test_regular_gen_prints_tree_file(capsys):
    code, out, _ = run(capsys, "regular-gen", "--branching", "2,2")
    wt, _ = parse_tree_file(out)
    assert code == 0 and wt.n == 7


def test_hardy1d(capsys):
    code, rep = run_json(capsys, "hardy1d", "--u", "1,1,1", "--w", "1,0.5,0.25")
    assert rep["quantities"]["M"]["value"] == pytest.approx(math.sqrt(1.3125))
    code, rep = run_json(capsys, "hardy1d", "--u", "1,1", "--w", "1,1", "--p", "2", "--q", "1")
    assert rep["quantities"]["M"]["value"] == pytest.approx(2)


def test_example1(capsys):
    code, rep = run_json(capsys, "example1", "--j0", "2", "--psi-w", "inv-log2", "--q", "2",
                         "--lambda-star", "log2-2y", "--slow-eps", "0.5")
    assert code == 0 and rep["data"]["slow_variation_passed"] is True
    code, rep = run_json(capsys, "example1", "--j0", "2", "--psi-w", "inv-log2", "--q", "2")
    assert rep["quantities"]["M"]["value"] == pytest.approx(0.79898, abs=5e-6)
    code, rep = run_json(capsys, "example1", "--j0", "2")
    assert rep["data"]["diverged"] is True and rep["quantities"]["M"]["value"] == "inf"


def test_example2(capsys):
    code, rep = run_json(capsys, "example2", "--case", "1", "--gamma-star", "1",
                         "--alpha-u", "1", "--alpha-w", "1.5", "--j0", "3")
    assert rep["quantities"]["M"]["value"] == pytest.approx(3 ** -1.5)


def test_text_output(chain_file, capsys):
    code, out, _ = run(capsys, "norm", "--input", chain_file)
    assert code == 0 and "norm" in out and "[spectral]" in out


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(CHAIN2))
    code, rep = run_json(capsys, "norm", "--input", "-")
    assert rep["quantities"]["norm"]["value"] == pytest.approx((1 + math.sqrt(5)) / 2)


# ---------------------------------------------------------- exit codes --


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.tree"
    path.write_text("0 - 1 1\n")
    code, out, err = run(capsys, "norm", "--input", str(path))
    assert code == 2 and "line 1" in err
    code, rep = run_json(capsys, "norm", "--input", str(path))
    assert code == 2 and rep["exit_code"] == 2 and "line 1" in rep["error"]


def test_missing_file_and_regime_errors(tmp_path, chain_file, capsys):
    assert run(capsys, "norm", "--input", str(tmp_path / "nope"))[0] == 2
    assert run(capsys, "hardy1d", "--u", "1", "--w", "1", "--p", "1", "--q", "2")[0] == 2
    assert run(capsys, "split", "--input", chain_file)[0] == 2


def test_size_limit_exit_code(chain_file, capsys):
    code, rep = run_json(capsys, "norm", "--input", chain_file, "--max-vertices", "1")
    assert code == 3 and "SizeLimitError" in rep["error"]


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_module_entry_point(chain_file):
    out = subprocess.run([sys.executable, "-m", "hardytree", "norm", "--input", chain_file,
                          "--json"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["quantities"]["norm"]["value"] == pytest.approx(1.6180339887)


@pytest.mark.skipif(shutil.which("hardytree") is None, reason="console script not installed")
def test_console_script(chain_file):
    out = subprocess.run(["hardytree", "norm", "--input", chain_file], capture_output=True,
                         text=True)
    assert out.returncode == 0 and "1.618" in out.stdout
