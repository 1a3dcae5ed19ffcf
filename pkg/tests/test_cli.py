"""End-to-end CLI contract: verbs, JSON reports, exit codes, byte stability."""

import json
import os
import subprocess
from fractions import Fraction as F

import pytest

from unclab import serialize as ser

FIX = os.path.join(os.path.dirname(__file__), "fixtures")


def fx(name):
    return os.path.join(FIX, name)


def run(*args, env_extra=None, check=None):
    env = dict(os.environ)
    env.pop("UNCLAB_CAPS", None)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run(["unclab", *args], capture_output=True, text=True,
                          env=env, timeout=120)
    if check is not None:
        assert proc.returncode == check, (proc.returncode, proc.stderr)
    return proc


def out_json(proc):
    return json.loads(proc.stdout)


def err_json(proc):
    return json.loads(proc.stderr)


def test_bracket_dp_and_brute():
    for method in ("dp", "brute"):
        proc = run("bracket", fx("resolution_r.json"), fx("resolution_s.json"),
                   "--method", method, check=0)
        rep = out_json(proc)
        assert rep["verb"] == "bracket"
        assert rep["value"] == "5/4"
        assert rep["witness"] == [[1, 1], [2, 2]]
        assert rep["method"] == method
        assert rep["inputs"]["left"].endswith("resolution_r.json")
        assert "version" in rep
        assert "wall_ms" not in rep


def test_bracket_byte_stability_and_timing():
    a = run("bracket", fx("resolution_r.json"), fx("resolution_s.json"), check=0)
    b = run("bracket", fx("resolution_r.json"), fx("resolution_s.json"), check=0)
    assert a.stdout == b.stdout  # byte-identical reports
    timed = run("bracket", fx("resolution_r.json"), fx("resolution_s.json"),
                "--timing", check=0)
    assert "wall_ms" in out_json(timed)


def test_bracket_mutual():
    rep = out_json(run("bracket", fx("resolution_r.json"), fx("resolution_s.json"),
                       "--mutual", check=0))
    assert rep["value"] == "5/4"
    assert rep["left_right"] == "5/4" and rep["right_left"] == "5/4"
    assert rep["witness_direction"] == "left_right"


def test_exit_code_3_malformed_rational(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"k": 2, "pattern": [1], "alpha": ["1/0"]}')
    proc = run("bracket", str(bad), fx("resolution_s.json"), check=3)
    err = err_json(proc)
    assert err["kind"] == "RationalFormatError"


def test_exit_code_2_missing_inputs():
    proc = run("bracket", "/nonexistent/r.json", fx("resolution_s.json"), check=2)
    assert err_json(proc)["kind"] == "MissingInputError"
    # click's own usage failures share exit code 2
    proc = run("norm", "--instance", fx("norm_summing4.json"), check=2)
    assert "Usage" in proc.stderr or "usage" in proc.stderr
    proc = run("bracket", fx("resolution_r.json"), fx("resolution_s.json"),
               "--no-such-flag", check=2)
    assert "no-such-flag" in proc.stderr


def test_exit_code_4_schema(tmp_path):
    inst = tmp_path / "inst.json"
    # functional touches coordinate 9 on a dim-4 instance
    inst.write_text(json.dumps({
        "dim": 4, "projection_class": "initial",
        "include_sup": True,
        "functionals": [[{"i": 9, "v": "1"}]]}))
    proc = run("norm", "--instance", str(inst), "--vector", fx("vector_a.json"),
               check=4)
    assert err_json(proc)["kind"] == "SchemaError"
    missing = tmp_path / "missing_key.json"
    missing.write_text('{"pattern": [1]}')
    proc = run("bracket", str(missing), fx("resolution_s.json"), check=4)
    assert err_json(proc)["kind"] == "SchemaError"


def test_exit_code_1_domain_and_caps():
    proc = run("rademacher", "--k0", "2", "--m", "0", "--n", "1", "--auto-ns",
               check=1)
    assert err_json(proc)["kind"] == "DomainError"
    proc = run("match", "--maps", fx("map_family_a.json"), "--universe", "12",
               env_extra={"UNCLAB_CAPS": "match_universe=4"}, check=1)
    assert err_json(proc)["kind"] == "SizeError"
    assert "UNCLAB_CAPS" in err_json(proc)["error"]
    proc = run("match", "--maps", fx("map_family_a.json"), "--universe", "12",
               env_extra={"UNCLAB_CAPS": "bogus=3"}, check=1)
    assert err_json(proc)["kind"] == "DomainError"
    # a raised cap unlocks the same failing call
    proc = run("match", "--maps", fx("map_family_a.json"), "--universe", "12",
               env_extra={"UNCLAB_CAPS": "match_universe=16"}, check=0)
    assert out_json(proc)["found"] is True


def test_elton_verb():
    rep = out_json(run("elton", "--n1", "1", "--n2", "8", "--K", "4",
                       "--eps", "13/100", check=0))
    assert rep["verb"] == "elton"
    assert rep["ratio"] == "10/9"
    assert rep["verification"] == "dp"
    assert rep["norm_plus_lower"] == "5/4"
    assert rep["case_bounds"]["case4"] == "9/8"
    assert rep["inputs"]["eps"] == "13/100"


def test_quasi_verb():
    rep = out_json(run("quasi", "--n1", "1", "--n2", "64", "--K", "8",
                       "--eps", "1/50", "--alpha", "2/3", check=0))
    assert rep["verb"] == "quasi"
    assert rep["ratio"] == "512/451"
    assert rep["passes_target"] is True
    assert rep["verification"] == "symbolic"
    assert rep["threshold_tie_at_alpha"] is True


def test_rademacher_json_and_table():
    rep = out_json(run("rademacher", "--k0", "2", "--m", "3", "--n", "1",
                       "--auto-ns", check=0))
    assert rep["inputs"]["ns"] == [1, 17]
    assert rep["ris_condition"] is True
    assert rep["lengths"] == [72, 72, 72]
    bound = F(5, 2)
    for i, row in enumerate(rep["pairwise"]):
        for j, cell in enumerate(row):
            if i != j:
                assert F(cell) <= bound
    assert F(rep["max_diagonal"]) <= 2
    assert rep["bound_same_level"] == "2/1"
    table = run("rademacher", "--k0", "2", "--m", "3", "--n", "1", "--auto-ns",
                "--table", check=0).stdout
    assert "─" in table
    assert "R(n=4,l=1)" in table
    assert "same-level bound" in table
    # exactly one of --ns / --auto-ns
    run("rademacher", "--k0", "2", "--m", "3", "--n", "1", check=1)
    run("rademacher", "--k0", "2", "--m", "3", "--n", "1", "--ns", "1,17",
        "--auto-ns", check=1)


def test_chain_verb():
    rep = out_json(run("chain", "--patterns", fx("patterns.json"), "--k", "2",
                       check=0))
    assert rep["count"] == 5
    assert rep["length"] == 4
    assert rep["chain"] == [0, 1, 3, 4]
    assert rep["chain_patterns"][-1] == [1, 1, 2, 2]


def test_norm_verb():
    rep = out_json(run("norm", "--instance", fx("norm_summing4.json"),
                       "--vector", fx("vector_a.json"), check=0))
    assert rep["value"] == "2/1"
    assert rep["dim"] == 4
    assert rep["projection_class"] == "initial"
    cert = rep["certificate"]
    assert cert["kind"] == "functional"
    assert cert["functional_index"] == 2
    assert cert["projection"] == [1, 2, 3]


def test_constant_verb():
    rep = out_json(run("constant", "--instance", fx("norm_summing4.json"),
                       "--mode", "C_uncond", "--step", "1/2", check=0))
    assert rep["value_lower"] == "2/1"
    assert rep["value_upper"] is None
    assert rep["method"] == "grid(step=1/2)"
    assert rep["mode"] == "C_uncond"
    assert rep["witness"] is not None
    assert rep["inputs"]["step"] == "1/2"
    run("constant", "--instance", fx("norm_summing4.json"), "--mode", "K",
        check=1)  # K needs delta


def test_mr_demo_verb():
    rep = out_json(run("mr-demo", "--family", fx("mr_family.json"), "--k", "4",
                       "--seed", "0", check=0))
    assert rep["verb"] == "mr-demo"
    assert rep["label"] == "exploratory"
    assert rep["alternating_norm"] == "1/1"
    assert rep["split_sum"] == "4/1"
    assert rep["split_meets_target"] is True
    assert rep["phi_chain"] == [2, 1, 2, 0]


def test_match_verb():
    rep = out_json(run("match", "--maps", fx("map_family_a.json"),
                       "--universe", "12", "--horizon", "4", check=0))
    assert rep["found"] is True
    assert rep["witness"]["L"] == [1, 2, 3, 4]
    assert rep["witness"]["M"] == [1, 2] + list(range(5, 13))
    assert rep["checked"] == 1
    assert rep["determinacy"] == {"depth": 2, "model": "fixed_depth"}
    assert "inconclusive" in rep["note"]
    rep = out_json(run("match", "--maps", fx("map_family_b.json"),
                       "--universe", "12", "--horizon", "4", "--strategy",
                       "random", "--seed", "5", check=0))
    assert rep["strategy"] == "random" and rep["inputs"]["seed"] == 5
    run("match", "--maps", fx("map_family_a.json"), "--universe", "12",
        "--strategy", "random", check=2)  # seed required


def test_hereditary_verb():
    rep = out_json(run("hereditary", "--universe", "12", "--mode", "weakly",
                       check=0))
    assert rep["family_size"] == 286
    assert rep["hereditary"] is False
    assert rep["violation"] == {"a": [[2, 1]], "b": [[1, 2], [2, 1]],
                                "colour": 1}
    rep = out_json(run("hereditary", "--universe", "12", "--restrict", "1,2,4",
                       check=0))
    assert rep["inputs"]["restrict"] == [1, 2, 4]
    assert rep["mode"] == "hereditary"
    rep = out_json(run("hereditary", "--universe", "12", "--mode", "hereditary",
                       "--samples", "3", "--seed", "7", check=0))
    assert len(rep["runs"]) == 3
    assert rep["all_fail"] is True
    run("hereditary", "--universe", "12", "--samples", "3", check=2)


def test_fixture_round_trips(fixtures):
    # parse -> canonical dump -> parse is the identity on every fixture kind
    r = ser.load_resolution(ser.read_json_file(str(fixtures / "resolution_r.json")))
    assert ser.load_resolution(json.loads(ser.dump_json(ser.to_jsonable(r)))) == r
    inst = ser.load_norm_instance(
        ser.read_json_file(str(fixtures / "norm_summing4.json")))
    v = ser.load_sparse_vector(ser.read_json_file(str(fixtures / "vector_a.json")))
    wire = {"entries": [{"i": i, "v": ser.format_rational(x)}
                        for i, x in v.entries]}
    assert ser.load_sparse_vector(json.loads(ser.dump_json(wire))) == v
    assert inst.dim == 4
    # canonical dumping is stable: dump(parse(dump(x))) == dump(x)
    once = ser.dump_json(ser.to_jsonable(r))
    twice = ser.dump_json(ser.to_jsonable(
        ser.load_resolution(json.loads(once))))
    assert once == twice
