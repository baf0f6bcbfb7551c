from isotower.cli import main
from isotower.serialize import canonical_dumps, canonical_loads


def run(args):
    return main(args)


def test_isotropy_file_flow(tmp_path, capsys):
    system = {
        "forms": [
            [["1/1", "0/1"], ["0/1", "1/1"]],
        ],
        "tower": [],
    }
    inp = tmp_path / "sys.json"
    inp.write_text(canonical_dumps(system))
    out = tmp_path / "cert.json"
    assert run(["isotropy", "--input", str(inp), "--output", str(out)]) == 0
    doc = canonical_loads(out.read_text())
    assert doc["claimed_bound"] == 2 and doc["actual_degree"] == 2
    assert run(["verify", "--input", str(out)]) == 0
    assert "PASS" in capsys.readouterr().out


def test_split_file_flow_and_verify(tmp_path, capsys):
    quat = {
        "presentation": "standard",
        "field": [{"label": "a", "minpoly": ["-1/1", "-2/1", "1/1", "1/1"]}],
        "u": ["0/1", "1/1", "0/1"],
        "v": ["2/1", "0/1", "0/1"],
    }
    inp = tmp_path / "quat.json"
    inp.write_text(canonical_dumps(quat))
    out = tmp_path / "cert.json"
    assert run(["split-quaternion", "--input", str(inp), "--output", str(out)]) == 0
    doc = canonical_loads(out.read_text())
    assert doc["degree_over_F"] <= 8
    assert run(["verify", "--input", str(out)]) == 0
    captured = capsys.readouterr().out
    assert "PASS" in captured


def test_verify_fails_on_tampered(tmp_path, capsys):
    system = {"forms": [[["1/1", "0/1"], ["0/1", "-1/1"]]], "tower": []}
    inp = tmp_path / "sys.json"
    inp.write_text(canonical_dumps(system))
    out = tmp_path / "cert.json"
    run(["isotropy", "--input", str(inp), "--output", str(out)])
    doc = canonical_loads(out.read_text())
    doc["witness"][0] = "5/1"
    out.write_text(canonical_dumps(doc))
    assert run(["verify", "--input", str(out)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_exit_code_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["verify", "--input", str(bad)]) == 2
    bad.write_text(canonical_dumps({"forms": []}))
    assert run(["verify", "--input", str(bad)]) == 2


def test_exit_code_precondition(tmp_path, capsys):
    # r = 2 in 3 variables: DimensionTooSmall is named on stderr
    system = {
        "forms": [
            [["1/1", "0/1", "0/1"], ["0/1", "1/1", "0/1"], ["0/1", "0/1", "1/1"]],
            [["2/1", "0/1", "0/1"], ["0/1", "3/1", "0/1"], ["0/1", "0/1", "4/1"]],
        ],
        "tower": [],
    }
    inp = tmp_path / "sys.json"
    inp.write_text(canonical_dumps(system))
    assert run(["isotropy", "--input", str(inp)]) == 3
    err = capsys.readouterr().err
    assert "DimensionTooSmall" in err


def test_batch_determinism(tmp_path):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    args = ["isotropy", "--seed", "11", "--count", "4", "--preset", "r2"]
    assert run(args + ["--output", str(out1)]) == 0
    assert run(args + ["--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert len(out1.read_text().splitlines()) == 4


def test_batch_parallel_matches_serial(tmp_path):
    serial = tmp_path / "serial.jsonl"
    parallel = tmp_path / "par.jsonl"
    base = ["isotropy", "--seed", "3", "--count", "4", "--preset", "r1"]
    assert run(base + ["--output", str(serial)]) == 0
    assert run(base + ["--jobs", "2", "--output", str(parallel)]) == 0
    assert serial.read_bytes() == parallel.read_bytes()


def test_split_batch_verify(tmp_path, capsys):
    out = tmp_path / "certs.jsonl"
    assert run([
        "split-quaternion", "--seed", "5", "--count", "2", "--preset", "cubic",
        "--output", str(out),
    ]) == 0
    assert run(["verify", "--input", str(out)]) == 0
    text = capsys.readouterr().out
    assert text.count("PASS") == 2


def test_corestrict_flow(tmp_path, capsys):
    from isotower.certjson import algebra_doc, cyclic_doc
    from isotower.csa import matrix_algebra
    from isotower.presets import cyclic_sqrt

    cyc = cyclic_sqrt(2)
    doc = {
        "algebra": algebra_doc(matrix_algebra(cyc.tower, 1)),
        "cyclic": cyclic_doc(cyc),
    }
    inp = tmp_path / "alg.json"
    inp.write_text(canonical_dumps(doc))
    out = tmp_path / "cor.json"
    assert run(["corestrict", "--input", str(inp), "--output", str(out)]) == 0
    result = canonical_loads(out.read_text())
    assert result["report"]["central_simple"] is True
    assert result["report"]["dimension"] == 16
    assert run(["verify", "--input", str(out)]) == 0


def test_demo_runs(capsys):
    assert run(["demo", "thm21-r1"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "degree over the base: 2" in out  # <1,1> over Q certifies at degree 2
    assert run(["demo", "--preset", "thm32-r1"]) == 0
    assert run(["demo", "no-such-demo"]) == 2


def test_demo_artifact_output(tmp_path):
    out = tmp_path / "demo.json"
    assert run(["demo", "thm21-r2", "--output", str(out)]) == 0
    doc = canonical_loads(out.read_text())
    assert doc["claimed_bound"] == 4


def test_verifier_module_boundary():
    # the verifier re-checks certificates with kernel code only: no imports
    # from any constructor module, so no code path can be shared
    import inspect

    import isotower.verify as verifier

    src = inspect.getsource(verifier)
    for module in ("quadforms", "splitting", "csa", "certjson", "presets", "generate", "cli"):
        assert f"from .{module}" not in src
        assert f"isotower.{module}" not in src
