import json
import subprocess
import sys

import pytest

from unaryufa.bundle import InstanceBundle
from unaryufa.cli import main


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert main(["orient", "--k", "1", "--n", "3", "--out", str(d / "tri.json")]) == 0
    assert main(["build", "--b", "2", "--tournament", str(d / "tri.json"), "--out", str(d / "b3.json")]) == 0
    return d


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_orient_triangle(files):
    doc = json.loads((files / "tri.json").read_text())
    assert doc["certified_k"] == 1 and doc["n"] == 3
    assert sorted(map(tuple, doc["edges"])) in ([(1, 2), (2, 3), (3, 1)], [(1, 3), (2, 1), (3, 2)])


def test_orient_k2_n7(tmp_path):
    out = tmp_path / "t7.json"
    assert main(["orient", "--k", "2", "--n", "7", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["certified_k"] == 2


def test_orient_failure_exit_code(capsys):
    assert main(["orient", "--k", "2", "--n", "3", "--max-tries", "20"]) == 1
    assert "closest miss" in capsys.readouterr().err


def test_build_rejects_base_one(files):
    assert main(["build", "--b", "1", "--tournament", str(files / "tri.json")]) == 2


def test_build_n7_bundle(tmp_path):
    t = tmp_path / "t7.json"
    main(["orient", "--k", "2", "--n", "7", "--out", str(t)])
    out = tmp_path / "b7.json"
    assert main(["build", "--tournament", str(t), "--out", str(out)]) == 0
    b = InstanceBundle.load(out)
    assert b.ms.N == 128 and b.certified_k == 2
    assert main(["export", "--bundle", str(out), "--what", "ufa-json"]) == 1


def test_build_rejects_overclaimed_certificate(tmp_path):
    t = tmp_path / "t.json"
    t.write_text(json.dumps({"n": 3, "edges": [[1, 2], [1, 3], [2, 3]], "certified_k": 1}))
    assert main(["build", "--tournament", str(t)]) == 2


def test_bundle_contents(files):
    b = InstanceBundle.load(files / "b3.json")
    assert b.ms.primes.primes == (5, 7, 11, 13, 17, 19, 23, 29)
    assert b.provenance["certified_k"] == 1
    assert b.to_json() == (files / "b3.json").read_text()


def test_check_all_passes_and_is_stable(files, capsys):
    code, first = run_json(capsys, ["check", "--bundle", str(files / "b3.json"), "--suite", "all", "--window", "2000"])
    assert code == 0
    assert [v["check"] for v in first] == ["lemma8", "lemma9", "automata", "theorem10"]
    assert all(v["pass"] for v in first)
    reloaded = files / "again.json"
    reloaded.write_text(InstanceBundle.load(files / "b3.json").to_json())
    out1, out2 = files / "v1.json", files / "v2.json"
    main(["check", "--bundle", str(files / "b3.json"), "--suite", "lemma9", "--out", str(out1)])
    main(["check", "--bundle", str(reloaded), "--suite", "lemma9", "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()


def test_check_size_suite_without_bundle(capsys):
    code, verdicts = run_json(capsys, ["check", "--suite", "theorem10", "--d", "8"])
    assert code == 0
    report = verdicts[0]["census"]["reports"][0]
    assert report["d"] == 8 and report["inequality_holds"]
    assert float(report["ln_margin"]) > 0


def test_check_corrupted_bundle(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["check", "--bundle", str(bad), "--suite", "lemma8"]) == 2
    doc = {"format": "unaryufa-bundle/1", "b": 2, "n": 3, "primes": [5, 7, 11, 13, 17, 19, 23, 29],
           "tournament": {"n": 3, "edges": [[1, 2], [2, 1], [2, 3]]}}
    bad.write_text(json.dumps(doc))
    assert main(["check", "--bundle", str(bad), "--suite", "lemma8"]) == 2


def test_member_queries(files, capsys):
    b = str(files / "b3.json")
    _, one = run_json(capsys, ["member", "--bundle", b, "--length", "1"])
    assert one["in_language"] and one["vertex"] == 1 and one["residues"] == [1] * 8
    _, full = run_json(capsys, ["member", "--bundle", b, "--length", "product-of-all-primes"])
    assert not full["in_language"] and full["in_complement"] and full["length"] == "1078282205"
    _, zero = run_json(capsys, ["member", "--bundle", b, "--length", "0"])
    assert not zero["in_language"]
    _, big = run_json(capsys, ["member", "--bundle", b, "--length", str(10**40 + 1)])
    assert big["residues"] == [(10**40 + 1) % p for p in (5, 7, 11, 13, 17, 19, 23, 29)]
    _, rs = run_json(capsys, ["member", "--bundle", b, "--length", "residues:1,1,1,1,1,1,2,1"])
    assert rs["residues"] == [1, 1, 1, 1, 1, 1, 2, 1] and not rs["in_language"]
    assert main(["member", "--bundle", b, "--length", "12abc"]) == 2
    assert main(["member", "--bundle", b, "--length", "residues:1,2"]) == 2


def test_exports(files, capsys):
    b = str(files / "b3.json")
    out = files / "ufa.json"
    assert main(["export", "--bundle", b, "--what", "ufa-json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["states"] == 37816 and doc["initial"] == 0
    assert main(["export", "--bundle", b, "--what", "ufa-json", "--cap", "100"]) == 1
    assert main(["export", "--bundle", b, "--what", "tournament-dot"]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("digraph") and dot.count("->") == 3
    assert main(["export", "--bundle", b, "--what", "swdfa-json", "--out", str(files / "sw.json")]) == 0
    assert json.loads((files / "sw.json").read_text())["states"] == 37819


def test_usage_errors():
    assert main([]) == 2
    assert main(["check", "--suite", "nonsense"]) == 2
    assert main(["check", "--suite", "lemma8"]) == 2


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "unaryufa", "member", "--bundle", str(files / "b3.json"), "--length", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["vertex"] == 1


def test_shipped_fixture_check_all_under_a_minute(capsys):
    import time
    from pathlib import Path

    bundle = Path(__file__).resolve().parent.parent / "fixtures" / "n3_desk.json"
    start = time.perf_counter()
    code = main(["check", "--bundle", str(bundle), "--suite", "all"])
    assert code == 0 and time.perf_counter() - start < 60
