import json

import pytest

from continua.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main([*argv, "-o", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() and out.suffix == ".json" else None)


def test_construct_gehman(tmp_path):
    code, doc = run(tmp_path, "construct", "gehman", "--stage", "3")
    assert code == 0 and doc["type"] == "decomposition" and len(doc["bands"]) == 15


def test_construct_cantor_fan(tmp_path):
    code, doc = run(tmp_path, "construct", "cantor-fan", "--depth", "1")
    assert code == 0 and len(doc["edges"]) == 2 and len(doc["endpoints"]) == 2


def test_construct_staged_bands(tmp_path):
    code, doc = run(tmp_path, "construct", "example20", "--stage", "2", "--depth", "12")
    assert code == 0
    assert [(s["threshold"], s["increment"]) for s in doc["stages"]] == [("3/4", "1/2"), ("3/8", "1/4")]
    src = tmp_path / "e20.json"
    (tmp_path / "out.json").rename(src)
    assert main(["verify", "example20", "-i", str(src), "-o", str(tmp_path / "r.json")]) == 0


def test_partition_roundtrip_and_corruption(tmp_path):
    code, doc = run(tmp_path, "construct", "partition", "--seed", "11")
    assert code == 0
    src = tmp_path / "p.json"
    src.write_text(json.dumps(doc))
    assert main(["verify", "partition", "-i", str(src), "-o", str(tmp_path / "r.json")]) == 0
    doc["pieces"].append(doc["pieces"][0])
    src.write_text(json.dumps(doc))
    out = tmp_path / "r2.json"
    assert main(["verify", "partition", "-i", str(src), "-o", str(out)]) == 1
    assert any("overlap" in p for p in json.loads(out.read_text())["problems"])


def test_usc_delta(tmp_path):
    run(tmp_path, "construct", "gehman", "--stage", "4")
    src = tmp_path / "g.json"
    (tmp_path / "out.json").rename(src)
    code, rep = run(tmp_path, "verify", "usc-decomposition", "--delta", "1/9", "-i", str(src))
    assert code == 0 and rep["max_stage_counted"] == 2


def test_probe_access_and_render(tmp_path):
    src = tmp_path / "f1.json"
    assert main(["construct", "figure1", "-o", str(src)]) == 0
    code, rep = run(tmp_path, "probe", "access", "-i", str(src), "--target", "p", "--resolution", "256")
    assert code == 0 and rep["verdict"] == "not reached"
    code, rep = run(tmp_path, "probe", "access", "-i", str(src), "--target", "e3", "--resolution", "256")
    assert rep["verdict"] == "accessible" and rep["path"]
    ov = tmp_path / "ov.json"
    ov.write_text(json.dumps(rep))
    a, b, c = (tmp_path / n for n in ("a.svg", "b.svg", "c.svg"))
    assert main(["render", "-i", str(src), "-o", str(a)]) == 0
    assert main(["render", "-i", str(src), "--overlay", "", "-o", str(b)]) == 0
    assert main(["render", "-i", str(src), "--overlay", str(ov), "-o", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()
    assert a.read_text().startswith("<?xml")


def test_separate_and_errors(tmp_path, capsys):
    src = tmp_path / "cf.json"
    main(["construct", "cantor-fan", "--depth", "2", "-o", str(src)])
    code, rep = run(tmp_path, "probe", "separate", "-i", str(src), "--e", "e00", "--x", "e22",
                    "--resolution", "256")
    assert code == 0 and rep["verification"]["ok"] and rep["loop"]
    assert main(["probe", "separate", "-i", str(src), "--e", "e00", "--x", "p"]) == 2
    assert main(["probe", "access", "-i", str(src), "--target", "zz"]) == 2
    assert main(["construct", "cantor-fan", "--depth", "17"]) == 2
    assert main(["probe", "access", "-i", str(src), "--target", "p", "--resolution", "9000"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "dendroid", "nodes": {"a": ["0", "x"]}, "edges": []}')
    assert main(["verify", "dendroid", "-i", str(bad)]) == 2
    assert "$" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_determinism_and_roundtrip(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        main(["construct", "remark13", "--fans", "2", "--depth", "4", "-o", str(path)])
    assert a.read_bytes() == b.read_bytes()
    from continua import serialize as ser
    m = ser.load_model(ser.read_doc(a))
    assert ser.dumps(m.to_json()) == a.read_text()
    assert main(["verify", "dendroid", "-i", str(a), "-o", str(tmp_path / "r.json")]) == 0


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CONTINUA_OUT", str(tmp_path / "o"))
    assert main(["construct", "gehman", "--stage", "2"]) == 0
    assert (tmp_path / "o" / "construct-gehman.json").exists()


def test_degrees_family(tmp_path):
    paths = []
    for d in (2, 3):
        p = tmp_path / f"f{d}.json"
        main(["construct", "cantor-fan", "--depth", str(d), "-o", str(p)])
        paths.append(str(p))
    code, rep = run(tmp_path, "probe", "degrees", "-i", *paths)
    assert code == 0 and rep["growth"]["bounded"] is False
