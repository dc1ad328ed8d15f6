from __future__ import annotations

import csv
import json
import os
import subprocess
import sys

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from referencing import Registry, Resource

from etfkit import serialization as ser
from etfkit.cli import OUTPUT_SCHEMAS, dispatch
from etfkit.errors import ParseError
from etfkit.frames import Frame, random_untf, steiner_etf
from etfkit.designs import affine_plane
from etfkit.hadamard import dft

from support import etf

REGISTRY = Registry().with_resources(
    (ser.load_schema(name)["$id"], Resource.from_contents(ser.load_schema(name)))
    for name in ser.SCHEMA_NAMES
)


def validate(doc, name):
    schema = ser.load_schema(name)
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schemas_are_valid():
    for name in ser.SCHEMA_NAMES:
        jsonschema.Draft202012Validator.check_schema(ser.load_schema(name))


def test_roundtrip_is_bit_exact(tmp_path):
    f = steiner_etf(affine_plane(2), dft(4))
    path = tmp_path / "f.json"
    ser.save_frame(f, path)
    g = ser.load_frame(path)
    assert np.array_equal(f.V.view(np.uint64), g.V.view(np.uint64))
    validate(ser.load_json(path), "frame")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_frame_roundtrip(seed):
    rng = np.random.default_rng(seed)
    f = random_untf(int(rng.integers(3, 9)), 2, rng, real=bool(seed % 2))
    g = ser.frame_from_json(ser.loads(ser.dumps(ser.frame_to_json(f))))
    assert np.array_equal(f.V.view(np.uint64), g.V.view(np.uint64))
    assert g.real == f.real


def test_truncated_json_reports_position(tmp_path):
    text = ser.dumps(ser.frame_to_json(etf("simplex2")))
    path = tmp_path / "bad.json"
    path.write_text(text[: len(text) // 2])
    with pytest.raises(ParseError) as info:
        ser.load_frame(path)
    assert info.value.line == 1 and info.value.column is not None
    assert "line 1" in str(info.value)


def test_length_mismatch_is_parse_error():
    doc = ser.frame_to_json(etf("simplex2"))
    doc["data"] = doc["data"][:-1]
    with pytest.raises(ParseError):
        ser.frame_from_json(doc)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("rows"),
    lambda d: d.__setitem__("data", [[1.0]] * len(d["data"])),
    lambda d: d.__setitem__("rows", "2"),
    lambda d: d.__setitem__("kind", "matrix"),
])
def test_malformed_documents(mutate):
    doc = ser.frame_to_json(etf("simplex2"))
    mutate(doc)
    with pytest.raises(ParseError):
        ser.frame_from_json(doc)


def test_atomic_write_leaves_no_temporaries(tmp_path):
    path = tmp_path / "out.json"
    ser.atomic_write(path, "one\n")
    ser.atomic_write(path, "two\n")
    assert path.read_text() == "two\n"
    assert os.listdir(tmp_path) == ["out.json"]


def test_construct_and_verify(tmp_path, capsys):
    path = tmp_path / "s3.json"
    code, out, _ = run(capsys, "construct", "simplex", "--r", "3", "--out", str(path))
    assert code == 0
    validate(json.loads(out), OUTPUT_SCHEMAS["construct"])
    code, out, err = run(capsys, "verify", "--in", str(path))
    rep = json.loads(out)
    assert code == 0 and rep["is_etf"] and rep["welch_equality"]
    validate(rep, OUTPUT_SCHEMAS["verify"])
    assert err  # human summary on stderr


def test_construct_to_stdout(capsys):
    code, out, _ = run(capsys, "construct", "simplex", "--r", "2")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "frame")
    assert ser.frame_from_json(doc).N == 3


@pytest.mark.parametrize("plane,q,hkind,N", [
    ("affine", 2, "real", 16), ("affine", 2, "dft", 16), ("projective", 2, "real", 28), ("affine", 3, "dft", 45),
])
def test_construct_steiner(tmp_path, capsys, plane, q, hkind, N):
    path = tmp_path / "f.json"
    code, out, _ = run(capsys, "construct", "steiner", "--plane", plane, "--q", str(q),
                       "--hadamard", hkind, "--out", str(path))
    assert code == 0 and json.loads(out)["N"] == N
    assert ser.load_frame(path).N == N


def test_missing_real_hadamard_is_usage_error(tmp_path, capsys):
    code, out, _ = run(capsys, "construct", "steiner", "--plane", "affine", "--q", "3",
                       "--hadamard", "real", "--out", str(tmp_path / "x.json"))
    assert code == 2
    validate(json.loads(out), "error")
    assert not (tmp_path / "x.json").exists()


def test_naimark_subcommand(tmp_path, capsys):
    src, dst = tmp_path / "a.json", tmp_path / "b.json"
    ser.save_frame(etf("affine2-real"), src)
    code, _, _ = run(capsys, "construct", "naimark", "--in", str(src), "--out", str(dst))
    assert code == 0
    g = ser.load_frame(dst)
    assert (g.N, g.r) == (16, 10)


def test_verify_fails_on_non_tight_frame(tmp_path, capsys):
    V = np.array([[1.0, 0.0, 1 / np.sqrt(2)], [0.0, 1.0, 1 / np.sqrt(2)]])
    path = tmp_path / "f.json"
    ser.save_frame(Frame(V), path)
    code, out, _ = run(capsys, "verify", "--in", str(path))
    assert code == 1 and not json.loads(out)["is_untf"]


def test_pert_check(tmp_path, capsys):
    path = tmp_path / "a.json"
    ser.save_frame(etf("affine2-real"), path)
    code, out, _ = run(capsys, "pert", "check", "--in", str(path))
    doc = json.loads(out)
    assert code == 0
    validate(doc, OUTPUT_SCHEMAS["pert"])
    assert doc["gap"]["kernel_dim"] == 4
    assert doc["overlap"]["passed"]


def test_witness_build_and_verify(tmp_path, capsys):
    fpath, ypath = tmp_path / "s3.json", tmp_path / "y.json"
    ser.save_frame(etf("simplex3"), fpath)
    code, out, _ = run(capsys, "witness", "--in", str(fpath), "--out", str(ypath))
    assert code == 0
    validate(json.loads(out), OUTPUT_SCHEMAS["witness"])
    Ydoc = ser.load_json(ypath)
    assert Ydoc["rows"] == 16 and all(im == 0 for _, im in Ydoc["data"])
    code, out, _ = run(capsys, "witness", "verify", "--y", str(ypath), "--frame", str(fpath))
    assert code == 0
    validate(json.loads(out), OUTPUT_SCHEMAS["witness verify"])
    # a corrupted witness fails verification
    Ydoc["data"][1][0] += 0.1
    ypath.write_text(json.dumps(Ydoc))
    code, out, _ = run(capsys, "witness", "verify", "--y", str(ypath), "--frame", str(fpath))
    assert code == 1 and not json.loads(out)["passed"]


def test_witness_rejects_fano(tmp_path, capsys):
    path = tmp_path / "fano.json"
    ser.save_frame(etf("projective2-real"), path)
    code, out, _ = run(capsys, "witness", "--in", str(path))
    doc = json.loads(out)
    assert code == 1 and doc["error"] == "GerzonSaturated"
    validate(doc, "error")


def test_spark_subcommand(tmp_path, capsys):
    path = tmp_path / "s3.json"
    ser.save_frame(etf("simplex3"), path)
    code, out, _ = run(capsys, "spark", "--in", str(path), "--exact")
    doc = json.loads(out)
    assert code == 0 and doc["spark_exact"] == 4
    validate(doc, OUTPUT_SCHEMAS["spark"])
    code, out, _ = run(capsys, "spark", "--in", str(path), "--exact", "--cap", "3")
    doc = json.loads(out)
    assert code == 0 and doc["spark_above_cap"] and doc["spark_exact"] is None


def test_table1_subcommand(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table1", "--q", "2", "--out", str(path))
    assert code == 0
    validate(json.loads(out), OUTPUT_SCHEMAS["table1"])
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert [r["family"] for r in rows] == ["steiner_affine", "steiner_projective", "polyphase_bibd", "hyperovals"]
    assert float(rows[0]["gershgorin"]) == pytest.approx(6) and float(rows[1]["ours"]) == pytest.approx(12)
    code, _, _ = run(capsys, "table1", "--q", "2,3,5,11", "--out", str(path))
    with open(path, newline="") as fh:
        assert len(list(csv.DictReader(fh))) == 16


@pytest.mark.parametrize("argv", [
    ["bogus"], ["construct"], ["verify"], ["table1", "--q", "x"], ["witness"], ["witness", "verify", "--y", "a"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "usage" in err


def test_missing_input_file(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--in", str(tmp_path / "nope.json"))
    assert code == 2 and json.loads(out)["error"] == "FileNotFoundError"


def test_malformed_input_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"rows": 2, "cols": 2, "data": [')
    code, out, _ = run(capsys, "verify", "--in", str(path))
    assert code == 2 and json.loads(out)["error"] == "ParseError"


def test_tolerance_flag_is_scoped(tmp_path, capsys):
    path = tmp_path / "s.json"
    V = etf("simplex2").V * (1 + 1e-6)
    path.write_text(ser.dumps(ser.matrix_to_json(V)))
    code, _, _ = run(capsys, "verify", "--in", str(path))
    assert code == 2  # columns are not unit norm at the default tolerance
    # accepted as a frame once the tolerance is relaxed, but the scaling breaks tightness
    code, out, _ = run(capsys, "--tol", "1e-4", "verify", "--in", str(path))
    assert code == 1 and json.loads(out)["N"] == 3
    assert "ETFKIT_TOL" not in os.environ


def _cli(*argv, cwd, env=None):
    return subprocess.run([sys.executable, "-m", "etfkit.cli", *argv], cwd=cwd, env=env,
                          capture_output=True, text=True)


def test_subprocess_runs_are_deterministic(tmp_path):
    outputs = []
    for attempt in range(2):
        d = tmp_path / str(attempt)
        d.mkdir()
        steps = [
            ("construct", "steiner", "--plane", "affine", "--q", "2", "--hadamard", "real", "--out", "f.json"),
            ("pert", "check", "--in", "f.json"),
            ("witness", "--in", "f.json", "--out", "y.json"),
            ("table1", "--q", "2,11", "--out", "t.csv"),
        ]
        stdout = []
        for argv in steps:
            res = _cli("--seed", "0", *argv, cwd=d)
            assert res.returncode == 0, res.stderr
            stdout.append(res.stdout)
        files = {name: (d / name).read_bytes() for name in ("f.json", "y.json", "t.csv")}
        outputs.append((stdout, files))
    assert outputs[0] == outputs[1]


def test_environment_tolerance_override(tmp_path):
    path = tmp_path / "s.json"
    V = etf("simplex2").V * (1 + 1e-6)
    path.write_text(ser.dumps(ser.matrix_to_json(V)))
    assert _cli("verify", "--in", str(path), cwd=tmp_path).returncode == 2
    env = {**os.environ, "ETFKIT_TOL": "1e-4"}
    res = _cli("verify", "--in", str(path), cwd=tmp_path, env=env)
    assert res.returncode == 1 and json.loads(res.stdout)["N"] == 3
