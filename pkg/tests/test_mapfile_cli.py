import json
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhm import golden
from qhm.classify43 import hopf_standard, phi_t
from qhm.cli import main
from qhm.core import QuadraticMap
from qhm.mapfile import (
    MapFileError,
    format_mapfile,
    parse_mapfile,
    parse_report_json,
    read_mapfile,
    report_json,
    write_mapfile,
)

HOPF_TEXT = """# standard Hopf map
qhm 4 3
1 0 0 0
0 1 0 0
0 0 -1 0
0 0 0 -1

0 0 1 0   # A_2
0 0 0 1
1 0 0 0
0 1 0 0
0 0 0 -1
0 0 1 0
0 1 0 0
-1 0 0 0
"""


@st.composite
def rational_maps(draw):
    m = draw(st.integers(1, 5))
    n = draw(st.integers(1, 3))
    comps = []
    for _ in range(n):
        a = np.empty((m, m), dtype=object)
        for i in range(m):
            for j in range(i, m):
                a[i, j] = a[j, i] = draw(st.fractions(max_denominator=10**6))
        comps.append(a)
    return QuadraticMap.from_arrays(comps)


class TestMapFile:
    def test_parse_hopf(self):
        assert parse_mapfile(HOPF_TEXT) == hopf_standard(1)

    @settings(max_examples=100, deadline=None)
    @given(rational_maps())
    def test_rational_round_trip_bit_exact(self, qmap):
        text = format_mapfile(qmap)
        again = parse_mapfile(text)
        assert again == qmap and again.exact
        assert format_mapfile(again) == text

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=3, max_size=3))
    def test_float_round_trip(self, vals):
        a, b, c = vals
        qmap = QuadraticMap([[[a, b], [b, c]]])
        assert parse_mapfile(format_mapfile(qmap)) == qmap

    def test_file_io(self, tmp_path):
        path = tmp_path / "ex.qhm"
        write_mapfile(golden.umbilical_r8_r5(), str(path), comment="umbilical")
        assert read_mapfile(str(path)) == golden.umbilical_r8_r5()

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "# only comments\n",
            "qhm 2\n1 0\n0 1\n",
            "map 2 1\n1 0\n0 1\n",
            "qhm 2 1\n1 0\n",
            "qhm 2 1\n1 0 0\n0 1\n",
            "qhm 2 1\n1 x\nx 1\n",
            "qhm 2 1\n1 2\n3 1\n",
            "qhm 0 1\n",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(MapFileError):
            parse_mapfile(text)


def test_report_json_round_trip():
    report = {"a": Fraction(1, 3), "b": [1, 2.5, Fraction(-7, 2)], "c": True, "d": None, "e": "x"}
    line = report_json(report)
    assert "\n" not in line
    assert parse_report_json(line) == report


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def test_verify_hopf(self, tmp_path, capsys):
        path = tmp_path / "hopf.qhm"
        path.write_text(HOPF_TEXT)
        code, out, _ = run(["verify", str(path)], capsys)
        assert code == 0 and "is_harmonic_morphism: true" in out

    def test_verify_identity(self, tmp_path, capsys):
        path = tmp_path / "id.qhm"
        path.write_text("qhm 2 1\n1 0\n0 1\n")
        code, out, _ = run(["verify", "--json", str(path)], capsys)
        report = json.loads(out)
        assert code == 1 and report["trace_violations"] == [[1, 2]]

    def test_verify_malformed(self, tmp_path, capsys):
        path = tmp_path / "bad.qhm"
        path.write_text("qhm 2 1\n1 0\n")
        code, _, err = run(["verify", str(path)], capsys)
        assert code == 2 and "error" in err

    def test_missing_file(self, tmp_path, capsys):
        assert run(["verify", str(tmp_path / "nope")], capsys)[0] == 2

    def test_normal_form_examples(self, tmp_path, capsys):
        for qmap, checks in [
            (golden.nonumbilical_r8_r3(), {"k": 4, "r": 0, "umbilical": False, "positive_eigenvalues": [3, 3, 2, 2]}),
            (golden.umbilical_r8_r5(), {"umbilical": True, "lambda": 3}),
            (golden.zero_padded(hopf_standard(1), 2), {"r": 2}),
        ]:
            path = tmp_path / "m.qhm"
            write_mapfile(qmap, str(path))
            code, out, _ = run(["normal-form", "--json", str(path)], capsys)
            report = json.loads(out)
            assert code == 0
            for key, value in checks.items():
                assert report[key] == value

    def test_classify(self, tmp_path, capsys):
        path = tmp_path / "h.qhm"
        write_mapfile(hopf_standard(1), str(path))
        code, out, _ = run(["classify", "--json", str(path)], capsys)
        report = json.loads(out)
        assert code == 0 and report["lambda"] == 1 and report["t"] == 0 and report["residual"] == 0

        write_mapfile(phi_t(2, 1.0), str(path))
        code, out, _ = run(["classify", "--json", str(path)], capsys)
        assert code == 0 and json.loads(out)["residual"] < 1e-8

        write_mapfile(golden.nonumbilical_r8_r3(), str(path))
        assert run(["classify", str(path)], capsys)[0] == 1

    def test_generate_hopf2_is_standard_form(self, capsys):
        code, out, _ = run(["generate", "hopf", "2"], capsys)
        assert code == 0
        qmap = parse_mapfile(out)
        assert qmap == golden_hopf2()

    def test_generate_hopf3(self, capsys):
        code, _, err = run(["generate", "hopf", "3"], capsys)
        assert code == 2 and "1, 2, 4" in err

    @pytest.mark.parametrize(
        "argv",
        [["generate", "hopf"], ["generate", "hopf", "x"], ["generate", "clifford", "0"], ["generate", "phi-t", "0", "1"]],
    )
    def test_generate_usage(self, argv, capsys):
        assert run(argv, capsys)[0] == 2

    def test_bad_tol(self, capsys):
        assert run(["verify", "--tol", "-1", "x"], capsys)[0] == 2

    def test_stdin_pipeline(self, capsys, monkeypatch):
        code, out, _ = run(["generate", "clifford", "5"], capsys)
        code, out, _ = run(["verify", "--oracle", "20", "--json"], capsys, stdin=out, monkeypatch=monkeypatch)
        report = json.loads(out)
        assert code == 0 and report["oracle_conformal"] is True

    def test_lift_and_out(self, tmp_path, capsys):
        src, dst = tmp_path / "h.qhm", tmp_path / "lift.qhm"
        write_mapfile(hopf_standard(1), str(src))
        assert run(["generate", "lift", str(src), "--out", str(dst)], capsys)[0] == 0
        assert run(["verify", str(dst)], capsys)[0] == 0
        assert read_mapfile(str(dst)).m == 8

    def test_lift_of_non_morphism(self, tmp_path, capsys):
        src = tmp_path / "id.qhm"
        src.write_text("qhm 2 1\n1 0\n0 1\n")
        assert run(["generate", "lift", str(src)], capsys)[0] == 1


def golden_hopf2():
    from qhm.constructions import hopf_construction

    return hopf_construction(2)


def test_module_entry_point():
    gen = subprocess.run([sys.executable, "-m", "qhm", "generate", "hopf", "4"], capture_output=True, text=True)
    assert gen.returncode == 0
    ver = subprocess.run([sys.executable, "-m", "qhm", "verify"], input=gen.stdout, capture_output=True, text=True)
    assert ver.returncode == 0


NEAR_MISS = "qhm 2 2\n1 0\n0 -1.000001\n0 1\n1 0\n"


def test_tolerance_overrides(tmp_path):
    path = tmp_path / "near.qhm"
    path.write_text(NEAR_MISS)
    cmd = [sys.executable, "-m", "qhm", "verify", str(path)]
    env = {k: v for k, v in os.environ.items() if k != "QHM_TOL"}
    assert subprocess.run(cmd, env=env, capture_output=True).returncode == 1
    assert subprocess.run(cmd + ["--tol", "1e-5"], env=env, capture_output=True).returncode == 0
    assert subprocess.run(cmd, env={**env, "QHM_TOL": "1e-5"}, capture_output=True).returncode == 0
