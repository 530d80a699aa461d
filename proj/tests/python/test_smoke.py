import os
from pathlib import Path

import pytest

import trackpoly

FIXTURES = Path(os.environ.get("TRACKPOLY_FIXTURES", Path(__file__).resolve().parents[2] / "fixtures"))


def spec(name):
    return trackpoly.load(FIXTURES / name)


def test_k8_9_report():
    r = trackpoly.analyze(spec("k8_9.tt"))
    assert r["valid"]
    assert r["orientable"] is True
    assert r["orientation_action"] == "preserving"
    assert r["symplectic_poly"] == "x^6 - 3*x^5 + 5*x^4 - 7*x^3 + 5*x^2 - 3*x + 1"
    assert r["vertex_poly"] == "x^3 + x^2 - x - 1"
    assert r["puncture_poly"] == "1"


def test_penner_report_and_loop_hint():
    r = trackpoly.analyze(spec("penner.tt"), loop="f")
    assert r["dim_W"] == 5 and r["dim_Z"] == 1
    assert r["puncture_poly"] == "x - 1"
    assert r["symplectic_poly"] == "x^4 - 11*x^3 + 22*x^2 - 11*x + 1"
    assert all(c["passed"] for c in r["checks"])
    assert "status: ok" in trackpoly.analyze_text(spec("penner.tt"))


def test_penner_cover():
    c = trackpoly.cover(spec("penner.tt"))
    assert c["A"][0] == [2, 1, 1, 2, 3, 3]
    assert c["B"][5] == [0, 0, 0, 0, 0, 0]
    assert c["A_plus_B_is_T"] and c["op_identity"] and c["or_identity"]
    lifted = trackpoly.analyze(c["op_spec"])
    assert lifted["orientable"] and lifted["valid"]
    assert "map b -> d a c' d' a' b" in c["op_spec"]


def test_restrict():
    r = trackpoly.restrict(spec("f2_T.txt"), spec("f2_Q.txt"))
    assert r["A"] == [[31, 6, 0], [36, 7, 0], [30, 5, 1]]
    assert r["homology_poly"] == "x^3 - 39*x^2 + 39*x - 1"


def test_errors():
    with pytest.raises(trackpoly.InputError):
        trackpoly.cover(spec("k8_9.tt"))
    with pytest.raises(ValueError):
        trackpoly.analyze("vertex v\nedge a v w\n")
    with pytest.raises(trackpoly.InputError):
        trackpoly.analyze(spec("k8_9.tt"), tol="0")


def test_cli_and_helpers():
    code, out, _ = trackpoly.cli("restrict", FIXTURES / "f1_T.txt", FIXTURES / "f1_Q.txt")
    assert code == 0 and "x^4 - 40*x^3 + 78*x^2 - 40*x + 1" in out
    code, _, err = trackpoly.cli("cover", FIXTURES / "k8_9.tt")
    assert code == 1 and "train track is orientable" in err
    assert trackpoly.power_roots("x - 2", 3) == "x - 8"
    text = spec("penner.tt")
    assert trackpoly.normalize_spec(trackpoly.normalize_spec(text)) == trackpoly.normalize_spec(text)
