import pytest

import prolongate


def test_version_and_commands():
    assert prolongate.__version__ == "0.1.0"
    assert "all" in prolongate.commands()


def test_problem_loads():
    p = prolongate.Problem("ishimori-compact")
    assert p.name == "ishimori-compact"
    names = [n for n, _ in p.generators]
    assert len(names) == 14
    assert p.normalize("S3^2") == p.normalize("1 - S1^2 - S2^2")
    assert p.lie("[X1,X2] + [X2,X1]") == "0"
    assert p.d("d(S1*dx)") == "0"


def test_loop_realization():
    r = prolongate.run("verify-realization loop", "ishimori-compact")
    assert r.passed
    assert r.header["command"] == "verify-realization loop"
    spots = [x for x in r.records if x["name"].startswith("spot[")]
    assert len(spots) == 3 and all(x["verdict"] == "pass" for x in spots)


def test_toy_fails():
    r = prolongate.run("closure-check", "toy-nonclosed")
    assert r.exit_code == 1
    assert r.failed()[0]["name"] == "closure[omega]"
    assert "remainder" in r.failed()[0]


def test_deterministic_without_timing():
    a = prolongate.run("oracle", "ishimori-noncompact", points=20, timing=False)
    b = prolongate.run("oracle", "ishimori-noncompact", points=20, timing=False)
    assert a.records == b.records and a.summary == b.summary
    assert "timing_ms" not in a.summary


def test_errors():
    with pytest.raises(ValueError):
        prolongate.Problem("no-such-problem")
    with pytest.raises(Exception):
        prolongate.run("frobnicate", "ishimori-compact")
