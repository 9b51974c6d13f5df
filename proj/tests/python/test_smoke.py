import os

import pytest

try:
    import _adtl as adtl
except ImportError:  # installed-package layout
    import adtl


def fixture(name):
    return os.path.join(os.environ.get("ADTL_FIXTURES", "fixtures"), name)


def read(path):
    with open(path) as f:
        return f.read()


def test_random_machine_roundtrip():
    dot = adtl.random_machine_dot(8, 2, 2, 42)
    assert adtl.machine_size(dot) <= 8
    assert adtl.random_machine_dot(8, 2, 2, 42) == dot
    assert adtl.separating_word_dot(dot, dot) is None


def test_minimize_and_separate():
    coffee = read(fixture("coffee.dot"))
    minimal = adtl.minimize_dot(coffee)
    assert adtl.machine_size(minimal) == 6
    assert adtl.separating_word_dot(coffee, minimal) is None
    other = adtl.random_machine_dot(4, 2, 2, 1)
    assert adtl.separating_word_dot(other, adtl.minimize_dot(other)) is None


def test_learn_coffee():
    coffee = read(fixture("coffee.dot"))
    result = adtl.learn(coffee, learner="ADT[SE|IR_BE|LR_BE]", oracle="exact")
    stats = result["stats"]
    assert stats["SIZ"] == 6
    assert stats["CONVERGED"]
    assert adtl.separating_word_dot(result["hypothesis"], coffee) is None
    assert result["adt"].startswith("digraph")


def test_learn_is_deterministic():
    dot = adtl.random_machine_dot(10, 3, 3, 7)
    a = adtl.learn(dot, seed=5)
    b = adtl.learn(dot, seed=5)
    for key in ("R", "SQ", "CE", "SIZ", "OT_E", "ADT_RN"):
        assert a["stats"][key] == b["stats"][key]


def test_compute_ads():
    coffee = read(fixture("coffee.dot"))
    pair = adtl.compute_ads_dot(coffee, states=[0, 1])
    assert pair is not None and "digraph" in pair
    with pytest.raises(ValueError):
        adtl.compute_ads_dot(coffee, profile="XX")


def test_benchmark_csv():
    csv = adtl.benchmark_csv(5, 2, 2, [1, 2], ["ADT[NSE|NIR|NSR]", "Baseline"])
    lines = csv.strip().split("\n")
    assert lines[0] == adtl.CSV_HEADER
    assert len(lines) == 1 + 2 * 2 + 2 * 2  # data rows + mean/stddev rows
    assert all(",ERROR," not in line for line in lines)
