import json
import math
from fractions import Fraction

import pytest

import qdyn


def test_field_and_unit():
    f = qdyn.make_field(5)
    assert f.D == 5
    assert f.m1_bound == 3
    assert f.norm_of_eps == -1
    assert math.isclose(f.eps_float, (1 + math.sqrt(5)) / 2)
    with pytest.raises(qdyn.ConfigError, match="not square-free"):
        qdyn.make_field(4)
    with pytest.raises(ValueError):
        qdyn.make_field(12)


def test_euclidean_minimum():
    assert qdyn.euclidean_min(5, Fraction(1, 2), Fraction(1, 2)) == Fraction(1, 4)
    assert qdyn.euclidean_min(5, "4/5", "2/5") == Fraction(1, 5)
    assert qdyn.euclidean_min(5, 0, 0) == 0


def test_minima():
    assert [qdyn.davenport_minima(i) for i in (1, 2, 3)] == [Fraction(1, 4), Fraction(1, 5), Fraction(19, 121)]
    assert qdyn.davenport_minima(10) > qdyn.t_infinity()


def test_partition():
    p = qdyn.partition(5, 1)
    assert len(p) == 5
    assert p.level == 1
    assert p.verify_markov() == (True, "")
    assert p.verify_tiling()[0]
    dump = json.loads(p.to_json())
    assert len(dump["rectangles"]) == 5
    assert len(qdyn.lattice_set(5)) == 19


def test_entropy():
    e = qdyn.entropy([[0, 1], [1, 1]])
    assert math.isclose(e["value"], math.log((1 + math.sqrt(5)) / 2), rel_tol=1e-12)
    assert e["lower"] <= e["value"] <= e["upper"]
    assert qdyn.entropy([[0, 1], [0, 0]])["empty"]


def test_dim_curve():
    rows = qdyn.dim_curve(5, 3, "0.10", "0.25", "1/200")
    assert len(rows) == 31
    assert rows[0]["t"] == Fraction(1, 10)
    dims = [r["dim_upper"] for r in rows]
    assert all(b <= a + 1e-9 for a, b in zip(dims, dims[1:]))


def test_coding_and_certification():
    codes = qdyn.code_qpoint(5, 0, "1/2", "1/2")
    assert len(codes) == 1
    text, value = qdyn.certify(5, 0, codes[0])
    assert text == "1/4"
    assert value == 0.25
    with pytest.raises(qdyn.ConfigError):
        qdyn.certify(5, 0, "|0|0|0|")
