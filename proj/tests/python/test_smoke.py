import json

import pytest

import coarsedim as cd


def test_matrix_space_and_components():
    s = cd.Space.from_matrix(["a", "b", "c"], [[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    assert len(s) == 3
    assert s.distance("a", "c") == "3"
    assert cd.r_components(s, 1) == [["a", "b"], ["c"]]
    assert cd.r_components(s, "inf") == [["a", "b", "c"]]


def test_triangle_violation():
    with pytest.raises(ValueError, match="triangle"):
        cd.Space.from_matrix(["a", "b", "c"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])


def test_brick_cover_verifies():
    ball = cd.zd_ball(2, 10)
    doc = cd.cover(ball, "brick:2", 4, 1)
    assert doc["k"] == 4
    assert doc["bound"] == 20
    rep = cd.verify_cover(ball, doc)
    assert rep["ok"] and rep["min_multiplicity"] >= 2
    doc["bound"] = 1
    assert not cd.verify_cover(ball, doc)["ok"]


def test_interval_cover_bound():
    line = cd.interval(-20, 20)
    doc = cd.cover(line, "interval", 3, 2)
    assert doc["bound"] == 4
    assert cd.verify_cover(line, json.dumps(doc))["ok"]


def test_gallery_generators():
    x, y, image = cd.segments(2)
    assert len(x) == 5 and len(y) == 2
    assert image == ["(2)"] * 2 + ["(4)"] * 3
    assert cd.tower_params(2) == ([2, 3], [16, 48], [1, 9])
    g = cd.torsion_sum(4, 1000)
    assert len(g) == 24


def test_fit_and_proptest():
    model = cd.fit([(1, 7), (2, 12), (4, 22)])
    assert model["kind"] == "linear"
    assert model["coefficients"] == [5, 2]
    assert model["classification"] == "empirical"
    assert all(v == 0 for v in cd.proptest("all", 30, 5).values())


def test_cli_entry_point():
    code, out, _ = cd.run_cli(["proptest", "--suite", "glue", "--cases", "20", "--seed", "2"])
    assert code == 0
    assert json.loads(out)["status"] == "ok"
    code, _, err = cd.run_cli(["nope"])
    assert code == 2 and err


def test_json_round_trip():
    s = cd.zd_ball(1, 3)
    back = cd.Space.from_json(s.to_json())
    assert back.names() == s.names()
    assert back.diameter() == "6"
