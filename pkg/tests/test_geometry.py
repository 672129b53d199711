import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frachardy.geometry import (
    Ball,
    HalfLine,
    HalfSpace,
    Interval,
    PolytopeH,
    dist,
    domain_from_dict,
    domain_to_dict,
    load_domain,
    scale,
    supporting_bound_check,
)


def unit_square():
    return PolytopeH(((1, 0), (-1, 0), (0, 1), (0, -1)), (1, 0, 1, 0))


def triangle():
    # vertices (0, 0), (2, 0), (0, 1)
    n = np.array([1.0, 2.0]) / math.sqrt(5.0)
    return PolytopeH(((0, -1), (-1, 0), tuple(n)), (0, 0, 2 / math.sqrt(5.0))), \
        np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]])


def segment_distance(x, p, q):
    d = q - p
    t = np.clip(np.dot(x - p, d) / np.dot(d, d), 0.0, 1.0)
    return float(np.linalg.norm(x - (p + t * d)))


def test_basic_distances():
    assert dist(Interval(0, 1), 0.3) == pytest.approx(0.3)
    assert dist(HalfSpace((0, 1), 0.0), (7.0, 2.5)) == 2.5
    assert dist(Ball((0, 0), 1), (0.5, 0)) == 0.5
    assert dist(HalfLine(), 4.0) == 4.0
    assert dist(HalfLine(1.0, -1), -2.0) == 3.0


def test_outside_is_zero():
    assert dist(Interval(0, 1), 1.5) == 0.0
    assert dist(Ball((0, 0), 1), (2, 0)) == 0.0
    assert dist(unit_square(), (1.5, 0.5)) == 0.0
    assert dist(HalfSpace((0, 1), 0.0), (0, -1)) == 0.0


def test_vectorised_points():
    d = dist(Interval(0, 1), np.array([0.1, 0.5, 0.8, 2.0]))
    np.testing.assert_allclose(d, [0.1, 0.5, 0.2, 0.0], atol=1e-15)
    d2 = dist(unit_square(), np.array([[0.5, 0.5], [0.1, 0.7]]))
    np.testing.assert_allclose(d2, [0.5, 0.1], atol=1e-15)


@pytest.mark.parametrize("bad", [
    lambda: Interval(1, 0),
    lambda: Ball((0, 0), 0.0),
    lambda: HalfSpace((1, 1), 0.0),
    lambda: PolytopeH(((1, 0), (-1, 0)), (0, -1)),
    lambda: PolytopeH(((2, 0),), (1,)),
])
def test_invalid_domains(bad):
    with pytest.raises(ValueError):
        bad()


def test_redundant_constraints_are_harmless():
    sq = unit_square()
    redundant = PolytopeH(sq.normals + ((1, 0),), sq.offsets + (5,))
    x = np.array([0.3, 0.6])
    assert dist(redundant, x) == dist(sq, x)


def test_scale_examples():
    assert scale(Interval(0, 1), 3) == Interval(0, 3)
    assert dist(scale(Ball((0, 0), 1), 2), (1, 0)) == 1.0
    assert dist(scale(unit_square(), 0.5), (0.25, 0.25)) == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(ValueError):
        scale(Interval(0, 1), 0.0)


DOMAINS_1D = [Interval(-1, 2), HalfLine(0.5, 1), HalfLine(0.0, -1)]
DOMAINS_2D = [HalfSpace((0, 1), 0.3), Ball((0.2, -0.1), 1.5), unit_square(), triangle()[0]]


@given(st.floats(-3, 3), st.floats(-3, 3), st.sampled_from([0.5, 3.0, 1.7]))
def test_scaling_1d(x, y, mu):
    for dom in DOMAINS_1D:
        assert dist(scale(dom, mu), mu * x) == pytest.approx(mu * dist(dom, x), rel=1e-14, abs=1e-14)
        assert abs(dist(dom, x) - dist(dom, y)) <= abs(x - y) + 1e-14


@given(st.lists(st.floats(-2.5, 2.5), min_size=4, max_size=4), st.sampled_from([0.5, 3.0]))
def test_scaling_and_lipschitz_2d(c, mu):
    x, y = np.array(c[:2]), np.array(c[2:])
    for dom in DOMAINS_2D:
        assert dist(scale(dom, mu), mu * x) == pytest.approx(mu * dist(dom, x), rel=1e-13, abs=1e-13)
        assert abs(dist(dom, x) - dist(dom, y)) <= np.linalg.norm(x - y) + 1e-13


def test_polytope_distance_against_facet_projection():
    tri, verts = triangle()
    rng = np.random.default_rng(7)
    edges = [(verts[0], verts[1]), (verts[0], verts[2]), (verts[1], verts[2])]
    count = 0
    while count < 200:
        x = rng.uniform([0, 0], [2, 1])
        if dist(tri, x) <= 0:
            continue
        brute = min(segment_distance(x, p, q) for p, q in edges)
        assert dist(tri, x) == pytest.approx(brute, abs=1e-12)
        count += 1


def test_chebyshev_center_of_square():
    center, r = unit_square().chebyshev_center()
    np.testing.assert_allclose(center, [0.5, 0.5], atol=1e-9)
    assert r == pytest.approx(0.5, abs=1e-9)


def test_supporting_bound_examples():
    rng = np.random.default_rng(3)
    assert supporting_bound_check(Ball((0, 0), 1), (0, 0.5), rng.uniform(-2, 2, (100, 2)))
    assert supporting_bound_check(Interval(0, 1), 0.25, rng.uniform(-3, 4, 100))
    tri, _ = triangle()
    assert supporting_bound_check(tri, (0.5, 0.2), rng.uniform(-1, 3, (500, 2)))
    assert supporting_bound_check(HalfSpace((0, 1), 0), (3, 1), rng.uniform(-5, 5, (100, 2)))
    with pytest.raises(ValueError):
        supporting_bound_check(Ball((0, 0), 1), (3, 0), rng.uniform(-2, 2, (5, 2)))


@pytest.mark.parametrize("dom", DOMAINS_1D + DOMAINS_2D)
def test_json_round_trip(dom, tmp_path):
    doc = domain_to_dict(dom)
    assert domain_from_dict(json.loads(json.dumps(doc))) == dom
    path = tmp_path / "d.json"
    path.write_text(json.dumps(doc))
    assert load_domain(path) == dom


def test_unknown_domain_type():
    with pytest.raises(ValueError):
        domain_from_dict({"type": "torus"})
