import cmath

import numpy as np
import pytest

from secantpot import (
    NotSimpleRoot,
    PoleAt,
    certify_root,
    divided_difference,
    eval_jet,
    find_roots,
    parse_function,
)
from secantpot.jet import Jet
from secantpot.verify import check_jets


def test_jets_cubic():
    assert np.allclose(eval_jet(parse_function("z^3-1"), 1), (0, 3, 6, 6))


def test_jets_second_cubic():
    assert np.allclose(eval_jet(parse_function("(z^2-1)*(z-1/2)"), 1), (0, 1, 5, 6))


def test_pole():
    with pytest.raises(PoleAt):
        eval_jet(parse_function("1/z"), 0)


def test_jet_reciprocal_matches_derivatives():
    # 1/(1+t) = 1 - t + t^2 - t^3
    j = Jet((1, 1, 0, 0)).reciprocal()
    assert np.allclose(j.c, (1, -1, 1, -1))


@pytest.mark.parametrize("text", ["z^3-1", "(z^2-1)*(z-1/2)", "1/(z^2+2)", "(z^3-1)/(z+3)", "z^5-2*z+1i"])
def test_jets_match_finite_differences(text):
    res = check_jets(parse_function(text), seed=7, count=100)
    assert res.passed, res.line()


def test_certify_real_root():
    r = certify_root(parse_function("z^3-1"), 0.9)
    assert r.z0 == 1
    assert np.allclose((r.d1, r.d2), (3, 6))
    assert not r.exceptional


def test_certify_complex_root():
    f = parse_function("z^3-1")
    r = certify_root(f, -0.4 + 0.9j)
    assert abs(r.z0 - cmath.exp(2j * cmath.pi / 3)) < 1e-12
    assert abs(r.z0 ** 3 - 1) < 1e-12


def test_double_root_refused():
    with pytest.raises(NotSimpleRoot):
        certify_root(parse_function("z^2"), 0.1)


def test_find_roots_sorted_and_certified():
    roots = find_roots(parse_function("(z^2-1)*(z-1/2)"))
    assert [r.z0 for r in roots] == [-1, 0.5, 1]


def test_find_roots_rational():
    roots = find_roots(parse_function("(z^2-4)/(z-1)"))
    assert sorted(r.z0.real for r in roots) == [-2, 2]


def test_exceptional_flag():
    # f''(0) = 0 for z^3 - z
    r = certify_root(parse_function("z^3-z"), 0.01)
    assert r.z0 == 0 and r.exceptional


def test_divided_differences():
    f = parse_function("z^2-1")
    assert np.allclose(divided_difference(f, 2, 3), (7, 5))
    assert np.allclose(divided_difference(f, 2, 2), (5, 4))
    assert np.isclose(divided_difference(parse_function("z^3-1"), 1, 1)[1], 3)


@pytest.mark.parametrize("text", ["z^3-1", "(z^3-1)/(z+3)", "z^7-3*z^2+1"])
def test_divided_difference_continuity(text):
    f = parse_function(text)
    x = 0.7 + 0.4j
    limit = np.array(divided_difference(f, x, x))
    vals = [np.array(divided_difference(f, x, x + 10.0 ** -j)) for j in range(1, 13)]
    gaps = [np.max(np.abs(vals[j + 1] - vals[j])) for j in range(len(vals) - 1)]
    # Cauchy: each gap shrinks roughly tenfold
    for a, b in zip(gaps, gaps[1:]):
        assert b <= 0.2 * a + 1e-14
    assert np.max(np.abs(vals[-1] - limit)) <= 1e-10 * max(1, np.max(np.abs(limit)))


def test_divided_difference_pole():
    with pytest.raises(PoleAt):
        divided_difference(parse_function("1/z+1"), 0, 1)
