import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hedge_nash import (GameError, MixedStrategy, SymmetricGame, approximation_error, best_response,
                        decompose, normalize, payoff_vector)
from hedge_nash.game_core import load_game


def brute_payoffs(c, x):
    n = len(x)
    return [sum(c[i][j] * x[j] for j in range(n)) for i in range(n)]


def brute_eps(c, x):
    # the max over the simplex of Y.CX is attained at a vertex
    p = brute_payoffs(c, x)
    return max(p) - sum(x[i] * p[i] for i in range(len(x)))


def test_payoff_vector_examples(rps01, identity2):
    assert np.allclose(payoff_vector(rps01, MixedStrategy.uniform(3)), [0.5, 0.5, 0.5], atol=1e-15)
    assert np.allclose(payoff_vector(identity2, [0.75, 0.25]), [0.75, 0.25], atol=0)
    e0 = MixedStrategy.pure(3, 0)
    got = payoff_vector(rps01, e0)
    assert np.array_equal(got, brute_payoffs(rps01.payoffs, e0.masses))
    assert np.array_equal(got, [0.5, 1.0, 0.0])


def test_payoff_vector_dimension_mismatch(rps01):
    with pytest.raises(GameError):
        payoff_vector(rps01, [0.5, 0.5])


def test_approximation_error_examples(rps01, identity2):
    assert approximation_error(rps01, MixedStrategy.uniform(3)).epsilon == pytest.approx(0.0, abs=1e-15)
    rep = approximation_error(identity2, [0.75, 0.25])
    assert rep.epsilon == pytest.approx(brute_eps(identity2.payoffs, [0.75, 0.25]), abs=1e-15)
    assert rep.epsilon == pytest.approx(0.125, abs=1e-15)
    assert rep.payoff_max == 0.75 and rep.payoff_self == 0.625
    rep = approximation_error(rps01, MixedStrategy.pure(3, 0))
    assert rep.epsilon == pytest.approx(0.5, abs=1e-15)
    assert rep.best_response_index == 1


def test_best_response_examples(rps01, identity2):
    assert best_response(rps01, MixedStrategy.pure(3, 0)) == 1
    assert best_response(identity2, MixedStrategy.uniform(2)) == 0
    assert best_response(identity2, [0.25, 0.75]) == 1


def test_decompose_examples(rps01):
    d = decompose(rps01)
    assert np.allclose(d.doubly_symmetric_part, 0.5, atol=1e-15)
    assert np.allclose(d.skew_part, rps01.payoffs - 0.5, atol=1e-15)
    sym = SymmetricGame(np.array([[0.1, 0.7], [0.7, 0.3]]))
    d = decompose(sym)
    assert np.array_equal(d.doubly_symmetric_part, sym.payoffs)
    assert not d.skew_part.any()


def test_normalize_examples():
    assert np.array_equal(normalize([[-1, 1], [1, -1]]).payoffs, [[0, 1], [1, 0]])
    assert np.allclose(normalize([[0.2, 0.8], [0.8, 0.2]]).payoffs, [[0, 1], [1, 0]], atol=1e-15)
    assert np.array_equal(normalize([[3, 3], [3, 3]]).payoffs, [[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(GameError):
        normalize([[np.inf, 0], [0, 0]])


def test_game_validation():
    with pytest.raises(GameError):
        SymmetricGame(np.array([[1.5, 0], [0, 0]]))
    with pytest.raises(GameError):
        SymmetricGame(np.zeros((2, 3)))
    with pytest.raises(GameError):
        SymmetricGame(np.zeros((0, 0)))


def test_strategy_validation_and_renormalization():
    x = MixedStrategy([0.5, 0.5 + 5e-10])
    assert abs(x.masses.sum() - 1) <= 1e-12
    with pytest.raises(GameError):
        MixedStrategy([0.5, 0.6])
    with pytest.raises(GameError):
        MixedStrategy([1.5, -0.5])
    assert MixedStrategy([0.0, 1.0]).support == (1,)
    assert not MixedStrategy([0.0, 1.0]).is_interior()
    assert MixedStrategy.uniform(4).is_interior()


def test_values_are_immutable(rps01):
    with pytest.raises(ValueError):
        rps01.payoffs[0, 0] = 0.3
    with pytest.raises(ValueError):
        MixedStrategy.uniform(3).masses[0] = 1.0


def test_game_json_roundtrip(tmp_path, rps01):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(rps01.to_json()))
    assert load_game(path) == rps01
    bad = {"n": 2, "payoffs": [0, 1, 2]}
    with pytest.raises(GameError):
        SymmetricGame.from_json(bad)
    raw = {"n": 2, "payoffs": [-1, 1, 1, -1]}
    with pytest.raises(GameError):
        SymmetricGame.from_json(raw)
    assert np.array_equal(SymmetricGame.from_json(raw, normalize_payoffs=True).payoffs, [[0, 1], [1, 0]])


small_n = st.integers(1, 6)


@st.composite
def game_and_strategy(draw):
    n = draw(small_n)
    c = draw(arrays(np.float64, (n, n), elements=st.floats(0, 1)))
    w = draw(arrays(np.float64, n, elements=st.floats(0, 1)))
    if w.sum() == 0:
        w[0] = 1.0
    return SymmetricGame(c), MixedStrategy(w / w.sum())


@settings(max_examples=200, deadline=None)
@given(game_and_strategy())
def test_error_in_unit_interval_and_matches_brute_force(gx):
    g, x = gx
    rep = approximation_error(g, x)
    assert 0.0 <= rep.epsilon <= 1.0
    assert rep.payoff_max >= rep.payoff_self
    assert rep.epsilon == pytest.approx(rep.payoff_max - rep.payoff_self, abs=1e-12)
    assert rep.epsilon == pytest.approx(brute_eps(g.payoffs.tolist(), x.masses.tolist()), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(game_and_strategy(), st.floats(0.01, 10), st.floats(-5, 5))
def test_affine_covariance(gx, a, b):
    g, x = gx
    base = approximation_error(g, x)
    # evaluate the metric on aC + b directly (outside [0,1], so bypass the game type)
    c2 = a * g.payoffs + b
    cx = c2 @ x.masses
    eps2 = cx.max() - x.masses @ cx
    assert eps2 == pytest.approx(a * base.epsilon, abs=1e-10)
    cx_base = g.payoffs @ x.masses
    ties = np.isclose(cx_base, cx_base.max(), rtol=0, atol=1e-12).sum()
    if ties == 1:
        assert int(np.argmax(cx)) == base.best_response_index


@settings(max_examples=200, deadline=None)
@given(game_and_strategy())
def test_decomposition_reconstructs(gx):
    g, _ = gx
    d = decompose(g)
    assert np.abs(d.doubly_symmetric_part + d.skew_part - g.payoffs).max() <= 1e-15
    assert np.array_equal(d.doubly_symmetric_part, d.doubly_symmetric_part.T)
    assert np.array_equal(d.skew_part, -d.skew_part.T)
