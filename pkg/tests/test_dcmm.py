import json

import numpy as np
import pytest

from ibmtest.dcmm import (
    BernoulliMatrix,
    DcmmParams,
    LeastFavorableSpec,
    build_omega,
    calibrate,
    calibrate_b,
    shifted_block_pair,
    least_favorable,
    make_case,
    sample_dirichlet,
    sample_network,
    sinkhorn_normalize,
    snr,
    snr_from_params,
    solve_snr,
)
from ibmtest.errors import InvalidInputError, InvalidModelError
from ibmtest.rng import generator


def _random_model(rng, n, k, directed, p_kk=None):
    p = rng.uniform(0.2, 0.9, (k, k))
    if not directed:
        p = (p + p.T) / 2
    if p_kk is not None:
        p[-1, -1] = p_kk
    theta = rng.uniform(0.5, 1.5, n) * 2 / np.sqrt(n)
    extra = {}
    if directed:
        extra = dict(zeta=rng.uniform(0.5, 1.5, n) * 2 / np.sqrt(n), gamma=rng.dirichlet(np.ones(k), n))
    return DcmmParams(n, k, directed, theta, rng.dirichlet(np.ones(k), n), p, **extra)


def test_params_validation(rng):
    good = _random_model(rng, 10, 3, False)
    with pytest.raises(InvalidModelError):
        DcmmParams(10, 3, False, -good.theta, good.pi, good.p)
    with pytest.raises(InvalidModelError):
        DcmmParams(10, 3, False, good.theta, good.pi * 2, good.p)
    with pytest.raises(InvalidModelError):
        DcmmParams(10, 3, True, good.theta, good.pi, good.p)
    with pytest.raises(InvalidModelError):
        DcmmParams(10, 3, False, good.theta, good.pi, np.triu(good.p))


def test_params_json_round_trip(rng):
    m = _random_model(rng, 8, 2, True)
    back = DcmmParams.from_dict(json.loads(m.to_json()))
    assert back.to_dict() == m.to_dict()


def test_omega_must_be_probability():
    m = DcmmParams(2, 1, False, [1.0, 1.2], [[1.0], [1.0]], [[1.0]])
    with pytest.raises(InvalidModelError, match="omega"):
        build_omega(m)


def test_sampling_is_deterministic_and_stream_separated(rng):
    om = build_omega(_random_model(rng, 50, 2, False))
    a = sample_network(om, False, 7, ("x", 1))
    assert a == sample_network(om, False, 7, ("x", 1))
    assert a != sample_network(om, False, 7, ("x", 2))
    assert np.array_equal(a.to_dense(), a.to_dense().T)


def test_directed_sampling_rate():
    om = BernoulliMatrix(200, np.full((200, 200), 0.1), directed=True)
    g = sample_network(om, True, 1)
    assert g.directed and abs(g.nnz / (200 * 199) - 0.1) < 0.01


def test_dirichlet():
    w = sample_dirichlet([0.3, 1.0, 2.0], 3, ("row", 0))
    assert w.shape == (3,) and abs(w.sum() - 1) < 1e-15 and (w >= 0).all()
    assert np.array_equal(w, sample_dirichlet([0.3, 1.0, 2.0], 3, ("row", 0)))
    with pytest.raises(InvalidInputError):
        sample_dirichlet([1.0, 0.0], 0)


@pytest.mark.parametrize("case", range(1, 7))
def test_make_case_shapes(case):
    k = 2 if case in (3, 6) else 3
    m, mt = make_case(case, 120, k, 5.0, 0.4, 11)
    assert m.directed == mt.directed == (case >= 4)
    assert np.linalg.norm(m.theta) == pytest.approx(5.0)
    assert np.linalg.norm(mt.theta) == pytest.approx(5.0)
    if case in (2, 5):
        assert mt.k == 2 * k
        assert np.allclose(m.pi, mt.pi[:, 0::2] + mt.pi[:, 1::2])
    if case in (1, 4):
        assert np.array_equal(m.pi, mt.pi) and np.array_equal(m.p, mt.p)
        assert not np.array_equal(m.theta, mt.theta)
    if case in (3, 6):
        assert np.array_equal(m.theta, mt.theta)
    a, b = make_case(case, 120, k, 5.0, 0.4, 11)
    assert a.to_dict() == m.to_dict() and b.to_dict() == mt.to_dict()


def test_make_case_argument_errors():
    with pytest.raises(InvalidInputError):
        make_case(3, 50, 3, 5.0, 0.4, 0)
    with pytest.raises(InvalidInputError):
        make_case(7, 50, 3, 5.0, 0.4, 0)
    with pytest.raises(InvalidInputError):
        make_case(1, 50, 3, 5.0, 1.0, 0)
    with pytest.raises(InvalidInputError):
        make_case(1, 50, 3, 5.0, 0.4, 0, directed=True)


@pytest.mark.parametrize("case", [1, 2, 3, 4, 5, 6])
def test_low_rank_snr_matches_dense(case):
    k = 2 if case in (3, 6) else 3
    m, mt = make_case(case, 300, k, 5.0, 0.5, 2)
    dense = snr(build_omega(m), build_omega(mt), m.directed)
    fast = snr_from_params(m, mt)
    assert fast.snr == pytest.approx(dense.snr, rel=1e-10)
    assert fast.trace_delta == pytest.approx(dense.trace_delta, rel=1e-10)
    assert fast.phase_ratio == pytest.approx(dense.phase_ratio, rel=1e-7)


def test_snr_of_identical_pair_is_zero(rng):
    om = build_omega(_random_model(rng, 30, 2, False))
    rep = snr(om, om, False)
    assert rep.snr == 0.0 and rep.phase_ratio == 0.0


def test_calibrate_round_trip():
    cal = calibrate(1, 400, 5, 6.0, 3.75, 0)
    assert 0 < cal.b < 1
    m, mt = make_case(1, 400, 5, 6.0, cal.b, 0)
    assert snr(build_omega(m), build_omega(mt), False).snr == pytest.approx(3.75, rel=1e-3)


def test_calibrate_errors():
    with pytest.raises(InvalidInputError):
        calibrate_b(1, 200, 3, 6.0, 0.0, 0)
    with pytest.raises(InvalidInputError, match="not reachable"):
        calibrate_b(1, 200, 3, 6.0, 1e6, 0)


def test_shifted_block_preset_round_trip():
    cal = solve_snr(lambda beta: shifted_block_pair(1000, beta, 0.5, 0.27, 0), 3.0, 1.0, 60.0)
    pair = shifted_block_pair(1000, cal.b, 0.5, 0.27, 0)
    assert snr_from_params(*pair).snr == pytest.approx(3.0, rel=1e-3)


def test_sinkhorn_identities(rng):
    for k in range(1, 6):
        m = _random_model(rng, 60, k, True)
        s = sinkhorn_normalize(m)
        assert np.allclose(s.p.sum(axis=0), 1, atol=1e-8) and np.allclose(s.p.sum(axis=1), 1, atol=1e-8)
        assert abs(np.linalg.norm(s.theta) - np.linalg.norm(s.zeta)) < 1e-10
        assert np.abs(build_omega(s).omega - build_omega(m).omega).max() < 1e-10


def test_sinkhorn_errors(rng):
    with pytest.raises(InvalidInputError):
        sinkhorn_normalize(_random_model(rng, 10, 2, False))
    m = _random_model(rng, 10, 2, True)
    p = m.p.copy()
    p[0] = 0
    with pytest.raises(InvalidModelError):
        sinkhorn_normalize(DcmmParams(10, 2, True, m.theta, m.pi, p, m.zeta, m.gamma))


@pytest.mark.parametrize("directed", [False, True])
def test_least_favorable_identity(rng, directed):
    base = _random_model(rng, 80, 3, directed, p_kk=1.0)
    sigma = rng.choice([-1, 1], 80)
    out = least_favorable(LeastFavorableSpec(0.3, sigma, base))
    assert out.k == 4
    u = base.theta * base.pi[:, -1]
    v = base.zeta * base.gamma[:, -1] if directed else u
    expected = build_omega(base).omega + 0.3 * np.outer(sigma * u, sigma * v)
    assert np.abs(build_omega(out).omega - expected).max() < 1e-12


def test_least_favorable_zero_epsilon_keeps_omega(rng):
    base = _random_model(rng, 40, 2, False, p_kk=1.0)
    out = least_favorable(LeastFavorableSpec(0.0, np.ones(40), base))
    assert np.abs(build_omega(out).omega - build_omega(base).omega).max() < 1e-12


def test_least_favorable_requires_unit_corner(rng):
    base = _random_model(rng, 20, 2, False, p_kk=0.5)
    with pytest.raises(InvalidModelError):
        least_favorable(LeastFavorableSpec(0.1, np.ones(20), base))
    with pytest.raises(InvalidInputError):
        LeastFavorableSpec(0.1, np.zeros(20), base)


def test_generator_streams():
    a = generator(1, "a", 0).random(3)
    assert np.array_equal(a, generator(1, "a", 0).random(3))
    assert not np.array_equal(a, generator(1, "a", 1).random(3))
    with pytest.raises(InvalidInputError):
        generator(-1)
