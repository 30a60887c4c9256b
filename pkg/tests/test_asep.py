import math

import numpy as np
import pytest

from halfspace.asep import (
    mc_cdf, nu_inverse_from_rates, rates_from_params, simulate_asep,
    simulate_batch,
)


def test_nu_inverse_critical_point():
    q = 0.4
    ni, rho, t = nu_inverse_from_rates(q, 0.5, q / 2)
    assert ni == pytest.approx(1.0, abs=1e-14)
    assert rho == pytest.approx(0.5, abs=1e-14)
    assert t == pytest.approx(q)


def test_nu_inverse_beta_zero_branches():
    q = 0.4
    ni, rho, _ = nu_inverse_from_rates(q, 0.8, 0.0)   # alpha >= 1-q
    assert ni == pytest.approx(0.0, abs=1e-14) and rho == 1.0
    alpha = 0.3                                        # alpha < 1-q
    ni, _, _ = nu_inverse_from_rates(q, alpha, 0.0)
    assert ni == pytest.approx((1 - q - alpha) / alpha, rel=1e-13)
    with pytest.raises(ValueError):
        nu_inverse_from_rates(q, 0.0, 0.1)


def test_rates_from_params_roundtrip():
    q = 0.35
    for (t, nu) in [(0.3, 1.5), (0.2, 2.2), (0.4, 1.0), (0.15, 0.8)]:
        alpha, beta, degen = rates_from_params(q, t, nu)
        assert not degen
        ni, _, tt = nu_inverse_from_rates(q, alpha, beta)
        assert ni == pytest.approx(1 / nu, rel=1e-12)
        assert tt == pytest.approx(t, rel=1e-12)
    alpha, beta, degen = rates_from_params(q, 0.0, 2.0)
    assert degen and beta == 0.0
    assert alpha == pytest.approx((1 - q) / (1 + 0.5), rel=1e-12)


def test_critical_rates_inverse():
    q = 0.4
    alpha, beta, _ = rates_from_params(q, q, 1.0)
    assert (alpha, beta) == (pytest.approx(0.5), pytest.approx(q / 2))


def test_zero_time_and_monotone_without_exit():
    assert simulate_asep(0.4, 0.5, 0.2, 0.0, seed=1) == 0
    tr = simulate_asep(0.4, 0.6, 0.0, 12.0, seed=5, trajectory=True)
    assert np.all(np.diff(tr.counts) >= 0)
    assert tr.counts[-1] == tr.final


def test_first_event_rate():
    # P(N(tau) = 1) = alpha*tau + o(tau)
    q, alpha, beta, tau, n = 0.4, 0.5, 0.2, 1e-3, 1_000_000
    ns = simulate_batch(q, alpha, beta, tau, n, seed=9)
    p1 = np.mean(ns == 1)
    expect = alpha * tau
    se = math.sqrt(expect * (1 - expect) / n)
    assert abs(p1 - expect) < 3 * se + alpha * tau * tau * 2


def test_seed_determinism():
    a = simulate_batch(0.4, 0.5, 0.2, 5.0, 300, seed=17)
    b = simulate_batch(0.4, 0.5, 0.2, 5.0, 300, seed=17)
    c = simulate_batch(0.4, 0.5, 0.2, 5.0, 300, seed=18)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_exclusion_respected_against_reference():
    # independent pure-python reference engine, compared in law
    def reference(q, alpha, beta, tau, rng):
        occ = set()
        t_now = 0.0
        while True:
            moves = []
            if 0 in occ:
                moves.append(("out", 0, beta))
            else:
                moves.append(("in", 0, alpha))
            for i in occ:
                if i + 1 not in occ:
                    moves.append(("r", i, 1.0))
                if i - 1 >= 0 and i - 1 not in occ:
                    moves.append(("l", i, q))
            rate = sum(m[2] for m in moves)
            t_now += rng.exponential(1 / rate)
            if t_now > tau:
                return len(occ)
            u = rng.random() * rate
            acc = 0.0
            for kind, i, r in moves:
                acc += r
                if u < acc:
                    if kind == "in":
                        occ.add(0)
                    elif kind == "out":
                        occ.remove(0)
                    elif kind == "r":
                        occ.remove(i); occ.add(i + 1)
                    else:
                        occ.remove(i); occ.add(i - 1)
                    break

    q, alpha, beta, tau = 0.4, 0.6, 0.3, 4.0
    rng = np.random.default_rng(3)
    ref = np.array([reference(q, alpha, beta, tau, rng) for _ in range(4000)])
    fast = simulate_batch(q, alpha, beta, tau, 40000, seed=4)
    # compare means within combined standard errors
    se = math.sqrt(ref.var() / len(ref) + fast.var() / len(fast))
    assert abs(ref.mean() - fast.mean()) < 4 * se


def test_mc_cdf_shape():
    r = mc_cdf(0.4, 0.5, 0.2, 8.0, 20000, seed=2)
    assert np.all(np.diff(r["cdf"]) >= 0)
    assert r["cdf"][-1] == pytest.approx(1.0)
    assert len(r["s"]) == len(r["stderr"])
