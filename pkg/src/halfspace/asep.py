"""Continuous-time half-space ASEP with boundary injection/ejection.

Particles live on {0, 1, 2, ...}, jump right at rate 1 and left at rate q < 1
with exclusion, enter at 0 at rate alpha when it is empty and exit from 0 at
rate beta.  The system starts empty; N(tau) is the particle count at time tau.

The event loop is a direct (Gillespie) method, jit-compiled so that 1e6
trajectories at tau ~ 20 take seconds.  Batches use one RNG stream per sample
keyed by (seed, sample index), so results do not depend on worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "nu_inverse_from_rates",
    "rates_from_params",
    "simulate_asep",
    "simulate_batch",
    "mc_cdf",
]


def nu_inverse_from_rates(q: float, alpha: float, beta: float):
    """Boundary density data from the rates.

    Returns (nu_inv, rho, t) with
    nu_inv = (1-q+beta-alpha+sqrt((1-q+beta-alpha)^2+4 alpha beta))/(2 alpha),
    rho = 1/(1+nu_inv), t = beta/alpha.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not (0 <= q < 1) or beta < 0:
        raise ValueError("need 0 <= q < 1 and beta >= 0")
    d = 1 - q + beta - alpha
    nu_inv = (d + math.sqrt(d * d + 4 * alpha * beta)) / (2 * alpha)
    rho = 1.0 / (1.0 + nu_inv)
    return nu_inv, rho, beta / alpha


def rates_from_params(q: float, t: float, nu: float):
    """Invert (t, nu) -> (alpha, beta): alpha = (1-q)/nu / ((1+1/nu)(1/nu - t)),
    beta = t * alpha.

    Returns (alpha, beta, degenerate); degenerate flags the t = 0, rho = 1
    family where the correspondence collapses and the canonical
    representative alpha = (1-q)/(1+1/nu) is returned.
    """
    if not (0 <= t < 1) or nu <= 0 or nu * t >= 1:
        raise ValueError("need 0 <= t < 1, nu > 0, nu*t < 1")
    nu_inv = 1.0 / nu
    alpha = nu_inv * (1 - q) / ((1 + nu_inv) * (nu_inv - t))
    beta = t * alpha
    degenerate = (t == 0.0)
    got, _, _ = nu_inverse_from_rates(q, alpha, beta)
    if abs(got - nu_inv) > 1e-12 * max(1.0, nu_inv):
        raise ArithmeticError(f"round-trip residual {abs(got - nu_inv):.2e}")
    return alpha, beta, degenerate


@njit(cache=True)
def _run_one(q, alpha, beta, tau, seed, lattice_size, record, times, values):
    np.random.seed(seed)
    occ = np.zeros(lattice_size, dtype=np.uint8)
    npart = 0
    rightmost = -1
    t_now = 0.0
    n_rec = 0
    while True:
        # total rate: boundary + bulk jumps over the occupied range
        rate = alpha * (1 - occ[0]) + beta * occ[0]
        hi = rightmost
        for i in range(hi + 1):
            if occ[i]:
                if i + 1 < lattice_size and not occ[i + 1]:
                    rate += 1.0
                if i > 0 and not occ[i - 1]:
                    rate += q
        if rate <= 0.0:
            break
        t_now += -math.log(np.random.random()) / rate
        if t_now > tau:
            break
        u = np.random.random() * rate
        # boundary event
        acc = alpha * (1 - occ[0]) + beta * occ[0]
        if u < acc:
            if occ[0]:
                occ[0] = 0
                npart -= 1
                if rightmost == 0:
                    rightmost = -1
            else:
                occ[0] = 1
                npart += 1
                if rightmost < 0:
                    rightmost = 0
            if record:
                times[n_rec] = t_now
                values[n_rec] = npart
                n_rec += 1
            continue
        done = False
        for i in range(hi + 1):
            if occ[i]:
                if i + 1 < lattice_size and not occ[i + 1]:
                    acc += 1.0
                    if u < acc:
                        occ[i] = 0
                        occ[i + 1] = 1
                        if i + 1 > rightmost:
                            rightmost = i + 1
                        done = True
                        break
                if i > 0 and not occ[i - 1]:
                    acc += q
                    if u < acc:
                        occ[i] = 0
                        occ[i - 1] = 1
                        if i == rightmost:
                            while rightmost >= 0 and not occ[rightmost]:
                                rightmost -= 1
                        done = True
                        break
        if done and rightmost >= lattice_size - 2:
            # should never trigger at sane tau; growing is not supported in-jit
            break
    return npart, n_rec


@njit(cache=True)
def _run_batch(q, alpha, beta, tau, seeds, lattice_size):
    out = np.empty(seeds.shape[0], dtype=np.int64)
    dummy_t = np.empty(1)
    dummy_v = np.empty(1, dtype=np.int64)
    for k in range(seeds.shape[0]):
        n, _ = _run_one(q, alpha, beta, tau, seeds[k], lattice_size, False,
                        dummy_t, dummy_v)
        out[k] = n
    return out


def _lattice_size(tau: float) -> int:
    # rightmost excursion is at most Poisson(tau) jumps; 8 sigma of headroom
    return int(max(64, tau + 8 * math.sqrt(max(tau, 1.0)) + 16))


@dataclass
class Trajectory:
    times: np.ndarray
    counts: np.ndarray
    final: int


def simulate_asep(q: float, alpha: float, beta: float, tau_end: float,
                  seed: int = 0, trajectory: bool = False):
    """One exact-in-law run; returns N(tau_end), or a Trajectory of the
    boundary events when trajectory=True."""
    if q >= 1 or alpha < 0 or beta < 0:
        raise ValueError("need q < 1 and nonnegative rates")
    size = _lattice_size(tau_end)
    seed32 = np.random.SeedSequence(seed).generate_state(1)[0]
    if not trajectory:
        times = np.empty(1)
        values = np.empty(1, dtype=np.int64)
        n, _ = _run_one(q, alpha, beta, tau_end, seed32, size, False, times, values)
        return int(n)
    cap = int(10 * (alpha + beta + 1) * (tau_end + 10))
    times = np.empty(cap)
    values = np.empty(cap, dtype=np.int64)
    n, n_rec = _run_one(q, alpha, beta, tau_end, seed32, size, True, times, values)
    return Trajectory(times[:n_rec].copy(), values[:n_rec].copy(), int(n))


def simulate_batch(q: float, alpha: float, beta: float, tau: float,
                   nsamples: int, seed: int = 0) -> np.ndarray:
    """nsamples independent values of N(tau), deterministic per (seed, index)."""
    ss = np.random.SeedSequence(seed)
    seeds = ss.generate_state(nsamples).astype(np.int64)
    return _run_batch(q, alpha, beta, tau, seeds, _lattice_size(tau))


def mc_cdf(q: float, alpha: float, beta: float, tau: float, nsamples: int,
           seed: int = 0, s_grid=None):
    """Empirical cdf of -N(tau) on s_grid with binomial standard errors.

    Returns dict with keys s, cdf, stderr, samples_mean.
    """
    ns = simulate_batch(q, alpha, beta, tau, nsamples, seed)
    x = -ns
    if s_grid is None:
        lo, hi = int(x.min()), int(x.max())
        s_grid = list(range(lo, hi + 1))
    s_grid = np.asarray(sorted(s_grid))
    cdf = np.array([(x <= s).mean() for s in s_grid])
    stderr = np.sqrt(np.maximum(cdf * (1 - cdf), 1e-12) / nsamples)
    return {"s": s_grid, "cdf": cdf, "stderr": stderr,
            "samples_mean": float(x.mean()), "nsamples": nsamples}
