"""q-Pochhammer symbols, Jacobi theta, and contour quadrature.

All routines accept numpy arrays and broadcast; infinite products truncate
with an explicit error certificate.  Circle contours use the trapezoid rule
(spectrally accurate for analytic integrands); rays and segments use
Gauss-Legendre panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def qpoch(a, q: float, n: int | None = None, tol: float = 1e-16):
    """(a;q)_n = prod_{i<n} (1 - a q^i); n=None means the infinite product.

    For n=None requires |q| < 1; the product is truncated at m with
    |a| q^m < tol*(1-q), which bounds the relative error by ~tol.
    """
    a = np.asarray(a)
    if n is not None:
        out = np.ones_like(a, dtype=complex if np.iscomplexobj(a) else float)
        for i in range(n):
            out = out * (1 - a * q ** i)
        return out if out.shape else out[()]
    if not abs(q) < 1:
        raise ValueError("infinite q-Pochhammer needs |q| < 1")
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    if amax == 0.0:
        m = 1
    else:
        m = max(1, int(math.ceil(math.log(max(tol * (1 - abs(q)), 1e-300) / max(amax, 1e-300))
                                 / math.log(abs(q)))) if q != 0 else 1)
    out = np.ones_like(a, dtype=complex if np.iscomplexobj(a) else float)
    for i in range(m + 1):
        out = out * (1 - a * q ** i)
    return out if out.shape else out[()]


def qpoch_certificate(a_abs: float, q: float, tol: float = 1e-16) -> float:
    """Bound on the relative truncation error of qpoch(a, q) at modulus a_abs."""
    if q == 0:
        return 0.0
    m = max(1, int(math.ceil(math.log(max(tol * (1 - abs(q)), 1e-300) / max(a_abs, 1e-300))
                             / math.log(abs(q)))))
    tail = a_abs * abs(q) ** (m + 1) / (1 - abs(q))
    return float(math.expm1(tail)) if tail < 1 else float("inf")


def theta3(zeta, q: float):
    """Jacobi theta: theta3(zeta;q) = (q;q)_inf (-sqrt(q) zeta;q)_inf (-sqrt(q)/zeta;q)_inf."""
    zeta = np.asarray(zeta)
    if np.any(zeta == 0):
        raise ValueError("theta3 needs zeta != 0")
    sq = math.sqrt(q)
    return qpoch(q, q) * qpoch(-sq * zeta, q) * qpoch(-sq / zeta, q)


def theta3_sum(zeta, q: float, cap: int = 40):
    """Lattice-sum route sum_k q^(k^2/ ... ) used for cross-checks:
    sum_{|k|<=cap} q^{k^2} zeta^{2k} equals theta3(zeta^2; q^2)."""
    zeta = np.asarray(zeta)
    ks = np.arange(-cap, cap + 1)
    return sum(q ** (k * k) * zeta ** (2 * k) for k in ks)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass
class QuadratureSpec:
    """Contour + resolution: kind 'circle' (radius), 'rays' (offset delta,
    +-pi/3 rays of length ray_len), or 'segment'."""

    kind: str = "circle"
    radius: float = 1.5
    nodes: int = 512
    delta: float = 1.0
    ray_len: float = 6.0
    tol: float = 1e-10


def circle_nodes(r: float, n: int):
    """Nodes z and weights wt with (1/2 pi i) oint f dz ~= sum f(z) wt."""
    theta = 2 * np.pi * np.arange(n) / n
    z = r * np.exp(1j * theta)
    return z, z / n


def contour_integrate(f, spec: QuadratureSpec):
    """(1/2 pi i) times the contour integral of f, with a self-consistency
    estimate |I_N - I_2N|.  Doubles the node count until the estimate meets
    spec.tol (or 8x the starting resolution is reached).
    """
    n = spec.nodes

    def eval_at(m):
        if spec.kind == "circle":
            z, wt = circle_nodes(spec.radius, m)
        elif spec.kind == "rays":
            z, wt = ray_nodes(spec.delta, spec.ray_len, m)
        else:
            raise ValueError(f"unknown contour kind {spec.kind!r}")
        vals = f(z)
        if not np.all(np.isfinite(vals)):
            bad = z[~np.isfinite(vals)][:3]
            raise FloatingPointError(f"non-finite integrand at nodes {bad}")
        return complex(np.sum(vals * wt))

    prev = eval_at(n)
    for _ in range(3):
        cur = eval_at(2 * n)
        if abs(cur - prev) < spec.tol:
            return cur, abs(cur - prev)
        prev, n = cur, 2 * n
    return prev, abs(cur - prev)


def ray_nodes(delta: float, length: float, n: int):
    """Two rays leaving delta at angles -pi/3 (incoming) and +pi/3 (outgoing),
    as used for Airy-type integrands; weights absorb 1/(2 pi i)."""
    half = max(8, n // 2)
    x, wts = np.polynomial.legendre.leggauss(half)
    s = 0.5 * length * (x + 1)
    ws = 0.5 * length * wts
    up = np.exp(1j * np.pi / 3)
    dn = np.exp(-1j * np.pi / 3)
    z = np.concatenate([delta + s[::-1] * dn, delta + s * up])
    wt = np.concatenate([-ws[::-1] * dn, ws * up]) / (2j * np.pi)
    return z, wt


def gauss_legendre(a: float, b: float, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w
