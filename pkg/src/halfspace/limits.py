"""Limiting edge distributions as Fredholm Pfaffians on L^2(s, infinity).

The scalar kernels are double contour integrals over rays leaving delta > 0
at angles +-pi/3,

    k(u,v) = (1/4) (2 pi i)^-2 oint oint m(alpha, beta)
             e^(alpha^3/3 - alpha u + beta^3/3 - beta v) dalpha dbeta,

with coupling m = (alpha-beta)/(alpha beta (alpha+beta)) for the symplectic
(GSE) family, times (xi+alpha)(xi+beta)/((xi-alpha)(xi-beta)) for the
crossover family at boundary parameter xi (delta < xi), and, at the
orthogonal (GOE) point, plus the rank-one boundary term b(u) - b(v) with
b(u) = (2 pi i)^-1 oint e^(alpha^3/3 - alpha u)/(2 alpha) dalpha.

Evaluation is Nystrom: Gauss-Legendre nodes on (s, s+L), kernel blocks
[[k, -dv k], [-du k, du dv k]] symmetrized with sqrt-weights, and one dense
Pfaffian.  Derivative entries insert (-alpha)/(-beta) factors; nothing is
finite-differenced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pfaffian import pfaffian
from .special import gauss_legendre

__all__ = ["LimitKernel", "k_limit", "F_limit", "limit_table"]


@dataclass
class LimitKernel:
    """family 'gse', 'goe', or 'cross' (with boundary parameter xi)."""

    family: str = "gse"
    xi: float = float("inf")
    delta: float = 1.0
    ray_len: float = 7.0
    contour_nodes: int = 96
    domain_len: float = 12.0
    nystrom_nodes: int = 48

    def __post_init__(self):
        if self.family not in ("gse", "goe", "cross"):
            raise ValueError("family must be gse, goe, or cross")
        if self.family == "cross":
            if not (0 < self.xi < float("inf")):
                raise ValueError("crossover family needs xi in (0, inf)")
            if self.delta >= self.xi:
                self.delta = 0.5 * self.xi
        self._nodes_cache = {}

    # -- contours -------------------------------------------------------------

    def _ray_nodes(self, n):
        if n in self._nodes_cache:
            return self._nodes_cache[n]
        x, w = gauss_legendre(0.0, self.ray_len, n)
        up = np.exp(1j * np.pi / 3)
        dn = np.exp(-1j * np.pi / 3)
        al = np.concatenate([self.delta + x[::-1] * dn, self.delta + x * up])
        wt = np.concatenate([-w[::-1] * dn, w * up]) / (2j * np.pi)
        self._nodes_cache[n] = (al, wt)
        return al, wt

    def _coupling(self, al):
        """m(alpha_i, beta_j) matrix without the exponential factors."""
        A, B = al[:, None], al[None, :]
        m = (A - B) / (A * B * (A + B))
        if self.family == "cross":
            x = self.xi
            m = m * (x + A) * (x + B) / ((x - A) * (x - B))
        return m

    # -- kernel entries ---------------------------------------------------------

    def k_entries(self, us, vs, n=None):
        """k, dv k, du k, du dv k on the grid us x vs (vectorized)."""
        n = n or self.contour_nodes
        al, wt = self._ray_nodes(n)
        m = self._coupling(al) * 0.25
        eu = np.exp(al[None, :] ** 3 / 3 - al[None, :] * np.asarray(us)[:, None]) * wt[None, :]
        ev = np.exp(al[None, :] ** 3 / 3 - al[None, :] * np.asarray(vs)[:, None]) * wt[None, :]
        eud = eu * (-al[None, :])
        evd = ev * (-al[None, :])
        k = (eu @ m @ ev.T)
        kdv = (eu @ m @ evd.T)
        kdu = (eud @ m @ ev.T)
        kdud = (eud @ m @ evd.T)
        out = []
        for z in (k, kdv, kdu, kdud):
            if np.max(np.abs(z.imag)) > 1e-10 * max(1.0, np.max(np.abs(z.real))):
                raise FloatingPointError("limit kernel lost realness")
            out.append(z.real)
        if self.family == "goe":
            # k_goe = k - b(u) + b(v): the boundary term enters with the sign
            # produced by the xi->0 pole crossing of the crossover kernel
            # (upward contours pass the poles clockwise); this convention is
            # pinned by the lattice model and reproduces the classical
            # orthogonal-ensemble values, e.g. F(0) = 0.83191.
            b, bp = self._b_and_deriv(us, n)
            c, cp = (b, bp) if np.array_equal(us, vs) else self._b_and_deriv(vs, n)
            out[0] = out[0] - b[:, None] + c[None, :]
            out[1] = out[1] + cp[None, :]
            out[2] = out[2] - bp[:, None]
        return out

    def _b_and_deriv(self, us, n):
        al, wt = self._ray_nodes(n)
        e = np.exp(al[None, :] ** 3 / 3 - al[None, :] * np.asarray(us)[:, None]) * wt[None, :]
        b = (e / (2 * al[None, :])).sum(axis=1)
        bp = (e * (-al[None, :]) / (2 * al[None, :])).sum(axis=1)
        return b.real, bp.real

    # -- Fredholm Pfaffian -----------------------------------------------------

    def cdf(self, s: float, nystrom=None, contour_nodes=None):
        m = nystrom or self.nystrom_nodes
        us, ws = gauss_legendre(s, s + self.domain_len, m)
        k, kdv, kdu, kdud = self.k_entries(us, us, n=contour_nodes)
        root = np.sqrt(ws)
        W = np.outer(root, root)
        K = np.empty((2 * m, 2 * m))
        K[0::2, 0::2] = k * W
        K[0::2, 1::2] = -kdv * W
        K[1::2, 0::2] = -kdu * W
        K[1::2, 1::2] = kdud * W
        K = (K - K.T) / 2
        X = -K
        X[0::2, 1::2] += np.eye(m)
        X[1::2, 0::2] -= np.eye(m)
        return pfaffian(X)


def k_limit(u, v, spec: LimitKernel):
    """Scalar kernel value k(u,v) (skew; zero on the diagonal)."""
    k, _, _, _ = spec.k_entries(np.atleast_1d(float(u)), np.atleast_1d(float(v)))
    return float(k[0, 0])


def F_limit(s: float, spec: LimitKernel) -> float:
    """Distribution function at s via the Nystrom Fredholm Pfaffian."""
    return float(spec.cdf(s))


def limit_table(s_values, families=("gse", "goe"), xis=()):
    """Columns of F values on a grid; families plus crossover at each xi."""
    cols = {}
    for fam in families:
        spec = LimitKernel(family=fam)
        cols[fam] = [F_limit(s, spec) for s in s_values]
    for xi in xis:
        spec = LimitKernel(family="cross", xi=xi)
        cols[f"cross@{xi:g}"] = [F_limit(s, spec) for s in s_values]
    return cols
