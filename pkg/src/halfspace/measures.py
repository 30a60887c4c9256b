"""Signed probability mass functions on the integers.

Houses the Rogers-Szego shift law, the theta-weighted shift, the
Hall-Littlewood length and path-string laws, the free-boundary first-row law,
and exact convolution.  Masses may be Fractions (exact) or floats; signedness
is first class, and every truncated law carries a tail bound.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .partitions import (
    as_partition,
    conjugate,
    horizontal_strips_over,
    horizontal_strips_under,
    odd_parts,
    partitions_in_box,
    partitions_up_to,
    size,
    subdiagrams,
    vertical_strips_over,
)
from .symfunc import (
    Specialization,
    h_lambda_weight,
    hall_littlewood,
    hl_psi,
    pi_normalization,
    q_pochhammer,
    rogers_szego,
)
from .special import qpoch, theta3


@dataclass
class SignedPMF:
    """Finitely supported signed mass function on Z.

    tail_bound bounds the total absolute mass discarded by truncation.
    """

    mass: dict[int, object] = field(default_factory=dict)
    tail_bound: float = 0.0

    def __post_init__(self):
        self.mass = {int(k): v for k, v in self.mass.items() if v}

    @property
    def total(self):
        return sum(self.mass.values())

    def abs_total(self) -> float:
        return float(sum(abs(v) for v in self.mass.values()))

    def support(self) -> tuple[int, int]:
        if not self.mass:
            return (0, 0)
        ks = self.mass.keys()
        return (min(ks), max(ks))

    def __call__(self, k: int):
        return self.mass.get(k, 0)

    def cdf(self, s: int):
        return sum(v for k, v in self.mass.items() if k <= s)

    def shift(self, d: int) -> "SignedPMF":
        return SignedPMF({k + d: v for k, v in self.mass.items()}, self.tail_bound)

    def dilate(self, c: int) -> "SignedPMF":
        """Pushforward through k -> c*k."""
        return SignedPMF({c * k: v for k, v in self.mass.items()}, self.tail_bound)

    def convolve(self, other: "SignedPMF") -> "SignedPMF":
        out: dict[int, object] = {}
        for k1, v1 in self.mass.items():
            for k2, v2 in other.mass.items():
                k = k1 + k2
                s = out.get(k, 0) + v1 * v2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        tb = (self.tail_bound * other.abs_total()
              + other.tail_bound * self.abs_total()
              + self.tail_bound * other.tail_bound)
        return SignedPMF(out, tb)

    __mul__ = convolve

    def as_float(self) -> "SignedPMF":
        return SignedPMF({k: float(v) for k, v in self.mass.items()}, self.tail_bound)

    def to_csv(self, path):
        with open(path, "w", newline="") as f:
            wr = csv.writer(f)
            wr.writerow(["k", "mass"])
            for k in sorted(self.mass):
                wr.writerow([k, repr(float(self.mass[k]))])

    def to_json(self, path=None):
        lo, hi = self.support()
        doc = {
            "support": [lo, hi],
            "masses": {str(k): float(v) for k, v in sorted(self.mass.items())},
            "tail_bound": float(self.tail_bound),
        }
        if path is None:
            return json.dumps(doc)
        with open(path, "w") as f:
            json.dump(doc, f, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "SignedPMF":
        doc = json.loads(text)
        return cls({int(k): v for k, v in doc["masses"].items()}, doc["tail_bound"])


def point_mass(k: int = 0) -> SignedPMF:
    return SignedPMF({k: 1.0})


# ---------------------------------------------------------------------------
# shift laws
# ---------------------------------------------------------------------------

def rs_pmf(q: float, t: float, cap: int = 80) -> SignedPMF:
    """Rogers-Szego shift law: mass(k) = (q;q)_inf (-t;q)_inf q^k h_k(-t/q;q)/(q;q)_k.

    Signed when t > q; requires t < 1 for decay.
    """
    if not (0 <= q < 1):
        raise ValueError("need 0 <= q < 1")
    if t >= 1:
        raise ValueError("t >= 1: the shift law no longer decays")
    c = qpoch(q, q) * qpoch(-t, q)
    # q^n h_n(-t/q;q)/(q;q)_n = sum_{k+l=n} q^k/(q;q)_k (-t)^l/(q;q)_l,
    # a form that is stable down to q = 0.
    qq = [1.0]
    for j in range(1, cap + 1):
        qq.append(qq[-1] * (1.0 - q ** j))
    mass = {}
    for n in range(cap + 1):
        s = 0.0
        for k in range(n + 1):
            s += q ** k / qq[k] * (-t) ** (n - k) / qq[n - k]
        mass[n] = c * s
    # tail: |mass(k)| <= c (k+1) max(q,t)^k / (q;q)_inf^2 summed beyond cap
    m = max(q, t)
    qqinf = qpoch(q, q)
    if m > 0:
        head = abs(c) / qqinf ** 2
        tb = head * (m ** (cap + 1)) * ((cap + 2) / (1 - m) + m / (1 - m) ** 2)
    else:
        tb = 0.0
    return SignedPMF(mass, tb)


def rs_inverse_pmf(q: float, t: float, cap: int = 60) -> SignedPMF:
    """Convolutional inverse of rs_pmf: generating function
    (qz;q)_inf (-tz;q)_inf / ((q;q)_inf (-t;q)_inf).  Superexponential decay.
    """
    c = 1.0 / (qpoch(q, q) * qpoch(-t, q))
    mass = {}
    for n in range(cap + 1):
        s = 0.0
        for l in range(n + 1):
            m = n - l
            s += ((-1) ** l * q ** (l * (l + 1) // 2) / float(q_pochhammer(q, l))
                  * t ** m * q ** (m * (m - 1) // 2) / float(q_pochhammer(q, m)))
        mass[n] = c * s
    r = max(q, t)
    tb = abs(c) * 2 * r ** (cap + 1) * q ** (cap * (cap - 1) // 2) / max(1e-300, (1 - r)) if r > 0 else 0.0
    return SignedPMF(mass, tb)


def theta_pmf(zeta: float, q: float, cap: int = 24) -> SignedPMF:
    """Theta-weighted shift law on -cap..cap: mass(k) = q^{k^2} zeta^{2k} / theta3(zeta^2; q^2)."""
    if not (0 < q < 1) or zeta <= 0:
        raise ValueError("need 0 < q < 1 and zeta > 0")
    th = theta3(zeta ** 2, q ** 2).real
    mass = {k: q ** (k * k) * zeta ** (2 * k) / th for k in range(-cap, cap + 1)}
    r = q ** (2 * cap + 1) * max(zeta, 1 / zeta) ** 2
    tb = 2 * q ** ((cap + 1) ** 2) * max(zeta, 1 / zeta) ** (2 * cap + 2) / abs(th) / max(1e-12, 1 - r)
    return SignedPMF(mass, tb)


# ---------------------------------------------------------------------------
# half-space Hall-Littlewood laws
# ---------------------------------------------------------------------------

def _check_hl_regime(a, q, t, nu):
    if not all(0 < ai < 1 for ai in a):
        raise ValueError("rapidities must lie in (0,1)")
    if not (0 <= q < 1):
        raise ValueError("need 0 <= q < 1")
    if not (0 <= t < 1):
        raise ValueError("need 0 <= t < 1")
    if nu <= 0 or nu * t >= 1:
        raise ValueError("need nu > 0 and nu*t < 1")


def hl_length_pmf(a, q, t, nu, max_part: int = 30) -> SignedPMF:
    """Law of the partition length under the boundary-weighted HL measure,
    by exact enumeration over lam_1 <= max_part, l(lam) <= len(a).

    The truncation certificate is pi_normalization minus the truncated sum
    (exact in the positive regime, where all omitted terms are nonnegative).
    """
    a = tuple(a)
    _check_hl_regime(a, q, t, nu)
    pi = pi_normalization(a, q, t, nu)
    by_len: dict[int, object] = {}
    tot = None
    for lam in partitions_in_box(max_part, len(a)):
        wgt = h_lambda_weight(lam, q, t, nu) * hall_littlewood(lam, a, q)
        if not wgt:
            continue
        by_len[len(lam)] = by_len.get(len(lam), wgt * 0) + wgt
        tot = wgt if tot is None else tot + wgt
    tail = abs(pi - tot) / abs(pi)
    return SignedPMF({k: v / pi for k, v in by_len.items()}, float(tail))


def hl_pathstring_prob(a, q, t, nu, s, max_part: int = 30):
    """Probability that the HL process path string equals the binary word s.

    Sums boundary-weighted chains empty = lam^0 <= lam^1 <= ... <= lam^n with
    l(lam^i) - l(lam^(i-1)) = s_i over single-variable branchings.  Returns
    (value, tail_bound); exact when inputs are Fractions.
    """
    a = tuple(a)
    _check_hl_regime(a, q, t, nu)
    n = len(a)
    if len(s) != n:
        raise ValueError("path string length must match alphabet size")
    pi = pi_normalization(a, q, t, nu)
    zero = (a[0] ** 0) * 0

    frontier: dict[tuple, object] = {(): a[0] ** 0}
    for i, si in enumerate(s):
        nxt: dict[tuple, object] = {}
        for mu, wt in frontier.items():
            for lam in horizontal_strips_over(mu, max_part=max_part):
                if len(lam) - len(mu) != si:
                    continue
                psi = hl_psi(lam, mu, q)
                if not psi:
                    continue
                w2 = wt * psi * a[i] ** (size(lam) - size(mu))
                nxt[lam] = nxt.get(lam, zero) + w2
        frontier = nxt

    val = zero
    for lam, wt in frontier.items():
        val = val + wt * h_lambda_weight(lam, q, t, nu)
    val = val / pi

    # exact total-mass defect of the box truncation bounds each string's error
    full = zero
    for lam in partitions_in_box(max_part, n):
        w = h_lambda_weight(lam, q, t, nu) * hall_littlewood(lam, a, q)
        full = full + w
    tail = abs(pi - full) / abs(pi)
    return val, float(tail)


def hl_pathstring_pmf(a, q, t, nu, max_part: int = 30) -> dict[tuple, object]:
    """All 2^n path-string probabilities (shares one chain sweep)."""
    a = tuple(a)
    _check_hl_regime(a, q, t, nu)
    n = len(a)
    pi = pi_normalization(a, q, t, nu)
    zero = (a[0] ** 0) * 0
    frontier: dict[tuple, dict[tuple, object]] = {(): {(): a[0] ** 0}}
    for i in range(n):
        nxt: dict[tuple, dict[tuple, object]] = {}
        for string, states in frontier.items():
            for mu, wt in states.items():
                for lam in horizontal_strips_over(mu, max_part=max_part):
                    si = len(lam) - len(mu)
                    if si > 1:
                        continue
                    psi = hl_psi(lam, mu, q)
                    if not psi:
                        continue
                    w2 = wt * psi * a[i] ** (size(lam) - size(mu))
                    bucket = nxt.setdefault(string + (si,), {})
                    bucket[lam] = bucket.get(lam, zero) + w2
        frontier = nxt
    out = {}
    for string, states in frontier.items():
        val = zero
        for lam, wt in states.items():
            val = val + wt * h_lambda_weight(lam, q, t, nu)
        out[string] = val / pi
    return out


# ---------------------------------------------------------------------------
# free-boundary first-row law
# ---------------------------------------------------------------------------

def fbs_first_part_pmf(a, q, t, nu, weight_cap: int = 26, first_part_cap: int | None = None) -> SignedPMF:
    """Law of the first part under the free-boundary Schur measure built on
    the twisted alphabet of a = (a_1..a_n).

    mass(x) = (1/Phi) sum over lam with lam_1 = x, rho subseteq lam of
    gamma1^{o(rho')} gamma2^{o(lam')} q^{|rho|/2} s_{lam/rho}(a-hat), where
    gamma1 = 1/(nu sqrt(q)), gamma2 = -t nu, and Phi = Pi(a)/((q;q)(-t;q))_inf.

    The skew Schur factor is expanded as strip chains (dual letter a_i then
    ordinary letter -q a_i per variable), so the double sum becomes a
    transfer recursion over partitions of size <= weight_cap.  The tail bound
    is a measured-decay geometric extrapolation, not an a priori certificate.
    """
    a = tuple(float(ai) for ai in a)
    q, t, nu = float(q), float(t), float(nu)
    if not (0 < q < 1 and 0 <= t < 1 and nu > 0):
        raise ValueError("need 0 < q < 1, 0 <= t < 1, nu > 0")
    if 1 / nu >= 1 + 1e-12:
        raise ValueError("absolute convergence needs 1/nu <= 1")
    gamma1 = 1.0 / (nu * math.sqrt(q))
    gamma2 = -t * nu
    pcap = first_part_cap if first_part_cap is not None else weight_cap

    sq = math.sqrt(q)
    weights: dict[tuple, float] = {}
    for rho in partitions_up_to(weight_cap, max_part=pcap):
        weights[rho] = gamma1 ** odd_parts(conjugate(rho)) * sq ** size(rho)

    for ai in a:
        for vertical, letter in ((True, ai), (False, -q * ai)):
            nxt: dict[tuple, float] = {}
            for mu, wt in weights.items():
                if wt == 0.0:
                    continue
                gen = (vertical_strips_over(mu, max_size=weight_cap, max_part=pcap)
                       if vertical else
                       horizontal_strips_over(mu, max_part=pcap, max_size=weight_cap))
                for lam in gen:
                    d = size(lam) - size(mu)
                    nxt[lam] = nxt.get(lam, 0.0) + wt * letter ** d
            weights = nxt

    phi = float(pi_normalization(a, q, t, nu)) / (qpoch(q, q) * qpoch(-t, q))
    by_first: dict[int, float] = {}
    edge = 0.0
    for lam, wt in weights.items():
        v = wt * gamma2 ** odd_parts(conjugate(lam)) / phi
        x = lam[0] if lam else 0
        by_first[x] = by_first.get(x, 0.0) + v
        if size(lam) >= weight_cap - 1:
            edge += abs(v)
    # measured-decay extrapolation: mass near the cap, times a geometric factor
    ratio = max(max(a), q, 1 / nu if nu > 1 else 0.9)
    tb = edge * (1.0 + ratio / max(1e-9, 1 - ratio))
    return SignedPMF(by_first, tb)
