"""Acceptance criteria, one test per criterion, at the stated tolerances.

Each test prints a single pass/fail line.  Two sub-criteria of criterion 10
are asserted verbatim but are known to be unattainable for the defining
kernels (crossover drift 2/xi; orthogonal-family tail 1.94e-6 at s=6); they
are marked strict-xfail with the measured values printed, and the analysis
lives in the reviewer notes.
"""

import math
from fractions import Fraction as F

import numpy as np
import pytest
import scipy.stats

from halfspace.lattice import SixVertexParams, enumerate_height_joint, enumerate_sixvertex
from halfspace.limits import LimitKernel, F_limit
from halfspace.measures import (
    SignedPMF, fbs_first_part_pmf, hl_length_pmf, hl_pathstring_pmf,
    rs_pmf, theta_pmf,
)
from halfspace.pfaffian import HeightKernel, fredholm_pfaffian_cdf, qmoment_contour
from halfspace.symfunc import (
    littlewood_sum_truncated, pi_normalization, verify_schur_hl_identity,
)


def _report(criterion, ok, detail=""):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def _rational_points(seed, count):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        q = F(int(rng.integers(1, 5)), 10)
        t = F(int(rng.integers(1, 5)), 10)
        nu = F(int(rng.integers(12, 30)), 10)
        a = tuple(F(int(rng.integers(1, 5)), 10) for _ in range(3))
        if all(0 < x < F(1, 2) for x in a) and nu * t < 1:
            pts.append((q, t, nu, a))
    return pts


def test_criterion_1_sixvertex_hl_identity():
    """Path-string law from exact enumeration vs the boundary-weighted HL
    process law, n = 1..3, three rational parameter points, certified
    truncation tail <= 1e-10."""
    worst = 0.0
    for (q, t, nu, a) in _rational_points(101, 3):
        for n in (1, 2, 3):
            params = SixVertexParams(q, t, nu, a[:n])
            enum = enumerate_sixvertex(n, params)
            hl = hl_pathstring_pmf(a[:n], q, t, nu, max_part=26)
            tail = abs(float(pi_normalization(a[:n], q, t, nu)
                             - littlewood_sum_truncated(a[:n], q, t, nu, 26)))
            assert tail / float(pi_normalization(a[:n], q, t, nu)) <= 1e-10
            for s, pe in enum.items():
                worst = max(worst, abs(float(pe - hl[s])))
    _report(1, worst <= 1e-10, f"sup |enum - HL| = {worst:.2e}")


def test_criterion_2_symmetric_function_identity():
    """Coefficient-exact refined Littlewood identity, first row <= 3,
    two variables, x-degree <= 6."""
    reports = [verify_schur_hl_identity(k, 2, 6, 10) for k in range(4)]
    ok = all(r.ok for r in reports)
    _report(2, ok, "; ".join(str(r) for r in reports))


def test_criterion_3_littlewood_normalization():
    """Truncated boundary-weighted HL sum vs the product formula, moduli
    <= 1/2, caps 30, tolerance 1e-8."""
    q, t, nu = F(2, 5), F(1, 4), F(1)
    a = (F(1, 2), F(3, 10))
    val = littlewood_sum_truncated(a, q, t, nu, max_part=30)
    target = pi_normalization(a, q, t, nu)
    diff = abs(float(val - target))
    _report(3, diff < 1e-8, f"|sum - product| = {diff:.2e}")


def test_criterion_4_shift_identity():
    """cdf of (partition length + RS shift) vs the free-boundary first-row
    law at three parameter points, within 1e-8."""
    pts = [(0.15, 0.2, 3.0, (0.12, 0.1), 26),
           (0.18, 0.1, 3.2, (0.12, 0.08), 27),
           (0.1, 0.3, 2.6, (0.1, 0.14), 26)]
    worst = 0.0
    for (q, t, nu, a, cap) in pts:
        lhs = hl_length_pmf(a, q, t, nu, max_part=40).as_float()
        lhs = lhs.convolve(rs_pmf(q, t, cap=120))
        rhs = fbs_first_part_pmf(a, q, t, nu, weight_cap=cap)
        sup = max(abs(lhs.cdf(s) - rhs.cdf(s)) for s in range(-2, 40))
        worst = max(worst, sup)
    _report(4, worst <= 1e-8, f"sup cdf difference = {worst:.2e}")


def test_criterion_5_boundary_exchange_lemma():
    """Exact rational boundary-vertex exchange for all i,j in {0,1},
    n1,n2 <= 3, at three parameter points, plus a negative control."""
    from halfspace.lattice import verify_boundary_exchange
    pts = [(F(1, 3), F(1, 5), F(3), F(1, 7)),
           (F(2, 7), F(1, 4), F(2), F(2, 9)),
           (F(1, 2), F(1, 6), F(5, 4), F(1, 3))]
    ok = all(verify_boundary_exchange(p, n_cap=3).ok for p in pts)
    neg = verify_boundary_exchange(pts[0], n_cap=1, perturb=F(1, 997))
    _report(5, ok and not neg.ok,
            f"exchange exact at 3 points; negative control fails: {not neg.ok}")


def test_criterion_6_pfaffian_formula_vs_enumeration():
    """Window Fredholm Pfaffian vs enumeration * RS-shift * theta-shift at
    n = 2, nu = 2, across the support bulk, within 1e-6.  This test also
    pins the half-integer lattice convention."""
    q, t, nu, a, zeta = 0.3, 0.2, 2.0, 0.4, 0.6
    params = SixVertexParams(F(3, 10), F(1, 5), F(2), (F(2, 5),) * 2)
    hlaw = {}
    for s, p in enumerate_sixvertex(2, params).items():
        hlaw[sum(s)] = hlaw.get(sum(s), F(0)) + p
    oracle = SignedPMF({k: float(v) for k, v in hlaw.items()})
    oracle = oracle.convolve(rs_pmf(q, t, cap=110))
    oracle = oracle.convolve(theta_pmf(zeta, q, cap=14).dilate(2))
    kern = HeightKernel("sixvertex", q=q, t=t, nu=nu, zeta=zeta, n=2, a=a, nodes=384)
    worst = 0.0
    for s in range(-8, 15):
        val, _ = fredholm_pfaffian_cdf(kern, s)
        worst = max(worst, abs(val - oracle.cdf(s)))
    _report(6, worst < 1e-6, f"sup |Pf - oracle| = {worst:.2e} (shift = {kern.shift})")


def test_criterion_7_asep_pfaffian_vs_monte_carlo():
    """Pfaffian current law vs 1e6-sample Monte Carlo at tau = 20, five grid
    points, within 3 binomial standard errors; one nu > 1 and one nu = 1."""
    from halfspace.asep import mc_cdf, rates_from_params
    q, tau, zeta, nsamp = 0.4, 20.0, 0.6, 1_000_000
    ok = True
    detail = []
    for (t, nu) in [(0.3, 1.5), (0.4, 1.0)]:
        alpha, beta, _ = rates_from_params(q, t, nu)
        r = mc_cdf(q, alpha, beta, tau, nsamp, seed=11)
        shift = rs_pmf(q, t, cap=100).convolve(theta_pmf(zeta, q, cap=12).dilate(2))
        pmf = np.diff(np.concatenate([[0.0], r["cdf"]]))
        base = SignedPMF({int(s): float(p) for s, p in zip(r["s"], pmf)})
        mc = base.convolve(shift)
        kern = HeightKernel("asep", q=q, t=t, nu=nu, zeta=zeta, tau=tau, nodes=384)
        for s in (-6, -4, -2, 0, 2):
            pf, _ = fredholm_pfaffian_cdf(kern, s)
            mcv = mc.cdf(s)
            se = math.sqrt(max(mcv * (1 - mcv), 1e-12) / nsamp)
            ok &= abs(pf - mcv) <= 3 * se
            detail.append(f"nu={nu} s={s}: {abs(pf - mcv) / se:.2f}se")
    _report(7, ok, "; ".join(detail))


def test_criterion_8_qmoment_formula():
    """Nested contour q-moments at n = m = 2, k = 1, 2, vs enumeration."""
    qf = F(3, 10)
    params = SixVertexParams(qf, F(1, 4), F(3, 2), (F(1, 5), F(7, 20)))

    def h22(top):
        return sum(top[x][1] for x in range(2))

    worst = 0.0
    for k in (1, 2):
        exact = float(enumerate_height_joint(2, params,
                                             lambda top, k=k: qf ** (-k * h22(top))))
        got = qmoment_contour(2, 2, k, 0.3, 0.25, 1.5, (0.2, 0.35), nodes=768)
        worst = max(worst, abs(got - exact))
    _report(8, worst < 1e-7, f"max |contour - enumeration| = {worst:.2e}")


def test_criterion_9_residue_structure():
    """Numerical z-residues at nu and nu/q match A_k(x) B(y) within 1e-7;
    S_k skew within 1e-9."""
    q, t, nu, a, zeta = 0.3, 0.2, 0.5, 0.4, 0.6
    kern = HeightKernel("sixvertex", q=q, t=t, nu=nu, zeta=zeta, n=2, a=a, nodes=384)
    rp = kern.radii[1]

    def z_residue(x, y, z0, rho, nz=512, nw=1024):
        tz = 2 * np.pi * (np.arange(nz) + 0.5) / nz
        z = z0 + rho * np.exp(1j * tz)
        wz = rho * np.exp(1j * tz) / nz
        tw = 2 * np.pi * (np.arange(nw) + 0.5) / nw
        w = rp * np.exp(1j * tw)
        ww = w / nw
        zx = z ** (-(x + kern.shift) - 1.5) * kern.F(z) * wz
        wy = w ** (-(y + kern.shift) - 2.5) * kern.F(w) * ww
        return float(((1 - kern.gamma2) ** (-2)
                      * (zx @ kern.K_cross(z[:, None], w[None, :]) @ wy)).real)

    worst = 0.0
    for k, rho in ((0, 0.02), (1, 0.05)):
        z0 = q ** (-k) * nu
        for (x, y) in [(1, 2), (3, 1), (0, 4)]:
            res = z_residue(x, y, z0, rho)
            ab = float(kern.A_func(np.array([x]), k)[0]
                       * kern.B_func(np.array([y]))[0].real)
            worst = max(worst, abs(res - ab) / max(abs(ab), 1e-30))
    S = kern.S_func(np.arange(0, 8), np.arange(0, 8), 1)
    skew = float(np.max(np.abs(S + S.T)))
    _report(9, worst < 1e-7 and skew < 1e-9,
            f"max residue rel err = {worst:.2e}, S skewness = {skew:.2e}")


def test_criterion_10_limit_distribution_properties():
    """Monotonicity, upper tail for the symplectic family, crossover-to-GSE
    far from the bulk, and Nystrom refinement stability."""
    grid = np.arange(-6.0, 4.5, 0.5)
    ok = True
    for fam in ("gse", "goe"):
        spec = LimitKernel(family=fam)
        vals = [F_limit(s, spec) for s in grid]
        ok &= all(b > a for a, b in zip(vals, vals[1:]))
    gse = LimitKernel(family="gse")
    ok &= F_limit(6.0, gse) > 1 - 1e-6
    ok &= abs(gse.cdf(-1.0) - gse.cdf(-1.0, nystrom=96)) < 1e-7
    goe = LimitKernel(family="goe")
    ok &= abs(goe.cdf(-1.0) - goe.cdf(-1.0, nystrom=96)) < 1e-7
    cr = LimitKernel(family="cross", xi=10.0)
    ok &= abs(F_limit(2.0, cr) - F_limit(2.0, gse)) < 1e-4
    _report(10, ok, "monotone, GSE tail, refinement, cross@xi=10 at s=2")


@pytest.mark.xfail(strict=True,
                   reason="spec defect: F_cross(s;xi) = F_GSE(s - 2/xi) + O(xi^-3) "
                          "for the defining kernels, so the distance at s=-2, xi=10 "
                          "is ~3.8e-2, not 1e-4 (see reviewer notes)")
def test_criterion_10_crossover_tolerance_as_stated():
    gse = LimitKernel(family="gse")
    cr = LimitKernel(family="cross", xi=10.0)
    diffs = {s: abs(F_limit(s, cr) - F_limit(s, gse)) for s in (-2.0, 0.0, 2.0)}
    print(f"[criterion 10b] FAIL (expected): |F_cross(.;10) - F_GSE| = {diffs}")
    assert all(d < 1e-4 for d in diffs.values())


@pytest.mark.xfail(strict=True,
                   reason="spec defect: 1 - F_GOE(6) = 1.94e-6 is the true value of "
                          "the defining formula (classical tail asymptotic gives "
                          "2.04e-6), so F(6) > 1 - 1e-6 cannot hold for GOE")
def test_criterion_10_goe_tail_as_stated():
    goe = LimitKernel(family="goe")
    val = F_limit(6.0, goe)
    print(f"[criterion 10c] FAIL (expected): 1 - F_GOE(6) = {1 - val:.3e}")
    assert val > 1 - 1e-6


def test_criterion_11_convergence_study():
    """Rescaled six-vertex Pfaffian cdfs at n = 100, 200, 400: sup-distance
    to F_GSE (nu=2) and F_GOE (nu=1) decreasing; Gaussian regime (nu=0.5)
    rescaled by its mean/variance approaches the standard normal."""
    q, t, a, zeta = 0.3, 0.2, 0.4, 0.6
    us = [-2.0, -1.0, 0.0, 1.0]
    sizes = (100, 200, 400)
    table = {}
    for nu, ref_name in ((2.0, "gse"), (1.0, "goe"), (0.5, "gaussian")):
        if ref_name == "gaussian":
            ref = scipy.stats.norm.cdf
        else:
            spec = LimitKernel(family=ref_name)
            ref = lambda u, spec=spec: F_limit(u, spec)
        dists = []
        for n in sizes:
            if nu >= 1:
                mu = 2 * a / (1 + a)
                sig = (a * (1 - a)) ** (1 / 3) / (1 + a) * n ** (1 / 3)
            else:
                mu = (2 * a * a + a * (nu + 1 / nu)) / ((1 + a * nu) * (1 + a / nu))
                sig = math.sqrt(a * (1 - a * a) * (1 / nu - nu)) \
                    / ((1 + a * nu) * (1 + a / nu)) * math.sqrt(n)
            kern = HeightKernel("sixvertex", q=q, t=t, nu=nu, zeta=zeta, n=n,
                                a=a, nodes=512)
            sup = 0.0
            for u in us:
                s = int(round(mu * n + sig * u))
                val, _ = fredholm_pfaffian_cdf(kern, s)
                sup = max(sup, abs(val - ref((s - mu * n) / sig)))
            dists.append(sup)
        table[ref_name] = dists
        print(f"   nu={nu} -> {ref_name}: sup distances {['%.4f' % d for d in dists]}")
    ok = all(d2 < d1 for row in table.values() for d1, d2 in zip(row, row[1:]))
    _report(11, ok, f"table = {table}")
