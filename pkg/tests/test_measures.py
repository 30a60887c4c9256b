import json
from fractions import Fraction as F

import numpy as np
import pytest

from halfspace.measures import (
    SignedPMF, fbs_first_part_pmf, hl_length_pmf, hl_pathstring_pmf,
    hl_pathstring_prob, point_mass, rs_inverse_pmf, rs_pmf, theta_pmf,
)
from halfspace.symfunc import q_pochhammer, rogers_szego
from halfspace.special import qpoch


def test_signedpmf_convolution_basics():
    p = SignedPMF({0: 0.5, 2: 0.25, 5: 0.25}, tail_bound=1e-12)
    assert p.convolve(point_mass(0)).mass == p.mass
    r = SignedPMF({-1: 0.5, 1: 0.5})
    assert p.convolve(r).mass == r.convolve(p).mass
    tb = p.convolve(r).tail_bound
    assert tb == pytest.approx(1e-12 * r.abs_total(), rel=1e-6)


def test_signedpmf_serialization_roundtrip(tmp_path):
    p = SignedPMF({-2: -0.25, 0: 1.0, 3: 0.25}, tail_bound=1e-9)
    doc = p.to_json()
    q = SignedPMF.from_json(doc)
    assert q.mass == p.mass and q.tail_bound == p.tail_bound
    p.to_csv(tmp_path / "m.csv")
    lines = (tmp_path / "m.csv").read_text().strip().splitlines()
    assert lines[0] == "k,mass" and len(lines) == 4


def test_rs_pmf_normalization_and_signs():
    for (q, t) in [(0.4, 0.2), (0.5, 0.1), (0.3, 0.55), (0.0, 0.4)]:
        p = rs_pmf(q, t, cap=100)
        assert abs(p.total - 1) < 1e-12
        if t <= q:
            assert min(p.mass.values()) >= 0
    assert min(rs_pmf(0.3, 0.55).mass.values()) < 0  # signed above t = q
    with pytest.raises(ValueError, match="decays"):
        rs_pmf(0.4, 1.0)


def test_rs_mass_zero_and_defining_formula():
    q, t = 0.45, 0.25
    p = rs_pmf(q, t, cap=60)
    assert p(0) == pytest.approx(qpoch(q, q) * qpoch(-t, q), rel=1e-13)
    c = qpoch(q, q) * qpoch(-t, q)
    for k in (1, 3, 7):
        direct = c * q ** k * rogers_szego(k, -t / q, q) / float(q_pochhammer(q, k))
        assert p(k) == pytest.approx(direct, rel=1e-12)


def test_rs_factorization_lemma_exact():
    q, t = F(2, 7), F(3, 5)
    for n in range(13):
        lhs = q ** n * rogers_szego(n, -t / q, q) / q_pochhammer(q, n)
        rhs = sum(q ** k / q_pochhammer(q, k) * (-t) ** (n - k) / q_pochhammer(q, n - k)
                  for k in range(n + 1))
        assert lhs == rhs


def test_convolutional_inverse_lemma_exact():
    q, t = F(2, 7), F(3, 5)
    for n in range(13):
        val = sum((-t) ** k / q_pochhammer(q, k)
                  * t ** l * q ** (l * (l - 1) // 2) / q_pochhammer(q, l)
                  for k in range(n + 1) for l in [n - k])
        assert val == (1 if n == 0 else 0)


def test_rs_inverse_convolution():
    for (q, t) in [(0.4, 0.2), (0.3, 0.55)]:
        d = rs_pmf(q, t, cap=90).convolve(rs_inverse_pmf(q, t, cap=60))
        for k in range(-5, 70):
            assert d(k) == pytest.approx(1.0 if k == 0 else 0.0, abs=1e-13)


def test_signed_robustness_roundtrip():
    q, t = 0.3, 0.55
    test_law = SignedPMF({-1: 0.25, 0: 0.5, 4: 0.25})
    back = test_law.convolve(rs_pmf(q, t, cap=90)).convolve(rs_inverse_pmf(q, t, cap=70))
    for k in range(-10, 30):
        assert back(k) == pytest.approx(test_law(k), abs=1e-11)


def test_theta_pmf():
    p = theta_pmf(0.6, 0.5, cap=20)
    assert abs(p.total - 1) < 1e-12
    sym = theta_pmf(1.0 - 1e-12, 0.5, cap=10)
    for k in range(1, 8):
        assert sym(k) == pytest.approx(sym(-k), rel=1e-9)
    zeta, q = 0.7, 0.45
    p = theta_pmf(zeta, q, cap=15)
    for k in range(-5, 5):
        assert p(k + 1) / p(k) == pytest.approx(q ** (2 * k + 1) * zeta ** 2, rel=1e-12)


def test_hl_length_pmf_single_letter():
    q, t, nu, a = F(1, 3), F(1, 4), F(2), F(1, 5)
    p = hl_length_pmf((a,), q, t, nu, max_part=40)
    assert p(0) == (1 - a ** 2) / ((1 - a * nu * t) * (1 + a / nu))
    assert abs(float(p.total) - 1) < 1e-12


def test_hl_length_pmf_empty_alphabet():
    p = hl_length_pmf((), 0.3, 0.2, 2.0)
    assert p.mass == {0: 1.0}


def test_hl_pathstring_total_and_single():
    q, t, nu = F(1, 3), F(1, 4), F(2)
    a = (F(1, 5), F(2, 7))
    pmf = hl_pathstring_pmf(a, q, t, nu, max_part=30)
    assert abs(float(sum(pmf.values())) - 1) < 1e-10
    v, tail = hl_pathstring_prob((F(1, 5),), q, t, nu, (0,), max_part=35)
    assert v == (1 - F(1, 5) ** 2) / ((1 - F(1, 5) * nu * t) * (1 + F(1, 5) / nu))
    assert tail < 1e-10


def test_fbs_total_mass():
    f = fbs_first_part_pmf((0.15, 0.1), 0.2, 0.2, 2.5, weight_cap=22)
    assert abs(f.total - 1) < 5 * max(f.tail_bound, 1e-9)


def test_shift_identity_one_point():
    # cdf of (partition length + RS shift) against the free-boundary first row
    q, t, nu = 0.15, 0.2, 3.0
    a = (0.12, 0.1)
    lhs = hl_length_pmf(a, q, t, nu, max_part=40).as_float().convolve(rs_pmf(q, t, cap=110))
    rhs = fbs_first_part_pmf(a, q, t, nu, weight_cap=24)
    sup = max(abs(lhs.cdf(s) - rhs.cdf(s)) for s in range(-2, 35))
    assert sup < 5e-8
